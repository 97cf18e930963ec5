//! Write an invertible matrix as elementary operations times a diagonal
//! matrix, then replay the certificate.
use gecert::diagonalize::ge_diagonalize;
use gecert::format::{verify_certificate, write_certificate, Certificate};
use gecert::matrix::Mat;
use gecert::Ring;

fn main() {
    let r = Ring::preset("Z/6").unwrap();
    let a = Mat::from_ints(&r, 2, 2, &[2, 3, 3, 1]);
    let d = ge_diagonalize(&r, &a).unwrap();
    println!("{} left ops, {} right ops", d.left.len(), d.right.len());
    println!("diagonal:\n{}", d.diagonal.render(&r));
    assert!(d.replay_check(&r).ok());

    let short = d.concentrate(&r);
    println!("concentrated diagonal:\n{}", short.diagonal.render(&r));

    let text = write_certificate(&r, &Certificate::Ge(d));
    print!("{text}");
    assert!(matches!(verify_certificate(&text, &r), Ok(Ok(_))));
}
