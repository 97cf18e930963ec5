//! A singular regular matrix needs column operations as well as row
//! operations to become diagonal.
use gecert::diagonalize::{diagonalize_regular, elementary_group, SearchBudget};
use gecert::matrix::Mat;
use gecert::Ring;

fn main() {
    let f2 = Ring::preset("F2").unwrap();
    let a = Mat::from_ints(&f2, 2, 2, &[1, 1, 0, 0]);
    let group = elementary_group(&f2, 2, 64).unwrap();
    let row_only = group.iter().filter(|e| e.mul(&f2, &a).unwrap().is_diagonal()).count();
    println!("{} elementary matrices over F2, {row_only} make E A diagonal", group.len());

    let d = diagonalize_regular(&f2, &a, &SearchBudget::default()).unwrap().unwrap();
    assert!(d.replays(&f2));
    println!("{} row ops and {} column ops give\n{}", d.left.len(), d.right.len(), d.diagonal.render(&f2));

    let z6 = Ring::preset("Z/6").unwrap();
    let b = Mat::from_ints(&z6, 2, 2, &[2, 3, 4, 0]);
    let d = diagonalize_regular(&z6, &b, &SearchBudget::default()).unwrap().unwrap();
    println!("over Z/6:\n{}\nbecomes\n{}", b.render(&z6), d.diagonal.render(&z6));
}
