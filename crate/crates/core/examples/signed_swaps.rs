//! Three transvections swap two rows up to a sign.
use gecert::matrix::{signed_swap_transcript, Mat, Side};
use gecert::Ring;

fn main() {
    for n in [2, 3, 5, 6] {
        let r = Ring::preset(&format!("Z/{n}")).unwrap();
        let t = signed_swap_transcript(&r, 2, 2, 0, 1, Side::Row).unwrap();
        let out = t.apply(&r, &Mat::identity(&r, 2)).unwrap();
        println!("Z/{n}:");
        print!("{}", gecert::format::write_transcript(&r, &t));
        println!("{}\n", out.render(&r));
    }
}
