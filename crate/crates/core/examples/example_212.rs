//! Over `F2[x1..x4]/(x1..x4)^2` the matrix `[[x1, x2], [x3, x4]]` cannot
//! be diagonalized: elementary operations keep the four nilpotent parts
//! linearly independent, so no entry ever becomes zero.
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gecert::matrix::{ElementaryOp, Mat};
use gecert::oracle::independence_invariant;
use gecert::Ring;

fn main() {
    let r = Ring::preset("Ex2.12(F2)").unwrap();
    let mut a = Mat::new(&r, 2, 2, (1..=4).map(|i| r.basis(i)).collect()).unwrap();
    println!("start:\n{}", a.render(&r));
    let mut rng = ChaCha8Rng::seed_from_u64(212);
    for step in 1..=10 {
        let (i, j) = if rng.gen() { (0, 1) } else { (1, 0) };
        let c = r.element_at(rng.gen_range(0..r.size()));
        let op = if rng.gen() { ElementaryOp::row(i, j, c) } else { ElementaryOp::col(i, j, c) };
        op.apply(&r, &mut a).unwrap();
        println!("step {step}, independent: {}", independence_invariant(&r, &a).unwrap());
    }
    println!("end:\n{}", a.render(&r));
}
