//! Classify the small projective modules of a ring and test the
//! cancellation properties on them.
use gecert::oracle::{
    check_generator_cancellation, check_separative, check_stable_rank_one, enumerate_projective_classes, IsoBudget,
};
use gecert::Ring;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "Z/6".into());
    let r = Ring::preset(&name).unwrap();
    let budget = IsoBudget::default();
    let table = enumerate_projective_classes(&r, 2, &budget).unwrap();
    print!("{table}");
    for v in [
        check_stable_rank_one(&r).unwrap(),
        check_separative(&r, &table, &budget),
        check_generator_cancellation(&r, &table, &budget),
    ] {
        println!("{v}\n");
    }
}
