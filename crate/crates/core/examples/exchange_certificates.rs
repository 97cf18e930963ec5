//! Every element of a finite exchange ring has an idempotent `e` in `aR`
//! with `1 - e` in `(1 - a)R`; print the witnesses for one ring.
use gecert::exchange::exchange_idempotent;
use gecert::Ring;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "UT2(F2)".into());
    let r = Ring::preset(&name).unwrap();
    println!("{:>12} {:>12} {:>12} {:>12}", "a", "e", "x", "y");
    for a in r.elements() {
        let c = exchange_idempotent(&r, a).unwrap();
        assert!(c.replays(&r));
        println!("{:>12} {:>12} {:>12} {:>12}", r.render(c.a), r.render(c.e), r.render(c.x), r.render(c.y));
    }
    println!("e = a x and 1 - e = (1 - a) y hold for all {} elements", r.size());
}
