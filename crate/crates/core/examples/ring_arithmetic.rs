//! Build rings from presets and from a structure-constant file, then do
//! some arithmetic.
use gecert::format::{parse_ring_spec, write_ring_spec};
use gecert::Ring;

fn main() {
    let z6 = Ring::preset("Z/6").unwrap();
    let (two, three) = (z6.int(2), z6.int(3));
    println!("in Z/6: 2 * 3 = {}, 2 + 3 = {}", z6.render(z6.mul(two, three)), z6.render(z6.add(two, three)));
    let idem: Vec<String> = z6.idempotents().iter().map(|&e| z6.render(e)).collect();
    println!("idempotents of Z/6: {}", idem.join(" "));

    let m2 = Ring::preset("M2(F2)").unwrap();
    println!("M2(F2) has {} elements, {} units, id {}", m2.size(), m2.units().len(), m2.id());

    // The same ring written out and read back keeps its fingerprint.
    let text = write_ring_spec(m2.spec());
    let again = Ring::load(parse_ring_spec(&text).unwrap()).unwrap();
    assert_eq!(again.id(), m2.id());
    print!("{text}");

    let ex = Ring::preset("Ex2.12(F2)").unwrap();
    let (x1, x2) = (ex.basis(1), ex.basis(2));
    println!("in {}: x1 x2 = {}, (1 + x1)^-1 = {}", ex.name(), ex.render(ex.mul(x1, x2)),
        ex.render(ex.is_unit(ex.add(ex.one(), x1)).unwrap()));
}
