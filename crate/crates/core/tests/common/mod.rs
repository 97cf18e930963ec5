//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use gecert::matrix::Mat;
use gecert::{Element, Ring};

/// Every `n x n` matrix over `ring`, in canonical order.
pub fn all_matrices(ring: &Ring, n: usize) -> impl Iterator<Item = Mat> + '_ {
    let s = ring.size() as u64;
    let total = s.pow((n * n) as u32);
    (0..total).map(move |mut code| {
        let mut entries = vec![ring.zero(); n * n];
        for slot in (0..n * n).rev() {
            entries[slot] = ring.element_at((code % s) as usize);
            code /= s;
        }
        Mat::new(ring, n, n, entries).unwrap()
    })
}

/// `ad - bc`, meaningful over commutative rings.
pub fn det2(ring: &Ring, m: &Mat) -> Element {
    ring.sub(ring.mul(m.get(0, 0), m.get(1, 1)), ring.mul(m.get(0, 1), m.get(1, 0)))
}

/// Over a commutative ring a matrix is invertible exactly when its
/// determinant is a unit.
pub fn invertible_commutative(ring: &Ring, m: &Mat) -> bool {
    let d = det2(ring, m);
    ring.elements().any(|y| ring.mul(d, y) == ring.one())
}

/// Over `Ex2.12(F2)` (a local ring with residue field `F2`, scalar part in
/// coordinate 0) a 2x2 matrix is invertible exactly when its scalar part
/// is invertible over `F2`.
pub fn invertible_ex212(ring: &Ring, m: &Mat) -> bool {
    let s = |i, j| ring.coords(m.get(i, j))[0];
    (s(0, 0) * s(1, 1) + s(0, 1) * s(1, 0)) % 2 == 1
}

/// `{ sum g_i r_i }` by closure over all multiples.
pub fn right_ideal(ring: &Ring, gens: &[Element]) -> HashSet<Element> {
    let mut out: HashSet<Element> = HashSet::from([ring.zero()]);
    loop {
        let mut grew = false;
        let current: Vec<Element> = out.iter().copied().collect();
        for x in current {
            for &g in gens {
                for r in ring.elements() {
                    if out.insert(ring.add(x, ring.mul(g, r))) {
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return out;
        }
    }
}

/// Byte offsets of coefficient digits in the operation lines of a
/// certificate.
pub fn coefficient_bytes(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.starts_with("row ") || line.starts_with("col ") {
            // side, target, source, then the coefficient up to the checkpoint.
            let mut spaces = 0;
            let end = line.trim_end().rfind(' ').unwrap();
            for (i, b) in line.bytes().enumerate() {
                if b == b' ' {
                    spaces += 1;
                } else if spaces >= 3 && i < end && b.is_ascii_digit() {
                    out.push(offset + i);
                }
            }
        }
        offset += line.len();
    }
    out
}
