//! Named ring constructions.
//!
//! Grammar of preset names:
//!
//! ```text
//! ring   := factor (('*' | '×') factor)*
//! factor := 'Z/' n | 'F' q | 'M' k '(' ring ')' | 'UT' k '(' ring ')'
//!         | 'Ex2.12(' ring ')' | '(' ring ')'
//! ```
//!
//! `F q` is the field with `q = p^k` elements, presented over `Z/p` with
//! basis `1, x, ..., x^(k-1)` modulo the first irreducible monic polynomial
//! of degree `k` (coefficient vectors enumerated as base-`p` numerals).
//! `Ex2.12(S)` is `S[x1, x2, x3, x4] / (x1, x2, x3, x4)^2` with basis
//! `1, a1, a2, a3, a4` over the basis of `S`.

use super::{RingError, RingSpec};

/// Parse a preset name into its structure constants.
pub fn spec(name: &str) -> Result<RingSpec, RingError> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = Parser { src: &compact, pos: 0 };
    let spec = parser.ring().ok_or_else(|| RingError::UnknownPreset(name.to_string()))?;
    if parser.pos != compact.len() {
        return Err(RingError::UnknownPreset(name.to_string()));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<u64> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return None;
        }
        self.pos += digits.len();
        digits.parse().ok()
    }

    fn ring(&mut self) -> Option<RingSpec> {
        let mut acc = self.factor()?;
        while self.eat("*") || self.eat("×") {
            let rhs = self.factor()?;
            acc = product(&acc, &rhs);
        }
        Some(acc)
    }

    fn parenthesized(&mut self) -> Option<RingSpec> {
        if !self.eat("(") {
            return None;
        }
        let inner = self.ring()?;
        self.eat(")").then_some(inner)
    }

    fn factor(&mut self) -> Option<RingSpec> {
        if self.eat("Z/") {
            let n = self.number().filter(|&n| n >= 2)?;
            return Some(cyclic(n));
        }
        if self.eat("Ex2.12") {
            let base = self.parenthesized()?;
            return Some(square_zero_extension(&base));
        }
        if self.eat("UT") {
            let k = self.number().filter(|&k| k >= 1)? as usize;
            let base = self.parenthesized()?;
            return Some(upper_triangular(&base, k));
        }
        if self.eat("M") {
            let k = self.number().filter(|&k| k >= 1)? as usize;
            let base = self.parenthesized()?;
            return Some(matrix_ring(&base, k));
        }
        if self.eat("F") {
            let q = self.number()?;
            return finite_field(q);
        }
        if self.rest().starts_with('(') {
            return self.parenthesized();
        }
        None
    }
}

/// `Z/n`.
pub fn cyclic(n: u64) -> RingSpec {
    RingSpec {
        name: format!("Z/{n}"),
        orders: vec![n],
        table: vec![vec![1]],
        one: vec![1],
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Remainder of `a` modulo the monic polynomial `f` over `Z/p`
/// (coefficients lowest degree first).
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().expect("non-empty");
        let shift = r.len() - 1 - df;
        for (i, &c) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - lead * c % p) % p;
        }
        r.pop();
    }
    r
}

fn monic_polys(p: u64, degree: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(degree as u32)).map(move |n| {
        let mut rest = n;
        let mut coeffs: Vec<u64> = (0..degree)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect();
        coeffs.push(1);
        coeffs
    })
}

fn irreducible(f: &[u64], p: u64) -> bool {
    let degree = f.len() - 1;
    (1..=degree / 2).all(|j| monic_polys(p, j).all(|g| poly_rem(f, &g, p).iter().any(|&c| c != 0)))
}

/// The field with `q` elements, or `None` when `q` is not a prime power.
pub fn finite_field(q: u64) -> Option<RingSpec> {
    let (p, k) = prime_power(q)?;
    let k = k as usize;
    if k == 1 {
        let mut spec = cyclic(p);
        spec.name = format!("F{p}");
        return Some(spec);
    }
    let modulus = monic_polys(p, k).find(|f| irreducible(f, p))?;
    let mut table = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut mono = vec![0u64; i + j + 1];
            mono[i + j] = 1;
            let mut rem = poly_rem(&mono, &modulus, p);
            rem.resize(k, 0);
            table.push(rem);
        }
    }
    let mut one = vec![0u64; k];
    one[0] = 1;
    Some(RingSpec {
        name: format!("F{q}"),
        orders: vec![p; k],
        table,
        one,
    })
}

/// Add `c * coords` into `acc` at offset `base`, reducing with `orders`.
fn accumulate(acc: &mut [u64], base: usize, coords: &[u64], orders: &[u64]) {
    for (t, &c) in coords.iter().enumerate() {
        acc[base + t] = (acc[base + t] + c) % orders[t];
    }
}

/// Rings whose basis is `(unit, s_t)` for a finite set of "units" multiplying
/// by a partial rule, tensored with the basis of `base`.
fn tensor_with(
    base: &RingSpec,
    name: String,
    units: usize,
    rule: impl Fn(usize, usize) -> Option<usize>,
    one_units: &[usize],
) -> RingSpec {
    let db = base.dim();
    let d = units * db;
    let orders: Vec<u64> = (0..units).flat_map(|_| base.orders.iter().copied()).collect();
    let mut table = Vec::with_capacity(d * d);
    for x in 0..units {
        for t in 0..db {
            for y in 0..units {
                for u in 0..db {
                    let mut entry = vec![0u64; d];
                    if let Some(z) = rule(x, y) {
                        accumulate(&mut entry, z * db, base.product_of_basis(t, u), &base.orders);
                    }
                    table.push(entry);
                }
            }
        }
    }
    let mut one = vec![0u64; d];
    for &x in one_units {
        accumulate(&mut one, x * db, &base.one, &base.orders);
    }
    RingSpec { name, orders, table, one }
}

/// `M_k(S)`, basis `E_ab (x) s_t` ordered by `(a, b, t)`.
pub fn matrix_ring(base: &RingSpec, k: usize) -> RingSpec {
    let rule = |x: usize, y: usize| {
        let (a, b) = (x / k, x % k);
        let (c, e) = (y / k, y % k);
        (b == c).then_some(a * k + e)
    };
    let diag: Vec<usize> = (0..k).map(|a| a * k + a).collect();
    tensor_with(base, format!("M{k}({})", base.name), k * k, rule, &diag)
}

/// Upper triangular `k x k` matrices over `S`.
pub fn upper_triangular(base: &RingSpec, k: usize) -> RingSpec {
    let positions: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
    let index_of = |a: usize, b: usize| positions.iter().position(|&p| p == (a, b));
    let rule = |x: usize, y: usize| {
        let (a, b) = positions[x];
        let (c, e) = positions[y];
        if b == c {
            index_of(a, e)
        } else {
            None
        }
    };
    let diag: Vec<usize> = (0..k).map(|a| index_of(a, a).expect("diagonal present")).collect();
    tensor_with(base, format!("UT{k}({})", base.name), positions.len(), rule, &diag)
}

/// `S[x1..x4] / (x1..x4)^2`: basis `1, a1, a2, a3, a4` with `ai aj = 0`.
pub fn square_zero_extension(base: &RingSpec) -> RingSpec {
    let rule = |x: usize, y: usize| match (x, y) {
        (0, y) => Some(y),
        (x, 0) => Some(x),
        _ => None,
    };
    tensor_with(base, format!("Ex2.12({})", base.name), 5, rule, &[0])
}

/// Direct product `A x B`.
pub fn product(a: &RingSpec, b: &RingSpec) -> RingSpec {
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut entry = vec![0u64; d];
            if i < da && j < da {
                entry[..da].copy_from_slice(a.product_of_basis(i, j));
            } else if i >= da && j >= da {
                entry[da..].copy_from_slice(b.product_of_basis(i - da, j - da));
            }
            table.push(entry);
        }
    }
    let mut orders = a.orders.clone();
    orders.extend_from_slice(&b.orders);
    let mut one = a.one.clone();
    one.extend_from_slice(&b.one);
    RingSpec {
        name: format!("{}*{}", a.name, b.name),
        orders,
        table,
        one,
    }
}

/// Names of the rings every exhaustive suite runs over.
pub fn roster() -> Vec<String> {
    let mut names: Vec<String> = (2..=30).map(|n| format!("Z/{n}")).collect();
    names.extend(
        ["F2", "F4", "M2(F2)", "UT2(F2)", "Ex2.12(F2)", "Z/6*F2"]
            .iter()
            .map(|s| s.to_string()),
    );
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn names_round_trip() {
        for name in ["Z/6", "F4", "F8", "F9", "M2(F2)", "UT2(F3)", "Ex2.12(F2)", "Z/6*F2", "M2(Z/4)"] {
            let r = Ring::preset(name).unwrap();
            assert_eq!(r.name(), name);
        }
        assert_eq!(Ring::preset("Z/6 × F2").unwrap().name(), "Z/6*F2");
    }

    #[test]
    fn unknown_names_are_rejected() {
        for bad in ["", "Z/1", "F6", "M(F2)", "Ex2.12F2", "Q", "Z/6*", "M2(F2"] {
            assert!(matches!(spec(bad), Err(RingError::UnknownPreset(_))), "{bad}");
        }
    }

    #[test]
    fn example_ring_shape() {
        let r = Ring::preset("Ex2.12(F2)").unwrap();
        assert_eq!(r.dim(), 5);
        assert_eq!(r.size(), 32);
        assert_eq!(r.coords(r.one()), vec![1, 0, 0, 0, 0]);
        for i in 1..5 {
            for j in 1..5 {
                assert!(r.is_zero(r.mul(r.basis(i), r.basis(j))));
            }
        }
    }

    #[test]
    fn fields_have_every_nonzero_element_invertible() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let r = Ring::load(finite_field(q).unwrap()).unwrap();
            assert_eq!(r.size() as u64, q);
            assert_eq!(r.units().len() as u64, q - 1, "F{q}");
        }
    }

    #[test]
    fn matrix_ring_is_noncommutative() {
        let r = Ring::preset("M2(F2)").unwrap();
        assert_eq!(r.size(), 16);
        assert!(!r.is_commutative());
        // |GL2(F2)| = 6
        assert_eq!(r.units().len(), 6);
    }

    #[test]
    fn roster_loads() {
        for name in roster() {
            Ring::preset(&name).unwrap();
        }
    }
}
