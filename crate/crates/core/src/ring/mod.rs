//! Finite unital rings presented by structure constants.

mod predicates;
pub mod presets;
mod spec;

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

pub use predicates::FullnessWitness;
pub use spec::RingSpec;

use crate::zmod::{self, AdditiveMap};

/// Rings above this many elements are rejected unless a larger cap is given.
pub const DEFAULT_ORDER_CAP: usize = 1 << 16;

/// Addition and multiplication tables are materialized up to this order.
const TABLE_LIMIT: usize = 1024;

/// Unit inverses are tabulated up to this order; above it they are solved.
const INVERSE_TABLE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    AssociativityViolation { i: usize, j: usize, k: usize },
    #[error("identity does not act trivially on basis element {i}")]
    UnitLawViolation { i: usize },
    #[error("coordinates out of range in {field}")]
    BadCoordinates { field: String },
    #[error("product of basis elements ({i}, {j}) is not killed by their additive orders")]
    TorsionMismatch { i: usize, j: usize },
    #[error("malformed ring presentation: {0}")]
    Malformed(String),
    #[error("ring order exceeds the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("elements belong to different rings")]
    MixedRings,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

/// Identity of a loaded ring, derived from its structure constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(pub u64);

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// An element of a finite ring.
///
/// Elements are stored as their position in the canonical order, which is
/// lexicographic on reduced coordinates with the first coordinate most
/// significant. Comparing two elements of one ring compares them in that
/// order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    index: u32,
    ring: RingId,
}

impl Element {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn ring_id(self) -> RingId {
        self.ring
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.index)
    }
}

struct RingData {
    spec: RingSpec,
    id: RingId,
    size: usize,
    strides: Vec<u64>,
    one: u32,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    mul: Option<Vec<u32>>,
    inverses: OnceLock<Vec<u32>>,
    idempotents: OnceLock<Vec<Element>>,
    units: OnceLock<Vec<Element>>,
    opposite: OnceLock<Ring>,
}

/// Handle to a validated finite ring. Cloning is cheap.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingData>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("name", &self.inner.spec.name)
            .field("order", &self.inner.size)
            .field("id", &self.inner.id)
            .finish()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for Ring {}

const NO_INVERSE: u32 = u32::MAX;

impl Ring {
    /// Validate `spec` and build the ring, with the default order cap.
    pub fn load(spec: RingSpec) -> Result<Ring, RingError> {
        Ring::load_with_cap(spec, DEFAULT_ORDER_CAP)
    }

    pub fn load_with_cap(spec: RingSpec, cap: usize) -> Result<Ring, RingError> {
        let size = spec.validate(cap.min(u32::MAX as usize))?;
        let id = RingId(spec.fingerprint());
        let d = spec.dim();
        let mut strides = vec![1u64; d];
        for t in (0..d.saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * spec.orders[t + 1];
        }
        let encode = |c: &[u64]| -> u32 { c.iter().zip(&strides).map(|(a, s)| a * s).sum::<u64>() as u32 };
        let decode = |idx: usize| -> Vec<u64> {
            let mut rest = idx as u64;
            strides
                .iter()
                .zip(&spec.orders)
                .map(|(s, m)| {
                    let c = rest / s % m;
                    rest %= s;
                    c
                })
                .collect()
        };
        let coords: Vec<Vec<u64>> = (0..size).map(decode).collect();
        let neg = coords
            .iter()
            .map(|c| {
                let n: Vec<u64> = c.iter().zip(&spec.orders).map(|(&a, &m)| (m - a) % m).collect();
                encode(&n)
            })
            .collect();
        let (add, mul) = if size <= TABLE_LIMIT {
            let mut add = Vec::with_capacity(size * size);
            let mut mul = Vec::with_capacity(size * size);
            for x in &coords {
                for y in &coords {
                    let s: Vec<u64> =
                        x.iter().zip(y).zip(&spec.orders).map(|((a, b), m)| (a + b) % m).collect();
                    add.push(encode(&s));
                    mul.push(encode(&spec.multiply(x, y)));
                }
            }
            (Some(add), Some(mul))
        } else {
            (None, None)
        };
        let one = encode(&spec.one);
        Ok(Ring {
            inner: Arc::new(RingData {
                spec,
                id,
                size,
                strides,
                one,
                neg,
                add,
                mul,
                inverses: OnceLock::new(),
                idempotents: OnceLock::new(),
                units: OnceLock::new(),
                opposite: OnceLock::new(),
            }),
        })
    }

    /// Build a named preset such as `Z/6`, `F4`, `M2(F2)`, `UT2(F2)`,
    /// `Ex2.12(F2)` or `Z/6*F2`.
    pub fn preset(name: &str) -> Result<Ring, RingError> {
        Ring::load(presets::spec(name)?)
    }

    pub fn id(&self) -> RingId {
        self.inner.id
    }

    pub fn name(&self) -> &str {
        &self.inner.spec.name
    }

    pub fn spec(&self) -> &RingSpec {
        &self.inner.spec
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.inner.size
    }

    pub fn dim(&self) -> usize {
        self.inner.spec.dim()
    }

    pub fn orders(&self) -> &[u64] {
        &self.inner.spec.orders
    }

    #[inline]
    fn wrap(&self, index: u32) -> Element {
        Element { index, ring: self.inner.id }
    }

    #[inline]
    fn check(&self, x: Element) {
        assert_eq!(x.ring, self.inner.id, "element used with a foreign ring");
    }

    pub fn owns(&self, x: Element) -> bool {
        x.ring == self.inner.id && (x.index as usize) < self.inner.size
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn one(&self) -> Element {
        self.wrap(self.inner.one)
    }

    /// Element with the given reduced coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<Element, RingError> {
        if coords.len() != self.dim() || coords.iter().zip(self.orders()).any(|(c, m)| c >= m) {
            return Err(RingError::BadCoordinates { field: format!("{coords:?}") });
        }
        Ok(self.encode(coords))
    }

    /// Element with the given coordinates, reduced first.
    pub fn element_reduced(&self, coords: &[i64]) -> Element {
        assert_eq!(coords.len(), self.dim());
        let reduced: Vec<u64> = coords
            .iter()
            .zip(self.orders())
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect();
        self.encode(&reduced)
    }

    fn encode(&self, coords: &[u64]) -> Element {
        let idx: u64 = coords.iter().zip(&self.inner.strides).map(|(a, s)| a * s).sum();
        self.wrap(idx as u32)
    }

    /// Element at position `index` of the canonical order.
    pub fn element_at(&self, index: usize) -> Element {
        assert!(index < self.inner.size);
        self.wrap(index as u32)
    }

    pub fn coords(&self, x: Element) -> Vec<u64> {
        self.check(x);
        let mut rest = x.index as u64;
        self.inner
            .strides
            .iter()
            .zip(self.orders())
            .map(|(s, m)| {
                let c = rest / s % m;
                rest %= s;
                c
            })
            .collect()
    }

    /// Coordinates as text: `3` for one coordinate, `(1 0 1)` otherwise.
    pub fn render(&self, x: Element) -> String {
        let c = self.coords(x);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            format!("({})", c.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        }
    }

    /// The basis element `b_t`.
    pub fn basis(&self, t: usize) -> Element {
        self.wrap(self.inner.strides[t] as u32)
    }

    /// `n * 1`.
    pub fn int(&self, n: i64) -> Element {
        let one = self.inner.spec.one.iter().map(|&c| c as i64 * n).collect::<Vec<_>>();
        self.element_reduced(&one)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.inner.size as u32).map(move |i| self.wrap(i))
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        self.check(x);
        self.check(y);
        match &self.inner.add {
            Some(t) => self.wrap(t[x.index as usize * self.inner.size + y.index as usize]),
            None => {
                let s: Vec<u64> = self
                    .coords(x)
                    .iter()
                    .zip(self.coords(y))
                    .zip(self.orders())
                    .map(|((a, b), m)| (a + b) % m)
                    .collect();
                self.encode(&s)
            }
        }
    }

    #[inline]
    pub fn neg(&self, x: Element) -> Element {
        self.check(x);
        self.wrap(self.inner.neg[x.index as usize])
    }

    #[inline]
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.check(x);
        self.check(y);
        match &self.inner.mul {
            Some(t) => self.wrap(t[x.index as usize * self.inner.size + y.index as usize]),
            None => {
                let p = self.inner.spec.multiply(&self.coords(x), &self.coords(y));
                self.encode(&p)
            }
        }
    }

    /// `x * y * z`.
    pub fn mul3(&self, x: Element, y: Element, z: Element) -> Element {
        self.mul(self.mul(x, y), z)
    }

    /// `1 - x`.
    pub fn complement(&self, x: Element) -> Element {
        self.sub(self.one(), x)
    }

    /// `n * x` for an integer `n`.
    pub fn scale(&self, n: i64, x: Element) -> Element {
        let c: Vec<i64> = self.coords(x).iter().map(|&a| a as i64 * n).collect();
        self.element_reduced(&c)
    }

    pub fn sum<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(self.zero(), |acc, x| self.add(acc, x))
    }

    pub fn is_zero(&self, x: Element) -> bool {
        self.check(x);
        x.index == 0
    }

    pub fn is_idempotent(&self, x: Element) -> bool {
        self.mul(x, x) == x
    }

    /// Every idempotent, in canonical order.
    pub fn idempotents(&self) -> &[Element] {
        self.inner
            .idempotents
            .get_or_init(|| self.elements().filter(|&e| self.is_idempotent(e)).collect())
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.inner.spec.product_of_basis(i, j) == self.inner.spec.product_of_basis(j, i)))
    }

    fn inverse_table(&self) -> &[u32] {
        self.inner.inverses.get_or_init(|| {
            let one = self.one();
            let mut inv = vec![NO_INVERSE; self.size()];
            for x in self.elements() {
                if inv[x.index()] != NO_INVERSE {
                    continue;
                }
                if let Some(y) = self.elements().find(|&y| self.mul(x, y) == one) {
                    if self.mul(y, x) == one {
                        inv[x.index()] = y.index;
                        inv[y.index()] = x.index;
                    }
                }
            }
            inv
        })
    }

    pub(crate) fn inverse_of(&self, x: Element) -> Option<Element> {
        self.check(x);
        if self.size() <= INVERSE_TABLE_LIMIT {
            let v = self.inverse_table()[x.index()];
            return (v != NO_INVERSE).then(|| self.wrap(v));
        }
        let y = self.solve_additive(1, |v| vec![self.mul(x, v[0])], &[self.one()])?[0];
        (self.mul(y, x) == self.one()).then_some(y)
    }

    /// All units in canonical order.
    pub fn units(&self) -> &[Element] {
        self.inner
            .units
            .get_or_init(|| self.elements().filter(|&x| self.inverse_of(x).is_some()).collect())
    }

    /// The opposite ring, sharing element indices with this one.
    pub fn opposite(&self) -> &Ring {
        self.inner.opposite.get_or_init(|| {
            Ring::load_with_cap(self.inner.spec.opposite(), usize::MAX).expect("opposite of a valid ring is valid")
        })
    }

    /// Move an element between this ring and its opposite (same carrier).
    pub fn transfer(&self, x: Element) -> Element {
        let op = self.opposite();
        assert!(
            x.ring == self.inner.id || x.ring == op.inner.id,
            "element is not from this ring or its opposite"
        );
        self.wrap(x.index)
    }

    fn element_from_coords(&self, coords: &[u64]) -> Element {
        self.encode(coords)
    }

    /// Build the additive map `R^k -> R^l` that `map` describes, by
    /// evaluating it on the additive basis of `R^k`.
    pub(crate) fn additive_map<F>(&self, unknowns: usize, map: F) -> AdditiveMap
    where
        F: Fn(&[Element]) -> Vec<Element>,
    {
        let d = self.dim();
        let mut columns = Vec::with_capacity(unknowns * d);
        let mut out_len = None;
        let mut input = vec![self.zero(); unknowns];
        for slot in 0..unknowns {
            for t in 0..d {
                input[slot] = self.basis(t);
                let image = map(&input);
                out_len.get_or_insert(image.len());
                columns.push(image.iter().flat_map(|&e| self.coords(e)).collect::<Vec<_>>());
                input[slot] = self.zero();
            }
        }
        let out_len = out_len.unwrap_or_else(|| map(&input).len());
        let domain = (0..unknowns).flat_map(|_| self.orders().iter().copied()).collect();
        let codomain = (0..out_len).flat_map(|_| self.orders().iter().copied()).collect();
        AdditiveMap { domain, codomain, columns }
    }

    fn split_vector(&self, flat: &[u64]) -> Vec<Element> {
        flat.chunks(self.dim()).map(|c| self.element_from_coords(c)).collect()
    }

    /// Solve `map(x) = target` for `x` in `R^unknowns`, where `map` is
    /// additive.
    pub(crate) fn solve_additive<F>(&self, unknowns: usize, map: F, target: &[Element]) -> Option<Vec<Element>>
    where
        F: Fn(&[Element]) -> Vec<Element>,
    {
        let m = self.additive_map(unknowns, map);
        let rhs: Vec<u64> = target.iter().flat_map(|&e| self.coords(e)).collect();
        if unknowns == 0 {
            return rhs.iter().all(|&c| c == 0).then(Vec::new);
        }
        let x = m.solve(&rhs)?;
        Some(self.split_vector(&x))
    }

    /// Generators of the kernel of the additive map `map` on `R^unknowns`.
    pub(crate) fn kernel_additive<F>(&self, unknowns: usize, map: F) -> Vec<Vec<Element>>
    where
        F: Fn(&[Element]) -> Vec<Element>,
    {
        let m = self.additive_map(unknowns, map);
        m.kernel().iter().map(|g| self.split_vector(g)).collect()
    }

    /// Number of elements in the additive subgroup of `R^l` generated by
    /// `gens`.
    pub(crate) fn span_order(&self, len: usize, gens: &[Vec<Element>]) -> u64 {
        let group: Vec<u64> = (0..len).flat_map(|_| self.orders().iter().copied()).collect();
        let flat: Vec<Vec<u64>> = gens
            .iter()
            .map(|g| g.iter().flat_map(|&e| self.coords(e)).collect())
            .collect();
        zmod::subgroup_order(&group, &flat)
    }

    /// The additive subgroup generated by `gens`, materialized in
    /// canonical order.
    pub fn additive_closure(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen = vec![false; self.size()];
        seen[0] = true;
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    frontier.push(y);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| self.wrap(i as u32))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_basics() {
        let r = Ring::preset("Z/6").unwrap();
        assert_eq!(r.size(), 6);
        assert_eq!(r.dim(), 1);
        assert_eq!(r.coords(r.one()), vec![1]);
        let (two, three) = (r.int(2), r.int(3));
        assert_eq!(r.mul(two, three), r.zero());
        assert_eq!(r.add(three, three), r.zero());
        assert_eq!(r.neg(two), r.int(4));
        assert_eq!(r.idempotents(), &[r.int(0), r.int(1), r.int(3), r.int(4)]);
        assert_eq!(r.units(), [r.int(1), r.int(5)]);
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let r = Ring::preset("Z/6*F2").unwrap();
        let all: Vec<Vec<u64>> = r.elements().map(|x| r.coords(x)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all.len(), 12);
    }

    #[test]
    fn untabulated_arithmetic_matches_tables() {
        // M2(F2) * M2(F2) has 256 elements: tabulated. Compare with the
        // direct bilinear product on a few elements.
        let r = Ring::preset("M2(F2)").unwrap();
        for x in r.elements() {
            for y in r.elements() {
                let direct = r.element(&r.spec().multiply(&r.coords(x), &r.coords(y))).unwrap();
                assert_eq!(r.mul(x, y), direct);
            }
        }
    }

    #[test]
    fn opposite_reverses_products() {
        let r = Ring::preset("UT2(F2)").unwrap();
        let op = r.opposite();
        for x in r.elements() {
            for y in r.elements() {
                let xy = r.mul(x, y);
                let yx_op = op.mul(op.transfer(y), op.transfer(x));
                assert_eq!(r.transfer(yx_op), xy);
            }
        }
    }

    #[test]
    #[should_panic(expected = "foreign ring")]
    fn mixing_rings_panics() {
        let a = Ring::preset("Z/6").unwrap();
        let b = Ring::preset("Z/5").unwrap();
        a.add(a.one(), b.one());
    }
}
