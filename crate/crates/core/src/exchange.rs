//! Idempotents with prescribed ideal memberships, each carrying the ring
//! elements that witness its defining identities.
//!
//! All searches scan candidates in the canonical element order, so equal
//! inputs always produce equal certificates.

use thiserror::Error;

use crate::ring::{Element, FullnessWitness, Ring, RingError};

/// Tuples scanned by the exhaustive fallback for orthogonal systems.
const ORTHOGONAL_FALLBACK_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExchangeError {
    #[error("no idempotent e in aR with 1-e in (1-a)R for a = {0:?}")]
    NotExchange(Element),
    #[error("the right ideals do not sum to the whole ring")]
    NotCovering,
    #[error("no orthogonal idempotent system exists for these ideals")]
    NoSystemFound,
    #[error("no covering idempotent found")]
    NoCover,
    #[error("{0:?} is not full")]
    NotFull(Element),
    #[error("{0:?} is not idempotent")]
    NotIdempotent(Element),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Membership test for a right ideal given by additive generators.
struct IdealMask {
    members: Vec<bool>,
}

impl IdealMask {
    fn new(ring: &Ring, additive_gens: &[Element]) -> Self {
        let mut members = vec![false; ring.size()];
        for x in ring.additive_closure(additive_gens) {
            members[x.index()] = true;
        }
        IdealMask { members }
    }

    /// `sum gens[i] R`.
    fn right(ring: &Ring, gens: &[Element]) -> Self {
        let additive: Vec<Element> = gens
            .iter()
            .flat_map(|&g| (0..ring.dim()).map(move |t| ring.mul(g, ring.basis(t))))
            .collect();
        IdealMask::new(ring, &additive)
    }

    /// `sum gens[i] S` for the corner ring `S = f R f`.
    fn corner_right(ring: &Ring, f: Element, gens: &[Element]) -> Self {
        let additive: Vec<Element> = gens
            .iter()
            .flat_map(|&g| (0..ring.dim()).map(move |t| ring.mul(ring.mul3(g, f, ring.basis(t)), f)))
            .collect();
        IdealMask::new(ring, &additive)
    }

    fn contains(&self, x: Element) -> bool {
        self.members[x.index()]
    }
}

/// Idempotent `e` with `e = a x` and `1 - e = (1 - a) y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentCertificate {
    pub a: Element,
    pub e: Element,
    pub x: Element,
    pub y: Element,
}

impl IdempotentCertificate {
    pub fn replays(&self, ring: &Ring) -> bool {
        ring.is_idempotent(self.e)
            && ring.mul(self.a, self.x) == self.e
            && ring.mul(ring.complement(self.a), self.y) == ring.complement(self.e)
    }
}

/// The exchange idempotent for `a`; failure means the ring is not an
/// exchange ring, witnessed by `a`.
pub fn exchange_idempotent(ring: &Ring, a: Element) -> Result<IdempotentCertificate, ExchangeError> {
    let b = ring.complement(a);
    let in_a = IdealMask::right(ring, &[a]);
    let in_b = IdealMask::right(ring, &[b]);
    let e = ring
        .idempotents()
        .iter()
        .copied()
        .find(|&e| in_a.contains(e) && in_b.contains(ring.complement(e)))
        .ok_or(ExchangeError::NotExchange(a))?;
    let x = ring.right_member(&[a], e).expect("membership checked")[0];
    let y = ring.right_member(&[b], ring.complement(e)).expect("membership checked")[0];
    Ok(IdempotentCertificate { a, e, x, y })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeVerdict {
    pub checked: usize,
    pub first_failure: Option<Element>,
}

impl ExchangeVerdict {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Run [`exchange_idempotent`] on every element.
pub fn check_exchange(ring: &Ring) -> ExchangeVerdict {
    let mut checked = 0;
    for a in ring.elements() {
        checked += 1;
        if exchange_idempotent(ring, a).is_err() {
            return ExchangeVerdict { checked, first_failure: Some(a) };
        }
    }
    ExchangeVerdict { checked, first_failure: None }
}

/// Orthogonal idempotents summing to 1, the j-th lying in the right ideal
/// generated by `generators[j]`: `idempotents[j] = sum_k generators[j][k] * memberships[j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalSystem {
    pub generators: Vec<Vec<Element>>,
    pub idempotents: Vec<Element>,
    pub memberships: Vec<Vec<Element>>,
}

impl OrthogonalSystem {
    pub fn replays(&self, ring: &Ring) -> bool {
        let es = &self.idempotents;
        let n = es.len();
        n == self.generators.len()
            && n == self.memberships.len()
            && ring.sum(es.iter().copied()) == ring.one()
            && es.iter().all(|&e| ring.is_idempotent(e))
            && (0..n).all(|i| (0..n).all(|j| i == j || ring.is_zero(ring.mul(es[i], es[j]))))
            && (0..n).all(|j| {
                self.generators[j].len() == self.memberships[j].len()
                    && ring.sum(
                        self.generators[j]
                            .iter()
                            .zip(&self.memberships[j])
                            .map(|(&g, &c)| ring.mul(g, c)),
                    ) == es[j]
            })
    }
}

/// Orthogonal idempotents `e_j` in the right ideals `I_j` with
/// `e_1 + ... + e_n = 1`.
///
/// Built by induction: pick `e` in `I_1` with `1 - e` in `I_2 + ... + I_n`,
/// solve the rest inside the corner ring `(1-e) R (1-e)`, then pull the
/// corner idempotents back into the original ideals and correct `e` so the
/// pieces stay orthogonal. An exhaustive scan backs up the construction.
pub fn orthogonal_idempotents(ring: &Ring, ideals: &[Vec<Element>]) -> Result<OrthogonalSystem, ExchangeError> {
    for gens in ideals {
        if !gens.iter().all(|&g| ring.owns(g)) {
            return Err(RingError::MixedRings.into());
        }
    }
    if ideals.is_empty() {
        return Err(ExchangeError::NotCovering);
    }
    let all: Vec<Element> = ideals.iter().flatten().copied().collect();
    if ring.right_member(&all, ring.one()).is_none() {
        return Err(ExchangeError::NotCovering);
    }
    let constructed = corner_system(ring, ring.one(), ideals);
    let idempotents = match constructed {
        Some(es) if is_system(ring, ideals, &es) => es,
        _ => exhaustive_system(ring, ideals).ok_or(ExchangeError::NoSystemFound)?,
    };
    let memberships = ideals
        .iter()
        .zip(&idempotents)
        .map(|(gens, &e)| ring.right_member(gens, e).expect("membership verified"))
        .collect();
    Ok(OrthogonalSystem { generators: ideals.to_vec(), idempotents, memberships })
}

fn is_system(ring: &Ring, ideals: &[Vec<Element>], es: &[Element]) -> bool {
    let n = es.len();
    n == ideals.len()
        && ring.sum(es.iter().copied()) == ring.one()
        && es.iter().all(|&e| ring.is_idempotent(e))
        && (0..n).all(|i| (0..n).all(|j| i == j || ring.is_zero(ring.mul(es[i], es[j]))))
        && ideals.iter().zip(es).all(|(g, &e)| IdealMask::right(ring, g).contains(e))
}

/// Orthogonal idempotents of the corner `S = f R f` summing to `f`, the j-th
/// in the right `S`-ideal generated by `ideals[j]` (generators lie in `S`).
fn corner_system(ring: &Ring, f: Element, ideals: &[Vec<Element>]) -> Option<Vec<Element>> {
    let n = ideals.len();
    if n == 1 {
        return Some(vec![f]);
    }
    let first = IdealMask::corner_right(ring, f, &ideals[0]);
    let rest_gens: Vec<Element> = ideals[1..].iter().flatten().copied().collect();
    let rest = IdealMask::corner_right(ring, f, &rest_gens);
    let e = ring.idempotents().iter().copied().find(|&e| {
        ring.mul(f, e) == e && ring.mul(e, f) == e && first.contains(e) && rest.contains(ring.sub(f, e))
    })?;
    let fp = ring.sub(f, e);

    // f' = sum_{j>=2} t_j with t_j in the j-th corner ideal.
    let layout: Vec<(usize, Element)> = ideals[1..]
        .iter()
        .enumerate()
        .flat_map(|(j, gens)| gens.iter().map(move |&g| (j, g)))
        .collect();
    let z = ring.solve_additive(
        layout.len(),
        |z| vec![ring.sum(layout.iter().zip(z).map(|(&(_, g), &c)| ring.mul(ring.mul3(g, f, c), f)))],
        &[fp],
    )?;
    let mut parts = vec![ring.zero(); n - 1];
    for (&(j, g), &c) in layout.iter().zip(&z) {
        parts[j] = ring.add(parts[j], ring.mul(ring.mul3(g, f, c), f));
    }

    let shrunk: Vec<Vec<Element>> = parts.iter().map(|&t| vec![ring.mul3(fp, t, fp)]).collect();
    let gs = corner_system(ring, fp, &shrunk)?;

    let mut hs = Vec::with_capacity(n - 1);
    for ((&t, g), s_gens) in parts.iter().zip(&gs).zip(&shrunk) {
        let s = ring.right_member(s_gens, *g)?[0];
        hs.push(ring.mul(ring.mul3(t, fp, s), *g));
    }
    let h = ring.sum(hs.iter().copied());
    let mut out = vec![ring.mul(e, ring.sub(f, h))];
    out.extend(hs);
    Some(out)
}

fn exhaustive_system(ring: &Ring, ideals: &[Vec<Element>]) -> Option<Vec<Element>> {
    let n = ideals.len();
    let masks: Vec<IdealMask> = ideals.iter().map(|g| IdealMask::right(ring, g)).collect();
    let idems = ring.idempotents();
    let total = (idems.len() as u64).checked_pow(n.saturating_sub(1) as u32)?;
    if total > ORTHOGONAL_FALLBACK_BUDGET {
        return None;
    }
    (0..total).find_map(|mut idx| {
        let mut es = vec![ring.zero(); n];
        for slot in (0..n - 1).rev() {
            es[slot] = idems[(idx % idems.len() as u64) as usize];
            idx /= idems.len() as u64;
        }
        es[n - 1] = ring.complement(ring.sum(es[..n - 1].iter().copied()));
        (masks.iter().zip(&es).all(|(m, &e)| m.contains(e)) && is_system(ring, ideals, &es)).then_some(es)
    })
}

/// Witness that `source R` is isomorphic to a direct summand of
/// `target R`: `s = target s source`, `t = source t target`, `t s = source`.
/// Then `s t` is an idempotent under `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubequivalenceWitness {
    pub source: Element,
    pub target: Element,
    pub s: Element,
    pub t: Element,
}

impl SubequivalenceWitness {
    /// First witness with `s` in canonical order of `target R source`.
    pub fn search(ring: &Ring, source: Element, target: Element) -> Option<SubequivalenceWitness> {
        let mut seen = vec![false; ring.size()];
        for x in ring.elements() {
            let s = ring.mul3(target, x, source);
            if std::mem::replace(&mut seen[s.index()], true) {
                continue;
            }
            let ts = ring.mul(target, s);
            let Some(z) = ring.solve_additive(1, |z| vec![ring.mul3(source, z[0], ts)], &[source]) else {
                continue;
            };
            let t = ring.mul3(source, z[0], target);
            let w = SubequivalenceWitness { source, target, s, t };
            if w.replays(ring) {
                return Some(w);
            }
        }
        None
    }

    pub fn replays(&self, ring: &Ring) -> bool {
        let st = ring.mul(self.s, self.t);
        ring.mul3(self.target, self.s, self.source) == self.s
            && ring.mul3(self.source, self.t, self.target) == self.t
            && ring.mul(self.t, self.s) == self.source
            && ring.is_idempotent(st)
            && ring.mul(self.target, st) == st
            && ring.mul(st, self.target) == st
    }
}

/// Idempotent `e` in `e_1 R + ... + e_n R` containing `e_1 R` and receiving
/// every `e_i R` as a direct summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringIdempotent {
    pub inputs: Vec<Element>,
    pub e: Element,
    /// `e = sum_i inputs[i] * combination[i]`.
    pub combination: Vec<Element>,
    pub subequivalences: Vec<SubequivalenceWitness>,
}

impl CoveringIdempotent {
    pub fn replays(&self, ring: &Ring) -> bool {
        let e = self.e;
        !self.inputs.is_empty()
            && ring.is_idempotent(e)
            && ring.mul(e, self.inputs[0]) == self.inputs[0]
            && self.combination.len() == self.inputs.len()
            && ring.sum(self.inputs.iter().zip(&self.combination).map(|(&a, &c)| ring.mul(a, c))) == e
            && self.subequivalences.len() == self.inputs.len()
            && self
                .subequivalences
                .iter()
                .zip(&self.inputs)
                .all(|(w, &ei)| w.source == ei && w.target == e && w.replays(ring))
    }
}

pub fn covering_idempotent(ring: &Ring, idempotents: &[Element]) -> Result<CoveringIdempotent, ExchangeError> {
    if let Some(&bad) = idempotents.iter().find(|&&e| !ring.owns(e) || !ring.is_idempotent(e)) {
        if !ring.owns(bad) {
            return Err(RingError::MixedRings.into());
        }
        return Err(ExchangeError::NotIdempotent(bad));
    }
    let Some(&first) = idempotents.first() else {
        return Err(ExchangeError::NoCover);
    };
    let span = IdealMask::right(ring, idempotents);
    for &e in ring.idempotents() {
        if ring.mul(e, first) != first || !span.contains(e) {
            continue;
        }
        let witnesses: Option<Vec<_>> = idempotents
            .iter()
            .map(|&ei| SubequivalenceWitness::search(ring, ei, e))
            .collect();
        if let Some(subequivalences) = witnesses {
            let combination = ring.right_member(idempotents, e).expect("membership checked");
            return Ok(CoveringIdempotent { inputs: idempotents.to_vec(), e, combination, subequivalences });
        }
    }
    Err(ExchangeError::NoCover)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `e = a * factor`, so `e` lies in `aR`.
    Range,
    /// `e = factor * a`, so `e` lies in `Ra`.
    Corange,
}

/// A full idempotent in `aR` (or `Ra`) for a full element `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullIdempotent {
    pub a: Element,
    pub e: Element,
    pub factor: Element,
    pub orientation: Orientation,
    pub fullness: FullnessWitness,
}

impl FullIdempotent {
    pub fn replays(&self, ring: &Ring) -> bool {
        let product = match self.orientation {
            Orientation::Range => ring.mul(self.a, self.factor),
            Orientation::Corange => ring.mul(self.factor, self.a),
        };
        product == self.e
            && ring.is_idempotent(self.e)
            && self.fullness.target == self.e
            && self.fullness.replays(ring)
    }
}

/// Full idempotent `e` in `aR`, following the proof route: split `1` along
/// a fullness witness of `a` into orthogonal idempotents, transport them
/// into `aR`, and cover them with a single idempotent.
///
/// `witness` may supply a known fullness witness of `a`.
pub fn full_idempotent_in_range(
    ring: &Ring,
    a: Element,
    witness: Option<&FullnessWitness>,
) -> Result<FullIdempotent, ExchangeError> {
    if !ring.owns(a) {
        return Err(RingError::MixedRings.into());
    }
    if let Some(inv) = ring.is_unit(a) {
        return Ok(FullIdempotent {
            a,
            e: ring.one(),
            factor: inv,
            orientation: Orientation::Range,
            fullness: FullnessWitness { target: ring.one(), left: vec![ring.one()], right: vec![ring.one()] },
        });
    }
    let owned;
    let witness = match witness {
        Some(w) if w.target == a && w.replays(ring) => w,
        _ => {
            owned = ring.is_full(a).ok_or(ExchangeError::NotFull(a))?;
            &owned
        }
    };
    let ideals: Vec<Vec<Element>> = witness.left.iter().map(|&x| vec![ring.mul(x, a)]).collect();
    let system = orthogonal_idempotents(ring, &ideals)?;
    let mut transported = Vec::with_capacity(ideals.len());
    for ((&x, gens), &g) in witness.left.iter().zip(&ideals).zip(&system.idempotents) {
        // g = x a y' ; with y = y' g we get e_i = a y x idempotent, e_i R = g R.
        let y_prime = ring.right_member(gens, g).expect("g lies in x a R")[0];
        let y = ring.mul(y_prime, g);
        transported.push(ring.mul3(a, y, x));
    }
    let cover = covering_idempotent(ring, &transported)?;
    let e = cover.e;
    let factor = ring.right_member(&[a], e).ok_or(ExchangeError::NoCover)?[0];
    let fullness = ring.is_full(e).ok_or(ExchangeError::NoCover)?;
    Ok(FullIdempotent { a, e, factor, orientation: Orientation::Range, fullness })
}

/// Full idempotent `f` in `Ra`, computed in the opposite ring.
pub fn full_idempotent_in_corange(ring: &Ring, a: Element) -> Result<FullIdempotent, ExchangeError> {
    if !ring.owns(a) {
        return Err(RingError::MixedRings.into());
    }
    let op = ring.opposite();
    let found = full_idempotent_in_range(op, op.transfer(a), None).map_err(|err| match err {
        ExchangeError::NotFull(_) => ExchangeError::NotFull(a),
        other => other,
    })?;
    Ok(FullIdempotent {
        a,
        e: ring.transfer(found.e),
        factor: ring.transfer(found.factor),
        orientation: Orientation::Corange,
        fullness: FullnessWitness {
            target: ring.transfer(found.e),
            left: found.fullness.right.iter().map(|&x| ring.transfer(x)).collect(),
            right: found.fullness.left.iter().map(|&x| ring.transfer(x)).collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> Ring {
        Ring::preset("Z/6").unwrap()
    }

    #[test]
    fn exchange_examples() {
        let r = z6();
        let c = exchange_idempotent(&r, r.one()).unwrap();
        assert_eq!((c.e, c.x, c.y), (r.one(), r.one(), r.zero()));
        let c = exchange_idempotent(&r, r.int(3)).unwrap();
        assert_eq!(c.e, r.int(3));
        assert!(c.replays(&r));

        let ex = Ring::preset("Ex2.12(F2)").unwrap();
        let a1 = ex.basis(1);
        let c = exchange_idempotent(&ex, a1).unwrap();
        assert_eq!(c.e, ex.zero());
        assert!(c.replays(&ex));
        // (1 - a1)(1 + a1) = 1
        assert_eq!(ex.mul(ex.complement(a1), ex.add(ex.one(), a1)), ex.one());
    }

    #[test]
    fn finite_rings_pass_the_exchange_check() {
        for name in ["Z/6", "Ex2.12(F2)", "M2(F2)", "UT2(F2)"] {
            let r = Ring::preset(name).unwrap();
            let v = check_exchange(&r);
            assert!(v.holds(), "{name}");
            assert_eq!(v.checked, r.size());
        }
    }

    #[test]
    fn corner_induction_succeeds_without_fallback() {
        let m = Ring::preset("M2(F2)").unwrap();
        let (e11, e12, e21, e22) = (m.basis(0), m.basis(1), m.basis(2), m.basis(3));
        let ideals = vec![vec![m.add(e11, e12)], vec![e21, e22], vec![e12]];
        let es = corner_system(&m, m.one(), &ideals).unwrap();
        assert!(is_system(&m, &ideals, &es));
        let r = Ring::preset("Z/30").unwrap();
        let ideals = vec![vec![r.int(6)], vec![r.int(10)], vec![r.int(15)]];
        let es = corner_system(&r, r.one(), &ideals).unwrap();
        assert!(is_system(&r, &ideals, &es));
    }

    #[test]
    fn orthogonal_examples() {
        let r = z6();
        let s = orthogonal_idempotents(&r, &[vec![r.one()]]).unwrap();
        assert_eq!(s.idempotents, vec![r.one()]);
        let s = orthogonal_idempotents(&r, &[vec![r.int(3)], vec![r.int(4)]]).unwrap();
        assert_eq!(s.idempotents, vec![r.int(3), r.int(4)]);
        assert!(s.replays(&r));
        let s = orthogonal_idempotents(&r, &[vec![r.int(2)], vec![r.int(3)]]).unwrap();
        assert_eq!(s.idempotents, vec![r.int(4), r.int(3)]);
        assert!(s.replays(&r));
        assert_eq!(
            orthogonal_idempotents(&r, &[vec![r.int(2)], vec![r.int(4)]]),
            Err(ExchangeError::NotCovering)
        );
    }

    #[test]
    fn orthogonal_systems_in_matrix_ring() {
        let m = Ring::preset("M2(F2)").unwrap();
        let (e11, e12, e21, e22) = (m.basis(0), m.basis(1), m.basis(2), m.basis(3));
        let cases = [
            vec![vec![e11], vec![e22]],
            vec![vec![e11, e12], vec![e21], vec![e22]],
            vec![vec![m.add(e11, e21)], vec![e12], vec![m.one()]],
        ];
        for ideals in cases {
            let s = orthogonal_idempotents(&m, &ideals).unwrap();
            assert!(s.replays(&m), "{ideals:?}");
        }
    }

    #[test]
    fn covering_examples() {
        let r = z6();
        let c = covering_idempotent(&r, &[r.int(3)]).unwrap();
        assert_eq!(c.e, r.int(3));
        let c = covering_idempotent(&r, &[r.int(3), r.int(4)]).unwrap();
        assert_eq!(c.e, r.one());
        assert!(c.replays(&r));
        let c = covering_idempotent(&r, &[r.one(), r.int(3), r.int(4)]).unwrap();
        assert_eq!(c.e, r.one());
        assert_eq!(covering_idempotent(&r, &[r.int(2)]), Err(ExchangeError::NotIdempotent(r.int(2))));
    }

    #[test]
    fn full_idempotent_examples() {
        let r = z6();
        let f = full_idempotent_in_range(&r, r.int(5), None).unwrap();
        assert_eq!(f.e, r.one());
        assert_eq!(full_idempotent_in_range(&r, r.int(3), None), Err(ExchangeError::NotFull(r.int(3))));

        let m = Ring::preset("M2(F2)").unwrap();
        let e11 = m.basis(0);
        let f = full_idempotent_in_range(&m, e11, None).unwrap();
        assert!(f.replays(&m));
        let g = full_idempotent_in_corange(&m, e11).unwrap();
        assert!(g.replays(&m));
        assert_eq!(g.orientation, Orientation::Corange);
    }
}
