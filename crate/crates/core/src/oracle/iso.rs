use std::collections::{HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::Mat;
use crate::ring::{Element, Ring};

use super::{check_idempotent, invariant, IsoBudget, OracleError};

/// `X: Q R^k -> P R^m` and `Y` back, with `X Y = P`, `Y X = Q`,
/// `X = P X Q`, `Y = Q Y P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub x: Mat,
    pub y: Mat,
}

impl IsoWitness {
    pub fn replays(&self, ring: &Ring, p: &Mat, q: &Mat) -> bool {
        let (x, y) = (&self.x, &self.y);
        let sandwich = |a: &Mat, m: &Mat, b: &Mat| a.mul(ring, m).and_then(|am| am.mul(ring, b));
        x.mul(ring, y).map(|xy| xy == *p).unwrap_or(false)
            && y.mul(ring, x).map(|yx| yx == *q).unwrap_or(false)
            && sandwich(p, x, q).map(|m| m == *x).unwrap_or(false)
            && sandwich(q, y, p).map(|m| m == *y).unwrap_or(false)
    }
}

/// `P R^m` as a direct summand of `Q R^k`: `X = Q X P`, `Y = P Y Q`,
/// `Y X = P`. Then `X Y` is an idempotent below `Q` with image `X P R^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandWitness {
    pub x: Mat,
    pub y: Mat,
}

impl SummandWitness {
    pub fn replays(&self, ring: &Ring, p: &Mat, q: &Mat) -> bool {
        let (x, y) = (&self.x, &self.y);
        let sandwich = |a: &Mat, m: &Mat, b: &Mat| a.mul(ring, m).and_then(|am| am.mul(ring, b));
        y.mul(ring, x).map(|yx| yx == *p).unwrap_or(false)
            && sandwich(q, x, p).map(|m| m == *x).unwrap_or(false)
            && sandwich(p, y, q).map(|m| m == *y).unwrap_or(false)
    }
}

/// The additive group `{ A Z B }`.
struct HomGroup<'a> {
    ring: &'a Ring,
    a: &'a Mat,
    b: &'a Mat,
}

impl HomGroup<'_> {
    fn at(&self, z: &Mat) -> Mat {
        self.a.mul(self.ring, z).and_then(|az| az.mul(self.ring, self.b)).expect("shapes agree")
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Mat {
        self.at(&Mat::random(self.ring, self.a.cols(), self.b.rows(), rng))
    }

    fn generators(&self) -> Vec<Vec<Element>> {
        let ring = self.ring;
        let (r, c) = (self.a.cols(), self.b.rows());
        let mut gens = Vec::new();
        for slot in 0..r * c {
            for t in 0..ring.dim() {
                let mut z = Mat::zero(ring, r, c);
                z.set(slot / c, slot % c, ring.basis(t));
                gens.push(self.at(&z).entries().to_vec());
            }
        }
        gens
    }

    fn order(&self, gens: &[Vec<Element>]) -> u64 {
        self.ring.span_order(self.a.rows() * self.b.cols(), gens)
    }

    /// Visit every member until `f` returns a value.
    fn search<T>(&self, gens: &[Vec<Element>], mut f: impl FnMut(&Mat) -> Option<T>) -> Option<T> {
        let ring = self.ring;
        let (rows, cols) = (self.a.rows(), self.b.cols());
        let zero = vec![ring.zero(); rows * cols];
        let mut seen = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(v) = queue.pop_front() {
            if let Some(out) = f(&Mat::new(ring, rows, cols, v.clone()).expect("shape")) {
                return Some(out);
            }
            for g in gens {
                let w: Vec<Element> = v.iter().zip(g).map(|(&s, &t)| ring.add(s, t)).collect();
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Random members first, then the whole group if it fits the budget.
fn hom_search<T>(
    hom: &HomGroup<'_>,
    budget: &IsoBudget,
    mut complete: impl FnMut(&Mat) -> Option<T>,
) -> Result<Option<T>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.random_tries {
        if let Some(out) = complete(&hom.random(&mut rng)) {
            return Ok(Some(out));
        }
    }
    let gens = hom.generators();
    if hom.order(&gens) > budget.enumeration_cap {
        return Err(OracleError::BudgetExhausted);
    }
    Ok(hom.search(&gens, complete))
}

fn solve_matrix(ring: &Ring, rows: usize, cols: usize, map: impl Fn(&Mat) -> Vec<Element>, target: &[Element]) -> Option<Mat> {
    let flat = ring.solve_additive(
        rows * cols,
        |v| map(&Mat::new(ring, rows, cols, v.to_vec()).expect("shape")),
        target,
    )?;
    Mat::new(ring, rows, cols, flat).ok()
}

/// Decide `P R^m ≅ Q R^k`.
///
/// `Ok(None)` means absence is proven, either because the invariants
/// differ or because every homomorphism was tried; a search that stops
/// short returns [`OracleError::BudgetExhausted`].
pub fn module_iso(ring: &Ring, p: &Mat, q: &Mat, budget: &IsoBudget) -> Result<Option<IsoWitness>, OracleError> {
    check_idempotent(ring, p)?;
    check_idempotent(ring, q)?;
    if p != q && invariant(ring, p) != invariant(ring, q) {
        return Ok(None);
    }
    search_iso(ring, p, q, budget)
}

/// [`module_iso`] without input checks or the invariant test.
pub(super) fn search_iso(ring: &Ring, p: &Mat, q: &Mat, budget: &IsoBudget) -> Result<Option<IsoWitness>, OracleError> {
    if p == q {
        return Ok(Some(IsoWitness { x: p.clone(), y: p.clone() }));
    }
    let (m, k) = (p.rows(), q.rows());
    let target: Vec<Element> = p.entries().iter().chain(q.entries()).copied().collect();
    let hom = HomGroup { ring, a: p, b: q };
    hom_search(&hom, budget, |x| {
        let y = solve_matrix(
            ring,
            k,
            m,
            |z| {
                let y = q.mul(ring, z).and_then(|qz| qz.mul(ring, p)).expect("shape");
                let mut out = x.mul(ring, &y).expect("shape").entries().to_vec();
                out.extend_from_slice(y.mul(ring, x).expect("shape").entries());
                out
            },
            &target,
        )?;
        let y = q.mul(ring, &y).and_then(|qy| qy.mul(ring, p)).ok()?;
        Some(IsoWitness { x: x.clone(), y })
    })
}

/// Decide `P R^m ≲⊕ Q R^k`, with the same conventions as [`module_iso`].
pub fn subequiv(ring: &Ring, p: &Mat, q: &Mat, budget: &IsoBudget) -> Result<Option<SummandWitness>, OracleError> {
    check_idempotent(ring, p)?;
    check_idempotent(ring, q)?;
    let (m, k) = (p.rows(), q.rows());
    if p == q {
        return Ok(Some(SummandWitness { x: p.clone(), y: p.clone() }));
    }
    if p.entries().iter().all(|&x| ring.is_zero(x)) {
        return Ok(Some(SummandWitness { x: Mat::zero(ring, k, m), y: Mat::zero(ring, m, k) }));
    }
    let (vp, vq) = (invariant(ring, p), invariant(ring, q));
    if vp.iter().zip(&vq).any(|(a, b)| b % a != 0) {
        return Ok(None);
    }
    let hom = HomGroup { ring, a: q, b: p };
    hom_search(&hom, budget, |x| {
        let y = solve_matrix(
            ring,
            m,
            k,
            |z| {
                let y = p.mul(ring, z).and_then(|pz| pz.mul(ring, q)).expect("shape");
                y.mul(ring, x).expect("shape").entries().to_vec()
            },
            p.entries(),
        )?;
        let y = p.mul(ring, &y).and_then(|py| py.mul(ring, q)).ok()?;
        Some(SummandWitness { x: x.clone(), y })
    })
}
