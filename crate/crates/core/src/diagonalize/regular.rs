use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ElementaryOp, GeDecomposition, Mat, Side, Transcript};
use crate::ring::{Element, Ring};

use super::reduce::ge_diagonalize;
use super::DiagError;

/// Limits for the search of invertible `P, Q` with `P A Q` diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Left factors `P` tried.
    pub max_left: usize,
    /// Right candidates `Q` tested for invertibility, over all `P`.
    pub max_candidates: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_left: 4096, max_candidates: 1 << 21, seed: 0 }
    }
}

/// Row and column transcripts taking `input` to the diagonal matrix
/// `diagonal`. Unlike [`GeDecomposition`] the diagonal may be singular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularDiagonalization {
    pub input: Mat,
    pub left: Transcript,
    pub right: Transcript,
    pub diagonal: Mat,
}

impl RegularDiagonalization {
    pub fn replays(&self, ring: &Ring) -> bool {
        let sided = |t: &Transcript, side| t.ops.iter().all(|op| op.side == side);
        sided(&self.left, Side::Row)
            && sided(&self.right, Side::Col)
            && self.diagonal.is_diagonal()
            && self
                .left
                .apply(ring, &self.input)
                .and_then(|m| self.right.apply(ring, &m))
                .map(|m| m == self.diagonal)
                .unwrap_or(false)
    }
}

impl From<GeDecomposition> for RegularDiagonalization {
    fn from(d: GeDecomposition) -> Self {
        RegularDiagonalization { input: d.input, left: d.left, right: d.right, diagonal: d.diagonal }
    }
}

/// An inner inverse `Y` with `A Y A = A`.
pub fn matrix_inner_inverse(ring: &Ring, a: &Mat) -> Option<Mat> {
    let (r, c) = (a.rows(), a.cols());
    let y = ring.solve_additive(
        c * r,
        |y| {
            let y = Mat::new(ring, c, r, y.to_vec()).expect("shape");
            a.mul(ring, &y).and_then(|ay| ay.mul(ring, a)).expect("shape").entries().to_vec()
        },
        a.entries(),
    )?;
    Mat::new(ring, c, r, y).ok()
}

/// Diagonalize a regular square matrix by row and column operations.
///
/// Invertible `P, Q` with `P A Q` diagonal are found by search: for each
/// `P`, the `Q` making `P A Q` diagonal form an additive subgroup, which
/// is enumerated for an invertible member. Both factors are then reduced
/// to elementary form and their diagonal parts discarded. `Ok(None)`
/// means the budget ran out.
pub fn diagonalize_regular(
    ring: &Ring,
    a: &Mat,
    budget: &SearchBudget,
) -> Result<Option<RegularDiagonalization>, DiagError> {
    a.check_ring(ring)?;
    if !a.is_square() {
        return Err(DiagError::NotSquare);
    }
    let n = a.rows();
    if a.is_diagonal() {
        let empty = Transcript::new(ring, n, n);
        return Ok(Some(RegularDiagonalization {
            input: a.clone(),
            left: empty.clone(),
            right: empty,
            diagonal: a.clone(),
        }));
    }
    if a.invert(ring).is_some() {
        return ge_diagonalize(ring, a).map(|d| Some(d.into()));
    }
    if matrix_inner_inverse(ring, a).is_none() {
        return Err(DiagError::NotRegularMatrix);
    }
    let Some((p, q)) = find_pair(ring, a, budget) else {
        return Ok(None);
    };
    let dp = ge_diagonalize(ring, &p)?;
    let dq = ge_diagonalize(ring, &q)?;
    let left = left_elementary_part(ring, &dp);
    let right = right_elementary_part(ring, &dq);
    let diagonal = right.apply(ring, &left.apply(ring, a)?)?;
    let out = RegularDiagonalization { input: a.clone(), left, right, diagonal };
    if !out.replays(ring) {
        return Err(DiagError::Internal("elementary parts of P and Q do not diagonalize".into()));
    }
    Ok(Some(out))
}

/// With `E P F = D`, `P = D V` for the elementary `V = (D^-1 E^-1 D) F^-1`;
/// returns `V` as row operations.
fn left_elementary_part(ring: &Ring, d: &GeDecomposition) -> Transcript {
    let n = d.input.rows();
    let delta = d.diagonal.diagonal_entries();
    let mut t = Transcript::new(ring, n, n);
    // F^-1 acting from the left: X = I + r e(s, t) becomes I - r e(s, t).
    for op in &d.right.ops {
        t.push(ElementaryOp::row(op.source, op.target, ring.neg(op.coeff)));
    }
    for op in d.left.ops.iter().rev() {
        let coeff = ring.neg(ring.mul3(d.inverses[op.target], op.coeff, delta[op.source]));
        t.push(ElementaryOp::row(op.target, op.source, coeff));
    }
    t
}

/// With `E Q F = D`, `Q = V D` for the elementary `V = E^-1 (D F^-1 D^-1)`;
/// returns `V` as column operations.
fn right_elementary_part(ring: &Ring, d: &GeDecomposition) -> Transcript {
    let n = d.input.rows();
    let delta = d.diagonal.diagonal_entries();
    let mut t = Transcript::new(ring, n, n);
    // E^-1 acting from the right: Y = I + r e(t, s) becomes I - r e(t, s).
    for op in &d.left.ops {
        t.push(ElementaryOp::col(op.source, op.target, ring.neg(op.coeff)));
    }
    for op in d.right.ops.iter().rev() {
        let coeff = ring.neg(ring.mul3(delta[op.source], op.coeff, d.inverses[op.target]));
        t.push(ElementaryOp::col(op.target, op.source, coeff));
    }
    t
}

fn find_pair(ring: &Ring, a: &Mat, budget: &SearchBudget) -> Option<(Mat, Mat)> {
    let n = a.rows();
    let mut remaining = budget.max_candidates;
    let identity = Mat::identity(ring, n);
    let exhaustive = ring.size() <= 16 && n == 2;
    let total = (ring.size() as u64).pow((n * n) as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut canonical = 0u64;
    for attempt in 0..budget.max_left {
        let p = if attempt == 0 {
            identity.clone()
        } else if exhaustive {
            loop {
                if canonical >= total {
                    return None;
                }
                let m = matrix_at(ring, n, canonical);
                canonical += 1;
                if m != identity && m.invert(ring).is_some() {
                    break m;
                }
            }
        } else {
            Mat::random_invertible(ring, n, &mut rng)
        };
        let pa = p.mul(ring, a).ok()?;
        if let Some(q) = invertible_in_diagonalizers(ring, &pa, &mut remaining) {
            return Some((p, q));
        }
        if remaining == 0 {
            return None;
        }
    }
    None
}

fn matrix_at(ring: &Ring, n: usize, mut code: u64) -> Mat {
    let s = ring.size() as u64;
    let mut entries = vec![ring.zero(); n * n];
    for slot in (0..n * n).rev() {
        entries[slot] = ring.element_at((code % s) as usize);
        code /= s;
    }
    Mat::new(ring, n, n, entries).expect("shape")
}

/// Search `{ Q : B Q diagonal }` for an invertible member.
fn invertible_in_diagonalizers(ring: &Ring, b: &Mat, remaining: &mut u64) -> Option<Mat> {
    let n = b.rows();
    let off_diagonal = |q: &[Element]| {
        let mut out = Vec::with_capacity(n * n - n);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                out.push(ring.sum((0..n).map(|k| ring.mul(b.get(i, k), q[k * n + j]))));
            }
        }
        out
    };
    let gens = ring.kernel_additive(n * n, off_diagonal);
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let zero = vec![ring.zero(); n * n];
    seen.insert(zero.clone());
    let mut queue = std::collections::VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y: Vec<Element> = x.iter().zip(g).map(|(&u, &v)| ring.add(u, v)).collect();
            if !seen.insert(y.clone()) {
                continue;
            }
            if *remaining == 0 {
                return None;
            }
            *remaining -= 1;
            let q = Mat::new(ring, n, n, y.clone()).expect("shape");
            if q.invert(ring).is_some() {
                return Some(q);
            }
            queue.push_back(y);
        }
    }
    None
}

/// Every product of elementary `n x n` matrices, or `None` past `cap`.
pub fn elementary_group(ring: &Ring, n: usize, cap: usize) -> Option<Vec<Mat>> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for r in ring.elements().skip(1) {
                gens.push(ElementaryOp::row(i, j, r).matrix(ring, n));
            }
        }
    }
    let identity = Mat::identity(ring, n);
    let mut seen = HashSet::from([identity.clone()]);
    let mut order = vec![identity];
    let mut next = 0;
    while next < order.len() {
        let x = order[next].clone();
        next += 1;
        for g in &gens {
            let y = g.mul(ring, &x).ok()?;
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(y);
            }
        }
    }
    Some(order)
}
