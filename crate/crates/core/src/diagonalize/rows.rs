//! Column operations on a single right unimodular row.

use crate::exchange::{full_idempotent_in_range, orthogonal_idempotents, ExchangeError};
use crate::matrix::{ElementaryOp, Mat, Transcript};
use crate::ring::{Element, FullnessWitness, Ring};

use super::DiagError;

/// The row `b_i = e_i a_i` reached from `a` by column operations, with
/// orthogonal idempotents `e_i` summing to 1, `a_i r_i a_i = b_i` and
/// `b_i r_i = e_i`. Hence `R = b_1 R + ... + b_n R` is direct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOrthogonalization {
    pub input: Vec<Element>,
    pub transcript: Transcript,
    pub entries: Vec<Element>,
    pub idempotents: Vec<Element>,
    pub factors: Vec<Element>,
}

impl RowOrthogonalization {
    pub fn replays(&self, ring: &Ring) -> bool {
        let n = self.input.len();
        let es = &self.idempotents;
        replays_row(ring, &self.input, &self.transcript, &self.entries)
            && es.len() == n
            && self.factors.len() == n
            && ring.sum(es.iter().copied()) == ring.one()
            && (0..n).all(|i| {
                let (a, b, e, r) = (self.input[i], self.entries[i], es[i], self.factors[i]);
                ring.is_idempotent(e)
                    && (0..n).all(|j| i == j || ring.is_zero(ring.mul(e, es[j])))
                    && ring.mul3(a, r, a) == b
                    && ring.mul(b, r) == e
                    && ring.mul(e, b) == b
            })
    }
}

fn replays_row(ring: &Ring, input: &[Element], transcript: &Transcript, entries: &[Element]) -> bool {
    let Ok(row) = Mat::new(ring, 1, input.len(), input.to_vec()) else {
        return false;
    };
    transcript.ops.iter().all(|op| op.side == crate::matrix::Side::Col)
        && transcript.apply(ring, &row).map(|m| m.entries() == entries).unwrap_or(false)
}

fn row_of(ring: &Ring, alpha: &Mat) -> Result<Vec<Element>, DiagError> {
    alpha.check_ring(ring)?;
    if alpha.rows() != 1 {
        return Err(DiagError::NotARow);
    }
    Ok(alpha.entries().to_vec())
}

/// Apply a column operation to a row, recording it unless trivial.
fn push(ring: &Ring, row: &mut [Element], t: &mut Transcript, op: ElementaryOp) {
    if ring.is_zero(op.coeff) {
        return;
    }
    row[op.target] = ring.add(row[op.target], ring.mul(row[op.source], op.coeff));
    t.push(op);
}

/// Split a unimodular row into a direct sum of principal right ideals.
pub fn orthogonalize_row(ring: &Ring, alpha: &Mat) -> Result<RowOrthogonalization, DiagError> {
    orthogonalize(ring, &row_of(ring, alpha)?)
}

pub(crate) fn orthogonalize(ring: &Ring, a: &[Element]) -> Result<RowOrthogonalization, DiagError> {
    let n = a.len();
    // A unit in front already splits the row as R + 0 + ... + 0.
    let (idempotents, factors) = if let Some(inv) = ring.is_unit(a[0]) {
        let mut es = vec![ring.zero(); n];
        let mut rs = vec![ring.zero(); n];
        es[0] = ring.one();
        rs[0] = inv;
        (es, rs)
    } else {
        let ideals: Vec<Vec<Element>> = a.iter().map(|&x| vec![x]).collect();
        let system = orthogonal_idempotents(ring, &ideals).map_err(|err| match err {
            ExchangeError::NotCovering => DiagError::NotUnimodular,
            other => other.into(),
        })?;
        let rs = system.memberships.iter().map(|m| m[0]).collect();
        (system.idempotents, rs)
    };
    let mut row = a.to_vec();
    let mut transcript = Transcript::new(ring, 1, n);
    for k in 0..n {
        let ak = row[k];
        for i in (0..n).filter(|&i| i != k) {
            let coeff = ring.neg(ring.mul(factors[i], ak));
            push(ring, &mut row, &mut transcript, ElementaryOp::col(k, i, coeff));
        }
    }
    let out = RowOrthogonalization { input: a.to_vec(), transcript, entries: row, idempotents, factors };
    debug_assert!(out.replays(ring));
    Ok(out)
}

/// A row whose first entry is full, reached by column operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingFull {
    pub orthogonalization: RowOrthogonalization,
    pub transcript: Transcript,
    pub entries: Vec<Element>,
    pub fullness: FullnessWitness,
}

impl LeadingFull {
    pub fn replays(&self, ring: &Ring) -> bool {
        let orth = &self.orthogonalization;
        orth.replays(ring)
            && replays_row(ring, &orth.input, &self.transcript, &self.entries)
            && self.fullness.target == self.entries[0]
            && self.fullness.replays(ring)
            && (1..self.entries.len()).all(|i| self.entries[i] == orth.entries[i])
    }
}

/// Orthogonalize, then add every other entry into the first. With
/// `b_1 = sum b_i` we get `sum e_i b_1 r_i = sum e_i = 1`.
pub fn fullify_leading_entry(ring: &Ring, alpha: &Mat) -> Result<LeadingFull, DiagError> {
    fullify(ring, &row_of(ring, alpha)?)
}

pub(crate) fn fullify(ring: &Ring, a: &[Element]) -> Result<LeadingFull, DiagError> {
    let n = a.len();
    if n < 2 {
        return Err(DiagError::RowTooShort);
    }
    let orth = orthogonalize(ring, a)?;
    let mut row = orth.entries.clone();
    let mut transcript = orth.transcript.clone();
    for i in 1..n {
        push(ring, &mut row, &mut transcript, ElementaryOp::col(0, i, ring.one()));
    }
    let (left, right) = orth
        .idempotents
        .iter()
        .zip(&orth.factors)
        .filter(|(e, _)| !ring.is_zero(**e))
        .map(|(&e, &r)| (e, r))
        .unzip();
    let fullness = FullnessWitness { target: row[0], left, right };
    Ok(LeadingFull { orthogonalization: orth, transcript, entries: row, fullness })
}

/// A row whose second entry `c` is regular with `c R = (1-g) R`, `g` a
/// full idempotent, and `c = left_factor * a_2` for the original `a_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondEntry {
    pub input: Vec<Element>,
    pub transcript: Transcript,
    pub entries: Vec<Element>,
    pub g: Element,
    /// `c * inner_inverse = 1 - g`, so `c * inner_inverse * c = c`.
    pub inner_inverse: Element,
    pub left_factor: Element,
    pub g_fullness: FullnessWitness,
}

impl SecondEntry {
    pub fn c(&self) -> Element {
        self.entries[1]
    }

    pub fn replays(&self, ring: &Ring) -> bool {
        let (c, g, y) = (self.c(), self.g, self.inner_inverse);
        let complement = ring.complement(g);
        replays_row(ring, &self.input, &self.transcript, &self.entries)
            && ring.is_idempotent(g)
            && ring.mul(c, y) == complement
            && ring.mul(complement, c) == c
            && ring.mul3(c, y, c) == c
            && ring.mul(self.left_factor, self.input[1]) == c
            && self.g_fullness.target == g
            && self.g_fullness.replays(ring)
    }
}

/// Make the second entry regular with a full complementary idempotent:
/// fullify the first entry, pick a full idempotent `e = b_1 s` in its
/// range, strip `e b_2` from the second entry, and orthogonalize again.
pub fn regularize_second_entry(ring: &Ring, alpha: &Mat) -> Result<SecondEntry, DiagError> {
    regularize(ring, &row_of(ring, alpha)?)
}

pub(crate) fn regularize(ring: &Ring, a: &[Element]) -> Result<SecondEntry, DiagError> {
    let lead = fullify(ring, a)?;
    let mut row = lead.entries.clone();
    let mut transcript = lead.transcript.clone();
    let full = full_idempotent_in_range(ring, row[0], Some(&lead.fullness))?;
    let e = full.e;
    let coeff = ring.neg(ring.mul(full.factor, row[1]));
    push(ring, &mut row, &mut transcript, ElementaryOp::col(1, 0, coeff));

    let orth = orthogonalize(ring, &row)?;
    transcript.ops.extend_from_slice(&orth.transcript.ops);
    let second = orth.idempotents[1];
    let g = ring.complement(second);
    if ring.mul(e, g) != e {
        return Err(DiagError::Internal("full idempotent not absorbed by g".into()));
    }
    let g_fullness = FullnessWitness {
        target: g,
        left: full.fullness.left.iter().map(|&x| ring.mul(x, e)).collect(),
        right: full.fullness.right.clone(),
    };
    let left_factor = ring.mul3(second, ring.complement(e), lead.orthogonalization.idempotents[1]);
    let out = SecondEntry {
        input: a.to_vec(),
        transcript,
        entries: orth.entries,
        g,
        inner_inverse: orth.factors[1],
        left_factor,
        g_fullness,
    };
    if !out.replays(ring) {
        return Err(DiagError::Internal("second-entry certificate does not replay".into()));
    }
    Ok(out)
}
