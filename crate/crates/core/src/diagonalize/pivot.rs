use crate::matrix::{move_entry, ElementaryOp, Mat, Side, Transcript};
use crate::ring::{Element, FullnessWitness, Ring};

use super::rows::regularize;
use super::DiagError;

/// Operations bringing a regular entry `d` to position (1, 1) together
/// with idempotents `p, q` such that `dR = (1-p)R` and `Rd = R(1-q)`.
///
/// When `d` is already a unit, `p = q = 0` and no fullness witnesses are
/// given; otherwise both `p` and `q` come with fullness witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotCertificate {
    pub input: Mat,
    pub transcript: Transcript,
    pub d: Element,
    pub p: Element,
    pub q: Element,
    /// `d * range_factor = 1 - p`.
    pub range_factor: Element,
    /// `corange_factor * d = 1 - q`.
    pub corange_factor: Element,
    pub p_fullness: Option<FullnessWitness>,
    pub q_fullness: Option<FullnessWitness>,
}

impl PivotCertificate {
    pub fn replays(&self, ring: &Ring) -> bool {
        let Ok(m) = self.transcript.apply(ring, &self.input) else {
            return false;
        };
        let (d, p, q) = (self.d, self.p, self.q);
        let (not_p, not_q) = (ring.complement(p), ring.complement(q));
        let ideals = m.get(0, 0) == d
            && ring.is_idempotent(p)
            && ring.is_idempotent(q)
            && ring.mul(d, self.range_factor) == not_p
            && ring.mul(not_p, d) == d
            && ring.mul(self.corange_factor, d) == not_q
            && ring.mul(d, not_q) == d
            && ring.mul3(d, self.range_factor, d) == d;
        let full = |w: &Option<FullnessWitness>, target| match w {
            Some(w) => w.target == target && w.replays(ring),
            None => false,
        };
        let fullness = match (&self.p_fullness, &self.q_fullness) {
            (None, None) => ring.is_unit(d).is_some() && ring.is_zero(p) && ring.is_zero(q),
            _ => full(&self.p_fullness, p) && full(&self.q_fullness, q),
        };
        ideals && fullness
    }

    /// The unit-regular factorization of the pivot.
    pub fn factor(&self, ring: &Ring) -> Result<UnitRegularFactorization, DiagError> {
        unit_regular_factorization(ring, self.d)
    }
}

/// Put a regular entry with full complementary idempotents at (1, 1).
pub fn prepare_pivot(ring: &Ring, a: &Mat) -> Result<PivotCertificate, DiagError> {
    a.check_ring(ring)?;
    if !a.is_square() {
        return Err(DiagError::NotSquare);
    }
    if a.rows() < 2 {
        return Err(DiagError::RowTooShort);
    }
    if a.invert(ring).is_none() {
        return Err(DiagError::NotInvertible);
    }
    pivot(ring, a)
}

fn apply_all(ring: &Ring, m: &mut Mat, all: &mut Transcript, ops: &[ElementaryOp]) {
    for op in ops {
        if !ring.is_zero(op.coeff) {
            op.apply_unchecked(ring, m);
            all.push(*op);
        }
    }
}

pub(crate) fn pivot(ring: &Ring, a: &Mat) -> Result<PivotCertificate, DiagError> {
    let n = a.rows();
    let mut m = a.clone();
    let mut transcript = Transcript::new(ring, n, n);
    let corner = m.get(0, 0);
    if let Some(inv) = ring.is_unit(corner) {
        return Ok(PivotCertificate {
            input: a.clone(),
            transcript,
            d: corner,
            p: ring.zero(),
            q: ring.zero(),
            range_factor: inv,
            corange_factor: inv,
            p_fullness: None,
            q_fullness: None,
        });
    }

    // Regular (1, 2) entry c with cR = (1-g)R, g full.
    let first = regularize(ring, m.row(0))?;
    apply_all(ring, &mut m, &mut transcript, &first.transcript.ops);
    let (c, g) = (first.c(), first.g);
    apply_all(ring, &mut m, &mut transcript, &move_entry(ring, n, n, (0, 1), (1, 0))?.ops);
    debug_assert_eq!(m.get(1, 0), c);

    // The same on the first column, computed in the opposite ring where
    // row operations become column operations.
    let op = ring.opposite();
    let column: Vec<Element> = m.column(0).iter().map(|&x| op.transfer(x)).collect();
    let second = regularize(op, &column)?;
    let row_ops: Vec<ElementaryOp> = second
        .transcript
        .ops
        .iter()
        .map(|o| ElementaryOp { side: Side::Row, target: o.target, source: o.source, coeff: ring.transfer(o.coeff) })
        .collect();
    apply_all(ring, &mut m, &mut transcript, &row_ops);
    let d = ring.transfer(second.c());
    debug_assert_eq!(m.get(1, 0), d);
    let q = ring.transfer(second.g);
    let corange_factor = ring.transfer(second.inner_inverse);
    let q_fullness = FullnessWitness {
        target: q,
        left: second.g_fullness.right.iter().map(|&x| ring.transfer(x)).collect(),
        right: second.g_fullness.left.iter().map(|&x| ring.transfer(x)).collect(),
    };

    // d lies in cR, so (1-p)R = dR sits inside (1-g)R and g = g p.
    let range_factor = corange_factor;
    let p = ring.complement(ring.mul(d, range_factor));
    if ring.mul(g, p) != g {
        return Err(DiagError::Internal(format!("pivot idempotent does not absorb g (c = {c:?})")));
    }
    let p_fullness = FullnessWitness {
        target: p,
        left: first.g_fullness.left.iter().map(|&x| ring.mul(x, g)).collect(),
        right: first.g_fullness.right.clone(),
    };
    apply_all(ring, &mut m, &mut transcript, &move_entry(ring, n, n, (1, 0), (0, 0))?.ops);

    let cert = PivotCertificate {
        input: a.clone(),
        transcript,
        d,
        p,
        q,
        range_factor,
        corange_factor,
        p_fullness: Some(p_fullness),
        q_fullness: Some(q_fullness),
    };
    if !cert.replays(ring) {
        return Err(DiagError::Internal("pivot certificate does not replay".into()));
    }
    Ok(cert)
}

/// `d = u e` with `u` a unit and `e` idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRegularFactorization {
    pub d: Element,
    pub u: Element,
    pub u_inverse: Element,
    pub e: Element,
}

impl UnitRegularFactorization {
    pub fn replays(&self, ring: &Ring) -> bool {
        ring.mul(self.u, self.u_inverse) == ring.one()
            && ring.mul(self.u_inverse, self.u) == ring.one()
            && ring.is_idempotent(self.e)
            && ring.mul(self.u, self.e) == self.d
    }
}

/// First unit `u` in canonical order with `u^-1 d` idempotent.
pub fn unit_regular_factorization(ring: &Ring, d: Element) -> Result<UnitRegularFactorization, DiagError> {
    if !ring.owns(d) {
        return Err(crate::ring::RingError::MixedRings.into());
    }
    for &u in ring.units() {
        let u_inverse = ring.is_unit(u).expect("listed as a unit");
        let e = ring.mul(u_inverse, d);
        if ring.is_idempotent(e) {
            return Ok(UnitRegularFactorization { d, u, u_inverse, e });
        }
    }
    Err(DiagError::NoUnit(d))
}
