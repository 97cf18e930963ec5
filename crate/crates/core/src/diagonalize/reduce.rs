use crate::matrix::{move_entry, ElementaryOp, GeDecomposition, Mat, Side, Transcript};
use crate::ring::{Element, Ring};

use super::pivot::{pivot, unit_regular_factorization, UnitRegularFactorization};
use super::DiagError;

/// Use an idempotent entry to reach `[[1, 0], [0, *]]`: move it to
/// (1, 1), strip `e b_i` from the rest of the first row, add `1 - e`
/// into the corner from the remaining entries, then clear.
pub fn clear_with_idempotent(ring: &Ring, a: &Mat, pos: (usize, usize)) -> Result<Transcript, DiagError> {
    a.check_ring(ring)?;
    if !a.is_square() {
        return Err(DiagError::NotSquare);
    }
    if pos.0 >= a.rows() || pos.1 >= a.cols() {
        return Err(DiagError::Matrix(crate::matrix::MatrixError::BadIndex {
            index: pos.0.max(pos.1),
            size: a.rows(),
        }));
    }
    if !ring.is_idempotent(a.get(pos.0, pos.1)) {
        return Err(DiagError::NotIdempotentEntry);
    }
    if a.invert(ring).is_none() {
        return Err(DiagError::NotInvertible);
    }
    clear(ring, a, pos)
}

pub(crate) fn clear(ring: &Ring, a: &Mat, pos: (usize, usize)) -> Result<Transcript, DiagError> {
    let n = a.rows();
    let mut m = a.clone();
    let mut t = Transcript::new(ring, n, n);
    let run = |m: &mut Mat, t: &mut Transcript, op: ElementaryOp| {
        if !ring.is_zero(op.coeff) {
            op.apply_unchecked(ring, m);
            t.push(op);
        }
    };
    for op in move_entry(ring, n, n, pos, (0, 0))?.ops {
        run(&mut m, &mut t, op);
    }
    let e = m.get(0, 0);
    if n == 1 {
        return if e == ring.one() { Ok(t) } else { Err(DiagError::NotInvertible) };
    }
    if e != ring.one() {
        for i in 1..n {
            let b = m.get(0, i);
            run(&mut m, &mut t, ElementaryOp::col(i, 0, ring.neg(b)));
        }
        let rest: Vec<Element> = m.row(0)[1..].to_vec();
        let x = ring.right_member(&rest, ring.complement(e)).ok_or(DiagError::NotInvertible)?;
        for (i, &xi) in x.iter().enumerate() {
            run(&mut m, &mut t, ElementaryOp::col(0, i + 1, xi));
        }
        debug_assert_eq!(m.get(0, 0), ring.one());
    }
    for i in 1..n {
        let b = m.get(0, i);
        run(&mut m, &mut t, ElementaryOp::col(i, 0, ring.neg(b)));
    }
    for i in 1..n {
        let b = m.get(i, 0);
        run(&mut m, &mut t, ElementaryOp::row(i, 0, ring.neg(b)));
    }
    Ok(t)
}

/// Working state `E A F = Delta M`: `E`, `F` are the recorded row and
/// column transcripts, `Delta` a diagonal of units, `M` the matrix still
/// being reduced.
struct Reducer<'r> {
    ring: &'r Ring,
    m: Mat,
    delta: Vec<Element>,
    delta_inv: Vec<Element>,
    left: Transcript,
    right: Transcript,
}

impl<'r> Reducer<'r> {
    fn new(ring: &'r Ring, a: &Mat) -> Self {
        let n = a.rows();
        Reducer {
            ring,
            m: a.clone(),
            delta: vec![ring.one(); n],
            delta_inv: vec![ring.one(); n],
            left: Transcript::new(ring, n, n),
            right: Transcript::new(ring, n, n),
        }
    }

    /// Apply an operation on `M` and record its effect on `A`: row
    /// operations pass through `Delta` as `delta_i r delta_j^-1`.
    fn apply(&mut self, op: ElementaryOp) {
        let ring = self.ring;
        if ring.is_zero(op.coeff) {
            return;
        }
        op.apply_unchecked(ring, &mut self.m);
        match op.side {
            Side::Row => {
                let coeff = ring.mul3(self.delta[op.target], op.coeff, self.delta_inv[op.source]);
                self.left.push(ElementaryOp { coeff, ..op });
            }
            Side::Col => self.right.push(op),
        }
    }

    fn apply_embedded(&mut self, t: &Transcript, offset: usize) {
        for op in &t.ops {
            self.apply(ElementaryOp { target: op.target + offset, source: op.source + offset, ..*op });
        }
    }

    /// `M <- diag(.., u^-1, ..) M`, `Delta <- Delta diag(.., u, ..)`.
    fn scale_row(&mut self, k: usize, f: &UnitRegularFactorization) {
        let ring = self.ring;
        for j in 0..self.m.cols() {
            let v = ring.mul(f.u_inverse, self.m.get(k, j));
            self.m.set(k, j, v);
        }
        self.delta[k] = ring.mul(self.delta[k], f.u);
        self.delta_inv[k] = ring.mul(f.u_inverse, self.delta_inv[k]);
    }

    fn corner(&self, k: usize) -> Mat {
        let n = self.m.rows();
        let entries = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).map(|(i, j)| self.m.get(i, j)).collect();
        Mat::new(self.ring, n - k, n - k, entries).expect("corner of a square matrix")
    }
}

/// Reduce an invertible matrix to an invertible diagonal matrix by
/// elementary row and column operations.
///
/// Each step brings a regular pivot `d` to the corner, factors
/// `d = u e`, divides the row by `u`, clears with the idempotent `e`, and
/// recurses on the remaining block.
pub fn ge_diagonalize(ring: &Ring, a: &Mat) -> Result<GeDecomposition, DiagError> {
    a.check_ring(ring)?;
    if !a.is_square() {
        return Err(DiagError::NotSquare);
    }
    if a.invert(ring).is_none() {
        return Err(DiagError::NotInvertible);
    }
    let n = a.rows();
    let mut state = Reducer::new(ring, a);
    for k in 0..n {
        let corner = state.corner(k);
        let factorization = if n - k == 1 {
            let d = corner.get(0, 0);
            let inv = ring.is_unit(d).ok_or(DiagError::NotInvertible)?;
            UnitRegularFactorization { d, u: d, u_inverse: inv, e: ring.one() }
        } else {
            let cert = pivot(ring, &corner)?;
            state.apply_embedded(&cert.transcript, k);
            match ring.is_unit(cert.d) {
                Some(inv) => UnitRegularFactorization { d: cert.d, u: cert.d, u_inverse: inv, e: ring.one() },
                None => unit_regular_factorization(ring, cert.d)?,
            }
        };
        state.scale_row(k, &factorization);
        let corner = state.corner(k);
        let t = clear(ring, &corner, (0, 0))?;
        state.apply_embedded(&t, k);
    }
    if state.m != Mat::identity(ring, n) {
        return Err(DiagError::Internal("reduction did not reach the identity".into()));
    }
    let decomposition = GeDecomposition {
        input: a.clone(),
        left: state.left,
        right: state.right,
        diagonal: Mat::diagonal(ring, &state.delta),
        inverses: state.delta_inv,
    };
    if let Some(failure) = decomposition.replay_check(ring).failure {
        return Err(DiagError::Internal(format!("certificate fails replay: {failure}")));
    }
    Ok(decomposition)
}
