use crate::ring::{Element, Ring, RingId};

use super::{Mat, MatrixError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Row,
    Col,
}

/// One transvection. Row: `row[target] += coeff * row[source]`, that is
/// left multiplication by `I + coeff e(target, source)`. Col:
/// `col[target] += col[source] * coeff`, right multiplication by
/// `I + coeff e(source, target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryOp {
    pub side: Side,
    pub target: usize,
    pub source: usize,
    pub coeff: Element,
}

impl ElementaryOp {
    pub fn row(target: usize, source: usize, coeff: Element) -> Self {
        ElementaryOp { side: Side::Row, target, source, coeff }
    }

    pub fn col(target: usize, source: usize, coeff: Element) -> Self {
        ElementaryOp { side: Side::Col, target, source, coeff }
    }

    /// The operation undoing this one.
    pub fn inverse(&self, ring: &Ring) -> Self {
        ElementaryOp { coeff: ring.neg(self.coeff), ..*self }
    }

    /// The elementary matrix this operation multiplies by.
    pub fn matrix(&self, ring: &Ring, n: usize) -> Mat {
        let mut m = Mat::identity(ring, n);
        let (i, j) = match self.side {
            Side::Row => (self.target, self.source),
            Side::Col => (self.source, self.target),
        };
        m.set(i, j, self.coeff);
        m
    }

    fn validate(&self, rows: usize, cols: usize) -> Result<(), MatrixError> {
        let size = match self.side {
            Side::Row => rows,
            Side::Col => cols,
        };
        for index in [self.target, self.source] {
            if index >= size {
                return Err(MatrixError::BadIndex { index, size });
            }
        }
        if self.target == self.source {
            return Err(MatrixError::DegenerateOp(self.target));
        }
        Ok(())
    }

    /// Apply in place; the caller has validated indices and ring.
    pub(crate) fn apply_unchecked(&self, ring: &Ring, m: &mut Mat) {
        if ring.is_zero(self.coeff) {
            return;
        }
        match self.side {
            Side::Row => {
                for k in 0..m.cols() {
                    let v = ring.add(m.get(self.target, k), ring.mul(self.coeff, m.get(self.source, k)));
                    m.set(self.target, k, v);
                }
            }
            Side::Col => {
                for k in 0..m.rows() {
                    let v = ring.add(m.get(k, self.target), ring.mul(m.get(k, self.source), self.coeff));
                    m.set(k, self.target, v);
                }
            }
        }
    }

    pub fn apply(&self, ring: &Ring, m: &mut Mat) -> Result<(), MatrixError> {
        m.check_ring(ring)?;
        if !ring.owns(self.coeff) {
            return Err(crate::ring::RingError::MixedRings.into());
        }
        self.validate(m.rows(), m.cols())?;
        self.apply_unchecked(ring, m);
        Ok(())
    }

    fn shifted(&self, offset: usize) -> Self {
        ElementaryOp { target: self.target + offset, source: self.source + offset, ..*self }
    }
}

/// Ordered elementary operations for matrices of a fixed shape over a
/// fixed ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub ring: RingId,
    pub rows: usize,
    pub cols: usize,
    pub ops: Vec<ElementaryOp>,
}

impl Transcript {
    pub fn new(ring: &Ring, rows: usize, cols: usize) -> Self {
        Transcript { ring: ring.id(), rows, cols, ops: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: ElementaryOp) {
        self.ops.push(op);
    }

    /// Append `other`, whose shape must match.
    pub fn extend(&mut self, other: &Transcript) {
        assert_eq!((self.ring, self.rows, self.cols), (other.ring, other.rows, other.cols));
        self.ops.extend_from_slice(&other.ops);
    }

    /// Append `other`, acting on the trailing block of a larger matrix.
    pub fn extend_embedded(&mut self, other: &Transcript, offset: usize) {
        assert_eq!(self.ring, other.ring);
        assert_eq!((self.rows - offset, self.cols - offset), (other.rows, other.cols));
        self.ops.extend(other.ops.iter().map(|op| op.shifted(offset)));
    }

    /// Operations of one side, in order.
    pub fn side(&self, side: Side) -> Transcript {
        Transcript { ops: self.ops.iter().filter(|op| op.side == side).copied().collect(), ..*self }
    }

    fn check_shape(&self, ring: &Ring, m: &Mat) -> Result<(), MatrixError> {
        if self.ring != ring.id() {
            return Err(MatrixError::RingMismatch { expected: ring.id(), found: self.ring });
        }
        m.check_ring(ring)?;
        if (m.rows(), m.cols()) != (self.rows, self.cols) {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        Ok(())
    }

    pub fn apply(&self, ring: &Ring, m: &Mat) -> Result<Mat, MatrixError> {
        let mut out = m.clone();
        self.apply_in_place(ring, &mut out)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, ring: &Ring, m: &mut Mat) -> Result<(), MatrixError> {
        self.check_shape(ring, m)?;
        for op in &self.ops {
            op.apply(ring, m)?;
        }
        Ok(())
    }

    /// The products `(E, F)` of elementary matrices with
    /// `apply(A) = E A F`.
    pub fn factors(&self, ring: &Ring) -> (Mat, Mat) {
        let mut left = Mat::identity(ring, self.rows);
        let mut right = Mat::identity(ring, self.cols);
        for op in &self.ops {
            match op.side {
                Side::Row => left = op.matrix(ring, self.rows).mul(ring, &left).expect("shapes agree"),
                Side::Col => right = right.mul(ring, &op.matrix(ring, self.cols)).expect("shapes agree"),
            }
        }
        (left, right)
    }

    /// The transcript undoing this one.
    pub fn inverse(&self, ring: &Ring) -> Transcript {
        Transcript { ops: self.ops.iter().rev().map(|op| op.inverse(ring)).collect(), ..*self }
    }
}

/// Three transvections replacing lines `i, j` by `line_j, -line_i`.
pub fn signed_swap_transcript(
    ring: &Ring,
    rows: usize,
    cols: usize,
    i: usize,
    j: usize,
    side: Side,
) -> Result<Transcript, MatrixError> {
    let size = match side {
        Side::Row => rows,
        Side::Col => cols,
    };
    for index in [i, j] {
        if index >= size {
            return Err(MatrixError::BadIndex { index, size });
        }
    }
    if i == j {
        return Err(MatrixError::DegenerateOp(i));
    }
    let (one, minus) = (ring.one(), ring.neg(ring.one()));
    let op = |t, s, c| ElementaryOp { side, target: t, source: s, coeff: c };
    let mut t = Transcript::new(ring, rows, cols);
    t.ops = vec![op(i, j, one), op(j, i, minus), op(i, j, one)];
    Ok(t)
}

/// Signed swaps carrying the entry at `from` to `to` without changing
/// its sign: a row swap, then a column swap, as needed.
pub fn move_entry(
    ring: &Ring,
    rows: usize,
    cols: usize,
    from: (usize, usize),
    to: (usize, usize),
) -> Result<Transcript, MatrixError> {
    for (index, size) in [(from.0, rows), (to.0, rows), (from.1, cols), (to.1, cols)] {
        if index >= size {
            return Err(MatrixError::BadIndex { index, size });
        }
    }
    let mut t = Transcript::new(ring, rows, cols);
    if from.0 != to.0 {
        t.extend(&signed_swap_transcript(ring, rows, cols, to.0, from.0, Side::Row)?);
    }
    if from.1 != to.1 {
        t.extend(&signed_swap_transcript(ring, rows, cols, to.1, from.1, Side::Col)?);
    }
    Ok(t)
}
