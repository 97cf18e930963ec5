use std::fmt;

use crate::ring::{Element, Ring};

use super::{ElementaryOp, Mat, Side, Transcript};

/// Row operations and column operations reducing `input` to the
/// invertible diagonal matrix `diagonal`; `inverses[i]` inverts the i-th
/// diagonal entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeDecomposition {
    pub input: Mat,
    pub left: Transcript,
    pub right: Transcript,
    pub diagonal: Mat,
    pub inverses: Vec<Element>,
}

/// First reason a certificate does not replay. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayFailure {
    RingMismatch,
    Shape(String),
    WrongSide { transcript: Side, index: usize },
    BadOp { transcript: Side, index: usize },
    NotDiagonal { row: usize, col: usize },
    Mismatch { row: usize, col: usize },
    NotUnit { index: usize },
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: &Side| if *s == Side::Row { "left" } else { "right" };
        match self {
            ReplayFailure::RingMismatch => write!(f, "ring mismatch"),
            ReplayFailure::Shape(s) => write!(f, "shape: {s}"),
            ReplayFailure::WrongSide { transcript, index } => {
                write!(f, "{} transcript op {} acts on the wrong side", name(transcript), index + 1)
            }
            ReplayFailure::BadOp { transcript, index } => {
                write!(f, "{} transcript op {} is malformed", name(transcript), index + 1)
            }
            ReplayFailure::NotDiagonal { row, col } => {
                write!(f, "claimed diagonal has a nonzero entry at ({}, {})", row + 1, col + 1)
            }
            ReplayFailure::Mismatch { row, col } => {
                write!(f, "replay differs from the claimed diagonal at ({}, {})", row + 1, col + 1)
            }
            ReplayFailure::NotUnit { index } => {
                write!(f, "diagonal entry {} has no valid inverse witness", index + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayVerdict {
    pub failure: Option<ReplayFailure>,
}

impl ReplayVerdict {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

impl GeDecomposition {
    /// Replay both transcripts on the input and compare with the claimed
    /// diagonal, whose entries must carry inverse witnesses.
    pub fn replay_check(&self, ring: &Ring) -> ReplayVerdict {
        ReplayVerdict { failure: self.first_failure(ring).err() }
    }

    fn first_failure(&self, ring: &Ring) -> Result<(), ReplayFailure> {
        let n = self.input.rows();
        let shapes_agree = self.input.is_square()
            && (self.diagonal.rows(), self.diagonal.cols()) == (n, n)
            && (self.left.rows, self.left.cols) == (n, n)
            && (self.right.rows, self.right.cols) == (n, n)
            && self.inverses.len() == n;
        if !shapes_agree {
            return Err(ReplayFailure::Shape(format!("inconsistent sizes around {n}x{n}")));
        }
        let id = ring.id();
        if [self.input.ring_id(), self.diagonal.ring_id(), self.left.ring, self.right.ring].iter().any(|&r| r != id)
            || !self.inverses.iter().all(|&x| ring.owns(x))
        {
            return Err(ReplayFailure::RingMismatch);
        }
        let mut m = self.input.clone();
        for (side, transcript) in [(Side::Row, &self.left), (Side::Col, &self.right)] {
            for (index, op) in transcript.ops.iter().enumerate() {
                if op.side != side {
                    return Err(ReplayFailure::WrongSide { transcript: side, index });
                }
                op.apply(ring, &mut m).map_err(|_| ReplayFailure::BadOp { transcript: side, index })?;
            }
        }
        if let Some((row, col)) = self.diagonal.first_off_diagonal() {
            return Err(ReplayFailure::NotDiagonal { row, col });
        }
        for row in 0..n {
            for col in 0..n {
                if m.get(row, col) != self.diagonal.get(row, col) {
                    return Err(ReplayFailure::Mismatch { row, col });
                }
            }
        }
        for (index, (&d, &inv)) in self.diagonal.diagonal_entries().iter().zip(&self.inverses).enumerate() {
            if ring.mul(d, inv) != ring.one() || ring.mul(inv, d) != ring.one() {
                return Err(ReplayFailure::NotUnit { index });
            }
        }
        Ok(())
    }

    /// Append column operations that gather the diagonal into its first
    /// entry, leaving `diag(d_1 ... d_n, 1, ..., 1)`. Uses
    /// `diag(y, 1/y) = w(y) w(-1)` with `w(y) = e12(y) e21(-1/y) e12(y)`.
    pub fn concentrate(&self, ring: &Ring) -> GeDecomposition {
        let n = self.input.rows();
        let mut out = self.clone();
        let mut diag = self.diagonal.diagonal_entries();
        let mut inv = self.inverses.clone();
        for b in (1..n).rev() {
            let a = b - 1;
            let (y, y_inv) = (diag[b], inv[b]);
            if y == ring.one() {
                continue;
            }
            let one = ring.one();
            let minus = ring.neg(one);
            // e12(r) at (a, b) is the column op target b, source a.
            let upper = |r| ElementaryOp::col(b, a, r);
            let lower = |r| ElementaryOp::col(a, b, r);
            for op in [upper(y), lower(ring.neg(y_inv)), upper(y), upper(minus), lower(one), upper(minus)] {
                out.right.push(op);
            }
            diag[a] = ring.mul(diag[a], y);
            inv[a] = ring.mul(y_inv, inv[a]);
            diag[b] = one;
            inv[b] = one;
        }
        out.diagonal = Mat::diagonal(ring, &diag);
        out.inverses = inv;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(ring: &Ring, diag: &[i64]) -> GeDecomposition {
        let d: Vec<Element> = diag.iter().map(|&v| ring.int(v)).collect();
        let n = d.len();
        GeDecomposition {
            input: Mat::diagonal(ring, &d),
            left: Transcript::new(ring, n, n),
            right: Transcript::new(ring, n, n),
            diagonal: Mat::diagonal(ring, &d),
            inverses: d.iter().map(|&x| ring.is_unit(x).unwrap_or(ring.zero())).collect(),
        }
    }

    #[test]
    fn diagonal_input_replays() {
        let r = Ring::preset("Z/6").unwrap();
        assert!(trivial(&r, &[5, 1, 5]).replay_check(&r).ok());
        let bad = trivial(&r, &[3, 1]);
        assert_eq!(bad.replay_check(&r).failure, Some(ReplayFailure::NotUnit { index: 0 }));
    }

    #[test]
    fn deleted_op_is_reported() {
        let r = Ring::preset("Z/6").unwrap();
        let mut d = trivial(&r, &[1, 1]);
        d.input = Mat::from_ints(&r, 2, 2, &[1, 2, 0, 1]);
        d.left.push(ElementaryOp::row(0, 1, r.int(-2)));
        assert!(d.replay_check(&r).ok());
        d.left.ops.clear();
        assert_eq!(d.replay_check(&r).failure, Some(ReplayFailure::Mismatch { row: 0, col: 1 }));
        d.left.push(ElementaryOp::col(0, 1, r.int(-2)));
        assert_eq!(
            d.replay_check(&r).failure,
            Some(ReplayFailure::WrongSide { transcript: Side::Row, index: 0 })
        );
    }

    #[test]
    fn concentrate_gathers_units() {
        let r = Ring::preset("Z/7").unwrap();
        let d = trivial(&r, &[2, 3, 5]).concentrate(&r);
        assert!(d.replay_check(&r).ok());
        assert_eq!(d.diagonal, Mat::from_ints(&r, 3, 3, &[30, 0, 0, 0, 1, 0, 0, 0, 1]));
        let m = Ring::preset("M2(F2)").unwrap();
        let u = m.units()[3];
        let x = m.units()[4];
        let inv = |z| m.is_unit(z).unwrap();
        let dec = GeDecomposition {
            input: Mat::diagonal(&m, &[u, x]),
            left: Transcript::new(&m, 2, 2),
            right: Transcript::new(&m, 2, 2),
            diagonal: Mat::diagonal(&m, &[u, x]),
            inverses: vec![inv(u), inv(x)],
        };
        let c = dec.concentrate(&m);
        assert!(c.replay_check(&m).ok());
        assert_eq!(c.diagonal.diagonal_entries(), vec![m.mul(u, x), m.one()]);
    }
}
