//! Matrices over a finite ring, elementary operations and their
//! transcripts, and replay verification of diagonalization certificates.

mod decomposition;
mod transcript;

use std::fmt;

use thiserror::Error;

use crate::ring::{Element, Ring, RingError, RingId};

pub use decomposition::{GeDecomposition, ReplayFailure, ReplayVerdict};
pub use transcript::{move_entry, signed_swap_transcript, ElementaryOp, Side, Transcript};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("index {index} out of range for size {size}")]
    BadIndex { index: usize, size: usize },
    #[error("operation has equal target and source {0}")]
    DegenerateOp(usize),
    #[error("matrix belongs to ring {found}, expected {expected}")]
    RingMismatch { expected: RingId, found: RingId },
    #[error("matrix is not square")]
    NotSquare,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Dense row-major matrix over one ring. Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    ring: RingId,
    entries: Vec<Element>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.entries.chunks(self.cols).collect();
        f.debug_struct("Mat").field("ring", &self.ring).field("rows", &rows).finish()
    }
}

impl Mat {
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<Element>) -> Result<Mat, MatrixError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{rows}x{cols} with positive sides"),
                found: format!("{} entries", entries.len()),
            });
        }
        if !entries.iter().all(|&x| ring.owns(x)) {
            return Err(RingError::MixedRings.into());
        }
        Ok(Mat { rows, cols, ring: ring.id(), entries })
    }

    /// Matrix whose entries are the integers `values` times `1`.
    pub fn from_ints(ring: &Ring, rows: usize, cols: usize, values: &[i64]) -> Mat {
        Mat::new(ring, rows, cols, values.iter().map(|&v| ring.int(v)).collect()).expect("well-formed integer matrix")
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, ring: ring.id(), entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Mat {
        Mat::diagonal(ring, &vec![ring.one(); n])
    }

    pub fn diagonal(ring: &Ring, diag: &[Element]) -> Mat {
        let n = diag.len();
        let mut m = Mat::zero(ring, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Uniformly random matrix, entries drawn from the canonical order.
    pub fn random<R: rand::Rng>(ring: &Ring, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let entries = (0..rows * cols).map(|_| ring.element_at(rng.gen_range(0..ring.size()))).collect();
        Mat { rows, cols, ring: ring.id(), entries }
    }

    /// Uniformly random invertible matrix, by rejection sampling.
    pub fn random_invertible<R: rand::Rng>(ring: &Ring, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(ring, n, n, rng);
            if m.invert(ring).is_some() {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Element {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Element) {
        assert_eq!(x.ring_id(), self.ring, "entry from a foreign ring");
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Element] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal_entries(&self) -> Vec<Element> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.first_off_diagonal().is_none()
    }

    /// First nonzero entry off the diagonal, in row-major order.
    pub fn first_off_diagonal(&self) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && self.get(i, j).index() != 0)
    }

    pub(crate) fn check_ring(&self, ring: &Ring) -> Result<(), MatrixError> {
        if self.ring == ring.id() {
            Ok(())
        } else {
            Err(MatrixError::RingMismatch { expected: ring.id(), found: self.ring })
        }
    }

    pub fn mul(&self, ring: &Ring, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_ring(ring)?;
        other.check_ring(ring)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Mat::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = ring.sum((0..self.cols).map(|k| ring.mul(self.get(i, k), other.get(k, j))));
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn add(&self, ring: &Ring, other: &Mat) -> Result<Mat, MatrixError> {
        self.check_ring(ring)?;
        other.check_ring(ring)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| ring.add(a, b)).collect();
        Ok(Mat { entries, ..self.clone() })
    }

    pub fn neg(&self, ring: &Ring) -> Mat {
        Mat { entries: self.entries.iter().map(|&a| ring.neg(a)).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Mat {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Mat { rows: self.cols, cols: self.rows, ring: self.ring, entries }
    }

    /// Entry-wise transfer into `target` (a ring or its opposite).
    pub fn transfer(&self, target: &Ring) -> Mat {
        Mat {
            entries: self.entries.iter().map(|&x| target.transfer(x)).collect(),
            ring: target.id(),
            ..self.clone()
        }
    }

    /// `diag(self, other)`.
    pub fn block_sum(&self, ring: &Ring, other: &Mat) -> Mat {
        let mut out = Mat::zero(ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn is_idempotent(&self, ring: &Ring) -> bool {
        self.is_square() && self.mul(ring, self).map(|sq| &sq == self).unwrap_or(false)
    }

    /// Two-sided inverse, by solving `A X = I` over the additive
    /// presentation and confirming `X A = I`.
    pub fn invert(&self, ring: &Ring) -> Option<Mat> {
        if !self.is_square() || self.check_ring(ring).is_err() {
            return None;
        }
        let n = self.rows;
        if n == 1 {
            return ring.is_unit(self.entries[0]).map(|u| Mat { entries: vec![u], ..self.clone() });
        }
        let product = |x: &[Element]| {
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    out.push(ring.sum((0..n).map(|k| ring.mul(self.get(i, k), x[k * n + j]))));
                }
            }
            out
        };
        let identity = Mat::identity(ring, n);
        let x = ring.solve_additive(n * n, product, &identity.entries)?;
        let inverse = Mat { entries: x, ..self.clone() };
        (inverse.mul(ring, self).ok()? == identity).then_some(inverse)
    }

    /// Entries as integer-coordinate rows, for display.
    pub fn render(&self, ring: &Ring) -> String {
        (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).iter().map(|&x| ring.render(x)).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
