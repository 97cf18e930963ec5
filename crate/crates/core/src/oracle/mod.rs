//! Brute-force ground truth for module-theoretic claims over finite rings.
//!
//! Finitely generated projective modules are represented by idempotent
//! matrices `P`, the module being the column space `P R^m`. Searches are
//! bounded; every verdict reports its bound and whether it was exhaustive.

mod checks;
mod iso;
mod monoid;

use std::fmt;

use thiserror::Error;

use crate::matrix::{Mat, MatrixError};
use crate::ring::{Ring, RingError};

pub use checks::{check_stable_rank_one, check_unit_regular_cross, independence_invariant};
pub use iso::{module_iso, subequiv, IsoWitness, SummandWitness};
pub use monoid::{
    check_generator_cancellation, check_separative, enumerate_projective_classes, MonoidTable, ProjectiveClass,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget exhausted before a decision was reached")]
    BudgetExhausted,
    #[error("enumeration needs {needed} candidates, above the cap of {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("expected the ring Ex2.12(F_p) for a prime p, got {0}")]
    WrongRing(String),
    #[error("matrix is not a square idempotent")]
    NotIdempotent,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Limits for isomorphism and summand searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoBudget {
    /// Random homomorphisms tried before enumerating.
    pub random_tries: usize,
    /// Largest homomorphism group enumerated in full.
    pub enumeration_cap: u64,
    pub seed: u64,
}

impl Default for IsoBudget {
    fn default() -> Self {
        IsoBudget { random_tries: 32, enumeration_cap: 1 << 16, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Exchange,
    Separative,
    GeneratorCancellation,
    StableRankOne,
    UnitRegularCrossCheck,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Exchange => "exchange",
            Property::Separative => "separative",
            Property::GeneratorCancellation => "generator-cancellation",
            Property::StableRankOne => "stable-rank-one",
            Property::UnitRegularCrossCheck => "unit-regular-cross-check",
        }
    }

    pub fn parse(name: &str) -> Option<Property> {
        [
            Property::Exchange,
            Property::Separative,
            Property::GeneratorCancellation,
            Property::StableRankOne,
            Property::UnitRegularCrossCheck,
        ]
        .into_iter()
        .find(|p| p.name() == name)
    }
}

/// Outcome of a property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ring: String,
    pub property: Property,
    /// Largest matrix size of the projectives examined, where relevant.
    pub bound: Option<usize>,
    pub holds: bool,
    /// Whether the search space was covered completely.
    pub exhaustive: bool,
    /// Counterexample when the property fails, otherwise a short note.
    pub witness: Option<String>,
    /// Number of cases examined.
    pub checked: u64,
}

impl Verdict {
    pub fn exchange(ring: &Ring) -> Verdict {
        let v = crate::exchange::check_exchange(ring);
        Verdict {
            ring: ring.name().to_string(),
            property: Property::Exchange,
            bound: None,
            holds: v.holds(),
            exhaustive: true,
            witness: v.first_failure.map(|a| format!("a = {}", ring.render(a))),
            checked: v.checked as u64,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.ring)?;
        writeln!(f, "property {}", self.property.name())?;
        match self.bound {
            Some(b) => writeln!(f, "bound {b}")?,
            None => writeln!(f, "bound -")?,
        }
        writeln!(f, "verdict {}", if self.holds { "holds" } else { "fails" })?;
        writeln!(f, "exhaustive {}", if self.exhaustive { "yes" } else { "no" })?;
        writeln!(f, "checked {}", self.checked)?;
        write!(f, "witness {}", self.witness.as_deref().unwrap_or("-").replace('\n', " "))
    }
}

/// `|P R^m e|` for each idempotent `e` of `R`, in canonical order.
///
/// These are the orders of `Hom(eR, M)`, so isomorphic modules agree, and
/// they multiply under direct sums.
pub fn invariant(ring: &Ring, p: &Mat) -> Vec<u64> {
    let m = p.rows();
    ring.idempotents()
        .iter()
        .map(|&e| {
            let gens: Vec<Vec<_>> = (0..m)
                .flat_map(|i| (0..ring.dim()).map(move |t| (i, t)))
                .map(|(i, t)| {
                    let s = ring.mul(ring.basis(t), e);
                    (0..m).map(|r| ring.mul(p.get(r, i), s)).collect()
                })
                .collect();
            ring.span_order(m, &gens)
        })
        .collect()
}

fn check_idempotent(ring: &Ring, p: &Mat) -> Result<(), OracleError> {
    p.check_ring(ring)?;
    if !p.is_square() || !p.is_idempotent(ring) {
        return Err(OracleError::NotIdempotent);
    }
    Ok(())
}
