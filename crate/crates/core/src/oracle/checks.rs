use crate::diagonalize::unit_regular_factorization;
use crate::matrix::Mat;
use crate::ring::Ring;

use super::iso::module_iso;
use super::{IsoBudget, OracleError, Property, Verdict};

/// Rings above this order are refused by the exhaustive element checks.
pub const ELEMENT_CHECK_CAP: usize = 1 << 12;

fn within_cap(ring: &Ring) -> Result<(), OracleError> {
    if ring.size() > ELEMENT_CHECK_CAP {
        return Err(OracleError::CapExceeded { needed: ring.size() as u128, cap: ELEMENT_CHECK_CAP as u128 });
    }
    Ok(())
}

/// For every `a, b` with `aR + bR = R`, some `a + b y` is a unit.
pub fn check_stable_rank_one(ring: &Ring) -> Result<Verdict, OracleError> {
    within_cap(ring)?;
    let mut checked = 0;
    let mut failure = None;
    'pairs: for a in ring.elements() {
        for b in ring.elements() {
            checked += 1;
            if ring.elements().any(|y| ring.is_unit(ring.add(a, ring.mul(b, y))).is_some()) {
                continue;
            }
            if ring.right_member(&[a, b], ring.one()).is_some() {
                failure = Some(format!("a = {}; b = {}", ring.render(a), ring.render(b)));
                break 'pairs;
            }
        }
    }
    Ok(Verdict {
        ring: ring.name().to_string(),
        property: Property::StableRankOne,
        bound: None,
        holds: failure.is_none(),
        exhaustive: true,
        witness: failure,
        checked,
    })
}

/// For each regular `d` with inner inverse `y`, compare the unit search
/// `d = u e` against the module criterion `(1 - d y) R ≅ (1 - y d) R`,
/// i.e. `R / dR ≅ r.ann(d)`.
pub fn check_unit_regular_cross(ring: &Ring, budget: &IsoBudget) -> Result<Verdict, OracleError> {
    within_cap(ring)?;
    let mut checked = 0;
    let mut exhaustive = true;
    let mut failure = None;
    for d in ring.elements() {
        let Some(y) = ring.is_regular(d) else { continue };
        checked += 1;
        let by_search = unit_regular_factorization(ring, d).is_ok();
        let cokernel = Mat::new(ring, 1, 1, vec![ring.complement(ring.mul(d, y))])?;
        let annihilator = Mat::new(ring, 1, 1, vec![ring.complement(ring.mul(y, d))])?;
        let by_modules = match module_iso(ring, &cokernel, &annihilator, budget) {
            Ok(w) => w.is_some(),
            Err(OracleError::BudgetExhausted) => {
                exhaustive = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        if by_search != by_modules {
            failure = Some(format!(
                "d = {}; unit search {}; module criterion {}",
                ring.render(d),
                if by_search { "succeeds" } else { "fails" },
                if by_modules { "succeeds" } else { "fails" }
            ));
            break;
        }
    }
    Ok(Verdict {
        ring: ring.name().to_string(),
        property: Property::UnitRegularCrossCheck,
        bound: Some(1),
        holds: failure.is_none(),
        exhaustive,
        witness: failure,
        checked,
    })
}

/// Whether the nilpotent parts of the four entries of a 2x2 matrix over
/// `Ex2.12(F_p)` are linearly independent over `F_p`.
pub fn independence_invariant(ring: &Ring, a: &Mat) -> Result<bool, OracleError> {
    let p = ex212_characteristic(ring).ok_or_else(|| OracleError::WrongRing(ring.name().to_string()))?;
    a.check_ring(ring)?;
    if a.rows() != 2 || a.cols() != 2 {
        return Err(crate::matrix::MatrixError::DimensionMismatch {
            expected: "2x2".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        }
        .into());
    }
    let rows: Vec<Vec<u64>> = a.entries().iter().map(|&x| ring.coords(x)[1..].to_vec()).collect();
    Ok(rank_mod_p(rows, p) == 4)
}

/// `p` when `ring` is exactly the preset `Ex2.12(Fp)` for a prime `p`.
fn ex212_characteristic(ring: &Ring) -> Option<u64> {
    if ring.dim() != 5 {
        return None;
    }
    let p = ring.orders()[0];
    let preset = Ring::preset(&format!("Ex2.12(F{p})")).ok()?;
    (preset.dim() == 5 && preset.id() == ring.id()).then_some(p)
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let inverse = |x: u64| (1..p).find(|&y| x * y % p == 1).expect("prime modulus");
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let scale = inverse(rows[rank][c]);
        rows[rank].iter_mut().for_each(|v| *v = *v * scale % p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] + (p - f) * rows[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
