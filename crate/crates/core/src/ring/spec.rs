use sha2::{Digest, Sha256};

use super::RingError;

/// Structure constants of a finite unital ring.
///
/// The additive group is `Z/orders[0] + ... + Z/orders[d-1]` with basis
/// `b_0, ..., b_{d-1}`; `table[i * d + j]` holds the coordinates of
/// `b_i * b_j`, and multiplication is its bilinear extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub name: String,
    pub orders: Vec<u64>,
    pub table: Vec<Vec<u64>>,
    pub one: Vec<u64>,
}

impl RingSpec {
    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn product_of_basis(&self, i: usize, j: usize) -> &[u64] {
        &self.table[i * self.dim() + j]
    }

    /// The same ring with products reversed.
    pub fn opposite(&self) -> RingSpec {
        let d = self.dim();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                table.push(self.table[j * d + i].clone());
            }
        }
        RingSpec {
            name: format!("op({})", self.name),
            orders: self.orders.clone(),
            table,
            one: self.one.clone(),
        }
    }

    /// Stable fingerprint of the structure constants. The name is not part
    /// of it, so two presentations with identical tables are the same ring.
    pub fn fingerprint(&self) -> u64 {
        let mut hasher = Sha256::new();
        let mut put = |label: &str, values: &[u64]| {
            hasher.update(label.as_bytes());
            hasher.update((values.len() as u64).to_le_bytes());
            for v in values {
                hasher.update(v.to_le_bytes());
            }
        };
        put("orders", &self.orders);
        for entry in &self.table {
            put("t", entry);
        }
        put("one", &self.one);
        let digest = hasher.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
    }

    fn reduced(&self, coords: &[u64]) -> bool {
        coords.len() == self.dim() && coords.iter().zip(&self.orders).all(|(c, m)| c < m)
    }

    /// Bilinear product of two coordinate vectors, reduced.
    pub(crate) fn multiply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let mut acc = vec![0u64; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = xi * yj;
                for (k, &t) in self.table[i * d + j].iter().enumerate() {
                    if t != 0 {
                        acc[k] = (acc[k] + c % self.orders[k] * t) % self.orders[k];
                    }
                }
            }
        }
        acc
    }

    /// Check every ring axiom that is not automatic from the presentation.
    pub fn validate(&self, cap: usize) -> Result<usize, RingError> {
        let d = self.dim();
        if d == 0 {
            return Err(RingError::Malformed("orders must be non-empty".into()));
        }
        if let Some(i) = self.orders.iter().position(|&m| m < 2) {
            return Err(RingError::Malformed(format!(
                "additive order of basis element {i} must be at least 2"
            )));
        }
        if self.table.len() != d * d {
            return Err(RingError::Malformed(format!(
                "multiplication table has {} entries, expected {}",
                self.table.len(),
                d * d
            )));
        }
        let mut size: usize = 1;
        for &m in &self.orders {
            size = size
                .checked_mul(m as usize)
                .filter(|&s| s <= cap)
                .ok_or(RingError::CapExceeded { cap })?;
        }
        for i in 0..d {
            for j in 0..d {
                let entry = &self.table[i * d + j];
                if !self.reduced(entry) {
                    return Err(RingError::BadCoordinates {
                        field: format!("table[{i}][{j}]"),
                    });
                }
                // m_i * b_i = 0 forces m_i * (b_i b_j) = 0, likewise for m_j.
                let killed = |m: u64| entry.iter().zip(&self.orders).all(|(&c, &o)| c * m % o == 0);
                if !killed(self.orders[i]) || !killed(self.orders[j]) {
                    return Err(RingError::TorsionMismatch { i, j });
                }
            }
        }
        if !self.reduced(&self.one) {
            return Err(RingError::BadCoordinates { field: "one".into() });
        }
        for i in 0..d {
            let mut b = vec![0u64; d];
            b[i] = 1;
            if self.multiply(&self.one, &b) != b || self.multiply(&b, &self.one) != b {
                return Err(RingError::UnitLawViolation { i });
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.product_of_basis(i, j).to_vec();
                for k in 0..d {
                    let mut bk = vec![0u64; d];
                    bk[k] = 1;
                    let left = self.multiply(&ij, &bk);
                    let mut bi = vec![0u64; d];
                    bi[i] = 1;
                    let right = self.multiply(&bi, self.product_of_basis(j, k));
                    if left != right {
                        return Err(RingError::AssociativityViolation { i, j, k });
                    }
                }
            }
        }
        Ok(size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> RingSpec {
        RingSpec {
            name: "Z/6".into(),
            orders: vec![6],
            table: vec![vec![1]],
            one: vec![1],
        }
    }

    #[test]
    fn cyclic_ring_validates() {
        assert_eq!(z6().validate(1 << 16), Ok(6));
    }

    #[test]
    fn unreduced_table_entry_is_reported() {
        let mut spec = z6();
        spec.table[0] = vec![7];
        assert_eq!(
            spec.validate(1 << 16),
            Err(RingError::BadCoordinates { field: "table[0][0]".into() })
        );
    }

    #[test]
    fn non_unital_one_is_reported() {
        let mut spec = z6();
        spec.one = vec![5];
        assert_eq!(spec.validate(1 << 16), Err(RingError::UnitLawViolation { i: 0 }));
    }

    #[test]
    fn fingerprint_ignores_name() {
        let mut other = z6();
        other.name = "six".into();
        assert_eq!(other.fingerprint(), z6().fingerprint());
        other.orders = vec![5];
        other.table = vec![vec![1]];
        assert_ne!(other.fingerprint(), z6().fingerprint());
    }
}
