//! Linear systems over `Z/m`.
//!
//! Every membership question in a finite ring (is `b` in `a1 R + ... + ak R`,
//! does `X Y = P` have a solution `Y`, ...) is a linear system over the
//! additive group `Z/m1 + ... + Z/md`. Embedding each summand into `Z/M`
//! with `M = lcm(mi)` reduces all of them to systems over the principal
//! ideal ring `Z/M`, which are solved here by diagonal reduction with
//! unimodular row and column transforms.

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Extended gcd over the integers: returns `(g, s, t)` with `s*a + t*b = g`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(m as i128) as u64)
}

/// A dense system `A x = b` over `Z/m` reduced to diagonal form
/// `S = U A V`. Only `V` is kept; `U` is applied to the right-hand side as
/// it is reduced.
struct Reduction {
    modulus: u64,
    rows: usize,
    cols: usize,
    a: Vec<Vec<u64>>,
    rhs: Vec<u64>,
    v: Option<Vec<Vec<u64>>>,
    rank: usize,
}

impl Reduction {
    fn new(modulus: u64, a: Vec<Vec<u64>>, cols: usize, rhs: Vec<u64>, track_v: bool) -> Self {
        let rows = a.len();
        let v = track_v.then(|| {
            (0..cols)
                .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
                .collect()
        });
        Reduction {
            modulus,
            rows,
            cols,
            a,
            rhs,
            v,
            rank: 0,
        }
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// Replace rows `p`, `q` by `s*p + t*q` and `x*p + y*q`.
    fn row_transform(&mut self, p: usize, q: usize, s: u64, t: u64, x: u64, y: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let (ap, aq) = (self.a[p][j], self.a[q][j]);
            self.a[p][j] = (self.mulmod(s, ap) + self.mulmod(t, aq)) % m;
            self.a[q][j] = (self.mulmod(x, ap) + self.mulmod(y, aq)) % m;
        }
        let (bp, bq) = (self.rhs[p], self.rhs[q]);
        self.rhs[p] = (self.mulmod(s, bp) + self.mulmod(t, bq)) % m;
        self.rhs[q] = (self.mulmod(x, bp) + self.mulmod(y, bq)) % m;
    }

    fn col_transform(&mut self, p: usize, q: usize, s: u64, t: u64, x: u64, y: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let (ap, aq) = (self.a[i][p], self.a[i][q]);
            self.a[i][p] = (self.mulmod(s, ap) + self.mulmod(t, aq)) % m;
            self.a[i][q] = (self.mulmod(x, ap) + self.mulmod(y, aq)) % m;
        }
        if let Some(v) = self.v.take() {
            let mut v = v;
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = (self.mulmod(s, vp) + self.mulmod(t, vq)) % m;
                row[q] = (self.mulmod(x, vp) + self.mulmod(y, vq)) % m;
            }
            self.v = Some(v);
        }
    }

    /// Coefficients `(s, t, x, y)` of a unimodular 2x2 transform sending
    /// `(p, q)` to `(gcd, 0)`.
    fn eliminator(&self, p: u64, q: u64) -> (u64, u64, u64, u64) {
        let m = self.modulus as i128;
        if q % p == 0 {
            // Pivot unchanged; keeps the reduction loop terminating.
            return (1, 0, q / p, self.modulus - 1);
        }
        let (g, s, t) = xgcd(p as i128, q as i128);
        let x = (q as i128 / g).rem_euclid(m) as u64;
        let y = (-(p as i128 / g)).rem_euclid(m) as u64;
        (s.rem_euclid(m) as u64, t.rem_euclid(m) as u64, x, y)
    }

    fn swap_rows(&mut self, p: usize, q: usize) {
        self.a.swap(p, q);
        self.rhs.swap(p, q);
    }

    fn swap_cols(&mut self, p: usize, q: usize) {
        for row in self.a.iter_mut() {
            row.swap(p, q);
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                row.swap(p, q);
            }
        }
    }

    fn run(&mut self) {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let pivot = (t..self.cols)
                .flat_map(|j| (t..self.rows).map(move |i| (i, j)))
                .find(|&(i, j)| self.a[i][j] != 0);
            let Some((pi, pj)) = pivot else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..self.rows {
                    let q = self.a[i][t];
                    if q != 0 {
                        let (s, tt, x, y) = self.eliminator(self.a[t][t], q);
                        self.row_transform(t, i, s, tt, x, y);
                    }
                }
                for j in t + 1..self.cols {
                    let q = self.a[t][j];
                    if q != 0 {
                        let (s, tt, x, y) = self.eliminator(self.a[t][t], q);
                        self.col_transform(t, j, s, tt, x, y);
                    }
                }
                if (t + 1..self.rows).all(|i| self.a[i][t] == 0) {
                    break;
                }
            }
            t += 1;
        }
        self.rank = t;
    }

    fn solution(&self) -> Option<Vec<u64>> {
        let m = self.modulus;
        let mut y = vec![0u64; self.cols];
        for t in 0..self.rank {
            let d = self.a[t][t];
            let g = gcd(d, m);
            if self.rhs[t] % g != 0 {
                return None;
            }
            let reduced = m / g;
            let inv = inverse_mod((d / g) % reduced, reduced)?;
            y[t] = ((self.rhs[t] / g) as u128 * inv as u128 % reduced as u128) as u64;
        }
        if self.rhs[self.rank..].iter().any(|&b| b != 0) {
            return None;
        }
        let v = self.v.as_ref().expect("solution requires the column transform");
        Some(
            (0..self.cols)
                .map(|i| {
                    (0..self.cols).fold(0u64, |acc, j| (acc + self.mulmod(v[i][j], y[j])) % m)
                })
                .collect(),
        )
    }
}

/// A linear map between finite abelian groups `Z/m1 + ... + Z/mk` and
/// `Z/n1 + ... + Z/nl`, given by the images of the unit coordinate vectors.
#[derive(Clone, Debug)]
pub(crate) struct AdditiveMap {
    pub domain: Vec<u64>,
    pub codomain: Vec<u64>,
    /// `columns[i]` is the image of the i-th unit vector, reduced.
    pub columns: Vec<Vec<u64>>,
}

impl AdditiveMap {
    fn exponent(&self) -> u64 {
        self.domain
            .iter()
            .chain(self.codomain.iter())
            .fold(1, |acc, &m| lcm(acc, m))
    }

    fn scaled_matrix(&self, modulus: u64) -> Vec<Vec<u64>> {
        (0..self.codomain.len())
            .map(|j| {
                let scale = modulus / self.codomain[j];
                self.columns.iter().map(|c| c[j] * scale % modulus).collect()
            })
            .collect()
    }

    /// Some preimage of `target`, reduced into the domain, or `None`.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        debug_assert_eq!(target.len(), self.codomain.len());
        let modulus = self.exponent();
        let a = self.scaled_matrix(modulus);
        let rhs = target
            .iter()
            .zip(&self.codomain)
            .map(|(&b, &n)| b % n * (modulus / n) % modulus)
            .collect();
        let mut red = Reduction::new(modulus, a, self.domain.len(), rhs, true);
        red.run();
        let x = red.solution()?;
        Some(x.iter().zip(&self.domain).map(|(&v, &m)| v % m).collect())
    }

    /// Generators of the kernel, reduced into the domain. Zero generators
    /// are dropped.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let modulus = self.exponent();
        let a = self.scaled_matrix(modulus);
        let rows = a.len();
        let mut red = Reduction::new(modulus, a, self.domain.len(), vec![0; rows], true);
        red.run();
        let v = red.v.as_ref().expect("tracked");
        let mut gens = Vec::new();
        for t in 0..self.domain.len() {
            let step = if t < red.rank {
                let g = gcd(red.a[t][t], modulus);
                modulus / g
            } else {
                1
            };
            if step % modulus == 0 {
                continue;
            }
            let gen: Vec<u64> = (0..self.domain.len())
                .map(|i| (v[i][t] as u128 * step as u128 % modulus as u128) as u64 % self.domain[i])
                .collect();
            if gen.iter().any(|&c| c != 0) {
                gens.push(gen);
            }
        }
        gens
    }
}

/// Order of the subgroup of `Z/n1 + ... + Z/nl` generated by `gens`.
pub(crate) fn subgroup_order(group: &[u64], gens: &[Vec<u64>]) -> u64 {
    if gens.is_empty() {
        return 1;
    }
    let modulus = group.iter().fold(1, |acc, &m| lcm(acc, m));
    let a: Vec<Vec<u64>> = (0..group.len())
        .map(|j| {
            let scale = modulus / group[j];
            gens.iter().map(|g| g[j] % group[j] * scale % modulus).collect()
        })
        .collect();
    let rows = a.len();
    let mut red = Reduction::new(modulus, a, gens.len(), vec![0; rows], false);
    red.run();
    (0..red.rank)
        .map(|t| modulus / gcd(red.a[t][t], modulus))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_solutions(map: &AdditiveMap, target: &[u64]) -> Vec<Vec<u64>> {
        let total: u64 = map.domain.iter().product();
        let mut out = Vec::new();
        for idx in 0..total {
            let mut rest = idx;
            let x: Vec<u64> = map
                .domain
                .iter()
                .rev()
                .map(|&m| {
                    let c = rest % m;
                    rest /= m;
                    c
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            let img: Vec<u64> = (0..map.codomain.len())
                .map(|j| {
                    x.iter()
                        .zip(&map.columns)
                        .map(|(&c, col)| c * col[j])
                        .sum::<u64>()
                        % map.codomain[j]
                })
                .collect();
            if img == target {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn xgcd_identity() {
        for a in 0..40i128 {
            for b in 0..40i128 {
                let (g, s, t) = xgcd(a, b);
                assert_eq!(s * a + t * b, g);
            }
        }
    }

    #[test]
    fn three_x_plus_four_y_is_one_mod_six() {
        let map = AdditiveMap {
            domain: vec![6, 6],
            codomain: vec![6],
            columns: vec![vec![3], vec![4]],
        };
        let x = map.solve(&[1]).unwrap();
        assert_eq!((3 * x[0] + 4 * x[1]) % 6, 1);
        assert!(map.solve(&[1]).is_some());
    }

    #[test]
    fn solve_agrees_with_enumeration_on_mixed_groups() {
        // Z/4 + Z/2 -> Z/4 + Z/2 + Z/6, every target checked.
        let map = AdditiveMap {
            domain: vec![4, 2, 3],
            codomain: vec![4, 2, 6],
            columns: vec![vec![2, 1, 0], vec![2, 0, 3], vec![0, 0, 2]],
        };
        for t0 in 0..4 {
            for t1 in 0..2 {
                for t2 in 0..6 {
                    let target = [t0, t1, t2];
                    let brute = brute_solutions(&map, &target);
                    match map.solve(&target) {
                        Some(x) => assert!(brute.contains(&x), "{target:?} -> {x:?}"),
                        None => assert!(brute.is_empty(), "{target:?} missed"),
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_generates_all_solutions_of_zero() {
        let map = AdditiveMap {
            domain: vec![6, 6, 2],
            codomain: vec![6, 2],
            columns: vec![vec![2, 1], vec![3, 0], vec![0, 1]],
        };
        let brute = brute_solutions(&map, &[0, 0]);
        let gens = map.kernel();
        let mut closure = std::collections::BTreeSet::new();
        closure.insert(vec![0u64; 3]);
        loop {
            let snapshot: Vec<_> = closure.iter().cloned().collect();
            let before = closure.len();
            for v in &snapshot {
                for g in &gens {
                    let w: Vec<u64> = v
                        .iter()
                        .zip(g)
                        .zip(&map.domain)
                        .map(|((a, b), m)| (a + b) % m)
                        .collect();
                    closure.insert(w);
                }
            }
            if closure.len() == before {
                break;
            }
        }
        let brute: std::collections::BTreeSet<_> = brute.into_iter().collect();
        assert_eq!(closure, brute);
    }

    #[test]
    fn subgroup_orders() {
        assert_eq!(subgroup_order(&[6], &[vec![3]]), 2);
        assert_eq!(subgroup_order(&[6], &[vec![4]]), 3);
        assert_eq!(subgroup_order(&[6], &[vec![3], vec![4]]), 6);
        assert_eq!(subgroup_order(&[2, 2, 2], &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 4);
        assert_eq!(subgroup_order(&[4, 2], &[vec![2, 1]]), 2);
        assert_eq!(subgroup_order(&[4, 2], &[]), 1);
    }
}
