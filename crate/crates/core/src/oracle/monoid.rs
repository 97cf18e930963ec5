use std::collections::HashMap;
use std::fmt;

use crate::matrix::Mat;
use crate::ring::{Element, Ring};

use super::iso::{search_iso, subequiv, IsoWitness};
use super::{invariant, IsoBudget, OracleError, Property, Verdict};

/// Candidate matrices scanned at most by [`enumerate_projective_classes`].
pub const CANDIDATE_CAP: u128 = 1 << 22;

/// An isomorphism class of projectives, represented by the first
/// idempotent found in canonical scan order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveClass {
    pub representative: Mat,
    /// Size of the representative, or 0 for the zero module.
    pub size: usize,
    pub invariant: Vec<u64>,
    /// Idempotent matrices of size at most the bound in this class.
    pub members: usize,
    /// Whether the entries of the representative generate `R` as an ideal.
    pub generator: bool,
}

/// Classes of projectives `P R^m` with `m <= bound` under direct sum.
#[derive(Clone, Debug)]
pub struct MonoidTable {
    pub ring: String,
    pub bound: usize,
    pub classes: Vec<ProjectiveClass>,
    /// `sums[i][j]` is the class of the block sum, when its size is within
    /// the bound.
    pub sums: Vec<Vec<Option<usize>>>,
    /// Isomorphisms from block sums of representatives to the
    /// representative of `sums[i][j]`.
    pub sum_witnesses: HashMap<(usize, usize), IsoWitness>,
    /// False when some isomorphism question was left undecided.
    pub exhaustive: bool,
    pub candidates: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Decision {
    Yes,
    No,
    Unknown,
}

fn decide<T>(r: Result<Option<T>, OracleError>) -> Decision {
    match r {
        Ok(Some(_)) => Decision::Yes,
        Ok(None) => Decision::No,
        Err(_) => Decision::Unknown,
    }
}

struct Classifier<'a> {
    ring: &'a Ring,
    budget: &'a IsoBudget,
    classes: Vec<ProjectiveClass>,
    exhaustive: bool,
}

impl Classifier<'_> {
    /// Class of `p`, with an isomorphism from `p` to its representative.
    fn find(&mut self, p: &Mat, inv: &[u64]) -> Option<(usize, IsoWitness)> {
        for (index, class) in self.classes.iter().enumerate() {
            if class.invariant != inv {
                continue;
            }
            match search_iso(self.ring, p, &class.representative, self.budget) {
                Ok(Some(w)) => return Some((index, w)),
                Ok(None) => {}
                Err(_) => self.exhaustive = false,
            }
        }
        None
    }

    fn insert(&mut self, p: &Mat) {
        let inv = invariant(self.ring, p);
        match self.find(p, &inv) {
            Some((index, _)) => self.classes[index].members += 1,
            None => {
                let generator = self.ring.two_sided_ideal(p.entries()).len() == self.ring.size();
                self.classes.push(ProjectiveClass {
                    representative: p.clone(),
                    size: if p.entries().iter().all(|&x| self.ring.is_zero(x)) { 0 } else { p.rows() },
                    invariant: inv,
                    members: 1,
                    generator,
                });
            }
        }
    }
}

/// Every idempotent `m x m` matrix, in canonical order of entries.
fn idempotent_matrices(ring: &Ring, m: usize) -> Vec<Mat> {
    let s = ring.size();
    let cells = m * m;
    let mut digits = vec![0usize; cells];
    let mut out = Vec::new();
    loop {
        let entries: Vec<Element> = digits.iter().map(|&d| ring.element_at(d)).collect();
        let idempotent = (0..m).all(|i| {
            (0..m).all(|j| ring.sum((0..m).map(|k| ring.mul(entries[i * m + k], entries[k * m + j]))) == entries[i * m + j])
        });
        if idempotent {
            out.push(Mat::new(ring, m, m, entries).expect("shape"));
        }
        let Some(slot) = (0..cells).rev().find(|&c| digits[c] + 1 < s) else {
            return out;
        };
        digits[slot] += 1;
        digits[slot + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

/// All idempotent matrices of size at most `bound`, grouped into
/// isomorphism classes. Classes are ordered by their first member in the
/// scan (size, then canonical order), so the zero module comes first.
pub fn enumerate_projective_classes(ring: &Ring, bound: usize, budget: &IsoBudget) -> Result<MonoidTable, OracleError> {
    let s = ring.size() as u128;
    let mut needed: u128 = 0;
    for m in 1..=bound {
        needed = needed.saturating_add(s.saturating_pow((m * m) as u32));
    }
    if needed > CANDIDATE_CAP {
        return Err(OracleError::CapExceeded { needed, cap: CANDIDATE_CAP });
    }
    let mut classifier = Classifier { ring, budget, classes: Vec::new(), exhaustive: true };
    for m in 1..=bound {
        for p in idempotent_matrices(ring, m) {
            classifier.insert(&p);
        }
    }
    let n = classifier.classes.len();
    let mut sums = vec![vec![None; n]; n];
    let mut sum_witnesses = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&classifier.classes[i], &classifier.classes[j]);
            if a.size + b.size > bound {
                continue;
            }
            let block = a.representative.block_sum(ring, &b.representative);
            let inv = invariant(ring, &block);
            if let Some((k, w)) = classifier.find(&block, &inv) {
                sums[i][j] = Some(k);
                sum_witnesses.insert((i, j), w);
            }
        }
    }
    Ok(MonoidTable {
        ring: ring.name().to_string(),
        bound,
        classes: classifier.classes,
        sums,
        sum_witnesses,
        exhaustive: classifier.exhaustive,
        candidates: needed as u64,
    })
}

impl MonoidTable {
    fn rep(&self, i: usize) -> &Mat {
        &self.classes[i].representative
    }

    /// Pairs of distinct classes that no invariant separates.
    fn twins(&self) -> Vec<(usize, usize)> {
        let n = self.classes.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.classes[i].invariant == self.classes[j].invariant)
            .collect()
    }
}

impl fmt::Display for MonoidTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.ring)?;
        writeln!(f, "bound {}", self.bound)?;
        writeln!(f, "exhaustive {}", if self.exhaustive { "yes" } else { "no" })?;
        writeln!(f, "classes {}", self.classes.len())?;
        for (i, c) in self.classes.iter().enumerate() {
            let inv: Vec<String> = c.invariant.iter().map(u64::to_string).collect();
            writeln!(
                f,
                "class {i} size {} members {} generator {} invariant {}",
                c.size,
                c.members,
                if c.generator { "yes" } else { "no" },
                inv.join(" ")
            )?;
        }
        for (i, row) in self.sums.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.map_or("-".to_string(), |k| k.to_string())).collect();
            writeln!(f, "sum {i} {}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn is_iso(ring: &Ring, p: &Mat, q: &Mat, budget: &IsoBudget) -> Decision {
    if invariant(ring, p) != invariant(ring, q) {
        return Decision::No;
    }
    decide(search_iso(ring, p, q, budget))
}

fn power(ring: &Ring, p: &Mat, n: usize) -> Mat {
    (1..n).fold(p.clone(), |acc, _| acc.block_sum(ring, p))
}

fn describe(ring: &Ring, label: &str, m: &Mat) -> String {
    format!("{label} = {}", m.render(ring).replace('\n', " "))
}

/// Bounded check of `A+A ≅ A+B ≅ B+B => A ≅ B` over the classes of
/// `table`, cross-checked against the summand form: `A+C ≅ B+C` with
/// `C ≲⊕ A^n` and `C ≲⊕ B^n` (`n <= 2`) forces `A ≅ B`.
///
/// Sums in the premise may exceed the bound; they are decided directly.
/// Invariants multiply under sums, so only classes with equal invariants
/// can satisfy either premise.
pub fn check_separative(ring: &Ring, table: &MonoidTable, budget: &IsoBudget) -> Verdict {
    let mut exhaustive = table.exhaustive;
    let mut checked = 0u64;
    let n = table.classes.len();
    let mut failure = None;
    let mut forms_agree = true;
    for (i, j) in table.twins() {
        let (a, b) = (table.rep(i), table.rep(j));
        let aa = a.block_sum(ring, a);
        let ab = a.block_sum(ring, b);
        let bb = b.block_sum(ring, b);
        let premise = [is_iso(ring, &aa, &ab, budget), is_iso(ring, &ab, &bb, budget)];
        let definition_fails = premise.iter().all(|&d| d == Decision::Yes);
        if premise.contains(&Decision::Unknown) && !premise.contains(&Decision::No) {
            exhaustive = false;
        }
        let mut summand_fails = false;
        for c in 0..n {
            checked += 1;
            let cm = table.rep(c);
            match is_iso(ring, &a.block_sum(ring, cm), &b.block_sum(ring, cm), budget) {
                Decision::No => continue,
                Decision::Unknown => {
                    exhaustive = false;
                    continue;
                }
                Decision::Yes => {}
            }
            let under = |x: &Mat| {
                (1..=2).map(|k| decide(subequiv(ring, cm, &power(ring, x, k), budget))).collect::<Vec<_>>()
            };
            let (under_a, under_b) = (under(a), under(b));
            if under_a.contains(&Decision::Yes) && under_b.contains(&Decision::Yes) {
                summand_fails = true;
            } else if under_a.iter().chain(&under_b).any(|&d| d == Decision::Unknown) {
                exhaustive = false;
            }
        }
        checked += 1;
        if definition_fails != summand_fails {
            forms_agree = false;
        }
        if (definition_fails || summand_fails) && failure.is_none() {
            failure = Some(format!("{}; {}", describe(ring, "A", a), describe(ring, "B", b)));
        }
    }
    let witness = match (&failure, forms_agree) {
        (Some(w), true) => Some(w.clone()),
        (Some(w), false) => Some(format!("{w}; definition and summand form disagree")),
        (None, _) => None,
    };
    Verdict {
        ring: table.ring.clone(),
        property: Property::Separative,
        bound: Some(table.bound),
        holds: failure.is_none(),
        exhaustive,
        witness,
        checked: checked + (n * n.saturating_sub(1) / 2) as u64,
    }
}

/// Bounded check that `A+C ≅ B+C => A ≅ B` whenever `A` and `B` are
/// generators.
pub fn check_generator_cancellation(ring: &Ring, table: &MonoidTable, budget: &IsoBudget) -> Verdict {
    let mut exhaustive = table.exhaustive;
    let mut checked = 0u64;
    let mut failure = None;
    for (i, j) in table.twins() {
        if !(table.classes[i].generator && table.classes[j].generator) {
            continue;
        }
        let (a, b) = (table.rep(i), table.rep(j));
        for (c, class) in table.classes.iter().enumerate() {
            checked += 1;
            let cm = &class.representative;
            match is_iso(ring, &a.block_sum(ring, cm), &b.block_sum(ring, cm), budget) {
                Decision::Yes => {
                    failure = Some(format!(
                        "{}; {}; C = class {c}",
                        describe(ring, "A", a),
                        describe(ring, "B", b)
                    ));
                    break;
                }
                Decision::Unknown => exhaustive = false,
                Decision::No => {}
            }
        }
        if failure.is_some() {
            break;
        }
    }
    Verdict {
        ring: table.ring.clone(),
        property: Property::GeneratorCancellation,
        bound: Some(table.bound),
        holds: failure.is_none(),
        exhaustive,
        witness: failure,
        checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(name: &str, bound: usize) -> (Ring, MonoidTable) {
        let r = Ring::preset(name).unwrap();
        let t = enumerate_projective_classes(&r, bound, &IsoBudget::default()).unwrap();
        (r, t)
    }

    #[test]
    fn field_classes_are_ranks() {
        let (r, t) = table("F2", 2);
        assert!(t.exhaustive);
        let ranks: Vec<usize> = t
            .classes
            .iter()
            .map(|c| (c.representative.rows(), &c.representative))
            .map(|(m, p)| r.span_order(m, &(0..m).map(|j| p.column(j)).collect::<Vec<_>>()))
            .map(|order| order.trailing_zeros() as usize)
            .collect();
        assert_eq!(ranks, vec![0, 1, 2]);
        assert_eq!(t.sums[1][1], Some(2));
        assert_eq!(t.sums[0][1], Some(1));
        assert_eq!(t.sums[1][2], None);
        // 1 + 1 + 6 + 1 idempotents of sizes 1 and 2 (zero, I, rank one).
        assert_eq!(t.classes.iter().map(|c| c.members).sum::<usize>(), 2 + 8);
    }

    #[test]
    fn z6_classes() {
        let (r, t) = table("Z/6", 1);
        let reps: Vec<Element> = t.classes.iter().map(|c| c.representative.get(0, 0)).collect();
        assert_eq!(reps, vec![r.int(0), r.int(1), r.int(3), r.int(4)]);
        let one_class = 1;
        assert_eq!(t.sums[2][3], None);
        assert_eq!(t.sums[0][2], Some(2));
        let sum = t.rep(2).block_sum(&r, t.rep(3));
        assert_eq!(is_iso(&r, &sum, t.rep(one_class), &IsoBudget::default()), Decision::Yes);
        assert!(t.classes[1].generator && !t.classes[2].generator);
    }

    #[test]
    fn matrix_ring_classes() {
        let (_, t) = table("M2(F2)", 1);
        // 0, the simple module, and the free module.
        assert_eq!(t.classes.len(), 3);
        assert_eq!(t.classes.iter().map(|c| c.members).sum::<usize>(), 8);
        assert_eq!(t.sums[1][1], None);
    }

    #[test]
    fn separative_examples() {
        let budget = IsoBudget::default();
        for (name, bound) in [("Z/6", 2), ("F2", 3), ("F4", 2), ("M2(F2)", 1), ("Ex2.12(F2)", 2)] {
            let (r, t) = table(name, bound);
            let v = check_separative(&r, &t, &budget);
            assert!(v.holds && v.exhaustive, "{name}: {v}");
            let g = check_generator_cancellation(&r, &t, &budget);
            assert!(g.holds && g.exhaustive, "{name}: {g}");
        }
    }

    #[test]
    fn iso_is_an_equivalence_on_classes() {
        let (r, t) = table("Z/6", 2);
        let budget = IsoBudget::default();
        let reps: Vec<&Mat> = t.classes.iter().map(|c| &c.representative).collect();
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let forward = is_iso(&r, a, b, &budget);
                assert_eq!(forward, is_iso(&r, b, a, &budget));
                assert_eq!(forward == Decision::Yes, i == j);
            }
        }
    }

    #[test]
    fn oversized_enumeration_is_refused() {
        let r = Ring::preset("M2(F2)").unwrap();
        assert!(matches!(
            enumerate_projective_classes(&r, 3, &IsoBudget::default()),
            Err(OracleError::CapExceeded { .. })
        ));
    }
}
