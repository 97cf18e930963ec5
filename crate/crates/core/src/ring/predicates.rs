use super::{Element, Ring, RingError};

/// Coefficient tuples up to this many are searched exhaustively in
/// canonical order; larger problems go through the linear solver.
const CANONICAL_SEARCH_LIMIT: u64 = 4096;

/// Witness that `R a R = R`: `sum_i left[i] * a * right[i] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullnessWitness {
    pub target: Element,
    pub left: Vec<Element>,
    pub right: Vec<Element>,
}

impl FullnessWitness {
    pub fn replays(&self, ring: &Ring) -> bool {
        self.left.len() == self.right.len()
            && ring.sum(self.left.iter().zip(&self.right).map(|(&x, &y)| ring.mul3(x, self.target, y))) == ring.one()
    }
}

impl Ring {
    fn same_ring(&self, xs: &[Element]) -> Result<(), RingError> {
        if xs.iter().all(|&x| self.owns(x)) {
            Ok(())
        } else {
            Err(RingError::MixedRings)
        }
    }

    fn canonical_tuples(&self, k: usize) -> Option<impl Iterator<Item = Vec<Element>> + '_> {
        let total = (self.size() as u64).checked_pow(k as u32)?;
        if total > CANONICAL_SEARCH_LIMIT {
            return None;
        }
        let n = self.size() as u64;
        Some((0..total).map(move |mut idx| {
            let mut tuple = vec![self.zero(); k];
            for slot in (0..k).rev() {
                tuple[slot] = self.element_at((idx % n) as usize);
                idx /= n;
            }
            tuple
        }))
    }

    /// Coefficients `x` with `sum_i gens[i] * x[i] = b`, or `None` when `b`
    /// is not in the right ideal the generators span.
    ///
    /// Small searches return the first solution in canonical order (first
    /// coefficient most significant); larger ones return the solver's
    /// particular solution.
    pub fn solve_right_combination(&self, gens: &[Element], b: Element) -> Result<Option<Vec<Element>>, RingError> {
        self.same_ring(gens)?;
        self.same_ring(&[b])?;
        if let Some(mut tuples) = self.canonical_tuples(gens.len()) {
            return Ok(tuples.find(|x| self.sum(gens.iter().zip(x).map(|(&a, &c)| self.mul(a, c))) == b));
        }
        Ok(self.right_member(gens, b))
    }

    /// Mirror of [`Ring::solve_right_combination`]: `sum_i x[i] * gens[i] = b`.
    pub fn solve_left_combination(&self, gens: &[Element], b: Element) -> Result<Option<Vec<Element>>, RingError> {
        self.same_ring(gens)?;
        self.same_ring(&[b])?;
        if let Some(mut tuples) = self.canonical_tuples(gens.len()) {
            return Ok(tuples.find(|x| self.sum(gens.iter().zip(x).map(|(&a, &c)| self.mul(c, a))) == b));
        }
        Ok(self.left_member(gens, b))
    }

    /// Linear-solver membership test for `b` in `sum gens[i] R`.
    pub(crate) fn right_member(&self, gens: &[Element], b: Element) -> Option<Vec<Element>> {
        self.solve_additive(
            gens.len(),
            |x| vec![self.sum(gens.iter().zip(x).map(|(&a, &c)| self.mul(a, c)))],
            &[b],
        )
    }

    /// Linear-solver membership test for `b` in `sum R gens[i]`.
    pub(crate) fn left_member(&self, gens: &[Element], b: Element) -> Option<Vec<Element>> {
        self.solve_additive(
            gens.len(),
            |x| vec![self.sum(gens.iter().zip(x).map(|(&a, &c)| self.mul(c, a)))],
            &[b],
        )
    }

    /// Two-sided inverse of `x`, if any.
    pub fn is_unit(&self, x: Element) -> Option<Element> {
        self.inverse_of(x)
    }

    /// First `y` in canonical order with `x y x = x`.
    pub fn is_regular(&self, x: Element) -> Option<Element> {
        self.elements().find(|&y| self.mul3(x, y, x) == x)
    }

    /// Witness for `R a R = R`, or `None`.
    pub fn is_full(&self, a: Element) -> Option<FullnessWitness> {
        if let Some(inv) = self.is_unit(a) {
            return Some(FullnessWitness { target: a, left: vec![inv], right: vec![self.one()] });
        }
        let d = self.dim();
        let basis: Vec<Element> = (0..d).map(|t| self.basis(t)).collect();
        let x = self.solve_additive(
            d,
            |x| vec![self.sum(x.iter().zip(&basis).map(|(&l, &b)| self.mul3(l, a, b)))],
            &[self.one()],
        )?;
        let (left, right) = x
            .into_iter()
            .zip(basis)
            .filter(|(l, _)| !self.is_zero(*l))
            .unzip();
        Some(FullnessWitness { target: a, left, right })
    }

    /// The right ideal `sum gens[i] R` as a sorted element list.
    pub fn right_ideal(&self, gens: &[Element]) -> Vec<Element> {
        let additive: Vec<Element> = gens
            .iter()
            .flat_map(|&g| (0..self.dim()).map(move |t| (g, t)))
            .map(|(g, t)| self.mul(g, self.basis(t)))
            .collect();
        self.additive_closure(&additive)
    }

    pub fn left_ideal(&self, gens: &[Element]) -> Vec<Element> {
        let additive: Vec<Element> = gens
            .iter()
            .flat_map(|&g| (0..self.dim()).map(move |t| (g, t)))
            .map(|(g, t)| self.mul(self.basis(t), g))
            .collect();
        self.additive_closure(&additive)
    }

    /// The two-sided ideal generated by `gens`.
    pub fn two_sided_ideal(&self, gens: &[Element]) -> Vec<Element> {
        let d = self.dim();
        let mut additive = Vec::new();
        for &g in gens {
            for s in 0..d {
                for t in 0..d {
                    additive.push(self.mul3(self.basis(s), g, self.basis(t)));
                }
            }
        }
        self.additive_closure(&additive)
    }

    /// Right annihilator `{ r : x r = 0 }`.
    pub fn right_annihilator(&self, x: Element) -> Vec<Element> {
        self.elements().filter(|&r| self.is_zero(self.mul(x, r))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> Ring {
        Ring::preset("Z/6").unwrap()
    }

    #[test]
    fn right_combination_examples() {
        let r = z6();
        let got = r.solve_right_combination(&[r.int(3), r.int(4)], r.one()).unwrap();
        assert_eq!(got, Some(vec![r.int(1), r.int(1)]));
        assert_eq!(r.solve_right_combination(&[r.zero()], r.one()).unwrap(), None);
        let a = r.int(2);
        assert_eq!(r.solve_right_combination(&[a], a).unwrap(), Some(vec![r.one()]));
    }

    #[test]
    fn canonical_solution_is_first_in_exhaustive_order() {
        // Independent enumeration over Z/6 x Z/6, first coefficient major.
        let r = z6();
        let mut first = None;
        'outer: for x1 in 0..6 {
            for x2 in 0..6 {
                if (3 * x1 + 4 * x2) % 6 == 1 {
                    first = Some((x1, x2));
                    break 'outer;
                }
            }
        }
        let (x1, x2) = first.unwrap();
        let got = r.solve_right_combination(&[r.int(3), r.int(4)], r.one()).unwrap();
        assert_eq!(got, Some(vec![r.int(x1), r.int(x2)]));
    }

    #[test]
    fn mixed_rings_are_an_error() {
        let r = z6();
        let other = Ring::preset("Z/5").unwrap();
        assert_eq!(r.solve_right_combination(&[other.one()], r.one()), Err(RingError::MixedRings));
        assert_eq!(r.solve_left_combination(&[r.one()], other.one()), Err(RingError::MixedRings));
    }

    #[test]
    fn large_combination_uses_solver() {
        let r = Ring::preset("M2(F2)").unwrap();
        let e11 = r.basis(0);
        let e22 = r.basis(3);
        let e12 = r.basis(1);
        // 16^4 tuples is past the canonical limit.
        let gens = [e11, e22, e12, e11];
        let x = r.solve_right_combination(&gens, r.one()).unwrap().unwrap();
        assert_eq!(r.sum(gens.iter().zip(&x).map(|(&a, &c)| r.mul(a, c))), r.one());
        assert_eq!(r.solve_right_combination(&[e11, e12], r.one()).unwrap(), None);
        let y = r.solve_left_combination(&[e11, r.basis(2)], r.one()).unwrap();
        assert!(y.is_none());
    }

    #[test]
    fn unit_examples() {
        let r = z6();
        assert_eq!(r.is_unit(r.int(5)), Some(r.int(5)));
        assert_eq!(r.is_unit(r.int(3)), None);
        assert_eq!(r.is_unit(r.one()), Some(r.one()));
    }

    #[test]
    fn regular_examples() {
        let r = z6();
        assert_eq!(r.is_regular(r.int(3)), Some(r.int(1)));
        for e in r.idempotents().to_vec() {
            let y = r.is_regular(e).unwrap();
            assert_eq!(r.mul3(e, y, e), e);
        }
        let ex = Ring::preset("Ex2.12(F2)").unwrap();
        assert_eq!(ex.is_regular(ex.basis(1)), None);
    }

    #[test]
    fn fullness_examples() {
        let r = z6();
        let w = r.is_full(r.one()).unwrap();
        assert_eq!((w.left.clone(), w.right.clone()), (vec![r.one()], vec![r.one()]));
        assert!(r.is_full(r.int(3)).is_none());
        let m = Ring::preset("M2(F2)").unwrap();
        let e11 = m.basis(0);
        let w = m.is_full(e11).unwrap();
        assert!(w.replays(&m));
        assert_eq!(m.two_sided_ideal(&[e11]).len(), 16);
    }

    #[test]
    fn ideals_of_z6() {
        let r = z6();
        assert_eq!(r.right_ideal(&[r.int(3)]), vec![r.int(0), r.int(3)]);
        assert_eq!(r.left_ideal(&[r.int(4)]), vec![r.int(0), r.int(2), r.int(4)]);
        assert_eq!(r.right_annihilator(r.int(2)), vec![r.int(0), r.int(3)]);
    }
}
