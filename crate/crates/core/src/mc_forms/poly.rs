//! Polynomial differential forms in the loop-group coordinates `g_{a,n}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::loop_algebra::LoopLabel;
use crate::rational::Rational;

/// Commutative product of coordinates, sorted by label with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordMonomial(Vec<(LoopLabel, u32)>);

impl CoordMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (LoopLabel, u32)>) -> Self {
        let mut m = Self::one();
        for (label, mult) in factors {
            for _ in 0..mult {
                m = m.times(label);
            }
        }
        m
    }

    pub fn factors(&self) -> &[(LoopLabel, u32)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, k)| *k as usize).sum()
    }

    pub fn mode_sum(&self) -> i64 {
        self.0.iter().map(|(l, k)| l.mode * i64::from(*k)).sum()
    }

    pub fn multiplicity(&self, label: LoopLabel) -> u32 {
        self.0
            .iter()
            .find(|(l, _)| *l == label)
            .map_or(0, |(_, k)| *k)
    }

    pub fn times(&self, label: LoopLabel) -> Self {
        let mut v = self.0.clone();
        match v.binary_search_by(|(l, _)| l.cmp(&label)) {
            Ok(i) => v[i].1 += 1,
            Err(i) => v.insert(i, (label, 1)),
        }
        CoordMonomial(v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (label, k) in &other.0 {
            for _ in 0..*k {
                out = out.times(*label);
            }
        }
        out
    }

    /// The monomial divided by one factor of `label`, if present.
    pub fn without(&self, label: LoopLabel) -> Option<Self> {
        let i = self.0.iter().position(|(l, _)| *l == label)?;
        let mut v = self.0.clone();
        if v[i].1 == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some(CoordMonomial(v))
    }

    /// Every way of splitting the monomial into two parts, as the mode sum of
    /// the first part.
    pub fn split_mode_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64];
        for (label, k) in &self.0 {
            let mut next = Vec::with_capacity(sums.len() * (*k as usize + 1));
            for s in &sums {
                for j in 0..=i64::from(*k) {
                    next.push(s + j * label.mode);
                }
            }
            sums = next;
        }
        sums
    }

    pub fn all_modes_zero(&self) -> bool {
        self.0.iter().all(|(l, _)| l.mode == 0)
    }
}

/// A one-form `Σ coef · monomial · dg_{b,m}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormPolynomial {
    terms: BTreeMap<(CoordMonomial, LoopLabel), Rational>,
}

impl FormPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `dg_{label}`.
    pub fn differential(label: LoopLabel) -> Self {
        let mut p = Self::zero();
        p.add_term(CoordMonomial::one(), label, crate::rational::one());
        p
    }

    pub fn term(coef: Rational, monomial: CoordMonomial, differential: LoopLabel) -> Self {
        let mut p = Self::zero();
        p.add_term(monomial, differential, coef);
        p
    }

    pub fn add_term(&mut self, monomial: CoordMonomial, differential: LoopLabel, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let key = (monomial, differential);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += coef;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormPolynomial, scale: &Rational) {
        for ((m, d), v) in &other.terms {
            self.add_term(m.clone(), *d, v * scale);
        }
    }

    pub fn coeff(&self, monomial: &CoordMonomial, differential: LoopLabel) -> Rational {
        self.terms
            .get(&(monomial.clone(), differential))
            .cloned()
            .unwrap_or_else(crate::rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoordMonomial, LoopLabel, &Rational)> {
        self.terms.iter().map(|((m, d), v)| (m, *d, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&CoordMonomial, LoopLabel) -> bool) -> Self {
        FormPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|((m, d), _)| keep(m, *d))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

/// A two-form `Σ coef · monomial · dg_p ∧ dg_q`, stored with `p < q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoForm {
    terms: BTreeMap<(CoordMonomial, LoopLabel, LoopLabel), Rational>,
}

impl TwoForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `coef · monomial · dg_p ∧ dg_q`, reordering with a sign.
    pub fn add_term(
        &mut self,
        monomial: CoordMonomial,
        p: LoopLabel,
        q: LoopLabel,
        coef: Rational,
    ) {
        if p == q || coef.is_zero() {
            return;
        }
        let (key, coef) = if p < q {
            ((monomial, p, q), coef)
        } else {
            ((monomial, q, p), -coef)
        };
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += coef;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TwoForm, scale: &Rational) {
        for ((m, p, q), v) in &other.terms {
            self.add_term(m.clone(), *p, *q, v * scale);
        }
    }

    pub fn coeff(&self, monomial: &CoordMonomial, p: LoopLabel, q: LoopLabel) -> Rational {
        let (key, sign) = if p <= q {
            ((monomial.clone(), p, q), 1)
        } else {
            ((monomial.clone(), q, p), -1)
        };
        match self.terms.get(&key) {
            Some(v) if sign == 1 => v.clone(),
            Some(v) => -v.clone(),
            None => crate::rational::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoordMonomial, LoopLabel, LoopLabel, &Rational)> {
        self.terms.iter().map(|((m, p, q), v)| (m, *p, *q, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }
}

/// `d(c · M · dg_b) = Σ_{g_x | M} c · mult_x · (M / g_x) · dg_x ∧ dg_b`.
pub fn exterior_derivative(p: &FormPolynomial) -> TwoForm {
    let mut out = TwoForm::zero();
    for (m, b, coef) in p.terms() {
        for (x, mult) in m.factors() {
            let rest = m.without(*x).expect("factor is present");
            out.add_term(rest, *x, b, coef * Rational::from_integer((*mult).into()));
        }
    }
    out
}

pub fn wedge(p: &FormPolynomial, q: &FormPolynomial) -> TwoForm {
    let mut out = TwoForm::zero();
    add_wedge(&mut out, &crate::rational::one(), p, q, usize::MAX);
    out
}

/// `out += scale · p ∧ q`, skipping products whose total degree
/// (coordinates plus the two differentials) exceeds `max_degree`.
pub fn add_wedge(
    out: &mut TwoForm,
    scale: &Rational,
    p: &FormPolynomial,
    q: &FormPolynomial,
    max_degree: usize,
) {
    for (mp, dp, cp) in p.terms() {
        let dp_deg = mp.degree() + 1;
        if dp_deg >= max_degree {
            continue;
        }
        let coef = cp * scale;
        for (mq, dq, cq) in q.terms() {
            if dp_deg + mq.degree() + 1 > max_degree || dp == dq {
                continue;
            }
            out.add_term(mp.mul(mq), dp, dq, &coef * cq);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn l(gen: usize, mode: i64) -> LoopLabel {
        LoopLabel::new(gen, mode)
    }

    fn g(labels: &[LoopLabel]) -> CoordMonomial {
        CoordMonomial::from_factors(labels.iter().map(|&x| (x, 1)))
    }

    #[test]
    fn derivative_examples() {
        assert!(exterior_derivative(&FormPolynomial::differential(l(1, 0))).is_zero());

        let d = exterior_derivative(&FormPolynomial::term(int(1), g(&[l(2, 1)]), l(1, 0)));
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeff(&CoordMonomial::one(), l(2, 1), l(1, 0)), int(1));

        let d = exterior_derivative(&FormPolynomial::term(
            int(1),
            g(&[l(2, 1), l(3, -1)]),
            l(1, 0),
        ));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&g(&[l(3, -1)]), l(2, 1), l(1, 0)), int(1));
        assert_eq!(d.coeff(&g(&[l(2, 1)]), l(3, -1), l(1, 0)), int(1));
    }

    #[test]
    fn derivative_counts_multiplicity() {
        let m = CoordMonomial::from_factors([(l(2, 0), 2)]);
        let d = exterior_derivative(&FormPolynomial::term(int(3), m, l(1, 0)));
        assert_eq!(d.coeff(&g(&[l(2, 0)]), l(2, 0), l(1, 0)), int(6));
    }

    #[test]
    fn wedge_examples() {
        let a = FormPolynomial::differential(l(1, 0));
        let b = FormPolynomial::differential(l(2, 0));
        let w = wedge(&a, &b);
        assert_eq!(w.len(), 1);
        assert_eq!(w.coeff(&CoordMonomial::one(), l(1, 0), l(2, 0)), int(1));
        assert_eq!(w.coeff(&CoordMonomial::one(), l(2, 0), l(1, 0)), int(-1));

        assert!(wedge(&a, &a).is_zero());

        let p = FormPolynomial::term(int(1), g(&[l(3, 1)]), l(1, 0));
        let q = FormPolynomial::differential(l(2, -1));
        let w = wedge(&p, &q);
        assert_eq!(w.len(), 1);
        assert_eq!(w.coeff(&g(&[l(3, 1)]), l(1, 0), l(2, -1)), int(1));
    }

    #[test]
    fn wedge_is_antisymmetric() {
        let mut p = FormPolynomial::term(int(2), g(&[l(1, 1)]), l(2, 0));
        p.add_term(CoordMonomial::one(), l(3, 0), int(-1));
        let mut q = FormPolynomial::term(int(5), g(&[l(3, -1)]), l(1, 0));
        q.add_term(g(&[l(2, 0)]), l(3, 0), int(1));
        let mut sum = wedge(&p, &q);
        sum.add_scaled(&wedge(&q, &p), &int(1));
        assert!(sum.is_zero());
    }

    #[test]
    fn exterior_derivative_squares_to_zero_on_exact_forms() {
        // d(d(x y z)) = 0 where d(xyz) = yz dx + xz dy + xy dz
        let (x, y, z) = (l(1, 0), l(2, 1), l(3, -1));
        let mut p = FormPolynomial::term(int(1), g(&[y, z]), x);
        p.add_term(g(&[x, z]), y, int(1));
        p.add_term(g(&[x, y]), z, int(1));
        assert!(exterior_derivative(&p).is_zero());
    }

    #[test]
    fn split_mode_sums_enumerates_sub_multisets() {
        let m = CoordMonomial::from_factors([(l(1, 1), 2), (l(2, -3), 1)]);
        let mut sums = m.split_mode_sums();
        sums.sort();
        assert_eq!(sums, vec![-3, -2, -1, 0, 1, 2]);
    }
}
