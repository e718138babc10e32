//! Maurer–Cartan forms of the loop group as polynomials in the coordinates.
//!
//! With `A = g_{a,n} T_{a,n}`, the canonical form is
//!
//! ```text
//! θ = e^{-A} d e^{A} = Σ_{k≥0} 1/(k+1)! [..[[dA, A], A].., A]   (k brackets)
//! ```
//!
//! and `ω^{a,n}` is its `T_{a,n}` component. Everything is computed in the
//! real convention `[T_a, T_b] = f_{ab}^c T_c`, so no factors of `i` appear
//! and `dω^c = -½ f_{ab}^c ω^a ∧ ω^b` holds exactly.
//!
//! Only coordinates with modes inside the window are switched on (the rest
//! are set to zero, which commutes with `d` and `∧`). Nested brackets are
//! evaluated without mode truncation, so a form `ω^{c,l}` with `|l| <= M` is
//! exact up to the series degree. Forms with `|l| > M` are dropped and their
//! terms counted as censored; a residual term that could have received a
//! contribution from a dropped form is censored too.

mod poly;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{StructureConstants, StructureTensor};
use crate::error::{Error, Result};
use crate::loop_algebra::{labels_for_dim, LoopLabel, ModeWindow};
use crate::rational::{self, Rational};
use crate::splitting::{Sector, SplitKind, Splitting};

pub use poly::{add_wedge, exterior_derivative, wedge, CoordMonomial, FormPolynomial, TwoForm};

/// Default series degree.
pub const DEFAULT_DEGREE: usize = 4;

/// `ω^{a,n}` for every in-window label, truncated at total degree `degree`
/// (coordinate degree `degree - 1` plus the differential).
#[derive(Clone, Debug, PartialEq)]
pub struct FormSeries {
    pub window: ModeWindow,
    pub degree: usize,
    pub forms: BTreeMap<LoopLabel, FormPolynomial>,
    /// Terms of out-of-window forms that were dropped.
    pub censored_terms: usize,
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(rational::one(), |acc, k| acc * rational::int(k))
}

pub fn canonical_form_series(
    f: &StructureConstants,
    window: ModeWindow,
    degree: usize,
) -> Result<FormSeries> {
    if degree == 0 {
        return Err(Error::InvalidDegree(degree));
    }
    let coords = labels_for_dim(f.dim(), window);

    // current = k-fold nested bracket [..[dA, A].., A], keyed by generator
    let mut current: BTreeMap<LoopLabel, FormPolynomial> = coords
        .iter()
        .map(|&x| (x, FormPolynomial::differential(x)))
        .collect();
    let mut theta = current.clone();

    for k in 1..degree {
        let mut next: BTreeMap<LoopLabel, FormPolynomial> = BTreeMap::new();
        for (t, poly) in &current {
            for &x in &coords {
                for (c, v) in f.row(t.gen, x.gen) {
                    let target = next.entry(LoopLabel::new(*c, t.mode + x.mode)).or_default();
                    for (m, d, coef) in poly.terms() {
                        target.add_term(m.times(x), d, coef * v);
                    }
                }
            }
        }
        let scale = rational::one() / factorial(k + 1);
        for (t, poly) in &next {
            theta.entry(*t).or_default().add_scaled(poly, &scale);
        }
        current = next;
    }

    let mut forms = BTreeMap::new();
    let mut censored_terms = 0;
    for (t, poly) in theta {
        if window.contains(t.mode) {
            forms.insert(t, poly);
        } else {
            censored_terms += poly.len();
        }
    }
    Ok(FormSeries {
        window,
        degree,
        forms,
        censored_terms,
    })
}

impl FormSeries {
    pub fn form(&self, label: LoopLabel) -> FormPolynomial {
        self.forms.get(&label).cloned().unwrap_or_default()
    }

    /// `ω^{a,0}` with every nonzero-mode coordinate and differential set to
    /// zero, keyed by `a`.
    pub fn zero_mode_reduction(&self) -> BTreeMap<usize, FormPolynomial> {
        self.forms
            .iter()
            .filter(|(t, _)| t.mode == 0)
            .map(|(t, p)| (t.gen, p.filtered(|m, d| d.mode == 0 && m.all_modes_zero())))
            .collect()
    }
}

/// λ-buckets `α -> ω^{a,n;α}` of one form.
pub type GradedForm = BTreeMap<u32, FormPolynomial>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    pub window: ModeWindow,
    pub degree: usize,
    pub split: Splitting,
    pub forms: BTreeMap<LoopLabel, GradedForm>,
    pub censored_terms: usize,
}

/// λ-power of a term after `g -> λ g` on every `V1` coordinate.
pub fn lambda_power(s: &Splitting, monomial: &CoordMonomial, differential: LoopLabel) -> u32 {
    let coords: u32 = monomial
        .factors()
        .iter()
        .filter(|(x, _)| s.sector(*x) == Sector::V1)
        .map(|(_, k)| *k)
        .sum();
    coords + s.sector(differential).bit()
}

pub fn rescale_and_collect(series: &FormSeries, s: &Splitting) -> GradedSeries {
    let forms = series
        .forms
        .iter()
        .map(|(t, poly)| {
            let mut graded = GradedForm::new();
            for (m, d, coef) in poly.terms() {
                graded.entry(lambda_power(s, m, d)).or_default().add_term(
                    m.clone(),
                    d,
                    coef.clone(),
                );
            }
            (*t, graded)
        })
        .collect();
    GradedSeries {
        window: series.window,
        degree: series.degree,
        split: s.clone(),
        forms,
        censored_terms: series.censored_terms,
    }
}

impl GradedSeries {
    pub fn bucket(&self, label: LoopLabel, power: u32) -> Option<&FormPolynomial> {
        self.forms.get(&label).and_then(|g| g.get(&power))
    }

    /// Sum of all buckets of one form, i.e. the form at `λ = 1`.
    pub fn resum(&self, label: LoopLabel) -> FormPolynomial {
        let mut out = FormPolynomial::zero();
        for p in self.forms.get(&label).into_iter().flat_map(|g| g.values()) {
            out.add_scaled(p, &rational::one());
        }
        out
    }

    /// Buckets whose power has the wrong parity for the form's mode.
    pub fn parity_violations(&self) -> Vec<(LoopLabel, u32)> {
        self.forms
            .iter()
            .flat_map(|(t, g)| g.keys().map(move |alpha| (*t, *alpha)))
            .filter(|(t, alpha)| (*alpha as i64 - t.mode).rem_euclid(2) != 0)
            .collect()
    }

    /// Forms whose `λ^0` bucket breaks the zero-mode leading-term rule: empty
    /// for `n != 0`; for `n = 0` it holds `dg_{a,0}` with coefficient one and
    /// only zero-mode factors.
    pub fn leading_term_violations(&self) -> Vec<LoopLabel> {
        let mut out = Vec::new();
        for (t, g) in &self.forms {
            let bucket = g.get(&0);
            let ok = if t.mode != 0 {
                bucket.is_none_or(|b| b.is_empty())
            } else {
                bucket.is_some_and(|b| {
                    b.coeff(&CoordMonomial::one(), *t) == rational::one()
                        && b.terms().all(|(m, d, _)| d.mode == 0 && m.all_modes_zero())
                })
            };
            if !ok {
                out.push(*t);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualTerm {
    /// The equation `dω^{form;order}`.
    pub form: LoopLabel,
    pub order: u32,
    /// `[gen, mode, multiplicity]` per coordinate factor.
    pub monomial: Vec<(usize, i64, u32)>,
    pub differentials: (LoopLabel, LoopLabel),
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub alpha_max: u32,
    pub degree: usize,
    pub window: ModeWindow,
    /// Distinct uncensored two-form terms on either side of the equations.
    pub checked_terms: usize,
    /// Terms excluded because a dropped form could contribute to them.
    pub censored_terms: usize,
    pub residuals: Vec<ResidualTerm>,
}

impl McReport {
    pub fn is_clean(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Whether some product `ω^{a,n} ∧ ω^{b,m}` producing this term has a factor
/// outside the window.
fn is_censored(window: ModeWindow, monomial: &CoordMonomial, p: LoopLabel, q: LoopLabel) -> bool {
    let total = monomial.mode_sum();
    monomial.split_mode_sums().into_iter().any(|s| {
        let n = p.mode + s;
        let m = q.mode + (total - s);
        !window.contains(n) || !window.contains(m)
    })
}

/// Checks `dω^{c,l;α} + ½ Σ_β f_{ab}^c ω^{a,n;β} ∧ ω^{b,l-n;α-β} = 0` for
/// every in-window `(c, l)` and `α <= alpha_max`, on two-form terms of total
/// degree at most the series degree.
pub fn verify_mc_equations(
    graded: &GradedSeries,
    f: &StructureConstants,
    alpha_max: u32,
) -> Result<McReport> {
    let degree = graded.degree;
    if degree < alpha_max as usize + 1 {
        return Err(Error::DegreeTooLow { degree, alpha_max });
    }
    let window = graded.window;
    let by_target = f.by_target();
    let half = rational::frac(1, 2);
    let empty = FormPolynomial::zero();

    let mut report = McReport {
        alpha_max,
        degree,
        window,
        checked_terms: 0,
        censored_terms: 0,
        residuals: Vec::new(),
    };

    for &target in graded.forms.keys() {
        for alpha in 0..=alpha_max {
            let lhs = exterior_derivative(graded.bucket(target, alpha).unwrap_or(&empty));
            let mut rhs = TwoForm::zero();
            for (a, b, v) in &by_target[target.gen] {
                let scale = v * &half;
                for n in window.modes() {
                    let m = target.mode - n;
                    if !window.contains(m) {
                        continue;
                    }
                    for beta in 0..=alpha {
                        let (Some(p), Some(q)) = (
                            graded.bucket(LoopLabel::new(*a, n), beta),
                            graded.bucket(LoopLabel::new(*b, m), alpha - beta),
                        ) else {
                            continue;
                        };
                        add_wedge(&mut rhs, &scale, p, q, degree);
                    }
                }
            }

            let mut support = std::collections::BTreeSet::new();
            for (m, p, q, _) in lhs.terms().chain(rhs.terms()) {
                if m.degree() + 2 <= degree {
                    support.insert((m.clone(), p, q));
                }
            }
            for (m, p, q) in support {
                if is_censored(window, &m, p, q) {
                    report.censored_terms += 1;
                    continue;
                }
                report.checked_terms += 1;
                let residual = lhs.coeff(&m, p, q) + rhs.coeff(&m, p, q);
                if !residual.is_zero() {
                    report.residuals.push(ResidualTerm {
                        form: target,
                        order: alpha,
                        monomial: m
                            .factors()
                            .iter()
                            .map(|(x, k)| (x.gen, x.mode, *k))
                            .collect(),
                        differentials: (p, q),
                        coef: rational::to_pq(&residual),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Structural invariants of the graded series for its splitting kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub parity_violations: Vec<(LoopLabel, u32)>,
    pub leading_term_violations: Vec<LoopLabel>,
    pub resummation_failures: Vec<LoopLabel>,
}

impl GradingReport {
    pub fn is_clean(&self) -> bool {
        self.parity_violations.is_empty()
            && self.leading_term_violations.is_empty()
            && self.resummation_failures.is_empty()
    }
}

/// Parity for the coset splitting, leading terms for the zero-mode
/// splitting, and `λ = 1` resummation for all kinds.
pub fn check_grading(series: &FormSeries, graded: &GradedSeries) -> GradingReport {
    let parity_violations = match graded.split.kind() {
        SplitKind::ModeParityCoset => graded.parity_violations(),
        _ => Vec::new(),
    };
    let leading_term_violations = match graded.split.kind() {
        SplitKind::ZeroModeSubalgebra => graded.leading_term_violations(),
        _ => Vec::new(),
    };
    let resummation_failures = series
        .forms
        .iter()
        .filter(|(t, p)| graded.resum(**t) != **p)
        .map(|(t, _)| *t)
        .collect();
    GradingReport {
        parity_violations,
        leading_term_violations,
        resummation_failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermDump {
    pub monomial: Vec<(usize, i64, u32)>,
    pub differential: (usize, i64),
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BucketDump {
    pub power: u32,
    pub terms: Vec<TermDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormDump {
    pub label: (usize, i64),
    pub buckets: Vec<BucketDump>,
}

/// Per-label bucket listing for JSON export.
pub fn dump_series(graded: &GradedSeries) -> Vec<FormDump> {
    graded
        .forms
        .iter()
        .map(|(t, g)| FormDump {
            label: (t.gen, t.mode),
            buckets: g
                .iter()
                .map(|(power, p)| BucketDump {
                    power: *power,
                    terms: p
                        .terms()
                        .map(|(m, d, c)| TermDump {
                            monomial: m
                                .factors()
                                .iter()
                                .map(|(x, k)| (x.gen, x.mode, *k))
                                .collect(),
                            differential: (d.gen, d.mode),
                            coef: rational::to_pq(c),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_constants;
    use crate::rational::{frac, int};

    fn l(gen: usize, mode: i64) -> LoopLabel {
        LoopLabel::new(gen, mode)
    }

    fn su2() -> StructureConstants {
        builtin_constants("su2").unwrap()
    }

    #[test]
    fn abelian_series_is_just_the_differential() {
        let f = StructureConstants::abelian(4);
        let series = canonical_form_series(&f, ModeWindow::new(1), 4).unwrap();
        assert_eq!(series.forms.len(), 12);
        for (t, p) in &series.forms {
            assert_eq!(*p, FormPolynomial::differential(*t));
        }
    }

    #[test]
    fn quadratic_coefficient_matches_direct_evaluation() {
        let f = su2();
        let w = ModeWindow::new(1);
        let series = canonical_form_series(&f, w, 2).unwrap();

        // ½[dA, A] directly: component (c,l) = ½ Σ f_{bc'}^c dg_{b,m} g_{c',n}, m + n = l
        let mut direct = FormPolynomial::zero();
        for b in 1..=3 {
            for cp in 1..=3 {
                for m in w.modes() {
                    let n = 1 - m;
                    if w.contains(n) {
                        let coef = f.constant(b, cp, 3) * frac(1, 2);
                        direct.add_term(CoordMonomial::one().times(l(cp, n)), l(b, m), coef);
                    }
                }
            }
        }
        direct.add_term(CoordMonomial::one(), l(3, 1), int(1));
        assert_eq!(series.form(l(3, 1)), direct);

        let g21 = CoordMonomial::one().times(l(2, 1));
        assert_eq!(series.form(l(3, 1)).coeff(&g21, l(1, 0)), frac(1, 2));
    }

    #[test]
    fn invalid_degree() {
        assert!(matches!(
            canonical_form_series(&su2(), ModeWindow::new(0), 0),
            Err(Error::InvalidDegree(0))
        ));
    }

    #[test]
    fn degree_too_low() {
        let f = su2();
        let series = canonical_form_series(&f, ModeWindow::new(1), 1).unwrap();
        let graded = rescale_and_collect(&series, &Splitting::mode_parity());
        assert!(matches!(
            verify_mc_equations(&graded, &f, 2),
            Err(Error::DegreeTooLow {
                degree: 1,
                alpha_max: 2
            })
        ));
    }

    #[test]
    fn zero_mode_buckets() {
        let f = su2();
        let series = canonical_form_series(&f, ModeWindow::new(1), 3).unwrap();
        let graded = rescale_and_collect(&series, &Splitting::zero_mode());
        assert!(graded.bucket(l(1, 0), 0).is_some_and(|b| !b.is_empty()));
        assert!(graded.bucket(l(1, 1), 0).is_none());
        assert!(graded.leading_term_violations().is_empty());
    }

    #[test]
    fn coset_buckets_have_mode_parity() {
        let f = su2();
        let series = canonical_form_series(&f, ModeWindow::new(2), 3).unwrap();
        let graded = rescale_and_collect(&series, &Splitting::mode_parity());
        assert!(graded.parity_violations().is_empty());
        assert!(graded.forms[&l(1, 1)].keys().all(|a| a % 2 == 1));
        assert!(graded.forms[&l(1, 2)].keys().all(|a| a % 2 == 0));
        assert!(check_grading(&series, &graded).is_clean());
    }

    #[test]
    fn mc_equations_hold() {
        let f = su2();
        let series = canonical_form_series(&f, ModeWindow::new(1), 3).unwrap();
        for s in [Splitting::mode_parity(), Splitting::zero_mode()] {
            let graded = rescale_and_collect(&series, &s);
            let report = verify_mc_equations(&graded, &f, 2).unwrap();
            assert!(report.is_clean(), "{:?}", report.residuals.first());
            assert!(report.checked_terms > 0);
        }
    }

    #[test]
    fn zero_order_equation_is_the_base_algebra() {
        // dω^{c,0;0} = -½ f_{ab}^c ω^{a,0;0} ∧ ω^{b,0;0} using zero modes only
        let f = su2();
        let series = canonical_form_series(&f, ModeWindow::new(1), 3).unwrap();
        let graded = rescale_and_collect(&series, &Splitting::zero_mode());
        for c in 1..=3 {
            let mut total = exterior_derivative(graded.bucket(l(c, 0), 0).unwrap());
            for a in 1..=3 {
                for b in 1..=3 {
                    let coef = f.constant(a, b, c) * frac(1, 2);
                    let (p, q) = (
                        graded.bucket(l(a, 0), 0).unwrap(),
                        graded.bucket(l(b, 0), 0).unwrap(),
                    );
                    add_wedge(&mut total, &coef, p, q, 3);
                }
            }
            assert!(
                total.terms().all(|(m, _, _, _)| m.degree() + 2 > 3),
                "c={c}"
            );
        }
    }

    #[test]
    fn a_wrong_coefficient_is_detected() {
        let f = su2();
        let mut series = canonical_form_series(&f, ModeWindow::new(0), 3).unwrap();
        let g2 = CoordMonomial::one().times(l(2, 0));
        series
            .forms
            .get_mut(&l(3, 0))
            .unwrap()
            .add_term(g2, l(1, 0), frac(1, 2));
        let graded = rescale_and_collect(&series, &Splitting::zero_mode());
        let report = verify_mc_equations(&graded, &f, 2).unwrap();
        assert!(!report.is_clean());
    }
}
