mod common;

use std::collections::BTreeMap;

use loopexp::algebra::{
    bracket, builtin_constants, jacobi_defect, validate, AlgebraElement, Entry, StructureConstants,
    StructureTensor, BUILTIN_NAMES,
};
use loopexp::expansion::{
    check_closure, expanded_constant, is_admissible, ExpandedAlgebra, ExpandedLabel, Truncation,
};
use loopexp::loop_algebra::{loop_bracket, loop_structure_constant, LoopLabel, ModeWindow};
use loopexp::mc_forms::{
    canonical_form_series, rescale_and_collect, wedge, CoordMonomial, FormPolynomial,
};
use loopexp::splitting::{check_split, make_splitting, SplitKind, Splitting};
use num_traits::Zero;
use proptest::prelude::*;

use common::{mc_chain_oracle, q, TermKey, Q};

fn su2() -> StructureConstants {
    builtin_constants("su2").unwrap()
}

fn small_rational() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn element(dim: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((1..=dim, small_rational()), 0..4).prop_map(AlgebraElement::from_coeffs)
}

/// Antisymmetric tables with small integer entries; Jacobi usually fails.
fn random_algebra() -> impl Strategy<Value = StructureConstants> {
    prop::collection::vec(-1i64..=1, 9).prop_map(|vals| {
        let mut entries = Vec::new();
        let mut it = vals.into_iter();
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            for c in 1..=3 {
                let v = it.next().unwrap();
                if v != 0 {
                    entries.push(Entry::new(a, b, c, q(v, 1)));
                }
            }
        }
        StructureConstants::new(3, entries).unwrap()
    })
}

fn to_terms(p: &FormPolynomial) -> BTreeMap<TermKey, Q> {
    p.terms()
        .map(|(m, d, c)| {
            let mut coords = Vec::new();
            for (x, k) in m.factors() {
                for _ in 0..*k {
                    coords.push((x.gen, x.mode));
                }
            }
            coords.sort();
            ((coords, (d.gen, d.mode)), c.clone())
        })
        .collect()
}

proptest! {
    #[test]
    fn bracket_is_bilinear(x in element(3), x2 in element(3), y in element(3), s in small_rational(), t in small_rational()) {
        let f = su2();
        let lhs = bracket(&f, &x.scale(&s).add(&x2.scale(&t)), &y).unwrap();
        let rhs = bracket(&f, &x, &y).unwrap().scale(&s).add(&bracket(&f, &x2, &y).unwrap().scale(&t));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_defect_agrees_with_validate(f in random_algebra()) {
        let mut any_defect = false;
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    any_defect |= !jacobi_defect(&f, a, b, c).unwrap().is_zero();
                }
            }
        }
        prop_assert_eq!(any_defect, !validate(&f).jacobi.is_empty());
    }

    #[test]
    fn loop_bracket_is_mode_additive(a in 1usize..=3, b in 1usize..=3, n in -3i64..=3, m in -3i64..=3) {
        let f = su2();
        let (x, y) = (LoopLabel::new(a, n), LoopLabel::new(b, m));
        let br = loop_bracket(&f, x, y).unwrap();
        prop_assert!(br.keys().all(|z| z.mode == n + m));
        for c in 1..=3 {
            let z = LoopLabel::new(c, n + m);
            let from_bracket = br.get(&z).cloned().unwrap_or_else(Q::zero);
            prop_assert_eq!(loop_structure_constant(&f, x, y, z).unwrap(), from_bracket);
        }
    }

    #[test]
    fn split_witnesses_reverify(f in random_algebra(), gens in prop::sample::subsequence(vec![1usize, 2, 3], 1..=2), m in 1u32..=2) {
        let s = make_splitting(SplitKind::GenericIndex, &gens, 3).unwrap();
        let report = check_split(&f, &s, ModeWindow::new(m));
        for w in report.subalgebra_witnesses.iter().chain(&report.coset_witnesses) {
            let v = loop_structure_constant(&f, w.x, w.y, w.z).unwrap();
            prop_assert!(!v.is_zero());
            prop_assert_eq!(v, w.value.clone());
        }
    }

    #[test]
    fn expanded_constants_factorize(
        kind in prop::sample::select(vec![SplitKind::ZeroModeSubalgebra, SplitKind::ModeParityCoset]),
        x in (1usize..=3, -2i64..=2, 0u32..=3),
        y in (1usize..=3, -2i64..=2, 0u32..=3),
        z in (1usize..=3, -4i64..=4, 0u32..=6),
    ) {
        let f = su2();
        let s = make_splitting(kind, &[], 3).unwrap();
        let lab = |(g, n, o): (usize, i64, u32)| ExpandedLabel::new(&s, g, n, o);
        let (x, y, z) = (lab(x), lab(y), lab(z));
        prop_assume!([x, y, z].iter().all(|l| is_admissible(&s, l)));
        let v = expanded_constant(&f, &s, &x, &y, &z).unwrap();
        prop_assert_eq!(v.clone(), -expanded_constant(&f, &s, &y, &x, &z).unwrap());
        if !v.is_zero() {
            prop_assert_eq!(z.order, x.order + y.order);
            prop_assert_eq!(z.mode, x.mode + y.mode);
            prop_assert_eq!(v, f.constant(x.gen, y.gen, z.gen));
        }
    }

    #[test]
    fn wedge_is_antisymmetric(
        p in prop::collection::vec((1usize..=3, -1i64..=1, 1usize..=3, -1i64..=1, small_rational()), 0..4),
        r in prop::collection::vec((1usize..=3, -1i64..=1, 1usize..=3, -1i64..=1, small_rational()), 0..4),
    ) {
        let build = |terms: &[(usize, i64, usize, i64, Q)]| {
            let mut out = FormPolynomial::zero();
            for (a, n, b, m, c) in terms {
                out.add_term(CoordMonomial::one().times(LoopLabel::new(*a, *n)), LoopLabel::new(*b, *m), c.clone());
            }
            out
        };
        let (p, r) = (build(&p), build(&r));
        let mut back = wedge(&r, &p);
        back.add_scaled(&wedge(&p, &r), &q(1, 1));
        prop_assert!(back.is_zero());
    }
}

#[test]
fn zero_mode_restriction_is_the_base_bracket() {
    for name in BUILTIN_NAMES {
        let f = builtin_constants(name).unwrap();
        for a in 1..=f.dim() {
            for b in 1..=f.dim() {
                let base =
                    bracket(&f, &AlgebraElement::basis(a), &AlgebraElement::basis(b)).unwrap();
                let looped = loop_bracket(&f, LoopLabel::new(a, 0), LoopLabel::new(b, 0)).unwrap();
                let looped: Vec<(usize, Q)> = looped.into_iter().map(|(z, v)| (z.gen, v)).collect();
                let base: Vec<(usize, Q)> = base.iter().map(|(c, v)| (c, v.clone())).collect();
                assert_eq!(looped, base, "{name} ({a},{b})");
            }
        }
    }
}

#[test]
fn split_kinds_hold_on_every_valid_algebra() {
    for name in BUILTIN_NAMES {
        let f = builtin_constants(name).unwrap();
        for m in 1..=3 {
            let w = ModeWindow::new(m);
            assert!(
                check_split(&f, &Splitting::mode_parity(), w).is_symmetric_coset,
                "{name} M={m}"
            );
            assert!(
                check_split(&f, &Splitting::zero_mode(), w).is_subalgebra_v0,
                "{name} M={m}"
            );
        }
    }
}

#[test]
fn generic_closure_theorem_for_every_v0() {
    let f = su2();
    for gens in [
        vec![1],
        vec![2],
        vec![3],
        vec![1, 2],
        vec![1, 3],
        vec![2, 3],
    ] {
        let s = make_splitting(SplitKind::GenericIndex, &gens, 3).unwrap();
        for m in 0..=2 {
            for n0 in 0..=3 {
                for n1 in 0..=3 {
                    let r = check_closure(&f, &s, Truncation::new(n0, n1), ModeWindow::new(m));
                    if n0 == n1 {
                        assert!(r.closed, "{gens:?} M={m} ({n0},{n1})");
                        let jac = ExpandedAlgebra::new(
                            f.clone(),
                            s.clone(),
                            Truncation::new(n0, n1),
                            ModeWindow::new(m),
                        )
                        .jacobi()
                        .unwrap();
                        assert!(jac.is_clean());
                    } else if !r.converse_vacuous {
                        assert!(!r.closed, "{gens:?} M={m} ({n0},{n1})");
                        assert!(!r.violations.is_empty());
                    }
                }
            }
        }
    }
}

#[test]
fn loop_series_matches_chain_enumeration() {
    for (name, m, degree) in [("su2", 1, 3), ("solvable2", 1, 4), ("su2", 2, 2)] {
        let f = builtin_constants(name).unwrap();
        let window = ModeWindow::new(m);
        let series = canonical_form_series(&f, window, degree).unwrap();
        let modes: Vec<i64> = window.modes().collect();
        let mut oracle = mc_chain_oracle(&f, &modes, degree);
        oracle.retain(|(_, n), _| window.contains(*n));
        let ours: BTreeMap<(usize, i64), BTreeMap<TermKey, Q>> = series
            .forms
            .iter()
            .map(|(t, p)| ((t.gen, t.mode), to_terms(p)))
            .filter(|(_, p)| !p.is_empty())
            .collect();
        assert_eq!(ours, oracle, "{name} M={m} D={degree}");
    }
}

#[test]
fn parity_and_leading_terms_for_all_builtins() {
    for name in BUILTIN_NAMES {
        let f = builtin_constants(name).unwrap();
        for m in 1..=2 {
            for degree in 1..=4 {
                let series = canonical_form_series(&f, ModeWindow::new(m), degree).unwrap();
                let coset = rescale_and_collect(&series, &Splitting::mode_parity());
                assert!(
                    coset.parity_violations().is_empty(),
                    "{name} M={m} D={degree}"
                );
                let zero = rescale_and_collect(&series, &Splitting::zero_mode());
                assert!(
                    zero.leading_term_violations().is_empty(),
                    "{name} M={m} D={degree}"
                );
                for t in series.forms.keys() {
                    assert_eq!(&coset.resum(*t), &series.forms[t]);
                }
            }
        }
    }
}
