//! İnönü–Wigner contraction of the loop algebra with respect to `V0`.
//!
//! With `T_x = λ^{s(x)} Y_x` (sector bit `s`), a bracket
//! `[T_x, T_y] = f T_z` becomes `[Y_x, Y_y] = λ^{s(z) - s(x) - s(y)} f Y_z`.
//! As `λ -> ∞` a constant survives when the exponent is zero, vanishes when
//! it is negative, and diverges when it is positive. The last case only
//! occurs when `V0` is not a subalgebra.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{StructureConstants, StructureTensor};
use crate::error::{Error, Result};
use crate::expansion::{ExpandedAlgebra, ExpandedLabel};
use crate::jacobi::{self, JacobiReport};
use crate::loop_algebra::{
    enumerate_generators, loop_structure_constant, triple_in_window, LoopElement, LoopLabel,
    ModeWindow,
};
use crate::rational::{self, Rational};
use crate::splitting::{check_subalgebra, Splitting};

/// λ-exponent of `[Y_x, Y_y] -> Y_z` for sector bits `(p, q, s)`.
fn scaling_exponent(p: u32, q: u32, s: u32) -> i64 {
    i64::from(s) - i64::from(p) - i64::from(q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractedAlgebra {
    pub base: StructureConstants,
    pub split: Splitting,
    pub window: ModeWindow,
    overrides: BTreeMap<(LoopLabel, LoopLabel, LoopLabel), Rational>,
}

impl ContractedAlgebra {
    fn survives(&self, x: LoopLabel, y: LoopLabel, z: LoopLabel) -> bool {
        let s = &self.split;
        scaling_exponent(s.sector(x).bit(), s.sector(y).bit(), s.sector(z).bit()) == 0
    }

    pub fn constant(&self, x: LoopLabel, y: LoopLabel, z: LoopLabel) -> Rational {
        if let Some(v) = self.overrides.get(&(x, y, z)) {
            return v.clone();
        }
        if !self.survives(x, y, z) {
            return rational::zero();
        }
        loop_structure_constant(&self.base, x, y, z).unwrap_or_else(|_| rational::zero())
    }

    pub fn bracket(&self, x: LoopLabel, y: LoopLabel) -> LoopElement {
        let mode = x.mode + y.mode;
        let mut out: LoopElement = self
            .base
            .row(x.gen, y.gen)
            .iter()
            .map(|(c, v)| (LoopLabel::new(*c, mode), v.clone()))
            .filter(|(z, _)| self.survives(x, y, *z))
            .collect();
        for ((ox, oy, oz), v) in &self.overrides {
            if (*ox, *oy) == (x, y) {
                out.insert(*oz, v.clone());
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Replaces one ordered constant. Used to exercise mismatch reporting.
    pub fn perturbed(mut self, x: LoopLabel, y: LoopLabel, z: LoopLabel, value: Rational) -> Self {
        self.overrides.insert((x, y, z), value);
        self
    }

    pub fn jacobi(&self) -> JacobiReport<LoopLabel> {
        let labels = enumerate_generators(&self.base, self.window);
        let window = self.window;
        jacobi::sweep(
            &labels,
            |x, y| self.bracket(x, y),
            |x, y, z| triple_in_window(window, x.mode, y.mode, z.mode),
        )
    }
}

/// Contracts with respect to `V0`. Every splitting kind is accepted, as long
/// as `V0` is a subalgebra on the window; otherwise the limit diverges and
/// the first offending constant is returned in the error.
pub fn iw_contract(
    f: &StructureConstants,
    s: &Splitting,
    window: ModeWindow,
) -> Result<ContractedAlgebra> {
    if let Some(w) = check_subalgebra(f, s, window).witnesses.first() {
        return Err(Error::NotContractible {
            x: w.x,
            y: w.y,
            z: w.z,
        });
    }
    Ok(ContractedAlgebra {
        base: f.clone(),
        split: s.clone(),
        window,
        overrides: BTreeMap::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantMismatch {
    pub x: LoopLabel,
    pub y: LoopLabel,
    pub z: LoopLabel,
    #[serde(with = "rational::pq_serde")]
    pub contracted: Rational,
    #[serde(with = "rational::pq_serde")]
    pub expanded: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionComparison {
    pub matches: bool,
    /// Ordered triples compared.
    pub compared: usize,
    pub diff: Vec<ConstantMismatch>,
}

/// Label dictionary `Y_{a,n} <-> (a, n; s(a,n))`, which is `n mod 2` for the
/// parity splitting.
fn dictionary(expanded: &ExpandedAlgebra, y: LoopLabel) -> ExpandedLabel {
    let order = expanded.split.sector(y).bit();
    ExpandedLabel::new(&expanded.split, y.gen, y.mode, order)
}

fn expanded_value(
    expanded: &ExpandedAlgebra,
    x: LoopLabel,
    y: LoopLabel,
    z: LoopLabel,
) -> Rational {
    let (ex, ey, ez) = (
        dictionary(expanded, x),
        dictionary(expanded, y),
        dictionary(expanded, z),
    );
    if !(expanded.contains(&ex) && expanded.contains(&ey) && expanded.contains(&ez)) {
        return rational::zero();
    }
    expanded
        .constant(&ex, &ey, &ez)
        .unwrap_or_else(|_| rational::zero())
}

/// Compares every windowed ordered triple of the contraction against
/// `Ĝ(0,1)` under the evident label dictionary.
pub fn compare_with_expansion(
    contracted: &ContractedAlgebra,
    expanded: &ExpandedAlgebra,
    window: ModeWindow,
) -> ContractionComparison {
    let labels = enumerate_generators(&contracted.base, window);
    let mut triples = Vec::new();
    for &x in &labels {
        for &y in &labels {
            let mode = x.mode + y.mode;
            if !window.contains(mode) {
                continue;
            }
            for gen in 1..=contracted.base.dim() {
                triples.push((x, y, LoopLabel::new(gen, mode)));
            }
        }
    }
    for &(x, y, z) in contracted.overrides.keys() {
        if !(window.contains(x.mode + y.mode) && z.mode == x.mode + y.mode) {
            triples.push((x, y, z));
        }
    }

    let mut diff = Vec::new();
    for &(x, y, z) in &triples {
        let c = contracted.constant(x, y, z);
        let e = expanded_value(expanded, x, y, z);
        if c != e {
            diff.push(ConstantMismatch {
                x,
                y,
                z,
                contracted: c,
                expanded: e,
            });
        }
    }
    ContractionComparison {
        matches: diff.is_empty(),
        compared: triples.len(),
        diff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_constants;
    use crate::expansion::{build_named, NamedCase};
    use crate::rational::int;
    use crate::splitting::{make_splitting, Sector, SplitKind};

    fn l(gen: usize, mode: i64) -> LoopLabel {
        LoopLabel::new(gen, mode)
    }

    #[test]
    fn contraction_examples() {
        let f = builtin_constants("su2").unwrap();
        let c = iw_contract(&f, &Splitting::mode_parity(), ModeWindow::new(2)).unwrap();
        assert_eq!(
            c.bracket(l(1, 0), l(2, 1)),
            LoopElement::from([(l(3, 1), int(1))])
        );
        assert!(c.bracket(l(1, 1), l(2, 1)).is_empty());
        assert_eq!(
            c.bracket(l(1, 2), l(2, -2)),
            LoopElement::from([(l(3, 0), int(1))])
        );
    }

    #[test]
    fn odd_sector_is_abelian() {
        let f = builtin_constants("su2").unwrap();
        let w = ModeWindow::new(3);
        let s = Splitting::mode_parity();
        let c = iw_contract(&f, &s, w).unwrap();
        for x in enumerate_generators(&f, w) {
            for y in enumerate_generators(&f, w) {
                if s.sector(x) == Sector::V1 && s.sector(y) == Sector::V1 {
                    assert!(c.bracket(x, y).is_empty());
                }
            }
        }
    }

    #[test]
    fn matches_g01() {
        let w = ModeWindow::new(2);
        for name in crate::algebra::BUILTIN_NAMES {
            let f = builtin_constants(name).unwrap();
            let c = iw_contract(&f, &Splitting::mode_parity(), w).unwrap();
            let g01 = build_named(NamedCase::G01, &f, w);
            let cmp = compare_with_expansion(&c, &g01, w);
            assert!(cmp.matches, "{name}: {:?}", cmp.diff);
            assert!(cmp.compared > 0);
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let f = builtin_constants("su2").unwrap();
        let w = ModeWindow::new(2);
        let c = iw_contract(&f, &Splitting::mode_parity(), w)
            .unwrap()
            .perturbed(l(1, 0), l(2, 1), l(3, 1), int(2));
        let cmp = compare_with_expansion(&c, &build_named(NamedCase::G01, &f, w), w);
        assert!(!cmp.matches);
        assert_eq!(cmp.diff.len(), 1);
        assert_eq!(cmp.diff[0].contracted, int(2));
        assert_eq!(cmp.diff[0].expanded, int(1));
    }

    #[test]
    fn contraction_preserves_jacobi() {
        let f = builtin_constants("su2").unwrap();
        for m in 0..=3 {
            let c = iw_contract(&f, &Splitting::mode_parity(), ModeWindow::new(m)).unwrap();
            assert!(c.jacobi().is_clean(), "M={m}");
        }
        let c = iw_contract(&f, &Splitting::zero_mode(), ModeWindow::new(2)).unwrap();
        assert!(c.jacobi().is_clean());
    }

    #[test]
    fn non_subalgebra_diverges() {
        let f = builtin_constants("su2").unwrap();
        let g = make_splitting(SplitKind::GenericIndex, &[1, 2], 3).unwrap();
        assert!(matches!(
            iw_contract(&f, &g, ModeWindow::new(1)),
            Err(Error::NotContractible { .. })
        ));
        let g = make_splitting(SplitKind::GenericIndex, &[1], 3).unwrap();
        let c = iw_contract(&f, &g, ModeWindow::new(1)).unwrap();
        // (0,1 -> 1) survives, (1,1 -> 0) is killed
        assert_eq!(c.constant(l(1, 0), l(2, 0), l(3, 0)), int(1));
        assert_eq!(c.constant(l(2, 0), l(3, 0), l(1, 0)), int(0));
    }
}
