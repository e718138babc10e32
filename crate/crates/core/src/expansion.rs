//! Expanded algebras `Ĝ(N0, N1)`.
//!
//! An expanded generator `(a, n; α)` is the coefficient of `λ^α` in the
//! Maurer–Cartan form `ω^{a,n}` after rescaling the `V1` coordinates by `λ`.
//! Its structure constants are
//!
//! ```text
//! C_{(a,n;β)(b,m;γ)}^{(c,l;α)} = δ_{β+γ}^α δ_{n+m}^l f_{ab}^c
//! ```
//!
//! Closure is checked in the dual picture: the truncated set of forms must be
//! stable under `d`, i.e. every product `ω^x ∧ ω^y` appearing in `dω^z` for a
//! retained `z` must itself consist of retained forms. A form that vanishes
//! identically for the splitting (odd order on an even mode in the coset
//! case, order zero on a nonzero mode in the zero-mode case) is never
//! required.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{StructureConstants, StructureTensor};
use crate::error::{Error, Result};
use crate::jacobi::{self, JacobiReport};
use crate::loop_algebra::{triple_in_window, LoopLabel, ModeWindow};
use crate::rational::{self, Rational};
use crate::splitting::{Sector, SplitKind, Splitting};

/// `(gen, mode; order)` with its sector. Ordered by `(order, mode, gen)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExpandedLabel {
    pub order: u32,
    pub mode: i64,
    pub gen: usize,
    pub sector: Sector,
}

impl ExpandedLabel {
    pub fn new(s: &Splitting, gen: usize, mode: i64, order: u32) -> Self {
        ExpandedLabel {
            order,
            mode,
            gen,
            sector: s.sector_of(gen, mode),
        }
    }

    pub fn loop_label(&self) -> LoopLabel {
        LoopLabel::new(self.gen, self.mode)
    }
}

impl fmt::Display for ExpandedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.gen, self.mode, self.order)
    }
}

/// Whether the form `ω^{a,n;α}` can be nonzero at all under the splitting,
/// independent of truncation.
pub fn is_admissible(s: &Splitting, label: &ExpandedLabel) -> bool {
    if label.sector != s.sector_of(label.gen, label.mode) {
        return false;
    }
    match s.kind() {
        SplitKind::GenericIndex => true,
        SplitKind::ZeroModeSubalgebra => label.order > 0 || label.mode == 0,
        SplitKind::ModeParityCoset => label.order % 2 == label.sector.bit(),
    }
}

/// Truncation orders `(N0, N1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub n0: u32,
    pub n1: u32,
}

impl Truncation {
    pub fn new(n0: u32, n1: u32) -> Self {
        Truncation { n0, n1 }
    }

    pub fn max_order(&self, sector: Sector) -> u32 {
        match sector {
            Sector::V0 => self.n0,
            Sector::V1 => self.n1,
        }
    }

    pub fn keeps(&self, label: &ExpandedLabel) -> bool {
        label.order <= self.max_order(label.sector)
    }
}

fn check_label(f: &impl StructureTensor, s: &Splitting, label: &ExpandedLabel) -> Result<()> {
    f.check_index(label.gen)?;
    if is_admissible(s, label) {
        Ok(())
    } else {
        Err(Error::InadmissibleLabel(*label))
    }
}

pub fn expanded_constant(
    f: &impl StructureTensor,
    s: &Splitting,
    x: &ExpandedLabel,
    y: &ExpandedLabel,
    z: &ExpandedLabel,
) -> Result<Rational> {
    for label in [x, y, z] {
        check_label(f, s, label)?;
    }
    if x.order + y.order != z.order || x.mode + y.mode != z.mode {
        return Ok(rational::zero());
    }
    Ok(f.constant(x.gen, y.gen, z.gen))
}

/// Every admissible, retained label with mode in the window, sorted.
pub fn generator_set(
    f: &impl StructureTensor,
    s: &Splitting,
    trunc: Truncation,
    window: ModeWindow,
) -> Vec<ExpandedLabel> {
    let mut out = Vec::new();
    for order in 0..=trunc.n0.max(trunc.n1) {
        for mode in window.modes() {
            for gen in 1..=f.dim() {
                let label = ExpandedLabel::new(s, gen, mode, order);
                if is_admissible(s, &label) && trunc.keeps(&label) {
                    out.push(label);
                }
            }
        }
    }
    out
}

/// `dω^equation` contains `coefficient · ω^pair.0 ∧ ω^pair.1`, but `required`
/// (one of the pair) lies beyond the truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureViolation {
    pub equation: ExpandedLabel,
    pub pair: (ExpandedLabel, ExpandedLabel),
    pub required: ExpandedLabel,
    #[serde(with = "rational::pq_serde")]
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub closed: bool,
    pub violations: Vec<ClosureViolation>,
    /// Products skipped because a factor's mode leaves the window.
    pub window_censored: usize,
    /// Generic splitting only: true when some mixed-sector class of base
    /// constants is empty, so a closed result does not force `N0 = N1`.
    pub converse_vacuous: bool,
}

/// Sector classes `(p, q -> s)` populated by the base constants.
fn generic_converse_vacuous(f: &StructureConstants, s: &Splitting) -> bool {
    if s.kind() != SplitKind::GenericIndex {
        return false;
    }
    let mut into_v0_from_v1 = false;
    let mut into_v1_from_v0 = false;
    for e in f.full_entries() {
        let (p, q, t) = (
            s.sector_of(e.a, 0),
            s.sector_of(e.b, 0),
            s.sector_of(e.c, 0),
        );
        if t == Sector::V0 && (p == Sector::V1 || q == Sector::V1) {
            into_v0_from_v1 = true;
        }
        if t == Sector::V1 && (p == Sector::V0 || q == Sector::V0) {
            into_v1_from_v0 = true;
        }
    }
    !(into_v0_from_v1 && into_v1_from_v0)
}

pub fn check_closure(
    f: &StructureConstants,
    s: &Splitting,
    trunc: Truncation,
    window: ModeWindow,
) -> ClosureReport {
    let generators = generator_set(f, s, trunc, window);
    let retained: BTreeSet<ExpandedLabel> = generators.iter().copied().collect();
    let by_target = f.by_target();
    let mut violations = Vec::new();
    let mut window_censored = 0;

    for z in &generators {
        for (a, b, value) in &by_target[z.gen] {
            // each unordered product once
            if a > b {
                continue;
            }
            for beta in 0..=z.order {
                let gamma = z.order - beta;
                for n in window.modes() {
                    let m = z.mode - n;
                    let x = ExpandedLabel::new(s, *a, n, beta);
                    let y = ExpandedLabel::new(s, *b, m, gamma);
                    if !is_admissible(s, &x) || !is_admissible(s, &y) {
                        continue;
                    }
                    if !window.contains(m) {
                        window_censored += 1;
                        continue;
                    }
                    for required in [x, y] {
                        if !retained.contains(&required) {
                            violations.push(ClosureViolation {
                                equation: *z,
                                pair: (x, y),
                                required,
                                coefficient: value.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    ClosureReport {
        closed: violations.is_empty(),
        violations,
        window_censored,
        converse_vacuous: generic_converse_vacuous(f, s),
    }
}

/// A generated expanded algebra on a mode window.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpandedAlgebra {
    pub base: StructureConstants,
    pub split: Splitting,
    pub trunc: Truncation,
    pub window: ModeWindow,
    pub generators: Vec<ExpandedLabel>,
    retained: BTreeSet<ExpandedLabel>,
}

impl ExpandedAlgebra {
    pub fn new(
        base: StructureConstants,
        split: Splitting,
        trunc: Truncation,
        window: ModeWindow,
    ) -> Self {
        let generators = generator_set(&base, &split, trunc, window);
        let retained = generators.iter().copied().collect();
        ExpandedAlgebra {
            base,
            split,
            trunc,
            window,
            generators,
            retained,
        }
    }

    pub fn contains(&self, label: &ExpandedLabel) -> bool {
        self.retained.contains(label)
    }

    pub fn constant(
        &self,
        x: &ExpandedLabel,
        y: &ExpandedLabel,
        z: &ExpandedLabel,
    ) -> Result<Rational> {
        expanded_constant(&self.base, &self.split, x, y, z)
    }

    /// `[x, y]` with components beyond the truncation dropped. Components may
    /// lie outside the mode window.
    pub fn bracket(
        &self,
        x: &ExpandedLabel,
        y: &ExpandedLabel,
    ) -> BTreeMap<ExpandedLabel, Rational> {
        let (order, mode) = (x.order + y.order, x.mode + y.mode);
        self.base
            .row(x.gen, y.gen)
            .iter()
            .map(|(c, v)| (ExpandedLabel::new(&self.split, *c, mode, order), v.clone()))
            .filter(|(z, _)| is_admissible(&self.split, z) && self.trunc.keeps(z))
            .collect()
    }

    /// Nonzero `C_{xy}^z` with `x < y` and all three labels in the generator set.
    pub fn nonzero_constants(
        &self,
    ) -> Vec<(ExpandedLabel, ExpandedLabel, ExpandedLabel, Rational)> {
        let mut out = Vec::new();
        for (i, x) in self.generators.iter().enumerate() {
            for y in &self.generators[i + 1..] {
                for (z, v) in self.bracket(x, y) {
                    if self.contains(&z) && !v.is_zero() {
                        out.push((*x, *y, z, v));
                    }
                }
            }
        }
        out
    }

    pub fn closure(&self) -> ClosureReport {
        check_closure(&self.base, &self.split, self.trunc, self.window)
    }

    /// Cyclic Jacobi sums over generator triples whose mode sums stay in the
    /// window. Fails with [`Error::NotClosed`] when closure fails.
    pub fn jacobi(&self) -> Result<JacobiReport<ExpandedLabel>> {
        let closure = self.closure();
        if !closure.closed {
            return Err(Error::NotClosed {
                violations: closure.violations.len(),
            });
        }
        let window = self.window;
        Ok(jacobi::sweep(
            &self.generators,
            |x, y| self.bracket(&x, &y),
            |x, y, z| triple_in_window(window, x.mode, y.mode, z.mode),
        ))
    }
}

pub fn check_jacobi_expanded(
    f: &StructureConstants,
    s: &Splitting,
    trunc: Truncation,
    window: ModeWindow,
) -> Result<JacobiReport<ExpandedLabel>> {
    ExpandedAlgebra::new(f.clone(), s.clone(), trunc, window).jacobi()
}

/// The named cases worked out by hand for the zero-mode and parity splittings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedCase {
    G0,
    G1,
    G00,
    G01,
    G21,
}

impl NamedCase {
    pub const ALL: [NamedCase; 5] = [
        NamedCase::G0,
        NamedCase::G1,
        NamedCase::G00,
        NamedCase::G01,
        NamedCase::G21,
    ];

    pub fn splitting(self) -> Splitting {
        match self {
            NamedCase::G0 | NamedCase::G1 => Splitting::zero_mode(),
            _ => Splitting::mode_parity(),
        }
    }

    pub fn truncation(self) -> Truncation {
        match self {
            NamedCase::G0 => Truncation::new(0, 0),
            NamedCase::G1 => Truncation::new(1, 1),
            NamedCase::G00 => Truncation::new(0, 0),
            NamedCase::G01 => Truncation::new(0, 1),
            NamedCase::G21 => Truncation::new(2, 1),
        }
    }
}

impl FromStr for NamedCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G0" => Ok(NamedCase::G0),
            "G1" => Ok(NamedCase::G1),
            "G00" => Ok(NamedCase::G00),
            "G01" => Ok(NamedCase::G01),
            "G21" => Ok(NamedCase::G21),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

pub fn build_named(case: NamedCase, f: &StructureConstants, window: ModeWindow) -> ExpandedAlgebra {
    ExpandedAlgebra::new(f.clone(), case.splitting(), case.truncation(), window)
}
