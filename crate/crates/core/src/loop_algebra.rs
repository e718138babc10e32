//! The loop algebra: generators `T_a^n` with `[T_a^m, T_b^n] = f_{ab}^c T_c^{m+n}`.
//!
//! Structure constants are evaluated symbolically in the mode index. A
//! [`ModeWindow`] only bounds enumeration and verification sweeps.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::StructureTensor;
use crate::error::Result;
use crate::jacobi::{self, JacobiReport};
use crate::rational::{self, Rational};

/// Generator `T_gen^mode`. Ordered mode-major, then by generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopLabel {
    pub gen: usize,
    pub mode: i64,
}

impl LoopLabel {
    pub const fn new(gen: usize, mode: i64) -> Self {
        LoopLabel { gen, mode }
    }
}

impl Ord for LoopLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.mode, self.gen).cmp(&(other.mode, other.gen))
    }
}

impl PartialOrd for LoopLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LoopLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.gen, self.mode)
    }
}

/// Admissible modes `-M..=M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeWindow {
    pub max_abs_mode: u32,
}

impl ModeWindow {
    pub const fn new(max_abs_mode: u32) -> Self {
        ModeWindow { max_abs_mode }
    }

    pub fn contains(&self, mode: i64) -> bool {
        mode.unsigned_abs() <= u64::from(self.max_abs_mode)
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> + Clone {
        let m = i64::from(self.max_abs_mode);
        -m..=m
    }
}

/// Sparse linear combination of loop generators.
pub type LoopElement = BTreeMap<LoopLabel, Rational>;

pub fn loop_bracket<T: StructureTensor + ?Sized>(
    f: &T,
    x: LoopLabel,
    y: LoopLabel,
) -> Result<LoopElement> {
    f.check_index(x.gen)?;
    f.check_index(y.gen)?;
    let mode = x.mode + y.mode;
    Ok(f.row(x.gen, y.gen)
        .iter()
        .map(|(c, v)| (LoopLabel::new(*c, mode), v.clone()))
        .collect())
}

/// `f_{(a,n)(b,m)}^{(c,l)} = delta_{n+m}^l f_{ab}^c`.
pub fn loop_structure_constant<T: StructureTensor + ?Sized>(
    f: &T,
    x: LoopLabel,
    y: LoopLabel,
    z: LoopLabel,
) -> Result<Rational> {
    f.check_index(x.gen)?;
    f.check_index(y.gen)?;
    f.check_index(z.gen)?;
    if x.mode + y.mode != z.mode {
        return Ok(rational::zero());
    }
    Ok(f.constant(x.gen, y.gen, z.gen))
}

/// Hermitian conjugation `(T_a^n)^dagger = -T_a^{-n}`, as `(label, sign)`.
pub fn conjugate_label(x: LoopLabel) -> (LoopLabel, i8) {
    (LoopLabel::new(x.gen, -x.mode), -1)
}

/// All `(a, n)` with `1 <= a <= dim`, `|n| <= M`, mode-major.
pub fn enumerate_generators<T: StructureTensor + ?Sized>(
    f: &T,
    window: ModeWindow,
) -> Vec<LoopLabel> {
    labels_for_dim(f.dim(), window)
}

pub(crate) fn labels_for_dim(dim: usize, window: ModeWindow) -> Vec<LoopLabel> {
    window
        .modes()
        .flat_map(|n| (1..=dim).map(move |a| LoopLabel::new(a, n)))
        .collect()
}

/// True when every partial and total mode sum of the triple stays in the
/// window, so the nested brackets never leave it.
pub fn triple_in_window(window: ModeWindow, n1: i64, n2: i64, n3: i64) -> bool {
    [n1, n2, n3, n1 + n2, n2 + n3, n3 + n1, n1 + n2 + n3]
        .into_iter()
        .all(|n| window.contains(n))
}

/// Cyclic Jacobi sum over every windowed label triple.
pub fn loop_jacobi_sweep<T: StructureTensor + ?Sized>(
    f: &T,
    window: ModeWindow,
) -> JacobiReport<LoopLabel> {
    let labels = enumerate_generators(f, window);
    jacobi::sweep(
        &labels,
        |x, y| loop_bracket(f, x, y).expect("enumerated labels are in range"),
        |x, y, z| triple_in_window(window, x.mode, y.mode, z.mode),
    )
}
