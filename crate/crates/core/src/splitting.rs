//! Two-subspace decompositions `V0 + V1` of the loop algebra.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::StructureTensor;
use crate::error::{Error, Result};
use crate::loop_algebra::{enumerate_generators, LoopLabel, ModeWindow};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sector {
    V0,
    V1,
}

impl Sector {
    pub fn bit(self) -> u32 {
        match self {
            Sector::V0 => 0,
            Sector::V1 => 1,
        }
    }

    pub fn from_bit(bit: u32) -> Self {
        if bit.is_multiple_of(2) {
            Sector::V0
        } else {
            Sector::V1
        }
    }

    /// Sector of a bracket under the symmetric-coset grading.
    pub fn sum(self, other: Sector) -> Sector {
        Sector::from_bit(self.bit() + other.bit())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitKind {
    /// `V0` spanned by a subset of generator indices, all modes.
    #[serde(rename = "generic")]
    GenericIndex,
    /// `V0` = zero modes.
    #[serde(rename = "zero_mode")]
    ZeroModeSubalgebra,
    /// `V0` = even modes, `V1` = odd modes.
    #[serde(rename = "mode_parity")]
    ModeParityCoset,
}

impl SplitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitKind::GenericIndex => "generic",
            SplitKind::ZeroModeSubalgebra => "zero_mode",
            SplitKind::ModeParityCoset => "mode_parity",
        }
    }
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(SplitKind::GenericIndex),
            "zero_mode" => Ok(SplitKind::ZeroModeSubalgebra),
            "mode_parity" => Ok(SplitKind::ModeParityCoset),
            other => Err(Error::InvalidParams(format!(
                "unknown splitting kind `{other}`"
            ))),
        }
    }
}

/// Serialized form: `{"kind": "generic"|"zero_mode"|"mode_parity", "v0_gens": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kind: SplitKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v0_gens: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    kind: SplitKind,
    v0_gens: BTreeSet<usize>,
}

/// `v0_gens` must be given for, and only for, [`SplitKind::GenericIndex`],
/// and be a nonempty proper subset of `1..=dim`.
pub fn make_splitting(kind: SplitKind, v0_gens: &[usize], dim: usize) -> Result<Splitting> {
    let gens: BTreeSet<usize> = v0_gens.iter().copied().collect();
    match kind {
        SplitKind::GenericIndex => {
            if gens.is_empty() {
                return Err(Error::InvalidParams("v0_gens must be nonempty".into()));
            }
            if let Some(&bad) = gens.iter().find(|&&g| g == 0 || g > dim) {
                return Err(Error::InvalidParams(format!(
                    "v0 generator {bad} out of range 1..={dim}"
                )));
            }
            if gens.len() == dim {
                return Err(Error::InvalidParams(
                    "v0_gens must be a proper subset of the generators".into(),
                ));
            }
        }
        _ if !gens.is_empty() => {
            return Err(Error::InvalidParams(format!(
                "v0_gens only apply to the generic splitting, not {kind}"
            )));
        }
        _ => {}
    }
    Ok(Splitting {
        kind,
        v0_gens: gens,
    })
}

impl Splitting {
    pub fn zero_mode() -> Self {
        Splitting {
            kind: SplitKind::ZeroModeSubalgebra,
            v0_gens: BTreeSet::new(),
        }
    }

    pub fn mode_parity() -> Self {
        Splitting {
            kind: SplitKind::ModeParityCoset,
            v0_gens: BTreeSet::new(),
        }
    }

    pub fn from_spec(spec: &SplitSpec, dim: usize) -> Result<Self> {
        make_splitting(spec.kind, &spec.v0_gens, dim)
    }

    pub fn to_spec(&self) -> SplitSpec {
        SplitSpec {
            kind: self.kind,
            v0_gens: self.v0_gens.iter().copied().collect(),
        }
    }

    pub fn kind(&self) -> SplitKind {
        self.kind
    }

    pub fn v0_gens(&self) -> &BTreeSet<usize> {
        &self.v0_gens
    }

    pub fn sector_of(&self, gen: usize, mode: i64) -> Sector {
        let in_v0 = match self.kind {
            SplitKind::GenericIndex => self.v0_gens.contains(&gen),
            SplitKind::ZeroModeSubalgebra => mode == 0,
            SplitKind::ModeParityCoset => mode.rem_euclid(2) == 0,
        };
        if in_v0 {
            Sector::V0
        } else {
            Sector::V1
        }
    }

    pub fn sector(&self, label: LoopLabel) -> Sector {
        self.sector_of(label.gen, label.mode)
    }
}

/// A nonzero `f_{x y}^z` that breaks an inclusion condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub x: LoopLabel,
    pub y: LoopLabel,
    pub z: LoopLabel,
    #[serde(with = "rational::pq_serde")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCheck {
    pub holds: bool,
    pub witnesses: Vec<SplitWitness>,
}

impl SplitCheck {
    fn from_witnesses(witnesses: Vec<SplitWitness>) -> Self {
        SplitCheck {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCheckReport {
    pub is_subalgebra_v0: bool,
    pub subalgebra_witnesses: Vec<SplitWitness>,
    pub is_symmetric_coset: bool,
    pub coset_witnesses: Vec<SplitWitness>,
}

/// Visits every nonzero windowed constant `f_{xy}^z` with `x, y, z` in the window.
fn for_each_windowed_constant<T: StructureTensor + ?Sized>(
    f: &T,
    window: ModeWindow,
    mut visit: impl FnMut(LoopLabel, LoopLabel, LoopLabel, &Rational),
) {
    let labels = enumerate_generators(f, window);
    for &x in &labels {
        for &y in &labels {
            let mode = x.mode + y.mode;
            if !window.contains(mode) {
                continue;
            }
            for (c, v) in f.row(x.gen, y.gen) {
                if !v.is_zero() {
                    visit(x, y, LoopLabel::new(*c, mode), v);
                }
            }
        }
    }
}

/// `[V0, V0] ⊂ V0` on the window.
pub fn check_subalgebra<T: StructureTensor + ?Sized>(
    f: &T,
    s: &Splitting,
    window: ModeWindow,
) -> SplitCheck {
    let mut witnesses = Vec::new();
    for_each_windowed_constant(f, window, |x, y, z, v| {
        if s.sector(x) == Sector::V0 && s.sector(y) == Sector::V0 && s.sector(z) == Sector::V1 {
            witnesses.push(SplitWitness {
                x,
                y,
                z,
                value: v.clone(),
            });
        }
    });
    SplitCheck::from_witnesses(witnesses)
}

/// `f_{x y}^z = 0` whenever `sector(z) != sector(x) + sector(y) mod 2`, on the window.
pub fn check_symmetric_coset<T: StructureTensor + ?Sized>(
    f: &T,
    s: &Splitting,
    window: ModeWindow,
) -> SplitCheck {
    let mut witnesses = Vec::new();
    for_each_windowed_constant(f, window, |x, y, z, v| {
        if s.sector(z) != s.sector(x).sum(s.sector(y)) {
            witnesses.push(SplitWitness {
                x,
                y,
                z,
                value: v.clone(),
            });
        }
    });
    SplitCheck::from_witnesses(witnesses)
}

pub fn check_split<T: StructureTensor + ?Sized>(
    f: &T,
    s: &Splitting,
    window: ModeWindow,
) -> SplitCheckReport {
    let sub = check_subalgebra(f, s, window);
    let coset = check_symmetric_coset(f, s, window);
    SplitCheckReport {
        is_subalgebra_v0: sub.holds,
        subalgebra_witnesses: sub.witnesses,
        is_symmetric_coset: coset.holds,
        coset_witnesses: coset.witnesses,
    }
}
