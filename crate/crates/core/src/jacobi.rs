//! Brute-force cyclic Jacobi sweeps over a finite label set.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiResidual<L> {
    pub triple: (L, L, L),
    /// Nonzero components of the cyclic sum, as `(label, "p/q")`.
    pub residual: Vec<(L, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport<L> {
    /// Number of triples evaluated.
    pub checked: usize,
    pub residuals: Vec<JacobiResidual<L>>,
}

impl<L> JacobiReport<L> {
    pub fn is_clean(&self) -> bool {
        self.residuals.is_empty()
    }
}

fn accumulate<L: Ord + Copy>(
    acc: &mut BTreeMap<L, Rational>,
    bracket: &impl Fn(L, L) -> BTreeMap<L, Rational>,
    x: L,
    y: L,
    z: L,
) {
    for (w, c) in bracket(x, y) {
        for (v, d) in bracket(w, z) {
            *acc.entry(v).or_insert_with(rational::zero) += &c * d;
        }
    }
}

/// `[[x,y],z] + [[y,z],x] + [[z,x],y]` for every triple of `labels` that
/// `admissible` accepts.
pub fn sweep<L: Ord + Copy>(
    labels: &[L],
    bracket: impl Fn(L, L) -> BTreeMap<L, Rational>,
    admissible: impl Fn(L, L, L) -> bool,
) -> JacobiReport<L> {
    let mut report = JacobiReport {
        checked: 0,
        residuals: Vec::new(),
    };
    for &x in labels {
        for &y in labels {
            for &z in labels {
                if !admissible(x, y, z) {
                    continue;
                }
                report.checked += 1;
                let mut acc = BTreeMap::new();
                accumulate(&mut acc, &bracket, x, y, z);
                accumulate(&mut acc, &bracket, y, z, x);
                accumulate(&mut acc, &bracket, z, x, y);
                let residual: Vec<_> = acc
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| (k, rational::to_pq(&v)))
                    .collect();
                if !residual.is_empty() {
                    report.residuals.push(JacobiResidual {
                        triple: (x, y, z),
                        residual,
                    });
                }
            }
        }
    }
    report
}
