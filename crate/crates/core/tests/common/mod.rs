//! Reference implementations used as test oracles. They share no code with
//! the library beyond reading structure constants.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use loopexp::algebra::{StructureConstants, StructureTensor};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `f[a][b][c]`, 1-based.
pub fn dense(f: &StructureConstants) -> Vec<Vec<Vec<Q>>> {
    let n = f.dim();
    let mut out = vec![vec![vec![Q::zero(); n + 1]; n + 1]; n + 1];
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                out[a][b][c] = f.constant(a, b, c);
            }
        }
    }
    out
}

/// `(gen, mode)` pairs.
pub type Lab = (usize, i64);
/// Sorted coordinate factors and the differential.
pub type TermKey = (Vec<Lab>, Lab);

fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, i| acc * Q::from_integer(i.into()))
}

/// Maurer–Cartan forms by explicit chain enumeration:
///
/// ```text
/// ω^{h_k, m + n_1 + .. + n_k} ∋ 1/(k+1)! f_{h_0 c_1}^{h_1} .. f_{h_{k-1} c_k}^{h_k}
///                               g_{c_1,n_1} .. g_{c_k,n_k} dg_{h_0,m}
/// ```
///
/// with every coordinate and differential mode drawn from `modes`. With
/// `modes = [0]` this is the finite-dimensional series.
pub fn mc_chain_oracle(
    f: &StructureConstants,
    modes: &[i64],
    degree: usize,
) -> BTreeMap<Lab, BTreeMap<TermKey, Q>> {
    let fd = dense(f);
    let dim = f.dim();
    let labels: Vec<Lab> = modes
        .iter()
        .flat_map(|&n| (1..=dim).map(move |a| (a, n)))
        .collect();
    let mut out: BTreeMap<Lab, BTreeMap<TermKey, Q>> = BTreeMap::new();

    // partial chains: (differential, coordinates so far, current head generator, mode sum, weight)
    let mut chains: Vec<(Lab, Vec<Lab>, usize, i64, Q)> = labels
        .iter()
        .map(|&d| (d, Vec::new(), d.0, d.1, Q::one()))
        .collect();
    for k in 0..degree {
        let scale = Q::one() / factorial(k + 1);
        for (d, coords, head, mode, w) in &chains {
            let mut key = coords.clone();
            key.sort();
            *out.entry((*head, *mode))
                .or_default()
                .entry((key, *d))
                .or_insert_with(Q::zero) += w * &scale;
        }
        if k + 1 == degree {
            break;
        }
        let mut next = Vec::new();
        for (d, coords, head, mode, w) in &chains {
            for &(c, n) in &labels {
                for h in 1..=dim {
                    let v = &fd[*head][c][h];
                    if v.is_zero() {
                        continue;
                    }
                    let mut coords = coords.clone();
                    coords.push((c, n));
                    next.push((*d, coords, h, mode + n, w * v));
                }
            }
        }
        chains = next;
    }
    for form in out.values_mut() {
        form.retain(|_, v| !v.is_zero());
    }
    out.retain(|_, v| !v.is_empty());
    out
}

/// Two-form terms keyed by sorted coordinates and an ordered differential pair.
pub type TwoKey = (Vec<Lab>, Lab, Lab);

pub fn add_two(out: &mut BTreeMap<TwoKey, Q>, coords: Vec<Lab>, p: Lab, q: Lab, v: Q) {
    if p == q {
        return;
    }
    let (key, v) = if p < q {
        ((coords, p, q), v)
    } else {
        ((coords, q, p), -v)
    };
    *out.entry(key).or_insert_with(Q::zero) += v;
}

/// `d` of a one-form given as a term map.
pub fn d_oracle(form: &BTreeMap<TermKey, Q>) -> BTreeMap<TwoKey, Q> {
    let mut out = BTreeMap::new();
    for ((coords, dl), v) in form {
        for i in 0..coords.len() {
            let mut rest = coords.clone();
            let x = rest.remove(i);
            add_two(&mut out, rest, x, *dl, v.clone());
        }
    }
    out
}

/// `scale · p ∧ q`, keeping products of total degree at most `max_degree`.
pub fn wedge_oracle(
    out: &mut BTreeMap<TwoKey, Q>,
    scale: &Q,
    p: &BTreeMap<TermKey, Q>,
    q: &BTreeMap<TermKey, Q>,
    max_degree: usize,
) {
    for ((c1, d1), v1) in p {
        for ((c2, d2), v2) in q {
            if c1.len() + c2.len() + 2 > max_degree {
                continue;
            }
            let mut coords = c1.clone();
            coords.extend(c2.iter().copied());
            coords.sort();
            add_two(out, coords, *d1, *d2, scale * v1 * v2);
        }
    }
}

/// Every sub-multiset mode sum of `coords`, by brute force over index subsets.
pub fn subset_mode_sums(coords: &[Lab]) -> Vec<i64> {
    let n = coords.len();
    (0..1u32 << n)
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| coords[i].1)
                .sum()
        })
        .collect()
}
