//! JSON and LaTeX renderings of expanded algebras.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::expansion::{ClosureReport, ExpandedAlgebra, ExpandedLabel};
use crate::jacobi::JacobiReport;
use crate::loop_algebra::ModeWindow;
use crate::rational::{self, Rational};
use crate::splitting::SplitSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantRow {
    pub x: ExpandedLabel,
    pub y: ExpandedLabel,
    pub z: ExpandedLabel,
    #[serde(with = "rational::pq_serde")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpandedExport {
    pub algebra: String,
    pub split: SplitSpec,
    pub n0: u32,
    pub n1: u32,
    pub window: ModeWindow,
    pub generator_count: usize,
    pub generators: Vec<ExpandedLabel>,
    /// Nonzero `C_{xy}^z` with `x < y`.
    pub constants: Vec<ConstantRow>,
    pub closure: ClosureReport,
    /// Absent when the algebra does not close.
    pub jacobi: Option<JacobiReport<ExpandedLabel>>,
}

pub fn export_expanded(name: &str, alg: &ExpandedAlgebra) -> ExpandedExport {
    let closure = alg.closure();
    let jacobi = alg.jacobi().ok();
    ExpandedExport {
        algebra: name.to_string(),
        split: alg.split.to_spec(),
        n0: alg.trunc.n0,
        n1: alg.trunc.n1,
        window: alg.window,
        generator_count: alg.generators.len(),
        generators: alg.generators.clone(),
        constants: alg
            .nonzero_constants()
            .into_iter()
            .map(|(x, y, z, value)| ConstantRow { x, y, z, value })
            .collect(),
        closure,
        jacobi,
    }
}

fn latex_label(x: &ExpandedLabel) -> String {
    format!("T_{{{},{}}}^{{({})}}", x.gen, x.mode, x.order)
}

fn latex_coef(v: &Rational) -> String {
    let (num, den) = (v.numer(), v.denom());
    let sign = if v < &rational::zero() { "-" } else { "+" };
    let abs = num.magnitude();
    if *den == 1.into() {
        if abs == &1u32.into() {
            sign.to_string()
        } else {
            format!("{sign}{abs}\\,")
        }
    } else {
        format!("{sign}\\tfrac{{{abs}}}{{{den}}}")
    }
}

/// One commutator table per order pair `(β, γ)` with `β <= γ`. Rows are the
/// order-`β` generators, columns the order-`γ` ones.
pub fn latex_tables(alg: &ExpandedAlgebra) -> String {
    let orders: BTreeSet<u32> = alg.generators.iter().map(|x| x.order).collect();
    let of_order = |o: u32| -> Vec<&ExpandedLabel> {
        alg.generators.iter().filter(|x| x.order == o).collect()
    };
    let mut out = String::new();
    for &beta in &orders {
        for &gamma in orders.range(beta..) {
            let (rows, cols) = (of_order(beta), of_order(gamma));
            let _ = writeln!(out, "% orders ({beta},{gamma})");
            let _ = writeln!(out, "\\begin{{tabular}}{{c|{}}}", "c".repeat(cols.len()));
            let header: Vec<String> = cols
                .iter()
                .map(|y| format!("${}$", latex_label(y)))
                .collect();
            let _ = writeln!(out, "$[\\cdot,\\cdot]$ & {} \\\\", header.join(" & "));
            let _ = writeln!(out, "\\hline");
            for x in &rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|y| {
                        let terms: Vec<String> = alg
                            .bracket(x, y)
                            .into_iter()
                            .filter(|(z, _)| alg.contains(z))
                            .map(|(z, v)| format!("{}{}", latex_coef(&v), latex_label(&z)))
                            .collect();
                        if terms.is_empty() {
                            "$0$".to_string()
                        } else {
                            let joined = terms.concat();
                            format!("${}$", joined.strip_prefix('+').unwrap_or(&joined))
                        }
                    })
                    .collect();
                let _ = writeln!(out, "${}$ & {} \\\\", latex_label(x), cells.join(" & "));
            }
            let _ = writeln!(out, "\\end{{tabular}}");
            out.push('\n');
        }
    }
    out
}
