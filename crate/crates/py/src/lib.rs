//! Python bindings for `loopexp`.
//!
//! Reports come back as plain Python objects (dicts and lists) built from the
//! same JSON the command line writes. Rationals are `"p/q"` strings.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use loopexp::algebra::{validate, AlgebraDefinition, StructureConstants, StructureTensor};
use loopexp::cli::closure_sweep;
use loopexp::contraction::{compare_with_expansion, iw_contract};
use loopexp::expansion::{build_named, ExpandedAlgebra, NamedCase, Truncation};
use loopexp::export::{export_expanded, latex_tables};
use loopexp::loop_algebra::{loop_jacobi_sweep, ModeWindow};
use loopexp::mc_forms::{
    canonical_form_series, check_grading, dump_series, rescale_and_collect, verify_mc_equations,
};
use loopexp::rational::to_pq;
use loopexp::splitting::{make_splitting, SplitKind, Splitting};

create_exception!(loopexp, LoopexpError, PyException);

fn err(e: loopexp::Error) -> PyErr {
    LoopexpError::new_err(e.to_string())
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| LoopexpError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn splitting(kind: &str, v0_gens: Option<Vec<usize>>, dim: usize) -> PyResult<Splitting> {
    let kind: SplitKind = kind.parse().map_err(err)?;
    make_splitting(kind, &v0_gens.unwrap_or_default(), dim).map_err(err)
}

/// A finite-dimensional Lie algebra with exact structure constants.
#[pyclass(module = "loopexp", frozen)]
pub struct Algebra {
    def: AlgebraDefinition,
    f: StructureConstants,
}

impl Algebra {
    fn from_def(def: AlgebraDefinition) -> PyResult<Self> {
        let f = def.constants().map_err(err)?;
        Ok(Algebra { def, f })
    }
}

#[pymethods]
impl Algebra {
    /// `su2`, `solvable2` or `abelian4`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let def = loopexp::algebra::builtin(name)
            .ok_or_else(|| err(loopexp::Error::UnknownAlgebra(name.to_string())))?;
        Self::from_def(def)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_def(AlgebraDefinition::from_json_str(text).map_err(err)?)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Self::from_def(AlgebraDefinition::from_path(path).map_err(err)?)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.def.name
    }

    #[getter]
    fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `f_{ab}^c` as a `"p/q"` string.
    fn structure_constant(&self, a: usize, b: usize, c: usize) -> PyResult<String> {
        for i in [a, b, c] {
            self.f.check_index(i).map_err(err)?;
        }
        Ok(to_pq(&self.f.constant(a, b, c)))
    }

    /// `[T_a, T_b]` as `{c: "p/q"}`.
    fn bracket(&self, a: usize, b: usize) -> PyResult<Vec<(usize, String)>> {
        self.f.check_index(a).map_err(err)?;
        self.f.check_index(b).map_err(err)?;
        Ok(self
            .f
            .row(a, b)
            .iter()
            .map(|(c, v)| (*c, to_pq(v)))
            .collect())
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &validate(&self.f))
    }

    fn is_valid(&self) -> bool {
        validate(&self.f).is_valid()
    }

    /// Windowed Jacobi sweep of the loop algebra; true when every residual vanishes.
    fn loop_jacobi_clean(&self, window: u32) -> bool {
        loop_jacobi_sweep(&self.f, ModeWindow::new(window)).is_clean()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?}, dim={})", self.def.name, self.f.dim())
    }
}

/// A truncated expanded algebra `Ĝ(N0, N1)` on a mode window.
#[pyclass(module = "loopexp", frozen)]
pub struct Expanded {
    name: String,
    alg: ExpandedAlgebra,
}

#[pymethods]
impl Expanded {
    #[new]
    #[pyo3(signature = (algebra, split, n0, n1, window, v0_gens=None))]
    fn new(
        algebra: &Algebra,
        split: &str,
        n0: u32,
        n1: u32,
        window: u32,
        v0_gens: Option<Vec<usize>>,
    ) -> PyResult<Self> {
        let s = splitting(split, v0_gens, algebra.f.dim())?;
        Ok(Expanded {
            name: algebra.def.name.clone(),
            alg: ExpandedAlgebra::new(
                algebra.f.clone(),
                s,
                Truncation::new(n0, n1),
                ModeWindow::new(window),
            ),
        })
    }

    /// One of `G0`, `G1`, `G00`, `G01`, `G21`.
    #[staticmethod]
    fn named(case: &str, algebra: &Algebra, window: u32) -> PyResult<Self> {
        let case: NamedCase = case.parse().map_err(err)?;
        Ok(Expanded {
            name: algebra.def.name.clone(),
            alg: build_named(case, &algebra.f, ModeWindow::new(window)),
        })
    }

    /// `(gen, mode, order)` triples in canonical order.
    #[getter]
    fn generators(&self) -> Vec<(usize, i64, u32)> {
        self.alg
            .generators
            .iter()
            .map(|x| (x.gen, x.mode, x.order))
            .collect()
    }

    fn is_closed(&self) -> bool {
        self.alg.closure().closed
    }

    fn jacobi_clean(&self) -> PyResult<bool> {
        Ok(self.alg.jacobi().map_err(err)?.is_clean())
    }

    /// Full export: generators, constants, closure and Jacobi reports.
    fn export(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &export_expanded(&self.name, &self.alg))
    }

    fn latex(&self) -> String {
        latex_tables(&self.alg)
    }

    fn __len__(&self) -> usize {
        self.alg.generators.len()
    }
}

/// Contracts with respect to `V0` and compares against `Ĝ(0,1)`.
#[pyfunction]
#[pyo3(signature = (algebra, window, split="mode_parity", v0_gens=None))]
fn contract(
    py: Python<'_>,
    algebra: &Algebra,
    window: u32,
    split: &str,
    v0_gens: Option<Vec<usize>>,
) -> PyResult<Py<PyAny>> {
    let s = splitting(split, v0_gens, algebra.f.dim())?;
    let w = ModeWindow::new(window);
    let c = iw_contract(&algebra.f, &s, w).map_err(err)?;
    let g01 = ExpandedAlgebra::new(algebra.f.clone(), s, Truncation::new(0, 1), w);
    to_py(py, &compare_with_expansion(&c, &g01, w))
}

/// Builds the Maurer–Cartan series and checks the graded equations.
#[pyfunction]
#[pyo3(signature = (algebra, split, window, degree, alpha_max, v0_gens=None, include_series=false))]
#[allow(clippy::too_many_arguments)]
fn mc(
    py: Python<'_>,
    algebra: &Algebra,
    split: &str,
    window: u32,
    degree: usize,
    alpha_max: u32,
    v0_gens: Option<Vec<usize>>,
    include_series: bool,
) -> PyResult<Py<PyAny>> {
    let s = splitting(split, v0_gens, algebra.f.dim())?;
    let series = canonical_form_series(&algebra.f, ModeWindow::new(window), degree).map_err(err)?;
    let graded = rescale_and_collect(&series, &s);
    let report = verify_mc_equations(&graded, &algebra.f, alpha_max).map_err(err)?;
    let grading = check_grading(&series, &graded);
    let out = serde_json::json!({
        "clean": report.is_clean() && grading.is_clean(),
        "report": report,
        "grading": grading,
        "series": if include_series { serde_json::to_value(dump_series(&graded)).ok() } else { None },
    });
    to_py(py, &out)
}

/// Closure matrix over `0..=n0_max` × `0..=n1_max`.
#[pyfunction]
#[pyo3(signature = (algebra, split, window, n0_max, n1_max, v0_gens=None))]
fn sweep(
    py: Python<'_>,
    algebra: &Algebra,
    split: &str,
    window: u32,
    n0_max: u32,
    n1_max: u32,
    v0_gens: Option<Vec<usize>>,
) -> PyResult<Py<PyAny>> {
    let s = splitting(split, v0_gens, algebra.f.dim())?;
    to_py(
        py,
        &closure_sweep(
            &algebra.def.name,
            &algebra.f,
            &s,
            ModeWindow::new(window),
            n0_max,
            n1_max,
        ),
    )
}

#[pymodule(name = "loopexp")]
mod loopexp_module {
    #[pymodule_export]
    use super::{contract, mc, sweep, Algebra, Expanded, LoopexpError};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings_roundtrip() {
        Python::initialize();
        Python::attach(|py| {
            let su2 = Algebra::builtin("su2").unwrap();
            assert_eq!(su2.dim(), 3);
            assert!(su2.is_valid());
            assert_eq!(su2.structure_constant(1, 2, 3).unwrap(), "1/1");
            assert!(Algebra::builtin("e8").is_err());

            let g21 = Expanded::named("G21", &su2, 1).unwrap();
            assert_eq!(g21.__len__(), 12);
            assert!(g21.is_closed() && g21.jacobi_clean().unwrap());

            let cmp = contract(py, &su2, 2, "mode_parity", None).unwrap();
            let matches: bool = cmp.bind(py).get_item("matches").unwrap().extract().unwrap();
            assert!(matches);

            let r = mc(py, &su2, "mode_parity", 1, 3, 2, None, false).unwrap();
            let clean: bool = r.bind(py).get_item("clean").unwrap().extract().unwrap();
            assert!(clean);
            assert!(mc(py, &su2, "mode_parity", 1, 1, 2, None, false).is_err());
        });
    }
}
