//! Finite-dimensional Lie algebras given by exact structure constants.
//!
//! Generators are 1-based. A structure constant `f_{ab}^c` is the
//! coefficient of `T_c` in `[T_a, T_b]`.
//!
//! Two tensor types implement [`StructureTensor`]:
//!
//! * [`EntryTable`] holds exactly the entries that were declared, with no
//!   completion. It is what a definition file parses into, and what
//!   [`validate`] audits.
//! * [`StructureConstants`] is the canonical antisymmetric tensor. Only
//!   pairs `a < b` are stored; `a > b` is reconstructed by sign.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Read access to a structure-constant tensor.
pub trait StructureTensor {
    fn dim(&self) -> usize;

    /// Nonzero `f_{ab}^c` for fixed `(a, b)`, ascending in `c`.
    fn row(&self, a: usize, b: usize) -> &[(usize, Rational)];

    fn constant(&self, a: usize, b: usize, c: usize) -> Rational {
        self.row(a, b)
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(rational::zero)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.dim() {
            Err(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            })
        } else {
            Ok(())
        }
    }
}

/// Dense `dim x dim` lookup of sparse rows, shared by both tensor types.
#[derive(Clone, Debug, Default, PartialEq)]
struct Rows {
    dim: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl Rows {
    fn new(dim: usize) -> Self {
        Rows {
            dim,
            rows: vec![Vec::new(); dim * dim],
        }
    }

    fn get(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        if a == 0 || b == 0 || a > self.dim || b > self.dim {
            return &[];
        }
        &self.rows[(a - 1) * self.dim + (b - 1)]
    }

    fn push(&mut self, a: usize, b: usize, c: usize, v: Rational) {
        let row = &mut self.rows[(a - 1) * self.dim + (b - 1)];
        row.push((c, v));
        row.sort_by_key(|(k, _)| *k);
    }
}

/// One declared structure constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    #[serde(with = "rational::pq_serde")]
    pub value: Rational,
}

impl Entry {
    pub fn new(a: usize, b: usize, c: usize, value: Rational) -> Self {
        Entry { a, b, c, value }
    }
}

/// Structure constants exactly as declared, without antisymmetric completion.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryTable {
    entries: BTreeMap<(usize, usize, usize), Rational>,
    rows: Rows,
}

impl EntryTable {
    /// Fails on out-of-range indices or on the same `(a,b,c)` declared twice
    /// with different values. Zero values are dropped.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = Entry>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("algebra dimension must be positive".into()));
        }
        let mut map: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for e in entries {
            for index in [e.a, e.b, e.c] {
                if index == 0 || index > dim {
                    return Err(Error::IndexOutOfRange { index, dim });
                }
            }
            if let Some(prev) = map.get(&(e.a, e.b, e.c)) {
                if *prev != e.value {
                    return Err(Error::ContradictoryEntry {
                        a: e.a,
                        b: e.b,
                        c: e.c,
                        detail: format!(
                            "declared as both {} and {}",
                            rational::to_pq(prev),
                            rational::to_pq(&e.value)
                        ),
                    });
                }
            }
            map.insert((e.a, e.b, e.c), e.value);
        }
        map.retain(|_, v| !v.is_zero());
        let mut rows = Rows::new(dim);
        for (&(a, b, c), v) in &map {
            rows.push(a, b, c, v.clone());
        }
        Ok(EntryTable { entries: map, rows })
    }

    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.entries
            .iter()
            .map(|(&(a, b, c), v)| Entry::new(a, b, c, v.clone()))
    }
}

impl StructureTensor for EntryTable {
    fn dim(&self) -> usize {
        self.rows.dim
    }

    fn row(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.rows.get(a, b)
    }
}

/// Canonical antisymmetric structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    /// `(a, b, c) -> f_{ab}^c` for `a < b` only.
    upper: BTreeMap<(usize, usize, usize), Rational>,
    rows: Rows,
}

impl StructureConstants {
    /// Antisymmetric completion of `entries`. A declared `f_{aa}^c != 0`, or
    /// a pair `f_{ab}^c`, `f_{ba}^c` that are not negatives, is rejected.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = Entry>) -> Result<Self> {
        let table = EntryTable::new(dim, entries)?;
        Self::from_table(&table)
    }

    pub fn from_table(table: &EntryTable) -> Result<Self> {
        let mut upper: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for e in table.entries() {
            if e.a == e.b {
                return Err(Error::ContradictoryEntry {
                    a: e.a,
                    b: e.b,
                    c: e.c,
                    detail: "diagonal constant must vanish".into(),
                });
            }
            let (key, value) = if e.a < e.b {
                ((e.a, e.b, e.c), e.value.clone())
            } else {
                ((e.b, e.a, e.c), -e.value.clone())
            };
            if let Some(prev) = upper.get(&key) {
                if *prev != value {
                    return Err(Error::ContradictoryEntry {
                        a: e.a,
                        b: e.b,
                        c: e.c,
                        detail: "not antisymmetric with its transposed entry".into(),
                    });
                }
            }
            upper.insert(key, value);
        }
        Ok(Self::from_upper(table.dim(), upper))
    }

    fn from_upper(dim: usize, upper: BTreeMap<(usize, usize, usize), Rational>) -> Self {
        let mut rows = Rows::new(dim);
        for (&(a, b, c), v) in &upper {
            rows.push(a, b, c, v.clone());
            rows.push(b, a, c, -v.clone());
        }
        StructureConstants { dim, upper, rows }
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self::from_upper(dim, BTreeMap::new())
    }

    /// Stored `(a, b, c, f_{ab}^c)` with `a < b`.
    pub fn upper_entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.upper
            .iter()
            .map(|(&(a, b, c), v)| Entry::new(a, b, c, v.clone()))
    }

    /// Every nonzero entry, both orderings of each pair.
    pub fn full_entries(&self) -> Vec<Entry> {
        let mut out = Vec::with_capacity(2 * self.upper.len());
        for a in 1..=self.dim {
            for b in 1..=self.dim {
                for (c, v) in self.row(a, b) {
                    out.push(Entry::new(a, b, *c, v.clone()));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.upper.is_empty()
    }

    /// `(a, b, f_{ab}^c)` over all ordered pairs, grouped by target `c`.
    pub fn by_target(&self) -> Vec<Vec<(usize, usize, Rational)>> {
        let mut out = vec![Vec::new(); self.dim + 1];
        for e in self.full_entries() {
            out[e.c].push((e.a, e.b, e.value));
        }
        out
    }
}

impl StructureTensor for StructureConstants {
    fn dim(&self) -> usize {
        self.dim
    }

    fn row(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.rows.get(a, b)
    }
}

/// An element of the linear span of the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlgebraElement {
    coeffs: BTreeMap<usize, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The generator `T_index`.
    pub fn basis(index: usize) -> Self {
        Self::from_coeffs([(index, rational::one())])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut out = Self::zero();
        for (i, v) in coeffs {
            out.add_term(i, v);
        }
        out
    }

    pub fn add_term(&mut self, index: usize, value: Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(index).or_insert_with(rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn coeff(&self, index: usize) -> Rational {
        self.coeffs
            .get(&index)
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(i, v)| (*i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(i, v)| (*i, v * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.iter() {
            out.add_term(i, v.clone());
        }
        out
    }

    fn check_indices<T: StructureTensor + ?Sized>(&self, f: &T) -> Result<()> {
        self.coeffs.keys().try_for_each(|&i| f.check_index(i))
    }
}

/// `[x, y]_c = sum_{a,b} x_a y_b f_{ab}^c`.
pub fn bracket<T: StructureTensor + ?Sized>(
    f: &T,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement> {
    x.check_indices(f)?;
    y.check_indices(f)?;
    let mut out = AlgebraElement::zero();
    for (a, xa) in x.iter() {
        for (b, yb) in y.iter() {
            for (c, v) in f.row(a, b) {
                out.add_term(*c, xa * yb * v);
            }
        }
    }
    Ok(out)
}

/// `[[T_a,T_b],T_c] + [[T_b,T_c],T_a] + [[T_c,T_a],T_b]`, computed by nested
/// brackets.
pub fn jacobi_defect<T: StructureTensor + ?Sized>(
    f: &T,
    a: usize,
    b: usize,
    c: usize,
) -> Result<AlgebraElement> {
    let (ta, tb, tc) = (
        AlgebraElement::basis(a),
        AlgebraElement::basis(b),
        AlgebraElement::basis(c),
    );
    let first = bracket(f, &bracket(f, &ta, &tb)?, &tc)?;
    let second = bracket(f, &bracket(f, &tb, &tc)?, &ta)?;
    let third = bracket(f, &bracket(f, &tc, &ta)?, &tb)?;
    Ok(first.add(&second).add(&third))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntisymmetryViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// `f_{ab}^c`
    #[serde(with = "rational::pq_serde")]
    pub lhs: Rational,
    /// `-f_{ba}^c`
    #[serde(with = "rational::pq_serde")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub e: usize,
    #[serde(with = "rational::pq_serde")]
    pub residual: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub antisymmetry: Vec<AntisymmetryViolation>,
    pub jacobi: Vec<JacobiViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

/// Audits antisymmetry of every pair `a <= b` and the Jacobi identity
/// `sum_d f_{ab}^d f_{dc}^e + f_{bc}^d f_{da}^e + f_{ca}^d f_{db}^e = 0`
/// for every `(a, b, c, e)`, using the tensor as given.
pub fn validate<T: StructureTensor + ?Sized>(f: &T) -> ValidationReport {
    let dim = f.dim();
    let mut report = ValidationReport::default();
    for a in 1..=dim {
        for b in a..=dim {
            for c in 1..=dim {
                let lhs = f.constant(a, b, c);
                let rhs = -f.constant(b, a, c);
                if lhs != rhs {
                    report
                        .antisymmetry
                        .push(AntisymmetryViolation { a, b, c, lhs, rhs });
                }
            }
        }
    }

    // composed[(a,b)][e] = sum_d f_{ab}^d f_{dc}^e, accumulated per c.
    for a in 1..=dim {
        for b in 1..=dim {
            for c in 1..=dim {
                let mut residual = vec![rational::zero(); dim + 1];
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for (d, fxy) in f.row(x, y) {
                        for (e, fdz) in f.row(*d, z) {
                            residual[*e] += fxy * fdz;
                        }
                    }
                }
                for (e, r) in residual.into_iter().enumerate().skip(1) {
                    if !r.is_zero() {
                        report.jacobi.push(JacobiViolation {
                            a,
                            b,
                            c,
                            e,
                            residual: r,
                        });
                    }
                }
            }
        }
    }
    report
}

/// On-disk algebra definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub entries: Vec<Entry>,
}

/// A named algebra as declared; [`AlgebraDefinition::constants`] gives the
/// completed tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraDefinition {
    pub name: String,
    pub table: EntryTable,
}

impl AlgebraDefinition {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(AlgebraDefinition {
            table: EntryTable::new(file.dim, file.entries)?,
            name: file.name,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// A built-in name, or else a path to a definition file.
    pub fn resolve(spec: &str) -> Result<Self> {
        match builtin(spec) {
            Some(def) => Ok(def),
            None if Path::new(spec).exists() => Self::from_path(spec),
            None => Err(Error::UnknownAlgebra(spec.to_string())),
        }
    }

    pub fn constants(&self) -> Result<StructureConstants> {
        StructureConstants::from_table(&self.table)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            name: self.name.clone(),
            dim: self.table.dim(),
            entries: self.table.entries().collect(),
        }
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["su2", "solvable2", "abelian4"];

/// Built-in algebras:
///
/// * `su2`: dim 3, `f_{ab}^c = epsilon_{abc}`.
/// * `solvable2`: dim 2, `[T_1, T_2] = T_1`.
/// * `abelian4`: dim 4, all brackets zero.
pub fn builtin(name: &str) -> Option<AlgebraDefinition> {
    let one = rational::one;
    let (dim, entries) = match name {
        "su2" => (
            3,
            vec![
                Entry::new(1, 2, 3, one()),
                Entry::new(2, 3, 1, one()),
                Entry::new(3, 1, 2, one()),
            ],
        ),
        "solvable2" => (2, vec![Entry::new(1, 2, 1, one())]),
        "abelian4" => (4, vec![]),
        _ => return None,
    };
    let table = EntryTable::new(dim, entries).expect("built-in tables are well formed");
    Some(AlgebraDefinition {
        name: name.to_string(),
        table,
    })
}

/// Completed constants of a built-in algebra.
pub fn builtin_constants(name: &str) -> Option<StructureConstants> {
    builtin(name).map(|d| d.constants().expect("built-in algebras are antisymmetric"))
}
