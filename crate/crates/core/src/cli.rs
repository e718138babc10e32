//! The `loopexp` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 on usage or parse errors. Reports are pretty-printed JSON with a fixed
//! key and element order, so identical inputs give identical bytes.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{validate, AlgebraDefinition, StructureConstants, StructureTensor};
use crate::contraction::{compare_with_expansion, iw_contract};
use crate::error::{Error, Result};
use crate::expansion::{build_named, ClosureViolation, ExpandedAlgebra, NamedCase, Truncation};
use crate::export::{export_expanded, latex_tables};
use crate::loop_algebra::{LoopLabel, ModeWindow};
use crate::mc_forms::{
    canonical_form_series, check_grading, dump_series, rescale_and_collect, verify_mc_equations,
    DEFAULT_DEGREE,
};
use crate::rational;
use crate::splitting::{SplitKind, SplitSpec, Splitting};

#[derive(Debug, Parser)]
#[command(
    name = "loopexp",
    version,
    about = "Loop-algebra expansions and Maurer–Cartan forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check antisymmetry and the Jacobi identity of an algebra.
    Validate(RunArgs),
    /// Build an expanded algebra and check closure and Jacobi.
    Expand(RunArgs),
    /// Contract with respect to V0 and compare against Ĝ(0,1).
    Contract {
        #[command(flatten)]
        args: RunArgs,
        /// Override one contracted constant: `a,n,b,m,c,l=value`.
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Expand the Maurer–Cartan forms and verify the graded equations.
    Mc(RunArgs),
    /// Closure matrix over a grid of truncation orders.
    Sweep {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, default_value_t = 3)]
        n0_max: u32,
        #[arg(long, default_value_t = 3)]
        n1_max: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Latex,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in name (su2, solvable2, abelian4) or path to a definition file.
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long, value_parser = parse_split_kind)]
    pub split: Option<SplitKind>,
    #[arg(long, value_delimiter = ',')]
    pub v0_gens: Option<Vec<usize>>,
    #[arg(long)]
    pub n0: Option<u32>,
    #[arg(long)]
    pub n1: Option<u32>,
    /// Mode window M.
    #[arg(long)]
    pub window: Option<u32>,
    /// Series degree D.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub alpha_max: Option<u32>,
    /// Named case: G0, G1, G00, G01 or G21.
    #[arg(long, value_parser = parse_case)]
    pub case: Option<NamedCase>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_split_kind(s: &str) -> std::result::Result<SplitKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_case(s: &str) -> std::result::Result<NamedCase, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Json
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: String,
    pub splitting: SplitSpec,
    pub n0: u32,
    pub n1: u32,
    pub window: u32,
    pub degree: usize,
    pub alpha_max: u32,
    pub case: Option<NamedCase>,
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: "su2".into(),
            splitting: SplitSpec {
                kind: SplitKind::ModeParityCoset,
                v0_gens: Vec::new(),
            },
            n0: 0,
            n1: 1,
            window: 1,
            degree: DEFAULT_DEGREE,
            alpha_max: 2,
            case: None,
            output: OutputSpec {
                path: None,
                format: Format::Json,
            },
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Config file (or defaults) with command-line overrides applied.
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(p) => Self::from_path(p)?,
            None => Self::default(),
        };
        if let Some(a) = &args.algebra {
            cfg.algebra = a.clone();
        }
        if let Some(k) = args.split {
            cfg.splitting.kind = k;
            if k != SplitKind::GenericIndex {
                cfg.splitting.v0_gens.clear();
            }
        }
        if let Some(g) = &args.v0_gens {
            cfg.splitting.v0_gens = g.clone();
        }
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = args.$f { cfg.$f = v; })* };
        }
        take!(n0, n1, window, degree, alpha_max);
        if args.case.is_some() {
            cfg.case = args.case;
        }
        if let Some(p) = &args.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = args.format {
            cfg.output.format = f;
        }
        Ok(cfg)
    }

    pub fn mode_window(&self) -> ModeWindow {
        ModeWindow::new(self.window)
    }

    pub fn splitting_for(&self, dim: usize) -> Result<Splitting> {
        Splitting::from_spec(&self.splitting, dim)
    }
}

/// Result of one command: the report body, whether all checks passed, and a
/// one-line reason when they did not.
pub struct Outcome {
    pub body: String,
    pub passed: bool,
    pub failure: Option<String>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn require_json(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.output.format == Format::Latex {
        return Err(Error::InvalidParams(format!(
            "`{command}` only writes JSON"
        )));
    }
    Ok(())
}

fn load(cfg: &RunConfig) -> Result<(AlgebraDefinition, StructureConstants)> {
    let def = AlgebraDefinition::resolve(&cfg.algebra)?;
    let f = def.constants()?;
    Ok((def, f))
}

#[derive(Serialize)]
struct ValidateBody<'a> {
    algebra: &'a str,
    dim: usize,
    valid: bool,
    #[serde(flatten)]
    report: &'a crate::algebra::ValidationReport,
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Outcome> {
    require_json(cfg, "validate")?;
    let def = AlgebraDefinition::resolve(&cfg.algebra)?;
    let report = match def.constants() {
        Ok(f) => validate(&f),
        // contradictory pairs are reported against the entries as declared
        Err(Error::ContradictoryEntry { .. }) => validate(&def.table),
        Err(e) => return Err(e),
    };
    let failure = report
        .antisymmetry
        .first()
        .map(|v| format!("antisymmetry violation at ({},{},{})", v.a, v.b, v.c))
        .or_else(|| {
            report
                .jacobi
                .first()
                .map(|v| format!("Jacobi defect at ({},{},{}) along {}", v.a, v.b, v.c, v.e))
        });
    let body = to_json(&ValidateBody {
        algebra: &def.name,
        dim: def.table.dim(),
        valid: report.is_valid(),
        report: &report,
    })?;
    Ok(Outcome {
        body,
        passed: report.is_valid(),
        failure,
    })
}

fn describe(v: &ClosureViolation) -> String {
    format!(
        "d{} needs {} ∧ {}; {} is truncated",
        v.equation, v.pair.0, v.pair.1, v.required
    )
}

fn expanded_from(cfg: &RunConfig, f: &StructureConstants) -> Result<ExpandedAlgebra> {
    let window = cfg.mode_window();
    Ok(match cfg.case {
        Some(case) => build_named(case, f, window),
        None => ExpandedAlgebra::new(
            f.clone(),
            cfg.splitting_for(f.dim())?,
            Truncation::new(cfg.n0, cfg.n1),
            window,
        ),
    })
}

pub fn cmd_expand(cfg: &RunConfig) -> Result<Outcome> {
    let (def, f) = load(cfg)?;
    let alg = expanded_from(cfg, &f)?;
    let export = export_expanded(&def.name, &alg);
    let jacobi_clean = export.jacobi.as_ref().is_some_and(|j| j.is_clean());
    let passed = export.closure.closed && jacobi_clean;
    let failure = if !export.closure.closed {
        let shown: Vec<String> = export
            .closure
            .violations
            .iter()
            .take(5)
            .map(describe)
            .collect();
        Some(format!(
            "not closed, {} violations: {}",
            export.closure.violations.len(),
            shown.join("; ")
        ))
    } else if !jacobi_clean {
        Some("expanded Jacobi identity fails".to_string())
    } else {
        None
    };
    let body = match cfg.output.format {
        Format::Json => to_json(&export)?,
        Format::Latex => latex_tables(&alg),
    };
    Ok(Outcome {
        body,
        passed,
        failure,
    })
}

/// Parses `a,n,b,m,c,l=value`.
pub fn parse_perturbation(
    s: &str,
) -> Result<(LoopLabel, LoopLabel, LoopLabel, rational::Rational)> {
    let bad = || {
        Error::Parse(format!(
            "perturbation `{s}` is not of the form a,n,b,m,c,l=value"
        ))
    };
    let (lhs, value) = s.split_once('=').ok_or_else(bad)?;
    let nums: Vec<i64> = lhs
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, n, b, m, c, l] = nums[..] else {
        return Err(bad());
    };
    if a < 1 || b < 1 || c < 1 {
        return Err(bad());
    }
    let label = |g: i64, k: i64| LoopLabel::new(g as usize, k);
    Ok((
        label(a, n),
        label(b, m),
        label(c, l),
        rational::parse_pq(value.trim())?,
    ))
}

#[derive(Serialize)]
struct ContractBody<'a> {
    algebra: &'a str,
    split: SplitSpec,
    window: ModeWindow,
    comparison: crate::contraction::ContractionComparison,
    jacobi_clean: bool,
}

pub fn cmd_contract(cfg: &RunConfig, perturb: Option<&str>) -> Result<Outcome> {
    require_json(cfg, "contract")?;
    let (def, f) = load(cfg)?;
    let window = cfg.mode_window();
    let split = cfg.splitting_for(f.dim())?;
    let perturbation = perturb.map(parse_perturbation).transpose()?;
    let mut contracted = iw_contract(&f, &split, window)?;
    if let Some((x, y, z, v)) = perturbation {
        for g in [x.gen, y.gen, z.gen] {
            f.check_index(g)?;
        }
        contracted = contracted.perturbed(x, y, z, v);
    }
    let g01 = ExpandedAlgebra::new(f.clone(), split.clone(), Truncation::new(0, 1), window);
    let comparison = compare_with_expansion(&contracted, &g01, window);
    let failure = comparison.diff.first().map(|d| {
        format!(
            "[{}, {}] along {}: contracted {}, expanded {}",
            d.x,
            d.y,
            d.z,
            rational::to_pq(&d.contracted),
            rational::to_pq(&d.expanded)
        )
    });
    let passed = comparison.matches;
    let body = to_json(&ContractBody {
        algebra: &def.name,
        split: split.to_spec(),
        window,
        comparison,
        jacobi_clean: contracted.jacobi().is_clean(),
    })?;
    Ok(Outcome {
        body,
        passed,
        failure,
    })
}

#[derive(Serialize)]
struct McBody<'a> {
    algebra: &'a str,
    split: SplitSpec,
    window: ModeWindow,
    degree: usize,
    alpha_max: u32,
    series_censored_terms: usize,
    report: crate::mc_forms::McReport,
    grading: crate::mc_forms::GradingReport,
    series: Vec<crate::mc_forms::FormDump>,
}

pub fn cmd_mc(cfg: &RunConfig) -> Result<Outcome> {
    require_json(cfg, "mc")?;
    if cfg.degree < cfg.alpha_max as usize + 1 {
        return Err(Error::DegreeTooLow {
            degree: cfg.degree,
            alpha_max: cfg.alpha_max,
        });
    }
    let (def, f) = load(cfg)?;
    let split = cfg.splitting_for(f.dim())?;
    let series = canonical_form_series(&f, cfg.mode_window(), cfg.degree)?;
    let graded = rescale_and_collect(&series, &split);
    let report = verify_mc_equations(&graded, &f, cfg.alpha_max)?;
    let grading = check_grading(&series, &graded);
    let passed = report.is_clean() && grading.is_clean();
    let failure = if let Some(r) = report.residuals.first() {
        Some(format!(
            "residual {} in dω^{{{};{}}} at {:?} d{}∧d{}",
            r.coef, r.form, r.order, r.monomial, r.differentials.0, r.differentials.1
        ))
    } else if let Some((t, a)) = grading.parity_violations.first() {
        Some(format!("ω^{t} has a λ^{a} bucket of the wrong parity"))
    } else if let Some(t) = grading.leading_term_violations.first() {
        Some(format!("ω^{t} has a wrong λ^0 bucket"))
    } else {
        grading
            .resummation_failures
            .first()
            .map(|t| format!("buckets of ω^{t} do not resum"))
    };
    let body = to_json(&McBody {
        algebra: &def.name,
        split: split.to_spec(),
        window: cfg.mode_window(),
        degree: cfg.degree,
        alpha_max: cfg.alpha_max,
        series_censored_terms: series.censored_terms,
        series: dump_series(&graded),
        report,
        grading,
    })?;
    Ok(Outcome {
        body,
        passed,
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepCell {
    pub n0: u32,
    pub n1: u32,
    pub closed: bool,
    pub violations: usize,
    pub window_censored: usize,
    pub converse_vacuous: bool,
    /// Only computed for closed cells.
    pub jacobi_clean: Option<bool>,
    pub witness: Option<ClosureViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub algebra: String,
    pub split: SplitSpec,
    pub window: ModeWindow,
    /// `closed[n0][n1]`.
    pub closed: Vec<Vec<bool>>,
    pub cells: Vec<SweepCell>,
}

pub fn closure_sweep(
    name: &str,
    f: &StructureConstants,
    split: &Splitting,
    window: ModeWindow,
    n0_max: u32,
    n1_max: u32,
) -> SweepReport {
    let mut cells = Vec::new();
    let mut closed = Vec::new();
    for n0 in 0..=n0_max {
        let mut row = Vec::new();
        for n1 in 0..=n1_max {
            let alg =
                ExpandedAlgebra::new(f.clone(), split.clone(), Truncation::new(n0, n1), window);
            let closure = alg.closure();
            let jacobi_clean = closure
                .closed
                .then(|| alg.jacobi().is_ok_and(|j| j.is_clean()));
            row.push(closure.closed);
            cells.push(SweepCell {
                n0,
                n1,
                closed: closure.closed,
                violations: closure.violations.len(),
                window_censored: closure.window_censored,
                converse_vacuous: closure.converse_vacuous,
                jacobi_clean,
                witness: closure.violations.into_iter().next(),
            });
        }
        closed.push(row);
    }
    SweepReport {
        algebra: name.to_string(),
        split: split.to_spec(),
        window,
        closed,
        cells,
    }
}

pub fn cmd_sweep(cfg: &RunConfig, n0_max: u32, n1_max: u32) -> Result<Outcome> {
    require_json(cfg, "sweep")?;
    let (def, f) = load(cfg)?;
    let split = cfg.splitting_for(f.dim())?;
    let report = closure_sweep(&def.name, &f, &split, cfg.mode_window(), n0_max, n1_max);
    let bad = report.cells.iter().find(|c| c.jacobi_clean == Some(false));
    let failure = bad.map(|c| format!("Ĝ({},{}) closes but fails Jacobi", c.n0, c.n1));
    Ok(Outcome {
        passed: failure.is_none(),
        failure,
        body: to_json(&report)?,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotClosed { .. } | Error::NotContractible { .. } => 1,
        _ => 2,
    }
}

fn dispatch(command: &Command) -> Result<(Outcome, RunConfig)> {
    let args = match command {
        Command::Validate(a) | Command::Expand(a) | Command::Mc(a) => a,
        Command::Contract { args, .. } | Command::Sweep { args, .. } => args,
    };
    let cfg = RunConfig::from_args(args)?;
    let outcome = match command {
        Command::Validate(_) => cmd_validate(&cfg)?,
        Command::Expand(_) => cmd_expand(&cfg)?,
        Command::Contract { perturb, .. } => cmd_contract(&cfg, perturb.as_deref())?,
        Command::Mc(_) => cmd_mc(&cfg)?,
        Command::Sweep { n0_max, n1_max, .. } => cmd_sweep(&cfg, *n0_max, *n1_max)?,
    };
    Ok((outcome, cfg))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (outcome, cfg) = match dispatch(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    match &cfg.output.path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{}", outcome.body),
    }
    match outcome.failure {
        Some(reason) if !outcome.passed => {
            eprintln!("FAIL: {reason}");
            1
        }
        _ if !outcome.passed => 1,
        _ => 0,
    }
}
