//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success / frame |
//! | 1 | input error |
//! | 2 | not a frame at the given depths |
//! | 3 | never a frame, whatever the depths |
//! | 4 | tolerance ambiguity, or the two frame tests disagree |

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::construct::{
    consecutive_set, gcd_pair_set, periodic_w_set, prime_any_set, prime_power_uniform_set,
    search_minimal, sym2d_periodic_set, sym2d_set, Construction, SearchConfig, Sym2dParams,
};
use crate::error::{Error, Result};
use crate::frame::{
    frame_test_direct, frame_test_projection, periodic_frame_test, FrameReport, SamplingPlan,
    Verdict,
};
use crate::group::{FiniteGroup, GroupIndex};
use crate::io::{kernel_from_json, parse_plan_file, PlanFile, SCHEMA};
use crate::linalg::{norm, DEFAULT_RANK_TOL};
use crate::random::random_vector;
use crate::recon::{reconstruct, simulate_samples};
use crate::spark::{row_spark, RowSelection, DEFAULT_SUBSET_CAP};
use crate::spectral::{Kernel, Tolerances, DEFAULT_GROUP_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_FRAME: i32 = 2;
pub const EXIT_NEVER_FRAME: i32 = 3;
pub const EXIT_AMBIGUOUS: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dynsamp",
    version,
    about = "Spatiotemporal sampling plans for convolution dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_TOL)]
    pub group_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a plan yields a frame.
    Check {
        #[command(flatten)]
        kernel: KernelSource,
        #[command(flatten)]
        plan: PlanSource,
    },
    /// Spark of a row selection of the Fourier matrix.
    Spark {
        /// Cyclic factor orders, e.g. `4` or `3,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<usize>,
        /// Rows as flat indices or colon-separated coordinates (`1:2`).
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: u64,
    },
    /// Build a plan from a recipe.
    Construct(ConstructArgs),
    /// Simulate samples and reconstruct the initial state.
    Simulate {
        #[command(flatten)]
        kernel: KernelSource,
        #[command(flatten)]
        plan: PlanSource,
        /// Real initial state; drawn at random from `--seed` when absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Exhaustive search for the smallest admissible sensor sets.
    Search {
        #[command(flatten)]
        kernel: KernelSource,
        #[arg(long)]
        max_size: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct KernelSource {
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    #[arg(long)]
    pub kernel_json: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PlanSource {
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub plan_json: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecipeArg {
    Consecutive,
    GcdPair,
    PrimeAny,
    PrimePowerUniform,
    PeriodicW,
    SymLinf,
    SymQuadrantal,
    SymDiagonal,
    SymOctagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    Rows,
    Columns,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub recipe: RecipeArg,
    #[arg(long)]
    pub d: usize,
    /// Period; for symmetry recipes selects the periodic variant.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long)]
    pub i1: Option<usize>,
    #[arg(long)]
    pub i2: Option<usize>,
    #[arg(long)]
    pub j1: Option<usize>,
    #[arg(long)]
    pub j2: Option<usize>,
    /// Explicit sensor or residue set.
    #[arg(long, value_delimiter = ',')]
    pub set: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Orientation::Rows)]
    pub orientation: Orientation,
    /// Resolve kernel-dependent depths against this kernel.
    #[arg(long)]
    pub kernel: Option<PathBuf>,
    #[arg(long)]
    pub kernel_json: Option<String>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Option<PathBuf>, inline: &Option<String>) -> Result<String> {
    match (path, inline) {
        (Some(p), _) => std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        (None, Some(s)) => Ok(s.clone()),
        (None, None) => Err(Error::InvalidArgument("missing input".into())),
    }
}

fn load_kernel(src: &KernelSource) -> Result<Kernel> {
    kernel_from_json(&read(&src.kernel, &src.kernel_json)?)
}

fn load_plan(src: &PlanSource) -> Result<PlanFile> {
    parse_plan_file(&read(&src.plan, &src.plan_json)?)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Frame => EXIT_OK,
        Verdict::NotFrame => EXIT_NOT_FRAME,
        Verdict::NeverFrame => EXIT_NEVER_FRAME,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn check(kernel: &Kernel, file: &PlanFile, tol: &Tolerances) -> Result<(i32, String)> {
    let plan = file.to_plan()?;
    let projection = frame_test_projection(kernel, &plan, tol)?;
    let direct = frame_test_direct(kernel, &plan, tol)?;
    let periodic = match file.to_periodic()? {
        Some(p) if kernel.group().is_cyclic() => Some(periodic_frame_test(kernel, &p, tol)?),
        _ => None,
    };
    let disagree = projection.verdict.is_frame() != direct.verdict.is_frame()
        || periodic.as_ref().is_some_and(|p: &FrameReport| {
            !p.depth_insufficient && p.verdict.is_frame() != direct.verdict.is_frame()
        });
    let ambiguous = projection.ambiguous || direct.ambiguous;
    let code = if disagree || ambiguous {
        EXIT_AMBIGUOUS
    } else {
        verdict_code(projection.verdict)
    };
    let mut out = json!({
        "schema": SCHEMA,
        "verdict": projection.verdict,
        "projection": projection,
        "direct": direct,
        "disagreement": disagree,
    });
    if let Some(p) = periodic {
        out["periodic"] = serde_json::to_value(p).expect("serializable");
    }
    Ok((code, to_json(&out)))
}

fn parse_row(g: &FiniteGroup, s: &str) -> Result<usize> {
    let parts: std::result::Result<Vec<usize>, _> =
        s.trim().split(':').map(str::parse::<usize>).collect();
    let parts = parts.map_err(|e| Error::InvalidArgument(format!("row {s:?}: {e}")))?;
    if parts.len() == 1 {
        g.check_flat(parts[0])?;
        Ok(parts[0])
    } else {
        g.flat(&GroupIndex(parts))
    }
}

fn spark_cmd(
    factors: &[usize],
    rows: &[String],
    cap: u64,
    tol: &Tolerances,
) -> Result<(i32, String)> {
    let g = FiniteGroup::new(factors)?;
    let rows = rows
        .iter()
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_row(&g, r))
        .collect::<Result<Vec<_>>>()?;
    let sel = RowSelection::new(g.clone(), rows)?;
    let r = row_spark(&sel, tol.rank, cap)?;
    let full = r.is_full_spark(sel.len());
    let out = json!({
        "schema": SCHEMA,
        "factors": g.factors(),
        "rows": sel.rows().iter().map(|&i| g.index(i)).collect::<Vec<_>>(),
        "spark": r.spark,
        "full_spark": full,
        "witness": r.witness.map(|w| w.iter().map(|&i| g.index(i)).collect::<Vec<_>>()),
    });
    Ok((EXIT_OK, to_json(&out)))
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required for this recipe")))
}

fn sym_params(a: &ConstructArgs) -> Result<Sym2dParams> {
    let four = || -> Result<(usize, usize, usize, usize)> {
        Ok((
            need(a.i1, "i1")?,
            need(a.i2, "i2")?,
            need(a.j1, "j1")?,
            need(a.j2, "j2")?,
        ))
    };
    Ok(match (a.recipe, a.orientation) {
        (RecipeArg::SymLinf, _) => Sym2dParams::Linf,
        (RecipeArg::SymQuadrantal, _) => {
            let (i1, i2, j1, j2) = four()?;
            Sym2dParams::Quadrantal { i1, i2, j1, j2 }
        }
        (RecipeArg::SymDiagonal, Orientation::Rows) => Sym2dParams::DiagonalRow {
            i1: need(a.i1, "i1")?,
            i2: need(a.i2, "i2")?,
        },
        (RecipeArg::SymDiagonal, Orientation::Columns) => Sym2dParams::DiagonalColumn {
            j1: need(a.j1, "j1")?,
            j2: need(a.j2, "j2")?,
        },
        (RecipeArg::SymOctagonal, Orientation::Rows) => {
            let (i1, i2, j1, j2) = four()?;
            Sym2dParams::OctagonalRows { i1, i2, j1, j2 }
        }
        (RecipeArg::SymOctagonal, Orientation::Columns) => {
            let (i1, i2, j1, j2) = four()?;
            Sym2dParams::OctagonalColumns { i1, i2, j1, j2 }
        }
        _ => unreachable!("not a symmetry recipe"),
    })
}

fn bind_or_default(
    c: &Construction,
    kernel: Option<&Kernel>,
    tol: &Tolerances,
) -> Result<SamplingPlan> {
    match (c.plan(), kernel) {
        (Some(p), _) => Ok(p),
        (None, Some(k)) => c.bind(k, tol),
        // N_A <= |G|, so |G| - 1 is always at least N_A - 1.
        (None, None) => SamplingPlan::uniform(
            c.group.clone(),
            c.omega.iter().copied(),
            c.group.order() - 1,
        ),
    }
}

fn construct_cmd(a: &ConstructArgs, tol: &Tolerances) -> Result<(i32, String)> {
    let kernel = match (&a.kernel, &a.kernel_json) {
        (None, None) => None,
        (p, s) => Some(kernel_from_json(&read(p, s)?)?),
    };
    let file = match a.recipe {
        RecipeArg::PeriodicW => {
            let c = periodic_w_set(a.d, need(a.m, "m")?, &a.set)?;
            PlanFile::from_periodic(&c.plan).with_recipe(c.recipe)
        }
        RecipeArg::SymLinf
        | RecipeArg::SymQuadrantal
        | RecipeArg::SymDiagonal
        | RecipeArg::SymOctagonal => {
            let params = sym_params(a)?;
            match a.m {
                Some(m) => {
                    let c = sym2d_periodic_set(a.d, m, params)?;
                    PlanFile::from_periodic(&c.plan).with_recipe(c.recipe)
                }
                None => {
                    let c = sym2d_set(a.d, params)?;
                    PlanFile::from_plan(&c.plan().expect("uniform depth")).with_recipe(c.recipe)
                }
            }
        }
        other => {
            let c = match other {
                RecipeArg::Consecutive => consecutive_set(a.d, need(a.l, "L")?)?,
                RecipeArg::GcdPair => gcd_pair_set(a.d, need(a.i1, "i1")?, need(a.i2, "i2")?)?,
                RecipeArg::PrimeAny => prime_any_set(a.d, &a.set)?,
                RecipeArg::PrimePowerUniform => prime_power_uniform_set(a.d, &a.set)?,
                _ => unreachable!(),
            };
            PlanFile::from_plan(&bind_or_default(&c, kernel.as_ref(), tol)?).with_recipe(c.recipe)
        }
    };
    Ok((EXIT_OK, to_json(&file)))
}

fn simulate_cmd(
    kernel: &Kernel,
    file: &PlanFile,
    f: &Option<Vec<f64>>,
    seed: u64,
    noise: f64,
    tol: &Tolerances,
) -> Result<(i32, String)> {
    let plan = file.to_plan()?;
    let n = kernel.group().order();
    let f: Vec<Complex64> = match f {
        Some(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        None => random_vector(n, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    let samples = simulate_samples(kernel, &f, &plan, noise, seed.wrapping_add(1))?;
    let result = reconstruct(kernel, &plan, &samples, tol.rank)?;
    let adjoint = frame_test_direct(&kernel.adjoint(), &plan, tol)?;
    let err: Vec<Complex64> = result.estimate.iter().zip(&f).map(|(a, b)| a - b).collect();
    let rel = norm(&err) / norm(&f).max(f64::MIN_POSITIVE);
    let code = if adjoint.ambiguous {
        EXIT_AMBIGUOUS
    } else {
        verdict_code(adjoint.verdict)
    };
    let out = json!({
        "schema": SCHEMA,
        "samples": samples.len(),
        "relative_error": rel,
        "result": result,
        "adjoint_frame": adjoint,
    });
    Ok((code, to_json(&out)))
}

fn search_cmd(kernel: &Kernel, max_size: Option<usize>, tol: &Tolerances) -> Result<(i32, String)> {
    let n = kernel.group().order();
    let r = search_minimal(kernel, max_size.unwrap_or(n), tol, &SearchConfig::default())?;
    let g = kernel.group();
    let out = json!({
        "schema": SCHEMA,
        "lower_bound": r.lower_bound,
        "size": r.size,
        "count": r.sets.len(),
        "verified": r.verified,
        "sets": r.sets.iter().map(|s| s.iter().map(|&i| g.index(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok((EXIT_OK, to_json(&out)))
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let tol = Tolerances {
        rank: cli.rank_tol,
        group: cli.group_tol,
    };
    if !(tol.rank > 0.0 && tol.group > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    match &cli.command {
        Command::Check { kernel, plan } => check(&load_kernel(kernel)?, &load_plan(plan)?, &tol),
        Command::Spark { factors, rows, cap } => spark_cmd(factors, rows, *cap, &tol),
        Command::Construct(a) => construct_cmd(a, &tol),
        Command::Simulate {
            kernel,
            plan,
            f,
            seed,
            noise,
        } => simulate_cmd(
            &load_kernel(kernel)?,
            &load_plan(plan)?,
            f,
            *seed,
            *noise,
            &tol,
        ),
        Command::Search { kernel, max_size } => search_cmd(&load_kernel(kernel)?, *max_size, &tol),
    }
}

fn error_json(e: &Error) -> String {
    let mut out = json!({ "schema": SCHEMA, "error": e.to_string() });
    match e {
        Error::GcdViolation { parameter, divisor } => {
            out["parameter"] = json!(parameter);
            out["divisor"] = json!(divisor);
        }
        Error::NotFullSpark { witness } => out["witness"] = json!(witness),
        _ => {}
    }
    to_json(&out)
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n: usize = std::env::var("DYNSAMP_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
}

/// Runs one invocation without touching the process's stdout or exit status.
pub fn run_from<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = match thread_pool() {
        Some(pool) => pool.install(|| dispatch(&cli)),
        None => dispatch(&cli),
    };
    let (code, body) = match result {
        Ok(r) => r,
        Err(e) => {
            return CliOutput {
                code: EXIT_INPUT,
                stdout: error_json(&e),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    match &cli.output {
        Some(path) => match std::fs::write(path, format!("{body}\n")) {
            Ok(()) => CliOutput {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => CliOutput {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        },
        None => CliOutput {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}
