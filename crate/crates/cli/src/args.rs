//! Command-line parsing and validation into a [`JobConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hochcurve::bar::DEFAULT_SLICE_CAP;
use hochcurve::poly::{collect_variables, parse_polynomial};
use hochcurve::symgroup::DEFAULT_IDEMPOTENT_CAP;
use hochcurve::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20240601;
pub const ENV_MAX_SLICE: &str = "HOCHCURVE_MAX_SLICE";
pub const ENV_MAX_IDEMPOTENT_N: &str = "HOCHCURVE_MAX_IDEMPOTENT_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

/// Relations with their resolved variables and optional weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub weights: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    Idempotents { n: usize },
    BarHomology { algebra: AlgebraSpec, p_max: usize, max_degree: u64, hodge: bool },
    XnCohomology { n: u32, p_max: usize },
    HkrCohomology { algebra: AlgebraSpec, p_max: u32, cutoff: i64 },
    HkrHomology { algebra: AlgebraSpec, p_max: u32, cutoff: i64 },
    Tjurina { algebra: AlgebraSpec, cutoff: i64 },
    Star {
        algebra: AlgebraSpec,
        /// `Q_1, Q_2, …`
        corrections: Vec<String>,
        order: usize,
        eval: Option<(String, String)>,
        table_degree: u64,
    },
    Trivial { algebra: AlgebraSpec, q1: String, degree_bound: Option<u64> },
    Miniversal { algebra: AlgebraSpec },
    Check { samples: usize },
    Golden { dir: String, bless: bool },
}

/// Resource caps, read from the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_slice: usize,
    pub max_idempotent_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_slice: DEFAULT_SLICE_CAP, max_idempotent_n: DEFAULT_IDEMPOTENT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    pub timing: bool,
    pub caps: Caps,
}

#[derive(Parser)]
#[command(name = "hochcurve", version, about = "Hochschild and Harrison invariants of plane curves")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Relation polynomials, e.g. "y^2 - x^3".
    #[arg(long, num_args = 1..)]
    relations: Vec<String>,
    /// Variable order (comma separated); defaults to the sorted identifiers.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Positive variable weights (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Eulerian idempotents e_n(k) in Q[S_n].
    Idempotents {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Bar homology of A_+ per (p, degree), optionally split into H_{p,k}.
    BarHomology {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        p_max: i64,
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        max_degree: i64,
        #[arg(long)]
        hodge: bool,
    },
    /// Cochain cohomology of Q[z]/(z^n).
    XnCohomology {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        p_max: i64,
    },
    /// Hochschild cohomology through the Koszul model.
    HkrCohomology {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        p_max: i64,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        cutoff: i64,
    },
    /// Hochschild homology through the Koszul model.
    HkrHomology {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        p_max: i64,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        cutoff: i64,
    },
    /// Harrison H^2 as a monomial basis of the Tjurina algebra.
    Tjurina {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        cutoff: i64,
    },
    /// Star product of R - ħ Q_1 - ħ^2 Q_2 - …
    Star {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        q1: String,
        /// Higher corrections Q_2, Q_3, …
        #[arg(long, num_args = 1..)]
        higher: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        order: i64,
        /// A product to evaluate, written "f ⋆ g".
        #[arg(long)]
        eval: Option<String>,
        /// Total degree of the monomials tabulated for each C_i.
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        table_degree: i64,
    },
    /// Decides whether R - ħ Q_1 is a trivial first-order deformation.
    Trivial {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        q1: String,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long, allow_negative_numbers = true)]
        degree_bound: Option<i64>,
    },
    /// Miniversal deformation of a complete intersection.
    Miniversal {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Cross-route validation suite.
    Check {
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        samples: i64,
    },
    /// Compares reports against the golden corpus.
    Golden {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

/// The default golden corpus in the source tree.
pub fn default_golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join("v1")
}

fn positive(flag: &str, v: i64) -> Result<u64, CliError> {
    if v > 0 {
        Ok(v as u64)
    } else {
        Err(CliError::usage(flag, format!("must be positive, got {v}")))
    }
}

fn env_cap(name: &str, default: usize) -> Result<usize, CliError> {
    match std::env::var(name) {
        Err(_) => Ok(default),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(CliError::Usage(format!("environment variable {name} must be a positive integer, got '{s}'"))),
        },
    }
}

fn check_poly(flag: &str, src: &str, vars: &[String]) -> Result<(), CliError> {
    parse_polynomial::<Rational>(src, vars)
        .map(|_| ())
        .map_err(|error| CliError::Parse { flag: flag.to_string(), source_text: src.to_string(), error })
}

/// Resolves the variable list and checks that every expression parses.
fn resolve_vars(explicit: Option<Vec<String>>, exprs: &[(&str, &str)]) -> Result<Vec<String>, CliError> {
    let vars = match explicit {
        Some(v) => {
            let mut seen = v.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != v.len() || v.iter().any(|s| s.is_empty()) {
                return Err(CliError::usage("--vars", "variables must be distinct and non-empty"));
            }
            v
        }
        None => {
            let mut all = Vec::new();
            for (flag, src) in exprs {
                let found = collect_variables(src).map_err(|error| CliError::Parse {
                    flag: flag.to_string(),
                    source_text: src.to_string(),
                    error,
                })?;
                all.extend(found);
            }
            all.sort();
            all.dedup();
            all
        }
    };
    for (flag, src) in exprs {
        check_poly(flag, src, &vars)?;
    }
    if vars.is_empty() {
        return Err(CliError::usage("--relations", "no variables found"));
    }
    Ok(vars)
}

fn algebra_spec(a: AlgebraArgs) -> Result<AlgebraSpec, CliError> {
    if a.relations.is_empty() {
        return Err(CliError::usage("--relations", "at least one relation is required"));
    }
    let exprs: Vec<(&str, &str)> = a.relations.iter().map(|r| ("--relations", r.as_str())).collect();
    let vars = resolve_vars(a.vars, &exprs)?;
    let weights = match a.weights {
        None => None,
        Some(w) => {
            if w.len() != vars.len() {
                return Err(CliError::usage(
                    "--weights",
                    format!("{} weights given for {} variables", w.len(), vars.len()),
                ));
            }
            let w = w
                .into_iter()
                .map(|v| positive("--weights", v).and_then(|v| u32::try_from(v).map_err(|_| CliError::usage("--weights", "weight too large"))))
                .collect::<Result<Vec<u32>, _>>()?;
            Some(w)
        }
    };
    Ok(AlgebraSpec { vars, relations: a.relations, weights })
}

fn split_eval(src: &str) -> Result<(String, String), CliError> {
    let parts: Vec<&str> = src.split('⋆').collect();
    match parts.as_slice() {
        [f, g] if !f.trim().is_empty() && !g.trim().is_empty() => Ok((f.trim().to_string(), g.trim().to_string())),
        _ => Err(CliError::usage("--eval", "expected two polynomials separated by '⋆'")),
    }
}

/// Parses and validates a full argument vector, program name included.
pub fn parse_args<I, T>(argv: I) -> Result<JobConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string().trim_end().trim_start_matches("error: ").to_string()),
    })?;
    let command = match cli.command {
        Cmd::Idempotents { n } => Command::Idempotents { n: positive("--n", n)? as usize },
        Cmd::BarHomology { algebra, p_max, max_degree, hodge } => {
            let p_max = positive("--p-max", p_max)? as usize;
            let max_degree = positive("--max-degree", max_degree)?;
            Command::BarHomology { algebra: algebra_spec(algebra)?, p_max, max_degree, hodge }
        }
        Cmd::XnCohomology { n, p_max } => {
            let n = positive("--n", n)?;
            if n < 2 {
                return Err(CliError::usage("--n", "must be at least 2"));
            }
            let n = u32::try_from(n).map_err(|_| CliError::usage("--n", "too large"))?;
            Command::XnCohomology { n, p_max: positive("--p-max", p_max)? as usize }
        }
        Cmd::HkrCohomology { algebra, p_max, cutoff } => {
            let (p_max, cutoff) = (small("--p-max", p_max)?, positive("--cutoff", cutoff)? as i64);
            Command::HkrCohomology { algebra: algebra_spec(algebra)?, p_max, cutoff }
        }
        Cmd::HkrHomology { algebra, p_max, cutoff } => {
            let (p_max, cutoff) = (small("--p-max", p_max)?, positive("--cutoff", cutoff)? as i64);
            Command::HkrHomology { algebra: algebra_spec(algebra)?, p_max, cutoff }
        }
        Cmd::Tjurina { algebra, cutoff } => {
            let cutoff = positive("--cutoff", cutoff)? as i64;
            Command::Tjurina { algebra: algebra_spec(algebra)?, cutoff }
        }
        Cmd::Star { relation, q1, higher, vars, order, eval, table_degree } => {
            let order = positive("--order", order)? as usize;
            let table_degree = positive("--table-degree", table_degree)?;
            let eval = eval.as_deref().map(split_eval).transpose()?;
            let mut exprs: Vec<(&str, &str)> = vec![("--relation", &relation), ("--q1", &q1)];
            exprs.extend(higher.iter().map(|h| ("--higher", h.as_str())));
            if let Some((f, g)) = &eval {
                exprs.push(("--eval", f));
                exprs.push(("--eval", g));
            }
            let vars = resolve_vars(vars, &exprs)?;
            let mut corrections = vec![q1];
            corrections.extend(higher);
            if corrections.len() > order {
                return Err(CliError::usage("--order", format!("{} corrections need order at least {}", corrections.len(), corrections.len())));
            }
            let algebra = AlgebraSpec { vars, relations: vec![relation], weights: None };
            Command::Star { algebra, corrections, order, eval, table_degree }
        }
        Cmd::Trivial { relation, q1, vars, degree_bound } => {
            let degree_bound = degree_bound.map(|b| positive("--degree-bound", b)).transpose()?;
            let vars = resolve_vars(vars, &[("--relation", &relation), ("--q1", &q1)])?;
            let algebra = AlgebraSpec { vars, relations: vec![relation], weights: None };
            Command::Trivial { algebra, q1, degree_bound }
        }
        Cmd::Miniversal { algebra } => Command::Miniversal { algebra: algebra_spec(algebra)? },
        Cmd::Check { samples } => Command::Check { samples: positive("--samples", samples)? as usize },
        Cmd::Golden { dir, bless } => {
            let dir = dir.unwrap_or_else(default_golden_dir);
            Command::Golden { dir: dir.to_string_lossy().into_owned(), bless }
        }
    };
    let caps = Caps {
        max_slice: env_cap(ENV_MAX_SLICE, DEFAULT_SLICE_CAP)?,
        max_idempotent_n: env_cap(ENV_MAX_IDEMPOTENT_N, DEFAULT_IDEMPOTENT_CAP)?,
    };
    Ok(JobConfig { command, format: cli.format, seed: cli.seed, timing: cli.timing, caps })
}

fn small(flag: &str, v: i64) -> Result<u32, CliError> {
    u32::try_from(positive(flag, v)?).map_err(|_| CliError::usage(flag, "too large"))
}

impl JobConfig {
    /// Re-checks the invariants of a config that did not come from
    /// [`parse_args`], e.g. one read back from a JSON report.
    pub fn validate(&self) -> Result<(), String> {
        let pos = |name: &str, v: i64| if v > 0 { Ok(()) } else { Err(format!("{name} must be positive, got {v}")) };
        let alg = |a: &AlgebraSpec| -> Result<(), String> {
            if a.relations.is_empty() || a.vars.is_empty() {
                return Err("algebra needs relations and variables".into());
            }
            if let Some(w) = &a.weights {
                if w.len() != a.vars.len() || w.contains(&0) {
                    return Err("weights must be positive, one per variable".into());
                }
            }
            for r in &a.relations {
                parse_polynomial::<Rational>(r, &a.vars).map_err(|e| e.to_string())?;
            }
            Ok(())
        };
        match &self.command {
            Command::Idempotents { n } => pos("n", *n as i64),
            Command::BarHomology { algebra, p_max, max_degree, .. } => {
                pos("p_max", *p_max as i64)?;
                pos("max_degree", *max_degree as i64)?;
                alg(algebra)
            }
            Command::XnCohomology { n, p_max } => {
                pos("n - 1", *n as i64 - 1)?;
                pos("p_max", *p_max as i64)
            }
            Command::HkrCohomology { algebra, p_max, cutoff } | Command::HkrHomology { algebra, p_max, cutoff } => {
                pos("p_max", *p_max as i64)?;
                pos("cutoff", *cutoff)?;
                alg(algebra)
            }
            Command::Tjurina { algebra, cutoff } => {
                pos("cutoff", *cutoff)?;
                alg(algebra)
            }
            Command::Star { algebra, corrections, order, table_degree, .. } => {
                pos("order", *order as i64)?;
                pos("table_degree", *table_degree as i64)?;
                if corrections.is_empty() || corrections.len() > *order {
                    return Err("need between 1 and order corrections".into());
                }
                alg(algebra)
            }
            Command::Trivial { algebra, degree_bound, .. } => {
                if let Some(b) = degree_bound {
                    pos("degree_bound", *b as i64)?;
                }
                alg(algebra)
            }
            Command::Miniversal { algebra } => alg(algebra),
            Command::Check { samples } => pos("samples", *samples as i64),
            Command::Golden { .. } => Ok(()),
        }?;
        pos("max_slice", self.caps.max_slice as i64)?;
        pos("max_idempotent_n", self.caps.max_idempotent_n as i64)
    }

    pub fn command_name(&self) -> &'static str {
        match self.command {
            Command::Idempotents { .. } => "idempotents",
            Command::BarHomology { .. } => "bar-homology",
            Command::XnCohomology { .. } => "xn-cohomology",
            Command::HkrCohomology { .. } => "hkr-cohomology",
            Command::HkrHomology { .. } => "hkr-homology",
            Command::Tjurina { .. } => "tjurina",
            Command::Star { .. } => "star",
            Command::Trivial { .. } => "trivial",
            Command::Miniversal { .. } => "miniversal",
            Command::Check { .. } => "check",
            Command::Golden { .. } => "golden",
        }
    }
}
