//! Reproducible experiments behind the `nr` command-line tool.
//!
//! Every number in the output is an exact rational rendered as `p/q`.
//! Decimal columns appear only with `--approx` and carry an `_approx`
//! suffix. All randomness is derived from the seed, so identical arguments
//! give byte-identical output.
//!
//! CSV schemas (column order is fixed):
//!
//! * `converge`: a path table
//!   `n,partition,strategy,diameter,sum_norm,closed_form_norm,bound_holds`,
//!   a blank line, then an identity-comparator table
//!   `n,riemann_sum,abs_error,diameter`.
//! * `darboux`: `n_or_seed,lower,upper,gap`.
//! * `enumerate`: `k,r_k`.
//!
//! `certify` always prints a JSON certificate with the keys
//! `epsilon, delta, families, checked, max_sum_norm, max_diameter, all_passed`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::darboux::{self, BoundedFnOracle};
use crate::enumeration::{EnumIndex, RationalEnumeration};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::partition::{Partition, TagStrategy, TaggedPartition};
use crate::riemann::{self, CounterexamplePath, FamilySpec, IdentityPath, PartitionFamily};

#[derive(Debug, Clone, Parser)]
#[command(name = "nr", version, about = "Exact Riemann sums of a path in l-infinity")]
pub struct RunConfig {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Riemann sums of F and of the identity over refining partitions.
    Converge(ConvergeArgs),
    /// Check the epsilon-delta condition for the integral of F with delta = epsilon.
    Certify(CertifyArgs),
    /// Darboux sums of the Dirichlet or identity function.
    Darboux(DarbouxArgs),
    /// List the first rationals of the enumeration of [0, 1].
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    /// Piece counts run through 1, 2, 4, ..., 2^max_exp.
    #[arg(long, default_value_t = 8)]
    pub max_exp: u32,
    /// Random partitions per piece count.
    #[arg(long, default_value_t = 2)]
    pub random: u64,
    #[arg(long, env = "NR_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Add decimal approximation columns.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value = "1/10")]
    pub epsilon: Rational,
    #[arg(long, value_delimiter = ',', default_value = "uniform,random,adversarial")]
    pub families: Vec<PartitionFamily>,
    /// Number of tagged partitions, shared round-robin between the families.
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    #[arg(long, env = "NR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Dirichlet,
    Identity,
}

/// `uniform:N` or `random:N:SEED`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSpec {
    Uniform(u64),
    Random(u64, u64),
}

impl PartitionSpec {
    pub fn build(self) -> Result<Partition> {
        let (zero, one) = (Rational::zero(), Rational::one());
        match self {
            PartitionSpec::Uniform(n) => Partition::uniform(&zero, &one, n),
            PartitionSpec::Random(n, seed) => Partition::random(&zero, &one, n, seed),
        }
    }

    /// The `n_or_seed` column.
    fn key(self) -> u64 {
        match self {
            PartitionSpec::Uniform(n) => n,
            PartitionSpec::Random(_, seed) => seed,
        }
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "partition spec",
            input: s.to_string(),
        };
        let num = |t: &str| t.parse::<u64>().map_err(|_| err());
        match s.split(':').collect::<Vec<_>>().as_slice() {
            ["uniform", n] => Ok(PartitionSpec::Uniform(num(n)?)),
            ["random", n, seed] => Ok(PartitionSpec::Random(num(n)?, num(seed)?)),
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DarbouxArgs {
    #[arg(long, value_enum, default_value_t = OracleKind::Dirichlet)]
    pub oracle: OracleKind,
    /// May be repeated; one row per partition.
    #[arg(long, required = true)]
    pub partition: Vec<PartitionSpec>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(long)]
    pub approx: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    #[arg(long)]
    pub approx: bool,
}

/// Rendered output and whether every exact invariant held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub text: String,
    pub success: bool,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let enumeration = RationalEnumeration::new();
    match &cfg.command {
        Command::Converge(args) => run_converge(args, &enumeration),
        Command::Certify(args) => run_certify(args, &enumeration),
        Command::Darboux(args) => run_darboux(args),
        Command::Enumerate(args) => Ok(run_enumerate(args, &enumeration)),
    }
}

fn frac(r: &Rational) -> String {
    r.to_fraction_string()
}

fn decimal(r: &Rational) -> String {
    format!("{:.12}", r.to_f64())
}

#[derive(Debug, Clone, Serialize)]
struct PathRow {
    n: u64,
    partition: String,
    strategy: &'static str,
    diameter: String,
    sum_norm: String,
    closed_form_norm: String,
    bound_holds: bool,
    #[serde(skip)]
    exact: (Rational, Rational, Rational),
}

impl PathRow {
    fn held(&self) -> bool {
        let (diameter, norm, closed) = &self.exact;
        self.bound_holds && norm == closed && norm <= diameter
    }
}

#[derive(Debug, Clone, Serialize)]
struct IdentityRow {
    n: u64,
    riemann_sum: String,
    abs_error: String,
    diameter: String,
    #[serde(skip)]
    exact: (Rational, Rational, Rational),
}

fn path_row(f: &CounterexamplePath<'_>, n: u64, label: String, partition: &Partition, strategy: TagStrategy, seed: u64) -> Result<PathRow> {
    let tp = TaggedPartition::with_strategy(partition.clone(), strategy, seed);
    let direct = riemann::riemann_sum(f, &tp)?.sup_norm();
    let closed = riemann::closed_form_sum_norm(&tp);
    let diameter = tp.diameter();
    Ok(PathRow {
        n,
        partition: label,
        strategy: strategy.name(),
        diameter: frac(&diameter),
        sum_norm: frac(&direct),
        closed_form_norm: frac(&closed),
        bound_holds: direct <= diameter,
        exact: (diameter, direct, closed),
    })
}

/// Sweeps `n = 1, 2, 4, ..., 2^max_exp` over uniform and random partitions
/// with every tag strategy, plus left-endpoint sums of the identity.
pub fn run_converge(args: &ConvergeArgs, enumeration: &RationalEnumeration) -> Result<RunOutput> {
    let f = CounterexamplePath::new(enumeration);
    let (zero, one) = (Rational::zero(), Rational::one());
    let schedule: Vec<u64> = (0..=args.max_exp).map(|e| 1u64 << e).collect();

    let mut jobs = Vec::new();
    for &n in &schedule {
        jobs.push((n, format!("uniform:{n}"), Partition::uniform(&zero, &one, n)?));
        for r in 0..args.random {
            let seed = args.seed.wrapping_add(n.wrapping_mul(1_000_003)).wrapping_add(r);
            jobs.push((n, format!("random:{n}:{seed}"), Partition::random(&zero, &one, n, seed)?));
        }
    }
    let path_rows: Vec<PathRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, (n, label, partition))| {
            TagStrategy::ALL
                .iter()
                .map(|&s| path_row(&f, *n, label.clone(), partition, s, args.seed ^ i as u64))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let half = Rational::new(1, 2);
    let identity_rows: Vec<IdentityRow> = schedule
        .iter()
        .map(|&n| {
            let tp = TaggedPartition::left_endpoints(Partition::uniform(&zero, &one, n)?);
            let value = riemann::riemann_sum(&IdentityPath, &tp)?;
            let error = (&value - &half).abs();
            let diameter = tp.diameter();
            Ok(IdentityRow {
                n,
                riemann_sum: frac(&value),
                abs_error: frac(&error),
                diameter: frac(&diameter),
                exact: (value, error, diameter),
            })
        })
        .collect::<Result<_>>()?;

    let success = path_rows.iter().all(PathRow::held) && identity_rows.iter().all(|r| r.exact.1 <= r.exact.2);

    let text = match args.format {
        OutputFormat::Json => {
            let doc = json!({
                "path_rows": path_rows,
                "identity_rows": identity_rows,
                "all_held": success,
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("n,partition,strategy,diameter,sum_norm,closed_form_norm,bound_holds");
            if args.approx {
                out.push_str(",diameter_approx,sum_norm_approx");
            }
            out.push('\n');
            for r in &path_rows {
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.n, r.partition, r.strategy, r.diameter, r.sum_norm, r.closed_form_norm, r.bound_holds
                );
                if args.approx {
                    let _ = write!(out, ",{},{}", decimal(&r.exact.0), decimal(&r.exact.1));
                }
                out.push('\n');
            }
            out.push('\n');
            out.push_str("n,riemann_sum,abs_error,diameter");
            if args.approx {
                out.push_str(",riemann_sum_approx");
            }
            out.push('\n');
            for r in &identity_rows {
                let _ = write!(out, "{},{},{},{}", r.n, r.riemann_sum, r.abs_error, r.diameter);
                if args.approx {
                    let _ = write!(out, ",{}", decimal(&r.exact.0));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(RunOutput { text, success })
}

/// Delegates to [`CounterexamplePath::certify_epsilon_delta`] with `δ = ε`.
pub fn run_certify(args: &CertifyArgs, enumeration: &RationalEnumeration) -> Result<RunOutput> {
    if !args.epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon(args.epsilon.clone()));
    }
    if args.families.is_empty() {
        return Err(Error::Parse {
            what: "partition family list",
            input: String::new(),
        });
    }
    let f = CounterexamplePath::new(enumeration);
    let spec = FamilySpec::new(args.families.clone(), args.count);
    let cert = f.certify_epsilon_delta(&args.epsilon, &spec, args.seed)?;
    let text = serde_json::to_string_pretty(&cert).expect("serializable") + "\n";
    Ok(RunOutput {
        text,
        success: cert.all_passed,
    })
}

pub fn run_darboux(args: &DarbouxArgs) -> Result<RunOutput> {
    let oracle: &dyn BoundedFnOracle = match args.oracle {
        OracleKind::Dirichlet => &darboux::DirichletOracle,
        OracleKind::Identity => &darboux::IdentityOracle,
    };
    let mut rows = Vec::new();
    for spec in &args.partition {
        let p = spec.build()?;
        let lower = darboux::lower_sum(oracle, &p);
        let upper = darboux::upper_sum(oracle, &p);
        let gap = &upper - &lower;
        rows.push((spec.key(), lower, upper, gap));
    }
    let success = rows.iter().all(|(_, lower, upper, _)| lower <= upper);
    let text = match args.format {
        OutputFormat::Json => {
            let doc: Vec<_> = rows
                .iter()
                .map(|(key, lower, upper, gap)| {
                    json!({"n_or_seed": key, "lower": frac(lower), "upper": frac(upper), "gap": frac(gap)})
                })
                .collect();
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::from("n_or_seed,lower,upper,gap");
            if args.approx {
                out.push_str(",gap_approx");
            }
            out.push('\n');
            for (key, lower, upper, gap) in &rows {
                let _ = write!(out, "{key},{},{},{}", frac(lower), frac(upper), frac(gap));
                if args.approx {
                    let _ = write!(out, ",{}", decimal(gap));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(RunOutput { text, success })
}

pub fn run_enumerate(args: &EnumerateArgs, enumeration: &RationalEnumeration) -> RunOutput {
    let values: Vec<Rational> = (0..args.count)
        .map(|k| enumeration.rational_from_index(EnumIndex(k as u128)))
        .collect();
    let text = match args.format {
        OutputFormat::Json => {
            let doc: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(k, r)| json!({"k": k, "r_k": frac(r)}))
                .collect();
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::from("k,r_k");
            if args.approx {
                out.push_str(",r_k_approx");
            }
            out.push('\n');
            for (k, r) in values.iter().enumerate() {
                let _ = write!(out, "{k},{}", frac(r));
                if args.approx {
                    let _ = write!(out, ",{}", decimal(r));
                }
                out.push('\n');
            }
            out
        }
    };
    RunOutput { text, success: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("nr").chain(args.iter().copied())).unwrap()
    }

    fn run_ok(args: &[&str]) -> RunOutput {
        run(&parse(args)).unwrap()
    }

    #[test]
    fn enumerate_head() {
        let out = run_ok(&["enumerate", "--count", "5"]);
        assert_eq!(out.text, "k,r_k\n0,0/1\n1,1/1\n2,1/2\n3,1/3\n4,2/3\n");
        assert!(out.success);
    }

    #[test]
    fn darboux_rows() {
        let out = run_ok(&["darboux", "--oracle", "dirichlet", "--partition", "uniform:64"]);
        assert_eq!(out.text, "n_or_seed,lower,upper,gap\n64,0/1,1/1,1/1\n");
        let out = run_ok(&["darboux", "--oracle", "identity", "--partition", "uniform:8"]);
        assert_eq!(out.text, "n_or_seed,lower,upper,gap\n8,7/16,9/16,1/8\n");
        let out = run_ok(&[
            "darboux",
            "--partition",
            "random:5:3",
            "--partition",
            "uniform:2",
            "--format",
            "json",
        ]);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v[0]["n_or_seed"], 3);
        assert_eq!(v[1]["gap"], "1/1");
    }

    #[test]
    fn partition_spec_grammar() {
        assert_eq!("uniform:4".parse::<PartitionSpec>().unwrap(), PartitionSpec::Uniform(4));
        assert_eq!("random:4:9".parse::<PartitionSpec>().unwrap(), PartitionSpec::Random(4, 9));
        for bad in ["uniform", "uniform:x", "random:4", "grid:3"] {
            assert!(bad.parse::<PartitionSpec>().is_err());
        }
        assert!(RunConfig::try_parse_from(["nr", "darboux", "--partition", "bogus"]).is_err());
        assert_eq!(PartitionSpec::Uniform(0).build(), Err(Error::ZeroSubintervals));
    }

    #[test]
    fn converge_small_schedule() {
        let out = run_ok(&["converge", "--max-exp", "3", "--seed", "4"]);
        assert!(out.success);
        let (path, identity) = out.text.split_once("\n\n").unwrap();
        // (1 uniform + 2 random) partitions x 4 strategies x 4 sizes
        assert_eq!(path.lines().count(), 1 + 3 * 4 * 4);
        assert!(path.lines().skip(1).all(|l| l.ends_with(",true")));
        assert!(path.contains("1,uniform:1,rational_midpoint,1/1,1/1,1/1,true"));
        assert!(identity.contains("\n4,3/8,1/8,1/4\n"));
    }

    #[test]
    fn converge_json_and_approx() {
        let out = run_ok(&["converge", "--max-exp", "1", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["all_held"], true);
        assert_eq!(v["identity_rows"][1]["riemann_sum"], "1/4");
        let out = run_ok(&["converge", "--max-exp", "1", "--approx"]);
        assert!(out.text.starts_with(
            "n,partition,strategy,diameter,sum_norm,closed_form_norm,bound_holds,diameter_approx,sum_norm_approx\n"
        ));
    }

    #[test]
    fn certify_outputs_certificate() {
        let out = run_ok(&["certify", "--epsilon", "1/10", "--count", "40", "--seed", "2"]);
        assert!(out.success);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        let keys = ["epsilon", "delta", "families", "checked", "max_sum_norm", "max_diameter", "all_passed"];
        let positions: Vec<usize> = keys
            .iter()
            .map(|k| out.text.find(&format!("\"{k}\":")).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v["delta"], "1/10");
        assert_eq!(v["checked"], 40);
    }

    #[test]
    fn certify_rejects_zero_epsilon() {
        let cfg = parse(&["certify", "--epsilon", "0"]);
        assert!(matches!(run(&cfg), Err(Error::NonPositiveEpsilon(_))));
        assert!(RunConfig::try_parse_from(["nr", "certify", "--families", "uniform,nope"]).is_err());
    }
}
