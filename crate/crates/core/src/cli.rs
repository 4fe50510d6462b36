//! The `qdissect` command line.
//!
//! Exit codes: 0 when every check passes, 1 on any refutation or mismatch,
//! 2 on usage, parse and parameter errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::primes_in;
use crate::congruence::{
    check_claims, claims_from_progression, primitive_claims, quadratic_criterion, scan, theorem1_claims,
    theorem2_claims, theorem3_claims, CongruenceClaim, CongruenceError,
};
use crate::dissect::{verify_catalog, verify_pdissection, DissectError};
use crate::etalang::{parse, Catalog, CatalogError, EtaExpr, ParseError};
use crate::oracle::{convolution_oracle, count_dp, ColoredPartitionSpec};
use crate::report::{ClaimRecord, Item, OracleComparison, RunReport, ENGINE_VERSION};
use crate::series::{Modulus, Ring, SeriesError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qdissect", version, about = "Verify q-series dissections and partition congruences")]
pub struct Cli {
    /// Write the JSON report to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print the JSON report on stdout instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump coefficients of an eta expression
    Coeff {
        #[arg(long)]
        gf: String,
        #[arg(long)]
        upto: usize,
        /// Reduce modulo this integer
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Verify the identities of a catalog
    VerifyIdentities {
        /// `default` or a path to a catalog file
        #[arg(long, default_value = "default")]
        catalog: String,
        #[arg(long, default_value_t = 400)]
        order: usize,
        /// Only verify the identity with this name
        #[arg(long)]
        only: Option<String>,
    },
    /// Verify the p-dissection of (q;q)_inf
    Pdissect {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, default_value_t = 300)]
        order: usize,
    },
    /// Check the p33 congruences mod 2, 3, 4, 5, 9 and 27
    Theorem1(SuiteArgs),
    /// Check the prime family of p33 congruences mod 27
    Theorem2 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Check the p33 congruences mod 7 and 11 (empirical)
    Theorem3(SuiteArgs),
    /// Brute-force 2(6k+1)^2 + 6(6m+1)^2 = 0 (mod p) for primes 5 <= p < pmax
    QuadraticCriterion {
        #[arg(long, default_value_t = 200)]
        pmax: u64,
    },
    /// Check one congruence claim
    Check {
        #[arg(long, default_value = "f1^-3*f3^-3")]
        gf: String,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        /// Progression shorthand such as "12n+6,9" (instead of --a/--b)
        #[arg(long, conflicts_with_all = ["a", "b"])]
        prog: Option<String>,
        #[arg(long = "mod")]
        modulus: u64,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Search for congruences on arithmetic progressions
    Scan {
        #[arg(long, default_value = "f1^-3*f3^-3")]
        gf: String,
        #[arg(long)]
        amax: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        limit: u64,
        #[arg(long, default_value_t = 50)]
        min_hits: u64,
        /// Drop claims implied by a coarser claim in the output
        #[arg(long)]
        primitive: bool,
    },
    /// Brute-force p33 counts, optionally compared against the other routes
    Oracle {
        #[arg(long, default_value_t = 120)]
        upto: u64,
        #[arg(long)]
        compare: bool,
    },
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 50_000)]
    limit: u64,
    /// Cross-check in exact arithmetic up to min(limit, 500)
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid expression: {0}")]
    Expression(#[from] ParseError),
    #[error("invalid catalog: {0}")]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Dissect(#[from] DissectError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0}")]
    Parameter(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            if let Some(path) = &cli.out {
                if let Err(source) = fs::write(path, report.to_json() + "\n") {
                    eprintln!("error: {}", CliError::Io { path: path.display().to_string(), source });
                    return EXIT_USAGE;
                }
            }
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs the parsed command and builds its report.
pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let (command, ring, order, items) = match &cli.command {
        Command::Coeff { gf, upto, modulus } => {
            let expr = parse(gf)?;
            let ring = match modulus {
                None => Ring::Exact,
                Some(m) => Ring::modular(*m)?,
            };
            let s = expr.eval(*upto, ring);
            let item = Item::Coefficients { gf: expr.to_string(), ring: ring.to_string(), values: s.render_coeffs() };
            ("coeff".to_string(), ring.to_string(), *upto as u64, vec![item])
        }
        Command::VerifyIdentities { catalog, order, only } => {
            let cat = load_catalog(catalog)?;
            if let Some(name) = only {
                if cat.get(name).is_none() {
                    return Err(CliError::Parameter(format!("no identity named {name:?} in the catalog")));
                }
            }
            let reports = verify_catalog(&cat, *order, only.as_deref())?;
            let items = reports.into_iter().map(Item::Identity).collect();
            ("verify-identities".to_string(), "per identity".to_string(), *order as u64, items)
        }
        Command::Pdissect { p, order } => {
            let mut ps = p.clone();
            ps.sort_unstable();
            ps.dedup();
            let items = ps
                .iter()
                .map(|&p| verify_pdissection(p, *order).map(Item::PDissection))
                .collect::<Result<Vec<_>, _>>()?;
            ("pdissect".to_string(), Ring::Exact.to_string(), *order as u64, items)
        }
        Command::Theorem1(args) => {
            require(args.limit >= 9, "theorem1 needs --limit >= 9")?;
            ("theorem1".to_string(), "modular".to_string(), args.limit, claim_items(&theorem1_claims(), args))
        }
        Command::Theorem3(args) => {
            require(args.limit >= 121, "theorem3 needs --limit >= 121")?;
            ("theorem3".to_string(), "modular".to_string(), args.limit, claim_items(&theorem3_claims(), args))
        }
        Command::Theorem2 { p, alpha, suite } => {
            let claims: Vec<CongruenceClaim> = theorem2_claims(*p, *alpha)?.iter().map(|c| c.to_claim()).collect();
            ("theorem2".to_string(), "Z/27".to_string(), suite.limit, claim_items(&claims, suite))
        }
        Command::QuadraticCriterion { pmax } => {
            let items = primes_in(5, *pmax)
                .into_iter()
                .map(|p| quadratic_criterion(p).map(Item::Quadratic))
                .collect::<Result<Vec<_>, _>>()?;
            ("quadratic-criterion".to_string(), "Z/p".to_string(), *pmax, items)
        }
        Command::Check { gf, a, b, prog, modulus, suite } => {
            let expr = parse(gf)?;
            let m = Modulus::new(*modulus)?;
            let claims = match (prog, a, b) {
                (Some(text), _, _) => claims_from_progression(&expr, text, m)?,
                (None, Some(a), Some(b)) => {
                    require(*a >= 1, "--a must be positive")?;
                    vec![CongruenceClaim::with_start(expr, *a, *b, m)]
                }
                _ => return Err(CliError::Parameter("check needs --prog or both --a and --b".into())),
            };
            if let Some(c) = claims.iter().find(|c| c.start > suite.limit) {
                return Err(CliError::Parameter(format!("--limit {} is below the first argument {}", suite.limit, c.start)));
            }
            (format!("check {}", gf), Ring::Modular(m).to_string(), suite.limit, claim_items(&claims, suite))
        }
        Command::Scan { gf, amax, moduli, limit, min_hits, primitive } => {
            let expr = parse(gf)?;
            require(*amax >= 1, "--amax must be positive")?;
            require(
                amax.checked_mul(*min_hits).is_some_and(|x| x <= *limit),
                "scan needs --limit >= amax * min-hits",
            )?;
            let moduli = moduli.iter().map(|&m| Modulus::new(m)).collect::<Result<Vec<_>, _>>()?;
            let mut found = scan(&expr, *amax, &moduli, *limit, *min_hits);
            if *primitive {
                found = primitive_claims(&found);
            }
            let items = found.iter().map(|c| Item::Claim(ClaimRecord::from_claim(c, None))).collect();
            (format!("scan {}", gf), "modular (empirical)".to_string(), *limit, items)
        }
        Command::Oracle { upto, compare } => {
            let n = *upto as usize;
            let dp = count_dp(&ColoredPartitionSpec::p33(), n);
            let values: Vec<String> = dp.iter().map(BigInt::to_string).collect();
            let item = if *compare {
                let conv = convolution_oracle(n);
                let series = EtaExpr::p33().eval(n, Ring::Exact).coeffs();
                Item::Oracle(OracleComparison {
                    upto: *upto,
                    values,
                    convolution_mismatch: first_disagreement(&dp, &conv),
                    series_mismatch: first_disagreement(&dp, &series),
                })
            } else {
                Item::Coefficients { gf: "p33 (dp)".into(), ring: Ring::Exact.to_string(), values }
            };
            ("oracle".to_string(), Ring::Exact.to_string(), *upto, vec![item])
        }
    };
    Ok(RunReport {
        command,
        version: ENGINE_VERSION.to_string(),
        ring,
        order,
        items,
        duration_ms: started.elapsed().as_millis() as u64,
    })
}

fn require(ok: bool, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Parameter(msg.to_string()))
    }
}

fn load_catalog(spec: &str) -> Result<Catalog, CliError> {
    if spec == "default" {
        return Ok(Catalog::builtin());
    }
    let text = fs::read_to_string(spec).map_err(|source| CliError::Io { path: spec.to_string(), source })?;
    Ok(Catalog::parse(&text)?)
}

fn claim_items(claims: &[CongruenceClaim], args: &SuiteArgs) -> Vec<Item> {
    let exact = args.exact.then_some(args.limit);
    check_claims(claims, args.limit)
        .iter()
        .map(|c| Item::Claim(ClaimRecord::from_claim(c, exact)))
        .collect()
}

fn first_disagreement(a: &[BigInt], b: &[BigInt]) -> Option<u64> {
    a.iter().zip(b).position(|(x, y)| x != y).map(|n| n as u64)
}
