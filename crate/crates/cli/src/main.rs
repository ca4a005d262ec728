//! `freytool`: command-line front end for the frey-core toolkit.
//!
//! Exit codes: 0 ok, 1 usage error, 2 domain error, 3 counterexample
//! candidate or anomaly.

mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frey_core::arith::{self, ExactInt};
use frey_core::model::WeierstrassModel;
use frey_core::{denes, frey, par, search, tate, traces};

use render::Format;

#[derive(Parser, Debug)]
#[command(name = "freytool", version, about = "Frey curves, conductors and bounded searches for a^p + 2^α b^p + c^p = 0")]
struct Cli {
    /// Output format; defaults to csv for `traces` and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads for search and scan commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    parallelism: usize,

    /// Trial-division bound for factoring discriminants.
    #[arg(long, global = true, env = "FREY_FACTOR_BOUND", default_value_t = arith::DEFAULT_FACTOR_BOUND)]
    factor_bound: u64,

    /// Print progress and timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frey curve, conductor table and oracle cross-check for one solution.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: u32,
        /// a,b,c
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
    },
    /// Dénes's criterion for one prime or every prime 5 ≤ p ≤ MAX.
    Denes(DenesArgs),
    /// Search a^p + L^α b^p + c^p = 0 up to height H.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(long = "L", default_value_t = 2)]
        base: u64,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        allow_imprimitive: bool,
    },
    /// Search k-term arithmetic progressions of n-th powers.
    ApSearch {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        height: u64,
        /// Also list constant progressions.
        #[arg(long)]
        include_constant: bool,
    },
    /// Check the search claims for every (p, α) pair.
    Verify {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        p_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        alpha_list: Vec<u32>,
        #[arg(long)]
        height: u64,
    },
    /// Traces of Frobenius at odd primes up to LMAX.
    Traces {
        /// a1,a2,a3,a4,a6
        #[arg(long, allow_hyphen_values = true)]
        model: String,
        #[arg(long, default_value_t = traces::DEFAULT_LMAX)]
        lmax: u64,
    },
    /// Compare traces of two curves mod p.
    Congruence {
        #[arg(long, allow_hyphen_values = true)]
        model1: String,
        #[arg(long, allow_hyphen_values = true)]
        model2: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = traces::DEFAULT_LMAX)]
        lmax: u64,
    },
    /// Global conductor and local data by Tate's algorithm.
    Conductor {
        #[arg(long, allow_hyphen_values = true)]
        model: String,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DenesArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    scan: Option<u64>,
}

enum Failure {
    Usage(String),
    Domain(frey_core::Error),
}

impl From<frey_core::Error> for Failure {
    fn from(e: frey_core::Error) -> Self {
        Failure::Domain(e)
    }
}

struct Output {
    text: String,
    /// Counterexample candidate or anomaly found.
    flagged: bool,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn odd_prime(name: &str, p: u64) -> Result<(), Failure> {
    if p % 2 == 1 && arith::is_prime_u64(p) {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be an odd prime, got {p}")))
    }
}

fn positive(name: &str, v: u64) -> Result<(), Failure> {
    if v == 0 {
        Err(usage(format!("--{name} must be at least 1")))
    } else {
        Ok(())
    }
}

fn parse_model(name: &str, s: &str) -> Result<WeierstrassModel, Failure> {
    let m: WeierstrassModel = s.parse().map_err(|e| usage(format!("--{name}: {e}")))?;
    if m.is_singular() {
        return Err(usage(format!("--{name}: singular model {m}")));
    }
    Ok(m)
}

fn parse_triple(s: &str) -> Result<[ExactInt; 3], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(usage(format!("--triple expects a,b,c, got {s:?}")));
    };
    let num = |x: &str| x.parse::<ExactInt>().map_err(|_| usage(format!("--triple: bad integer {x:?}")));
    Ok([num(a)?, num(b)?, num(c)?])
}

/// Check every parameter, then run the command.
fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let bound = cli.factor_bound;
    if bound < 2 {
        return Err(usage("--factor-bound must be at least 2"));
    }
    let fmt = |default: Format| cli.format.map_or(default, Format::from);
    let parallel = |f: &(dyn Fn() -> Result<Output, Failure> + Sync)| -> Result<Output, Failure> {
        par::with_threads(cli.parallelism, f)?
    };

    match &cli.command {
        Command::Analyze { p, alpha, triple } => {
            odd_prime("p", *p)?;
            let [a, b, c] = parse_triple(triple)?;
            let report = frey::analyze(*p, *alpha, &a, &b, &c, bound)?;
            Ok(Output {
                flagged: report.is_anomalous(),
                text: render::analysis(&report, fmt(Format::Json)),
            })
        }
        Command::Denes(args) => {
            if let Some(p) = args.p {
                if p < 5 || !arith::is_prime_u64(p) {
                    return Err(usage(format!("--p must be a prime at least 5, got {p}")));
                }
            }
            if args.scan.is_some_and(|m| m > u32::MAX as u64) {
                return Err(usage("--scan bound too large"));
            }
            parallel(&|| {
                let reports = match (args.p, args.scan) {
                    (Some(p), _) => vec![denes::denes_criterion(p)?],
                    (None, Some(max)) => denes::denes_scan(max)?,
                    (None, None) => unreachable!("clap requires one of --p, --scan"),
                };
                Ok(Output {
                    flagged: false,
                    text: render::denes(&reports, fmt(Format::Json)),
                })
            })
        }
        Command::Search {
            p,
            alpha,
            base,
            height,
            allow_imprimitive,
        } => {
            odd_prime("p", *p)?;
            positive("height", *height)?;
            if !arith::is_prime_u64(*base) {
                return Err(usage(format!("--L must be prime, got {base}")));
            }
            let mut spec = search::SearchSpec::new(*p, *alpha, *height).with_base(*base);
            if *allow_imprimitive {
                spec = spec.allow_imprimitive();
            }
            parallel(&|| {
                let report = search::search_report(&spec)?;
                Ok(Output {
                    flagged: !report.conforms,
                    text: render::search(&report, fmt(Format::Json)),
                })
            })
        }
        Command::ApSearch {
            n,
            k,
            height,
            include_constant,
        } => {
            if *n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            if *k != 3 && *k != 4 {
                return Err(usage("--k must be 3 or 4"));
            }
            positive("height", *height)?;
            parallel(&|| {
                let report = search::ap_report(*n, *k, *height, !include_constant)?;
                Ok(Output {
                    flagged: !report.conforms,
                    text: render::ap(&report, fmt(Format::Json)),
                })
            })
        }
        Command::Verify {
            p_list,
            alpha_list,
            height,
        } => {
            for &p in p_list {
                odd_prime("p-list", p)?;
            }
            positive("height", *height)?;
            parallel(&|| {
                let report = search::verify_theorem_claims(p_list, alpha_list, *height)?;
                Ok(Output {
                    flagged: !report.all_conform,
                    text: render::verify(&report, fmt(Format::Json)),
                })
            })
        }
        Command::Traces { model, lmax } => {
            let m = parse_model("model", model)?;
            let table = traces::trace_table(&m, *lmax)?;
            Ok(Output {
                flagged: false,
                text: render::traces(&m, &table, fmt(Format::Csv)),
            })
        }
        Command::Congruence { model1, model2, p, lmax } => {
            let m1 = parse_model("model1", model1)?;
            let m2 = parse_model("model2", model2)?;
            if !arith::is_prime_u64(*p) {
                return Err(usage(format!("--p must be prime, got {p}")));
            }
            let report = traces::mod_p_congruent(&m1, &m2, *p, *lmax)?;
            Ok(Output {
                flagged: false,
                text: render::congruence(&report, fmt(Format::Json)),
            })
        }
        Command::Conductor { model } => {
            let m = parse_model("model", model)?;
            let report = tate::conductor_report(&m, bound)?;
            Ok(Output {
                flagged: false,
                text: render::conductor(&report, fmt(Format::Json)),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = std::time::Instant::now();
    let result = dispatch(&cli);
    if cli.verbose {
        eprintln!("freytool: {:?} finished in {:.3?}", cli.command, start.elapsed());
    }
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if out.flagged {
                eprintln!("freytool: counterexample candidate or anomaly found");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
