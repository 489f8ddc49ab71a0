//! Batch front door for the `involutions` library: enumerate avoidance
//! classes, expand joint enumerators, draw Monte Carlo samples, and run the
//! named verification suites.
//!
//! Every command is deterministic given its flags (plus `--seed` where one
//! applies): rerunning with the same arguments reproduces the output byte for
//! byte. Exit codes follow the usual triage — `0` all checks passed, `1` a
//! verification threshold failed, `2` the request itself was unusable
//! (bad flags, unknown names, or parameters outside the feasible caps).

use std::fmt;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use involutions::experiments::{self, ExperimentResult};
use involutions::perm::{fp_histogram, Pattern};
use involutions::series::{gf_av321, gf_iv123, gf_iv231, gf_iv321, gf_to_csv};
use involutions::stochastic::{sample_goe_alternating_sum, sample_iv231, RandomStream};
use involutions::tableaux::{scaled_alternating_sum, shape_distribution};

/// Seed used when a sampling command is run without `--seed`.
const DEFAULT_SEED: u64 = 1;

/// Environment variable consulted for the default `verify` output directory.
const OUT_DIR_ENV: &str = "INVFP_OUT_DIR";

/// RNG stream ids for the `sample` subcommand, one per sample kind, disjoint
/// from the streams the verification suites draw on.
const STREAM_SAMPLE_IV231: u64 = 101;
const STREAM_SAMPLE_GOE: u64 = 102;
const STREAM_SAMPLE_SHAPE: u64 = 103;

#[derive(Parser)]
#[command(
    name = "invfp",
    version,
    about = "Fixed-point statistics of pattern-avoiding involutions",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate an avoidance class and write its fixed-point histogram as CSV
    Enumerate {
        /// Pattern to avoid, as digits (e.g. 231)
        #[arg(long)]
        pattern: String,

        /// Size of the permutations to enumerate
        #[arg(long)]
        n: usize,

        /// Restrict the class to involutions
        #[arg(long)]
        involutions: bool,

        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Expand a joint enumerator and write its coefficients as CSV
    Gf {
        /// Which enumerator to expand
        #[arg(long, value_enum)]
        class: GfClass,

        /// Truncation order: rows n = 0..=order are emitted
        #[arg(long)]
        order: usize,

        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Draw Monte Carlo samples and write them as single-column CSV
    Sample {
        /// What to sample
        #[arg(long, value_enum)]
        what: SampleKind,

        /// Object size (required for iv231 and shape)
        #[arg(long)]
        n: Option<usize>,

        /// Row bound / matrix size (goe and shape; default 3)
        #[arg(long)]
        k: Option<usize>,

        /// Number of draws
        #[arg(long, default_value_t = 1000)]
        samples: usize,

        /// RNG seed
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,

        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Run a named verification suite and write its JSON summary
    Verify {
        /// Which suite to run
        #[arg(long, value_enum)]
        suite: Suite,

        /// Object size at the top of the suite's size ladder
        #[arg(long)]
        n: Option<usize>,

        /// Row bound / matrix size
        #[arg(long)]
        k: Option<usize>,

        /// Number of Monte Carlo draws per ladder step
        #[arg(long)]
        samples: Option<usize>,

        /// RNG seed
        #[arg(long)]
        seed: Option<u64>,

        /// Series truncation order
        #[arg(long)]
        order: Option<usize>,

        /// Gap bound for prop_gaps
        #[arg(long)]
        gap: Option<usize>,

        /// Final distance threshold, overriding the suite default
        #[arg(long)]
        threshold: Option<f64>,

        /// Directory for the JSON summary (default: $INVFP_OUT_DIR, else ".")
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Joint enumerators the `gf` subcommand can expand.
#[derive(Copy, Clone, Debug, ValueEnum)]
enum GfClass {
    /// 231-avoiding involutions
    Iv231,
    /// 321-avoiding involutions (equals the 132- and 213-avoiding series)
    Iv321,
    /// 123-avoiding involutions
    Iv123,
    /// 321-avoiding permutations
    Av321,
}

/// Sample kinds for the `sample` subcommand.
#[derive(Copy, Clone, Debug, ValueEnum)]
enum SampleKind {
    /// Fixed-point counts of uniform 231-avoiding involutions
    Iv231,
    /// Alternating spectral sums of trace-centered GOE draws
    Goe,
    /// Scaled alternating row sums of hook-weighted random shapes
    Shape,
}

/// The named verification suites.
///
/// Value names are part of the command-line contract, so they are pinned
/// explicitly rather than derived from the variant names.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Gaussian fixed-point fluctuations in 231-avoiding involutions
    #[value(name = "thm_t231")]
    ThmT231,
    /// Negative-binomial fixed-point limit in 321-avoiding permutations
    #[value(name = "thm_avn321")]
    ThmAvn321,
    /// Rayleigh fixed-point limit for two-row shapes
    #[value(name = "rayleigh_iv321")]
    RayleighIv321,
    /// GOE alternating-sum limit for bounded-row shapes
    #[value(name = "thm_t321")]
    ThmT321,
    /// Parity-law fixed-point limit for increasing-pattern avoiders
    #[value(name = "thm_increasefp")]
    ThmIncreasefp,
    /// Vanishing small-gap mass in bounded-row random shapes
    #[value(name = "prop_gaps")]
    PropGaps,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::ThmT231 => "thm_t231",
            Suite::ThmAvn321 => "thm_avn321",
            Suite::RayleighIv321 => "rayleigh_iv321",
            Suite::ThmT321 => "thm_t321",
            Suite::ThmIncreasefp => "thm_increasefp",
            Suite::PropGaps => "prop_gaps",
        };
        f.write_str(name)
    }
}

/// Errors that abort a command with exit code 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

/// Wraps any library error as a usage/feasibility failure.
fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Fully resolved parameters for one verification suite run: the defaults
/// table below filled in, then overridden by whatever flags were supplied.
#[derive(Debug, Clone)]
struct ExperimentSpec {
    suite: Suite,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    order: usize,
    gap: usize,
    threshold: f64,
    output_dir: PathBuf,
}

/// Optional flags a suite actually consumes; passing any other flag is a
/// usage error rather than a silent no-op.
fn applicable_flags(suite: Suite) -> &'static [&'static str] {
    match suite {
        Suite::ThmT231 => &["n", "samples", "seed", "threshold"],
        Suite::ThmAvn321 => &["order", "threshold"],
        Suite::RayleighIv321 => &["n", "threshold"],
        Suite::ThmT321 => &["n", "k", "samples", "seed", "threshold"],
        Suite::ThmIncreasefp => &["n", "k", "threshold"],
        Suite::PropGaps => &["n", "k", "gap"],
    }
}

#[allow(clippy::too_many_arguments)]
impl ExperimentSpec {
    /// Applies the per-suite defaults table and validates the overrides.
    ///
    /// All numeric parameters must be positive, and only flags the suite
    /// consumes may be passed. Unknown suites never reach this point — clap
    /// rejects them during parsing.
    fn resolve(
        suite: Suite,
        n: Option<usize>,
        k: Option<usize>,
        samples: Option<usize>,
        seed: Option<u64>,
        order: Option<usize>,
        gap: Option<usize>,
        threshold: Option<f64>,
        out_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let allowed = applicable_flags(suite);
        let supplied: &[(&str, bool)] = &[
            ("n", n.is_some()),
            ("k", k.is_some()),
            ("samples", samples.is_some()),
            ("seed", seed.is_some()),
            ("order", order.is_some()),
            ("gap", gap.is_some()),
            ("threshold", threshold.is_some()),
        ];
        for (name, present) in supplied {
            if *present && !allowed.contains(name) {
                return Err(CliError::Usage(format!(
                    "--{name} does not apply to suite {suite}"
                )));
            }
        }
        for (name, value) in [
            ("n", n),
            ("k", k),
            ("samples", samples),
            ("order", order),
            ("gap", gap),
        ] {
            if value == Some(0) {
                return Err(CliError::Usage(format!("--{name} must be positive")));
            }
        }
        if seed == Some(0) {
            return Err(CliError::Usage("--seed must be positive".into()));
        }
        if let Some(t) = threshold {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage("--threshold must be positive".into()));
            }
        }

        // The defaults table: one row per suite, mirroring the library's
        // pinned experiment constants.
        use experiments as ex;
        let (dn, dk, dsamples, dorder, dthreshold) = match suite {
            Suite::ThmT231 => (
                ex::CLT231_DEFAULT_N,
                1,
                ex::CLT231_DEFAULT_SAMPLES,
                1,
                ex::CLT231_KS_THRESHOLD,
            ),
            Suite::ThmAvn321 => (1, 1, 1, ex::NEGBIN_DEFAULT_ORDER, ex::NEGBIN_TV_THRESHOLD),
            Suite::RayleighIv321 => (
                ex::RAYLEIGH_DEFAULT_N,
                2,
                1,
                1,
                ex::RAYLEIGH_KS_THRESHOLD,
            ),
            Suite::ThmT321 => (
                ex::GOE_DEFAULT_N,
                ex::GOE_DEFAULT_K,
                ex::GOE_DEFAULT_SAMPLES,
                1,
                ex::GOE_KS_THRESHOLD,
            ),
            Suite::ThmIncreasefp => (
                ex::INCREASING_DEFAULT_N,
                ex::INCREASING_DEFAULT_K,
                1,
                1,
                ex::INCREASING_TV_THRESHOLD,
            ),
            Suite::PropGaps => (ex::GAP_DEFAULT_N, ex::GAP_DEFAULT_K, 1, 1, 1.0),
        };

        let output_dir = out_dir
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));

        Ok(ExperimentSpec {
            suite,
            n: n.unwrap_or(dn),
            k: k.unwrap_or(dk),
            samples: samples.unwrap_or(dsamples),
            seed: seed.unwrap_or(DEFAULT_SEED),
            order: order.unwrap_or(dorder),
            gap: gap.unwrap_or(experiments::GAP_DEFAULT_GAP),
            threshold: threshold.unwrap_or(dthreshold),
            output_dir,
        })
    }

    /// Runs the suite with the resolved parameters.
    fn run(&self) -> Result<Vec<ExperimentResult>, CliError> {
        let results = match self.suite {
            Suite::ThmT231 => {
                experiments::clt_231_suite(self.n, self.samples, self.seed, self.threshold)
            }
            Suite::ThmAvn321 => experiments::negbin_321_suite(self.order, self.threshold),
            Suite::RayleighIv321 => experiments::rayleigh_k2_suite(self.n, self.threshold),
            Suite::ThmT321 => {
                experiments::goe_suite(self.n, self.k, self.samples, self.seed, self.threshold)
            }
            Suite::ThmIncreasefp => {
                experiments::increasing_fp_suite(self.n, self.k, self.threshold)
            }
            Suite::PropGaps => experiments::gap_suite(self.n, self.k, self.gap),
        };
        results.map_err(usage)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs one subcommand; `Ok(false)` means a verification threshold failed.
fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Enumerate {
            pattern,
            n,
            involutions,
            out,
        } => {
            let pat = Pattern::from_digits(&pattern).map_err(usage)?;
            let hist = fp_histogram(n, &pat, involutions).map_err(usage)?;
            emit(out.as_deref(), &hist.to_csv())?;
            Ok(true)
        }
        Command::Gf { class, order, out } => {
            let gf = match class {
                GfClass::Iv231 => gf_iv231(order),
                GfClass::Iv321 => gf_iv321(order),
                GfClass::Iv123 => gf_iv123(order),
                GfClass::Av321 => gf_av321(order),
            };
            emit(out.as_deref(), &gf_to_csv(&gf))?;
            Ok(true)
        }
        Command::Sample {
            what,
            n,
            k,
            samples,
            seed,
            out,
        } => {
            let csv = run_sample(what, n, k, samples, seed)?;
            emit(out.as_deref(), &csv)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            n,
            k,
            samples,
            seed,
            order,
            gap,
            threshold,
            out_dir,
        } => {
            let spec =
                ExperimentSpec::resolve(suite, n, k, samples, seed, order, gap, threshold, out_dir)?;
            run_verify(&spec)
        }
    }
}

/// Draws `samples` values and renders them as single-column CSV.
fn run_sample(
    what: SampleKind,
    n: Option<usize>,
    k: Option<usize>,
    samples: usize,
    seed: u64,
) -> Result<String, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let require_n = |n: Option<usize>, kind: &str| {
        match n {
            Some(0) => Err(CliError::Usage("--n must be positive".into())),
            Some(v) => Ok(v),
            None => Err(CliError::Usage(format!("--n is required for --what {kind}"))),
        }
    };
    let mut csv = String::from("value\n");
    match what {
        SampleKind::Iv231 => {
            let n = require_n(n, "iv231")?;
            let mut rng = RandomStream::new(seed, STREAM_SAMPLE_IV231);
            for _ in 0..samples {
                let fp = sample_iv231(n, &mut rng);
                csv.push_str(&format!("{fp}\n"));
            }
        }
        SampleKind::Goe => {
            let k = k.unwrap_or(experiments::GOE_DEFAULT_K);
            let mut rng = RandomStream::new(seed, STREAM_SAMPLE_GOE);
            for _ in 0..samples {
                let v = sample_goe_alternating_sum(k, &mut rng).map_err(usage)?;
                csv.push_str(&format!("{v}\n"));
            }
        }
        SampleKind::Shape => {
            let n = require_n(n, "shape")?;
            let k = k.unwrap_or(experiments::GOE_DEFAULT_K);
            let dist = shape_distribution(n, k).map_err(usage)?;
            let stats = dist
                .shapes()
                .iter()
                .map(|s| scaled_alternating_sum(s, n, k))
                .collect::<Result<Vec<f64>, _>>()
                .map_err(usage)?;
            let sampler = dist.sampler();
            let mut rng = RandomStream::new(seed, STREAM_SAMPLE_SHAPE);
            for _ in 0..samples {
                let v = stats[sampler.sample(&mut rng)];
                csv.push_str(&format!("{v}\n"));
            }
        }
    }
    Ok(csv)
}

/// Runs a resolved suite, writes `{out_dir}/{suite}.json`, and prints one
/// summary line per ladder step. Returns whether every step passed.
fn run_verify(spec: &ExperimentSpec) -> Result<bool, CliError> {
    let results = spec.run()?;
    let json = serde_json::to_string_pretty(&results)
        .expect("experiment results serialize infallibly");

    fs::create_dir_all(&spec.output_dir)?;
    let path = spec.output_dir.join(format!("{}.json", spec.suite));
    fs::write(&path, format!("{json}\n"))?;

    let mut stdout = io::stdout().lock();
    for r in &results {
        writeln!(stdout, "{}", r.summary_line())?;
    }
    eprintln!("wrote {}", path.display());
    Ok(results.iter().all(|r| r.pass))
}

/// Writes `content` to `out`, or to stdout when no file was requested.
fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)?;
                }
            }
            fs::write(path, content)?;
        }
        None => io::stdout().lock().write_all(content.as_bytes())?,
    }
    Ok(())
}
