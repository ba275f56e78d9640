mod error;
mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use ballgroup::ball_numeric::{boundary_profile_csv, compute_r0, volume_fs};
use ballgroup::lattice::{gamma_alphabet, Constants, Mat3, ProjUnitary};
use ballgroup::orbit_search::{reduce_to_word, GroupBall, KGroup};
use ballgroup::subgroup_pi::verify_quotient;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::report::{ConfigEcho, Envelope, Run, SCHEMA};

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "PU21_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "ballgroup",
    version,
    about = "Verify the lattice, its presentation and the subgroup Pi"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 20240607)]
    seed: u64,
    /// Monte-Carlo samples for the volume estimate.
    #[arg(long, global = true, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Tolerance for the numeric r0 comparison.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive_f64)]
    tolerance: f64,
    /// Corner seeds per branch for the r0 search.
    #[arg(long, global = true, default_value_t = 25)]
    r0_resolution: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every verification and aggregate the reports.
    VerifyAll,
    /// Enumerate K and S with their strata and double cosets.
    BuildS,
    /// Check the closure conditions and the minimal displacement.
    Theorem21,
    /// Check the presentation relators.
    Presentation {
        /// Also extract and certify the triple relations on S.
        #[arg(long)]
        triples: bool,
        /// Write the triple presentation, one relator per line.
        #[arg(long, requires = "triples")]
        export: Option<PathBuf>,
    },
    /// Check the reduction to PU(3, F9).
    Quotient,
    /// Check index, torsion-freeness and fixed points of Pi.
    Pi {
        /// List the 864 transversal elements.
        #[arg(long)]
        transversal: bool,
        /// Skip building S, and with it the stabilizer scan.
        #[arg(long)]
        no_ball: bool,
    },
    /// Estimate the covolume by Monte Carlo.
    Volume,
    /// Compute the circumradius of the domain about 0.
    R0 {
        /// Points in the CSV boundary profile.
        #[arg(long, default_value_t = 360)]
        profile_samples: usize,
    },
    /// Write an element of the lattice as a word in b, u, v.
    Reduce {
        /// A word such as "b u -1 b", or 36 integers: nine entries, four
        /// coefficients each, row by row.
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        input: Vec<String>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{WORKERS_ENV} must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

struct Output {
    passed: bool,
    text: String,
}

fn json<T: Serialize>(
    command: &'static str,
    cfg: &ConfigEcho,
    passed: bool,
    body: T,
    run: Run,
) -> Result<Output, CliError> {
    let env = Envelope {
        schema: SCHEMA,
        command,
        config: cfg.clone(),
        passed,
        body,
        run,
    };
    Ok(Output {
        passed,
        text: serde_json::to_string_pretty(&env)? + "\n",
    })
}

fn json_only(format: Format, command: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{command} has no CSV output")));
    }
    Ok(())
}

fn parse_reduce_input(input: &[String]) -> Result<(String, ProjUnitary), CliError> {
    let ints: Option<Vec<i64>> = input
        .iter()
        .flat_map(|s| s.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect();
    match ints {
        Some(v) if v.len() == 36 => {
            let e: [[[i64; 4]; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|j| std::array::from_fn(|t| v[12 * i + 4 * j + t]))
            });
            Ok(("matrix".into(), ProjUnitary::canonical(Mat3::from_i64s(e))?))
        }
        Some(v) => Err(CliError::Input(format!(
            "expected 36 integers, got {}",
            v.len()
        ))),
        None => Ok(("word".into(), Constants::get().word(&input.join(" "))?)),
    }
}

#[derive(Serialize)]
struct ReduceReport {
    input_kind: String,
    input: String,
    word: String,
    word_length: u64,
    verified: bool,
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cfg = ConfigEcho {
        seed: cli.seed,
        samples: cli.samples,
        tolerance: cli.tolerance,
        r0_resolution: cli.r0_resolution,
    };
    let mut run = Run::new();
    match &cli.command {
        Command::VerifyAll => {
            json_only(cli.format, "verify-all")?;
            let rep = report::verify_all(&cfg, &mut run);
            if let Some(name) = &rep.first_failure {
                eprintln!("first failing check: {name}");
            }
            json("verify-all", &cfg, rep.passed(), rep, run)
        }
        Command::BuildS => {
            let k = run.time("enumerate_k", KGroup::enumerate)?;
            let s = run.time("build_s", || GroupBall::build(&k));
            let rep = report::ball_report(&k, &s);
            if cli.format == Format::Csv {
                let mut text = String::from("a,b,norm,count\n");
                for r in &rep.strata {
                    let _ = writeln!(
                        text,
                        "{},{},{},{}",
                        r.norm.a,
                        r.norm.b,
                        r.norm.to_f64(),
                        r.count
                    );
                }
                return Ok(Output {
                    passed: rep.passed(),
                    text,
                });
            }
            json("build-s", &cfg, rep.passed(), rep, run)
        }
        Command::Theorem21 => {
            json_only(cli.format, "theorem21")?;
            let k = run.time("enumerate_k", KGroup::enumerate)?;
            let s = run.time("build_s", || GroupBall::build(&k));
            let rep = run.time("theorem21", || report::closure_report(&k, &s, cli.seed))?;
            json("theorem21", &cfg, rep.passed(), rep, run)
        }
        Command::Presentation { triples, export } => {
            json_only(cli.format, "presentation")?;
            let k = run.time("enumerate_k", KGroup::enumerate)?;
            let s = triples.then(|| run.time("build_s", || GroupBall::build(&k)));
            let rep = run.time("presentation", || {
                report::presentation_report(&k, s.as_ref(), cli.seed, export.as_deref())
            })?;
            json("presentation", &cfg, rep.passed(), rep, run)
        }
        Command::Quotient => {
            json_only(cli.format, "quotient")?;
            let rep = run.time("quotient", verify_quotient)?;
            json("quotient", &cfg, rep.passed(), rep, run)
        }
        Command::Pi {
            transversal,
            no_ball,
        } => {
            json_only(cli.format, "pi")?;
            let k = run.time("enumerate_k", KGroup::enumerate)?;
            let s = (!no_ball).then(|| run.time("build_s", || GroupBall::build(&k)));
            let q = run.time("quotient", verify_quotient)?;
            let rep = run.time("pi", || report::pi_report(&k, s.as_ref(), &q, *transversal))?;
            json("pi", &cfg, rep.passed(), rep, run)
        }
        Command::Volume => {
            let v = run.time("volume", || volume_fs(cli.samples, cli.seed))?;
            let passed = report::volume_passed(&v);
            if cli.format == Format::Csv {
                let text = format!(
                    "samples,seed,hits,fs_volume,covolume,std_error,relative_error\n{},{},{},{},{},{},{}\n",
                    v.samples, v.seed, v.hits, v.fs_volume, v.estimate, v.std_error, v.relative_error
                );
                return Ok(Output { passed, text });
            }
            json("volume", &cfg, passed, v, run)
        }
        Command::R0 { profile_samples } => {
            let r = run.time("r0", || compute_r0(cli.r0_resolution, cli.seed))?;
            let passed = report::r0_passed(&r, cli.tolerance);
            if cli.format == Format::Csv {
                return Ok(Output {
                    passed,
                    text: boundary_profile_csv(&r.maximizer, (*profile_samples).max(1)),
                });
            }
            json("r0", &cfg, passed, r, run)
        }
        Command::Reduce { input } => {
            json_only(cli.format, "reduce")?;
            let (kind, g) = parse_reduce_input(input)?;
            let k = run.time("enumerate_k", KGroup::enumerate)?;
            let w = run.time("reduce", || reduce_to_word(&g, &k))?;
            let verified = Constants::get().eval(&w) == g;
            let rep = ReduceReport {
                input_kind: kind,
                input: input.join(" "),
                word: w.display(gamma_alphabet()).to_string(),
                word_length: w.length(),
                verified,
            };
            json("reduce", &cfg, verified, rep, run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers()
        .and_then(|()| execute(&cli))
        .and_then(|out| {
            match &cli.output {
                Some(path) => std::fs::write(path, &out.text)?,
                None => print!("{}", out.text),
            }
            Ok(out.passed)
        });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
