//! The `qorbit` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catcher::{bite, run_catch_traced, StepReport};
use crate::exactnum::{enumerate_rationals, QuadPoint, Rational};
use crate::orbitals::{are_conjugate, conjugator_bounded, is_good, signature};
use crate::pmaut::PMAut;
use crate::sampler::{
    christensen_sequence, cut_random_aut, describe, not_in_b_witness, phi_sample, random_pm, RandomParams,
};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "qorbit", version, about = "Orbits, conjugacy and back-and-forth constructions in Aut(Q,<)")]
struct Cli {
    /// Seed for every randomised command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the orbital signature.
    Signature { file: PathBuf },
    /// Print GOOD or the reason the automorphism is not good.
    Good { file: PathBuf },
    /// Print CONJUGATE or NOT_CONJUGATE.
    Conjugate { f: PathBuf, g: PathBuf },
    /// Search for a partial conjugator by back-and-forth.
    Conjugator {
        f: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Run the catcher construction for a fixed-point-free target.
    Catch {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        family: Vec<PathBuf>,
        #[arg(long, default_value_t = 20)]
        stages: u64,
        /// One step report per line.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        emit_g: Option<PathBuf>,
    },
    /// Run the catcher interval by interval between rational fixed points.
    Bite {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        family: Vec<PathBuf>,
        #[arg(long, default_value_t = 15)]
        stages: u64,
        #[arg(long)]
        emit_g: Option<PathBuf>,
    },
    /// Draw random automorphisms.
    Sample {
        #[arg(long, value_enum, default_value_t = Strategy::Pm)]
        strategy: Strategy,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// CSV with columns seed, fixed_count, orbital_word, good, in_B.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Certificates that quotients of cut-preserving maps are not in B.
    WitnessNull {
        #[arg(long, default_value = "sqrt2-1")]
        cut: String,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true)]
        window: Option<Vec<String>>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Print r_1, …, r_n.
    EnumRationals { n: u64 },
    /// One-line statistics of an automorphism.
    Describe { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Pm,
    Christensen,
    Cut,
}

/// A failed run: exit code and message for the diagnostic stream.
struct Failure(i32, String);

fn validation(msg: impl ToString) -> Failure {
    Failure(EXIT_VALIDATION, msg.to_string())
}

fn read_aut(path: &Path) -> Result<PMAut, Failure> {
    let text = fs::read_to_string(path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    PMAut::from_json(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn trace_enabled() -> bool {
    std::env::var("QORBIT_TRACE").is_ok_and(|v| v == "1")
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(|e| Failure(EXIT_USAGE, format!("{s}: {e}")))
}

fn run(cli: Cli, err: &mut dyn Write) -> Result<String, Failure> {
    let seed = cli.seed;
    Ok(match cli.command {
        Command::Signature { file } => format!("{}\n", signature(&read_aut(&file)?)),
        Command::Good { file } => format!("{}\n", is_good(&read_aut(&file)?)),
        Command::Conjugate { f, g } => {
            let yes = are_conjugate(&read_aut(&f)?, &read_aut(&g)?);
            if yes { "CONJUGATE\n" } else { "NOT_CONJUGATE\n" }.to_string()
        }
        Command::Conjugator { f, g, depth } => {
            format!("{}\n", conjugator_bounded(&read_aut(&f)?, &read_aut(&g)?, depth))
        }
        Command::Catch { target, family, stages, trace, emit_g } => {
            let f = read_aut(&target)?;
            let ks = family.iter().map(|p| read_aut(p)).collect::<Result<Vec<_>, _>>()?;
            let mut lines = String::new();
            let to_stderr = trace_enabled();
            let (g, report) = run_catch_traced(&f, &ks, stages, |rep: &StepReport| {
                let line = serde_json::to_string(rep).expect("serialisable");
                if trace.is_some() {
                    lines.push_str(&line);
                    lines.push('\n');
                }
                if to_stderr {
                    let _ = writeln!(err, "{line}");
                }
            })
            .map_err(validation)?;
            if let Some(path) = trace {
                write_file(&path, &lines)?;
            }
            if let Some(path) = emit_g {
                write_file(&path, &g.to_json())?;
            }
            json(&report)
        }
        Command::Bite { target, family, stages, emit_g } => {
            let f = read_aut(&target)?;
            let ks = family.iter().map(|p| read_aut(p)).collect::<Result<Vec<_>, _>>()?;
            let (g, report) = bite(&f, &ks, stages).map_err(validation)?;
            if trace_enabled() {
                for iv in &report.intervals {
                    let _ = writeln!(err, "{}", serde_json::to_string(&iv.catch).expect("serialisable"));
                }
            }
            if let Some(path) = emit_g {
                write_file(&path, &g.to_json())?;
            }
            json(&report)
        }
        Command::Sample { strategy, count, stats } => sample(strategy, seed, count, stats)?,
        Command::WitnessNull { cut, window, trials, budget } => {
            let cut: QuadPoint = cut.parse().map_err(|e| Failure(EXIT_USAGE, format!("--cut: {e}")))?;
            let (p, q) = match window {
                Some(w) => (parse_rational(&w[0])?, parse_rational(&w[1])?),
                None => (Rational::zero(), Rational::one()),
            };
            let mut out = String::new();
            for t in 0..trials {
                let a = seed.wrapping_add(2 * t);
                let mut f = cut_random_aut(a, cut.clone(), p.clone(), q.clone()).map_err(validation)?;
                let mut g = cut_random_aut(a + 1, cut.clone(), p.clone(), q.clone()).map_err(validation)?;
                let cert = not_in_b_witness(&mut f, &mut g, budget).map_err(validation)?;
                out.push_str(&format!("trial={t} {cert}\n"));
            }
            out
        }
        Command::EnumRationals { n } => {
            let terms: Vec<String> = (1..=n).map(|i| enumerate_rationals(i).to_string()).collect();
            terms.join(" ") + "\n"
        }
        Command::Describe { file } => format!("{}\n", describe(&read_aut(&file)?)),
    })
}

fn sample(strategy: Strategy, seed: u64, count: u64, stats: Option<PathBuf>) -> Result<String, Failure> {
    let mut out = String::new();
    let mut rows: Vec<(u64, PMAut)> = Vec::new();
    match strategy {
        Strategy::Pm => {
            for i in 0..count {
                rows.push((seed + i, random_pm(seed + i, &RandomParams::default())));
            }
        }
        Strategy::Christensen => {
            let seq = christensen_sequence(4, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..count {
                let bits: Vec<bool> = (0..seq.len()).map(|_| rng.random_bool(0.5)).collect();
                rows.push((seed + i, phi_sample(&seq, &bits)));
            }
        }
        Strategy::Cut => {
            if stats.is_some() {
                return Err(Failure(EXIT_USAGE, "--stats is not available for the cut strategy".into()));
            }
            let cut = QuadPoint::new(Rational::from(-1), Rational::one(), 2);
            for i in 0..count {
                let mut f = cut_random_aut(seed + i, cut.clone(), Rational::zero(), Rational::one())
                    .expect("default window contains the cut");
                let pairs: Vec<String> = (1..=8)
                    .map(|j| {
                        let r = enumerate_rationals(j);
                        format!("{r}->{}", f.eval(&r))
                    })
                    .collect();
                out.push_str(&format!("seed={} {}\n", seed + i, pairs.join(" ")));
            }
            return Ok(out);
        }
    }
    let mut csv_out = stats
        .as_ref()
        .map(|_| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv_out.as_mut() {
        w.write_record(["seed", "fixed_count", "orbital_word", "good", "in_B"]).map_err(validation)?;
    }
    for (s, f) in &rows {
        let d = describe(f);
        out.push_str(&format!("seed={s} {d}\n"));
        if let Some(w) = csv_out.as_mut() {
            w.write_record([
                s.to_string(),
                d.fixed_count_str(),
                d.orbital_word.clone(),
                d.good.to_string(),
                d.in_b.to_string(),
            ])
            .map_err(validation)?;
        }
    }
    if let (Some(path), Some(w)) = (stats, csv_out) {
        let bytes = w.into_inner().map_err(|e| validation(e.to_string()))?;
        fs::write(&path, bytes).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 on success, 2 on invalid input, 64 on usage errors.
pub fn dispatch<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let output = cli.output.clone();
    match run(cli, err) {
        Ok(text) => match output {
            Some(path) => match fs::write(&path, text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", path.display());
                    EXIT_VALIDATION
                }
            },
            None => {
                let _ = out.write_all(text.as_bytes());
                0
            }
        },
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}
