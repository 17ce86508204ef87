//! Command line interface: decide twisted conjugacy, enumerate class
//! representatives, compute Reidemeister numbers, and cross-check the
//! algorithms against brute force on finite groups.
//!
//! Exit codes: 0 a result was computed (including "not conjugate" and
//! "infinite"), 1 verification found a mismatch, 2 the input is invalid,
//! 3 a precondition failed (infinite coincidence group, or an
//! enumeration larger than --max-enum).

mod problem;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use problem::ProblemFile;
use twistconj::{
    compare_with_brute_force, reidemeister_number_with, rep_twist_conj_with,
    reps_reid_classes_with, AbelianError, EndoPair, FiniteGroupTable, Limits, PcpElement,
    PcpPresentation, ReidemeisterNumber, ReidemeisterResult, TwistError, TwistedResult,
};

#[derive(Parser)]
#[command(name = "twistconj", version, about = "Twisted conjugacy in polycyclic groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether g1 and g2 are twisted conjugate under (phi, psi)
    Conj {
        /// Problem file (JSON)
        file: PathBuf,
        /// Endomorphism name; `id` is always available
        phi: String,
        /// Endomorphism name; `id` is always available
        psi: String,
        /// Element: a name from the file, `id`, or a word like g1^2*g3^-1
        g1: String,
        /// Element: a name from the file, `id`, or a word like g1^2*g3^-1
        g2: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List one representative per twisted conjugacy class of (phi, psi)
    Classes {
        file: PathBuf,
        phi: String,
        psi: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the Reidemeister number of (phi, psi)
    Number {
        file: PathBuf,
        phi: String,
        psi: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Cross-check the algorithms against brute force (finite groups only)
    Verify {
        file: PathBuf,
        /// Random conjugacy decisions to check per endomorphism pair
        #[arg(long, default_value_t = 25)]
        trials: usize,
        /// Seed for the random decisions
        #[arg(long, default_value_t = 0x7415c0de)]
        seed: u64,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(clap::Args)]
struct CommonOpts {
    /// Emit machine-readable JSON on stdout
    #[arg(long)]
    json: bool,
    /// Trust the endomorphism images instead of checking the relations
    /// (presentation consistency is always checked)
    #[arg(long)]
    skip_hom_check: bool,
    /// Refuse any enumeration of more than this many elements (exit 3)
    #[arg(long)]
    max_enum: Option<usize>,
}

/// A failed run, carrying the process exit code.
enum Failure {
    Mismatch(String),
    Input(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

fn input<T>(msg: String) -> Result<T, Failure> {
    Err(Failure::Input(msg))
}

fn from_twist(e: TwistError) -> Failure {
    match &e {
        TwistError::InfiniteCoincidence { .. } => Failure::Precondition(e.to_string()),
        TwistError::Abelian(AbelianError::EnumerationTooLarge { .. }) => {
            Failure::Precondition(e.to_string())
        }
        _ => Failure::Input(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Conj {
            file,
            phi,
            psi,
            g1,
            g2,
            opts,
        } => {
            let (problem, group) = load(&file)?;
            let pair = pair(&problem, &group, &phi, &psi, &opts)?;
            let e1 = problem.element(&group, &g1).or_else(input)?;
            let e2 = problem.element(&group, &g2).or_else(input)?;
            let res =
                rep_twist_conj_with(&pair, &e1, &e2, &limits(&opts)).map_err(from_twist)?;
            match res {
                TwistedResult::Witness(h) => {
                    if opts.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "conjugate": true,
                                "witness": element_json(&h)?,
                            })
                        );
                    } else {
                        println!("twisted conjugate");
                        println!("witness: {h}");
                    }
                }
                TwistedResult::NotConjugate => {
                    if opts.json {
                        println!("{}", serde_json::json!({ "conjugate": false }));
                    } else {
                        println!("not twisted conjugate");
                    }
                }
            }
            Ok(())
        }
        Cmd::Classes { file, phi, psi, opts } => {
            let (problem, group) = load(&file)?;
            let pair = pair(&problem, &group, &phi, &psi, &opts)?;
            let res = reps_reid_classes_with(&pair, &limits(&opts)).map_err(from_twist)?;
            match res {
                ReidemeisterResult::Finite(reps) => {
                    if opts.json {
                        let rep_values: Result<Vec<_>, Failure> =
                            reps.iter().map(element_json).collect();
                        println!(
                            "{}",
                            serde_json::json!({
                                "finite": true,
                                "count": reps.len(),
                                "representatives": rep_values?,
                            })
                        );
                    } else {
                        println!("{} classes", reps.len());
                        for (i, r) in reps.iter().enumerate() {
                            println!("{}: {r}", i + 1);
                        }
                    }
                }
                ReidemeisterResult::Infinite => {
                    if opts.json {
                        println!("{}", serde_json::json!({ "finite": false }));
                    } else {
                        println!("infinitely many classes");
                    }
                }
            }
            Ok(())
        }
        Cmd::Number { file, phi, psi, opts } => {
            let (problem, group) = load(&file)?;
            let pair = pair(&problem, &group, &phi, &psi, &opts)?;
            let res = reidemeister_number_with(&pair, &limits(&opts)).map_err(from_twist)?;
            match res {
                ReidemeisterNumber::Finite(n) => {
                    if opts.json {
                        println!("{}", serde_json::json!({ "finite": true, "number": n }));
                    } else {
                        println!("{n}");
                    }
                }
                ReidemeisterNumber::Infinite => {
                    if opts.json {
                        println!("{}", serde_json::json!({ "finite": false }));
                    } else {
                        println!("infinite");
                    }
                }
            }
            Ok(())
        }
        Cmd::Verify {
            file,
            trials,
            seed,
            opts,
        } => {
            let (problem, group) = load(&file)?;
            if group.order().is_none() {
                return input(
                    "the group is infinite; verification enumerates the whole group".into(),
                );
            }
            let cap = opts.max_enum.unwrap_or(5000);
            let table = FiniteGroupTable::new(&group, Some(cap)).ok_or_else(|| {
                Failure::Precondition(format!("the group has more than {cap} elements"))
            })?;
            let mut names: Vec<String> = vec!["id".to_string()];
            names.extend(problem.endomorphisms.keys().cloned());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pairs = 0usize;
            for a in &names {
                for b in &names {
                    let p = pair_named(&problem, &group, a, b, &opts)?;
                    compare_with_brute_force(&table, &p, &mut rng, trials)
                        .map_err(|m| Failure::Mismatch(format!("pair ({a}, {b}): {m}")))?;
                    pairs += 1;
                    if !opts.json {
                        println!("pair ({a}, {b}): ok ({trials} decisions)");
                    }
                }
            }
            if opts.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "order": table.elements().len(),
                        "pairs": pairs,
                        "trials": trials,
                        "ok": true,
                    })
                );
            } else {
                println!(
                    "verified {pairs} pairs on a group of order {}, no mismatches",
                    table.elements().len()
                );
            }
            Ok(())
        }
    }
}

fn load(file: &Path) -> Result<(ProblemFile, Arc<PcpPresentation>), Failure> {
    let problem = ProblemFile::load(file).or_else(input)?;
    let group = problem.build_group().or_else(input)?;
    Ok((problem, group))
}

fn limits(opts: &CommonOpts) -> Limits {
    Limits {
        max_enum: opts.max_enum,
    }
}

fn pair(
    problem: &ProblemFile,
    group: &Arc<PcpPresentation>,
    phi: &str,
    psi: &str,
    opts: &CommonOpts,
) -> Result<EndoPair, Failure> {
    pair_named(problem, group, phi, psi, opts)
}

fn pair_named(
    problem: &ProblemFile,
    group: &Arc<PcpPresentation>,
    phi: &str,
    psi: &str,
    opts: &CommonOpts,
) -> Result<EndoPair, Failure> {
    let phi = problem
        .endomorphism(group, phi, !opts.skip_hom_check)
        .or_else(input)?;
    let psi = problem
        .endomorphism(group, psi, !opts.skip_hom_check)
        .or_else(input)?;
    EndoPair::new(phi, psi).map_err(|e| Failure::Input(e.to_string()))
}

/// An element as JSON: its normal-form word (1-based generators) and a
/// printable form.
fn element_json(x: &PcpElement) -> Result<serde_json::Value, Failure> {
    let mut word = Vec::new();
    for (g, e) in x.to_word() {
        let e = e.to_i64().ok_or_else(|| {
            Failure::Precondition("an exponent exceeds the 64-bit output range".into())
        })?;
        word.push(serde_json::json!([g + 1, e]));
    }
    Ok(serde_json::json!({
        "word": word,
        "display": x.to_string(),
    }))
}
