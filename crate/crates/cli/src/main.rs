use std::path::PathBuf;
use std::process::ExitCode;

use blockmorita_cli::expect::{error_exit_code, EXIT_OK, EXIT_USAGE};
use blockmorita_cli::{exit_code, Cache, Expect, JobContext, JobRegistry, Manifest};
use blockmorita_core::rng::DEFAULT_SEED;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "blockmorita",
    version,
    about = "Principal 2-blocks with quaternion defect: cohomology, Scott modules and Morita checks"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "BLOCKMORITA_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Field GF(2^e) to work over, where the command allows a choice.
    #[arg(long = "field-e", global = true)]
    field_e: Option<u32>,
    /// Cache directory.
    #[arg(long, global = true, env = "BLOCKMORITA_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long = "no-cache", global = true)]
    no_cache: bool,
    /// Exit with status 1 unless the verdict matches.
    #[arg(long, global = true)]
    expect: Option<Expect>,
    /// Compact JSON instead of pretty-printed.
    #[arg(long, global = true)]
    compact: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of H^2(G, C2), optionally with the extension table.
    H2 {
        #[arg(long)]
        group: String,
        #[arg(long)]
        classify: bool,
        /// Also report restriction to a Sylow 2-subgroup.
        #[arg(long)]
        restrict_to_sylow: bool,
    },
    /// Central extensions of the dihedral group of order 2^(n-1) by C2.
    ClassifyExtensions {
        #[arg(long)]
        n: u32,
    },
    /// Blocks of kG and the dimensions of their regular components.
    Blocks {
        #[arg(long)]
        group: String,
    },
    /// Group structure: centre, odd core, Sylow 2-subgroup.
    Structure {
        #[arg(long)]
        group: String,
    },
    /// The Scott module Sc(G, H).
    Scott {
        #[arg(long)]
        group: String,
        /// whole, trivial, sylow, center, derived, diag, or a catalog name.
        #[arg(long)]
        subgroup: String,
    },
    /// Morita check of Sc(G x H, Delta P).
    VerifyMorita {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Also run the tensor-product oracle.
        #[arg(long)]
        oracle: bool,
        /// Also check Brauer indecomposability.
        #[arg(long)]
        brauer: bool,
    },
    /// Morita verdicts for the groups and for their central quotients.
    VerifyLifting {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Reduction to the dihedral list and the Morita check against a representative.
    VerifyTheorem {
        #[arg(long)]
        group: String,
        #[arg(long)]
        representative: String,
    },
    /// Runs a manifest of jobs.
    RunManifest {
        manifest: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Include jobs marked slow.
        #[arg(long)]
        slow: bool,
        /// Only jobs of this acceptance criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

impl Command {
    fn job(&self) -> Option<(&'static str, Value)> {
        Some(match self {
            Command::H2 {
                group,
                classify,
                restrict_to_sylow,
            } => (
                "h2",
                json!({ "group": group, "classify": classify, "restrictToSylow": restrict_to_sylow }),
            ),
            Command::ClassifyExtensions { n } => ("classify-extensions", json!({ "n": n })),
            Command::Blocks { group } => ("blocks", json!({ "group": group })),
            Command::Structure { group } => ("structure", json!({ "group": group })),
            Command::Scott { group, subgroup } => {
                ("scott", json!({ "group": group, "subgroup": subgroup }))
            }
            Command::VerifyMorita {
                left,
                right,
                oracle,
                brauer,
            } => (
                "verify-morita",
                json!({ "left": left, "right": right, "oracle": oracle, "brauer": brauer }),
            ),
            Command::VerifyLifting { left, right } => {
                ("verify-lifting", json!({ "left": left, "right": right }))
            }
            Command::VerifyTheorem {
                group,
                representative,
            } => (
                "verify-theorem",
                json!({ "group": group, "representative": representative }),
            ),
            Command::RunManifest { .. } => return None,
        })
    }
}

fn print_json(v: &impl serde::Serialize, compact: bool) {
    let s = if compact {
        serde_json::to_string(v)
    } else {
        serde_json::to_string_pretty(v)
    };
    println!("{}", s.expect("reports serialise"));
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let c = &cli.common;
    let cache = if c.no_cache {
        Cache::disabled()
    } else {
        c.cache_dir
            .clone()
            .map(Cache::at)
            .unwrap_or_else(Cache::from_env)
    };
    let ctx = JobContext {
        seed: c.seed,
        field_e: c.field_e,
        cache,
    };
    let registry = JobRegistry::default();
    let code = match (&cli.command, cli.command.job()) {
        (_, Some((kind, params))) => {
            let outcome = registry.run(kind, &params, &ctx);
            match &outcome {
                Ok(r) => print_json(r, c.compact),
                Err(e) => {
                    log::error!("{e}");
                    print_json(
                        &json!({ "schema": 1, "kind": kind, "error": e.to_string() }),
                        c.compact,
                    );
                }
            }
            exit_code(outcome.as_ref().map(|r| &r.result), c.expect)
        }
        (
            Command::RunManifest {
                manifest,
                jobs,
                slow,
                criterion,
            },
            None,
        ) => match Manifest::load(manifest) {
            Ok(m) => {
                let workers = jobs
                    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
                let report = blockmorita_cli::run_manifest(&registry, &m, &ctx, workers, |j| {
                    (*slow || !j.slow) && criterion.is_none_or(|c| j.criterion == Some(c))
                });
                print_json(&report, c.compact);
                report.exit_code()
            }
            Err(e) => {
                log::error!("{e}");
                error_exit_code(&e)
            }
        },
        _ => unreachable!("every other command is a job"),
    };
    ExitCode::from(code as u8)
}
