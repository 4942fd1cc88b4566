//! Command-line surface: decide / compute / bench / generators.
//!
//! Every flag can also be supplied through an environment variable with the
//! `FRECHET_` prefix (flags win). Exit codes: 0 success, 1 input error,
//! 2 naive/fast cross-check failure.

use frechet_cli::{bench, dataset, generate};

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use frechet::geometry::{MoveModel, SeqRole};
use frechet::naive;
use frechet::selection;
use frechet::{lowerbound, pipeline, TableMode, TuningParams};

#[derive(Parser)]
#[command(name = "frechet", version, about = "Discrete Fréchet distance toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Naive,
    Fast,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Orthogonal,
    Diagonal,
}

impl From<Model> for MoveModel {
    fn from(m: Model) -> MoveModel {
        match m {
            Model::Orthogonal => MoveModel::Orthogonal,
            Model::Diagonal => MoveModel::WithDiagonal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableModeArg {
    Eager,
    Lazy,
}

#[derive(Debug, Args)]
struct TuningArgs {
    /// Points of A per block.
    #[arg(long, env = "FRECHET_BLOCK_SIZE", default_value_t = 8)]
    block_size: usize,
    /// Blocks per layer.
    #[arg(long, env = "FRECHET_BLOCKS_PER_LAYER", default_value_t = 8)]
    blocks_per_layer: usize,
    /// B-positions per packed chunk.
    #[arg(long, env = "FRECHET_CHUNK_LEN", default_value_t = 4)]
    chunk_len: usize,
    /// Bits per face label (default: derived per layer).
    #[arg(long, env = "FRECHET_FACE_LABEL_BITS")]
    face_label_bits: Option<u32>,
    /// Transition storage: tabulate eagerly or memoize lazily.
    #[arg(long, env = "FRECHET_TABLE_MODE", value_enum, default_value_t = TableModeArg::Lazy)]
    table_mode: TableModeArg,
}

impl TuningArgs {
    fn params(&self) -> Result<TuningParams> {
        let params = TuningParams {
            block_size: self.block_size,
            blocks_per_layer: self.blocks_per_layer,
            chunk_len: self.chunk_len,
            face_label_bits: self.face_label_bits,
            table_mode: match self.table_mode {
                TableModeArg::Eager => TableMode::EagerTable,
                TableModeArg::Lazy => TableMode::LazyMemo,
            },
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the Fréchet distance is at most delta.
    Decide {
        /// Path to the A sequence (.csv or .json).
        #[arg(long, env = "FRECHET_A")]
        a: PathBuf,
        /// Path to the B sequence (.csv or .json).
        #[arg(long, env = "FRECHET_B")]
        b: PathBuf,
        #[arg(long, env = "FRECHET_DELTA")]
        delta: f64,
        #[arg(long, env = "FRECHET_ALGO", value_enum, default_value_t = Algo::Fast)]
        algo: Algo,
        #[arg(long, env = "FRECHET_MODEL", value_enum, default_value_t = Model::Orthogonal)]
        model: Model,
        #[arg(long, env = "FRECHET_FORMAT", value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Compute the exact Fréchet distance.
    Compute {
        #[arg(long, env = "FRECHET_A")]
        a: PathBuf,
        #[arg(long, env = "FRECHET_B")]
        b: PathBuf,
        #[arg(long, env = "FRECHET_ALGO", value_enum, default_value_t = Algo::Fast)]
        algo: Algo,
        #[arg(long, env = "FRECHET_MODEL", value_enum, default_value_t = Model::Orthogonal)]
        model: Model,
        #[arg(long, env = "FRECHET_FORMAT", value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Time the decision procedures on deterministic instances.
    Bench {
        /// Comma-separated instance sizes (walk family) or pair counts
        /// (lowerbound family).
        #[arg(long, env = "FRECHET_SIZES", value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, env = "FRECHET_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, env = "FRECHET_FAMILY", value_enum, default_value_t = BenchFamily::Walk)]
        family: BenchFamily,
        /// `both` cross-checks the fast answer against the quadratic DP.
        #[arg(long, env = "FRECHET_ALGO", value_enum, default_value_t = Algo::Both)]
        algo: Algo,
        #[arg(long, env = "FRECHET_MODEL", value_enum, default_value_t = Model::Orthogonal)]
        model: Model,
        #[arg(long, env = "FRECHET_FORMAT", value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Write seeded random point sequences.
    GenRandom {
        #[arg(long, env = "FRECHET_OUT_A")]
        out_a: PathBuf,
        #[arg(long, env = "FRECHET_OUT_B")]
        out_b: PathBuf,
        #[arg(long, env = "FRECHET_M")]
        m: usize,
        #[arg(long, env = "FRECHET_N")]
        n: usize,
        #[arg(long, env = "FRECHET_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, env = "FRECHET_KIND", value_enum, default_value_t = generate::Kind::Walk)]
        kind: generate::Kind,
        #[arg(long, env = "FRECHET_FORMAT", value_enum, default_value_t = GenFormat::Csv)]
        format: GenFormat,
    },
    /// Write the exponential-state disk configuration as JSON.
    GenLowerbound {
        /// Number of red/blue disk pairs.
        #[arg(long, env = "FRECHET_M")]
        m: usize,
        /// Output path (stdout if omitted).
        #[arg(long, env = "FRECHET_OUT")]
        out: Option<PathBuf>,
    },
    /// Enumerate all subsets of the lower-bound instance and check the
    /// automaton reaches exactly 2^m states.
    VerifyLowerbound {
        #[arg(long, env = "FRECHET_M")]
        m: usize,
        #[arg(long, env = "FRECHET_FORMAT", value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFamily {
    Walk,
    Lowerbound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    Csv,
    Json,
}

fn main() {
    // die quietly when the consumer of our stdout goes away (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version output is not an error
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Decide { a, b, delta, algo, model, format, tuning } => {
            let params = tuning.params()?;
            let a = dataset::read_seq(&a, SeqRole::A)?;
            let b = dataset::read_seq(&b, SeqRole::B)?;
            if !delta.is_finite() || delta < 0.0 {
                return Err(anyhow!("delta must be a finite non-negative number"));
            }
            let model: MoveModel = model.into();

            let mut naive_out = None;
            let mut fast_out = None;
            if algo != Algo::Fast {
                let t = Instant::now();
                let v = naive::decide_naive(&a, &b, delta, model)?;
                naive_out = Some((v, t.elapsed().as_secs_f64() * 1e3));
            }
            if algo != Algo::Naive {
                let t = Instant::now();
                let v = pipeline::decide(&a, &b, delta, &params, model)?;
                fast_out = Some((v, t.elapsed().as_secs_f64() * 1e3));
            }
            let agreement = match (naive_out, fast_out) {
                (Some((x, _)), Some((y, _))) => Some(x == y),
                _ => None,
            };
            let decision = fast_out.or(naive_out).expect("some algorithm ran").0;

            match format {
                Format::Text => {
                    println!("decision: {decision}");
                    if let Some((_, ms)) = naive_out {
                        println!("naive_ms: {ms:.3}");
                    }
                    if let Some((_, ms)) = fast_out {
                        println!("fast_ms: {ms:.3}");
                    }
                    if let Some(ok) = agreement {
                        println!("agreement: {}", if ok { "yes" } else { "NO" });
                    }
                }
                Format::Json => {
                    let obj = serde_json::json!({
                        "decision": decision,
                        "delta": delta,
                        "naive_ms": naive_out.map(|(_, ms)| ms),
                        "fast_ms": fast_out.map(|(_, ms)| ms),
                        "agreement": agreement,
                    });
                    println!("{obj}");
                }
            }
            Ok(if agreement == Some(false) { 2 } else { 0 })
        }

        Command::Compute { a, b, algo, model, format, tuning } => {
            let params = tuning.params()?;
            let a = dataset::read_seq(&a, SeqRole::A)?;
            let b = dataset::read_seq(&b, SeqRole::B)?;
            let model: MoveModel = model.into();

            let mut naive_out = None;
            let mut fast_out = None;
            if algo != Algo::Fast {
                let t = Instant::now();
                let v = naive::frechet_naive(&a, &b, model)?;
                naive_out = Some((v, t.elapsed().as_secs_f64() * 1e3));
            }
            if algo != Algo::Naive {
                let t = Instant::now();
                let (v, stats) = selection::optimize_with_stats(&a, &b, &params, model)?;
                fast_out = Some((v, stats, t.elapsed().as_secs_f64() * 1e3));
            }
            let agreement = match (&naive_out, &fast_out) {
                (Some((x, _)), Some((y, _, _))) => Some(x.to_bits() == y.to_bits()),
                _ => None,
            };
            let value = fast_out
                .as_ref()
                .map(|(v, _, _)| *v)
                .or(naive_out.map(|(v, _)| v))
                .expect("some algorithm ran");

            match format {
                Format::Text => {
                    println!("frechet_distance: {value:?}");
                    if let Some((_, stats, ms)) = &fast_out {
                        println!("rank: {}", stats.rank);
                        println!("decide_calls: {}", stats.decide_calls);
                        println!("fast_ms: {ms:.3}");
                    }
                    if let Some((_, ms)) = naive_out {
                        println!("naive_ms: {ms:.3}");
                    }
                    if let Some(ok) = agreement {
                        println!("agreement: {}", if ok { "yes" } else { "NO" });
                    }
                }
                Format::Json => {
                    let obj = serde_json::json!({
                        "frechet_distance": value,
                        "rank": fast_out.as_ref().map(|(_, s, _)| s.rank),
                        "decide_calls": fast_out.as_ref().map(|(_, s, _)| s.decide_calls),
                        "fast_ms": fast_out.as_ref().map(|(_, _, ms)| *ms),
                        "naive_ms": naive_out.map(|(_, ms)| ms),
                        "agreement": agreement,
                    });
                    println!("{obj}");
                }
            }
            Ok(if agreement == Some(false) { 2 } else { 0 })
        }

        Command::Bench { sizes, seed, family, algo, model, format, tuning } => {
            let params = tuning.params()?;
            match family {
                BenchFamily::Walk => {
                    let rows = bench::bench_walks(
                        &sizes,
                        seed,
                        &params,
                        model.into(),
                        algo == Algo::Both,
                    )?;
                    match format {
                        Format::Text => {
                            println!(
                                "{:>8} {:>8} {:>7} {:>12} {:>12} {:>8}  agree",
                                "m", "n", "delta", "naive_ms", "fast_ms", "speedup"
                            );
                            for r in &rows {
                                println!(
                                    "{:>8} {:>8} {:>7.2} {:>12.2} {:>12.2} {:>8.2}  {}",
                                    r.m,
                                    r.n,
                                    r.delta,
                                    r.naive_ms,
                                    r.fast_ms,
                                    r.speedup,
                                    match r.agree {
                                        Some(true) => "yes",
                                        Some(false) => "NO",
                                        None => "-",
                                    }
                                );
                            }
                        }
                        Format::Json => {
                            let arr: Vec<_> = rows
                                .iter()
                                .map(|r| {
                                    serde_json::json!({
                                        "m": r.m, "n": r.n, "delta": r.delta,
                                        "naive_ms": r.naive_ms, "fast_ms": r.fast_ms,
                                        "speedup": r.speedup, "decision": r.decision,
                                        "agree": r.agree,
                                        "params": {
                                            "block_size": params.block_size,
                                            "blocks_per_layer": params.blocks_per_layer,
                                            "chunk_len": params.chunk_len,
                                        },
                                    })
                                })
                                .collect();
                            println!("{}", serde_json::Value::Array(arr));
                        }
                    }
                    Ok(if rows.iter().any(|r| r.agree == Some(false)) { 2 } else { 0 })
                }
                BenchFamily::Lowerbound => {
                    let rows = bench::bench_lowerbound(&sizes)?;
                    match format {
                        Format::Text => {
                            println!(
                                "{:>4} {:>10} {:>10} {:>6} {:>10}",
                                "m", "states", "expected", "ok", "ms"
                            );
                            for r in &rows {
                                println!(
                                    "{:>4} {:>10} {:>10} {:>6} {:>10.2}",
                                    r.m, r.distinct_states, r.expected_states, r.ok, r.ms
                                );
                            }
                        }
                        Format::Json => {
                            let arr: Vec<_> = rows
                                .iter()
                                .map(|r| {
                                    serde_json::json!({
                                        "m": r.m, "states": r.distinct_states,
                                        "expected": r.expected_states, "ok": r.ok, "ms": r.ms,
                                    })
                                })
                                .collect();
                            println!("{}", serde_json::Value::Array(arr));
                        }
                    }
                    Ok(if rows.iter().all(|r| r.ok) { 0 } else { 2 })
                }
            }
        }

        Command::GenRandom { out_a, out_b, m, n, seed, kind, format } => {
            if m < 1 || n < 1 {
                return Err(anyhow!("m and n must be at least 1"));
            }
            let a = generate::generate(kind, m, seed);
            let b = generate::generate(kind, n, seed.wrapping_add(1));
            let json = format == GenFormat::Json;
            dataset::write_points(&out_a, &a, json)?;
            dataset::write_points(&out_b, &b, json)?;
            println!("wrote {} ({m} points) and {} ({n} points)", out_a.display(), out_b.display());
            Ok(0)
        }

        Command::GenLowerbound { m, out } => {
            let inst = lowerbound::generate(m)?;
            let as_pairs =
                |pts: &[frechet::Point2]| -> Vec<[f64; 2]> { pts.iter().map(|p| [p.x, p.y]).collect() };
            let obj = serde_json::json!({
                "m": inst.m(),
                "epsilon": inst.epsilon(),
                "radius": inst.radius(),
                "a": as_pairs(inst.a_centers()),
                "b_main": as_pairs(inst.b_main()),
                "b_detour": as_pairs(inst.b_detour()),
                "b_final": [inst.b_final().x, inst.b_final().y],
            });
            let body = format!("{obj}\n");
            match out {
                Some(path) => {
                    std::fs::write(&path, body)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{body}"),
            }
            Ok(0)
        }

        Command::VerifyLowerbound { m, format } => {
            let inst = lowerbound::generate(m)?;
            let report = lowerbound::verify_exponential(&inst)?;
            match format {
                Format::Text => {
                    println!("m: {}", report.m);
                    println!("distinct_states: {}", report.distinct_states);
                    println!("expected_states: {}", report.expected_states);
                    println!("diagonal_distinct_states: {}", report.diagonal_distinct_states);
                    println!("ok: {}", report.ok());
                    for f in report.failures.iter().take(5) {
                        println!("failure: {f}");
                    }
                }
                Format::Json => {
                    let obj = serde_json::json!({
                        "m": report.m,
                        "distinct_states": report.distinct_states,
                        "expected_states": report.expected_states,
                        "diagonal_distinct_states": report.diagonal_distinct_states,
                        "ok": report.ok(),
                        "failures": report.failures,
                    });
                    println!("{obj}");
                }
            }
            Ok(if report.ok() { 0 } else { 2 })
        }
    }
}
