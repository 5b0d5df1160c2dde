// zxrl - ZX-calculus circuit optimisation guided by reinforcement learning
// Copyright (C) 2026 - The zxrl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zxrl::bench::{self, BenchConfig};
use zxrl::config::RunConfig;
use zxrl::env::{calibrate, NormalizerTable};
use zxrl::nn::{load_checkpoint, save_checkpoint, AgentNets};
use zxrl::ppo::{self, EvalConfig, EvalPolicy};
use zxrl::rewrite::{self, RewriteAction};
use zxrl::serial::{deserialize, serialize};
use zxrl::simplify::{reduce_all_with, ReduceOptions};
use zxrl::verify::{equivalent, equivalent_clifford, equivalent_dense};
use zxrl::{extract, peephole_optimize, Circuit, GateSet, ZxDiagram};

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

type Res<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "zxrl",
    version,
    about = "ZX-diagram circuit optimisation with a learned rewrite policy"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    ReduceAll,
    Agent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Tableau,
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig2,
    Fig6,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Greedy,
    Sample,
    Random,
    Stop,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random circuit
    Gen {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value = "clifford")]
        set: GateSet,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimise a circuit through graph-like form and extraction
    Simplify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "reduce-all")]
        method: Method,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// run the peephole pass on the result
        #[arg(long)]
        peephole: bool,
        /// let reduce-all use the phase-gadget rules
        #[arg(long)]
        gadgets: bool,
        /// visit reduce-all candidates in a shuffled order
        #[arg(long)]
        shuffle_seed: Option<u64>,
        /// agent step cap
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
    },
    /// Convert a circuit to a graph-like diagram file
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a circuit from a diagram file
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one rewrite to a diagram file, or list the feasible ones
    Apply {
        #[arg(long = "in")]
        input: PathBuf,
        /// lcomp, pivot, boundary-pivot, id or gadget-fusion
        #[arg(long, required_unless_present = "list")]
        rule: Option<String>,
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        list: bool,
        /// include gadget fusion in the listing
        #[arg(long)]
        gadgets: bool,
    },
    /// Run the gate-level peephole pass on a circuit
    Peephole {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check two circuits for equivalence; exit status 1 if they differ
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
    },
    /// Estimate the reward normaliser for a circuit size
    Calibrate {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "clifford")]
        set: GateSet,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// add the entry to this table file (created if missing)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train an agent
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// threads for gradient evaluation (1 keeps runs byte-identical)
        #[arg(long)]
        jobs: Option<usize>,
        /// initialise from a checkpoint instead of random weights
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Evaluate a policy against reduce-all on fresh random circuits
    Eval {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        qubits: usize,
        #[arg(long, default_value_t = 25)]
        gates: usize,
        #[arg(long, default_value = "clifford")]
        set: GateSet,
        #[arg(long, default_value_t = 200)]
        episodes: usize,
        #[arg(long, default_value_t = 1_000_000)]
        seed: u64,
        #[arg(long, value_enum, default_value = "greedy")]
        policy: Policy,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[arg(long)]
        peephole: bool,
        /// add a time_ms column
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gate-count sweeps over the initial circuit size
    Bench {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
        /// agent columns for fig6
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        gates: Option<Vec<usize>>,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn read_circuit(path: &Path) -> Res<Circuit> {
    Circuit::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_diagram(path: &Path) -> Res<ZxDiagram> {
    deserialize(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_nets(path: Option<&Path>) -> Res<AgentNets> {
    let path = path.ok_or("this method needs --checkpoint")?;
    load_checkpoint(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn parse_action(rule: &str, vs: &[usize]) -> Res<RewriteAction> {
    let want = |n: usize| -> Res<()> {
        if vs.len() == n {
            Ok(())
        } else {
            Err(format!("{rule} takes {n} vertices, got {}", vs.len()).into())
        }
    };
    Ok(match rule {
        "lcomp" => {
            want(1)?;
            RewriteAction::LocalComp { v: vs[0] }
        }
        "pivot" => {
            want(2)?;
            RewriteAction::Pivot { u: vs[0], v: vs[1] }
        }
        "boundary-pivot" => {
            want(2)?;
            RewriteAction::BoundaryPivot { u: vs[0], v: vs[1] }
        }
        "id" => {
            want(1)?;
            RewriteAction::IdentityRemove { v: vs[0] }
        }
        "gadget-fusion" => {
            want(2)?;
            RewriteAction::GadgetFusion {
                g1: vs[0],
                g2: vs[1],
            }
        }
        other => return Err(format!("unknown rule '{other}'").into()),
    })
}

/// Writes `bytes` next to `path` and renames it into place, so an
/// interrupted run leaves the previous file intact.
fn replace_file(path: &Path, bytes: &[u8]) -> Res<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn run(cmd: Cmd) -> Res<ExitCode> {
    match cmd {
        Cmd::Gen {
            qubits,
            gates,
            set,
            seed,
            out,
        } => {
            write_out(
                out.as_deref(),
                &Circuit::random(qubits, gates, set, seed).emit(),
            )?;
        }
        Cmd::Simplify {
            input,
            method,
            checkpoint,
            out,
            peephole,
            gadgets,
            shuffle_seed,
            max_steps,
        } => {
            let c = read_circuit(&input)?;
            let d = c.to_diagram().to_graph_like();
            let reduced = match method {
                Method::ReduceAll => reduce_all_with(
                    &d,
                    ReduceOptions {
                        gadgets,
                        shuffle_seed,
                    },
                ),
                Method::Agent => {
                    let nets = load_nets(checkpoint.as_deref())?;
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    ppo::run_episode(Some(&nets), &d, EvalPolicy::Greedy, max_steps, &mut rng)
                        .diagram
                }
            };
            let mut r = extract(&reduced)?;
            if peephole {
                r = peephole_optimize(&r);
            }
            write_out(out.as_deref(), &r.emit())?;
        }
        Cmd::Convert { input, out } => {
            let d = read_circuit(&input)?.to_diagram().to_graph_like();
            write_out(out.as_deref(), &serialize(&d))?;
        }
        Cmd::Extract { input, out } => {
            write_out(out.as_deref(), &extract(&read_diagram(&input)?)?.emit())?;
        }
        Cmd::Apply {
            input,
            rule,
            vertices,
            out,
            list,
            gadgets,
        } => {
            let mut d = read_diagram(&input)?;
            if list {
                let text: String = rewrite::enumerate_actions(&d, gadgets)
                    .iter()
                    .map(|a| format!("{a}\n"))
                    .collect();
                write_out(out.as_deref(), &text)?;
            } else {
                let a = parse_action(rule.as_deref().unwrap_or_default(), &vertices)?;
                rewrite::apply_mut(&mut d, &a)?;
                write_out(out.as_deref(), &serialize(&d))?;
            }
        }
        Cmd::Peephole { input, out } => {
            write_out(
                out.as_deref(),
                &peephole_optimize(&read_circuit(&input)?).emit(),
            )?;
        }
        Cmd::Verify { a, b, mode } => {
            let (ca, cb) = (read_circuit(&a)?, read_circuit(&b)?);
            let same = match mode {
                Mode::Auto => equivalent(&ca, &cb)?,
                Mode::Tableau => equivalent_clifford(&ca, &cb)?,
                Mode::Dense => equivalent_dense(&ca, &cb)?,
            };
            println!("{}", if same { "equivalent" } else { "not equivalent" });
            return Ok(if same {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Cmd::Calibrate {
            qubits,
            gates,
            samples,
            set,
            seed,
            out,
        } => {
            let v = calibrate(qubits, gates, set, samples, seed)?;
            let mut table = match &out {
                Some(p) if p.exists() => NormalizerTable::parse(&read(p)?)?,
                _ => NormalizerTable::default(),
            };
            table.insert(qubits, gates, v);
            write_out(out.as_deref(), &table.emit())?;
        }
        Cmd::Train {
            config,
            out_dir,
            jobs,
            init,
            quiet,
        } => {
            let mut cfg = match &config {
                Some(p) => {
                    RunConfig::parse(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?
                }
                None => RunConfig::default(),
            };
            cfg.apply_env_overrides()?;
            if let Some(j) = jobs {
                cfg.ppo.jobs = j;
            }
            fs::create_dir_all(&out_dir)?;
            fs::write(out_dir.join("config.cfg"), cfg.emit())?;
            let nets = match &init {
                Some(p) => load_nets(Some(p))?,
                None => AgentNets::new(cfg.net, cfg.ppo.seed),
            };
            let ckpt = out_dir.join("checkpoint.zxc");
            let every = cfg.checkpoint_every;
            let mut updates = 0usize;
            let (nets, log) = ppo::train(nets, &cfg.env, cfg.ppo.clone(), |t, row| {
                updates += 1;
                if every > 0 && updates % every == 0 {
                    save_checkpoint(&t.nets, &ckpt)?;
                }
                replace_file(
                    &out_dir.join("metrics.csv"),
                    t.log().metrics_csv().as_bytes(),
                )
                .map_err(|e| ppo::PpoError::Config(e.to_string()))?;
                if !quiet {
                    eprintln!(
                        "step {:>8}  return {:>8.4}  actor {:>8.4}  critic {:>8.4}  entropy {:>6.3}  clip {:.3}",
                        row.step, row.mean_return, row.l_actor, row.l_critic, row.entropy, row.clip_frac
                    );
                }
                Ok(())
            })?;
            save_checkpoint(&nets, &ckpt)?;
            replace_file(&out_dir.join("metrics.csv"), log.metrics_csv().as_bytes())?;
            fs::write(out_dir.join("returns.csv"), log.returns_csv())?;
        }
        Cmd::Eval {
            checkpoint,
            qubits,
            gates,
            set,
            episodes,
            seed,
            policy,
            max_steps,
            peephole,
            timing,
            jobs,
            out,
        } => {
            let policy = match policy {
                Policy::Greedy => EvalPolicy::Greedy,
                Policy::Sample => EvalPolicy::Sample,
                Policy::Random => EvalPolicy::Random,
                Policy::Stop => EvalPolicy::Stop,
            };
            let nets = match policy {
                EvalPolicy::Greedy | EvalPolicy::Sample => Some(load_nets(checkpoint.as_deref())?),
                _ => None,
            };
            let cfg = EvalConfig {
                n_qubits: qubits,
                n_gates: gates,
                gate_set: set,
                episodes,
                seed,
                max_steps,
                policy,
                peephole,
                timing,
                jobs,
            };
            let s = ppo::evaluate(nets.as_ref(), &cfg)?;
            write_out(out.as_deref(), &s.report_csv())?;
            eprintln!("{}", s.summary_line());
        }
        Cmd::Bench {
            figure,
            out,
            checkpoint,
            qubits,
            gates,
            seeds,
            seed,
            timing,
            jobs,
        } => {
            let mut cfg = match figure {
                Figure::Fig2 => BenchConfig::fig2(),
                Figure::Fig6 => BenchConfig::fig6(),
            };
            cfg.qubits = qubits.unwrap_or(cfg.qubits);
            cfg.gates = gates.unwrap_or(cfg.gates);
            cfg.seeds = seeds.unwrap_or(cfg.seeds);
            cfg.seed = seed;
            cfg.timing = timing;
            cfg.jobs = jobs;
            fs::create_dir_all(&out)?;
            match figure {
                Figure::Fig2 => {
                    for set in [GateSet::Clifford, GateSet::CliffordT] {
                        fs::write(out.join(format!("fig2_{set}.csv")), bench::fig2(&cfg, set)?)?;
                    }
                }
                Figure::Fig6 => {
                    let nets = match &checkpoint {
                        Some(p) => Some(load_nets(Some(p))?),
                        None => None,
                    };
                    fs::write(
                        out.join("fig6_clifford.csv"),
                        bench::fig6(&cfg, GateSet::Clifford, nets.as_ref())?,
                    )?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
