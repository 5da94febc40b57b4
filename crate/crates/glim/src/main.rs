use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use graphlim::cutnorm::{self, StepKernel};
use graphlim::density::{density_graph, density_graphon};
use graphlim::editdist::{self, HeuristicOptions};
use graphlim::error::Error;
use graphlim::extremal::{self, OptimizeOptions};
use graphlim::fracdist::{self, Delta1Config, EditMode, OverlayMatrix};
use graphlim::graph::Graph;
use graphlim::harness::{self, StabilityConfig};
use graphlim::scalar::{Rational, Scalar};
use graphlim::stepgraphon::StepGraphon;
use graphlim::{io, sampler};

#[derive(Parser)]
#[command(name = "glim", version, about = "Graph limit distances, densities and experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exact rational arithmetic where the command supports it.
    #[arg(long, global = true)]
    rational: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Homomorphism density t(F, G) or t(F, W).
    Density {
        #[arg(long)]
        motif: PathBuf,
        /// Edge list (.el) or step graphon (.json).
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Cut norm of the difference of two step graphons.
    Cutnorm {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Edit distance between graphs of equal order.
    Editdist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Bounds on the fractional overlay distance.
    Delta1 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        /// Also bound via blow-ups to order K·lcm(m, n).
        #[arg(long)]
        blowup: Option<usize>,
        /// Save the best overlay matrix here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Approximate a doubly stochastic matrix by an average of permutations.
    Birkhoff {
        /// JSON object {"rows": [[...], ...]} holding a doubly stochastic matrix.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 500)]
        m: usize,
    },
    /// Maximize edge density over weightings of a template graph.
    Extremal {
        #[arg(long)]
        template: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Draw a W-random graph.
    Sample {
        #[arg(long)]
        graphon: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Density gaps between graphs and a step graphon, as CSV.
    Converge {
        #[arg(long)]
        graphon: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        motifs: Vec<PathBuf>,
    },
    /// Delete random edges from T_r(n) and measure the distance back, as CSV.
    Stability {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 60)]
        n: usize,
        /// Deletion counts, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0, 15, 30, 60])]
        k: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        restarts: usize,
    },
    /// Check the separating pair and its 11/10 ratio.
    Example41 {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    io::read_graph(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graphon<S: Scalar>(path: &Path) -> anyhow::Result<StepGraphon<S>> {
    io::read_graphon(path).with_context(|| format!("reading {}", path.display()))
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn emit(global: &Global, text: &str) -> anyhow::Result<()> {
    match &global.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cut_report<S: Scalar>(
    a: &Path,
    b: &Path,
    exact: bool,
    restarts: usize,
    seed: u64,
) -> anyhow::Result<serde_json::Value> {
    let d = StepKernel::difference(&read_graphon::<S>(a)?, &read_graphon::<S>(b)?);
    let cert = if exact {
        cutnorm::cut_norm_exact(&d)?
    } else {
        cutnorm::cut_norm_heuristic(&d, restarts, seed)
    };
    let mut out = json!({
        "value": cert.value.to_f64(),
        "S": cert.s,
        "T": cert.t,
        "exact": exact,
        "parts": d.parts(),
    });
    if S::EXACT {
        out["rational"] = json!(cert.value.to_text());
    }
    Ok(out)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let seed = g.seed;
    let text = match cli.command {
        Command::Density { motif, input } => {
            let f = read_graph(&motif)?;
            let (value, exact): (f64, Option<Rational>) = if is_json(&input) {
                if g.rational {
                    let t = density_graphon(&f, &read_graphon::<Rational>(&input)?)?;
                    (t.to_f64(), Some(t))
                } else {
                    (density_graphon(&f, &read_graphon::<f64>(&input)?)?, None)
                }
            } else {
                let t = density_graph(&f, &read_graph(&input)?)?;
                (t.to_f64(), g.rational.then_some(t))
            };
            let mut out = json!({ "value": value });
            if let Some(t) = exact {
                out["rational"] = json!(t.to_string());
            }
            pretty(out)
        }
        Command::Cutnorm {
            a,
            b,
            exact: _,
            heuristic,
            restarts,
        } => {
            let report = if g.rational {
                cut_report::<Rational>(&a, &b, !heuristic, restarts, seed)?
            } else {
                cut_report::<f64>(&a, &b, !heuristic, restarts, seed)?
            };
            pretty(report)
        }
        Command::Editdist { a, b, exact, restarts } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            let r = if exact {
                editdist::edit_distance_exact(&ga, &gb)?
            } else {
                editdist::edit_distance_heuristic(&ga, &gb, &HeuristicOptions::new(restarts, seed))?
            };
            let mut out = serde_json::to_value(&r)?;
            if g.rational {
                out["rational"] = json!(r.exact_value().to_string());
            }
            pretty(out)
        }
        Command::Delta1 {
            a,
            b,
            starts,
            blowup,
            certificate,
        } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            let cfg = Delta1Config {
                starts,
                seed,
                ..Delta1Config::default()
            };
            let upper = fracdist::delta1_upper(&ga, &gb, &cfg)?;
            let mut out = json!({
                "upper": upper.value,
                "lower": fracdist::delta1_lower(&ga, &gb),
                "start": upper.start,
                "iterations": upper.iterations,
                "certificate_file": certificate.as_ref().map(|p| p.display().to_string()),
            });
            if g.rational {
                out["lower_rational"] = json!(fracdist::delta1_lower_exact(&ga, &gb).to_string());
            }
            if let Some(k) = blowup {
                let mode = EditMode::Auto(HeuristicOptions::new(16, seed));
                let bound = fracdist::delta1_blowup_upper(&ga, &gb, k, &mode)?;
                out["blowup_upper"] = json!(bound.value);
                out["blowup_exact"] = json!(bound.edit.exact);
                out["blowup_factors"] = json!([bound.factors.0, bound.factors.1]);
            }
            if let Some(path) = &certificate {
                let cert = json!({ "rows": upper.overlay.to_rows(), "value": upper.value });
                fs::write(path, pretty(cert)).with_context(|| format!("writing {}", path.display()))?;
            }
            pretty(out)
        }
        Command::Birkhoff { matrix, m } => {
            let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
            let parsed: serde_json::Value = serde_json::from_str(&text)?;
            let rows: Vec<Vec<f64>> = serde_json::from_value(parsed["rows"].clone())
                .context("expected an object with a \"rows\" array of arrays")?;
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                bail!("matrix must be square");
            }
            let a = OverlayMatrix::from_doubly_stochastic(&rows.concat(), n)?;
            let d = fracdist::birkhoff_approximate(&a, m)?;
            pretty(json!({
                "residual": d.residual_inf_norm,
                "bound": d.bound,
                "extracted": d.extracted,
                "perms": d.perms,
            }))
        }
        Command::Extremal {
            template,
            tol,
            restarts,
        } => {
            let t = read_graph(&template)?;
            let opts = OptimizeOptions {
                tol,
                seed,
                restarts,
                ..OptimizeOptions::default()
            };
            let opt = extremal::clique_density_optimize(&t, &opts)?;
            let w = extremal::template_graphon(&t, &opt.weights)?;
            pretty(json!({
                "value": opt.value,
                "weights": opt.weights,
                "regularity_gap": extremal::degree_regularity_gap(&w),
            }))
        }
        Command::Sample { graphon, n } => {
            let w = read_graphon::<f64>(&graphon)?;
            io::format_graph(&sampler::sample_w_random(&w, n, seed)?)
        }
        Command::Converge {
            graphon,
            graphs,
            motifs,
        } => {
            let gs = graphs
                .iter()
                .map(|p| read_graph(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let fs_ = motifs
                .iter()
                .map(|p| read_graph(p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let rows = if g.rational {
                sampler::convergence_table(&gs, &read_graphon::<Rational>(&graphon)?, &fs_)?
            } else {
                sampler::convergence_table(&gs, &read_graphon::<f64>(&graphon)?, &fs_)?
            };
            let mut out = String::from("graph,motif,gap\n");
            for r in rows {
                out += &format!(
                    "{},{},{}\n",
                    graphs[r.graph].display(),
                    motifs[r.motif].display(),
                    r.gap
                );
            }
            out
        }
        Command::Stability {
            r,
            n,
            k,
            trials,
            restarts,
        } => {
            let cfg = StabilityConfig {
                restarts,
                ..StabilityConfig::new(r, n, trials, seed)
            };
            harness::stability_csv(&harness::stability_sweep(&cfg, &k)?)
        }
        Command::Example41 { n, restarts } => {
            pretty(serde_json::to_value(harness::verify_example_4_1(n, restarts, seed)?)?)
        }
    };
    emit(g, &text)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => 3,
        Some(Error::Invariant(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
