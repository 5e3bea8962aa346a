//! Command-line harness: generation of the lower-bound families, runs of
//! the approximation algorithms, verification commands, exact oracles,
//! and batch experiments with CSV reports.

mod experiment;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use locallab::lb::{self, DeltaSequence};
use locallab::lp::{
    self, rational_string, CanonicalLp, LpParams, MdsParams,
};
use locallab::oracles::{self, Problem, Witness};
use locallab::{cds, mvc, Graph};
use num::ToPrimitive;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "locallab",
    about = "LOCAL-model distributed algorithms laboratory",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate graphs and blueprints of the lower-bound families.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the distributed approximation algorithms.
    #[command(subcommand)]
    Run(RunCommand),
    /// Verify structural claims of generated objects.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Exact small-instance solvers.
    Oracle(OracleArgs),
    /// Run a batch experiment from a config file and emit CSV.
    Experiment(experiment::ExperimentArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// Recursion depth of the cluster tree.
    #[arg(long)]
    k: u32,
    /// Canonical degree-sequence parameter (at least 2).
    #[arg(long, conflicts_with = "deltas")]
    delta: Option<u64>,
    /// Explicit comma-separated degree sequence, e.g. 1,2,4,8.
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<u64>>,
    /// Root cluster size; the smallest feasible power of two if omitted.
    #[arg(long)]
    n0: Option<u128>,
}

impl FamilyArgs {
    fn cluster_tree(&self) -> Result<lb::ClusterTree> {
        let deltas = match (&self.delta, &self.deltas) {
            (Some(d), None) => DeltaSequence::paper(*d, self.k)?,
            (None, Some(v)) => DeltaSequence::custom(v.clone())?,
            (None, None) => DeltaSequence::doubling(self.k),
            (Some(_), Some(_)) => unreachable!("clap forbids this"),
        };
        let n0 = match self.n0 {
            Some(n0) => n0,
            None => lb::minimal_n0(self.k, &deltas)?,
        };
        Ok(lb::build_cluster_tree(self.k, &deltas, n0)?)
    }
}

#[derive(Subcommand)]
enum GenCommand {
    /// Cluster-tree blueprint as a JSON document.
    Ct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Materialized instance of the family (optionally girth-boosted).
    Gk {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Boost the girth to at least 2k+1 via the incidence construction.
        #[arg(long)]
        boost: bool,
        #[arg(long, default_value_t = lb::DEFAULT_NODE_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two copies of the instance joined by a perfect matching.
    Hk {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        boost: bool,
        #[arg(long, default_value_t = lb::DEFAULT_NODE_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Raw incidence graph over the r-vectors of the prime field F_q.
    Dq {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RunCommand {
    /// Vertex cover / fractional matching approximation.
    Mvc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Accepted for interface uniformity; the algorithm is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare against the exact optimum (small graphs).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local covering/packing LP solving.
    Lp {
        #[arg(long)]
        lp: PathBuf,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        p: f64,
        #[arg(long = "R")]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dominating set via fractional solving plus randomized rounding.
    Mds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        p: f64,
        #[arg(long = "R")]
        radius: u32,
        #[arg(long, default_value_t = lp::DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connected dominating set pipeline.
    Mcds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        p: f64,
        #[arg(long = "R")]
        radius: u32,
        #[arg(long, default_value_t = lp::DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Cluster-level view equality of the first two clusters at radius k,
    /// plus the doubled-family variant.
    Views {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Exact girth, or a lower-bound certificate with --at-least.
    Girth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        at_least: Option<u32>,
    },
}

#[derive(Args)]
struct OracleArgs {
    /// One of: mvc, mds, mcds, maxm, mis, lp.
    #[arg(long)]
    problem: String,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    lp: Option<PathBuf>,
    /// Node set for the mis validity check, e.g. 0,3,5.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<u32>>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(cmd) => run_gen(cmd).map(|_| 0),
        Command::Run(cmd) => run_algorithms(cmd).map(|_| 0),
        Command::Verify(cmd) => run_verify(cmd),
        Command::Oracle(args) => run_oracle(args).map(|_| 0),
        Command::Experiment(args) => experiment::run(args),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        Graph::from_json(&text)
    } else {
        Graph::from_text(&text)
    };
    Ok(parsed?)
}

fn run_gen(cmd: GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Ct { family, out } => {
            let ct = family.cluster_tree()?;
            let clusters: Vec<_> = ct
                .clusters()
                .iter()
                .enumerate()
                .map(|(id, c)| {
                    json!({
                        "id": id,
                        "parent": c.parent.map(|(p, _)| p),
                        "label_index": c.parent.map(|(_, l)| l),
                        "level": c.level,
                        "depth": ct.depth(id),
                        "size": c.size.to_string(),
                    })
                })
                .collect();
            let doc = json!({
                "k": ct.k,
                "deltas": ct.deltas.as_slice(),
                "n0": ct.n0.to_string(),
                "total_nodes": ct.total_nodes().to_string(),
                "clusters": clusters,
            });
            emit(out.as_deref(), &format!("{:#}\n", doc))
        }
        GenCommand::Gk {
            family,
            seed,
            boost,
            budget,
            out,
        } => {
            let ct = family.cluster_tree()?;
            let g = build_instance(&ct, seed, boost, budget)?;
            emit(out.as_deref(), &g.to_text())
        }
        GenCommand::Hk {
            family,
            seed,
            boost,
            budget,
            out,
        } => {
            let ct = family.cluster_tree()?;
            let g = build_instance(&ct, seed, boost, budget)?;
            emit(out.as_deref(), &lb::build_hk(&g).to_text())
        }
        GenCommand::Dq { r, q, budget, out } => {
            let g = lb::dq_graph_with_budget(r, q, budget)?;
            emit(out.as_deref(), &g.to_text())
        }
    }
}

fn build_instance(ct: &lb::ClusterTree, seed: u64, boost: bool, budget: usize) -> Result<Graph> {
    let naive = lb::instantiate_naive_with_budget(ct, seed, budget)?;
    if boost {
        Ok(lb::boost_cluster_instance(
            ct,
            &naive,
            budget,
            Default::default(),
        )?)
    } else {
        Ok(naive)
    }
}

fn run_algorithms(cmd: RunCommand) -> Result<()> {
    match cmd {
        RunCommand::Mvc {
            graph,
            k,
            seed: _,
            oracle,
            out,
        } => {
            let g = load_graph(&graph)?;
            let result = mvc::mvc_fmm(&g, k)?;
            let oracle_value = if oracle {
                Some(
                    oracles::exact_solve_with_budget(Problem::MinVertexCover, &g, 64)?.value,
                )
            } else {
                None
            };
            let ratio = oracle_value.map(|opt| result.cover.len() as f64 / opt as f64);
            let delta = g.max_degree() as f64;
            let doc = json!({
                "algorithm": "mvc",
                "k": k,
                "n": g.node_count(),
                "max_degree": g.max_degree(),
                "cover": result.cover,
                "cover_size": result.cover.len(),
                "dual_total": rational_string(&result.dual_total),
                "dual_total_decimal": result.dual_total.to_f64(),
                "oracle_value": oracle_value,
                "ratio": ratio,
                "bound": 3.0 + delta.powf(1.0 / k as f64),
                "rounds": result.rounds,
                "checks": {
                    "cover_valid": result.checks.cover_valid,
                    "duals_feasible": result.checks.duals_feasible,
                    "degree_bound": result.checks.degree_bound,
                    "final_sum_bound": result.checks.final_sum_bound,
                    "conservation": result.checks.conservation,
                },
            });
            emit(out.as_deref(), &format!("{:#}\n", doc))
        }
        RunCommand::Lp {
            lp: path,
            ell,
            p,
            radius,
            seed,
            out,
        } => {
            let text = fs::read_to_string(&path)?;
            let lp = CanonicalLp::from_json(&text)?;
            let params = LpParams { ell, p, radius };
            let run = lp::solve_lp_local(&lp, params, seed)?;
            let doc = json!({
                "algorithm": "lp",
                "n_p": lp.n_p(),
                "n_d": lp.n_d(),
                "x": run.x.iter().map(rational_string).collect::<Vec<_>>(),
                "y": run.y.iter().map(rational_string).collect::<Vec<_>>(),
                "primal_value": rational_string(&run.primal_value),
                "dual_value": rational_string(&run.dual_value),
                "ratio": run.ratio().and_then(|r| r.to_f64()),
                "guarded_rows": run.guarded_rows,
                "seed": seed,
            });
            emit(out.as_deref(), &format!("{:#}\n", doc))
        }
        RunCommand::Mds {
            graph,
            ell,
            p,
            radius,
            lambda,
            seed,
            out,
        } => {
            let g = load_graph(&graph)?;
            let params = MdsParams {
                lp: LpParams { ell, p, radius },
                lambda,
            };
            let run = lp::mds_pipeline(&g, params, seed)?;
            let valid = oracles::is_dominating_set(&g, &run.dominating_set);
            let doc = json!({
                "algorithm": "mds",
                "n": g.node_count(),
                "dominating_set": run.dominating_set,
                "size": run.dominating_set.len(),
                "fractional_value": rational_string(&run.fractional.primal_value),
                "valid": valid,
                "seed": seed,
            });
            emit(out.as_deref(), &format!("{:#}\n", doc))
        }
        RunCommand::Mcds {
            graph,
            k,
            ell,
            p,
            radius,
            lambda,
            seed,
            out,
        } => {
            let g = load_graph(&graph)?;
            let params = cds::McdsParams {
                mds: MdsParams {
                    lp: LpParams { ell, p, radius },
                    lambda,
                },
                k,
            };
            let run = cds::mcds_pipeline(&g, params, seed)?;
            let doc = json!({
                "algorithm": "mcds",
                "n": g.node_count(),
                "dominating_set": run.dominating.dominating_set,
                "dominating_size": run.dominating.dominating_set.len(),
                "cds": run.cds,
                "cds_size": run.cds.len(),
                "kept_aux_edges": run.kept_aux_edges,
                "dominates": oracles::is_dominating_set(&g, &run.cds),
                "connected": oracles::induces_connected(&g, &run.cds),
                "seed": seed,
            });
            emit(out.as_deref(), &format!("{:#}\n", doc))
        }
    }
}

fn run_verify(cmd: VerifyCommand) -> Result<i32> {
    match cmd {
        VerifyCommand::Views { family } => {
            let ct = family.cluster_tree()?;
            let single = lb::check_view_equality(&ct);
            let doubled = lb::check_hk_view_equality(&ct);
            println!(
                "view equality at k={}: single {}, doubled {}",
                ct.k,
                verdict(single),
                verdict(doubled)
            );
            Ok(if single && doubled { 0 } else { 1 })
        }
        VerifyCommand::Girth { graph, at_least } => {
            let g = load_graph(&graph)?;
            match at_least {
                Some(bound) => {
                    let found = g.shortest_cycle_at_most(bound - 1, Default::default());
                    match found {
                        None => {
                            println!("girth >= {bound}: PASS");
                            Ok(0)
                        }
                        Some(c) => {
                            println!("girth >= {bound}: FAIL (cycle of length {c})");
                            Ok(1)
                        }
                    }
                }
                None => {
                    match g.girth() {
                        Some(girth) => println!("girth {girth}"),
                        None => println!("girth infinity (forest)"),
                    }
                    Ok(0)
                }
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_oracle(args: OracleArgs) -> Result<()> {
    let doc = match args.problem.as_str() {
        "lp" => {
            let path = args
                .lp
                .ok_or_else(|| anyhow!("--lp FILE required for the lp oracle"))?;
            let lp = CanonicalLp::from_json(&fs::read_to_string(&path)?)?;
            let sol = oracles::exact_lp(&lp)?;
            json!({
                "problem": "lp",
                "value": rational_string(&sol.value),
                "value_decimal": sol.value.to_f64(),
                "primal": sol.primal.iter().map(rational_string).collect::<Vec<_>>(),
                "dual": sol.dual.iter().map(rational_string).collect::<Vec<_>>(),
            })
        }
        "mis" => {
            let graph = args
                .graph
                .ok_or_else(|| anyhow!("--graph FILE required"))?;
            let set = args
                .set
                .ok_or_else(|| anyhow!("--set requires the candidate node list"))?;
            let g = load_graph(&graph)?;
            let report = oracles::check_mis(&g, &set);
            json!({
                "problem": "mis",
                "independent": report.independent,
                "maximal": report.maximal,
            })
        }
        name => {
            let problem = Problem::parse(name)?;
            let graph = args
                .graph
                .ok_or_else(|| anyhow!("--graph FILE required"))?;
            let g = load_graph(&graph)?;
            let budget = args.budget.unwrap_or_else(|| problem.default_budget());
            let sol = oracles::exact_solve_with_budget(problem, &g, budget)?;
            let witness = match &sol.witness {
                Witness::Nodes(nodes) => json!(nodes),
                Witness::Edges(edges) => json!(edges),
            };
            json!({
                "problem": name,
                "value": sol.value,
                "witness": witness,
            })
        }
    };
    emit(args.out.as_deref(), &format!("{:#}\n", doc))
}
