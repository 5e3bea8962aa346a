//! Batch experiments: a config file describes instances, algorithms and
//! seeds; the harness runs the cross-product and writes a fixed-column
//! CSV with a trailing summary block. Output is byte-identical across
//! repeated runs unless `--timings` is passed.

use anyhow::{Context, Result};
use clap::Args;
use locallab::cds::{mcds_pipeline, McdsParams};
use locallab::lp::{mds_pipeline, LpParams, MdsParams, DEFAULT_LAMBDA};
use locallab::mvc::mvc_fmm;
use locallab::oracles::{
    exact_solve_with_budget, induces_connected, is_dominating_set, Problem,
};
use locallab::{gen, Graph};
use num::BigUint;
use serde::Deserialize;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct ExperimentArgs {
    /// JSON experiment description; unknown keys are rejected.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; stdout when neither this nor the config names one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock times per row. Off by default so repeated runs
    /// produce byte-identical reports.
    #[arg(long)]
    timings: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    instances: Vec<InstanceSpec>,
    algorithms: Vec<AlgorithmSpec>,
    seeds: Vec<u64>,
    #[serde(default)]
    oracle: bool,
    #[serde(default)]
    output: Option<PathBuf>,
}

#[derive(Deserialize, Clone)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum InstanceSpec {
    Star { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Kab { a: usize, b: usize },
    Gnp { n: usize, p: f64, seed: u64 },
    RandomConnected { n: usize, extra: usize, seed: u64 },
    File { path: PathBuf },
}

impl InstanceSpec {
    fn id(&self) -> String {
        match self {
            InstanceSpec::Star { n } => format!("star(n={n})"),
            InstanceSpec::Path { n } => format!("path(n={n})"),
            InstanceSpec::Cycle { n } => format!("cycle(n={n})"),
            InstanceSpec::Complete { n } => format!("complete(n={n})"),
            InstanceSpec::Kab { a, b } => format!("kab({a},{b})"),
            InstanceSpec::Gnp { n, p, seed } => format!("gnp(n={n},p={p},s={seed})"),
            InstanceSpec::RandomConnected { n, extra, seed } => {
                format!("random_connected(n={n},m+={extra},s={seed})")
            }
            InstanceSpec::File { path } => format!("file({})", path.display()),
        }
    }

    fn build(&self) -> Result<Graph> {
        Ok(match self {
            InstanceSpec::Star { n } => gen::star(*n),
            InstanceSpec::Path { n } => gen::path(*n),
            InstanceSpec::Cycle { n } => gen::cycle(*n),
            InstanceSpec::Complete { n } => gen::complete(*n),
            InstanceSpec::Kab { a, b } => gen::complete_bipartite(*a, *b),
            InstanceSpec::Gnp { n, p, seed } => gen::gnp(*n, *p, *seed),
            InstanceSpec::RandomConnected { n, extra, seed } => {
                gen::random_connected(*n, *extra, *seed)
            }
            InstanceSpec::File { path } => {
                let text =
                    fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
                if path.extension().is_some_and(|e| e == "json") {
                    Graph::from_json(&text)?
                } else {
                    Graph::from_text(&text)?
                }
            }
        })
    }
}

fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}

#[derive(Deserialize, Clone)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
enum AlgorithmSpec {
    Mvc {
        k: u32,
    },
    Mds {
        ell: u32,
        p: f64,
        #[serde(rename = "R")]
        radius: u32,
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
    Mcds {
        k: u32,
        ell: u32,
        p: f64,
        #[serde(rename = "R")]
        radius: u32,
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
}

impl AlgorithmSpec {
    fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Mvc { .. } => "mvc",
            AlgorithmSpec::Mds { .. } => "mds",
            AlgorithmSpec::Mcds { .. } => "mcds",
        }
    }

    fn k(&self) -> Option<u32> {
        match self {
            AlgorithmSpec::Mvc { k } | AlgorithmSpec::Mcds { k, .. } => Some(*k),
            AlgorithmSpec::Mds { .. } => None,
        }
    }
}

#[derive(Default)]
struct Row {
    instance: String,
    algorithm: &'static str,
    n: usize,
    max_degree: usize,
    k: Option<u32>,
    seed: u64,
    value: Option<u64>,
    oracle_value: Option<u64>,
    ratio_exact: Option<String>,
    ratio: Option<f64>,
    bound: Option<f64>,
    bound_satisfied: Option<bool>,
    wall_ms: Option<u128>,
    error: Option<String>,
    violation: bool,
}

const HEADER: &str =
    "instance,algorithm,n,max_degree,k,seed,value,oracle_value,ratio_exact,ratio,bound,bound_satisfied,wall_ms,error";

impl Row {
    fn csv_line(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        let ratio = self
            .ratio
            .map(|r| format!("{r:.6}"))
            .unwrap_or_default();
        let bound = self
            .bound
            .map(|b| format!("{b:.6}"))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.algorithm,
            self.n,
            self.max_degree,
            opt(&self.k),
            self.seed,
            opt(&self.value),
            opt(&self.oracle_value),
            opt(&self.ratio_exact),
            ratio,
            bound,
            opt(&self.bound_satisfied),
            opt(&self.wall_ms),
            opt(&self.error).replace(',', ";"),
        )
    }
}

pub fn run(args: ExperimentArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config: Config = serde_json::from_str(&text).context("parsing experiment config")?;

    let mut rows = Vec::new();
    for instance in &config.instances {
        let graph = instance.build();
        for algorithm in &config.algorithms {
            for &seed in &config.seeds {
                let mut row = Row {
                    instance: instance.id(),
                    algorithm: algorithm.name(),
                    k: algorithm.k(),
                    seed,
                    ..Row::default()
                };
                match &graph {
                    Ok(g) => {
                        row.n = g.node_count();
                        row.max_degree = g.max_degree();
                        let started = Instant::now();
                        run_row(g, algorithm, seed, config.oracle, &mut row);
                        if args.timings {
                            row.wall_ms = Some(started.elapsed().as_millis());
                        } else {
                            row.wall_ms = Some(0);
                        }
                    }
                    Err(e) => row.error = Some(format!("{e:#}")),
                }
                rows.push(row);
            }
        }
    }

    let mut csv = String::new();
    let _ = writeln!(csv, "{HEADER}");
    for row in &rows {
        let _ = writeln!(csv, "{}", row.csv_line());
    }

    // Summary block.
    let with_ratio: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let violations = rows.iter().filter(|r| r.violation).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let _ = writeln!(
        csv,
        "# rows={} errors={errors} violations={violations}",
        rows.len()
    );
    if !with_ratio.is_empty() {
        let mean = with_ratio.iter().sum::<f64>() / with_ratio.len() as f64;
        let max = with_ratio.iter().cloned().fold(f64::MIN, f64::max);
        let _ = writeln!(csv, "# mean_ratio={mean:.6} max_ratio={max:.6}");
    }

    let destination = args.out.or(config.output);
    match destination {
        Some(path) => {
            fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(if violations == 0 { 0 } else { 1 })
}

fn run_row(g: &Graph, spec: &AlgorithmSpec, seed: u64, oracle: bool, row: &mut Row) {
    match spec {
        AlgorithmSpec::Mvc { k } => match mvc_fmm(g, *k) {
            Ok(result) => {
                let cover = result.cover.len() as u64;
                row.value = Some(cover);
                if !result.checks.all_hold() {
                    row.violation = true;
                    row.error = Some("internal checks failed".into());
                }
                let delta = g.max_degree() as u64;
                row.bound = Some(3.0 + (delta as f64).powf(1.0 / *k as f64));
                if oracle {
                    match exact_solve_with_budget(Problem::MinVertexCover, g, 64) {
                        Ok(sol) => {
                            row.oracle_value = Some(sol.value);
                            fill_ratio(row, cover, sol.value);
                            // Exact test of cover <= (3 + delta^(1/k)) opt:
                            // (cover - 3 opt)^k <= delta opt^k.
                            let ok = if cover <= 3 * sol.value {
                                true
                            } else {
                                let excess = BigUint::from(cover - 3 * sol.value);
                                excess.pow(*k) <= BigUint::from(delta) * BigUint::from(sol.value).pow(*k)
                            };
                            row.bound_satisfied = Some(ok);
                            if !ok {
                                row.violation = true;
                            }
                        }
                        Err(e) => row.error = Some(format!("oracle: {e}")),
                    }
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        },
        AlgorithmSpec::Mds {
            ell,
            p,
            radius,
            lambda,
        } => {
            let params = MdsParams {
                lp: LpParams {
                    ell: *ell,
                    p: *p,
                    radius: *radius,
                },
                lambda: *lambda,
            };
            match mds_pipeline(g, params, seed) {
                Ok(run) => {
                    let size = run.dominating_set.len() as u64;
                    row.value = Some(size);
                    if !is_dominating_set(g, &run.dominating_set) {
                        row.violation = true;
                        row.error = Some("output does not dominate".into());
                    }
                    if oracle {
                        match exact_solve_with_budget(Problem::MinDominatingSet, g, 32) {
                            Ok(sol) => {
                                row.oracle_value = Some(sol.value);
                                fill_ratio(row, size, sol.value);
                            }
                            Err(e) => row.error = Some(format!("oracle: {e}")),
                        }
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
        }
        AlgorithmSpec::Mcds {
            k,
            ell,
            p,
            radius,
            lambda,
        } => {
            let params = McdsParams {
                mds: MdsParams {
                    lp: LpParams {
                        ell: *ell,
                        p: *p,
                        radius: *radius,
                    },
                    lambda: *lambda,
                },
                k: *k,
            };
            match mcds_pipeline(g, params, seed) {
                Ok(run) => {
                    let size = run.cds.len() as u64;
                    row.value = Some(size);
                    if !is_dominating_set(g, &run.cds) || !induces_connected(g, &run.cds) {
                        row.violation = true;
                        row.error = Some("output is not a connected dominating set".into());
                    }
                    if oracle {
                        match exact_solve_with_budget(
                            Problem::MinConnectedDominatingSet,
                            g,
                            32,
                        ) {
                            Ok(sol) => {
                                row.oracle_value = Some(sol.value);
                                fill_ratio(row, size, sol.value);
                            }
                            Err(e) => row.error = Some(format!("oracle: {e}")),
                        }
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
        }
    }
}

fn fill_ratio(row: &mut Row, value: u64, oracle: u64) {
    if oracle > 0 {
        let g = num::integer::gcd(value, oracle);
        row.ratio_exact = Some(if oracle == g {
            format!("{}", value / g)
        } else {
            format!("{}/{}", value / g, oracle / g)
        });
        row.ratio = Some(value as f64 / oracle as f64);
    }
}
