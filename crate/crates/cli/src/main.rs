use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use hbrauer::formats;
use hbrauer::store::TableStore;
use hbrauer_core::diagram::PairPartition;
use hbrauer_core::height::{
    check_closure, count_left_simple, partition_height, HeightCache, SearchBudget,
};
use hbrauer_core::reptheory::{index_set, semisimplicity_report, SimpleLabel, StandardModule};
use hbrauer_core::symgrp::IntPartition;
use hbrauer_core::{bratteli, exact};

/// Exact computations in the height-bounded Brauer diagram categories.
#[derive(Parser)]
#[command(name = "hbrauer", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for memoized height tables (or set HBRAUER_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for table building.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    /// Integer partition, comma separated: --lambda 2,1
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
    lambda: Vec<String>,
}

impl LabelArgs {
    fn label(&self) -> Result<SimpleLabel, String> {
        let mut parts = Vec::new();
        for s in &self.lambda {
            let s = s.trim();
            if s.is_empty() {
                continue;
            }
            parts.push(s.parse::<usize>().map_err(|_| format!("bad lambda part: {s}"))?);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err("lambda must be a weakly decreasing positive sequence".into());
        }
        Ok(SimpleLabel {
            p: self.p,
            lambda: IntPartition::new(parts),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all pair partitions of (n, m) with their heights.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Write the full JSON-lines table here (stdout shows the summary).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Height of one diagram, given as JSON.
    Height {
        /// e.g. '{"n":2,"m":2,"blocks":[[1,-2],[2,-1]]}'
        #[arg(long)]
        diagram: String,
    },
    /// Compose two diagrams (stack the first over the second).
    Compose {
        #[arg(long)]
        top: String,
        #[arg(long)]
        bottom: String,
    },
    /// Gram matrix of a standard module, as CSV plus a JSON summary.
    Gram {
        #[command(flatten)]
        label: LabelArgs,
        /// Also factor the determinant.
        #[arg(long)]
        det: bool,
        /// Rank the form at these loop values (exact rationals like 3/2).
        #[arg(long = "delta")]
        deltas: Vec<String>,
    },
    /// Semisimplicity report for one algebra.
    Dims {
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long)]
        n: usize,
        #[arg(long = "delta")]
        deltas: Vec<String>,
    },
    /// Branching graph export.
    Rollet {
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Property suites; exits nonzero on any violation.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        l: i64,
        #[arg(long)]
        n: usize,
        /// Sample count for randomized suites (exhaustive when omitted).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let store = TableStore::from_env(cli.cache_dir.clone(), cli.jobs);
    match run(cli, store) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_deltas(raw: &[String]) -> Result<Vec<BigRational>, String> {
    raw.iter()
        .map(|s| formats::parse_rational(s).map_err(|e| e.to_string()))
        .collect()
}

fn run(cli: Cli, store: TableStore) -> Result<ExitCode, String> {
    match cli.command {
        Command::Enumerate { n, m, out } => {
            if (n + m) % 2 == 1 {
                println!("{}", json!({"n": n, "m": m, "total": 0, "histogram": {}}));
                return Ok(ExitCode::SUCCESS);
            }
            if n + m > 14 {
                return Err(format!("J({n},{m}) exceeds the desk-scale cap"));
            }
            let table = store.table(n, m);
            if let Some(path) = &out {
                std::fs::write(path, formats::table_to_jsonl(&table))
                    .map_err(|e| e.to_string())?;
            }
            println!(
                "{}",
                json!({
                    "n": n,
                    "m": m,
                    "total": table.len(),
                    "histogram": formats::histogram_json(&table),
                    "table": out.map(|p| p.display().to_string()),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Height { diagram } => {
            let d = formats::parse_diagram_arg(&diagram).map_err(|e| e.to_string())?;
            let p = PairPartition::new(d.diagram).map_err(|e| e.to_string())?;
            let r = partition_height(&p, &SearchBudget::for_arity(p.n(), p.m()));
            println!("{}", formats::height_record(&p, &r));
            Ok(ExitCode::SUCCESS)
        }
        Command::Compose { top, bottom } => {
            let a = formats::parse_diagram_arg(&top).map_err(|e| e.to_string())?;
            let b = formats::parse_diagram_arg(&bottom).map_err(|e| e.to_string())?;
            let c = a.compose(&b).map_err(|e| e.to_string())?;
            println!("{}", formats::scaled_diagram_to_json(&c));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gram { label, det, deltas } => {
            let lab = label.label()?;
            let deltas = parse_deltas(&deltas)?;
            if !index_set(label.l, label.n).contains(&lab) {
                return Err(format!(
                    "label (p={}, lambda={}) is not valid for l={}, n={}",
                    lab.p, lab.lambda, label.l, label.n
                ));
            }
            let mut cache = HeightCache::new();
            store.fill_cache(&mut cache, &[(label.n, lab.p)]);
            let module = StandardModule::new(label.l, label.n, lab.clone(), &mut cache)
                .map_err(|e| e.to_string())?;
            let gram = module.gram_matrix().map_err(|e| e.to_string())?;
            print!("{}", formats::matrix_to_csv(&gram));
            let mut summary = json!({
                "l": label.l,
                "n": label.n,
                "p": lab.p,
                "lambda": lab.lambda.parts(),
                "dim": module.dim(),
                "basis": formats::module_basis_json(&module),
            });
            if det {
                let d = gram.det_fraction_free().map_err(|e| e.to_string())?;
                let f = exact::factor(&d).map_err(|e| e.to_string())?;
                summary["det"] = json!(d.to_string());
                summary["factorization"] = formats::roots_json(&f);
            }
            if !deltas.is_empty() {
                summary["ranks_at"] = json!(deltas
                    .iter()
                    .map(|x| json!({
                        "delta": formats::rational_to_string(x),
                        "rank": gram.rank_at(x)
                    }))
                    .collect::<Vec<_>>());
            }
            println!("{summary}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Dims { l, n, deltas } => {
            let deltas = parse_deltas(&deltas)?;
            let mut cache = HeightCache::new();
            if l >= 0 {
                let mut arities: Vec<(usize, usize)> = index_set(l, n)
                    .iter()
                    .filter(|lab| lab.p < n)
                    .map(|lab| (n, lab.p))
                    .collect();
                arities.push((n, n));
                store.fill_cache(&mut cache, &arities);
            }
            let report =
                semisimplicity_report(l, n, &deltas, &mut cache).map_err(|e| e.to_string())?;
            println!("{}", formats::semisimplicity_json(&report));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rollet { l, radius, format } => {
            let g = bratteli::build_rollet(l, radius);
            match format.as_str() {
                "dot" => print!("{}", formats::rollet_to_dot(&g)),
                "json" => println!("{}", formats::rollet_to_json(&g)),
                other => return Err(format!("unknown format: {other} (dot|json)")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            suite,
            l,
            n,
            samples,
            seed,
        } => {
            let mut cache = HeightCache::new();
            let pass = match suite.as_str() {
                "closure" => {
                    store.fill_cache(&mut cache, &[(n, n)]);
                    let report = check_closure(l, n, samples.map(|s| (s, seed)), &mut cache);
                    println!(
                        "{}",
                        formats::closure_json(&report, l, n, samples.map(|_| seed))
                    );
                    report.violations.is_empty()
                }
                "dims" => {
                    if l >= 0 {
                        let mut arities: Vec<(usize, usize)> = index_set(l, n)
                            .iter()
                            .filter(|lab| lab.p < n)
                            .map(|lab| (n, lab.p))
                            .collect();
                        arities.push((n, n));
                        store.fill_cache(&mut cache, &arities);
                    }
                    let audit =
                        bratteli::dimension_audit(l, n, &mut cache).map_err(|e| e.to_string())?;
                    println!("{}", formats::audit_json(&audit));
                    audit.passes()
                }
                "blob" => {
                    store.fill_cache(&mut cache, &[(n, n)]);
                    let report =
                        count_left_simple(n, 0, &SearchBudget::for_arity(n, n), &mut cache);
                    let expected = binomial(2 * (n - 1), n - 1);
                    println!("{}", formats::blob_json(&report, n, expected));
                    report.count == expected
                }
                other => return Err(format!("unknown suite: {other} (closure|dims|blob)")),
            };
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
