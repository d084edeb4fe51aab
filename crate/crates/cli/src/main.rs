//! `teamsel` — team selection by test scores from the command line.
//!
//! Verbs: `score` a pool, `select` a team, generate `adversary` instances,
//! run `verify` suites, and `reduce` Set Cover files to team instances.

mod error;
mod pool;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use error::{CliError, CliResult};
use pool::{from_instance, read_pool, to_instance, write_pool};
use teamsel::adversary::{
    best_cover_team_value, canonical_tightness_instance, cardinality_adversary, clique_adversary,
    cover_decision, hill_climb_counterexample, SetCoverInstance, SetSystemCandidate,
};
use teamsel::analysis::{
    greedy_condition_suite, lemma_suite, ratio_experiment, submodularity_suite,
    supermodular_control_violations, swap_lemma_suite, theorem_suite, trial_rng,
    wb_equivalence_suite, RatioExperimentConfig, TrialRecord,
};
use teamsel::select::{attach_oracle, select_with_method, TestScore};
use teamsel::Method;

#[derive(Parser)]
#[command(name = "teamsel", version, about = "Team selection by test scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized procedure.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the command's primary document here instead of its default.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on brute-force subset enumeration.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print per-candidate test scores for a pool file.
    Score {
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, value_enum)]
        method: ScoreMethodArg,
    },
    /// Select a team from a pool file and report its value.
    Select {
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, value_enum)]
        method: SelectMethodArg,
        /// Also run the brute-force oracle and report the achieved ratio.
        #[arg(long)]
        oracle: bool,
    },
    /// Generate an adversarial instance and report selected vs optimal.
    Adversary {
        #[command(subcommand)]
        kind: AdversaryCmd,
    },
    /// Run a verification suite; exits 0 only with zero violations.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        trials: Option<usize>,
        /// For the submodular suite: run the supermodular control instead
        /// (expected to fail, demonstrating detector sensitivity).
        #[arg(long)]
        control: bool,
        /// For the ratios suite: also write per-trial rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Read a Set Cover text file, build the team instance, and decide it.
    Reduce {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreMethodArg {
    Canonical,
    Potential,
    Conditional,
}

impl ScoreMethodArg {
    fn test_score(self) -> TestScore {
        match self {
            ScoreMethodArg::Canonical => TestScore::Canonical,
            ScoreMethodArg::Potential => TestScore::Potential,
            ScoreMethodArg::Conditional => TestScore::Conditional,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectMethodArg {
    Canonical,
    Potential,
    Conditional,
    Greedy,
    Brute,
    Wb,
}

impl SelectMethodArg {
    fn method(self) -> Method {
        match self {
            SelectMethodArg::Canonical => Method::Canonical,
            SelectMethodArg::Potential => Method::Potential,
            SelectMethodArg::Conditional => Method::Conditional,
            SelectMethodArg::Greedy => Method::Greedy,
            SelectMethodArg::Brute => Method::BruteForce,
            SelectMethodArg::Wb => Method::WbGreedy,
        }
    }
}

#[derive(Subcommand)]
enum AdversaryCmd {
    /// The pool on which canonical selection approaches its k/h worst case.
    Tightness(TightnessArgs),
    /// The fixed three-candidate pool defeating greedy hill-climbing.
    Hillclimb,
    /// Coverage fooling set for a chosen vertex test.
    Cardinality {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SetTestArg::Constant)]
        test: SetTestArg,
    },
    /// Induced-edge fooling set for a chosen vertex test.
    Clique {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = VertexTestArg::Constant)]
        test: VertexTestArg,
    },
    /// Random Set Cover instance in the text format.
    Setcover {
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        subsets: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct TightnessArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetTestArg {
    Constant,
    Size,
    Sum,
    Min,
    Hash,
}

impl SetTestArg {
    fn closure(self) -> Box<dyn Fn(&SetSystemCandidate) -> f64> {
        match self {
            SetTestArg::Constant => Box::new(|_| 1.0),
            SetTestArg::Size => Box::new(|c| c.elements.len() as f64),
            SetTestArg::Sum => Box::new(|c| c.elements.iter().sum::<u64>() as f64),
            SetTestArg::Min => {
                Box::new(|c| c.elements.iter().next().copied().unwrap_or(0) as f64)
            }
            SetTestArg::Hash => Box::new(|c| fnv(&c.id)),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VertexTestArg {
    Constant,
    Hash,
    Index,
    Length,
}

impl VertexTestArg {
    fn closure(self) -> Box<dyn Fn(&str) -> f64> {
        match self {
            VertexTestArg::Constant => Box::new(|_| 1.0),
            VertexTestArg::Hash => Box::new(fnv),
            VertexTestArg::Index => {
                Box::new(|v| v[v.len() - 2..].parse::<f64>().unwrap_or(0.0))
            }
            VertexTestArg::Length => Box::new(|v| v.len() as f64),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Theorems,
    Submodular,
    Ratios,
    Wb,
    Swaps,
    Condition,
}

fn fnv(s: &str) -> f64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    (h % 1009) as f64
}

/// 12 significant digits, the precision of every emitted numeric.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::write(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let Cli {
        command,
        seed,
        out,
        budget,
    } = cli;
    let out = out.as_deref();
    let budget = budget as u128;
    match command {
        Command::Score { pool, k, h, method } => {
            let file = read_pool(&pool)?;
            let instance = to_instance(&file, k, h)?;
            let score = method.test_score();
            let mut rows = instance
                .pool()
                .iter()
                .map(|c| {
                    score
                        .score(&c.rv, instance.k(), instance.h())
                        .map(|s| (c.id.clone(), s))
                        .map_err(CliError::from)
                })
                .collect::<CliResult<Vec<_>>>()?;
            rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let mut table = String::new();
            for (id, s) in rows {
                table.push_str(&format!("{id}\t{}\n", sig12(s)));
            }
            emit(out, &table)?;
            Ok(0)
        }

        Command::Select {
            pool,
            k,
            h,
            method,
            oracle,
        } => {
            let file = read_pool(&pool)?;
            let instance = to_instance(&file, k, h)?;
            let method = method.method();
            if method == Method::WbGreedy && instance.h() != 1 {
                return Err(CliError::InvalidParams(
                    "wb selection maximizes the expected maximum; h must be 1".into(),
                ));
            }
            let mut report = select_with_method(&instance, method, budget)?;
            if oracle && report.optimal_value.is_none() {
                attach_oracle(&mut report, &instance, budget)?;
            }
            let doc = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::ReportWrite(e.to_string()))?;
            emit(out, &(doc + "\n"))?;
            Ok(0)
        }

        Command::Adversary { kind } => run_adversary(kind, seed, out, budget),

        Command::Verify {
            suite,
            trials,
            control,
            csv,
        } => run_verify(suite, trials, control, csv, seed, out),

        Command::Reduce { input } => {
            let text =
                std::fs::read_to_string(&input).map_err(|e| CliError::read(&input, e))?;
            let inst = SetCoverInstance::from_text(&text).map_err(CliError::from)?;
            let coverable = cover_decision(&inst)?;
            let best = best_cover_team_value(&inst)?;
            let doc = json!({
                "universe_size": inst.universe.len(),
                "num_subsets": inst.subsets.len(),
                "k": inst.k,
                "coverable": coverable,
                "best_team_value": sig12(best),
                "criteria_agree": coverable == (best >= 1.0 - 1e-12),
            });
            emit(
                out,
                &(serde_json::to_string_pretty(&doc)
                    .map_err(|e| CliError::ReportWrite(e.to_string()))?
                    + "\n"),
            )?;
            Ok(0)
        }
    }
}

fn run_adversary(
    kind: AdversaryCmd,
    seed: u64,
    out: Option<&Path>,
    budget: u128,
) -> CliResult<u8> {
    match kind {
        AdversaryCmd::Tightness(args) => {
            let instance = canonical_tightness_instance(args.k, args.h, args.n, args.epsilon)?;
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("tightness_pool.json"));
            write_pool(&path, &from_instance(&instance))?;
            let mut report = select_with_method(&instance, Method::Canonical, budget)?;
            attach_oracle(&mut report, &instance, budget)?;
            println!("instance written to {}", path.display());
            println!(
                "canonical selection value {} vs optimal {} (ratio {}, bound {})",
                sig12(report.team_value),
                sig12(report.optimal_value.unwrap()),
                sig12(report.ratio.unwrap()),
                sig12(report.bound),
            );
            Ok(0)
        }
        AdversaryCmd::Hillclimb => {
            let instance = hill_climb_counterexample();
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("hillclimb_pool.json"));
            write_pool(&path, &from_instance(&instance))?;
            let greedy = select_with_method(&instance, Method::Greedy, budget)?;
            let brute = select_with_method(&instance, Method::BruteForce, budget)?;
            println!("instance written to {}", path.display());
            println!(
                "greedy team {:?} value {} vs optimal team {:?} value {}",
                greedy.team,
                sig12(greedy.team_value),
                brute.team,
                sig12(brute.team_value),
            );
            Ok(0)
        }
        AdversaryCmd::Cardinality { k, test } => {
            let game = cardinality_adversary(test.closure(), k)?;
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("cardinality_fooling.txt"));
            let mut text = String::new();
            for c in &game.fooling_pool {
                let elems: Vec<String> = c.elements.iter().map(|e| e.to_string()).collect();
                text.push_str(&format!("{}\t{}\n", c.id, elems.join(" ")));
            }
            std::fs::write(&path, text).map_err(|e| CliError::write(&path, e))?;
            println!("fooling pool written to {}", path.display());
            println!(
                "selected coverage {} vs optimal {} (teams {:?} vs {:?})",
                game.selected_value, game.optimal_value, game.selected_team, game.optimal_team,
            );
            Ok(0)
        }
        AdversaryCmd::Clique { k, test } => {
            let game = clique_adversary(test.closure(), k)?;
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("clique_fooling.txt"));
            let text: String = game
                .fooling_vertices
                .iter()
                .map(|v| format!("{v}\n"))
                .collect();
            std::fs::write(&path, text).map_err(|e| CliError::write(&path, e))?;
            println!("fooling vertices written to {}", path.display());
            println!(
                "selected edges {} vs optimal {} (teams {:?} vs {:?})",
                game.selected_edges, game.optimal_edges, game.selected_team, game.optimal_team,
            );
            Ok(0)
        }
        AdversaryCmd::Setcover {
            universe,
            subsets,
            k,
        } => {
            if universe < 1 || subsets < 1 || k < 1 {
                return Err(CliError::InvalidParams(
                    "universe, subsets and k must all be at least 1".into(),
                ));
            }
            let mut rng = trial_rng(seed, 0);
            let inst = SetCoverInstance::random(&mut rng, universe, subsets, k);
            let path = out
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("setcover_instance.txt"));
            std::fs::write(&path, inst.to_text()).map_err(|e| CliError::write(&path, e))?;
            let coverable = cover_decision(&inst)?;
            let best = best_cover_team_value(&inst)?;
            println!("instance written to {}", path.display());
            println!(
                "coverable with {k} subsets: {coverable} (best team value {})",
                sig12(best)
            );
            Ok(0)
        }
    }
}

fn csv_rows(records: &[TrialRecord], trial_offset: usize, out: &mut String) {
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            trial_offset + r.trial,
            r.method,
            sig12(r.team_value),
            sig12(r.optimal_value),
            sig12(r.ratio),
            sig12(r.bound),
            r.violation,
        ));
    }
}

fn run_verify(
    suite: SuiteArg,
    trials: Option<usize>,
    control: bool,
    csv: Option<PathBuf>,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<u8> {
    let (name, trials, violations, details) = match suite {
        SuiteArg::Lemmas => {
            let t = trials.unwrap_or(10_000);
            let o = lemma_suite(t, seed);
            ("lemmas", o.trials, o.violations, json!({}))
        }
        SuiteArg::Theorems => {
            let t = trials.unwrap_or(1_000);
            let o = theorem_suite(t, seed);
            ("theorems", o.trials, o.violations, json!({}))
        }
        SuiteArg::Submodular => {
            let t = trials.unwrap_or(10_000);
            if control {
                let v = supermodular_control_violations(t.min(1_000), seed);
                (
                    "submodular",
                    t.min(1_000),
                    v,
                    json!({"control": "supermodular edge count"}),
                )
            } else {
                let o = submodularity_suite(t, seed);
                ("submodular", o.trials, o.violations, json!({}))
            }
        }
        SuiteArg::Ratios => {
            let t = trials.unwrap_or(500);
            let mut total_violations = 0;
            let mut summaries = Vec::new();
            let mut csv_text = String::from(
                "trial,method,team_value,optimal_value,ratio,bound,violation\n",
            );
            let mut offset = 0;
            for (i, h) in [1usize, 2].into_iter().enumerate() {
                let per = if i == 0 { t - t / 2 } else { t / 2 };
                if per == 0 {
                    continue;
                }
                let config =
                    RatioExperimentConfig::new(per, 10, 4, h, seed.wrapping_add(i as u64));
                let result = ratio_experiment(&config)?;
                total_violations += result.total_violations();
                csv_rows(&result.records, offset, &mut csv_text);
                offset += per;
                summaries.push(json!({
                    "h": h,
                    "pools": per,
                    "methods": result.summaries,
                }));
            }
            if let Some(path) = csv {
                std::fs::write(&path, csv_text).map_err(|e| CliError::write(&path, e))?;
            }
            (
                "ratios",
                t,
                total_violations,
                json!({"experiments": summaries}),
            )
        }
        SuiteArg::Wb => {
            let t = trials.unwrap_or(500);
            let o = wb_equivalence_suite(t, seed);
            ("wb", o.trials, o.violations, json!({}))
        }
        SuiteArg::Swaps => {
            let t = trials.unwrap_or(100_000);
            let o = swap_lemma_suite(t, seed);
            ("swaps", o.trials, o.violations, json!({}))
        }
        SuiteArg::Condition => {
            let t = trials.unwrap_or(50);
            let o = greedy_condition_suite(t, seed);
            ("condition", o.trials, o.violations, json!({}))
        }
    };
    let report = json!({
        "suite": name,
        "seed": seed,
        "trials": trials,
        "violations": violations,
        "pass": violations == 0,
        "details": details,
    });
    emit(
        out,
        &(serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::ReportWrite(e.to_string()))?
            + "\n"),
    )?;
    Ok(u8::from(violations != 0))
}
