//! Randomized verification suites for the structural claims behind the
//! selection guarantees: submodularity of the team value, the quantile and
//! sandwich inequalities feeding the potential-score analysis, the
//! approximation-ratio ceilings of each selection method, and the exchange
//! properties that make greedy exactly optimal on weighted Bernoulli pools.
//!
//! Every suite is deterministic: trial `t` under seed `s` draws from the
//! dedicated stream `(s, t)`, so trials are independent of each other and
//! of execution order.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rv::{Candidate, DiscreteRv, WeightedBernoulli};
use crate::select::{
    brute_force_optimal_with_budget, n_choose_k, ratio_of, select_with_method, Method,
};
use crate::team::{expected_max, expected_top_h, DependentEnsemble, TeamInstance};
use crate::TOL;

/// RNG for trial `stream` of a seeded suite.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Distribution family for randomly generated pools: support sizes uniform
/// in `support`, values uniform in `(0, value_max)`, masses a uniform
/// simplex point scaled by a total drawn from `total_mass` (so the
/// residual-at-zero path is routinely exercised).
#[derive(Debug, Clone)]
pub struct PoolModel {
    pub support: (usize, usize),
    pub value_max: f64,
    pub total_mass: (f64, f64),
}

impl Default for PoolModel {
    fn default() -> Self {
        PoolModel {
            support: (1, 5),
            value_max: 10.0,
            total_mass: (0.2, 1.0),
        }
    }
}

pub fn random_rv<R: Rng>(rng: &mut R, model: &PoolModel) -> DiscreteRv {
    let size = rng.random_range(model.support.0..=model.support.1);
    let values: Vec<f64> = (0..size)
        .map(|_| rng.random_range(0.0..model.value_max))
        .collect();
    let total = rng.random_range(model.total_mass.0..=model.total_mass.1);
    // normalized exponentials give a uniform point on the simplex
    let weights: Vec<f64> = (0..size)
        .map(|_| -(1.0 - rng.random::<f64>()).ln().max(1e-12))
        .collect();
    let sum: f64 = weights.iter().sum();
    let masses: Vec<f64> = weights.iter().map(|w| w / sum * total).collect();
    DiscreteRv::new(values, masses).expect("generator output is valid by construction")
}

pub fn random_pool<R: Rng>(rng: &mut R, n: usize, model: &PoolModel) -> Vec<Candidate> {
    (1..=n)
        .map(|i| Candidate::new(format!("c{i:02}"), random_rv(rng, model)))
        .collect()
}

pub fn random_wb<R: Rng>(rng: &mut R) -> WeightedBernoulli {
    WeightedBernoulli::new(rng.random::<f64>(), rng.random_range(0.0..10.0))
        .expect("generator output is valid by construction")
}

pub fn random_wb_pool<R: Rng>(rng: &mut R, n: usize) -> Vec<(String, WeightedBernoulli)> {
    (1..=n)
        .map(|i| (format!("w{i:02}"), random_wb(rng)))
        .collect()
}

/// Violations found and trials run by a randomized suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub trials: usize,
    pub violations: usize,
}

// ---------------------------------------------------------------------------
// Submodularity
// ---------------------------------------------------------------------------

/// Draws a random instance of the diminishing-returns inequality: a set `S`
/// with a distinguished member `y` (so `A = S without y`) and an outsider
/// `x`. Requires `n >= 2`.
fn sample_submodularity_case<R: Rng>(rng: &mut R, n: usize) -> (Vec<usize>, usize, usize) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let size = rng.random_range(1..n);
    let s = idx[..size].to_vec();
    let x = idx[size];
    let y = s[rng.random_range(0..size)];
    (s, y, x)
}

fn is_diminishing(f_sx: f64, f_s: f64, f_ax: f64, f_a: f64) -> bool {
    f_sx - f_s <= f_ax - f_a + TOL
}

/// Samples the diminishing-returns inequality for the top-`h` sum at single
/// sample points of the ensemble. Ensembles with fewer than two candidates
/// are vacuously fine.
pub fn check_pointwise_submodularity(
    ensemble: &DependentEnsemble,
    h: usize,
    trials: usize,
    seed: u64,
) -> usize {
    let ids = ensemble.candidate_ids();
    let n = ids.len();
    if n < 2 {
        return 0;
    }
    let team = |indices: &[usize]| -> Vec<String> {
        indices.iter().map(|&i| ids[i].clone()).collect()
    };
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let (s, y, x) = sample_submodularity_case(&mut rng, n);
        let omega = rng.random_range(0..ensemble.num_outcomes());
        let a: Vec<usize> = s.iter().copied().filter(|&i| i != y).collect();
        let mut sx = s.clone();
        sx.push(x);
        let mut ax = a.clone();
        ax.push(x);
        let value = |idx: &[usize]| {
            ensemble
                .top_h_at(&team(idx), h, omega)
                .expect("ids and outcome index are in range")
        };
        if !is_diminishing(value(&sx), value(&s), value(&ax), value(&a)) {
            violations += 1;
        }
    }
    violations
}

/// Same inequality with the exact expected top-`h` sum over an independent
/// pool in place of the pointwise value.
pub fn check_submodularity_expectation(
    pool: &[Candidate],
    h: usize,
    trials: usize,
    seed: u64,
) -> usize {
    let n = pool.len();
    if n < 2 {
        return 0;
    }
    let value = |idx: &[usize]| {
        expected_top_h(idx.iter().map(|&i| &pool[i].rv), h).expect("h >= 1")
    };
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let (s, y, x) = sample_submodularity_case(&mut rng, n);
        let a: Vec<usize> = s.iter().copied().filter(|&i| i != y).collect();
        let mut sx = s.clone();
        sx.push(x);
        let mut ax = a.clone();
        ax.push(x);
        if !is_diminishing(value(&sx), value(&s), value(&ax), value(&a)) {
            violations += 1;
        }
    }
    violations
}

/// Generic detector over an arbitrary set function on `{0, .., n-1}`.
pub fn submodularity_violations<F>(n: usize, f: F, trials: usize, seed: u64) -> usize
where
    F: Fn(&[usize]) -> f64,
{
    if n < 2 {
        return 0;
    }
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let (s, y, x) = sample_submodularity_case(&mut rng, n);
        let a: Vec<usize> = s.iter().copied().filter(|&i| i != y).collect();
        let mut sx = s.clone();
        sx.push(x);
        let mut ax = a.clone();
        ax.push(x);
        if !is_diminishing(f(&sx), f(&s), f(&ax), f(&a)) {
            violations += 1;
        }
    }
    violations
}

/// Control detector: the induced-edge count of a triangle is supermodular,
/// so the detector must fire on it.
pub fn supermodular_control_violations(trials: usize, seed: u64) -> usize {
    submodularity_violations(
        3,
        |s| (s.len() * s.len().saturating_sub(1) / 2) as f64,
        trials,
        seed,
    )
}

// ---------------------------------------------------------------------------
// Quantile and team-value bounds
// ---------------------------------------------------------------------------

/// One evaluated inequality `lhs <= rhs` (up to tolerance).
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + TOL
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().filter(|c| !c.holds()).count()
    }

    pub fn all_hold(&self) -> bool {
        self.violations() == 0
    }
}

fn quantile_retention() -> f64 {
    1.0 - (-0.5f64).exp()
}

/// Evaluates the quantile inequalities tying a variable's top `h/2k` mass
/// to its potential score:
///
/// - restricting to the top quantile keeps at least a `1 - 1/sqrt(e)`
///   fraction of the potential score;
/// - for variables with total mass at most `h/2k`, the expectation is
///   sandwiched between `h/k` and `2h/k` times the potential score;
/// - the conditional mean over the top quantile is at most four times the
///   potential score;
/// - every value outside the top quantile is below
///   `potential / (1 - 1/sqrt(e))`.
pub fn verify_lemma_bounds(rv: &DiscreteRv, k: usize, h: usize) -> Result<BoundReport> {
    let alpha = h as f64 / (2.0 * k as f64);
    let potential = rv.potential_score(k, h)?;
    let split = rv.split_top_quantile(alpha)?;
    let retain = quantile_retention();

    let mut checks = vec![
        BoundCheck {
            name: "top quantile retains potential",
            lhs: retain * potential,
            rhs: split.top.potential_score(k, h)?,
        },
        BoundCheck {
            name: "conditional mean at most 4x potential",
            lhs: split.top.expectation() / alpha,
            rhs: 4.0 * potential,
        },
        BoundCheck {
            name: "tail values below potential / (1 - 1/sqrt(e))",
            lhs: split.tail.max_value(),
            rhs: potential / retain,
        },
    ];
    if rv.total_mass() <= alpha + crate::rv::MASS_TOLERANCE {
        let ratio = h as f64 / k as f64;
        checks.push(BoundCheck {
            name: "mass sandwich lower",
            lhs: ratio * potential,
            rhs: rv.expectation(),
        });
        checks.push(BoundCheck {
            name: "mass sandwich upper",
            lhs: rv.expectation(),
            rhs: 2.0 * ratio * potential,
        });
    }
    Ok(BoundReport { checks })
}

/// Evaluates the two-sided team-value bound for a pool of exactly `k`
/// variables: with `c` the largest (resp. smallest) potential score in the
/// pool,
///
/// ```text
/// value <= 2 h c_max + h c_max / (1 - 1/sqrt(e))
/// value >= 2 h c_min (1 - 1/sqrt(e))^2
/// ```
pub fn verify_theorem_bounds(pool: &[DiscreteRv], k: usize, h: usize) -> Result<BoundReport> {
    if pool.len() != k {
        return Err(Error::InvalidParams(format!(
            "pool of exactly k={k} variables required, got {}",
            pool.len()
        )));
    }
    let retain = quantile_retention();
    let mut c_max = 0.0f64;
    let mut c_min = f64::INFINITY;
    for rv in pool {
        let f = rv.potential_score(k, h)?;
        c_max = c_max.max(f);
        c_min = c_min.min(f);
    }
    let value = expected_top_h(pool.iter(), h)?;
    let hf = h as f64;
    Ok(BoundReport {
        checks: vec![
            BoundCheck {
                name: "team value upper bound",
                lhs: value,
                rhs: 2.0 * hf * c_max + hf * c_max / retain,
            },
            BoundCheck {
                name: "team value lower bound",
                lhs: 2.0 * hf * c_min * retain * retain,
                rhs: value,
            },
        ],
    })
}

// ---------------------------------------------------------------------------
// Ratio experiments
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RatioExperimentConfig {
    pub trials: usize,
    pub pool_size: usize,
    pub k: usize,
    pub h: usize,
    pub model: PoolModel,
    pub seed: u64,
    pub budget: u128,
}

impl RatioExperimentConfig {
    pub fn new(trials: usize, pool_size: usize, k: usize, h: usize, seed: u64) -> Self {
        RatioExperimentConfig {
            trials,
            pool_size,
            k,
            h,
            model: PoolModel::default(),
            seed,
            budget: crate::select::DEFAULT_BRUTE_BUDGET,
        }
    }
}

/// One selection run inside a ratio experiment.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub method: Method,
    pub team_value: f64,
    pub optimal_value: f64,
    pub ratio: f64,
    pub bound: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub bound: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioExperimentResult {
    pub trials: usize,
    pub summaries: Vec<MethodSummary>,
    pub records: Vec<TrialRecord>,
}

impl RatioExperimentResult {
    pub fn summary(&self, method: Method) -> &MethodSummary {
        self.summaries
            .iter()
            .find(|s| s.method == method)
            .expect("every experiment method is summarized")
    }

    pub fn total_violations(&self) -> usize {
        self.summaries.iter().map(|s| s.violations).sum()
    }
}

const EXPERIMENT_METHODS: [Method; 4] = [
    Method::Canonical,
    Method::Potential,
    Method::Conditional,
    Method::Greedy,
];

/// Runs every test-score selection plus greedy against the brute-force
/// optimum over seeded random pools, recording the achieved ratios and any
/// excursions above the methods' theoretical ceilings.
pub fn ratio_experiment(config: &RatioExperimentConfig) -> Result<RatioExperimentResult> {
    if config.pool_size < config.k {
        return Err(Error::InvalidParams(format!(
            "pool size {} below team size {}",
            config.pool_size, config.k
        )));
    }
    let combos = n_choose_k(config.pool_size, config.k);
    if combos > config.budget {
        return Err(Error::BudgetExceeded(combos, config.budget));
    }
    let mut records = Vec::with_capacity(config.trials * EXPERIMENT_METHODS.len());
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let pool = random_pool(&mut rng, config.pool_size, &config.model);
        let instance = TeamInstance::new(pool, config.k, config.h)?;
        let optimal = brute_force_optimal_with_budget(&instance, config.budget)?;
        for method in EXPERIMENT_METHODS {
            let report = select_with_method(&instance, method, config.budget)?;
            let ratio = ratio_of(optimal.team_value, report.team_value);
            records.push(TrialRecord {
                trial,
                method,
                team_value: report.team_value,
                optimal_value: optimal.team_value,
                ratio,
                bound: report.bound,
                violation: ratio > report.bound + TOL,
            });
        }
    }
    let summaries = EXPERIMENT_METHODS
        .iter()
        .map(|&method| {
            let rows: Vec<&TrialRecord> =
                records.iter().filter(|r| r.method == method).collect();
            let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let mean_ratio =
                rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len().max(1) as f64;
            MethodSummary {
                method,
                bound: rows.first().map(|r| r.bound).unwrap_or(f64::NAN),
                max_ratio,
                mean_ratio,
                violations: rows.iter().filter(|r| r.violation).count(),
            }
        })
        .collect();
    Ok(RatioExperimentResult {
        trials: config.trials,
        summaries,
        records,
    })
}

// ---------------------------------------------------------------------------
// Greedy exchange condition
// ---------------------------------------------------------------------------

/// Counts violations of the exchange condition sufficient for greedy
/// optimality along the greedy trajectory of `f` over `{0, .., n-1}`: after
/// greedy has picked `S_t` and is about to add `x`, every disjoint
/// candidate completion `Z` (sized so the compared teams stay within `k`)
/// must admit some member `z` with
///
/// ```text
/// f(S_t + x + Z - z) >= f(S_t + Z)
/// ```
pub fn greedy_condition_violations<F>(n: usize, f: F, k: usize) -> usize
where
    F: Fn(&[usize]) -> f64,
{
    let mut violations = 0;
    let mut chosen: Vec<usize> = Vec::new();
    for t in 0..k.min(n) {
        // greedy step: max value, ties to the smallest index
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .max_by(|&a, &b| {
                let team_with = |i: usize| {
                    let mut team = chosen.clone();
                    team.push(i);
                    team.sort_unstable();
                    f(&team)
                };
                team_with(a)
                    .partial_cmp(&team_with(b))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .expect("t < n");
        let rest: Vec<usize> = (0..n)
            .filter(|i| !chosen.contains(i) && *i != next)
            .collect();
        for z_size in 1..=(k - t).min(rest.len()) {
            for zset in rest.iter().copied().combinations(z_size) {
                let mut with_z = chosen.clone();
                with_z.extend(&zset);
                with_z.sort_unstable();
                let rhs = f(&with_z);
                let lhs = zset
                    .iter()
                    .map(|&drop| {
                        let mut team = chosen.clone();
                        team.push(next);
                        team.extend(zset.iter().copied().filter(|&z| z != drop));
                        team.sort_unstable();
                        f(&team)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                if lhs < rhs - TOL {
                    violations += 1;
                }
            }
        }
        chosen.push(next);
    }
    violations
}

/// Exchange condition specialized to a weighted Bernoulli pool under the
/// expected maximum; true when no violation is found. Pools larger than 10
/// are refused.
pub fn check_greedy_condition(pool: &[(String, WeightedBernoulli)], k: usize) -> Result<bool> {
    if pool.len() > 10 {
        return Err(Error::BudgetExceeded(pool.len() as u128, 10));
    }
    let f = |idx: &[usize]| {
        let team: Vec<WeightedBernoulli> = idx.iter().map(|&i| pool[i].1).collect();
        expected_max(&team)
    };
    Ok(greedy_condition_violations(pool.len(), f, k) == 0)
}

// ---------------------------------------------------------------------------
// Exchange (swap) inequalities for weighted Bernoulli variables
// ---------------------------------------------------------------------------

/// Randomized check of the two substitution rules behind greedy optimality
/// on weighted Bernoulli pools:
///
/// 1. if `X` dominates `Y` in both value and expectation, swapping `X` in
///    for `Y` never lowers a team's expected maximum;
/// 2. if swapping `X` in for `Y` helps against some context team, it keeps
///    helping after the context gains members no larger than `Y` (the
///    hypothesis is rejection-sampled).
pub fn check_swap_lemmas(samples: usize, seed: u64) -> usize {
    let mut violations = 0;
    let wb = |p: f64, x: f64| WeightedBernoulli::new(p, x).expect("in range");
    for t in 0..samples {
        let mut rng = trial_rng(seed, t as u64);

        // dominance rule
        let x_val = rng.random_range(0.0..10.0);
        let y_val = rng.random_range(0.0..=x_val);
        let q = rng.random::<f64>();
        let p_floor = if x_val > 0.0 {
            (q * y_val / x_val).min(1.0)
        } else {
            0.0
        };
        let p = rng.random_range(p_floor..=1.0);
        let context: Vec<WeightedBernoulli> = (0..rng.random_range(0..=5))
            .map(|_| random_wb(&mut rng))
            .collect();
        let mut with_x = context.clone();
        with_x.push(wb(p, x_val));
        let mut with_y = context.clone();
        with_y.push(wb(q, y_val));
        if expected_max(&with_x) < expected_max(&with_y) - TOL {
            violations += 1;
        }

        // context-extension rule; hypothesis rejection-sampled
        let mut accepted = None;
        for _ in 0..64 {
            let x_val = rng.random_range(0.0..10.0);
            let y_val = rng.random_range(0.0..=x_val);
            let x = wb(rng.random::<f64>(), x_val);
            let y = wb(rng.random::<f64>(), y_val);
            let context: Vec<WeightedBernoulli> = (0..rng.random_range(0..=4))
                .map(|_| random_wb(&mut rng))
                .collect();
            let mut with_x = context.clone();
            with_x.push(x);
            let mut with_y = context.clone();
            with_y.push(y);
            if expected_max(&with_x) >= expected_max(&with_y) {
                accepted = Some((x, y, context, with_x, with_y));
                break;
            }
        }
        let Some((_, y, _, mut with_x, mut with_y)) = accepted else {
            continue;
        };
        let extras: Vec<WeightedBernoulli> = (0..rng.random_range(0..=4))
            .map(|_| wb(rng.random::<f64>(), rng.random_range(0.0..=y.value())))
            .collect();
        with_x.extend(extras.iter().copied());
        with_y.extend(extras.iter().copied());
        if expected_max(&with_x) < expected_max(&with_y) - TOL {
            violations += 1;
        }
    }
    violations
}

// ---------------------------------------------------------------------------
// Packaged suites
// ---------------------------------------------------------------------------

/// Quantile-inequality suite over random variables and parameters.
pub fn lemma_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let model = PoolModel::default();
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let rv = random_rv(&mut rng, &model);
        let k = rng.random_range(1..=8);
        let h = rng.random_range(1..=k);
        violations += verify_lemma_bounds(&rv, k, h)
            .expect("parameters in range")
            .violations();
    }
    SuiteOutcome { trials, violations }
}

/// Team-value bound suite over random pools. Parameters are drawn with `h`
/// dividing `k`, the regime in which the lower bound is proved.
pub fn theorem_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let model = PoolModel::default();
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let h = rng.random_range(1..=3);
        let k = h * rng.random_range(1..=3);
        let pool: Vec<DiscreteRv> = (0..k).map(|_| random_rv(&mut rng, &model)).collect();
        violations += verify_theorem_bounds(&pool, k, h)
            .expect("pool sized to k")
            .violations();
    }
    SuiteOutcome { trials, violations }
}

/// Splits `trials` sampled inequalities between pointwise checks on product
/// ensembles and expectation checks on independent pools, over a rotating
/// collection of random pools.
pub fn submodularity_suite(trials: usize, seed: u64) -> SuiteOutcome {
    const BLOCK: usize = 250;
    let model = PoolModel {
        support: (1, 3),
        ..PoolModel::default()
    };
    let mut violations = 0;
    let mut done = 0;
    let mut block = 0u64;
    while done < trials {
        let mut rng = trial_rng(seed, u64::MAX - block);
        let pool = random_pool(&mut rng, 5, &model);
        let h = (block % 2) as usize + 1;
        let batch = BLOCK.min(trials - done);
        let pointwise = batch / 2;
        let ensemble = DependentEnsemble::product_of_independent(&pool, 1 << 20)
            .expect("bounded product space");
        violations += check_pointwise_submodularity(
            &ensemble,
            h,
            pointwise,
            seed.wrapping_add(block.wrapping_mul(0x9e37_79b9)),
        );
        violations += check_submodularity_expectation(
            &pool,
            h,
            batch - pointwise,
            seed.wrapping_add(block.wrapping_mul(0x9e37_79b9)).wrapping_add(1),
        );
        done += batch;
        block += 1;
    }
    SuiteOutcome { trials, violations }
}

/// Greedy-equals-brute-force suite on random weighted Bernoulli pools.
pub fn wb_equivalence_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let n = rng.random_range(1..=10);
        let k = rng.random_range(1..=5);
        let pool = random_wb_pool(&mut rng, n);
        let report = crate::select::wb_greedy(&pool, k);
        let optimal = report
            .optimal_value
            .expect("pools this small always get the oracle pass");
        if (report.team_value - optimal).abs() > TOL {
            violations += 1;
        }
    }
    SuiteOutcome { trials, violations }
}

/// Exchange-condition suite on random weighted Bernoulli pools.
pub fn greedy_condition_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let n = rng.random_range(2..=8);
        let k = rng.random_range(1..=4.min(n));
        let pool = random_wb_pool(&mut rng, n);
        if !check_greedy_condition(&pool, k).expect("pool within budget") {
            violations += 1;
        }
    }
    SuiteOutcome { trials, violations }
}

/// Swap-inequality suite.
pub fn swap_lemma_suite(samples: usize, seed: u64) -> SuiteOutcome {
    SuiteOutcome {
        trials: samples,
        violations: check_swap_lemmas(samples, seed),
    }
}
