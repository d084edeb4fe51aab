//! Team selection procedures and the guarantees attached to them.
//!
//! Ranking candidates by an isolated test score and taking the top `k` is
//! the cheapest possible selection; how far it lands from the true optimum
//! depends entirely on the score. The potential score stays within a fixed
//! constant factor [`lambda_bound`], the conditional quantile score within
//! [`mu_bound`], while the canonical score can lose a full `k/h` factor.
//! Greedy hill-climbing on the team value itself keeps the usual `1 - 1/e`
//! guarantee, and on all-weighted-Bernoulli pools it is exactly optimal.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rv::{Candidate, DiscreteRv, WeightedBernoulli};
use crate::team::{expected_max, expected_top_h, TeamInstance};
use crate::TOL;

/// Default cap on the number of subsets brute force will enumerate.
pub const DEFAULT_BRUTE_BUDGET: u128 = 1_000_000;

/// How a team was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Canonical,
    Potential,
    Conditional,
    Greedy,
    BruteForce,
    WbGreedy,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Canonical => "canonical",
            Method::Potential => "potential",
            Method::Conditional => "conditional",
            Method::Greedy => "greedy",
            Method::BruteForce => "brute_force",
            Method::WbGreedy => "wb_greedy",
        };
        f.write_str(s)
    }
}

/// Outcome of a selection run.
///
/// `ratio` is oriented as `optimal / achieved` (at least 1 up to tolerance)
/// and is present exactly when an oracle value is. `bound` is the
/// theoretical ceiling on that ratio for the method used. Team order is
/// meaningful per method: score rank for test-score selections, pick order
/// for the greedy methods, id order for brute force.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub method: Method,
    pub team: Vec<String>,
    pub team_value: f64,
    pub optimal_value: Option<f64>,
    pub ratio: Option<f64>,
    pub bound: f64,
}

/// `optimal / achieved`, defined as 1 when both vanish.
pub fn ratio_of(optimal: f64, achieved: f64) -> f64 {
    if achieved > 0.0 {
        optimal / achieved
    } else if optimal.abs() <= TOL {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Approximation-factor ceiling for potential-score selection.
pub fn lambda_bound() -> f64 {
    let s = 1.0 - (-0.5f64).exp();
    (2.0 * s + 1.0) / (s * s * s)
}

/// Approximation-factor ceiling for conditional-quantile selection.
pub fn mu_bound() -> f64 {
    16.0
}

/// Approximation-factor ceiling for canonical (expectation) selection.
pub fn canonical_bound(k: usize, h: usize) -> f64 {
    k as f64 / h as f64
}

/// Ratio ceiling implied by the `1 - 1/e` greedy guarantee.
pub fn greedy_bound() -> f64 {
    1.0 / (1.0 - (-1.0f64).exp())
}

/// The three isolated test scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestScore {
    Canonical,
    Potential,
    Conditional,
}

impl TestScore {
    pub fn score(&self, rv: &DiscreteRv, k: usize, h: usize) -> Result<f64> {
        match self {
            TestScore::Canonical => Ok(rv.expectation()),
            TestScore::Potential => rv.potential_score(k, h),
            TestScore::Conditional => rv.conditional_quantile_score(k, h),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            TestScore::Canonical => Method::Canonical,
            TestScore::Potential => Method::Potential,
            TestScore::Conditional => Method::Conditional,
        }
    }

    pub fn bound(&self, k: usize, h: usize) -> f64 {
        match self {
            TestScore::Canonical => canonical_bound(k, h),
            TestScore::Potential => lambda_bound(),
            TestScore::Conditional => mu_bound(),
        }
    }
}

/// How to resolve score ties at the selection boundary.
pub enum TieBreak<'a> {
    /// Ascending id among tied candidates; fully deterministic.
    ById,
    /// Worst-case resolution: among the valid tie completions, pick the one
    /// minimizing the given team objective (enumerated exhaustively, so
    /// intended for small tied groups).
    Pessimal(&'a dyn Fn(&[String]) -> f64),
}

/// Top `k` of `(id, score)` pairs. Ids with scores strictly above the k-th
/// score are always in; the remaining slots go to tied ids per `tie`.
/// Returns ids in descending score order (ascending id within equal score);
/// asking for more ids than exist returns them all.
pub fn top_k_ids(scored: &[(String, f64)], k: usize, tie: TieBreak) -> Vec<String> {
    let mut ranked: Vec<&(String, f64)> = scored.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    if k >= ranked.len() {
        return ranked.iter().map(|(id, _)| id.clone()).collect();
    }
    let threshold = ranked[k - 1].1;
    let forced: Vec<String> = ranked
        .iter()
        .filter(|(_, s)| *s > threshold)
        .map(|(id, _)| id.clone())
        .collect();
    let tied: Vec<String> = ranked
        .iter()
        .filter(|(_, s)| *s == threshold)
        .map(|(id, _)| id.clone())
        .collect();
    let slots = k - forced.len();
    let fill: Vec<String> = match tie {
        TieBreak::ById => {
            let mut t = tied;
            t.sort();
            t.truncate(slots);
            t
        }
        TieBreak::Pessimal(objective) => {
            let mut tied = tied;
            tied.sort();
            let mut best: Option<(f64, Vec<String>)> = None;
            for combo in tied.iter().combinations(slots) {
                let fill: Vec<String> = combo.into_iter().cloned().collect();
                let mut team = forced.clone();
                team.extend(fill.iter().cloned());
                let value = objective(&team);
                let replace = match &best {
                    None => true,
                    Some((bv, bf)) => value < bv - TOL || (value < bv + TOL && fill < *bf),
                };
                if replace {
                    best = Some((value, fill));
                }
            }
            best.map(|(_, f)| f).unwrap_or_default()
        }
    };
    let chosen: std::collections::HashSet<&String> =
        forced.iter().chain(fill.iter()).collect();
    ranked
        .iter()
        .filter(|(id, _)| chosen.contains(id))
        .map(|(id, _)| id.clone())
        .collect()
}

/// Ranks the pool by `scorer` and keeps the top `k`.
pub fn select_top_k_by_score<F>(instance: &TeamInstance, scorer: F, tie: TieBreak) -> Vec<String>
where
    F: Fn(&Candidate) -> f64,
{
    let scored: Vec<(String, f64)> = instance
        .pool()
        .iter()
        .map(|c| (c.id.clone(), scorer(c)))
        .collect();
    top_k_ids(&scored, instance.k(), tie)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn n_choose_k(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exhaustively maximizes the team value over all size-`k` subsets.
/// The winner is deterministic: among values tied within tolerance the
/// lexicographically least id set is kept.
pub fn brute_force_optimal(instance: &TeamInstance) -> Result<SelectionReport> {
    brute_force_optimal_with_budget(instance, DEFAULT_BRUTE_BUDGET)
}

pub fn brute_force_optimal_with_budget(
    instance: &TeamInstance,
    budget: u128,
) -> Result<SelectionReport> {
    let n = instance.pool().len();
    let k = instance.k().min(n);
    let count = n_choose_k(n, k);
    if count > budget {
        return Err(Error::BudgetExceeded(count, budget));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| instance.pool()[a].id.cmp(&instance.pool()[b].id));
    let mut best: Option<(f64, Vec<usize>)> = None;
    for combo in order.iter().copied().combinations(k) {
        let rvs = combo.iter().map(|&i| &instance.pool()[i].rv);
        let value = expected_top_h(rvs, instance.h())?;
        if best.as_ref().is_none_or(|(bv, _)| value > bv + TOL) {
            best = Some((value, combo));
        }
    }
    let (value, combo) = best.expect("combinations always yields at least one subset");
    let team: Vec<String> = combo
        .iter()
        .map(|&i| instance.pool()[i].id.clone())
        .collect();
    Ok(SelectionReport {
        method: Method::BruteForce,
        team,
        team_value: value,
        optimal_value: Some(value),
        ratio: Some(1.0),
        bound: 1.0,
    })
}

/// Greedy hill-climbing on an arbitrary team value function: `k` rounds,
/// each adding the candidate of greatest marginal gain, ties broken by
/// ascending id. The value function is expected to be monotone; that is
/// only spot-checked in debug builds. The report's team is in pick order.
pub fn greedy_hill_climb<F>(instance: &TeamInstance, value_fn: F) -> SelectionReport
where
    F: Fn(&[&Candidate]) -> f64,
{
    let n = instance.pool().len();
    let target = instance.k().min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| instance.pool()[a].id.cmp(&instance.pool()[b].id));

    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    let mut members: Vec<&Candidate> = Vec::with_capacity(target + 1);
    let mut current = value_fn(&members);
    for _ in 0..target {
        let mut best: Option<(f64, usize)> = None;
        for &i in &order {
            if chosen.contains(&i) {
                continue;
            }
            members.push(&instance.pool()[i]);
            let value = value_fn(&members);
            members.pop();
            // iteration is in id order, so strict improvement gives
            // ascending-id tie-breaking
            if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
                best = Some((value, i));
            }
        }
        let (value, pick) = best.expect("target bounded by pool size");
        debug_assert!(value >= current - TOL, "value function not monotone");
        chosen.push(pick);
        members.push(&instance.pool()[pick]);
        current = value;
    }
    SelectionReport {
        method: Method::Greedy,
        team: chosen
            .iter()
            .map(|&i| instance.pool()[i].id.clone())
            .collect(),
        team_value: current,
        optimal_value: None,
        ratio: None,
        bound: greedy_bound(),
    }
}

/// Greedy hill-climbing on the expected maximum of a weighted Bernoulli
/// pool. This is exactly optimal, not merely `1 - 1/e`-approximate; when
/// the pool is small enough the report carries the brute-force cross-check
/// (ratio 1).
pub fn wb_greedy(pool: &[(String, WeightedBernoulli)], k: usize) -> SelectionReport {
    const ORACLE_BUDGET: u128 = 20_000;
    let n = pool.len();
    let target = k.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pool[a].0.cmp(&pool[b].0));

    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    let mut members: Vec<WeightedBernoulli> = Vec::with_capacity(target + 1);
    let mut current = 0.0;
    for _ in 0..target {
        let mut best: Option<(f64, usize)> = None;
        for &i in &order {
            if chosen.contains(&i) {
                continue;
            }
            members.push(pool[i].1);
            let value = expected_max(&members);
            members.pop();
            if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
                best = Some((value, i));
            }
        }
        let (value, pick) = best.expect("target bounded by pool size");
        chosen.push(pick);
        members.push(pool[pick].1);
        current = value;
    }

    let mut report = SelectionReport {
        method: Method::WbGreedy,
        team: chosen.iter().map(|&i| pool[i].0.clone()).collect(),
        team_value: current,
        optimal_value: None,
        ratio: None,
        bound: 1.0,
    };
    if n_choose_k(n, target) <= ORACLE_BUDGET {
        let mut best = 0.0f64;
        for combo in order.iter().copied().combinations(target) {
            let team: Vec<WeightedBernoulli> = combo.iter().map(|&i| pool[i].1).collect();
            best = best.max(expected_max(&team));
        }
        report.optimal_value = Some(best);
        report.ratio = Some(ratio_of(best, report.team_value));
    }
    report
}

/// Runs the named selection method with deterministic (ascending id) ties.
pub fn select_with_method(
    instance: &TeamInstance,
    method: Method,
    budget: u128,
) -> Result<SelectionReport> {
    let (k, h) = (instance.k(), instance.h());
    let by_score = |score: TestScore| -> Result<SelectionReport> {
        let team = select_top_k_by_score(
            instance,
            |c| {
                score
                    .score(&c.rv, k, h)
                    .expect("instance parameters already validated")
            },
            TieBreak::ById,
        );
        let team_value = instance.team_value(&team)?;
        Ok(SelectionReport {
            method: score.method(),
            team,
            team_value,
            optimal_value: None,
            ratio: None,
            bound: score.bound(k, h),
        })
    };
    match method {
        Method::Canonical => by_score(TestScore::Canonical),
        Method::Potential => by_score(TestScore::Potential),
        Method::Conditional => by_score(TestScore::Conditional),
        Method::Greedy => Ok(greedy_hill_climb(instance, |team| {
            expected_top_h(team.iter().map(|c| &c.rv), h)
                .expect("h already validated")
        })),
        Method::BruteForce => brute_force_optimal_with_budget(instance, budget),
        Method::WbGreedy => {
            let pool = instance
                .pool()
                .iter()
                .map(|c| {
                    if c.rv.len() > 1 {
                        return Err(Error::NotWeightedBernoulli(c.id.clone()));
                    }
                    let wb = if c.rv.is_empty() {
                        WeightedBernoulli::new(0.0, 0.0)
                    } else {
                        WeightedBernoulli::new(c.rv.masses()[0], c.rv.values()[0])
                    }?;
                    Ok((c.id.clone(), wb))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(wb_greedy(&pool, k))
        }
    }
}

/// Fills in `optimal_value` and `ratio` from a brute-force oracle run.
pub fn attach_oracle(
    report: &mut SelectionReport,
    instance: &TeamInstance,
    budget: u128,
) -> Result<()> {
    let oracle = brute_force_optimal_with_budget(instance, budget)?;
    report.optimal_value = Some(oracle.team_value);
    report.ratio = Some(ratio_of(oracle.team_value, report.team_value));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rv(values: &[f64], masses: &[f64]) -> DiscreteRv {
        DiscreteRv::new(values.to_vec(), masses.to_vec()).unwrap()
    }

    fn scored(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|&(id, s)| (id.to_string(), s)).collect()
    }

    #[test]
    fn top_k_takes_highest_scores() {
        let s = scored(&[("a", 3.0), ("b", 2.0), ("c", 1.0)]);
        assert_eq!(top_k_ids(&s, 2, TieBreak::ById), vec!["a", "b"]);
    }

    #[test]
    fn top_k_ties_by_id() {
        let s = scored(&[("d", 1.0), ("b", 1.0), ("c", 1.0), ("a", 1.0)]);
        assert_eq!(top_k_ids(&s, 2, TieBreak::ById), vec!["a", "b"]);
    }

    #[test]
    fn top_k_oversized_returns_everything() {
        let s = scored(&[("a", 1.0), ("b", 2.0)]);
        assert_eq!(top_k_ids(&s, 5, TieBreak::ById), vec!["b", "a"]);
    }

    #[test]
    fn top_k_pessimal_minimizes_objective() {
        // all tied; the objective punishes picking b and c together
        let s = scored(&[("a", 1.0), ("b", 1.0), ("c", 1.0)]);
        let objective = |team: &[String]| {
            if team.contains(&"b".to_string()) && team.contains(&"c".to_string()) {
                0.0
            } else {
                1.0
            }
        };
        let picked = top_k_ids(&s, 2, TieBreak::Pessimal(&objective));
        assert_eq!(picked, vec!["b", "c"]);
    }

    #[test]
    fn bounds_match_known_constants() {
        assert!(lambda_bound() < 30.0, "lambda {}", lambda_bound());
        assert!(lambda_bound() > 29.3);
        assert_eq!(mu_bound(), 16.0);
        assert_eq!(canonical_bound(6, 2), 3.0);
        assert_abs_diff_eq!(greedy_bound(), 1.0 / (1.0 - 1.0 / std::f64::consts::E));
    }

    fn small_instance() -> TeamInstance {
        TeamInstance::new(
            vec![
                Candidate::new("a", rv(&[4.0], &[0.25])),
                Candidate::new("b", rv(&[2.0, 1.0], &[0.5, 0.4])),
                Candidate::new("c", rv(&[1.5], &[0.9])),
                Candidate::new("d", rv(&[6.0], &[0.1])),
            ],
            2,
            1,
        )
        .unwrap()
    }

    #[test]
    fn brute_force_whole_pool_when_k_covers_it() {
        let inst = TeamInstance::new(
            vec![
                Candidate::new("a", rv(&[1.0], &[0.5])),
                Candidate::new("b", rv(&[2.0], &[0.5])),
            ],
            2,
            1,
        )
        .unwrap();
        let report = brute_force_optimal(&inst).unwrap();
        assert_eq!(report.team, vec!["a", "b"]);
        assert_eq!(report.ratio, Some(1.0));
    }

    #[test]
    fn brute_force_breaks_value_ties_lexicographically() {
        let twin = rv(&[2.0], &[0.5]);
        let inst = TeamInstance::new(
            vec![
                Candidate::new("zed", twin.clone()),
                Candidate::new("ann", twin.clone()),
                Candidate::new("moe", twin),
            ],
            1,
            1,
        )
        .unwrap();
        let report = brute_force_optimal(&inst).unwrap();
        assert_eq!(report.team, vec!["ann"]);
    }

    #[test]
    fn brute_force_respects_budget() {
        let inst = small_instance();
        assert!(matches!(
            brute_force_optimal_with_budget(&inst, 3),
            Err(Error::BudgetExceeded(6, 3))
        ));
    }

    #[test]
    fn brute_force_on_wb_pool_matches_expected_max() {
        let wbs = [
            ("a", WeightedBernoulli::new(0.5, 2.0).unwrap()),
            ("b", WeightedBernoulli::new(0.5, 1.0).unwrap()),
            ("c", WeightedBernoulli::new(1.0, 0.9).unwrap()),
        ];
        let pool: Vec<Candidate> = wbs
            .iter()
            .map(|(id, wb)| Candidate::new(*id, wb.to_rv()))
            .collect();
        let inst = TeamInstance::new(pool, 2, 1).unwrap();
        let report = brute_force_optimal(&inst).unwrap();
        let winners: Vec<WeightedBernoulli> = report
            .team
            .iter()
            .map(|id| wbs.iter().find(|(i, _)| i == id).unwrap().1)
            .collect();
        assert_abs_diff_eq!(
            report.team_value,
            expected_max(&winners),
            epsilon = 1e-9
        );
    }

    #[test]
    fn brute_force_double_entry() {
        // independent re-enumeration via bitmasks
        let inst = TeamInstance::new(
            vec![
                Candidate::new("p", rv(&[5.0, 2.0], &[0.1, 0.4])),
                Candidate::new("q", rv(&[3.0], &[0.6])),
                Candidate::new("r", rv(&[2.5, 1.0], &[0.3, 0.5])),
                Candidate::new("s", rv(&[4.0], &[0.2])),
                Candidate::new("t", rv(&[1.2], &[0.95])),
                Candidate::new("u", rv(&[8.0], &[0.05])),
            ],
            3,
            2,
        )
        .unwrap();
        let report = brute_force_optimal(&inst).unwrap();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..64 {
            if mask.count_ones() != 3 {
                continue;
            }
            let team: Vec<String> = (0..6)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| inst.pool()[i].id.clone())
                .collect();
            best = best.max(inst.team_value(&team).unwrap());
        }
        assert_abs_diff_eq!(report.team_value, best, epsilon = 1e-12);
    }

    #[test]
    fn greedy_with_modular_value_matches_canonical_top_k() {
        let inst = small_instance();
        let greedy = greedy_hill_climb(&inst, |team| {
            team.iter().map(|c| c.rv.expectation()).sum()
        });
        let mut greedy_team = greedy.team.clone();
        greedy_team.sort();
        let mut canonical =
            select_top_k_by_score(&inst, |c| c.rv.expectation(), TieBreak::ById);
        canonical.sort();
        assert_eq!(greedy_team, canonical);
    }

    #[test]
    fn greedy_meets_its_guarantee_on_random_pools() {
        use crate::analysis::{random_pool, trial_rng, PoolModel};
        let model = PoolModel::default();
        for t in 0..40u64 {
            let mut rng = trial_rng(901, t);
            let pool = random_pool(&mut rng, 8, &model);
            let inst = TeamInstance::new(pool, 3, 1).unwrap();
            let greedy = select_with_method(&inst, Method::Greedy, DEFAULT_BRUTE_BUDGET).unwrap();
            let opt = brute_force_optimal(&inst).unwrap();
            assert!(
                greedy.team_value >= (1.0 - 1.0 / std::f64::consts::E) * opt.team_value - TOL,
                "trial {t}"
            );
        }
    }

    #[test]
    fn wb_greedy_small_pool_is_optimal() {
        let pool = vec![
            ("a".to_string(), WeightedBernoulli::new(0.5, 2.0).unwrap()),
            ("b".to_string(), WeightedBernoulli::new(0.5, 1.0).unwrap()),
            ("c".to_string(), WeightedBernoulli::new(1.0, 0.9).unwrap()),
        ];
        let report = wb_greedy(&pool, 2);
        let opt = report.optimal_value.unwrap();
        assert_abs_diff_eq!(report.team_value, opt, epsilon = 1e-9);
        assert_abs_diff_eq!(report.ratio.unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn wb_greedy_whole_pool_when_k_covers_it() {
        let pool = vec![
            ("a".to_string(), WeightedBernoulli::new(0.5, 2.0).unwrap()),
            ("b".to_string(), WeightedBernoulli::new(0.5, 1.0).unwrap()),
        ];
        let report = wb_greedy(&pool, 2);
        let mut team = report.team.clone();
        team.sort();
        assert_eq!(team, vec!["a", "b"]);
    }

    #[test]
    fn wb_greedy_matches_brute_force_on_random_pools() {
        use crate::analysis::{random_wb_pool, trial_rng};
        for t in 0..100u64 {
            let mut rng = trial_rng(77, t);
            use rand::Rng;
            let n = rng.random_range(1..=8);
            let k = rng.random_range(1..=4);
            let pool = random_wb_pool(&mut rng, n);
            let report = wb_greedy(&pool, k);
            let opt = report.optimal_value.expect("small pool oracle");
            assert!(
                (report.team_value - opt).abs() <= 1e-9,
                "trial {t}: greedy {} vs optimal {}",
                report.team_value,
                opt
            );
        }
    }

    #[test]
    fn select_with_method_rejects_wb_on_general_pool() {
        let inst = TeamInstance::new(
            vec![Candidate::new("a", rv(&[2.0, 1.0], &[0.3, 0.3]))],
            1,
            1,
        )
        .unwrap();
        assert!(matches!(
            select_with_method(&inst, Method::WbGreedy, DEFAULT_BRUTE_BUDGET),
            Err(Error::NotWeightedBernoulli(_))
        ));
    }

    #[test]
    fn oracle_ratio_dominates_one() {
        let inst = small_instance();
        for method in [Method::Canonical, Method::Potential, Method::Conditional] {
            let mut report = select_with_method(&inst, method, DEFAULT_BRUTE_BUDGET).unwrap();
            attach_oracle(&mut report, &inst, DEFAULT_BRUTE_BUDGET).unwrap();
            assert!(report.ratio.unwrap() >= 1.0 - 1e-9);
            assert!(report.ratio.unwrap() <= report.bound + TOL);
        }
    }
}
