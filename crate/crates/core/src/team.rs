//! Team performance evaluation.
//!
//! The performance of a team is the expected sum of the `h` largest realized
//! values among its members' independent variables. [`expected_top_h`]
//! computes this exactly through a threshold decomposition: writing the
//! distinct positive support values across the pool as `v_1 > v_2 > ...`
//! (with an implicit final 0),
//!
//! ```text
//! E[sum of top h] = sum_j (v_j - v_{j+1}) * E[min(N_j, h)]
//! ```
//!
//! where `N_j` counts the members realizing at least `v_j`. Each `N_j` is a
//! Poisson binomial count, and `E[min(N_j, h)]` comes from a dynamic program
//! over counts capped at `h`. All terms are nonnegative, so the evaluation
//! is numerically stable, and the cost is polynomial in pool and support
//! size.
//!
//! Dependence across candidates is handled only through
//! [`DependentEnsemble`], an explicit finite sample space.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rv::{check_team_params, Candidate, DiscreteRv, WeightedBernoulli};

/// A candidate pool with the team-size and top-count parameters.
///
/// `k` may exceed the pool size; selection procedures then return the whole
/// pool.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamInstance {
    pool: Vec<Candidate>,
    k: usize,
    h: usize,
}

impl TeamInstance {
    pub fn new(pool: Vec<Candidate>, k: usize, h: usize) -> Result<Self> {
        check_team_params(k, h)?;
        let mut seen = std::collections::HashSet::new();
        for c in &pool {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::DuplicateId(c.id.clone()));
            }
        }
        Ok(TeamInstance { pool, k, h })
    }

    pub fn pool(&self) -> &[Candidate] {
        &self.pool
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn candidate(&self, id: &str) -> Option<&Candidate> {
        self.pool.iter().find(|c| c.id == id)
    }

    /// Evaluates a team of pool members by id.
    pub fn team_value(&self, team: &[String]) -> Result<f64> {
        let rvs = team
            .iter()
            .map(|id| {
                self.candidate(id)
                    .map(|c| &c.rv)
                    .ok_or_else(|| Error::UnknownCandidate(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        expected_top_h(rvs, self.h)
    }
}

/// Exact expected sum of the top `h` order statistics of independent
/// variables.
pub fn expected_top_h<'a, I>(rvs: I, h: usize) -> Result<f64>
where
    I: IntoIterator<Item = &'a DiscreteRv>,
{
    if h < 1 {
        return Err(Error::InvalidH);
    }
    let rvs: Vec<&DiscreteRv> = rvs.into_iter().collect();
    if rvs.is_empty() {
        return Ok(0.0);
    }
    let mut breakpoints: Vec<f64> = rvs
        .iter()
        .flat_map(|rv| rv.values().iter().copied())
        .collect();
    breakpoints.sort_by(|a, b| b.total_cmp(a));
    breakpoints.dedup();

    let cap = h.min(rvs.len());
    let mut ptr = vec![0usize; rvs.len()];
    let mut tail = vec![0.0f64; rvs.len()];
    let mut total = 0.0;
    for (j, &v) in breakpoints.iter().enumerate() {
        // advance P(X_i >= v) as the threshold sweeps down
        for (i, rv) in rvs.iter().enumerate() {
            while ptr[i] < rv.len() && rv.values()[ptr[i]] >= v {
                tail[i] = rv.cum_masses()[ptr[i]];
                ptr[i] += 1;
            }
        }
        let next = breakpoints.get(j + 1).copied().unwrap_or(0.0);
        total += (v - next) * expected_count_capped(&tail, cap);
    }
    Ok(total)
}

/// `E[min(N, cap)]` for `N` the number of successes among independent
/// Bernoulli trials with probabilities `probs` (Poisson binomial), with
/// counts at `cap` absorbing.
fn expected_count_capped(probs: &[f64], cap: usize) -> f64 {
    let mut dp = vec![0.0; cap + 1];
    dp[0] = 1.0;
    for &p in probs {
        for c in (1..=cap).rev() {
            if c == cap {
                dp[c] += dp[c - 1] * p;
            } else {
                dp[c] = dp[c] * (1.0 - p) + dp[c - 1] * p;
            }
        }
        dp[0] *= 1.0 - p;
    }
    dp.iter()
        .enumerate()
        .map(|(c, &pr)| c as f64 * pr)
        .sum()
}

/// Monte Carlo estimate of the top-`h` sum with its standard error.
///
/// Each sample draws from a dedicated counter-based stream derived from
/// `(seed, sample index)`, so the result depends only on `(seed, samples)`
/// no matter how the work is scheduled.
pub fn expected_top_h_monte_carlo<'a, I>(
    rvs: I,
    h: usize,
    samples: usize,
    seed: u64,
) -> (f64, f64)
where
    I: IntoIterator<Item = &'a DiscreteRv>,
{
    assert!(h >= 1, "h must be at least 1");
    assert!(samples >= 1, "need at least one sample");
    let rvs: Vec<&DiscreteRv> = rvs.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = vec![0.0f64; rvs.len()];
    let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
    for i in 0..samples {
        rng.set_stream(i as u64);
        rng.set_word_pos(0);
        for (slot, rv) in draws.iter_mut().zip(&rvs) {
            *slot = rv.sample_value(rng.random::<f64>());
        }
        let s = top_h_sum(&mut draws, h);
        sum += s;
        sumsq += s * s;
    }
    let n = samples as f64;
    let mean = sum / n;
    let stderr = if samples > 1 {
        let var = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    (mean, stderr)
}

/// Sum of the `h` largest entries; scrambles the buffer.
pub(crate) fn top_h_sum(values: &mut [f64], h: usize) -> f64 {
    values.sort_by(|a, b| b.total_cmp(a));
    values.iter().take(h).sum()
}

/// Expected maximum of weighted Bernoulli variables.
///
/// In decreasing value order the maximum is the first variable to fire, so
/// the expectation telescopes to
/// `p_1 x_1 + (1 - p_1) p_2 x_2 + (1 - p_1)(1 - p_2) p_3 x_3 + ...`.
pub fn expected_max(team: &[WeightedBernoulli]) -> f64 {
    let mut sorted = team.to_vec();
    sorted.sort_by(|a, b| b.value().total_cmp(&a.value()));
    let mut total = 0.0;
    let mut all_missed = 1.0;
    for wb in &sorted {
        total += all_missed * wb.probability() * wb.value();
        all_missed *= 1.0 - wb.probability();
    }
    total
}

/// An explicit finite sample space with per-candidate value assignments,
/// for pools whose members are not independent.
#[derive(Debug, Clone, PartialEq)]
pub struct DependentEnsemble {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    outcomes: Vec<Outcome>,
}

/// One sample point: its probability and the value of every candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    pub values: Vec<f64>,
}

impl DependentEnsemble {
    /// `outcomes` pairs a probability with one value per candidate, aligned
    /// with `ids`. Probabilities must be positive and sum to 1 within 1e-9.
    pub fn new(ids: Vec<String>, outcomes: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut total = 0.0;
        let mut rows = Vec::with_capacity(outcomes.len());
        for (o, (p, values)) in outcomes.into_iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::NonPositiveMass(p));
            }
            if values.len() != ids.len() {
                return Err(Error::AssignmentLength {
                    outcome: o,
                    got: values.len(),
                    want: ids.len(),
                });
            }
            for &v in &values {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NegativeValue(v));
                }
            }
            total += p;
            rows.push(Outcome {
                probability: p,
                values,
            });
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::BadProbabilitySum(total));
        }
        Ok(DependentEnsemble {
            ids,
            index,
            outcomes: rows,
        })
    }

    /// Expands an independent pool into its full product sample space.
    /// Intended for small pools; errors once the product exceeds `budget`
    /// outcomes.
    pub fn product_of_independent(pool: &[Candidate], budget: u128) -> Result<Self> {
        let mut atoms: Vec<Vec<(f64, f64)>> = Vec::with_capacity(pool.len());
        let mut count: u128 = 1;
        for c in pool {
            let mut a: Vec<(f64, f64)> = c
                .rv
                .values()
                .iter()
                .zip(c.rv.masses())
                .map(|(&v, &m)| (v, m))
                .collect();
            let residual = 1.0 - c.rv.total_mass();
            if residual > 0.0 {
                a.push((0.0, residual));
            }
            count = count.saturating_mul(a.len() as u128);
            if count > budget {
                return Err(Error::BudgetExceeded(count, budget));
            }
            atoms.push(a);
        }
        let ids: Vec<String> = pool.iter().map(|c| c.id.clone()).collect();
        let mut outcomes = Vec::new();
        let mut row = vec![0.0f64; pool.len()];
        fn rec(
            atoms: &[Vec<(f64, f64)>],
            depth: usize,
            prob: f64,
            row: &mut Vec<f64>,
            out: &mut Vec<(f64, Vec<f64>)>,
        ) {
            if depth == atoms.len() {
                out.push((prob, row.clone()));
                return;
            }
            for &(v, m) in &atoms[depth] {
                row[depth] = v;
                rec(atoms, depth + 1, prob * m, row, out);
            }
        }
        rec(&atoms, 0, 1.0, &mut row, &mut outcomes);
        if outcomes.is_empty() {
            // empty pool: a single sure outcome with no assignments
            outcomes.push((1.0, Vec::new()));
        }
        DependentEnsemble::new(ids, outcomes)
    }

    pub fn candidate_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    fn team_columns(&self, team: &[String]) -> Result<Vec<usize>> {
        team.iter()
            .map(|id| {
                self.index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::UnknownCandidate(id.clone()))
            })
            .collect()
    }

    /// Expected top-`h` sum of the team over this sample space.
    pub fn expected_top_h(&self, team: &[String], h: usize) -> Result<f64> {
        if h < 1 {
            return Err(Error::InvalidH);
        }
        let cols = self.team_columns(team)?;
        let mut buf = vec![0.0f64; cols.len()];
        let mut total = 0.0;
        for o in &self.outcomes {
            for (slot, &c) in buf.iter_mut().zip(&cols) {
                *slot = o.values[c];
            }
            total += o.probability * top_h_sum(&mut buf, h);
        }
        Ok(total)
    }

    /// Top-`h` sum of the team at a single sample point. Teams smaller than
    /// `h` behave as if padded with deterministically zero members.
    pub fn top_h_at(&self, team: &[String], h: usize, outcome_index: usize) -> Result<f64> {
        if h < 1 {
            return Err(Error::InvalidH);
        }
        let cols = self.team_columns(team)?;
        let o = self
            .outcomes
            .get(outcome_index)
            .ok_or(Error::IndexOutOfRange {
                index: outcome_index,
                len: self.outcomes.len(),
            })?;
        let mut buf: Vec<f64> = cols.iter().map(|&c| o.values[c]).collect();
        Ok(top_h_sum(&mut buf, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rv(values: &[f64], masses: &[f64]) -> DiscreteRv {
        DiscreteRv::new(values.to_vec(), masses.to_vec()).unwrap()
    }

    fn coin() -> DiscreteRv {
        rv(&[1.0], &[0.5])
    }

    #[test]
    fn two_coins_top_one() {
        let (a, b) = (coin(), coin());
        assert_abs_diff_eq!(
            expected_top_h([&a, &b], 1).unwrap(),
            0.75,
            epsilon = 1e-12
        );
    }

    #[test]
    fn two_coins_top_two_is_sum_of_means() {
        let (a, b) = (coin(), coin());
        assert_abs_diff_eq!(expected_top_h([&a, &b], 2).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn h_at_least_pool_size_degenerates_to_sum() {
        let pool = [rv(&[3.0, 1.0], &[0.2, 0.3]), rv(&[2.0], &[0.9]), coin()];
        let total: f64 = pool.iter().map(|x| x.expectation()).sum();
        for h in 3..6 {
            assert_abs_diff_eq!(
                expected_top_h(pool.iter(), h).unwrap(),
                total,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejects_h_zero() {
        assert_eq!(expected_top_h([&coin()], 0), Err(Error::InvalidH));
    }

    #[test]
    fn empty_pool_and_zero_members() {
        assert_eq!(expected_top_h([], 1).unwrap(), 0.0);
        let z = DiscreteRv::zero();
        assert_eq!(expected_top_h([&z, &z], 1).unwrap(), 0.0);
    }

    #[test]
    fn three_rv_pool_matches_product_enumeration() {
        let pool = [
            rv(&[3.0, 1.5, 0.5], &[0.2, 0.3, 0.1]),
            rv(&[2.0, 1.0], &[0.4, 0.4]),
            rv(&[5.0], &[0.15]),
        ];
        // brute force over the <= 4^3 product outcomes
        let mut expect = 0.0;
        let atoms: Vec<Vec<(f64, f64)>> = pool
            .iter()
            .map(|x| {
                let mut a: Vec<(f64, f64)> = x
                    .values()
                    .iter()
                    .zip(x.masses())
                    .map(|(&v, &m)| (v, m))
                    .collect();
                a.push((0.0, 1.0 - x.total_mass()));
                a
            })
            .collect();
        for &(v0, p0) in &atoms[0] {
            for &(v1, p1) in &atoms[1] {
                for &(v2, p2) in &atoms[2] {
                    let mut vals = [v0, v1, v2];
                    vals.sort_by(|a, b| b.total_cmp(a));
                    expect += p0 * p1 * p2 * (vals[0] + vals[1]);
                }
            }
        }
        assert_abs_diff_eq!(
            expected_top_h(pool.iter(), 2).unwrap(),
            expect,
            epsilon = 1e-9
        );
    }

    #[test]
    fn adding_a_candidate_never_hurts() {
        let pool = [
            rv(&[3.0, 1.5], &[0.2, 0.3]),
            rv(&[2.0, 1.0], &[0.4, 0.4]),
            rv(&[5.0], &[0.15]),
            coin(),
        ];
        for h in 1..=3 {
            let mut prev = 0.0;
            for n in 1..=pool.len() {
                let v = expected_top_h(pool[..n].iter(), h).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn value_nondecreasing_in_h() {
        let pool = [rv(&[3.0, 1.5], &[0.2, 0.3]), rv(&[2.0, 1.0], &[0.4, 0.4])];
        let mut prev = 0.0;
        for h in 1..=3 {
            let v = expected_top_h(pool.iter(), h).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn monte_carlo_deterministic_pool() {
        let pool = [
            DiscreteRv::deterministic(3.0).unwrap(),
            DiscreteRv::deterministic(2.0).unwrap(),
            DiscreteRv::deterministic(1.0).unwrap(),
        ];
        for seed in [0u64, 1, 99] {
            let (est, se) = expected_top_h_monte_carlo(pool.iter(), 2, 1000, seed);
            assert_eq!(est, 5.0);
            assert_eq!(se, 0.0);
        }
    }

    #[test]
    fn monte_carlo_two_coins() {
        let (a, b) = (coin(), coin());
        let (est, se) = expected_top_h_monte_carlo([&a, &b], 1, 1_000_000, 7);
        assert!((est - 0.75).abs() <= 3.0 * se, "est {est} se {se}");
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let pool = [rv(&[3.0, 1.5], &[0.2, 0.3]), rv(&[2.0, 1.0], &[0.4, 0.4])];
        let a = expected_top_h_monte_carlo(pool.iter(), 1, 10_000, 42);
        let b = expected_top_h_monte_carlo(pool.iter(), 1, 10_000, 42);
        assert_eq!(a, b);
        let c = expected_top_h_monte_carlo(pool.iter(), 1, 10_000, 43);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn expected_max_examples() {
        let wb = |p, x| WeightedBernoulli::new(p, x).unwrap();
        // 4-outcome enumeration: 0.5*2 + 0.5*0.5*1
        assert_abs_diff_eq!(
            expected_max(&[wb(0.5, 2.0), wb(0.5, 1.0)]),
            1.25,
            epsilon = 1e-12
        );
        assert_eq!(expected_max(&[wb(1.0, 3.0)]), 3.0);
        assert_eq!(expected_max(&[]), 0.0);
    }

    #[test]
    fn expected_max_agrees_with_top_one() {
        let wbs = [
            WeightedBernoulli::new(0.3, 4.0).unwrap(),
            WeightedBernoulli::new(0.8, 1.5).unwrap(),
            WeightedBernoulli::new(0.5, 2.5).unwrap(),
        ];
        let rvs: Vec<DiscreteRv> = wbs.iter().map(|w| w.to_rv()).collect();
        assert_abs_diff_eq!(
            expected_max(&wbs),
            expected_top_h(rvs.iter(), 1).unwrap(),
            epsilon = 1e-9
        );
    }

    fn two_coin_ensemble() -> DependentEnsemble {
        let pool = [
            Candidate::new("a", coin()),
            Candidate::new("b", coin()),
        ];
        DependentEnsemble::product_of_independent(&pool, 1_000).unwrap()
    }

    #[test]
    fn ensemble_validation() {
        assert_eq!(
            DependentEnsemble::new(
                vec!["a".into()],
                vec![(0.5, vec![1.0]), (0.5, vec![])],
            )
            .unwrap_err(),
            Error::AssignmentLength { outcome: 1, got: 0, want: 1 }
        );
        assert!(matches!(
            DependentEnsemble::new(vec!["a".into()], vec![(0.7, vec![1.0])]),
            Err(Error::BadProbabilitySum(_))
        ));
    }

    #[test]
    fn single_outcome_top_two() {
        let ens = DependentEnsemble::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(1.0, vec![5.0, 4.0, 3.0])],
        )
        .unwrap();
        let team = vec!["a".to_string(), "b".into(), "c".into()];
        assert_eq!(ens.expected_top_h(&team, 2).unwrap(), 9.0);
        assert_eq!(ens.top_h_at(&team, 2, 0).unwrap(), 9.0);
    }

    #[test]
    fn product_ensemble_matches_independent_evaluation() {
        let ens = two_coin_ensemble();
        assert_eq!(ens.num_outcomes(), 4);
        let team = vec!["a".to_string(), "b".into()];
        assert_abs_diff_eq!(
            ens.expected_top_h(&team, 1).unwrap(),
            0.75,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pointwise_values_aggregate_to_expectation() {
        let ens = two_coin_ensemble();
        let team = vec!["a".to_string(), "b".into()];
        let mut total = 0.0;
        for i in 0..ens.num_outcomes() {
            total += ens.outcomes()[i].probability * ens.top_h_at(&team, 1, i).unwrap();
        }
        assert_abs_diff_eq!(
            total,
            ens.expected_top_h(&team, 1).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn pointwise_pads_small_teams_with_zeros() {
        let ens = two_coin_ensemble();
        assert_eq!(ens.top_h_at(&[], 3, 0).unwrap(), 0.0);
        let team = vec!["a".to_string()];
        // top-2 of a singleton team is just its value
        let v = ens.top_h_at(&team, 2, 0).unwrap();
        assert!(v == 0.0 || v == 1.0);
    }

    #[test]
    fn pointwise_errors() {
        let ens = two_coin_ensemble();
        let team = vec!["zz".to_string()];
        assert_eq!(
            ens.top_h_at(&team, 1, 0).unwrap_err(),
            Error::UnknownCandidate("zz".into())
        );
        let team = vec!["a".to_string()];
        assert_eq!(
            ens.top_h_at(&team, 1, 99).unwrap_err(),
            Error::IndexOutOfRange { index: 99, len: 4 }
        );
    }

    #[test]
    fn instance_rejects_duplicate_ids() {
        let pool = vec![Candidate::new("a", coin()), Candidate::new("a", coin())];
        assert_eq!(
            TeamInstance::new(pool, 1, 1).unwrap_err(),
            Error::DuplicateId("a".into())
        );
    }
}
