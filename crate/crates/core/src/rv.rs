//! Discrete random variables and the per-candidate test scores.
//!
//! A candidate is modelled as a nonnegative discrete random variable with
//! finitely many positive support values; whatever probability mass is not
//! assigned to a positive value sits implicitly at zero. Three scores rank a
//! candidate in isolation:
//!
//! - the *canonical* score, the plain expectation;
//! - the *potential* score, the expected best outcome of `k/h` independent
//!   attempts at the task;
//! - the *conditional quantile* score, the mean outcome given that the
//!   candidate lands in its top `h/k` quantile.
//!
//! The potential score has the closed form
//! `sum_i ((1 - q_{i-1})^(k/h) - (1 - q_i)^(k/h)) * x_i`
//! over decreasing support values `x_i` with cumulative masses `q_i`. The
//! exponent is taken as a real number, so the score is defined even when `h`
//! does not divide `k`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ingestion tolerance for probability mass sums.
pub const MASS_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_team_params(k: usize, h: usize) -> Result<()> {
    if h < 1 || h > k {
        return Err(Error::InvalidParams(format!(
            "require 1 <= h <= k, got k={k}, h={h}"
        )));
    }
    Ok(())
}

/// A nonnegative discrete random variable.
///
/// Stored as strictly decreasing positive support values with strictly
/// positive probability masses; the residual mass `1 - total_mass()` sits at
/// value zero. An empty support is the deterministic-zero variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteRv {
    values: Vec<f64>,
    masses: Vec<f64>,
    #[serde(skip)]
    cum: Vec<f64>,
}

impl DiscreteRv {
    /// Canonicalizes raw `(values, masses)` pairs: duplicates are merged,
    /// zero-valued entries are dropped into the residual mass, and the result
    /// is sorted in strictly decreasing value order.
    pub fn new(values: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if values.len() != masses.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                masses: masses.len(),
            });
        }
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeValue(v));
            }
        }
        let mut sum = 0.0;
        for &m in &masses {
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::NonPositiveMass(m));
            }
            sum += m;
        }
        if sum > 1.0 + MASS_TOLERANCE {
            return Err(Error::MassExceedsOne(sum));
        }

        let mut atoms: Vec<(f64, f64)> = values
            .into_iter()
            .zip(masses)
            .filter(|&(v, _)| v > 0.0)
            .collect();
        atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => merged.push((v, m)),
            }
        }
        let (values, masses): (Vec<f64>, Vec<f64>) = merged.into_iter().unzip();
        Ok(Self::from_sorted(values, masses))
    }

    /// Builds from already validated, strictly decreasing atoms.
    fn from_sorted(values: Vec<f64>, masses: Vec<f64>) -> Self {
        let mut cum = Vec::with_capacity(masses.len());
        let mut acc = 0.0;
        for &m in &masses {
            acc += m;
            cum.push(acc.min(1.0));
        }
        DiscreteRv { values, masses, cum }
    }

    /// The variable that always takes `value`.
    pub fn deterministic(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![1.0])
    }

    /// The deterministic-zero variable (empty support).
    pub fn zero() -> Self {
        DiscreteRv {
            values: Vec::new(),
            masses: Vec::new(),
            cum: Vec::new(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Cumulative masses `q_i = p_1 + ... + p_i`, clamped to at most 1.
    pub fn cum_masses(&self) -> &[f64] {
        &self.cum
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total positive probability mass `q_n`; the rest sits at zero.
    pub fn total_mass(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    /// Largest support value, or 0 for the zero variable.
    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `P(X >= v)` for `v > 0`.
    pub fn tail_probability(&self, v: f64) -> f64 {
        let mut acc = 0.0;
        for (&x, &m) in self.values.iter().zip(&self.masses) {
            if x < v {
                break;
            }
            acc += m;
        }
        acc
    }

    /// Maps a uniform draw `u` in `[0, 1)` to a realized value.
    pub fn sample_value(&self, u: f64) -> f64 {
        for (&x, &q) in self.values.iter().zip(&self.cum) {
            if u < q {
                return x;
            }
        }
        0.0
    }

    /// Expectation `sum_i p_i x_i`; this is the canonical test score.
    pub fn expectation(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.masses)
            .map(|(v, m)| v * m)
            .sum()
    }

    /// Expected maximum of `copies` independent copies, with a real number
    /// of copies interpreted through the survival-function closed form.
    fn expected_max_of_copies(&self, copies: f64) -> f64 {
        let mut total = 0.0;
        let mut prev_survival = 1.0;
        for (&x, &q) in self.values.iter().zip(&self.cum) {
            let survival = (1.0 - q).max(0.0).powf(copies);
            total += (prev_survival - survival) * x;
            prev_survival = survival;
        }
        total
    }

    /// Potential test score: the expected maximum of `k/h` independent
    /// copies. Equals the expectation when `h = k` and grows towards
    /// `max_value` as `h/k` shrinks.
    pub fn potential_score(&self, k: usize, h: usize) -> Result<f64> {
        check_team_params(k, h)?;
        if h == k {
            return Ok(self.expectation());
        }
        Ok(self.expected_max_of_copies(k as f64 / h as f64))
    }

    /// Conditional quantile score `E(X | X in its top h/k quantile)`.
    pub fn conditional_quantile_score(&self, k: usize, h: usize) -> Result<f64> {
        check_team_params(k, h)?;
        if h == k {
            return Ok(self.expectation());
        }
        let alpha = h as f64 / k as f64;
        let split = self.split_top_quantile(alpha)?;
        Ok(split.top.expectation() / alpha)
    }

    /// Splits the distribution at its top `alpha` quantile of probability.
    ///
    /// The top part carries mass `alpha` drawn from the largest values
    /// downward; an atom straddling the boundary is split arithmetically by
    /// direct subtraction of cumulative masses. If the total positive mass
    /// is below `alpha`, the whole support goes to the top part and the
    /// quantile's remainder is the zero value.
    pub fn split_top_quantile(&self, alpha: f64) -> Result<QuantileSplit> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let mut top_values = Vec::new();
        let mut top_masses = Vec::new();
        let mut tail_values = Vec::new();
        let mut tail_masses = Vec::new();
        let mut prev_cum = 0.0;
        for (&x, (&m, &q)) in self.values.iter().zip(self.masses.iter().zip(&self.cum)) {
            if q <= alpha {
                top_values.push(x);
                top_masses.push(m);
            } else if prev_cum < alpha {
                let taken = alpha - prev_cum;
                top_values.push(x);
                top_masses.push(taken);
                let rest = m - taken;
                if rest > 0.0 {
                    tail_values.push(x);
                    tail_masses.push(rest);
                }
            } else {
                tail_values.push(x);
                tail_masses.push(m);
            }
            prev_cum = q;
        }
        Ok(QuantileSplit {
            top: DiscreteRv::from_sorted(top_values, top_masses),
            tail: DiscreteRv::from_sorted(tail_values, tail_masses),
            alpha,
        })
    }
}

/// Result of splitting a variable at its top `alpha` quantile.
///
/// `top` holds the atoms (boundary atom split) lying inside the quantile,
/// viewed as a standalone variable that is zero elsewhere; `tail` holds the
/// rest. The boundary value may appear in both.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSplit {
    pub top: DiscreteRv,
    pub tail: DiscreteRv,
    pub alpha: f64,
}

/// A two-point variable: `value` with probability `p`, else 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedBernoulli {
    p: f64,
    x: f64,
}

impl WeightedBernoulli {
    pub fn new(p: f64, x: f64) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if !x.is_finite() || x < 0.0 {
            return Err(Error::NegativeValue(x));
        }
        Ok(WeightedBernoulli { p, x })
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    pub fn value(&self) -> f64 {
        self.x
    }

    pub fn expectation(&self) -> f64 {
        self.p * self.x
    }

    pub fn to_rv(&self) -> DiscreteRv {
        if self.p == 0.0 || self.x == 0.0 {
            DiscreteRv::zero()
        } else {
            DiscreteRv::from_sorted(vec![self.x], vec![self.p])
        }
    }
}

/// A pool member: a unique id together with its variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub id: String,
    pub rv: DiscreteRv,
}

impl Candidate {
    pub fn new(id: impl Into<String>, rv: DiscreteRv) -> Self {
        Candidate { id: id.into(), rv }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn rv(values: &[f64], masses: &[f64]) -> DiscreteRv {
        DiscreteRv::new(values.to_vec(), masses.to_vec()).unwrap()
    }

    #[test]
    fn new_sorts_decreasing() {
        let x = rv(&[1.0, 2.0], &[0.3, 0.3]);
        assert_eq!(x.values(), &[2.0, 1.0]);
        assert_eq!(x.masses(), &[0.3, 0.3]);
        assert_abs_diff_eq!(x.total_mass(), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn new_merges_duplicates() {
        let x = rv(&[2.0, 2.0], &[0.2, 0.2]);
        assert_eq!(x.values(), &[2.0]);
        assert_abs_diff_eq!(x.masses()[0], 0.4, epsilon = 1e-15);
    }

    #[test]
    fn new_drops_zero_values_into_residual() {
        let x = rv(&[0.0, 3.0], &[0.5, 0.25]);
        assert_eq!(x.values(), &[3.0]);
        assert_abs_diff_eq!(x.total_mass(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn new_rejects_bad_input() {
        assert_eq!(
            DiscreteRv::new(vec![1.0], vec![1.5]),
            Err(Error::MassExceedsOne(1.5))
        );
        assert_eq!(
            DiscreteRv::new(vec![-1.0], vec![0.5]),
            Err(Error::NegativeValue(-1.0))
        );
        assert_eq!(
            DiscreteRv::new(vec![1.0], vec![0.0]),
            Err(Error::NonPositiveMass(0.0))
        );
        assert_eq!(
            DiscreteRv::new(vec![1.0, 2.0], vec![0.5]),
            Err(Error::LengthMismatch { values: 2, masses: 1 })
        );
    }

    #[test]
    fn expectation_examples() {
        assert_abs_diff_eq!(rv(&[1.0], &[0.5]).expectation(), 0.5);
        assert_abs_diff_eq!(rv(&[2.0, 1.0], &[0.25, 0.25]).expectation(), 0.75);
        assert_abs_diff_eq!(DiscreteRv::deterministic(3.25).unwrap().expectation(), 3.25);
        assert_eq!(DiscreteRv::zero().expectation(), 0.0);
    }

    #[test]
    fn potential_of_deterministic_is_the_value() {
        let c = DiscreteRv::deterministic(4.5).unwrap();
        for (k, h) in [(1, 1), (4, 1), (6, 2), (7, 3)] {
            assert_abs_diff_eq!(c.potential_score(k, h).unwrap(), 4.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn potential_of_fair_coin() {
        // max of two copies of 1{p=1/2}: 1 - (1/2)^2
        let x = rv(&[1.0], &[0.5]);
        assert_abs_diff_eq!(x.potential_score(2, 1).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn potential_matches_monte_carlo_pairs() {
        // Expected max of two independent copies of (2 w.p. .5, 1 w.p. .5),
        // estimated from 10^7 paired draws.
        let x = rv(&[2.0, 1.0], &[0.5, 0.5]);
        let exact = x.potential_score(2, 1).unwrap();

        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_601);
        let n = 10_000_000usize;
        let (mut sum, mut sumsq) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let a = x.sample_value(rng.random::<f64>());
            let b = x.sample_value(rng.random::<f64>());
            let m = a.max(b);
            sum += m;
            sumsq += m * m;
        }
        let mean = sum / n as f64;
        let var = ((sumsq - sum * sum / n as f64) / (n as f64 - 1.0)).max(0.0);
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se,
            "exact {exact} vs mc {mean} +- {se}"
        );
        assert_abs_diff_eq!(exact, 1.75, epsilon = 1e-12);
    }

    #[test]
    fn potential_rejects_bad_params() {
        let x = rv(&[1.0], &[0.5]);
        assert!(x.potential_score(2, 3).is_err());
        assert!(x.potential_score(2, 0).is_err());
    }

    #[test]
    fn split_boundary_atom() {
        let x = rv(&[2.0, 1.0], &[0.5, 0.5]);
        let s = x.split_top_quantile(0.25).unwrap();
        assert_eq!(s.top.values(), &[2.0]);
        assert_abs_diff_eq!(s.top.masses()[0], 0.25, epsilon = 1e-15);
        assert_eq!(s.tail.values(), &[2.0, 1.0]);
        assert_abs_diff_eq!(s.tail.masses()[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tail.masses()[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn split_exact_boundary() {
        let x = rv(&[3.0, 2.0, 1.0], &[0.1, 0.1, 0.1]);
        let s = x.split_top_quantile(0.2).unwrap();
        assert_eq!(s.top.values(), &[3.0, 2.0]);
        assert_eq!(s.tail.values(), &[1.0]);
        assert_abs_diff_eq!(s.top.total_mass(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn split_rejects_bad_alpha() {
        let x = rv(&[1.0], &[0.5]);
        assert_eq!(
            x.split_top_quantile(1.5).unwrap_err(),
            Error::InvalidAlpha(1.5)
        );
        assert!(x.split_top_quantile(0.0).is_err());
    }

    #[test]
    fn conditional_score_examples() {
        let c = DiscreteRv::deterministic(2.5).unwrap();
        assert_abs_diff_eq!(c.conditional_quantile_score(3, 1).unwrap(), 2.5);

        // top quartile of (2 w.p. .5, 1 w.p. .5) is inside the value-2 atom
        let x = rv(&[2.0, 1.0], &[0.5, 0.5]);
        assert_abs_diff_eq!(x.conditional_quantile_score(4, 1).unwrap(), 2.0);

        // (0.1*4 + 0.4*2) / 0.5
        let y = rv(&[4.0, 2.0], &[0.1, 0.9]);
        assert_abs_diff_eq!(
            y.conditional_quantile_score(2, 1).unwrap(),
            2.4,
            epsilon = 1e-12
        );
    }

    #[test]
    fn conditional_equals_expectation_when_h_is_k() {
        let x = rv(&[4.0, 2.0], &[0.1, 0.9]);
        assert_eq!(
            x.conditional_quantile_score(3, 3).unwrap(),
            x.expectation()
        );
    }

    #[test]
    fn zero_variable_scores_are_zero() {
        let z = DiscreteRv::zero();
        assert_eq!(z.expectation(), 0.0);
        assert_eq!(z.potential_score(4, 1).unwrap(), 0.0);
        assert_eq!(z.conditional_quantile_score(4, 1).unwrap(), 0.0);
    }

    #[test]
    fn increasing_function_grids() {
        // (1-x)^a - (1-ax) and (1 - a x/2) - (1-x)^a are both nondecreasing
        // on [0, 1/(2a)]; checked on a grid of step 1/(64a).
        for a in [1.0f64, 2.0, 10.0, 100.0] {
            let step = 1.0 / (64.0 * a);
            let f = |x: f64| (1.0 - x).powf(a) - (1.0 - a * x);
            let g = |x: f64| (1.0 - a * x / 2.0) - (1.0 - x).powf(a);
            let mut x = 0.0;
            while x + step <= 1.0 / (2.0 * a) + 1e-15 {
                assert!(f(x + step) >= f(x) - 1e-12, "a={a}, x={x}");
                assert!(g(x + step) >= g(x) - 1e-12, "a={a}, x={x}");
                x += step;
            }
        }
    }

    #[test]
    fn weighted_bernoulli_validation() {
        assert!(WeightedBernoulli::new(1.2, 1.0).is_err());
        assert!(WeightedBernoulli::new(0.5, -1.0).is_err());
        let wb = WeightedBernoulli::new(0.5, 2.0).unwrap();
        assert_eq!(wb.expectation(), 1.0);
        assert_eq!(wb.to_rv().values(), &[2.0]);
        assert!(WeightedBernoulli::new(0.0, 2.0).unwrap().to_rv().is_empty());
    }

    // Strategy: up to 4 atoms with positive values and masses scaled to a
    // random total at most 1.
    fn arb_rv() -> impl Strategy<Value = DiscreteRv> {
        (
            prop::collection::vec((0.01f64..10.0, 0.05f64..1.0), 0..4),
            0.05f64..1.0,
        )
            .prop_map(|(atoms, total)| {
                let weight: f64 = atoms.iter().map(|(_, w)| w).sum();
                let (values, masses): (Vec<f64>, Vec<f64>) = atoms
                    .iter()
                    .map(|&(v, w)| (v, w / weight.max(1e-9) * total))
                    .unzip();
                DiscreteRv::new(values, masses).unwrap()
            })
    }

    proptest! {
        #[test]
        fn potential_with_one_copy_is_expectation(x in arb_rv(), k in 1usize..6) {
            prop_assert_eq!(x.potential_score(k, k).unwrap(), x.expectation());
        }

        #[test]
        fn potential_between_expectation_and_max(x in arb_rv(), k in 1usize..8, h in 1usize..8) {
            prop_assume!(h <= k);
            let f = x.potential_score(k, h).unwrap();
            prop_assert!(f >= x.expectation() - 1e-9);
            prop_assert!(f <= x.max_value() + 1e-9);
        }

        #[test]
        fn potential_nonincreasing_in_h(x in arb_rv(), k in 2usize..8) {
            let mut prev = f64::INFINITY;
            for h in 1..=k {
                let f = x.potential_score(k, h).unwrap();
                prop_assert!(f <= prev + 1e-9);
                prev = f;
            }
        }

        #[test]
        fn split_conserves_mass_and_mean(x in arb_rv(), alpha in 0.01f64..0.99) {
            let s = x.split_top_quantile(alpha).unwrap();
            let expected_top_mass = alpha.min(x.total_mass());
            prop_assert!((s.top.total_mass() - expected_top_mass).abs() <= 1e-12);
            prop_assert!(
                (s.top.expectation() + s.tail.expectation() - x.expectation()).abs() <= 1e-9
            );
            // every split value comes from the original support
            for v in s.top.values().iter().chain(s.tail.values()) {
                prop_assert!(x.values().contains(v));
            }
        }

        #[test]
        fn sample_value_respects_cumulative_masses(x in arb_rv(), u in 0.0f64..1.0) {
            let v = x.sample_value(u);
            if v > 0.0 {
                prop_assert!(x.values().contains(&v));
            }
        }
    }
}
