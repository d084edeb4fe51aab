//! Adversarial constructions: instances on which a given test score
//! provably selects a poor team.
//!
//! Two families of negative results are made executable here. For the
//! coverage objective (candidates are sets, the team value is the size of
//! their union) and for the induced-edge objective on disjoint cliques, the
//! constructions interrogate an arbitrary deterministic test score and
//! produce a 2k-candidate fooling pool where the score's top-k selection is
//! a factor of roughly `k` from optimal. Both terminate within `k^2 + k + 1`
//! building blocks by pigeonhole.
//!
//! The module also ships the tight instance for canonical-test selection,
//! the fixed three-candidate pool on which greedy hill-climbing misses the
//! optimum, and the Set Cover reduction showing that maximizing the
//! expected maximum over dependent pools is NP-hard.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rv::{Candidate, DiscreteRv};
use crate::select::{top_k_ids, TieBreak};
use crate::team::{DependentEnsemble, TeamInstance};

/// Epsilon used by [`hill_climb_counterexample`]; small enough that every
/// strict inequality in the construction holds with ample margin.
pub const HILL_CLIMB_EPSILON: f64 = 1e-6;

/// The instance on which canonical-test selection approaches its worst
/// case: `k` candidates worth a deterministic `1 + epsilon` (which the
/// canonical test prefers) against `k` long shots worth `n` with
/// probability `1/n`. The value ratio tends to `k/h` as `n` grows and
/// `epsilon` vanishes.
pub fn canonical_tightness_instance(
    k: usize,
    h: usize,
    n: u64,
    epsilon: f64,
) -> Result<TeamInstance> {
    if n < 2 || !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "require n >= 2 and epsilon > 0, got n={n}, epsilon={epsilon}"
        )));
    }
    let mut pool = Vec::with_capacity(2 * k);
    for i in 1..=k {
        pool.push(Candidate::new(
            format!("det{i:02}"),
            DiscreteRv::deterministic(1.0 + epsilon)?,
        ));
    }
    for i in 1..=k {
        pool.push(Candidate::new(
            format!("risk{i:02}"),
            DiscreteRv::new(vec![n as f64], vec![1.0 / n as f64])?,
        ));
    }
    TeamInstance::new(pool, k, h)
}

/// The fixed pool showing greedy hill-climbing on the expected maximum is
/// not optimal for general independent variables: `X` takes 9/5 and 6/5
/// with mass 1/3 each, `Y` is deterministically `1 + epsilon`, `Z` takes
/// 3/2 with mass 2/3; `k = 2`, `h = 1`. Greedy starts with `Y` (largest
/// expectation) but the best pair is `{X, Z}`.
pub fn hill_climb_counterexample() -> TeamInstance {
    let x = DiscreteRv::new(vec![9.0 / 5.0, 6.0 / 5.0], vec![1.0 / 3.0, 1.0 / 3.0])
        .expect("static instance");
    let y = DiscreteRv::deterministic(1.0 + HILL_CLIMB_EPSILON).expect("static instance");
    let z = DiscreteRv::new(vec![3.0 / 2.0], vec![2.0 / 3.0]).expect("static instance");
    TeamInstance::new(
        vec![
            Candidate::new("X", x),
            Candidate::new("Y", y),
            Candidate::new("Z", z),
        ],
        2,
        1,
    )
    .expect("static instance")
}

/// A candidate in the coverage game: a finite set of perspectives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystemCandidate {
    pub id: String,
    pub elements: BTreeSet<u64>,
}

/// Number of distinct elements covered by a team.
pub fn coverage(candidates: &[&SetSystemCandidate]) -> u64 {
    let mut union = BTreeSet::new();
    for c in candidates {
        union.extend(c.elements.iter().copied());
    }
    union.len() as u64
}

/// Result of the coverage fooling game.
#[derive(Debug, Clone)]
pub struct CardinalityAdversary {
    pub fooling_pool: Vec<SetSystemCandidate>,
    pub selected_team: Vec<String>,
    pub selected_value: u64,
    pub optimal_team: Vec<String>,
    pub optimal_value: u64,
}

/// Builds a 2k-candidate pool of perspective sets on which `test`'s top-k
/// selection (worst-case ties) covers only `k + 1` elements while the
/// optimal selection covers `k^2`.
///
/// Construction: consecutive width-`k+1` intervals each spawn the `k + 1`
/// subsets obtained by dropping one element (enumerated by dropped
/// element), ranked by test value. Either some base interval has `k` later
/// intervals whose weakest subset scores no higher than the base's second
/// weakest, or by pigeonhole some later interval beats them all; both cases
/// yield the fooling pool.
pub fn cardinality_adversary<F>(test: F, k: usize) -> Result<CardinalityAdversary>
where
    F: Fn(&SetSystemCandidate) -> f64,
{
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "coverage game needs k >= 2, got {k}"
        )));
    }
    let num_families = k * k + k + 1;
    let mut ranked: Vec<Vec<(f64, SetSystemCandidate)>> = Vec::with_capacity(num_families);
    for fam in 1..=num_families {
        let lo = ((fam - 1) * (k + 1) + 1) as u64;
        let interval: Vec<u64> = (lo..lo + (k + 1) as u64).collect();
        let mut members: Vec<(f64, SetSystemCandidate)> = interval
            .iter()
            .map(|&dropped| {
                let cand = SetSystemCandidate {
                    id: format!("U{fam:03}-drop{dropped}"),
                    elements: interval
                        .iter()
                        .copied()
                        .filter(|&e| e != dropped)
                        .collect(),
                };
                (test(&cand), cand)
            })
            .collect();
        // stable: ties keep the dropped-element enumeration order
        members.sort_by(|a, b| a.0.total_cmp(&b.0));
        ranked.push(members);
    }

    let pool: Vec<SetSystemCandidate> = 'pool: {
        for base in 0..k {
            let cutoff = ranked[base][1].0;
            let bad: Vec<usize> = (k..num_families)
                .filter(|&j| ranked[j][0].0 <= cutoff)
                .take(k)
                .collect();
            if bad.len() == k {
                let mut pool: Vec<SetSystemCandidate> = ranked[base][1..=k]
                    .iter()
                    .map(|(_, c)| c.clone())
                    .collect();
                pool.extend(bad.iter().map(|&j| ranked[j][0].1.clone()));
                break 'pool pool;
            }
        }
        let good = (k..num_families)
            .find(|&j| (0..k).all(|i| ranked[j][0].0 > ranked[i][1].0))
            .expect("pigeonhole: fewer than k^2 intervals can be dominated");
        let mut pool: Vec<SetSystemCandidate> =
            (0..k).map(|i| ranked[i][0].1.clone()).collect();
        pool.extend(ranked[good][..k].iter().map(|(_, c)| c.clone()));
        pool
    };

    let by_id: HashMap<&str, &SetSystemCandidate> =
        pool.iter().map(|c| (c.id.as_str(), c)).collect();
    let team_coverage = |team: &[String]| {
        let members: Vec<&SetSystemCandidate> =
            team.iter().map(|id| by_id[id.as_str()]).collect();
        coverage(&members)
    };
    let scored: Vec<(String, f64)> = pool.iter().map(|c| (c.id.clone(), test(c))).collect();
    let objective = |team: &[String]| team_coverage(team) as f64;
    let selected_team = top_k_ids(&scored, k, TieBreak::Pessimal(&objective));
    let selected_value = team_coverage(&selected_team);

    let ids: Vec<String> = pool.iter().map(|c| c.id.clone()).sorted().collect();
    let mut optimal: Option<(u64, Vec<String>)> = None;
    for combo in ids.iter().combinations(k) {
        let team: Vec<String> = combo.into_iter().cloned().collect();
        let value = team_coverage(&team);
        if optimal.as_ref().is_none_or(|(bv, _)| value > *bv) {
            optimal = Some((value, team));
        }
    }
    let (optimal_value, optimal_team) = optimal.expect("pool is nonempty");

    Ok(CardinalityAdversary {
        fooling_pool: pool,
        selected_team,
        selected_value,
        optimal_team,
        optimal_value,
    })
}

/// A vertex universe made of disjoint complete graphs on `k + 1` vertices.
#[derive(Debug, Clone)]
pub struct CliqueWorld {
    k: usize,
    cliques: Vec<Vec<String>>,
    clique_of: HashMap<String, usize>,
}

impl CliqueWorld {
    /// Requires at least `k^2 + k + 1` cliques, the number the fooling
    /// argument needs.
    pub fn new(num_cliques: usize, k: usize) -> Result<Self> {
        if k < 1 || num_cliques < k * k + k + 1 {
            return Err(Error::InvalidParams(format!(
                "clique world needs k >= 1 and at least k^2+k+1 cliques, got k={k}, cliques={num_cliques}"
            )));
        }
        let mut cliques = Vec::with_capacity(num_cliques);
        let mut clique_of = HashMap::new();
        for j in 1..=num_cliques {
            let verts: Vec<String> =
                (1..=k + 1).map(|v| format!("c{j:03}v{v:02}")).collect();
            for v in &verts {
                clique_of.insert(v.clone(), j - 1);
            }
            cliques.push(verts);
        }
        Ok(CliqueWorld {
            k,
            cliques,
            clique_of,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cliques(&self) -> &[Vec<String>] {
        &self.cliques
    }

    /// Number of edges induced by a vertex set: vertices are adjacent iff
    /// they share a clique.
    pub fn induced_edges(&self, vertices: &[String]) -> usize {
        let mut per_clique: HashMap<usize, usize> = HashMap::new();
        for v in vertices {
            if let Some(&c) = self.clique_of.get(v) {
                *per_clique.entry(c).or_insert(0) += 1;
            }
        }
        per_clique.values().map(|&c| c * (c - 1) / 2).sum()
    }
}

/// Result of the induced-edge fooling game.
#[derive(Debug, Clone)]
pub struct CliqueAdversary {
    pub world: CliqueWorld,
    pub fooling_vertices: Vec<String>,
    pub selected_team: Vec<String>,
    pub selected_edges: usize,
    pub optimal_team: Vec<String>,
    pub optimal_edges: usize,
}

/// Builds a 2k-vertex fooling set on which `test`'s top-k vertices (worst
/// case ties) induce no edges at all, while some k-subset induces a full
/// `k(k-1)/2`. Mirrors the coverage game with cliques in place of
/// intervals: bad cliques are those whose strongest vertex still scores at
/// least the base clique's k-th weakest.
pub fn clique_adversary<F>(test: F, k: usize) -> Result<CliqueAdversary>
where
    F: Fn(&str) -> f64,
{
    if k < 2 {
        return Err(Error::InvalidParams(format!(
            "induced-edge game needs k >= 2, got {k}"
        )));
    }
    let world = CliqueWorld::new(k * k + k + 1, k)?;
    let ranked: Vec<Vec<(f64, &String)>> = world
        .cliques()
        .iter()
        .map(|verts| {
            let mut r: Vec<(f64, &String)> = verts.iter().map(|v| (test(v), v)).collect();
            r.sort_by(|a, b| a.0.total_cmp(&b.0));
            r
        })
        .collect();
    let num_cliques = ranked.len();

    let fooling: Vec<String> = 'pool: {
        for base in 0..k {
            let cutoff = ranked[base][k - 1].0;
            let bad: Vec<usize> = (k..num_cliques)
                .filter(|&j| ranked[j][k].0 >= cutoff)
                .take(k)
                .collect();
            if bad.len() == k {
                let mut pool: Vec<String> = ranked[base][..k]
                    .iter()
                    .map(|(_, v)| (*v).clone())
                    .collect();
                pool.extend(bad.iter().map(|&j| ranked[j][k].1.clone()));
                break 'pool pool;
            }
        }
        let good = (k..num_cliques)
            .find(|&j| (0..k).all(|i| ranked[j][k].0 < ranked[i][k - 1].0))
            .expect("pigeonhole: fewer than k^2 cliques can be dominated");
        let mut pool: Vec<String> = (0..k).map(|i| ranked[i][k].1.clone()).collect();
        pool.extend(ranked[good][..k].iter().map(|(_, v)| (*v).clone()));
        pool
    };

    let scored: Vec<(String, f64)> = fooling.iter().map(|v| (v.clone(), test(v))).collect();
    let objective = |team: &[String]| world.induced_edges(team) as f64;
    let selected_team = top_k_ids(&scored, k, TieBreak::Pessimal(&objective));
    let selected_edges = world.induced_edges(&selected_team);

    let ids: Vec<String> = fooling.iter().cloned().sorted().collect();
    let mut optimal: Option<(usize, Vec<String>)> = None;
    for combo in ids.iter().combinations(k) {
        let team: Vec<String> = combo.into_iter().cloned().collect();
        let edges = world.induced_edges(&team);
        if optimal.as_ref().is_none_or(|(bv, _)| edges > *bv) {
            optimal = Some((edges, team));
        }
    }
    let (optimal_edges, optimal_team) = optimal.expect("pool is nonempty");

    Ok(CliqueAdversary {
        world,
        fooling_vertices: fooling,
        selected_team,
        selected_edges,
        optimal_team,
        optimal_edges,
    })
}

/// A Set Cover question: can `k` of the subsets cover the universe?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: BTreeSet<u64>,
    pub subsets: Vec<BTreeSet<u64>>,
    pub k: usize,
}

impl SetCoverInstance {
    pub fn new(universe: BTreeSet<u64>, subsets: Vec<BTreeSet<u64>>, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams("set cover needs k >= 1".into()));
        }
        for (i, s) in subsets.iter().enumerate() {
            if let Some(&e) = s.iter().find(|e| !universe.contains(e)) {
                return Err(Error::InvalidParams(format!(
                    "subset {} contains {} which is outside the universe",
                    i + 1,
                    e
                )));
            }
        }
        Ok(SetCoverInstance {
            universe,
            subsets,
            k,
        })
    }

    /// Text format: first line `<universe-size> <k>` with the universe
    /// implicitly `0..universe-size`; each following nonempty line lists
    /// one subset as space-separated elements.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let mut parts = header.split_whitespace();
        let usize_field = |part: Option<&str>, name: &str| -> Result<usize> {
            part.ok_or_else(|| Error::Parse(format!("missing {name} in header")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let universe_size = usize_field(parts.next(), "universe size")?;
        let k = usize_field(parts.next(), "k")?;
        let universe: BTreeSet<u64> = (0..universe_size as u64).collect();
        let mut subsets = Vec::new();
        for (i, line) in lines.enumerate() {
            let subset = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|e| Error::Parse(format!("subset {}: {e}", i + 1)))
                })
                .collect::<Result<BTreeSet<u64>>>()?;
            subsets.push(subset);
        }
        SetCoverInstance::new(universe, subsets, k)
    }

    /// Inverse of [`SetCoverInstance::from_text`]; the universe must be the
    /// contiguous range `0..|U|` that format can express.
    pub fn to_text(&self) -> String {
        debug_assert!(
            self.universe.iter().enumerate().all(|(i, &e)| e == i as u64),
            "text format requires universe 0..n"
        );
        let mut out = format!("{} {}\n", self.universe.len(), self.k);
        for s in &self.subsets {
            let line = s.iter().map(|e| e.to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Random instance over universe `0..universe_size`; each subset keeps
    /// each element with an independently drawn density and is never empty.
    pub fn random<R: Rng>(
        rng: &mut R,
        universe_size: usize,
        num_subsets: usize,
        k: usize,
    ) -> Self {
        assert!(universe_size >= 1 && num_subsets >= 1 && k >= 1);
        let universe: BTreeSet<u64> = (0..universe_size as u64).collect();
        let subsets = (0..num_subsets)
            .map(|_| {
                let density = rng.random_range(0.15..0.7);
                let mut s: BTreeSet<u64> = universe
                    .iter()
                    .copied()
                    .filter(|_| rng.random::<f64>() < density)
                    .collect();
                if s.is_empty() {
                    s.insert(rng.random_range(0..universe_size as u64));
                }
                s
            })
            .collect();
        SetCoverInstance {
            universe,
            subsets,
            k,
        }
    }
}

/// Encodes a Set Cover instance as a dependent pool: the sample space is
/// the universe under the uniform measure, and candidate `S_i` is the
/// indicator of its subset. A team's expected maximum is then exactly the
/// fraction of the universe it covers, so it reaches 1 iff the team is a
/// cover.
pub fn setcover_to_ensemble(inst: &SetCoverInstance) -> Result<DependentEnsemble> {
    if inst.universe.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    let ids: Vec<String> = (1..=inst.subsets.len()).map(|i| format!("S{i}")).collect();
    let p = 1.0 / inst.universe.len() as f64;
    let outcomes: Vec<(f64, Vec<f64>)> = inst
        .universe
        .iter()
        .map(|e| {
            let row: Vec<f64> = inst
                .subsets
                .iter()
                .map(|s| if s.contains(e) { 1.0 } else { 0.0 })
                .collect();
            (p, row)
        })
        .collect();
    DependentEnsemble::new(ids, outcomes)
}

const COVER_ENUM_CAP: usize = 20;

/// Direct enumeration oracle: is some collection of at most `k` subsets a
/// cover? Only instances with at most 20 subsets are enumerated.
pub fn cover_decision(inst: &SetCoverInstance) -> Result<bool> {
    if inst.subsets.len() > COVER_ENUM_CAP {
        return Err(Error::BudgetExceeded(
            inst.subsets.len() as u128,
            COVER_ENUM_CAP as u128,
        ));
    }
    if inst.universe.is_empty() {
        return Ok(true);
    }
    let m = inst.subsets.len();
    for size in 1..=inst.k.min(m) {
        for combo in (0..m).combinations(size) {
            let mut union = BTreeSet::new();
            for i in combo {
                union.extend(inst.subsets[i].iter().copied());
            }
            if union == inst.universe {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Largest expected maximum achievable by any team of at most `k` subset
/// indicators, found by enumeration over the reduction's ensemble.
pub fn best_cover_team_value(inst: &SetCoverInstance) -> Result<f64> {
    if inst.subsets.len() > COVER_ENUM_CAP {
        return Err(Error::BudgetExceeded(
            inst.subsets.len() as u128,
            COVER_ENUM_CAP as u128,
        ));
    }
    let ensemble = setcover_to_ensemble(inst)?;
    let ids = ensemble.candidate_ids().to_vec();
    let mut best = 0.0f64;
    for size in 1..=inst.k.min(ids.len()) {
        for combo in ids.iter().combinations(size) {
            let team: Vec<String> = combo.into_iter().cloned().collect();
            best = best.max(ensemble.expected_top_h(&team, 1)?);
        }
    }
    Ok(best)
}
