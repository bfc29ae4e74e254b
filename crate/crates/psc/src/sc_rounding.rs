//! Pluggable set-cover LP rounders.
//!
//! Each rounder turns a feasible fractional set-cover solution into an
//! integral cover of every element and reports the approximation factor it
//! can promise on that instance. Sets that are empty in the given system are
//! never chosen; they cannot help coverage.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::core::{
    coverage, CoverSolution, Error, Result, SetSystem, FEAS_EPS, SNAP_EPS,
};

/// An integral cover together with the factor the rounder guarantees on the
/// instance it was given.
#[derive(Debug, Clone)]
pub struct RoundedCover {
    pub cover: CoverSolution,
    pub beta_bound: f64,
}

/// Rounding oracle contract: cover every element of the system, reporting a
/// weight guarantee relative to the fractional cost of the input.
pub trait ScRounder {
    fn name(&self) -> &'static str;
    fn round(&self, system: &SetSystem, x: &[f64]) -> Result<RoundedCover>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RounderKind {
    Threshold,
    Greedy,
    Randomized,
}

impl std::str::FromStr for RounderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "threshold" => Ok(RounderKind::Threshold),
            "greedy" => Ok(RounderKind::Greedy),
            "randomized" => Ok(RounderKind::Randomized),
            other => Err(format!("unknown rounder '{}'", other)),
        }
    }
}

pub fn make_rounder(kind: RounderKind, seed: u64) -> Box<dyn ScRounder> {
    match kind {
        RounderKind::Threshold => Box::new(ThresholdRounder),
        RounderKind::Greedy => Box::new(GreedyRounder),
        RounderKind::Randomized => Box::new(RandomizedRounder { seed }),
    }
}

pub struct ThresholdRounder;

impl ScRounder for ThresholdRounder {
    fn name(&self) -> &'static str {
        "threshold"
    }

    fn round(&self, system: &SetSystem, x: &[f64]) -> Result<RoundedCover> {
        round_threshold(system, x)
    }
}

pub struct GreedyRounder;

impl ScRounder for GreedyRounder {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn round(&self, system: &SetSystem, x: &[f64]) -> Result<RoundedCover> {
        round_greedy(system, x)
    }
}

pub struct RandomizedRounder {
    pub seed: u64,
}

impl ScRounder for RandomizedRounder {
    fn name(&self) -> &'static str {
        "randomized"
    }

    fn round(&self, system: &SetSystem, x: &[f64]) -> Result<RoundedCover> {
        round_randomized(system, x, self.seed)
    }
}

fn check_sc_feasible(system: &SetSystem, x: &[f64]) -> Result<()> {
    if x.len() != system.n_sets() {
        return Err(Error::InvalidInput(format!(
            "{} x values for {} sets",
            x.len(),
            system.n_sets()
        )));
    }
    for (j, cov) in coverage(system, x).iter().enumerate() {
        if *cov < 1.0 - FEAS_EPS {
            return Err(Error::InvalidInput(format!(
                "element {} has fractional coverage {} < 1",
                j, cov
            )));
        }
    }
    Ok(())
}

/// Frequency-threshold rounding: pick every nonempty set opened to at least
/// 1/f, where f is the maximum element frequency. Guarantees factor f.
pub fn round_threshold(system: &SetSystem, x: &[f64]) -> Result<RoundedCover> {
    check_sc_feasible(system, x)?;
    if system.n_elements() == 0 {
        return Ok(RoundedCover { cover: CoverSolution::empty(), beta_bound: 1.0 });
    }
    let f = system.max_frequency() as f64;
    let chosen: Vec<usize> = (0..system.n_sets())
        .filter(|&i| !system.set(i).is_empty() && x[i] >= 1.0 / f - SNAP_EPS)
        .collect();
    let cover = CoverSolution::new(system, chosen)?;
    debug_assert!(
        cover.covered_profit >= system.total_profit() - SNAP_EPS,
        "some element's coverage >= 1 must force an open set above 1/f"
    );
    Ok(RoundedCover { cover, beta_bound: f })
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|t| 1.0 / t as f64).sum()
}

/// Classic greedy cover, oblivious to the fractional input: repeatedly take
/// the set with the best (newly covered profit) / weight ratio.
///
/// The reported H(n) factor holds against any feasible fractional cost when
/// profits are uniform; non-uniform profits only reorder the picks.
pub fn round_greedy(system: &SetSystem, _x: &[f64]) -> Result<RoundedCover> {
    let n = system.n_elements();
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    let mut n_covered = 0usize;

    while n_covered < n {
        let mut best: Option<(usize, f64, usize)> = None; // (set, profit gain, count gain)
        for i in 0..system.n_sets() {
            let count_gain = system.set(i).iter().filter(|&&e| !covered[e]).count();
            if count_gain == 0 {
                continue;
            }
            let profit_gain: f64 = system
                .set(i)
                .iter()
                .filter(|&&e| !covered[e])
                .map(|&e| system.profit(e))
                .sum();
            let better = match best {
                None => true,
                // gain_i / w_i > gain_best / w_best, cross-multiplied so
                // zero weights need no special case.
                Some((b, gain_b, _)) => {
                    profit_gain * system.weight(b) > gain_b * system.weight(i)
                }
            };
            if better {
                best = Some((i, profit_gain, count_gain));
            }
        }
        match best {
            Some((i, _, _)) => {
                chosen.push(i);
                for &e in system.set(i) {
                    if !covered[e] {
                        covered[e] = true;
                        n_covered += 1;
                    }
                }
            }
            None => {
                let uncovered = covered.iter().position(|&c| !c).unwrap();
                return Err(Error::UncoverableElement(uncovered));
            }
        }
    }
    let cover = CoverSolution::new(system, chosen)?;
    Ok(RoundedCover { cover, beta_bound: harmonic(n) })
}

/// Independent-rounds randomized rounding with greedy patching of anything
/// left uncovered. Deterministic given the seed. The reported factor is a
/// heuristic label; feasibility of the output is unconditional.
pub fn round_randomized(system: &SetSystem, x: &[f64], seed: u64) -> Result<RoundedCover> {
    check_sc_feasible(system, x)?;
    let n = system.n_elements();
    let scale = (n.max(2)) as f64;
    let rounds = (2.0 * scale.ln()).ceil() as usize;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut picked = vec![false; system.n_sets()];
    for _ in 0..rounds {
        for i in 0..system.n_sets() {
            if system.set(i).is_empty() {
                continue;
            }
            if rng.gen::<f64>() < x[i].min(1.0) {
                picked[i] = true;
            }
        }
    }

    let mut covered = vec![false; n];
    for (i, &p) in picked.iter().enumerate() {
        if p {
            for &e in system.set(i) {
                covered[e] = true;
            }
        }
    }
    // Patch: cheapest containing set per uncovered element.
    let incidence = system.element_sets();
    for j in 0..n {
        if covered[j] {
            continue;
        }
        let cheapest = incidence[j]
            .iter()
            .copied()
            .min_by(|&a, &b| {
                system
                    .weight(a)
                    .partial_cmp(&system.weight(b))
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .ok_or(Error::UncoverableElement(j))?;
        picked[cheapest] = true;
        for &e in system.set(cheapest) {
            covered[e] = true;
        }
    }

    let chosen: Vec<usize> = (0..system.n_sets()).filter(|&i| picked[i]).collect();
    let cover = CoverSolution::new(system, chosen)?;
    Ok(RoundedCover { cover, beta_bound: 2.0 * scale.ln() + 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::covered_profit;

    fn covers_everything(sys: &SetSystem, cover: &CoverSolution) -> bool {
        covered_profit(sys, &cover.chosen).unwrap() >= sys.total_profit() - SNAP_EPS
    }

    #[test]
    fn threshold_symmetric_split_takes_both() {
        let sys = SetSystem::new(1, vec![vec![0], vec![0]], vec![1.0, 1.0]).unwrap();
        let rounded = round_threshold(&sys, &[0.5, 0.5]).unwrap();
        assert_eq!(rounded.cover.chosen, vec![0, 1]);
        assert_eq!(rounded.beta_bound, 2.0);
        let fractional = 0.5 + 0.5;
        assert!(rounded.cover.weight <= rounded.beta_bound * fractional + 1e-9);
    }

    #[test]
    fn threshold_integral_input_returns_support() {
        let sys =
            SetSystem::new(3, vec![vec![0, 1], vec![2], vec![0, 2]], vec![1.0, 2.0, 1.0]).unwrap();
        let rounded = round_threshold(&sys, &[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(rounded.cover.chosen, vec![0, 1]);
        assert!(covers_everything(&sys, &rounded.cover));
    }

    #[test]
    fn threshold_triangle_checked_exhaustively() {
        // Three elements, each in exactly two of three sets: f = 2.
        let sys = SetSystem::new(
            3,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![1.0, 1.5, 2.0],
        )
        .unwrap();
        let x = [0.5, 0.5, 0.5];
        let rounded = round_threshold(&sys, &x).unwrap();
        assert!(covers_everything(&sys, &rounded.cover));
        let fractional: f64 = sys.weights().iter().zip(&x).map(|(w, x)| w * x).sum();
        assert!(rounded.cover.weight <= 2.0 * fractional + 1e-9);
        // Exhaustive check over all 8 subsets: the rounded cover is one of
        // the feasible ones.
        let mut feasible_subsets = Vec::new();
        for mask in 0u32..8 {
            let chosen: Vec<usize> = (0..3).filter(|&i| mask & (1 << i) != 0).collect();
            if covered_profit(&sys, &chosen).unwrap() >= 3.0 {
                feasible_subsets.push(chosen);
            }
        }
        assert!(feasible_subsets.contains(&rounded.cover.chosen));
    }

    #[test]
    fn threshold_rejects_infeasible_input() {
        let sys = SetSystem::new(2, vec![vec![0], vec![1]], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            round_threshold(&sys, &[0.4, 1.0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn greedy_disjoint_sets_takes_all() {
        let sys = SetSystem::new(4, vec![vec![0, 1], vec![2, 3]], vec![1.0, 1.0]).unwrap();
        let rounded = round_greedy(&sys, &[1.0, 1.0]).unwrap();
        assert_eq!(rounded.cover.chosen, vec![0, 1]);
        assert_eq!(rounded.cover.weight, 2.0);
    }

    #[test]
    fn greedy_prefers_dominating_set() {
        let sys = SetSystem::new(
            3,
            vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
            vec![1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let rounded = round_greedy(&sys, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(rounded.cover.chosen, vec![0]);
    }

    #[test]
    fn greedy_reports_uncoverable_element() {
        let sys = SetSystem::new(2, vec![vec![0]], vec![1.0]).unwrap();
        assert!(matches!(round_greedy(&sys, &[1.0]), Err(Error::UncoverableElement(1))));
    }

    #[test]
    fn randomized_is_deterministic_and_feasible() {
        let sys = SetSystem::new(
            5,
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![0, 4]],
            vec![1.0, 1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let x = [0.5, 0.5, 0.5, 0.5, 0.5];
        let a = round_randomized(&sys, &x, 42).unwrap();
        let b = round_randomized(&sys, &x, 42).unwrap();
        assert_eq!(a.cover, b.cover);
        assert!(covers_everything(&sys, &a.cover));
    }

    #[test]
    fn randomized_integral_input_keeps_support() {
        let sys = SetSystem::new(2, vec![vec![0], vec![1]], vec![1.0, 1.0]).unwrap();
        let rounded = round_randomized(&sys, &[1.0, 1.0], 7).unwrap();
        assert_eq!(rounded.cover.chosen, vec![0, 1]);
        let single = SetSystem::new(1, vec![vec![0]], vec![1.0]).unwrap();
        let forced = round_randomized(&single, &[1.0], 3).unwrap();
        assert_eq!(forced.cover.chosen, vec![0]);
    }
}
