//! End-to-end solving: guess the heaviest set of the optimum, round each
//! feasible residual, and keep the best candidate. Also the exact
//! brute-force oracle used to audit the approximation factor, and a
//! recompute-everything solution verifier.

use std::collections::BTreeSet;

use crate::core::{
    covered_profit, is_feasible, meets_requirement, project, subsystem, CoverSolution, Error,
    PscInstance, Result, SetSystem, SNAP_EPS,
};
use crate::lp;
use crate::psc_rounding::{round_psc, Pairing, RoundTrace};
use crate::sc_rounding::ScRounder;

/// One row of the guess table.
#[derive(Debug, Clone)]
pub struct GuessRow {
    /// Position in the weight-sorted order.
    pub sorted_pos: usize,
    /// Original index of the guessed set.
    pub set: usize,
    pub feasible: bool,
    /// Weight of the full candidate (residual cover plus the guessed set);
    /// NaN when the residual is infeasible.
    pub weight: f64,
    /// LP value of the residual; NaN when infeasible, 0 when the residual
    /// requirement is already met.
    pub lp_value: f64,
    /// Factor reported by the rounder for this residual (0 when unused).
    pub beta: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: CoverSolution,
    /// LP value of the full instance (a lower bound on the optimum).
    pub lp_value: f64,
    /// min over feasible guesses of (residual LP value + guessed weight),
    /// the guess-aware LP lower bound on the optimum.
    pub lp_lower_bound: f64,
    /// Winning guess, if any set was guessed at all.
    pub guessed_set: Option<usize>,
    /// Worst rounder factor encountered across the evaluated guesses.
    pub beta_used: f64,
    /// (2 * beta_used + 2) * lp_lower_bound.
    pub bound_claimed: f64,
    pub alpha: f64,
    pub guesses: Vec<GuessRow>,
    /// Shallow-rounding trace per evaluated guess (original set index).
    pub traces: Vec<(usize, RoundTrace)>,
}

/// Guess which set is the heaviest one of the optimum: try every set in
/// ascending weight order, solve and round the residual restricted to
/// lighter sets and uncovered elements, and return the cheapest candidate.
pub fn partial_cover(
    instance: &PscInstance,
    alpha: f64,
    rounder: &dyn ScRounder,
    pairing: Pairing,
) -> Result<SolveReport> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1/2], got {}",
            alpha
        )));
    }
    let sys = &instance.system;
    if !is_feasible(instance) {
        let all: Vec<usize> = (0..sys.n_sets()).collect();
        return Err(Error::Infeasible {
            coverable: covered_profit(sys, &all)?,
            requirement: instance.requirement,
        });
    }

    let full_lp = lp::solve_psc(instance)?;
    let lp_value = full_lp.objective;

    if instance.requirement <= 0.0 {
        return Ok(SolveReport {
            solution: CoverSolution::empty(),
            lp_value,
            lp_lower_bound: 0.0,
            guessed_set: None,
            beta_used: 0.0,
            bound_claimed: 0.0,
            alpha,
            guesses: Vec::new(),
            traces: Vec::new(),
        });
    }

    let m = sys.n_sets();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        sys.weight(a).partial_cmp(&sys.weight(b)).unwrap().then(a.cmp(&b))
    });

    let mut best: Option<CoverSolution> = None;
    let mut best_guess = None;
    let mut guesses = Vec::with_capacity(m);
    let mut traces = Vec::new();
    let mut beta_used: f64 = 0.0;
    let mut lp_lower_bound = f64::INFINITY;

    for (pos, &guessed) in order.iter().enumerate() {
        let lighter = &order[..pos];
        let keep: Vec<usize> = {
            let in_guessed: BTreeSet<usize> = sys.set(guessed).iter().copied().collect();
            (0..sys.n_elements()).filter(|j| !in_guessed.contains(j)).collect()
        };
        let residual_requirement = instance.requirement
            - sys.set(guessed).iter().map(|&e| sys.profit(e)).sum::<f64>();

        let projection = project(sys, &keep)?;
        let residual_system = subsystem(&projection.system, lighter)?;
        let residual = PscInstance::new(residual_system, residual_requirement)?;

        let (residual_cover, residual_lp, beta) = if residual.requirement <= 0.0 {
            (CoverSolution::empty(), 0.0, 0.0)
        } else if !is_feasible(&residual) {
            guesses.push(GuessRow {
                sorted_pos: pos,
                set: guessed,
                feasible: false,
                weight: f64::NAN,
                lp_value: f64::NAN,
                beta: f64::NAN,
            });
            continue;
        } else {
            let sigma = lp::solve_psc(&residual)?;
            let rounding = round_psc(&residual, &sigma, alpha, rounder, pairing)?;
            traces.push((guessed, rounding.trace.clone()));
            beta_used = beta_used.max(rounding.beta_bound);
            // Residual-local set ids map back through the lighter-set list.
            let mapped: Vec<usize> =
                rounding.cover.chosen.iter().map(|&l| lighter[l]).collect();
            let cover = CoverSolution::new(sys, mapped)?;
            (cover, sigma.objective, rounding.beta_bound)
        };

        let mut candidate_sets = residual_cover.chosen.clone();
        candidate_sets.push(guessed);
        let candidate = CoverSolution::new(sys, candidate_sets)?;
        debug_assert!(meets_requirement(candidate.covered_profit, instance.requirement));

        lp_lower_bound = lp_lower_bound.min(residual_lp + sys.weight(guessed));
        guesses.push(GuessRow {
            sorted_pos: pos,
            set: guessed,
            feasible: true,
            weight: candidate.weight,
            lp_value: residual_lp,
            beta,
        });
        let improves = match &best {
            None => true,
            Some(b) => candidate.weight < b.weight,
        };
        if improves {
            best = Some(candidate);
            best_guess = Some(guessed);
        }
    }

    let solution = best.expect("a feasible instance admits at least one feasible guess");
    let bound_claimed = (2.0 * beta_used + 2.0) * lp_lower_bound;
    Ok(SolveReport {
        solution,
        lp_value,
        lp_lower_bound,
        guessed_set: best_guess,
        beta_used,
        bound_claimed,
        alpha,
        guesses,
        traces,
    })
}

const BRUTE_FORCE_CAP: usize = 25;

/// Exact minimum-weight cover by depth-first enumeration over sets, with
/// weight and remaining-coverage pruning. Ties go to the lexicographically
/// smallest index list. Capped at 25 sets.
pub fn exact_brute_force(instance: &PscInstance) -> Result<CoverSolution> {
    let sys = &instance.system;
    let m = sys.n_sets();
    if m > BRUTE_FORCE_CAP {
        return Err(Error::ResourceLimit(format!(
            "{} sets exceed the exact-search cap of {}",
            m, BRUTE_FORCE_CAP
        )));
    }
    if instance.requirement <= 0.0 {
        return Ok(CoverSolution::empty());
    }
    if !is_feasible(instance) {
        let all: Vec<usize> = (0..m).collect();
        return Err(Error::Infeasible {
            coverable: covered_profit(sys, &all)?,
            requirement: instance.requirement,
        });
    }

    let blocks = sys.n_elements().div_ceil(64);
    let set_masks: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut mask = vec![0u64; blocks];
            for &e in sys.set(i) {
                mask[e / 64] |= 1 << (e % 64);
            }
            mask
        })
        .collect();
    // Most additional profit the suffix of sets could still contribute.
    let mut suffix_profit = vec![0.0; m + 1];
    for i in (0..m).rev() {
        let mut mask = vec![0u64; blocks];
        for s in i..m {
            for (b, v) in mask.iter_mut().zip(&set_masks[s]) {
                *b |= v;
            }
        }
        suffix_profit[i] = profit_of_mask(sys, &mask);
    }

    struct Search<'a> {
        sys: &'a SetSystem,
        requirement: f64,
        set_masks: &'a [Vec<u64>],
        suffix_profit: &'a [f64],
        covered: Vec<u64>,
        covered_profit: f64,
        weight: f64,
        chosen: Vec<usize>,
        best: Option<CoverSolution>,
    }

    fn profit_of_mask(sys: &SetSystem, mask: &[u64]) -> f64 {
        let mut total = 0.0;
        for j in 0..sys.n_elements() {
            if mask[j / 64] & (1 << (j % 64)) != 0 {
                total += sys.profit(j);
            }
        }
        total
    }

    impl<'a> Search<'a> {
        fn run(&mut self, next: usize) {
            if meets_requirement(self.covered_profit, self.requirement) {
                let candidate = CoverSolution::new(self.sys, self.chosen.clone())
                    .expect("chosen indices are valid");
                let replace = match &self.best {
                    None => true,
                    Some(b) => {
                        candidate.weight < b.weight - SNAP_EPS * (1.0 + b.weight)
                            || ((candidate.weight - b.weight).abs()
                                <= SNAP_EPS * (1.0 + b.weight)
                                && candidate.chosen < b.chosen)
                    }
                };
                if replace {
                    self.best = Some(candidate);
                }
                return; // supersets only cost more
            }
            if next == self.set_masks.len() {
                return;
            }
            if let Some(b) = &self.best {
                if self.weight > b.weight + SNAP_EPS * (1.0 + b.weight) {
                    return;
                }
            }
            if !meets_requirement(
                self.covered_profit + self.suffix_profit[next],
                self.requirement,
            ) {
                return;
            }

            // Include `next`.
            let mut newly = Vec::new();
            for j in 0..self.sys.n_elements() {
                let block = j / 64;
                let bit = 1 << (j % 64);
                if self.set_masks[next][block] & bit != 0 && self.covered[block] & bit == 0 {
                    self.covered[block] |= bit;
                    self.covered_profit += self.sys.profit(j);
                    newly.push(j);
                }
            }
            self.weight += self.sys.weight(next);
            self.chosen.push(next);
            self.run(next + 1);
            self.chosen.pop();
            self.weight -= self.sys.weight(next);
            for j in newly {
                self.covered[j / 64] &= !(1 << (j % 64));
                self.covered_profit -= self.sys.profit(j);
            }

            // Skip `next`.
            self.run(next + 1);
        }
    }

    let mut search = Search {
        sys,
        requirement: instance.requirement,
        set_masks: &set_masks,
        suffix_profit: &suffix_profit,
        covered: vec![0u64; blocks],
        covered_profit: 0.0,
        weight: 0.0,
        chosen: Vec::new(),
        best: None,
    };
    search.run(0);
    search.best.ok_or(Error::Infeasible {
        coverable: covered_profit(sys, &(0..m).collect::<Vec<_>>())?,
        requirement: instance.requirement,
    })
}

/// Recomputed facts about a candidate solution; nothing stored in the
/// solution is trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub feasible: bool,
    pub weight: f64,
    pub covered_profit: f64,
    pub requirement: f64,
    /// Profit still missing (0 when feasible).
    pub deficit: f64,
}

pub fn verify(instance: &PscInstance, solution: &CoverSolution) -> Verification {
    let recomputed = CoverSolution::new(&instance.system, solution.chosen.clone())
        .expect("solution indices validated at construction");
    let feasible = meets_requirement(recomputed.covered_profit, instance.requirement);
    let deficit = if feasible {
        0.0
    } else {
        instance.requirement - recomputed.covered_profit
    };
    Verification {
        feasible,
        weight: recomputed.weight,
        covered_profit: recomputed.covered_profit,
        requirement: instance.requirement,
        deficit,
    }
}
