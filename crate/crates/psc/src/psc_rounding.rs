//! Rounding a fractional partial-cover solution: split elements into deep
//! (coverage at least alpha) and shallow, hand the deep part to a set-cover
//! rounder after scaling, and resolve the shallow part by pairwise mass
//! transfers that keep the LP cost and total covered mass intact.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::core::{
    coverage, meets_requirement, project, subsystem, CoverSolution, Error, FractionalSolution,
    PscInstance, Result, SetSystem, FEAS_EPS, FREE_WEIGHT_EPS, SNAP_EPS,
};
use crate::sc_rounding::ScRounder;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1/2], got {}",
            alpha
        )));
    }
    Ok(())
}

/// How the shallow rounding resolves its "pick any set" choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Lowest active index, for reproducible runs.
    LowestIndex,
    /// Seeded random choices, for exercising the invariants under
    /// adversarial orders.
    Seeded(u64),
}

/// Outcome of splitting an instance at coverage threshold `alpha`.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Elements with fractional coverage >= alpha (instance indices).
    pub deep_elements: Vec<usize>,
    /// The full system projected onto the deep elements; set indices match
    /// the instance.
    pub deep_system: SetSystem,
    /// x' = min(x/alpha, 1) for every set, feasible for the deep set-cover LP.
    pub scaled_sc_solution: Vec<f64>,
    pub shallow_elements: Vec<usize>,
    /// Instance indices of the sets opened below alpha.
    pub shallow_sets: Vec<usize>,
    /// The shallow residual: shallow elements x shallow sets, with the
    /// requirement reduced by the deep elements' profit (may drop below 0).
    pub shallow_instance: PscInstance,
    /// sigma restricted to the shallow parts, values unchanged.
    pub restricted_solution: FractionalSolution,
}

/// Split into deep and shallow parts and restrict the solution to each side.
pub fn split_deep_shallow(
    instance: &PscInstance,
    sigma: &FractionalSolution,
    alpha: f64,
) -> Result<SplitResult> {
    check_alpha(alpha)?;
    sigma.check_feasible_for(instance)?;
    let sys = &instance.system;
    let cov = coverage(sys, &sigma.x);

    let deep_elements: Vec<usize> =
        (0..sys.n_elements()).filter(|&j| cov[j] >= alpha - SNAP_EPS).collect();
    let shallow_elements: Vec<usize> =
        (0..sys.n_elements()).filter(|&j| cov[j] < alpha - SNAP_EPS).collect();
    let shallow_sets: Vec<usize> =
        (0..sys.n_sets()).filter(|&i| sigma.x[i] < alpha - SNAP_EPS).collect();

    // A set opened to alpha certifies the threshold for all its elements, so
    // removed sets can never contain shallow elements.
    for i in 0..sys.n_sets() {
        if sigma.x[i] >= alpha - SNAP_EPS {
            for &e in sys.set(i) {
                assert!(
                    cov[e] >= alpha - SNAP_EPS,
                    "set {} opened to {} contains element {} with coverage {}",
                    i,
                    sigma.x[i],
                    e,
                    cov[e]
                );
            }
        }
    }

    let deep_projection = project(sys, &deep_elements)?;
    let scaled_sc_solution = scale_to_sc(&sigma.x, alpha, &deep_projection.system);

    let shallow_projection = project(sys, &shallow_elements)?;
    let shallow_system = subsystem(&shallow_projection.system, &shallow_sets)?;
    let deep_profit: f64 = deep_elements.iter().map(|&j| sys.profit(j)).sum();
    let shallow_instance =
        PscInstance::new(shallow_system, instance.requirement - deep_profit)?;

    let x_restricted: Vec<f64> = shallow_sets.iter().map(|&i| sigma.x[i]).collect();
    let z_restricted: Vec<f64> = shallow_elements.iter().map(|&j| sigma.z[j]).collect();
    let restricted_solution =
        FractionalSolution::new(x_restricted, z_restricted, &shallow_instance.system);

    // The restriction stays feasible for the shallow residual and costs no
    // more than sigma did.
    restricted_solution
        .check_feasible_for(&shallow_instance)
        .expect("restricting a feasible solution keeps it feasible");
    debug_assert!(
        restricted_solution.objective <= sigma.objective + SNAP_EPS * (1.0 + sigma.objective)
    );

    Ok(SplitResult {
        deep_elements,
        deep_system: deep_projection.system,
        scaled_sc_solution,
        shallow_elements,
        shallow_sets,
        shallow_instance,
        restricted_solution,
    })
}

/// Scale an x-vector by 1/alpha and cap at 1, yielding a feasible solution
/// for the set-cover LP on the deep projection.
pub fn scale_to_sc(x: &[f64], alpha: f64, deep_system: &SetSystem) -> Vec<f64> {
    let scaled: Vec<f64> = x.iter().map(|&xi| (xi / alpha).min(1.0)).collect();
    debug_assert!(
        coverage(deep_system, &scaled).iter().all(|&c| c >= 1.0 - FEAS_EPS),
        "every deep element scales to full fractional coverage"
    );
    scaled
}

/// Shift mass from `lower` onto `raise` until `raise` reaches alpha or
/// `lower` reaches zero, then retighten z to the new coverage for every
/// element still active. Returns the applied delta. The weighted cost is
/// unchanged by construction.
pub fn round_two_sets(
    system: &SetSystem,
    x: &mut [f64],
    z: &mut [f64],
    active: &[bool],
    raise: usize,
    lower: usize,
    alpha: f64,
) -> f64 {
    assert_ne!(raise, lower);
    let w_raise = system.weight(raise);
    let w_lower = system.weight(lower);
    debug_assert!(w_raise > FREE_WEIGHT_EPS && w_lower > FREE_WEIGHT_EPS);
    debug_assert!(x[raise] < alpha + SNAP_EPS && x[raise] >= 0.0);
    debug_assert!(x[lower] >= 0.0);

    let room = (alpha - x[raise]).max(0.0);
    let capacity = (w_lower / w_raise) * x[lower];
    let delta;
    if room <= capacity {
        delta = room;
        x[raise] = alpha;
        x[lower] -= (w_raise / w_lower) * room;
        if x[lower] <= SNAP_EPS {
            x[lower] = 0.0;
        }
    } else {
        delta = capacity;
        x[lower] = 0.0;
        x[raise] += capacity;
        if x[raise] >= alpha - SNAP_EPS {
            x[raise] = alpha;
        }
    }

    let incidence = system.element_sets();
    for (j, containing) in incidence.iter().enumerate() {
        if active[j] {
            z[j] = containing.iter().map(|&i| x[i]).sum();
        }
    }
    delta
}

/// One pairwise-rounding event: the pair, the transfer, and the state after
/// removals.
#[derive(Debug, Clone)]
pub struct RoundStep {
    pub designated: usize,
    pub partner: usize,
    pub raised: usize,
    pub delta: f64,
    pub removed_sets: Vec<usize>,
    pub selected: Option<usize>,
    pub removed_elements: Vec<usize>,
    pub designated_after: Option<usize>,
    pub x_after: Vec<f64>,
    pub z_after: Vec<f64>,
    /// sum of p_j z_j over the still-active elements
    pub active_mass: f64,
    /// active mass plus the full profit of every element retired as covered
    pub coverage_mass: f64,
    pub max_z_active: f64,
}

/// Full instrumentation of one shallow-rounding run, self-contained enough
/// to be replayed and checked without the originating instance.
#[derive(Debug, Clone)]
pub struct RoundTrace {
    pub system: SetSystem,
    pub alpha: f64,
    pub requirement: f64,
    /// False when the run exited before touching any set (requirement <= 0).
    pub completed: bool,
    pub initial_x: Vec<f64>,
    pub initial_z: Vec<f64>,
    /// Free sets taken outright before rounding.
    pub preselected: Vec<usize>,
    /// Sets already at alpha when the run started.
    pub selected_at_init: Vec<usize>,
    /// Sets already at zero when the run started.
    pub dropped_at_init: Vec<usize>,
    pub initial_coverage_mass: f64,
    pub steps: Vec<RoundStep>,
    pub survivor: Option<usize>,
}

impl RoundTrace {
    fn trivial(system: SetSystem, alpha: f64, requirement: f64, x: Vec<f64>, z: Vec<f64>) -> Self {
        let mass = z.iter().zip(system.profits()).map(|(&z, &p)| z * p).sum();
        RoundTrace {
            system,
            alpha,
            requirement,
            completed: false,
            initial_x: x,
            initial_z: z,
            preselected: Vec::new(),
            selected_at_init: Vec::new(),
            dropped_at_init: Vec::new(),
            initial_coverage_mass: mass,
            steps: Vec::new(),
            survivor: None,
        }
    }

    /// Replay the run and confirm every recorded invariant: conserved cost,
    /// non-decreasing covered mass, resolution of one set per step, the 2a
    /// cap on z, confinement of over-alpha elements to the designated set,
    /// and a clean terminal state.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let sys = &self.system;
        let m = sys.n_sets();
        let alpha = self.alpha;
        let weights = sys.weights();

        if self.steps.len() > m {
            return Err(format!("{} steps for {} sets", self.steps.len(), m));
        }
        if !self.completed {
            if !self.steps.is_empty() || self.survivor.is_some() {
                return Err("early-exit trace carries rounding events".into());
            }
            return Ok(());
        }

        let mut active_sets: BTreeSet<usize> = (0..m).collect();
        let mut active_elems = vec![true; sys.n_elements()];
        let mut retired_profit = 0.0;

        let retire_set_elements = |s: usize, active_elems: &mut Vec<bool>| -> (Vec<usize>, f64) {
            let mut removed = Vec::new();
            let mut profit = 0.0;
            for &e in sys.set(s) {
                if active_elems[e] {
                    active_elems[e] = false;
                    removed.push(e);
                    profit += sys.profit(e);
                }
            }
            (removed, profit)
        };

        for &i in self.preselected.iter().chain(&self.selected_at_init) {
            if !active_sets.remove(&i) {
                return Err(format!("set {} resolved twice at init", i));
            }
            let (_, p) = retire_set_elements(i, &mut active_elems);
            retired_profit += p;
        }
        for &i in &self.dropped_at_init {
            if !active_sets.remove(&i) {
                return Err(format!("set {} resolved twice at init", i));
            }
        }

        let incidence = sys.element_sets();
        let mass_of = |z: &[f64], active: &[bool], retired: f64| -> f64 {
            let live: f64 = z
                .iter()
                .zip(sys.profits())
                .zip(active)
                .filter(|(_, &a)| a)
                .map(|((&z, &p), _)| z * p)
                .sum();
            live + retired
        };

        let mut prev_x = self.initial_x.clone();
        let mut prev_cost: f64 = weights.iter().zip(&prev_x).map(|(w, x)| w * x).sum();
        let mut prev_mass = mass_of(&self.initial_z, &active_elems, retired_profit);
        if (self.initial_coverage_mass - prev_mass).abs() > SNAP_EPS * (1.0 + prev_mass.abs()) {
            return Err(format!(
                "recorded initial mass {} disagrees with replay {}",
                self.initial_coverage_mass, prev_mass
            ));
        }
        let mut prev_designated: Option<usize> = None;

        for (t, step) in self.steps.iter().enumerate() {
            let a = step.designated;
            let b = step.partner;
            if a == b || !active_sets.contains(&a) || !active_sets.contains(&b) {
                return Err(format!("step {}: pair ({}, {}) not active", t, a, b));
            }
            if step.raised != a && step.raised != b {
                return Err(format!("step {}: raised set outside the pair", t));
            }
            if let Some(d) = prev_designated {
                if a != d {
                    return Err(format!(
                        "step {}: designated set {} ignores carried set {}",
                        t, a, d
                    ));
                }
            }
            // Only the paired sets' x may move.
            for i in 0..m {
                if i != a && i != b && step.x_after[i] != prev_x[i] {
                    return Err(format!("step {}: untouched set {} changed x", t, i));
                }
            }
            // Cost is conserved.
            let cost: f64 = weights.iter().zip(&step.x_after).map(|(w, x)| w * x).sum();
            if (cost - prev_cost).abs() > SNAP_EPS * (1.0 + prev_cost.abs()) {
                return Err(format!("step {}: cost drifted from {} to {}", t, prev_cost, cost));
            }
            // The transfer resolves at least one side.
            let lowered = if step.raised == a { b } else { a };
            let hit_alpha = (step.x_after[step.raised] - alpha).abs() <= SNAP_EPS;
            let hit_zero = step.x_after[lowered].abs() <= SNAP_EPS;
            if !hit_alpha && !hit_zero {
                return Err(format!(
                    "step {}: neither {} reached alpha nor {} reached zero",
                    t, step.raised, lowered
                ));
            }
            // Apply removals.
            for &i in &step.removed_sets {
                if !active_sets.remove(&i) {
                    return Err(format!("step {}: removed inactive set {}", t, i));
                }
            }
            let mut removed_elements = Vec::new();
            if let Some(s) = step.selected {
                if !step.removed_sets.contains(&s) {
                    return Err(format!("step {}: selected set {} not removed", t, s));
                }
                let (removed, p) = retire_set_elements(s, &mut active_elems);
                retired_profit += p;
                removed_elements = removed;
            }
            if removed_elements != step.removed_elements {
                return Err(format!("step {}: element removals disagree with replay", t));
            }
            // z matches the coverage of the surviving elements.
            for (j, containing) in incidence.iter().enumerate() {
                if active_elems[j] {
                    let cov: f64 = containing.iter().map(|&i| step.x_after[i]).sum();
                    if (step.z_after[j] - cov).abs() > SNAP_EPS {
                        return Err(format!(
                            "step {}: element {} has z {} but coverage {}",
                            t, j, step.z_after[j], cov
                        ));
                    }
                }
            }
            // Covered mass never decreases.
            let mass = mass_of(&step.z_after, &active_elems, retired_profit);
            if mass < prev_mass - SNAP_EPS * (1.0 + prev_mass.abs()) {
                return Err(format!("step {}: mass dropped from {} to {}", t, prev_mass, mass));
            }
            // z stays below 2 alpha, and over-alpha elements stay confined to
            // the designated set.
            let over: Vec<usize> = (0..sys.n_elements())
                .filter(|&j| active_elems[j] && step.z_after[j] > alpha + SNAP_EPS)
                .collect();
            for &j in &over {
                if step.z_after[j] > 2.0 * alpha + SNAP_EPS {
                    return Err(format!(
                        "step {}: element {} reached z {}",
                        t, j, step.z_after[j]
                    ));
                }
                match step.designated_after {
                    Some(d) => {
                        if sys.set(d).binary_search(&j).is_err() {
                            return Err(format!(
                                "step {}: element {} exceeds alpha outside designated set {}",
                                t, j, d
                            ));
                        }
                    }
                    None => {
                        return Err(format!(
                            "step {}: element {} exceeds alpha with no designated set",
                            t, j
                        ));
                    }
                }
            }
            if let Some(d) = step.designated_after {
                if !active_sets.contains(&d) {
                    return Err(format!("step {}: designated set {} is not active", t, d));
                }
            }
            prev_x = step.x_after.clone();
            prev_cost = cost;
            prev_mass = mass;
            prev_designated = step.designated_after;
        }

        // Terminal state: at most one unresolved set; every other surviving
        // set sits at zero and elements outside the survivor carry no mass.
        if active_sets.len() > 1 {
            return Err(format!("{} sets left unresolved", active_sets.len()));
        }
        let replay_survivor = active_sets.iter().next().copied();
        if replay_survivor != self.survivor {
            return Err(format!(
                "survivor {:?} disagrees with replay {:?}",
                self.survivor, replay_survivor
            ));
        }
        let final_x = self.steps.last().map(|s| s.x_after.clone()).unwrap_or(self.initial_x.clone());
        let final_z = self.steps.last().map(|s| s.z_after.clone()).unwrap_or(self.initial_z.clone());
        let in_sigma: BTreeSet<usize> = self
            .preselected
            .iter()
            .chain(&self.selected_at_init)
            .copied()
            .chain(self.steps.iter().filter_map(|s| s.selected))
            .collect();
        for i in 0..m {
            if Some(i) == self.survivor || in_sigma.contains(&i) {
                continue;
            }
            if final_x[i].abs() > SNAP_EPS {
                return Err(format!("unresolved set {} still carries x {}", i, final_x[i]));
            }
        }
        for j in 0..sys.n_elements() {
            if !active_elems[j] {
                continue;
            }
            let in_survivor = self
                .survivor
                .map(|s| sys.set(s).binary_search(&j).is_ok())
                .unwrap_or(false);
            if !in_survivor && final_z[j].abs() > 10.0 * SNAP_EPS {
                return Err(format!(
                    "element {} outside the survivor still carries z {}",
                    j, final_z[j]
                ));
            }
        }
        Ok(())
    }

    /// Line-oriented rendering, one event per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "init sets={} elems={} alpha={} requirement={} mass={}\n",
            self.system.n_sets(),
            self.system.n_elements(),
            self.alpha,
            self.requirement,
            self.initial_coverage_mass
        ));
        if !self.completed {
            out.push_str("early-exit requirement<=0\n");
            return out;
        }
        for &i in &self.preselected {
            out.push_str(&format!("preselect set={} (free)\n", i));
        }
        for &i in &self.selected_at_init {
            out.push_str(&format!("select set={} (already at alpha)\n", i));
        }
        for &i in &self.dropped_at_init {
            out.push_str(&format!("drop set={} (already at zero)\n", i));
        }
        for (t, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {} a={} b={} raised={} delta={} removed={:?} selected={:?} elems_removed={:?} designated={:?} mass={} maxz={}\n",
                t,
                s.designated,
                s.partner,
                s.raised,
                s.delta,
                s.removed_sets,
                s.selected,
                s.removed_elements,
                s.designated_after,
                s.coverage_mass,
                s.max_z_active
            ));
        }
        out.push_str(&format!("survivor={:?}\n", self.survivor));
        out
    }
}

struct ShallowRun<'a> {
    sys: &'a SetSystem,
    x: Vec<f64>,
    z: Vec<f64>,
    active_sets: BTreeSet<usize>,
    active_elems: Vec<bool>,
    chosen: Vec<usize>,
    retired_profit: f64,
    rng: Option<ChaCha20Rng>,
}

impl<'a> ShallowRun<'a> {
    fn pick(&mut self, exclude: Option<usize>) -> usize {
        let candidates: Vec<usize> = self
            .active_sets
            .iter()
            .copied()
            .filter(|&i| Some(i) != exclude)
            .collect();
        match &mut self.rng {
            None => candidates[0],
            Some(rng) => candidates[rng.gen_range(0..candidates.len())],
        }
    }

    fn retire_elements(&mut self, set: usize) -> Vec<usize> {
        let mut removed = Vec::new();
        for &e in self.sys.set(set) {
            if self.active_elems[e] {
                self.active_elems[e] = false;
                self.retired_profit += self.sys.profit(e);
                removed.push(e);
            }
        }
        removed
    }

    fn active_mass(&self) -> f64 {
        self.z
            .iter()
            .zip(self.sys.profits())
            .zip(&self.active_elems)
            .filter(|(_, &a)| a)
            .map(|((&z, &p), _)| z * p)
            .sum()
    }

    fn max_z_active(&self) -> f64 {
        self.z
            .iter()
            .zip(&self.active_elems)
            .filter(|(_, &a)| a)
            .map(|(&z, _)| z)
            .fold(0.0, f64::max)
    }
}

/// Round the shallow residual: repeatedly pair the designated set with a
/// partner, transfer mass toward the more cost-effective side, and retire
/// sets as they hit zero or alpha. Sets that reach alpha join the output;
/// at most one set survives the loop and is taken as-is.
pub fn round_shallow(
    shallow: &PscInstance,
    sigma: &FractionalSolution,
    alpha: f64,
    pairing: Pairing,
) -> Result<(CoverSolution, RoundTrace)> {
    check_alpha(alpha)?;
    sigma.check_feasible_for(shallow)?;
    let sys = &shallow.system;

    for (i, &xi) in sigma.x.iter().enumerate() {
        if xi > alpha + SNAP_EPS {
            return Err(Error::InvalidInput(format!(
                "set {} opened to {} is not shallow for alpha {}",
                i, xi, alpha
            )));
        }
    }
    for (j, &cov) in coverage(sys, &sigma.x).iter().enumerate() {
        if cov > alpha + FEAS_EPS {
            return Err(Error::InvalidInput(format!(
                "element {} covered to {} is not shallow for alpha {}",
                j, cov, alpha
            )));
        }
    }

    // Snap away LP dust: zero out negligible x, keep z within [0, coverage].
    let mut x = sigma.x.clone();
    for xi in x.iter_mut() {
        if *xi <= SNAP_EPS {
            *xi = 0.0;
        }
    }
    let cov = coverage(sys, &x);
    let mut z = sigma.z.clone();
    for (zj, &cj) in z.iter_mut().zip(&cov) {
        *zj = zj.max(0.0).min(cj);
    }

    if shallow.requirement <= 0.0 {
        let trace = RoundTrace::trivial(sys.clone(), alpha, shallow.requirement, x, z);
        return Ok((CoverSolution::empty(), trace));
    }

    let mut run = ShallowRun {
        sys,
        x,
        z,
        active_sets: BTreeSet::new(),
        active_elems: vec![true; sys.n_elements()],
        chosen: Vec::new(),
        retired_profit: 0.0,
        rng: match pairing {
            Pairing::Seeded(seed) => Some(ChaCha20Rng::seed_from_u64(seed)),
            Pairing::LowestIndex => None,
        },
    };

    let mut preselected = Vec::new();
    let mut selected_at_init = Vec::new();
    let mut dropped_at_init = Vec::new();
    for i in 0..sys.n_sets() {
        if sys.weight(i) <= FREE_WEIGHT_EPS {
            // Free sets cost nothing; take them outright.
            preselected.push(i);
            run.chosen.push(i);
            run.retire_elements(i);
        } else if run.x[i] >= alpha - SNAP_EPS {
            run.x[i] = run.x[i].min(alpha);
            selected_at_init.push(i);
            run.chosen.push(i);
            run.retire_elements(i);
        } else if run.x[i] == 0.0 {
            dropped_at_init.push(i);
        } else {
            run.active_sets.insert(i);
        }
    }

    let initial_x = run.x.clone();
    let initial_z = run.z.clone();
    let initial_coverage_mass = run.active_mass() + run.retired_profit;
    let mut steps: Vec<RoundStep> = Vec::new();

    'outer: while run.active_sets.len() >= 2 {
        let mut a = run.pick(None);
        while run.x[a] > 0.0 && run.x[a] < alpha && run.active_sets.len() >= 2 {
            let b = run.pick(Some(a));
            let designated = a;
            let profit_a = sys.active_profit(a, &run.active_elems);
            let profit_b = sys.active_profit(b, &run.active_elems);
            // Cost-effectiveness comparison, cross-multiplied; ties raise
            // the designated set.
            let raise_designated = profit_a * sys.weight(b) >= profit_b * sys.weight(a);
            let (raised, lowered) = if raise_designated { (a, b) } else { (b, a) };

            let delta = round_two_sets(
                sys,
                &mut run.x,
                &mut run.z,
                &run.active_elems,
                raised,
                lowered,
                alpha,
            );

            let mut removed_sets = Vec::new();
            let mut selected = None;
            let mut removed_elements = Vec::new();
            if raise_designated {
                if run.x[b] == 0.0 {
                    run.active_sets.remove(&b);
                    removed_sets.push(b);
                }
                if run.x[a] == alpha {
                    run.active_sets.remove(&a);
                    removed_sets.push(a);
                    run.chosen.push(a);
                    selected = Some(a);
                    removed_elements = run.retire_elements(a);
                }
            } else {
                if run.x[a] == 0.0 {
                    run.active_sets.remove(&a);
                    removed_sets.push(a);
                    // The partner absorbed the mass; it carries on as the
                    // designated set.
                    a = b;
                }
                if run.x[b] == alpha {
                    run.active_sets.remove(&b);
                    removed_sets.push(b);
                    run.chosen.push(b);
                    selected = Some(b);
                    removed_elements = run.retire_elements(b);
                }
            }

            let designated_after = if run.active_sets.contains(&a) { Some(a) } else { None };
            steps.push(RoundStep {
                designated,
                partner: b,
                raised,
                delta,
                removed_sets,
                selected,
                removed_elements,
                designated_after,
                x_after: run.x.clone(),
                z_after: run.z.clone(),
                active_mass: run.active_mass(),
                coverage_mass: run.active_mass() + run.retired_profit,
                max_z_active: run.max_z_active(),
            });

            if designated_after.is_none() {
                continue 'outer;
            }
        }
        // The designated set is the last one standing.
        break;
    }

    let survivor = run.active_sets.iter().next().copied();
    let mut chosen = run.chosen.clone();
    if let Some(s) = survivor {
        chosen.push(s);
    }
    let cover = CoverSolution::new(sys, chosen)?;
    debug_assert!(
        meets_requirement(cover.covered_profit, shallow.requirement),
        "shallow rounding covered {} of {}",
        cover.covered_profit,
        shallow.requirement
    );

    let trace = RoundTrace {
        system: sys.clone(),
        alpha,
        requirement: shallow.requirement,
        completed: true,
        initial_x,
        initial_z,
        preselected,
        selected_at_init,
        dropped_at_init,
        initial_coverage_mass,
        steps,
        survivor,
    };
    Ok((cover, trace))
}

/// Combined rounding result on the original instance.
#[derive(Debug, Clone)]
pub struct PscRounding {
    pub cover: CoverSolution,
    pub deep_cover: CoverSolution,
    pub shallow_cover: CoverSolution,
    /// Factor reported by the set-cover rounder (0 when the deep side was
    /// empty).
    pub beta_bound: f64,
    /// (beta/alpha + 1/alpha) * cost(sigma) + max set weight.
    pub bound_value: f64,
    pub trace: RoundTrace,
}

/// Round a feasible fractional solution into an integral cover: the deep
/// side goes through the set-cover rounder on the scaled projection, the
/// shallow side through the pairwise rounding.
pub fn round_psc(
    instance: &PscInstance,
    sigma: &FractionalSolution,
    alpha: f64,
    rounder: &dyn ScRounder,
    pairing: Pairing,
) -> Result<PscRounding> {
    let split = split_deep_shallow(instance, sigma, alpha)?;

    let (deep_cover, beta_bound) = if split.deep_elements.is_empty() {
        (CoverSolution::empty(), 0.0)
    } else {
        let rounded = rounder.round(&split.deep_system, &split.scaled_sc_solution)?;
        // Set indices survive the projection unchanged.
        let cover = CoverSolution::new(&instance.system, rounded.cover.chosen)?;
        (cover, rounded.beta_bound)
    };

    let (shallow_local, trace) = round_shallow(
        &split.shallow_instance,
        &split.restricted_solution,
        alpha,
        pairing,
    )?;
    let shallow_ids: Vec<usize> =
        shallow_local.chosen.iter().map(|&l| split.shallow_sets[l]).collect();
    let shallow_cover = CoverSolution::new(&instance.system, shallow_ids)?;

    let mut all = deep_cover.chosen.clone();
    all.extend_from_slice(&shallow_cover.chosen);
    let cover = CoverSolution::new(&instance.system, all)?;
    assert!(
        meets_requirement(cover.covered_profit, instance.requirement),
        "rounded cover reaches {} of requirement {}",
        cover.covered_profit,
        instance.requirement
    );

    let max_weight = instance.system.weights().iter().cloned().fold(0.0, f64::max);
    let bound_value = (beta_bound / alpha + 1.0 / alpha) * sigma.objective + max_weight;

    Ok(PscRounding { cover, deep_cover, shallow_cover, beta_bound, bound_value, trace })
}
