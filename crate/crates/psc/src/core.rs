//! Set-system and instance data model shared by every other module.
//!
//! All types are immutable after construction and safe to share across
//! threads; every operation here is a pure function.

use thiserror::Error;

/// Snapping tolerance for rounded quantities and variable bounds.
pub const SNAP_EPS: f64 = 1e-9;
/// Feasibility tolerance for LP-derived quantities.
pub const FEAS_EPS: f64 = 1e-7;
/// Sets cheaper than this are treated as free by the rounding code.
pub const FREE_WEIGHT_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element {0} is not contained in any set")]
    UncoverableElement(usize),
    #[error("infeasible: coverable profit {coverable} is below the requirement {requirement}")]
    Infeasible { coverable: f64, requirement: f64 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// `covered` meets `requirement` up to a relative snapping tolerance.
///
/// Requirements at or below zero are always met.
pub fn meets_requirement(covered: f64, requirement: f64) -> bool {
    covered >= requirement - SNAP_EPS * (1.0 + requirement.abs())
}

/// A weighted set system with per-element profits.
///
/// Sets are stored as strictly increasing lists of 0-based element indices.
/// Classic instances use all-ones profits; the profit-weighted variant is the
/// general code path.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSystem {
    n_elements: usize,
    sets: Vec<Vec<usize>>,
    weights: Vec<f64>,
    profits: Vec<f64>,
}

impl SetSystem {
    /// Build a system with unit profits.
    pub fn new(n_elements: usize, sets: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        let profits = vec![1.0; n_elements];
        Self::with_profits(n_elements, sets, weights, profits)
    }

    /// Build a system with explicit per-element profits.
    pub fn with_profits(
        n_elements: usize,
        sets: Vec<Vec<usize>>,
        weights: Vec<f64>,
        profits: Vec<f64>,
    ) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} sets but {} weights",
                sets.len(),
                weights.len()
            )));
        }
        if profits.len() != n_elements {
            return Err(Error::InvalidArgument(format!(
                "{} elements but {} profits",
                n_elements,
                profits.len()
            )));
        }
        for (i, set) in sets.iter().enumerate() {
            for pair in set.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(Error::InvalidArgument(format!(
                        "set {} is not strictly increasing",
                        i
                    )));
                }
            }
            if let Some(&last) = set.last() {
                if last >= n_elements {
                    return Err(Error::InvalidArgument(format!(
                        "set {} references element {} out of {}",
                        i, last, n_elements
                    )));
                }
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidArgument(format!("weight {} of set {} invalid", w, i)));
            }
        }
        for (j, &p) in profits.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "profit {} of element {} invalid",
                    p, j
                )));
            }
        }
        Ok(SetSystem { n_elements, sets, weights, profits })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn profit(&self, j: usize) -> f64 {
        self.profits[j]
    }

    pub fn total_profit(&self) -> f64 {
        self.profits.iter().sum()
    }

    pub fn has_unit_profits(&self) -> bool {
        self.profits.iter().all(|&p| p == 1.0)
    }

    /// Incidence lists: for each element, the sets containing it.
    pub fn element_sets(&self) -> Vec<Vec<usize>> {
        let mut incidence = vec![Vec::new(); self.n_elements];
        for (i, set) in self.sets.iter().enumerate() {
            for &e in set {
                incidence[e].push(i);
            }
        }
        incidence
    }

    /// Maximum number of sets containing any single element (at least 1).
    pub fn max_frequency(&self) -> usize {
        self.element_sets()
            .iter()
            .map(|s| s.len())
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Per-set sums of profits over the elements surviving an activity mask.
    pub fn active_profit(&self, set: usize, active: &[bool]) -> f64 {
        self.sets[set]
            .iter()
            .filter(|&&e| active[e])
            .map(|&e| self.profits[e])
            .sum()
    }
}

/// Result of projecting a system onto a subset of its elements.
#[derive(Debug, Clone)]
pub struct Projection {
    pub system: SetSystem,
    /// old element index -> new index, `None` for dropped elements.
    pub old_to_new: Vec<Option<usize>>,
    /// new element index -> old index (sorted).
    pub new_to_old: Vec<usize>,
}

/// Intersect every set with `keep` and reindex the surviving elements.
///
/// Weights are preserved, profits restricted. Sets may become empty.
pub fn project(system: &SetSystem, keep: &[usize]) -> Result<Projection> {
    for &e in keep {
        if e >= system.n_elements {
            return Err(Error::InvalidArgument(format!(
                "element {} out of range {}",
                e, system.n_elements
            )));
        }
    }
    let mut new_to_old: Vec<usize> = keep.to_vec();
    new_to_old.sort_unstable();
    new_to_old.dedup();

    let mut old_to_new = vec![None; system.n_elements];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old] = Some(new);
    }
    let sets = system
        .sets
        .iter()
        .map(|set| set.iter().filter_map(|&e| old_to_new[e]).collect())
        .collect();
    let profits = new_to_old.iter().map(|&old| system.profits[old]).collect();
    let system = SetSystem::with_profits(
        new_to_old.len(),
        sets,
        system.weights.clone(),
        profits,
    )?;
    Ok(Projection { system, old_to_new, new_to_old })
}

/// Restrict a system to a subfamily of its sets (elements unchanged).
///
/// Returns the subsystem; set `l` of the output is `ids[l]` of the input.
pub fn subsystem(system: &SetSystem, ids: &[usize]) -> Result<SetSystem> {
    for &i in ids {
        if i >= system.n_sets() {
            return Err(Error::InvalidArgument(format!("set {} out of range", i)));
        }
    }
    let sets = ids.iter().map(|&i| system.sets[i].clone()).collect();
    let weights = ids.iter().map(|&i| system.weights[i]).collect();
    SetSystem::with_profits(system.n_elements, sets, weights, system.profits.clone())
}

/// Total profit of the union of the chosen sets.
pub fn covered_profit(system: &SetSystem, chosen: &[usize]) -> Result<f64> {
    let mut covered = vec![false; system.n_elements];
    for &i in chosen {
        if i >= system.n_sets() {
            return Err(Error::InvalidArgument(format!("set {} out of range", i)));
        }
        for &e in &system.sets[i] {
            covered[e] = true;
        }
    }
    Ok(covered
        .iter()
        .zip(&system.profits)
        .filter(|(&c, _)| c)
        .map(|(_, &p)| p)
        .sum())
}

/// Sum of the chosen sets' weights, accumulated in ascending value order so
/// the result is reproducible regardless of how the selection was produced.
pub fn weight_of(system: &SetSystem, chosen: &[usize]) -> f64 {
    let mut ws: Vec<f64> = chosen.iter().map(|&i| system.weights[i]).collect();
    ws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ws.iter().sum()
}

/// A partial-cover instance: a system plus the profit it must cover.
///
/// `requirement` equals the integer k when profits are all ones. Values at or
/// below zero make the instance trivially feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct PscInstance {
    pub system: SetSystem,
    pub requirement: f64,
}

impl PscInstance {
    pub fn new(system: SetSystem, requirement: f64) -> Result<Self> {
        if !requirement.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "requirement {} is not finite",
                requirement
            )));
        }
        Ok(PscInstance { system, requirement })
    }
}

/// True iff choosing every set covers enough profit.
pub fn is_feasible(instance: &PscInstance) -> bool {
    if instance.requirement <= 0.0 {
        return true;
    }
    let all: Vec<usize> = (0..instance.system.n_sets()).collect();
    let coverable = covered_profit(&instance.system, &all).expect("indices in range");
    meets_requirement(coverable, instance.requirement)
}

/// A fractional solution to the partial-cover LP: `x` over sets, `z` over
/// elements, both boxed in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub objective: f64,
}

impl FractionalSolution {
    pub fn new(x: Vec<f64>, z: Vec<f64>, system: &SetSystem) -> Self {
        let objective = dot(system.weights(), &x);
        FractionalSolution { x, z, objective }
    }

    /// Check box constraints, coverage rows, and the requirement row against
    /// an instance, within LP tolerances.
    pub fn check_feasible_for(&self, instance: &PscInstance) -> Result<()> {
        let sys = &instance.system;
        if self.x.len() != sys.n_sets() || self.z.len() != sys.n_elements() {
            return Err(Error::InvalidInput(format!(
                "solution shape ({}, {}) does not match instance ({}, {})",
                self.x.len(),
                self.z.len(),
                sys.n_sets(),
                sys.n_elements()
            )));
        }
        for (i, &v) in self.x.iter().chain(self.z.iter()).enumerate() {
            if !(-SNAP_EPS..=1.0 + SNAP_EPS).contains(&v) {
                return Err(Error::InvalidInput(format!("variable {} = {} outside [0,1]", i, v)));
            }
        }
        let coverage = coverage(sys, &self.x);
        for (j, (&cov, &zj)) in coverage.iter().zip(&self.z).enumerate() {
            if cov < zj - FEAS_EPS {
                return Err(Error::InvalidInput(format!(
                    "element {}: coverage {} below z {}",
                    j, cov, zj
                )));
            }
        }
        let mass: f64 = self.z.iter().zip(sys.profits()).map(|(&z, &p)| z * p).sum();
        if mass < instance.requirement - FEAS_EPS * (1.0 + instance.requirement.abs()) {
            return Err(Error::InvalidInput(format!(
                "covered mass {} below requirement {}",
                mass, instance.requirement
            )));
        }
        Ok(())
    }
}

/// Per-element coverage sums under a fractional `x`.
pub fn coverage(system: &SetSystem, x: &[f64]) -> Vec<f64> {
    let mut cov = vec![0.0; system.n_elements()];
    for (i, set) in system.sets().iter().enumerate() {
        for &e in set {
            cov[e] += x[i];
        }
    }
    cov
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An integral choice of sets with its derived weight and covered profit.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    pub weight: f64,
    pub covered_profit: f64,
}

impl CoverSolution {
    /// Sorts and dedups `chosen`, recomputing weight and covered profit.
    pub fn new(system: &SetSystem, mut chosen: Vec<usize>) -> Result<Self> {
        chosen.sort_unstable();
        chosen.dedup();
        let covered_profit = covered_profit(system, &chosen)?;
        let weight = weight_of(system, &chosen);
        Ok(CoverSolution { chosen, weight, covered_profit })
    }

    pub fn empty() -> Self {
        CoverSolution { chosen: Vec::new(), weight: 0.0, covered_profit: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_set_system() -> SetSystem {
        SetSystem::new(3, vec![vec![0, 1], vec![1, 2]], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn project_intersects_and_reindexes() {
        let sys = two_set_system();
        let proj = project(&sys, &[1, 2]).unwrap();
        assert_eq!(proj.system.n_elements(), 2);
        assert_eq!(proj.system.set(0), &[0]);
        assert_eq!(proj.system.set(1), &[0, 1]);
        assert_eq!(proj.old_to_new, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn project_all_is_identity() {
        let sys = two_set_system();
        let proj = project(&sys, &[0, 1, 2]).unwrap();
        assert_eq!(proj.system, sys);
        assert_eq!(proj.new_to_old, vec![0, 1, 2]);
    }

    #[test]
    fn project_empty_keeps_empty_sets() {
        let sys = two_set_system();
        let proj = project(&sys, &[]).unwrap();
        assert_eq!(proj.system.n_elements(), 0);
        assert!(proj.system.sets().iter().all(|s| s.is_empty()));
    }

    #[test]
    fn project_rejects_out_of_range() {
        let sys = two_set_system();
        assert!(matches!(project(&sys, &[3]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn covered_profit_union_count() {
        let sys = two_set_system();
        assert_eq!(covered_profit(&sys, &[0, 1]).unwrap(), 3.0);
        assert_eq!(covered_profit(&sys, &[]).unwrap(), 0.0);
    }

    #[test]
    fn covered_profit_weighted() {
        let sys =
            SetSystem::with_profits(3, vec![vec![0, 1]], vec![1.0], vec![2.0, 5.0, 1.0]).unwrap();
        assert_eq!(covered_profit(&sys, &[0]).unwrap(), 7.0);
    }

    #[test]
    fn feasibility_boundaries() {
        let sys = two_set_system();
        let feasible = PscInstance::new(sys.clone(), 3.0).unwrap();
        assert!(is_feasible(&feasible));
        let infeasible = PscInstance::new(sys, 4.0).unwrap();
        assert!(!is_feasible(&infeasible));
        let vacuous =
            PscInstance::new(SetSystem::new(0, vec![], vec![]).unwrap(), 0.0).unwrap();
        assert!(is_feasible(&vacuous));
    }

    #[test]
    fn rejects_unsorted_sets() {
        assert!(SetSystem::new(3, vec![vec![1, 0]], vec![1.0]).is_err());
        assert!(SetSystem::new(3, vec![vec![1, 1]], vec![1.0]).is_err());
        assert!(SetSystem::new(2, vec![vec![0, 2]], vec![1.0]).is_err());
    }

    // Independent union oracle over bitmasks, for systems with <= 128 elements.
    fn mask_union_count(sys: &SetSystem, chosen: &[usize]) -> u32 {
        let mut mask: u128 = 0;
        for &i in chosen {
            for &e in sys.set(i) {
                mask |= 1u128 << e;
            }
        }
        mask.count_ones()
    }

    fn arb_system() -> impl Strategy<Value = SetSystem> {
        (1usize..10, 1usize..8).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::btree_set(0..n, 0..=n), m).prop_map(
                move |sets| {
                    let sets: Vec<Vec<usize>> =
                        sets.into_iter().map(|s| s.into_iter().collect()).collect();
                    let weights = vec![1.0; sets.len()];
                    SetSystem::new(n, sets, weights).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn unit_profit_cover_matches_bitset_union(sys in arb_system(), pick in proptest::collection::vec(any::<bool>(), 8)) {
            let chosen: Vec<usize> =
                (0..sys.n_sets()).filter(|&i| pick.get(i).copied().unwrap_or(false)).collect();
            let covered = covered_profit(&sys, &chosen).unwrap();
            prop_assert_eq!(covered as u32, mask_union_count(&sys, &chosen));
        }

        #[test]
        fn covered_profit_is_monotone(sys in arb_system(), pick in proptest::collection::vec(any::<bool>(), 8), extra in 0usize..8) {
            let chosen: Vec<usize> =
                (0..sys.n_sets()).filter(|&i| pick.get(i).copied().unwrap_or(false)).collect();
            let mut more = chosen.clone();
            more.push(extra % sys.n_sets());
            let base = covered_profit(&sys, &chosen).unwrap();
            let grown = covered_profit(&sys, &more).unwrap();
            prop_assert!(grown >= base);
        }

        #[test]
        fn projection_composes(sys in arb_system()) {
            let n = sys.n_elements();
            let outer: Vec<usize> = (0..n).step_by(2).collect();
            let first = project(&sys, &outer).unwrap();
            // Nested subset, expressed in the projected indexing.
            let inner_new: Vec<usize> = (0..first.system.n_elements()).skip(1).collect();
            let second = project(&first.system, &inner_new).unwrap();
            let composed_old: Vec<usize> =
                inner_new.iter().map(|&j| first.new_to_old[j]).collect();
            let direct = project(&sys, &composed_old).unwrap();
            prop_assert_eq!(second.system, direct.system);
        }
    }
}
