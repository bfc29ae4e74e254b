//! LP construction for partial-cover and set-cover instances, plus the entry
//! point into the embedded simplex solver.
//!
//! The partial-cover LP keeps its per-element variables explicit so rounding
//! code can inspect them; nothing is substituted out.

use crate::core::{Error, FractionalSolution, PscInstance, Result, SetSystem};
use crate::simplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A minimization LP in inequality form with finite box bounds on every
/// variable.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        if self.bounds.len() != self.num_vars {
            return Err(Error::InvalidArgument("bounds length mismatch".into()));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "bad bounds [{}, {}] on variable {}",
                    lo, hi, j
                )));
            }
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.num_vars {
                return Err(Error::InvalidArgument(format!(
                    "constraint {} has {} coefficients for {} variables",
                    r,
                    c.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// Human-readable listing, one constraint per line.
    pub fn render_text(&self, var_names: Option<&[String]>) -> String {
        let name = |j: usize| match var_names {
            Some(names) => names[j].clone(),
            None => format!("v{}", j + 1),
        };
        let terms = |coeffs: &[f64]| {
            let mut parts = Vec::new();
            for (j, &c) in coeffs.iter().enumerate() {
                if c != 0.0 {
                    parts.push(format!("{}*{}", c, name(j)));
                }
            }
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        let mut out = String::new();
        out.push_str(&format!("minimize {}\n", terms(&self.objective)));
        for (r, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Ge => ">=",
                Relation::Le => "<=",
            };
            out.push_str(&format!("c{}: {} {} {}\n", r + 1, terms(&c.coeffs), rel, c.rhs));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            out.push_str(&format!("{} in [{}, {}]\n", name(j), lo, hi));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `primal` and `objective_value` are meaningful only when
/// `status` is optimal.
#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub objective_value: f64,
    /// Basic variable per row of the final tableau.
    pub basis: Vec<usize>,
    pub iterations: usize,
}

/// Worst residuals of a candidate primal point against an LP.
#[derive(Debug, Clone, Copy)]
pub struct Residuals {
    /// max over rows of violation / (1 + |rhs|)
    pub constraint: f64,
    /// max absolute excursion outside a variable's box
    pub bound: f64,
}

pub fn residuals(lp: &LinearProgram, primal: &[f64]) -> Residuals {
    let mut constraint: f64 = 0.0;
    for c in &lp.constraints {
        let lhs: f64 = c.coeffs.iter().zip(primal).map(|(a, x)| a * x).sum();
        let violation = match c.relation {
            Relation::Ge => c.rhs - lhs,
            Relation::Le => lhs - c.rhs,
        };
        constraint = constraint.max(violation / (1.0 + c.rhs.abs()));
    }
    let mut bound: f64 = 0.0;
    for (&xj, &(lo, hi)) in primal.iter().zip(&lp.bounds) {
        bound = bound.max(lo - xj).max(xj - hi);
    }
    Residuals { constraint, bound }
}

/// Partial-cover LP: variables (x_1..x_m, z_1..z_n), one coverage row per
/// element, one requirement row, everything boxed in [0,1].
pub fn build_psc_lp(instance: &PscInstance) -> LinearProgram {
    let sys = &instance.system;
    let m = sys.n_sets();
    let n = sys.n_elements();
    let num_vars = m + n;

    let mut objective = vec![0.0; num_vars];
    objective[..m].copy_from_slice(sys.weights());

    let mut constraints = Vec::with_capacity(n + 1);
    let incidence = sys.element_sets();
    for (j, containing) in incidence.iter().enumerate() {
        let mut coeffs = vec![0.0; num_vars];
        for &i in containing {
            coeffs[i] = 1.0;
        }
        coeffs[m + j] = -1.0;
        constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs: 0.0 });
    }
    let mut coeffs = vec![0.0; num_vars];
    for j in 0..n {
        coeffs[m + j] = sys.profit(j);
    }
    constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs: instance.requirement });

    LinearProgram { num_vars, objective, constraints, bounds: vec![(0.0, 1.0); num_vars] }
}

/// Set-cover LP: variables x_1..x_m, one `>= 1` row per element.
///
/// Errors if some element is in no set (the instance cannot be covered).
pub fn build_sc_lp(system: &SetSystem) -> Result<LinearProgram> {
    let m = system.n_sets();
    let incidence = system.element_sets();
    let mut constraints = Vec::with_capacity(system.n_elements());
    for (j, containing) in incidence.iter().enumerate() {
        if containing.is_empty() {
            return Err(Error::UncoverableElement(j));
        }
        let mut coeffs = vec![0.0; m];
        for &i in containing {
            coeffs[i] = 1.0;
        }
        constraints.push(Constraint { coeffs, relation: Relation::Ge, rhs: 1.0 });
    }
    Ok(LinearProgram {
        num_vars: m,
        objective: system.weights().to_vec(),
        constraints,
        bounds: vec![(0.0, 1.0); m],
    })
}

/// Solve to optimality with the embedded two-phase bounded simplex.
///
/// Deterministic given the LP; errors only on malformed input or when the
/// anti-cycling iteration cap is exceeded.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let outcome = simplex::solve(lp)?;
    // Every variable is box-bounded, so the problem cannot be unbounded.
    debug_assert_ne!(outcome.status, LpStatus::Unbounded);
    Ok(outcome)
}

/// Solve the partial-cover LP of an instance and split the primal into a
/// fractional solution.
pub fn solve_psc(instance: &PscInstance) -> Result<FractionalSolution> {
    let lp = build_psc_lp(instance);
    let result = solve_lp(&lp)?;
    match result.status {
        LpStatus::Optimal => {
            let m = instance.system.n_sets();
            let x: Vec<f64> = result.primal[..m].iter().map(|v| v.clamp(0.0, 1.0)).collect();
            let z: Vec<f64> = result.primal[m..].iter().map(|v| v.clamp(0.0, 1.0)).collect();
            Ok(FractionalSolution::new(x, z, &instance.system))
        }
        LpStatus::Infeasible => Err(Error::InvalidInput(
            "partial-cover LP reported infeasible".into(),
        )),
        LpStatus::Unbounded => unreachable!("box-bounded LP cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::SNAP_EPS;

    fn gap_instance(n: usize) -> PscInstance {
        let sys = SetSystem::new(n, vec![(0..n).collect()], vec![1.0]).unwrap();
        PscInstance::new(sys, 1.0).unwrap()
    }

    #[test]
    fn psc_lp_shape_for_gap_instance() {
        let lp = build_psc_lp(&gap_instance(4));
        assert_eq!(lp.num_vars, 5);
        assert_eq!(lp.constraints.len(), 5); // 4 coverage rows + 1 requirement row
        assert_eq!(lp.objective, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(lp.constraints[..4]
            .iter()
            .all(|c| c.relation == Relation::Ge && c.rhs == 0.0));
        assert_eq!(lp.constraints[4].rhs, 1.0);
    }

    #[test]
    fn empty_instance_is_trivially_optimal() {
        let sys = SetSystem::new(3, vec![], vec![]).unwrap();
        let inst = PscInstance::new(sys, 0.0).unwrap();
        let lp = build_psc_lp(&inst);
        assert_eq!(lp.num_vars, 3);
        let res = solve_lp(&lp).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert!(res.objective_value.abs() <= SNAP_EPS);
    }

    #[test]
    fn forced_full_coverage_costs_two() {
        // Two singleton sets, both needed. Enumerating the LP by hand:
        // z = (1,1) is forced by the requirement row, which forces x = (1,1).
        let sys = SetSystem::new(2, vec![vec![0], vec![1]], vec![1.0, 1.0]).unwrap();
        let inst = PscInstance::new(sys, 2.0).unwrap();
        let res = solve_lp(&build_psc_lp(&inst)).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert!((res.objective_value - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn sc_lp_forced_single_set() {
        let sys = SetSystem::new(2, vec![vec![0, 1]], vec![3.0]).unwrap();
        let res = solve_lp(&build_sc_lp(&sys).unwrap()).unwrap();
        assert!((res.objective_value - 3.0).abs() <= 1e-9);
        assert!((res.primal[0] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn sc_lp_prefers_cheap_duplicate() {
        let sys =
            SetSystem::new(2, vec![vec![0, 1], vec![0, 1]], vec![1.0, 5.0]).unwrap();
        let res = solve_lp(&build_sc_lp(&sys).unwrap()).unwrap();
        assert!((res.objective_value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn sc_lp_rejects_uncoverable_element() {
        let sys = SetSystem::new(2, vec![vec![0]], vec![1.0]).unwrap();
        match build_sc_lp(&sys) {
            Err(Error::UncoverableElement(e)) => assert_eq!(e, 1),
            other => panic!("expected uncoverable element, got {:?}", other),
        }
    }

    #[test]
    fn gap_lp_value_is_one_over_n() {
        for n in [1usize, 2, 4, 10] {
            let res = solve_lp(&build_psc_lp(&gap_instance(n))).unwrap();
            assert_eq!(res.status, LpStatus::Optimal);
            assert!(
                (res.objective_value - 1.0 / n as f64).abs() <= 1e-9,
                "n = {}: got {}",
                n,
                res.objective_value
            );
        }
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        // One variable pinned to 0 by its box but required to reach 1.
        let lp = LinearProgram {
            num_vars: 1,
            objective: vec![0.0],
            constraints: vec![Constraint {
                coeffs: vec![1.0],
                relation: Relation::Ge,
                rhs: 1.0,
            }],
            bounds: vec![(0.0, 0.0)],
        };
        let res = solve_lp(&lp).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn render_lists_one_constraint_per_line() {
        let lp = build_sc_lp(&SetSystem::new(2, vec![vec![0, 1]], vec![3.0]).unwrap()).unwrap();
        let text = lp.render_text(None);
        assert!(text.starts_with("minimize 3*v1\n"));
        assert!(text.contains("c1: 1*v1 >= 1"));
        assert!(text.contains("c2: 1*v1 >= 1"));
    }
}
