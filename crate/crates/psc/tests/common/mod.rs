//! Shared fuzz-instance builders and independent oracles for the
//! integration suites. The oracles deliberately avoid the library's own
//! solution paths: the LP oracle enumerates vertices, the exact oracle runs
//! a dynamic program over element subsets.

#![allow(dead_code)]

use psc::core::{meets_requirement, PscInstance};
use psc::generators::{generate, Dist, GenKind, GenSpec};
use psc::lp::{LinearProgram, Relation};

/// Deterministic small random instance; sizes and parameters vary with the
/// seed, always feasible by construction.
pub fn fuzz_instance(seed: u64, weights: Dist, profits: Dist) -> PscInstance {
    let spec = fuzz_spec(seed, weights, profits);
    generate(&spec).expect("fuzz spec is valid")
}

pub fn fuzz_spec(seed: u64, weights: Dist, profits: Dist) -> GenSpec {
    GenSpec {
        kind: GenKind::Random,
        elements: 2 + (seed % 11) as usize,      // 2..=12
        sets: 1 + ((seed / 7) % 10) as usize,    // 1..=10
        size_range: (0.1, 0.35),
        density: 0.25 + 0.1 * ((seed % 4) as f64),
        seed,
        fraction: [0.3, 0.5, 0.8, 1.0][((seed / 3) % 4) as usize],
        weights,
        profits,
    }
}

/// Mixed corpus cycling through unit/random weights and unit/random profits.
pub fn mixed_corpus(count: u64) -> Vec<PscInstance> {
    (0..count)
        .map(|seed| {
            let weights = if seed % 2 == 0 {
                Dist::Unit
            } else {
                Dist::Uniform { lo: 0.1, hi: 3.0 }
            };
            let profits = if (seed / 2) % 2 == 0 {
                Dist::Unit
            } else {
                Dist::Uniform { lo: 0.0, hi: 5.0 }
            };
            fuzz_instance(seed, weights, profits)
        })
        .collect()
}

/// Exact optimum by dynamic programming over covered-element subsets.
/// Independent of the solver's branch-and-prune enumeration.
pub fn exact_dp_value(instance: &PscInstance) -> Option<f64> {
    let sys = &instance.system;
    let n = sys.n_elements();
    assert!(n <= 20, "dp oracle is exponential in elements");
    if instance.requirement <= 0.0 {
        return Some(0.0);
    }
    let full = 1usize << n;
    let set_masks: Vec<usize> = sys
        .sets()
        .iter()
        .map(|s| s.iter().fold(0usize, |acc, &e| acc | (1 << e)))
        .collect();
    let mut dp = vec![f64::INFINITY; full];
    dp[0] = 0.0;
    for mask in 0..full {
        if !dp[mask].is_finite() {
            continue;
        }
        for (i, &sm) in set_masks.iter().enumerate() {
            let next = mask | sm;
            let w = dp[mask] + sys.weight(i);
            if w < dp[next] {
                dp[next] = w;
            }
        }
    }
    let mut best = f64::INFINITY;
    for (mask, &w) in dp.iter().enumerate() {
        if !w.is_finite() {
            continue;
        }
        let profit: f64 =
            (0..n).filter(|&j| mask & (1 << j) != 0).map(|j| sys.profit(j)).sum();
        if meets_requirement(profit, instance.requirement) && w < best {
            best = w;
        }
    }
    best.is_finite().then_some(best)
}

/// Solve a dense square system by Gaussian elimination with partial
/// pivoting. Returns None when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r, &s| {
            a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap()
        })?;
        if a[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Brute-force LP optimum by enumerating candidate vertices: every choice of
/// num_vars hyperplanes among the constraints-as-equalities and the variable
/// bounds. Only intended for tiny LPs.
pub fn lp_vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let v = lp.num_vars;
    assert!(v <= 6, "vertex enumeration is combinatorial");
    // Each hyperplane is (coefficients, rhs).
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in &lp.constraints {
        planes.push((c.coeffs.clone(), c.rhs));
    }
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        let mut unit = vec![0.0; v];
        unit[j] = 1.0;
        planes.push((unit.clone(), lo));
        planes.push((unit, hi));
    }

    let feasible = |x: &[f64]| -> bool {
        for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
            if x[j] < lo - 1e-7 || x[j] > hi + 1e-7 {
                return false;
            }
        }
        for c in &lp.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, x)| a * x).sum();
            match c.relation {
                Relation::Ge => {
                    if lhs < c.rhs - 1e-7 * (1.0 + c.rhs.abs()) {
                        return false;
                    }
                }
                Relation::Le => {
                    if lhs > c.rhs + 1e-7 * (1.0 + c.rhs.abs()) {
                        return false;
                    }
                }
            }
        }
        true
    };

    let mut best: Option<f64> = None;
    let mut index = vec![0usize; v];
    // Enumerate strictly increasing index tuples.
    fn combos(
        planes: &[(Vec<f64>, f64)],
        v: usize,
        start: usize,
        depth: usize,
        index: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == v {
            visit(index);
            return;
        }
        for p in start..planes.len() {
            index[depth] = p;
            combos(planes, v, p + 1, depth + 1, index, visit);
        }
    }
    combos(&planes, v, 0, 0, &mut index, &mut |chosen: &[usize]| {
        let a: Vec<Vec<f64>> = chosen.iter().map(|&p| planes[p].0.clone()).collect();
        let b: Vec<f64> = chosen.iter().map(|&p| planes[p].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
                best = Some(match best {
                    None => obj,
                    Some(b) => b.min(obj),
                });
            }
        }
    });
    best
}
