//! Dense two-phase simplex over box-bounded variables.
//!
//! Inequalities get one slack each; rows whose initial residual has the wrong
//! sign for their slack get an artificial variable minimized in phase 1.
//! Bland's rule (lowest eligible index entering, lowest-index tie-break
//! leaving) is always on, and a hard iteration cap turns any cycling into an
//! error instead of a hang.

use crate::core::{Error, Result, SNAP_EPS};
use crate::lp::{LinearProgram, LpResult, LpStatus, Relation};

const PIVOT_EPS: f64 = 1e-9;
const PHASE1_EPS: f64 = 1e-7;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: usize,
    cols: usize,
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    iterations: usize,
    cap: usize,
}

enum StepOutcome {
    Optimal,
    Progress,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let mut lo: Vec<f64> = lp.bounds.iter().map(|b| b.0).collect();
        let mut hi: Vec<f64> = lp.bounds.iter().map(|b| b.1).collect();
        // Structural variables start nonbasic at their lower bound.
        let mut x: Vec<f64> = lo.clone();
        let mut state = vec![VarState::AtLower; n];

        // One slack per row, starting nonbasic at its finite bound.
        for c in &lp.constraints {
            match c.relation {
                Relation::Le => {
                    lo.push(0.0);
                    hi.push(f64::INFINITY);
                    state.push(VarState::AtLower);
                }
                Relation::Ge => {
                    lo.push(f64::NEG_INFINITY);
                    hi.push(0.0);
                    state.push(VarState::AtUpper);
                }
            }
            x.push(0.0);
        }

        let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![0.0; n + m];
            row[..n].copy_from_slice(&c.coeffs);
            row[n + i] = 1.0;
            a.push(row);
            rhs.push(c.rhs);

            let residual: f64 =
                c.rhs - c.coeffs.iter().zip(&x[..n]).map(|(a, x)| a * x).sum::<f64>();
            let slack_ok = match c.relation {
                Relation::Le => residual >= 0.0,
                Relation::Ge => residual <= 0.0,
            };
            if slack_ok {
                basis.push(n + i);
                state[n + i] = VarState::Basic;
                x[n + i] = residual;
            } else {
                basis.push(usize::MAX); // artificial assigned below
            }
        }

        // Artificial columns for the rows the slack could not start in.
        let mut cols = n + m;
        for i in 0..m {
            if basis[i] != usize::MAX {
                continue;
            }
            let residual: f64 = rhs[i]
                - a[i][..n + m].iter().zip(&x).map(|(a, x)| a * x).sum::<f64>();
            let sign = if residual >= 0.0 { 1.0 } else { -1.0 };
            for (r, row) in a.iter_mut().enumerate() {
                row.push(if r == i { sign } else { 0.0 });
            }
            if sign < 0.0 {
                // Scale so the basic column reads +1.
                for v in a[i].iter_mut() {
                    *v = -*v;
                }
                rhs[i] = -rhs[i];
            }
            lo.push(0.0);
            hi.push(f64::INFINITY);
            x.push(residual.abs());
            state.push(VarState::Basic);
            basis[i] = cols;
            cols += 1;
        }

        let cap = 10 * (m + n).max(1);
        Tableau { rows: m, cols, a, rhs, lo, hi, x, state, basis, iterations: 0, cap }
    }

    fn reduced_cost(&self, c: &[f64], j: usize) -> f64 {
        let mut d = c[j];
        for i in 0..self.rows {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                d -= cb * self.a[i][j];
            }
        }
        d
    }

    fn refresh_basics(&mut self) {
        for i in 0..self.rows {
            let mut v = self.rhs[i];
            for j in 0..self.cols {
                if self.state[j] != VarState::Basic && self.a[i][j] != 0.0 && self.x[j] != 0.0 {
                    v -= self.a[i][j] * self.x[j];
                }
            }
            let k = self.basis[i];
            // Shed rounding dust at the bounds.
            if (v - self.lo[k]).abs() <= SNAP_EPS {
                v = self.lo[k];
            } else if (v - self.hi[k]).abs() <= SNAP_EPS {
                v = self.hi[k];
            }
            self.x[k] = v;
        }
    }

    /// One Bland iteration: a bound flip or a pivot.
    fn step(&mut self, c: &[f64]) -> Result<StepOutcome> {
        // Entering: lowest-index nonbasic column with an improving direction.
        let mut entering = None;
        for j in 0..self.cols {
            if self.state[j] == VarState::Basic || self.hi[j] - self.lo[j] <= 0.0 {
                continue;
            }
            let d = self.reduced_cost(c, j);
            match self.state[j] {
                VarState::AtLower if d < -PIVOT_EPS => {
                    entering = Some((j, 1.0));
                    break;
                }
                VarState::AtUpper if d > PIVOT_EPS => {
                    entering = Some((j, -1.0));
                    break;
                }
                _ => {}
            }
        }
        let Some((j, dir)) = entering else {
            return Ok(StepOutcome::Optimal);
        };

        self.iterations += 1;
        if self.iterations > self.cap {
            return Err(Error::ResourceLimit(format!(
                "simplex exceeded the {}-iteration cap",
                self.cap
            )));
        }

        // Ratio test: the entering variable's own span, or the first basic
        // variable driven to one of its bounds. Ties go to the lowest basic
        // variable index.
        let mut best_t = self.hi[j] - self.lo[j];
        let mut leaving: Option<(usize, bool)> = None;
        for i in 0..self.rows {
            let coef = self.a[i][j];
            if coef.abs() <= PIVOT_EPS {
                continue;
            }
            let k = self.basis[i];
            let rate = -dir * coef; // d x_k / d t
            let (t, to_upper) = if rate > 0.0 {
                if self.hi[k].is_infinite() {
                    continue;
                }
                ((self.hi[k] - self.x[k]) / rate, true)
            } else {
                if self.lo[k].is_infinite() {
                    continue;
                }
                ((self.lo[k] - self.x[k]) / rate, false)
            };
            let t = t.max(0.0);
            let replace = match leaving {
                None => t < best_t,
                Some((r, _)) => t < best_t || (t == best_t && k < self.basis[r]),
            };
            if replace {
                best_t = t;
                leaving = Some((i, to_upper));
            }
        }

        match leaving {
            None => {
                if best_t.is_infinite() {
                    return Ok(StepOutcome::Unbounded);
                }
                // Bound flip: walk the entering variable across its box.
                self.x[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
                self.state[j] =
                    if dir > 0.0 { VarState::AtUpper } else { VarState::AtLower };
                self.refresh_basics();
            }
            Some((r, to_upper)) => {
                let k = self.basis[r];
                self.x[j] += dir * best_t;
                self.x[k] = if to_upper { self.hi[k] } else { self.lo[k] };
                self.state[k] = if to_upper { VarState::AtUpper } else { VarState::AtLower };

                let pivot = self.a[r][j];
                for v in self.a[r].iter_mut() {
                    *v /= pivot;
                }
                self.rhs[r] /= pivot;
                for i in 0..self.rows {
                    if i == r {
                        continue;
                    }
                    let factor = self.a[i][j];
                    if factor == 0.0 {
                        continue;
                    }
                    for col in 0..self.cols {
                        self.a[i][col] -= factor * self.a[r][col];
                    }
                    self.a[i][j] = 0.0;
                    self.rhs[i] -= factor * self.rhs[r];
                }
                self.basis[r] = j;
                self.state[j] = VarState::Basic;
                self.refresh_basics();
            }
        }
        Ok(StepOutcome::Progress)
    }

    fn run(&mut self, c: &[f64]) -> Result<LpStatus> {
        loop {
            match self.step(c)? {
                StepOutcome::Optimal => return Ok(LpStatus::Optimal),
                StepOutcome::Unbounded => return Ok(LpStatus::Unbounded),
                StepOutcome::Progress => {}
            }
        }
    }

    fn objective(&self, c: &[f64]) -> f64 {
        c.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }
}

pub(crate) fn solve(lp: &LinearProgram) -> Result<LpResult> {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let mut tab = Tableau::build(lp);

    let n_artificials = tab.cols - n - m;
    if n_artificials > 0 {
        let mut phase1 = vec![0.0; tab.cols];
        for c in phase1.iter_mut().skip(n + m) {
            *c = 1.0;
        }
        let status = tab.run(&phase1)?;
        debug_assert_ne!(status, LpStatus::Unbounded, "phase 1 is bounded below by zero");
        if tab.objective(&phase1) > PHASE1_EPS {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                objective_value: f64::NAN,
                basis: tab.basis.clone(),
                iterations: tab.iterations,
            });
        }
        // Pin the artificials so phase 2 cannot move them off zero.
        for j in n + m..tab.cols {
            tab.lo[j] = 0.0;
            tab.hi[j] = 0.0;
            tab.x[j] = 0.0;
        }
    }

    let mut c = vec![0.0; tab.cols];
    c[..n].copy_from_slice(&lp.objective);
    let status = tab.run(&c)?;
    if status == LpStatus::Unbounded {
        return Ok(LpResult {
            status,
            primal: Vec::new(),
            objective_value: f64::NAN,
            basis: tab.basis.clone(),
            iterations: tab.iterations,
        });
    }

    let primal: Vec<f64> = (0..n)
        .map(|j| tab.x[j].clamp(lp.bounds[j].0, lp.bounds[j].1))
        .collect();
    let objective_value = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
    Ok(LpResult {
        status: LpStatus::Optimal,
        primal,
        objective_value,
        basis: tab.basis.clone(),
        iterations: tab.iterations,
    })
}

