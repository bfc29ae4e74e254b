//! Stable-ordered text rendering of solver output: `key: value` lines
//! followed by a tab-separated guess table. Everything is deterministic so
//! reports can be compared byte for byte.

use psc::solver::{SolveReport, Verification};
use psc::CoverSolution;

use crate::format::fmt_decimal;

fn chosen_line(chosen: &[usize]) -> String {
    let mut line = String::from("chosen:");
    for &i in chosen {
        line.push_str(&format!(" {}", i + 1));
    }
    line
}

pub fn render_solve(report: &SolveReport, requirement: f64, rounder: &str) -> String {
    let ratio = if report.lp_value > 0.0 {
        report.solution.weight / report.lp_value
    } else if report.solution.weight <= 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let mut out = String::new();
    out.push_str("status: optimal\n");
    out.push_str(&format!("weight: {}\n", fmt_decimal(report.solution.weight)));
    out.push_str(&format!(
        "covered_profit: {}\n",
        fmt_decimal(report.solution.covered_profit)
    ));
    out.push_str(&format!("requirement: {}\n", fmt_decimal(requirement)));
    out.push_str(&chosen_line(&report.solution.chosen));
    out.push('\n');
    match report.guessed_set {
        Some(i) => out.push_str(&format!("guessed_set: {}\n", i + 1)),
        None => out.push_str("guessed_set: none\n"),
    }
    out.push_str(&format!("lp_value: {}\n", fmt_decimal(report.lp_value)));
    out.push_str(&format!(
        "lp_lower_bound: {}\n",
        fmt_decimal(report.lp_lower_bound)
    ));
    out.push_str(&format!("beta_used: {}\n", fmt_decimal(report.beta_used)));
    out.push_str(&format!(
        "bound_claimed: {}\n",
        fmt_decimal(report.bound_claimed)
    ));
    out.push_str(&format!("ratio_vs_lp: {}\n", fmt_decimal(ratio)));
    out.push_str(&format!("alpha: {}\n", fmt_decimal(report.alpha)));
    out.push_str(&format!("sc_rounder: {}\n", rounder));
    if ratio > 2.0 * report.beta_used + 2.0 + 1e-9 {
        out.push_str(
            "note: ratio_vs_lp exceeds 2*beta+2; the LP value can sit far below \
             the integral optimum, and the guarantee is relative to the optimum\n",
        );
    }
    out.push_str("guesses:\n");
    out.push_str("pos\tset\tfeasible\tweight\tlp_value\tbeta\n");
    for g in &report.guesses {
        if g.feasible {
            out.push_str(&format!(
                "{}\t{}\tyes\t{}\t{}\t{}\n",
                g.sorted_pos + 1,
                g.set + 1,
                fmt_decimal(g.weight),
                fmt_decimal(g.lp_value),
                fmt_decimal(g.beta)
            ));
        } else {
            out.push_str(&format!("{}\t{}\tno\t-\t-\t-\n", g.sorted_pos + 1, g.set + 1));
        }
    }
    out
}

pub fn render_exact(solution: &CoverSolution, requirement: f64) -> String {
    let mut out = String::new();
    out.push_str("status: optimal\n");
    out.push_str(&format!("weight: {}\n", fmt_decimal(solution.weight)));
    out.push_str(&format!(
        "covered_profit: {}\n",
        fmt_decimal(solution.covered_profit)
    ));
    out.push_str(&format!("requirement: {}\n", fmt_decimal(requirement)));
    out.push_str(&chosen_line(&solution.chosen));
    out.push('\n');
    out
}

pub fn render_verification(v: &Verification) -> String {
    let mut out = String::new();
    out.push_str(&format!("feasible: {}\n", v.feasible));
    out.push_str(&format!("weight: {}\n", fmt_decimal(v.weight)));
    out.push_str(&format!("covered_profit: {}\n", fmt_decimal(v.covered_profit)));
    out.push_str(&format!("requirement: {}\n", fmt_decimal(v.requirement)));
    out.push_str(&format!("deficit: {}\n", fmt_decimal(v.deficit)));
    out
}
