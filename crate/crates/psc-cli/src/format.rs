//! Line-oriented instance files and solution witnesses.
//!
//! Grammar: comment lines start with '#', blank lines are skipped. The
//! header is `PSC <n> <m> <k>` with a decimal requirement, followed by a
//! `W` line of m weights, an optional `P` line of n profits (all ones when
//! absent), and exactly m `S` lines of 1-based element indices. Decimals are
//! written with 17 significant digits so parsing reproduces the instance
//! exactly.

use psc::core::{PscInstance, SetSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// 17 significant digits, locale independent, round-trips through `parse`.
pub fn fmt_decimal(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn serialize(instance: &PscInstance) -> String {
    let sys = &instance.system;
    let mut out = String::new();
    out.push_str(&format!(
        "PSC {} {} {}\n",
        sys.n_elements(),
        sys.n_sets(),
        fmt_decimal(instance.requirement)
    ));
    let weights: Vec<String> = sys.weights().iter().map(|&w| fmt_decimal(w)).collect();
    out.push_str(&format!("W {}\n", weights.join(" ")));
    if !sys.has_unit_profits() {
        let profits: Vec<String> = sys.profits().iter().map(|&p| fmt_decimal(p)).collect();
        out.push_str(&format!("P {}\n", profits.join(" ")));
    }
    for set in sys.sets() {
        out.push('S');
        for &e in set {
            out.push_str(&format!(" {}", e + 1));
        }
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next significant line as (1-based number, trimmed content).
    fn next_significant(&mut self) -> Option<(usize, &'a str)> {
        for (idx, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((idx + 1, line));
        }
        None
    }
}

fn parse_count(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        message: format!("cannot read {} from '{}'", what, token),
    })
}

fn parse_decimal(token: &str, line: usize, what: &str) -> Result<f64, ParseError> {
    let value: f64 = token.parse().map_err(|_| ParseError {
        line,
        message: format!("cannot read {} from '{}'", what, token),
    })?;
    if !value.is_finite() {
        return Err(ParseError { line, message: format!("{} '{}' is not finite", what, token) });
    }
    Ok(value)
}

pub fn parse(text: &str) -> Result<PscInstance, ParseError> {
    let mut lines = Lines::new(text);

    let (header_line, header) = lines
        .next_significant()
        .ok_or(ParseError { line: 1, message: "missing PSC header".into() })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "PSC" {
        return Err(ParseError {
            line: header_line,
            message: "expected header 'PSC <n> <m> <k>'".into(),
        });
    }
    let n = parse_count(tokens[1], header_line, "element count")?;
    let m = parse_count(tokens[2], header_line, "set count")?;
    let requirement = parse_decimal(tokens[3], header_line, "requirement")?;

    let (w_line, w) = lines
        .next_significant()
        .ok_or(ParseError { line: header_line, message: "missing W line".into() })?;
    let mut w_tokens = w.split_whitespace();
    if w_tokens.next() != Some("W") {
        return Err(ParseError { line: w_line, message: "expected 'W <weights>'".into() });
    }
    let weights: Vec<f64> = w_tokens
        .map(|t| parse_decimal(t, w_line, "weight"))
        .collect::<Result<_, _>>()?;
    if weights.len() != m {
        return Err(ParseError {
            line: w_line,
            message: format!("{} weights for {} sets", weights.len(), m),
        });
    }
    if let Some(&bad) = weights.iter().find(|&&w| w < 0.0) {
        return Err(ParseError { line: w_line, message: format!("negative weight {}", bad) });
    }

    let mut profits = vec![1.0; n];
    let mut pending: Option<(usize, &str)> = lines.next_significant();
    if let Some((p_line, p)) = pending {
        if p.starts_with("P ") || p == "P" {
            let values: Vec<f64> = p
                .split_whitespace()
                .skip(1)
                .map(|t| parse_decimal(t, p_line, "profit"))
                .collect::<Result<_, _>>()?;
            if values.len() != n {
                return Err(ParseError {
                    line: p_line,
                    message: format!("{} profits for {} elements", values.len(), n),
                });
            }
            if let Some(&bad) = values.iter().find(|&&p| p < 0.0) {
                return Err(ParseError {
                    line: p_line,
                    message: format!("negative profit {}", bad),
                });
            }
            profits = values;
            pending = lines.next_significant();
        }
    }

    let mut sets = Vec::with_capacity(m);
    for k in 0..m {
        let (s_line, s) = match pending.take() {
            Some(found) => found,
            None => lines.next_significant().ok_or(ParseError {
                line: 0,
                message: format!("missing set line {} of {}", k + 1, m),
            })?,
        };
        let mut s_tokens = s.split_whitespace();
        if s_tokens.next() != Some("S") {
            return Err(ParseError { line: s_line, message: "expected 'S <elements>'".into() });
        }
        let mut members = Vec::new();
        for t in s_tokens {
            let e = parse_count(t, s_line, "element index")?;
            if e == 0 || e > n {
                return Err(ParseError {
                    line: s_line,
                    message: format!("element index {} outside 1..={}", e, n),
                });
            }
            members.push(e - 1);
        }
        members.sort_unstable();
        if members.windows(2).any(|p| p[0] == p[1]) {
            return Err(ParseError { line: s_line, message: "duplicate element index".into() });
        }
        sets.push(members);
    }

    if let Some((line, _)) = lines.next_significant() {
        return Err(ParseError { line, message: "unexpected trailing content".into() });
    }

    let system = SetSystem::with_profits(n, sets, weights, profits)
        .map_err(|e| ParseError { line: header_line, message: e.to_string() })?;
    PscInstance::new(system, requirement)
        .map_err(|e| ParseError { line: header_line, message: e.to_string() })
}

/// Witness files: whitespace-separated 1-based set indices, comments and
/// blank lines allowed.
pub fn parse_witness(text: &str, n_sets: usize) -> Result<Vec<usize>, ParseError> {
    let mut chosen = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split_whitespace() {
            let i = parse_count(token, idx + 1, "set index")?;
            if i == 0 || i > n_sets {
                return Err(ParseError {
                    line: idx + 1,
                    message: format!("set index {} outside 1..={}", i, n_sets),
                });
            }
            chosen.push(i - 1);
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PscInstance {
        let sys = SetSystem::with_profits(
            3,
            vec![vec![0, 1], vec![2], vec![]],
            vec![1.0, 2.5, 0.125],
            vec![1.0, 5.0, 0.1],
        )
        .unwrap();
        PscInstance::new(sys, 2.4).unwrap()
    }

    #[test]
    fn round_trips_exactly() {
        let inst = sample();
        let text = serialize(&inst);
        let back = parse(&text).unwrap();
        assert_eq!(back, inst);
        // And a unit-profit instance omits the P line.
        let unit = PscInstance::new(
            SetSystem::new(2, vec![vec![0, 1]], vec![3.0]).unwrap(),
            1.0,
        )
        .unwrap();
        let text = serialize(&unit);
        assert!(!text.contains("\nP "));
        assert_eq!(parse(&text).unwrap(), unit);
    }

    #[test]
    fn accepts_comments_and_unsorted_indices() {
        let text = "# generated\nPSC 3 1 1\n# weights\nW 1\nS 3 1\n";
        let inst = parse(text).unwrap();
        assert_eq!(inst.system.set(0), &[0, 2]);
    }

    #[test]
    fn rejects_bad_counts_with_line_numbers() {
        let text = "PSC 3 2 1\nW 1\nS 1\nS 2\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line, 2);

        let text = "PSC 3 1 1\nW 1\nS 1 4\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("4"));

        let text = "PSC 3 1 1\nW 1\nS 2 2\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn rejects_missing_and_trailing_lines() {
        assert!(parse("").is_err());
        assert!(parse("PSC 1 1 1\nW 1\n").is_err());
        let err = parse("PSC 1 1 1\nW 1\nS 1\nS 1\n").unwrap_err();
        assert_eq!(err.line, 4);
    }

    #[test]
    fn witness_parsing_checks_ranges() {
        assert_eq!(parse_witness("2 1\n# c\n3\n", 3).unwrap(), vec![0, 1, 2]);
        let err = parse_witness("1\n0\n", 3).unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_witness("4", 3).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn decimals_use_seventeen_significant_digits() {
        assert_eq!(fmt_decimal(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_decimal(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
