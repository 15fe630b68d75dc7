//! The appendix fixture: every class row with its g, the α⊗β label and the
//! spectrum exponents, and a row-by-row replay against the generator.
//!
//! Format: `class<TAB>row<TAB>g<TAB>alpha,beta<TAB>exponents`, `#` comments allowed.

use serde::Serialize;

use crate::bentlab;
use crate::error::Result;
use crate::generator::{exps_string, generate_classes, seed, ClassRecord};
use crate::genperm::{conjugate_by_c, conjugate_kron, gamma, GammaName, PermOperator};
use crate::mvfunction::MvFunction;

pub const APPENDIX_TSV: &str = include_str!("../data/appendix.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    pub line: usize,
    pub class: u8,
    pub row: usize,
    pub g: MvFunction,
    pub alpha: GammaName,
    pub beta: GammaName,
    pub exponents: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureError {
    pub line: usize,
    pub message: String,
}

fn parse_line(line: usize, text: &str) -> std::result::Result<FixtureRow, String> {
    let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
    let [class, row, g, label, exps] = fields[..] else {
        return Err(format!("expected 5 tab-separated fields, found {}", fields.len()));
    };
    let class: u8 = class.parse().ok().filter(|c| (1..=9).contains(c)).ok_or(format!("bad class `{class}`"))?;
    let row: usize = row.parse().map_err(|_| format!("bad row number `{row}`"))?;
    let g = MvFunction::ternary(g).map_err(|e| e.to_string())?;
    if g.vars() != 2 {
        return Err(format!("g must have 9 values, found {}", g.len()));
    }
    let (alpha, beta) = label.split_once(',').ok_or(format!("label `{label}` is not alpha,beta"))?;
    let alpha: GammaName = alpha.parse().map_err(|e: crate::Error| e.to_string())?;
    let beta: GammaName = beta.parse().map_err(|e: crate::Error| e.to_string())?;
    let exponents = exps
        .chars()
        .map(|c| c.to_digit(3).map(|d| d as u8).ok_or(format!("bad exponent digit `{c}`")))
        .collect::<std::result::Result<Vec<u8>, String>>()?;
    if exponents.len() != 9 {
        return Err(format!("expected 9 exponents, found {}", exponents.len()));
    }
    Ok(FixtureRow { line, class, row, g, alpha, beta, exponents })
}

/// Parsed rows plus the malformed lines (1-based line numbers).
pub fn parse_fixture(text: &str) -> (Vec<FixtureRow>, Vec<FixtureError>) {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_line(i + 1, raw.trim_end_matches('\r')) {
            Ok(r) => rows.push(r),
            Err(message) => errors.push(FixtureError { line: i + 1, message }),
        }
    }
    (rows, errors)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub line: usize,
    pub class: u8,
    pub row: usize,
    pub failures: Vec<String>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub checks: Vec<RowCheck>,
    pub malformed: Vec<FixtureError>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.malformed.is_empty() && !self.checks.is_empty() && self.checks.iter().all(RowCheck::passed)
    }

    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }
}

/// Replays one row:
/// - the spectrum of g has the listed exponents;
/// - g is one of the computed primitives of its class, with the same exponents;
/// - the labelled α⊗β maps the seed spectrum onto the listed exponents;
/// - W(2)·F_seed = G for W = table(α)⊗table(β), which also equals the dense conjugate.
pub fn verify_row(row: &FixtureRow, classes: &[ClassRecord]) -> Result<RowCheck> {
    let mut failures = Vec::new();
    let seed_fn = seed(row.class)?;
    let s_seed = bentlab::circular_spectrum(&seed_fn)?;

    let s_g = bentlab::circular_spectrum(&row.g)?;
    match bentlab::strict_exponents(&s_g) {
        Ok(e) if e == row.exponents => {}
        Ok(e) => failures.push(format!("spectrum of g has exponents {}, row says {}", exps_string(&e), exps_string(&row.exponents))),
        Err(e) => failures.push(format!("g is not strict bent: {e}")),
    }

    match classes.iter().find(|c| c.class == row.class).and_then(|c| c.row_for(&row.g)) {
        Some(computed) if computed.spectrum_exponents == row.exponents => {}
        Some(computed) => failures.push(format!(
            "computed class row has exponents {}",
            exps_string(&computed.spectrum_exponents)
        )),
        None => failures.push(format!("g = {} is not a primitive of class {}", row.g.digits(), row.class)),
    }

    let p = gamma(row.alpha).kron(&gamma(row.beta))?;
    let mapped = p.apply_spectrum(&s_seed)?;
    match bentlab::strict_exponents(&mapped) {
        Ok(e) if e == row.exponents => {}
        Ok(e) => failures.push(format!("{}⊗{} maps the seed spectrum to {}", row.alpha, row.beta, exps_string(&e))),
        Err(e) => failures.push(format!("{}⊗{} breaks strictness: {e}", row.alpha, row.beta)),
    }

    let w = conjugate_kron(&[row.alpha, row.beta]);
    if !conjugate_by_c(&p.clone().into())?.same_matrix(&PermOperator::Sparse(w.clone())) {
        failures.push("table and dense conjugates differ".into());
    }
    if w.apply(seed_fn.sign_of().entries())? != row.g.sign_of().into_entries() {
        failures.push(format!("W(2)·F for {}⊗{} is not the sign vector of g", row.alpha, row.beta));
    }

    Ok(RowCheck { line: row.line, class: row.class, row: row.row, failures })
}

pub fn verify_fixture(text: &str, jobs: usize) -> Result<AppendixReport> {
    let (rows, malformed) = parse_fixture(text);
    let classes = generate_classes(jobs)?;
    let checks = rows.iter().map(|r| verify_row(r, &classes)).collect::<Result<Vec<_>>>()?;
    Ok(AppendixReport { checks, malformed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_fixture_passes() {
        let report = verify_fixture(APPENDIX_TSV, 1).unwrap();
        assert_eq!(report.checks.len(), 162);
        for c in &report.checks {
            assert!(c.passed(), "class {} row {}: {:?}", c.class, c.row, c.failures);
        }
        assert!(report.passed());
    }

    #[test]
    fn flipped_trit_fails_one_row() {
        let mutated: String = APPENDIX_TSV
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i == 4 {
                    let mut f: Vec<String> = l.split('\t').map(String::from).collect();
                    let mut g: Vec<char> = f[2].chars().collect();
                    g[8] = if g[8] == '0' { '1' } else { '0' };
                    f[2] = g.into_iter().collect();
                    f.join("\t")
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        let report = verify_fixture(&mutated, 1).unwrap();
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed()).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].line, 5);
        assert!(!report.passed());
    }

    #[test]
    fn malformed_lines_are_reported() {
        let text = "# comment\n1\t2\t000021012\tP12,I\t000012021\n1\t3\t0001\tP01,I\t021000012\n1\t4\t000120210\tQ,I\t012000021\nnot a row\n";
        let (rows, errors) = parse_fixture(text);
        assert_eq!(rows.len(), 1);
        assert_eq!(errors.iter().map(|e| e.line).collect::<Vec<_>>(), vec![3, 4, 5]);
    }

    #[test]
    fn wrong_label_is_caught() {
        let text = "1\t10\t012111210\tP12,X\t102000201\n";
        let report = verify_fixture(text, 1).unwrap();
        assert!(!report.passed());
        assert_eq!(report.checks[0].failures.len(), 2);
    }
}
