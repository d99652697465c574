//! Report assembly and rendering: human tables, JSON, CSV.

use std::fmt::Write as _;

use ccrflow::classify::{FactorClassification, FactorType, Rank};
use serde::Serialize;

use crate::suites::{Comparison, SuiteResult};

pub const REPORT_VERSION: &str = "1.0";

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<FactorClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub a: String,
    pub b: String,
    /// `None` when the pair could not be compared.
    pub conjugate: Option<bool>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub names: Vec<String>,
    /// Symmetric, `true` on the diagonal, `null` for incomparable pairs.
    pub matrix: Vec<Vec<Option<bool>>>,
    pub pairs: Vec<PairVerdict>,
    /// Class label per symbol: the index of the first member of its class.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<String>>,
}

impl ConjugacyReport {
    /// Assembles the matrix from upper-triangle verdicts listed row by row.
    pub fn from_pairs(names: Vec<String>, pairs: Vec<PairVerdict>) -> Self {
        let n = names.len();
        let mut matrix = vec![vec![None; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Some(true);
        }
        let upper = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        for ((i, j), p) in upper.zip(&pairs) {
            matrix[i][j] = p.conjugate;
            matrix[j][i] = p.conjugate;
        }
        let class_of: Vec<usize> =
            (0..n).map(|i| (0..i).find(|&j| matrix[i][j] == Some(true)).map_or(i, |j| j)).collect();
        let mut classes: Vec<Vec<String>> = Vec::new();
        let mut label_slot = vec![usize::MAX; n];
        for (i, &c) in class_of.iter().enumerate() {
            if label_slot[c] == usize::MAX {
                label_slot[c] = classes.len();
                classes.push(Vec::new());
            }
            classes[label_slot[c]].push(names[i].clone());
        }
        Self { names, matrix, pairs, class_of, classes }
    }

    pub fn has_incomparable(&self) -> bool {
        self.pairs.iter().any(|p| p.conjugate.is_none())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (name, row) in self.names.iter().zip(&self.matrix) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| cell(*v).to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

fn cell(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "incomparable",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classifications: Vec<ClassificationRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugacy: Option<ConjugacyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn new() -> Self {
        Self { version: REPORT_VERSION, seed: None, classifications: Vec::new(), conjugacy: None, suites: Vec::new() }
    }

    /// Whether anything failed: a symbol that could not be classified, an
    /// incomparable pair, or a failing suite.
    pub fn failed(&self) -> bool {
        self.classifications.iter().any(|c| c.error.is_some())
            || self.conjugacy.as_ref().is_some_and(ConjugacyReport::has_incomparable)
            || self.suites.iter().any(|s| !s.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.classifications.is_empty() {
            out.push_str(&render_classifications(&self.classifications));
        }
        if let Some(c) = &self.conjugacy {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&render_conjugacy(c));
        }
        if !self.suites.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&render_suites(&self.suites));
        }
        out
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (k, (c, w)) in cells.zip(&widths).enumerate() {
            if k > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{c:<w$}");
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&mut header.iter().copied());
    out.push_str(&line(&mut widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str)));
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

fn type_label(t: &FactorType) -> String {
    match t {
        FactorType::TypeI => "I".into(),
        FactorType::TypeIIILambda { lambda } => format!("III_{}", short(*lambda)),
        FactorType::TypeIII1 => "III_1".into(),
    }
}

/// Shortest of `{:.12}` with trailing zeros removed.
fn short(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

fn rank_label(r: Rank) -> String {
    r.to_string()
}

fn render_classifications(rows: &[ClassificationRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|row| match (&row.classification, &row.error) {
            (Some(c), _) => vec![
                row.name.clone(),
                rank_label(c.rank),
                type_label(&c.factor_type),
                c.case.map_or("-".into(), |k| k.to_string()),
                rank_label(c.coupling_index),
                c.exponents.as_ref().map_or("-".into(), |d| {
                    format!("({})", d.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
                }),
                rank_label(c.type_i_multiplicity),
            ],
            (None, e) => {
                let mut v = vec![row.name.clone(), "-".into(), format!("error: {}", e.as_deref().unwrap_or("unknown"))];
                v.extend(std::iter::repeat_n("-".to_string(), 4));
                v
            }
        })
        .collect();
    table(&["symbol", "rank", "type", "case", "coupling index", "exponents", "type I part"], &body)
}

fn render_conjugacy(c: &ConjugacyReport) -> String {
    let mut header = vec!["#".to_string(), "symbol".to_string()];
    header.extend((0..c.names.len()).map(|j| j.to_string()));
    let rows: Vec<Vec<String>> = c
        .names
        .iter()
        .zip(&c.matrix)
        .enumerate()
        .map(|(i, (name, row))| {
            let mut r = vec![i.to_string(), name.clone()];
            r.extend(row.iter().map(|v| {
                match v {
                    Some(true) => "=",
                    Some(false) => ".",
                    None => "?",
                }
                .to_string()
            }));
            r
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = table(&header_refs, &rows);
    let _ = writeln!(out, "\n{} conjugacy classes:", c.classes.len());
    for (k, class) in c.classes.iter().enumerate() {
        let _ = writeln!(out, "  [{k}] {}", class.join(", "));
    }
    for p in c.pairs.iter().filter(|p| p.conjugate.is_none()) {
        let _ = writeln!(out, "  incomparable: {} vs {} ({})", p.a, p.b, p.reason);
    }
    out
}

fn render_suites(suites: &[SuiteResult]) -> String {
    let mut rows = Vec::new();
    for s in suites {
        for c in &s.checks {
            let op = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            rows.push(vec![
                s.suite.clone(),
                c.check.clone(),
                c.cases.to_string(),
                format!("{:.3e}", c.residual),
                format!("{op} {:.1e}", c.bound),
                if c.passed { "pass" } else { "FAIL" }.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    let mut out = table(&["suite", "check", "cases", "residual", "bound", "status", "detail"], &rows);
    out.push('\n');
    for s in suites {
        let _ = writeln!(
            out,
            "{:<11} {} in {:.2} s",
            s.suite,
            if s.passed { "pass" } else { "FAIL" },
            s.runtime.as_secs_f64()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(a: &str, b: &str, c: Option<bool>) -> PairVerdict {
        PairVerdict { a: a.into(), b: b.into(), conjugate: c, reason: String::new() }
    }

    #[test]
    fn matrix_is_symmetric_with_true_diagonal_and_classes_follow_first_member() {
        let names = vec!["x".to_string(), "y".into(), "z".into()];
        let pairs = vec![verdict("x", "y", Some(false)), verdict("x", "z", Some(true)), verdict("y", "z", Some(false))];
        let r = ConjugacyReport::from_pairs(names, pairs);
        for i in 0..3 {
            assert_eq!(r.matrix[i][i], Some(true));
            for j in 0..3 {
                assert_eq!(r.matrix[i][j], r.matrix[j][i]);
            }
        }
        assert_eq!(r.class_of, vec![0, 1, 0]);
        assert_eq!(r.classes, vec![vec!["x".to_string(), "z".into()], vec!["y".to_string()]]);
        assert!(!r.has_incomparable());
    }

    #[test]
    fn csv_quotes_awkward_names_and_marks_incomparable_pairs() {
        let r = ConjugacyReport::from_pairs(vec!["a,b".into(), "c".into()], vec![verdict("a,b", "c", None)]);
        let csv = r.to_csv();
        assert_eq!(csv, ",\"a,b\",c\n\"a,b\",true,incomparable\nc,incomparable,true\n");
        assert!(r.has_incomparable());
    }

    #[test]
    fn lambda_labels_drop_trailing_zeros() {
        assert_eq!(type_label(&FactorType::TypeIIILambda { lambda: 0.5 }), "III_0.5");
        assert_eq!(type_label(&FactorType::TypeIIILambda { lambda: 0.5000000000001 }), "III_0.5");
        assert_eq!(short(0.125), "0.125");
    }

    #[test]
    fn tables_align_columns() {
        let t = table(&["a", "bb"], &[vec!["long".into(), "x".into()]]);
        assert_eq!(t, "a     bb\n----  --\nlong  x\n");
    }
}
