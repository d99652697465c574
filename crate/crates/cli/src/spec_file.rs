//! Versioned JSON symbol-spec files.

use std::collections::HashSet;
use std::path::Path;

use ccrflow::classify::SymbolSpec;
use ccrflow::ToleranceConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: String,
    pub symbols: Vec<SymbolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
    #[serde(default, skip_serializing_if = "JobOptions::is_empty")]
    pub options: JobOptions,
}

/// Defaults for command-line flags; explicit flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_scale: Option<f64>,
}

impl JobOptions {
    fn is_empty(&self) -> bool {
        self.tol_scale.is_none()
    }
}

impl SpecFile {
    pub fn tolerances(&self) -> ToleranceConfig {
        self.tolerances.unwrap_or_default()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != SCHEMA_VERSION {
            return Err(CliError::SchemaVersionUnsupported(self.version.clone()));
        }
        let mut seen = HashSet::new();
        for s in &self.symbols {
            if !seen.insert(s.name.as_str()) {
                return Err(CliError::InvariantViolation { symbol: s.name.clone(), reason: "duplicate name".into() });
            }
            s.validate()
                .map_err(|e| CliError::InvariantViolation { symbol: s.name.clone(), reason: e.to_string() })?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialise")
    }
}

pub fn parse_spec_str(text: &str) -> Result<SpecFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: SpecFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse { line: inner.line(), column: inner.column(), field, message: inner.to_string() }
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn parse_spec(path: &Path) -> Result<SpecFile, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Io {
        path: path.display().to_string(),
        message: "file is not valid UTF-8".into(),
    })?;
    parse_spec_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ccrflow::classify::{Rank, SpectrumEntry};

    #[test]
    fn minimal_file_parses() {
        let spec = parse_spec_str(
            r#"{"version": "1.0", "symbols": [{"name": "lambda-half", "rank": 1, "spectrum": [{"r": 3, "mult": 1}]}]}"#,
        )
        .unwrap();
        assert_eq!(spec.symbols[0].rank, Rank::Finite(1));
        assert_eq!(spec.symbols[0].spectrum, vec![SpectrumEntry { r: 3.0, mult: 1 }]);
        assert_eq!(spec.tolerances(), ToleranceConfig::default());
    }

    #[test]
    fn invariant_violations_name_the_symbol() {
        let low = r#"{"version": "1.0", "symbols": [{"name": "low", "rank": 1, "spectrum": [{"r": 0.5, "mult": 1}]}]}"#;
        assert!(matches!(parse_spec_str(low), Err(CliError::InvariantViolation { symbol, .. }) if symbol == "low"));
        let sum = r#"{"version": "1.0", "symbols": [{"name": "sum", "rank": 2, "spectrum": [{"r": 3, "mult": 1}]}]}"#;
        assert!(matches!(parse_spec_str(sum), Err(CliError::InvariantViolation { symbol, .. }) if symbol == "sum"));
        let dup = r#"{"version": "1.0", "symbols": [
            {"name": "a", "rank": 1, "spectrum": [{"r": 3, "mult": 1}]},
            {"name": "a", "rank": 1, "spectrum": [{"r": 5, "mult": 1}]}]}"#;
        assert!(matches!(parse_spec_str(dup), Err(CliError::InvariantViolation { .. })));
    }

    #[test]
    fn parse_errors_carry_position_and_field() {
        let bad = "{\"version\": \"1.0\",\n \"symbols\": [{\"name\": \"x\", \"rank\": \"lots\", \"spectrum\": []}]}";
        match parse_spec_str(bad) {
            Err(CliError::Parse { line, field, .. }) => {
                assert_eq!(line, 2);
                assert!(field.contains("symbols[0].rank"), "{field}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec_str(r#"{"symbols": []}"#), Err(CliError::Parse { .. })));
        assert!(matches!(
            parse_spec_str(r#"{"version": "2.0", "symbols": []}"#),
            Err(CliError::SchemaVersionUnsupported(v)) if v == "2.0"
        ));
    }

    #[test]
    fn tolerance_overrides_are_partial() {
        let spec = parse_spec_str(r#"{"version": "1.0", "symbols": [], "tolerances": {"pair_tol": 1e-6}}"#).unwrap();
        let tol = spec.tolerances();
        assert_eq!(tol.pair_tol, 1e-6);
        assert_eq!(tol.fit_tol, ToleranceConfig::default().fit_tol);
    }

    #[test]
    fn emit_then_parse_round_trips() {
        let spec = parse_spec_str(include_str!("../data/demo_spec.json")).unwrap();
        assert_eq!(parse_spec_str(&spec.to_json()).unwrap(), spec);
        let mut with_opts = spec.clone();
        with_opts.options.tol_scale = Some(3.0);
        with_opts.tolerances = Some(ToleranceConfig::default().scaled(2.0));
        assert_eq!(parse_spec_str(&with_opts.to_json()).unwrap(), with_opts);
    }
}
