//! Factor type and cocycle-conjugacy class of CCR flows with symbol `A = I ⊗ R`.
//!
//! Everything is read off the spectrum of `R`. With `μ = (r − 1)/(r + 1)`,
//! the eigenvalues of `(1+T)⁻¹T`, the factor is type I when `R = 1`, type
//! `III_λ` when every retained `μᵢ` is an integer power of one `λ`, and
//! type `III_1` otherwise. Two flows are cocycle conjugate exactly when their
//! `R` are unitarily equivalent.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{multiset_match, MultisetMismatch};
use crate::par::{self, Execution};
use crate::{Error, Result, ToleranceConfig};

/// Retained values below this are treated as `r = 1`.
pub const MU_FLOOR: f64 = 1e-12;

/// Dimension of the one-cell space `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n as u64),
            Rank::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(usize),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(n) => Ok(Rank::Finite(n)),
            Repr::Word(w) if w == "infinite" => Ok(Rank::Infinite),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("rank must be a count or \"infinite\", got {w:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub r: f64,
    pub mult: usize,
}

/// Eigenvalue list of `R` with the rank of the flow.
///
/// For infinite rank each listed value is read as having infinite multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub name: String,
    pub rank: Rank,
    pub spectrum: Vec<SpectrumEntry>,
    #[serde(default)]
    pub continuous_spectrum: bool,
}

impl SymbolSpec {
    pub fn validate(&self) -> Result<()> {
        for e in &self.spectrum {
            if !e.r.is_finite() || e.r < 1.0 - 1e-12 {
                return Err(Error::InvalidSpec(format!("{}: eigenvalue {} of R is below 1", self.name, e.r)));
            }
            if e.mult == 0 {
                return Err(Error::InvalidSpec(format!("{}: multiplicity must be at least 1", self.name)));
            }
        }
        match self.rank {
            Rank::Finite(k) => {
                if self.continuous_spectrum {
                    return Err(Error::InvalidSpec(format!(
                        "{}: continuous spectrum needs infinite rank",
                        self.name
                    )));
                }
                let total: usize = self.spectrum.iter().map(|e| e.mult).sum();
                if total != k {
                    return Err(Error::InvalidSpec(format!("{}: multiplicities sum to {total}, rank is {k}", self.name)));
                }
            }
            Rank::Infinite => {}
        }
        if self.spectrum.is_empty() && !self.continuous_spectrum {
            return Err(Error::EmptySpectrum);
        }
        Ok(())
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().flat_map(|e| std::iter::repeat_n(e.r, e.mult)).collect()
    }

    /// Listed eigenvalues with near-duplicates merged, ascending.
    pub fn distinct_values(&self, pair_tol: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.spectrum.iter().map(|e| e.r).collect();
        v.sort_by(f64::total_cmp);
        v.dedup_by(|b, a| close(*a, *b, pair_tol));
        v
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// `μ = (r − 1)/(r + 1)`.
pub fn mu_from_r(r: f64) -> Result<f64> {
    if !r.is_finite() || r < 1.0 - 1e-12 {
        return Err(Error::OutOfDomain { value: r, reason: "r must be at least 1" });
    }
    let r = r.max(1.0);
    Ok((r - 1.0) / (r + 1.0))
}

/// `r = (1 + μ)/(1 − μ)`.
pub fn r_from_mu(mu: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::OutOfDomain { value: mu, reason: "mu must lie in [0, 1)" });
    }
    Ok((1.0 + mu) / (1.0 - mu))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaFit {
    pub lambda: f64,
    pub exponents: Vec<u64>,
}

/// Continued-fraction convergents `p/q` of `x ≥ 0` with `q ≤ max_denominator`.
fn convergents(x: f64, max_denominator: u64) -> Vec<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    let mut out = Vec::new();
    for _ in 0..64 {
        let a = rest.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_denominator {
            break;
        }
        out.push((p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac < 1e-15 {
            break;
        }
        rest = frac.recip();
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `λ ∈ (0,1)` with `μᵢ = λ^{dᵢ}` for coprime integers `dᵢ`, if the log-ratios are
/// rational with denominators at most `max_denominator` to relative `tol`.
///
/// Coprime exponents make `L = −ln λ` the largest common measure of the `−ln μᵢ`.
pub fn extract_lambda(mus: &[f64], max_denominator: u64, tol: f64) -> Option<LambdaFit> {
    if mus.is_empty() || mus.iter().any(|m| !(*m > 0.0 && *m < 1.0)) {
        return None;
    }
    let logs: Vec<f64> = mus.iter().map(|m| -m.ln()).collect();
    let mut fractions = Vec::with_capacity(logs.len());
    for l in &logs {
        let ratio = l / logs[0];
        // first convergent within tolerance has the smallest denominator
        let (p, q) = convergents(ratio, max_denominator)
            .into_iter()
            .find(|&(p, q)| p > 0 && (ratio - p as f64 / q as f64).abs() <= tol * ratio)?;
        fractions.push((p, q));
    }
    let lcm = fractions.iter().fold(1u64, |acc, &(_, q)| acc / gcd(acc, q) * q);
    let numerators: Vec<u64> = fractions.iter().map(|&(p, q)| p * (lcm / q)).collect();
    let g = numerators.iter().copied().fold(0, gcd);
    let exponents: Vec<u64> = numerators.iter().map(|n| n / g).collect();
    // least-squares L over all values
    let num: f64 = exponents.iter().zip(&logs).map(|(&d, l)| d as f64 * l).sum();
    let den: f64 = exponents.iter().map(|&d| (d * d) as f64).sum();
    Some(LambdaFit { lambda: (-num / den).exp(), exponents })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum FactorType {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "III_lambda")]
    TypeIIILambda { lambda: f64 },
    #[serde(rename = "III_1")]
    TypeIII1,
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorType::TypeI => f.write_str("I"),
            FactorType::TypeIIILambda { lambda } => write!(f, "III_λ (λ = {lambda:.12})"),
            FactorType::TypeIII1 => f.write_str("III_1"),
        }
    }
}

/// Which branch of the trichotomy applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Integer powers of a single `λ`.
    #[serde(rename = "(i)")]
    Commensurate,
    /// Discrete spectrum with an irrational log-ratio.
    #[serde(rename = "(ii)")]
    Incommensurate,
    /// Non-discrete spectrum.
    #[serde(rename = "(iii)")]
    Continuous,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Commensurate => "(i)",
            Case::Incommensurate => "(ii)",
            Case::Continuous => "(iii)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorClassification {
    pub name: String,
    pub factor_type: FactorType,
    pub rank: Rank,
    pub coupling_index: Rank,
    /// Distinct retained `μ` values, descending.
    pub mu_values: Vec<f64>,
    /// `dᵢ` with `μᵢ = λ^{dᵢ}`, aligned with `mu_values`.
    pub exponents: Option<Vec<u64>>,
    pub case: Option<Case>,
    /// Multiplicity of the eigenvalue 1, split off as a type I tensor factor.
    pub type_i_multiplicity: Rank,
}

pub fn classify_type(spec: &SymbolSpec, tol: &ToleranceConfig) -> Result<FactorClassification> {
    spec.validate()?;
    let coupling_index = match spec.rank {
        Rank::Finite(k) => Rank::Finite(2 * k),
        Rank::Infinite => Rank::Infinite,
    };
    let mut mus = Vec::new();
    let mut ones = 0;
    for e in &spec.spectrum {
        let mu = mu_from_r(e.r)?;
        if mu < MU_FLOOR {
            ones += e.mult;
        } else {
            mus.push(mu);
        }
    }
    mus.sort_by(|a, b| b.total_cmp(a));
    mus.dedup_by(|b, a| close(*a, *b, tol.pair_tol));
    let type_i_multiplicity = match spec.rank {
        Rank::Finite(_) => Rank::Finite(ones),
        Rank::Infinite if ones > 0 => Rank::Infinite,
        Rank::Infinite => Rank::Finite(0),
    };

    let (factor_type, exponents, case) = if spec.continuous_spectrum {
        (FactorType::TypeIII1, None, Some(Case::Continuous))
    } else if mus.is_empty() {
        (FactorType::TypeI, None, None)
    } else {
        match extract_lambda(&mus, tol.max_denominator, tol.fit_tol) {
            Some(fit) => (FactorType::TypeIIILambda { lambda: fit.lambda }, Some(fit.exponents), Some(Case::Commensurate)),
            None => (FactorType::TypeIII1, None, Some(Case::Incommensurate)),
        }
    };
    Ok(FactorClassification {
        name: spec.name.clone(),
        factor_type,
        rank: spec.rank,
        coupling_index,
        mu_values: mus,
        exponents,
        case,
        type_i_multiplicity,
    })
}

pub fn classify_batch(specs: &[SymbolSpec], tol: &ToleranceConfig, exec: Execution) -> Vec<Result<FactorClassification>> {
    par::map(exec, specs, |s| classify_type(s, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyVerdict {
    pub conjugate: bool,
    pub reason: String,
}

/// Cocycle conjugacy of the flows for `R₁` and `R₂`: equal rank and unitarily
/// equivalent `R`, i.e. equal spectra with multiplicity.
pub fn decide_cocycle_conjugacy(s1: &SymbolSpec, s2: &SymbolSpec, tol: &ToleranceConfig) -> Result<ConjugacyVerdict> {
    s1.validate()?;
    s2.validate()?;
    let verdict = |conjugate: bool, reason: String| Ok(ConjugacyVerdict { conjugate, reason });
    match (s1.rank, s2.rank) {
        (Rank::Finite(a), Rank::Finite(b)) if a != b => {
            return verdict(false, format!("rank differs: {a} vs {b}"));
        }
        (Rank::Finite(_), Rank::Infinite) | (Rank::Infinite, Rank::Finite(_)) => {
            return Err(Error::IncomparableSpecs);
        }
        _ => {}
    }
    match (s1.continuous_spectrum, s2.continuous_spectrum) {
        (true, true) => return Err(Error::IncomparableSpecs),
        (true, false) | (false, true) => {
            return verdict(false, "only one spectrum has a continuous part".into());
        }
        _ => {}
    }
    let (left, right) = match s1.rank {
        Rank::Finite(_) => (s1.eigenvalues(), s2.eigenvalues()),
        Rank::Infinite => (s1.distinct_values(tol.pair_tol), s2.distinct_values(tol.pair_tol)),
    };
    match multiset_match(&left, &right, tol.pair_tol) {
        Ok(()) => verdict(true, "conjugate: spectra of R agree".into()),
        Err(MultisetMismatch::Length { left, right }) => {
            verdict(false, format!("number of distinct eigenvalues differs: {left} vs {right}"))
        }
        Err(MultisetMismatch::Value { left, right }) => {
            verdict(false, format!("unmatched eigenvalue: {left} vs {right}"))
        }
    }
}

/// Class label per spec (index of its first conjugate), with pairwise decisions batched.
pub fn conjugacy_classes(specs: &[SymbolSpec], tol: &ToleranceConfig, exec: Execution) -> Result<Vec<usize>> {
    let n = specs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let decided = par::map(exec, &pairs, |&(i, j)| decide_cocycle_conjugacy(&specs[i], &specs[j], tol));
    let mut same = vec![vec![false; n]; n];
    for (&(i, j), d) in pairs.iter().zip(decided) {
        same[i][j] = d?.conjugate;
    }
    Ok((0..n).map(|i| (0..i).find(|&j| same[i][j]).map_or(i, |j| j)).collect())
}

/// `R = diag((1 + λ^{dᵢ})/(1 − λ^{dᵢ}))`, a rank-`n` flow of type `III_λ`.
pub fn build_example_symbol(lambda: f64, exponents: &[u64]) -> Result<SymbolSpec> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfDomain { value: lambda, reason: "lambda must lie in (0, 1)" });
    }
    if exponents.is_empty() || exponents.contains(&0) {
        return Err(Error::OutOfDomain { value: 0.0, reason: "exponents must be positive" });
    }
    let spectrum = exponents
        .iter()
        .map(|&d| Ok(SpectrumEntry { r: r_from_mu(lambda.powi(d as i32))?, mult: 1 }))
        .collect::<Result<Vec<_>>>()?;
    let ds: Vec<String> = exponents.iter().map(u64::to_string).collect();
    Ok(SymbolSpec {
        name: format!("lambda={lambda},d=({})", ds.join(",")),
        rank: Rank::Finite(exponents.len()),
        spectrum,
        continuous_spectrum: false,
    })
}
