//! Verification runs: one [`Verifier`] per conjecture, looked up by name in a
//! [`Registry`], producing versioned [`VerificationReport`]s.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

mod cache;
mod campaign;
mod render;
mod verifiers;

pub use cache::Cache;
pub use campaign::{run_campaign, Campaign, CampaignEntry, CampaignOptions, CampaignReport, RunConfig};
pub use render::{markdown_detail, markdown_table};
pub use verifiers::{
    BettiDegreeVerifier, CarlssonVerifier, DifferentialModuleVerifier, GrowthVerifier, LefschetzVerifier,
    RankVerifier, TrcVerifier,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Fast,
    Slow,
}

impl FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "slow" => Ok(Tier::Slow),
            _ => Err(Error::Parse(format!("tier must be fast or slow, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CounterexampleConfirmed,
    BoundHolds,
    InconclusiveTruncation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CounterexampleConfirmed => "counterexample-confirmed",
            Verdict::BoundHolds => "bound-holds",
            Verdict::InconclusiveTruncation => "inconclusive-truncation",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Counterexample,
    Bound,
}

impl FromStr for Expect {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counterexample" => Ok(Expect::Counterexample),
            "bound" => Ok(Expect::Bound),
            _ => Err(Error::Parse(format!("expect must be counterexample or bound, got {s:?}"))),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

pub fn exit_code(verdict: Verdict, expect: Option<Expect>) -> i32 {
    match (verdict, expect) {
        (Verdict::InconclusiveTruncation, _) => EXIT_INCONCLUSIVE,
        (Verdict::BoundHolds, Some(Expect::Counterexample)) => EXIT_MISMATCH,
        (Verdict::CounterexampleConfirmed, Some(Expect::Bound)) => EXIT_MISMATCH,
        _ => EXIT_OK,
    }
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidField(_)
        | Error::InvalidRing(_)
        | Error::Precondition(_)
        | Error::Guard(_)
        | Error::Parse(_)
        | Error::UnknownVerifier(_)
        | Error::TierGate(_)
        | Error::Config(_) => EXIT_INVALID,
        _ => EXIT_INTERNAL,
    }
}

/// Run parameters. Unset fields take per-verifier defaults; the resolved
/// values are what reports and cache keys record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Characteristic; 0 selects the rationals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Number of variables or exterior generators.
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "d", alias = "e")]
    pub r: Option<usize>,
    /// Number of hyperbolic pairs (lefschetz) or the largest `n` (growth).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// One exponent for all variables, or one per variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(usize, usize)>>,
    /// Use the first `pairing` consecutive pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<i64>,
    /// Characteristic-2 survey size; 0 is exhaustive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survey: Option<usize>,
    #[serde(default)]
    pub tier: Tier,
}

impl Params {
    /// Rejects parameters the verifier does not read.
    pub fn only(&self, name: &str, allowed: &[&str]) -> Result<()> {
        let v = serde_json::to_value(self)?;
        let map = v.as_object().expect("params serialize to an object");
        for k in map.keys() {
            if k != "tier" && !allowed.contains(&k.as_str()) {
                return Err(Error::Precondition(format!("{name} does not take parameter {k:?}")));
            }
        }
        Ok(())
    }
}

/// An exact value, kept with the text it is reported as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    value: BigRational,
    text: String,
}

impl Quantity {
    pub fn int(v: impl Into<BigInt>) -> Self {
        let v: BigInt = v.into();
        Self { text: v.to_string(), value: BigRational::from_integer(v) }
    }

    pub fn rational(v: BigRational) -> Self {
        Self { text: v.to_string(), value: v }
    }

    pub fn pow2(k: usize) -> Self {
        Self::int(BigInt::one() << k)
    }

    /// Parses `"a"`, `"a/b"` or a decimal such as `"1.9605"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an exact number: {s:?}"));
        let value = if let Some((i, f)) = s.split_once('.') {
            let neg = i.starts_with('-');
            let digits = format!("{}{}", i.trim_start_matches('-'), f);
            let num: BigInt = digits.parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), f.len());
            let q = BigRational::new(num, den);
            if neg {
                -q
            } else {
                q
            }
        } else {
            s.parse::<BigRational>().map_err(|_| bad())?
        };
        Ok(Self { value, text: s.to_string() })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Quantity::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A condition the verdict depends on, with whether it held in this run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub what: String,
    pub holds: bool,
}

impl Condition {
    pub fn new(what: impl Into<String>, holds: bool) -> Self {
        Self { what: what.into(), holds }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixStats {
    pub max_rows: usize,
    pub max_cols: usize,
    pub nnz: usize,
    /// Dimension over the field of the largest expanded system, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_dim: Option<usize>,
}

impl MatrixStats {
    pub fn record(&mut self, rows: usize, cols: usize, nnz: usize) {
        self.max_rows = self.max_rows.max(rows);
        self.max_cols = self.max_cols.max(cols);
        self.nnz += nnz;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_seconds: f64,
}

/// What a verifier computes; the runner turns it into a report.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// The conjectured lower bound.
    pub bound: Quantity,
    /// The value the construction is predicted to attain.
    pub predicted: Quantity,
    pub computed: Quantity,
    pub trusted: Vec<Condition>,
    pub details: BTreeMap<String, Value>,
    pub stats: MatrixStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub conjecture: String,
    pub params: Params,
    pub bound: Quantity,
    pub predicted: Quantity,
    pub computed: Quantity,
    pub verdict: Verdict,
    pub trusted_range: Vec<Condition>,
    pub details: BTreeMap<String, Value>,
    pub stats: MatrixStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    #[serde(default)]
    pub cached: bool,
}

impl VerificationReport {
    fn from_outcome(conjecture: &str, params: Params, o: Outcome) -> Self {
        let trusted = o.trusted.iter().all(|c| c.holds);
        let verdict = if !trusted {
            Verdict::InconclusiveTruncation
        } else if o.computed.value() < o.bound.value() {
            Verdict::CounterexampleConfirmed
        } else {
            Verdict::BoundHolds
        };
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            conjecture: conjecture.to_string(),
            params,
            bound: o.bound,
            predicted: o.predicted,
            computed: o.computed,
            verdict,
            trusted_range: o.trusted,
            details: o.details,
            stats: o.stats,
            timings: None,
            cached: false,
        }
    }

    /// The report without timings or cache provenance.
    pub fn canonical(&self) -> Self {
        Self { timings: None, cached: false, ..self.clone() }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical()).expect("reports serialize")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

pub trait Verifier: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Fills defaults and validates.
    fn resolve(&self, params: &Params) -> Result<Params>;
    fn required_tier(&self, resolved: &Params) -> Tier;
    fn estimate(&self, resolved: &Params) -> String;
    fn run(&self, resolved: &Params) -> Result<Outcome>;
}

#[derive(Default)]
pub struct Registry {
    verifiers: BTreeMap<&'static str, Box<dyn Verifier>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn standard() -> Self {
        let mut r = Self::new();
        r.register(Box::new(CarlssonVerifier));
        r.register(Box::new(RankVerifier));
        r.register(Box::new(DifferentialModuleVerifier));
        r.register(Box::new(TrcVerifier));
        r.register(Box::new(BettiDegreeVerifier));
        r.register(Box::new(LefschetzVerifier));
        r.register(Box::new(GrowthVerifier));
        r
    }

    /// Replaces any verifier already registered under the same name.
    pub fn register(&mut self, v: Box<dyn Verifier>) {
        self.verifiers.insert(v.name(), v);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Verifier> {
        self.verifiers.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownVerifier(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.verifiers.keys().copied()
    }
}

/// Cache key: the conjecture and resolved parameters, tier excluded.
pub fn cache_key(conjecture: &str, resolved: &Params) -> String {
    let p = Params { tier: Tier::Fast, ..resolved.clone() };
    let body = serde_json::json!({ "schema": REPORT_SCHEMA_VERSION, "conjecture": conjecture, "params": p });
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

/// Resolves and tier-checks a run; returns the verifier's resolved parameters.
pub fn prepare(registry: &Registry, conjecture: &str, params: &Params) -> Result<Params> {
    let v = registry.get(conjecture)?;
    let resolved = v.resolve(params)?;
    if v.required_tier(&resolved) == Tier::Slow && resolved.tier == Tier::Fast {
        return Err(Error::TierGate(format!(
            "{conjecture} with these parameters is a slow-tier run (estimated {}); pass --tier slow",
            v.estimate(&resolved)
        )));
    }
    Ok(resolved)
}

pub fn run_one(
    registry: &Registry,
    conjecture: &str,
    params: &Params,
    cache: Option<&Cache>,
    timings: bool,
) -> Result<VerificationReport> {
    let resolved = prepare(registry, conjecture, params)?;
    let key = cache_key(conjecture, &resolved);
    if let Some(c) = cache {
        if let Some(mut hit) = c.get(&key)? {
            hit.params.tier = resolved.tier;
            hit.cached = true;
            return Ok(hit);
        }
    }
    let v = registry.get(conjecture)?;
    log::info!("running {conjecture} ({})", v.estimate(&resolved));
    let start = Instant::now();
    let outcome = v.run(&resolved)?;
    let mut report = VerificationReport::from_outcome(conjecture, resolved, outcome);
    if let Some(c) = cache {
        c.put(&key, &report)?;
    }
    if timings {
        report.timings = Some(Timings { wall_seconds: start.elapsed().as_secs_f64() });
    }
    Ok(report)
}
