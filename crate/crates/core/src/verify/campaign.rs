//! Batches of runs from a TOML or JSON file.
//!
//! ```toml
//! [[run]]
//! name = "carlsson-r8"
//! conjecture = "carlsson"
//! expect = "counterexample"
//! p = 3
//! r = 8
//! exponents = [2]
//! ```

use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    cache_key, error_exit_code, exit_code, prepare, run_one, Cache, Expect, Params, Registry, Tier,
    VerificationReport, REPORT_SCHEMA_VERSION,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub conjecture: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    pub params: Params,
}

impl RunConfig {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.conjecture.clone())
    }

    fn from_value(v: Value) -> Result<Self> {
        let Value::Object(mut m) = v else {
            return Err(Error::Config("each run must be a table".into()));
        };
        let take_str = |m: &mut serde_json::Map<String, Value>, k: &str| -> Result<Option<String>> {
            match m.remove(k) {
                None => Ok(None),
                Some(Value::String(s)) => Ok(Some(s)),
                Some(other) => Err(Error::Config(format!("{k} must be a string, got {other}"))),
            }
        };
        let conjecture = take_str(&mut m, "conjecture")?.ok_or_else(|| Error::Config("run without conjecture".into()))?;
        let name = take_str(&mut m, "name")?;
        let expect = take_str(&mut m, "expect")?.map(|s| s.parse()).transpose()?;
        let params: Params =
            serde_json::from_value(Value::Object(m)).map_err(|e| Error::Config(format!("run {conjecture}: {e}")))?;
        Ok(Self { name, conjecture, expect, params })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Campaign {
    pub runs: Vec<RunConfig>,
}

impl Campaign {
    fn from_value(v: Value) -> Result<Self> {
        let runs = match v {
            Value::Array(a) => a,
            Value::Object(mut m) => {
                let runs = match m.remove("run") {
                    None => Vec::new(),
                    Some(Value::Array(a)) => a,
                    Some(_) => return Err(Error::Config("`run` must be an array of tables".into())),
                };
                if let Some(k) = m.keys().next() {
                    return Err(Error::Config(format!("unknown top-level key {k:?}")));
                }
                runs
            }
            _ => return Err(Error::Config("expected a table or an array of runs".into())),
        };
        Ok(Self { runs: runs.into_iter().map(RunConfig::from_value).collect::<Result<_>>()? })
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        let v: Value = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(v)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::default());
        }
        Self::from_value(serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?)
    }

    /// Chooses the format from the extension; anything but `.json` is TOML.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }
}

#[derive(Clone, Debug)]
pub struct CampaignOptions {
    /// Runs whose own tier exceeds this are skipped.
    pub tier: Tier,
    pub cache: Option<Cache>,
    pub timings: bool,
    pub parallel: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        Self { tier: Tier::Fast, cache: None, timings: true, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignEntry {
    pub name: String,
    pub conjecture: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub entries: Vec<CampaignEntry>,
    pub skipped: Vec<String>,
    pub exit_code: i32,
}

impl CampaignReport {
    pub fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        self.entries.iter().filter_map(|e| e.report.as_ref())
    }
}

/// Runs every entry at or below `opts.tier`. Failures stay with their entry;
/// the campaign exit code is the largest entry code. Repeated runs are
/// computed once and reported as cached.
pub fn run_campaign(registry: &Registry, campaign: &Campaign, opts: &CampaignOptions) -> CampaignReport {
    let mut skipped = Vec::new();
    let mut active = Vec::new();
    for run in &campaign.runs {
        if run.params.tier > opts.tier {
            skipped.push(run.label());
        } else {
            active.push(run);
        }
    }

    let keys: Vec<Result<String>> = active
        .iter()
        .map(|s| prepare(registry, &s.conjecture, &s.params).map(|r| cache_key(&s.conjecture, &r)))
        .collect();
    let mut first: HashMap<&str, usize> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        if let Ok(k) = k {
            first.entry(k.as_str()).or_insert(i);
        }
    }
    let mut leaders: Vec<usize> = first.values().copied().collect();
    leaders.sort_unstable();

    let exec = |&i: &usize| -> (usize, Result<VerificationReport>) {
        let s = active[i];
        (i, run_one(registry, &s.conjecture, &s.params, opts.cache.as_ref(), opts.timings))
    };
    let computed: Vec<(usize, Result<VerificationReport>)> =
        if opts.parallel { leaders.par_iter().map(exec).collect() } else { leaders.iter().map(exec).collect() };
    let mut results: HashMap<usize, Result<VerificationReport>> = computed.into_iter().collect();

    let fail = |e: &Error| (e.to_string(), error_exit_code(e));
    let mut entries: Vec<CampaignEntry> = Vec::with_capacity(active.len());
    for (i, run) in active.iter().enumerate() {
        let outcome: std::result::Result<VerificationReport, (String, i32)> = match &keys[i] {
            Err(e) => Err(fail(e)),
            Ok(k) => {
                let lead = first[k.as_str()];
                if lead == i {
                    results.remove(&i).expect("leader computed").map_err(|e| fail(&e))
                } else {
                    let prev = &entries[lead];
                    match &prev.report {
                        Some(r) => {
                            let mut r = r.clone();
                            r.cached = true;
                            r.timings = None;
                            r.params.tier = run.params.tier;
                            Ok(r)
                        }
                        None => Err((prev.error.clone().unwrap_or_default(), prev.exit_code)),
                    }
                }
            }
        };
        let (report, error, code) = match outcome {
            Ok(r) => {
                let code = exit_code(r.verdict, run.expect);
                (Some(r), None, code)
            }
            Err((msg, code)) => (None, Some(msg), code),
        };
        entries.push(CampaignEntry {
            name: run.label(),
            conjecture: run.conjecture.clone(),
            expect: run.expect,
            report,
            error,
            exit_code: code,
        });
    }
    let exit_code = entries.iter().map(|e| e.exit_code).max().unwrap_or(0);
    CampaignReport { schema_version: REPORT_SCHEMA_VERSION, entries, skipped, exit_code }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_configs() {
        assert!(Campaign::from_toml("").unwrap().runs.is_empty());
        assert!(Campaign::from_json("[]").unwrap().runs.is_empty());
        assert!(Campaign::from_json("").unwrap().runs.is_empty());
        let rep = run_campaign(&Registry::standard(), &Campaign::default(), &CampaignOptions::default());
        assert!(rep.entries.is_empty());
        assert_eq!(rep.exit_code, 0);
    }

    #[test]
    fn parse_runs() {
        let c = Campaign::from_toml(
            "[[run]]\nconjecture = \"growth\"\nn = 20\nexpect = \"counterexample\"\n[[run]]\nconjecture = \"lefschetz\"\nd = 4\n",
        )
        .unwrap();
        assert_eq!(c.runs.len(), 2);
        assert_eq!(c.runs[0].params.n, Some(20));
        assert_eq!(c.runs[0].expect, Some(Expect::Counterexample));
        assert_eq!(c.runs[1].params.r, Some(4));
        assert!(Campaign::from_toml("[[run]]\nconjecture = \"growth\"\nbogus = 1\n").is_err());
        assert!(Campaign::from_toml("[[run]]\nn = 1\n").is_err());
        assert!(Campaign::from_toml("extra = 1\n").is_err());
    }

    #[test]
    fn duplicates_served_once() {
        let c = Campaign::from_json(r#"[{"conjecture":"growth","n":30},{"conjecture":"growth","n":30}]"#).unwrap();
        let rep = run_campaign(&Registry::standard(), &c, &CampaignOptions::default());
        let r: Vec<_> = rep.reports().collect();
        assert_eq!(r.len(), 2);
        assert!(!r[0].cached);
        assert!(r[1].cached);
        assert_eq!(r[0].canonical(), r[1].canonical());
    }

    #[test]
    fn failures_isolated() {
        let c = Campaign::from_json(r#"[{"conjecture":"nope"},{"conjecture":"growth","n":30}]"#).unwrap();
        let rep = run_campaign(&Registry::standard(), &c, &CampaignOptions::default());
        assert_eq!(rep.entries[0].exit_code, super::super::EXIT_INVALID);
        assert!(rep.entries[1].report.is_some());
        assert_eq!(rep.exit_code, super::super::EXIT_INVALID);
    }
}
