//! The standard verifiers, one per conjecture.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Condition, MatrixStats, Outcome, Params, Quantity, Tier, Verifier};
use crate::complex::{FreeComplex, DEFAULT_CUTOFF, UNTRUSTED_STRATA};
use crate::dg::trc_complex_with;
use crate::error::{Error, Result};
use crate::exterior::{masks_of_degree, sl2_check, ExteriorAlgebra};
use crate::field::{lefschetz_guard, Field, FieldChoice, PrimeField};
use crate::koszul::carlsson_complex_paired;
use crate::resolution::{
    avramov_complex_paired, minimal_resolve, numerator_from_profile, predicted_poincare, regular_ring_complex,
    standard_pairs, PoincareData, ResolveInput,
};
use crate::ring::Ring;
use crate::series::{binomial, binomial_u64, expand_rational, growth_checks};
use crate::with_field;

/// Homology window used by the regular-ring verifiers when none is given.
pub const REGULAR_RING_CUTOFF: i64 = 12;

fn field_choice(p: &Params) -> Result<FieldChoice> {
    FieldChoice::from_characteristic(p.p.expect("resolved"))
}

fn r_of(p: &Params) -> usize {
    p.r.expect("resolved")
}

fn pairs_of(p: &Params) -> &[(usize, usize)] {
    p.pairs.as_deref().expect("resolved")
}

/// Explicit pairs, or the first `pairing` consecutive pairs, or `default_m`.
fn resolve_pairs(params: &Params, r: usize, default_m: usize) -> Result<Vec<(usize, usize)>> {
    let pairs = match (&params.pairs, params.pairing) {
        (Some(_), Some(_)) => return Err(Error::Precondition("give either pairs or pairing, not both".into())),
        (Some(p), None) => p.clone(),
        (None, m) => {
            let m = m.unwrap_or(default_m);
            if 2 * m > r {
                return Err(Error::Precondition(format!("{m} pairs need {} variables, have {r}", 2 * m)));
            }
            standard_pairs(m)
        }
    };
    let mut seen = 0u64;
    for &(a, b) in &pairs {
        if a >= r || b >= r || a == b || (seen >> a) & 1 == 1 || (seen >> b) & 1 == 1 {
            return Err(Error::Precondition(format!("pairs {pairs:?} are not disjoint pairs among {r} variables")));
        }
        seen |= 1 << a | 1 << b;
    }
    Ok(pairs)
}

fn resolve_exponents(params: &Params, r: usize, default: u32) -> Result<Vec<u32>> {
    match params.exponents.as_deref() {
        None => Ok(vec![default; r]),
        Some([a]) => Ok(vec![*a; r]),
        Some(v) if v.len() == r => Ok(v.to_vec()),
        Some(v) => Err(Error::Precondition(format!("{} exponents given for {r} variables", v.len()))),
    }
}

/// `r` from the parameters, or from a full exponent list, or `default`.
fn resolve_r(params: &Params, default: usize) -> usize {
    params.r.unwrap_or(match params.exponents.as_deref() {
        Some(v) if v.len() > 1 => v.len(),
        _ => default,
    })
}

/// Profile total for `m` hyperbolic pairs among `d` generators.
fn profile_total(m: usize, d: usize) -> BigInt {
    binomial(2 * m as i64 + 2, m as i64 + 1) << (d - 2 * m)
}

fn complex_stats<F: Field>(c: &FreeComplex<F>) -> MatrixStats {
    let mut s = MatrixStats::default();
    for i in c.low() + 1..=c.high() {
        if let Some(m) = c.d(i) {
            s.record(m.rows(), m.cols(), m.nonzero_entries());
        }
    }
    s.k_dim = c.ring().kdim().map(|k| k * c.total_rank());
    s
}

fn with_estimate(seconds: f64) -> String {
    if seconds < 1.0 {
        "under 1 s".into()
    } else {
        format!("about {seconds:.0} s")
    }
}

pub struct CarlssonVerifier;

impl CarlssonVerifier {
    fn k_dim(p: &Params) -> f64 {
        let e: f64 = p.exponents.as_ref().expect("resolved").iter().map(|&a| a as f64).product();
        2.0 * e * (1u64 << r_of(p)) as f64
    }
}

impl Verifier for CarlssonVerifier {
    fn name(&self) -> &'static str {
        "carlsson"
    }
    fn summary(&self) -> &'static str {
        "total homology of cone(λ_z) over k[t]/(t^a) against 2^r"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        params.only(self.name(), &["p", "r", "exponents", "pairs", "pairing"])?;
        let r = resolve_r(params, 8);
        let p = params.p.unwrap_or(3);
        let pairs = resolve_pairs(params, r, (r / 2).min(4))?;
        lefschetz_guard(p, pairs.len())?;
        Ok(Params {
            p: Some(p),
            r: Some(r),
            exponents: Some(resolve_exponents(params, r, 2)?),
            pairs: Some(pairs),
            tier: params.tier,
            ..Default::default()
        })
    }
    fn required_tier(&self, p: &Params) -> Tier {
        if Self::k_dim(p) > 131072.0 {
            Tier::Slow
        } else {
            Tier::Fast
        }
    }
    fn estimate(&self, p: &Params) -> String {
        with_estimate(Self::k_dim(p) * 1.2e-6)
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        with_field!(field_choice(p)?, f => carlsson(f, p.exponents.as_ref().unwrap(), pairs_of(p)))
    }
}

fn carlsson<F: Field>(f: F, exps: &[u32], pairs: &[(usize, usize)]) -> Result<Outcome> {
    let r = exps.len();
    let ring = Arc::new(Ring::complete_intersection(f, exps.to_vec())?);
    let cc = carlsson_complex_paired(ring, pairs)?;
    let h = cc.complex.homology(None)?;
    let profile = cc.predicted_profile()?;
    let kh = cc.koszul.complex().homology(None)?;
    let koszul_lengths: Vec<usize> = (0..=r as i64).map(|i| kh.at(i)).collect();
    let koszul_ok = koszul_lengths.iter().enumerate().all(|(i, &l)| l as u64 == binomial_u64(r as i64, i as i64));
    let homology: Vec<Value> =
        (0..h.lengths.len()).map(|k| json!({ "degree": h.low + k as i64, "length": h.lengths[k] })).collect();

    let mut details = BTreeMap::new();
    details.insert("homology_lengths".into(), Value::Array(homology));
    details.insert("koszul_homology_lengths".into(), json!(koszul_lengths));
    details.insert("exterior_profile_coker".into(), json!(profile.coker));
    details.insert("exterior_profile_ker".into(), json!(profile.ker));
    details.insert("matches_prediction".into(), json!(h.total == profile.total));
    Ok(Outcome {
        bound: Quantity::pow2(r),
        predicted: Quantity::int(profile.total),
        computed: Quantity::int(h.total),
        trusted: vec![
            Condition::new("finite-dimensional complex; homology computed in every degree", true),
            Condition::new("Koszul homology lengths equal C(r, i)", koszul_ok),
        ],
        details,
        stats: complex_stats(&cc.complex),
    })
}

pub struct LefschetzVerifier;

/// Largest number of degree-two monomials for an exhaustive survey.
const MAX_EXHAUSTIVE_TERMS: usize = 16;

impl Verifier for LefschetzVerifier {
    fn name(&self) -> &'static str {
        "lefschetz"
    }
    fn summary(&self) -> &'static str {
        "kernel and cokernel of λ_w on the exterior algebra against 2^d"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        params.only(self.name(), &["p", "r", "n", "pairs", "pairing", "survey"])?;
        let p = params.p.unwrap_or(0);
        if p == 2 {
            if params.n.is_some() || params.pairs.is_some() || params.pairing.is_some() {
                return Err(Error::Precondition("the characteristic-2 survey ranges over all degree-2 elements".into()));
            }
            let Some(survey) = params.survey else {
                return Err(lefschetz_guard(2, 1).unwrap_err());
            };
            let r = params.r.unwrap_or(4);
            if survey == 0 && binomial_u64(r as i64, 2) as usize > MAX_EXHAUSTIVE_TERMS {
                return Err(Error::Precondition(format!(
                    "an exhaustive survey is limited to {MAX_EXHAUSTIVE_TERMS} degree-2 monomials"
                )));
            }
            return Ok(Params { p: Some(2), r: Some(r), survey: Some(survey), tier: params.tier, ..Default::default() });
        }
        if params.survey.is_some() {
            return Err(Error::Precondition("survey applies to characteristic 2 only".into()));
        }
        let m = match (params.n, params.pairing) {
            (Some(a), Some(b)) if a != b => return Err(Error::Precondition("n and pairing disagree".into())),
            (a, b) => a.or(b),
        };
        let m_default = m.or(params.pairs.as_ref().map(Vec::len)).unwrap_or(match params.r {
            Some(r) => (r / 2).min(4),
            None => 4,
        });
        let r = params.r.unwrap_or(2 * m_default);
        let pairs = resolve_pairs(&Params { pairing: m, ..params.clone() }, r, m_default)?;
        lefschetz_guard(p, pairs.len())?;
        FieldChoice::from_characteristic(p)?;
        Ok(Params { p: Some(p), r: Some(r), n: Some(pairs.len()), pairs: Some(pairs), tier: params.tier, ..Default::default() })
    }
    fn required_tier(&self, p: &Params) -> Tier {
        if r_of(p) > 20 {
            Tier::Slow
        } else {
            Tier::Fast
        }
    }
    fn estimate(&self, p: &Params) -> String {
        with_estimate((1u64 << r_of(p)) as f64 * 2e-6)
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        if p.p == Some(2) {
            return char2_survey(r_of(p), p.survey.unwrap());
        }
        with_field!(field_choice(p)?, f => lefschetz(f, r_of(p), pairs_of(p)))
    }
}

fn lefschetz<F: Field>(f: F, d: usize, pairs: &[(usize, usize)]) -> Result<Outcome> {
    let alg = ExteriorAlgebra::new(f.clone(), d)?;
    let w = alg.paired_w(pairs)?;
    let mut stats = MatrixStats::default();
    for m in alg.lefschetz_matrices(&w)? {
        stats.record(m.rows(), m.cols(), m.nnz());
    }
    let profile = alg.lefschetz_profile(&w)?;
    let n = pairs.len();
    let table: Vec<Value> = (0..profile.ranks.len())
        .map(|i| {
            json!({
                "i": i,
                "rank": profile.ranks[i],
                "injective": profile.injective(i),
                "surjective": profile.surjective(i),
            })
        })
        .collect();

    let mut details = BTreeMap::new();
    details.insert("hilbert_series_coker".into(), json!(profile.coker_series.to_string()));
    details.insert("hilbert_series_ker".into(), json!(profile.ker_series.to_string()));
    details.insert("degreewise".into(), Value::Array(table));
    if d == 2 * n {
        let pattern =
            (0..profile.ranks.len()).all(|i| (i + 1 > n || profile.injective(i)) && (i + 1 < n || profile.surjective(i)));
        details.insert("injective_below_n_surjective_above".into(), json!(pattern));
        if f.characteristic() == 0 && n <= 3 && pairs == standard_pairs(n).as_slice() {
            let s = sl2_check(f, n)?;
            details.insert("sl2".into(), json!(s));
        }
    }
    Ok(Outcome {
        bound: Quantity::pow2(d),
        predicted: Quantity::int(profile_total(n, d)),
        computed: Quantity::int(profile.total),
        trusted: vec![Condition::new("exact ranks of every component of λ_w", true)],
        details,
        stats,
    })
}

fn char2_survey(d: usize, survey: usize) -> Result<Outcome> {
    let f = PrimeField::new(2)?;
    let alg = ExteriorAlgebra::new(f, d)?;
    let monos = masks_of_degree(d, 2);
    let t = monos.len();
    let element = |bits: u64| {
        let mut w = alg.zero();
        for (j, &m) in monos.iter().enumerate() {
            if (bits >> j) & 1 == 1 {
                w = alg.add(&w, &alg.basis_element(m, f.one()));
            }
        }
        w
    };
    let subsets: Vec<u64> = if survey == 0 {
        (0..1u64 << t).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc4a2 ^ d as u64);
        let mask = if t >= 64 { u64::MAX } else { (1u64 << t) - 1 };
        (0..survey).map(|_| rng.gen::<u64>() & mask).collect()
    };
    let mut min = usize::MAX;
    let mut argmin = 0u64;
    for &s in &subsets {
        let total = alg.lefschetz_profile(&element(s))?.total;
        if total < min {
            min = total;
            argmin = s;
        }
    }
    let scope = if survey == 0 {
        format!("exhaustive over all {} degree-2 elements", subsets.len())
    } else {
        format!("{} sampled degree-2 elements, fixed seed", subsets.len())
    };
    let mut details = BTreeMap::new();
    details.insert("elements".into(), json!(subsets.len()));
    details.insert("minimizer".into(), json!(alg.to_json(&element(argmin))));
    Ok(Outcome {
        bound: Quantity::pow2(d),
        predicted: Quantity::pow2(d),
        computed: Quantity::int(min),
        trusted: vec![Condition::new(scope, true)],
        details,
        stats: MatrixStats::default(),
    })
}

/// Shared parameters of the regular-ring verifiers.
fn resolve_regular(name: &str, params: &Params) -> Result<Params> {
    params.only(name, &["p", "r", "pairs", "pairing", "cutoff"])?;
    let r = params.r.unwrap_or(8);
    let p = params.p.unwrap_or(3);
    let pairs = resolve_pairs(params, r, (r / 2).min(4))?;
    lefschetz_guard(p, pairs.len())?;
    let cutoff = params.cutoff.unwrap_or(REGULAR_RING_CUTOFF);
    if cutoff < UNTRUSTED_STRATA {
        return Err(Error::Precondition(format!("cutoff must be at least {UNTRUSTED_STRATA}")));
    }
    Ok(Params { p: Some(p), r: Some(r), pairs: Some(pairs), cutoff: Some(cutoff), tier: params.tier, ..Default::default() })
}

fn regular_tier(p: &Params) -> Tier {
    if p.cutoff.unwrap() > REGULAR_RING_CUTOFF || r_of(p) > 8 {
        Tier::Slow
    } else {
        Tier::Fast
    }
}

fn regular_estimate(p: &Params) -> String {
    let r = r_of(p) as i32;
    with_estimate(12.0 * 3.7f64.powi((p.cutoff.unwrap() - REGULAR_RING_CUTOFF) as i32) * 4f64.powi(r - 8))
}

fn regular_minimal<F: Field>(f: F, r: usize, pairs: &[(usize, usize)]) -> Result<FreeComplex<F>> {
    let ring = Arc::new(Ring::polynomial(f, r, 1)?);
    regular_ring_complex(ring, pairs)?.minimize()
}

pub struct RankVerifier;

impl Verifier for RankVerifier {
    fn name(&self) -> &'static str {
        "rank"
    }
    fn summary(&self) -> &'static str {
        "total rank of a minimal complex over k[t_1..t_r] with nonzero finite homology against 2^r"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        resolve_regular(self.name(), params)
    }
    fn required_tier(&self, p: &Params) -> Tier {
        regular_tier(p)
    }
    fn estimate(&self, p: &Params) -> String {
        regular_estimate(p)
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        with_field!(field_choice(p)?, f => rank(f, r_of(p), pairs_of(p), p.cutoff.unwrap()))
    }
}

fn rank<F: Field>(f: F, r: usize, pairs: &[(usize, usize)], cutoff: i64) -> Result<Outcome> {
    let g = regular_minimal(f, r, pairs)?;
    let h = g.homology(Some(cutoff))?;
    let trusted_strata: Vec<Value> = h
        .strata
        .iter()
        .filter(|e| e.trusted)
        .map(|e| json!({ "hom": e.hom, "internal": e.internal, "length": e.length }))
        .collect();
    let mut details = BTreeMap::new();
    details.insert("ranks".into(), json!(g.ranks()));
    details.insert("homology".into(), Value::Array(trusted_strata));
    details.insert("homology_total".into(), json!(h.total));
    details.insert("trusted_internal_degrees".into(), json!(format!("<= {}", cutoff - UNTRUSTED_STRATA)));
    Ok(Outcome {
        bound: Quantity::pow2(r),
        predicted: Quantity::int(profile_total(pairs.len(), r)),
        computed: Quantity::int(g.total_rank()),
        trusted: vec![
            Condition::new("complex is minimal", g.is_minimal()),
            Condition::new(format!("homology nonzero in internal degrees <= {}", cutoff - UNTRUSTED_STRATA), h.total > 0),
            Condition::new(
                format!("no homology in internal degrees {}..={cutoff}", cutoff - UNTRUSTED_STRATA + 1),
                !h.untrusted_nonzero(),
            ),
        ],
        details,
        stats: complex_stats(&g),
    })
}

pub struct DifferentialModuleVerifier;

impl Verifier for DifferentialModuleVerifier {
    fn name(&self) -> &'static str {
        "differential-module"
    }
    fn summary(&self) -> &'static str {
        "rank of a free flag differential module with nonzero finite homology against 2^r"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        resolve_regular(self.name(), params)
    }
    fn required_tier(&self, p: &Params) -> Tier {
        regular_tier(p)
    }
    fn estimate(&self, p: &Params) -> String {
        regular_estimate(p)
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        with_field!(field_choice(p)?, f => differential_module(f, r_of(p), pairs_of(p), p.cutoff.unwrap()))
    }
}

fn differential_module<F: Field>(f: F, r: usize, pairs: &[(usize, usize)], cutoff: i64) -> Result<Outcome> {
    let g = regular_minimal(f, r, pairs)?;
    let dm = g.compress();
    let ring = dm.ring().clone();
    let square_zero = ring.mat_mul(dm.d(), dm.d())?.is_zero();
    let flag = dm.flag_witness_holds();
    let len = dm.homology_length(Some(cutoff))?;
    let mut stats = MatrixStats::default();
    stats.record(dm.rank(), dm.rank(), dm.d().nonzero_entries());
    let mut details = BTreeMap::new();
    details.insert("flag".into(), json!(dm.flag()));
    details.insert("homology_length".into(), json!(len));
    Ok(Outcome {
        bound: Quantity::pow2(r),
        predicted: Quantity::int(profile_total(pairs.len(), r)),
        computed: Quantity::int(dm.rank()),
        trusted: vec![
            Condition::new("D^2 = 0", square_zero),
            Condition::new("free flag: D maps each block into the earlier ones", flag),
            Condition::new(format!("homology nonzero in internal degrees <= {}", cutoff - UNTRUSTED_STRATA), len > 0),
        ],
        details,
        stats,
    })
}

pub struct TrcVerifier;

impl Verifier for TrcVerifier {
    fn name(&self) -> &'static str {
        "trc"
    }
    fn summary(&self) -> &'static str {
        "fiber rank of a semifree DG module over k[t_1..t_d] with finite cohomology against 2^d"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        params.only(self.name(), &["p", "r", "pairs", "pairing", "cutoff"])?;
        let r = params.r.unwrap_or(8);
        if r < 2 {
            return Err(Error::Precondition("need d >= 2".into()));
        }
        let p = params.p.unwrap_or(3);
        let pairs = resolve_pairs(params, r, (r / 2).min(4))?;
        lefschetz_guard(p, pairs.len())?;
        let cutoff = params.cutoff.unwrap_or(DEFAULT_CUTOFF);
        Ok(Params { p: Some(p), r: Some(r), pairs: Some(pairs), cutoff: Some(cutoff), tier: params.tier, ..Default::default() })
    }
    fn required_tier(&self, p: &Params) -> Tier {
        if p.cutoff.unwrap() > DEFAULT_CUTOFF || r_of(p) > 8 {
            Tier::Slow
        } else {
            Tier::Fast
        }
    }
    fn estimate(&self, p: &Params) -> String {
        let r = r_of(p) as i32;
        with_estimate(6.0 * 1.9f64.powi((p.cutoff.unwrap() - DEFAULT_CUTOFF) as i32) * 4f64.powi(r - 8))
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        with_field!(field_choice(p)?, f => trc(f, r_of(p), pairs_of(p), p.cutoff.unwrap()))
    }
}

fn trc<F: Field>(f: F, d: usize, pairs: &[(usize, usize)], cutoff: i64) -> Result<Outcome> {
    let x = trc_complex_with(d, f, pairs, false)?;
    let coh = x.cohomology(cutoff)?;
    let fiber = x.fiber_rank();
    let mut stats = MatrixStats::default();
    stats.record(x.rank(), x.rank(), x.d().nonzero_entries());
    let by_upper: BTreeMap<String, usize> = coh.by_upper.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let mut details = BTreeMap::new();
    details.insert("cohomology_by_upper_degree".into(), json!(by_upper));
    details.insert("trusted_internal_degrees".into(), json!(format!("<= {}", coh.trusted_upto)));
    let total: usize = coh.by_upper.values().sum();
    Ok(Outcome {
        bound: Quantity::pow2(d),
        predicted: Quantity::int(profile_total(pairs.len(), d)),
        computed: Quantity::int(fiber),
        trusted: vec![
            Condition::new("semifree flag", x.semifree_flag_holds()?),
            Condition::new(format!("cohomology nonzero in internal degrees <= {}", coh.trusted_upto), total > 0),
            Condition::new(
                format!("no cohomology in internal degrees {}..={cutoff}", coh.trusted_upto + 1),
                coh.strata.iter().all(|s| s.trusted),
            ),
        ],
        details,
        stats,
    })
}

pub struct BettiDegreeVerifier;

/// Trusted Betti numbers required before the prefix check counts.
const MIN_TRUSTED_BETTI: usize = 4;

impl Verifier for BettiDegreeVerifier {
    fn name(&self) -> &'static str {
        "betti-degree"
    }
    fn summary(&self) -> &'static str {
        "Betti degree of a module over a complete intersection against 2^(c-1)"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        params.only(self.name(), &["p", "r", "exponents", "pairs", "pairing", "truncate"])?;
        let r = resolve_r(params, 8);
        let p = params.p.unwrap_or(3);
        let pairs = resolve_pairs(params, r, (r / 2).min(4))?;
        lefschetz_guard(p, pairs.len())?;
        let exponents = resolve_exponents(params, r, 3)?;
        if exponents.iter().any(|&a| a < 3) {
            return Err(Error::Precondition("relations must have order >= 3 (all exponents >= 3)".into()));
        }
        let truncate = params.truncate.unwrap_or(if r <= 4 { 10 } else { 5 });
        if truncate < 2 {
            return Err(Error::Precondition("truncate must be at least 2".into()));
        }
        Ok(Params {
            p: Some(p),
            r: Some(r),
            exponents: Some(exponents),
            pairs: Some(pairs),
            truncate: Some(truncate),
            tier: params.tier,
            ..Default::default()
        })
    }
    fn required_tier(&self, p: &Params) -> Tier {
        if r_of(p) >= 8 || p.truncate.unwrap() > 12 {
            Tier::Slow
        } else {
            Tier::Fast
        }
    }
    fn estimate(&self, p: &Params) -> String {
        let r = r_of(p) as i32;
        let n = p.truncate.unwrap() as i32;
        with_estimate(0.5 * 3f64.powi(r - 8) * 3f64.powi(n - 5))
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        with_field!(field_choice(p)?, f => betti_degree(f, p.exponents.as_ref().unwrap(), pairs_of(p), p.truncate.unwrap()))
    }
}

fn betti_degree<F: Field>(f: F, exps: &[u32], pairs: &[(usize, usize)], n: usize) -> Result<Outcome> {
    let e = exps.len();
    let alg = ExteriorAlgebra::new(f.clone(), e)?;
    let profile = alg.lefschetz_profile(&alg.paired_w(pairs)?)?;
    let numerator = numerator_from_profile(&profile);
    let poincare = PoincareData::new(numerator.clone(), e)?;

    let ring = Arc::new(Ring::complete_intersection(f, exps.to_vec())?);
    let order3 = ring.order_at_least_three();
    let fc = avramov_complex_paired(ring, pairs, n)?;
    let (_, betti) = minimal_resolve(ResolveInput::Complex(&fc), n)?;
    let expansion = expand_rational(&numerator, e, n + 1)?;
    let trusted = betti.trusted();
    let prefix_ok = trusted.iter().zip(&expansion.coeffs).all(|(&b, c)| BigInt::from(b) == *c);

    let mut details = BTreeMap::new();
    details.insert("numerator".into(), json!(numerator.to_string()));
    details.insert("complexity".into(), json!(e));
    details.insert("betti".into(), json!(betti.values));
    details.insert("trusted_betti_upto".into(), json!(betti.trusted_upto));
    details.insert(
        "series_prefix".into(),
        json!(expansion.coeffs.iter().take(n + 1).map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    if e >= 8 && pairs == standard_pairs(4).as_slice() {
        details.insert("matches_closed_form".into(), json!(predicted_poincare(e)?.numerator == numerator));
    }
    let m = pairs.len();
    let predicted = BigRational::new(profile_total(m, e), BigInt::from(2));
    Ok(Outcome {
        bound: Quantity::pow2(e - 1),
        predicted: Quantity::rational(predicted),
        computed: Quantity::rational(poincare.betti_degree.clone()),
        trusted: vec![
            Condition::new("relations of order >= 3", order3),
            Condition::new(
                format!("β_0..β_{} agree with the expansion of p(t)/(1-t^2)^{e}", trusted.len().saturating_sub(1)),
                prefix_ok,
            ),
            Condition::new(
                format!("at least {MIN_TRUSTED_BETTI} trusted Betti numbers (have {})", trusted.len()),
                trusted.len() >= MIN_TRUSTED_BETTI,
            ),
        ],
        details,
        stats: complex_stats(&fc),
    })
}

pub struct GrowthVerifier;

/// The exponential base certified for the central binomial totals.
pub const GROWTH_CONSTANT: &str = "1.9605";

impl Verifier for GrowthVerifier {
    fn name(&self) -> &'static str {
        "growth"
    }
    fn summary(&self) -> &'static str {
        "min over n of C(2n+2,n+1)^(1/2n) against the base 2"
    }
    fn resolve(&self, params: &Params) -> Result<Params> {
        params.only(self.name(), &["n"])?;
        let n = params.n.unwrap_or(200);
        if n < 5 {
            return Err(Error::Precondition(format!("n must be at least 5, got {n}")));
        }
        Ok(Params { n: Some(n), tier: params.tier, ..Default::default() })
    }
    fn required_tier(&self, p: &Params) -> Tier {
        if p.n.unwrap() > 2000 {
            Tier::Slow
        } else {
            Tier::Fast
        }
    }
    fn estimate(&self, p: &Params) -> String {
        let n = p.n.unwrap() as f64;
        with_estimate(n * n * 1e-5)
    }
    fn run(&self, p: &Params) -> Result<Outcome> {
        let g = growth_checks(p.n.unwrap() as u64)?;
        let mut details = BTreeMap::new();
        details.insert("central_failures".into(), json!(g.central_failures));
        details.insert("min_root_n".into(), json!(g.min_root_n));
        details.insert("min_root_enclosure".into(), json!([g.min_root_lower, g.min_root_upper]));
        Ok(Outcome {
            bound: Quantity::int(2),
            predicted: Quantity::parse(GROWTH_CONSTANT)?,
            computed: Quantity::parse(&g.min_root_upper)?,
            trusted: vec![
                Condition::new("C(2n+2,n+1) < 2^(2n) fails exactly for n <= 3", g.central_pattern_ok()),
                Condition::new("Stirling-form bound certified for every n", g.stirling_all_hold()),
                Condition::new(format!("min root < {GROWTH_CONSTANT} by exact integer powers"), g.min_root_below_bound),
            ],
            details,
            stats: MatrixStats::default(),
        })
    }
}
