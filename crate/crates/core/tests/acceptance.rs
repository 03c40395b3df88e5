//! Acceptance suite. Each test prints one PASS/FAIL line, bypassing the
//! harness capture, and then asserts. Values are exact; time limits are the
//! published runtime budgets.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ffcx_core::complex::{ComplexJson, DifferentialModule, FreeComplex};
use ffcx_core::dg::trc_complex;
use ffcx_core::exterior::{char2_floor, masks_of_degree, sl2_check, ExteriorAlgebra};
use ffcx_core::field::{is_prime, Field, PrimeField, Rationals};
use ffcx_core::koszul::{carlsson_complex, koszul};
use ffcx_core::linalg::{EliminationConfig, SparseMatrix};
use ffcx_core::resolution::{
    avramov_complex, minimal_resolve, predicted_poincare, regular_ring_complex, standard_pairs, ResolveInput,
};
use ffcx_core::ring::Ring;
use ffcx_core::series::{growth_checks, IntLaurentPoly};
use ffcx_core::verify::{run_one, Params, Registry, VerificationReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, what: &str, ok: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "[{}] {id} {what} ({:.2} s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn check(id: &str, what: &str, budget: Duration, start: Instant, failures: Vec<String>, detail: &str) {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("took {:.1} s, budget {:.0} s", elapsed.as_secs_f64(), budget.as_secs_f64()));
    }
    let ok = failures.is_empty();
    report(id, what, ok, elapsed, if ok { detail } else { "" });
    assert!(ok, "{id}: {}", failures.join("; "));
}

macro_rules! expect {
    ($fails:ident, $cond:expr, $($msg:tt)+) => {
        if !$cond {
            $fails.push(format!($($msg)+));
        }
    };
}

// ---- independent oracles ----

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn smallest_valid_prime(n: usize) -> u64 {
    (3..).step_by(2).find(|&p| is_prime(p) && 2 * p > n as u64 + 1).unwrap()
}

/// Coefficients of `num(t) / (1 - t^2)^c` through `t^len-1`.
fn expand_oracle(num: &[i64], c: u64, len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (i, &a) in num.iter().enumerate() {
        let mut k = 0;
        while i + 2 * k < len {
            out[i + 2 * k] += a * choose(k as u64 + c - 1, c - 1) as i64;
            k += 1;
        }
    }
    out
}

fn dense_rank_mod(p: i64, rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> usize {
    let mut a = vec![vec![0i64; cols]; rows];
    for &(r, c, v) in t {
        a[r][c] = (a[r][c] + v).rem_euclid(p);
    }
    let inv = |x: i64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * iv % p;
                for k in 0..cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn poly(start: i64, c: &[i64]) -> IntLaurentPoly {
    IntLaurentPoly::from_coeffs(start, c.iter().copied())
}

// ---- exterior algebra ----

#[test]
fn a01_lefschetz_profile_d8() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let h = [1i64, 8, 27, 48, 42];
    let coker = poly(-2, &h);
    let ker = poly(4, &[42, 48, 27, 8, 1]);
    fn run<F: Field>(f: F) -> ffcx_core::exterior::LefschetzProfile {
        let alg = ExteriorAlgebra::new(f, 8).unwrap();
        let w = alg.standard_w(4).unwrap();
        alg.lefschetz_profile(&w).unwrap()
    }
    for (name, p) in [("QQ", run(Rationals)), ("GF(3)", run(gf(3)))] {
        expect!(fails, p.total == 252, "{name}: total {}", p.total);
        expect!(fails, p.coker.iter().sum::<usize>() + p.ker.iter().sum::<usize>() == 256 - 4, "{name}: sum");
        expect!(fails, p.coker_series == coker, "{name}: coker series {}", p.coker_series);
        expect!(fails, p.ker_series == ker, "{name}: ker series {}", p.ker_series);
    }
    check("01", "Lefschetz profile d=8 over QQ and GF(3)", Duration::from_secs(1), start, fails, "total 252 = 2^8 - 4");
}

#[test]
fn a02_degreewise_injective_surjective() {
    let start = Instant::now();
    let mut fails = Vec::new();
    fn ranks<F: Field>(f: F, n: usize) -> (Vec<usize>, usize) {
        let alg = ExteriorAlgebra::new(f, 2 * n).unwrap();
        let p = alg.lefschetz_profile(&alg.standard_w(n).unwrap()).unwrap();
        (p.ranks, p.total)
    }
    let totals = [6usize, 20, 70, 252, 924];
    for n in 1..=5usize {
        let p = smallest_valid_prime(n);
        for (label, (r, total)) in [("QQ".to_string(), ranks(Rationals, n)), (format!("GF({p})"), ranks(gf(p), n))] {
            let d = 2 * n as u64;
            for (i, &rk) in r.iter().enumerate() {
                let i64_ = i as u64;
                if i < n {
                    expect!(fails, rk as u64 == choose(d, i64_), "n={n} {label}: not injective in degree {i}");
                }
                if i + 1 >= n {
                    expect!(fails, rk as u64 == choose(d, i64_ + 2), "n={n} {label}: not surjective in degree {i}");
                }
            }
            expect!(fails, total == totals[n - 1], "n={n} {label}: total {total}");
            expect!(fails, total as u64 == choose(2 * n as u64 + 2, n as u64 + 1), "n={n} {label}: central binomial");
        }
    }
    check("02", "injective below n-1, surjective from n-1, n=1..5", Duration::from_secs(30), start, fails, "totals 6 20 70 252 924");
}

#[test]
fn a03_char2_floor() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let f = gf(2);
    let mut minimum = BTreeMap::new();
    for (d, sample) in [(4usize, None), (6, Some(1000usize))] {
        let alg = ExteriorAlgebra::new(f, d).unwrap();
        let monos = masks_of_degree(d, 2);
        let elem = |bits: u64| {
            let mut w = alg.zero();
            for (j, &m) in monos.iter().enumerate() {
                if (bits >> j) & 1 == 1 {
                    w = alg.add(&w, &alg.basis_element(m, f.one()));
                }
            }
            w
        };
        let subsets: Vec<u64> = match sample {
            None => (0..1u64 << monos.len()).collect(),
            Some(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(2024);
                (0..k).map(|_| rng.gen::<u64>() & ((1 << monos.len()) - 1)).collect()
            }
        };
        if sample.is_none() {
            expect!(fails, subsets.len() == 64, "d=4 should have 64 elements");
        }
        let mut lo = usize::MAX;
        for s in subsets {
            let t = char2_floor(&alg, &elem(s)).unwrap();
            lo = lo.min(t);
        }
        expect!(fails, lo >= 1 << d, "d={d}: total {lo} below 2^{d}");
        minimum.insert(d, lo);
    }
    check(
        "03",
        "characteristic 2 floor: d=4 exhaustive, d=6 sampled",
        Duration::from_secs(60),
        start,
        fails,
        &format!("minimum totals {minimum:?}"),
    );
}

// ---- complete intersections ----

#[test]
fn a04_carlsson_e8_brute_force() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let ring = Arc::new(Ring::uniform_ci(gf(3), 8, 2).unwrap());
    let cc = carlsson_complex(ring.clone(), 4).unwrap();
    let kdim = ring.kdim().unwrap() * cc.complex.total_rank();
    expect!(fails, kdim == 131072, "k-dimension {kdim}");
    let h = cc.complex.homology(None).unwrap();
    expect!(fails, h.total == 252, "total homology {}", h.total);
    expect!(fails, h.total == 256 - 4, "not 2^8 - 2^2");
    check("04", "cone(λ_z) over GF(3)[t1..t8]/(t_i^2), m=4", Duration::from_secs(300), start, fails, "total 252");
}

#[test]
fn a05_carlsson_oracle_consistency() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let cases: [(usize, u32, u64); 3] = [(2, 3, 6), (4, 3, 20), (6, 2, 70)];
    for (r, a, oracle) in cases {
        let m = (r / 2).min(4);
        let ring = Arc::new(Ring::uniform_ci(gf(3), r, a).unwrap());
        let cc = carlsson_complex(ring, m).unwrap();
        let brute = cc.complex.homology(None).unwrap().total;
        let predicted = cc.predicted_profile().unwrap().total;
        let formula = choose(2 * m as u64 + 2, m as u64 + 1) << (r - 2 * m);
        expect!(fails, brute == predicted, "r={r}: brute {brute} vs profile {predicted}");
        expect!(fails, brute as u64 == oracle && formula == oracle, "r={r}: {brute} vs {oracle}");
    }
    check("05", "brute-force homology equals exterior prediction", Duration::from_secs(180), start, fails, "r=2,4,6 -> 6,20,70");
}

#[test]
fn a06_koszul_homology() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for r in 1..=6usize {
        let patterns: [Vec<u32>; 3] = [vec![2; r], vec![3; r], (0..r).map(|i| 2 + (i % 2) as u32).collect()];
        for a in patterns {
            let ring = Arc::new(Ring::complete_intersection(gf(3), a.clone()).unwrap());
            let h = koszul(ring).unwrap().complex().homology(None).unwrap();
            for i in 0..=r {
                expect!(fails, h.at(i as i64) as u64 == choose(r as u64, i as u64), "a={a:?}: H_{i} = {}", h.at(i as i64));
            }
            expect!(fails, h.total == 1 << r, "a={a:?}: total {}", h.total);
        }
    }
    check("06", "Koszul homology lengths C(r,i), r<=6", Duration::from_secs(120), start, fails, "total 2^r");
}

// ---- regular ring, differential module ----

const REGULAR_CUTOFF: i64 = 12;

fn regular_g() -> FreeComplex<PrimeField> {
    let ring = Arc::new(Ring::polynomial(gf(3), 8, 1).unwrap());
    regular_ring_complex(ring, &standard_pairs(4)).unwrap().minimize().unwrap()
}

#[test]
fn a07_regular_ring_total_rank() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let g = regular_g();
    expect!(fails, g.ranks() == [1, 8, 27, 48, 42, 42, 48, 27, 8, 1], "ranks {:?}", g.ranks());
    expect!(fails, g.total_rank() == 252 && g.total_rank() < 256, "total {}", g.total_rank());
    expect!(fails, g.is_minimal(), "not minimal");
    let h = g.homology(Some(REGULAR_CUTOFF)).unwrap();
    expect!(fails, h.at(0) == 1 && h.at(1) == 1, "H_0 = {}, H_1 = {}", h.at(0), h.at(1));
    expect!(fails, h.support() == [0, 1], "homology support {:?}", h.support());
    expect!(fails, !h.untrusted_nonzero(), "homology near the cutoff");
    check(
        "07",
        "minimize(Σcone(ζ)) over GF(3)[t1..t8]",
        Duration::from_secs(300),
        start,
        fails,
        "ranks [1,8,27,48,42,42,48,27,8,1], H = k in degrees 0 and 1",
    );
}

#[test]
fn a08_differential_module() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let g = regular_g();
    let dm = g.compress();
    let ring = dm.ring().clone();
    expect!(fails, dm.rank() == 252, "rank {}", dm.rank());
    expect!(fails, ring.mat_mul(dm.d(), dm.d()).unwrap().is_zero(), "D^2 != 0");
    expect!(
        fails,
        DifferentialModule::new(ring.clone(), dm.d().clone(), dm.flag().to_vec(), None).is_ok(),
        "validated constructor rejects the module"
    );
    expect!(fails, dm.flag_witness_holds(), "free flag witness fails");
    let len = dm.homology_length(Some(REGULAR_CUTOFF)).unwrap();
    expect!(fails, len == 2, "homology length {len}");
    check("08", "compression: rank 252, D^2 = 0, free flag, length 2", Duration::from_secs(60), start, fails, "");
}

// ---- Betti numbers ----

#[test]
fn a09_poincare_and_betti_prefix() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let pd = predicted_poincare(8).unwrap();
    let num = [1i64, 8, 27, 48, 42, 42, 48, 27, 8, 1];
    expect!(fails, pd.numerator == poly(0, &num), "numerator {}", pd.numerator);
    expect!(fails, pd.numerator.eval_at_one() == BigInt::from(252), "p(1)");
    expect!(fails, pd.betti_degree == BigRational::from_integer(126.into()), "β-deg {}", pd.betti_degree);
    expect!(fails, pd.betti_degree < BigRational::from_integer(128.into()), "β-deg not below 2^7");

    // e = 2, 3 with one pair: numerators (1+t)^{e-2} (1 + 2t + 2t^2 + t^3)
    let numerators: [(usize, Vec<i64>); 2] = [(2, vec![1, 2, 2, 1]), (3, vec![1, 3, 4, 3, 1])];
    for (e, n) in numerators {
        let ring = Arc::new(Ring::uniform_ci(gf(3), e, 3).unwrap());
        let f = avramov_complex(ring, 10).unwrap();
        let (_, b) = minimal_resolve(ResolveInput::Complex(&f), 10).unwrap();
        let want = expand_oracle(&n, e as u64, 9);
        let got: Vec<i64> = b.values.iter().take(9).map(|&x| x as i64).collect();
        expect!(fails, b.trusted().len() >= 9, "e={e}: only {} trusted", b.trusted().len());
        expect!(fails, got == want, "e={e}: β {got:?} vs {want:?}");
    }
    let fast = start.elapsed();
    expect!(fails, fast < Duration::from_secs(120), "fast part took {:.1} s", fast.as_secs_f64());

    // e = 8 prefix (slow tier; documented runtime printed below)
    let slow = Instant::now();
    let ring = Arc::new(Ring::uniform_ci(gf(3), 8, 3).unwrap());
    let f = avramov_complex(ring, 5).unwrap();
    let (_, b) = minimal_resolve(ResolveInput::Complex(&f), 5).unwrap();
    let want = expand_oracle(&num, 8, 4);
    let got: Vec<i64> = b.trusted().iter().take(4).map(|&x| x as i64).collect();
    expect!(fails, got == [1, 8, 35, 112] && got == want, "e=8 prefix {got:?}");
    let slow_s = slow.elapsed().as_secs_f64();
    check(
        "09",
        "Poincaré numerator, β-deg 126 < 2^7, Betti prefixes",
        Duration::from_secs(600),
        start,
        fails,
        &format!("e=2,3 match to β_8; e=8 prefix [1,8,35,112] in {slow_s:.2} s"),
    );
}

// ---- DG module ----

#[test]
fn a10_dg_cohomology() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let x = trc_complex(8, gf(3)).unwrap();
    let h = x.cohomology(24).unwrap();
    let want: BTreeMap<i64, usize> = [(0, 1), (3, 1)].into_iter().collect();
    expect!(fails, h.by_upper == want, "cohomology {:?}", h.by_upper);
    expect!(fails, h.strata.iter().all(|s| s.trusted), "cohomology near the cutoff");
    expect!(fails, x.semifree_flag_holds().unwrap(), "not semifree");
    let fiber = x.fiber_rank();
    expect!(fails, fiber == 252 && fiber < 256, "fiber rank {fiber}");
    check("10", "trc_complex d=8: H^0 = k = H^3, fiber rank 252", Duration::from_secs(180), start, fails, "cutoff 24");
}

// ---- growth, sl2 ----

#[test]
fn a11_growth() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let g = growth_checks(200).unwrap();
    expect!(fails, g.central_failures == [0, 1, 2, 3], "failures {:?}", g.central_failures);
    expect!(fails, g.stirling_all_hold(), "Stirling bound not certified everywhere");
    expect!(fails, g.min_root_below_bound, "min root not below 1.9605");
    // float cross-check of the minimum
    let lc = |n: u64| -> f64 { (1..=n + 1).map(|i| ((n + 1 + i) as f64 / i as f64).ln()).sum::<f64>() / (2 * n) as f64 };
    let (best_n, best) = (1..=200u64).map(|n| (n, lc(n).exp())).fold((0, f64::MAX), |a, b| if b.1 < a.1 { b } else { a });
    expect!(fails, best < 1.9605 && (best - 1.9605).abs() < 1e-3, "float minimum {best}");
    expect!(fails, g.min_root_n == best_n, "argmin {} vs {best_n}", g.min_root_n);
    check(
        "11",
        "growth: central inequality, Stirling form, min root < 1.9605",
        Duration::from_secs(10),
        start,
        fails,
        &format!("min at n={} in [{}, {}]", g.min_root_n, g.min_root_lower, g.min_root_upper),
    );
}

#[test]
fn a12_sl2_identities() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for n in 1..=3 {
        let s = sl2_check(Rationals, n).unwrap();
        expect!(fails, s.h_diagonal, "n={n}: h not (n-j) id");
        expect!(fails, s.c_h_relation, "n={n}: [c,h] != -2c");
        expect!(fails, s.w_h_relation, "n={n}: [λ_w,h] != 2λ_w");
        expect!(fails, s.powers_isomorphic, "n={n}: λ_w^j not an isomorphism");
    }
    check("12", "sl2 identities, n=1..3, char 0", Duration::from_secs(30), start, fails, "");
}

// ---- infrastructure ----

#[test]
fn a13_infrastructure() {
    let start = Instant::now();
    let mut fails = Vec::new();

    // sparse / dense rank agreement against an independent oracle
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..60 {
        let (rows, cols) = (rng.gen_range(1..120), rng.gen_range(1..120));
        let density = rng.gen_range(0.005..0.2);
        let mut t = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    t.push((r, c, rng.gen_range(1..7i64)));
                }
            }
        }
        for p in [3u64, 5] {
            let f = gf(p);
            let trip: Vec<_> = t.iter().map(|&(r, c, v)| (r, c, f.from_i64(v))).collect();
            let m = SparseMatrix::from_accumulated(f, rows, cols, trip).unwrap();
            let (s, d) = (m.rank(), m.rank_with(&EliminationConfig::dense_only()));
            let o = dense_rank_mod(p as i64, rows, cols, &t);
            expect!(fails, s == d && d == o, "trial {trial} GF({p}): sparse {s} dense {d} oracle {o}");
        }
        if rows <= 30 && cols <= 30 {
            let trip: Vec<_> = t.iter().map(|&(r, c, v)| (r, c, Rationals.from_i64(v))).collect();
            let m = SparseMatrix::from_accumulated(Rationals, rows, cols, trip).unwrap();
            expect!(fails, m.rank() == m.rank_with(&EliminationConfig::dense_only()), "trial {trial} QQ");
        }
    }

    // minimize: idempotent, ranks independent of pivot order
    let ring = Arc::new(Ring::polynomial(gf(3), 6, 1).unwrap());
    let c = regular_ring_complex(ring, &standard_pairs(3)).unwrap();
    let ci = Arc::new(Ring::uniform_ci(gf(3), 3, 3).unwrap());
    let av = avramov_complex(ci, 6).unwrap();
    for (label, x) in [("regular r=6", &c), ("tensor e=3", &av)] {
        let g = x.minimize().unwrap();
        let gg = g.minimize().unwrap();
        expect!(fails, g.is_minimal(), "{label}: not minimal");
        expect!(fails, gg.to_json() == g.to_json(), "{label}: minimize not idempotent");
        for seed in 0..4u64 {
            let key = move |i: i64, r: usize, c: usize| -> u64 {
                let mut h = ChaCha8Rng::seed_from_u64(seed ^ (i as u64) << 40 ^ (r as u64) << 20 ^ c as u64);
                h.gen()
            };
            let shuffled = x.minimize_with(&key).unwrap();
            expect!(fails, shuffled.ranks() == g.ranks(), "{label} seed {seed}: ranks {:?}", shuffled.ranks());
        }
    }

    // serialization round trips
    let j = serde_json::to_string(&av.to_json()).unwrap();
    let back: ComplexJson = serde_json::from_str(&j).unwrap();
    let rebuilt = FreeComplex::from_json(gf(3), &back).unwrap();
    expect!(fails, serde_json::to_string(&rebuilt.to_json()).unwrap() == j, "complex JSON not bit-exact");
    let m = SparseMatrix::from_accumulated(Rationals, 2, 2, vec![(0, 0, Rationals.parse("3/7").unwrap())]).unwrap();
    let mj = serde_json::to_string(&m.to_json()).unwrap();
    let m2 = SparseMatrix::from_json(Rationals, &serde_json::from_str(&mj).unwrap()).unwrap();
    expect!(fails, serde_json::to_string(&m2.to_json()).unwrap() == mj, "matrix JSON not bit-exact");

    // reports: identical under different thread counts, JSON round trip exact
    let registry = Registry::standard();
    let params = Params { r: Some(6), exponents: Some(vec![2]), ..Default::default() };
    let mut digests = Vec::new();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let rep = pool.install(|| run_one(&registry, "carlsson", &params, None, true).unwrap());
        let text = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        expect!(fails, back == rep, "report JSON round trip");
        digests.push(rep.digest());
    }
    expect!(fails, digests[0] == digests[1], "reports differ across thread counts");
    check(
        "13",
        "sparse/dense agreement, minimize, round trips, determinism",
        Duration::from_secs(300),
        start,
        fails,
        "",
    );
}
