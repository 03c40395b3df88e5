//! Properties of the Koszul, Carlsson, resolution and DG constructions.

use std::sync::Arc;

use ffcx_core::complex::expand::{expand, Layout, StrataCache};
use ffcx_core::complex::{FreeComplex, RingMatrix};
use ffcx_core::dg::trc_complex;
use ffcx_core::exterior::ExteriorAlgebra;
use ffcx_core::field::{Field, PrimeField};
use ffcx_core::koszul::{carlsson_complex_paired, koszul, KoszulChain};
use ffcx_core::linalg::SparseMatrix;
use ffcx_core::resolution::{
    avramov_complex, minimal_resolve, numerator_from_profile, predicted_poincare, tensor_resolution_of_k, ResolveInput,
};
use ffcx_core::ring::Ring;
use ffcx_core::series::{recover_numerator, Recovered, TruncatedSeries};
use proptest::prelude::*;

fn gf3() -> PrimeField {
    PrimeField::new(3).unwrap()
}

fn ci(a: &[u32]) -> Arc<Ring<PrimeField>> {
    Arc::new(Ring::complete_intersection(gf3(), a.to_vec()).unwrap())
}

fn chain(
    k: &ffcx_core::koszul::KoszulComplex<PrimeField>,
    degree: usize,
    picks: &[(usize, usize, i64)],
) -> KoszulChain<u32> {
    let r = k.ring();
    let basis = r.basis();
    let mut c = k.zero_chain(degree);
    if c.coeffs.is_empty() {
        return c;
    }
    for &(slot, m, v) in picks {
        let s = slot % c.coeffs.len();
        let x = r.term(basis[m % basis.len()], r.field().from_i64(v));
        c.coeffs[s] = r.add(&c.coeffs[s], &x);
    }
    c
}

fn picks() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..32, 0usize..256, -2i64..3), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn koszul_leibniz(
        a in prop::collection::vec(2u32..=4, 2..=4),
        da in 0usize..=4,
        db in 0usize..=4,
        pa in picks(),
        pb in picks(),
    ) {
        let k = koszul(ci(&a)).unwrap();
        let e = k.e();
        prop_assume!(da + db <= e);
        let r = k.ring().clone();
        let x = chain(&k, da, &pa);
        let y = chain(&k, db, &pb);
        let lhs = k.differential(&k.product(&x, &y)).unwrap();
        // d vanishes on degree zero, so those Leibniz terms drop out
        let mut terms = Vec::new();
        if da > 0 {
            terms.push(k.product(&k.differential(&x).unwrap(), &y));
        }
        if db > 0 {
            let mut x_dy = k.product(&x, &k.differential(&y).unwrap());
            if da % 2 == 1 {
                x_dy.coeffs = x_dy.coeffs.iter().map(|c| r.neg(c)).collect();
            }
            terms.push(x_dy);
        }
        match terms.len() {
            0 => prop_assert!(lhs.coeffs.iter().all(|c| c.is_zero())),
            1 => prop_assert_eq!(&lhs.coeffs, &terms[0].coeffs),
            _ => prop_assert_eq!(&lhs.coeffs, &k.add(&terms[0], &terms[1]).unwrap().coeffs),
        }
    }
}

/// Every homology class of `c` is killed by each variable: `t_j Z_i ⊆ B_i`.
fn homology_killed_by_variables(c: &FreeComplex<PrimeField>) -> bool {
    let r = c.ring().clone();
    let f = *r.field();
    let mut cache = StrataCache::default();
    for i in c.low()..=c.high() {
        let n = c.rank_at(i);
        if n == 0 {
            continue;
        }
        let here = Layout::full(&r, n);
        let out = c.d_or_zero(i);
        let z = if out.rows() == 0 {
            SparseMatrix::identity(f, here.dim())
        } else {
            expand(&r, &out, &here, &Layout::full(&r, out.rows()), &mut cache).kernel_basis()
        };
        let inc = c.d_or_zero(i + 1);
        let b = if inc.cols() == 0 {
            SparseMatrix::zeros(f, here.dim(), 0)
        } else {
            expand(&r, &inc, &Layout::full(&r, inc.cols()), &here, &mut cache)
        };
        let rb = b.rank();
        for j in 0..r.nvars() {
            let mut t = RingMatrix::zeros(n, n);
            for g in 0..n {
                t.set(g, g, r.var(j));
            }
            let tz = expand(&r, &t, &here, &here, &mut cache).mul(&z).unwrap();
            if b.hstack(&tz).unwrap().rank() != rb {
                return false;
            }
        }
    }
    true
}

#[test]
fn carlsson_cones_match_prediction() {
    let cases: &[(&[u32], &[(usize, usize)])] = &[
        (&[2, 2], &[(0, 1)]),
        (&[3, 2], &[(0, 1)]),
        (&[2, 3, 2], &[(0, 2)]),
        (&[3, 3, 3], &[(1, 2)]),
        (&[2, 2, 2, 2], &[(0, 1), (2, 3)]),
        (&[2, 3, 2, 3], &[(0, 3), (1, 2)]),
        (&[2, 2, 2, 2, 2], &[(0, 4), (1, 3)]),
        (&[2, 2, 2, 2, 2, 2], &[(0, 1), (2, 3), (4, 5)]),
        (&[2, 2, 2, 2, 2, 2], &[(0, 5), (1, 4)]),
    ];
    for &(a, pairs) in cases {
        let e = a.len() as i64;
        // λ_z is checked to be a chain map while the cone is built
        let c = carlsson_complex_paired(ci(a), pairs).unwrap();
        let h = c.complex.homology(None).unwrap();
        assert_eq!(h.total, c.predicted_profile().unwrap().total, "a={a:?} pairs={pairs:?}");
        assert!(h.support().iter().all(|&i| (-2..=e + 1).contains(&i)), "a={a:?}: support {:?}", h.support());
        assert!(homology_killed_by_variables(&c.complex), "a={a:?} pairs={pairs:?}");
    }
}

#[test]
fn tensor_resolution_is_exact() {
    for a in [&[2u32][..], &[4], &[2, 3], &[3, 3], &[2, 2, 2], &[3, 2, 3]] {
        let n = 5;
        let x = tensor_resolution_of_k(ci(a), n).unwrap();
        let h = x.complex.homology(None).unwrap();
        assert_eq!(h.at(0), 1, "a={a:?}: H_0 should be k");
        for i in 1..n as i64 {
            assert_eq!(h.at(i), 0, "a={a:?}: H_{i} nonzero");
        }
    }
}

fn all_entries_in_maximal_ideal(g: &FreeComplex<PrimeField>) -> bool {
    let r = g.ring();
    (g.low() + 1..=g.high()).all(|i| g.d_or_zero(i).entries().all(|(_, _, x)| r.field().is_zero(&r.constant_term(x))))
}

#[test]
fn resolutions_recover_their_numerators() {
    for e in [2usize, 3] {
        let n = e + 7;
        let ring = ci(&vec![3; e]);
        let (g, betti) = minimal_resolve(ResolveInput::Complex(&avramov_complex(ring, n).unwrap()), n).unwrap();
        assert!(g.is_minimal() && all_entries_in_maximal_ideal(&g), "e={e}: unit entry after minimizing");
        let alg = ExteriorAlgebra::new(gf3(), e).unwrap();
        let numerator = numerator_from_profile(&alg.lefschetz_profile(&alg.standard_w(e / 2).unwrap()).unwrap());
        let series = TruncatedSeries::from_u64s(betti.trusted());
        assert_eq!(recover_numerator(&series, e, e + 1).unwrap(), Recovered::Numerator(numerator), "e={e}");
    }
}

#[test]
fn closed_form_total() {
    assert_eq!(predicted_poincare(8).unwrap().numerator.eval_at_one(), 252.into());
}

#[test]
fn dg_strata_euler_characteristics() {
    let cutoff = 14;
    for d in 2..=4 {
        let x = trc_complex(d, gf3()).unwrap();
        let coh = x.cohomology(cutoff).unwrap();
        for q in coh.window.0..=cutoff {
            assert_eq!(x.stratum_euler(q), coh.stratum_euler(q), "d={d} q={q}");
        }
        for s in coh.strata.iter().filter(|s| s.trusted) {
            assert!((0..=3).contains(&s.upper) && s.upper != 2, "d={d}: cohomology in upper degree {}", s.upper);
        }
        assert_eq!(coh.at(2), 0);
    }
}

#[test]
fn dg_fiber_rank_matches_profile() {
    for d in [2usize, 3, 4, 8] {
        let alg = ExteriorAlgebra::new(gf3(), d).unwrap();
        let total = alg.lefschetz_profile(&alg.standard_w((d / 2).min(4)).unwrap()).unwrap().total;
        assert_eq!(trc_complex(d, gf3()).unwrap().fiber_rank(), total, "d={d}");
    }
}
