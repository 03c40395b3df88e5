//! Properties of free complexes over a finite complete intersection, on random
//! complexes built from elementary pieces and scrambled by base changes.

use std::collections::BTreeMap;
use std::sync::Arc;

use ffcx_core::complex::{cone, ChainMap, FreeComplex, HomologyTable, RingMatrix};
use ffcx_core::field::{Field, PrimeField};
use ffcx_core::ring::{Ring, RingElement};
use proptest::prelude::*;

const TOP: usize = 4;

type Elem = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
enum Piece {
    /// A lone generator in degree `i`.
    Single(usize),
    /// `R --x--> R` from degree `i + 1` to degree `i`.
    Pair(usize, Elem),
}

fn ring() -> Arc<Ring<PrimeField>> {
    Arc::new(Ring::complete_intersection(PrimeField::new(3).unwrap(), vec![2, 3]).unwrap())
}

fn element(r: &Ring<PrimeField>, terms: &Elem) -> RingElement<u32> {
    let basis = r.basis();
    let f = r.field();
    r.element(terms.iter().map(|&(m, c)| (basis[m % basis.len()], f.from_i64(c))).collect())
}

fn elem() -> impl Strategy<Value = Elem> {
    prop::collection::vec((0usize..6, -2i64..3), 0..4)
}

fn piece() -> impl Strategy<Value = Piece> {
    prop_oneof![(0..=TOP).prop_map(Piece::Single), (0..TOP, elem()).prop_map(|(i, x)| Piece::Pair(i, x))]
}

fn build(r: &Arc<Ring<PrimeField>>, pieces: &[Piece], ops: &[(usize, usize, usize, Elem)]) -> FreeComplex<PrimeField> {
    let mut ranks = vec![0usize; TOP + 1];
    let mut placed = Vec::new();
    for p in pieces {
        match p {
            Piece::Single(i) => ranks[*i] += 1,
            Piece::Pair(i, x) => {
                placed.push((*i, ranks[*i], ranks[*i + 1], x.clone()));
                ranks[*i] += 1;
                ranks[*i + 1] += 1;
            }
        }
    }
    let mut diffs: Vec<RingMatrix<u32>> = (0..TOP).map(|k| RingMatrix::zeros(ranks[k], ranks[k + 1])).collect();
    for (i, row, col, x) in placed {
        diffs[i].set(row, col, element(r, &x));
    }
    // E = 1 + a e_jk on F_i: d_i becomes d_i E^{-1}, d_{i+1} becomes E d_{i+1}
    for (i, j, k, a) in ops {
        let n = ranks[*i];
        if n < 2 {
            continue;
        }
        let (j, k) = (j % n, k % n);
        if j == k {
            continue;
        }
        let a = element(r, a);
        let mut e = r.mat_identity(n);
        e.set(j, k, a.clone());
        let mut e_inv = r.mat_identity(n);
        e_inv.set(j, k, r.neg(&a));
        if *i >= 1 {
            diffs[i - 1] = r.mat_mul(&diffs[i - 1], &e_inv).unwrap();
        }
        if *i < TOP {
            diffs[*i] = r.mat_mul(&e, &diffs[*i]).unwrap();
        }
    }
    FreeComplex::new(r.clone(), 0, ranks, None, diffs).expect("d∘d = 0 by construction")
}

fn complex() -> impl Strategy<Value = FreeComplex<PrimeField>> {
    (prop::collection::vec(piece(), 1..7), prop::collection::vec((0..=TOP, 0usize..8, 0usize..8, elem()), 0..12))
        .prop_map(|(p, o)| build(&ring(), &p, &o))
}

fn same_homology(a: &HomologyTable, b: &HomologyTable, offset: i64) -> bool {
    let lo = a.low.min(b.low - offset) - 1;
    let hi = (a.low + a.lengths.len() as i64).max(b.low - offset + b.lengths.len() as i64) + 1;
    a.total == b.total && (lo..=hi).all(|i| a.at(i) == b.at(i + offset))
}

fn mix(seed: u64, i: i64, r: usize, c: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((r as u64) << 20) ^ c as u64;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shift_moves_homology(x in complex(), m in -3i64..4) {
        let h = x.homology(None).unwrap();
        let hs = x.shift(m).homology(None).unwrap();
        prop_assert!(same_homology(&h, &hs, m));
    }

    #[test]
    fn minimize_keeps_homology(x in complex()) {
        let h = x.homology(None).unwrap();
        let y = x.minimize().unwrap();
        prop_assert!(y.is_minimal());
        prop_assert!(same_homology(&h, &y.homology(None).unwrap(), 0));
        prop_assert_eq!(y.minimize().unwrap(), y);
    }

    #[test]
    fn minimized_ranks_ignore_pivot_order(x in complex(), seed in any::<u64>()) {
        let a = x.minimize().unwrap();
        let b = x.minimize_with(&|i, r, c| mix(seed, i, r, c)).unwrap();
        prop_assert_eq!(a.low(), b.low());
        prop_assert_eq!(a.ranks(), b.ranks());
    }

    #[test]
    fn compress_keeps_length(x in complex()) {
        let total = x.homology(None).unwrap().total;
        prop_assert_eq!(x.compress().homology_length(None).unwrap(), total);
    }

    #[test]
    fn cone_of_scalar_map(x in complex(), c in elem()) {
        let r = x.ring().clone();
        let c = element(&r, &c);
        let maps: BTreeMap<i64, RingMatrix<u32>> = (x.low()..=x.high())
            .map(|i| {
                let mut m = RingMatrix::zeros(x.rank_at(i), x.rank_at(i));
                for g in 0..x.rank_at(i) {
                    m.set(g, g, c.clone());
                }
                (i, m)
            })
            .collect();
        let f = ChainMap::new(x.clone(), x.clone(), maps).unwrap();
        let hx = x.homology(None).unwrap().total;
        let hc = cone(&f).unwrap().homology(None).unwrap().total;
        prop_assert!(hc <= 2 * hx);
        if c.is_zero() {
            prop_assert_eq!(hc, 2 * hx);
        } else if r.is_unit(&c) {
            prop_assert_eq!(hc, 0);
        }
    }
}
