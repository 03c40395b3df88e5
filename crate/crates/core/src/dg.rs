//! DG modules over `k[t_1..t_d]` with `t_i` in bidegree (2, 2): the Koszul DG
//! algebra `X` with `d(e_i) = t_i`, the contraction cocycle `ζ`, and
//! `F = Σ^{-3} cone(ζ)`.
//!
//! Generators carry an upper degree (`d` raises it by one) and an internal
//! degree (preserved by `d`). `e_S` sits in bidegree `(|S|, 2|S|)`, so the
//! cohomology splits into finite-dimensional internal strata.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::expand::{expand_transposed, Layout, StrataCache};
use crate::complex::{DifferentialModule, RingMatrix, UNTRUSTED_STRATA};
use crate::error::{Error, Result};
use crate::field::{lefschetz_guard, Field};
use crate::koszul::koszul;
use crate::linalg::SparseMatrix;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct DGModule<F: Field> {
    ring: Arc<Ring<F>>,
    upper: Vec<i64>,
    internal: Vec<i64>,
    d: RingMatrix<F::Elem>,
    flag: Vec<usize>,
}

impl<F: Field> DGModule<F> {
    /// Checks bidegrees of all entries and `d² = 0`.
    pub fn new(
        ring: Arc<Ring<F>>,
        upper: Vec<i64>,
        internal: Vec<i64>,
        d: RingMatrix<F::Elem>,
        flag: Vec<usize>,
    ) -> Result<Self> {
        let n = upper.len();
        if ring.is_finite() || ring.gen_degree() != 2 {
            return Err(Error::Precondition("DG modules here live over a polynomial ring with generators of degree 2".into()));
        }
        if internal.len() != n || d.rows() != n || d.cols() != n {
            return Err(Error::InvalidComplex("generator table does not match the differential".into()));
        }
        for (r, c, x) in d.entries() {
            let deg = ring.homogeneous_degree(x).map(|v| v as i64);
            if deg != Some(upper[c] + 1 - upper[r]) || deg != Some(internal[c] - internal[r]) {
                return Err(Error::InvalidComplex(format!("entry ({r},{c}) has the wrong bidegree")));
            }
        }
        if !ring.mat_mul(&d, &d)?.is_zero() {
            return Err(Error::InvalidComplex("d² is not zero".into()));
        }
        Ok(Self { ring, upper, internal, d, flag })
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn rank(&self) -> usize {
        self.upper.len()
    }
    pub fn d(&self) -> &RingMatrix<F::Elem> {
        &self.d
    }
    pub fn upper(&self) -> &[i64] {
        &self.upper
    }
    pub fn internal(&self) -> &[i64] {
        &self.internal
    }
    pub fn flag(&self) -> &[usize] {
        &self.flag
    }

    /// Forgets the grading; the flag is the semifree filtration.
    pub fn as_differential_module(&self) -> Result<DifferentialModule<F>> {
        DifferentialModule::new(self.ring.clone(), self.d.clone(), self.flag.clone(), None)
    }

    pub fn semifree_flag_holds(&self) -> Result<bool> {
        Ok(self.as_differential_module()?.flag_witness_holds())
    }

    /// Cohomology per (upper degree, internal stratum) for internal degrees up to `cutoff`.
    pub fn cohomology(&self, cutoff: i64) -> Result<StratifiedCohomology> {
        let ring = &*self.ring;
        let floor = self.internal.iter().copied().min().unwrap_or(0);
        // every basis vector from generator g in stratum q has upper degree q + (upper_g - internal_g)
        let mut by_offset: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for g in 0..self.rank() {
            by_offset.entry(self.upper[g] - self.internal[g]).or_default().push(g);
        }
        let mut entries = Vec::new();
        for q in floor..=cutoff {
            let layouts: BTreeMap<i64, Layout> = by_offset
                .iter()
                .map(|(&c, gens)| {
                    let degs: Vec<i64> = gens.iter().map(|&g| self.internal[g]).collect();
                    (c, Layout::stratum(ring, &degs, q))
                })
                .collect();
            let mut rank_from: BTreeMap<i64, usize> = BTreeMap::new();
            for (&c, gens) in &by_offset {
                let Some(tgt_gens) = by_offset.get(&(c + 1)) else { continue };
                let (src, tgt) = (&layouts[&c], &layouts[&(c + 1)]);
                if src.dim() == 0 || tgt.dim() == 0 {
                    continue;
                }
                let block = self.d.submatrix(tgt_gens, gens);
                if block.is_zero() {
                    continue;
                }
                let m = expand_transposed(ring, &block, src, tgt, &mut StrataCache::default());
                rank_from.insert(c, m.rank());
            }
            for &c in by_offset.keys() {
                let dim = layouts[&c].dim();
                if dim == 0 {
                    continue;
                }
                let h = dim - rank_from.get(&c).copied().unwrap_or(0) - rank_from.get(&(c - 1)).copied().unwrap_or(0);
                if h > 0 {
                    entries.push(DgStratum { upper: q + c, internal: q, rank: h, trusted: q <= cutoff - UNTRUSTED_STRATA });
                }
            }
        }
        Ok(StratifiedCohomology::new(entries, (floor, cutoff)))
    }

    /// `rank_k H(F ⊗_R k) = rank - 2 rank(d ⊗ k)`.
    pub fn fiber_rank(&self) -> usize {
        let ring = &*self.ring;
        let field = ring.field().clone();
        let trip: Vec<(usize, usize, F::Elem)> = self
            .d
            .entries()
            .map(|(r, c, x)| (r, c, ring.constant_term(x)))
            .filter(|t| !field.is_zero(&t.2))
            .collect();
        let m = SparseMatrix::from_triplets(field, self.rank(), self.rank(), trip).expect("distinct entries");
        self.rank() - 2 * m.rank()
    }

    /// Euler characteristic of stratum `q`: `Σ_n (-1)^n dim F^n_q`.
    pub fn stratum_euler(&self, q: i64) -> i64 {
        let mut chi = 0i64;
        for g in 0..self.rank() {
            let n = self.ring.stratum_dim(q - self.internal[g]) as i64;
            let upper = q - self.internal[g] + self.upper[g];
            chi += if upper.rem_euclid(2) == 0 { n } else { -n };
        }
        chi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DgStratum {
    pub upper: i64,
    pub internal: i64,
    pub rank: usize,
    pub trusted: bool,
}

/// Nonzero cohomology by (upper, internal) and trusted totals per upper degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedCohomology {
    pub strata: Vec<DgStratum>,
    pub window: (i64, i64),
    pub trusted_upto: i64,
    pub by_upper: BTreeMap<i64, usize>,
}

impl StratifiedCohomology {
    fn new(strata: Vec<DgStratum>, window: (i64, i64)) -> Self {
        let mut by_upper = BTreeMap::new();
        for s in strata.iter().filter(|s| s.trusted) {
            *by_upper.entry(s.upper).or_insert(0) += s.rank;
        }
        Self { strata, window, trusted_upto: window.1 - UNTRUSTED_STRATA, by_upper }
    }

    pub fn at(&self, upper: i64) -> usize {
        self.by_upper.get(&upper).copied().unwrap_or(0)
    }

    pub fn stratum_euler(&self, q: i64) -> i64 {
        self.strata
            .iter()
            .filter(|s| s.internal == q)
            .map(|s| if s.upper.rem_euclid(2) == 0 { s.rank as i64 } else { -(s.rank as i64) })
            .sum()
    }
}

/// `X = k[t_1..t_d] ⊗ Λ(e_1..e_d)`, `d(e_i) = t_i`, generators `e_S` ordered by `|S|`.
pub fn koszul_dg<F: Field>(d: usize, field: F) -> Result<DGModule<F>> {
    let ring = Arc::new(Ring::polynomial(field, d, 2)?);
    let k = koszul(ring.clone())?;
    let dm = k.complex().compress();
    let mut upper = Vec::new();
    for i in 0..=d {
        upper.extend(std::iter::repeat_n(i as i64, k.masks(i).len()));
    }
    let internal = upper.iter().map(|u| 2 * u).collect();
    DGModule::new(ring, upper, internal, dm.d().clone(), dm.flag().to_vec())
}

/// `ζ = Σ ι_a ι_b` on the generators of `X` (constant coefficients, upper degree -2).
pub fn contraction_cocycle<F: Field>(x: &DGModule<F>, pairs: &[(usize, usize)]) -> Result<RingMatrix<F::Elem>> {
    let ring = x.ring().clone();
    lefschetz_guard(ring.field().characteristic(), pairs.len())?;
    let d = ring.nvars();
    if pairs.iter().any(|&(a, b)| a >= d || b >= d || a == b) {
        return Err(Error::Precondition(format!("{pairs:?} is not a set of pairs of {d} generators")));
    }
    let k = koszul(ring.clone())?;
    let mut offsets = vec![0usize];
    for i in 0..=d {
        offsets.push(offsets[i] + k.masks(i).len());
    }
    let n = x.rank();
    let mut z = RingMatrix::zeros(n, n);
    for i in 2..=d {
        z.put_block(offsets[i - 2], offsets[i], &k.contraction_matrix(pairs, i));
    }
    if ring.mat_mul(x.d(), &z)? != ring.mat_mul(&z, x.d())? {
        return Err(Error::NotChainMap("ζ does not commute with d".into()));
    }
    Ok(z)
}

/// Ranks of `ζ ⊗ k : Λ_i → Λ_{i-2}` for `i = 2..=d`; the transpose is
/// multiplication by `w` on `Hom(X, k)`, which is the cohomology of `End(X)`.
pub fn induced_ranks_on_ext<F: Field>(x: &DGModule<F>, z: &RingMatrix<F::Elem>) -> Vec<usize> {
    let ring = x.ring();
    let field = ring.field().clone();
    let d = ring.nvars();
    (2..=d)
        .map(|i| {
            let src: Vec<usize> = (0..x.rank()).filter(|&g| x.upper[g] == i as i64).collect();
            let tgt: Vec<usize> = (0..x.rank()).filter(|&g| x.upper[g] == i as i64 - 2).collect();
            let block = z.submatrix(&tgt, &src);
            let trip: Vec<_> = block.entries().map(|(r, c, v)| (r, c, ring.constant_term(v))).collect();
            SparseMatrix::from_triplets(field.clone(), tgt.len(), src.len(), trip).expect("distinct entries").rank()
        })
        .collect()
}

/// `F = Σ^{-3} cone(ζ)`: in upper degree `n`, `F^n = X^n ⊕ X^{n-3}` with
/// `d(a, b) = (da, -ζ(a) - db)`. The copy of `Σ^{-3}X` comes first.
pub fn trc_complex<F: Field>(d: usize, field: F) -> Result<DGModule<F>> {
    let m = (d / 2).min(4);
    let pairs: Vec<(usize, usize)> = (0..m).map(|j| (2 * j, 2 * j + 1)).collect();
    trc_complex_with(d, field, &pairs, false)
}

/// As `trc_complex`; `zero_map` replaces `ζ` by zero.
pub fn trc_complex_with<F: Field>(d: usize, field: F, pairs: &[(usize, usize)], zero_map: bool) -> Result<DGModule<F>> {
    if d < 2 {
        return Err(Error::Precondition("need d >= 2".into()));
    }
    let x = koszul_dg(d, field)?;
    let ring = x.ring().clone();
    let n = x.rank();
    let z = if zero_map { RingMatrix::zeros(n, n) } else { contraction_cocycle(&x, pairs)? };
    let mut big = RingMatrix::zeros(2 * n, 2 * n);
    big.put_block(0, 0, &ring.mat_neg(x.d()));
    big.put_block(0, n, &ring.mat_neg(&z));
    big.put_block(n, n, x.d());
    let mut upper: Vec<i64> = x.upper().iter().map(|u| u + 3).collect();
    upper.extend_from_slice(x.upper());
    let mut internal: Vec<i64> = x.internal().iter().map(|q| q + 4).collect();
    internal.extend_from_slice(x.internal());
    let mut flag = x.flag().to_vec();
    flag.extend(x.flag().iter().map(|f| f + n));
    DGModule::new(ring, upper, internal, big, flag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn gf3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn koszul_dg_acyclic() {
        for d in 1..=3 {
            let x = koszul_dg(d, gf3()).unwrap();
            assert_eq!(x.rank(), 1 << d);
            let h = x.cohomology(10).unwrap();
            assert_eq!(h.strata.len(), 1);
            assert_eq!((h.strata[0].upper, h.strata[0].internal, h.strata[0].rank), (0, 0, 1));
        }
    }

    #[test]
    fn zeta_small() {
        let x = koszul_dg(2, gf3()).unwrap();
        let z = contraction_cocycle(&x, &[(0, 1)]).unwrap();
        assert_eq!(z.nonzero_entries(), 1);
        assert!(x.ring().is_unit(z.get(0, 3)));
    }

    #[test]
    fn trc_small() {
        let f = trc_complex(2, gf3()).unwrap();
        assert!(f.semifree_flag_holds().unwrap());
        let h = f.cohomology(12).unwrap();
        assert_eq!(h.by_upper, BTreeMap::from([(0, 1), (3, 1)]));
        assert_eq!(f.fiber_rank(), 6);
        let f0 = trc_complex_with(2, gf3(), &[(0, 1)], true).unwrap();
        assert_eq!(f0.fiber_rank(), 8);
    }
}
