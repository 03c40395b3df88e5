//! Exterior algebra on `d` degree-one generators with a bitmask basis.
//!
//! Generator `g` is bit `g`. For hyperbolic pairs the generators are laid out
//! as `x_1, y_1, x_2, y_2, ...`, so `x_j` is bit `2j - 2` and `y_j` is bit
//! `2j - 1`. Basis monomials are the masks in increasing integer order, which
//! within a fixed degree is colexicographic order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::series::{binomial_u64, IntLaurentPoly};

/// Largest `d` for which operator matrices are assembled.
pub const MAX_MATRIX_DIM: usize = 24;
/// Largest `d` for elements (masks are `u32`).
pub const MAX_GENERATORS: usize = 31;

/// True when moving `b` past `a` (forming `e_a ∧ e_b` in sorted order) costs a sign.
#[inline]
pub fn wedge_sign_odd(a: u32, b: u32) -> bool {
    let mut parity = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        parity ^= (a >> j >> 1).count_ones() & 1;
        bb &= bb - 1;
    }
    parity == 1
}

/// Number of set bits of `s` strictly below bit `g`.
#[inline]
pub fn bits_below(s: u32, g: u32) -> u32 {
    (s & ((1u32 << g) - 1)).count_ones()
}

/// Position of `mask` among masks of the same popcount in increasing order.
pub fn mask_rank(mask: u32) -> usize {
    let mut r = 0usize;
    let mut m = mask;
    let mut k = 1i64;
    while m != 0 {
        let b = m.trailing_zeros() as i64;
        r += binomial_u64(b, k) as usize;
        k += 1;
        m &= m - 1;
    }
    r
}

/// Masks of popcount `k` on `d` bits, increasing.
pub fn masks_of_degree(d: usize, k: usize) -> Vec<u32> {
    if k > d {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial_u64(d as i64, k as i64) as usize);
    let mut m: u32 = (1u32 << k) - 1;
    let limit: u64 = 1u64 << d;
    while (m as u64) < limit {
        out.push(m);
        // next mask with the same popcount
        let c = m & m.wrapping_neg();
        let r = m as u64 + c as u64;
        if r >= limit {
            break;
        }
        let r = r as u32;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ExteriorAlgebra<F: Field> {
    field: F,
    d: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorElement<F: Field> {
    d: usize,
    terms: BTreeMap<u32, F::Elem>,
}

impl<F: Field> ExteriorAlgebra<F> {
    pub fn new(field: F, d: usize) -> Result<Self> {
        if d > MAX_GENERATORS {
            return Err(Error::Precondition(format!("at most {MAX_GENERATORS} generators, got {d}")));
        }
        Ok(Self { field, d })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self, i: usize) -> usize {
        binomial_u64(self.d as i64, i as i64) as usize
    }

    pub fn zero(&self) -> ExteriorElement<F> {
        ExteriorElement { d: self.d, terms: BTreeMap::new() }
    }

    pub fn basis_element(&self, mask: u32, c: F::Elem) -> ExteriorElement<F> {
        let mut e = self.zero();
        if !self.field.is_zero(&c) {
            e.terms.insert(mask, c);
        }
        e
    }

    pub fn generator(&self, g: usize) -> ExteriorElement<F> {
        assert!(g < self.d, "generator index out of range");
        self.basis_element(1 << g, self.field.one())
    }

    pub fn add(&self, a: &ExteriorElement<F>, b: &ExteriorElement<F>) -> ExteriorElement<F> {
        let mut out = a.clone();
        for (m, v) in &b.terms {
            self.add_term(&mut out, *m, v.clone());
        }
        out
    }

    fn add_term(&self, e: &mut ExteriorElement<F>, mask: u32, v: F::Elem) {
        let f = &self.field;
        match e.terms.get_mut(&mask) {
            Some(x) => {
                *x = f.add(x, &v);
                if f.is_zero(x) {
                    e.terms.remove(&mask);
                }
            }
            None => {
                if !f.is_zero(&v) {
                    e.terms.insert(mask, v);
                }
            }
        }
    }

    pub fn scale(&self, a: &ExteriorElement<F>, s: &F::Elem) -> ExteriorElement<F> {
        let f = &self.field;
        let terms = a
            .terms
            .iter()
            .map(|(m, v)| (*m, f.mul(v, s)))
            .filter(|(_, v)| !f.is_zero(v))
            .collect();
        ExteriorElement { d: a.d, terms }
    }

    pub fn wedge(&self, a: &ExteriorElement<F>, b: &ExteriorElement<F>) -> ExteriorElement<F> {
        let f = &self.field;
        let mut out = self.zero();
        for (ma, va) in &a.terms {
            for (mb, vb) in &b.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mut v = f.mul(va, vb);
                if wedge_sign_odd(*ma, *mb) {
                    v = f.neg(&v);
                }
                self.add_term(&mut out, ma | mb, v);
            }
        }
        out
    }

    /// `sum_j g_{2j-1} ∧ g_{2j}` over the first `2m` generators.
    pub fn standard_w(&self, m: usize) -> Result<ExteriorElement<F>> {
        let pairs: Vec<(usize, usize)> = (0..m).map(|j| (2 * j, 2 * j + 1)).collect();
        self.paired_w(&pairs)
    }

    /// `sum g_a ∧ g_b` over the given disjoint pairs of generator indices.
    pub fn paired_w(&self, pairs: &[(usize, usize)]) -> Result<ExteriorElement<F>> {
        let mut seen = 0u64;
        for &(a, b) in pairs {
            if a >= self.d || b >= self.d || a == b || seen >> a & 1 == 1 || seen >> b & 1 == 1 {
                return Err(Error::Precondition(format!(
                    "pairing {pairs:?} is not a set of disjoint pairs of the {} generators",
                    self.d
                )));
            }
            seen |= 1 << a | 1 << b;
        }
        let mut w = self.zero();
        for &(a, b) in pairs {
            w = self.add(&w, &self.wedge(&self.generator(a), &self.generator(b)));
        }
        Ok(w)
    }

    fn check_matrix_dim(&self) -> Result<()> {
        if self.d > MAX_MATRIX_DIM {
            return Err(Error::Precondition(format!(
                "operator matrices limited to d <= {MAX_MATRIX_DIM}, got {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Matrix of `u ↦ a ∧ u` from `Λ_i` to `Λ_{i+k}`, `a` homogeneous of degree `k`.
    pub fn left_mult_matrix(&self, a: &ExteriorElement<F>, i: usize) -> Result<SparseMatrix<F>> {
        self.check_matrix_dim()?;
        let k = a.homogeneous_degree().unwrap_or(0);
        let f = &self.field;
        let src = masks_of_degree(self.d, i);
        let tgt_dim = self.dim(i + k);
        let mut t = Vec::new();
        for (col, &u) in src.iter().enumerate() {
            for (m, v) in &a.terms {
                if m & u != 0 {
                    continue;
                }
                let val = if wedge_sign_odd(*m, u) { f.neg(v) } else { v.clone() };
                t.push((mask_rank(m | u), col, val));
            }
        }
        SparseMatrix::from_accumulated(f.clone(), tgt_dim, src.len(), t)
    }

    /// `(λ_w)_i : Λ_i → Λ_{i+2}` for `i = 0..=d-2`.
    pub fn lefschetz_matrices(&self, w: &ExteriorElement<F>) -> Result<Vec<SparseMatrix<F>>> {
        self.require_degree_two(w)?;
        (0..=self.d.saturating_sub(2)).map(|i| self.left_mult_matrix(w, i)).collect()
    }

    fn require_degree_two(&self, w: &ExteriorElement<F>) -> Result<()> {
        if w.is_zero() || w.homogeneous_degree() == Some(2) {
            Ok(())
        } else {
            Err(Error::Precondition("expected a homogeneous element of degree 2".into()))
        }
    }

    pub fn lefschetz_profile(&self, w: &ExteriorElement<F>) -> Result<LefschetzProfile> {
        self.lefschetz_profile_indexed(w, Indexing::Lower)
    }

    pub fn lefschetz_profile_indexed(&self, w: &ExteriorElement<F>, indexing: Indexing) -> Result<LefschetzProfile> {
        let mats = self.lefschetz_matrices(w)?;
        let ranks: Vec<usize> = mats.par_iter().map(|m| m.rank()).collect();
        Ok(LefschetzProfile::from_ranks(self.d, ranks, indexing))
    }

    /// Contraction `ι_g : Λ → Λ` on the full algebra, indexed by mask.
    pub fn contraction_full(&self, g: usize) -> Result<SparseMatrix<F>> {
        self.check_matrix_dim()?;
        let f = &self.field;
        let n = 1usize << self.d;
        let bit = 1u32 << g;
        let t = (0..n as u32)
            .filter(|s| s & bit != 0)
            .map(|s| {
                let v = if bits_below(s, g as u32) % 2 == 1 { f.neg(&f.one()) } else { f.one() };
                ((s ^ bit) as usize, s as usize, v)
            })
            .collect();
        SparseMatrix::from_triplets(f.clone(), n, n, t)
    }

    /// Left multiplication on the full algebra, indexed by mask.
    pub fn left_mult_full(&self, a: &ExteriorElement<F>) -> Result<SparseMatrix<F>> {
        self.check_matrix_dim()?;
        let f = &self.field;
        let n = 1usize << self.d;
        let mut t = Vec::new();
        for u in 0..n as u32 {
            for (m, v) in &a.terms {
                if m & u == 0 {
                    let val = if wedge_sign_odd(*m, u) { f.neg(v) } else { v.clone() };
                    t.push(((m | u) as usize, u as usize, val));
                }
            }
        }
        SparseMatrix::from_accumulated(f.clone(), n, n, t)
    }

    pub fn to_json(&self, a: &ExteriorElement<F>) -> ExteriorJson {
        ExteriorJson {
            d: self.d,
            char: self.field.characteristic(),
            terms: a.terms.iter().map(|(m, v)| (m.to_string(), self.field.format(v))).collect(),
        }
    }

    pub fn from_json(&self, j: &ExteriorJson) -> Result<ExteriorElement<F>> {
        if j.d != self.d || j.char != self.field.characteristic() {
            return Err(Error::Parse("exterior element belongs to a different algebra".into()));
        }
        let mut e = self.zero();
        for (m, v) in &j.terms {
            let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad mask {m:?}")))?;
            if self.d < 32 && m >> self.d != 0 {
                return Err(Error::Parse(format!("mask {m} uses more than {} generators", self.d)));
            }
            self.add_term(&mut e, m, self.field.parse(v)?);
        }
        Ok(e)
    }
}

impl<F: Field> ExteriorElement<F> {
    pub fn terms(&self) -> &BTreeMap<u32, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for zero or mixed-degree elements.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        it.all(|k| k == first).then_some(first)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorJson {
    pub d: usize,
    pub char: u64,
    pub terms: BTreeMap<String, String>,
}

/// Lower indexing puts generators in degree 1; upper indexing puts them in
/// upper degree 1. The Hilbert series of kernel and cokernel agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Indexing {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzProfile {
    pub d: usize,
    pub indexing: Indexing,
    /// `rank (λ_w)_i` for `i = 0..=d-2`.
    pub ranks: Vec<usize>,
    /// `dim Λ_j / w Λ_{j-2}` for `j = 0..=d`.
    pub coker: Vec<usize>,
    /// `dim ker (λ_w)_i` for `i = 0..=d`.
    pub ker: Vec<usize>,
    pub coker_series: IntLaurentPoly,
    pub ker_series: IntLaurentPoly,
    pub total: usize,
}

impl LefschetzProfile {
    pub fn from_ranks(d: usize, ranks: Vec<usize>, indexing: Indexing) -> Self {
        let dim = |i: usize| binomial_u64(d as i64, i as i64) as usize;
        let rank = |i: isize| if i >= 0 && (i as usize) < ranks.len() { ranks[i as usize] } else { 0 };
        let coker: Vec<usize> = (0..=d).map(|j| dim(j) - rank(j as isize - 2)).collect();
        let ker: Vec<usize> = (0..=d).map(|i| dim(i) - rank(i as isize)).collect();
        // Cokernel lives in the target of λ_w, a shift by two of Λ.
        let (coker_series, ker_series) = match indexing {
            Indexing::Lower => (
                IntLaurentPoly::from_coeffs(-2, coker.iter().map(|&c| c as u64)),
                IntLaurentPoly::from_coeffs(0, ker.iter().map(|&c| c as u64)),
            ),
            Indexing::Upper => {
                // Λ^i = Λ_{-i} with generators in Λ^1: component j of the
                // upper-graded algebra is the old Λ_j, and the target is Σ^2 Λ
                // with (Σ^2 Λ)^i = Λ^{i+2}.
                let mut cs = IntLaurentPoly::zero();
                let mut ks = IntLaurentPoly::zero();
                for upper in 0..=d as i64 {
                    ks.add_term(upper, ker[upper as usize].into());
                    cs.add_term(upper - 2, coker[upper as usize].into());
                }
                (cs, ks)
            }
        };
        let total = coker.iter().sum::<usize>() + ker.iter().sum::<usize>();
        Self { d, indexing, ranks, coker, ker, coker_series, ker_series, total }
    }

    /// Injective in degree `i`: `rank = dim Λ_i`.
    pub fn injective(&self, i: usize) -> bool {
        i + 2 <= self.d && self.ranks[i] == binomial_u64(self.d as i64, i as i64) as usize
    }

    /// Surjective onto `Λ_{i+2}`.
    pub fn surjective(&self, i: usize) -> bool {
        i + 2 <= self.d && self.ranks[i] == binomial_u64(self.d as i64, i as i64 + 2) as usize
    }
}

/// Predicted total for 4 hyperbolic pairs and `d - 8` spectator generators:
/// the eight-variable count from `h` times `2^{d-8}`.
pub fn predicted_total_for_dim(d: usize) -> u64 {
    let h1 = crate::series::h_poly(4).eval_at_one();
    let base: u64 = num_traits::ToPrimitive::to_u64(&h1).unwrap() * 2;
    base << (d - 8)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTotal {
    pub predicted: u64,
    pub computed: u64,
}

/// Direct profile total of `standard_w(4)` on `d >= 8` generators, next to the
/// tensor-factorization prediction.
pub fn lefschetz_total_for_dim<F: Field>(field: F, d: usize) -> Result<DimTotal> {
    if d < 8 {
        return Err(Error::Precondition(format!("need d >= 8, got {d}")));
    }
    crate::field::lefschetz_guard(field.characteristic(), 4)?;
    let alg = ExteriorAlgebra::new(field, d)?;
    let w = alg.standard_w(4)?;
    let computed = alg.lefschetz_profile(&w)?.total as u64;
    Ok(DimTotal { predicted: predicted_total_for_dim(d), computed })
}

/// Profile total of a degree-two element over GF(2).
pub fn char2_floor<F: Field>(alg: &ExteriorAlgebra<F>, w: &ExteriorElement<F>) -> Result<usize> {
    if alg.field().characteristic() != 2 {
        return Err(Error::Precondition("char2_floor runs over GF(2)".into()));
    }
    Ok(alg.lefschetz_profile(w)?.total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Report {
    pub n: usize,
    pub h_diagonal: bool,
    pub c_h_relation: bool,
    pub w_h_relation: bool,
    pub powers_isomorphic: bool,
}

impl Sl2Report {
    pub fn ok(&self) -> bool {
        self.h_diagonal && self.c_h_relation && self.w_h_relation && self.powers_isomorphic
    }
}

/// Checks the sl2 relations between `λ_w`, `c = sum ι_{y_j} ι_{x_j}` and
/// `h = [c, λ_w]` on `Λ` with `2n` generators.
pub fn sl2_check<F: Field>(field: F, n: usize) -> Result<Sl2Report> {
    if field.characteristic() != 0 {
        return Err(Error::Precondition("sl2 identities are checked in characteristic 0".into()));
    }
    let alg = ExteriorAlgebra::new(field.clone(), 2 * n)?;
    let w = alg.standard_w(n)?;
    let lam = alg.left_mult_full(&w)?;
    let size = 1usize << (2 * n);
    let mut c = SparseMatrix::zeros(field.clone(), size, size);
    for j in 0..n {
        let term = alg.contraction_full(2 * j + 1)?.mul(&alg.contraction_full(2 * j)?)?;
        c = c.add(&term)?;
    }
    let comm = |a: &SparseMatrix<F>, b: &SparseMatrix<F>| -> Result<SparseMatrix<F>> { a.mul(b)?.sub(&b.mul(a)?) };
    let h = comm(&c, &lam)?;
    let diag = SparseMatrix::from_accumulated(
        field.clone(),
        size,
        size,
        (0..size).map(|s| (s, s, field.from_i64(n as i64 - (s as u32).count_ones() as i64))).collect(),
    )?;
    let h_diagonal = h == diag;
    let c_h_relation = comm(&c, &h)? == c.scale(&field.from_i64(-2));
    let w_h_relation = comm(&lam, &h)? == lam.scale(&field.from_i64(2));
    let mut powers_isomorphic = true;
    for j in 1..=n {
        let mut m = SparseMatrix::identity(field.clone(), alg.dim(n - j));
        for step in 0..j {
            m = alg.left_mult_matrix(&w, n - j + 2 * step)?.mul(&m)?;
        }
        powers_isomorphic &= m.rows() == m.cols() && m.rank() == m.rows();
    }
    Ok(Sl2Report { n, h_diagonal, c_h_relation, w_h_relation, powers_isomorphic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn mask_enumeration_and_rank() {
        let m = masks_of_degree(5, 2);
        assert_eq!(m.len(), 10);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        for (i, x) in m.iter().enumerate() {
            assert_eq!(mask_rank(*x), i);
        }
        assert_eq!(masks_of_degree(4, 0), vec![0]);
        assert_eq!(masks_of_degree(4, 4), vec![15]);
        assert_eq!(masks_of_degree(31, 31).len(), 1);
    }

    #[test]
    fn wedge_conventions() {
        let alg = ExteriorAlgebra::new(Rationals, 4).unwrap();
        let (x1, y1) = (alg.generator(0), alg.generator(1));
        assert!(alg.wedge(&x1, &x1).is_zero());
        let xy = alg.wedge(&x1, &y1);
        assert_eq!(xy.terms().get(&0b11), Some(&Rationals.one()));
        let yx = alg.wedge(&y1, &x1);
        assert_eq!(yx.terms().get(&0b11), Some(&Rationals.from_i64(-1)));
        let x2y2 = alg.wedge(&alg.generator(2), &alg.generator(3));
        assert_eq!(alg.wedge(&xy, &x2y2), alg.wedge(&x2y2, &xy));
    }

    #[test]
    fn standard_w_shapes() {
        let alg = ExteriorAlgebra::new(Rationals, 10).unwrap();
        let w = alg.standard_w(4).unwrap();
        assert_eq!(w.terms().len(), 4);
        assert_eq!(w.homogeneous_degree(), Some(2));
        assert!(w.terms().keys().all(|m| m >> 8 == 0));
        assert!(alg.standard_w(6).is_err());
    }

    #[test]
    fn profile_d2_and_zero() {
        let alg = ExteriorAlgebra::new(Rationals, 2).unwrap();
        let w = alg.standard_w(1).unwrap();
        let mats = alg.lefschetz_matrices(&w).unwrap();
        assert_eq!(mats[0].get(0, 0), Rationals.one());
        assert_eq!(alg.lefschetz_profile(&w).unwrap().total, 6);
        let alg = ExteriorAlgebra::new(PrimeField::new(3).unwrap(), 5).unwrap();
        assert_eq!(alg.lefschetz_profile(&alg.zero()).unwrap().total, 64);
    }

    #[test]
    fn upper_indexing_has_same_series() {
        let alg = ExteriorAlgebra::new(Rationals, 8).unwrap();
        let w = alg.standard_w(4).unwrap();
        let lo = alg.lefschetz_profile_indexed(&w, Indexing::Lower).unwrap();
        let up = alg.lefschetz_profile_indexed(&w, Indexing::Upper).unwrap();
        assert_eq!(lo.coker_series, up.coker_series);
        assert_eq!(lo.ker_series, up.ker_series);
    }

    #[test]
    fn sl2_small() {
        assert!(sl2_check(Rationals, 1).unwrap().ok());
        assert!(sl2_check(PrimeField::new(3).unwrap(), 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let alg = ExteriorAlgebra::new(Rationals, 6).unwrap();
        let w = alg.standard_w(3).unwrap();
        let j = alg.to_json(&w);
        assert_eq!(alg.from_json(&j).unwrap(), w);
    }
}
