//! Minimal free resolutions over monomial complete intersections, lifting the
//! Ext class of `w` to a chain map, Betti tables and Poincaré numerators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::complex::expand::{expand_transposed, Layout, StrataCache};
use crate::complex::{cone, ChainMap, FreeComplex, RingMatrix};
use crate::error::{Error, Result};
use crate::exterior::LefschetzProfile;
use crate::field::{lefschetz_guard, Field};
use crate::koszul::koszul;
use crate::linalg::{Echelon, SparseMatrix};
use crate::ring::{Monomial, Ring, RingElement};
use crate::series::{betti_degree, binomial, binomial_u64, IntLaurentPoly};

/// Betti numbers `β_0..β_N` with the last two treated as contaminated by truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub values: Vec<u64>,
    pub truncation: usize,
    pub trusted_upto: usize,
}

impl BettiTable {
    pub fn new(values: Vec<u64>, truncation: usize) -> Self {
        Self { values, truncation, trusted_upto: truncation.saturating_sub(2) }
    }

    pub fn trusted(&self) -> &[u64] {
        &self.values[..(self.trusted_upto + 1).min(self.values.len())]
    }

    fn from_complex<F: Field>(g: &FreeComplex<F>, n: usize) -> Self {
        Self::new((0..=n as i64).map(|i| g.rank_at(i) as u64).collect(), n)
    }
}

/// Numerator `p(t)` of a Poincaré series `p(t) / (1 - t^2)^c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareData {
    pub numerator: IntLaurentPoly,
    pub complexity: usize,
    #[serde(with = "ratio_string")]
    pub betti_degree: BigRational,
}

mod ratio_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PoincareData {
    pub fn new(numerator: IntLaurentPoly, complexity: usize) -> Result<Self> {
        let betti_degree = betti_degree(&numerator)?;
        Ok(Self { numerator, complexity, betti_degree })
    }
}

/// The degree-nine numerator for eight variables.
pub fn numerator_e8() -> IntLaurentPoly {
    IntLaurentPoly::from_coeffs(0, [1u32, 8, 27, 48, 42, 42, 48, 27, 8, 1])
}

/// `(1+t)^{e-8}` times the eight-variable numerator, complexity `e`.
pub fn predicted_poincare(e: usize) -> Result<PoincareData> {
    if e < 8 {
        return Err(Error::Precondition(format!("the closed form needs e >= 8, got {e}")));
    }
    let one_plus_t = IntLaurentPoly::from_coeffs(0, [1u32, 1]);
    PoincareData::new(one_plus_t.pow(e as u32 - 8).mul(&numerator_e8()), e)
}

/// Numerator read off kernel and cokernel of `λ_w`:
/// `Σ_j dim coker_j t^j + Σ_j dim ker_j t^{j+1}`.
pub fn numerator_from_profile(p: &LefschetzProfile) -> IntLaurentPoly {
    let mut out = IntLaurentPoly::zero();
    for (j, &c) in p.coker.iter().enumerate() {
        out.add_term(j as i64, BigInt::from(c));
    }
    for (j, &k) in p.ker.iter().enumerate() {
        out.add_term(j as i64 + 1, BigInt::from(k));
    }
    out
}

/// `rank Ω^d = Σ_{i<=d} (-1)^{d-i} β_i` for the palindromic Betti sequence
/// `h(t) + t^{2n+1} h(1/t)`, `d = 0..=2n`.
pub fn syzygy_rank_table(n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let n = n as i64;
    let h = |i: i64| binomial(2 * n, i) - binomial(2 * n, i - 2);
    let beta: Vec<BigInt> = (0..=2 * n + 1).map(|i| if i <= n { h(i) } else { h(2 * n + 1 - i) }).collect();
    let mut out = Vec::with_capacity(2 * n as usize + 1);
    let mut acc = BigInt::from(0);
    for b in beta.iter().take(2 * n as usize + 1) {
        acc = b - &acc;
        out.push(u64::try_from(&acc).map_err(|_| Error::Precondition("negative syzygy rank".into()))?);
    }
    Ok(out)
}

/// Whether the middle syzygy rank stays within `C(2n-1, n-1)`.
pub fn middle_syzygy_within_bound(n: usize) -> Result<bool> {
    let t = syzygy_rank_table(n)?;
    Ok(t[n] <= binomial_u64(2 * n as i64 - 1, n as i64 - 1))
}

/// The tensor product of the periodic resolutions of `k[t_j]/(t_j^{a_j})`,
/// generators indexed by exponent vectors `n` with `|n| = i`.
#[derive(Clone, Debug)]
pub struct TensorResolution<F: Field> {
    pub complex: FreeComplex<F>,
    /// `labels[i]`: the vectors `n` in degree `i`, decreasing lexicographically.
    pub labels: Vec<Vec<Vec<u32>>>,
    /// Multidegree of each generator, `n_j / 2 · a_j + n_j mod 2` per variable.
    pub mdegs: Vec<Vec<Vec<u32>>>,
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[i] = v;
            rec(left - v, i + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(total, 0, &mut vec![0; parts], &mut out);
    out
}

pub fn tensor_resolution_of_k<F: Field>(ring: Arc<Ring<F>>, n: usize) -> Result<TensorResolution<F>> {
    let a = ring
        .exponents()
        .ok_or_else(|| Error::Precondition("tensor resolution needs a complete intersection".into()))?
        .to_vec();
    let e = a.len();
    let labels: Vec<Vec<Vec<u32>>> = (0..=n as u32).map(|i| compositions(i, e)).collect();
    let mdegs: Vec<Vec<Vec<u32>>> = labels
        .iter()
        .map(|l| l.iter().map(|v| v.iter().zip(&a).map(|(&nj, &aj)| nj / 2 * aj + nj % 2).collect()).collect())
        .collect();
    let index: Vec<HashMap<&Vec<u32>, usize>> =
        labels.iter().map(|l| l.iter().enumerate().map(|(i, v)| (v, i)).collect()).collect();
    let mut diffs = Vec::with_capacity(n);
    for i in 1..=n {
        let mut m = RingMatrix::zeros(labels[i - 1].len(), labels[i].len());
        for (c, v) in labels[i].iter().enumerate() {
            let mut before = 0u32;
            for j in 0..e {
                if v[j] > 0 {
                    let mut w = v.clone();
                    w[j] -= 1;
                    let pow = if v[j] % 2 == 1 { 1 } else { a[j] - 1 };
                    let mut x = ring.var_pow(j, pow);
                    if before % 2 == 1 {
                        x = ring.neg(&x);
                    }
                    m.set(index[i - 1][&w], c, x);
                }
                before += v[j];
            }
        }
        diffs.push(m);
    }
    let ranks = labels.iter().map(Vec::len).collect();
    let gdegs = mdegs.iter().map(|l| l.iter().map(|v| v.iter().sum::<u32>() as i64).collect()).collect();
    let complex = FreeComplex::new(ring, 0, ranks, Some(gdegs), diffs)?;
    Ok(TensorResolution { complex, labels, mdegs })
}

/// Basis of one multidegree component of a free module with generator multidegrees `gens`.
fn multidegree_basis(a: &[u32], gens: &[Vec<u32>], target: &[i64]) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    'g: for (g, md) in gens.iter().enumerate() {
        let mut exps = Vec::with_capacity(a.len());
        for j in 0..a.len() {
            let x = target[j] - md[j] as i64;
            if x < 0 || x >= a[j] as i64 {
                continue 'g;
            }
            exps.push(x as u32);
        }
        out.push((g, Monomial::from_exps(&exps)));
    }
    out
}

/// Lifts the cocycle dual to the generators `g_{e_a + e_b}` of `X_2` to a chain map
/// `ζ : Σ^{-2} X → X`, solving `d ζ_i = ζ_{i-1} d` one multidegree at a time.
pub fn lift_ext_class<F: Field>(x: &TensorResolution<F>, pairs: &[(usize, usize)]) -> Result<ChainMap<F>> {
    let ring = x.complex.ring().clone();
    let field = ring.field().clone();
    lefschetz_guard(field.characteristic(), pairs.len())?;
    let a = ring.exponents().unwrap().to_vec();
    let e = a.len();
    let n = x.complex.high().max(0) as usize;
    if n < 2 {
        return Err(Error::Precondition("lifting needs the resolution through degree 2".into()));
    }
    let mut seen = 0u64;
    for &(p, q) in pairs {
        if p >= e || q >= e || p == q || seen >> p & 1 == 1 || seen >> q & 1 == 1 {
            return Err(Error::Precondition(format!("{pairs:?} is not a set of disjoint pairs of {e} variables")));
        }
        seen |= 1 << p | 1 << q;
    }
    let gen_index = |i: usize, v: &[u32]| x.labels[i].iter().position(|l| l == v).unwrap();
    // per pair: ζ^{(j)}_i as matrices
    let mut total: BTreeMap<i64, RingMatrix<F::Elem>> = BTreeMap::new();
    for &(p, q) in pairs {
        let mut shift = vec![0i64; e];
        shift[p] += 1;
        shift[q] += 1;
        let mut label = vec![0u32; e];
        label[p] = 1;
        label[q] = 1;
        let mut z0 = RingMatrix::zeros(1, x.labels[2].len());
        z0.set(0, gen_index(2, &label), ring.one());
        let mut prev = z0;
        let mut zs = vec![prev.clone()];
        for i in 1..=n - 2 {
            let d_src = x.complex.d(i as i64 + 2).unwrap();
            let d_i = x.complex.d(i as i64).unwrap();
            let rhs_all = ring.mat_mul(&prev, d_src)?;
            let mut zi = RingMatrix::zeros(x.labels[i].len(), x.labels[i + 2].len());
            for c in 0..x.labels[i + 2].len() {
                let rhs: Vec<&RingElement<F::Elem>> = (0..rhs_all.rows()).map(|r| rhs_all.get(r, c)).collect();
                if rhs.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let target: Vec<i64> = x.mdegs[i + 2][c].iter().zip(&shift).map(|(&m, &s)| m as i64 - s).collect();
                let cols = multidegree_basis(&a, &x.mdegs[i], &target);
                let rows = multidegree_basis(&a, &x.mdegs[i - 1], &target);
                let row_of: HashMap<(usize, Monomial), usize> = rows.iter().enumerate().map(|(k, &v)| (v, k)).collect();
                let mut trip = Vec::new();
                for (k, (g, mono)) in cols.iter().enumerate() {
                    for r in 0..d_i.rows() {
                        for (alpha, v) in d_i.get(r, *g).terms() {
                            if let Some(prod) = ring.mul_monomials(alpha, mono) {
                                trip.push((row_of[&(r, prod)], k, v.clone()));
                            }
                        }
                    }
                }
                let amat = SparseMatrix::from_accumulated(field.clone(), rows.len(), cols.len(), trip)?;
                let mut btrip = Vec::new();
                for (r, v) in rhs.iter().enumerate() {
                    for (mono, coef) in v.terms() {
                        let key = (r, *mono);
                        let row = row_of.get(&key).ok_or(Error::LiftFailed(i))?;
                        btrip.push((*row, 0, coef.clone()));
                    }
                }
                let bmat = SparseMatrix::from_accumulated(field.clone(), rows.len(), 1, btrip)?;
                let sol = amat.solve(&bmat)?.ok_or(Error::LiftFailed(i))?;
                for (k, _, v) in sol.triplets() {
                    let (g, mono) = cols[k];
                    let cur = zi.get(g, c).clone();
                    zi.set(g, c, ring.add(&cur, &ring.term(mono, v.clone())));
                }
            }
            zs.push(zi.clone());
            prev = zi;
        }
        for (i, z) in zs.into_iter().enumerate() {
            let key = i as i64;
            let updated = match total.remove(&key) {
                Some(t) => ring.mat_add(&t, &z)?,
                None => z,
            };
            total.insert(key, updated);
        }
    }
    let source = x.complex.forget_grading().shift(-2);
    ChainMap::new(source, x.complex.forget_grading(), total).map_err(|e| match e {
        Error::NotChainMap(s) => Error::NotChainMap(format!("lifted ζ is not a chain map: {s}")),
        other => other,
    })
}

/// `F = Σ cone(ζ)` truncated at `n`, with `ζ` lifted from `min(4, e/2)` consecutive pairs.
pub fn avramov_complex<F: Field>(ring: Arc<Ring<F>>, n: usize) -> Result<FreeComplex<F>> {
    let m = (ring.nvars() / 2).min(4);
    let pairs: Vec<(usize, usize)> = (0..m).map(|j| (2 * j, 2 * j + 1)).collect();
    avramov_complex_paired(ring, &pairs, n)
}

pub fn avramov_complex_paired<F: Field>(ring: Arc<Ring<F>>, pairs: &[(usize, usize)], n: usize) -> Result<FreeComplex<F>> {
    if !ring.order_at_least_three() {
        return Err(Error::Precondition("all relations must have order at least three (every a_i >= 3)".into()));
    }
    if ring.nvars() < 2 {
        return Err(Error::Precondition("need at least two variables".into()));
    }
    let x = tensor_resolution_of_k(ring, n.max(2))?;
    let zeta = lift_ext_class(&x, pairs)?;
    Ok(cone(&zeta)?.shift(1).truncate_above(n as i64))
}

/// `M = coker(φ)` for `φ : R^{cols} → R^{rows}`.
#[derive(Clone, Debug)]
pub struct PresentedModule<F: Field> {
    pub ring: Arc<Ring<F>>,
    pub presentation: RingMatrix<F::Elem>,
}

impl<F: Field> PresentedModule<F> {
    pub fn new(ring: Arc<Ring<F>>, presentation: RingMatrix<F::Elem>) -> Self {
        Self { ring, presentation }
    }

    /// The residue field `R / m`.
    pub fn residue_field(ring: Arc<Ring<F>>) -> Self {
        let n = ring.nvars();
        let mut p = RingMatrix::zeros(1, n);
        for j in 0..n {
            p.set(0, j, ring.var(j));
        }
        Self { ring, presentation: p }
    }

    pub fn generators(&self) -> usize {
        self.presentation.rows()
    }
}

/// `coker(G_2 → G_1)`.
pub fn module_m<F: Field>(g: &FreeComplex<F>) -> Result<PresentedModule<F>> {
    if g.low() > 1 || g.high() < 2 {
        return Err(Error::Precondition("need a complex with degrees 1 and 2".into()));
    }
    Ok(PresentedModule::new(g.ring().clone(), g.d_or_zero(2)))
}

pub enum ResolveInput<'a, F: Field> {
    Module(&'a PresentedModule<F>),
    Complex(&'a FreeComplex<F>),
}

/// Minimal resolution through degree `n`. Modules go through repeated
/// syzygies; complexes of free modules are minimized.
pub fn minimal_resolve<F: Field>(input: ResolveInput<'_, F>, n: usize) -> Result<(FreeComplex<F>, BettiTable)> {
    match input {
        ResolveInput::Complex(c) => {
            if c.low() < 0 {
                return Err(Error::Precondition("complex must live in degrees >= 0".into()));
            }
            let g = c.truncate_above(n as i64 + 1).minimize()?.truncate_above(n as i64);
            let b = BettiTable::from_complex(&g, n);
            Ok((g, b))
        }
        ResolveInput::Module(m) => {
            let g = syzygy_resolution(m, n)?;
            let b = BettiTable::from_complex(&g, n);
            Ok((g, b))
        }
    }
}

fn vector_to_column<F: Field>(ring: &Ring<F>, basis: &[Monomial], gens: usize, v: &[(u32, F::Elem)]) -> Vec<RingElement<F::Elem>> {
    let kdim = basis.len();
    let mut terms: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); gens];
    for (i, c) in v {
        let i = *i as usize;
        terms[i / kdim].push((basis[i % kdim], c.clone()));
    }
    terms.into_iter().map(|t| ring.element(t)).collect()
}

/// k-linear multiplication by `t_j` on `R^gens`, as rows (images of basis vectors).
fn times_var<F: Field>(ring: &Ring<F>, gens: usize, j: usize) -> SparseMatrix<F> {
    let mut m = RingMatrix::zeros(gens, gens);
    for g in 0..gens {
        m.set(g, g, ring.var(j));
    }
    let l = Layout::full(ring, gens);
    expand_transposed(ring, &m, &l, &l, &mut StrataCache::default())
}

/// Picks vectors of `candidates` forming a basis of `K / mK`, where `spanning`
/// spans `K` over k. Returns the chosen candidates in order.
fn minimal_generators<F: Field>(
    ring: &Ring<F>,
    gens: usize,
    spanning: &[Vec<(u32, F::Elem)>],
    candidates: &[Vec<(u32, F::Elem)>],
) -> Result<Vec<Vec<(u32, F::Elem)>>> {
    let field = ring.field().clone();
    let dim = gens * ring.kdim().unwrap();
    let span = SparseMatrix::from_rows(field.clone(), dim, spanning.to_vec());
    let mut ech = Echelon::new(field, dim);
    for j in 0..ring.nvars() {
        // rows of span·T_j^T are t_j times each spanning vector
        let prod = span.mul(&times_var(ring, gens, j))?;
        for r in 0..prod.rows() {
            ech.insert(prod.row_vec(r));
        }
    }
    let mut chosen = Vec::new();
    for c in candidates {
        if ech.insert(c.clone()).is_some() {
            chosen.push(c.clone());
        }
    }
    Ok(chosen)
}

fn syzygy_resolution<F: Field>(m: &PresentedModule<F>, n: usize) -> Result<FreeComplex<F>> {
    let ring = m.ring.clone();
    if !ring.is_finite() {
        return Err(Error::Precondition("syzygies are computed over complete intersections".into()));
    }
    let basis = ring.basis();
    // minimize the presentation first
    let p0 = FreeComplex::new(ring.clone(), 0, vec![m.presentation.rows(), m.presentation.cols()], None, vec![m.presentation.clone()])?;
    let pm = p0.minimize()?;
    let b0 = pm.rank_at(0);
    let mut d1 = RingMatrix::zeros(b0, 0);
    if pm.low() == 0 && pm.rank_at(1) > 0 {
        d1 = pm.d(1).unwrap().clone();
    } else if pm.low() != 0 {
        // every generator cancelled: M = 0
        return Ok(FreeComplex::zero(ring));
    }
    let mut ranks = vec![b0];
    let mut diffs: Vec<RingMatrix<F::Elem>> = Vec::new();
    if n == 0 || b0 == 0 {
        return FreeComplex::new(ring, 0, ranks, None, diffs);
    }
    // stage 1: minimal generators of the image of d1
    let kdim = ring.kdim().unwrap();
    let src = Layout::full(&ring, d1.cols());
    let tgt = Layout::full(&ring, b0);
    let images = expand_transposed(&ring, &d1, &src, &tgt, &mut StrataCache::default());
    let spanning: Vec<_> = (0..images.rows()).map(|r| images.row_vec(r)).collect();
    let candidates: Vec<_> = (0..d1.cols()).map(|c| images.row_vec(c * kdim)).filter(|v| !v.is_empty()).collect();
    let chosen = minimal_generators(&ring, b0, &spanning, &candidates)?;
    let mut cur = columns_to_matrix(&ring, &basis, b0, &chosen);
    loop {
        ranks.push(cur.cols());
        diffs.push(cur.clone());
        if diffs.len() == n || cur.cols() == 0 {
            break;
        }
        let gens = cur.cols();
        let src = Layout::full(&ring, gens);
        let tgt = Layout::full(&ring, cur.rows());
        let dmat = expand_transposed(&ring, &cur, &src, &tgt, &mut StrataCache::default()).transpose();
        let ker = dmat.kernel_basis().transpose();
        let kvecs: Vec<_> = (0..ker.rows()).map(|r| ker.row_vec(r)).collect();
        let mut cands = kvecs.clone();
        cands.sort_by_key(|v| vector_degree(&ring, &basis, v));
        let chosen = minimal_generators(&ring, gens, &kvecs, &cands)?;
        cur = columns_to_matrix(&ring, &basis, gens, &chosen);
    }
    while ranks.len() > 1 && *ranks.last().unwrap() == 0 {
        ranks.pop();
        diffs.pop();
    }
    FreeComplex::new(ring, 0, ranks, None, diffs)
}

fn vector_degree<F: Field>(ring: &Ring<F>, basis: &[Monomial], v: &[(u32, F::Elem)]) -> u32 {
    let kdim = basis.len();
    v.iter().map(|(i, _)| ring.degree(&basis[*i as usize % kdim])).min().unwrap_or(0)
}

fn columns_to_matrix<F: Field>(ring: &Ring<F>, basis: &[Monomial], gens: usize, cols: &[Vec<(u32, F::Elem)>]) -> RingMatrix<F::Elem> {
    let mut m = RingMatrix::zeros(gens, cols.len());
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in vector_to_column(ring, basis, gens, v).into_iter().enumerate() {
            if !x.is_zero() {
                m.set(r, c, x);
            }
        }
    }
    m
}

/// `Σ cone(ζ)` over `k[t_1..t_d]` (generators of degree `gen_degree`) for the
/// Koszul resolution `X` of `k` and `ζ = Σ ι_a ι_b : Σ^{-2} X(-2g) → X`.
/// In degree `i` it is `X_i(-2g) ⊕ X_{i-1}`.
pub fn regular_ring_complex<F: Field>(ring: Arc<Ring<F>>, pairs: &[(usize, usize)]) -> Result<FreeComplex<F>> {
    if ring.is_finite() {
        return Err(Error::Precondition("expected a polynomial ring".into()));
    }
    lefschetz_guard(ring.field().characteristic(), pairs.len())?;
    let g = ring.gen_degree() as i64;
    let k = koszul(ring.clone())?;
    let x = k.complex().clone();
    let source = x.shift(-2).twist(-2 * g);
    let maps: BTreeMap<i64, RingMatrix<F::Elem>> =
        (0..=k.e().saturating_sub(2)).map(|i| (i as i64, k.contraction_matrix(pairs, i + 2))).collect();
    let zeta = ChainMap::new(source, x, maps)?;
    Ok(cone(&zeta)?.shift(1))
}

pub fn standard_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).map(|j| (2 * j, 2 * j + 1)).collect()
}
