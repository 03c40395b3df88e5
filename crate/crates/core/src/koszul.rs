//! The Koszul complex on the variables of a monomial complete intersection,
//! its product, and the cone of multiplication by a degree-two cycle.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{cone, ChainMap, FreeComplex, RingMatrix};
use crate::error::{Error, Result};
use crate::exterior::{bits_below, mask_rank, masks_of_degree, wedge_sign_odd, ExteriorAlgebra, LefschetzProfile};
use crate::field::{lefschetz_guard, Field};
use crate::ring::{Ring, RingElement};

/// A Koszul chain: coefficients in the basis `e_S`, all `S` of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulChain<E> {
    pub degree: usize,
    pub coeffs: Vec<RingElement<E>>,
}

pub type KoszulCycle<E> = KoszulChain<E>;

#[derive(Clone, Debug)]
pub struct KoszulComplex<F: Field> {
    complex: FreeComplex<F>,
    e: usize,
    masks: Vec<Vec<u32>>,
}

/// Builds the Koszul complex `K` with `K_i` spanned by `e_S`, `|S| = i`, in
/// increasing mask order, and `d(e_S) = Σ_{i∈S} (-1)^{#S below i} t_i e_{S∖i}`.
pub fn koszul<F: Field>(ring: Arc<Ring<F>>) -> Result<KoszulComplex<F>> {
    let e = ring.nvars();
    let g = ring.gen_degree() as i64;
    let masks: Vec<Vec<u32>> = (0..=e).map(|i| masks_of_degree(e, i)).collect();
    let mut diffs = Vec::with_capacity(e);
    for i in 1..=e {
        let mut m = RingMatrix::zeros(masks[i - 1].len(), masks[i].len());
        for (c, &s) in masks[i].iter().enumerate() {
            for g in 0..e as u32 {
                if s >> g & 1 == 0 {
                    continue;
                }
                let t = ring.var(g as usize);
                let entry = if bits_below(s, g) % 2 == 1 { ring.neg(&t) } else { t };
                m.set(mask_rank(s & !(1 << g)), c, entry);
            }
        }
        diffs.push(m);
    }
    let ranks = masks.iter().map(Vec::len).collect();
    let gdegs = Some(masks.iter().map(|v| v.iter().map(|s| s.count_ones() as i64 * g).collect()).collect());
    let complex = FreeComplex::new(ring, 0, ranks, gdegs, diffs)?;
    Ok(KoszulComplex { complex, e, masks })
}

impl<F: Field> KoszulComplex<F> {
    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }
    pub fn ring(&self) -> &Arc<Ring<F>> {
        self.complex.ring()
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// Basis labels of `K_i`.
    pub fn masks(&self, i: usize) -> &[u32] {
        &self.masks[i]
    }

    pub fn zero_chain(&self, degree: usize) -> KoszulChain<F::Elem> {
        KoszulChain { degree, coeffs: vec![RingElement::zero(); self.masks[degree].len()] }
    }

    /// `x · e_S`.
    pub fn monomial_chain(&self, mask: u32, x: RingElement<F::Elem>) -> KoszulChain<F::Elem> {
        let mut c = self.zero_chain(mask.count_ones() as usize);
        c.coeffs[mask_rank(mask)] = x;
        c
    }

    pub fn add(&self, a: &KoszulChain<F::Elem>, b: &KoszulChain<F::Elem>) -> Result<KoszulChain<F::Elem>> {
        if a.degree != b.degree {
            return Err(Error::Dimension("adding Koszul chains of different degrees".into()));
        }
        let ring = self.ring();
        Ok(KoszulChain { degree: a.degree, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| ring.add(x, y)).collect() })
    }

    /// The graded-commutative product `(Σ r_S e_S)(Σ s_T e_T) = Σ ±r_S s_T e_{S∪T}`.
    pub fn product(&self, a: &KoszulChain<F::Elem>, b: &KoszulChain<F::Elem>) -> KoszulChain<F::Elem> {
        let ring = self.ring();
        let deg = a.degree + b.degree;
        if deg > self.e {
            return KoszulChain { degree: deg, coeffs: Vec::new() };
        }
        let mut out = self.zero_chain(deg);
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let s = self.masks[a.degree][i];
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let t = self.masks[b.degree][j];
                if s & t != 0 {
                    continue;
                }
                let mut v = ring.mul(x, y);
                if wedge_sign_odd(s, t) {
                    v = ring.neg(&v);
                }
                let k = mask_rank(s | t);
                out.coeffs[k] = ring.add(&out.coeffs[k], &v);
            }
        }
        out
    }

    pub fn differential(&self, a: &KoszulChain<F::Elem>) -> Result<KoszulChain<F::Elem>> {
        if a.degree == 0 {
            return Ok(KoszulChain { degree: 0, coeffs: Vec::new() });
        }
        let ring = self.ring();
        let d = self.complex.d(a.degree as i64).unwrap();
        let mut out = self.zero_chain(a.degree - 1);
        for (r, c, x) in d.entries() {
            if !a.coeffs[c].is_zero() {
                out.coeffs[r] = ring.add(&out.coeffs[r], &ring.mul(x, &a.coeffs[c]));
            }
        }
        Ok(out)
    }

    pub fn is_cycle(&self, a: &KoszulChain<F::Elem>) -> Result<bool> {
        Ok(self.differential(a)?.coeffs.iter().all(|x| x.is_zero()))
    }

    /// The cycles `z_i = t_i^{a_i - 1} e_i`.
    pub fn h1_basis(&self) -> Result<Vec<KoszulCycle<F::Elem>>> {
        let ring = self.ring();
        let a = ring
            .exponents()
            .ok_or_else(|| Error::Precondition("H_1 cycles are defined over complete intersections".into()))?
            .to_vec();
        Ok((0..self.e).map(|i| self.monomial_chain(1 << i, ring.var_pow(i, a[i] - 1))).collect())
    }

    /// `z = Σ z_a z_b` over consecutive pairs `(1,2), (3,4), …` of the first `2m` variables.
    pub fn w_cycle(&self, m: usize) -> Result<KoszulCycle<F::Elem>> {
        let pairs: Vec<(usize, usize)> = (0..m).map(|j| (2 * j, 2 * j + 1)).collect();
        self.w_cycle_paired(&pairs)
    }

    /// `z = Σ z_a z_b` over the given disjoint pairs of variable indices.
    pub fn w_cycle_paired(&self, pairs: &[(usize, usize)]) -> Result<KoszulCycle<F::Elem>> {
        lefschetz_guard(self.ring().field().characteristic(), pairs.len())?;
        let mut used = 0u64;
        for &(a, b) in pairs {
            if a >= self.e || b >= self.e || a == b || used >> a & 1 == 1 || used >> b & 1 == 1 {
                return Err(Error::Precondition(format!("{pairs:?} is not a set of disjoint pairs of {} variables", self.e)));
            }
            used |= 1 << a | 1 << b;
        }
        if self.e < 2 {
            return Err(Error::Precondition("a degree-two cycle needs at least two variables".into()));
        }
        let h1 = self.h1_basis()?;
        let mut z = self.zero_chain(2);
        for &(a, b) in pairs {
            z = self.add(&z, &self.product(&h1[a], &h1[b]))?;
        }
        debug_assert!(self.is_cycle(&z)?);
        Ok(z)
    }

    /// Matrix of `u ↦ u·z` from `K_i` to `K_{i+deg z}`.
    pub fn right_mult_matrix(&self, z: &KoszulChain<F::Elem>, i: usize) -> RingMatrix<F::Elem> {
        let j = i + z.degree;
        if j > self.e {
            return RingMatrix::zeros(0, self.masks[i].len());
        }
        let ring = self.ring();
        let mut m = RingMatrix::zeros(self.masks[j].len(), self.masks[i].len());
        for (c, &s) in self.masks[i].iter().enumerate() {
            let u = self.monomial_chain(s, ring.one());
            let p = self.product(&u, z);
            for (r, x) in p.coeffs.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x);
                }
            }
        }
        m
    }

    /// Matrix of `Σ_{(a,b)} ι_a ι_b` from `K_i` to `K_{i-2}`, where `ι_g` is the
    /// contraction `e_S ↦ (-1)^{#S below g} e_{S∖g}`. Commutes with `d = Σ t_g ι_g`.
    pub fn contraction_matrix(&self, pairs: &[(usize, usize)], i: usize) -> RingMatrix<F::Elem> {
        if i < 2 {
            return RingMatrix::zeros(0, self.masks[i].len());
        }
        let ring = self.ring();
        let mut m = RingMatrix::zeros(self.masks[i - 2].len(), self.masks[i].len());
        for (c, &s) in self.masks[i].iter().enumerate() {
            for &(a, b) in pairs {
                let (a, b) = (a as u32, b as u32);
                if s >> a & 1 == 0 || s >> b & 1 == 0 {
                    continue;
                }
                let s1 = s & !(1 << b);
                let neg = (bits_below(s, b) + bits_below(s1, a)) % 2 == 1;
                let r = mask_rank(s1 & !(1 << a));
                let v = if neg { ring.neg(&ring.one()) } else { ring.one() };
                m.set(r, c, ring.add(m.get(r, c), &v));
            }
        }
        m
    }

    /// `λ_z : K → Σ^{-2} K`, `u ↦ u z`, for a degree-two cycle `z`.
    pub fn lambda(&self, z: &KoszulCycle<F::Elem>) -> Result<ChainMap<F>> {
        if z.degree != 2 || !self.is_cycle(z)? {
            return Err(Error::Precondition("λ_z needs a degree-two cycle".into()));
        }
        // z need not be homogeneous, so the cone is built ungraded
        let source = self.complex.forget_grading();
        let target = source.shift(-2);
        let maps: BTreeMap<i64, RingMatrix<F::Elem>> =
            (0..=self.e.saturating_sub(2)).map(|i| (i as i64, self.right_mult_matrix(z, i))).collect();
        ChainMap::new(source, target, maps)
    }
}

/// The cone of `λ_z` on the Koszul complex, `z` the cycle of `pairs`.
pub struct CarlssonComplex<F: Field> {
    pub koszul: KoszulComplex<F>,
    pub z: KoszulCycle<F::Elem>,
    pub pairs: Vec<(usize, usize)>,
    pub complex: FreeComplex<F>,
}

impl<F: Field> CarlssonComplex<F> {
    /// Kernel and cokernel of `λ_w` on the exterior algebra on `e` generators,
    /// which predicts the homology of the cone.
    pub fn predicted_profile(&self) -> Result<LefschetzProfile> {
        let ring = self.koszul.ring();
        let alg = ExteriorAlgebra::new(ring.field().clone(), self.koszul.e)?;
        let w = alg.paired_w(&self.pairs)?;
        alg.lefschetz_profile(&w)
    }
}

/// `cone(λ_z)` with `z` from `m` consecutive pairs.
pub fn carlsson_complex<F: Field>(ring: Arc<Ring<F>>, m: usize) -> Result<CarlssonComplex<F>> {
    let pairs: Vec<(usize, usize)> = (0..m).map(|j| (2 * j, 2 * j + 1)).collect();
    carlsson_complex_paired(ring, &pairs)
}

pub fn carlsson_complex_paired<F: Field>(ring: Arc<Ring<F>>, pairs: &[(usize, usize)]) -> Result<CarlssonComplex<F>> {
    let koszul = koszul(ring)?;
    let z = koszul.w_cycle_paired(pairs)?;
    let lam = koszul.lambda(&z).map_err(|e| match e {
        Error::NotChainMap(s) => Error::NotChainMap(format!("internal error, λ_z is not a chain map: {s}")),
        other => other,
    })?;
    let complex = cone(&lam)?;
    Ok(CarlssonComplex { koszul, z, pairs: pairs.to_vec(), complex })
}
