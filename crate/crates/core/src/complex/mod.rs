//! Bounded complexes of finite free modules over a `Ring`.
//!
//! A complex stores the homological degrees `low..=high`, the rank of each
//! free module, optional internal degrees of the generators, and matrices
//! `d_i : F_i → F_{i-1}` whose columns are the images of the generators of `F_i`.

mod dm;
pub mod expand;
mod matrix;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{Ring, RingElement, RingJson};
use expand::{expand_transposed, Layout, StrataCache};

pub use dm::DifferentialModule;
pub use matrix::RingMatrix;

/// Internal degrees this far below the cutoff are reported as trusted.
pub const UNTRUSTED_STRATA: i64 = 2;
pub const DEFAULT_CUTOFF: i64 = 24;

#[derive(Clone, Debug)]
pub struct FreeComplex<F: Field> {
    ring: Arc<Ring<F>>,
    low: i64,
    ranks: Vec<usize>,
    gdegs: Option<Vec<Vec<i64>>>,
    // diffs[k] : F_{low+k+1} → F_{low+k}
    diffs: Vec<RingMatrix<F::Elem>>,
}

impl<F: Field> PartialEq for FreeComplex<F> {
    fn eq(&self, other: &Self) -> bool {
        self.low == other.low
            && self.ranks == other.ranks
            && self.gdegs == other.gdegs
            && self.diffs == other.diffs
            && self.ring.presentation() == other.ring.presentation()
            && self.ring.field().characteristic() == other.ring.field().characteristic()
    }
}

impl<F: Field> FreeComplex<F> {
    /// Validates shapes, homogeneity (when generator degrees are given) and `d∘d = 0`.
    pub fn new(
        ring: Arc<Ring<F>>,
        low: i64,
        ranks: Vec<usize>,
        gdegs: Option<Vec<Vec<i64>>>,
        diffs: Vec<RingMatrix<F::Elem>>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(ring, low, ranks, gdegs, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Validates shapes and homogeneity only.
    pub(crate) fn new_unchecked(
        ring: Arc<Ring<F>>,
        low: i64,
        ranks: Vec<usize>,
        gdegs: Option<Vec<Vec<i64>>>,
        diffs: Vec<RingMatrix<F::Elem>>,
    ) -> Result<Self> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::InvalidComplex(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(Error::InvalidComplex(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    low + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        if let Some(g) = &gdegs {
            if g.len() != ranks.len() || g.iter().zip(&ranks).any(|(g, r)| g.len() != *r) {
                return Err(Error::InvalidComplex("generator degrees do not match ranks".into()));
            }
            for (k, d) in diffs.iter().enumerate() {
                for (r, c, x) in d.entries() {
                    let want = g[k + 1][c] - g[k][r];
                    if ring.homogeneous_degree(x).map(|v| v as i64) != Some(want) {
                        return Err(Error::InvalidComplex(format!(
                            "entry ({r},{c}) of d_{} is not homogeneous of degree {want}",
                            low + k as i64 + 1
                        )));
                    }
                }
            }
        }
        Ok(Self { ring, low, ranks, gdegs, diffs })
    }

    pub fn zero(ring: Arc<Ring<F>>) -> Self {
        Self { ring, low: 0, ranks: Vec::new(), gdegs: None, diffs: Vec::new() }
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let p = self.ring.mat_mul(&self.diffs[k - 1], &self.diffs[k])?;
            if !p.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d_{} ∘ d_{} is not zero",
                    self.low + k as i64,
                    self.low + k as i64 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn low(&self) -> i64 {
        self.low
    }
    /// Highest degree; `low - 1` for the zero complex.
    pub fn high(&self) -> i64 {
        self.low + self.ranks.len() as i64 - 1
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }
    pub fn gdegs(&self) -> Option<&[Vec<i64>]> {
        self.gdegs.as_deref()
    }

    pub fn rank_at(&self, i: i64) -> usize {
        if i < self.low || i > self.high() {
            0
        } else {
            self.ranks[(i - self.low) as usize]
        }
    }

    pub fn gdegs_at(&self, i: i64) -> Option<&[i64]> {
        let g = self.gdegs.as_ref()?;
        if i < self.low || i > self.high() {
            Some(&[])
        } else {
            Some(&g[(i - self.low) as usize])
        }
    }

    /// `d_i : F_i → F_{i-1}`, when both ends are inside the range.
    pub fn d(&self, i: i64) -> Option<&RingMatrix<F::Elem>> {
        if i <= self.low || i > self.high() {
            None
        } else {
            Some(&self.diffs[(i - self.low - 1) as usize])
        }
    }

    /// `d_i` with zero matrices outside the range.
    pub fn d_or_zero(&self, i: i64) -> RingMatrix<F::Elem> {
        self.d(i).cloned().unwrap_or_else(|| RingMatrix::zeros(self.rank_at(i - 1), self.rank_at(i)))
    }

    /// Every differential entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| self.ring.mat_is_minimal(d))
    }

    /// `(Σ^m X)_i = X_{i-m}` with differential `(-1)^m d`.
    pub fn shift(&self, m: i64) -> Self {
        let diffs = if m.rem_euclid(2) == 1 {
            self.diffs.iter().map(|d| self.ring.mat_neg(d)).collect()
        } else {
            self.diffs.clone()
        };
        Self { ring: self.ring.clone(), low: self.low + m, ranks: self.ranks.clone(), gdegs: self.gdegs.clone(), diffs }
    }

    /// Adds `k` to every generator's internal degree.
    pub fn twist(&self, k: i64) -> Self {
        let gdegs = self.gdegs.as_ref().map(|g| g.iter().map(|v| v.iter().map(|x| x + k).collect()).collect());
        Self { gdegs, ..self.clone() }
    }

    pub fn forget_grading(&self) -> Self {
        Self { gdegs: None, ..self.clone() }
    }

    /// Keeps degrees `<= high` (brutal truncation).
    pub fn truncate_above(&self, high: i64) -> Self {
        if high >= self.high() {
            return self.clone();
        }
        if high < self.low {
            return Self::zero(self.ring.clone());
        }
        let n = (high - self.low + 1) as usize;
        Self {
            ring: self.ring.clone(),
            low: self.low,
            ranks: self.ranks[..n].to_vec(),
            gdegs: self.gdegs.as_ref().map(|g| g[..n].to_vec()),
            diffs: self.diffs[..n - 1].to_vec(),
        }
    }

    /// Exact homology lengths. Finite rings use the whole k-basis; polynomial
    /// rings need generator degrees and an internal-degree `cutoff`.
    pub fn homology(&self, cutoff: Option<i64>) -> Result<HomologyTable> {
        if self.ranks.is_empty() {
            return Ok(HomologyTable::finite(0, Vec::new()));
        }
        let ring = &*self.ring;
        if ring.is_finite() {
            let kdim = ring.kdim().unwrap();
            let degs: Vec<i64> = (self.low + 1..=self.high()).collect();
            let ranks: Vec<usize> = degs.par_iter().map(|&i| self.expanded_rank_full(i)).collect();
            let rank_of = |i: i64| if i > self.low && i <= self.high() { ranks[(i - self.low - 1) as usize] } else { 0 };
            let lengths = (self.low..=self.high())
                .map(|i| self.rank_at(i) * kdim - rank_of(i) - rank_of(i + 1))
                .collect();
            return Ok(HomologyTable::finite(self.low, lengths));
        }
        let cutoff = cutoff.ok_or(Error::CutoffRequired)?;
        let gd = self.gdegs.as_ref().ok_or_else(|| Error::Precondition("graded homology needs generator degrees".into()))?;
        let floor = gd.iter().flatten().copied().min().unwrap_or(0);
        let tasks: Vec<(i64, i64)> =
            (floor..=cutoff).flat_map(|s| (self.low + 1..=self.high()).map(move |i| (i, s))).collect();
        let ranks: BTreeMap<(i64, i64), usize> =
            tasks.par_iter().map(|&(i, s)| ((i, s), self.expanded_rank_stratum(i, s))).collect();
        let mut entries = Vec::new();
        for s in floor..=cutoff {
            for i in self.low..=self.high() {
                let dim = Layout::stratum(ring, self.gdegs_at(i).unwrap(), s).dim();
                let len = dim - ranks.get(&(i, s)).copied().unwrap_or(0) - ranks.get(&(i + 1, s)).copied().unwrap_or(0);
                if len > 0 {
                    entries.push(StratumEntry { hom: i, internal: s, length: len, trusted: s <= cutoff - UNTRUSTED_STRATA });
                }
            }
        }
        Ok(HomologyTable::graded(self.low, self.ranks.len(), (floor, cutoff), entries))
    }

    fn expanded_rank_full(&self, i: i64) -> usize {
        let d = self.d(i).unwrap();
        let src = Layout::full(&self.ring, d.cols());
        let tgt = Layout::full(&self.ring, d.rows());
        expand_transposed(&self.ring, d, &src, &tgt, &mut StrataCache::default()).rank()
    }

    fn expanded_rank_stratum(&self, i: i64, s: i64) -> usize {
        let d = self.d(i).unwrap();
        let src = Layout::stratum(&self.ring, self.gdegs_at(i).unwrap(), s);
        let tgt = Layout::stratum(&self.ring, self.gdegs_at(i - 1).unwrap(), s);
        if src.dim() == 0 || tgt.dim() == 0 {
            return 0;
        }
        expand_transposed(&self.ring, d, &src, &tgt, &mut StrataCache::default()).rank()
    }

    /// Splits off contractible summands `R --u--> R` with `u` a unit, lowest
    /// degree first and row-major within a degree.
    pub fn minimize(&self) -> Result<Self> {
        self.minimize_with(&|_, r, c| ((r as u64) << 32) | c as u64)
    }

    /// As `minimize`, choosing among unit entries of `d_i` the one with least
    /// `key(i, row, col)`; indices refer to the original generator positions.
    pub fn minimize_with(&self, key: &dyn Fn(i64, usize, usize) -> u64) -> Result<Self> {
        let ring = &*self.ring;
        let mut ranks = self.ranks.clone();
        let mut gdegs = self.gdegs.clone();
        let mut diffs = self.diffs.clone();
        // original positions of the surviving generators, per degree
        let mut ids: Vec<Vec<usize>> = ranks.iter().map(|&n| (0..n).collect()).collect();
        for k in 0..diffs.len() {
            let deg = self.low + k as i64 + 1;
            let mut units: BTreeSet<(usize, usize)> = diffs[k]
                .entries()
                .filter(|(_, _, x)| ring.is_unit(x))
                .map(|(r, c, _)| (ids[k][r], ids[k + 1][c]))
                .collect();
            while let Some(&(or, oc)) = units.iter().min_by_key(|&&(r, c)| (key(deg, r, c), r, c)) {
                let r = ids[k].binary_search(&or).unwrap();
                let c = ids[k + 1].binary_search(&oc).unwrap();
                let d = &mut diffs[k];
                let uinv = ring.inverse(d.get(r, c))?;
                let gamma: Vec<(usize, RingElement<F::Elem>)> = (0..d.rows())
                    .filter(|&i| i != r && !d.get(i, c).is_zero())
                    .map(|i| (i, ring.mul(d.get(i, c), &uinv)))
                    .collect();
                let delta: Vec<(usize, RingElement<F::Elem>)> = (0..d.cols())
                    .filter(|&j| j != c && !d.get(r, j).is_zero())
                    .map(|j| (j, d.get(r, j).clone()))
                    .collect();
                for (i, g) in &gamma {
                    for (j, dl) in &delta {
                        let v = ring.sub(d.get(*i, *j), &ring.mul(g, dl));
                        let (oi, oj) = (ids[k][*i], ids[k + 1][*j]);
                        if ring.is_unit(&v) {
                            units.insert((oi, oj));
                        } else {
                            units.remove(&(oi, oj));
                        }
                        d.set(*i, *j, v);
                    }
                }
                d.remove_row(r);
                d.remove_col(c);
                if k + 1 < diffs.len() {
                    diffs[k + 1].remove_row(c);
                }
                if k >= 1 {
                    diffs[k - 1].remove_col(r);
                }
                units.retain(|&(x, y)| x != or && y != oc);
                ids[k].remove(r);
                ids[k + 1].remove(c);
                ranks[k] -= 1;
                ranks[k + 1] -= 1;
                if let Some(g) = gdegs.as_mut() {
                    g[k].remove(r);
                    g[k + 1].remove(c);
                }
            }
        }
        // trim zero modules at both ends
        let first = ranks.iter().position(|&r| r > 0);
        let Some(first) = first else {
            return Ok(Self::zero(self.ring.clone()));
        };
        let last = ranks.iter().rposition(|&r| r > 0).unwrap();
        let out = Self {
            ring: self.ring.clone(),
            low: self.low + first as i64,
            ranks: ranks[first..=last].to_vec(),
            gdegs: gdegs.map(|g| g[first..=last].to_vec()),
            diffs: diffs[first..last].to_vec(),
        };
        Ok(out)
    }

    /// The direct sum of the modules with `d` as a square-zero endomorphism.
    pub fn compress(&self) -> DifferentialModule<F> {
        let n = self.total_rank();
        let mut offsets = Vec::with_capacity(self.ranks.len() + 1);
        let mut acc = 0;
        for &r in &self.ranks {
            offsets.push(acc);
            acc += r;
        }
        let mut d = RingMatrix::zeros(n, n);
        for (k, m) in self.diffs.iter().enumerate() {
            d.put_block(offsets[k], offsets[k + 1], m);
        }
        let flag = self.ranks.iter().scan(0, |s, &r| {
            *s += r;
            Some(*s)
        });
        let gdegs = self.gdegs.as_ref().map(|g| g.iter().flatten().copied().collect());
        DifferentialModule::new_unchecked(self.ring.clone(), d, flag.collect(), gdegs)
    }

    pub fn to_json(&self) -> ComplexJson {
        let ring = &*self.ring;
        ComplexJson {
            version: COMPLEX_JSON_VERSION,
            ring: ring.descriptor(),
            range: [self.low, self.high()],
            ranks: self.ranks.clone(),
            gdegs: self.gdegs.clone(),
            diffs: self
                .diffs
                .iter()
                .map(|d| d.entries().map(|(r, c, x)| (r, c, ring.element_to_json(x))).collect())
                .collect(),
        }
    }

    pub fn from_json(field: F, j: &ComplexJson) -> Result<Self> {
        if j.version != COMPLEX_JSON_VERSION {
            return Err(Error::Parse(format!("unsupported complex version {}", j.version)));
        }
        let ring = Arc::new(Ring::from_descriptor(field, &j.ring)?);
        if j.range[1] - j.range[0] + 1 != j.ranks.len() as i64 {
            return Err(Error::Parse("range does not match ranks".into()));
        }
        if j.diffs.len() + 1 != j.ranks.len().max(1) {
            return Err(Error::Parse("wrong number of differentials".into()));
        }
        let mut diffs = Vec::with_capacity(j.diffs.len());
        for (k, entries) in j.diffs.iter().enumerate() {
            let mut m = RingMatrix::zeros(j.ranks[k], j.ranks[k + 1]);
            for (r, c, t) in entries {
                if *r >= m.rows() || *c >= m.cols() || !m.get(*r, *c).is_zero() {
                    return Err(Error::Parse(format!("bad or repeated entry ({r},{c})")));
                }
                let x = ring.element_from_json(t)?;
                if x.is_zero() {
                    return Err(Error::Parse(format!("stored zero at ({r},{c})")));
                }
                m.set(*r, *c, x);
            }
            diffs.push(m);
        }
        Self::new(ring, j.range[0], j.ranks.clone(), j.gdegs.clone(), diffs)
    }
}

pub const COMPLEX_JSON_VERSION: u32 = 1;

pub type RingEntryJson = (usize, usize, Vec<(Vec<u32>, String)>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub version: u32,
    pub ring: RingJson,
    pub range: [i64; 2],
    pub ranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gdegs: Option<Vec<Vec<i64>>>,
    pub diffs: Vec<Vec<RingEntryJson>>,
}

/// A degree-zero chain map `f_i : X_i → Y_i`.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    pub source: FreeComplex<F>,
    pub target: FreeComplex<F>,
    maps: BTreeMap<i64, RingMatrix<F::Elem>>,
}

impl<F: Field> ChainMap<F> {
    /// Checks shapes and `d_Y f_i = f_{i-1} d_X` in every degree.
    pub fn new(source: FreeComplex<F>, target: FreeComplex<F>, maps: BTreeMap<i64, RingMatrix<F::Elem>>) -> Result<Self> {
        let m = Self { source, target, maps };
        for (&i, f) in &m.maps {
            if f.rows() != m.target.rank_at(i) || f.cols() != m.source.rank_at(i) {
                return Err(Error::NotChainMap(format!("f_{i} has the wrong shape")));
            }
        }
        let ring = m.source.ring().clone();
        let lo = m.source.low().min(m.target.low());
        let hi = m.source.high().max(m.target.high());
        for i in lo..=hi + 1 {
            let left = ring.mat_mul(&m.target.d_or_zero(i), &m.at(i))?;
            let right = ring.mat_mul(&m.at(i - 1), &m.source.d_or_zero(i))?;
            if left != right {
                return Err(Error::NotChainMap(format!("d f ≠ f d in degree {i}")));
            }
        }
        Ok(m)
    }

    pub fn at(&self, i: i64) -> RingMatrix<F::Elem> {
        self.maps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| RingMatrix::zeros(self.target.rank_at(i), self.source.rank_at(i)))
    }

    pub fn identity(x: &FreeComplex<F>) -> Self {
        let maps = (x.low()..=x.high()).map(|i| (i, x.ring().mat_identity(x.rank_at(i)))).collect();
        Self { source: x.clone(), target: x.clone(), maps }
    }

    pub fn zero(source: FreeComplex<F>, target: FreeComplex<F>) -> Self {
        Self { source, target, maps: BTreeMap::new() }
    }
}

/// `cone(f)_i = X_{i-1} ⊕ Y_i` with `d(x, y) = (-d_X x, f(x) + d_Y y)`.
pub fn cone<F: Field>(f: &ChainMap<F>) -> Result<FreeComplex<F>> {
    let (x, y) = (&f.source, &f.target);
    let ring = x.ring().clone();
    let empty = |c: &FreeComplex<F>| c.ranks.is_empty();
    let (lo, hi) = match (empty(x), empty(y)) {
        (true, true) => return Ok(FreeComplex::zero(ring)),
        (true, false) => (y.low(), y.high()),
        (false, true) => (x.low() + 1, x.high() + 1),
        (false, false) => ((x.low() + 1).min(y.low()), (x.high() + 1).max(y.high())),
    };
    let ranks: Vec<usize> = (lo..=hi).map(|i| x.rank_at(i - 1) + y.rank_at(i)).collect();
    let graded = x.gdegs.is_some() && y.gdegs.is_some() || (x.gdegs.is_some() && empty(y)) || (y.gdegs.is_some() && empty(x));
    let gdegs = graded.then(|| {
        (lo..=hi)
            .map(|i| {
                let mut g = x.gdegs_at(i - 1).map(|v| v.to_vec()).unwrap_or_default();
                g.extend(y.gdegs_at(i).map(|v| v.to_vec()).unwrap_or_default());
                g
            })
            .collect()
    });
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        let (xs, ys) = (x.rank_at(i - 1), y.rank_at(i));
        let (xt, yt) = (x.rank_at(i - 2), y.rank_at(i - 1));
        let neg_dx = ring.mat_neg(&x.d_or_zero(i - 1));
        let fi = f.at(i - 1);
        let dy = y.d_or_zero(i);
        diffs.push(RingMatrix::from_blocks((xt, yt), (xs, ys), [Some(&neg_dx), None, Some(&fi), Some(&dy)]));
    }
    FreeComplex::new(ring, lo, ranks, gdegs, diffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEntry {
    pub hom: i64,
    pub internal: i64,
    pub length: usize,
    pub trusted: bool,
}

/// Homology lengths per homological degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub low: i64,
    pub lengths: Vec<usize>,
    pub total: usize,
    /// Nonzero (homological, internal) entries for graded computations.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumEntry>,
    /// Internal-degree window examined, for graded computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
}

impl HomologyTable {
    fn finite(low: i64, lengths: Vec<usize>) -> Self {
        let total = lengths.iter().sum();
        Self { low, lengths, total, strata: Vec::new(), window: None }
    }

    /// Totals only count strata below the untrusted boundary.
    fn graded(low: i64, n: usize, window: (i64, i64), strata: Vec<StratumEntry>) -> Self {
        let mut lengths = vec![0; n];
        for e in strata.iter().filter(|e| e.trusted) {
            lengths[(e.hom - low) as usize] += e.length;
        }
        let total = lengths.iter().sum();
        Self { low, lengths, total, strata, window: Some(window) }
    }

    pub fn at(&self, i: i64) -> usize {
        if i < self.low || i >= self.low + self.lengths.len() as i64 {
            0
        } else {
            self.lengths[(i - self.low) as usize]
        }
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        (0..self.lengths.len()).filter(|&k| self.lengths[k] > 0).map(|k| self.low + k as i64).collect()
    }

    pub fn untrusted_nonzero(&self) -> bool {
        self.strata.iter().any(|e| !e.trusted)
    }
}
