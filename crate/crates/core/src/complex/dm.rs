//! Differential modules: a free module `R^n` with a square-zero endomorphism.

use std::sync::Arc;

use rayon::prelude::*;

use super::expand::{expand_transposed, Layout, StrataCache};
use super::{RingMatrix, UNTRUSTED_STRATA};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct DifferentialModule<F: Field> {
    ring: Arc<Ring<F>>,
    d: RingMatrix<F::Elem>,
    /// Cumulative ranks of a free flag; block `i` covers `flag[i-1]..flag[i]`.
    flag: Vec<usize>,
    gdegs: Option<Vec<i64>>,
}

impl<F: Field> DifferentialModule<F> {
    pub fn new(
        ring: Arc<Ring<F>>,
        d: RingMatrix<F::Elem>,
        flag: Vec<usize>,
        gdegs: Option<Vec<i64>>,
    ) -> Result<Self> {
        if d.rows() != d.cols() {
            return Err(Error::InvalidComplex("differential must be square".into()));
        }
        if !ring.mat_mul(&d, &d)?.is_zero() {
            return Err(Error::InvalidComplex("D∘D is not zero".into()));
        }
        if flag.last().copied().unwrap_or(0) != d.rows() || flag.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidComplex("flag must be increasing and end at the rank".into()));
        }
        if gdegs.as_ref().is_some_and(|g| g.len() != d.rows()) {
            return Err(Error::InvalidComplex("generator degrees do not match rank".into()));
        }
        Ok(Self::new_unchecked(ring, d, flag, gdegs))
    }

    pub(crate) fn new_unchecked(
        ring: Arc<Ring<F>>,
        d: RingMatrix<F::Elem>,
        flag: Vec<usize>,
        gdegs: Option<Vec<i64>>,
    ) -> Self {
        Self { ring, d, flag, gdegs }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn d(&self) -> &RingMatrix<F::Elem> {
        &self.d
    }
    pub fn rank(&self) -> usize {
        self.d.rows()
    }
    pub fn flag(&self) -> &[usize] {
        &self.flag
    }

    /// `D` maps each flag block into the span of the earlier blocks.
    pub fn flag_witness_holds(&self) -> bool {
        let mut start = 0;
        for (i, &end) in self.flag.iter().enumerate() {
            let below = if i == 0 { 0 } else { self.flag[i - 1] };
            for c in start..end {
                if (below..self.rank()).any(|r| !self.d.get(r, c).is_zero()) {
                    return false;
                }
            }
            start = end;
        }
        true
    }

    /// Length of `ker D / im D`. Polynomial rings count the graded pieces up
    /// to `cutoff - 2`, which requires a grading on the generators for which
    /// `D` has degree zero.
    pub fn homology_length(&self, cutoff: Option<i64>) -> Result<usize> {
        let ring = &*self.ring;
        let n = self.rank();
        if ring.is_finite() {
            let l = Layout::full(ring, n);
            let r = expand_transposed(ring, &self.d, &l, &l, &mut StrataCache::default()).rank();
            return Ok(n * ring.kdim().unwrap() - 2 * r);
        }
        let cutoff = cutoff.ok_or(Error::CutoffRequired)?;
        let g = self.gdegs.as_ref().ok_or_else(|| Error::Precondition("graded homology needs generator degrees".into()))?;
        for (r, c, x) in self.d.entries() {
            if ring.homogeneous_degree(x).map(|v| v as i64) != Some(g[c] - g[r]) {
                return Err(Error::Precondition("differential is not of degree zero".into()));
            }
        }
        let floor = g.iter().copied().min().unwrap_or(0);
        let lens: Vec<usize> = (floor..=cutoff - UNTRUSTED_STRATA)
            .into_par_iter()
            .map(|s| {
                let l = Layout::stratum(ring, g, s);
                if l.dim() == 0 {
                    return 0;
                }
                let r = expand_transposed(ring, &self.d, &l, &l, &mut StrataCache::default()).rank();
                l.dim() - 2 * r
            })
            .collect();
        Ok(lens.iter().sum())
    }
}
