//! Expansion of ring-entry matrices to k-linear maps on monomial bases.

use std::collections::HashMap;

use super::RingMatrix;
use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::ring::{Monomial, Ring};

/// k-basis of a free module `R^n`: either all of it (finite rings) or one
/// internal-degree stratum (graded rings with generator degrees).
#[derive(Clone, Debug)]
pub enum Layout {
    Full { gens: usize, kdim: usize },
    Stratum { offsets: Vec<Option<usize>>, shifts: Vec<i64>, dim: usize },
}

impl Layout {
    pub fn full<F: Field>(ring: &Ring<F>, gens: usize) -> Self {
        Layout::Full { gens, kdim: ring.kdim().expect("finite ring") }
    }

    /// Stratum `deg` of `⊕ R(-g_i)`, for polynomial rings.
    pub fn stratum<F: Field>(ring: &Ring<F>, gdegs: &[i64], deg: i64) -> Self {
        assert!(!ring.is_finite(), "strata layouts index polynomial rings");
        let mut offsets = Vec::with_capacity(gdegs.len());
        let mut shifts = Vec::with_capacity(gdegs.len());
        let mut dim = 0;
        for &g in gdegs {
            let s = deg - g;
            let n = ring.stratum_dim(s);
            shifts.push(s);
            if n == 0 {
                offsets.push(None);
            } else {
                offsets.push(Some(dim));
                dim += n;
            }
        }
        Layout::Stratum { offsets, shifts, dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            Layout::Full { gens, kdim } => gens * kdim,
            Layout::Stratum { dim, .. } => *dim,
        }
    }
}

/// Caches stratum monomial lists.
#[derive(Default)]
pub struct StrataCache {
    map: HashMap<i64, Vec<Monomial>>,
}

impl StrataCache {
    pub fn get<F: Field>(&mut self, ring: &Ring<F>, deg: i64) -> &[Monomial] {
        self.map.entry(deg).or_insert_with(|| ring.stratum(deg))
    }
}

fn index_in<F: Field>(ring: &Ring<F>, layout: &Layout, gen: usize, m: &Monomial) -> Option<usize> {
    match layout {
        Layout::Full { kdim, .. } => Some(gen * kdim + ring.basis_index(m)),
        Layout::Stratum { offsets, .. } => offsets[gen].map(|o| o + ring.stratum_index(m)),
    }
}

/// The k-linear map of `m : R^cols → R^rows`, transposed: row `j` is the image
/// of source basis vector `j`. Rank is unaffected and this orientation is the
/// cheap one to build.
pub fn expand_transposed<F: Field>(
    ring: &Ring<F>,
    m: &RingMatrix<F::Elem>,
    src: &Layout,
    tgt: &Layout,
    cache: &mut StrataCache,
) -> SparseMatrix<F> {
    let f = ring.field();
    let mut rows: Vec<Vec<(u32, F::Elem)>> = Vec::with_capacity(src.dim());
    let col_entries: Vec<Vec<(usize, &crate::ring::RingElement<F::Elem>)>> = (0..m.cols())
        .map(|c| (0..m.rows()).filter_map(|r| Some((r, m.get(r, c))).filter(|x| !x.1.is_zero())).collect())
        .collect();
    let basis = if ring.is_finite() { ring.basis() } else { Vec::new() };
    for (c, entries) in col_entries.iter().enumerate().take(m.cols()) {
        let monos: &[Monomial] = match src {
            Layout::Full { .. } => &basis,
            Layout::Stratum { offsets, shifts, .. } => {
                if offsets[c].is_none() {
                    continue;
                }
                cache.get(ring, shifts[c])
            }
        };
        for beta in monos {
            let mut row: Vec<(u32, F::Elem)> = Vec::new();
            for (r, x) in entries {
                for (alpha, v) in x.terms() {
                    if let Some(prod) = ring.mul_monomials(alpha, beta) {
                        let idx = index_in(ring, tgt, *r, &prod).expect("homogeneous differential");
                        row.push((idx as u32, v.clone()));
                    }
                }
            }
            row.sort_unstable_by_key(|x| x.0);
            // merge repeats (possible only for non-homogeneous inputs)
            let mut merged: Vec<(u32, F::Elem)> = Vec::with_capacity(row.len());
            for (i, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == i => last.1 = f.add(&last.1, &v),
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|x| !f.is_zero(&x.1));
            rows.push(merged);
        }
    }
    debug_assert_eq!(rows.len(), src.dim());
    SparseMatrix::from_rows(f.clone(), tgt.dim(), rows)
}

/// The k-linear map of `m` in its natural orientation (target × source).
pub fn expand<F: Field>(
    ring: &Ring<F>,
    m: &RingMatrix<F::Elem>,
    src: &Layout,
    tgt: &Layout,
    cache: &mut StrataCache,
) -> SparseMatrix<F> {
    expand_transposed(ring, m, src, tgt, cache).transpose()
}
