//! Sparse and dense matrices over exact fields.
//!
//! Ranks are computed by splitting a matrix into the connected components of
//! its row/column incidence graph and running Markowitz-style sparse
//! elimination on each block, finishing densely once a block fills in. Kernels
//! and solutions use a canonical reduced echelon form (pivots are the
//! lexicographically first independent columns), so serialized bases do not
//! depend on elimination order.

mod components;
mod dense;
mod echelon;
mod sparse_elim;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

pub use components::{split_components, Component};
pub use dense::DenseMatrix;
pub use echelon::Echelon;

/// Sparse row vector: strictly increasing column indices, nonzero values.
pub type SparseRow<E> = Vec<(u32, E)>;

/// Tuning for the rank kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationConfig {
    /// Switch to dense elimination once `nnz > dense_density * rows * cols`.
    pub dense_density: f64,
    /// Switch to dense elimination once at most this many columns remain.
    pub dense_cols: usize,
    /// Split into connected components before eliminating.
    pub split_components: bool,
    /// Process components on the rayon pool.
    pub parallel: bool,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        Self { dense_density: 0.2, dense_cols: 512, split_components: true, parallel: true }
    }
}

impl EliminationConfig {
    pub fn serial() -> Self {
        Self { parallel: false, ..Self::default() }
    }

    pub fn dense_only() -> Self {
        Self { dense_density: 0.0, dense_cols: usize::MAX, split_components: false, parallel: false }
    }
}

/// A matrix in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.indptr == other.indptr
            && self.indices == other.indices
            && self.data == other.data
    }
}

impl<F: Field> Eq for SparseMatrix<F> {}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), data: Vec::new() }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let mut m = Self::zeros(field, n, n);
        m.indices = (0..n as u32).collect();
        m.data = vec![one; n];
        m.indptr = (0..=n).collect();
        m
    }

    /// Strict constructor: rejects out-of-range indices, duplicate positions
    /// and explicit zeros.
    pub fn from_triplets(
        field: F,
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, F::Elem)>,
    ) -> Result<Self> {
        check_dims(rows, cols)?;
        for (r, c, v) in &triplets {
            if *r >= rows || *c >= cols {
                return Err(Error::MalformedMatrix(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if field.is_zero(v) {
                return Err(Error::MalformedMatrix(format!("stored zero at ({r}, {c})")));
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        if let Some(w) = triplets.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::MalformedMatrix(format!("duplicate entry ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted_unique(field, rows, cols, triplets))
    }

    /// Lenient constructor: sums duplicates and drops zeros. Indices must be in range.
    pub fn from_accumulated(
        field: F,
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, F::Elem)>,
    ) -> Result<Self> {
        check_dims(rows, cols)?;
        if let Some((r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::MalformedMatrix(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, F::Elem)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = field.add(&last.2, &v),
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| !field.is_zero(&t.2));
        Ok(Self::from_sorted_unique(field, rows, cols, merged))
    }

    fn from_sorted_unique(field: F, rows: usize, cols: usize, t: Vec<(usize, usize, F::Elem)>) -> Self {
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut data = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            indptr[r + 1] += 1;
            indices.push(c as u32);
            data.push(v);
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Self { field, rows, cols, indptr, indices, data }
    }

    /// Builds from sparse rows that already satisfy the row invariant.
    pub fn from_rows(field: F, cols: usize, rows: Vec<SparseRow<F::Elem>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        indptr.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(nnz);
        let mut data = Vec::with_capacity(nnz);
        let nrows = rows.len();
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(row.iter().all(|(c, v)| (*c as usize) < cols && !field.is_zero(v)));
            for (c, v) in row {
                indices.push(c);
                data.push(v);
            }
            indptr.push(indices.len());
        }
        Self { field, rows: nrows, cols, indptr, indices, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.data.len()
    }
    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, r: usize) -> (&[u32], &[F::Elem]) {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[a..b], &self.data[a..b])
    }

    pub fn row_vec(&self, r: usize) -> SparseRow<F::Elem> {
        let (i, d) = self.row(r);
        i.iter().copied().zip(d.iter().cloned()).collect()
    }

    pub fn to_rows(&self) -> Vec<SparseRow<F::Elem>> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        let (i, d) = self.row(r);
        match i.binary_search(&(c as u32)) {
            Ok(k) => d[k].clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (i, d) = self.row(r);
            i.iter().zip(d).map(move |(c, v)| (r, *c as usize, v))
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t: Vec<(usize, usize, F::Elem)> =
            self.triplets().map(|(r, c, v)| (c, r, v.clone())).collect();
        t.sort_by_key(|x| (x.0, x.1));
        Self::from_sorted_unique(self.field.clone(), self.cols, self.rows, t)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.rows);
        let mut acc: Vec<Option<F::Elem>> = vec![None; other.cols];
        let mut touched: Vec<u32> = Vec::new();
        for r in 0..self.rows {
            let (ai, ad) = self.row(r);
            for (k, a) in ai.iter().zip(ad) {
                let (bi, bd) = other.row(*k as usize);
                for (c, b) in bi.iter().zip(bd) {
                    let slot = &mut acc[*c as usize];
                    match slot {
                        Some(v) => *v = f.add(v, &f.mul(a, b)),
                        None => {
                            *slot = Some(f.mul(a, b));
                            touched.push(*c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for c in touched.drain(..) {
                if let Some(v) = acc[c as usize].take() {
                    if !f.is_zero(&v) {
                        row.push((c, v));
                    }
                }
            }
            out.push(row);
        }
        Ok(Self::from_rows(f.clone(), other.cols, out))
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: &F::Elem) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("add of differently shaped matrices".into()));
        }
        let rows = (0..self.rows)
            .map(|r| merge_scaled(&self.field, &self.row_vec(r), &other.row_vec(r), scale))
            .collect();
        Ok(Self::from_rows(self.field.clone(), self.cols, rows))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &self.field.one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        let rows = (0..self.rows)
            .map(|r| {
                self.row_vec(r)
                    .into_iter()
                    .map(|(c, v)| (c, f.mul(&v, s)))
                    .filter(|(_, v)| !f.is_zero(v))
                    .collect()
            })
            .collect();
        Self::from_rows(f.clone(), self.cols, rows)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        let off = self.cols as u32;
        let rows = (0..self.rows)
            .map(|r| {
                let mut row = self.row_vec(r);
                row.extend(other.row_vec(r).into_iter().map(|(c, v)| (c + off, v)));
                row
            })
            .collect();
        Ok(Self::from_rows(self.field.clone(), self.cols + other.cols, rows))
    }

    pub fn to_dense(&self) -> DenseMatrix<F> {
        let mut d = DenseMatrix::zeros(self.field.clone(), self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d.set(r, c, v.clone());
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.rank_with(&EliminationConfig::default())
    }

    pub fn rank_with(&self, cfg: &EliminationConfig) -> usize {
        sparse_elim::rank(self, cfg)
    }

    /// Columns form the canonical basis of the right null space: one column per
    /// non-pivot column `f` of the reduced echelon form, with a 1 in position `f`.
    pub fn kernel_basis(&self) -> Self {
        let mut ech = Echelon::new(self.field.clone(), self.cols);
        for r in 0..self.rows {
            ech.insert(self.row_vec(r));
        }
        ech.kernel_basis()
    }

    /// Solves `self * X = rhs`. Returns the solution whose free coordinates are
    /// zero, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!("solve: {} rows vs {}", self.rows, rhs.rows)));
        }
        let aug = self.hstack(rhs)?;
        let mut ech = Echelon::new(self.field.clone(), aug.cols);
        for r in 0..aug.rows {
            ech.insert(aug.row_vec(r));
        }
        Ok(ech.extract_solution(self.cols, rhs.cols))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            version: MATRIX_JSON_VERSION,
            rows: self.rows,
            cols: self.cols,
            char: self.field.characteristic(),
            triplets: self.triplets().map(|(r, c, v)| (r, c, self.field.format(v))).collect(),
        }
    }

    pub fn from_json(field: F, json: &MatrixJson) -> Result<Self> {
        if json.version != MATRIX_JSON_VERSION {
            return Err(Error::Parse(format!("unsupported matrix version {}", json.version)));
        }
        if json.char != field.characteristic() {
            return Err(Error::Parse(format!(
                "matrix over characteristic {} read with field of characteristic {}",
                json.char,
                field.characteristic()
            )));
        }
        let t = json
            .triplets
            .iter()
            .map(|(r, c, s)| Ok((*r, *c, field.parse(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_triplets(field, json.rows, json.cols, t)
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows > u32::MAX as usize || cols > u32::MAX as usize {
        return Err(Error::MalformedMatrix(format!("{rows}x{cols} exceeds index range")));
    }
    Ok(())
}

pub const MATRIX_JSON_VERSION: u32 = 1;

/// Versioned matrix interchange format; coefficients are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub version: u32,
    pub rows: usize,
    pub cols: usize,
    pub char: u64,
    pub triplets: Vec<(usize, usize, String)>,
}

/// `a + s * b` for sorted sparse rows.
pub(crate) fn merge_scaled<F: Field>(
    f: &F,
    a: &[(u32, F::Elem)],
    b: &[(u32, F::Elem)],
    s: &F::Elem,
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0).unwrap_or(u32::MAX);
        let cb = b.get(j).map(|x| x.0).unwrap_or(u32::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = f.mul(s, &b[j].1);
            if !f.is_zero(&v) {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(s, &b[j].1));
            if !f.is_zero(&v) {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(SparseMatrix::identity(gf(3), 5).rank(), 5);
        assert_eq!(SparseMatrix::zeros(gf(3), 4, 7).rank(), 0);
    }

    #[test]
    fn strict_constructor_rejects_malformed() {
        let f = gf(5);
        assert!(SparseMatrix::from_triplets(f, 2, 2, vec![(0, 0, 1), (0, 0, 2)]).is_err());
        assert!(SparseMatrix::from_triplets(f, 2, 2, vec![(0, 0, 0)]).is_err());
        assert!(SparseMatrix::from_triplets(f, 2, 2, vec![(2, 0, 1)]).is_err());
        let m = SparseMatrix::from_accumulated(f, 2, 2, vec![(0, 0, 2), (0, 0, 3), (1, 1, 1)]).unwrap();
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = SparseMatrix::identity(gf(3), 3).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (3, 0));
    }

    #[test]
    fn kernel_of_row_one_one() {
        let f = gf(3);
        let a = SparseMatrix::from_triplets(f, 1, 2, vec![(0, 0, 1), (0, 1, 1)]).unwrap();
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        // (x, y) with x = -y: canonical vector (-1, 1) = (2, 1) mod 3
        assert_eq!(k.get(0, 0), 2);
        assert_eq!(k.get(1, 0), 1);
        assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = gf(5);
        let b = SparseMatrix::from_triplets(f, 3, 2, vec![(0, 1, 4), (2, 0, 3)]).unwrap();
        let x = SparseMatrix::identity(f, 3).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        let z = SparseMatrix::zeros(f, 2, 2);
        let b = SparseMatrix::from_triplets(f, 2, 1, vec![(1, 0, 1)]).unwrap();
        assert!(z.solve(&b).unwrap().is_none());
    }

    #[test]
    fn rational_rank_and_kernel() {
        let q = Rationals;
        let t = vec![
            (0, 0, q.from_i64(1)),
            (0, 1, q.from_i64(2)),
            (1, 0, q.from_i64(2)),
            (1, 1, q.from_i64(4)),
            (1, 2, q.parse("1/3").unwrap()),
        ];
        let a = SparseMatrix::from_triplets(q, 2, 3, t).unwrap();
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let q = Rationals;
        let a = SparseMatrix::from_triplets(q, 2, 2, vec![(0, 1, q.parse("-7/9").unwrap())]).unwrap();
        let j = a.to_json();
        assert_eq!(j.triplets[0].2, "-7/9");
        let s = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&s).unwrap();
        assert_eq!(SparseMatrix::from_json(q, &back).unwrap(), a);
        assert!(SparseMatrix::from_json(gf(3), &back).is_err());
    }
}
