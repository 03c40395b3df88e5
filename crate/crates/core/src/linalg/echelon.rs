use std::collections::HashMap;

use super::{merge_scaled, SparseMatrix, SparseRow};
use crate::field::Field;

/// Incrementally maintained fully reduced row echelon form.
///
/// Every stored row has leading coefficient 1 and is zero in all other pivot
/// columns. Inserting rows in a fixed order yields the pivot set of the
/// lexicographically first independent columns of the row space.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    pivot_row: HashMap<u32, usize>,
    rows: Vec<SparseRow<F::Elem>>,
    // column -> stored rows that may contain it (pruned lazily)
    occurs: HashMap<u32, Vec<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Self { field, ncols, pivot_row: HashMap::new(), rows: Vec::new(), occurs: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.pivot_row.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Reduces `row` modulo the stored span. The result vanishes on pivot columns.
    pub fn reduce(&self, row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let f = &self.field;
        let hits: Vec<(usize, F::Elem)> = row
            .iter()
            .filter_map(|(c, v)| self.pivot_row.get(c).map(|&i| (i, v.clone())))
            .collect();
        if hits.is_empty() {
            return row;
        }
        if hits.len() == 1 {
            let (i, v) = &hits[0];
            return merge_scaled(f, &row, &self.rows[*i], &f.neg(v));
        }
        let mut acc: HashMap<u32, F::Elem> = row.into_iter().collect();
        for (i, v) in hits {
            let s = f.neg(&v);
            for (c, x) in &self.rows[i] {
                let e = acc.entry(*c).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(&s, x));
            }
        }
        let mut out: SparseRow<F::Elem> = acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect();
        out.sort_unstable_by_key(|x| x.0);
        out
    }

    pub fn contains(&self, row: SparseRow<F::Elem>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds `row` to the span. Returns the new pivot column, or `None` if the
    /// row was already dependent.
    pub fn insert(&mut self, row: SparseRow<F::Elem>) -> Option<u32> {
        let f = self.field.clone();
        let mut row = self.reduce(row);
        let (lead, lv) = row.first().cloned()?;
        let inv = f.inv(&lv).expect("nonzero leading entry");
        for x in &mut row {
            x.1 = f.mul(&x.1, &inv);
        }
        // clear the new pivot column from the stored rows
        if let Some(cands) = self.occurs.remove(&lead) {
            for i in cands {
                let Ok(pos) = self.rows[i].binary_search_by_key(&lead, |x| x.0) else {
                    continue;
                };
                let s = f.neg(&self.rows[i][pos].1);
                let old = std::mem::take(&mut self.rows[i]);
                let new = merge_scaled(&f, &old, &row, &s);
                for (c, _) in &new {
                    if old.binary_search_by_key(c, |x| x.0).is_err() {
                        self.occurs.entry(*c).or_default().push(i);
                    }
                }
                self.rows[i] = new;
            }
        }
        let idx = self.rows.len();
        for (c, _) in row.iter().skip(1) {
            self.occurs.entry(*c).or_default().push(idx);
        }
        self.pivot_row.insert(lead, idx);
        self.rows.push(row);
        Some(lead)
    }

    /// Stored rows ordered by pivot column.
    pub fn basis_rows(&self) -> Vec<SparseRow<F::Elem>> {
        self.pivots().into_iter().map(|p| self.rows[self.pivot_row[&p]].clone()).collect()
    }

    /// Canonical null-space basis of the matrix whose rows were inserted, as
    /// the columns of an `ncols x nullity` matrix.
    pub fn kernel_basis(&self) -> SparseMatrix<F> {
        let f = &self.field;
        let n = self.ncols;
        let mut free_index = vec![u32::MAX; n];
        let mut nfree = 0u32;
        for c in 0..n as u32 {
            if !self.pivot_row.contains_key(&c) {
                free_index[c as usize] = nfree;
                nfree += 1;
            }
        }
        let mut t = Vec::new();
        for c in 0..n {
            if free_index[c] != u32::MAX {
                t.push((c, free_index[c] as usize, f.one()));
            }
        }
        for (&pc, &i) in &self.pivot_row {
            for (c, v) in self.rows[i].iter().skip(1) {
                t.push((pc as usize, free_index[*c as usize] as usize, f.neg(v)));
            }
        }
        SparseMatrix::from_triplets(f.clone(), n, nfree as usize, t).expect("kernel triplets are valid")
    }

    /// For an augmented system `[A | B]` with `a_cols` columns in `A`.
    pub(crate) fn extract_solution(&self, a_cols: usize, b_cols: usize) -> Option<SparseMatrix<F>> {
        if self.pivot_row.keys().any(|&c| c as usize >= a_cols) {
            return None;
        }
        let mut t = Vec::new();
        for (&pc, &i) in &self.pivot_row {
            for (c, v) in &self.rows[i] {
                if *c as usize >= a_cols {
                    t.push((pc as usize, *c as usize - a_cols, v.clone()));
                }
            }
        }
        Some(SparseMatrix::from_triplets(self.field.clone(), a_cols, b_cols, t).expect("valid solution"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn stays_fully_reduced() {
        let f = PrimeField::new(7).unwrap();
        let mut e = Echelon::new(f, 4);
        assert_eq!(e.insert(vec![(1, 3), (2, 1)]), Some(1));
        assert_eq!(e.insert(vec![(0, 1), (1, 1)]), Some(0));
        assert_eq!(e.insert(vec![(0, 2), (1, 5), (2, 1)]), None);
        for r in e.basis_rows() {
            let others: Vec<u32> = e.pivots().into_iter().filter(|p| *p != r[0].0).collect();
            assert!(r.iter().all(|(c, _)| !others.contains(c)));
            assert_eq!(r[0].1, 1);
        }
    }
}
