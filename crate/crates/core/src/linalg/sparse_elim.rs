use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{split_components, DenseMatrix, EliminationConfig, SparseMatrix, SparseRow};
use crate::field::Field;

pub(super) fn rank<F: Field>(m: &SparseMatrix<F>, cfg: &EliminationConfig) -> usize {
    if m.is_zero() {
        return 0;
    }
    let f = m.field();
    if !cfg.split_components {
        return block_rank(f, m.to_rows(), m.cols(), cfg);
    }
    let comps = split_components(m);
    let run = |c: super::Component<F::Elem>| {
        let nc = c.col_ids.len();
        block_rank(f, c.rows, nc, cfg)
    };
    if cfg.parallel && comps.len() > 1 {
        comps.into_par_iter().map(run).sum()
    } else {
        comps.into_iter().map(run).sum()
    }
}

fn wants_dense(cfg: &EliminationConfig, nnz: usize, rows: usize, cols: usize) -> bool {
    cols <= cfg.dense_cols || nnz as f64 > cfg.dense_density * rows as f64 * cols as f64
}

/// Markowitz-style elimination: repeatedly take a column of minimal count and
/// its shortest row as pivot. Falls back to dense elimination once the active
/// part is small or dense enough.
fn block_rank<F: Field>(f: &F, mut rows: Vec<SparseRow<F::Elem>>, ncols: usize, cfg: &EliminationConfig) -> usize {
    let nrows = rows.len();
    let mut nnz: usize = rows.iter().map(Vec::len).sum();
    if wants_dense(cfg, nnz, nrows, ncols) {
        return dense_rank(f, &rows, ncols, None);
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut count = vec![0u32; ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
            count[*c as usize] += 1;
        }
    }
    let mut col_alive = vec![true; ncols];
    let mut alive_cols = ncols;
    let mut alive_rows = rows.iter().filter(|r| !r.is_empty()).count();
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> =
        (0..ncols as u32).map(|c| Reverse((count[c as usize], c))).collect();
    let mut touched: Vec<u32> = Vec::new();
    let mut rank = 0;

    while let Some(Reverse((k, c))) = heap.pop() {
        let cu = c as usize;
        if !col_alive[cu] || k != count[cu] {
            continue;
        }
        if k == 0 {
            col_alive[cu] = false;
            alive_cols -= 1;
            continue;
        }
        if wants_dense(cfg, nnz, alive_rows, alive_cols) {
            heap.push(Reverse((k, c)));
            break;
        }
        // candidate rows still holding column c
        let mut cands = std::mem::take(&mut col_rows[cu]);
        cands.retain(|&r| rows[r as usize].binary_search_by_key(&c, |x| x.0).is_ok());
        cands.sort_unstable();
        cands.dedup();
        let piv = *cands.iter().min_by_key(|&&r| (rows[r as usize].len(), r)).expect("count > 0");
        let prow = std::mem::take(&mut rows[piv as usize]);
        alive_rows -= 1;
        for (cc, _) in &prow {
            count[*cc as usize] -= 1;
            touched.push(*cc);
        }
        nnz -= prow.len();
        let ppos = prow.binary_search_by_key(&c, |x| x.0).unwrap();
        let pinv = f.inv(&prow[ppos].1).unwrap();
        for &r in cands.iter().filter(|&&r| r != piv) {
            let old = std::mem::take(&mut rows[r as usize]);
            let pos = old.binary_search_by_key(&c, |x| x.0).unwrap();
            let s = f.neg(&f.mul(&old[pos].1, &pinv));
            let new = merge_tracking(f, &old, &prow, &s, &mut count, &mut col_rows, r, &mut touched);
            nnz = nnz + new.len() - old.len();
            if new.is_empty() {
                alive_rows -= 1;
            }
            rows[r as usize] = new;
        }
        debug_assert_eq!(count[cu], 0);
        col_alive[cu] = false;
        alive_cols -= 1;
        rank += 1;
        touched.sort_unstable();
        touched.dedup();
        for &t in &touched {
            if col_alive[t as usize] {
                heap.push(Reverse((count[t as usize], t)));
            }
        }
        touched.clear();
    }
    if nnz == 0 {
        return rank;
    }
    rank + dense_rank(f, &rows, ncols, Some(&col_alive))
}

/// `a + s * b`, keeping column counts and column->row lists current for row `r`.
#[allow(clippy::too_many_arguments)]
fn merge_tracking<F: Field>(
    f: &F,
    a: &[(u32, F::Elem)],
    b: &[(u32, F::Elem)],
    s: &F::Elem,
    count: &mut [u32],
    col_rows: &mut [Vec<u32>],
    r: u32,
    touched: &mut Vec<u32>,
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
            // fill-in
            out.push((cb, f.mul(s, &b[j].1)));
            count[cb as usize] += 1;
            col_rows[cb as usize].push(r);
            touched.push(cb);
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(s, &b[j].1));
            if f.is_zero(&v) {
                count[ca as usize] -= 1;
                touched.push(ca);
            } else {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn dense_rank<F: Field>(f: &F, rows: &[SparseRow<F::Elem>], ncols: usize, alive: Option<&[bool]>) -> usize {
    let mut map = vec![u32::MAX; ncols];
    let mut n = 0;
    for c in 0..ncols {
        if alive.is_none_or(|a| a[c]) {
            map[c] = n;
            n += 1;
        }
    }
    let live: Vec<&SparseRow<F::Elem>> = rows.iter().filter(|r| !r.is_empty()).collect();
    if live.is_empty() || n == 0 {
        return 0;
    }
    // eliminate over the shorter side
    let transpose = live.len() > n as usize;
    let (dr, dc) = if transpose { (n as usize, live.len()) } else { (live.len(), n as usize) };
    let mut d = DenseMatrix::zeros(f.clone(), dr, dc);
    for (i, row) in live.iter().enumerate() {
        for (c, v) in row.iter() {
            let j = map[*c as usize];
            debug_assert!(j != u32::MAX);
            if transpose {
                d.set(j as usize, i, v.clone());
            } else {
                d.set(i, j as usize, v.clone());
            }
        }
    }
    d.rank_in_place()
}
