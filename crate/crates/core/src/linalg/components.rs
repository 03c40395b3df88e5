use super::{SparseMatrix, SparseRow};
use crate::field::Field;

/// A block of a matrix with locally renumbered columns.
#[derive(Clone, Debug)]
pub struct Component<E> {
    pub row_ids: Vec<usize>,
    pub col_ids: Vec<usize>,
    pub rows: Vec<SparseRow<E>>,
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Splits the nonzero part of `m` into connected components of the bipartite
/// row/column graph. Empty rows and columns are dropped. Components come out
/// ordered by their smallest row index.
pub fn split_components<F: Field>(m: &SparseMatrix<F>) -> Vec<Component<F::Elem>> {
    let (nr, nc) = (m.rows(), m.cols());
    let mut uf = UnionFind::new(nr + nc);
    let mut col_used = vec![false; nc];
    for r in 0..nr {
        for &c in m.row(r).0 {
            uf.union(r as u32, (nr + c as usize) as u32);
            col_used[c as usize] = true;
        }
    }
    let mut slot = vec![u32::MAX; nr + nc];
    let mut comps: Vec<Component<F::Elem>> = Vec::new();
    for r in 0..nr {
        if m.row(r).0.is_empty() {
            continue;
        }
        let root = uf.find(r as u32) as usize;
        if slot[root] == u32::MAX {
            slot[root] = comps.len() as u32;
            comps.push(Component { row_ids: Vec::new(), col_ids: Vec::new(), rows: Vec::new() });
        }
        comps[slot[root] as usize].row_ids.push(r);
    }
    let mut local = vec![0u32; nc];
    for c in 0..nc {
        if !col_used[c] {
            continue;
        }
        let root = uf.find((nr + c) as u32) as usize;
        let comp = &mut comps[slot[root] as usize];
        local[c] = comp.col_ids.len() as u32;
        comp.col_ids.push(c);
    }
    for comp in &mut comps {
        comp.rows = comp
            .row_ids
            .iter()
            .map(|&r| {
                let (i, d) = m.row(r);
                i.iter().map(|&c| local[c as usize]).zip(d.iter().cloned()).collect()
            })
            .collect();
    }
    comps
}
