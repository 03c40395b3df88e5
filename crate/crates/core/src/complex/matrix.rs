use crate::error::{Error, Result};
use crate::field::Field;
use crate::ring::{Ring, RingElement};

/// Dense row-major matrix of ring elements. Zero entries hold no allocation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<RingElement<E>>,
}

impl<E: Clone> RingMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: (0..rows * cols).map(|_| RingElement::zero()).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement<E> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement<E>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nonzero_entries(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElement<E>)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(i, x)| (i / self.cols.max(1), i % self.cols.max(1), x))
    }

    pub fn column(&self, c: usize) -> Vec<RingElement<E>> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, x) in self.entries() {
            t.set(c, r, x.clone());
        }
        t
    }

    pub fn remove_row(&mut self, r: usize) {
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        let cols = self.cols;
        let mut i = 0;
        self.data.retain(|_| {
            let keep = i % cols != c;
            i += 1;
            keep
        });
        self.cols -= 1;
    }

    /// Selects rows and columns by index.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for (r, c, x) in block.entries() {
            self.set(r0 + r, c0 + c, x.clone());
        }
    }

    /// `[[a, b], [c, d]]` with compatible shapes; `None` blocks are zero.
    pub fn from_blocks(
        row_sizes: (usize, usize),
        col_sizes: (usize, usize),
        blocks: [Option<&Self>; 4],
    ) -> Self {
        let mut m = Self::zeros(row_sizes.0 + row_sizes.1, col_sizes.0 + col_sizes.1);
        let origins = [(0, 0), (0, col_sizes.0), (row_sizes.0, 0), (row_sizes.0, col_sizes.0)];
        for (b, (r0, c0)) in blocks.iter().zip(origins) {
            if let Some(b) = b {
                m.put_block(r0, c0, b);
            }
        }
        m
    }
}

impl<F: Field> Ring<F> {
    pub fn mat_identity(&self, n: usize) -> RingMatrix<F::Elem> {
        let mut m = RingMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.one());
        }
        m
    }

    pub fn mat_mul(&self, a: &RingMatrix<F::Elem>, b: &RingMatrix<F::Elem>) -> Result<RingMatrix<F::Elem>> {
        if a.cols() != b.rows() {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let b_rows: Vec<Vec<(usize, &RingElement<F::Elem>)>> = (0..b.rows())
            .map(|k| (0..b.cols()).map(|j| (j, b.get(k, j))).filter(|x| !x.1.is_zero()).collect())
            .collect();
        let mut out = RingMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for (j, y) in &b_rows[k] {
                    let v = self.add(out.get(i, *j), &self.mul(x, y));
                    out.set(i, *j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, a: &RingMatrix<F::Elem>, b: &RingMatrix<F::Elem>) -> Result<RingMatrix<F::Elem>> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Dimension("adding matrices of different shapes".into()));
        }
        let mut out = a.clone();
        for (r, c, y) in b.entries() {
            out.set(r, c, self.add(a.get(r, c), y));
        }
        Ok(out)
    }

    pub fn mat_neg(&self, a: &RingMatrix<F::Elem>) -> RingMatrix<F::Elem> {
        let mut out = RingMatrix::zeros(a.rows(), a.cols());
        for (r, c, x) in a.entries() {
            out.set(r, c, self.neg(x));
        }
        out
    }

    pub fn mat_sub(&self, a: &RingMatrix<F::Elem>, b: &RingMatrix<F::Elem>) -> Result<RingMatrix<F::Elem>> {
        self.mat_add(a, &self.mat_neg(b))
    }

    /// All entries lie in the maximal ideal.
    pub fn mat_is_minimal(&self, a: &RingMatrix<F::Elem>) -> bool {
        a.entries().all(|(_, _, x)| !self.is_unit(x))
    }
}
