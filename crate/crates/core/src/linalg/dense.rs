use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Self { field, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    /// Gaussian elimination in place; returns the rank. Zero multipliers are
    /// skipped so sparse-ish blocks stay cheap.
    pub fn rank_in_place(&mut self) -> usize {
        let f = self.field.clone();
        let (nr, nc) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..nc {
            if rank == nr {
                break;
            }
            let Some(p) = (rank..nr).find(|&r| !f.is_zero(self.get(r, c))) else {
                continue;
            };
            if p != rank {
                for k in c..nc {
                    self.data.swap(p * nc + k, rank * nc + k);
                }
            }
            let inv = f.inv(self.get(rank, c)).expect("nonzero pivot");
            let (head, tail) = self.data.split_at_mut((rank + 1) * nc);
            let prow = &head[rank * nc..];
            for row in tail.chunks_mut(nc) {
                if f.is_zero(&row[c]) {
                    continue;
                }
                let factor = f.mul(&row[c], &inv);
                row[c] = f.zero();
                for k in c + 1..nc {
                    if !f.is_zero(&prow[k]) {
                        row[k] = f.mul_sub(&row[k], &factor, &prow[k]);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self) -> usize {
        self.clone().rank_in_place()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rank_of_singular_block() {
        let f = PrimeField::new(3).unwrap();
        let mut d = DenseMatrix::zeros(f, 3, 3);
        for (r, c, v) in [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 1), (2, 2, 1)] {
            d.set(r, c, v);
        }
        // row 1 = 2 * row 0 mod 3
        assert_eq!(d.rank(), 2);
    }
}
