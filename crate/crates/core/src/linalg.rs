//! Exact kernels and ranks over the Gaussian rationals.
//!
//! Elimination is Bareiss-style: each update is a 2x2 determinant divided by
//! the previous pivot, so integer inputs stay integer throughout.

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Row echelon form in place; returns the pivot columns.
    fn bareiss(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let piv = self.get(r, c).clone();
            for i in r + 1..self.rows {
                let lead = self.get(i, c).clone();
                for j in c + 1..self.cols {
                    let v = &(&(&piv * self.get(i, j)) - &(&lead * self.get(r, j))) / &prev;
                    self.set(i, j, v);
                }
                self.set(i, c, Scalar::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Columns that carry a pivot: the first maximal independent subset in
    /// column order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().bareiss()
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss().len()
    }

    /// A basis of the right kernel, one vector per free column, each with a
    /// 1 in its free column and 0 in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.bareiss();
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Scalar::zero(); m.cols];
                x[f] = Scalar::one();
                for (r, &c) in pivots.iter().enumerate().rev() {
                    let mut acc = Scalar::zero();
                    for j in c + 1..m.cols {
                        if !x[j].is_zero() {
                            acc += &(m.get(r, j) * &x[j]);
                        }
                    }
                    x[c] = -(&acc / m.get(r, c));
                }
                x
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}
