//! Dense matrices over `Q(i)` with exact elimination.

use super::rational::{gq_is_zero, gq_one, gq_zero, GQ};

#[derive(Clone, Debug, PartialEq)]
pub struct GMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GQ>,
}

impl GMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![gq_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = gq_one();
        }
        m
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<GQ>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, z) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = z.clone();
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

    pub fn get(&self, i: usize, j: usize) -> &GQ {
        &self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<GQ> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if gq_is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    m.data[idx] = &m.data[idx] + a * other.get(l, j);
                }
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn mul_vec(&self, v: &[GQ]) -> Vec<GQ> {
        (0..self.rows).map(|i| (0..self.cols).fold(gq_zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(gq_is_zero)
    }

    /// Indices of a maximal independent prefix-greedy set of columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        let mut echelon: Vec<Vec<GQ>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut keep = Vec::new();
        for j in 0..self.cols {
            let mut v = self.column(j);
            for (row, &p) in echelon.iter().zip(&pivots) {
                if !gq_is_zero(&v[p]) {
                    let f = &v[p] / &row[p];
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = &*x - &f * r;
                    }
                }
            }
            if let Some(p) = v.iter().position(|z| !gq_is_zero(z)) {
                echelon.push(v);
                pivots.push(p);
                keep.push(j);
            }
        }
        keep
    }

    pub fn rank(&self) -> usize {
        self.independent_columns().len()
    }

    /// Inverse by Gauss–Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !gq_is_zero(a.get(r, c)))?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).clone();
            for j in 0..n {
                a.data[c * n + j] = &a.data[c * n + j] / &piv;
                inv.data[c * n + j] = &inv.data[c * n + j] / &piv;
            }
            for r in 0..n {
                if r == c || gq_is_zero(a.get(r, c)) {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    a.data[r * n + j] = &a.data[r * n + j] - &f * &a.data[c * n + j];
                    inv.data[r * n + j] = &inv.data[r * n + j] - &f * &inv.data[c * n + j];
                }
            }
        }
        Some(inv)
    }

    /// Orthogonal projector `B(B*B)⁻¹B*` onto the span of independent columns.
    pub fn projector_onto(rows: usize, basis: &[Vec<GQ>]) -> Self {
        if basis.is_empty() {
            return Self::zeros(rows, rows);
        }
        let b = Self::from_columns(rows, basis);
        let bs = b.adjoint();
        let gram_inv = bs.mul(&b).inverse().expect("independent columns have an invertible Gram matrix");
        b.mul(&gram_inv).mul(&bs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{gq, qi};

    fn c(re: i64, im: i64) -> GQ {
        gq(qi(re), qi(im))
    }

    #[test]
    fn projector_is_exact() {
        let basis = vec![vec![c(1, 0), c(0, 1), c(2, 0)], vec![c(0, 0), c(1, 1), c(1, 0)]];
        let p = GMatrix::projector_onto(3, &basis);
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.adjoint(), p);
        for v in &basis {
            assert_eq!(p.mul_vec(v), *v);
        }
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn independent_columns_and_inverse() {
        let m = GMatrix::from_columns(2, &[vec![c(1, 0), c(2, 0)], vec![c(2, 0), c(4, 0)], vec![c(0, 1), c(0, 0)]]);
        assert_eq!(m.independent_columns(), vec![0, 2]);
        let a = GMatrix::from_columns(2, &[vec![c(0, 0), c(1, 0)], vec![c(1, 0), c(0, 1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), GMatrix::identity(2));
        assert!(GMatrix::zeros(2, 2).inverse().is_none());
    }
}
