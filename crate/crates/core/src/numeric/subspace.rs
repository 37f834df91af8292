use super::matrix::{CMatrix, C64};

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// A subspace of ℂ^n held by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<C64>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut e = vec![C64::new(0.0, 0.0); ambient];
                e[i] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        Self { ambient, basis }
    }

    /// Span of `vectors`, computed by modified Gram–Schmidt with column
    /// pivoting. A candidate is accepted while its residual norm exceeds
    /// `tol · (1 + max input norm)`.
    pub fn span(ambient: usize, vectors: &[Vec<C64>], tol: f64) -> Self {
        let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let cutoff = tol * (1.0 + scale);
        let mut residuals: Vec<Vec<C64>> = vectors.iter().filter(|v| norm(v) > cutoff).cloned().collect();
        for v in &residuals {
            assert_eq!(v.len(), ambient, "vector length must equal ambient dimension");
        }
        let mut basis: Vec<Vec<C64>> = Vec::new();
        while basis.len() < ambient && !residuals.is_empty() {
            let (best, best_norm) = residuals
                .iter()
                .enumerate()
                .map(|(i, v)| (i, norm(v)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            if best_norm <= cutoff {
                break;
            }
            let mut q = residuals.swap_remove(best);
            // Second pass against the accepted basis for orthogonality.
            for b in &basis {
                let c = dot(b, &q);
                axpy(&mut q, -c, b);
            }
            let n = norm(&q);
            if n <= cutoff {
                continue;
            }
            for z in &mut q {
                *z /= n;
            }
            for r in &mut residuals {
                let c = dot(&q, r);
                axpy(r, -c, &q);
            }
            basis.push(q);
        }
        Self { ambient, basis }
    }

    /// Column space of `m`.
    pub fn column_space(m: &CMatrix, tol: f64) -> Self {
        Self::span(m.rows(), &m.columns(), tol)
    }

    /// Kernel of `m`: the orthogonal complement of the span of the conjugated rows.
    pub fn null_space(m: &CMatrix, tol: f64) -> Self {
        let rows: Vec<Vec<C64>> = (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.conj()).collect()).collect();
        Self::span(m.cols(), &rows, tol).complement()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.ambient];
        for b in &self.basis {
            let c = dot(b, v);
            axpy(&mut out, c, b);
        }
        out
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual_norm(&self, v: &[C64]) -> f64 {
        let p = self.project(v);
        v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn contains(&self, v: &[C64], tol: f64) -> bool {
        self.residual_norm(v) <= tol * (1.0 + norm(v))
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        other.basis.iter().all(|b| self.contains(b, tol))
    }

    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    pub fn complement(&self) -> Self {
        let mut vectors = self.basis.clone();
        vectors.extend(Self::full(self.ambient).basis);
        let all = Self::span_ordered(self.ambient, &vectors);
        Self { ambient: self.ambient, basis: all.basis[self.dim()..].to_vec() }
    }

    // Gram–Schmidt without pivoting, keeping the given order.
    fn span_ordered(ambient: usize, vectors: &[Vec<C64>]) -> Self {
        let mut basis: Vec<Vec<C64>> = Vec::new();
        for v in vectors {
            let mut q = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &q);
                    axpy(&mut q, -c, b);
                }
            }
            let n = norm(&q);
            if n > 1e-8 {
                for z in &mut q {
                    *z /= n;
                }
                basis.push(q);
            }
            if basis.len() == ambient {
                break;
            }
        }
        Self { ambient, basis }
    }

    pub fn sum(&self, other: &Subspace, tol: f64) -> Self {
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vectors, tol)
    }

    /// `dim(U) + dim(V) − dim(U + V)`.
    pub fn intersection_dim(&self, other: &Subspace, tol: f64) -> usize {
        self.dim() + other.dim() - self.sum(other, tol).dim()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        let n = self.ambient;
        CMatrix::from_fn(n, n, |i, j| self.basis.iter().map(|b| b[i] * b[j].conj()).sum())
    }
}
