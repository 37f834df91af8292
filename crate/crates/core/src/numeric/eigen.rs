//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! norms and positivity tests built on it.

use std::cmp::Ordering;

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Base absolute tolerance; callers scale it by `1 + ‖input‖`.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// `DEFAULT_TOL · (1 + scale)`.
pub fn scaled_tol(scale: f64) -> f64 {
    DEFAULT_TOL * (1.0 + scale)
}

/// Eigenvalues in ascending order with the matching unitary `vectors`
/// (eigenvector `j` is column `j`).
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEig {
    /// `u · diag(f(λ)) · u*`.
    pub fn reassemble(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let u = &self.vectors;
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .filter(|&k| fv[k] != 0.0)
                .map(|k| u[(i, k)] * fv[k] * u[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecomposition of a hermitian matrix.
///
/// Fails with `NotHermitian` when `‖a − a*‖_F > tol`. Eigenvalues that agree
/// within `tol` are ordered by the lexicographic order of their
/// phase-normalized eigenvectors (descending) so that the output is
/// reproducible.
pub fn herm_eig(a: &CMatrix, tol: f64) -> Result<HermEig> {
    let deviation = a.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    jacobi(&a.hermitian_part(), tol)
}

fn jacobi(a: &CMatrix, tol: f64) -> Result<HermEig> {
    let n = a.rows();
    let mut m = a.clone();
    let mut u = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off < 1e-300 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut u, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut pairs: Vec<(f64, Vec<C64>)> =
        (0..n).map(|j| (m[(j, j)].re, normalize_phase(u.column(j)))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Ties within tol: descending lexicographic order of the eigenvectors,
    // so a multiple of the identity keeps the standard basis.
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= tol {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lex_cmp(&y.1, &x.1));
        start = end;
    }
    let values = pairs.iter().map(|p| p.0).collect();
    let columns: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    let vectors = CMatrix::from_columns(n, &columns)?;
    Ok(HermEig { values, vectors })
}

/// One Jacobi rotation zeroing `m[p][q]`: a phase change on `q` makes the
/// pivot real, then a real Givens rotation diagonalizes the 2×2 block.
fn rotate(m: &mut CMatrix, u: &mut CMatrix, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = 0.5 * (2.0 * r).atan2(aqq - app);
    let (s, c) = theta.sin_cos();
    let e_minus = phase.conj();
    // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = -e_minus * s;
    let vqq = e_minus * c;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * vpp + mkq * vqp;
        m[(k, q)] = mkp * vpq + mkq * vqq;
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * vpp + ukq * vqp;
        u[(k, q)] = ukp * vpq + ukq * vqq;
    }
    for l in 0..n {
        let mpl = m[(p, l)];
        let mql = m[(q, l)];
        m[(p, l)] = vpp.conj() * mpl + vqp.conj() * mql;
        m[(q, l)] = vpq.conj() * mpl + vqq.conj() * mql;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
}

/// Rotates `v` so that its first significant entry is real and positive.
fn normalize_phase(mut v: Vec<C64>) -> Vec<C64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-8 * max).copied() {
        let rot = pivot.conj() / pivot.norm();
        for z in &mut v {
            *z *= rot;
        }
    }
    v
}

fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = if a.rows() < a.cols() { a * &a.adjoint() } else { &a.adjoint() * a };
    // Gram matrices are exactly hermitian in floating point.
    let eig = jacobi(&gram, 0.0).expect("Jacobi converges on small hermitian matrices");
    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Positive semidefiniteness: the smallest eigenvalue is at least `-tol`.
pub fn is_psd(a: &CMatrix, tol: f64) -> Result<bool> {
    let eig = herm_eig(a, tol)?;
    Ok(eig.values.first().is_none_or(|&l| l >= -tol))
}
