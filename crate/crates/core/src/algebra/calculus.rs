//! Functional calculus for hermitian elements and the spectral constructions
//! around `χ_(ε,∞)`.

use super::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::numeric::{herm_eig, CMatrix, HermEig};

/// A real function applied to the spectrum of a hermitian element.
pub trait RealFunction {
    fn apply(&self, t: f64) -> f64;

    /// Closed interval on which the function is defined.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

impl<F: Fn(f64) -> f64> RealFunction for F {
    fn apply(&self, t: f64) -> f64 {
        self(t)
    }
}

/// A function restricted to `[lo, hi]`.
pub struct Restricted<F> {
    pub f: F,
    pub lo: f64,
    pub hi: f64,
}

impl<F: Fn(f64) -> f64> RealFunction for Restricted<F> {
    fn apply(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// `√t` on `[0, ∞)`.
pub fn sqrt_fn() -> Restricted<fn(f64) -> f64> {
    Restricted { f: f64::sqrt, lo: 0.0, hi: f64::INFINITY }
}

fn block_eigs(a: &AlgebraElement) -> Result<Vec<HermEig>> {
    let tol = a.tol();
    a.blocks().iter().map(|b| herm_eig(b, tol)).collect()
}

fn reassemble(a: &AlgebraElement, eigs: &[HermEig], mut f: impl FnMut(f64) -> f64) -> AlgebraElement {
    let blocks: Vec<CMatrix> = eigs.iter().map(|e| e.reassemble(&mut f)).collect();
    AlgebraElement::from_blocks(a.shape().clone(), blocks).expect("blocks keep their sizes")
}

/// All eigenvalues of a hermitian element, block by block.
pub fn spectrum(a: &AlgebraElement) -> Result<Vec<f64>> {
    Ok(block_eigs(a)?.into_iter().flat_map(|e| e.values).collect())
}

/// `f(a)`, computed per block as `u · diag(f(λ)) · u*`.
///
/// Eigenvalues within tolerance of the domain boundary are clamped onto it
/// before `f` is evaluated.
pub fn calculus(a: &AlgebraElement, f: &impl RealFunction) -> Result<AlgebraElement> {
    let tol = a.tol();
    let eigs = block_eigs(a)?;
    let (lo, hi) = f.domain();
    for e in &eigs {
        if let Some(&bad) = e.values.iter().find(|&&l| l < lo - tol || l > hi + tol) {
            return Err(Error::DomainError { eigenvalue: bad, lo, hi });
        }
    }
    Ok(reassemble(a, &eigs, |l| f.apply(l.clamp(lo, hi))))
}

/// `χ_(ε,∞)(a)`.
///
/// The indicator jumps at `ε`, so an eigenvalue within tolerance of `eps`
/// is reported as `EigenvalueAtThreshold`.
pub fn spectral_projection(a: &AlgebraElement, eps: f64) -> Result<AlgebraElement> {
    let tol = a.tol();
    let eigs = block_eigs(a)?;
    if let Some(&bad) = eigs.iter().flat_map(|e| &e.values).find(|&&l| (l - eps).abs() <= tol) {
        return Err(Error::EigenvalueAtThreshold { eigenvalue: bad, eps, tol });
    }
    Ok(reassemble(a, &eigs, |l| if l > eps { 1.0 } else { 0.0 }))
}

/// The continuous ramp `gₙ` rising from 0 at `ε` to 1 at `ε + 1/n`.
pub fn ramp(eps: f64, n: u64) -> impl Fn(f64) -> f64 {
    let n = n as f64;
    move |t| {
        if t <= eps {
            0.0
        } else if t < eps + 1.0 / n {
            n * (t - eps)
        } else {
            1.0
        }
    }
}

/// `gₙ(a)`: increases with `n` towards `χ_(ε,∞)(a)`.
pub fn lower_approximants(a: &AlgebraElement, eps: f64, n: u64) -> Result<AlgebraElement> {
    assert!(n >= 1, "approximant index starts at 1");
    calculus(a, &ramp(eps, n))
}

/// `(a − ε)₊ = max(a − ε, 0)`.
pub fn shifted_positive_part(a: &AlgebraElement, eps: f64) -> Result<AlgebraElement> {
    calculus(a, &move |t: f64| (t - eps).max(0.0))
}
