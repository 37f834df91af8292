//! Closed right ideals `pA` and the constructive content around them.

use serde::{Deserialize, Serialize};

use super::calculus::{calculus, spectral_projection, spectrum};
use super::element::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::numeric::{CMatrix, Subspace, C64};

/// The right ideal `pA` determined by its support projection `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIdeal", into = "RawIdeal")]
pub struct RightIdeal {
    shape: AlgebraShape,
    support_projection: AlgebraElement,
}

#[derive(Serialize, Deserialize)]
struct RawIdeal {
    shape: AlgebraShape,
    support_projection: AlgebraElement,
}

impl TryFrom<RawIdeal> for RightIdeal {
    type Error = Error;
    fn try_from(raw: RawIdeal) -> Result<Self> {
        if raw.support_projection.shape() != &raw.shape {
            return Err(Error::ShapeMismatch("support projection shape differs from ideal shape".into()));
        }
        ideal_from_projection(&raw.support_projection)
    }
}

impl From<RightIdeal> for RawIdeal {
    fn from(j: RightIdeal) -> Self {
        RawIdeal { shape: j.shape, support_projection: j.support_projection }
    }
}

/// Wraps a projection `p` (`p² = p = p*` within tolerance) as the ideal `pA`.
pub fn ideal_from_projection(p: &AlgebraElement) -> Result<RightIdeal> {
    let tol = p.tol();
    let herm = p.hermitian_deviation();
    if herm > tol {
        return Err(Error::NotProjection(format!("‖p − p*‖ = {herm:e}")));
    }
    let idem = p.mul(p).sub(p).max_abs();
    if idem > tol {
        return Err(Error::NotProjection(format!("‖p² − p‖ = {idem:e}")));
    }
    Ok(RightIdeal { shape: p.shape().clone(), support_projection: p.clone() })
}

/// Smallest projection `p` with `p·g = g` for every generator: blockwise the
/// orthogonal projection onto the sum of the generator column spaces.
pub fn ideal_support_projection(generators: &[AlgebraElement]) -> Result<RightIdeal> {
    let first = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
    let shape = first.shape().clone();
    if let Some(g) = generators.iter().find(|g| g.shape() != &shape) {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", g.shape(), shape)));
    }
    let tol = generators.iter().map(AlgebraElement::tol).fold(0.0, f64::max);
    let blocks = shape
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            let cols: Vec<Vec<C64>> = generators.iter().flat_map(|g| g.block(b).columns()).collect();
            Subspace::span(n, &cols, tol).projector()
        })
        .collect();
    let p = AlgebraElement::from_blocks(shape.clone(), blocks)?;
    Ok(RightIdeal { shape, support_projection: p })
}

impl RightIdeal {
    pub fn whole(shape: &AlgebraShape) -> Self {
        Self { shape: shape.clone(), support_projection: AlgebraElement::identity(shape) }
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Self { shape: shape.clone(), support_projection: AlgebraElement::zero(shape) }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn support_projection(&self) -> &AlgebraElement {
        &self.support_projection
    }

    /// `b ∈ pA ⟺ pb = b`.
    pub fn contains(&self, b: &AlgebraElement) -> bool {
        let tol = b.tol();
        self.support_projection.mul(b).sub(b).max_abs() <= tol
    }

    /// Range of the support projection in each block.
    pub fn ranges(&self) -> Vec<Subspace> {
        self.support_projection.blocks().iter().map(|p| Subspace::column_space(p, 1e-8)).collect()
    }

    /// Rank of the support projection.
    pub fn rank(&self) -> usize {
        self.ranges().iter().map(Subspace::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Linear basis of `pA`: for each block, `u·e_jᵀ` with `u` running over an
    /// orthonormal basis of `range(p)` and `j` over the columns.
    pub fn spanning_set(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::new();
        for (b, range) in self.ranges().iter().enumerate() {
            let n = self.shape.block_dims()[b];
            for u in range.basis() {
                for j in 0..n {
                    let m = CMatrix::from_fn(n, n, |r, c| if c == j { u[r] } else { C64::new(0.0, 0.0) });
                    out.push(AlgebraElement::single_block(&self.shape, b, m).expect("sizes match"));
                }
            }
        }
        out
    }

    /// `pA` as a subspace of `A` in matrix-unit coordinates.
    pub fn linear_span(&self) -> Subspace {
        let vectors: Vec<Vec<C64>> = self.spanning_set().iter().map(AlgebraElement::flatten).collect();
        Subspace::span(self.shape.dim(), &vectors, 1e-9)
    }

    /// `dim(J ∩ K)` as complex vector spaces.
    pub fn intersection_dim(&self, other: &RightIdeal) -> usize {
        self.linear_span().intersection_dim(&other.linear_span(), 1e-9)
    }

    /// Mutual membership between `pA` and the right ideal generated by
    /// `generators`, checked on spanning sets.
    pub fn equals_generated(&self, generators: &[AlgebraElement]) -> bool {
        if !generators.iter().all(|g| self.contains(g)) {
            return false;
        }
        let generated = match ideal_support_projection(generators) {
            Ok(j) => j,
            Err(_) => return self.is_zero(),
        };
        self.spanning_set().iter().all(|b| generated.contains(b))
    }
}

/// Choice of `ε` in [`closed_subideal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsRule {
    /// Half the smallest eigenvalue of `a` above tolerance; `p` is then the
    /// range projection of `x`.
    #[default]
    HalfSmallestPositive,
    /// `‖a‖ / 2`; `p` keeps only the top of the spectrum.
    HalfNorm,
}

/// The norm-closed right ideal `K ⊆ xA` built from a nonzero `x`, with the
/// checks that certify the inclusion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedSubideal {
    pub eps: f64,
    /// `a = xx*`
    pub a: AlgebraElement,
    /// `p = χ_(ε,∞)(a)`
    pub p: AlgebraElement,
    /// `f(a)` with `f(t) = t·g(t)`
    pub fa: AlgebraElement,
    pub ideal: RightIdeal,
    /// `‖f(a)·p − p‖`
    pub fa_p_residual: f64,
    /// Largest `‖b − f(a)·p·b‖` over the probe set of `K`.
    pub probe_residual: f64,
    /// Largest `‖x·c − b‖` with `c = x*·g(a)·p·b`, exhibiting `b ∈ xA`.
    pub factor_residual: f64,
    pub probes: usize,
}

impl ClosedSubideal {
    pub fn verified(&self, tol_fa_p: f64, tol_probe: f64) -> bool {
        !self.ideal.is_zero()
            && self.fa_p_residual <= tol_fa_p
            && self.probe_residual <= tol_probe
            && self.factor_residual <= tol_probe
    }
}

/// Continuous `g` with `g = 0` below `ε/2`, `g(t) = 1/t` from `ε` on, and
/// linear in between.
pub fn subideal_cutoff(eps: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        if t < eps / 2.0 {
            0.0
        } else if t < eps {
            (t - eps / 2.0) / (eps / 2.0) / eps
        } else {
            1.0 / t
        }
    }
}

pub fn closed_subideal(x: &AlgebraElement) -> Result<ClosedSubideal> {
    closed_subideal_with(x, EpsRule::default())
}

pub fn closed_subideal_with(x: &AlgebraElement, rule: EpsRule) -> Result<ClosedSubideal> {
    if x.max_abs() <= x.tol() {
        return Err(Error::ZeroInput);
    }
    let a = x.mul(&x.adjoint()).map_blocks(CMatrix::hermitian_part);
    let tol = a.tol();
    let spec = spectrum(&a)?;
    let top = spec.iter().copied().fold(0.0, f64::max);
    let eps = match rule {
        EpsRule::HalfNorm => top / 2.0,
        EpsRule::HalfSmallestPositive => {
            spec.iter().copied().filter(|&l| l > tol).fold(f64::INFINITY, f64::min) / 2.0
        }
    };
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::ZeroInput);
    }
    let p = spectral_projection(&a, eps)?;
    let g = subideal_cutoff(eps);
    let ga = calculus(&a, &g)?;
    let fa = calculus(&a, &|t: f64| t * g(t))?;
    let ideal = ideal_from_projection(&p)?;

    let fa_p_residual = fa.mul(&p).sub(&p).norm();
    let probes = ideal.spanning_set();
    let mut probe_residual: f64 = 0.0;
    let mut factor_residual: f64 = 0.0;
    let x_adj = x.adjoint();
    for b in &probes {
        let fpb = fa.mul(&p).mul(b);
        probe_residual = probe_residual.max(b.sub(&fpb).norm());
        let c = x_adj.mul(&ga).mul(&p).mul(b);
        factor_residual = factor_residual.max(x.mul(&c).sub(b).norm());
    }
    Ok(ClosedSubideal {
        eps,
        a,
        p,
        fa,
        ideal,
        fa_p_residual,
        probe_residual,
        factor_residual,
        probes: probes.len(),
    })
}

/// Evidence attached to an essentiality decision for a right ideal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IdealCertificate {
    /// `p = 1`, so `pA = A` meets every nonzero right ideal.
    WholeAlgebra,
    /// A unit vector `v ⊥ range(p)` in `block`; the rank-one ideal `qA`,
    /// `q = vv*`, meets `J` only in zero.
    Complement { block: usize, vector: Vec<C64>, witness: RightIdeal, intersection_dim: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealEssentiality {
    pub essential: bool,
    pub certificate: IdealCertificate,
}

/// In finite dimension `pA` is essential exactly when `p = 1`.
pub fn is_essential_right_ideal(j: &RightIdeal) -> IdealEssentiality {
    let shape = j.shape();
    for (b, range) in j.ranges().iter().enumerate() {
        if range.is_full() {
            continue;
        }
        let v = range.complement().basis()[0].clone();
        let n = shape.block_dims()[b];
        let q = CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj());
        let q = AlgebraElement::single_block(shape, b, q).expect("block size");
        let witness = ideal_from_projection(&q).expect("vv* is a projection");
        let intersection_dim = j.intersection_dim(&witness);
        return IdealEssentiality {
            essential: false,
            certificate: IdealCertificate::Complement { block: b, vector: v, witness, intersection_dim },
        };
    }
    IdealEssentiality { essential: true, certificate: IdealCertificate::WholeAlgebra }
}
