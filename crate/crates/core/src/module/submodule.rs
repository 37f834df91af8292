use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::element::ModuleElement;
use super::operator::{theta, CompactOperator};
use crate::algebra::{ideal_support_projection, is_essential_right_ideal, AlgebraElement, AlgebraShape, IdealCertificate, RightIdeal};
use crate::error::{Error, Result};
use crate::numeric::{CMatrix, Subspace, C64};

const SPAN_TOL: f64 = 1e-9;

/// The A-submodule of `A^k` generated by finitely many elements.
///
/// As a complex vector space it is the span of `g·E` over generators `g` and
/// matrix units `E`; every question about the submodule is answered on that
/// span. In finite dimension every submodule is closed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawSubmodule", into = "RawSubmodule")]
pub struct Submodule {
    shape: AlgebraShape,
    k: usize,
    generators: Vec<ModuleElement>,
    span: OnceLock<Subspace>,
}

#[derive(Serialize, Deserialize)]
struct RawSubmodule {
    shape: AlgebraShape,
    k: usize,
    generators: Vec<ModuleElement>,
}

impl TryFrom<RawSubmodule> for Submodule {
    type Error = Error;
    fn try_from(raw: RawSubmodule) -> Result<Self> {
        Submodule::new(raw.shape, raw.k, raw.generators)
    }
}

impl From<Submodule> for RawSubmodule {
    fn from(n: Submodule) -> Self {
        RawSubmodule { shape: n.shape, k: n.k, generators: n.generators }
    }
}

impl Submodule {
    pub fn new(shape: AlgebraShape, k: usize, generators: Vec<ModuleElement>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("module rank k must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.shape() != &shape || g.k() != k) {
            return Err(Error::ShapeMismatch(format!("generator over {:?}^{}", g.shape().block_dims(), g.k())));
        }
        Ok(Self { shape, k, generators, span: OnceLock::new() })
    }

    pub fn whole(shape: &AlgebraShape, k: usize) -> Self {
        let gens = (0..k).map(|l| ModuleElement::unit(shape, k, l)).collect();
        Self::new(shape.clone(), k, gens).expect("units share the shape")
    }

    pub fn zero(shape: &AlgebraShape, k: usize) -> Self {
        Self::new(shape.clone(), k, Vec::new()).expect("empty generator list")
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    /// Dimension of `A^k` over ℂ.
    pub fn ambient_dim(&self) -> usize {
        self.k * self.shape.dim()
    }

    pub fn span(&self) -> &Subspace {
        self.span.get_or_init(|| {
            let units = AlgebraElement::matrix_units(&self.shape);
            let vectors: Vec<Vec<C64>> = self
                .generators
                .iter()
                .flat_map(|g| units.iter().map(move |e| g.right_mul(e).flatten()))
                .collect();
            Subspace::span(self.ambient_dim(), &vectors, SPAN_TOL)
        })
    }

    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    pub fn contains(&self, m: &ModuleElement) -> bool {
        m.shape() == &self.shape && m.k() == self.k && self.span().contains(&m.flatten(), 1e-8)
    }

    /// Equality as complex-linear spans.
    pub fn same_span(&self, other: &Submodule) -> bool {
        self.shape == other.shape && self.k == other.k && self.span().same_as(other.span(), 1e-8)
    }

    /// Orthonormal basis of the span, as module elements.
    pub fn basis_elements(&self) -> Vec<ModuleElement> {
        self.span()
            .basis()
            .iter()
            .map(|v| ModuleElement::from_flat(&self.shape, self.k, v).expect("span vectors have module length"))
            .collect()
    }
}

/// `J_N = { T ∈ 𝒦(A^k) : Ran T ⊆ N }` as a right ideal of `M_k(A)`.
///
/// Spanned by `Θ_{n, e_l}` with `n` running over a basis of `N`; the support
/// projection is the blockwise projection onto the column space of `N`.
pub fn ideal_of_submodule(n: &Submodule) -> RightIdeal {
    let amplified = n.shape().amplify(n.k());
    let units: Vec<ModuleElement> = (0..n.k()).map(|l| ModuleElement::unit(n.shape(), n.k(), l)).collect();
    let spanning: Vec<AlgebraElement> = n
        .basis_elements()
        .iter()
        .flat_map(|b| units.iter().map(move |u| theta(b, u).expect("same module").to_algebra()))
        .collect();
    if spanning.is_empty() {
        return RightIdeal::zero(&amplified);
    }
    ideal_support_projection(&spanning).expect("generators share the amplified shape")
}

/// `T ∈ J_N ⟺ T(e_l) ∈ N` for every coordinate unit `e_l`.
pub fn operator_in_ideal(n: &Submodule, t: &CompactOperator) -> Result<bool> {
    for l in 0..n.k() {
        let image = t.apply(&ModuleElement::unit(n.shape(), n.k(), l))?;
        if !n.contains(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `N = J·A^k`, generated by `T(e_l)` where `T` runs over the right-ideal
/// generators `u·e₁ᵀ` (`u` an orthonormal basis of the support range) of `J`.
pub fn submodule_of_ideal(j: &RightIdeal, shape: &AlgebraShape, k: usize) -> Result<Submodule> {
    let amplified = shape.amplify(k);
    if j.shape() != &amplified {
        return Err(Error::ShapeMismatch("ideal is not over M_k(A)".into()));
    }
    let mut generators = Vec::new();
    for (b, range) in j.ranges().iter().enumerate() {
        let size = amplified.block_dims()[b];
        for u in range.basis() {
            let block = CMatrix::from_fn(size, size, |r, c| if c == 0 { u[r] } else { C64::new(0.0, 0.0) });
            let t = CompactOperator::from_algebra(shape, k, &AlgebraElement::single_block(&amplified, b, block)?)?;
            for l in 0..k {
                let image = t.apply(&ModuleElement::unit(shape, k, l))?;
                if image.max_abs() > 1e-12 {
                    generators.push(image);
                }
            }
        }
    }
    Submodule::new(shape.clone(), k, generators)
}

/// Outcome of asking whether `mA` meets `N` nontrivially.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeResult {
    pub found: bool,
    /// `a` with `ma ∈ N` and `ma ≠ 0`, when one exists.
    pub witness: Option<AlgebraElement>,
    /// `dim S_m` where `S_m = { a ∈ A : ma ∈ N }`.
    pub kernel_dim: usize,
}

/// Decides whether some `a ∈ A` has `ma ∈ N` and `ma ≠ 0`.
///
/// `S_m` is the kernel of `a ↦ (1 − Π_N)(ma)` written in the matrix-unit
/// basis; the answer is whether `m·S_m` is nonzero.
pub fn reformulation_probe(m: &ModuleElement, n: &Submodule) -> Result<ProbeResult> {
    if m.shape() != n.shape() || m.k() != n.k() {
        return Err(Error::ShapeMismatch("element and submodule differ".into()));
    }
    if m.is_zero(1e-12) {
        return Err(Error::ZeroInput);
    }
    let shape = n.shape();
    let units = AlgebraElement::matrix_units(shape);
    let span = n.span();
    let columns: Vec<Vec<C64>> = units
        .iter()
        .map(|e| {
            let v = m.right_mul(e).flatten();
            let p = span.project(&v);
            v.iter().zip(&p).map(|(a, b)| a - b).collect()
        })
        .collect();
    let map = CMatrix::from_columns(n.ambient_dim(), &columns)?;
    let kernel = Subspace::null_space(&map, 1e-9);
    let cutoff = 1e-8 * (1.0 + m.norm());
    let mut best: Option<(f64, AlgebraElement)> = None;
    for v in kernel.basis() {
        let a = AlgebraElement::from_flat(shape, v)?;
        let size = m.right_mul(&a).norm();
        if size > cutoff && best.as_ref().is_none_or(|(s, _)| size > *s) {
            best = Some((size, a));
        }
    }
    Ok(ProbeResult { found: best.is_some(), witness: best.map(|(_, a)| a), kernel_dim: kernel.dim() })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubmoduleEssentiality {
    /// (E): meets every nonzero submodule.
    pub essential: bool,
    /// (TE): meets every nonzero closed submodule; equal to (E) here.
    pub topologically_essential: bool,
    pub ideal_certificate: IdealCertificate,
    /// A nonzero `m` with `N ∩ mA = 0`, when `N` is not essential.
    pub certificate: Option<ModuleElement>,
    pub certificate_probe: Option<ProbeResult>,
}

/// Decides essentiality of `N` through `J_N`.
///
/// A non-essential answer comes with `m` built from the ideal certificate
/// `v ⊥ range(P_N)`: the element whose block stack is `v·e₁ᵀ`, for which
/// `mA ∩ N = 0` is confirmed by [`reformulation_probe`].
pub fn is_essential_submodule(n: &Submodule) -> Result<SubmoduleEssentiality> {
    let j = ideal_of_submodule(n);
    let decision = is_essential_right_ideal(&j);
    // Every submodule of A^k is closed, so (E) and (TE) are the same test.
    let topologically_essential = decision.essential;
    let essential = decision.essential;
    assert_eq!(essential, topologically_essential);
    let (certificate, certificate_probe) = match &decision.certificate {
        IdealCertificate::WholeAlgebra => (None, None),
        IdealCertificate::Complement { block, vector, .. } => {
            let shape = n.shape();
            let stacks: Vec<CMatrix> = shape
                .block_dims()
                .iter()
                .enumerate()
                .map(|(b, &size)| {
                    let rows = n.k() * size;
                    if b == *block {
                        CMatrix::from_fn(rows, size, |r, c| if c == 0 { vector[r] } else { C64::new(0.0, 0.0) })
                    } else {
                        CMatrix::zeros(rows, size)
                    }
                })
                .collect();
            let m = ModuleElement::from_block_stacks(shape, n.k(), &stacks)?;
            let probe = reformulation_probe(&m, n)?;
            (Some(m), Some(probe))
        }
    };
    Ok(SubmoduleEssentiality {
        essential,
        topologically_essential,
        ideal_certificate: decision.certificate,
        certificate,
        certificate_probe,
    })
}
