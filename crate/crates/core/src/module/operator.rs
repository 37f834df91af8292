use serde::{Deserialize, Serialize};

use super::element::{check_same, inner_product, ModuleElement};
use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::numeric::CMatrix;

/// An A-linear operator on `A^k`, stored as a `k × k` matrix over `A`.
///
/// At finite rank every such operator is compact, and the operators form
/// `M_k(A) ≅ ⊕ᵢ M_{k·nᵢ}`; [`CompactOperator::to_algebra`] is that identification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator", into = "RawOperator")]
pub struct CompactOperator {
    shape: AlgebraShape,
    k: usize,
    entries: Vec<AlgebraElement>,
}

#[derive(Serialize, Deserialize)]
struct RawOperator {
    shape: AlgebraShape,
    k: usize,
    matrix: Vec<Vec<AlgebraElement>>,
}

impl TryFrom<RawOperator> for CompactOperator {
    type Error = Error;
    fn try_from(raw: RawOperator) -> Result<Self> {
        if raw.matrix.len() != raw.k || raw.matrix.iter().any(|r| r.len() != raw.k) {
            return Err(Error::ShapeMismatch(format!("operator matrix must be {k}x{k}", k = raw.k)));
        }
        let entries: Vec<AlgebraElement> = raw.matrix.into_iter().flatten().collect();
        if entries.iter().any(|e| e.shape() != &raw.shape) {
            return Err(Error::ShapeMismatch("operator entry over a different algebra".into()));
        }
        Ok(CompactOperator { shape: raw.shape, k: raw.k, entries })
    }
}

impl From<CompactOperator> for RawOperator {
    fn from(t: CompactOperator) -> Self {
        let matrix = t.entries.chunks(t.k).map(<[AlgebraElement]>::to_vec).collect();
        RawOperator { shape: t.shape, k: t.k, matrix }
    }
}

impl CompactOperator {
    pub fn zero(shape: &AlgebraShape, k: usize) -> Self {
        Self { shape: shape.clone(), k, entries: vec![AlgebraElement::zero(shape); k * k] }
    }

    pub fn identity(shape: &AlgebraShape, k: usize) -> Self {
        let mut t = Self::zero(shape, k);
        for l in 0..k {
            t.entries[l * k + l] = AlgebraElement::identity(shape);
        }
        t
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.k + j]
    }

    /// `(Tz)ᵢ = Σⱼ Tᵢⱼ zⱼ`.
    pub fn apply(&self, z: &ModuleElement) -> Result<ModuleElement> {
        if z.shape() != &self.shape || z.k() != self.k {
            return Err(Error::ShapeMismatch("operator and module element differ".into()));
        }
        let coords = (0..self.k)
            .map(|i| {
                (0..self.k).fold(AlgebraElement::zero(&self.shape), |acc, j| acc.add(&self.entry(i, j).mul(&z.coords()[j])))
            })
            .collect();
        ModuleElement::new(self.shape.clone(), coords)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::from_algebra(&self.shape, self.k, &self.to_algebra().mul(&other.to_algebra()))
            .expect("amplified shapes agree")
    }

    pub fn add(&self, other: &Self) -> Self {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Self { shape: self.shape.clone(), k: self.k, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Self { shape: self.shape.clone(), k: self.k, entries }
    }

    pub fn adjoint(&self) -> Self {
        let k = self.k;
        let entries = (0..k * k).map(|idx| self.entry(idx % k, idx / k).adjoint()).collect();
        Self { shape: self.shape.clone(), k, entries }
    }

    /// The operator as an element of `M_k(A)` with blocks of size `k·nᵢ`.
    pub fn to_algebra(&self) -> AlgebraElement {
        let amplified = self.shape.amplify(self.k);
        let blocks = self
            .shape
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let mut m = CMatrix::zeros(self.k * n, self.k * n);
                for i in 0..self.k {
                    for j in 0..self.k {
                        m.set_block(i * n, j * n, self.entry(i, j).block(b));
                    }
                }
                m
            })
            .collect();
        AlgebraElement::from_blocks(amplified, blocks).expect("amplified block sizes")
    }

    pub fn from_algebra(shape: &AlgebraShape, k: usize, t: &AlgebraElement) -> Result<Self> {
        if t.shape() != &shape.amplify(k) {
            return Err(Error::ShapeMismatch("element is not over the amplified algebra".into()));
        }
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let blocks = shape
                    .block_dims()
                    .iter()
                    .enumerate()
                    .map(|(b, &n)| t.block(b).block(i * n, j * n, n, n))
                    .collect();
                entries.push(AlgebraElement::from_blocks(shape.clone(), blocks)?);
            }
        }
        Ok(Self { shape: shape.clone(), k, entries })
    }

    /// Operator norm on the Hilbert module, equal to the C*-norm in `M_k(A)`.
    pub fn norm(&self) -> f64 {
        self.to_algebra().norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(AlgebraElement::max_abs).fold(0.0, f64::max)
    }
}

/// `Θ_{x,y}(z) = x⟨y, z⟩`; as a matrix over `A`, entry `(i, j)` is `xᵢ yⱼ*`.
pub fn theta(x: &ModuleElement, y: &ModuleElement) -> Result<CompactOperator> {
    check_same(x, y)?;
    let k = x.k();
    let mut entries = Vec::with_capacity(k * k);
    for xi in x.coords() {
        for yj in y.coords() {
            entries.push(xi.mul(&yj.adjoint()));
        }
    }
    Ok(CompactOperator { shape: x.shape().clone(), k, entries })
}

/// `x·⟨y, z⟩`, the defining action of `Θ_{x,y}` on `z`.
pub fn theta_action(x: &ModuleElement, y: &ModuleElement, z: &ModuleElement) -> Result<ModuleElement> {
    Ok(x.right_mul(&inner_product(y, z)?))
}
