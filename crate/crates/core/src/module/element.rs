use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::numeric::{op_norm, scaled_tol, CMatrix, C64};

/// An element `(x₁, …, x_k)` of the free module `A^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModuleElement", into = "RawModuleElement")]
pub struct ModuleElement {
    shape: AlgebraShape,
    coords: Vec<AlgebraElement>,
}

#[derive(Serialize, Deserialize)]
struct RawModuleElement {
    shape: AlgebraShape,
    k: usize,
    coords: Vec<AlgebraElement>,
}

impl TryFrom<RawModuleElement> for ModuleElement {
    type Error = Error;
    fn try_from(raw: RawModuleElement) -> Result<Self> {
        if raw.coords.len() != raw.k {
            return Err(Error::DimensionMismatch { expected: raw.k, found: raw.coords.len() });
        }
        ModuleElement::new(raw.shape, raw.coords)
    }
}

impl From<ModuleElement> for RawModuleElement {
    fn from(m: ModuleElement) -> Self {
        RawModuleElement { shape: m.shape, k: m.coords.len(), coords: m.coords }
    }
}

pub(crate) fn check_same(x: &ModuleElement, y: &ModuleElement) -> Result<()> {
    if x.shape != y.shape || x.k() != y.k() {
        return Err(Error::ShapeMismatch(format!(
            "module elements over {:?}^{} and {:?}^{}",
            x.shape.block_dims(),
            x.k(),
            y.shape.block_dims(),
            y.k()
        )));
    }
    Ok(())
}

impl ModuleElement {
    pub fn new(shape: AlgebraShape, coords: Vec<AlgebraElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("a module element needs at least one coordinate".into()));
        }
        if let Some(c) = coords.iter().find(|c| c.shape() != &shape) {
            return Err(Error::ShapeMismatch(format!("coordinate over {:?}", c.shape().block_dims())));
        }
        Ok(Self { shape, coords })
    }

    pub fn zero(shape: &AlgebraShape, k: usize) -> Self {
        Self { shape: shape.clone(), coords: vec![AlgebraElement::zero(shape); k] }
    }

    /// `e_l · 1`: the identity in coordinate `l`, zero elsewhere.
    pub fn unit(shape: &AlgebraShape, k: usize, l: usize) -> Self {
        let mut m = Self::zero(shape, k);
        m.coords[l] = AlgebraElement::identity(shape);
        m
    }

    /// Complex-linear basis `e_l ⊗ E_{ij}` of `A^k`.
    pub fn linear_basis(shape: &AlgebraShape, k: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(k * shape.dim());
        for l in 0..k {
            for e in AlgebraElement::matrix_units(shape) {
                let mut m = Self::zero(shape, k);
                m.coords[l] = e;
                out.push(m);
            }
        }
        out
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[AlgebraElement] {
        &self.coords
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().map(|c| c.scale(s)).collect() }
    }

    /// Right action `m·a`.
    pub fn right_mul(&self, a: &AlgebraElement) -> Self {
        Self { shape: self.shape.clone(), coords: self.coords.iter().map(|c| c.mul(a)).collect() }
    }

    /// Block `i` stacked over the coordinates: a `(k·nᵢ) × nᵢ` matrix.
    pub fn block_stack(&self, i: usize) -> CMatrix {
        let n = self.shape.block_dims()[i];
        let mut out = CMatrix::zeros(self.k() * n, n);
        for (l, c) in self.coords.iter().enumerate() {
            out.set_block(l * n, 0, c.block(i));
        }
        out
    }

    pub fn from_block_stacks(shape: &AlgebraShape, k: usize, stacks: &[CMatrix]) -> Result<Self> {
        if stacks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch { expected: shape.num_blocks(), found: stacks.len() });
        }
        let coords = (0..k)
            .map(|l| {
                let blocks = stacks
                    .iter()
                    .zip(shape.block_dims())
                    .map(|(s, &n)| s.block(l * n, 0, n, n))
                    .collect();
                AlgebraElement::from_blocks(shape.clone(), blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shape.clone(), coords)
    }

    /// `‖m‖ = ‖⟨m, m⟩‖^{1/2}`, the largest operator norm of the block stacks.
    pub fn norm(&self) -> f64 {
        (0..self.shape.num_blocks()).map(|i| op_norm(&self.block_stack(i))).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(AlgebraElement::max_abs).fold(0.0, f64::max)
    }

    pub fn tol(&self) -> f64 {
        scaled_tol(self.norm())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Coordinates in the basis `e_l ⊗ E_{ij}`.
    pub fn flatten(&self) -> Vec<C64> {
        self.coords.iter().flat_map(AlgebraElement::flatten).collect()
    }

    pub fn from_flat(shape: &AlgebraShape, k: usize, v: &[C64]) -> Result<Self> {
        let d = shape.dim();
        if v.len() != k * d {
            return Err(Error::DimensionMismatch { expected: k * d, found: v.len() });
        }
        let coords = v.chunks(d).map(|c| AlgebraElement::from_flat(shape, c)).collect::<Result<Vec<_>>>()?;
        Self::new(shape.clone(), coords)
    }
}

/// `⟨x, y⟩ = Σᵢ xᵢ* yᵢ`.
pub fn inner_product(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    check_same(x, y)?;
    let mut acc = AlgebraElement::zero(x.shape());
    for (a, b) in x.coords.iter().zip(&y.coords) {
        acc = acc.add(&a.adjoint().mul(b));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> ModuleElement {
        let s = AlgebraShape::new(vec![1]).unwrap();
        let a = AlgebraElement::from_blocks(s.clone(), vec![CMatrix::from_real_diag(&[v])]).unwrap();
        ModuleElement::new(s, vec![a]).unwrap()
    }

    #[test]
    fn scalar_inner_product() {
        let ip = inner_product(&scalar(2.0), &scalar(3.0)).unwrap();
        assert_eq!(ip.block(0)[(0, 0)], C64::new(6.0, 0.0));
        let z = inner_product(&scalar(0.0), &scalar(3.0)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn shape_mismatch() {
        let s = AlgebraShape::new(vec![1]).unwrap();
        let x = ModuleElement::zero(&s, 2);
        assert!(matches!(inner_product(&x, &scalar(1.0)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn block_stack_roundtrip() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let basis = ModuleElement::linear_basis(&s, 3);
        assert_eq!(basis.len(), 15);
        let m = basis[7].add(&basis[12].scale(C64::new(0.0, 2.0)));
        let stacks: Vec<CMatrix> = (0..2).map(|i| m.block_stack(i)).collect();
        assert_eq!(ModuleElement::from_block_stacks(&s, 3, &stacks).unwrap(), m);
        assert_eq!(ModuleElement::from_flat(&s, 3, &m.flatten()).unwrap(), m);
    }

    #[test]
    fn norm_matches_inner_product() {
        let s = AlgebraShape::new(vec![2]).unwrap();
        let m = ModuleElement::unit(&s, 2, 1).scale(C64::new(3.0, 4.0));
        assert!((m.norm() - 5.0).abs() < 1e-12);
        let ip = inner_product(&m, &m).unwrap();
        assert!((ip.norm().sqrt() - 5.0).abs() < 1e-12);
    }
}
