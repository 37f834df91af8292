use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{op_norm, scaled_tol, CMatrix, C64};

/// Block sizes `(n₁, …, n_r)` of `A = ⊕ᵢ M_{nᵢ}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    block_dims: Vec<usize>,
}

impl TryFrom<RawShape> for AlgebraShape {
    type Error = Error;
    fn try_from(raw: RawShape) -> Result<Self> {
        AlgebraShape::new(raw.block_dims)
    }
}

impl From<AlgebraShape> for RawShape {
    fn from(s: AlgebraShape) -> Self {
        RawShape { block_dims: s.block_dims }
    }
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidShape("block dimensions must be positive".into()));
        }
        Ok(Self { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension `Σ nᵢ²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Shape of `M_k(A) = ⊕ᵢ M_{k·nᵢ}`.
    pub fn amplify(&self, k: usize) -> Self {
        Self { block_dims: self.block_dims.iter().map(|n| n * k).collect() }
    }
}

/// An element of `A = ⊕ᵢ M_{nᵢ}`, one square matrix per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    shape: AlgebraShape,
    blocks: Vec<CMatrix>,
}

impl TryFrom<RawElement> for AlgebraElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        AlgebraElement::from_blocks(raw.shape, raw.blocks)
    }
}

impl From<AlgebraElement> for RawElement {
    fn from(e: AlgebraElement) -> Self {
        RawElement { shape: e.shape, blocks: e.blocks }
    }
}

impl AlgebraElement {
    pub fn from_blocks(shape: AlgebraShape, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::DimensionMismatch { expected: shape.num_blocks(), found: blocks.len() });
        }
        for (b, &n) in blocks.iter().zip(shape.block_dims()) {
            if b.rows() != n || b.cols() != n {
                return Err(Error::ShapeMismatch(format!("block is {}x{}, expected {n}x{n}", b.rows(), b.cols())));
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self { shape: shape.clone(), blocks }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| CMatrix::identity(n)).collect();
        Self { shape: shape.clone(), blocks }
    }

    /// Matrix unit `E_{ij}` inside block `block`.
    pub fn matrix_unit(shape: &AlgebraShape, block: usize, i: usize, j: usize) -> Self {
        let mut e = Self::zero(shape);
        e.blocks[block][(i, j)] = C64::new(1.0, 0.0);
        e
    }

    /// All matrix units, block by block in row-major order; a basis of `A`.
    pub fn matrix_units(shape: &AlgebraShape) -> Vec<Self> {
        let mut out = Vec::with_capacity(shape.dim());
        for (b, &n) in shape.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.push(Self::matrix_unit(shape, b, i, j));
                }
            }
        }
        out
    }

    /// Element whose blocks are all zero except `block`, which is `m`.
    pub fn single_block(shape: &AlgebraShape, block: usize, m: CMatrix) -> Result<Self> {
        let mut e = Self::zero(shape);
        let n = shape.block_dims()[block];
        if m.rows() != n || m.cols() != n {
            return Err(Error::ShapeMismatch(format!("block {block} needs {n}x{n}")));
        }
        e.blocks[block] = m;
        Ok(e)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn map_blocks(&self, f: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        Self { shape: self.shape.clone(), blocks: self.blocks.iter().map(f).collect() }
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(self.shape, other.shape, "algebra shapes differ");
        Self { shape: self.shape.clone(), blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_blocks(|b| b.scale(s))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(CMatrix::adjoint)
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    /// Largest entry modulus, a cheap zero test.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.blocks.iter().map(CMatrix::hermitian_deviation).fold(0.0, f64::max)
    }

    /// Default tolerance for this element, `1e-10 · (1 + ‖a‖)`.
    pub fn tol(&self) -> f64 {
        scaled_tol(self.norm())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape == other.shape && self.sub(other).max_abs() <= tol
    }

    /// Coordinates in the matrix-unit basis.
    pub fn flatten(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(|b| b.as_slice().iter().copied()).collect()
    }

    pub fn from_flat(shape: &AlgebraShape, v: &[C64]) -> Result<Self> {
        if v.len() != shape.dim() {
            return Err(Error::DimensionMismatch { expected: shape.dim(), found: v.len() });
        }
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        for &n in shape.block_dims() {
            blocks.push(CMatrix::from_vec(n, n, v[offset..offset + n * n].to_vec())?);
            offset += n * n;
        }
        Ok(Self { shape: shape.clone(), blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_validation() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
        let s = AlgebraShape::new(vec![2, 3]).unwrap();
        assert_eq!(s.dim(), 13);
        assert_eq!(s.amplify(2).block_dims(), &[4, 6]);
    }

    #[test]
    fn flatten_roundtrip_and_units() {
        let s = AlgebraShape::new(vec![1, 2]).unwrap();
        let units = AlgebraElement::matrix_units(&s);
        assert_eq!(units.len(), 5);
        let e = &units[3];
        assert_eq!(AlgebraElement::from_flat(&s, &e.flatten()).unwrap(), *e);
    }

    #[test]
    fn json_shape_is_validated() {
        let bad = r#"{"shape":{"block_dims":[2]},"blocks":[[[[1.0,0.0]]]]}"#;
        assert!(serde_json::from_str::<AlgebraElement>(bad).is_err());
        let s = AlgebraShape::new(vec![1]).unwrap();
        let e = AlgebraElement::identity(&s);
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(text, r#"{"shape":{"block_dims":[1]},"blocks":[[[[1.0,0.0]]]]}"#);
    }
}
