//! Random objects drawn from [`Rng`].

use essmod::algebra::{AlgebraElement, AlgebraShape};
use essmod::field::exact::GMatrix;
use essmod::field::rational::{gq, q, qi};
use essmod::field::{GPoly, PiecewiseSection, QPoly, SubspaceField, SymbolicSubset, GQ, Q};
use essmod::module::{ModuleElement, Submodule};
use essmod::numeric::{CMatrix, C64};

use crate::rng::Rng;

pub fn complex(rng: &mut Rng) -> C64 {
    C64::new(rng.signed_f64(), rng.signed_f64())
}

pub fn matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols).map(|_| complex(rng)).collect();
    CMatrix::from_vec(rows, cols, data).expect("sizes agree")
}

pub fn hermitian(rng: &mut Rng, n: usize) -> CMatrix {
    matrix(rng, n, n).hermitian_part()
}

pub fn shape(rng: &mut Rng, max_blocks: usize, max_dim: usize) -> AlgebraShape {
    let count = 1 + rng.below(max_blocks as u64) as usize;
    AlgebraShape::new((0..count).map(|_| 1 + rng.below(max_dim as u64) as usize).collect()).expect("positive dims")
}

pub fn element(rng: &mut Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape.block_dims().iter().map(|&n| matrix(rng, n, n)).collect();
    AlgebraElement::from_blocks(shape.clone(), blocks).expect("block sizes")
}

pub fn hermitian_element(rng: &mut Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape.block_dims().iter().map(|&n| hermitian(rng, n)).collect();
    AlgebraElement::from_blocks(shape.clone(), blocks).expect("block sizes")
}

/// `x` with block `i` of rank `ranks[i]`, as a product of thin factors.
pub fn element_of_ranks(rng: &mut Rng, shape: &AlgebraShape, ranks: &[usize]) -> AlgebraElement {
    let blocks = shape
        .block_dims()
        .iter()
        .zip(ranks)
        .map(|(&n, &r)| if r == 0 { CMatrix::zeros(n, n) } else { &matrix(rng, n, r) * &matrix(rng, r, n) })
        .collect();
    AlgebraElement::from_blocks(shape.clone(), blocks).expect("block sizes")
}

pub fn module_element(rng: &mut Rng, shape: &AlgebraShape, k: usize) -> ModuleElement {
    let coords = (0..k).map(|_| element(rng, shape)).collect();
    ModuleElement::new(shape.clone(), coords).expect("shapes agree")
}

pub fn unit_module_element(rng: &mut Rng, shape: &AlgebraShape, k: usize) -> ModuleElement {
    let m = module_element(rng, shape, k);
    m.scale(C64::new(1.0 / m.norm(), 0.0))
}

/// Generators `g·E` with `E` a diagonal 0/1 mask in each block; returns the
/// submodule and the number of mask entries kept per block.
pub fn submodule(rng: &mut Rng, shape: &AlgebraShape, k: usize) -> (Submodule, usize, Vec<usize>) {
    let count = rng.below(4) as usize;
    let mut kept = Vec::new();
    let masks: Vec<CMatrix> = shape
        .block_dims()
        .iter()
        .map(|&n| {
            let flags: Vec<bool> = (0..n).map(|_| rng.below(4) != 0).collect();
            kept.push(flags.iter().filter(|&&f| f).count());
            CMatrix::from_fn(n, n, |r, c| if r == c && flags[r] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
        })
        .collect();
    let mask = AlgebraElement::from_blocks(shape.clone(), masks).expect("block sizes");
    let gens = (0..count).map(|_| module_element(rng, shape, k).right_mul(&mask)).collect();
    (Submodule::new(shape.clone(), k, gens).expect("shapes agree"), count, kept)
}

pub fn small_gq(rng: &mut Rng, bound: i64) -> GQ {
    gq(qi(rng.range(-bound, bound)), qi(rng.range(-bound, bound)))
}

/// Random spanning set with exactly `rank` independent columns.
pub fn basis_of_rank(rng: &mut Rng, d: usize, rank: usize) -> Vec<Vec<GQ>> {
    loop {
        let cols: Vec<Vec<GQ>> = (0..rank).map(|_| (0..d).map(|_| small_gq(rng, 3)).collect()).collect();
        if GMatrix::from_columns(d, &cols).rank() == rank {
            return cols;
        }
    }
}

/// A polynomial of degree at most `deg` with coefficients `p/den`.
pub fn rational_poly(rng: &mut Rng, deg: usize, num: i64, den: i64) -> QPoly {
    QPoly::new((0..=deg).map(|_| q(rng.range(-num, num), den)).collect())
}

/// A scalar section polynomial on all of `[0, 1]`.
pub fn scalar_section(rng: &mut Rng, deg: usize) -> PiecewiseSection {
    let den = 1 + rng.below(3) as i64;
    let p = rational_poly(rng, deg, 4, den);
    PiecewiseSection::polynomial(vec![GPoly::from_real(&p)]).expect("one coordinate")
}

/// A section of `ℂ^d` with Gaussian-integer polynomial coordinates.
pub fn vector_section(rng: &mut Rng, d: usize, deg: usize) -> PiecewiseSection {
    let polys = (0..d).map(|_| GPoly::new((0..=deg).map(|_| small_gq(rng, 2)).collect())).collect();
    PiecewiseSection::polynomial(polys).expect("d coordinates")
}

/// `Σ g_k c_k` with random scalar polynomials `c_k`.
pub fn combination(rng: &mut Rng, gens: &[PiecewiseSection]) -> PiecewiseSection {
    let d = gens[0].d();
    gens.iter().fold(PiecewiseSection::zero(d), |acc, g| {
        let deg = rng.below(3) as usize;
        let c = scalar_section(rng, deg);
        acc.add(&g.mul_scalar(&c).expect("scalar")).expect("same d")
    })
}

/// A random subset with endpoints on the grid `1/den`.
pub fn subset(rng: &mut Rng, den: i64) -> SymbolicSubset {
    let mut s = SymbolicSubset::empty();
    for _ in 0..rng.below(4) {
        let x = q(rng.range(0, den), den);
        s = s.union(&SymbolicSubset::point(x).expect("in range"));
    }
    for _ in 0..rng.below(4) {
        let a = rng.range(0, den);
        let b = rng.range(0, den);
        let iv = SymbolicSubset::interval(q(a.min(b), den), q(a.max(b), den), rng.coin(), rng.coin()).expect("in range");
        s = s.union(&iv);
    }
    s
}

/// A field with full fibers off `defects`, where each defect region gets a
/// random proper subspace.
pub fn field_with_defects(rng: &mut Rng, d: usize, cuts: &[Q], defects: &[SymbolicSubset]) -> SubspaceField {
    let planted = defects.iter().fold(SymbolicSubset::empty(), |acc, s| acc.union(s));
    let mut cells = Vec::new();
    let mut edges = vec![qi(0)];
    edges.extend(cuts.iter().cloned());
    edges.push(qi(1));
    edges.dedup();
    let mut covered = SymbolicSubset::empty();
    for w in edges.windows(2) {
        let region = SymbolicSubset::closed(w[0].clone(), w[1].clone()).expect("in range").difference(&covered).difference(&planted);
        covered = covered.union(&region);
        if !region.is_empty() {
            cells.push((region, basis_of_rank(rng, d, d)));
        }
    }
    for s in defects {
        let rank = rng.below(d as u64) as usize;
        cells.push((s.clone(), basis_of_rank(rng, d, rank)));
    }
    SubspaceField::new(d, cells).expect("cells partition [0, 1]")
}
