use serde::Serialize;

use essmod::algebra::{ideal_support_projection, AlgebraShape};
use essmod::field::rational::q;
use essmod::field::{residual_set, Boundary, FieldModuleSpec, PiecewiseSection, SymbolicSubset};
use essmod::Error;

use crate::error::{CliError, CliResult};
use crate::instance::{Expected, Instance, Kind, RightIdealPayload};
use crate::random;
use crate::rng::Rng;

pub const MAX_BLOCK_DIM: usize = 6;
pub const MAX_K: usize = 4;
pub const MAX_D: usize = 4;
pub const MAX_PIECES: usize = 16;
pub const MAX_GENERATORS: usize = 8;

/// Grid on which planted field features sit.
const GRID: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DefectMode {
    None,
    #[default]
    Points,
    Interval,
}

#[derive(Clone, Debug, Default)]
pub struct GenOptions {
    pub blocks: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub pieces: Option<usize>,
    pub generators: Option<usize>,
    pub defect: DefectMode,
}

fn cap(name: &str, value: usize, max: usize) -> CliResult<usize> {
    if value == 0 {
        return Err(CliError::Schema(format!("{name} must be positive")));
    }
    if value > max {
        return Err(CliError::SizeCap(format!("{name} = {value} exceeds {max}")));
    }
    Ok(value)
}

fn shape_from(opts: &GenOptions, rng: &mut Rng) -> CliResult<AlgebraShape> {
    match &opts.blocks {
        Some(b) => {
            for &n in b {
                cap("block dimension", n, MAX_BLOCK_DIM)?;
            }
            Ok(AlgebraShape::new(b.clone())?)
        }
        None => Ok(random::shape(rng, 3, 4)),
    }
}

pub fn generate(kind: Kind, opts: &GenOptions, seed: u64) -> CliResult<Instance> {
    let mut rng = Rng::new(seed).child(match kind {
        Kind::RightIdeal => "gen/right_ideal",
        Kind::ModuleSubmodule => "gen/module_submodule",
        Kind::Field => "gen/field",
    });
    match kind {
        Kind::RightIdeal => gen_right_ideal(opts, seed, &mut rng),
        Kind::ModuleSubmodule => gen_submodule(opts, seed, &mut rng),
        Kind::Field => gen_field(opts, seed, &mut rng),
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payload types serialize")
}

/// One generator `x` of random rank per block; `xA` is essential exactly
/// when every block has full rank.
fn gen_right_ideal(opts: &GenOptions, seed: u64, rng: &mut Rng) -> CliResult<Instance> {
    let shape = shape_from(opts, rng)?;
    let ranks: Vec<usize> = shape
        .block_dims()
        .iter()
        .map(|&n| if rng.coin() { n } else { rng.below(n as u64 + 1) as usize })
        .collect();
    let x = random::element_of_ranks(rng, &shape, &ranks);
    let ideal = ideal_support_projection(std::slice::from_ref(&x))?;
    let essential = ranks.iter().zip(shape.block_dims()).all(|(r, n)| r == n);
    let payload = RightIdealPayload { ideal, generators: vec![x] };
    Ok(Instance::new(Kind::RightIdeal, Some(seed), to_value(&payload), Some(Expected { essential, defect: None })))
}

/// Generic rank of block `i` of the generated span is
/// `min(k·nᵢ, count·keptᵢ)`, which fixes the expected decision.
fn gen_submodule(opts: &GenOptions, seed: u64, rng: &mut Rng) -> CliResult<Instance> {
    let shape = shape_from(opts, rng)?;
    let k = cap("k", opts.k.unwrap_or(1 + rng.below(3) as usize), MAX_K)?;
    let (n, count, kept) = random::submodule(rng, &shape, k);
    let essential = shape.block_dims().iter().zip(&kept).all(|(&ni, &ki)| count * ki >= k * ni);
    Ok(Instance::new(Kind::ModuleSubmodule, Some(seed), to_value(&n), Some(Expected { essential, defect: None })))
}

fn gen_field(opts: &GenOptions, seed: u64, rng: &mut Rng) -> CliResult<Instance> {
    let d = cap("d", opts.d.unwrap_or(1 + rng.below(2) as usize), MAX_D)?;
    let pieces = cap("pieces", opts.pieces.unwrap_or(4), MAX_PIECES)?;
    let total = cap("generators", opts.generators.unwrap_or(d + 1).max(d), MAX_GENERATORS)?;

    let cuts: Vec<_> = rng.distinct(1, GRID - 1, pieces - 1).into_iter().map(|c| q(c, GRID)).collect();
    let mut defects = Vec::new();
    if opts.defect != DefectMode::None {
        let count = 1 + rng.below(3) as usize;
        let pts = rng.distinct(0, GRID, count).into_iter().map(|p| q(p, GRID)).collect();
        defects.push(SymbolicSubset::from_parts(pts, vec![])?);
    }
    if opts.defect == DefectMode::Interval {
        let ends = rng.distinct(0, GRID, 2);
        let iv = SymbolicSubset::open(q(ends[0], GRID), q(ends[1], GRID))?;
        defects = defects.into_iter().map(|s| s.difference(&iv)).filter(|s| !s.is_empty()).collect();
        defects.push(iv);
    }
    let l = random::field_with_defects(rng, d, &cuts, &defects);
    let planted = l.field_defect_set();

    let mut generators: Vec<PiecewiseSection> = (0..d).map(|i| PiecewiseSection::basis(d, i)).collect();
    let mut attempts = 0;
    while generators.len() < total && attempts < 64 {
        attempts += 1;
        let deg = rng.below(3) as usize;
        let g = random::vector_section(rng, d, deg);
        if g.is_zero() {
            continue;
        }
        match residual_set(&g, &l) {
            Ok(_) => generators.push(g),
            Err(Error::IrrationalRoot { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let spec = FieldModuleSpec::new(generators, l, Boundary::Closed)?;
    let essential = planted.is_nowhere_dense();
    Ok(Instance::new(Kind::Field, Some(seed), to_value(&spec), Some(Expected { essential, defect: Some(planted) })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_enforced() {
        let opts = GenOptions { blocks: Some(vec![7]), ..Default::default() };
        assert!(matches!(generate(Kind::RightIdeal, &opts, 1), Err(CliError::SizeCap(_))));
        let opts = GenOptions { d: Some(5), ..Default::default() };
        assert!(matches!(generate(Kind::Field, &opts, 1), Err(CliError::SizeCap(_))));
        let opts = GenOptions { k: Some(5), ..Default::default() };
        assert!(matches!(generate(Kind::ModuleSubmodule, &opts, 1), Err(CliError::SizeCap(_))));
    }

    #[test]
    fn same_seed_same_bytes() {
        let opts = GenOptions { d: Some(2), defect: DefectMode::Interval, ..Default::default() };
        let a = serde_json::to_string(&generate(Kind::Field, &opts, 1).unwrap()).unwrap();
        let b = serde_json::to_string(&generate(Kind::Field, &opts, 1).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn planted_interval_is_non_essential() {
        let opts = GenOptions { d: Some(2), defect: DefectMode::Interval, ..Default::default() };
        let inst = generate(Kind::Field, &opts, 1).unwrap();
        assert!(!inst.expected.as_ref().unwrap().essential);
        inst.parse_payload().unwrap();
    }
}
