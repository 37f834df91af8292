use serde::{Deserialize, Serialize};

use super::exact::GMatrix;
use super::rational::{gq_is_zero, GQ, Q};
use super::section::{gq_vec_from_raw, gq_vec_to_raw, PiecewiseSection};
use super::subset::SymbolicSubset;
use crate::error::{Error, Result};

/// One cell of a subspace field: on `region` the fiber `L_x` is the column
/// span of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldPiece {
    region: SymbolicSubset,
    basis: Vec<Vec<GQ>>,
    projector: GMatrix,
}

impl FieldPiece {
    pub fn region(&self) -> &SymbolicSubset {
        &self.region
    }

    /// Independent spanning columns.
    pub fn basis(&self) -> &[Vec<GQ>] {
        &self.basis
    }

    pub fn projector(&self) -> &GMatrix {
        &self.projector
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// A field `x ↦ L_x ⊆ ℂ^d` that is constant on each cell of a partition of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceField {
    d: usize,
    pieces: Vec<FieldPiece>,
}

impl SubspaceField {
    pub fn new(d: usize, cells: Vec<(SymbolicSubset, Vec<Vec<GQ>>)>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidShape("fiber dimension must be positive".into()));
        }
        let mut covered = SymbolicSubset::empty();
        let mut pieces = Vec::with_capacity(cells.len());
        for (region, cols) in cells {
            if !covered.intersection(&region).is_empty() {
                return Err(Error::Invalid(format!("partition pieces overlap on {}", covered.intersection(&region))));
            }
            covered = covered.union(&region);
            if let Some(c) = cols.iter().find(|c| c.len() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: c.len() });
            }
            let keep = GMatrix::from_columns(d, &cols).independent_columns();
            let basis: Vec<Vec<GQ>> = keep.into_iter().map(|j| cols[j].clone()).collect();
            let projector = GMatrix::projector_onto(d, &basis);
            pieces.push(FieldPiece { region, basis, projector });
        }
        if covered != SymbolicSubset::full() {
            return Err(Error::Invalid(format!("partition leaves {} uncovered", covered.complement())));
        }
        Ok(Self { d, pieces })
    }

    /// `L_x = ℂ^d` everywhere.
    pub fn full(d: usize) -> Self {
        let cols = (0..d).map(|i| unit(d, i)).collect();
        Self::new(d, vec![(SymbolicSubset::full(), cols)]).expect("valid")
    }

    /// The same subspace at every point.
    pub fn constant(d: usize, cols: Vec<Vec<GQ>>) -> Result<Self> {
        Self::new(d, vec![(SymbolicSubset::full(), cols)])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn pieces(&self) -> &[FieldPiece] {
        &self.pieces
    }

    pub fn piece_at(&self, x: &Q) -> Result<&FieldPiece> {
        self.pieces
            .iter()
            .find(|p| p.region.contains(x))
            .ok_or_else(|| Error::OutOfRange(format!("{} lies outside [0, 1]", super::rational::fmt_q(x))))
    }

    /// `(I − P_x)v`.
    pub fn residual_at(&self, x: &Q, v: &[GQ]) -> Result<Vec<GQ>> {
        if v.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: v.len() });
        }
        let pv = self.piece_at(x)?.projector.mul_vec(v);
        Ok(v.iter().zip(pv).map(|(a, b)| a - b).collect())
    }

    pub fn contains_at(&self, x: &Q, v: &[GQ]) -> Result<bool> {
        Ok(self.residual_at(x, v)?.iter().all(gq_is_zero))
    }

    /// `{x : L_x ≠ ℂ^d}`.
    pub fn field_defect_set(&self) -> SymbolicSubset {
        self.pieces.iter().filter(|p| p.rank() < self.d).fold(SymbolicSubset::empty(), |acc, p| acc.union(&p.region))
    }

    /// All region endpoints and isolated points.
    pub fn cut_points(&self) -> Vec<Q> {
        self.pieces.iter().flat_map(|p| p.region.probe_points(&[])).collect()
    }
}

pub(crate) fn unit(d: usize, i: usize) -> Vec<GQ> {
    let mut v = vec![super::rational::gq_zero(); d];
    v[i] = super::rational::gq_one();
    v
}

/// How the base space is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `X = [0, 1]`.
    #[default]
    Closed,
    /// `X = (0, 1)`: sections must vanish at both ends, which are dropped from defect sets.
    VanishAtEnds,
}

/// The ambient module `C(X, ℂ^d)` presented by finitely many generators,
/// together with the subfield `L` defining `𝒩 = C(X, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldModuleSpec {
    pub generators: Vec<PiecewiseSection>,
    pub subfield: SubspaceField,
    pub boundary: Boundary,
}

impl FieldModuleSpec {
    pub fn new(generators: Vec<PiecewiseSection>, subfield: SubspaceField, boundary: Boundary) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("at least one generator is required".into()));
        }
        for g in &generators {
            if g.d() != subfield.d() {
                return Err(Error::DimensionMismatch { expected: subfield.d(), found: g.d() });
            }
            if g.is_zero() {
                return Err(Error::Invalid("generators must be nonzero".into()));
            }
            if boundary == Boundary::VanishAtEnds {
                for end in [Q::from_integer(0.into()), Q::from_integer(1.into())] {
                    if !g.eval(&end)?.iter().all(gq_is_zero) {
                        return Err(Error::Invalid("generators must vanish at 0 and 1".into()));
                    }
                }
            }
        }
        Ok(Self { generators, subfield, boundary })
    }

    /// Constant generators `e₁, …, e_d`.
    pub fn standard(subfield: SubspaceField) -> Self {
        let d = subfield.d();
        let generators = (0..d).map(|i| PiecewiseSection::basis(d, i)).collect();
        Self { generators, subfield, boundary: Boundary::Closed }
    }

    pub fn d(&self) -> usize {
        self.subfield.d()
    }
}

#[derive(Serialize, Deserialize)]
struct RawFieldSpec {
    d: usize,
    partition: Vec<SymbolicSubset>,
    subspace_bases: Vec<Vec<Vec<[String; 2]>>>,
    generators: Vec<PiecewiseSection>,
    #[serde(default)]
    boundary: Boundary,
}

impl Serialize for FieldModuleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pieces = self.subfield.pieces();
        RawFieldSpec {
            d: self.d(),
            partition: pieces.iter().map(|p| p.region.clone()).collect(),
            subspace_bases: pieces.iter().map(|p| p.basis.iter().map(|c| gq_vec_to_raw(c)).collect()).collect(),
            generators: self.generators.clone(),
            boundary: self.boundary,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldModuleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawFieldSpec::deserialize(de)?;
        let build = || -> Result<FieldModuleSpec> {
            if raw.partition.len() != raw.subspace_bases.len() {
                return Err(Error::DimensionMismatch { expected: raw.partition.len(), found: raw.subspace_bases.len() });
            }
            let cells = raw
                .partition
                .into_iter()
                .zip(&raw.subspace_bases)
                .map(|(r, cols)| Ok((r, cols.iter().map(|c| gq_vec_from_raw(c)).collect::<Result<Vec<_>>>()?)))
                .collect::<Result<Vec<_>>>()?;
            let subfield = SubspaceField::new(raw.d, cells)?;
            FieldModuleSpec::new(raw.generators, subfield, raw.boundary)
        };
        build().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{gq_real, q, qi};

    #[test]
    fn partition_must_cover_exactly() {
        let left = SymbolicSubset::closed(qi(0), q(1, 2)).unwrap();
        let right = SymbolicSubset::interval(q(1, 2), qi(1), false, true).unwrap();
        assert!(SubspaceField::new(1, vec![(left.clone(), vec![]), (right.clone(), vec![unit(1, 0)])]).is_ok());
        let overlap = SymbolicSubset::closed(q(1, 2), qi(1)).unwrap();
        assert!(SubspaceField::new(1, vec![(left.clone(), vec![]), (overlap, vec![])]).is_err());
        assert!(SubspaceField::new(1, vec![(left, vec![])]).is_err());
    }

    #[test]
    fn membership_and_defect() {
        let left = SymbolicSubset::closed(qi(0), q(1, 2)).unwrap();
        let right = SymbolicSubset::interval(q(1, 2), qi(1), false, true).unwrap();
        let l = SubspaceField::new(2, vec![(left.clone(), vec![unit(2, 0), unit(2, 0)]), (right, vec![unit(2, 0), unit(2, 1)])]).unwrap();
        assert_eq!(l.pieces()[0].rank(), 1);
        assert_eq!(l.field_defect_set(), left);
        let v = vec![gq_real(qi(3)), gq_real(qi(1))];
        assert!(!l.contains_at(&q(1, 4), &v).unwrap());
        assert!(l.contains_at(&q(3, 4), &v).unwrap());
        assert_eq!(l.residual_at(&q(1, 4), &v).unwrap(), vec![gq_real(qi(0)), gq_real(qi(1))]);
    }

    #[test]
    fn json_roundtrip() {
        let spec = FieldModuleSpec::standard(SubspaceField::full(2));
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"subspace_bases\""));
        let back: FieldModuleSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
