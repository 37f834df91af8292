use serde::Serialize;

use super::exact::GMatrix;
use super::poly::GPoly;
use super::rational::{gq_is_zero, Q};
use super::section::{nonvanishing_within, PiecewiseSection};
use super::subset::SymbolicSubset;
use super::subspace::{Boundary, FieldModuleSpec, SubspaceField};
use crate::error::{Error, Result};

/// `Y_m = {x : m(x) ∉ L_x}`, exactly.
pub fn residual_set(m: &PiecewiseSection, l: &SubspaceField) -> Result<SymbolicSubset> {
    if m.d() != l.d() {
        return Err(Error::DimensionMismatch { expected: l.d(), found: m.d() });
    }
    let mut out = SymbolicSubset::empty();
    for piece in l.pieces() {
        let p = piece.projector();
        for (w, polys) in m.breakpoints().windows(2).zip(m.pieces()) {
            let residual: Vec<GPoly> = (0..m.d())
                .map(|i| {
                    (0..m.d()).fold(polys[i].clone(), |acc, j| {
                        let c = p.get(i, j);
                        if gq_is_zero(c) {
                            acc
                        } else {
                            acc.sub(&polys[j].scale(c))
                        }
                    })
                })
                .collect();
            out = out.union(&nonvanishing_within(&residual, &w[0], &w[1], piece.region())?);
        }
    }
    for t in m.breakpoints() {
        if !l.contains_at(t, &m.eval(t)?)? {
            out = out.union(&SymbolicSubset::point(t.clone())?);
        }
    }
    Ok(out)
}

fn drop_ends(s: SymbolicSubset, boundary: Boundary) -> SymbolicSubset {
    match boundary {
        Boundary::Closed => s,
        Boundary::VanishAtEnds => s.without_points(&[Q::from_integer(0.into()), Q::from_integer(1.into())]),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectReport {
    /// `Y = ⋃ Y_k` over the generators.
    pub y: SymbolicSubset,
    pub per_generator: Vec<SymbolicSubset>,
    /// `{x : L_x ≠ ℂ^d}` read off the subfield.
    pub field_defect: SymbolicSubset,
    /// Whether the two descriptions of the defect agree.
    pub union_matches: bool,
}

pub fn total_defect_set(spec: &FieldModuleSpec) -> Result<DefectReport> {
    let per_generator = spec
        .generators
        .iter()
        .map(|g| Ok(drop_ends(residual_set(g, &spec.subfield)?, spec.boundary)))
        .collect::<Result<Vec<_>>>()?;
    let y = per_generator.iter().fold(SymbolicSubset::empty(), |acc, s| acc.union(s));
    let field_defect = drop_ends(spec.subfield.field_defect_set(), spec.boundary);
    let union_matches = y == field_defect;
    Ok(DefectReport { y, per_generator, field_defect, union_matches })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldEssentiality {
    pub essential: bool,
    pub defect: DefectReport,
    /// The decision recomputed as `interior(closure(Y)) = ∅`.
    pub via_closure: bool,
    pub probe_points: usize,
}

/// Decides essentiality of `𝒩 = C(X, L)` by nowhere density of `Y`, after
/// checking that the generators span `ℂ^d` at rational probes outside `Y`.
pub fn is_essential_field(spec: &FieldModuleSpec) -> Result<FieldEssentiality> {
    let defect = total_defect_set(spec)?;
    let mut cuts = spec.subfield.cut_points();
    for g in &spec.generators {
        cuts.extend(g.breakpoints().iter().cloned());
    }
    let probes = defect.y.probe_points(&cuts);
    let zero = Q::from_integer(0.into());
    let one = Q::from_integer(1.into());
    let mut checked = 0;
    for x in &probes {
        if defect.y.contains(x) || (spec.boundary == Boundary::VanishAtEnds && (*x == zero || *x == one)) {
            continue;
        }
        let values = spec.generators.iter().map(|g| g.eval(x)).collect::<Result<Vec<_>>>()?;
        checked += 1;
        if GMatrix::from_columns(spec.d(), &values).rank() < spec.d() {
            return Err(Error::GeneratorsNotSpanning(format!(
                "generator values at {} span less than the full fiber",
                super::rational::fmt_q(x)
            )));
        }
    }
    Ok(FieldEssentiality {
        essential: defect.y.is_nowhere_dense(),
        via_closure: defect.y.is_nowhere_dense_via_closure(),
        defect,
        probe_points: checked,
    })
}

/// Checks `m⟨n, n⟩ = n⟨n, m⟩` exactly.
pub fn commutative_limit_identity(m: &PiecewiseSection, n: &PiecewiseSection) -> Result<bool> {
    if m.d() != n.d() {
        return Err(Error::DimensionMismatch { expected: m.d(), found: n.d() });
    }
    let lhs = m.mul_scalar(&n.inner(n)?)?;
    let rhs = n.mul_scalar(&n.inner(m)?)?;
    Ok(lhs.same_function(&rhs))
}
