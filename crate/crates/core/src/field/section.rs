//! Continuous sections `[0, 1] → ℂ^d` that are polynomial on each piece of a
//! rational partition.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{common_zero_poly, GPoly, QPoly, RealRoot};
use super::rational::{fmt_q, gq_is_zero, gq_real, parse_q, GQ, Q};
use super::subset::SymbolicSubset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseSection {
    d: usize,
    breakpoints: Vec<Q>,
    pieces: Vec<Vec<GPoly>>,
}

/// Where a vector of polynomials vanishes on an open interval.
#[derive(Clone, Debug, PartialEq)]
pub enum Vanishing {
    Everywhere,
    /// Only at these roots, listed in increasing order.
    At(Vec<RealRoot>),
}

/// Common zeros of `polys` in the open interval `(lo, hi)`.
pub fn vanishing_locus(polys: &[GPoly], lo: &Q, hi: &Q) -> Vanishing {
    match common_zero_poly(polys) {
        None => Vanishing::Everywhere,
        Some(g) if g.degree() == Some(0) => Vanishing::At(Vec::new()),
        Some(g) => Vanishing::At(
            g.roots_in(lo, hi)
                .into_iter()
                .filter(|r| !matches!(r, RealRoot::Rational(x) if x == lo || x == hi))
                .collect(),
        ),
    }
}

/// `{x ∈ (lo, hi) : x ∈ region, some p(x) ≠ 0}`. Errors if an irrational
/// common zero falls inside `region`.
pub fn nonvanishing_within(polys: &[GPoly], lo: &Q, hi: &Q, region: &SymbolicSubset) -> Result<SymbolicSubset> {
    let open = SymbolicSubset::open(lo.clone(), hi.clone())?.intersection(region);
    if open.is_empty() {
        return Ok(open);
    }
    match vanishing_locus(polys, lo, hi) {
        Vanishing::Everywhere => Ok(SymbolicSubset::empty()),
        Vanishing::At(roots) => {
            let mut rational = Vec::new();
            let cuts = open.probe_points(&[]);
            for mut r in roots {
                match &r {
                    RealRoot::Rational(x) => rational.push(x.clone()),
                    RealRoot::Irrational { .. } => {
                        r.separate_from(&cuts);
                        if let RealRoot::Irrational { poly, lo: a, hi: b } = &r {
                            let mid = (a + b) / Q::from_integer(2.into());
                            if open.contains(&mid) {
                                return Err(Error::IrrationalRoot {
                                    poly: poly.to_string(),
                                    lo: fmt_q(a),
                                    hi: fmt_q(b),
                                });
                            }
                        }
                    }
                }
            }
            Ok(open.without_points(&rational))
        }
    }
}

impl PiecewiseSection {
    pub fn new(d: usize, breakpoints: Vec<Q>, pieces: Vec<Vec<GPoly>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidShape("fiber dimension must be positive".into()));
        }
        if breakpoints.len() < 2 || !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return Err(Error::Invalid("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::DimensionMismatch { expected: breakpoints.len() - 1, found: pieces.len() });
        }
        if let Some(p) = pieces.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.len() });
        }
        for i in 1..pieces.len() {
            let t = &breakpoints[i];
            if pieces[i - 1].iter().zip(&pieces[i]).any(|(l, r)| l.eval(t) != r.eval(t)) {
                return Err(Error::Invalid(format!("section is discontinuous at {}", fmt_q(t))));
            }
        }
        Ok(Self { d, breakpoints, pieces })
    }

    /// One polynomial per coordinate on all of `[0, 1]`.
    pub fn polynomial(polys: Vec<GPoly>) -> Result<Self> {
        Self::new(polys.len(), vec![Q::zero(), Q::one()], vec![polys])
    }

    pub fn constant(v: Vec<GQ>) -> Result<Self> {
        Self::polynomial(v.into_iter().map(GPoly::constant).collect())
    }

    pub fn zero(d: usize) -> Self {
        Self { d, breakpoints: vec![Q::zero(), Q::one()], pieces: vec![vec![GPoly::zero(); d]] }
    }

    /// The constant standard basis vector `e_i` of `ℂ^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut polys = vec![GPoly::zero(); d];
        polys[i] = GPoly::constant(gq_real(Q::one()));
        Self { d, breakpoints: vec![Q::zero(), Q::one()], pieces: vec![polys] }
    }

    /// Scalar function from real pieces; `polys[i]` lives on `[t_i, t_{i+1}]`.
    pub fn scalar(breakpoints: Vec<Q>, polys: Vec<QPoly>) -> Result<Self> {
        Self::new(1, breakpoints, polys.iter().map(|p| vec![GPoly::from_real(p)]).collect())
    }

    /// `(x − lo)(hi − x)` on `(lo, hi)` and zero elsewhere.
    pub fn bump(lo: &Q, hi: &Q) -> Result<Self> {
        if lo >= hi || lo < &Q::zero() || hi > &Q::one() {
            return Err(Error::OutOfRange(format!("bump on ({}, {})", fmt_q(lo), fmt_q(hi))));
        }
        let quad = QPoly::linear_root(lo).mul(&QPoly::linear_root(hi).neg());
        let (mut bps, mut polys) = (vec![Q::zero()], Vec::new());
        if !lo.is_zero() {
            bps.push(lo.clone());
            polys.push(QPoly::zero());
        }
        polys.push(quad);
        bps.push(hi.clone());
        if !hi.is_one() {
            bps.push(Q::one());
            polys.push(QPoly::zero());
        }
        Self::scalar(bps, polys)
    }

    /// `1 − ((x − c)/r)²` on `(c − r, c + r)`, zero elsewhere, cut to `[0, 1]`.
    pub fn peak(c: &Q, r: &Q) -> Result<Self> {
        if r <= &Q::zero() || c < &Q::zero() || c > &Q::one() {
            return Err(Error::OutOfRange(format!("peak at {} with radius {}", fmt_q(c), fmt_q(r))));
        }
        let u = QPoly::linear_root(c).scale(&(Q::one() / r));
        let cap = QPoly::constant(Q::one()).sub(&u.mul(&u));
        let lo = c - r;
        let hi = c + r;
        let (mut bps, mut polys) = (vec![Q::zero()], Vec::new());
        if lo > Q::zero() {
            bps.push(lo);
            polys.push(QPoly::zero());
        }
        polys.push(cap);
        if hi < Q::one() {
            bps.push(hi);
            polys.push(QPoly::zero());
        }
        bps.push(Q::one());
        Self::scalar(bps, polys)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<GPoly>] {
        &self.pieces
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().flatten().filter_map(GPoly::degree).max().unwrap_or(0)
    }

    /// Index of a piece whose closed interval contains `x`.
    pub fn piece_at(&self, x: &Q) -> Result<usize> {
        if x < &Q::zero() || x > &Q::one() {
            return Err(Error::OutOfRange(format!("{} lies outside [0, 1]", fmt_q(x))));
        }
        let idx = self.breakpoints[1..].partition_point(|t| t < x);
        Ok(idx.min(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: &Q) -> Result<Vec<GQ>> {
        let i = self.piece_at(x)?;
        Ok(self.pieces[i].iter().map(|p| p.eval(x)).collect())
    }

    /// The same section over a finer partition containing `cuts`.
    pub fn refine(&self, cuts: &[Q]) -> Self {
        let mut bps: Vec<Q> = self.breakpoints.iter().chain(cuts.iter().filter(|c| **c > Q::zero() && **c < Q::one())).cloned().collect();
        bps.sort();
        bps.dedup();
        let pieces = bps
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / Q::from_integer(2.into());
                self.pieces[self.piece_at(&mid).expect("inside")].clone()
            })
            .collect();
        Self { d: self.d, breakpoints: bps, pieces }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        (self.refine(&other.breakpoints), other.refine(&self.breakpoints))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&[GPoly], &[GPoly]) -> Vec<GPoly>) -> Self {
        let (a, b) = self.aligned(other);
        let pieces: Vec<Vec<GPoly>> = a.pieces.iter().zip(&b.pieces).map(|(p, q)| f(p, q)).collect();
        let d = pieces[0].len();
        Self { d, breakpoints: a.breakpoints, pieces }
    }

    fn check_d(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_d(other)?;
        Ok(self.zip_with(other, |p, q| p.iter().zip(q).map(|(a, b)| a.add(b)).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_d(other)?;
        Ok(self.zip_with(other, |p, q| p.iter().zip(q).map(|(a, b)| a.sub(b)).collect()))
    }

    pub fn scale(&self, s: &GQ) -> Self {
        Self {
            d: self.d,
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.iter().map(|c| c.scale(s)).collect()).collect(),
        }
    }

    /// The module action `m·c` of a scalar function `c` (`d = 1`).
    pub fn mul_scalar(&self, c: &Self) -> Result<Self> {
        if c.d != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: c.d });
        }
        Ok(self.zip_with(c, |p, q| p.iter().map(|a| a.mul(&q[0])).collect()))
    }

    /// `⟨u, v⟩(x) = Σᵢ conj(uᵢ(x)) vᵢ(x)`, a scalar section.
    pub fn inner(&self, other: &Self) -> Result<Self> {
        self.check_d(other)?;
        Ok(self.zip_with(other, |p, q| {
            vec![p.iter().zip(q).fold(GPoly::zero(), |acc, (a, b)| acc.add(&a.conj().mul(b)))]
        }))
    }

    /// Exact equality as functions on `[0, 1]`.
    pub fn same_function(&self, other: &Self) -> bool {
        if self.d != other.d {
            return false;
        }
        let (a, b) = self.aligned(other);
        a.pieces == b.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().flatten().all(GPoly::is_zero)
    }

    /// `closure(Z_m)` for `Z_m = {x : m(x) ≠ 0}`: a nonzero polynomial
    /// vanishes only finitely often, so each nonzero piece contributes its
    /// whole closed interval.
    pub fn support_closure(&self) -> SymbolicSubset {
        self.breakpoints.windows(2).zip(&self.pieces).filter(|(_, p)| p.iter().any(|c| !c.is_zero())).fold(
            SymbolicSubset::empty(),
            |acc, (w, _)| acc.union(&SymbolicSubset::closed(w[0].clone(), w[1].clone()).expect("unit interval")),
        )
    }

    /// `Z_m` itself. Errors when a boundary point is irrational.
    pub fn support_set(&self) -> Result<SymbolicSubset> {
        let full = SymbolicSubset::full();
        let mut out = SymbolicSubset::empty();
        for (w, p) in self.breakpoints.windows(2).zip(&self.pieces) {
            out = out.union(&nonvanishing_within(p, &w[0], &w[1], &full)?);
        }
        for t in &self.breakpoints {
            if self.eval(t)?.iter().any(|z| !gq_is_zero(z)) {
                out = out.union(&SymbolicSubset::point(t.clone())?);
            }
        }
        Ok(out)
    }
}

type RawGq = [String; 2];

fn gq_to_raw(z: &GQ) -> RawGq {
    [fmt_q(&z.re), fmt_q(&z.im)]
}

fn gq_from_raw(r: &RawGq) -> Result<GQ> {
    Ok(GQ::new(parse_q(&r[0])?, parse_q(&r[1])?))
}

pub(crate) fn gq_vec_to_raw(v: &[GQ]) -> Vec<RawGq> {
    v.iter().map(gq_to_raw).collect()
}

pub(crate) fn gq_vec_from_raw(v: &[RawGq]) -> Result<Vec<GQ>> {
    v.iter().map(gq_from_raw).collect()
}

#[derive(Serialize, Deserialize)]
struct RawSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    breakpoints: Vec<String>,
    pieces: Vec<Vec<Vec<RawGq>>>,
}

impl Serialize for PiecewiseSection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSection {
            d: Some(self.d),
            breakpoints: self.breakpoints.iter().map(fmt_q).collect(),
            pieces: self.pieces.iter().map(|p| p.iter().map(|c| gq_vec_to_raw(c.coeffs())).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseSection {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSection::deserialize(de)?;
        let build = || -> Result<PiecewiseSection> {
            let bps = raw.breakpoints.iter().map(|b| parse_q(b)).collect::<Result<Vec<_>>>()?;
            let pieces = raw
                .pieces
                .iter()
                .map(|p| p.iter().map(|c| Ok(GPoly::new(gq_vec_from_raw(c)?))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let d = raw.d.or_else(|| pieces.first().map(Vec::len)).unwrap_or(0);
            PiecewiseSection::new(d, bps, pieces)
        };
        build().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, qi};

    fn x() -> GPoly {
        GPoly::new(vec![gq_real(qi(0)), gq_real(qi(1))])
    }

    #[test]
    fn continuity_enforced() {
        let bad = PiecewiseSection::scalar(vec![qi(0), q(1, 2), qi(1)], vec![QPoly::constant(qi(1)), QPoly::constant(qi(2))]);
        assert!(matches!(bad, Err(Error::Invalid(_))));
        let bump = PiecewiseSection::bump(&q(1, 4), &q(3, 4)).unwrap();
        assert_eq!(bump.eval(&q(1, 2)).unwrap()[0], gq_real(q(1, 16)));
        assert_eq!(bump.eval(&q(1, 8)).unwrap()[0], gq_real(qi(0)));
    }

    #[test]
    fn peak_values() {
        let p = PiecewiseSection::peak(&q(1, 2), &q(1, 4)).unwrap();
        assert_eq!(p.eval(&q(1, 2)).unwrap()[0], gq_real(qi(1)));
        assert_eq!(p.eval(&q(1, 4)).unwrap()[0], gq_real(qi(0)));
        assert_eq!(p.eval(&q(5, 8)).unwrap()[0], gq_real(q(3, 4)));
        let clipped = PiecewiseSection::peak(&qi(0), &qi(1)).unwrap();
        assert_eq!(clipped.breakpoints(), &[qi(0), qi(1)]);
    }

    #[test]
    fn arithmetic_across_partitions() {
        let a = PiecewiseSection::bump(&qi(0), &q(1, 2)).unwrap();
        let b = PiecewiseSection::bump(&q(1, 4), &qi(1)).unwrap();
        let s = a.add(&b).unwrap();
        let t = q(3, 8);
        assert_eq!(s.eval(&t).unwrap()[0], &a.eval(&t).unwrap()[0] + &b.eval(&t).unwrap()[0]);
        assert!(s.sub(&b).unwrap().same_function(&a));
    }

    #[test]
    fn inner_product_is_hermitian() {
        let m = PiecewiseSection::polynomial(vec![x(), GPoly::constant(GQ::new(qi(0), qi(1)))]).unwrap();
        let ip = m.inner(&m).unwrap();
        // |x|² + |i|² = x² + 1
        assert_eq!(ip.eval(&q(1, 2)).unwrap()[0], gq_real(q(5, 4)));
    }

    #[test]
    fn supports() {
        let bump = PiecewiseSection::bump(&q(1, 4), &q(3, 4)).unwrap();
        assert_eq!(bump.support_closure(), SymbolicSubset::closed(q(1, 4), q(3, 4)).unwrap());
        assert_eq!(bump.support_set().unwrap(), SymbolicSubset::open(q(1, 4), q(3, 4)).unwrap());
        let m = PiecewiseSection::polynomial(vec![x(), x().sub(&GPoly::constant(gq_real(q(1, 2))))]).unwrap();
        assert_eq!(m.support_set().unwrap(), SymbolicSubset::full());
        let irr = PiecewiseSection::scalar(vec![qi(0), qi(1)], vec![QPoly::new(vec![qi(-1), qi(0), qi(2)])]).unwrap();
        assert!(matches!(irr.support_set(), Err(Error::IrrationalRoot { .. })));
        assert!(irr.support_closure() == SymbolicSubset::full());
    }

    #[test]
    fn irrational_root_outside_region_is_harmless() {
        let p = vec![GPoly::from_real(&QPoly::new(vec![qi(-1), qi(0), qi(2)]))];
        let region = SymbolicSubset::closed(qi(0), q(1, 2)).unwrap();
        let s = nonvanishing_within(&p, &qi(0), &qi(1), &region).unwrap();
        assert_eq!(s, SymbolicSubset::interval(qi(0), q(1, 2), false, true).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let m = PiecewiseSection::bump(&q(1, 3), &q(2, 3)).unwrap().mul_scalar(&PiecewiseSection::bump(&qi(0), &qi(1)).unwrap()).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: PiecewiseSection = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
