//! Constructive witnesses for the field criterion.

use num_traits::{One, Signed};
use serde::Serialize;

use super::criterion::residual_set;
use super::poly::{GPoly, QPoly};
use super::rational::{fmt_q, gq_is_zero, gq_real, half, Q};
use super::section::{vanishing_locus, PiecewiseSection, Vanishing};
use super::subset::{Interval, SymbolicSubset};
use super::subspace::{FieldModuleSpec, SubspaceField};
use crate::error::{Error, Result};

fn two_pow(e: i32) -> Q {
    let two = Q::from_integer(2.into());
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        Q::one() / num_traits::pow(two, (-e) as usize)
    }
}

/// Open intervals `(lo, hi)` with `lo < hi` in a normalized subset.
fn open_components(s: &SymbolicSubset) -> Vec<(Q, Q)> {
    s.intervals().iter().map(|iv: &Interval| (iv.lo.clone(), iv.hi.clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EssentialWitness {
    pub interval: (String, String),
    pub a: PiecewiseSection,
    pub ma: PiecewiseSection,
    pub residual_empty: bool,
    pub ma_nonzero: bool,
}

impl EssentialWitness {
    pub fn verified(&self) -> bool {
        self.residual_empty && self.ma_nonzero
    }
}

/// For `Y_m` nowhere dense, a bump `a` supported where `m ≠ 0` and away from
/// `closure(Y_m)`, so that `ma` is a nonzero element of `𝒩`.
pub fn essential_witness(m: &PiecewiseSection, l: &SubspaceField) -> Result<EssentialWitness> {
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    let ym = residual_set(m, l)?;
    if !ym.is_nowhere_dense() {
        return Err(Error::PreconditionFailed(format!("Y_m = {ym} is not nowhere dense")));
    }
    let room = ym.closure().complement();
    let mut candidates: Vec<(Q, Q, usize)> = Vec::new();
    for (k, (w, polys)) in m.breakpoints().windows(2).zip(m.pieces()).enumerate() {
        if polys.iter().all(GPoly::is_zero) {
            continue;
        }
        let piece = SymbolicSubset::open(w[0].clone(), w[1].clone())?;
        for (lo, hi) in open_components(&room.intersection(&piece)) {
            candidates.push((lo, hi, k));
        }
    }
    // Longest first; ties go to the rightmost.
    candidates.sort_by(|a, b| (&b.1 - &b.0).cmp(&(&a.1 - &a.0)).then(b.0.cmp(&a.0)));
    let (lo, hi, k) = candidates.into_iter().next().ok_or_else(|| Error::NoRoom(format!("no interval avoids {ym} where m ≠ 0")))?;
    // A nonzero piece has at most `deg` common zeros, so one of `deg + 1`
    // equal parts is free of them.
    let polys = &m.pieces()[k];
    let parts = polys.iter().filter_map(GPoly::degree).max().unwrap_or(0) + 1;
    let step = (&hi - &lo) / Q::from_integer(parts.into());
    let (alpha, beta) = (0..parts)
        .map(|i| (&lo + &step * Q::from_integer(i.into()), &lo + &step * Q::from_integer((i + 1).into())))
        .find(|(a, b)| matches!(vanishing_locus(polys, a, b), Vanishing::At(r) if r.is_empty()))
        .ok_or_else(|| Error::NoRoom("every subinterval meets a zero of m".into()))?;
    let a = PiecewiseSection::bump(&alpha, &beta)?;
    let ma = m.mul_scalar(&a)?;
    let residual_empty = residual_set(&ma, l)?.is_empty();
    let ma_nonzero = !ma.is_zero();
    Ok(EssentialWitness { interval: (fmt_q(&alpha), fmt_q(&beta)), a, ma, residual_empty, ma_nonzero })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpProbe {
    pub interval: (String, String),
    pub residual_empty: bool,
    pub product_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonEssentialWitness {
    pub interval: (String, String),
    pub a: PiecewiseSection,
    pub ma: PiecewiseSection,
    pub closure_z: SymbolicSubset,
    pub closure_y: SymbolicSubset,
    pub closure_equal: bool,
    pub probes: Vec<BumpProbe>,
    pub probes_ok: bool,
}

impl NonEssentialWitness {
    pub fn verified(&self) -> bool {
        self.closure_equal && self.probes_ok && !self.ma.is_zero()
    }
}

/// For `V = interior(closure(Y_m)) ≠ ∅`, a bump `a` inside `V` whose product
/// `ma` generates a submodule meeting `𝒩` only in zero.
pub fn non_essential_witness(m: &PiecewiseSection, l: &SubspaceField) -> Result<NonEssentialWitness> {
    let ym = residual_set(m, l)?;
    let v = ym.closure().interior();
    let (lo, hi) = open_components(&v)
        .into_iter()
        .next()
        .ok_or_else(|| Error::PreconditionFailed(format!("closure of Y_m = {ym} has empty interior")))?;
    let a = PiecewiseSection::bump(&lo, &hi)?;
    let ma = m.mul_scalar(&a)?;
    let closure_z = ma.support_closure();
    let closure_y = residual_set(&ma, l)?.closure();
    let closure_equal = closure_z == closure_y;

    let quarter = (&hi - &lo) / Q::from_integer(4.into());
    let mut windows = vec![(lo.clone(), hi.clone())];
    for i in 0..4 {
        let s = &lo + &quarter * Q::from_integer(i.into());
        windows.push((s.clone(), &s + &quarter));
    }
    windows.push((&lo + &quarter, &hi - &quarter));
    let mut probes = Vec::with_capacity(windows.len());
    for (s, t) in windows {
        let mab = ma.mul_scalar(&PiecewiseSection::bump(&s, &t)?)?;
        let residual_empty = residual_set(&mab, l)?.is_empty();
        probes.push(BumpProbe { interval: (fmt_q(&s), fmt_q(&t)), residual_empty, product_zero: mab.is_zero() });
    }
    let probes_ok = probes.iter().all(|p| !p.residual_empty || p.product_zero);
    Ok(NonEssentialWitness { interval: (fmt_q(&lo), fmt_q(&hi)), a, ma, closure_z, closure_y, closure_equal, probes, probes_ok })
}

/// Smallest `e` with `sup |g|² ≤ 4^e`, so `g / 2^e` has sup-norm at most one.
pub fn generator_scale(g: &PiecewiseSection) -> i32 {
    let norm_sqr: Vec<QPoly> = g
        .pieces()
        .iter()
        .map(|p| p.iter().fold(QPoly::zero(), |acc, c| acc.add(&c.norm_sqr())))
        .collect();
    let fits = |e: i32| {
        let bound = two_pow(2 * e);
        g.breakpoints().windows(2).zip(&norm_sqr).all(|(w, p)| p.le_on(&bound, &w[0], &w[1]))
    };
    let mut e = 0;
    if fits(e) {
        while e > -64 && fits(e - 1) {
            e -= 1;
        }
    } else {
        while !fits(e) {
            e += 1;
        }
    }
    e
}

/// Breadth-first dyadic points of `(lo, hi)`: the midpoint, then quarter
/// points, and so on.
pub fn dyadic_samples(lo: &Q, hi: &Q, count: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(count);
    let width = hi - lo;
    let mut depth = 1u32;
    while out.len() < count {
        let den: i64 = 1 << depth;
        for k in (1..den).step_by(2) {
            if out.len() == count {
                break;
            }
            out.push(lo + &width * Q::new(k.into(), den.into()));
        }
        depth += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InductiveStep {
    pub sample: String,
    pub generator: usize,
    pub radius: String,
    pub generator_scale: i32,
    pub lambda: String,
    /// Whether `2^{−j}` was rejected for landing in `L`.
    pub halved: bool,
    pub outside_l: bool,
    pub term_norm_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InductiveWitness {
    pub m: PiecewiseSection,
    pub steps: Vec<InductiveStep>,
}

impl InductiveWitness {
    pub fn lambdas(&self) -> Vec<Q> {
        self.steps.iter().map(|s| super::rational::parse_q(&s.lambda).expect("own output")).collect()
    }

    pub fn picks(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.generator).collect()
    }

    /// `m(x_j) ∉ L_{x_j}` for every sample and every `λ_j ∈ (0, 2^{−j}]`
    /// with each term of sup-norm at most `2^{−j}`.
    pub fn verified(&self) -> bool {
        let lambdas_ok = self.lambdas().iter().enumerate().all(|(j, l)| l.is_positive() && *l <= two_pow(-(j as i32 + 1)));
        lambdas_ok && self.steps.iter().all(|s| s.outside_l && s.term_norm_ok)
    }
}

/// Builds `m = Σ λ_j g_{k_j} a_j` with `m(x_j) ∉ L_{x_j}` at every sample.
/// Without explicit samples, the dyadic points of `U` lying in `Y` are used.
pub fn inductive_witness_section(
    spec: &FieldModuleSpec,
    u: (&Q, &Q),
    samples: Option<&[Q]>,
    count: usize,
) -> Result<InductiveWitness> {
    let (ulo, uhi) = u;
    if ulo >= uhi {
        return Err(Error::Invalid("U must have positive length".into()));
    }
    let l = &spec.subfield;
    let y = super::criterion::total_defect_set(spec)?.y;
    let u_set = SymbolicSubset::open(ulo.clone(), uhi.clone())?;
    if !u_set.subset_of(&y.closure()) {
        return Err(Error::PreconditionFailed(format!("U = ({}, {}) is not inside the closure of Y = {y}", fmt_q(ulo), fmt_q(uhi))));
    }
    let xs: Vec<Q> = match samples {
        Some(s) => {
            if let Some(x) = s.iter().find(|x| !y.contains(x)) {
                return Err(Error::SampleNotInDefect(fmt_q(x)));
            }
            for (i, x) in s.iter().enumerate() {
                if s[..i].contains(x) {
                    return Err(Error::Invalid(format!("repeated sample {}", fmt_q(x))));
                }
            }
            s.to_vec()
        }
        None => {
            let mut pool = dyadic_samples(ulo, uhi, count.max(1) * 4).into_iter().filter(|x| y.contains(x));
            let picked: Vec<Q> = pool.by_ref().take(count).collect();
            if picked.len() < count {
                return Err(Error::SampleNotInDefect(format!("too few dyadic points of U lie in Y = {y}")));
            }
            picked
        }
    };

    let d = spec.d();
    let scales: Vec<i32> = spec.generators.iter().map(generator_scale).collect();
    let mut m = PiecewiseSection::zero(d);
    let mut steps = Vec::with_capacity(xs.len());
    for (j0, xj) in xs.iter().enumerate() {
        let j = j0 as i32 + 1;
        let k = spec
            .generators
            .iter()
            .position(|g| g.eval(xj).and_then(|v| l.contains_at(xj, &v)).map(|inside| !inside).unwrap_or(false))
            .ok_or_else(|| Error::NoGeneratorDefect(format!("every generator lies in L at {}", fmt_q(xj))))?;
        let radius = xs[..j0].iter().map(|xi| (xi - xj).abs()).min().unwrap_or_else(Q::one);
        let a = PiecewiseSection::peak(xj, &radius)?;
        let g_hat = spec.generators[k].scale(&gq_real(two_pow(-scales[k])));
        let partial = m.eval(xj)?;
        let gx = g_hat.eval(xj)?;
        let lands_outside = |lambda: &Q| -> Result<bool> {
            let v: Vec<_> = partial.iter().zip(&gx).map(|(p, g)| p + g * gq_real(lambda.clone())).collect();
            Ok(!l.contains_at(xj, &v)?)
        };
        let first = two_pow(-j);
        let (lambda, halved) = if lands_outside(&first)? {
            (first, false)
        } else {
            let second = &first * half();
            if !lands_outside(&second)? {
                return Err(Error::Invalid(format!("both candidate coefficients land in L at {}", fmt_q(xj))));
            }
            (second, true)
        };
        let term = g_hat.mul_scalar(&a)?.scale(&gq_real(lambda.clone()));
        let bound = two_pow(-2 * j);
        let term_norm_ok = term.breakpoints().windows(2).zip(term.pieces()).all(|(w, p)| {
            p.iter().fold(QPoly::zero(), |acc, c| acc.add(&c.norm_sqr())).le_on(&bound, &w[0], &w[1])
        });
        m = m.add(&term)?;
        steps.push(InductiveStep {
            sample: fmt_q(xj),
            generator: k,
            radius: fmt_q(&radius),
            generator_scale: scales[k],
            lambda: fmt_q(&lambda),
            halved,
            outside_l: false,
            term_norm_ok,
        });
    }
    for (step, xj) in steps.iter_mut().zip(&xs) {
        let v = m.eval(xj)?;
        step.outside_l = !v.iter().all(gq_is_zero) && !l.contains_at(xj, &v)?;
    }
    Ok(InductiveWitness { m, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{gq, q, qi, GQ};
    use crate::field::subspace::{unit, Boundary};

    fn split_field(d: usize, left: SymbolicSubset, left_cols: Vec<Vec<GQ>>, right_cols: Vec<Vec<GQ>>) -> SubspaceField {
        let right = left.complement();
        SubspaceField::new(d, vec![(left, left_cols), (right, right_cols)]).unwrap()
    }

    #[test]
    fn essential_witness_full_field() {
        let w = essential_witness(&PiecewiseSection::basis(1, 0), &SubspaceField::full(1)).unwrap();
        assert!(w.verified());
    }

    #[test]
    fn essential_witness_avoids_point_defect() {
        let l = split_field(1, SymbolicSubset::point(q(1, 2)).unwrap(), vec![], vec![unit(1, 0)]);
        let w = essential_witness(&PiecewiseSection::basis(1, 0), &l).unwrap();
        assert!(w.verified());
        assert_eq!(w.interval, ("1/2".to_string(), "1/1".to_string()));
    }

    #[test]
    fn essential_witness_follows_support() {
        let m = PiecewiseSection::bump(&q(1, 2), &qi(1)).unwrap();
        let l = split_field(1, SymbolicSubset::open(qi(0), q(1, 4)).unwrap(), vec![], vec![unit(1, 0)]);
        let w = essential_witness(&m, &l).unwrap();
        assert!(w.verified());
        let lo = crate::field::rational::parse_q(&w.interval.0).unwrap();
        assert!(lo >= q(1, 2));
    }

    #[test]
    fn essential_witness_rejects_dense_defect() {
        let l = split_field(1, SymbolicSubset::open(q(3, 10), q(4, 10)).unwrap(), vec![], vec![unit(1, 0)]);
        assert!(matches!(essential_witness(&PiecewiseSection::basis(1, 0), &l), Err(Error::PreconditionFailed(_))));
        assert!(matches!(essential_witness(&PiecewiseSection::zero(1), &l), Err(Error::ZeroInput)));
    }

    #[test]
    fn non_essential_witness_on_planted_interval() {
        let iv = SymbolicSubset::open(q(3, 10), q(4, 10)).unwrap();
        let l = split_field(2, iv, vec![unit(2, 1)], vec![unit(2, 0), unit(2, 1)]);
        let w = non_essential_witness(&PiecewiseSection::basis(2, 0), &l).unwrap();
        assert!(w.verified());
        assert_eq!(w.interval, ("3/10".to_string(), "2/5".to_string()));
        assert_eq!(w.closure_z, SymbolicSubset::closed(q(3, 10), q(4, 10)).unwrap());
    }

    #[test]
    fn non_essential_witness_polynomial_defect() {
        let m = PiecewiseSection::polynomial(vec![GPoly::from_real(&QPoly::new(vec![qi(0), qi(1)])), GPoly::zero()]).unwrap();
        let l = split_field(2, SymbolicSubset::open(qi(0), qi(1)).unwrap(), vec![unit(2, 1)], vec![unit(2, 0), unit(2, 1)]);
        assert!(non_essential_witness(&m, &l).unwrap().verified());
    }

    #[test]
    fn non_essential_witness_needs_interior() {
        let l = split_field(1, SymbolicSubset::point(q(1, 2)).unwrap(), vec![], vec![unit(1, 0)]);
        assert!(matches!(non_essential_witness(&PiecewiseSection::basis(1, 0), &l), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn scale_is_a_power_of_two_bound() {
        assert_eq!(generator_scale(&PiecewiseSection::basis(2, 1)), 0);
        let g = PiecewiseSection::constant(vec![gq(qi(3), qi(0)), gq(qi(0), qi(4))]).unwrap();
        assert_eq!(generator_scale(&g), 3);
        assert_eq!(generator_scale(&PiecewiseSection::bump(&qi(0), &qi(1)).unwrap()), -2);
    }

    #[test]
    fn dyadic_order() {
        assert_eq!(dyadic_samples(&qi(0), &qi(1), 4), vec![q(1, 2), q(1, 4), q(3, 4), q(1, 8)]);
    }

    #[test]
    fn inductive_single_sample() {
        let l = SubspaceField::constant(2, vec![unit(2, 0)]).unwrap();
        let spec = FieldModuleSpec::standard(l);
        let w = inductive_witness_section(&spec, (&qi(0), &qi(1)), Some(&[q(1, 3)]), 1).unwrap();
        assert!(w.verified());
        assert_eq!(w.picks(), vec![1]);
        assert_eq!(w.lambdas(), vec![q(1, 2)]);
    }

    #[test]
    fn inductive_shared_generator() {
        let iv = SymbolicSubset::open(q(1, 4), q(3, 4)).unwrap();
        let l = split_field(1, iv, vec![], vec![unit(1, 0)]);
        let spec = FieldModuleSpec::standard(l);
        let w = inductive_witness_section(&spec, (&q(1, 4), &q(3, 4)), None, 8).unwrap();
        assert!(w.verified());
        assert!(w.picks().iter().all(|&k| k == 0));
        assert!(w.lambdas().iter().enumerate().all(|(j, l)| *l == two_pow(-(j as i32 + 1))));
    }

    #[test]
    fn inductive_adversarial_lambda() {
        let right = SymbolicSubset::interval(q(3, 8), qi(1), false, true).unwrap();
        let left = right.complement();
        let skew = vec![gq_real(qi(8)), gq_real(qi(15))];
        let l = SubspaceField::new(2, vec![(left, vec![skew]), (right, vec![unit(2, 0)])]).unwrap();
        let spec = FieldModuleSpec::new(vec![PiecewiseSection::basis(2, 0), PiecewiseSection::basis(2, 1)], l, Boundary::Closed).unwrap();
        let w = inductive_witness_section(&spec, (&qi(0), &qi(1)), Some(&[q(1, 2), q(1, 4)]), 2).unwrap();
        assert!(w.verified());
        assert_eq!(w.picks(), vec![1, 0]);
        assert_eq!(w.lambdas(), vec![q(1, 2), q(1, 8)]);
        assert!(w.steps[1].halved);
    }

    #[test]
    fn inductive_rejects_bad_samples() {
        let iv = SymbolicSubset::open(q(1, 4), q(3, 4)).unwrap();
        let l = split_field(1, iv, vec![], vec![unit(1, 0)]);
        let spec = FieldModuleSpec::standard(l);
        let r = inductive_witness_section(&spec, (&q(1, 4), &q(3, 4)), Some(&[q(1, 2), q(9, 10)]), 2);
        assert!(matches!(r, Err(Error::SampleNotInDefect(_))));
    }
}
