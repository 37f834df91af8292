//! Univariate polynomials over `Q` and `Q(i)` with exact real-root
//! isolation on rational intervals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_q, gq_is_zero, gq_zero, simplest_between, GQ, Q};

/// Real polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `x − r`
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Q::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = Q::one() / lc;
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dl = divisor.leading().expect("division by the zero polynomial").clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Product of the factors of odd multiplicity (Yun's decomposition).
    pub fn odd_multiplicity_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::constant(Q::one());
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dd = c.sub(&b.derivative());
        let mut odd = Self::constant(Q::one());
        let mut mult = 1usize;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            if mult % 2 == 1 {
                odd = odd.mul(&a);
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = c.sub(&b.derivative());
            mult += 1;
        }
        odd.monic()
    }

    /// Integer polynomial with coprime coefficients and the same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn sturm_chain(&self) -> SturmChain {
        let p0 = self.squarefree();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) > 0 {
            let mut prev = p0.clone();
            let mut cur = p0.derivative();
            while !cur.is_zero() {
                let (_, r) = prev.div_rem(&cur);
                chain.push(cur.clone());
                prev = cur;
                cur = r.neg();
            }
        }
        SturmChain { chain }
    }

    /// Real roots in the closed interval `[lo, hi]`, isolated exactly.
    pub fn roots_in(&self, lo: &Q, hi: &Q) -> Vec<RealRoot> {
        assert!(!self.is_zero(), "the zero polynomial has no isolated roots");
        let sturm = self.sturm_chain();
        let sf = sturm.chain[0].clone();
        let mut out = Vec::new();
        if sf.eval(lo).is_zero() {
            out.push(RealRoot::Rational(lo.clone()));
        }
        if lo < hi {
            let mut stack = vec![(lo.clone(), hi.clone())];
            let mut found = Vec::new();
            while let Some((a, b)) = stack.pop() {
                let n = sturm.count(&a, &b);
                if n == 0 {
                    continue;
                }
                if n == 1 {
                    found.push((a, b));
                    continue;
                }
                let m = (&a + &b) / Q::from_integer(BigInt::from(2));
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
            found.sort_by(|x, y| x.0.cmp(&y.0));
            for (a, b) in found {
                out.push(classify_root(&sf, &sturm, a, b));
            }
        }
        out
    }

    /// `self(x) ≤ c` for every `x ∈ [lo, hi]`, decided exactly.
    pub fn le_on(&self, c: &Q, lo: &Q, hi: &Q) -> bool {
        let gap = QPoly::constant(c.clone()).sub(self);
        if gap.is_zero() {
            return true;
        }
        if gap.eval(lo).is_negative() || gap.eval(hi).is_negative() {
            return false;
        }
        if lo >= hi {
            return true;
        }
        let odd = gap.odd_multiplicity_part();
        if odd.degree().unwrap_or(0) > 0 {
            let sturm = odd.sturm_chain();
            let mut inside = sturm.count(lo, hi);
            if odd.eval(hi).is_zero() {
                inside -= 1;
            }
            if inside > 0 {
                return false;
            }
        }
        // No sign change inside; read the sign off a non-root sample.
        let deg = gap.degree().unwrap_or(0) as i64;
        let width = hi - lo;
        for t in 1..=deg + 1 {
            let x = lo + &width * Q::new(BigInt::from(t), BigInt::from(deg + 2));
            let v = gap.eval(&x);
            if !v.is_zero() {
                return v.is_positive();
            }
        }
        true
    }
}

/// A real root located exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot {
    Rational(Q),
    /// The unique root of `poly` in the open interval `(lo, hi)`; it is irrational.
    Irrational { poly: QPoly, lo: Q, hi: Q },
}

impl RealRoot {
    /// Shrinks an irrational root's interval until it contains none of `points`.
    pub fn separate_from(&mut self, points: &[Q]) {
        if let RealRoot::Irrational { poly, lo, hi } = self {
            let sturm = poly.sturm_chain();
            while points.iter().any(|p| &*lo < p && p < &*hi) {
                let m = (&*lo + &*hi) / Q::from_integer(BigInt::from(2));
                if sturm.count(lo, &m) == 1 {
                    *hi = m;
                } else {
                    *lo = m;
                }
            }
        }
    }
}

pub struct SturmChain {
    chain: Vec<QPoly>,
}

impl SturmChain {
    fn sign_changes(&self, x: &Q) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Q, b: &Q) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// The root of the square-free `sf` in `(a, b]` is either rational with a
/// denominator dividing the leading coefficient of the primitive integer
/// form, or irrational. Once the interval is narrower than `1/L²` it holds at
/// most one rational of denominator `≤ L`, which must then be the simplest
/// rational in it.
fn classify_root(sf: &QPoly, sturm: &SturmChain, mut a: Q, mut b: Q) -> RealRoot {
    if sf.eval(&b).is_zero() {
        return RealRoot::Rational(b);
    }
    let ints = sf.primitive_integer();
    let lead = ints.last().expect("nonconstant").abs();
    let bound = Q::new(BigInt::one(), &lead * &lead);
    let two = Q::from_integer(BigInt::from(2));
    loop {
        let s = simplest_between(&a, Some(&b));
        if sf.eval(&s).is_zero() {
            return RealRoot::Rational(s);
        }
        if &b - &a < bound {
            return RealRoot::Irrational { poly: sf.clone(), lo: a, hi: b };
        }
        let m = (&a + &b) / &two;
        if sf.eval(&m).is_zero() {
            return RealRoot::Rational(m);
        }
        if sturm.count(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_q(c),
                1 => format!("({})x", fmt_q(c)),
                _ => format!("({})x^{i}", fmt_q(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Polynomial in a real variable with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct GPoly {
    coeffs: Vec<GQ>,
}

impl GPoly {
    pub fn new(mut coeffs: Vec<GQ>) -> Self {
        while coeffs.last().is_some_and(gq_is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: GQ) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(p: &QPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| GQ::new(c.clone(), Q::zero())).collect())
    }

    pub fn coeffs(&self) -> &[GQ] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> GQ {
        let xr = GQ::new(x.clone(), Q::zero());
        self.coeffs.iter().rev().fold(gq_zero(), |acc, c| acc * &xr + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = gq_zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&GQ::new(-Q::one(), Q::zero())))
    }

    pub fn scale(&self, s: &GQ) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![gq_zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    /// Pointwise conjugate: for real `x`, conjugate the coefficients.
    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn re_part(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im_part(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }

    /// `|p(x)|²` as a real polynomial.
    pub fn norm_sqr(&self) -> QPoly {
        let re = self.re_part();
        let im = self.im_part();
        re.mul(&re).add(&im.mul(&im))
    }
}

/// Monic gcd of the real and imaginary parts of all `polys`; its real roots
/// are exactly the common real zeros. `None` when every part vanishes
/// identically.
pub fn common_zero_poly<'a>(polys: impl IntoIterator<Item = &'a GPoly>) -> Option<QPoly> {
    let mut g = QPoly::zero();
    for p in polys {
        g = g.gcd(&p.re_part());
        g = g.gcd(&p.im_part());
    }
    if g.is_zero() {
        None
    } else {
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::{q, qi};

    fn poly(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&v| qi(v)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x−1)(x−2) and (x−1)(x+3)
        let a = poly(&[2, -3, 1]);
        let b = poly(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), poly(&[-1, 1]));
        let (quot, rem) = a.div_rem(&poly(&[-1, 1]));
        assert_eq!(quot, poly(&[-2, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn squarefree_and_odd_part() {
        // (x−1)²(x−2)³(x+1)
        let p = poly(&[-1, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[-2, 1]).mul(&poly(&[-2, 1])).mul(&poly(&[-2, 1]))).mul(&poly(&[1, 1]));
        assert_eq!(p.squarefree(), poly(&[-1, 1]).mul(&poly(&[-2, 1])).mul(&poly(&[1, 1])));
        assert_eq!(p.odd_multiplicity_part(), poly(&[-2, 1]).mul(&poly(&[1, 1])));
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (3x − 1)(2x − 1)(x − 2)
        let p = poly(&[-1, 3]).mul(&poly(&[-1, 2])).mul(&poly(&[-2, 1]));
        let roots = p.roots_in(&qi(0), &qi(1));
        assert_eq!(roots, vec![RealRoot::Rational(q(1, 3)), RealRoot::Rational(q(1, 2))]);
        let roots = p.roots_in(&q(1, 2), &qi(2));
        assert_eq!(roots, vec![RealRoot::Rational(q(1, 2)), RealRoot::Rational(qi(2))]);
    }

    #[test]
    fn irrational_root_detected() {
        // 2x² − 1 has root 1/√2 in (0, 1)
        let p = poly(&[-1, 0, 2]);
        let roots = p.roots_in(&qi(0), &qi(1));
        assert_eq!(roots.len(), 1);
        match &roots[0] {
            RealRoot::Irrational { lo, hi, .. } => {
                assert!(lo < &q(7072, 10000) && &q(7071, 10000) < hi);
            }
            other => panic!("expected irrational root, got {other:?}"),
        }
        let mut r = roots[0].clone();
        r.separate_from(&[q(7, 10), q(71, 100)]);
        if let RealRoot::Irrational { lo, hi, .. } = r {
            assert!(lo >= q(7, 10) && hi <= q(71, 100));
        }
    }

    #[test]
    fn le_on_intervals() {
        // x(1 − x) ≤ 1/4 on [0, 1], with equality at 1/2
        let p = poly(&[0, 1, -1]);
        assert!(p.le_on(&q(1, 4), &qi(0), &qi(1)));
        assert!(!p.le_on(&q(1, 5), &qi(0), &qi(1)));
        assert!(p.le_on(&q(1, 5), &qi(0), &q(1, 4)));
    }

    #[test]
    fn common_zeros_of_gaussian_polys() {
        // (x − 1/2)·(1 + i) and (x − 1/2)(x − 1)
        let a = GPoly::from_real(&QPoly::new(vec![q(-1, 2), qi(1)])).scale(&GQ::new(qi(1), qi(1)));
        let b = GPoly::from_real(&QPoly::new(vec![q(-1, 2), qi(1)]).mul(&poly(&[-1, 1])));
        let g = common_zero_poly([&a, &b]).unwrap();
        assert_eq!(g, QPoly::new(vec![q(-1, 2), qi(1)]));
        assert!(common_zero_poly([&GPoly::zero()]).is_none());
    }
}
