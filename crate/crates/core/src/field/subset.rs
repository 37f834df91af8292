//! Finite unions of points and intervals in `[0, 1]` with rational endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rational::{fmt_q, half, parse_q, Q};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    pub fn length(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) * half()
    }
}

/// A subset of `[0, 1]` in normal form: sorted disjoint intervals of
/// positive length that cannot be merged, plus isolated points outside them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolicSubset {
    points: Vec<Q>,
    intervals: Vec<Interval>,
}

/// The cells of a partition of `[0, 1]` by finitely many cut points: the
/// cut points themselves and the open gaps between them.
struct Cells {
    cuts: Vec<Q>,
}

impl Cells {
    fn new<'a>(sets: impl IntoIterator<Item = &'a SymbolicSubset>, extra: &[Q]) -> Self {
        let mut cuts = vec![Q::zero(), Q::one()];
        for s in sets {
            cuts.extend(s.points.iter().cloned());
            for iv in &s.intervals {
                cuts.push(iv.lo.clone());
                cuts.push(iv.hi.clone());
            }
        }
        cuts.extend(extra.iter().filter(|x| **x >= Q::zero() && **x <= Q::one()).cloned());
        cuts.sort();
        cuts.dedup();
        Self { cuts }
    }

    fn gap_mid(&self, i: usize) -> Q {
        (&self.cuts[i] + &self.cuts[i + 1]) * half()
    }

    /// Membership flags in cell order: point 0, gap 0, point 1, …, point n.
    fn flags(&self, member: impl Fn(&Q) -> bool) -> Vec<bool> {
        let n = self.cuts.len();
        let mut out = Vec::with_capacity(2 * n - 1);
        for i in 0..n {
            out.push(member(&self.cuts[i]));
            if i + 1 < n {
                out.push(member(&self.gap_mid(i)));
            }
        }
        out
    }

    /// Assembles the normal form from per-cell flags.
    fn assemble(&self, flags: &[bool]) -> SymbolicSubset {
        let mut points = Vec::new();
        let mut intervals = Vec::new();
        let mut c = 0;
        while c < flags.len() {
            if !flags[c] {
                c += 1;
                continue;
            }
            let start = c;
            while c + 1 < flags.len() && flags[c + 1] {
                c += 1;
            }
            let end = c;
            c += 1;
            if start == end && start % 2 == 0 {
                points.push(self.cuts[start / 2].clone());
                continue;
            }
            let (lo, lo_closed) = (self.cuts[start / 2].clone(), start % 2 == 0);
            let (hi, hi_closed) =
                if end % 2 == 0 { (self.cuts[end / 2].clone(), true) } else { (self.cuts[end / 2 + 1].clone(), false) };
            intervals.push(Interval { lo, hi, lo_closed, hi_closed });
        }
        SymbolicSubset { points, intervals }
    }
}

impl SymbolicSubset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[0, 1]`.
    pub fn full() -> Self {
        Self { points: Vec::new(), intervals: vec![Interval { lo: Q::zero(), hi: Q::one(), lo_closed: true, hi_closed: true }] }
    }

    pub fn point(x: Q) -> Result<Self> {
        Self::from_parts(vec![x], Vec::new())
    }

    pub fn interval(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        Self::from_parts(Vec::new(), vec![Interval { lo, hi, lo_closed, hi_closed }])
    }

    pub fn open(lo: Q, hi: Q) -> Result<Self> {
        Self::interval(lo, hi, false, false)
    }

    pub fn closed(lo: Q, hi: Q) -> Result<Self> {
        Self::interval(lo, hi, true, true)
    }

    /// Normalizes arbitrary points and intervals. Intervals with `lo > hi`
    /// are empty; `[a, a]` is the point `a`.
    pub fn from_parts(points: Vec<Q>, intervals: Vec<Interval>) -> Result<Self> {
        let unit = |x: &Q| *x >= Q::zero() && *x <= Q::one();
        for x in points.iter().chain(intervals.iter().flat_map(|iv| [&iv.lo, &iv.hi])) {
            if !unit(x) {
                return Err(Error::OutOfRange(format!("{} lies outside [0, 1]", fmt_q(x))));
            }
        }
        let raw = SymbolicSubset { points, intervals };
        let cells = Cells::new([&raw], &[]);
        let flags = cells.flags(|x| raw.contains(x));
        Ok(cells.assemble(&flags))
    }

    pub fn points(&self) -> &[Q] {
        &self.points
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.points.contains(x) || self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.is_empty()
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let cells = Cells::new([self, other], &[]);
        let flags = cells.flags(|x| op(self.contains(x), other.contains(x)));
        cells.assemble(&flags)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement in `[0, 1]`.
    pub fn complement(&self) -> Self {
        Self::full().difference(self)
    }

    pub fn subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Removes finitely many points.
    pub fn without_points(&self, pts: &[Q]) -> Self {
        let cells = Cells::new([self], pts);
        let flags = cells.flags(|x| self.contains(x) && !pts.contains(x));
        cells.assemble(&flags)
    }

    pub fn closure(&self) -> Self {
        let cells = Cells::new([self], &[]);
        let flags = cells.flags(|x| self.contains(x));
        let closed: Vec<bool> = (0..flags.len())
            .map(|c| {
                if c % 2 == 1 {
                    flags[c]
                } else {
                    flags[c] || (c > 0 && flags[c - 1]) || (c + 1 < flags.len() && flags[c + 1])
                }
            })
            .collect();
        cells.assemble(&closed)
    }

    /// Interior relative to `[0, 1]`, so `[0, a)` is open.
    pub fn interior(&self) -> Self {
        let cells = Cells::new([self], &[]);
        let flags = cells.flags(|x| self.contains(x));
        let open: Vec<bool> = (0..flags.len())
            .map(|c| {
                if c % 2 == 1 {
                    flags[c]
                } else {
                    flags[c] && (c == 0 || flags[c - 1]) && (c + 1 == flags.len() || flags[c + 1])
                }
            })
            .collect();
        cells.assemble(&open)
    }

    /// True iff the set contains no interval of positive length.
    pub fn is_nowhere_dense(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The same decision read off `interior(closure(S)) = ∅`.
    pub fn is_nowhere_dense_via_closure(&self) -> bool {
        self.closure().interior().is_empty()
    }

    /// Rational sample points meeting every cell of the set's own partition
    /// of `[0, 1]`, together with `extra` cut points.
    pub fn probe_points(&self, extra: &[Q]) -> Vec<Q> {
        let cells = Cells::new([self], extra);
        let mut out = Vec::new();
        for i in 0..cells.cuts.len() {
            out.push(cells.cuts[i].clone());
            if i + 1 < cells.cuts.len() {
                out.push(cells.gap_mid(i));
            }
        }
        out
    }
}

impl fmt::Display for SymbolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let mut parts: Vec<(Q, String)> = self.points.iter().map(|p| (p.clone(), format!("{{{}}}", fmt_q(p)))).collect();
        for iv in &self.intervals {
            let s = format!(
                "{}{}, {}{}",
                if iv.lo_closed { '[' } else { '(' },
                fmt_q(&iv.lo),
                fmt_q(&iv.hi),
                if iv.hi_closed { ']' } else { ')' }
            );
            parts.push((iv.lo.clone(), s));
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let joined: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
        write!(f, "{}", joined.join(" ∪ "))
    }
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: String,
    hi: String,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Serialize, Deserialize)]
struct RawSubset {
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    intervals: Vec<RawInterval>,
}

impl Serialize for SymbolicSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSubset {
            points: self.points.iter().map(fmt_q).collect(),
            intervals: self
                .intervals
                .iter()
                .map(|iv| RawInterval { lo: fmt_q(&iv.lo), hi: fmt_q(&iv.hi), lo_closed: iv.lo_closed, hi_closed: iv.hi_closed })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicSubset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawSubset::deserialize(d)?;
        let points = raw.points.iter().map(|p| parse_q(p)).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        let intervals = raw
            .intervals
            .iter()
            .map(|iv| {
                Ok(Interval { lo: parse_q(&iv.lo)?, hi: parse_q(&iv.hi)?, lo_closed: iv.lo_closed, hi_closed: iv.hi_closed })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SymbolicSubset::from_parts(points, intervals).map_err(D::Error::custom)
    }
}
