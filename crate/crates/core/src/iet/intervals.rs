use std::fmt;

use super::{cmp, lt, try_sort_by, Iet};
use crate::error::Result;
use crate::scalar::Scalar;

/// A finite union of half-open intervals `[a, b)`, kept sorted, disjoint and
/// with adjacent intervals merged.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<(Scalar, Scalar)>,
}

fn max<'a>(a: &'a Scalar, b: &'a Scalar) -> Result<&'a Scalar> {
    Ok(if lt(a, b)? { b } else { a })
}

fn min<'a>(a: &'a Scalar, b: &'a Scalar) -> Result<&'a Scalar> {
    Ok(if lt(b, a)? { b } else { a })
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            parts: vec![(Scalar::zero(), Scalar::one())],
        }
    }

    pub fn interval(a: Scalar, b: Scalar) -> Result<Self> {
        Self::from_intervals(vec![(a, b)])
    }

    /// Normalizes an arbitrary list; empty intervals are dropped.
    pub fn from_intervals(mut list: Vec<(Scalar, Scalar)>) -> Result<Self> {
        let mut kept = Vec::with_capacity(list.len());
        for (a, b) in list.drain(..) {
            if lt(&a, &b)? {
                kept.push((a, b));
            }
        }
        try_sort_by(&mut kept, |x, y| cmp(&x.0, &y.0))?;
        let mut parts: Vec<(Scalar, Scalar)> = Vec::with_capacity(kept.len());
        for (a, b) in kept {
            match parts.last_mut() {
                Some((_, end)) if !lt(end, &a)? => {
                    if lt(end, &b)? {
                        *end = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        Ok(IntervalSet { parts })
    }

    pub fn intervals(&self) -> &[(Scalar, Scalar)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].0.is_zero() && self.parts[0].1 == Scalar::one()
    }

    pub fn measure(&self) -> Result<Scalar> {
        self.parts.iter().try_fold(Scalar::zero(), |acc, (a, b)| {
            acc.checked_add(&b.checked_sub(a)?)
        })
    }

    pub fn contains(&self, x: &Scalar) -> Result<bool> {
        for (a, b) in &self.parts {
            if !lt(x, a)? && lt(x, b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet> {
        let mut all = self.parts.clone();
        all.extend(other.parts.iter().cloned());
        Self::from_intervals(all)
    }

    pub fn intersection(&self, other: &IntervalSet) -> Result<IntervalSet> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = &self.parts[i];
            let (b0, b1) = &other.parts[j];
            let lo = max(a0, b0)?;
            let hi = min(a1, b1)?;
            if lt(lo, hi)? {
                out.push((lo.clone(), hi.clone()));
            }
            if lt(a1, b1)? {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn difference(&self, other: &IntervalSet) -> Result<IntervalSet> {
        let mut out = Vec::new();
        for (a, b) in &self.parts {
            let mut cur = a.clone();
            for (c, d) in &other.parts {
                if !lt(c, b)? {
                    break;
                }
                if !lt(&cur, d)? {
                    continue;
                }
                if lt(&cur, c)? {
                    out.push((cur.clone(), c.clone()));
                }
                cur = d.clone();
                if !lt(&cur, b)? {
                    break;
                }
            }
            if lt(&cur, b)? {
                out.push((cur, b.clone()));
            }
        }
        Self::from_intervals(out)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Pieces of `self` on which `f` is a single translation, as
    /// `(start, end, translation)`.
    pub fn split_by(&self, f: &Iet) -> Result<Vec<(Scalar, Scalar, Scalar)>> {
        let mut out = Vec::new();
        for (a, b) in &self.parts {
            let mut k = f.locate(a)?;
            let mut cur = a.clone();
            loop {
                let end = f.end(k);
                if lt(&end, b)? {
                    out.push((cur, end.clone(), f.translations()[k].clone()));
                    cur = end;
                    k += 1;
                } else {
                    out.push((cur, b.clone(), f.translations()[k].clone()));
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `f(self)`.
    pub fn image(&self, f: &Iet) -> Result<IntervalSet> {
        let pieces = self
            .split_by(f)?
            .into_iter()
            .map(|(a, b, t)| Ok((a.checked_add(&t)?, b.checked_add(&t)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_intervals(pieces)
    }

    pub fn is_invariant(&self, f: &Iet) -> Result<bool> {
        Ok(self.image(f)? == *self)
    }

    /// True iff `f` is the identity on every point of the set.
    pub fn fixed_by(&self, f: &Iet) -> Result<bool> {
        Ok(self.split_by(f)?.iter().all(|(_, _, t)| t.is_zero()))
    }

    pub fn translate(&self, t: &Scalar) -> Result<IntervalSet> {
        let parts = self
            .parts
            .iter()
            .map(|(a, b)| Ok((a.checked_add(t)?, b.checked_add(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet { parts })
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.parts.iter().map(|(a, b)| format!("[{a}, {b})")).collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::tests::s;

    fn set(list: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_intervals(list.iter().map(|(a, b)| (s(a), s(b))).collect()).unwrap()
    }

    #[test]
    fn normalization_merges() {
        let x = set(&[("1/2", "3/4"), ("0", "1/4"), ("1/4", "1/3")]);
        assert_eq!(x, set(&[("0", "1/3"), ("1/2", "3/4")]));
        assert_eq!(x.measure().unwrap(), s("7/12"));
    }

    #[test]
    fn set_algebra() {
        let a = set(&[("0", "1/2")]);
        let b = set(&[("1/4", "alpha + 1/2")]);
        assert_eq!(a.union(&b).unwrap(), set(&[("0", "alpha + 1/2")]));
        assert_eq!(a.intersection(&b).unwrap(), set(&[("1/4", "1/2")]));
        assert_eq!(a.difference(&b).unwrap(), set(&[("0", "1/4")]));
        assert_eq!(b.difference(&a).unwrap(), set(&[("1/2", "alpha + 1/2")]));
        assert!(IntervalSet::full().difference(&IntervalSet::full()).unwrap().is_empty());
        let holes = IntervalSet::full().difference(&set(&[("1/8", "1/4"), ("1/2", "5/8")])).unwrap();
        assert_eq!(holes, set(&[("0", "1/8"), ("1/4", "1/2"), ("5/8", "1")]));
    }

    #[test]
    fn images_under_rotation() {
        let r = Iet::rotation(&s("1/4")).unwrap();
        let a = set(&[("1/2", "1")]);
        assert_eq!(a.image(&r).unwrap(), set(&[("0", "1/4"), ("3/4", "1")]));
        assert!(IntervalSet::full().is_invariant(&r).unwrap());
        assert!(!a.is_invariant(&r).unwrap());
        assert!(!a.fixed_by(&r).unwrap());
        assert!(a.fixed_by(&Iet::identity()).unwrap());
    }
}
