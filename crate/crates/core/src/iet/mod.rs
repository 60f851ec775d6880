//! Interval exchange transformations of `[0, 1)`.

mod dynamics;
mod intervals;
mod pl;
mod rotations;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;

pub use dynamics::{
    bp_growth, decompose, first_return, period, towers, towers_within, BpGrowth, Component, ComponentDecomposition,
    ComponentKind, FirstReturn, KeaneCertificate, Tower,
};
pub use intervals::IntervalSet;
pub use pl::{conjugate_by_pl, PlMap};
pub use rotations::{detect_restricted_rotation_product, normalize_restricted_rotations, RotationPiece};

/// A bijection of `[0, 1)` acting as `x ↦ x + t_k` on `[b_k, b_{k+1})`.
///
/// Always canonical: `b_0 = 0`, breakpoints strictly increase, images tile
/// `[0, 1)` and adjacent pieces have distinct translations. Equality is
/// therefore equality of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Iet {
    breaks: Vec<Scalar>,
    trans: Vec<Scalar>,
}

pub(crate) fn cmp(a: &Scalar, b: &Scalar) -> Result<Ordering> {
    a.compare(b)
}

pub(crate) fn lt(a: &Scalar, b: &Scalar) -> Result<bool> {
    Ok(a.compare(b)? == Ordering::Less)
}

/// Sorts with a fallible comparator, reporting the first failure.
pub(crate) fn try_sort_by<T>(v: &mut [T], mut f: impl FnMut(&T, &T) -> Result<Ordering>) -> Result<()> {
    let mut err = None;
    v.sort_by(|a, b| match f(a, b) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    err.map_or(Ok(()), Err)
}

impl Iet {
    pub fn identity() -> Self {
        Iet {
            breaks: vec![Scalar::zero()],
            trans: vec![Scalar::zero()],
        }
    }

    /// Validates and canonicalizes `x ↦ x + t_k` on `[b_k, b_{k+1})`.
    pub fn new(breakpoints: Vec<Scalar>, translations: Vec<Scalar>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != translations.len() {
            return Err(Error::InvalidIet(format!(
                "{} breakpoints but {} translations",
                breakpoints.len(),
                translations.len()
            )));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidIet("first breakpoint must be 0".into()));
        }
        for w in breakpoints.windows(2) {
            if !lt(&w[0], &w[1])? {
                return Err(Error::InvalidIet(format!(
                    "breakpoints not strictly increasing at {}",
                    w[1]
                )));
            }
        }
        let one = Scalar::one();
        if !lt(breakpoints.last().unwrap(), &one)? {
            return Err(Error::InvalidIet("breakpoints must lie in [0, 1)".into()));
        }
        let raw = Iet {
            breaks: breakpoints,
            trans: translations,
        };
        let mut images: Vec<(Scalar, Scalar)> = (0..raw.len())
            .map(|k| {
                let (s, e, t) = raw.piece(k);
                Ok((s.checked_add(t)?, e.checked_add(t)?))
            })
            .collect::<Result<_>>()?;
        try_sort_by(&mut images, |a, b| cmp(&a.0, &b.0))?;
        let mut expected = Scalar::zero();
        for (s, e) in &images {
            if *s != expected {
                return Err(Error::InvalidIet(format!(
                    "images do not tile [0, 1): expected an image starting at {expected}, found {s}"
                )));
            }
            expected = e.clone();
        }
        if expected != one {
            return Err(Error::InvalidIet(format!(
                "images do not tile [0, 1): they end at {expected}"
            )));
        }
        Ok(raw.canonical())
    }

    /// Builds from trusted pieces (images known to tile) and canonicalizes.
    pub(crate) fn from_pieces_unchecked(pieces: Vec<(Scalar, Scalar)>) -> Self {
        let (breaks, trans) = pieces.into_iter().unzip();
        Iet { breaks, trans }.canonical()
    }

    /// From interval lengths and the permutation sending interval `k` to
    /// position `π(k)` in the image.
    pub fn from_lengths(lengths: &[Scalar], permutation: &Permutation) -> Result<Self> {
        let r = lengths.len();
        if permutation.n() != r || r == 0 {
            return Err(Error::SizeMismatch {
                left: r,
                right: permutation.n(),
            });
        }
        let zero = Scalar::zero();
        let mut total = Scalar::zero();
        for l in lengths {
            if !lt(&zero, l)? {
                return Err(Error::InvalidIet(format!("length {l} is not positive")));
            }
            total = total.checked_add(l)?;
        }
        if total != Scalar::one() {
            return Err(Error::InvalidIet(format!("lengths sum to {total}, not 1")));
        }
        let mut breaks = Vec::with_capacity(r);
        let mut trans = Vec::with_capacity(r);
        let mut start = Scalar::zero();
        for k in 0..r {
            let mut image_start = Scalar::zero();
            for j in 0..r {
                if permutation.apply0(j) < permutation.apply0(k) {
                    image_start = image_start.checked_add(&lengths[j])?;
                }
            }
            trans.push(image_start.checked_sub(&start)?);
            breaks.push(start.clone());
            start = start.checked_add(&lengths[k])?;
        }
        Iet::new(breaks, trans)
    }

    /// Rotation `x ↦ x + a mod 1`.
    pub fn rotation(angle: &Scalar) -> Result<Self> {
        let a = crate::scalar::reduce_mod(angle, &BigRational::one())?.into_representative();
        if a.is_zero() {
            return Ok(Iet::identity());
        }
        let one = Scalar::one();
        Ok(Iet::from_pieces_unchecked(vec![
            (Scalar::zero(), a.clone()),
            (one.checked_sub(&a)?, a.checked_sub(&one)?),
        ]))
    }

    /// Rotation by `angle` on `[start, end)`, identity elsewhere.
    pub fn restricted_rotation(start: &Scalar, end: &Scalar, angle: &Scalar) -> Result<Self> {
        let len = end.checked_sub(start)?;
        let zero = Scalar::zero();
        if !lt(&zero, &len)? || lt(start, &zero)? || lt(&Scalar::one(), end)? {
            return Err(Error::InvalidIet(format!("[{start}, {end}) is not a subinterval of [0, 1)")));
        }
        let a = reduce_interval(angle, &len)?;
        let mut pieces = Vec::new();
        if !start.is_zero() {
            pieces.push((zero.clone(), zero.clone()));
        }
        if a.is_zero() {
            pieces.push((start.clone(), zero.clone()));
        } else {
            pieces.push((start.clone(), a.clone()));
            pieces.push((end.checked_sub(&a)?, a.checked_sub(&len)?));
        }
        if *end != Scalar::one() {
            pieces.push((end.clone(), zero));
        }
        Iet::new(pieces.iter().map(|p| p.0.clone()).collect(), pieces.into_iter().map(|p| p.1).collect())
    }

    fn canonical(self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut trans: Vec<Scalar> = Vec::with_capacity(self.trans.len());
        for (b, t) in self.breaks.into_iter().zip(self.trans) {
            if trans.last() == Some(&t) {
                continue;
            }
            breaks.push(b);
            trans.push(t);
        }
        Iet { breaks, trans }
    }

    /// Number of canonical intervals.
    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breaks
    }

    pub fn translations(&self) -> &[Scalar] {
        &self.trans
    }

    /// `(start, end, translation)` of the `k`-th interval.
    pub fn piece(&self, k: usize) -> (&Scalar, Scalar, &Scalar) {
        let end = self
            .breaks
            .get(k + 1)
            .cloned()
            .unwrap_or_else(Scalar::one);
        (&self.breaks[k], end, &self.trans[k])
    }

    pub(crate) fn end(&self, k: usize) -> Scalar {
        self.breaks.get(k + 1).cloned().unwrap_or_else(Scalar::one)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Scalar, Scalar, &Scalar)> + '_ {
        (0..self.len()).map(move |k| self.piece(k))
    }

    pub fn lengths(&self) -> Result<Vec<Scalar>> {
        (0..self.len())
            .map(|k| self.end(k).checked_sub(&self.breaks[k]))
            .collect()
    }

    /// Image positions of the intervals, as a permutation.
    pub fn permutation(&self) -> Result<Permutation> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let starts: Vec<Scalar> = (0..self.len())
            .map(|k| self.breaks[k].checked_add(&self.trans[k]))
            .collect::<Result<_>>()?;
        try_sort_by(&mut order, |&a, &b| cmp(&starts[a], &starts[b]))?;
        let mut images = vec![0; self.len()];
        for (pos, &k) in order.iter().enumerate() {
            images[k] = pos;
        }
        Ok(Permutation::from_images0(images))
    }

    pub fn is_identity(&self) -> bool {
        self.len() == 1 && self.trans[0].is_zero()
    }

    /// Index of the interval containing `x`.
    pub fn locate(&self, x: &Scalar) -> Result<usize> {
        if lt(x, &Scalar::zero())? || !lt(x, &Scalar::one())? {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let (mut lo, mut hi) = (0, self.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if lt(x, &self.breaks[mid])? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        let k = self.locate(x)?;
        x.checked_add(&self.trans[k])
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Iet) -> Result<Iet> {
        let mut pieces = Vec::with_capacity(self.len() + g.len());
        for k in 0..g.len() {
            let (s, e, t) = g.piece(k);
            let image_start = s.checked_add(t)?;
            let image_end = e.checked_add(t)?;
            let mut m = self.locate(&image_start)?;
            let mut cur = s.clone();
            loop {
                pieces.push((cur.clone(), t.checked_add(&self.trans[m])?));
                let boundary = self.end(m);
                if lt(&boundary, &image_end)? {
                    cur = boundary.checked_sub(t)?;
                    m += 1;
                } else {
                    break;
                }
            }
        }
        Ok(Iet::from_pieces_unchecked(pieces))
    }

    pub fn inverse(&self) -> Result<Iet> {
        let mut pieces: Vec<(Scalar, Scalar)> = (0..self.len())
            .map(|k| Ok((self.breaks[k].checked_add(&self.trans[k])?, -&self.trans[k])))
            .collect::<Result<_>>()?;
        try_sort_by(&mut pieces, |a, b| cmp(&a.0, &b.0))?;
        Ok(Iet::from_pieces_unchecked(pieces))
    }

    pub fn power(&self, k: i64) -> Result<Iet> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Iet::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_involution(&self) -> Result<bool> {
        Ok(self.compose(self)?.is_identity())
    }

    /// True iff some interval is fixed pointwise.
    pub fn has_fixed_point(&self) -> bool {
        self.trans.iter().any(Scalar::is_zero)
    }

    /// All scalars appearing in the map (for table bookkeeping).
    pub(crate) fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.breaks.iter().chain(self.trans.iter())
    }

    /// The symbol table shared by the data, if any.
    pub fn table(&self) -> Option<crate::scalar::SymbolTable> {
        let mut out: Option<crate::scalar::SymbolTable> = None;
        for s in self.scalars() {
            if let Some(t) = s.table() {
                out = Some(match out {
                    Some(o) => o.merge(t).unwrap_or(o),
                    None => t.clone(),
                });
            }
        }
        out
    }
}

/// Reduces `a` into `[0, len)`.
pub(crate) fn reduce_interval(a: &Scalar, len: &Scalar) -> Result<Scalar> {
    match len.as_rational() {
        Some(l) => Ok(crate::scalar::reduce_mod(a, l)?.into_representative()),
        None => {
            let zero = Scalar::zero();
            let mut x = a.clone();
            while lt(&x, &zero)? {
                x = x.checked_add(len)?;
            }
            while !lt(&x, len)? {
                x = x.checked_sub(len)?;
            }
            Ok(x)
        }
    }
}

/// Canonical text: `iet breakpoints= b0, b1, … translations= t0, t1, …`.
impl fmt::Display for Iet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Scalar]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "iet breakpoints= {} translations= {}",
            join(&self.breaks),
            join(&self.trans)
        )
    }
}

impl fmt::Debug for Iet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{parse_scalar, ratio, SymbolTable};
    use proptest::prelude::*;

    pub(crate) fn table() -> SymbolTable {
        crate::testutil::table()
    }

    pub(crate) fn s(text: &str) -> Scalar {
        parse_scalar(text, &table()).unwrap()
    }

    #[test]
    fn identity_evaluates() {
        assert_eq!(Iet::identity().evaluate(&s("alpha")).unwrap(), s("alpha"));
    }

    #[test]
    fn three_iet_first_piece() {
        let l = [s("alpha"), s("beta"), s("1 - alpha - beta")];
        let f = Iet::from_lengths(&l, &Permutation::parse("3 2 1", None).unwrap()).unwrap();
        let x = s("1/2*alpha");
        assert_eq!(f.evaluate(&x).unwrap(), &x + &(&l[1] + &l[2]));
    }

    #[test]
    fn rotation_wraps() {
        let r = Iet::rotation(&s("alpha")).unwrap();
        assert_eq!(r.evaluate(&s("1 - 1/2*alpha")).unwrap(), s("1/2*alpha"));
        assert!(matches!(r.evaluate(&s("1")), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn rotations_compose() {
        let a = Iet::rotation(&s("alpha")).unwrap();
        let b = Iet::rotation(&s("beta")).unwrap();
        assert_eq!(a.compose(&b).unwrap(), Iet::rotation(&s("alpha + beta")).unwrap());
        let h = Iet::rotation(&s("1/2")).unwrap();
        assert!(h.compose(&h).unwrap().is_identity());
        assert_ne!(a, b);
    }

    #[test]
    fn inverse_and_identity() {
        let a = Iet::rotation(&s("alpha")).unwrap();
        assert!(a.compose(&a.inverse().unwrap()).unwrap().is_identity());
        assert_eq!(a.compose(&Iet::identity()).unwrap(), a);
    }

    #[test]
    fn rejects_non_tilings() {
        let bad = Iet::new(vec![s("0"), s("1/2")], vec![s("1/4"), s("-1/2")]);
        assert!(matches!(bad, Err(Error::InvalidIet(_))));
        let bad = Iet::new(vec![s("1/4")], vec![s("0")]);
        assert!(bad.is_err());
        let bad = Iet::new(vec![s("0"), s("0")], vec![s("0"), s("0")]);
        assert!(bad.is_err());
    }

    #[test]
    fn canonical_merge() {
        let f = Iet::new(vec![s("0"), s("1/3")], vec![s("0"), s("0")]).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn restricted_rotation_pieces() {
        let f = Iet::restricted_rotation(&s("1/4"), &s("3/4"), &s("alpha - 1/2")).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.evaluate(&s("1/8")).unwrap(), s("1/8"));
        assert_eq!(f.evaluate(&s("1/4")).unwrap(), s("1/4 + alpha"));
    }

    #[test]
    fn permutation_of_reversal() {
        let l = [s("1/2"), s("1/3"), s("1/6")];
        let f = Iet::from_lengths(&l, &Permutation::parse("3 2 1", None).unwrap()).unwrap();
        assert_eq!(f.permutation().unwrap().images(), vec![3, 2, 1]);
        assert_eq!(f.translations(), &[s("1/2"), s("-1/3"), s("-5/6")]);
        let _ = ratio(1, 2);
    }

    pub(crate) fn arb_iet() -> impl Strategy<Value = Iet> {
        (1usize..5).prop_flat_map(|r| {
            (
                proptest::collection::vec((1i64..6, -3i64..4), r),
                Just((0..r).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(|(raw, images)| {
                    // w_k/W + c_k·alpha/(100W); the last length absorbs the rest
                    // and stays positive since |Σ c_k·alpha| < 100.
                    let total: i64 = raw.iter().map(|(w, _)| w).sum();
                    let mut lengths: Vec<Scalar> = raw[..raw.len() - 1]
                        .iter()
                        .map(|&(w, c)| {
                            Scalar::from_parts(Some(&table()), ratio(w, total), [(0, ratio(c, 100 * total))])
                        })
                        .collect();
                    let used = lengths.iter().fold(Scalar::zero(), |a, b| &a + b);
                    lengths.push(&Scalar::one() - &used);
                    Iet::from_lengths(&lengths, &Permutation::from_images0(images)).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn composition_matches_evaluation(f in arb_iet(), g in arb_iet(), num in 0i64..97) {
            let x = Scalar::from_ratio(num, 97);
            let fg = f.compose(&g).unwrap();
            prop_assert_eq!(fg.evaluate(&x).unwrap(), f.evaluate(&g.evaluate(&x).unwrap()).unwrap());
            prop_assert!(fg.len() <= f.len() + g.len());
        }

        #[test]
        fn composition_associative(f in arb_iet(), g in arb_iet(), h in arb_iet()) {
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_is_two_sided(f in arb_iet()) {
            let inv = f.inverse().unwrap();
            prop_assert!(f.compose(&inv).unwrap().is_identity());
            prop_assert!(inv.compose(&f).unwrap().is_identity());
        }

        #[test]
        fn canonical_idempotent(f in arb_iet()) {
            let again = Iet::new(f.breakpoints().to_vec(), f.translations().to_vec()).unwrap();
            prop_assert_eq!(again, f);
        }

        #[test]
        fn power_matches_repeated_compose(f in arb_iet(), k in -4i64..5) {
            let mut expected = Iet::identity();
            let step = if k < 0 { f.inverse().unwrap() } else { f.clone() };
            for _ in 0..k.unsigned_abs() {
                expected = step.compose(&expected).unwrap();
            }
            prop_assert_eq!(f.power(k).unwrap(), expected);
        }
    }
}
