//! Reversers of finite order and factorizations of general IETs into
//! involutions or periodic maps.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::actions::normalize_free_bs_action;
use crate::error::{Error, Result};
use crate::gn::{strengthen_reverser, GnElement};
use crate::iet::{
    conjugate_by_pl, decompose, detect_restricted_rotation_product, lt, period, towers, towers_within,
    Iet, IntervalSet, Tower,
};
use crate::perm::Permutation;
use crate::saf::{saf, SafTensor};
use crate::scalar::linalg::rational_ratio;
use crate::scalar::{rank, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Involutions,
    Periodic,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorKind::Involutions => "involutions",
            FactorKind::Periodic => "periodic",
        })
    }
}

/// `f = factors[0] ∘ factors[1] ∘ …`, each factor of verified finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub factors: Vec<Iet>,
    pub kind: FactorKind,
    pub orders: Vec<u64>,
    pub verified: bool,
}

impl FactorizationResult {
    pub fn product(&self) -> Result<Iet> {
        self.factors.iter().try_fold(Iet::identity(), |acc, g| acc.compose(g))
    }

    /// Recomputes the product and the factor orders from scratch.
    pub fn verify(&self, f: &Iet, budget: u64) -> Result<bool> {
        if self.product()? != *f || self.orders.len() != self.factors.len() {
            return Ok(false);
        }
        for (g, &o) in self.factors.iter().zip(&self.orders) {
            if !g.power(o as i64)?.is_identity() || period(g, budget)? != Some(o) {
                return Ok(false);
            }
            if self.kind == FactorKind::Involutions && o > 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Text transcript: one factor per line in canonical form, then the orders.
impl fmt::Display for FactorizationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} factors of kind {}", self.factors.len(), self.kind)?;
        for (k, g) in self.factors.iter().enumerate() {
            writeln!(f, "f{} = {g}", k + 1)?;
        }
        let orders: Vec<String> = self.orders.iter().map(u64::to_string).collect();
        writeln!(f, "# orders: {}", orders.join(", "))?;
        write!(
            f,
            "# recomposition: {}",
            if self.verified { "verified" } else { "unverified" }
        )
    }
}

/// Builds an IET from `(start, end, translation)` pieces covering `[0, 1)`.
fn assemble(mut pieces: Vec<(Scalar, Scalar, Scalar)>) -> Result<Iet> {
    crate::iet::try_sort_by(&mut pieces, |a, b| crate::iet::cmp(&a.0, &b.0))?;
    let mut expected = Scalar::zero();
    for (s, e, _) in &pieces {
        if *s != expected {
            return Err(Error::InternalVerificationFailed(format!(
                "pieces leave a gap or overlap at {expected}"
            )));
        }
        expected = e.clone();
    }
    let (breaks, trans) = pieces.into_iter().map(|(s, _, t)| (s, t)).unzip();
    Iet::new(breaks, trans)
}

/// `J_k ↦ J_{p+1-k}` by translation on every tower.
fn tower_flip(f: &Iet, towers: &[Tower]) -> Result<Vec<(Scalar, Scalar, Scalar)>> {
    let mut pieces = Vec::new();
    for t in towers {
        let floors = t.floors(f)?;
        let p = floors.len();
        for (k, (s, e)) in floors.iter().enumerate() {
            let target = &floors[p - 1 - k].0;
            pieces.push((s.clone(), e.clone(), target.checked_sub(s)?));
        }
    }
    Ok(pieces)
}

fn order_within(g: &Iet, budget: u64) -> Result<u64> {
    period(g, budget)?.ok_or(Error::NotPeriodicWithinBudget(budget))
}

fn finish(f: &Iet, factors: Vec<Iet>, kind: FactorKind, budget: u64) -> Result<FactorizationResult> {
    let orders = factors
        .iter()
        .map(|g| order_within(g, budget))
        .collect::<Result<Vec<_>>>()?;
    if kind == FactorKind::Involutions && orders.iter().any(|&o| o > 2) {
        return Err(Error::InternalVerificationFailed("a factor is not an involution".into()));
    }
    let result = FactorizationResult {
        factors,
        kind,
        orders,
        verified: true,
    };
    if result.product()? != *f {
        return Err(Error::InternalVerificationFailed(format!(
            "factors do not recompose to {f}"
        )));
    }
    Ok(result)
}

/// Writes a periodic `f` as `i_1 ∘ i_2` with `i_1` flipping every tower and
/// `i_2 = i_1 ∘ f`.
pub fn factor_periodic_two_involutions(f: &Iet, budget: u64) -> Result<FactorizationResult> {
    let ts = towers(f, budget)?.ok_or(Error::NotPeriodicWithinBudget(budget))?;
    let i1 = assemble(tower_flip(f, &ts)?)?;
    let i2 = i1.compose(f)?;
    finish(f, vec![i1, i2], FactorKind::Involutions, budget)
}

fn check_reverser(f: &Iet, h: &Iet) -> Result<()> {
    if h.compose(f)?.compose(&h.inverse()?)? != f.inverse()? {
        return Err(Error::NotAReverser(format!("{h} does not reverse {f}")));
    }
    Ok(())
}

fn good_order(o: u64) -> bool {
    o <= 2 || o % 4 == 0
}

/// `g` restricted to `set`, as pieces.
fn restrict(g: &Iet, set: &IntervalSet) -> Result<Vec<(Scalar, Scalar, Scalar)>> {
    set.split_by(g)
}

/// Least `k ≤ cap` with `g^k` the identity on `set`.
fn order_on(g: &Iet, set: &IntervalSet, cap: u64) -> Result<Option<u64>> {
    let mut acc = g.clone();
    for k in 1..=cap {
        if set.fixed_by(&acc)? {
            return Ok(Some(k));
        }
        acc = acc.compose(g)?;
    }
    Ok(None)
}

/// Builds the reverser component by component: tower flips on the periodic
/// part, the alternating `h^{±1}` map on even `h`-cycles of minimal
/// components and a suitable power of `h` on odd cycles where `h` has
/// finite order. `None` when some piece needs another route.
fn componentwise_reverser(f: &Iet, h: &Iet, budget: u64) -> Result<Option<Iet>> {
    let d = decompose(f, budget)?;
    if !d.is_resolved() {
        return Ok(None);
    }
    let mut pieces = Vec::new();
    let periodic = d.periodic_set()?;
    if !periodic.is_empty() {
        let Some(ts) = towers_within(f, &periodic, budget)? else {
            return Ok(None);
        };
        pieces.extend(tower_flip(f, &ts)?);
    }
    let minimal: Vec<&IntervalSet> = d.minimal_components().map(|c| &c.support).collect();
    let h_inv = h.inverse()?;
    let mut visited = vec![false; minimal.len()];
    for start in 0..minimal.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        let mut current = minimal[start].clone();
        loop {
            current = current.image(h)?;
            let Some(next) = minimal.iter().position(|m| **m == current) else {
                return Ok(None);
            };
            if next == start {
                break;
            }
            cycle.push(next);
        }
        for &c in &cycle {
            visited[c] = true;
        }
        if cycle.len() % 2 == 0 {
            for (j, &c) in cycle.iter().enumerate() {
                let g = if j % 2 == 0 { h } else { &h_inv };
                pieces.extend(restrict(g, minimal[c])?);
            }
        } else {
            let set = cycle
                .iter()
                .try_fold(IntervalSet::empty(), |acc, &c| acc.union(minimal[c]))?;
            let cap = budget.min(256);
            let Some(o) = order_on(h, &set, cap)? else {
                return Ok(None);
            };
            let g = if o % 2 == 0 && (o / 2) % 2 == 1 {
                h.power((o / 2) as i64)?
            } else {
                h.clone()
            };
            pieces.extend(restrict(&g, &set)?);
        }
    }
    Ok(Some(assemble(pieces)?))
}

/// Reverser of `f` and `h` inside a common `G_n`, made involutive.
fn gn_reverser(f: &Iet, h: &Iet) -> Result<Option<Iet>> {
    for n in 1..=64 {
        if let (Ok(fg), Ok(hg)) = (GnElement::from_iet(f, n), GnElement::from_iet(h, n)) {
            return Ok(Some(strengthen_reverser(&fg, &hg)?.to_iet()?));
        }
    }
    Ok(None)
}

/// Conjugates `⟨f, h⟩` into some `G_n`, strengthens there and pulls back.
fn normalized_reverser(f: &Iet, h: &Iet, budget: u64) -> Result<Iet> {
    let nm = normalize_free_bs_action(f, h, budget)?;
    let t = strengthen_reverser(&nm.f, &nm.h)?;
    conjugate_by_pl(&t.to_iet()?, &nm.r.inverse()?)
}

/// A reverser of `f` of order 2 or a multiple of 4, built from a given
/// reverser `h`.
pub fn finite_order_reverser(f: &Iet, h: &Iet, budget: u64) -> Result<Iet> {
    check_reverser(f, h)?;
    let candidate = if h.is_involution()? {
        h.clone()
    } else if let Some(o) = period(h, budget)? {
        if o % 2 == 1 {
            // h^o = id reverses f, so f is an involution.
            f.clone()
        } else if (o / 2) % 2 == 1 {
            h.power((o / 2) as i64)?
        } else {
            h.clone()
        }
    } else if let Some(t) = componentwise_reverser(f, h, budget)? {
        t
    } else if let Some(t) = gn_reverser(f, h)? {
        t
    } else {
        normalized_reverser(f, h, budget).map_err(|e| match e {
            Error::NotOfThisForm(m) | Error::FreenessUnverified(m) => Error::UnresolvedComponent(m),
            other => other,
        })?
    };
    check_reverser(f, &candidate)
        .map_err(|_| Error::InternalVerificationFailed(format!("{candidate} does not reverse {f}")))?;
    let o = order_within(&candidate, budget)?;
    if !good_order(o) {
        return Err(Error::InternalVerificationFailed(format!(
            "constructed reverser has order {o}"
        )));
    }
    Ok(candidate)
}

/// `f = h' ∘ (h'^{-1} ∘ f)` with both factors periodic.
pub fn factor_two_periodic(f: &Iet, h: &Iet, budget: u64) -> Result<FactorizationResult> {
    let t = finite_order_reverser(f, h, budget)?;
    let rest = t.inverse()?.compose(f)?;
    finish(f, vec![t, rest], FactorKind::Periodic, budget)
}

/// At most four involutions, via [`factor_two_periodic`].
pub fn factor_reversible_four_involutions(f: &Iet, h: &Iet, budget: u64) -> Result<FactorizationResult> {
    check_reverser(f, h)?;
    if f.is_involution()? {
        return finish(f, vec![f.clone()], FactorKind::Involutions, budget);
    }
    if let Some(two) = period(f, budget)?.map(|_| factor_periodic_two_involutions(f, budget)) {
        let two = two?;
        let factors = two.factors.into_iter().filter(|g| !g.is_identity()).collect();
        return finish(f, factors, FactorKind::Involutions, budget);
    }
    let periodic = factor_two_periodic(f, h, budget)?;
    let mut factors = Vec::new();
    for g in &periodic.factors {
        if g.is_involution()? {
            factors.push(g.clone());
        } else {
            factors.extend(factor_periodic_two_involutions(g, budget)?.factors);
        }
    }
    factors.retain(|g| !g.is_identity());
    finish(f, factors, FactorKind::Involutions, budget)
}

/// Outcome of [`three_iet_analysis`].
#[derive(Clone, Debug)]
pub struct ThreeIetReport {
    pub saf: SafTensor,
    pub saf_zero: bool,
    pub period: Option<u64>,
    pub involutions: Option<FactorizationResult>,
    /// Zero SAF but no period within the budget. Periodicity is guaranteed
    /// in that case, so this flags a budget that is too small.
    pub anomaly: bool,
}

impl ThreeIetReport {
    pub fn periodic(&self) -> bool {
        self.period.is_some()
    }
}

pub fn three_iet_analysis(f: &Iet, budget: u64) -> Result<ThreeIetReport> {
    if f.len() > 3 {
        return Err(Error::NotAThreeIet(f.len()));
    }
    let value = saf(f)?;
    let saf_zero = value.is_zero();
    let (p, involutions) = if saf_zero {
        match period(f, budget)? {
            Some(p) => (Some(p), Some(factor_periodic_two_involutions(f, budget)?)),
            None => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(ThreeIetReport {
        saf: value,
        saf_zero,
        anomaly: saf_zero && p.is_none(),
        period: p,
        involutions,
    })
}

/// Evidence that a product of two restricted rotations is not reversible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrCertificate {
    pub lengths: (Scalar, Scalar),
    pub angles: (Scalar, Scalar),
    /// 1-based index of a piece whose angle/length ratio is irrational.
    pub irrational_piece: usize,
    /// Rank over ℚ of `{l_i, δ_i}` for that piece; 2 means independent.
    pub pair_rank: usize,
}

impl RrCertificate {
    pub fn is_valid(&self) -> bool {
        let (l, d) = match self.irrational_piece {
            1 => (&self.lengths.0, &self.angles.0),
            2 => (&self.lengths.1, &self.angles.1),
            _ => return false,
        };
        self.lengths.0 != self.lengths.1 && self.pair_rank == 2 && rank(&[l.clone(), d.clone()]) == 2
    }

    /// Re-derives the certificate from `f` and compares.
    pub fn verify(&self, f: &Iet) -> bool {
        self.is_valid() && rr_non_reversibility_certificate(f).as_ref() == Ok(self)
    }
}

impl fmt::Display for RrCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.irrational_piece;
        let (l, d) = if i == 1 {
            (&self.lengths.0, &self.angles.0)
        } else {
            (&self.lengths.1, &self.angles.1)
        };
        writeln!(f, "l1 = {}, l2 = {} differ", self.lengths.0, self.lengths.1)?;
        writeln!(f, "d{i}/l{i} = ({d})/({l}) is irrational (rank {})", self.pair_rank)?;
        write!(
            f,
            "a reverser maps minimal components to minimal components of the same length, \
             so it would preserve piece {i} and reverse a minimal rotation there, which is impossible"
        )
    }
}

pub fn rr_non_reversibility_certificate(f: &Iet) -> Result<RrCertificate> {
    let pieces = detect_restricted_rotation_product(f).map_err(|e| Error::NotApplicable(e.to_string()))?;
    if pieces.len() != 2 {
        return Err(Error::NotApplicable(format!(
            "expected two restricted rotations, found {}",
            pieces.len()
        )));
    }
    let l1 = pieces[0].length()?;
    let l2 = pieces[1].length()?;
    if l1 == l2 {
        return Err(Error::NotApplicable("the two supports have equal length".into()));
    }
    let angles = (pieces[0].angle.clone(), pieces[1].angle.clone());
    for (i, (l, d)) in [(&l1, &angles.0), (&l2, &angles.1)].into_iter().enumerate() {
        if rational_ratio(d, l).is_none() && !d.is_zero() {
            return Ok(RrCertificate {
                lengths: (l1.clone(), l2.clone()),
                angles: angles.clone(),
                irrational_piece: i + 1,
                pair_rank: rank(&[l.clone(), d.clone()]),
            });
        }
    }
    Err(Error::NotApplicable("both angle/length ratios are rational".into()))
}

/// Rotation by `d1` on `[0, l1)` followed by rotation by `d2` on `[l1, 1)`.
pub fn two_restricted_rotations(l1: &Scalar, d1: &Scalar, d2: &Scalar) -> Result<Iet> {
    let one = Scalar::one();
    Iet::restricted_rotation(&Scalar::zero(), l1, d1)?.compose(&Iet::restricted_rotation(l1, &one, d2)?)
}

/// The simplest rational in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi, "empty interval");
    let zero = BigRational::zero();
    if lo.is_negative() && hi.is_positive() {
        return zero;
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    if &next < hi {
        return next;
    }
    let gap_hi = hi - &fl;
    if *lo == fl {
        let m = (BigRational::one() / gap_hi).floor() + BigRational::one();
        return fl + BigRational::one() / m;
    }
    let gap_lo = lo - &fl;
    let inner = simplest_between(&(BigRational::one() / gap_hi), &(BigRational::one() / gap_lo));
    fl + BigRational::one() / inner
}

/// A rational `q ≥ 0` with `0 < x - q < width`, located by witness
/// enclosures of `x` and checked exactly.
fn rational_in_gap(x: &Scalar, width: &BigRational) -> Result<BigRational> {
    for level in (0..x.level_count()).rev() {
        let (lo, hi) = x.enclosure(level);
        let a = &hi - width;
        if a >= lo || !lo.is_positive() {
            continue;
        }
        // Either 0 lies in (a, lo) and is chosen, or a ≥ 0.
        let q = simplest_between(&a, &lo);
        let diff = x.checked_sub(&Scalar::from_rational(q.clone()))?;
        let positive = diff.signum().ok() == Some(std::cmp::Ordering::Greater);
        if positive && lt(&diff, &Scalar::from_rational(width.clone())).unwrap_or(false) {
            return Ok(q);
        }
    }
    Err(Error::RationalGapNotFound)
}

/// Six involutions whose product is the two-rotation map with
/// `l1 = p/(p+1)`, angle `d1` on `[0, l1)` and `-p·d1 + r` on `[l1, 1)`.
///
/// With `S = p + 1`: `RP` rotates the first piece by `-q/S` and the second
/// by `-r + pq/S`, `g = f ∘ RP` and `i ∈ G_S` is the cyclic element with
/// angles `(-a, …, -a, pa)`, `a = d1 - q/S`. Both `i` and `i ∘ g` are
/// periodic, so `f = i^{-1} ∘ (i ∘ g) ∘ RP^{-1}` splits into six.
pub fn six_involutions_rr(p: u64, d1: &Scalar, r: &BigRational, budget: u64) -> Result<FactorizationResult> {
    if p == 0 {
        return Err(Error::HypothesesViolated("p must be a positive integer".into()));
    }
    let s_int = p as i64 + 1;
    let l1 = Scalar::from_ratio(p as i64, s_int);
    let l2 = Scalar::from_ratio(1, s_int);
    let r_s = Scalar::from_rational(r.clone());
    let d2 = r_s.checked_sub(&d1.scale_int(p as i64))?;
    let zero = Scalar::zero();
    if !lt(&zero, d1)? || !lt(d1, &l1)? {
        return Err(Error::HypothesesViolated(format!("need 0 < d1 < {l1}, got d1 = {d1}")));
    }
    if lt(&d2, &zero)? || !lt(&d2, &l2)? {
        return Err(Error::HypothesesViolated(format!("need 0 <= d2 < {l2}, got d2 = {d2}")));
    }
    let f = two_restricted_rotations(&l1, d1, &d2)?;

    let width = BigRational::new(BigInt::one(), BigInt::from(p));
    let q = rational_in_gap(&d1.scale_int(s_int), &width)?;
    let q_s = Scalar::from_rational(q / BigInt::from(s_int));
    let rp = two_restricted_rotations(&l1, &-&q_s, &q_s.scale_int(p as i64).checked_sub(&r_s)?)?;
    let g = f.compose(&rp)?;
    let a = d1.checked_sub(&q_s)?;
    let mut angles = vec![-&a; p as usize];
    angles.push(a.scale_int(p as i64));
    let cycle = Permutation::from_images0((0..p as usize + 1).map(|i| (i + 1) % (p as usize + 1)).collect());
    let i = GnElement::new(&angles, cycle)?.to_iet()?;
    if order_within(&i, budget)? != p + 1 {
        return Err(Error::InternalVerificationFailed(format!("i does not have period {}", p + 1)));
    }
    let ig = i.compose(&g)?;
    let mut factors = Vec::with_capacity(6);
    for part in [i.inverse()?, ig, rp.inverse()?] {
        factors.extend(factor_periodic_two_involutions(&part, budget)?.factors);
    }
    finish(&f, factors, FactorKind::Involutions, budget)
}
