use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;

use super::{cmp, lt, try_sort_by, Iet, IntervalSet};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{q_rank, rank, Scalar};

/// A stack of disjoint translates `[base, base + width) + …` cycled by the
/// map, of the given height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub base: Scalar,
    pub width: Scalar,
    pub height: u64,
}

impl Tower {
    /// The floors `f^k([base, base + width))` for `k < height`, in order.
    pub fn floors(&self, f: &Iet) -> Result<Vec<(Scalar, Scalar)>> {
        let mut out = Vec::with_capacity(self.height as usize);
        let mut x = self.base.clone();
        for _ in 0..self.height {
            let end = x.checked_add(&self.width)?;
            let next = f.evaluate(&x)?;
            out.push((x, end));
            x = next;
        }
        Ok(out)
    }
}

/// Cuts `[0, 1)` into periodic towers of `f`, spending at most `budget`
/// evaluations. Returns `None` when the budget runs out, which is always
/// the case for non-periodic maps.
pub fn towers(f: &Iet, budget: u64) -> Result<Option<Vec<Tower>>> {
    towers_within(f, &IntervalSet::full(), budget)
}

/// [`towers`] restricted to an `f`-invariant set.
pub fn towers_within(f: &Iet, domain: &IntervalSet, budget: u64) -> Result<Option<Vec<Tower>>> {
    let mut covered = IntervalSet::empty();
    let mut out = Vec::new();
    let mut steps = 0u64;
    loop {
        let uncovered = domain.difference(&covered)?;
        let Some((a, c)) = uncovered.intervals().first().cloned() else {
            return Ok(Some(out));
        };
        let mut orbit = vec![a.clone()];
        let mut x = f.evaluate(&a)?;
        steps += 1;
        while x != a {
            if steps >= budget {
                return Ok(None);
            }
            orbit.push(x.clone());
            x = f.evaluate(&x)?;
            steps += 1;
        }
        // The leftmost uncovered point cannot have an orbit point just below
        // it, so floors of this width are pairwise disjoint.
        let mut width = c.checked_sub(&a)?;
        for y in &orbit {
            let k = f.locate(y)?;
            let room = f.end(k).checked_sub(y)?;
            if lt(&room, &width)? {
                width = room;
            }
            for (s, _) in covered.intervals() {
                if lt(y, s)? {
                    let room = s.checked_sub(y)?;
                    if lt(&room, &width)? {
                        width = room;
                    }
                    break;
                }
            }
        }
        let tower = Tower {
            base: a,
            width,
            height: orbit.len() as u64,
        };
        let floors = tower.floors(f)?;
        covered = covered.union(&IntervalSet::from_intervals(floors)?)?;
        out.push(tower);
    }
}

/// Least `p ≤ budget` with `f^p = id`, or `None` if none was found.
///
/// The period is the lcm of the tower heights from [`towers`], checked by
/// computing `f^p` exactly.
pub fn period(f: &Iet, budget: u64) -> Result<Option<u64>> {
    let Some(ts) = towers(f, budget)? else {
        return Ok(None);
    };
    let p = ts.iter().fold(1u64, |acc, t| acc.lcm(&t.height));
    if p > budget {
        return Ok(None);
    }
    if !f.power(p as i64)?.is_identity() {
        return Err(Error::InternalVerificationFailed(format!(
            "tower heights give period {p} but f^{p} is not the identity"
        )));
    }
    Ok(Some(p))
}

/// One branch of a first-return map: `x ↦ x + translation` on
/// `[start, end)`, reached after `time` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnPiece {
    pub start: Scalar,
    pub end: Scalar,
    pub translation: Scalar,
    pub time: u64,
}

/// The first-return map of an IET to a subinterval `[a, c)`.
#[derive(Clone, Debug)]
pub struct FirstReturn {
    pub base: (Scalar, Scalar),
    /// Sorted by `start`; every branch has continuous intermediate iterates.
    pub pieces: Vec<ReturnPiece>,
    pub steps: u64,
}

/// Induced exchange on the base: lengths, image order and translations of
/// the merged branches.
#[derive(Clone, Debug)]
struct Induced {
    lengths: Vec<Scalar>,
    permutation: Permutation,
    translations: Vec<Scalar>,
}

impl FirstReturn {
    fn induced(&self) -> Result<Induced> {
        let mut merged: Vec<(Scalar, Scalar, Scalar)> = Vec::new();
        for p in &self.pieces {
            match merged.last_mut() {
                Some((_, end, t)) if *t == p.translation => *end = p.end.clone(),
                _ => merged.push((p.start.clone(), p.end.clone(), p.translation.clone())),
            }
        }
        let lengths = merged
            .iter()
            .map(|(s, e, _)| e.checked_sub(s))
            .collect::<Result<Vec<_>>>()?;
        let starts = merged
            .iter()
            .map(|(s, _, t)| s.checked_add(t))
            .collect::<Result<Vec<_>>>()?;
        let mut order: Vec<usize> = (0..merged.len()).collect();
        try_sort_by(&mut order, |&x, &y| cmp(&starts[x], &starts[y]))?;
        let mut images = vec![0; merged.len()];
        for (pos, &k) in order.iter().enumerate() {
            images[k] = pos;
        }
        Ok(Induced {
            lengths,
            permutation: Permutation::from_images0(images),
            translations: merged.into_iter().map(|m| m.2).collect(),
        })
    }

    /// Union of all iterates of the base before returning.
    pub fn orbit_hull(&self, f: &Iet) -> Result<IntervalSet> {
        let mut parts = Vec::new();
        for p in &self.pieces {
            let mut cur = IntervalSet::interval(p.start.clone(), p.end.clone())?;
            for _ in 0..p.time {
                parts.extend(cur.intervals().iter().cloned());
                cur = cur.image(f)?;
            }
        }
        IntervalSet::from_intervals(parts)
    }
}

fn map_pieces(f: &Iet) -> Vec<ReturnPiece> {
    (0..f.len())
        .map(|k| {
            let (s, e, t) = f.piece(k);
            ReturnPiece {
                start: s.clone(),
                end: e,
                translation: t.clone(),
                time: 1,
            }
        })
        .collect()
}

fn locate_piece(pieces: &[ReturnPiece], x: &Scalar) -> Result<usize> {
    let (mut lo, mut hi) = (0, pieces.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if lt(x, &pieces[mid].start)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// First return of the partial map `pieces` (defined on a set containing the
/// orbits of `[a, c)`) to `[a, c)`.
fn induce(pieces: &[ReturnPiece], a: &Scalar, c: &Scalar, budget: u64) -> Result<Option<FirstReturn>> {
    let mut active = vec![(a.clone(), c.clone(), Scalar::zero(), 0u64)];
    let mut done = Vec::new();
    let mut steps = 0u64;
    while let Some((s, e, total, time)) = active.pop() {
        let image_start = s.checked_add(&total)?;
        let image_end = e.checked_add(&total)?;
        let mut k = locate_piece(pieces, &image_start)?;
        let mut cur = image_start;
        loop {
            steps += 1;
            if steps > budget {
                return Ok(None);
            }
            let piece = &pieces[k];
            let sub_end = if lt(&piece.end, &image_end)? {
                piece.end.clone()
            } else {
                image_end.clone()
            };
            let new_total = total.checked_add(&piece.translation)?;
            let new_time = time.saturating_add(piece.time);
            if new_time > budget {
                return Ok(None);
            }
            let orig_start = cur.checked_sub(&total)?;
            let orig_end = sub_end.checked_sub(&total)?;
            // Image of this branch, split against the base interval.
            let u = cur.checked_add(&piece.translation)?;
            let v = sub_end.checked_add(&piece.translation)?;
            let shift = |x: &Scalar| x.checked_sub(&new_total);
            let lo = if lt(&u, a)? { a.clone() } else { u.clone() };
            let hi = if lt(c, &v)? { c.clone() } else { v.clone() };
            if lt(&lo, &hi)? {
                done.push(ReturnPiece {
                    start: shift(&lo)?,
                    end: shift(&hi)?,
                    translation: new_total.clone(),
                    time: new_time,
                });
            }
            let left_end = if lt(a, &v)? { a.clone() } else { v.clone() };
            if lt(&u, &left_end)? {
                active.push((shift(&u)?, shift(&left_end)?, new_total.clone(), new_time));
            }
            let right_start = if lt(&u, c)? { c.clone() } else { u.clone() };
            if lt(&right_start, &v)? {
                active.push((shift(&right_start)?, shift(&v)?, new_total.clone(), new_time));
            }
            debug_assert!(orig_start.compare(&orig_end).is_ok());
            if sub_end == image_end {
                break;
            }
            cur = sub_end;
            k += 1;
        }
    }
    try_sort_by(&mut done, |x, y| cmp(&x.start, &y.start))?;
    Ok(Some(FirstReturn {
        base: (a.clone(), c.clone()),
        pieces: done,
        steps,
    }))
}

/// First-return map of `f` to `[a, c)`, or `None` if it needs more than
/// `budget` branch evaluations.
pub fn first_return(f: &Iet, a: &Scalar, c: &Scalar, budget: u64) -> Result<Option<FirstReturn>> {
    induce(&map_pieces(f), a, c, budget)
}

/// Exactly checkable sufficient condition for minimality of a first-return
/// map: irreducible permutation and ℚ-independent lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeaneCertificate {
    /// The interval the map was induced on.
    pub base: (Scalar, Scalar),
    pub induced_lengths: Vec<Scalar>,
    pub permutation: Permutation,
    pub irreducible: bool,
    /// `dim_ℚ span({1} ∪ lengths)`.
    pub q_rank_value: usize,
}

impl KeaneCertificate {
    /// True iff the recorded data meets the criterion.
    pub fn is_valid(&self) -> bool {
        let r = self.induced_lengths.len();
        self.irreducible && rank(&self.induced_lengths) == r && r >= 2
    }

    /// Recomputes the first return on the base and compares.
    pub fn verify(&self, f: &Iet, budget: u64) -> Result<bool> {
        let Some(fr) = first_return(f, &self.base.0, &self.base.1, budget)? else {
            return Ok(false);
        };
        let induced = fr.induced()?;
        Ok(self.is_valid()
            && induced.lengths == self.induced_lengths
            && induced.permutation == self.permutation
            && is_irreducible(&induced.permutation) == self.irreducible
            && q_rank(&induced.lengths) == self.q_rank_value)
    }
}

fn is_irreducible(p: &Permutation) -> bool {
    let r = p.n();
    let mut max_seen = 0;
    for k in 0..r.saturating_sub(1) {
        max_seen = max_seen.max(p.apply0(k));
        if max_seen == k {
            return false;
        }
    }
    true
}

/// Smallest `k < r` with `π({0..k}) = {0..k}`.
fn first_split(p: &Permutation) -> Option<usize> {
    let mut max_seen = 0;
    for k in 0..p.n().saturating_sub(1) {
        max_seen = max_seen.max(p.apply0(k));
        if max_seen == k {
            return Some(k + 1);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Periodic { period: u64 },
    Minimal(KeaneCertificate),
    Unresolved { budget_spent: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub support: IntervalSet,
    pub kind: ComponentKind,
}

/// Partition of `[0, 1)` into invariant pieces, ordered by left endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    pub fn is_resolved(&self) -> bool {
        self.components
            .iter()
            .all(|c| !matches!(c.kind, ComponentKind::Unresolved { .. }))
    }

    pub fn periodic_set(&self) -> Result<IntervalSet> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Periodic { .. }))
            .try_fold(IntervalSet::empty(), |acc, c| acc.union(&c.support))
    }

    pub fn minimal_components(&self) -> impl Iterator<Item = &Component> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Minimal(_)))
    }
}

impl fmt::Display for ComponentDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            match &c.kind {
                ComponentKind::Periodic { period } => writeln!(f, "periodic (period {period}) on {}", c.support)?,
                ComponentKind::Minimal(cert) => writeln!(
                    f,
                    "minimal on {} (induced on [{}, {}): {} intervals, permutation {}, rank {})",
                    c.support,
                    cert.base.0,
                    cert.base.1,
                    cert.induced_lengths.len(),
                    cert.permutation,
                    cert.q_rank_value
                )?,
                ComponentKind::Unresolved { budget_spent } => {
                    writeln!(f, "unresolved on {} after {budget_spent} steps", c.support)?
                }
            }
        }
        Ok(())
    }
}

/// Splits `[0, 1)` into periodic and minimal components of `f`.
///
/// The leftmost unprocessed interval is repeatedly replaced by the first
/// return to it: fixed branches give periodic towers, reducible returns are
/// cut down, Keane-certified returns give a minimal component (the orbit
/// hull of the interval), and anything else is shrunk by a Rauzy step.
/// Whatever remains when `budget` is spent is reported as unresolved.
pub fn decompose(f: &Iet, budget: u64) -> Result<ComponentDecomposition> {
    let fmap = map_pieces(f);
    let mut unprocessed = IntervalSet::full();
    let mut periodic: BTreeMap<u64, IntervalSet> = BTreeMap::new();
    let mut components = Vec::new();
    let mut spent = 0u64;
    'outer: while let Some((a, c0)) = unprocessed.intervals().first().cloned() {
        let mut c = c0;
        let mut current: Option<FirstReturn> = None;
        loop {
            let remaining = budget.saturating_sub(spent);
            let fr = match current.take() {
                Some(fr) => fr,
                None => match induce(&fmap, &a, &c, remaining)? {
                    Some(fr) => fr,
                    None => break 'outer,
                },
            };
            spent += fr.steps;
            let fixed: Vec<&ReturnPiece> = fr.pieces.iter().filter(|p| p.translation.is_zero()).collect();
            if !fixed.is_empty() {
                for p in fixed {
                    let mut floor = IntervalSet::interval(p.start.clone(), p.end.clone())?;
                    let mut orbit = IntervalSet::empty();
                    for _ in 0..p.time {
                        orbit = orbit.union(&floor)?;
                        floor = floor.image(f)?;
                    }
                    unprocessed = unprocessed.difference(&orbit)?;
                    let entry = periodic.entry(p.time).or_default();
                    *entry = entry.union(&orbit)?;
                }
                continue 'outer;
            }
            let induced = fr.induced()?;
            if let Some(k) = first_split(&induced.permutation) {
                let cut = induced.lengths[..k]
                    .iter()
                    .try_fold(a.clone(), |acc, l| acc.checked_add(l))?;
                c = cut;
                continue;
            }
            let r = induced.lengths.len();
            if rank(&induced.lengths) == r {
                let support = fr.orbit_hull(f)?;
                unprocessed = unprocessed.difference(&support)?;
                components.push(Component {
                    support,
                    kind: ComponentKind::Minimal(KeaneCertificate {
                        base: fr.base.clone(),
                        q_rank_value: q_rank(&induced.lengths),
                        induced_lengths: induced.lengths,
                        permutation: induced.permutation,
                        irreducible: true,
                    }),
                });
                continue 'outer;
            }
            // Rauzy step on the induced map.
            let last = r - 1;
            let bottom = (0..r).find(|&j| induced.permutation.apply0(j) == last).unwrap();
            let cut = if lt(&induced.lengths[last], &induced.lengths[bottom])? {
                &induced.lengths[last]
            } else {
                &induced.lengths[bottom]
            };
            c = c.checked_sub(cut)?;
            spent += 1;
            if spent >= budget {
                break 'outer;
            }
            let _ = &induced.translations;
            current = match induce(&fr.pieces, &a, &c, budget.saturating_sub(spent))? {
                Some(next) => Some(next),
                None => break 'outer,
            };
        }
    }
    for (p, support) in periodic {
        if !support.fixed_by(&f.power(p as i64)?)? {
            return Err(Error::InternalVerificationFailed(format!(
                "f^{p} is not the identity on {support}"
            )));
        }
        components.push(Component {
            support,
            kind: ComponentKind::Periodic { period: p },
        });
    }
    if !unprocessed.is_empty() {
        components.push(Component {
            support: unprocessed,
            kind: ComponentKind::Unresolved { budget_spent: spent },
        });
    }
    let mut err = None;
    components.sort_by(|x, y| {
        let a = &x.support.intervals()[0].0;
        let b = &y.support.intervals()[0].0;
        cmp(a, b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            std::cmp::Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(ComponentDecomposition { components })
}

/// Breakpoint counts of `f^n` along a finite orbit segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpGrowth {
    /// `counts[n-1] = #(BP(f^n) ∩ {f^k(x) : |k| ≤ N})`.
    pub counts: Vec<usize>,
    /// `counts[N-1] / N`: an estimate of the growth rate, not its limit.
    pub estimate: BigRational,
}

pub fn bp_growth(f: &Iet, x: &Scalar, n: usize) -> Result<BpGrowth> {
    let inv = f.inverse()?;
    let mut orbit: HashSet<Scalar> = HashSet::new();
    orbit.insert(x.clone());
    let (mut fwd, mut bwd) = (x.clone(), x.clone());
    for _ in 0..n {
        fwd = f.evaluate(&fwd)?;
        bwd = inv.evaluate(&bwd)?;
        orbit.insert(fwd.clone());
        orbit.insert(bwd.clone());
    }
    let mut counts = Vec::with_capacity(n);
    let mut power = Iet::identity();
    for _ in 0..n {
        power = f.compose(&power)?;
        counts.push(power.breakpoints().iter().filter(|b| orbit.contains(b)).count());
    }
    let estimate = match counts.last() {
        Some(&last) if n > 0 => BigRational::new((last as i64).into(), (n as i64).into()),
        _ => BigRational::from_integer(0.into()),
    };
    Ok(BpGrowth { counts, estimate })
}
