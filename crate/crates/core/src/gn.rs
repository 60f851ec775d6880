//! The groups `G_n` of block rotations.
//!
//! An element `(α, σ)` sends the block `I_i = [i/n, (i+1)/n)` onto `I_{σ(i)}`
//! and rotates it by `α_i` in the circle of length `1/n`. Indices are 1-based
//! in the public API (as for [`Permutation`]) and 0-based internally.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::iet::{Iet, IntervalSet};
use crate::perm::Permutation;
use crate::scalar::{q_rank, CircleValue, Scalar, SymbolTable};

/// Largest `n` for which [`find_strong_reversers`] enumerates reversers.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// Cap on the number of witnesses built from independent per-orbit choices.
const MAX_WITNESSES: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GnElement {
    alpha: Vec<CircleValue>,
    sigma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

fn modulus(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n))
}

fn block_start(i: usize, n: usize) -> Scalar {
    Scalar::from_ratio(i as i64, n as i64)
}

impl GnElement {
    /// Reduces every angle mod `1/n`, where `n = sigma.n()`.
    pub fn new(alpha: &[Scalar], sigma: Permutation) -> Result<Self> {
        let n = sigma.n();
        if alpha.len() != n {
            return Err(Error::SizeMismatch {
                left: alpha.len(),
                right: n,
            });
        }
        let m = modulus(n);
        let alpha = alpha.iter().map(|a| CircleValue::new(a, &m)).collect::<Result<Vec<_>>>()?;
        let mut table: Option<SymbolTable> = None;
        for a in &alpha {
            if let Some(t) = a.representative().table() {
                table = Some(match table {
                    Some(prev) => prev.merge(t)?,
                    None => t.clone(),
                });
            }
        }
        Ok(GnElement { alpha, sigma })
    }

    pub fn identity(n: usize) -> Self {
        let m = modulus(n);
        GnElement {
            alpha: vec![CircleValue::zero(&m); n],
            sigma: Permutation::identity(n),
        }
    }

    /// The pure block permutation `(0, σ)`.
    pub fn from_permutation(sigma: Permutation) -> Self {
        let m = modulus(sigma.n());
        GnElement {
            alpha: vec![CircleValue::zero(&m); sigma.n()],
            sigma,
        }
    }

    fn from_circle(alpha: Vec<CircleValue>, sigma: Permutation) -> Self {
        GnElement { alpha, sigma }
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn alpha(&self) -> &[CircleValue] {
        &self.alpha
    }

    /// `α_i` for a 1-based block index.
    pub fn angle(&self, i: usize) -> &CircleValue {
        &self.alpha[i - 1]
    }

    pub fn modulus(&self) -> BigRational {
        modulus(self.n())
    }

    fn check_size(&self, other: &GnElement) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// `self ∘ g`: `α_i = α_i(g) + α_{σ_g(i)}(self)`.
    pub fn compose(&self, g: &GnElement) -> Result<GnElement> {
        self.check_size(g)?;
        let alpha = (0..self.n())
            .map(|i| g.alpha[i].add(&self.alpha[g.sigma.apply0(i)]))
            .collect::<Result<Vec<_>>>()?;
        Ok(GnElement {
            alpha,
            sigma: self.sigma.compose(&g.sigma)?,
        })
    }

    /// `α_i(f⁻¹) = −α_{σ⁻¹(i)}(f)`.
    pub fn inverse(&self) -> Result<GnElement> {
        let inv = self.sigma.inverse();
        let alpha = (0..self.n())
            .map(|i| self.alpha[inv.apply0(i)].neg())
            .collect::<Result<Vec<_>>>()?;
        Ok(GnElement { alpha, sigma: inv })
    }

    pub fn power(&self, k: i64) -> Result<GnElement> {
        self.power_big(&BigInt::from(k))
    }

    pub fn power_big(&self, k: &BigInt) -> Result<GnElement> {
        let mut base = if k.sign() == num_bigint::Sign::Minus {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = k.magnitude().clone();
        let mut acc = GnElement::identity(self.n());
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if !e.is_zero() {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.is_identity() && self.alpha.iter().all(CircleValue::is_zero)
    }

    /// `σ² = id` and `α_{σ(i)} = −α_i`.
    pub fn is_involution(&self) -> bool {
        self.sigma.is_involution()
            && (0..self.n()).all(|i| {
                self.alpha[self.sigma.apply0(i)]
                    .add(&self.alpha[i])
                    .map(|s| s.is_zero())
                    .unwrap_or(false)
            })
    }

    /// True iff `self ∘ f ∘ self⁻¹ = f⁻¹`.
    pub fn reverses(&self, f: &GnElement) -> Result<bool> {
        Ok(self.compose(f)?.compose(&self.inverse()?)? == f.inverse()?)
    }

    /// `A(f) = 2 Σ α_j` in the circle of length `1/n`.
    pub fn a_morphism(&self) -> Result<CircleValue> {
        let m = self.modulus();
        self.alpha
            .iter()
            .try_fold(CircleValue::zero(&m), |acc, a| acc.add(a))?
            .scale_int(2)
    }

    pub fn order(&self) -> Result<Order> {
        let m = self.sigma.order();
        let g = self.power(m as i64)?;
        let n = BigRational::from_integer(BigInt::from(self.n()));
        let mut denominators = BigInt::one();
        for a in &g.alpha {
            let Some(q) = a.representative().as_rational() else {
                return Ok(Order::Infinite);
            };
            denominators = denominators.lcm((q * &n).denom());
        }
        Ok(Order::Finite(denominators * BigInt::from(m)))
    }

    /// `dim_ℚ span({1} ∪ {α_i})`.
    pub fn rank(&self) -> usize {
        let reps: Vec<Scalar> = self.alpha.iter().map(|a| a.representative().clone()).collect();
        q_rank(&reps)
    }

    pub fn to_iet(&self) -> Result<Iet> {
        let n = self.n();
        let width = Scalar::from_rational(self.modulus());
        let mut pieces = Vec::with_capacity(2 * n);
        for i in 0..n {
            let shift = Scalar::from_ratio(self.sigma.apply0(i) as i64 - i as i64, n as i64);
            let a = self.alpha[i].representative();
            pieces.push((block_start(i, n), shift.checked_add(a)?));
            if !a.is_zero() {
                pieces.push((
                    block_start(i + 1, n).checked_sub(a)?,
                    shift.checked_add(a)?.checked_sub(&width)?,
                ));
            }
        }
        Ok(Iet::from_pieces_unchecked(pieces))
    }

    /// Recovers `(α, σ)` from an IET, or reports the first block on which it
    /// is not a rotation onto another block.
    pub fn from_iet(g: &Iet, n: usize) -> Result<GnElement> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let m = modulus(n);
        let mut alpha = Vec::with_capacity(n);
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let y0 = g.evaluate(&block_start(i, n))?;
            let j = y0.floor_div(&m)?;
            let j = j.to_usize().filter(|&j| j < n).ok_or_else(|| Error::NotInGn {
                n,
                reason: format!("block {} leaves [0, 1)", i + 1),
            })?;
            alpha.push(CircleValue::new(&y0.checked_sub(&block_start(j, n))?, &m)?);
            images.push(j);
        }
        let distinct: BTreeSet<usize> = images.iter().copied().collect();
        if distinct.len() != n {
            return Err(Error::NotInGn {
                n,
                reason: "two blocks start in the same block".into(),
            });
        }
        let candidate = GnElement::from_circle(alpha, Permutation::from_images0(images));
        let realized = candidate.to_iet()?;
        if realized == *g {
            return Ok(candidate);
        }
        for i in 0..n {
            let block = IntervalSet::interval(block_start(i, n), block_start(i + 1, n))?;
            if block.split_by(g)? != block.split_by(&realized)? {
                return Err(Error::NotInGn {
                    n,
                    reason: format!(
                        "block {} = [{}, {}) is not rotated onto a block",
                        i + 1,
                        block_start(i, n),
                        block_start(i + 1, n)
                    ),
                });
            }
        }
        Err(Error::InternalVerificationFailed("from_iet mismatch on no block".into()))
    }

    pub fn table(&self) -> Option<SymbolTable> {
        let mut out: Option<SymbolTable> = None;
        for a in &self.alpha {
            if let Some(t) = a.representative().table() {
                out = Some(match out {
                    Some(o) => o.merge(t).unwrap_or(o),
                    None => t.clone(),
                });
            }
        }
        out
    }

    /// Parses `gn n=4 sigma=4 3 2 1 alpha=0, beta, 0, -beta`.
    pub fn parse(text: &str, table: &SymbolTable) -> Result<GnElement> {
        crate::text::parse_gn(text, table)
    }
}

impl fmt::Display for GnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alpha: Vec<String> = self.alpha.iter().map(|a| a.to_string()).collect();
        write!(f, "gn n={} sigma={} alpha={}", self.n(), self.sigma, alpha.join(", "))
    }
}

impl fmt::Debug for GnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// How a distinguished representative `u` sits relative to `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitCase {
    /// `τ(u) = u`.
    AFixed,
    /// `τ(u) = σ(u)`.
    ASigma,
    /// `τ(u)` lies outside the `σ`-cycle of `u`.
    B,
}

impl fmt::Display for OrbitCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitCase::AFixed => "A (fixed)",
            OrbitCase::ASigma => "A (sigma)",
            OrbitCase::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChoicePolicy {
    /// `α_u(T) = 0` in case B.
    #[default]
    Default,
    /// Case B samples `0`, `1/(2n)` and the first declared symbol.
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    /// 1-based points of the `⟨σ, τ⟩`-orbit, sorted.
    pub orbit: Vec<usize>,
    pub representative: usize,
    pub case: OrbitCase,
    /// `Σ_{S_u} α + Σ_{τ(S_u)} α` in the circle of length `1/n`.
    pub condition_value: CircleValue,
    pub condition_holds: bool,
    /// Admissible values of `α_u(T)` (empty when the condition fails).
    pub admissible_choices: Vec<CircleValue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibilityReport {
    pub reverser_sigma: Permutation,
    pub orbit_data: Vec<OrbitData>,
    /// Verified involutions `T = (α_T, τ)` with `T f T = f⁻¹`.
    pub witnesses: Vec<GnElement>,
}

impl ReversibilityReport {
    pub fn holds(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn failing_orbit(&self) -> Option<&OrbitData> {
        self.orbit_data.iter().find(|o| !o.condition_holds)
    }
}

fn check_reverser(tau: &Permutation, sigma: &Permutation) -> Result<()> {
    if !tau.is_involution() {
        return Err(Error::NotAnInvolution(format!("{} is not an involution", tau.cycle_string())));
    }
    if !tau.is_reverser(sigma)? {
        return Err(Error::NotAReverser(format!(
            "{} does not reverse {}",
            tau.cycle_string(),
            sigma.cycle_string()
        )));
    }
    Ok(())
}

/// Orbits of `⟨σ, τ⟩` (0-based, each sorted, ordered by minimum).
fn joint_orbits(sigma: &Permutation, tau: &Permutation) -> Vec<Vec<usize>> {
    let n = sigma.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut orbit = Vec::new();
        seen[start] = true;
        while let Some(x) = stack.pop() {
            orbit.push(x);
            for y in [sigma.apply0(x), tau.apply0(x)] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

fn sigma_cycle(sigma: &Permutation, u: usize) -> Vec<usize> {
    let mut cycle = vec![u];
    let mut x = sigma.apply0(u);
    while x != u {
        cycle.push(x);
        x = sigma.apply0(x);
    }
    cycle
}

fn classify(sigma: &Permutation, tau: &Permutation, u: usize) -> Option<OrbitCase> {
    let tu = tau.apply0(u);
    if tu == u {
        Some(OrbitCase::AFixed)
    } else if tu == sigma.apply0(u) {
        Some(OrbitCase::ASigma)
    } else if !sigma_cycle(sigma, u).contains(&tu) {
        Some(OrbitCase::B)
    } else {
        None
    }
}

fn representative_of(sigma: &Permutation, tau: &Permutation, orbit: &[usize]) -> Result<(usize, OrbitCase)> {
    orbit
        .iter()
        .find_map(|&u| classify(sigma, tau, u).map(|c| (u, c)))
        .ok_or_else(|| {
            Error::InternalVerificationFailed(format!("orbit {orbit:?} has no distinguished point"))
        })
}

/// One distinguished point per `⟨σ, τ⟩`-orbit (1-based, the minimal
/// admissible point of each orbit).
pub fn distinguished_representatives(sigma: &Permutation, tau: &Permutation) -> Result<Vec<usize>> {
    check_reverser(tau, sigma)?;
    joint_orbits(sigma, tau)
        .iter()
        .map(|o| representative_of(sigma, tau, o).map(|(u, _)| u + 1))
        .collect()
}

/// Per-orbit analysis on the points of `orbit` only.
fn analyze_orbit(
    f: &GnElement,
    tau: &Permutation,
    orbit: &[usize],
    policy: ChoicePolicy,
) -> Result<OrbitData> {
    let sigma = &f.sigma;
    let m = f.modulus();
    let (u, case) = representative_of(sigma, tau, orbit)?;
    let cycle = sigma_cycle(sigma, u);
    let mut value = CircleValue::zero(&m);
    for &k in &cycle {
        value = value.add(&f.alpha[k])?.add(&f.alpha[tau.apply0(k)])?;
    }
    let holds = value.is_zero();
    let mut choices = Vec::new();
    if holds {
        match case {
            OrbitCase::AFixed => choices.extend(CircleValue::zero(&m).halves()?),
            OrbitCase::ASigma => choices.extend(f.alpha[u].scale_int(2)?.halves()?),
            OrbitCase::B => {
                choices.push(CircleValue::zero(&m));
                if policy == ChoicePolicy::Enumerate {
                    choices.push(CircleValue::new(&Scalar::from_rational(&m / BigRational::from_integer(2.into())), &m)?);
                    if let Some(t) = f.table().filter(|t| !t.is_empty()) {
                        let c = CircleValue::new(&Scalar::symbol(&t, 0), &m)?;
                        if !choices.contains(&c) {
                            choices.push(c);
                        }
                    }
                }
            }
        }
    }
    Ok(OrbitData {
        orbit: orbit.iter().map(|x| x + 1).collect(),
        representative: u + 1,
        case,
        condition_value: value,
        condition_holds: holds,
        admissible_choices: choices,
    })
}

/// Fills `beta` on the orbit of `u` from `β(u)`, using
/// `β(σ(k)) = β(k) − α_k(f) − α_{τσ(k)}(f)` and `β(τ(k)) = −β(k)`.
fn propagate(
    f: &GnElement,
    tau: &Permutation,
    u: usize,
    start: &CircleValue,
    beta: &mut [Option<CircleValue>],
) -> Result<()> {
    let sigma = &f.sigma;
    let cycle = sigma_cycle(sigma, u);
    let mut current = start.clone();
    for &k in &cycle {
        beta[k] = Some(current.clone());
        let next = sigma.apply0(k);
        current = current.sub(&f.alpha[k])?.sub(&f.alpha[tau.apply0(next)])?;
    }
    for &k in &cycle {
        let tk = tau.apply0(k);
        if beta[tk].is_none() {
            beta[tk] = Some(beta[k].as_ref().unwrap().neg()?);
        }
    }
    Ok(())
}

/// Cartesian product of per-orbit choices, at most `MAX_WITNESSES` entries.
fn choice_product(data: &[(usize, &[CircleValue])]) -> Vec<Vec<(usize, CircleValue)>> {
    let mut combos: Vec<Vec<(usize, CircleValue)>> = vec![Vec::new()];
    for (u, choices) in data {
        let mut next = Vec::new();
        'fill: for combo in &combos {
            for c in choices.iter() {
                let mut extended = combo.clone();
                extended.push((*u, c.clone()));
                next.push(extended);
                if next.len() >= MAX_WITNESSES {
                    break 'fill;
                }
            }
        }
        combos = next;
    }
    combos
}

/// Tests strong reversibility of `f` by involutions with block permutation
/// `τ` and builds the witnesses.
pub fn strong_reversibility_by(
    f: &GnElement,
    tau: &Permutation,
    policy: ChoicePolicy,
) -> Result<ReversibilityReport> {
    if tau.n() != f.n() {
        return Err(Error::SizeMismatch {
            left: tau.n(),
            right: f.n(),
        });
    }
    check_reverser(tau, &f.sigma)?;
    let orbits = joint_orbits(&f.sigma, tau);
    let orbit_data = orbits
        .iter()
        .map(|o| analyze_orbit(f, tau, o, policy))
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::new();
    if orbit_data.iter().all(|o| o.condition_holds) {
        let per_orbit: Vec<(usize, &[CircleValue])> = orbit_data
            .iter()
            .map(|o| (o.representative - 1, o.admissible_choices.as_slice()))
            .collect();
        let inverse = f.inverse()?;
        for combo in choice_product(&per_orbit) {
            let mut beta = vec![None; f.n()];
            for (u, start) in &combo {
                propagate(f, tau, *u, start, &mut beta)?;
            }
            let alpha = beta
                .into_iter()
                .map(|b| b.ok_or_else(|| Error::InternalVerificationFailed("unassigned angle".into())))
                .collect::<Result<Vec<_>>>()?;
            let t = GnElement::from_circle(alpha, tau.clone());
            if !t.is_involution() || t.compose(f)?.compose(&t)? != inverse {
                return Err(Error::InternalVerificationFailed(format!(
                    "constructed {t} is not an involution reversing {f}"
                )));
            }
            if !witnesses.contains(&t) {
                witnesses.push(t);
            }
        }
    }
    Ok(ReversibilityReport {
        reverser_sigma: tau.clone(),
        orbit_data,
        witnesses,
    })
}

/// Reports for every involution `τ` reversing `σ_f`, in lexicographic order.
pub fn find_strong_reversers(f: &GnElement) -> Result<Vec<ReversibilityReport>> {
    find_strong_reversers_bounded(f, DEFAULT_ENUMERATION_BOUND)
}

pub fn find_strong_reversers_bounded(f: &GnElement, bound: usize) -> Result<Vec<ReversibilityReport>> {
    if f.n() > bound {
        return Err(Error::EnumerationBoundExceeded { n: f.n(), bound });
    }
    f.sigma
        .reversing_involutions()
        .iter()
        .map(|tau| strong_reversibility_by(f, tau, ChoicePolicy::Default))
        .collect()
}

/// Turns an arbitrary reverser `h` of `f` into an involution reversing `f`.
///
/// Works one `⟨σ_f, σ_h⟩`-orbit at a time. When `σ_h` permutes the
/// `σ_f`-cycles of the orbit in an odd cycle of length `k`, `h^k` keeps every
/// cycle and the case-A construction applies to its block permutation.
/// Otherwise the cycles alternate signs and `h^{±1}` is used blockwise.
pub fn strengthen_reverser(f: &GnElement, h: &GnElement) -> Result<GnElement> {
    f.check_size(h)?;
    if !h.reverses(f)? {
        return Err(Error::NotAReverser(format!("{h} does not reverse {f}")));
    }
    if h.is_involution() {
        return Ok(h.clone());
    }
    let n = f.n();
    let m = f.modulus();
    let h_inv = h.inverse()?;
    let mut alpha: Vec<Option<CircleValue>> = vec![None; n];
    let mut images: Vec<Option<usize>> = vec![None; n];
    for orbit in joint_orbits(&f.sigma, &h.sigma) {
        let i = orbit[0];
        // σ_f-cycles in the orbit, in the order σ_h visits them.
        let mut cycles: Vec<Vec<usize>> = vec![sigma_cycle(&f.sigma, i)];
        loop {
            let next = h.sigma.apply0(cycles.last().unwrap()[0]);
            if cycles[0].contains(&next) {
                break;
            }
            let c = sigma_cycle(&f.sigma, next);
            cycles.push(c);
        }
        let k = cycles.len();
        if k % 2 == 1 {
            let t1 = h.power(k as i64)?;
            let tau = t1.sigma.clone();
            for mut cycle in cycles {
                cycle.sort_unstable();
                let data = analyze_orbit(f, &tau, &cycle, ChoicePolicy::Default)?;
                let Some(start) = data.admissible_choices.first() else {
                    return Err(Error::InternalVerificationFailed(format!(
                        "cycle of {} fails the angle condition for h^{k}",
                        cycle[0] + 1
                    )));
                };
                let mut beta = vec![None; n];
                propagate(f, &tau, data.representative - 1, start, &mut beta)?;
                for &x in &cycle {
                    alpha[x] = beta[x].clone();
                    images[x] = Some(tau.apply0(x));
                }
            }
        } else {
            for (j, cycle) in cycles.iter().enumerate() {
                let source = if j % 2 == 0 { h } else { &h_inv };
                for &x in cycle {
                    alpha[x] = Some(source.alpha[x].clone());
                    images[x] = Some(source.sigma.apply0(x));
                }
            }
        }
    }
    let alpha = alpha
        .into_iter()
        .map(|a| a.unwrap_or_else(|| CircleValue::zero(&m)))
        .collect();
    let images = images.into_iter().map(|x| x.unwrap()).collect();
    let t = GnElement::from_circle(alpha, Permutation::from_images0(images));
    if !t.is_involution() || !t.reverses(f)? {
        return Err(Error::InternalVerificationFailed(format!(
            "strengthened {t} is not an involution reversing {f}"
        )));
    }
    Ok(t)
}

/// Writes `f` with `A(f) = 0` as a product of at most four involutions
/// (apply-right-first: `f = factors[0] ∘ factors[1] ∘ …`).
pub fn factor_four_involutions(f: &GnElement) -> Result<Vec<GnElement>> {
    let a = f.a_morphism()?;
    if !a.is_zero() {
        return Err(Error::AObstruction(format!("{a} (mod 1/{})", f.n())));
    }
    if f.is_involution() {
        return Ok(vec![f.clone()]);
    }
    let n = f.n();
    let gamma = Permutation::from_images0((0..n).map(|i| (i + 1) % n).collect());
    let tau = gamma.compose(&f.sigma.inverse())?;
    let t = GnElement::from_permutation(tau.clone());
    let tf = t.compose(f)?;
    let report = strong_reversibility_by(&tf, &gamma.reversing_involution(), ChoicePolicy::Default)?;
    let w = report.witnesses.first().cloned().ok_or_else(|| {
        Error::InternalVerificationFailed(format!("no involution reverses the n-cycle element {tf}"))
    })?;
    let tau_inv = tau.inverse();
    let rho = tau_inv.reversing_involution();
    let candidates = [
        GnElement::from_permutation(rho.clone()),
        GnElement::from_permutation(rho.compose(&tau_inv)?),
        w.clone(),
        w.compose(&tf)?,
    ];
    let factors: Vec<GnElement> = candidates.into_iter().filter(|g| !g.is_identity()).collect();
    let product = factors
        .iter()
        .try_fold(GnElement::identity(n), |acc, g| acc.compose(g))?;
    if product != *f || !factors.iter().all(GnElement::is_involution) {
        return Err(Error::InternalVerificationFailed(format!(
            "four-involution factorization of {f} does not verify"
        )));
    }
    Ok(factors)
}
