//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p iet-core --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iet_core::actions::{bs_faithfulness, builtin_action, minimality_certificate, Faithfulness, Minimality, Word};
use iet_core::gn::{factor_four_involutions, strengthen_reverser, strong_reversibility_by, ChoicePolicy};
use iet_core::iet::{decompose, period, ComponentKind, IntervalSet};
use iet_core::revfact::{
    factor_periodic_two_involutions, finite_order_reverser, six_involutions_rr, three_iet_analysis,
    two_restricted_rotations, FactorKind,
};
use iet_core::saf::{calibration, saf, SafTensor};
use iet_core::{Error, GnElement, Iet, Permutation, Scalar, SymbolTable};

const BUDGET: u64 = 10_000;

const SYMBOLS: [(&str, &str); 5] = [
    ("alpha", "0.41421356237309504880168872420969807856967187537694807317667974"),
    ("beta", "0.23606797749978969640917366873127623544061835961152572427089725"),
    ("gamma", "0.30102999566398119521373889472449302676818988146210854131042746"),
    ("delta", "0.14159265358979323846264338327950288419716939937510582097494459"),
    ("eta", "0.11421356237309504880168872420969807856967187537694807317667974"),
];

struct Ctx {
    table: SymbolTable,
    rng: ChaCha8Rng,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn mk(table: &SymbolTable, c: BigRational, coeffs: Vec<(usize, BigRational)>) -> Scalar {
    Scalar::from_parts(Some(table), c, coeffs)
}

impl Ctx {
    fn new(seed: u64) -> Self {
        let table = SYMBOLS
            .iter()
            .fold(SymbolTable::new(), |t, (n, w)| t.register(n, w).unwrap());
        Ctx {
            table,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn sym(&self, i: usize) -> Scalar {
        Scalar::symbol(&self.table, i)
    }

    /// A rational with denominator at most 8 plus up to three symbols.
    fn angle(&mut self) -> Scalar {
        let c = q(self.rng.gen_range(-8..=8), self.rng.gen_range(1..=8));
        let k = self.rng.gen_range(0..=3);
        let coeffs = (0..k)
            .map(|_| (self.rng.gen_range(0..3), q(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=4))))
            .collect();
        mk(&self.table, c, coeffs)
    }

    fn perm(&mut self, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut self.rng);
        Permutation::from_images(&images.iter().map(|x| x + 1).collect::<Vec<_>>()).unwrap()
    }

    fn gn(&mut self, n: usize) -> GnElement {
        let alpha: Vec<Scalar> = (0..n).map(|_| self.angle()).collect();
        let sigma = self.perm(n);
        GnElement::new(&alpha, sigma).unwrap()
    }

    fn involution(&mut self, n: usize) -> GnElement {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut images: Vec<usize> = (0..n).collect();
        let mut alpha = vec![Scalar::zero(); n];
        let mut k = 0;
        while k < n {
            if k + 1 < n && self.rng.gen_bool(0.6) {
                let (x, y) = (order[k], order[k + 1]);
                images[x] = y;
                images[y] = x;
                alpha[x] = self.angle();
                alpha[y] = -&alpha[x];
                k += 2;
            } else {
                if self.rng.gen_bool(0.5) {
                    alpha[order[k]] = Scalar::from_ratio(1, 2 * n as i64);
                }
                k += 1;
            }
        }
        let sigma = Permutation::from_images(&images.iter().map(|x| x + 1).collect::<Vec<_>>()).unwrap();
        GnElement::new(&alpha, sigma).unwrap()
    }

    /// A uniform rotation by a nonzero symbolic angle (central in `G_n`).
    fn central(&mut self, n: usize) -> GnElement {
        let coeff = q(self.rng.gen_range(1..=3), self.rng.gen_range(1..=4));
        let a = mk(&self.table, q(self.rng.gen_range(0..8), 8), vec![(self.rng.gen_range(0..3), coeff)]);
        GnElement::new(&vec![a; n], Permutation::identity(n)).unwrap()
    }

    /// An IET with lengths `w_k/W + c_k·s/(100W)`.
    fn iet(&mut self, symbolic: bool) -> Iet {
        let r = self.rng.gen_range(1..=5);
        let raw: Vec<(i64, i64)> = (0..r)
            .map(|_| (self.rng.gen_range(1..=6), if symbolic { self.rng.gen_range(-3..=3) } else { 0 }))
            .collect();
        let sym = self.rng.gen_range(0..SYMBOLS.len());
        let total: i64 = raw.iter().map(|x| x.0).sum();
        let mut lengths: Vec<Scalar> = raw[..r - 1]
            .iter()
            .map(|&(w, c)| mk(&self.table, q(w, total), vec![(sym, q(c, 100 * total))]))
            .collect();
        let used = lengths.iter().fold(Scalar::zero(), |a, b| &a + b);
        lengths.push(&Scalar::one() - &used);
        let perm = self.perm(r);
        Iet::from_lengths(&lengths, &perm).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Independent brute force for criterion 1.

/// Solves `A x = b` over ℚ, or `None` if inconsistent.
fn solve(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..=cols {
                    let d = &factor * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Some(x)
}

/// Searches for an involution `T = (β, τ)` with `T f T = f⁻¹`: symbolic
/// parts by a linear solve, rational parts over the grid `(1/N)ℤ` mod
/// `1/n`, each candidate checked as an IET.
fn brute_force_reverser(f: &GnElement, tau: &Permutation, table: &SymbolTable) -> Option<GnElement> {
    let n = f.n();
    let sigma = f.sigma();
    let sigma_inv = sigma.inverse();
    let a: Vec<&Scalar> = f.alpha().iter().map(|c| c.representative()).collect();
    let t = |i: usize| tau.apply(i + 1) - 1;
    let st = |i: usize| sigma.apply(tau.apply(i + 1)) - 1;
    let si = |i: usize| sigma_inv.apply(i + 1) - 1;
    // Equations: x_i + x_{τ(i)} = 0 and x_i + x_{στ(i)} = -(a_{τ(i)} + a_{σ⁻¹(i)}).
    let rhs = |i: usize| -(a[t(i)] + a[si(i)]);
    let eq_pairs: Vec<(usize, usize, Scalar)> = (0..n)
        .flat_map(|i| [(i, t(i), Scalar::zero()), (i, st(i), rhs(i))])
        .collect();

    let m = table.len();
    let mut symbolic = vec![vec![BigRational::zero(); n]; m];
    for (s, column) in symbolic.iter_mut().enumerate() {
        let rows: Vec<Vec<BigRational>> = eq_pairs
            .iter()
            .map(|(i, j, r)| {
                let mut row = vec![BigRational::zero(); n + 1];
                row[*i] += BigRational::one();
                row[*j] += BigRational::one();
                row[n] = r.coefficient(s);
                row
            })
            .collect();
        *column = solve(rows, n)?;
    }

    let mut den = BigInt::from(8 * n as i64);
    for x in &a {
        den = den.lcm(x.constant().denom());
    }
    let big_n = BigInt::from(2) * den;
    let modulus = (&big_n / BigInt::from(n as i64)).try_into().unwrap_or(i64::MAX);
    let to_units = |r: &BigRational| -> i64 {
        let v = (r * BigRational::from_integer(big_n.clone())).to_integer();
        let v: i64 = (v % BigInt::from(modulus)).try_into().unwrap();
        v.rem_euclid(modulus)
    };
    let eqs: Vec<(usize, usize, i64)> = eq_pairs.iter().map(|(i, j, r)| (*i, *j, to_units(r.constant()))).collect();

    // Connected components of the equation graph, each searched separately.
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(x) = stack.pop() {
            members.push(x);
            for (i, j, _) in &eqs {
                for (u, v) in [(*i, *j), (*j, *i)] {
                    if u == x && comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
        }
        comps.push(members);
    }
    let mut units = vec![None::<i64>; n];
    fn dfs(
        order: &[usize],
        k: usize,
        units: &mut Vec<Option<i64>>,
        eqs: &[(usize, usize, i64)],
        modulus: i64,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for v in 0..modulus {
            units[x] = Some(v);
            let ok = eqs.iter().all(|(i, j, r)| match (units[*i], units[*j]) {
                                (Some(p), Some(q)) => (p + q - r).rem_euclid(modulus) == 0,
                _ => true,
            });
            if ok && dfs(order, k + 1, units, eqs, modulus) {
                return true;
            }
        }
        units[x] = None;
        false
    }
    for members in &comps {
        if !dfs(members, 0, &mut units, &eqs, modulus) {
            return None;
        }
    }
    let beta: Vec<Scalar> = (0..n)
        .map(|i| {
            let c = q(units[i].unwrap(), 1) / BigRational::from_integer(big_n.clone());
            Scalar::from_parts(Some(table), c, (0..m).map(|s| (s, symbolic[s][i].clone())))
        })
        .collect();
    let cand = GnElement::new(&beta, tau.clone()).unwrap();
    let fi = f.to_iet().unwrap();
    let ti = cand.to_iet().unwrap();
    let ok = ti.is_involution().unwrap() && ti.compose(&fi).unwrap().compose(&ti).unwrap() == fi.inverse().unwrap();
    assert!(ok, "brute-force candidate {cand} fails the IET check");
    Some(cand)
}

// ---------------------------------------------------------------------------

fn criterion_1(ctx: &mut Ctx) -> Result<String, String> {
    let (mut witnesses, mut failures, mut taus) = (0usize, 0usize, 0usize);
    for k in 0..1000 {
        let n = ctx.rng.gen_range(2..=8);
        let f = if k % 2 == 0 {
            ctx.gn(n)
        } else {
            let (t1, t2) = (ctx.involution(n), ctx.involution(n));
            t1.compose(&t2).unwrap()
        };
        let inverse = f.inverse().unwrap();
        for tau in f.sigma().reversing_involutions() {
            taus += 1;
            let report = strong_reversibility_by(&f, &tau, ChoicePolicy::Default).map_err(|e| e.to_string())?;
            let brute = brute_force_reverser(&f, &tau, &ctx.table);
            if report.holds() {
                if report.witnesses.is_empty() {
                    return Err(format!("{f}: condition holds for {tau} but no witness"));
                }
                for t in &report.witnesses {
                    witnesses += 1;
                    if !t.is_involution() || t.compose(&f).unwrap().compose(t).unwrap() != inverse {
                        return Err(format!("witness {t} fails for {f}"));
                    }
                }
                if brute.is_none() {
                    return Err(format!("{f}: witnesses exist for {tau} but brute force found none"));
                }
            } else {
                failures += 1;
                if let Some(t) = brute {
                    return Err(format!("{f}: condition fails for {tau} but {t} reverses"));
                }
            }
        }
    }
    Ok(format!("1000 elements, {taus} reversing involutions, {witnesses} witnesses verified, {failures} failures confirmed"))
}

fn criterion_2(ctx: &mut Ctx) -> Result<String, String> {
    let mut lengths = [0usize; 5];
    for _ in 0..500 {
        let n = ctx.rng.gen_range(1..=8);
        let g = ctx.gn(n);
        let mut alpha: Vec<Scalar> = g.alpha().iter().map(|c| c.representative().clone()).collect();
        let sum = alpha[..n - 1].iter().fold(Scalar::zero(), |a, b| &a + b);
        let k = ctx.rng.gen_range(0..2 * n as i64);
        alpha[n - 1] = &Scalar::from_ratio(k, 2 * n as i64) - &sum;
        let f = GnElement::new(&alpha, g.sigma().clone()).unwrap();
        if !f.a_morphism().unwrap().is_zero() {
            return Err(format!("construction bug: A({f}) != 0"));
        }
        let factors = factor_four_involutions(&f).map_err(|e| format!("{f}: {e}"))?;
        if factors.len() > 4 || !factors.iter().all(GnElement::is_involution) {
            return Err(format!("{f}: bad factor list"));
        }
        let product = factors
            .iter()
            .try_fold(GnElement::identity(n), |acc, x| acc.compose(x))
            .unwrap();
        if product != f {
            return Err(format!("{f}: factors do not recompose"));
        }
        lengths[factors.len()] += 1;
    }
    for k in 0..100 {
        let n = ctx.rng.gen_range(1..=8);
        let g = ctx.gn(n);
        let mut alpha: Vec<Scalar> = g.alpha().iter().map(|c| c.representative().clone()).collect();
        let sum = alpha.iter().fold(Scalar::zero(), |a, b| &a + b);
        let shift = if k % 2 == 0 {
            Scalar::from_ratio(1, 4 * n as i64)
        } else {
            mk(&ctx.table, q(0, 1), vec![(k % 3, q(1, 5))])
        };
        alpha[0] = &(&alpha[0] - &sum) + &shift;
        let f = GnElement::new(&alpha, g.sigma().clone()).unwrap();
        match factor_four_involutions(&f) {
            Err(Error::AObstruction(_)) => {}
            other => return Err(format!("{f}: expected the A-obstruction, got {other:?}")),
        }
    }
    Ok(format!("500 factorizations (by length {:?}), 100 obstructions", &lengths[1..]))
}

fn criterion_3(ctx: &mut Ctx) -> Result<String, String> {
    let eps = BigRational::from_integer(calibration().into());
    let mut tested = Vec::new();
    for _ in 0..500 {
        let (f, g) = (ctx.iet(true), ctx.iet(true));
        let fg = f.compose(&g).unwrap();
        let (sf, sg, sfg) = (saf(&f).unwrap(), saf(&g).unwrap(), saf(&fg).unwrap());
        if sfg != sf.clone() + sg.clone() {
            return Err(format!("not additive on {f} and {g}"));
        }
        tested.extend([sf, sg, sfg]);
    }
    for i in 0..SYMBOLS.len() {
        let b = ctx.sym(i).scale(&q(1, 3));
        let r = saf(&Iet::rotation(&b).unwrap()).unwrap();
        if r != SafTensor::wedge(&Scalar::one(), &b).scale(&eps) {
            return Err(format!("rotation by {b}: {r}"));
        }
        tested.push(r);
    }
    let perm = Permutation::parse("3 2 1", None).unwrap();
    for (l1, l2) in [
        (mk(&ctx.table, q(0, 1), vec![(2, q(1, 1))]), mk(&ctx.table, q(0, 1), vec![(1, q(1, 2))])),
        (mk(&ctx.table, q(1, 5), vec![(3, q(1, 1))]), mk(&ctx.table, q(1, 7), vec![(0, q(-1, 10))])),
        (mk(&ctx.table, q(1, 3), vec![]), mk(&ctx.table, q(0, 1), vec![(4, q(1, 1))])),
    ] {
        let l3 = &(&Scalar::one() - &l1) - &l2;
        let f = Iet::from_lengths(&[l1.clone(), l2.clone(), l3], &perm).unwrap();
        let value = saf(&f).unwrap();
        let expected = SafTensor::wedge(&(&l1 + &l2), &(&Scalar::one() - &l1)).scale(&eps);
        if value.wedge_normal_form().unwrap() != expected.wedge_normal_form().unwrap() {
            return Err(format!("3-IET {f}: {value} vs {expected}"));
        }
        tested.push(value);
    }
    for _ in 0..50 {
        let den = ctx.rng.gen_range(2..=9);
        let l1 = Scalar::from_ratio(ctx.rng.gen_range(1..den), den);
        let l2 = &Scalar::one() - &l1;
        let d1 = mk(&ctx.table, q(0, 1), vec![(ctx.rng.gen_range(0..5), q(1, 4 * den))]);
        let d2 = mk(&ctx.table, q(0, 1), vec![(ctx.rng.gen_range(0..5), q(1, 4 * den))]);
        let f = two_restricted_rotations(&l1, &d1, &d2).unwrap();
        let expected = (SafTensor::wedge(&l1, &d1) + SafTensor::wedge(&l2, &d2)).scale(&eps);
        let value = saf(&f).unwrap();
        if value != expected {
            return Err(format!("two-rotation map {f}: {value} vs {expected}"));
        }
        tested.push(value);
    }
    if let Some(bad) = tested.iter().find(|t| !t.symmetric_part().is_zero()) {
        return Err(format!("symmetric part of {bad} is nonzero"));
    }
    Ok(format!("epsilon = {}, {} tensors antisymmetric", calibration(), tested.len()))
}

fn criterion_4(ctx: &mut Ctx) -> Result<String, String> {
    let perm = Permutation::parse("3 2 1", None).unwrap();
    let mut periods = BTreeSet::new();
    let mut done = 0;
    while done < 50 {
        // (λ1 + λ2)/(1 − λ1) = c with c rational.
        let l1 = mk(&ctx.table, q(ctx.rng.gen_range(1..10), 40), vec![(ctx.rng.gen_range(0..5), q(1, ctx.rng.gen_range(4..=12)))]);
        let c = q(ctx.rng.gen_range(1..12), ctx.rng.gen_range(2..13));
        let l2 = &(&Scalar::one() - &l1).scale(&c) - &l1;
        let l3 = &(&Scalar::one() - &l1) - &l2;
        let positive = |x: &Scalar| x.signum().map(|o| o.is_gt()).unwrap_or(false);
        if !positive(&l1) || !positive(&l2) || !positive(&l3) {
            continue;
        }
        let f = Iet::from_lengths(&[l1, l2, l3], &perm).unwrap();
        let rep = three_iet_analysis(&f, 100_000).map_err(|e| e.to_string())?;
        if !rep.saf_zero {
            return Err(format!("{f}: SAF {} should vanish", rep.saf));
        }
        if rep.anomaly {
            return Err(format!("{f}: zero SAF but no period within budget"));
        }
        let inv = rep.involutions.as_ref().ok_or("missing factorization")?;
        if inv.factors.len() > 2 || inv.product().unwrap() != f || !inv.verify(&f, 100_000).unwrap() {
            return Err(format!("{f}: factorization does not verify"));
        }
        periods.insert(rep.period.unwrap());
        done += 1;
    }
    Ok(format!("50 three-IETs periodic, periods {periods:?}"))
}

fn criterion_5(ctx: &mut Ctx) -> Result<String, String> {
    let cases = [
        (1u64, ctx.sym(2), q(1, 3)),
        (2, ctx.sym(4).scale(&q(1, 2)), q(1, 5)),
        (3, ctx.sym(1).scale(&q(1, 8)), q(1, 7)),
    ];
    for (p, d1, r) in cases {
        let res = six_involutions_rr(p, &d1, &r, BUDGET).map_err(|e| format!("p = {p}: {e}"))?;
        let l1 = Scalar::from_ratio(p as i64, p as i64 + 1);
        let d2 = &Scalar::from_rational(r.clone()) - &d1.scale_int(p as i64);
        let f = two_restricted_rotations(&l1, &d1, &d2).unwrap();
        if res.factors.len() != 6 || res.kind != FactorKind::Involutions {
            return Err(format!("p = {p}: {} factors", res.factors.len()));
        }
        if !res.factors.iter().all(|g| g.is_involution().unwrap()) || res.product().unwrap() != f {
            return Err(format!("p = {p}: factors do not verify"));
        }
    }
    Ok("p = 1, 2, 3 each give 6 involutions".into())
}

/// A random periodic IET from towers with heights dividing 60.
fn random_tower_map(ctx: &mut Ctx) -> (Iet, u64) {
    const HEIGHTS: [u64; 12] = [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60];
    loop {
        let k = ctx.rng.gen_range(1..=4);
        let towers: Vec<(u64, i64)> = (0..k)
            .map(|_| (HEIGHTS[ctx.rng.gen_range(0..HEIGHTS.len())], ctx.rng.gen_range(1..=5)))
            .collect();
        let floors: u64 = towers.iter().map(|t| t.0).sum();
        if floors > 90 {
            continue;
        }
        let total: i64 = towers.iter().map(|(h, w)| *h as i64 * w).sum();
        let mut cells: Vec<(usize, u64)> = towers
            .iter()
            .enumerate()
            .flat_map(|(j, (h, _))| (0..*h).map(move |l| (j, l)))
            .collect();
        cells.shuffle(&mut ctx.rng);
        let mut start = std::collections::HashMap::new();
        let mut pos = 0i64;
        for &(j, l) in &cells {
            start.insert((j, l), pos);
            pos += towers[j].1;
        }
        let mut pieces: Vec<(i64, i64)> = cells
            .iter()
            .map(|&(j, l)| {
                let next = (l + 1) % towers[j].0;
                (start[&(j, l)], start[&(j, next)] - start[&(j, l)])
            })
            .collect();
        pieces.sort();
        let f = Iet::new(
            pieces.iter().map(|p| Scalar::from_ratio(p.0, total)).collect(),
            pieces.iter().map(|p| Scalar::from_ratio(p.1, total)).collect(),
        )
        .unwrap();
        let p = towers.iter().fold(1u64, |acc, t| acc.lcm(&t.0));
        return (f, p);
    }
}

fn criterion_6(ctx: &mut Ctx) -> Result<String, String> {
    let mut max_period = 0;
    for _ in 0..100 {
        let (f, p) = random_tower_map(ctx);
        let res = factor_periodic_two_involutions(&f, BUDGET).map_err(|e| format!("{f}: {e}"))?;
        if res.factors.len() > 2 || !res.factors.iter().all(|g| g.is_involution().unwrap()) {
            return Err(format!("{f}: factors are not involutions"));
        }
        if res.product().unwrap() != f || !res.verify(&f, BUDGET).unwrap() {
            return Err(format!("{f}: recomposition fails"));
        }
        if period(&f, BUDGET).unwrap() != Some(p) {
            return Err(format!("{f}: period differs from the tower lcm {p}"));
        }
        max_period = max_period.max(p);
    }
    Ok(format!("100 periodic maps, largest period {max_period}"))
}

fn check_finite_order(f: &Iet, h: &Iet) -> Result<u64, String> {
    let t = finite_order_reverser(f, h, BUDGET).map_err(|e| format!("{f} / {h}: {e}"))?;
    if t.compose(f).unwrap().compose(&t.inverse().unwrap()).unwrap() != f.inverse().unwrap() {
        return Err(format!("{t} does not reverse {f}"));
    }
    let o = period(&t, BUDGET).unwrap().ok_or(format!("{t} has no finite order"))?;
    if !t.power(o as i64).unwrap().is_identity() || !(o <= 2 || o % 4 == 0) {
        return Err(format!("{t} has order {o}"));
    }
    Ok(o)
}

fn criterion_7(ctx: &mut Ctx) -> Result<String, String> {
    let bs = builtin_action("bs11_flat", &ctx.table).map_err(|e| e.to_string())?;
    let a = bs.generator("a").unwrap().iet.clone();
    let b = bs.generator("b").unwrap().iet.clone();
    let mut orders = BTreeSet::new();
    orders.insert(check_finite_order(&a, &b)?);
    for _ in 0..50 {
        let n = ctx.rng.gen_range(1..=6);
        let (t1, t2) = (ctx.involution(n), ctx.involution(n));
        let f = t1.compose(&t2).unwrap();
        let s = ctx.rng.gen_range(0..4);
        let h = t1.compose(&ctx.central(n)).unwrap().compose(&f.power(s).unwrap()).unwrap();
        orders.insert(check_finite_order(&f.to_iet().unwrap(), &h.to_iet().unwrap())?);
    }
    Ok(format!("51 pairs, reverser orders {orders:?}"))
}

fn criterion_8(ctx: &mut Ctx) -> Result<String, String> {
    for name in ["bs11_flat", "bs11_minimal", "c1"] {
        let action = builtin_action(name, &ctx.table).map_err(|e| e.to_string())?;
        for (w, ok) in action.check_relations().unwrap() {
            if !ok {
                return Err(format!("{name}: relation {w} fails"));
            }
        }
    }
    for name in ["bs11_flat", "bs11_minimal"] {
        let action = builtin_action(name, &ctx.table).unwrap();
        match bs_faithfulness(&action, BUDGET).unwrap() {
            Faithfulness::Faithful => {}
            other => return Err(format!("{name}: {other:?}")),
        }
    }
    let minimal = builtin_action("bs11_minimal", &ctx.table).unwrap();
    match minimality_certificate(&minimal).unwrap() {
        Minimality::Certificate(c) if c.is_valid() => {}
        other => return Err(format!("bs11_minimal: {other:?}")),
    }
    let flat = builtin_action("bs11_flat", &ctx.table).unwrap();
    let expected = IntervalSet::from_intervals(vec![
        (Scalar::zero(), Scalar::from_ratio(1, 4)),
        (Scalar::from_ratio(3, 4), Scalar::one()),
    ])
    .unwrap();
    match minimality_certificate(&flat).unwrap() {
        Minimality::NotMinimalEvidence { invariant, .. } if invariant == expected => {}
        other => return Err(format!("bs11_flat: {other:?}")),
    }
    let c1 = builtin_action("c1", &ctx.table).unwrap();
    if !c1.eval_word(&Word::parse("a^2 b^2 a^-2 b^-2").unwrap()).unwrap().is_identity() {
        return Err("c1: a^2 and b^2 do not commute".into());
    }
    Ok("relations, faithfulness, minimality and [a^2, b^2] = id verified".into())
}

fn verify_components(f: &Iet, want_minimal: bool) -> Result<(usize, usize), String> {
    let d = decompose(f, 100_000).map_err(|e| format!("{f}: {e}"))?;
    let (mut periodic, mut minimal) = (0, 0);
    let mut union = IntervalSet::empty();
    for c in &d.components {
        union = union.union(&c.support).unwrap();
        if !c.support.is_invariant(f).unwrap() {
            return Err(format!("{f}: component {} is not invariant", c.support));
        }
        match &c.kind {
            ComponentKind::Periodic { period } => {
                if !c.support.fixed_by(&f.power(*period as i64).unwrap()).unwrap() {
                    return Err(format!("{f}: f^{period} is not the identity on {}", c.support));
                }
                periodic += 1;
            }
            ComponentKind::Minimal(cert) => {
                if !cert.is_valid() || !cert.verify(f, 100_000).unwrap() {
                    return Err(format!("{f}: minimal certificate on {} does not verify", c.support));
                }
                minimal += 1;
            }
            ComponentKind::Unresolved { .. } => return Err(format!("{f}: unresolved component {}", c.support)),
        }
    }
    if !union.is_full() {
        return Err(format!("{f}: components do not cover [0, 1)"));
    }
    if want_minimal && minimal == 0 {
        return Err(format!("{f}: no minimal component"));
    }
    if !want_minimal && minimal > 0 {
        return Err(format!("{f}: rational map with a minimal component"));
    }
    Ok((periodic, minimal))
}

fn criterion_9(ctx: &mut Ctx) -> Result<String, String> {
    let mut periodic = 0;
    for _ in 0..200 {
        let f = ctx.iet(false);
        periodic += verify_components(&f, false)?.0;
    }
    let mut minimal = 0;
    for k in 0..50 {
        let f = if k % 2 == 0 {
            let angle = mk(&ctx.table, q(ctx.rng.gen_range(0..5), 10), vec![(ctx.rng.gen_range(0..5), q(1, ctx.rng.gen_range(3..=6)))]);
            Iet::rotation(&angle).unwrap()
        } else {
            let den = ctx.rng.gen_range(2..=6);
            let l1 = Scalar::from_ratio(ctx.rng.gen_range(1..den), den);
            let d1 = mk(&ctx.table, q(0, 1), vec![(ctx.rng.gen_range(0..5), q(1, 3 * den))]);
            let d2 = mk(&ctx.table, q(0, 1), vec![(ctx.rng.gen_range(0..5), q(1, 3 * den))]);
            two_restricted_rotations(&l1, &d1, &d2).unwrap()
        };
        minimal += verify_components(&f, true)?.1;
    }
    Ok(format!("200 rational maps ({periodic} periodic components), 50 symbolic maps ({minimal} minimal components)"))
}

fn criterion_10(ctx: &mut Ctx) -> Result<String, String> {
    for _ in 0..200 {
        let n = ctx.rng.gen_range(1..=8);
        let (t1, t2) = (ctx.involution(n), ctx.involution(n));
        let f = t1.compose(&t2).unwrap();
        let s = ctx.rng.gen_range(0..5);
        let h = t1.compose(&ctx.central(n)).unwrap().compose(&f.power(s).unwrap()).unwrap();
        if h.is_involution() || !h.reverses(&f).unwrap() {
            return Err(format!("construction bug for {f}"));
        }
        let t = strengthen_reverser(&f, &h).map_err(|e| format!("{f} / {h}: {e}"))?;
        if !t.is_involution() || !t.reverses(&f).unwrap() {
            return Err(format!("{t} is not an involutive reverser of {f}"));
        }
    }
    Ok("200 non-involutive reversers strengthened".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Ctx) -> Result<String, String>); 10] = [
        ("strong reversibility round trip", criterion_1),
        ("four-involution factorization in G_n", criterion_2),
        ("SAF invariant", criterion_3),
        ("zero-SAF 3-IETs are periodic", criterion_4),
        ("six involutions for two-rotation maps", criterion_5),
        ("periodic maps are two involutions", criterion_6),
        ("finite-order reversers", criterion_7),
        ("BS(1,-1) and C1 examples", criterion_8),
        ("decomposition soundness", criterion_9),
        ("strengthening reversers", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let mut ctx = Ctx::new(0x5eed + k as u64);
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut ctx)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
