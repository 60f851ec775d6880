//! `iet-lab`: command-line front end for exact IET computations.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when the
//! requested object provably does not exist.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use iet_core::actions::{
    bounded_freeness, bs_faithfulness, builtin_source, minimality_certificate, Faithfulness, Freeness,
    MarkedAction, Minimality, BUILTIN_NAMES,
};
use iet_core::gn::{find_strong_reversers, strengthen_reverser, strong_reversibility_by, ChoicePolicy};
use iet_core::iet::{bp_growth, decompose, normalize_restricted_rotations, period};
use iet_core::revfact::{
    factor_periodic_two_involutions, factor_reversible_four_involutions, factor_two_periodic,
    finite_order_reverser, rr_non_reversibility_certificate, six_involutions_rr, three_iet_analysis,
    FactorizationResult,
};
use iet_core::saf::saf;
use iet_core::scalar::{parse_rational, parse_scalar, q_rank};
use iet_core::text::{symbol_lines, Object, Workspace};
use iet_core::{Error, GnElement, Iet, Permutation, SymbolTable};

#[derive(Parser)]
#[command(name = "iet-lab", version, about = "Exact computations with interval exchange transformations")]
struct Cli {
    /// Output style; `canonical` re-parses as an input file.
    #[arg(long, value_enum, default_value_t = Emit::Human, global = true)]
    emit: Emit,
    /// Iteration and induction budget.
    #[arg(long, default_value_t = 10_000, global = true)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Human,
    Canonical,
}

/// An operand: `PATH` (last binding of the file) or `PATH@NAME`; `-` is stdin.
#[derive(Args)]
struct One {
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Composition `f1 ∘ f2 ∘ …` (the rightmost map acts first).
    Compose {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<String>,
    },
    Inverse(One),
    Power {
        input: String,
        #[arg(allow_negative_numbers = true)]
        k: i64,
    },
    /// Image of a point.
    Eval { input: String, point: String },
    /// Order of a `G_n` element, or the period of an IET.
    Order(One),
    Period(One),
    /// Scissors-congruence invariant.
    Saf(One),
    /// Periodic and minimal components.
    Decompose(One),
    /// Lists strong reversers of a `G_n` element, or checks a given one.
    ReverseCheck {
        input: String,
        /// Candidate reverser to verify.
        #[arg(long)]
        by: Option<String>,
    },
    /// Involutive reversers with a prescribed block permutation.
    ReverseConstruct {
        input: String,
        /// Block involution, e.g. "4 3 2 1" or "(1 4)(2 3)"; all reversing
        /// involutions are tried when omitted.
        #[arg(long)]
        tau: Option<String>,
        /// Sample several admissible choices per orbit.
        #[arg(long)]
        enumerate: bool,
    },
    /// Replaces a reverser by an involutive (or order 4k) one.
    Strengthen { f: String, h: String },
    #[command(subcommand)]
    Factor(Factor),
    /// SAF, periodicity and involution factorization of a 3-IET.
    ThreeIet(One),
    /// Rank over ℚ of the angles (with 1) of a `G_n` element or the
    /// translations of an IET.
    Rank(One),
    /// Breakpoint counts of `f^n` along the orbit of a point.
    BpGrowth {
        input: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Conjugates a product of restricted rotations into some `G_n`.
    NormalizeRr(One),
    /// Checks the relations of an action file.
    Relations(One),
    /// Faithfulness of a `BS(1,-1)` action with generators `a`, `b`.
    Faithful(One),
    /// Searches for fixed points of `a^p b^q`.
    Free {
        input: String,
        #[arg(long, default_value_t = 5)]
        bound: i64,
    },
    /// Minimality certificate of an action inside some `G_n`.
    Minimal(One),
    /// Prints a built-in action file.
    Examples {
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum Factor {
    /// A periodic IET as two involutions.
    TwoInvolutions(One),
    /// Four involutions: `G_n` elements with vanishing A, or IETs with a
    /// finite-order reverser `h`.
    FourInvolutions { f: String, h: Option<String> },
    /// Six involutions for a product of two restricted rotations with
    /// lengths p/(p+1), 1/(p+1) and angles d1, r - p·d1.
    SixInvolutions {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        r: String,
        /// Files declaring the symbols used in `d1`.
        symbols: Vec<String>,
    },
    /// Two periodic maps from a finite-order reverser `h`.
    TwoPeriodic { f: String, h: String },
}

/// A mathematical obstruction found by the CLI itself (exit code 2).
#[derive(Debug)]
struct Obstruction(String);

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Obstruction {}

fn obstruction(msg: impl Into<String>) -> anyhow::Error {
    Obstruction(msg.into()).into()
}

/// Reads operands into one growing symbol table.
struct Loader {
    table: SymbolTable,
    stdin: Option<String>,
}

impl Loader {
    fn new() -> Self {
        Loader {
            table: SymbolTable::new(),
            stdin: None,
        }
    }

    fn source(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            if self.stdin.is_none() {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
                self.stdin = Some(buf);
            }
            return Ok(self.stdin.clone().unwrap());
        }
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }

    fn workspace(&mut self, path: &str) -> Result<Workspace> {
        let src = self.source(path)?;
        let ws = Workspace::parse_with(&src, self.table.clone()).with_context(|| format!("in {path}"))?;
        self.table = ws.table.clone();
        Ok(ws)
    }

    fn object(&mut self, operand: &str) -> Result<Object> {
        let (path, name) = match operand.rsplit_once('@') {
            Some((p, n)) if !p.is_empty() => (p, Some(n)),
            _ => (operand, None),
        };
        let ws = self.workspace(path)?;
        match name {
            Some(n) => ws.get(n).cloned().ok_or_else(|| anyhow!("{path} has no binding `{n}`")),
            None => ws.last().cloned().ok_or_else(|| anyhow!("{path} binds no object")),
        }
    }

    fn iet(&mut self, operand: &str) -> Result<Iet> {
        Ok(self.object(operand)?.to_iet()?)
    }

    fn gn(&mut self, operand: &str) -> Result<GnElement> {
        match self.object(operand)? {
            Object::Gn(g) => Ok(g),
            Object::Iet(_) => bail!("{operand}: expected a `gn` element"),
        }
    }

    fn action(&mut self, operand: &str) -> Result<MarkedAction> {
        let ws = self.workspace(operand)?;
        let action = ws.action()?;
        if action.generators.is_empty() {
            bail!("{operand} declares no generators (use `gen name = …`)");
        }
        Ok(action)
    }
}

struct Out {
    emit: Emit,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Human note, or a comment line in canonical mode.
    fn note(&mut self, s: impl AsRef<str>) {
        match self.emit {
            Emit::Human => self.line(s),
            Emit::Canonical => {
                for l in s.as_ref().lines() {
                    self.line(format!("# {l}"));
                }
            }
        }
    }

    fn objects(&mut self, table: &SymbolTable, items: &[(&str, Object)]) {
        if self.emit == Emit::Canonical {
            self.text.push_str(&symbol_lines(table));
        }
        for (name, obj) in items {
            self.line(format!("{name} = {obj}"));
        }
    }

    fn factorization(&mut self, table: &SymbolTable, res: &FactorizationResult) {
        if self.emit == Emit::Canonical {
            self.text.push_str(&symbol_lines(table));
        }
        self.line(res.to_string());
    }
}

/// `G_n` if every operand is one with a common `n`.
fn all_gn(objs: &[Object]) -> Option<Vec<GnElement>> {
    let gs: Vec<GnElement> = objs.iter().filter_map(|o| o.as_gn().cloned()).collect();
    (gs.len() == objs.len() && gs.iter().all(|g| g.n() == gs[0].n())).then_some(gs)
}

fn run(cli: Cli) -> Result<String> {
    let mut ld = Loader::new();
    let mut out = Out {
        emit: cli.emit,
        text: String::new(),
    };
    let budget = cli.budget;
    match cli.command {
        Command::Compose { inputs } => {
            let objs = inputs.iter().map(|s| ld.object(s)).collect::<Result<Vec<_>>>()?;
            let result = match all_gn(&objs) {
                Some(gs) => {
                    let mut acc = gs[0].clone();
                    for g in &gs[1..] {
                        acc = acc.compose(g)?;
                    }
                    Object::Gn(acc)
                }
                None => {
                    let mut acc = objs[0].to_iet()?;
                    for o in &objs[1..] {
                        acc = acc.compose(&o.to_iet()?)?;
                    }
                    Object::Iet(acc)
                }
            };
            out.objects(&ld.table, &[("result", result)]);
        }
        Command::Inverse(One { input }) => {
            let result = match ld.object(&input)? {
                Object::Gn(g) => Object::Gn(g.inverse()?),
                Object::Iet(f) => Object::Iet(f.inverse()?),
            };
            out.objects(&ld.table, &[("result", result)]);
        }
        Command::Power { input, k } => {
            let result = match ld.object(&input)? {
                Object::Gn(g) => Object::Gn(g.power(k)?),
                Object::Iet(f) => Object::Iet(f.power(k)?),
            };
            out.objects(&ld.table, &[("result", result)]);
        }
        Command::Eval { input, point } => {
            let f = ld.iet(&input)?;
            let x = parse_scalar(&point, &ld.table).context("point")?;
            let y = f.evaluate(&x)?;
            match out.emit {
                Emit::Human => out.line(format!("f({x}) = {y}")),
                Emit::Canonical => out.line(y.to_string()),
            }
        }
        Command::Order(One { input }) => match ld.object(&input)? {
            Object::Gn(g) => {
                let o = g.order()?;
                match out.emit {
                    Emit::Human => out.line(format!("order = {o}")),
                    Emit::Canonical => out.line(o.to_string()),
                }
            }
            Object::Iet(f) => period_report(&mut out, &f, budget)?,
        },
        Command::Period(One { input }) => {
            let f = ld.iet(&input)?;
            period_report(&mut out, &f, budget)?;
        }
        Command::Saf(One { input }) => {
            let t = saf(&ld.iet(&input)?)?;
            match out.emit {
                Emit::Human if t.is_zero() => out.line("SAF = 0"),
                Emit::Human => out.line(format!("SAF = {t}")),
                Emit::Canonical => out.line(t.to_string()),
            }
        }
        Command::Decompose(One { input }) => {
            let f = ld.iet(&input)?;
            let d = decompose(&f, budget)?;
            out.text.push_str(&d.to_string());
            if !d.is_resolved() {
                out.note(format!("some components are unresolved within budget {budget}"));
            }
        }
        Command::ReverseCheck { input, by } => reverse_check(&mut ld, &mut out, &input, by.as_deref())?,
        Command::ReverseConstruct { input, tau, enumerate } => {
            let f = ld.gn(&input)?;
            let policy = if enumerate {
                ChoicePolicy::Enumerate
            } else {
                ChoicePolicy::Default
            };
            let taus = match tau {
                Some(t) => vec![Permutation::parse(&t, Some(f.n())).context("--tau")?],
                None => f.sigma().reversing_involutions(),
            };
            let mut witnesses = Vec::new();
            let mut failures = Vec::new();
            for tau in taus {
                let report = strong_reversibility_by(&f, &tau, policy)?;
                match report.failing_orbit() {
                    Some(o) => failures.push(format!(
                        "tau = {}: reversibility condition fails on orbit {:?} (value {})",
                        tau.cycle_string(),
                        o.orbit,
                        o.condition_value
                    )),
                    None => witnesses.extend(report.witnesses),
                }
            }
            for msg in &failures {
                out.note(msg);
            }
            if witnesses.is_empty() {
                return Err(obstruction(format!(
                    "no involutive reverser with the requested block permutation\n{}",
                    failures.join("\n")
                )));
            }
            let named: Vec<String> = (1..=witnesses.len()).map(|k| format!("t{k}")).collect();
            let items: Vec<(&str, Object)> =
                named.iter().map(String::as_str).zip(witnesses.into_iter().map(Object::Gn)).collect();
            out.objects(&ld.table, &items);
        }
        Command::Strengthen { f, h } => {
            let objs = vec![ld.object(&f)?, ld.object(&h)?];
            let t = match all_gn(&objs) {
                Some(gs) => Object::Gn(strengthen_reverser(&gs[0], &gs[1])?),
                None => Object::Iet(finite_order_reverser(&objs[0].to_iet()?, &objs[1].to_iet()?, budget)?),
            };
            out.objects(&ld.table, &[("t", t)]);
        }
        Command::Factor(kind) => factor(&mut ld, &mut out, kind, budget)?,
        Command::ThreeIet(One { input }) => {
            let f = ld.iet(&input)?;
            let rep = three_iet_analysis(&f, budget)?;
            out.note(format!("SAF = {}", rep.saf));
            match rep.period {
                Some(p) => out.note(format!("periodic with period {p}")),
                None if rep.anomaly => out.note(format!(
                    "anomaly: SAF vanishes but no period was found within budget {budget}"
                )),
                None => out.note("not periodic (nonzero SAF)"),
            }
            if let Some(res) = &rep.involutions {
                out.factorization(&ld.table, res);
            }
        }
        Command::Rank(One { input }) => {
            let r = match ld.object(&input)? {
                Object::Gn(g) => g.rank(),
                Object::Iet(f) => q_rank(f.translations()),
            };
            match out.emit {
                Emit::Human => out.line(format!("rank = {r}")),
                Emit::Canonical => out.line(r.to_string()),
            }
        }
        Command::BpGrowth { input, at, n } => {
            let f = ld.iet(&input)?;
            let x = parse_scalar(&at, &ld.table).context("--at")?;
            let g = bp_growth(&f, &x, n)?;
            let counts: Vec<String> = g.counts.iter().map(usize::to_string).collect();
            out.line(format!("counts = {}", counts.join(", ")));
            out.line(format!("estimate = {}", g.estimate));
        }
        Command::NormalizeRr(One { input }) => {
            let f = ld.iet(&input)?;
            let (r, g) = normalize_restricted_rotations(&f)?;
            out.note(format!("R = {r}"));
            out.objects(&ld.table, &[("normalized", Object::Gn(g))]);
        }
        Command::Relations(One { input }) => {
            let action = ld.action(&input)?;
            let results = action.check_relations()?;
            if results.is_empty() {
                out.line("no relations declared");
            }
            let failed: Vec<String> = results.iter().filter(|r| !r.1).map(|r| r.0.to_string()).collect();
            for (w, ok) in &results {
                out.line(format!("{w}: {}", if *ok { "holds" } else { "fails" }));
            }
            if !failed.is_empty() {
                return Err(obstruction(format!(
                    "{}relation(s) not satisfied: {}",
                    out.text,
                    failed.join("; ")
                )));
            }
            if !results.is_empty() {
                out.line("all relations hold");
            }
        }
        Command::Faithful(One { input }) => {
            let action = ld.action(&input)?;
            match bs_faithfulness(&action, budget)? {
                Faithfulness::Faithful => out.line("faithful: a and b have infinite order"),
                Faithfulness::NotFaithful(w) => return Err(obstruction(format!("not faithful: {w}"))),
                Faithfulness::Unknown(why) => out.line(format!("unknown: {why}")),
            }
        }
        Command::Free { input, bound } => {
            let action = ld.action(&input)?;
            match bounded_freeness(&action, bound)? {
                Freeness::NoFixedPointFound { words_checked } => out.line(format!(
                    "no fixed point among {words_checked} words a^p b^q with |p|, |q| <= {bound}"
                )),
                Freeness::FixedPoint { word, point } => {
                    return Err(obstruction(format!("not free: {word} fixes {point}")))
                }
            }
        }
        Command::Minimal(One { input }) => {
            let action = ld.action(&input)?;
            match minimality_certificate(&action)? {
                Minimality::Certificate(c) => {
                    out.line(format!("minimal: transitive on {} blocks", c.n));
                    let mut s = String::new();
                    for (w, a) in c.stabilizer_generators.iter().zip(&c.stabilizer_angles) {
                        let _ = writeln!(s, "  {w} rotates block 1 by {a}");
                    }
                    out.text.push_str(&s);
                    out.line(format!("stabilizer angle rank {} >= 2", c.angle_rank));
                }
                Minimality::NotMinimalEvidence { invariant, reason } => {
                    return Err(obstruction(format!("not minimal: {reason}; invariant set {invariant}")))
                }
            }
        }
        Command::Examples { name } => match name {
            None => {
                for n in BUILTIN_NAMES {
                    out.line(n);
                }
            }
            Some(n) => {
                let src = builtin_source(&n)
                    .ok_or_else(|| anyhow!("unknown example `{n}` (try one of {})", BUILTIN_NAMES.join(", ")))?;
                out.text.push_str(&src);
            }
        },
    }
    Ok(out.text)
}

fn period_report(out: &mut Out, f: &Iet, budget: u64) -> Result<()> {
    match period(f, budget)? {
        Some(p) => match out.emit {
            Emit::Human => out.line(format!("period = {p}")),
            Emit::Canonical => out.line(p.to_string()),
        },
        None => out.line(format!("no period found within budget {budget}")),
    }
    Ok(())
}

fn reverse_check(ld: &mut Loader, out: &mut Out, input: &str, by: Option<&str>) -> Result<()> {
    if let Some(by) = by {
        let f = ld.iet(input)?;
        let t = ld.iet(by)?;
        let reverses = t.compose(&f)?.compose(&t.inverse()?)? == f.inverse()?;
        if !reverses {
            return Err(obstruction("t f t^-1 differs from f^-1: not a reverser"));
        }
        let kind = if t.is_involution()? { "involutive" } else { "non-involutive" };
        out.line(format!("{kind} reverser verified"));
        return Ok(());
    }
    let obj = ld.object(input)?;
    let Some(f) = obj.as_gn() else {
        let f = obj.to_iet()?;
        return match rr_non_reversibility_certificate(&f) {
            Ok(cert) => Err(obstruction(format!("not reversible:\n{cert}"))),
            Err(e) => Err(anyhow!(
                "{e}; strong reversibility is decided for `gn` elements, pass one or use --by"
            )),
        };
    };
    let reports = find_strong_reversers(f)?;
    let mut found = false;
    let mut failures = Vec::new();
    for r in &reports {
        let tau = r.reverser_sigma.cycle_string();
        match r.failing_orbit() {
            None => {
                found = true;
                out.note(format!("tau = {tau}: strongly reversible, {} witness(es)", r.witnesses.len()));
                for t in &r.witnesses {
                    out.note(format!("  {t}"));
                }
            }
            Some(o) => failures.push(format!(
                "tau = {tau}: reversibility condition fails on orbit {:?} (value {})",
                o.orbit, o.condition_value
            )),
        }
    }
    if !found {
        let mut msg = String::from("not strongly reversible");
        for m in failures {
            msg.push('\n');
            msg.push_str(&m);
        }
        return Err(obstruction(msg));
    }
    for m in failures {
        out.note(m);
    }
    Ok(())
}

fn factor(ld: &mut Loader, out: &mut Out, kind: Factor, budget: u64) -> Result<()> {
    match kind {
        Factor::TwoInvolutions(One { input }) => {
            let f = ld.iet(&input)?;
            let res = factor_periodic_two_involutions(&f, budget)?;
            out.factorization(&ld.table, &res);
        }
        Factor::FourInvolutions { f, h } => {
            let obj = ld.object(&f)?;
            match (obj.as_gn(), h) {
                (Some(g), None) => {
                    let factors = iet_core::gn::factor_four_involutions(g)?;
                    out.note(format!("{} involutions", factors.len()));
                    let names: Vec<String> = (1..=factors.len()).map(|k| format!("f{k}")).collect();
                    let items: Vec<(&str, Object)> =
                        names.iter().map(String::as_str).zip(factors.into_iter().map(Object::Gn)).collect();
                    out.objects(&ld.table, &items);
                }
                (_, Some(h)) => {
                    let h = ld.iet(&h)?;
                    let res = factor_reversible_four_involutions(&obj.to_iet()?, &h, budget)?;
                    out.factorization(&ld.table, &res);
                }
                (None, None) => bail!("an IET needs a finite-order reverser: factor four-involutions F H"),
            }
        }
        Factor::SixInvolutions { p, d1, r, symbols } => {
            for s in &symbols {
                ld.workspace(s)?;
            }
            let d1 = parse_scalar(&d1, &ld.table).context("--d1")?;
            let r = parse_rational(&r).context("--r")?;
            let res = six_involutions_rr(p, &d1, &r, budget)?;
            out.factorization(&ld.table, &res);
        }
        Factor::TwoPeriodic { f, h } => {
            let (f, h) = (ld.iet(&f)?, ld.iet(&h)?);
            let res = factor_two_periodic(&f, &h, budget)?;
            out.factorization(&ld.table, &res);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let math = e.downcast_ref::<Obstruction>().is_some()
                || e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_obstruction));
            if math {
                println!("obstruction: {e:#}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        }
    }
}
