//! Finitely presented groups acting by interval exchanges: words, relations,
//! faithfulness and freeness checks for `BS(1, -1)`, minimality
//! certificates for actions inside one `G_n`, and the built-in examples.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gn::{strengthen_reverser, GnElement, Order};
use crate::iet::{
    conjugate_by_pl, decompose, detect_restricted_rotation_product, normalize_restricted_rotations, period,
    ComponentKind, Iet, IntervalSet, PlMap,
};
use crate::scalar::{q_rank, Scalar, SymbolTable};
use crate::text::{Object, Workspace};

/// A group word: a product of generator powers, read left to right as
/// maps composed right first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word {
    pub letters: Vec<(String, i64)>,
}

impl Word {
    pub fn new(letters: Vec<(String, i64)>) -> Self {
        let mut w = Word { letters: Vec::new() };
        for (g, e) in letters {
            w.push(&g, e);
        }
        w
    }

    fn push(&mut self, g: &str, e: i64) {
        if e == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some((last, k)) if last == g => {
                *k += e;
                if *k == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push((g.to_string(), e)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|(g, e)| (g.clone(), -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(other.letters.iter()).cloned().collect())
    }

    /// Parses `b a b^-1 a`, `a^2 b^-3` or `lhs = rhs` (read as `lhs rhs⁻¹`).
    /// `1` denotes the empty word.
    pub fn parse(text: &str) -> Result<Word> {
        if let Some(eq) = text.find('=') {
            let lhs = Word::parse(&text[..eq])?;
            let rhs = Word::parse(&text[eq + 1..]).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column: column + text[..=eq].chars().count(),
                    message,
                },
                other => other,
            })?;
            return Ok(lhs.concat(&rhs.inverse()));
        }
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split(' ') {
            let column = text[..offset].chars().count() + 1;
            offset += token.len() + 1;
            let token = token.trim();
            if token.is_empty() || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::parse(column, format!("bad exponent in `{token}`")))?;
                    (n, e)
                }
                None => (token, 1),
            };
            if !crate::scalar::is_identifier(name) {
                return Err(Error::parse(column, format!("`{name}` is not a generator name")));
            }
            letters.push((name.to_string(), exp));
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub iet: Iet,
    /// Present when the generator was given as a `G_n` element.
    pub gn: Option<GnElement>,
}

/// Generators acting by IET, plus relations expected to hold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkedAction {
    pub generators: Vec<Generator>,
    pub relations: Vec<Word>,
}

impl MarkedAction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, object: Object) -> Result<()> {
        let generator = Generator {
            name: name.to_string(),
            iet: object.to_iet()?,
            gn: object.as_gn().cloned(),
        };
        match self.generators.iter_mut().find(|g| g.name == name) {
            Some(g) => *g = generator,
            None => self.generators.push(generator),
        }
        Ok(())
    }

    pub fn add_relation(&mut self, word: Word) {
        self.relations.push(word);
    }

    pub fn generator(&self, name: &str) -> Result<&Generator> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnboundGenerator(name.to_string()))
    }

    /// The map of a word (`x y` is `x ∘ y`).
    pub fn eval_word(&self, word: &Word) -> Result<Iet> {
        let mut out = Iet::identity();
        for (name, e) in &word.letters {
            let g = self.generator(name)?;
            out = out.compose(&g.iet.power(*e)?)?;
        }
        Ok(out)
    }

    /// Whether each relation evaluates to the identity.
    pub fn check_relations(&self) -> Result<Vec<(Word, bool)>> {
        self.relations
            .iter()
            .map(|w| Ok((w.clone(), self.eval_word(w)?.is_identity())))
            .collect()
    }

    fn order_of(&self, name: &str, budget: u64) -> Result<GeneratorOrder> {
        let g = self.generator(name)?;
        if let Some(x) = &g.gn {
            return Ok(match x.order()? {
                Order::Finite(k) => GeneratorOrder::Finite(k.to_string()),
                Order::Infinite => GeneratorOrder::Infinite,
            });
        }
        Ok(match period(&g.iet, budget)? {
            Some(p) => GeneratorOrder::Finite(p.to_string()),
            None => GeneratorOrder::Unknown,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum GeneratorOrder {
    Finite(String),
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Faithfulness {
    Faithful,
    NotFaithful(String),
    /// An order could not be decided within the budget.
    Unknown(String),
}

/// Faithfulness of a `BS(1, -1)` action with generators `a`, `b`: the
/// action is faithful iff both generators have infinite order.
pub fn bs_faithfulness(action: &MarkedAction, budget: u64) -> Result<Faithfulness> {
    let relation = Word::parse("b a b^-1 a")?;
    if !action.eval_word(&relation)?.is_identity() {
        return Err(Error::RelationNotSatisfied("b a b^-1 = a^-1".into()));
    }
    let mut unknown = Vec::new();
    for (name, power) in [("a", 1), ("b", 2)] {
        match action.order_of(name, budget)? {
            GeneratorOrder::Finite(k) => {
                let witness = if power == 1 {
                    format!("{name}^{k} = id")
                } else {
                    format!("{name} has finite order {k}")
                };
                return Ok(Faithfulness::NotFaithful(witness));
            }
            GeneratorOrder::Infinite => {}
            GeneratorOrder::Unknown => unknown.push(name),
        }
    }
    if unknown.is_empty() {
        Ok(Faithfulness::Faithful)
    } else {
        Ok(Faithfulness::Unknown(format!(
            "no period of {} found within {budget} steps",
            unknown.join(", ")
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    NoFixedPointFound { words_checked: usize },
    FixedPoint { word: Word, point: Scalar },
}

/// Looks for a fixed point of some `a^p b^q` with `|p|, |q| ≤ bound`, not
/// both zero. An IET fixes a point iff one of its intervals has translation
/// 0, so each word is decided exactly.
pub fn bounded_freeness(action: &MarkedAction, bound: i64) -> Result<Freeness> {
    let names: Vec<&str> = action.generators.iter().take(2).map(|g| g.name.as_str()).collect();
    let (a, b) = match names.as_slice() {
        [a, b] => (*a, *b),
        [a] => (*a, *a),
        _ => return Err(Error::InvalidArgument("the action has no generators".into())),
    };
    let mut words = Vec::new();
    for total in 1..=2 * bound {
        for p in -bound..=bound {
            let rest = total - p.abs();
            if rest < 0 || rest > bound {
                continue;
            }
            for q in if rest == 0 { vec![0] } else { vec![-rest, rest] } {
                words.push(Word::new(vec![(a.to_string(), p), (b.to_string(), q)]));
            }
        }
    }
    words.dedup();
    let mut checked = 0;
    for w in words {
        if w.is_empty() {
            continue;
        }
        checked += 1;
        let map = action.eval_word(&w)?;
        let fixed = map.pieces().find(|(_, _, t)| t.is_zero()).map(|(s, _, _)| s.clone());
        if let Some(point) = fixed {
            return Ok(Freeness::FixedPoint { word: w, point });
        }
    }
    Ok(Freeness::NoFixedPointFound { words_checked: checked })
}

/// Evidence that an action inside `G_n` is minimal: the block permutations
/// act transitively and the stabilizer of block 1 rotates it by a dense
/// subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityCertificate {
    pub n: usize,
    pub transitive: bool,
    pub stabilizer_generators: Vec<Word>,
    pub stabilizer_angles: Vec<Scalar>,
    /// `q_rank` of the stabilizer angles.
    pub angle_rank: usize,
}

impl MinimalityCertificate {
    pub fn is_valid(&self) -> bool {
        self.transitive && self.angle_rank >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimality {
    Certificate(MinimalityCertificate),
    /// An invariant proper subset, or a finite angle group.
    NotMinimalEvidence { invariant: IntervalSet, reason: String },
}

fn common_gn(action: &MarkedAction) -> Result<Vec<(String, GnElement)>> {
    if action.generators.is_empty() {
        return Err(Error::InvalidArgument("the action has no generators".into()));
    }
    if action.generators.iter().all(|g| g.gn.is_some()) {
        let n = action.generators[0].gn.as_ref().unwrap().n();
        if action.generators.iter().all(|g| g.gn.as_ref().unwrap().n() == n) {
            return Ok(action
                .generators
                .iter()
                .map(|g| (g.name.clone(), g.gn.clone().unwrap()))
                .collect());
        }
    }
    let mut last = None;
    for n in 1..=64 {
        match action
            .generators
            .iter()
            .map(|g| GnElement::from_iet(&g.iet, n).map(|x| (g.name.clone(), x)))
            .collect::<Result<Vec<_>>>()
        {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

pub fn minimality_certificate(action: &MarkedAction) -> Result<Minimality> {
    let gens = common_gn(action)?;
    let n = gens[0].1.n();
    // Spanning tree of the orbit of block 0: transversal elements and words.
    let mut transversal: BTreeMap<usize, (GnElement, Word)> = BTreeMap::new();
    transversal.insert(0, (GnElement::identity(n), Word::default()));
    let mut queue = vec![0usize];
    let mut letters = Vec::new();
    for (name, g) in &gens {
        letters.push((Word::new(vec![(name.clone(), 1)]), g.clone()));
        letters.push((Word::new(vec![(name.clone(), -1)]), g.inverse()?));
    }
    while let Some(j) = queue.pop() {
        let (t, w) = transversal[&j].clone();
        for (lw, g) in &letters {
            let k = g.sigma().apply0(j);
            if !transversal.contains_key(&k) {
                transversal.insert(k, (g.compose(&t)?, lw.concat(&w)));
                queue.push(k);
            }
        }
    }
    if transversal.len() < n {
        let parts = transversal
            .keys()
            .map(|&j| (Scalar::from_ratio(j as i64, n as i64), Scalar::from_ratio(j as i64 + 1, n as i64)))
            .collect();
        return Ok(Minimality::NotMinimalEvidence {
            invariant: IntervalSet::from_intervals(parts)?,
            reason: format!("blocks {:?} form an invariant set", transversal.keys().map(|j| j + 1).collect::<Vec<_>>()),
        });
    }
    let mut words = Vec::new();
    let mut angles = Vec::new();
    for (j, (t, w)) in &transversal {
        for (lw, g) in letters.iter().step_by(2) {
            let k = g.sigma().apply0(*j);
            let (tk, wk) = &transversal[&k];
            let s = tk.inverse()?.compose(g)?.compose(t)?;
            debug_assert_eq!(s.sigma().apply0(0), 0);
            let word = wk.inverse().concat(lw).concat(w);
            let angle = s.alpha()[0].representative().clone();
            if !word.is_empty() && !angles.contains(&angle) {
                words.push(word);
                angles.push(angle);
            }
        }
    }
    let rank = q_rank(&angles);
    let cert = MinimalityCertificate {
        n,
        transitive: true,
        stabilizer_generators: words,
        stabilizer_angles: angles,
        angle_rank: rank,
    };
    if cert.is_valid() {
        Ok(Minimality::Certificate(cert))
    } else {
        Ok(Minimality::NotMinimalEvidence {
            invariant: IntervalSet::full(),
            reason: format!("stabilizer angles have rank {rank}, so orbits are finite"),
        })
    }
}

/// Output of [`normalize_free_bs_action`]: `F = g f g⁻¹` and `H = g h g⁻¹`
/// with `g = R ∘ E`.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub r: PlMap,
    pub e: Iet,
    pub power: u64,
    pub f: GnElement,
    pub h: GnElement,
}

/// Conjugates a free `BS(1, -1)` action `⟨f, h⟩` into some `G_n`.
///
/// Finds the least `p` for which `f^p` splits into minimal restricted
/// rotations, normalizes those blocks to equal length and conjugates `f`
/// and `h` along.
pub fn normalize_free_bs_action(f: &Iet, h: &Iet, budget: u64) -> Result<Normalization> {
    if h.compose(f)?.compose(&h.inverse()?)? != f.inverse()? {
        return Err(Error::NotAReverser("h f h^-1 differs from f^-1".into()));
    }
    let mut action = MarkedAction::new();
    action.bind("a", Object::Iet(f.clone()))?;
    action.bind("b", Object::Iet(h.clone()))?;
    if let Freeness::FixedPoint { word, point } = bounded_freeness(&action, 5)? {
        return Err(Error::FreenessUnverified(format!("{word} fixes {point}")));
    }
    let max_power = budget.clamp(1, 64);
    let mut last_err = None;
    for p in 1..=max_power {
        let fp = f.power(p as i64)?;
        if detect_restricted_rotation_product(&fp).is_err() {
            continue;
        }
        let d = decompose(&fp, budget)?;
        if let Some(c) = d.components.iter().find(|c| matches!(c.kind, ComponentKind::Unresolved { .. })) {
            return Err(Error::UnresolvedComponent(c.support.to_string()));
        }
        if !d.components.iter().all(|c| matches!(c.kind, ComponentKind::Minimal(_))) {
            continue;
        }
        let (r, _) = match normalize_restricted_rotations(&fp) {
            Ok(x) => x,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let n = detect_restricted_rotation_product(&fp)?.len();
        let big_f = GnElement::from_iet(&conjugate_by_pl(f, &r)?, n)?;
        let big_h = GnElement::from_iet(&conjugate_by_pl(h, &r)?, n)?;
        if !big_h.reverses(&big_f)? {
            return Err(Error::InternalVerificationFailed("conjugated relation fails".into()));
        }
        return Ok(Normalization {
            r,
            e: Iet::identity(),
            power: p,
            f: big_f,
            h: big_h,
        });
    }
    Err(last_err.unwrap_or_else(|| {
        Error::NotOfThisForm(format!("no power f^p with p <= {max_power} is a product of minimal restricted rotations"))
    }))
}

/// Checks that `F` and `H` of a normalization admit an involutive reverser.
pub fn normalized_reverser(n: &Normalization) -> Result<GnElement> {
    strengthen_reverser(&n.f, &n.h)
}

pub const BUILTIN_NAMES: [&str; 3] = ["bs11_flat", "bs11_minimal", "c1"];

const SYMBOLS: &str = "\
symbol alpha = 0.41421356237309504880168872420969807856967187537694807317667974
symbol beta = 0.23606797749978969640917366873127623544061835961152572427089725
";

/// Text of a built-in action file.
pub fn builtin_source(name: &str) -> Option<String> {
    let body = match name {
        "bs11_flat" => {
            "\
gen a = gn n=4 sigma=1 2 3 4 alpha=-alpha, alpha, -alpha, alpha
gen b = gn n=4 sigma=4 3 2 1 alpha=0, beta, 0, -beta
relation: b a b^-1 a
"
        }
        "bs11_minimal" => {
            "\
gen a = gn n=4 sigma=1 2 3 4 alpha=-alpha, alpha, -alpha, alpha
gen b = gn n=4 sigma=2 3 4 1 alpha=beta, beta, beta, beta
relation: b a b^-1 a
"
        }
        "c1" => {
            "\
gen a = gn n=4 sigma=3 4 1 2 alpha=0, alpha, -alpha, 0
gen b = gn n=4 sigma=4 3 2 1 alpha=beta, 0, -beta, 0
relation: b a^2 b^-1 a^2
relation: a b^2 a^-1 b^2
"
        }
        _ => return None,
    };
    Some(format!("{SYMBOLS}{body}"))
}

/// A built-in action over `table` (symbols `alpha`, `beta` are added if
/// missing).
pub fn builtin_action(name: &str, table: &SymbolTable) -> Result<MarkedAction> {
    let src = builtin_source(name).ok_or_else(|| Error::InvalidArgument(format!("no built-in example `{name}`")))?;
    Workspace::parse_with(&src, table.clone())?.action()
}
