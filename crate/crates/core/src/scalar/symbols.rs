use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

static NEXT_SYMBOL_ID: AtomicU64 = AtomicU64::new(1);

/// Digit counts at which witness enclosures are evaluated, coarsest first.
const LEVELS: [u32; 5] = [12, 24, 48, 96, 192];

/// A registered irrational symbol and its numeric witness.
#[derive(Debug)]
pub struct Symbol {
    id: u64,
    name: String,
    witness: String,
    precision: u32,
    /// `(digits, truncated witness, error radius)`, finest level last.
    levels: Vec<(u32, BigRational, BigRational)>,
}

impl Symbol {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn witness(&self) -> &str {
        &self.witness
    }

    /// Number of correct fractional digits claimed by the witness.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub(crate) fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Enclosure `(center, radius)` at the given refinement level; levels past
    /// the finest one clamp to it.
    pub(crate) fn enclosure(&self, level: usize) -> (&BigRational, &BigRational) {
        let (_, c, r) = &self.levels[level.min(self.levels.len() - 1)];
        (c, r)
    }
}

/// Append-only table of irrational symbols.
///
/// All exactness guarantees of the library are conditional on the declared
/// assumption that the registered symbols, together with 1, are linearly
/// independent over ℚ. Registering returns a new snapshot; older snapshots
/// stay valid and scalars built over them remain usable with the new one.
#[derive(Clone, Default)]
pub struct SymbolTable {
    entries: Arc<Vec<Arc<Symbol>>>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.iter().map(|s| s.as_ref())
    }

    pub fn symbol(&self, index: usize) -> &Symbol {
        &self.entries[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|s| s.name == name)
    }

    /// Returns a new snapshot with `name` appended.
    pub fn register(&self, name: &str, witness: &str) -> Result<SymbolTable> {
        if !is_identifier(name) {
            return Err(Error::InvalidArgument(format!(
                "`{name}` is not a valid identifier"
            )));
        }
        if self.index_of(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        let (value, precision) = parse_decimal(witness).ok_or_else(|| Error::MalformedWitness {
            name: name.to_string(),
            witness: witness.to_string(),
        })?;
        let levels = build_levels(&value, precision);
        let symbol = Symbol {
            id: NEXT_SYMBOL_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: name.to_string(),
            witness: witness.trim().to_string(),
            precision,
            levels,
        };
        let mut entries = (*self.entries).clone();
        entries.push(Arc::new(symbol));
        Ok(SymbolTable {
            entries: Arc::new(entries),
        })
    }

    /// The larger of two compatible snapshots (one extends the other).
    pub fn merge(&self, other: &SymbolTable) -> Result<SymbolTable> {
        if Arc::ptr_eq(&self.entries, &other.entries) {
            return Ok(self.clone());
        }
        let (short, long) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let prefix = short
            .entries
            .iter()
            .zip(long.entries.iter())
            .all(|(a, b)| a.id == b.id);
        if prefix {
            Ok(long.clone())
        } else {
            Err(Error::MixedSymbolTables)
        }
    }

    pub fn is_compatible(&self, other: &SymbolTable) -> bool {
        self.merge(other).is_ok()
    }

    pub(crate) fn max_levels(&self, indices: impl Iterator<Item = usize>) -> usize {
        indices
            .map(|i| self.entries[i].level_count())
            .max()
            .unwrap_or(1)
    }
}

pub(crate) fn merge_tables(
    a: &Option<SymbolTable>,
    b: &Option<SymbolTable>,
) -> Result<Option<SymbolTable>> {
    match (a, b) {
        (None, None) => Ok(None),
        (Some(t), None) | (None, Some(t)) => Ok(Some(t.clone())),
        (Some(x), Some(y)) => x.merge(y).map(Some),
    }
}

impl fmt::Debug for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.iter().map(|s| &s.name))
            .finish()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `[-]digits[.digits]` exactly; returns the value and the number of
/// fractional digits.
fn parse_decimal(text: &str) -> Option<(BigRational, u32)> {
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let frac_part = frac_part.trim_end_matches('…');
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{}{}", if int_part.is_empty() { "0" } else { int_part }, frac_part);
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let mut value = BigRational::new(numer, denom);
    if negative {
        value = -value;
    }
    Some((value, frac_part.len() as u32))
}

fn build_levels(value: &BigRational, precision: u32) -> Vec<(u32, BigRational, BigRational)> {
    let ten = BigInt::from(10);
    let mut levels = Vec::new();
    for &digits in LEVELS.iter().filter(|&&d| d < precision) {
        let scale = num_traits::pow(ten.clone(), digits as usize);
        let truncated = BigRational::new((value * BigRational::from(scale.clone())).floor().to_integer(), scale.clone());
        // |true - truncated| <= |true - witness| + |witness - truncated| <= 10^-p + 10^-d
        let radius = BigRational::new(BigInt::from(2), scale);
        levels.push((digits, truncated, radius));
    }
    let scale = num_traits::pow(ten, precision as usize);
    let radius = if precision == 0 {
        BigRational::one()
    } else {
        BigRational::new(BigInt::one(), scale)
    };
    levels.push((precision, value.clone(), radius));
    debug_assert!(levels.iter().all(|(_, _, r)| !r.is_zero()));
    levels
}
