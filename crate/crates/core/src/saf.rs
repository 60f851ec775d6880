//! The Sah–Arnoux–Fathi invariant in `ℝ ⊗_ℚ ℝ`.
//!
//! Tensors live over the basis `e_0 = 1, e_{i+1} = s_i` where `s_i` are the
//! registered symbols, and are stored sparsely as `(i, j) ↦ q` meaning
//! `q · e_i ⊗ e_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::iet::Iet;
use crate::scalar::{fmt_rational, Scalar, SymbolTable};

#[derive(Clone, Default)]
pub struct SafTensor {
    table: Option<SymbolTable>,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl PartialEq for SafTensor {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for SafTensor {}

fn coords(x: &Scalar) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(x.coefficients().len() + 1);
    if !x.constant().is_zero() {
        out.push((0, x.constant().clone()));
    }
    out.extend(x.coefficients().iter().map(|(i, q)| (i + 1, q.clone())));
    out
}

fn merged_table(a: Option<&SymbolTable>, b: Option<&SymbolTable>) -> Option<SymbolTable> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.merge(y).expect("tensors over incompatible symbol tables")),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

impl SafTensor {
    pub fn zero() -> Self {
        SafTensor::default()
    }

    /// `a ⊗ b`.
    pub fn tensor(a: &Scalar, b: &Scalar) -> Self {
        let mut t = SafTensor {
            table: merged_table(a.table(), b.table()),
            entries: BTreeMap::new(),
        };
        for (i, p) in coords(a) {
            for (j, q) in coords(b) {
                t.add_entry(i, j, &p * &q);
            }
        }
        t
    }

    /// `a ∧ b = a ⊗ b − b ⊗ a`.
    pub fn wedge(a: &Scalar, b: &Scalar) -> Self {
        SafTensor::tensor(a, b) - SafTensor::tensor(b, a)
    }

    fn add_entry(&mut self, i: usize, j: usize, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    /// Number of basis directions (the constant plus every symbol).
    pub fn basis_size(&self) -> usize {
        let from_table = self.table.as_ref().map_or(0, SymbolTable::len) + 1;
        let from_entries = self.entries.keys().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(1);
        from_table.max(from_entries)
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(i, j), q)| (i, j, q))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(t + tᵀ) / 2`.
    pub fn symmetric_part(&self) -> SafTensor {
        let half = BigRational::new(1.into(), 2.into());
        let mut out = SafTensor {
            table: self.table.clone(),
            entries: BTreeMap::new(),
        };
        for (&(i, j), q) in &self.entries {
            out.add_entry(i, j, q * &half);
            out.add_entry(j, i, q * &half);
        }
        out
    }

    /// Keeps only `i < j`, the coefficient of `e_i ∧ e_j`. Fails unless the
    /// tensor is antisymmetric.
    pub fn wedge_normal_form(&self) -> Result<SafTensor> {
        if !self.symmetric_part().is_zero() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(SafTensor {
            table: self.table.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(&(i, j), _)| i < j)
                .map(|(&k, q)| (k, q.clone()))
                .collect(),
        })
    }

    pub fn scale(&self, q: &BigRational) -> SafTensor {
        let mut out = SafTensor {
            table: self.table.clone(),
            entries: BTreeMap::new(),
        };
        for (&(i, j), v) in &self.entries {
            out.add_entry(i, j, v * q);
        }
        out
    }

    /// Machine form: `(i, j, q)` triples of the wedge normal form.
    pub fn triples(&self) -> Result<Vec<(usize, usize, BigRational)>> {
        Ok(self
            .wedge_normal_form()?
            .entries
            .into_iter()
            .map(|((i, j), q)| (i, j, q))
            .collect())
    }

    fn label(&self, i: usize) -> String {
        match (i, &self.table) {
            (0, _) => "1".to_string(),
            (i, Some(t)) if i <= t.len() => t.symbol(i - 1).name().to_string(),
            (i, _) => format!("s{}", i - 1),
        }
    }
}

impl Add for SafTensor {
    type Output = SafTensor;

    fn add(mut self, rhs: SafTensor) -> SafTensor {
        self.table = merged_table(self.table.as_ref(), rhs.table.as_ref());
        for ((i, j), q) in rhs.entries {
            self.add_entry(i, j, q);
        }
        self
    }
}

impl Neg for SafTensor {
    type Output = SafTensor;

    fn neg(mut self) -> SafTensor {
        for q in self.entries.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl Sub for SafTensor {
    type Output = SafTensor;

    fn sub(self, rhs: SafTensor) -> SafTensor {
        self + (-rhs)
    }
}

/// Wedge form `q·(a∧b) + …` when antisymmetric, otherwise `q·(a⊗b) + …`.
impl fmt::Display for SafTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (form, op) = match self.wedge_normal_form() {
            Ok(w) => (w, '∧'),
            Err(_) => (self.clone(), '⊗'),
        };
        if form.is_zero() {
            return f.write_str("0");
        }
        for (k, (&(i, j), q)) in form.entries.iter().enumerate() {
            let body = format!("({}{op}{})", self.label(i), self.label(j));
            let text = if q.abs().is_one() {
                body
            } else {
                format!("{}·{body}", fmt_rational(&q.abs()))
            };
            match (k, q.is_negative()) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SafTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SafTensor({self})")
    }
}

/// `Σ λ_k ⊗ γ_k` over the canonical intervals, `γ_k` the translation.
pub fn saf(f: &Iet) -> Result<SafTensor> {
    let mut out = SafTensor::zero();
    for (start, end, t) in f.pieces() {
        let length = end.checked_sub(start)?;
        out = out + SafTensor::tensor(&length, t);
    }
    Ok(out)
}

/// The sign `ε` with `saf(R_β) = ε·(1∧β)`, evaluated once on a fresh symbol.
pub fn calibration() -> i32 {
    static EPSILON: OnceLock<i32> = OnceLock::new();
    *EPSILON.get_or_init(|| {
        let table = SymbolTable::new()
            .register("b", "0.2360679774997896964091736687312762354406")
            .expect("fresh table");
        let beta = Scalar::symbol(&table, 0);
        let rotation = Iet::rotation(&beta).expect("rotation by a number in (0, 1)");
        let value = saf(&rotation).expect("saf of a rotation");
        let unit = SafTensor::wedge(&Scalar::one(), &beta);
        if value == unit {
            1
        } else if value == -unit {
            -1
        } else {
            panic!("saf of a rotation is not ±(1∧β): {value}")
        }
    })
}

/// `ε` as a rational, for scaling closed forms.
pub fn epsilon() -> BigRational {
    BigRational::from_integer(calibration().into())
}
