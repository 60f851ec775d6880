use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbols::{merge_tables, SymbolTable};
use crate::error::{Error, Result};

/// An exact real number `q0 + Σ qi·si` with rational `qi` and registered
/// irrational symbols `si`.
///
/// Coefficients are stored sparsely, sorted by symbol index, with no zero
/// entries; equality is field-wise. Binary operators panic when the operands
/// come from incompatible symbol tables; the `checked_*` methods report
/// [`Error::MixedSymbolTables`] instead.
#[derive(Clone)]
pub struct Scalar {
    constant: BigRational,
    coeffs: Vec<(usize, BigRational)>,
    table: Option<SymbolTable>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            constant: q,
            coeffs: Vec::new(),
            table: None,
        }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// The scalar `1·s` for the symbol at `index` in `table`.
    pub fn symbol(table: &SymbolTable, index: usize) -> Self {
        assert!(index < table.len(), "symbol index out of range");
        Scalar {
            constant: BigRational::zero(),
            coeffs: vec![(index, BigRational::one())],
            table: Some(table.clone()),
        }
    }

    pub fn named(table: &SymbolTable, name: &str) -> Result<Self> {
        let index = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Ok(Self::symbol(table, index))
    }

    /// Builds `constant + Σ coeff·symbol` from raw parts.
    pub fn from_parts(
        table: Option<&SymbolTable>,
        constant: BigRational,
        coeffs: impl IntoIterator<Item = (usize, BigRational)>,
    ) -> Self {
        let mut v: Vec<(usize, BigRational)> = coeffs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, BigRational)> = Vec::with_capacity(v.len());
        for (i, q) in v {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += q,
                _ => merged.push((i, q)),
            }
        }
        merged.retain(|(_, q)| !q.is_zero());
        if let (Some(t), Some((i, _))) = (table, merged.last()) {
            assert!(*i < t.len(), "symbol index out of range");
        }
        assert!(merged.is_empty() || table.is_some(), "symbolic scalar without a table");
        Scalar {
            constant,
            coeffs: merged,
            table: table.cloned(),
        }
    }

    pub fn constant(&self) -> &BigRational {
        &self.constant
    }

    pub fn coefficients(&self) -> &[(usize, BigRational)] {
        &self.coeffs
    }

    pub fn coefficient(&self, index: usize) -> BigRational {
        self.coeffs
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, q)| q.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn table(&self) -> Option<&SymbolTable> {
        self.table.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.constant)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// Reattaches this scalar to a compatible, possibly larger, table.
    pub fn with_table(&self, table: &SymbolTable) -> Result<Self> {
        let merged = merge_tables(&self.table, &Some(table.clone()))?;
        Ok(Scalar {
            constant: self.constant.clone(),
            coeffs: self.coeffs.clone(),
            table: merged,
        })
    }

    fn combine(&self, other: &Scalar, sign: i8) -> Result<Scalar> {
        let table = merge_tables(&self.table, &other.table)?;
        let constant = if sign > 0 {
            &self.constant + &other.constant
        } else {
            &self.constant - &other.constant
        };
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + other.coeffs.len());
        let (mut a, mut b) = (self.coeffs.iter().peekable(), other.coeffs.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, p)), Some((j, q))) => match i.cmp(j) {
                    Ordering::Less => {
                        coeffs.push((*i, p.clone()));
                        a.next();
                    }
                    Ordering::Greater => {
                        coeffs.push((*j, if sign > 0 { q.clone() } else { -q.clone() }));
                        b.next();
                    }
                    Ordering::Equal => {
                        let r = if sign > 0 { p + q } else { p - q };
                        if !r.is_zero() {
                            coeffs.push((*i, r));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((i, p)), None) => {
                    coeffs.push((*i, p.clone()));
                    a.next();
                }
                (None, Some((j, q))) => {
                    coeffs.push((*j, if sign > 0 { q.clone() } else { -q.clone() }));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Ok(Scalar {
            constant,
            coeffs,
            table,
        })
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.combine(other, -1)
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar {
                constant: BigRational::zero(),
                coeffs: Vec::new(),
                table: self.table.clone(),
            };
        }
        Scalar {
            constant: &self.constant * q,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * q)).collect(),
            table: self.table.clone(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Enclosure `[lo, hi]` of the true value at the given refinement level.
    pub(crate) fn enclosure(&self, level: usize) -> (BigRational, BigRational) {
        let mut center = self.constant.clone();
        let mut radius = BigRational::zero();
        if let Some(table) = &self.table {
            for (i, q) in &self.coeffs {
                let (c, r) = table.symbol(*i).enclosure(level);
                center += q * c;
                radius += q.abs() * r;
            }
        }
        (&center - &radius, center + radius)
    }

    pub(crate) fn level_count(&self) -> usize {
        match &self.table {
            Some(t) if !self.coeffs.is_empty() => t.max_levels(self.coeffs.iter().map(|(i, _)| *i)),
            _ => 1,
        }
    }

    /// Sign of the value, decided exactly for rationals and by refining
    /// witness enclosures otherwise.
    pub fn signum(&self) -> Result<Ordering> {
        if self.coeffs.is_empty() {
            return Ok(self.constant.cmp(&BigRational::zero()));
        }
        for level in 0..self.level_count() {
            let (lo, hi) = self.enclosure(level);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(Error::InsufficientPrecision(self.to_string()))
    }

    /// Exact comparison.
    pub fn compare(&self, other: &Scalar) -> Result<Ordering> {
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Ok(self.constant.cmp(&other.constant));
        }
        if self == other {
            return Ok(Ordering::Equal);
        }
        self.checked_sub(other)?.signum()
    }

    pub fn lt(&self, other: &Scalar) -> Result<bool> {
        Ok(self.compare(other)? == Ordering::Less)
    }

    pub fn le(&self, other: &Scalar) -> Result<bool> {
        Ok(self.compare(other)? != Ordering::Greater)
    }

    /// `floor(self / modulus)` for a positive rational modulus.
    pub fn floor_div(&self, modulus: &BigRational) -> Result<BigInt> {
        assert!(modulus.is_positive(), "modulus must be positive");
        if self.coeffs.is_empty() {
            return Ok((&self.constant / modulus).floor().to_integer());
        }
        for level in 0..self.level_count() {
            let (lo, hi) = self.enclosure(level);
            let a = (lo / modulus).floor().to_integer();
            let b = (hi / modulus).floor().to_integer();
            if a == b {
                return Ok(a);
            }
        }
        Err(Error::InsufficientPrecision(self.to_string()))
    }

    /// Least denominator over all rational parts (constant and coefficients).
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|(_, q)| q.denom().clone())
            .fold(self.constant.denom().clone(), |acc, d| acc.lcm(&d))
    }

    /// Approximate value for diagnostics; never used for decisions.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let level = self.level_count().saturating_sub(1);
        let (lo, hi) = self.enclosure(level);
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.constant == other.constant && self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.constant.hash(state);
        self.coeffs.hash(state);
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("mixed symbol tables")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("mixed symbol tables")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            constant: -self.constant.clone(),
            coeffs: self.coeffs.iter().map(|(i, q)| (*i, -q.clone())).collect(),
            table: self.table.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul<&BigRational> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &BigRational) -> Scalar {
        self.scale(rhs)
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: constant first, then symbols in registration order, unit
/// coefficients elided (`1/4 + 2*alpha - beta`).
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str(&fmt_rational(&self.constant));
        }
        let table = self.table.as_ref().expect("symbolic scalar carries its table");
        let mut first = true;
        if !self.constant.is_zero() {
            f.write_str(&fmt_rational(&self.constant))?;
            first = false;
        }
        for (i, q) in &self.coeffs {
            let name = table.symbol(*i).name();
            let magnitude = q.abs();
            let body = if magnitude.is_one() {
                name.to_string()
            } else {
                format!("{}*{}", fmt_rational(&magnitude), name)
            };
            match (first, q.is_negative()) {
                (true, false) => f.write_str(&body)?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}
