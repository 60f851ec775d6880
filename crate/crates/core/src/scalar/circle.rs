use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::Scalar;
use crate::error::Result;

/// A point of the circle ℝ / Lℤ, stored as its representative in `[0, L)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircleValue {
    modulus: BigRational,
    rep: Scalar,
}

/// Reduces `a` into `[0, L)`.
pub fn reduce_mod(a: &Scalar, modulus: &BigRational) -> Result<CircleValue> {
    let k = a.floor_div(modulus)?;
    let rep = if k.is_zero() {
        a.clone()
    } else {
        a - &Scalar::from_rational(modulus * BigRational::from_integer(k))
    };
    Ok(CircleValue {
        modulus: modulus.clone(),
        rep,
    })
}

impl CircleValue {
    pub fn new(a: &Scalar, modulus: &BigRational) -> Result<Self> {
        reduce_mod(a, modulus)
    }

    pub fn zero(modulus: &BigRational) -> Self {
        CircleValue {
            modulus: modulus.clone(),
            rep: Scalar::zero(),
        }
    }

    pub fn modulus(&self) -> &BigRational {
        &self.modulus
    }

    pub fn representative(&self) -> &Scalar {
        &self.rep
    }

    pub fn into_representative(self) -> Scalar {
        self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &CircleValue) -> Result<CircleValue> {
        debug_assert_eq!(self.modulus, other.modulus);
        let sum = self.rep.checked_add(&other.rep)?;
        reduce_mod(&sum, &self.modulus)
    }

    pub fn sub(&self, other: &CircleValue) -> Result<CircleValue> {
        debug_assert_eq!(self.modulus, other.modulus);
        let diff = self.rep.checked_sub(&other.rep)?;
        reduce_mod(&diff, &self.modulus)
    }

    pub fn neg(&self) -> Result<CircleValue> {
        reduce_mod(&-&self.rep, &self.modulus)
    }

    pub fn add_scalar(&self, x: &Scalar) -> Result<CircleValue> {
        reduce_mod(&self.rep.checked_add(x)?, &self.modulus)
    }

    pub fn scale_int(&self, k: i64) -> Result<CircleValue> {
        reduce_mod(&self.rep.scale_int(k), &self.modulus)
    }

    pub fn scale_big(&self, k: &BigInt) -> Result<CircleValue> {
        reduce_mod(&self.rep.scale(&BigRational::from_integer(k.clone())), &self.modulus)
    }

    /// The two solutions of `2x = self` in the same circle.
    pub fn halves(&self) -> Result<[CircleValue; 2]> {
        let two = BigRational::from_integer(2.into());
        let half = self.rep.scale(&(BigRational::from_integer(1.into()) / &two));
        let first = reduce_mod(&half, &self.modulus)?;
        let second = first.add_scalar(&Scalar::from_rational(&self.modulus / two))?;
        Ok([first, second])
    }

    /// True iff the representative is rational.
    pub fn is_rational(&self) -> bool {
        self.rep.is_rational()
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl fmt::Debug for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.rep, super::value::fmt_rational(&self.modulus))
    }
}
