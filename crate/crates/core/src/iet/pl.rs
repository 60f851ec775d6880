use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{cmp, lt, try_sort_by, Iet};
use crate::error::{Error, Result};
use crate::scalar::linalg::rational_ratio;
use crate::scalar::{fmt_rational, Scalar};

/// A piecewise affine bijection of `[0, 1)` with positive rational slopes:
/// `x ↦ s_k·x + c_k` on `[b_k, b_{k+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct PlMap {
    breaks: Vec<Scalar>,
    slopes: Vec<BigRational>,
    offsets: Vec<Scalar>,
}

impl PlMap {
    pub fn identity() -> Self {
        PlMap {
            breaks: vec![Scalar::zero()],
            slopes: vec![BigRational::one()],
            offsets: vec![Scalar::zero()],
        }
    }

    /// Validates that the pieces glue to a bijection of `[0, 1)`.
    pub fn new(breakpoints: Vec<Scalar>, slopes: Vec<BigRational>, offsets: Vec<Scalar>) -> Result<Self> {
        let r = breakpoints.len();
        if r == 0 || slopes.len() != r || offsets.len() != r {
            return Err(Error::InvalidPlMap("breakpoints, slopes and offsets differ in length".into()));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidPlMap("first breakpoint must be 0".into()));
        }
        for w in breakpoints.windows(2) {
            if !lt(&w[0], &w[1])? {
                return Err(Error::InvalidPlMap("breakpoints not strictly increasing".into()));
            }
        }
        if !lt(&breakpoints[r - 1], &Scalar::one())? {
            return Err(Error::InvalidPlMap("breakpoints must lie in [0, 1)".into()));
        }
        if slopes.iter().any(|s| !s.is_positive()) {
            return Err(Error::InvalidPlMap("slopes must be positive".into()));
        }
        let map = PlMap {
            breaks: breakpoints,
            slopes,
            offsets,
        };
        let mut images = (0..r)
            .map(|k| {
                let (s, e) = (&map.breaks[k], map.end(k));
                Ok((map.apply_piece(k, s)?, map.apply_piece(k, &e)?))
            })
            .collect::<Result<Vec<_>>>()?;
        try_sort_by(&mut images, |a, b| cmp(&a.0, &b.0))?;
        let mut expected = Scalar::zero();
        for (s, e) in images {
            if s != expected {
                return Err(Error::InvalidPlMap(format!("images do not tile [0, 1) near {expected}")));
            }
            expected = e;
        }
        if expected != Scalar::one() {
            return Err(Error::InvalidPlMap(format!("images end at {expected}")));
        }
        Ok(map.canonical())
    }

    /// The map sending each `[start, end)` affinely onto `[image, image + …)`,
    /// where the image lengths are given. Domains must tile `[0, 1)` in order.
    pub fn from_interval_map(pieces: &[(Scalar, Scalar, Scalar, Scalar)]) -> Result<Self> {
        let mut breaks = Vec::new();
        let mut slopes = Vec::new();
        let mut offsets = Vec::new();
        for (start, end, image_start, image_end) in pieces {
            let slope = rational_ratio(&image_end.checked_sub(image_start)?, &end.checked_sub(start)?)
                .ok_or_else(|| Error::InvalidPlMap(format!("irrational slope on [{start}, {end})")))?;
            offsets.push(image_start.checked_sub(&start.scale(&slope))?);
            breaks.push(start.clone());
            slopes.push(slope);
        }
        Self::new(breaks, slopes, offsets)
    }

    fn canonical(self) -> Self {
        let mut out = PlMap {
            breaks: Vec::new(),
            slopes: Vec::new(),
            offsets: Vec::new(),
        };
        for ((b, s), c) in self.breaks.into_iter().zip(self.slopes).zip(self.offsets) {
            if out.slopes.last() == Some(&s) && out.offsets.last() == Some(&c) {
                continue;
            }
            out.breaks.push(b);
            out.slopes.push(s);
            out.offsets.push(c);
        }
        out
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[BigRational] {
        &self.slopes
    }

    pub fn offsets(&self) -> &[Scalar] {
        &self.offsets
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.len() == 1 && self.slopes[0].is_one() && self.offsets[0].is_zero()
    }

    fn end(&self, k: usize) -> Scalar {
        self.breaks.get(k + 1).cloned().unwrap_or_else(Scalar::one)
    }

    fn apply_piece(&self, k: usize, x: &Scalar) -> Result<Scalar> {
        x.scale(&self.slopes[k]).checked_add(&self.offsets[k])
    }

    fn locate(&self, x: &Scalar) -> Result<usize> {
        if lt(x, &Scalar::zero())? || !lt(x, &Scalar::one())? {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let mut k = 0;
        while k + 1 < self.breaks.len() && !lt(x, &self.breaks[k + 1])? {
            k += 1;
        }
        Ok(k)
    }

    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        let k = self.locate(x)?;
        self.apply_piece(k, x)
    }

    pub fn inverse(&self) -> Result<PlMap> {
        let mut pieces = (0..self.breaks.len())
            .map(|k| {
                let inv = BigRational::one() / &self.slopes[k];
                let start = self.apply_piece(k, &self.breaks[k])?;
                Ok((start, inv.clone(), (-&self.offsets[k]).scale(&inv)))
            })
            .collect::<Result<Vec<_>>>()?;
        try_sort_by(&mut pieces, |a, b| cmp(&a.0, &b.0))?;
        let mut out = PlMap {
            breaks: Vec::new(),
            slopes: Vec::new(),
            offsets: Vec::new(),
        };
        for (b, s, c) in pieces {
            out.breaks.push(b);
            out.slopes.push(s);
            out.offsets.push(c);
        }
        Ok(out.canonical())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &PlMap) -> Result<PlMap> {
        let mut out = PlMap {
            breaks: Vec::new(),
            slopes: Vec::new(),
            offsets: Vec::new(),
        };
        for k in 0..g.breaks.len() {
            let (a, c) = (&g.slopes[k], &g.offsets[k]);
            let image_start = g.apply_piece(k, &g.breaks[k])?;
            let image_end = g.apply_piece(k, &g.end(k))?;
            let mut m = self.locate(&image_start)?;
            let mut cur = g.breaks[k].clone();
            loop {
                out.breaks.push(cur.clone());
                out.slopes.push(&self.slopes[m] * a);
                out.offsets.push(c.scale(&self.slopes[m]).checked_add(&self.offsets[m])?);
                let boundary = self.end(m);
                if lt(&boundary, &image_end)? {
                    cur = boundary.checked_sub(c)?.scale(&(BigRational::one() / a));
                    m += 1;
                } else {
                    break;
                }
            }
        }
        Ok(out.canonical())
    }

    pub fn from_iet(f: &Iet) -> PlMap {
        PlMap {
            breaks: f.breakpoints().to_vec(),
            slopes: vec![BigRational::one(); f.len()],
            offsets: f.translations().to_vec(),
        }
    }

    /// The map as an IET, if every slope is 1.
    pub fn to_iet(&self) -> Result<Iet> {
        if let Some(k) = self.slopes.iter().position(|s| !s.is_one()) {
            return Err(Error::NotAnIet(format!(
                "[{}, {}) has slope {}",
                self.breaks[k],
                self.end(k),
                fmt_rational(&self.slopes[k])
            )));
        }
        Ok(Iet::from_pieces_unchecked(
            self.breaks.iter().cloned().zip(self.offsets.iter().cloned()).collect(),
        ))
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.breaks.len())
            .map(|k| {
                let c = &self.offsets[k];
                let slope = fmt_rational(&self.slopes[k]);
                if c.is_zero() {
                    format!("[{}, {}): {slope}*x", self.breaks[k], self.end(k))
                } else {
                    format!("[{}, {}): {slope}*x + ({c})", self.breaks[k], self.end(k))
                }
            })
            .collect();
        write!(f, "pl {}", parts.join("; "))
    }
}

impl fmt::Debug for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `R ∘ f ∘ R⁻¹`, provided it is again an IET.
pub fn conjugate_by_pl(f: &Iet, r: &PlMap) -> Result<Iet> {
    r.compose(&PlMap::from_iet(f))?.compose(&r.inverse()?)?.to_iet()
}
