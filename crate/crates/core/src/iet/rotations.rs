use super::{conjugate_by_pl, lt, Iet, PlMap};
use crate::error::{Error, Result};
use crate::gn::GnElement;
use crate::perm::Permutation;
use crate::scalar::linalg::rational_ratio;
use crate::scalar::Scalar;

/// Rotation by `angle` on `[start, end)`; angle 0 marks a gap where the map
/// is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationPiece {
    pub start: Scalar,
    pub end: Scalar,
    pub angle: Scalar,
}

impl RotationPiece {
    pub fn length(&self) -> Result<Scalar> {
        self.end.checked_sub(&self.start)
    }
}

/// Splits `f` into invariant intervals carrying one rotation each.
///
/// The cut points are the breakpoints `b` with `f([0, b)) = [0, b)`; every
/// block between consecutive cuts must consist of one or two intervals of
/// `f`.
pub fn detect_restricted_rotation_product(f: &Iet) -> Result<Vec<RotationPiece>> {
    let mut out = Vec::new();
    let mut block_start = 0usize;
    let mut image_max = Scalar::zero();
    for k in 0..f.len() {
        let (_, end, t) = f.piece(k);
        let image_end = end.checked_add(t)?;
        if lt(&image_max, &image_end)? {
            image_max = image_end;
        }
        if image_max != end {
            continue;
        }
        let start = f.breakpoints()[block_start].clone();
        let angle = match k - block_start {
            0 => Scalar::zero(),
            1 => f.translations()[block_start].clone(),
            count => {
                return Err(Error::NotOfThisForm(format!(
                    "[{start}, {end}) is an invariant block with {} intervals",
                    count + 1
                )))
            }
        };
        out.push(RotationPiece { start, end, angle });
        block_start = k + 1;
    }
    Ok(out)
}

/// Conjugates a product of restricted rotations into `G_n` (with `n` the
/// number of pieces) by the piecewise affine map sending the `i`-th piece
/// onto `[i/n, (i+1)/n)`.
pub fn normalize_restricted_rotations(phi: &Iet) -> Result<(PlMap, GnElement)> {
    let pieces = detect_restricted_rotation_product(phi)?;
    let n = pieces.len();
    let mut intervals = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    let width = Scalar::from_ratio(1, n as i64);
    for (i, p) in pieces.iter().enumerate() {
        let slope = rational_ratio(&width, &p.length()?).ok_or_else(|| {
            Error::NotOfThisForm(format!("[{}, {}) has irrational length relative to 1/{n}", p.start, p.end))
        })?;
        angles.push(p.angle.scale(&slope));
        intervals.push((
            p.start.clone(),
            p.end.clone(),
            Scalar::from_ratio(i as i64, n as i64),
            Scalar::from_ratio(i as i64 + 1, n as i64),
        ));
    }
    let r = PlMap::from_interval_map(&intervals)?;
    let f = GnElement::new(&angles, Permutation::identity(n))?;
    let conjugate = conjugate_by_pl(phi, &r)?;
    if conjugate != f.to_iet()? {
        return Err(Error::InternalVerificationFailed(format!(
            "conjugate {conjugate} differs from {f}"
        )));
    }
    Ok((r, f))
}
