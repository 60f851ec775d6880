use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Scalar;

/// Dense coordinate vector `(constant, c_0, …, c_{m-1})` of a scalar over a
/// basis with `m` symbols.
pub fn coordinates(value: &Scalar, symbols: usize) -> Vec<BigRational> {
    let mut row = vec![BigRational::zero(); symbols + 1];
    row[0] = value.constant().clone();
    for (i, q) in value.coefficients() {
        row[i + 1] = q.clone();
    }
    row
}

fn basis_size(values: &[Scalar]) -> usize {
    values
        .iter()
        .flat_map(|v| v.coefficients().last().map(|(i, _)| i + 1))
        .max()
        .unwrap_or(0)
}

/// Rank over ℚ of a list of rational rows, by Gaussian elimination.
pub fn matrix_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in rows.iter_mut() {
        row.resize(cols, BigRational::zero());
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / &rows[rank][col];
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `dim_ℚ span({1} ∪ values)`.
pub fn q_rank(values: &[Scalar]) -> usize {
    let m = basis_size(values);
    let mut rows: Vec<Vec<BigRational>> = values.iter().map(|v| coordinates(v, m)).collect();
    let mut one = vec![BigRational::zero(); m + 1];
    one[0] = BigRational::one();
    rows.push(one);
    matrix_rank(rows)
}

/// `dim_ℚ span(values)`, without the constant direction.
pub fn rank(values: &[Scalar]) -> usize {
    let m = basis_size(values);
    matrix_rank(values.iter().map(|v| coordinates(v, m)).collect())
}

/// Returns `Some(q)` when `a = q·b` for a rational `q` (with `b ≠ 0`).
pub fn rational_ratio(a: &Scalar, b: &Scalar) -> Option<BigRational> {
    if b.is_zero() {
        return None;
    }
    let m = basis_size(&[a.clone(), b.clone()]);
    let (va, vb) = (coordinates(a, m), coordinates(b, m));
    let k = vb.iter().position(|x| !x.is_zero())?;
    let q = &va[k] / &vb[k];
    va.iter()
        .zip(&vb)
        .all(|(x, y)| *x == &q * y)
        .then_some(q)
}
