//! Dense complex linear algebra helpers.
//!
//! Matrices are stored as `nalgebra` matrices; singular value decompositions
//! go through `faer`, whose complex SVD is backward stable to machine
//! precision on the Vandermonde-like blocks produced by the frame tests.

use faer::complex_native::c64;
use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Default relative rank tolerance (relative to the largest singular value).
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Singular values at or below this are treated as zero regardless of scale.
pub const ABS_FLOOR: f64 = 1e-12;

fn ensure_finite(mat: &CMatrix) -> Result<()> {
    if mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn to_faer(mat: &CMatrix) -> Mat<c64> {
    Mat::from_fn(mat.nrows(), mat.ncols(), |r, c| {
        let z = mat[(r, c)];
        c64::new(z.re, z.im)
    })
}

/// Singular values in descending order.
pub fn singular_values(mat: &CMatrix) -> Result<Vec<f64>> {
    ensure_finite(mat)?;
    if mat.nrows() == 0 || mat.ncols() == 0 {
        return Ok(Vec::new());
    }
    let mut sv: Vec<f64> = to_faer(mat).singular_values();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values above the rank threshold implied by `tol`.
pub fn rank_from_singular_values(sv: &[f64], tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax <= ABS_FLOOR {
        return 0;
    }
    let cut = (tol * smax).max(ABS_FLOOR);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Numerical rank: singular values greater than `tol * sigma_max` and the absolute floor.
pub fn numerical_rank(mat: &CMatrix, tol: f64) -> Result<usize> {
    Ok(rank_from_singular_values(&singular_values(mat)?, tol))
}

/// Output of a rank-revealing least-squares solve.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: Vec<Complex64>,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

/// Minimum-norm least-squares solution of `mat * x = rhs` through a truncated SVD.
pub fn least_squares(mat: &CMatrix, rhs: &[Complex64], tol: f64) -> Result<LeastSquares> {
    ensure_finite(mat)?;
    if rhs.len() != mat.nrows() {
        return Err(Error::LengthMismatch {
            expected: mat.nrows(),
            found: rhs.len(),
        });
    }
    if mat.nrows() == 0 || mat.ncols() == 0 {
        return Ok(LeastSquares {
            solution: vec![Complex64::new(0.0, 0.0); mat.ncols()],
            rank: 0,
            singular_values: vec![],
        });
    }
    let svd = to_faer(mat).thin_svd();
    let (u, v) = (svd.u(), svd.v());
    let sv: Vec<f64> = (0..svd.s_diagonal().nrows())
        .map(|k| svd.s_diagonal().read(k).re)
        .collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = (tol * smax).max(ABS_FLOOR);

    let mut x = vec![Complex64::new(0.0, 0.0); mat.ncols()];
    let mut rank = 0;
    for (k, &s) in sv.iter().enumerate() {
        if s <= cut || smax <= ABS_FLOOR {
            continue;
        }
        rank += 1;
        let coef: Complex64 = (0..mat.nrows())
            .map(|r| {
                let w = u.read(r, k);
                Complex64::new(w.re, -w.im) * rhs[r]
            })
            .sum::<Complex64>()
            / s;
        for (c, xc) in x.iter_mut().enumerate() {
            let w = v.read(c, k);
            *xc += coef * Complex64::new(w.re, w.im);
        }
    }
    let mut sorted = sv;
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(LeastSquares {
        solution: x,
        rank,
        singular_values: sorted,
    })
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_has_full_rank() {
        let m = CMatrix::identity(3, 3);
        assert_eq!(numerical_rank(&m, DEFAULT_RANK_TOL).unwrap(), 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = CMatrix::zeros(2, 5);
        assert_eq!(numerical_rank(&m, DEFAULT_RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(numerical_rank(&m, DEFAULT_RANK_TOL), Err(Error::NonFinite));
    }

    #[test]
    fn least_squares_recovers_overdetermined_solution() {
        let m = CMatrix::from_row_slice(3, 2, &[c(1.0), c(0.0), c(0.0), c(1.0), c(1.0), c(1.0)]);
        let rhs = [c(2.0), c(-1.0), c(1.0)];
        let ls = least_squares(&m, &rhs, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(ls.rank, 2);
        assert!((ls.solution[0] - c(2.0)).norm() < 1e-12);
        assert!((ls.solution[1] - c(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn least_squares_handles_complex_systems() {
        let i = Complex64::i();
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), i, -i, c(2.0)]);
        let x = [c(1.0) + i, c(-0.5)];
        let rhs = [
            m[(0, 0)] * x[0] + m[(0, 1)] * x[1],
            m[(1, 0)] * x[0] + m[(1, 1)] * x[1],
        ];
        let ls = least_squares(&m, &rhs, DEFAULT_RANK_TOL).unwrap();
        assert!(ls
            .solution
            .iter()
            .zip(&x)
            .all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn unimodular_vandermonde_solves_to_machine_precision() {
        // Krylov-type blocks: rows are powers of unimodular nodes.
        let n = 12;
        let nodes: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 0.37 + 2.9 * k as f64))
            .collect();
        let m = CMatrix::from_fn(3 * n, n, |r, c| nodes[c].powu(r as u32));
        let x: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(k as f64, 1.0 - k as f64))
            .collect();
        let rhs: Vec<Complex64> = (0..3 * n)
            .map(|r| (0..n).map(|c| m[(r, c)] * x[c]).sum())
            .collect();
        let ls = least_squares(&m, &rhs, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(ls.rank, n);
        let err: Vec<Complex64> = ls.solution.iter().zip(&x).map(|(a, b)| a - b).collect();
        assert!(norm(&err) / norm(&x) < 1e-10);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<(f64, f64)>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), r * c),
            )
        })
    }

    proptest! {
        #[test]
        fn rank_is_monotone_and_permutation_invariant((r, c, vals) in small_matrix(), extra in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 4), rot in 0usize..5) {
            let entries: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let m = CMatrix::from_row_slice(r, c, &entries);
            let base = numerical_rank(&m, DEFAULT_RANK_TOL).unwrap();

            let mut bigger = m.clone().insert_row(r, Complex64::new(0.0, 0.0));
            for j in 0..c {
                let (a, b) = extra[j % extra.len()];
                bigger[(r, j)] = Complex64::new(a, b);
            }
            prop_assert!(numerical_rank(&bigger, DEFAULT_RANK_TOL).unwrap() >= base);

            let shift = rot % r;
            let permuted = CMatrix::from_fn(r, c, |i, j| m[((i + shift) % r, j)]);
            prop_assert_eq!(numerical_rank(&permuted, DEFAULT_RANK_TOL).unwrap(), base);
        }
    }
}
