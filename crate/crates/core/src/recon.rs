//! Evolve, sample and reconstruct.
//!
//! A sample at sensor `i` and time `t` is `(A^t f)(i)`. As a functional of
//! `f` this is the inner product with `(A^*)^t e_i`, so stability of the
//! stacked system is governed by the adjoint kernel.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::SamplingPlan;
use crate::group::{fourier_matrix, GroupIndex};
use crate::linalg::{least_squares, norm, CMatrix};
use crate::spectral::Kernel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sensor: GroupIndex,
    pub time: usize,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub estimate: Vec<Complex64>,
    pub residual_norm: f64,
    /// `sigma_max / sigma_min` over the nonzero singular values.
    pub condition_number: f64,
    pub exact_flag: bool,
    pub rank: usize,
    pub required_rank: usize,
}

/// Samples `(A^t f)(i) + noise` for every `(i, t)` in the plan, ordered by
/// sensor then time.
pub fn simulate_samples(
    kernel: &Kernel,
    f: &[Complex64],
    plan: &SamplingPlan,
    noise_std: f64,
    seed: u64,
) -> Result<Vec<SampleRecord>> {
    let group = kernel.group();
    if plan.group() != group {
        return Err(Error::InvalidPlan(
            "plan group does not match kernel".into(),
        ));
    }
    if f.len() != group.order() {
        return Err(Error::LengthMismatch {
            expected: group.order(),
            found: f.len(),
        });
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise_std = {noise_std}")));
    }
    let max_depth = plan.entries().map(|(_, l)| l).max().unwrap_or(0);
    let mut states = Vec::with_capacity(max_depth + 1);
    states.push(f.to_vec());
    for t in 1..=max_depth {
        let next = kernel.apply(&states[t - 1], 1)?;
        states.push(next);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Circular complex Gaussian: each component has variance noise_std^2 / 2.
    let normal = Normal::new(0.0, noise_std / std::f64::consts::SQRT_2).expect("finite std");
    let mut out = Vec::with_capacity(plan.sample_count());
    for (i, l) in plan.entries() {
        for (t, state) in states.iter().enumerate().take(l + 1) {
            let noise = if noise_std > 0.0 {
                Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
            } else {
                Complex64::new(0.0, 0.0)
            };
            out.push(SampleRecord {
                sensor: group.index(i),
                time: t,
                value: state[i] + noise,
            });
        }
    }
    Ok(out)
}

/// Row of the sampling map for `(i, t)`: `e_i^T A^t`.
fn sampling_rows(kernel: &Kernel, records: &[(usize, usize)]) -> CMatrix {
    let group = kernel.group();
    let n = group.order();
    let f = fourier_matrix(group);
    let fm = f.entries();
    let sym = kernel.symbol();
    // A^t = F^* diag(a_hat^t) F, so row i of A^t is sum_k conj(F[k,i]) a_hat_k^t F[k, :].
    CMatrix::from_fn(records.len(), n, |r, col| {
        let (i, t) = records[r];
        (0..n).fold(Complex64::new(0.0, 0.0), |acc, k| {
            acc + fm[(k, i)].conj() * sym[k].powu(t as u32) * fm[(k, col)]
        })
    })
}

/// Least-squares recovery of `f` from spatiotemporal samples.
pub fn reconstruct(
    kernel: &Kernel,
    plan: &SamplingPlan,
    samples: &[SampleRecord],
    tol: f64,
) -> Result<ReconstructionResult> {
    let group = kernel.group();
    if plan.group() != group {
        return Err(Error::InvalidPlan(
            "plan group does not match kernel".into(),
        ));
    }
    if samples.is_empty() {
        return Err(Error::InvalidSamples("no samples".into()));
    }
    let mut keys = Vec::with_capacity(samples.len());
    let mut rhs = Vec::with_capacity(samples.len());
    for s in samples {
        let i = group.flat(&s.sensor)?;
        match plan.depth(i) {
            Some(l) if s.time <= l => {}
            Some(l) => {
                return Err(Error::InvalidSamples(format!(
                    "time {} exceeds depth {l} at {}",
                    s.time, s.sensor
                )))
            }
            None => {
                return Err(Error::InvalidSamples(format!(
                    "sensor {} not in plan",
                    s.sensor
                )))
            }
        }
        if !(s.value.re.is_finite() && s.value.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        keys.push((i, s.time));
        rhs.push(s.value);
    }
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSamples(
            "duplicate (sensor, time) record".into(),
        ));
    }
    let mat = sampling_rows(kernel, &keys);
    let ls = least_squares(&mat, &rhs, tol)?;
    let fitted = &mat * nalgebra::DVector::from_column_slice(&ls.solution);
    let resid: Vec<Complex64> = fitted.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let residual_norm = norm(&resid);
    let nonzero: Vec<f64> = ls.singular_values.iter().copied().take(ls.rank).collect();
    let condition_number = match (nonzero.first(), nonzero.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    let n = group.order();
    let scale = norm(&rhs).max(1.0);
    Ok(ReconstructionResult {
        estimate: ls.solution,
        residual_norm,
        condition_number,
        exact_flag: ls.rank == n && residual_norm <= tol * scale,
        rank: ls.rank,
        required_rank: n,
    })
}

/// Zeroes every entry outside `omega`.
pub fn subsample(v: &[Complex64], omega: &[usize]) -> Result<Vec<Complex64>> {
    if omega.is_empty() {
        return Err(Error::InvalidArgument("omega is empty".into()));
    }
    let mut keep = vec![false; v.len()];
    for &i in omega {
        if i >= v.len() {
            return Err(Error::OutOfRange {
                index: i,
                bound: v.len(),
            });
        }
        keep[i] = true;
    }
    Ok(v.iter()
        .zip(keep)
        .map(|(&x, k)| if k { x } else { Complex64::new(0.0, 0.0) })
        .collect())
}
