//! Seeded generators for kernels with prescribed level-set structure.
//!
//! Eigenvalues are placed on the unit circle near equally spaced angles with
//! a random jitter and a random assignment to classes. Keeping them unimodular
//! and spread out keeps the Krylov (Vandermonde) blocks well conditioned, so
//! rank decisions stay far from the tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::group::FiniteGroup;
use crate::spectral::Kernel;

/// `count` distinct unimodular values, pairwise at least `pi / count` apart in angle.
pub fn separated_values<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Complex64> {
    let offset = rng.gen_range(0.0..2.0 * PI);
    let step = 2.0 * PI / count.max(1) as f64;
    let mut vals: Vec<Complex64> = (0..count)
        .map(|j| {
            let jitter = rng.gen_range(-0.25..0.25) * step;
            Complex64::from_polar(1.0, offset + j as f64 * step + jitter)
        })
        .collect();
    vals.shuffle(rng);
    vals
}

/// Sorted random `size`-subset of `0..n`.
pub fn random_subset<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut out: Vec<usize> = all.into_iter().take(size).collect();
    out.sort_unstable();
    out
}

/// Random partition of `0..n` whose largest class has exactly `max_class` elements.
pub fn random_partition<R: Rng + ?Sized>(
    n: usize,
    max_class: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    assert!(
        max_class >= 1 && max_class <= n,
        "max class size must lie in 1..=n"
    );
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut classes = vec![idx[..max_class].to_vec()];
    let mut pos = max_class;
    while pos < n {
        let size = rng.gen_range(1..=max_class.min(n - pos));
        classes.push(idx[pos..pos + size].to_vec());
        pos += size;
    }
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes
}

/// Kernel that is constant on each class, with distinct values across classes.
pub fn kernel_from_classes<R: Rng + ?Sized>(
    group: &FiniteGroup,
    classes: &[Vec<usize>],
    rng: &mut R,
) -> Kernel {
    let vals = separated_values(classes.len(), rng);
    let mut sym = vec![Complex64::new(0.0, 0.0); group.order()];
    for (class, v) in classes.iter().zip(vals) {
        for &i in class {
            sym[i] = v;
        }
    }
    Kernel::from_symbol(group.clone(), sym).expect("symbol sized to group")
}

/// Random kernel in the class `A_L`: largest geometric multiplicity exactly `max_mult`.
pub fn random_kernel_with_multiplicity<R: Rng + ?Sized>(
    group: &FiniteGroup,
    max_mult: usize,
    rng: &mut R,
) -> Kernel {
    let classes = random_partition(group.order(), max_mult, rng);
    kernel_from_classes(group, &classes, rng)
}

/// Converts per-slice partitions of `0..m` into classes of `Z_d` (`d = m J`),
/// slice `k` holding the frequencies `k + l J`.
pub fn slice_classes(d: usize, m: usize, slices: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
    let j = d / m;
    slices
        .iter()
        .enumerate()
        .flat_map(|(k, parts)| {
            parts
                .iter()
                .map(move |p| p.iter().map(|&l| k + l * j).collect())
        })
        .collect()
}

/// Random kernel in the class `B_L` on `Z_d` for period `m`: every frequency
/// slice has multiplicity at most `max_mult`, and at least one reaches it.
pub fn random_periodic_kernel<R: Rng + ?Sized>(
    d: usize,
    m: usize,
    max_mult: usize,
    rng: &mut R,
) -> Kernel {
    let j = d / m;
    let tight = rng.gen_range(0..j);
    let slices: Vec<Vec<Vec<usize>>> = (0..j)
        .map(|k| {
            let cap = if k == tight {
                max_mult
            } else {
                rng.gen_range(1..=max_mult)
            };
            random_partition(m, cap, rng)
        })
        .collect();
    let group = FiniteGroup::cyclic(d).expect("d > 0");
    kernel_from_classes(&group, &slice_classes(d, m, &slices), rng)
}

/// `B_L` kernel whose slice `slice` has `planted` as one level set and is
/// otherwise split into singletons; other slices are random with cap `max_mult`.
pub fn planted_periodic_kernel<R: Rng + ?Sized>(
    d: usize,
    m: usize,
    slice: usize,
    planted: &[usize],
    max_mult: usize,
    rng: &mut R,
) -> Kernel {
    let j = d / m;
    let slices: Vec<Vec<Vec<usize>>> = (0..j)
        .map(|k| {
            if k == slice {
                let mut parts = vec![planted.to_vec()];
                parts.extend((0..m).filter(|l| !planted.contains(l)).map(|l| vec![l]));
                parts
            } else {
                random_partition(m, rng.gen_range(1..=max_mult), rng)
            }
        })
        .collect();
    let group = FiniteGroup::cyclic(d).expect("d > 0");
    kernel_from_classes(&group, &slice_classes(d, m, &slices), rng)
}

/// Random complex vector with standard normal-ish entries in `[-1, 1]^2`.
pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::min_period_bound;
    use crate::spectral::Tolerances;
    use crate::spectral::DEFAULT_GROUP_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn multiplicity_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=12 {
            for l in 1..=d {
                let k =
                    random_kernel_with_multiplicity(&FiniteGroup::cyclic(d).unwrap(), l, &mut rng);
                assert_eq!(k.level_partition(DEFAULT_GROUP_TOL).max_class_size(), l);
            }
        }
    }

    #[test]
    fn periodic_kernel_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (d, m) in [(6, 3), (8, 4), (12, 3), (9, 9)] {
            for l in 1..=m.min(3) {
                let k = random_periodic_kernel(d, m, l, &mut rng);
                assert_eq!(min_period_bound(&k, m, &Tolerances::default()).unwrap(), l);
            }
        }
        let k = planted_periodic_kernel(12, 4, 1, &[0, 2], 2, &mut rng);
        assert_eq!(min_period_bound(&k, 4, &Tolerances::default()).unwrap(), 2);
    }
}
