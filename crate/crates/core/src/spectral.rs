//! Convolution operators held by their frequency symbol.
//!
//! A circular convolution operator `A f = a * f` is diagonalized by the
//! character matrix: `A = F^* diag(a_hat) F`, where `a_hat` is the
//! unnormalized Fourier transform of the spatial kernel. Everything here works
//! with `a_hat` directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{fourier_matrix, FiniteGroup};
use crate::linalg::ABS_FLOOR;

/// Default absolute tolerance for grouping eigenvalues into level sets.
pub const DEFAULT_GROUP_TOL: f64 = 1e-8;

/// Tolerances shared by the rank-based tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value threshold for numerical rank.
    pub rank: f64,
    /// Absolute distance under which two eigenvalues are considered equal.
    pub group: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: crate::linalg::DEFAULT_RANK_TOL,
            group: DEFAULT_GROUP_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelOrigin {
    GivenInFrequency,
    TransformedFromSpace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    group: FiniteGroup,
    symbol: Vec<Complex64>,
    origin: KernelOrigin,
}

impl Kernel {
    /// Kernel given by its eigenvalues `a_hat`, one per frequency index.
    pub fn from_symbol(group: FiniteGroup, symbol: Vec<Complex64>) -> Result<Self> {
        if symbol.len() != group.order() {
            return Err(Error::LengthMismatch {
                expected: group.order(),
                found: symbol.len(),
            });
        }
        Ok(Kernel {
            group,
            symbol,
            origin: KernelOrigin::GivenInFrequency,
        })
    }

    pub fn from_real_symbol(group: FiniteGroup, symbol: &[f64]) -> Result<Self> {
        Self::from_symbol(
            group,
            symbol.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Kernel from its spatial convolution kernel `a`; the symbol is the
    /// unnormalized transform `a_hat(k) = sum_j a(j) omega^{<j,k>}`.
    pub fn from_space(group: FiniteGroup, a: &[Complex64]) -> Result<Self> {
        let n = group.order();
        if a.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: a.len(),
            });
        }
        let scale = (n as f64).sqrt();
        let symbol = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| group.character(k, j) * a[j])
                    .sum::<Complex64>()
                    * scale
            })
            .collect();
        Ok(Kernel {
            group,
            symbol,
            origin: KernelOrigin::TransformedFromSpace,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn symbol(&self) -> &[Complex64] {
        &self.symbol
    }

    pub fn origin(&self) -> KernelOrigin {
        self.origin
    }

    /// The adjoint operator `A^*`, whose symbol is the complex conjugate.
    pub fn adjoint(&self) -> Kernel {
        Kernel {
            group: self.group.clone(),
            symbol: self.symbol.iter().map(|z| z.conj()).collect(),
            origin: self.origin,
        }
    }

    pub fn level_partition(&self, tol: f64) -> LevelPartition {
        LevelPartition::from_values(&self.symbol, tol)
    }

    /// `A^power f`, computed as `F^* diag(a_hat^power) F f`.
    pub fn apply(&self, f: &[Complex64], power: u32) -> Result<Vec<Complex64>> {
        let n = self.group.order();
        if f.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: f.len(),
            });
        }
        if power == 0 {
            return Ok(f.to_vec());
        }
        let fm = fourier_matrix(&self.group);
        let fv = nalgebra::DVector::from_column_slice(f);
        let mut spectrum = fm.entries() * fv;
        for (s, a) in spectrum.iter_mut().zip(&self.symbol) {
            *s *= a.powu(power);
        }
        let out = fm.entries().adjoint() * spectrum;
        Ok(out.iter().copied().collect())
    }

    /// Degree of the minimal monic polynomial `p` with `p(A) e_i = 0`: the
    /// number of level classes met by the support of `F e_i`.
    pub fn annihilator_degree(&self, i: usize, tol: f64) -> Result<usize> {
        self.group.check_flat(i)?;
        Ok(self.annihilator_degree_in(&self.level_partition(tol), i))
    }

    pub(crate) fn annihilator_degree_in(&self, partition: &LevelPartition, i: usize) -> usize {
        let column = self.group.character_column(i);
        let mut hit = vec![false; partition.len()];
        for (k, z) in column.iter().enumerate() {
            if z.norm() > ABS_FLOOR {
                hit[partition.class_of(k)] = true;
            }
        }
        hit.into_iter().filter(|&h| h).count()
    }
}

/// Partition of the frequency indices into level sets of the symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelPartition {
    classes: Vec<Vec<usize>>,
    values: Vec<Complex64>,
    tol: f64,
    ambiguous: bool,
    #[serde(skip)]
    membership: Vec<usize>,
}

impl LevelPartition {
    /// Single-linkage grouping of `values` under absolute distance `tol`.
    ///
    /// The ambiguity flag is raised when a linked chain spans more than
    /// `10 * tol` between its extreme members.
    pub fn from_values(values: &[Complex64], tol: f64) -> Self {
        let n = values.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in i + 1..n {
                if (values[i] - values[j]).norm() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut root_to_class = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut membership = vec![0; n];
        for (i, slot) in membership.iter_mut().enumerate() {
            let r = find(&mut parent, i);
            if root_to_class[r] == usize::MAX {
                root_to_class[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[root_to_class[r]].push(i);
            *slot = root_to_class[r];
        }
        let mut ambiguous = false;
        let means = classes
            .iter()
            .map(|class| {
                for (a, &i) in class.iter().enumerate() {
                    for &j in &class[a + 1..] {
                        if (values[i] - values[j]).norm() > 10.0 * tol {
                            ambiguous = true;
                        }
                    }
                }
                class.iter().map(|&i| values[i]).sum::<Complex64>() / class.len() as f64
            })
            .collect();
        LevelPartition {
            classes,
            values: means,
            tol,
            ambiguous,
            membership,
        }
    }

    /// Builds a partition from explicit classes (used for orbit skeletons).
    pub fn from_classes(mut classes: Vec<Vec<usize>>, values: Vec<Complex64>, tol: f64) -> Self {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut paired: Vec<(Vec<usize>, Complex64)> = classes.drain(..).zip(values).collect();
        for (c, _) in paired.iter_mut() {
            c.sort_unstable();
        }
        paired.sort_by_key(|(c, _)| c.first().copied().unwrap_or(usize::MAX));
        let mut membership = vec![0; n];
        for (k, (c, _)) in paired.iter().enumerate() {
            for &i in c {
                membership[i] = k;
            }
        }
        let (classes, values) = paired.into_iter().unzip();
        LevelPartition {
            classes,
            values,
            tol,
            ambiguous: false,
            membership,
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn ambiguous(&self) -> bool {
        self.ambiguous
    }

    /// `N_A`, the number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `M_A`, the largest geometric multiplicity.
    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn class_of(&self, index: usize) -> usize {
        self.membership[index]
    }

    pub fn projection(&self, class_index: usize) -> Result<EigenProjection> {
        let indices = self
            .classes
            .get(class_index)
            .ok_or(Error::OutOfRange {
                index: class_index,
                bound: self.classes.len(),
            })?
            .clone();
        Ok(EigenProjection {
            class_index,
            indices,
        })
    }

    pub fn projections(&self) -> Vec<EigenProjection> {
        (0..self.len())
            .map(|k| self.projection(k).expect("valid class"))
            .collect()
    }
}

/// Orthogonal projection onto the coordinates of one level set, in the frequency domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenProjection {
    pub class_index: usize,
    pub indices: Vec<usize>,
}

impl EigenProjection {
    /// Zeroes every coordinate of `v` outside the level set.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for &i in &self.indices {
            if i < v.len() {
                out[i] = v[i];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{numerical_rank, CMatrix, DEFAULT_RANK_TOL};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z4(sym: &[f64]) -> Kernel {
        Kernel::from_real_symbol(FiniteGroup::cyclic(4).unwrap(), sym).unwrap()
    }

    fn e(n: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0, 0.0); n];
        v[i] = c(1.0, 0.0);
        v
    }

    /// Naive O(d^2) circular convolution on a product group.
    fn convolve(g: &FiniteGroup, a: &[Complex64], f: &[Complex64]) -> Vec<Complex64> {
        (0..g.order())
            .map(|k| {
                let kk = g.index(k);
                (0..g.order())
                    .map(|i| {
                        let diff = g.add(&kk, &g.neg(&g.index(i)));
                        a[i] * f[g.flat(&diff).unwrap()]
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn delta_kernel_has_all_ones_symbol() {
        let k = Kernel::from_space(FiniteGroup::cyclic(5).unwrap(), &e(5, 0)).unwrap();
        assert!(k.symbol().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
        assert_eq!(k.origin(), KernelOrigin::TransformedFromSpace);
    }

    #[test]
    fn averaging_kernel_has_dc_symbol() {
        let d = 6;
        let a = vec![c(1.0 / d as f64, 0.0); d];
        let k = Kernel::from_space(FiniteGroup::cyclic(d).unwrap(), &a).unwrap();
        assert!((k.symbol()[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(k.symbol()[1..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn shift_kernel_symbol() {
        let k = Kernel::from_space(FiniteGroup::cyclic(4).unwrap(), &e(4, 1)).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)];
        for (z, w) in k.symbol().iter().zip(expected) {
            assert!((z - w).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_length_mismatch() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert!(matches!(
            Kernel::from_space(g.clone(), &e(3, 0)),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(Kernel::from_real_symbol(g, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn level_partition_examples() {
        let p = z4(&[1.0, 2.0, 3.0, 4.0]).level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p.len(), 4);
        assert_eq!(p.max_class_size(), 1);

        let p = z4(&[1.0, 2.0, 1.0, 2.0]).level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p.classes(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.max_class_size(), 2);

        let p = z4(&[7.0; 4]).level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p.classes(), &[vec![0, 1, 2, 3]]);
        assert!(!p.ambiguous());
    }

    #[test]
    fn long_chain_sets_ambiguity_flag() {
        let tol = 1e-3;
        let vals: Vec<Complex64> = (0..20).map(|i| c(i as f64 * 0.9e-3, 0.0)).collect();
        let p = LevelPartition::from_values(&vals, tol);
        assert_eq!(p.len(), 1);
        assert!(p.ambiguous());

        let short: Vec<Complex64> = (0..3).map(|i| c(i as f64 * 0.9e-3, 0.0)).collect();
        assert!(!LevelPartition::from_values(&short, tol).ambiguous());
    }

    #[test]
    fn apply_operator_examples() {
        let k = z4(&[1.0, 2.0, 3.0, 4.0]);
        let f = vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 0.0), c(3.0, -1.0)];
        assert_eq!(k.apply(&f, 0).unwrap(), f);

        let id = z4(&[1.0; 4]);
        for p in 0..4 {
            let out = id.apply(&f, p).unwrap();
            assert!(out.iter().zip(&f).all(|(a, b)| (a - b).norm() < 1e-12));
        }

        let shift = Kernel::from_space(FiniteGroup::cyclic(4).unwrap(), &e(4, 1)).unwrap();
        let out = shift.apply(&e(4, 0), 1).unwrap();
        let oracle = convolve(shift.group(), &e(4, 1), &e(4, 0));
        for (x, y) in out.iter().zip(e(4, 1)) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(out.iter().zip(&oracle).all(|(a, b)| (a - b).norm() < 1e-12));
        assert!(shift.apply(&e(3, 0), 1).is_err());
    }

    #[test]
    fn apply_matches_spatial_convolution_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for factors in [
            vec![1],
            vec![2],
            vec![7],
            vec![12],
            vec![32],
            vec![3, 4],
            vec![4, 4],
        ] {
            let g = FiniteGroup::new(&factors).unwrap();
            let n = g.order();
            for _ in 0..3 {
                // contractive kernel keeps iterates bounded
                let a: Vec<Complex64> = (0..n)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / n as f64)
                    .collect();
                let f: Vec<Complex64> = (0..n)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let k = Kernel::from_space(g.clone(), &a).unwrap();
                let mut oracle = f.clone();
                for p in 0..=8u32 {
                    let fast = k.apply(&f, p).unwrap();
                    let err = fast
                        .iter()
                        .zip(&oracle)
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0, f64::max);
                    assert!(err < 1e-10, "factors {factors:?} power {p}: {err}");
                    oracle = convolve(&g, &a, &oracle);
                }
            }
        }
    }

    #[test]
    fn annihilator_degree_examples() {
        for i in 0..4 {
            assert_eq!(
                z4(&[1.0, 2.0, 3.0, 4.0])
                    .annihilator_degree(i, DEFAULT_GROUP_TOL)
                    .unwrap(),
                4
            );
            assert_eq!(
                z4(&[1.0, 2.0, 1.0, 2.0])
                    .annihilator_degree(i, DEFAULT_GROUP_TOL)
                    .unwrap(),
                2
            );
            assert_eq!(
                z4(&[3.0; 4])
                    .annihilator_degree(i, DEFAULT_GROUP_TOL)
                    .unwrap(),
                1
            );
        }
        assert!(z4(&[1.0; 4])
            .annihilator_degree(4, DEFAULT_GROUP_TOL)
            .is_err());
    }

    /// The first r Krylov vectors are independent and the first r+1 dependent.
    #[test]
    fn annihilator_degree_is_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [3usize, 6, 8] {
            let g = FiniteGroup::cyclic(d).unwrap();
            let palette: Vec<Complex64> = (0..3)
                .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 3.0))
                .collect();
            let sym: Vec<Complex64> = (0..d).map(|_| palette[rng.gen_range(0..3)]).collect();
            let k = Kernel::from_symbol(g.clone(), sym.clone()).unwrap();
            for i in 0..d {
                let r = k.annihilator_degree(i, DEFAULT_GROUP_TOL).unwrap();
                let col = g.character_column(i);
                let krylov =
                    |len: usize| CMatrix::from_fn(len, d, |s, j| col[j] * sym[j].powu(s as u32));
                assert_eq!(numerical_rank(&krylov(r), DEFAULT_RANK_TOL).unwrap(), r);
                assert_eq!(numerical_rank(&krylov(r + 1), DEFAULT_RANK_TOL).unwrap(), r);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let k = z4(&[1.0, 2.0, 1.0, 2.0]);
        let p = k.level_partition(DEFAULT_GROUP_TOL);
        let p0 = p.projection(0).unwrap();
        let inside = vec![c(1.0, 1.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)];
        assert_eq!(p0.project(&inside), inside);
        let outside = vec![c(0.0, 0.0), c(5.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)];
        assert!(p0.project(&outside).iter().all(|z| z.norm() == 0.0));
        let v = vec![c(1.0, 0.0), c(2.0, 1.0), c(3.0, 0.0), c(4.0, -2.0)];
        let mut total = vec![c(0.0, 0.0); 4];
        for proj in p.projections() {
            for (t, x) in total.iter_mut().zip(proj.project(&v)) {
                *t += x;
            }
        }
        assert_eq!(total, v);
        assert!(p.projection(2).is_err());
    }

    proptest! {
        #[test]
        fn partition_covers_every_index(vals in prop::collection::vec(0u8..4, 1..40)) {
            let sym: Vec<Complex64> = vals.iter().map(|&v| c(v as f64, 0.0)).collect();
            let p = LevelPartition::from_values(&sym, DEFAULT_GROUP_TOL);
            let total: usize = p.classes().iter().map(Vec::len).sum();
            prop_assert_eq!(total, sym.len());
            prop_assert!(p.max_class_size() * p.len() >= sym.len());
            for (k, class) in p.classes().iter().enumerate() {
                for &i in class {
                    prop_assert_eq!(p.class_of(i), k);
                    prop_assert!((sym[i] - p.values()[k]).norm() <= DEFAULT_GROUP_TOL);
                }
            }
            for w in p.classes().windows(2) {
                prop_assert!(w[0][0] < w[1][0]);
            }
        }
    }
}
