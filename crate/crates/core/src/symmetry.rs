//! Frequency-symmetry classes on `Z_d x Z_d` (odd `d`) and kernels that
//! realize them.
//!
//! Frequencies are identified with the centered range
//! `I = {-(d-1)/2, ..., (d-1)/2}^2`; orbits are computed there and mapped
//! back to residues.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::random::separated_values;
use crate::spectral::{Kernel, LevelPartition, DEFAULT_GROUP_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    /// Level sets are the shells `max(|s|, |p|) = l`.
    Linf,
    /// `{(s,p), (s,-p), (-s,p), (-s,-p)}`
    Quadrantal,
    /// `{(p,s), (s,p), (-p,-s), (-s,-p)}`
    Diagonal,
    /// The eight sign/swap images of `(s,p)`.
    Octagonal,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 4] = [
        SymmetryKind::Linf,
        SymmetryKind::Quadrantal,
        SymmetryKind::Diagonal,
        SymmetryKind::Octagonal,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryClass {
    kind: SymmetryKind,
    d: usize,
}

/// Orbits of a symmetry class as flat indices of `Z_d x Z_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    /// Sorted member lists, ordered by smallest flat index.
    pub classes: Vec<Vec<usize>>,
    /// Lexicographically smallest member of each orbit in centered coordinates.
    pub representatives: Vec<(i64, i64)>,
}

impl Orbits {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Level-partition skeleton with placeholder values (the orbit index).
    pub fn to_partition(&self) -> LevelPartition {
        let values = (0..self.len())
            .map(|k| Complex64::new(k as f64, 0.0))
            .collect();
        LevelPartition::from_classes(self.classes.clone(), values, DEFAULT_GROUP_TOL)
    }
}

impl SymmetryClass {
    pub fn new(kind: SymmetryKind, d: usize) -> Result<Self> {
        if d.is_multiple_of(2) {
            return Err(Error::EvenDimension(d));
        }
        Ok(SymmetryClass { kind, d })
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn group(&self) -> FiniteGroup {
        FiniteGroup::new(&[self.d, self.d]).expect("d > 0")
    }

    fn image(&self, s: i64, p: i64) -> BTreeSet<(i64, i64)> {
        let pts: Vec<(i64, i64)> = match self.kind {
            SymmetryKind::Linf => {
                let h = (self.d as i64 - 1) / 2;
                let l = s.abs().max(p.abs());
                (-h..=h)
                    .flat_map(|a| (-h..=h).map(move |b| (a, b)))
                    .filter(|&(a, b)| a.abs().max(b.abs()) == l)
                    .collect()
            }
            SymmetryKind::Quadrantal => vec![(s, p), (s, -p), (-s, p), (-s, -p)],
            SymmetryKind::Diagonal => vec![(p, s), (s, p), (-p, -s), (-s, -p)],
            SymmetryKind::Octagonal => {
                vec![
                    (s, p),
                    (p, s),
                    (-p, s),
                    (-s, p),
                    (-s, -p),
                    (-p, -s),
                    (p, -s),
                    (s, -p),
                ]
            }
        };
        pts.into_iter().collect()
    }

    pub fn orbits(&self) -> Orbits {
        let d = self.d as i64;
        let h = (d - 1) / 2;
        let flat = |(s, p): (i64, i64)| (s.rem_euclid(d) * d + p.rem_euclid(d)) as usize;
        let mut seen = vec![false; (d * d) as usize];
        let mut found: Vec<(Vec<usize>, (i64, i64))> = Vec::new();
        for s in -h..=h {
            for p in -h..=h {
                if seen[flat((s, p))] {
                    continue;
                }
                let orbit = self.image(s, p);
                let rep = *orbit.iter().next().expect("orbit contains (s,p)");
                let mut members: Vec<usize> = orbit.iter().map(|&x| flat(x)).collect();
                members.sort_unstable();
                for &m in &members {
                    seen[m] = true;
                }
                found.push((members, rep));
            }
        }
        found.sort_by_key(|(m, _)| m[0]);
        let (classes, representatives) = found.into_iter().unzip();
        Orbits {
            classes,
            representatives,
        }
    }

    /// Kernel constant on orbits with distinct, well-separated values per orbit.
    pub fn random_kernel(&self, seed: u64) -> Kernel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((self.d as u64) << 32) ^ self.kind as u64);
        let orbits = self.orbits();
        let values = separated_values(orbits.len(), &mut rng);
        let mut sym = vec![Complex64::new(0.0, 0.0); self.d * self.d];
        for (class, v) in orbits.classes.iter().zip(values) {
            for &i in class {
                sym[i] = v;
            }
        }
        Kernel::from_symbol(self.group(), sym).expect("sized to group")
    }
}

pub fn orbits(sym: &SymmetryClass) -> Orbits {
    sym.orbits()
}

pub fn random_symmetric_kernel(sym: &SymmetryClass, seed: u64) -> Kernel {
    sym.random_kernel(seed)
}

/// Real symbol on `Z_d` (odd `d`) with `a_hat(j) = a_hat(d-j)` and strictly
/// decreasing on `0..=(d-1)/2`: `a_hat(j) = d - min(j, d-j)`.
pub fn monotone_symmetric_kernel_1d(d: usize) -> Result<Kernel> {
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    let sym: Vec<f64> = (0..d).map(|j| (d - j.min(d - j)) as f64).collect();
    Kernel::from_real_symbol(FiniteGroup::cyclic(d)?, &sym)
}

/// Random symmetric, strictly decreasing real symbol on `Z_d` (odd `d`).
pub fn random_monotone_symmetric_kernel_1d<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> Result<Kernel> {
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    let h = (d - 1) / 2;
    let mut levels = Vec::with_capacity(h + 1);
    let mut v: f64 = rng.gen_range(1.0..2.0);
    for _ in 0..=h {
        levels.push(v);
        v -= rng.gen_range(0.2..0.6);
    }
    let sym: Vec<f64> = (0..d).map(|j| levels[j.min(d - j)]).collect();
    Kernel::from_real_symbol(FiniteGroup::cyclic(d)?, &sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_dimension_rejected() {
        assert_eq!(
            SymmetryClass::new(SymmetryKind::Linf, 4),
            Err(Error::EvenDimension(4))
        );
        assert!(monotone_symmetric_kernel_1d(6).is_err());
    }

    #[test]
    fn linf_shells_at_five() {
        let o = SymmetryClass::new(SymmetryKind::Linf, 5).unwrap().orbits();
        let mut sizes: Vec<usize> = o.classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 8, 16]);
        assert_eq!(o.max_size(), 4 * 5 - 4);
        assert_eq!(o.len(), 5_usize.div_ceil(2));
    }

    #[test]
    fn quadrantal_and_octagonal_counts_at_five() {
        let q = SymmetryClass::new(SymmetryKind::Quadrantal, 5)
            .unwrap()
            .orbits();
        assert_eq!(q.len(), 9);
        assert_eq!(q.max_size(), 4);
        let o = SymmetryClass::new(SymmetryKind::Octagonal, 5)
            .unwrap()
            .orbits();
        assert_eq!(o.len(), 6);
        assert_eq!(o.max_size(), 8);
    }

    #[test]
    fn orbits_partition_the_group() {
        for d in [1usize, 3, 5, 7, 9] {
            for kind in SymmetryKind::ALL {
                let o = SymmetryClass::new(kind, d).unwrap().orbits();
                let mut all: Vec<usize> = o.classes.iter().flatten().copied().collect();
                all.sort_unstable();
                assert_eq!(all, (0..d * d).collect::<Vec<_>>(), "{kind:?} d={d}");
                let bound = match kind {
                    SymmetryKind::Octagonal => 8,
                    SymmetryKind::Linf => usize::MAX,
                    _ => 4,
                };
                if kind != SymmetryKind::Linf {
                    assert!(o.classes.iter().all(|c| bound % c.len() == 0));
                } else {
                    let mut sizes: Vec<usize> = o.classes.iter().map(Vec::len).collect();
                    sizes.sort_unstable();
                    let expected: Vec<usize> = (0..=(d - 1) / 2)
                        .map(|l| if l == 0 { 1 } else { 8 * l })
                        .collect();
                    assert_eq!(sizes, expected);
                }
            }
        }
    }

    #[test]
    fn orbit_counts_match_closed_forms() {
        for d in [3usize, 5, 7, 9, 11] {
            let count = |k| SymmetryClass::new(k, d).unwrap().orbits().len();
            assert_eq!(count(SymmetryKind::Linf), d.div_ceil(2));
            assert_eq!(count(SymmetryKind::Quadrantal), (d + 1) * (d + 1) / 4);
            assert_eq!(count(SymmetryKind::Octagonal), (d + 1) * (d + 3) / 8);
            // derived: 1 + (d-1) two-element diagonal orbits + (d-1)^2/4 generic
            assert_eq!(count(SymmetryKind::Diagonal), (d + 1) * (d + 1) / 4);
        }
    }

    #[test]
    fn random_kernel_realizes_orbits() {
        for kind in SymmetryKind::ALL {
            let sym = SymmetryClass::new(kind, 5).unwrap();
            let o = sym.orbits();
            let k1 = sym.random_kernel(1);
            let k2 = sym.random_kernel(2);
            assert_eq!(
                k1.level_partition(DEFAULT_GROUP_TOL).classes(),
                o.to_partition().classes()
            );
            assert_eq!(
                k2.level_partition(DEFAULT_GROUP_TOL).classes(),
                o.to_partition().classes()
            );
            assert_ne!(k1.symbol(), k2.symbol());
            assert_eq!(sym.random_kernel(1), k1);
        }
        let q = SymmetryClass::new(SymmetryKind::Quadrantal, 5).unwrap();
        assert_eq!(
            q.random_kernel(9)
                .level_partition(DEFAULT_GROUP_TOL)
                .max_class_size(),
            4
        );
    }

    #[test]
    fn monotone_kernel_partitions() {
        let k = monotone_symmetric_kernel_1d(5).unwrap();
        let sym: Vec<f64> = k.symbol().iter().map(|z| z.re).collect();
        assert_eq!(sym, vec![5.0, 4.0, 3.0, 3.0, 4.0]);
        let p = k.level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p.classes(), &[vec![0], vec![1, 4], vec![2, 3]]);
        assert_eq!(p.max_class_size(), 2);
        let p3 = monotone_symmetric_kernel_1d(3)
            .unwrap()
            .level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p3.classes(), &[vec![0], vec![1, 2]]);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_monotone_symmetric_kernel_1d(7, &mut rng).unwrap();
        let p = r.level_partition(DEFAULT_GROUP_TOL);
        assert_eq!(p.classes(), &[vec![0], vec![1, 6], vec![2, 5], vec![3, 4]]);
    }
}
