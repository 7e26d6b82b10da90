//! Finite abelian groups `Z_{d1} x ... x Z_{dn}`, their normalized character
//! matrices, and flat-index arithmetic.
//!
//! Elements are labeled by multi-indices `(i1, ..., in)` and flattened in
//! row-major order, so for two factors `(i1, i2) <-> d2 * i1 + i2`. This is
//! the labeling under which the character matrix of a product group is the
//! Kronecker product of the factor matrices.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// A multi-index with one residue per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupIndex(pub Vec<usize>);

impl GroupIndex {
    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for GroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [single] => write!(f, "{single}"),
            coords => {
                write!(f, "(")?;
                for (k, c) in coords.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    factors: Vec<usize>,
    order: usize,
}

impl FiniteGroup {
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("factor list is empty".into()));
        }
        if let Some(pos) = factors.iter().position(|&d| d == 0) {
            return Err(Error::InvalidGroup(format!("factor {pos} is zero")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidGroup("order overflows".into()))?;
        Ok(FiniteGroup {
            factors: factors.to_vec(),
            order,
        })
    }

    pub fn cyclic(d: usize) -> Result<Self> {
        Self::new(&[d])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// Reduces arbitrary signed coordinates modulo each factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupIndex> {
        if coords.len() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                found: coords.len(),
            });
        }
        Ok(GroupIndex(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as usize)
                .collect(),
        ))
    }

    pub fn check(&self, idx: &GroupIndex) -> Result<()> {
        if idx.0.len() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                found: idx.0.len(),
            });
        }
        for (&c, &d) in idx.0.iter().zip(&self.factors) {
            if c >= d {
                return Err(Error::OutOfRange { index: c, bound: d });
            }
        }
        Ok(())
    }

    pub fn check_flat(&self, flat: usize) -> Result<()> {
        if flat >= self.order {
            Err(Error::OutOfRange {
                index: flat,
                bound: self.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn flat(&self, idx: &GroupIndex) -> Result<usize> {
        self.check(idx)?;
        Ok(idx
            .0
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, &d)| acc * d + c))
    }

    pub fn index(&self, flat: usize) -> GroupIndex {
        let mut coords = vec![0; self.rank()];
        let mut rest = flat;
        for (slot, &d) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = rest % d;
            rest /= d;
        }
        GroupIndex(coords)
    }

    pub fn add(&self, a: &GroupIndex, b: &GroupIndex) -> GroupIndex {
        GroupIndex(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupIndex) -> GroupIndex {
        GroupIndex(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn add_flat(&self, a: usize, b: usize) -> usize {
        let sum = self.add(&self.index(a), &self.index(b));
        self.flat(&sum).expect("sum of valid indices is valid")
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupIndex> + '_ {
        (0..self.order).map(|k| self.index(k))
    }

    /// Entry `(row, col)` of the normalized character matrix, on flat indices.
    pub fn character(&self, row: usize, col: usize) -> Complex64 {
        let r = self.index(row);
        let c = self.index(col);
        let mut value = Complex64::new(1.0, 0.0);
        for ((&j, &k), &d) in r.0.iter().zip(&c.0).zip(&self.factors) {
            let phase = ((j * k) % d) as f64 / d as f64;
            value *= Complex64::from_polar(1.0 / (d as f64).sqrt(), -2.0 * PI * phase);
        }
        value
    }

    /// Column `col` of the normalized character matrix, i.e. `F e_col`.
    pub fn character_column(&self, col: usize) -> Vec<Complex64> {
        (0..self.order)
            .map(|row| self.character(row, col))
            .collect()
    }
}

/// Normalized character matrix: rows are characters, columns group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterMatrix {
    group: FiniteGroup,
    entries: CMatrix,
}

impl CharacterMatrix {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Rows and columns in ascending flat order; duplicates are dropped.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<CMatrix> {
        submatrix(&self.entries, rows, cols)
    }
}

/// Builds `F_{d1} (x) ... (x) F_{dn}` with `F_d = (omega_d^{jk}) / sqrt(d)`, `omega_d = e^{-2 pi i / d}`.
pub fn fourier_matrix(group: &FiniteGroup) -> CharacterMatrix {
    let n = group.order();
    let entries = CMatrix::from_fn(n, n, |r, c| group.character(r, c));
    CharacterMatrix {
        group: group.clone(),
        entries,
    }
}

fn sorted_unique(idx: &[usize]) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Dense submatrix with rows and columns taken in ascending order.
pub fn submatrix(mat: &CMatrix, rows: &[usize], cols: &[usize]) -> Result<CMatrix> {
    let rows = sorted_unique(rows);
    let cols = sorted_unique(cols);
    if let Some(&r) = rows.iter().find(|&&r| r >= mat.nrows()) {
        return Err(Error::OutOfRange {
            index: r,
            bound: mat.nrows(),
        });
    }
    if let Some(&c) = cols.iter().find(|&&c| c >= mat.ncols()) {
        return Err(Error::OutOfRange {
            index: c,
            bound: mat.ncols(),
        });
    }
    Ok(CMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        mat[(rows[i], cols[j])]
    }))
}

/// Submatrix of the character matrix computed entrywise without materializing it.
pub fn character_submatrix(group: &FiniteGroup, rows: &[usize], cols: &[usize]) -> Result<CMatrix> {
    let rows = sorted_unique(rows);
    let cols = sorted_unique(cols);
    for &x in rows.iter().chain(&cols) {
        group.check_flat(x)?;
    }
    Ok(CMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        group.character(rows[i], cols[j])
    }))
}
