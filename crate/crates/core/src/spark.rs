//! Spark of matrices, full-spark row selections of character matrices, and
//! the Kronecker obstruction for `F_d (x) F_d`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, Colex};
use crate::error::{Error, Result};
use crate::group::{character_submatrix, submatrix, FiniteGroup, GroupIndex};
use crate::linalg::{numerical_rank, CMatrix};

/// Default cap on the number of column subsets examined.
pub const DEFAULT_SUBSET_CAP: u64 = 2_000_000;

const CHUNK: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparkResult {
    pub spark: usize,
    /// Smallest dependent column subset found first in colex order.
    pub witness: Option<Vec<usize>>,
}

impl SparkResult {
    pub fn is_full_spark(&self, rows: usize) -> bool {
        self.spark == rows + 1
    }
}

/// First `size`-subset of columns (colex order) whose columns are dependent.
fn first_dependent(mat: &CMatrix, size: usize, tol: f64) -> Result<Option<Vec<usize>>> {
    let rows: Vec<usize> = (0..mat.nrows()).collect();
    let mut iter = Colex::new(mat.ncols(), size);
    loop {
        let chunk: Vec<Vec<usize>> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        let hit = chunk
            .par_iter()
            .map(|cols| -> Result<bool> {
                let block = submatrix(mat, &rows, cols)?;
                Ok(numerical_rank(&block, tol)? < size)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .position(|dep| dep);
        if let Some(p) = hit {
            return Ok(Some(chunk[p].clone()));
        }
    }
}

/// Spark with an explicit subset-count cap.
///
/// Column subsets of size `1..=min(M, N)` are scanned in increasing size; if
/// none is dependent the result is `M + 1` (full spark).
pub fn spark_with_cap(mat: &CMatrix, tol: f64, cap: u64) -> Result<SparkResult> {
    let (m, n) = (mat.nrows(), mat.ncols());
    let mut examined: u64 = 0;
    for size in 1..=m.min(n) {
        examined = examined.saturating_add(binomial(n, size));
        if examined > cap {
            return Err(Error::CapExceeded { cap });
        }
        if let Some(w) = first_dependent(mat, size, tol)? {
            return Ok(SparkResult {
                spark: size,
                witness: Some(w),
            });
        }
    }
    // any M+1 columns in an M-dimensional space are dependent
    Ok(SparkResult {
        spark: m + 1,
        witness: None,
    })
}

pub fn spark(mat: &CMatrix, tol: f64) -> Result<usize> {
    Ok(spark_with_cap(mat, tol, DEFAULT_SUBSET_CAP)?.spark)
}

/// A set of rows of the character matrix of `group`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSelection {
    group: FiniteGroup,
    rows: BTreeSet<usize>,
}

impl RowSelection {
    pub fn new(group: FiniteGroup, rows: impl IntoIterator<Item = usize>) -> Result<Self> {
        let rows: BTreeSet<usize> = rows.into_iter().collect();
        if rows.is_empty() {
            return Err(Error::InvalidArgument("row selection is empty".into()));
        }
        for &r in &rows {
            group.check_flat(r)?;
        }
        Ok(RowSelection { group, rows })
    }

    pub fn from_indices(group: FiniteGroup, rows: &[GroupIndex]) -> Result<Self> {
        let flat = rows
            .iter()
            .map(|r| group.flat(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, flat)
    }

    pub fn cyclic(d: usize, rows: &[usize]) -> Result<Self> {
        Self::new(FiniteGroup::cyclic(d)?, rows.iter().copied())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rows(&self) -> Vec<usize> {
        self.rows.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The `|rows| x order` submatrix of the character matrix.
    pub fn matrix(&self) -> CMatrix {
        let cols: Vec<usize> = (0..self.group.order()).collect();
        character_submatrix(&self.group, &self.rows(), &cols).expect("rows validated")
    }
}

/// Spark of the selected row-submatrix.
pub fn row_spark(sel: &RowSelection, tol: f64, cap: u64) -> Result<SparkResult> {
    spark_with_cap(&sel.matrix(), tol, cap)
}

/// Full spark test: every `L x L` minor of the selected rows is nonsingular.
///
/// Independence of all `L`-subsets implies independence of every smaller
/// subset, so only size `L` is scanned.
pub fn is_full_spark_rows_with_cap(sel: &RowSelection, tol: f64, cap: u64) -> Result<bool> {
    let n = sel.group.order();
    let l = sel.len();
    if l > n {
        return Err(Error::InvalidArgument(format!("{l} rows exceed order {n}")));
    }
    if binomial(n, l) > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(first_dependent(&sel.matrix(), l, tol)?.is_none())
}

pub fn is_full_spark_rows(sel: &RowSelection, tol: f64) -> Result<bool> {
    is_full_spark_rows_with_cap(sel, tol, DEFAULT_SUBSET_CAP)
}

/// Divisors of `d` in ascending order.
pub fn divisors(d: usize) -> Vec<usize> {
    (1..=d).filter(|m| d.is_multiple_of(*m)).collect()
}

/// For each divisor `m` of `d`, the residues mod `m` split `omega` into parts
/// of size `floor(|omega|/m)` or `ceil(|omega|/m)`.
pub fn is_uniformly_distributed(d: usize, omega: &[usize]) -> bool {
    let set: BTreeSet<usize> = omega.iter().map(|&x| x % d.max(1)).collect();
    let size = set.len();
    divisors(d).into_iter().all(|m| {
        let mut counts = vec![0usize; m];
        for &x in &set {
            counts[x % m] += 1;
        }
        let (lo, hi) = (size / m, size.div_ceil(m));
        counts.iter().all(|&c| c == lo || c == hi)
    })
}

pub fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// `Some(p)` when `d = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power_base(d: usize) -> Option<usize> {
    if d < 2 {
        return None;
    }
    let p = (2..=d).find(|k| d.is_multiple_of(*k))?;
    let mut rest = d;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "op", content = "by")]
pub enum RowTransform {
    /// Add a fixed group element.
    Translate(Vec<usize>),
    /// Multiply coordinate `t` by the `t`-th factor; each must be a unit mod its cyclic order.
    Dilate(Vec<usize>),
    Complement,
}

/// Applies a full-spark-preserving transform to a row selection.
pub fn transform_rows(sel: &RowSelection, op: &RowTransform) -> Result<RowSelection> {
    let g = &sel.group;
    match op {
        RowTransform::Translate(t) => {
            let t = g.element(&t.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
            let rows = sel
                .rows
                .iter()
                .map(|&r| g.flat(&g.add(&g.index(r), &t)).expect("valid"));
            RowSelection::new(g.clone(), rows)
        }
        RowTransform::Dilate(c) => {
            if c.len() != g.rank() {
                return Err(Error::LengthMismatch {
                    expected: g.rank(),
                    found: c.len(),
                });
            }
            for (k, (&ck, &d)) in c.iter().zip(g.factors()).enumerate() {
                let gcd = ck.gcd(&d);
                if gcd != 1 {
                    return Err(Error::GcdViolation {
                        parameter: format!("dilation factor {k} = {ck}"),
                        divisor: gcd,
                    });
                }
            }
            let rows = sel.rows.iter().map(|&r| {
                let idx = g.index(r);
                let scaled: Vec<usize> = idx
                    .0
                    .iter()
                    .zip(c)
                    .zip(g.factors())
                    .map(|((&x, &ck), &d)| (x * ck) % d)
                    .collect();
                g.flat(&GroupIndex(scaled)).expect("valid")
            });
            RowSelection::new(g.clone(), rows)
        }
        RowTransform::Complement => {
            let rows: Vec<usize> = (0..g.order()).filter(|r| !sel.rows.contains(r)).collect();
            RowSelection::new(g.clone(), rows)
        }
    }
}

/// Annihilator subgroup `{(s,p) : (dk s + dl p) = 0 mod d}` of the cyclic
/// subgroup generated by `(dk, dl)` in `Z_d x Z_d`, in ascending flat order.
pub fn annihilator_subgroup(d: usize, generator: (usize, usize)) -> Vec<(usize, usize)> {
    let (dk, dl) = (generator.0 % d, generator.1 % d);
    (0..d)
        .flat_map(|s| (0..d).map(move |p| (s, p)))
        .filter(|&(s, p)| (dk * s + dl * p) % d == 0)
        .collect()
}

/// Finds `L` columns of `F_d (x) F_d` on which the given `L` rows are singular.
///
/// Constructive route: with `G` generated by the difference of the first two
/// rows and `H` its annihilator (`|H| = d^2/|G| >= d`), any `L` columns from
/// `H` make those two rows identical. Exhaustive search is the fallback for `L <= 4`.
pub fn find_singular_witness(
    d: usize,
    rows: &[(usize, usize)],
    tol: f64,
) -> Result<Option<Vec<(usize, usize)>>> {
    let mut uniq: Vec<(usize, usize)> = rows.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    let l = uniq.len();
    if l < 2 || l > d {
        return Err(Error::InvalidArgument(format!(
            "need 1 < L <= d, got L = {l}, d = {d}"
        )));
    }
    if let Some(&(a, b)) = uniq.iter().find(|&&(a, b)| a >= d || b >= d) {
        return Err(Error::OutOfRange {
            index: a.max(b),
            bound: d,
        });
    }
    let g = FiniteGroup::new(&[d, d])?;
    let flat = |(a, b): (usize, usize)| a * d + b;
    let row_flat: Vec<usize> = uniq.iter().map(|&x| flat(x)).collect();
    let singular = |cols: &[usize]| -> Result<bool> {
        Ok(numerical_rank(&character_submatrix(&g, &row_flat, cols)?, tol)? < l)
    };

    let (k1, l1) = uniq[0];
    let (k2, l2) = uniq[1];
    let generator = ((k1 + d - k2) % d, (l1 + d - l2) % d);
    let h = annihilator_subgroup(d, generator);
    if h.len() >= l {
        let cols: Vec<(usize, usize)> = h.into_iter().take(l).collect();
        let cols_flat: Vec<usize> = cols.iter().map(|&x| flat(x)).collect();
        if singular(&cols_flat)? {
            return Ok(Some(cols));
        }
    }
    if l <= 4 {
        for cols in Colex::new(d * d, l) {
            if singular(&cols)? {
                return Ok(Some(cols.iter().map(|&c| (c / d, c % d)).collect()));
            }
        }
    }
    Ok(None)
}
