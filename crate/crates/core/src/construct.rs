//! Builders for universal sampling plans and an exhaustive minimal-set search.

use std::collections::BTreeMap;

use num_integer::gcd;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, Colex};
use crate::error::{Error, Result};
use crate::frame::{
    frame_test_direct, frame_test_projection, min_sensor_bound, saturating_plan, PeriodicPlan,
    SamplingPlan,
};
use crate::group::{FiniteGroup, GroupIndex};
use crate::spark::{
    is_full_spark_rows, is_prime, is_uniformly_distributed, prime_power_base, row_spark,
    RowSelection,
};
use crate::spectral::{Kernel, Tolerances};
use crate::symmetry::SymmetryKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecipeKind {
    Consecutive,
    GcdPair,
    PrimeAny,
    PrimePowerUniform,
    PeriodicW,
    SymLinf,
    SymQuadrantal,
    SymDiagonal,
    SymOctagonal,
    SymLinfPeriodic,
    SymQuadrantalPeriodic,
    SymDiagonalPeriodic,
    SymOctagonalPeriodic,
}

impl RecipeKind {
    fn sym(kind: SymmetryKind, periodic: bool) -> Self {
        match (kind, periodic) {
            (SymmetryKind::Linf, false) => RecipeKind::SymLinf,
            (SymmetryKind::Quadrantal, false) => RecipeKind::SymQuadrantal,
            (SymmetryKind::Diagonal, false) => RecipeKind::SymDiagonal,
            (SymmetryKind::Octagonal, false) => RecipeKind::SymOctagonal,
            (SymmetryKind::Linf, true) => RecipeKind::SymLinfPeriodic,
            (SymmetryKind::Quadrantal, true) => RecipeKind::SymQuadrantalPeriodic,
            (SymmetryKind::Diagonal, true) => RecipeKind::SymDiagonalPeriodic,
            (SymmetryKind::Octagonal, true) => RecipeKind::SymOctagonalPeriodic,
        }
    }
}

/// How a recipe fixes its time depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "depth")]
pub enum DepthRule {
    /// The same depth for every sensor, independent of the kernel.
    Uniform(usize),
    /// `N_A - 1`, resolved once a kernel is known.
    DistinctEigenvalues,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub kind: RecipeKind,
    pub params: BTreeMap<String, usize>,
    pub claimed_depth: DepthRule,
}

impl ConstructionRecipe {
    fn new(kind: RecipeKind, params: &[(&str, usize)], claimed_depth: DepthRule) -> Self {
        ConstructionRecipe {
            kind,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            claimed_depth,
        }
    }
}

/// Sensor set plus depth rule; becomes a [`SamplingPlan`] once bound to a kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub recipe: ConstructionRecipe,
    pub group: FiniteGroup,
    pub omega: Vec<usize>,
}

impl Construction {
    fn new(recipe: ConstructionRecipe, group: FiniteGroup, mut omega: Vec<usize>) -> Self {
        omega.sort_unstable();
        omega.dedup();
        Construction {
            recipe,
            group,
            omega,
        }
    }

    pub fn depth_rule(&self) -> DepthRule {
        self.recipe.claimed_depth
    }

    /// The plan, when the depth does not depend on the kernel.
    pub fn plan(&self) -> Option<SamplingPlan> {
        match self.recipe.claimed_depth {
            DepthRule::Uniform(l) => Some(
                SamplingPlan::uniform(self.group.clone(), self.omega.iter().copied(), l)
                    .expect("validated"),
            ),
            DepthRule::DistinctEigenvalues => None,
        }
    }

    fn claimed_depth_for(&self, kernel: &Kernel, tol: &Tolerances) -> Result<usize> {
        if kernel.group() != &self.group {
            return Err(Error::InvalidPlan(
                "construction group does not match kernel".into(),
            ));
        }
        Ok(match self.recipe.claimed_depth {
            DepthRule::Uniform(l) => l,
            DepthRule::DistinctEigenvalues => {
                kernel.level_partition(tol.group).len().saturating_sub(1)
            }
        })
    }

    /// Plan with the recipe's claimed depth resolved against `kernel`.
    pub fn bind(&self, kernel: &Kernel, tol: &Tolerances) -> Result<SamplingPlan> {
        let l = self.claimed_depth_for(kernel, tol)?;
        SamplingPlan::uniform(self.group.clone(), self.omega.iter().copied(), l)
    }

    /// Like [`bind`](Self::bind), but each depth is lowered to `r_i - 1` when
    /// that is smaller.
    pub fn bind_tight(&self, kernel: &Kernel, tol: &Tolerances) -> Result<SamplingPlan> {
        let l = self.claimed_depth_for(kernel, tol)?;
        let partition = kernel.level_partition(tol.group);
        SamplingPlan::new(
            self.group.clone(),
            self.omega.iter().map(|&i| {
                (
                    i,
                    l.min(
                        kernel
                            .annihilator_degree_in(&partition, i)
                            .saturating_sub(1),
                    ),
                )
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicConstruction {
    pub recipe: ConstructionRecipe,
    pub plan: PeriodicPlan,
}

fn require_gcd(parameter: &str, value: usize, modulus: usize) -> Result<()> {
    let g = gcd(value % modulus, modulus);
    if g == 1 {
        Ok(())
    } else {
        Err(Error::GcdViolation {
            parameter: parameter.to_string(),
            divisor: g,
        })
    }
}

fn diff(a: usize, b: usize, modulus: usize) -> usize {
    (a % modulus + modulus - b % modulus) % modulus
}

fn cyclic_selection(d: usize, omega: &[usize]) -> Result<Construction> {
    let g = FiniteGroup::cyclic(d)?;
    for &i in omega {
        g.check_flat(i)?;
    }
    if omega.is_empty() {
        return Err(Error::InvalidPlan("omega is empty".into()));
    }
    Ok(Construction::new(
        ConstructionRecipe::new(RecipeKind::PrimeAny, &[], DepthRule::DistinctEigenvalues),
        g,
        omega.to_vec(),
    ))
}

/// `Omega = {0, ..., L-1}`.
pub fn consecutive_set(d: usize, l: usize) -> Result<Construction> {
    if l == 0 || l > d {
        return Err(Error::InvalidArgument(format!(
            "L = {l} must lie in 1..={d}"
        )));
    }
    Ok(Construction::new(
        ConstructionRecipe::new(
            RecipeKind::Consecutive,
            &[("d", d), ("L", l)],
            DepthRule::DistinctEigenvalues,
        ),
        FiniteGroup::cyclic(d)?,
        (0..l).collect(),
    ))
}

/// `Omega = {i1, i2}` with `gcd(|i1 - i2|, d) = 1`.
pub fn gcd_pair_set(d: usize, i1: usize, i2: usize) -> Result<Construction> {
    let g = FiniteGroup::cyclic(d)?;
    g.check_flat(i1)?;
    g.check_flat(i2)?;
    require_gcd("i1-i2", diff(i1, i2, d), d)?;
    Ok(Construction::new(
        ConstructionRecipe::new(
            RecipeKind::GcdPair,
            &[("d", d), ("i1", i1), ("i2", i2)],
            DepthRule::DistinctEigenvalues,
        ),
        g,
        vec![i1, i2],
    ))
}

/// Any nonempty `Omega` when `d` is prime.
pub fn prime_any_set(d: usize, omega: &[usize]) -> Result<Construction> {
    if !is_prime(d) {
        return Err(Error::InvalidArgument(format!("{d} is not prime")));
    }
    let mut c = cyclic_selection(d, omega)?;
    c.recipe.params.insert("d".into(), d);
    Ok(c)
}

/// `Omega` uniformly distributed over the divisors of a prime power `d`.
pub fn prime_power_uniform_set(d: usize, omega: &[usize]) -> Result<Construction> {
    if prime_power_base(d).is_none() {
        return Err(Error::InvalidArgument(format!("{d} is not a prime power")));
    }
    let mut c = cyclic_selection(d, omega)?;
    if !is_uniformly_distributed(d, &c.omega) {
        let witness = row_spark(
            &RowSelection::cyclic(d, &c.omega)?,
            crate::linalg::DEFAULT_RANK_TOL,
            u64::MAX,
        )?
        .witness
        .unwrap_or_default();
        return Err(Error::NotFullSpark { witness });
    }
    c.recipe.kind = RecipeKind::PrimePowerUniform;
    c.recipe.params.insert("d".into(), d);
    Ok(c)
}

/// `Omega = {m Z_d + r : r in W}`, accepted iff `(F_m)_W` is full spark.
pub fn periodic_w_set(d: usize, m: usize, w: &[usize]) -> Result<PeriodicConstruction> {
    let plan = PeriodicPlan::cyclic(d, m, w, Some(m.saturating_sub(1)))?;
    let sel = RowSelection::cyclic(m, plan.w_flat())?;
    if !is_full_spark_rows(&sel, crate::linalg::DEFAULT_RANK_TOL)? {
        let witness = row_spark(&sel, crate::linalg::DEFAULT_RANK_TOL, u64::MAX)?
            .witness
            .unwrap_or_default();
        return Err(Error::NotFullSpark { witness });
    }
    Ok(PeriodicConstruction {
        recipe: ConstructionRecipe::new(
            RecipeKind::PeriodicW,
            &[("d", d), ("m", m), ("L", plan.w_flat().len())],
            DepthRule::Uniform(m - 1),
        ),
        plan,
    })
}

/// Parameters of the four two-dimensional constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "variant")]
pub enum Sym2dParams {
    /// `{0,1} x Z_n  U  Z_n x {0,1}`.
    Linf,
    /// `{i1,i2} x {j1,j2}`.
    Quadrantal {
        i1: usize,
        i2: usize,
        j1: usize,
        j2: usize,
    },
    /// `{(i1 + t i2, 0) : t = 0..3}`.
    DiagonalRow { i1: usize, i2: usize },
    /// `{(0, j1 + t j2) : t = 0..3}`.
    DiagonalColumn { j1: usize, j2: usize },
    /// `{i1,i2} x {j1 + t j2 : t = 0..3}`.
    OctagonalRows {
        i1: usize,
        i2: usize,
        j1: usize,
        j2: usize,
    },
    /// `{i1 + t i2 : t = 0..3} x {j1,j2}`.
    OctagonalColumns {
        i1: usize,
        i2: usize,
        j1: usize,
        j2: usize,
    },
}

impl Sym2dParams {
    pub fn kind(&self) -> SymmetryKind {
        match self {
            Sym2dParams::Linf => SymmetryKind::Linf,
            Sym2dParams::Quadrantal { .. } => SymmetryKind::Quadrantal,
            Sym2dParams::DiagonalRow { .. } | Sym2dParams::DiagonalColumn { .. } => {
                SymmetryKind::Diagonal
            }
            Sym2dParams::OctagonalRows { .. } | Sym2dParams::OctagonalColumns { .. } => {
                SymmetryKind::Octagonal
            }
        }
    }

    fn named(&self) -> Vec<(&'static str, usize)> {
        match *self {
            Sym2dParams::Linf => vec![],
            Sym2dParams::Quadrantal { i1, i2, j1, j2 }
            | Sym2dParams::OctagonalRows { i1, i2, j1, j2 }
            | Sym2dParams::OctagonalColumns { i1, i2, j1, j2 } => {
                vec![("i1", i1), ("i2", i2), ("j1", j1), ("j2", j2)]
            }
            Sym2dParams::DiagonalRow { i1, i2 } => vec![("i1", i1), ("i2", i2)],
            Sym2dParams::DiagonalColumn { j1, j2 } => vec![("j1", j1), ("j2", j2)],
        }
    }

    /// Checks the coprimality conditions modulo `n`.
    fn validate(&self, n: usize) -> Result<()> {
        for (_, v) in self.named() {
            if v >= n {
                return Err(Error::OutOfRange { index: v, bound: n });
            }
        }
        match *self {
            Sym2dParams::Linf => Ok(()),
            Sym2dParams::Quadrantal { i1, i2, j1, j2 } => {
                require_gcd("i1-i2", diff(i1, i2, n), n)?;
                require_gcd("j1-j2", diff(j1, j2, n), n)
            }
            Sym2dParams::DiagonalRow { i2, .. } => require_gcd("i2", i2, n),
            Sym2dParams::DiagonalColumn { j2, .. } => require_gcd("j2", j2, n),
            Sym2dParams::OctagonalRows { i1, i2, j2, .. } => {
                require_gcd("i1-i2", diff(i1, i2, n), n)?;
                require_gcd("j2", j2, n)
            }
            Sym2dParams::OctagonalColumns { i2, j1, j2, .. } => {
                require_gcd("j1-j2", diff(j1, j2, n), n)?;
                require_gcd("i2", i2, n)
            }
        }
    }

    /// Points of the pattern in `Z_n x Z_n`, deduplicated, ascending.
    pub fn points(&self, n: usize) -> Vec<(usize, usize)> {
        let step = |a: usize, b: usize| -> Vec<usize> { (0..4).map(|t| (a + t * b) % n).collect() };
        let mut pts: Vec<(usize, usize)> = match *self {
            Sym2dParams::Linf => (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| x <= 1 || y <= 1)
                .collect(),
            Sym2dParams::Quadrantal { i1, i2, j1, j2 } => {
                vec![(i1, j1), (i2, j2), (i1, j2), (i2, j1)]
            }
            Sym2dParams::DiagonalRow { i1, i2 } => {
                step(i1, i2).into_iter().map(|x| (x, 0)).collect()
            }
            Sym2dParams::DiagonalColumn { j1, j2 } => {
                step(j1, j2).into_iter().map(|y| (0, y)).collect()
            }
            Sym2dParams::OctagonalRows { i1, i2, j1, j2 } => {
                let ys = step(j1, j2);
                [i1, i2]
                    .iter()
                    .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
                    .collect()
            }
            Sym2dParams::OctagonalColumns { i1, i2, j1, j2 } => step(i1, i2)
                .into_iter()
                .flat_map(|x| [(x, j1), (x, j2)])
                .collect(),
        };
        pts.iter_mut().for_each(|p| *p = (p.0 % n, p.1 % n));
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

/// Uniform depth attached to a symmetry class on `Z_d x Z_d`.
pub fn sym2d_depth(kind: SymmetryKind, d: usize) -> usize {
    match kind {
        SymmetryKind::Linf => (d - 1) / 2,
        SymmetryKind::Quadrantal | SymmetryKind::Diagonal => (d + 1) * (d + 1) / 4 - 1,
        SymmetryKind::Octagonal => (d + 1) * (d + 3) / 8 - 1,
    }
}

fn odd(d: usize) -> Result<()> {
    if d.is_multiple_of(2) {
        Err(Error::EvenDimension(d))
    } else {
        Ok(())
    }
}

/// Two-dimensional construction for a symmetry class, with its uniform depth.
pub fn sym2d_set(d: usize, params: Sym2dParams) -> Result<Construction> {
    odd(d)?;
    params.validate(d)?;
    let group = FiniteGroup::new(&[d, d])?;
    let mut named = vec![("d", d)];
    named.extend(params.named());
    let recipe = ConstructionRecipe::new(
        RecipeKind::sym(params.kind(), false),
        &named,
        DepthRule::Uniform(sym2d_depth(params.kind(), d)),
    );
    let omega = params
        .points(d)
        .into_iter()
        .map(|(x, y)| x * d + y)
        .collect();
    Ok(Construction::new(recipe, group, omega))
}

/// Periodic variant: `W` is the pattern over `Z_m x Z_m`, depth `m^2 - 1`.
pub fn sym2d_periodic_set(d: usize, m: usize, params: Sym2dParams) -> Result<PeriodicConstruction> {
    odd(d)?;
    if m <= 1 || !d.is_multiple_of(m) {
        return Err(Error::BadDivisor { m, d });
    }
    params.validate(m)?;
    let w: Vec<GroupIndex> = params
        .points(m)
        .into_iter()
        .map(|(x, y)| GroupIndex(vec![x, y]))
        .collect();
    let plan = PeriodicPlan::new(FiniteGroup::new(&[d, d])?, m, &w, Some(m * m - 1))?;
    let mut named = vec![("d", d), ("m", m)];
    named.extend(params.named());
    Ok(PeriodicConstruction {
        recipe: ConstructionRecipe::new(
            RecipeKind::sym(params.kind(), true),
            &named,
            DepthRule::Uniform(m * m - 1),
        ),
        plan,
    })
}

/// Limits for [`search_minimal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_order_1d: usize,
    pub max_order_2d: usize,
    pub subset_cap: u64,
    /// Every `verify_every`-th hit is re-checked with the direct test.
    pub verify_every: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_order_1d: 64,
            max_order_2d: 36,
            subset_cap: crate::spark::DEFAULT_SUBSET_CAP,
            verify_every: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Smallest admissible size found, if any up to `max_size`.
    pub size: Option<usize>,
    /// All admissible sets of that size, lexicographically ascending.
    pub sets: Vec<Vec<usize>>,
    pub lower_bound: usize,
    pub verified: usize,
}

/// Exhaustive search for the smallest admissible sensor sets of `kernel`.
pub fn search_minimal(
    kernel: &Kernel,
    max_size: usize,
    tol: &Tolerances,
    config: &SearchConfig,
) -> Result<SearchResult> {
    let group = kernel.group();
    let n = group.order();
    let cap = if group.is_cyclic() {
        config.max_order_1d
    } else {
        config.max_order_2d
    };
    if n > cap {
        return Err(Error::CapExceeded { cap: cap as u64 });
    }
    let lower = min_sensor_bound(kernel, tol);
    let mut scanned = 0u64;
    for size in lower..=max_size.min(n) {
        scanned = scanned.saturating_add(binomial(n, size));
        if scanned > config.subset_cap {
            return Err(Error::CapExceeded {
                cap: config.subset_cap,
            });
        }
        let subsets: Vec<Vec<usize>> = Colex::new(n, size).collect();
        let hits = subsets
            .par_iter()
            .map(|omega| {
                let plan = saturating_plan(kernel, omega, tol)?;
                Ok(frame_test_projection(kernel, &plan, tol)?
                    .verdict
                    .is_frame()
                    .then(|| omega.clone()))
            })
            .collect::<Result<Vec<Option<Vec<usize>>>>>()?;
        let mut sets: Vec<Vec<usize>> = hits.into_iter().flatten().collect();
        if sets.is_empty() {
            continue;
        }
        sets.sort();
        let step = config.verify_every.max(1);
        let checks: Vec<&Vec<usize>> = sets.iter().step_by(step).collect();
        let verified = checks.len();
        checks.par_iter().try_for_each(|omega| {
            let plan = saturating_plan(kernel, omega, tol)?;
            if frame_test_direct(kernel, &plan, tol)?.verdict.is_frame() {
                Ok(())
            } else {
                Err(Error::VerificationMismatch(format!(
                    "direct test rejects {omega:?}"
                )))
            }
        })?;
        return Ok(SearchResult {
            size: Some(size),
            sets,
            lower_bound: lower,
            verified,
        });
    }
    Ok(SearchResult {
        size: None,
        sets: Vec::new(),
        lower_bound: lower,
        verified: 0,
    })
}
