//! Frame tests for iterated-sample families `{A^s e_i : i in Omega, s <= l_i}`.
//!
//! Two independent routes decide the same question:
//!
//! * [`frame_test_direct`] assembles the whole synthesis matrix (in the
//!   frequency domain, where `A` is diagonal) and checks its rank;
//! * [`frame_test_projection`] checks, for every level set `Lambda_k` of the
//!   symbol, that the `|Lambda_k| x |Omega|` block of the character matrix has
//!   full row rank, and that every depth reaches the annihilator degree.
//!
//! A failing level class can never be repaired by sampling longer, which is
//! what the [`Verdict::NeverFrame`] verdict records.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{character_submatrix, FiniteGroup, GroupIndex};
use crate::linalg::{rank_from_singular_values, singular_values, CMatrix};
use crate::spectral::{Kernel, LevelPartition, Tolerances};

/// Sensor locations with a per-sensor time depth: sensor `i` contributes
/// `A^0 e_i, ..., A^{l_i} e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingPlan {
    group: FiniteGroup,
    depths: BTreeMap<usize, usize>,
}

impl SamplingPlan {
    /// Plan over flat indices with explicit depths.
    pub fn new(
        group: FiniteGroup,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut depths = BTreeMap::new();
        for (i, l) in entries {
            group.check_flat(i)?;
            if depths.insert(i, l).is_some() {
                return Err(Error::InvalidPlan(format!(
                    "sensor {} listed twice",
                    group.index(i)
                )));
            }
        }
        if depths.is_empty() {
            return Err(Error::InvalidPlan("omega is empty".into()));
        }
        Ok(SamplingPlan { group, depths })
    }

    /// Every sensor sampled at times `0..=depth`.
    pub fn uniform(
        group: FiniteGroup,
        omega: impl IntoIterator<Item = usize>,
        depth: usize,
    ) -> Result<Self> {
        let mut omega: Vec<usize> = omega.into_iter().collect();
        omega.sort_unstable();
        omega.dedup();
        Self::new(group, omega.into_iter().map(|i| (i, depth)))
    }

    pub fn from_indices(group: FiniteGroup, entries: &[(GroupIndex, usize)]) -> Result<Self> {
        let flat = entries
            .iter()
            .map(|(g, l)| group.flat(g).map(|f| (f, *l)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, flat)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Sensors in ascending flat order.
    pub fn omega(&self) -> Vec<usize> {
        self.depths.keys().copied().collect()
    }

    pub fn sensors(&self) -> Vec<GroupIndex> {
        self.depths.keys().map(|&i| self.group.index(i)).collect()
    }

    pub fn depth(&self, i: usize) -> Option<usize> {
        self.depths.get(&i).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.depths.iter().map(|(&i, &l)| (i, l))
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    /// Total number of samples, `sum (l_i + 1)`.
    pub fn sample_count(&self) -> usize {
        self.depths.values().map(|l| l + 1).sum()
    }

    /// The same plan with every depth replaced.
    pub fn with_uniform_depth(&self, depth: usize) -> SamplingPlan {
        SamplingPlan {
            group: self.group.clone(),
            depths: self.depths.keys().map(|&i| (i, depth)).collect(),
        }
    }

    /// Translates every sensor by `t`, keeping depths.
    pub fn translated(&self, t: usize) -> SamplingPlan {
        SamplingPlan {
            group: self.group.clone(),
            depths: self
                .depths
                .iter()
                .map(|(&i, &l)| (self.group.add_flat(i, t), l))
                .collect(),
        }
    }

    fn check_group(&self, kernel: &Kernel) -> Result<()> {
        if &self.group != kernel.group() {
            return Err(Error::InvalidPlan(format!(
                "plan group {:?} does not match kernel group {:?}",
                self.group.factors(),
                kernel.group().factors()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Frame,
    NotFrame,
    /// Not a frame for any choice of depths.
    NeverFrame,
}

impl Verdict {
    pub fn is_frame(self) -> bool {
        self == Verdict::Frame
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub verdict: Verdict,
    pub rank: usize,
    pub required_rank: usize,
    /// Squared smallest singular value of the synthesis matrix (frame only).
    pub lower_frame_bound: Option<f64>,
    /// Squared largest singular value of the synthesis matrix (frame only).
    pub upper_frame_bound: Option<f64>,
    pub failing_class: Option<usize>,
    /// For periodic tests: the frequency slice `k` holding the failing class.
    pub failing_slice: Option<usize>,
    /// `M_A`, the necessary lower bound on `|Omega|`.
    pub min_cardinality_bound: usize,
    /// Level classes passed but some depth was below `r_i - 1`; the verdict then
    /// comes from the direct test.
    pub depth_insufficient: bool,
    /// Eigenvalue grouping hit a tolerance chain.
    pub ambiguous: bool,
}

impl FrameReport {
    /// `sqrt(B / A)`, the condition number of the synthesis matrix.
    pub fn condition_number(&self) -> Option<f64> {
        match (self.lower_frame_bound, self.upper_frame_bound) {
            (Some(a), Some(b)) if a > 0.0 => Some((b / a).sqrt()),
            _ => None,
        }
    }
}

/// Frequency-domain synthesis matrix: one row `diag(a_hat)^s F e_i` per sample.
pub fn synthesis_matrix(kernel: &Kernel, plan: &SamplingPlan) -> CMatrix {
    let n = kernel.group().order();
    let sym = kernel.symbol();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(plan.sample_count());
    for (i, depth) in plan.entries() {
        let mut row = kernel.group().character_column(i);
        rows.push(row.clone());
        for _ in 0..depth {
            for (x, a) in row.iter_mut().zip(sym) {
                *x *= a;
            }
            rows.push(row.clone());
        }
    }
    CMatrix::from_fn(rows.len(), n, |r, c| rows[r][c])
}

/// Rank test on the full synthesis matrix.
pub fn frame_test_direct(
    kernel: &Kernel,
    plan: &SamplingPlan,
    tol: &Tolerances,
) -> Result<FrameReport> {
    plan.check_group(kernel)?;
    let partition = kernel.level_partition(tol.group);
    let n = kernel.group().order();
    let sv = singular_values(&synthesis_matrix(kernel, plan))?;
    let rank = rank_from_singular_values(&sv, tol.rank);
    let frame = rank == n;
    let (lower, upper) = if frame {
        (Some(sv[n - 1] * sv[n - 1]), Some(sv[0] * sv[0]))
    } else {
        (None, None)
    };
    Ok(FrameReport {
        verdict: if frame {
            Verdict::Frame
        } else {
            Verdict::NotFrame
        },
        rank,
        required_rank: n,
        lower_frame_bound: lower,
        upper_frame_bound: upper,
        failing_class: None,
        failing_slice: None,
        min_cardinality_bound: partition.max_class_size(),
        depth_insufficient: false,
        ambiguous: partition.ambiguous(),
    })
}

/// Ranks of the `Lambda_k x Omega` blocks of the character matrix, by class.
fn class_ranks(
    group: &FiniteGroup,
    partition: &LevelPartition,
    omega: &[usize],
    rank_tol: f64,
) -> Result<Vec<usize>> {
    partition
        .classes()
        .par_iter()
        .map(|class| {
            let block = character_submatrix(group, class, omega)?;
            Ok(rank_from_singular_values(
                &singular_values(&block)?,
                rank_tol,
            ))
        })
        .collect()
}

/// Level-set criterion: every projected family `{P_k F e_i : i in Omega}` must
/// span its eigenspace, and every depth must reach `r_i - 1`.
pub fn frame_test_projection(
    kernel: &Kernel,
    plan: &SamplingPlan,
    tol: &Tolerances,
) -> Result<FrameReport> {
    plan.check_group(kernel)?;
    let group = kernel.group();
    let partition = kernel.level_partition(tol.group);
    let omega = plan.omega();
    let ranks = class_ranks(group, &partition, &omega, tol.rank)?;
    let failing = ranks
        .iter()
        .zip(partition.classes())
        .position(|(&r, c)| r < c.len());
    let total_rank: usize = ranks.iter().sum();

    if let Some(k) = failing {
        return Ok(FrameReport {
            verdict: Verdict::NeverFrame,
            rank: total_rank,
            required_rank: group.order(),
            lower_frame_bound: None,
            upper_frame_bound: None,
            failing_class: Some(k),
            failing_slice: None,
            min_cardinality_bound: partition.max_class_size(),
            depth_insufficient: false,
            ambiguous: partition.ambiguous(),
        });
    }

    let deep_enough = plan
        .entries()
        .all(|(i, l)| l + 1 >= kernel.annihilator_degree_in(&partition, i));
    if deep_enough {
        return Ok(FrameReport {
            verdict: Verdict::Frame,
            rank: total_rank,
            required_rank: group.order(),
            lower_frame_bound: None,
            upper_frame_bound: None,
            failing_class: None,
            failing_slice: None,
            min_cardinality_bound: partition.max_class_size(),
            depth_insufficient: false,
            ambiguous: partition.ambiguous(),
        });
    }

    let mut report = frame_test_direct(kernel, plan, tol)?;
    report.depth_insufficient = true;
    Ok(report)
}

/// True when some level class fails the projected-rank test, so no choice of
/// depths makes the family a frame.
pub fn never_frame_test(kernel: &Kernel, omega: &[usize], tol: &Tolerances) -> Result<bool> {
    if omega.is_empty() {
        return Err(Error::InvalidPlan("omega is empty".into()));
    }
    for &i in omega {
        kernel.group().check_flat(i)?;
    }
    let mut omega = omega.to_vec();
    omega.sort_unstable();
    omega.dedup();
    let partition = kernel.level_partition(tol.group);
    let ranks = class_ranks(kernel.group(), &partition, &omega, tol.rank)?;
    Ok(ranks
        .iter()
        .zip(partition.classes())
        .any(|(&r, c)| r < c.len()))
}

/// `M_A`: the largest geometric multiplicity, a lower bound on `|Omega|`.
pub fn min_sensor_bound(kernel: &Kernel, tol: &Tolerances) -> usize {
    kernel.level_partition(tol.group).max_class_size()
}

/// Depths `r_i - 1` for every sensor: enough to saturate the sampled span.
pub fn saturating_plan(kernel: &Kernel, omega: &[usize], tol: &Tolerances) -> Result<SamplingPlan> {
    let partition = kernel.level_partition(tol.group);
    SamplingPlan::new(
        kernel.group().clone(),
        omega.iter().map(|&i| {
            (
                i,
                kernel
                    .annihilator_degree_in(&partition, i)
                    .saturating_sub(1),
            )
        }),
    )
}

/// Union of cosets `{m Z + r : r in W}` with a uniform depth.
///
/// `W` lives in `Z_m^n`; a group element belongs to the induced sensor set when
/// its coordinates reduced mod `m` lie in `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPlan {
    group: FiniteGroup,
    residues: FiniteGroup,
    m: usize,
    w: Vec<usize>,
    depth: usize,
}

impl PeriodicPlan {
    /// `depth` defaults to `m - 1` for cyclic groups and `m^n - 1` in general.
    pub fn new(
        group: FiniteGroup,
        m: usize,
        w: &[GroupIndex],
        depth: Option<usize>,
    ) -> Result<Self> {
        for &d in group.factors() {
            if m <= 1 || d % m != 0 {
                return Err(Error::BadDivisor { m, d });
            }
        }
        let residues = FiniteGroup::new(&vec![m; group.rank()])?;
        let mut flat = w
            .iter()
            .map(|r| residues.flat(r))
            .collect::<Result<Vec<_>>>()?;
        flat.sort_unstable();
        flat.dedup();
        if flat.is_empty() {
            return Err(Error::InvalidPlan("W is empty".into()));
        }
        let depth = depth.unwrap_or(residues.order() - 1);
        Ok(PeriodicPlan {
            group,
            residues,
            m,
            w: flat,
            depth,
        })
    }

    /// Cyclic convenience constructor.
    pub fn cyclic(d: usize, m: usize, w: &[usize], depth: Option<usize>) -> Result<Self> {
        let w: Vec<GroupIndex> = w.iter().map(|&r| GroupIndex(vec![r])).collect();
        Self::new(FiniteGroup::cyclic(d)?, m, &w, depth)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `J = d / m` (per factor).
    pub fn j(&self) -> usize {
        self.group.factors()[0] / self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `W` as flat indices of `Z_m^n`.
    pub fn w_flat(&self) -> &[usize] {
        &self.w
    }

    pub fn w(&self) -> Vec<GroupIndex> {
        self.w.iter().map(|&r| self.residues.index(r)).collect()
    }

    pub fn residue_group(&self) -> &FiniteGroup {
        &self.residues
    }

    /// Induced sensor set in ascending flat order.
    pub fn induced_omega(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&i| {
                let reduced =
                    GroupIndex(self.group.index(i).0.iter().map(|c| c % self.m).collect());
                let r = self
                    .residues
                    .flat(&reduced)
                    .expect("reduced residue in range");
                self.w.binary_search(&r).is_ok()
            })
            .collect()
    }

    pub fn induced_plan(&self) -> SamplingPlan {
        SamplingPlan::uniform(self.group.clone(), self.induced_omega(), self.depth)
            .expect("W nonempty gives nonempty omega")
    }
}

/// Slice `a_k = [a_hat(k), a_hat(k+J), ..., a_hat(k+(m-1)J)]`.
pub fn frequency_slice(kernel: &Kernel, m: usize, k: usize) -> Vec<Complex64> {
    let d = kernel.group().order();
    let j = d / m;
    (0..m).map(|l| kernel.symbol()[k + l * j]).collect()
}

fn check_period(kernel: &Kernel, m: usize) -> Result<usize> {
    let g = kernel.group();
    if !g.is_cyclic() {
        return Err(Error::InvalidArgument(
            "periodic test requires a cyclic group".into(),
        ));
    }
    let d = g.order();
    if m <= 1 || !d.is_multiple_of(m) {
        return Err(Error::BadDivisor { m, d });
    }
    Ok(d / m)
}

/// Slice criterion for unions of cosets of `m Z_d`: for every slice `k` and
/// every level set `Lambda_{j,k}` of `a_k`, the vectors
/// `{P_{Lambda_{j,k}} F_m e_r : r in W}` must span `E_{j,k}`.
pub fn periodic_frame_test(
    kernel: &Kernel,
    plan: &PeriodicPlan,
    tol: &Tolerances,
) -> Result<FrameReport> {
    let j = check_period(kernel, plan.m())?;
    if plan.group() != kernel.group() {
        return Err(Error::InvalidPlan(
            "periodic plan group does not match kernel".into(),
        ));
    }
    let m = plan.m();
    let fm = FiniteGroup::cyclic(m)?;
    let global = kernel.level_partition(tol.group);
    let mut rank_total = 0;
    let mut ambiguous = global.ambiguous();
    let mut failure = None;
    for k in 0..j {
        let partition = LevelPartition::from_values(&frequency_slice(kernel, m, k), tol.group);
        ambiguous |= partition.ambiguous();
        let ranks = class_ranks(&fm, &partition, plan.w_flat(), tol.rank)?;
        rank_total += ranks.iter().sum::<usize>();
        if failure.is_none() {
            if let Some(c) = ranks
                .iter()
                .zip(partition.classes())
                .position(|(&r, c)| r < c.len())
            {
                failure = Some((k, c));
            }
        }
    }
    Ok(FrameReport {
        verdict: if failure.is_some() {
            Verdict::NeverFrame
        } else {
            Verdict::Frame
        },
        rank: rank_total,
        required_rank: kernel.group().order(),
        lower_frame_bound: None,
        upper_frame_bound: None,
        failing_class: failure.map(|(_, c)| c),
        failing_slice: failure.map(|(k, _)| k),
        min_cardinality_bound: global.max_class_size(),
        depth_insufficient: plan.depth() + 1 < m,
        ambiguous,
    })
}

/// `L = max_k M_{D_k}`: the largest multiplicity inside any frequency slice.
pub fn min_period_bound(kernel: &Kernel, m: usize, tol: &Tolerances) -> Result<usize> {
    let j = check_period(kernel, m)?;
    Ok((0..j)
        .map(|k| {
            LevelPartition::from_values(&frequency_slice(kernel, m, k), tol.group).max_class_size()
        })
        .max()
        .unwrap_or(0))
}
