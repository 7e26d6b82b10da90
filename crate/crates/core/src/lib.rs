//! Spatiotemporal sampling for convolution dynamics on finite abelian groups.
//!
//! An operator `A f = a * f` on `Z_{d_1} x ... x Z_{d_n}` is sampled at a set
//! of sensors `Omega`, each sensor `i` recording `(A^t f)(i)` for
//! `t = 0..=l_i`. The crate decides when those samples determine `f`,
//! constructs sensor sets that work for whole classes of kernels, and runs the
//! evolve/sample/reconstruct loop.
//!
//! ```
//! use dynsamp::{FiniteGroup, Kernel, SamplingPlan, Tolerances, frame_test_projection, Verdict};
//!
//! let k = Kernel::from_real_symbol(FiniteGroup::cyclic(4)?, &[1.0, 2.0, 1.0, 2.0])?;
//! let plan = SamplingPlan::uniform(k.group().clone(), [1, 2], 1)?;
//! assert_eq!(frame_test_projection(&k, &plan, &Tolerances::default())?.verdict, Verdict::Frame);
//! # Ok::<(), dynsamp::Error>(())
//! ```

pub mod cli;
pub mod combinatorics;
pub mod construct;
pub mod error;
pub mod frame;
pub mod group;
pub mod io;
pub mod linalg;
pub mod random;
pub mod recon;
pub mod spark;
pub mod spectral;
pub mod symmetry;

pub use construct::{
    Construction, ConstructionRecipe, PeriodicConstruction, RecipeKind, Sym2dParams,
};
pub use error::{Error, Result};
pub use frame::{
    frame_test_direct, frame_test_projection, never_frame_test, periodic_frame_test, FrameReport,
    PeriodicPlan, SamplingPlan, Verdict,
};
pub use group::{fourier_matrix, FiniteGroup, GroupIndex};
pub use recon::{reconstruct, simulate_samples, ReconstructionResult, SampleRecord};
pub use spectral::{Kernel, LevelPartition, Tolerances};
pub use symmetry::{SymmetryClass, SymmetryKind};
