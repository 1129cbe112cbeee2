//! Clifford systems and the singular Riemannian foliations of round spheres
//! they induce.
//!
//! A Clifford system `C = (P_0, ..., P_m)` on `R^{2l}` is a family of
//! symmetric matrices with `P_i^2 = Id` and `P_i P_j = -P_j P_i` for `i != j`.
//! The map
//!
//! ```text
//! pi_C : S^{2l-1} -> R^{m+1},   x |-> (<P_0 x, x>, ..., <P_m x, x>)
//! ```
//!
//! lands in the closed unit disk, and its fibers are the leaves of the
//! *Clifford foliation*. Pulling back a foliation of the boundary sphere
//! (extended to the disk by homotheties) gives a *composed foliation*.
//!
//! Module map:
//!
//! * [`algebra`]: division-algebra arithmetic, exact signed-permutation
//!   matrices, small dense linear algebra and the seeded sampler.
//! * [`clifford`]: construction, conjugation, restriction and classification
//!   of Clifford systems, plus the JSON system file format.
//! * [`foliation`]: `pi_C`, its fibers, horizontal geodesics, the curvature-4
//!   quotient metric and the reflection / spin symmetries.
//! * [`composed`]: composed foliations given by invariant maps on the
//!   boundary sphere, their quotient metric and an ambient distance probe.
//! * [`homogeneity`]: the diagonal `SO(k)`, `SU(k)`, `Sp(k)` actions, normal
//!   forms and the homogeneity decision table.
//! * [`verify`]: named, seeded property suites producing JSON reports.
//!
//! Data-parallel loops go through [`Execution`]; with the default `parallel`
//! feature they run on rayon, otherwise sequentially. Results never depend on
//! scheduling: every sample draws from a seed derived from its index.

pub mod algebra;
pub mod clifford;
pub mod composed;
mod error;
pub mod foliation;
pub mod homogeneity;
mod par;
pub mod verify;

pub use error::{Error, Result};
pub use par::Execution;

pub use clifford::{build_system, delta, CliffordSystem, EquivalenceProfile};
pub use foliation::{pi_c, QuotientPoint, SpherePoint};

