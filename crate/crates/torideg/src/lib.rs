//! Lattice polytopes, flag-indexed triangulations, higher-rank
//! quasi-valuations and the fan-of-monoids model of the associated
//! semi-toric degeneration, all in exact rational arithmetic.
//!
//! The pipeline, bottom to top:
//!
//! * [`exact`] — rationals, vectors, exact linear solving and cone testers.
//! * [`polytope`] — halfspace representation, face lattice, lattice points,
//!   normality.
//! * [`stratify`] — face markings, extremal degrees, the flag-indexed
//!   triangulation and point location.
//! * [`valuation`] — per-chain valuations and the global quasi-valuation,
//!   computed two independent ways.
//! * [`monoidfan`] — chain monoids, Hilbert bases, the fan of monoids and
//!   the degree-one submonoids.
//! * [`fanalgebra`] — the fan algebra at basis level, generator sets, the
//!   monomial preorder, truncated kernel bases, the integral weight vector
//!   and homogenization.
//! * [`pipeline`], [`json`], [`svg`] — assembly, wire formats, rendering.
//!
//! The `torideg` binary exposes the pipeline as batch commands over JSON
//! files; [`worked`] bundles the hand-checked reference examples that the
//! test suite and the `paper-examples` subcommand replay.

pub mod exact;
pub mod fanalgebra;
pub mod json;
pub mod monoidfan;
pub mod pipeline;
pub mod polytope;
pub mod stratify;
pub mod svg;
pub mod valuation;
pub mod worked;

pub use exact::{Rat, RatVec};
pub use polytope::{FaceLattice, GradedPoint, HalfspaceRep, LatticePolytope};
pub use stratify::{ExtremalData, FlagTriangulation, Marking};
pub use valuation::{LinearOrder, QuasiValue};
