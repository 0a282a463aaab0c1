//! Asymptotic centers and radii of eventually periodic bounded sequences.
//!
//! Sequences are described exactly ([`RepresentableSeq`]) in five models:
//! `ℝ^d` with the sup norm or the Euclidean norm, `c₀` with a moving spike,
//! and `c` / `ℓ∞` with a periodic tail. Sup-norm computations use exact
//! rationals; Euclidean ones use `f64` with explicit tolerances.

pub mod c0_lim;
pub mod envelope;
pub mod error;
pub mod gen;
pub mod hilbert;
pub mod io;
pub mod metric;
pub mod norm;
pub mod oracles;
pub mod rational;
pub mod seq_model;

pub use c0_lim::{lim_quantities, radius_c0, radius_lim, LimQuantities, LimSpace};
pub use envelope::{
    canonical_selector, center_box, envelopes_finite, CenterBox, Envelope, KPoint, Selection,
};
pub use error::{Error, Result};
pub use hilbert::{smallest_enclosing_ball, BallCenter};
pub use metric::{pseudometric_d, pseudometric_d_truncated, DistanceBounds, TailSet};
pub use norm::{EuclidNorm, L1Norm, Norm, PolyhedralNorm, SupNorm};
pub use oracles::{OracleMethod, OracleResult, Quantity};
pub use rational::Q;
pub use seq_model::{
    asymptotic_distance, canonicalize, cluster_set, FinitePointSet, Periodic, RepresentableSeq,
    SpaceKind,
};
