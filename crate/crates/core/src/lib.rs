//! Exact decision procedures for torus-invariant sections of anti-log-canonical
//! bundles.
//!
//! The crate computes fixed-point weights and moment polytopes of linearized
//! line bundles, either from a smooth complete toric pair or from abstract
//! fixed-point records, and decides whether the origin lies in the moment
//! polytope. Every verdict carries a certificate that is re-checked exactly:
//! nonnegative integers `k` with `Σ k_i w_i = 0` for a yes, a functional
//! strictly positive on the polytope for a no.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod convex;
pub mod divisor;
pub mod equivariant;
pub mod error;
pub mod fan;
mod linalg;
pub mod lp;
pub mod rational;
pub mod verdict;

pub use convex::{
    contains, convex_hull, hausdorff_distance, integer_certificate, rational_coefficients, scale,
    separating_functional, shrink_membership, HalfSpace, Polytope,
};
pub use divisor::{
    canonical_divisor, cartier_data, h0, invariant_dimension, positivity, section_polytope, section_weights,
    vertex_weight, CartierData, Positivity, TDivisor,
};
pub use equivariant::{
    anticanonical_weight, aux_shift_bound, export_records, fixed_point_weights, local_cone_epsilon, moment_polytope,
    pair_weight, twist_weights, FixedPointRecord, LinearizedBundle, MomentSource, PairData,
};
pub use error::{Error, Result};
pub use fan::{cotangent_weights, fixed_points, validate_fan, Cone, Fan, FanDiagnostics, Ray};
pub use rational::{parse_rational, Rational, RationalVector};
pub use verdict::{
    check_equivariant_nonvanishing, check_sub_lc, kappa_estimates, run_pipeline, run_records_pipeline, Answer,
    Certificate, Context, Flags, KappaLower, KappaReport, Verdict,
};
