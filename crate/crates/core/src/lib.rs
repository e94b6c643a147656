//! Numerical kernel for rearrangement-invariant analysis on finite nonatomic
//! measure spaces.
//!
//! Everything operates on exact finite representations: simple functions as
//! `(value, mass)` pieces, their nonincreasing rearrangements as step
//! profiles, and radial profiles as piecewise-linear functions of the measure
//! variable. Quasinorms of Lambda and Lorentz-Zygmund type are evaluated by
//! closed-form antiderivatives where one exists and by adaptive quadrature
//! with a logarithmic endpoint substitution otherwise. On top of that sit
//! three kinds of certificates:
//!
//! * uniform-separation certificates `(lambda0, epsilon)` built from the
//!   dilation functional `Theta`,
//! * disjoint-superadditivity verdicts with explicit equivalence constants,
//! * noncompactness lower-bound certificates driven by a norm-preserving
//!   dilation family of shrinking support.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through [`libm`] so results are bit-reproducible across platforms.
//! Every value is immutable after construction and every operation is a pure
//! function, so types can be shared or sent across threads freely.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// negated comparisons are range guards that must also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dilation;
pub mod math;
pub mod quad;
pub mod rearrangement;
pub mod rng;
pub mod separation;
pub mod superadd;
pub mod weights;

pub use quad::{QuadratureConfig, TOL_EQ};
pub use rearrangement::{
    disjoint_sum, distribution_function, rearrangement, rearrangement_point_oracle,
    subadditivity_check, CommonRefinement, DistributionFunction, SimpleFunction, StepProfile,
};
pub use weights::{EvalOutcome, LambdaParams, Method, Weight};
