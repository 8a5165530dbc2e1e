use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point type the covariance algebra and closed-form rates run on.
///
/// Implemented for `f32` and `f64`. The optimizers and the verification
/// suite are written against `f64`; their tolerances are only meaningful
/// at double precision.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal. Never fails for the implemented types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Relative floor under which a conditional variance counts as zero,
    /// i.e. the variable is a deterministic linear function of what it is
    /// conditioned on.
    fn det_floor() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Band below zero inside which a computed mutual information is
    /// treated as Schur-complement roundoff and clamped to zero.
    fn mi_clamp() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(1024.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Multiply a rate in bits by this to get nats.
pub const NATS_PER_BIT: f64 = std::f64::consts::LN_2;
