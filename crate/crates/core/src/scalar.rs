//! Scalar abstraction: all core math is generic over `f32`/`f64`.

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by every map, transform and residual model.
///
/// `RealField` supplies the elementary functions without the method-resolution
/// clashes that mixing in `num_traits::Float` would cause; the two helpers
/// below cover what it lacks.
pub trait Scalar: RealField + FloatConst + FromPrimitive + ToPrimitive + Copy + Default {
    /// Lossy conversion from an `f64` literal or threshold.
    fn c(v: f64) -> Self;

    /// `true` when neither NaN nor infinite.
    fn finite(self) -> bool;

    /// Widening conversion for accumulation and reporting.
    fn to_f64c(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn c(v: f64) -> Self {
                v as $t
            }
            #[inline]
            fn finite(self) -> bool {
                self.is_finite()
            }
            #[inline]
            fn to_f64c(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);
