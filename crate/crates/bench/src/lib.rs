//! Shared fixtures for the benchmark targets. The measurements themselves
//! live in benches/.

use cmrt_core::curves::{CurvePoint, Rational, WeierstrassCurve};
use num_bigint::BigInt;
use num_traits::Zero;

/// The curve y^2 = x^3 - 595x + 5586 with its 2-torsion point (14, 0),
/// the standard workload for the Weber and j-invariant benches.
pub fn reference_curve() -> (WeierstrassCurve, CurvePoint) {
    let a = Rational::from(BigInt::from(-595));
    let b = Rational::from(BigInt::from(5586));
    let curve = WeierstrassCurve::new(a, b).expect("nonsingular");
    let point = CurvePoint::rational(Rational::from(BigInt::from(14)), Rational::zero());
    (curve, point)
}

/// Discriminants spanning the class numbers the bound table cares about.
pub fn reference_discs() -> &'static [i64] {
    &[-163, -907, -2683, -5923, -2383747]
}
