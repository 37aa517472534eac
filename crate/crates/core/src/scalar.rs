use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Default tolerance for equality of lengths on cell walls.
    fn wall_eps() -> Self;

    /// Tolerance on determinants and matrix identities.
    fn det_eps() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits the scalar type")
    }

    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    fn wall_eps() -> Self {
        1e-9
    }
    fn det_eps() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn wall_eps() -> Self {
        1e-4
    }
    fn det_eps() -> Self {
        1e-4
    }
}

/// arccosh with arguments just below 1 clamped to 1.
pub fn acosh_clamped<T: Real>(x: T) -> T {
    let slack = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if x < T::one() && x > T::one() - slack {
        T::zero()
    } else {
        x.acosh()
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<T: Real, F: FnMut(T) -> T>(mut f: F, mut lo: T, mut hi: T, tol: T) -> Option<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Some(lo);
    }
    if fhi == T::zero() {
        return Some(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    for _ in 0..400 {
        let mid = (lo + hi) * T::half();
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) * T::half())
}
