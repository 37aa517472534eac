//! 2×2 real matrices of determinant ±1 acting on the upper half plane.
//!
//! det +1 acts by z ↦ (az + b)/(cz + d), det −1 by z ↦ (a z̄ + b)/(c z̄ + d).
//! Composition is the matrix product in both cases.

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{acosh_clamped, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IsometryKind<T> {
    Hyperbolic(T),
    GlideReflection(T),
    Elliptic,
    Parabolic,
    Reflection,
    Identity,
}

impl<T: Real> IsometryKind<T> {
    /// Translation length (hyperbolic) or glide length (glide reflection).
    pub fn length(&self) -> Option<T> {
        match *self {
            IsometryKind::Hyperbolic(l) | IsometryKind::GlideReflection(l) => Some(l),
            _ => None,
        }
    }
}

impl<T: Real> Isometry<T> {
    /// Checked constructor: the determinant must be ±1 within tolerance.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let g = Isometry { a, b, c, d };
        let det = g.det();
        if (det.abs() - T::one()).abs() < T::det_eps() {
            Ok(g)
        } else {
            Err(Error::BadDeterminant(det.f64()))
        }
    }

    /// Rescales an invertible matrix to determinant exactly ±1.
    pub fn normalized(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a * d - b * c;
        if det == T::zero() || !det.is_finite() {
            return Err(Error::BadDeterminant(det.f64()));
        }
        let k = det.abs().sqrt();
        Ok(Isometry { a: a / k, b: b / k, c: c / k, d: d / k })
    }

    pub fn identity() -> Self {
        Isometry { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    pub fn diag(x: T, y: T) -> Self {
        Isometry { a: x, b: T::zero(), c: T::zero(), d: y }
    }

    /// Hyperbolic translation of length `t` along the imaginary axis.
    pub fn translation(t: T) -> Self {
        let h = (t * T::half()).exp();
        Self::diag(h, h.recip())
    }

    /// Hyperbolic translation of length `t` along the unit circle.
    pub fn translation_unit_circle(t: T) -> Self {
        let (s, c) = ((t * T::half()).sinh(), (t * T::half()).cosh());
        Isometry { a: c, b: s, c: s, d: c }
    }

    /// Reflection in the imaginary axis.
    pub fn reflection_imaginary_axis() -> Self {
        Self::diag(-T::one(), T::one())
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.det() > T::zero()
    }

    pub fn compose(&self, h: &Self) -> Self {
        Isometry {
            a: self.a * h.a + self.b * h.c,
            b: self.a * h.b + self.b * h.d,
            c: self.c * h.a + self.d * h.c,
            d: self.c * h.b + self.d * h.d,
        }
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        Isometry { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det }
    }

    pub fn neg(&self) -> Self {
        Isometry { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut out = Self::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// g h g⁻¹ h⁻¹.
    pub fn commutator(&self, h: &Self) -> Self {
        self.compose(h).compose(&self.inverse()).compose(&h.inverse())
    }

    pub fn conjugate_by(&self, m: &Self) -> Self {
        m.compose(self).compose(&m.inverse())
    }

    /// Entrywise distance up to the sign ambiguity of PGL(2,R).
    pub fn distance_mod_sign(&self, h: &Self) -> T {
        let plus = (self.a - h.a)
            .abs()
            .max((self.b - h.b).abs())
            .max((self.c - h.c).abs())
            .max((self.d - h.d).abs());
        let minus = (self.a + h.a)
            .abs()
            .max((self.b + h.b).abs())
            .max((self.c + h.c).abs())
            .max((self.d + h.d).abs());
        plus.min(minus)
    }

    pub fn max_abs_entry(&self) -> T {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

impl<T: Real> Mul for Isometry<T> {
    type Output = Isometry<T>;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn compose<T: Real>(g: &Isometry<T>, h: &Isometry<T>) -> Isometry<T> {
    g.compose(h)
}

/// Classifies with the library default tolerance.
pub fn classify<T: Real>(g: &Isometry<T>) -> IsometryKind<T> {
    classify_with(g, T::det_eps())
}

pub fn classify_with<T: Real>(g: &Isometry<T>, tol: T) -> IsometryKind<T> {
    let tr = g.trace();
    let two = T::two();
    if g.det() > T::zero() {
        let t = tr.abs();
        if t > two + tol {
            IsometryKind::Hyperbolic(two * acosh_clamped(t / two))
        } else if (t - two).abs() <= tol {
            let off = g.b.abs().max(g.c.abs()).max((g.a - g.d).abs());
            if off <= tol {
                IsometryKind::Identity
            } else {
                IsometryKind::Parabolic
            }
        } else {
            IsometryKind::Elliptic
        }
    } else if tr.abs() <= tol {
        IsometryKind::Reflection
    } else {
        // cosh ℓ = (tr² + 2)/2, i.e. sinh(ℓ/2) = |tr|/2
        IsometryKind::GlideReflection(two * (tr.abs() / two).asinh())
    }
}

/// The glide reflection h with h² = ±g sharing the axis of the hyperbolic g.
pub fn glide_sqrt<T: Real>(g: &Isometry<T>) -> Result<Isometry<T>> {
    if !matches!(classify(g), IsometryKind::Hyperbolic(_)) {
        return Err(Error::NotHyperbolic);
    }
    let g = if g.trace() < T::zero() { g.neg() } else { *g };
    // Cayley–Hamilton: det h = −1 gives h² = (tr h) h + I and tr h = √(tr g − 2).
    let k = (g.trace() - T::two()).sqrt();
    Ok(Isometry { a: (g.a - T::one()) / k, b: g.b / k, c: g.c / k, d: (g.d - T::one()) / k })
}

/// Endpoints of the axis on the boundary, in homogeneous form (x : w).
fn axis_endpoints<T: Real>(g: &Isometry<T>) -> [(T, T); 2] {
    // fixed points of x ↦ (ax + b)/(cx + d) on the real line: c x² + (d − a) x − b = 0
    let bb = g.d - g.a;
    let disc = (bb * bb + T::lit(4.0) * g.b * g.c).max(T::zero());
    let sign = if bb >= T::zero() { T::one() } else { -T::one() };
    let q = -(bb + sign * disc.sqrt()) * T::half();
    [(q, g.c), (-g.b, q)]
}

fn hdiff<T: Real>(u: (T, T), v: (T, T)) -> T {
    u.0 * v.1 - v.0 * u.1
}

/// Distance between the translation axes of two hyperbolic or glide elements.
pub fn axis_distance<T: Real>(g: &Isometry<T>, h: &Isometry<T>) -> Result<T> {
    for m in [g, h] {
        match classify(m) {
            IsometryKind::Hyperbolic(_) | IsometryKind::GlideReflection(_) => {}
            _ => return Err(Error::NotHyperbolic),
        }
    }
    let [u1, u2] = axis_endpoints(g);
    let [v1, v2] = axis_endpoints(h);
    let num = hdiff(u1, v1) * hdiff(u2, v2);
    let den = hdiff(u1, v2) * hdiff(u2, v1);
    if den == T::zero() || num == T::zero() {
        return Err(Error::AxesNotDisjoint);
    }
    let r = num / den;
    let tol = T::lit(1e-12);
    if r <= tol || (r - T::one()).abs() <= tol {
        return Err(Error::AxesNotDisjoint);
    }
    // tanh²(δ/2) equals the cross-ratio taken in the pairing that lands in (0, 1)
    let r = r.min(r.recip());
    Ok(T::two() * r.sqrt().atanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e() -> f64 {
        std::f64::consts::E
    }

    #[test]
    fn compose_identity_and_diagonal() {
        let g = Isometry::new(2.0, 1.0, 3.0, 2.0).unwrap();
        assert_eq!(Isometry::identity().compose(&g), g);
        let d = Isometry::diag(e(), 1.0 / e());
        let dd = d.compose(&d);
        assert_abs_diff_eq!(dd.a, e() * e(), epsilon = 1e-12);
        assert_abs_diff_eq!(dd.d, 1.0 / (e() * e()), epsilon = 1e-12);
        let id = g.compose(&g.inverse());
        assert!(id.distance_mod_sign(&Isometry::identity()) < 1e-12);
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(Isometry::new(2.0, 0.0, 0.0, 2.0).is_err());
        let n = Isometry::normalized(2.0, 0.0, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(n.det(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn classify_examples() {
        let t: f64 = 1.7;
        match classify(&Isometry::translation(t)) {
            IsometryKind::Hyperbolic(l) => assert_abs_diff_eq!(l, t, epsilon = 1e-12),
            k => panic!("{k:?}"),
        }
        let g = Isometry::diag((t / 2.0).exp(), -(-t / 2.0).exp());
        match classify(&g) {
            IsometryKind::GlideReflection(l) => assert_abs_diff_eq!(l, t, epsilon = 1e-12),
            k => panic!("{k:?}"),
        }
        assert_eq!(classify(&Isometry::new(0.0, 1.0, 1.0, 0.0).unwrap()), IsometryKind::Reflection);
        assert_eq!(classify(&Isometry::<f64>::identity()), IsometryKind::Identity);
        assert_eq!(classify(&Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap()), IsometryKind::Parabolic);
        let r = Isometry::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(classify(&r), IsometryKind::Elliptic);
    }

    #[test]
    fn glide_sqrt_examples() {
        let h = glide_sqrt(&Isometry::diag(e(), 1.0 / e())).unwrap();
        assert_abs_diff_eq!(h.a, e().sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.d, -1.0 / e().sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.b, 0.0, epsilon = 1e-12);

        let m = Isometry::normalized(2.0, 1.0, 0.5, 3.0).unwrap();
        let g = Isometry::diag(e(), 1.0 / e()).conjugate_by(&m);
        let want = Isometry::diag(e().sqrt(), -1.0 / e().sqrt()).conjugate_by(&m);
        assert!(glide_sqrt(&g).unwrap().distance_mod_sign(&want) < 1e-12);

        assert_eq!(glide_sqrt(&Isometry::<f64>::identity()), Err(Error::NotHyperbolic));
    }

    #[test]
    fn axis_distance_examples() {
        let g = Isometry::translation(1.0);
        assert_eq!(axis_distance(&g, &g.pow(2)), Err(Error::AxesNotDisjoint));
        // unit circle and the circle of radius e^δ are both orthogonal to the imaginary axis
        let delta = 0.83;
        let u = Isometry::<f64>::translation_unit_circle(1.3);
        let s = Isometry::translation(delta);
        let v = u.conjugate_by(&s);
        assert_abs_diff_eq!(axis_distance(&u, &v).unwrap(), delta, epsilon = 1e-12);
        // geodesics (−1, 1) and (2, 5): cross ratio from the endpoints
        let (a1, a2, b1, b2) = (-1.0_f64, 1.0, 2.0, 5.0);
        let r = ((a1 - b1) * (a2 - b2)) / ((a1 - b2) * (a2 - b1));
        let want = 2.0 * r.min(1.0 / r).sqrt().atanh();
        let through = |x1: f64, x2: f64| {
            // hyperbolic element with fixed points x1, x2
            let m = Isometry::normalized(x2, x1, 1.0, 1.0).unwrap();
            Isometry::translation(0.9).conjugate_by(&m)
        };
        let d = axis_distance(&through(a1, a2), &through(b1, b2)).unwrap();
        assert_abs_diff_eq!(d, want, epsilon = 1e-12);
        // crossing axes
        assert_eq!(axis_distance(&through(-1.0, 1.0), &through(0.0, 3.0)), Err(Error::AxesNotDisjoint));
    }

    #[test]
    fn works_in_f32() {
        let g = Isometry::<f32>::translation(1.5);
        match classify(&g) {
            IsometryKind::Hyperbolic(l) => assert!((l - 1.5).abs() < 1e-4),
            k => panic!("{k:?}"),
        }
        let h = glide_sqrt(&g).unwrap();
        assert!(h.compose(&h).distance_mod_sign(&g) < 1e-4);
    }
}
