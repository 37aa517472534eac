//! Simple closed geodesics: slopes of the torus piece, their duals and the ovale.
//!
//! A slope (p, q) stands for the class p·[γ₂] + q·[γ₁], so γ₁ = 0/1, γ₂ = 1/0,
//! γ₃ = −1/1 and γ₄ = 1/1. The slope (1, k) has length formula A evaluated at
//! twist θ₁ + k.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::SurfacePoint;
use crate::modular::{self, MappingClass};
use crate::scalar::{acosh_clamped, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Slope {
    pub const GAMMA1: Slope = Slope { p: 0, q: 1 };
    pub const GAMMA2: Slope = Slope { p: 1, q: 0 };
    pub const GAMMA3: Slope = Slope { p: -1, q: 1 };
    pub const GAMMA4: Slope = Slope { p: 1, q: 1 };

    /// Primitive slope, normalized to q > 0 or (1, 0).
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if gcd(p, q) != 1 {
            return Err(Error::NotPrimitive(p, q));
        }
        Ok(Self::normalize(p, q))
    }

    fn normalize(p: i64, q: i64) -> Self {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// p·q' − q·p'; its absolute value is the torus intersection number.
    pub fn det(&self, other: &Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }

    pub fn is_farey_neighbor(&self, other: &Slope) -> bool {
        self.det(other).abs() == 1
    }

    /// All primitive slopes with |p|, |q| ≤ n.
    pub fn all_within(n: i64) -> Vec<Slope> {
        let mut out = Vec::new();
        for q in 0..=n {
            for p in -n..=n {
                if (q > 0 || p == 1) && gcd(p, q) == 1 {
                    out.push(Slope { p, q });
                }
            }
        }
        out
    }

    pub(crate) fn from_raw(p: i64, q: i64) -> Self {
        Self::normalize(p, q)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeodesicClass {
    Ovale,
    Orientable(Slope),
    Dual(Slope),
}

impl GeodesicClass {
    pub fn is_orientable(&self) -> bool {
        matches!(self, GeodesicClass::Orientable(_))
    }

    fn rank(&self) -> (u8, Slope) {
        match *self {
            GeodesicClass::Orientable(s) => (0, s),
            GeodesicClass::Dual(s) => (1, s),
            GeodesicClass::Ovale => (2, Slope::GAMMA1),
        }
    }

    /// Image under a mapping class.
    pub fn apply(&self, g: &MappingClass) -> GeodesicClass {
        match *self {
            GeodesicClass::Ovale => GeodesicClass::Ovale,
            GeodesicClass::Orientable(s) => GeodesicClass::Orientable(modular::act_on_slope(g, s)),
            GeodesicClass::Dual(s) => GeodesicClass::Dual(modular::act_on_slope(g, s)),
        }
    }
}

impl PartialOrd for GeodesicClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeodesicClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for GeodesicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeodesicClass::Ovale => write!(f, "ovale"),
            GeodesicClass::Orientable(s) => write!(f, "{s}"),
            GeodesicClass::Dual(s) => write!(f, "{s}'"),
        }
    }
}

/// x = cosh²(l/2).
pub fn cosh_half_sq<T: Real>(l: T) -> T {
    let c = (l * T::half()).cosh();
    c * c
}

/// Inverse of [`cosh_half_sq`].
pub fn length_from_cosh_half_sq<T: Real>(x: T) -> T {
    T::two() * acosh_clamped(x.sqrt())
}

/// Length of the slope (1, k), i.e. formula A at twist θ₁ + k.
///
/// Evaluated as sinh(l/2)² = cosh²(φ)cosh²(l_X/2)/sinh²(l₁/2) + sinh²(φ),
/// φ = (θ₁ + k)l₁/2, which has no cancellation.
pub fn twist_family_length<T: Real>(p: &SurfacePoint<T>, k: T) -> T {
    T::two() * twist_family_sinh_half(p, k).asinh()
}

pub(crate) fn twist_family_sinh_half<T: Real>(p: &SurfacePoint<T>, k: T) -> T {
    let phi = (p.theta1 + k) * p.l1 * T::half();
    let (c, s) = (phi.cosh(), phi.sinh());
    let ch = (p.lx * T::half()).cosh();
    let sh = (p.l1 * T::half()).sinh();
    (c * c * ch * ch / (sh * sh) + s * s).sqrt()
}

/// Length of γ₂ = 1/0.
pub fn len_gamma2<T: Real>(p: &SurfacePoint<T>) -> T {
    twist_family_length(p, T::zero())
}

/// The variant cosh(l₂/2) = cosh(θ₁l₁/2)·cosh(l_X/2)/sinh(l₁/2), which drops a term
/// of formula A. Kept only to show how far it is from the real length.
pub fn len_gamma2_truncated<T: Real>(p: &SurfacePoint<T>) -> T {
    let v = (p.theta1 * p.l1 * T::half()).cosh() * (p.lx * T::half()).cosh()
        / (p.l1 * T::half()).sinh();
    T::two() * acosh_clamped(v)
}

/// Length of the non-orientable geodesic dual to an orientable one of length `l`:
/// sinh(l'/2) = cosh(l/2)/sinh(l_X/2).
pub fn dual_length<T: Real>(l: T, lx: T) -> T {
    T::two() * ((l * T::half()).cosh() / (lx * T::half()).sinh()).asinh()
}

/// Dual length from the trace 2cosh(l/2) of the orientable class.
pub fn dual_length_from_trace<T: Real>(tr: T, lx: T) -> T {
    T::two() * ((tr * T::half()) / (lx * T::half()).sinh()).asinh()
}

/// Orientable length recovered from its dual: cosh(l/2) = sinh(l'/2)·sinh(l_X/2).
pub fn primal_length<T: Real>(l_dual: T, lx: T) -> T {
    T::two() * acosh_clamped((l_dual * T::half()).sinh() * (lx * T::half()).sinh())
}

/// Traces 2cosh(l/2) of the four marked slopes.
#[derive(Clone, Copy, Debug)]
pub struct RootTraces<T> {
    pub t1: T,
    pub t2: T,
    pub t3: T,
    pub t4: T,
}

impl<T: Real> RootTraces<T> {
    pub fn at(p: &SurfacePoint<T>) -> Self {
        let tr = |k: T| T::two() * twist_family_sinh_half(p, k).asinh().cosh();
        RootTraces {
            t1: T::two() * (p.l1 * T::half()).cosh(),
            t2: tr(T::zero()),
            t3: tr(-T::one()),
            t4: tr(T::one()),
        }
    }
}

/// Trace of a slope by Fricke recursion tr(UV) = tr(U)tr(V) − tr(UV⁻¹) down the Farey tree.
pub fn slope_trace<T: Real>(p: &SurfacePoint<T>, s: Slope) -> T {
    slope_trace_from(&RootTraces::at(p), s)
}

pub fn slope_trace_from<T: Real>(r: &RootTraces<T>, s: Slope) -> T {
    if s.p == 0 {
        return r.t1;
    }
    if s.q == 0 {
        return r.t2;
    }
    // Farey edge (L, R) with mediant M; slopes of the negative quadrant mirror the positive ones
    let (target_p, mut tm) = if s.p > 0 { (s.p, r.t4) } else { (-s.p, r.t3) };
    let (mut lp, mut lq, mut rp, mut rq) = (0i64, 1i64, 1i64, 0i64);
    let (mut tl, mut tr) = (r.t1, r.t2);
    loop {
        let (mp, mq) = (lp + rp, lq + rq);
        if mp == target_p && mq == s.q {
            return tm;
        }
        if target_p * mq < s.q * mp {
            let next = tl * tm - tr;
            (rp, rq, tr, tm) = (mp, mq, tm, next);
        } else {
            let next = tm * tr - tl;
            (lp, lq, tl, tm) = (mp, mq, tm, next);
        }
    }
}

fn length_from_trace<T: Real>(tr: T) -> T {
    T::two() * acosh_clamped(tr * T::half())
}

/// Length of a geodesic class at a point.
pub fn length<T: Real>(g: GeodesicClass, p: &SurfacePoint<T>) -> T {
    match g {
        GeodesicClass::Ovale => p.lx,
        GeodesicClass::Orientable(s) => slope_length(p, s),
        GeodesicClass::Dual(s) => dual_length(slope_length(p, s), p.lx),
    }
}

/// Length of an orientable slope.
///
/// Slopes (1, k) and 0/1 use formula A directly. Other slopes go through the trace
/// recursion at the reduced point, where every step adds; away from D a short
/// slope would come out as a difference of large traces.
pub fn slope_length<T: Real>(p: &SurfacePoint<T>, s: Slope) -> T {
    if s.p == 0 {
        return p.l1;
    }
    if s.p.abs() == 1 {
        // slope (1, k) with k = ±q
        let k = T::from_i64(s.q * s.p).unwrap_or_else(T::zero);
        return twist_family_length(p, k);
    }
    let red = modular::reduce(p);
    let moved = modular::act_on_slope(&red.mapping, s);
    if moved.p.abs() <= 1 {
        return slope_length(&red.point, moved);
    }
    length_from_trace(slope_trace(&red.point, moved))
}

/// Geometric intersection number of two classes.
///
/// A dual Dual(s) is the closed-up arc of the torus piece in the direction of s,
/// so it meets Orientable(r) in |det(s, r)| points and another dual Dual(r) in
/// |det(s, r)| − 1 points; the ovale meets each dual once.
pub fn intersection_number(a: GeodesicClass, b: GeodesicClass) -> u64 {
    use GeodesicClass::*;
    match (a, b) {
        (Ovale, Ovale) => 0,
        (Ovale, Orientable(_)) | (Orientable(_), Ovale) => 0,
        (Ovale, Dual(_)) | (Dual(_), Ovale) => 1,
        (Orientable(s), Orientable(r)) => s.det(&r).unsigned_abs(),
        (Orientable(s), Dual(r)) | (Dual(r), Orientable(s)) => s.det(&r).unsigned_abs(),
        (Dual(s), Dual(r)) => {
            if s == r {
                0
            } else {
                s.det(&r).unsigned_abs() - 1
            }
        }
    }
}

/// Every class of length ≤ `max_len`, sorted by length then class.
pub fn candidate_geodesics<T: Real>(max_len: T, p: &SurfacePoint<T>) -> Vec<(GeodesicClass, T)> {
    if !(max_len > T::zero()) {
        return Vec::new();
    }
    // enumerate on the reduced point, where traces grow monotonically down the Farey tree
    let red = modular::reduce(p);
    let q = red.point;
    let back = red.mapping.inverse();
    let mut found = enumerate_reduced(max_len, &q);
    for (c, _) in found.iter_mut() {
        *c = c.apply(&back);
    }
    sort_classes(&mut found);
    found
}

pub(crate) fn sort_classes<T: Real>(v: &mut [(GeodesicClass, T)]) {
    v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
}

/// Enumeration at a point whose marked traces satisfy t₁ ≤ t₂ ≤ min(t₃, t₄).
pub(crate) fn enumerate_reduced<T: Real>(max_len: T, q: &SurfacePoint<T>) -> Vec<(GeodesicClass, T)> {
    let half = T::half();
    let t_or = T::two() * (max_len * half).cosh();
    let t_dual = T::two() * (max_len * half).sinh() * (q.lx * half).sinh();
    let bound = t_or.max(t_dual);
    let roots = RootTraces::at(q);
    let mut out = Vec::new();
    let push = |s: Slope, t: T, out: &mut Vec<(GeodesicClass, T)>| {
        if t <= t_or {
            out.push((GeodesicClass::Orientable(s), length_from_trace(t)));
        }
        if t <= t_dual {
            out.push((GeodesicClass::Dual(s), dual_length_from_trace(t, q.lx)));
        }
    };
    if q.lx <= max_len {
        out.push((GeodesicClass::Ovale, q.lx));
    }
    push(Slope::GAMMA1, roots.t1, &mut out);
    push(Slope::GAMMA2, roots.t2, &mut out);
    // exact closed forms for the two root mediants, recursion below them
    for (sign, tm) in [(1i64, roots.t4), (-1, roots.t3)] {
        let mut stack = vec![((0i64, 1i64), (1i64, 0i64), roots.t1, roots.t2, tm)];
        while let Some((l, r, tl, tr, tm)) = stack.pop() {
            let m = (l.0 + r.0, l.1 + r.1);
            let monotone = tm >= tl.max(tr);
            if tm > bound && monotone {
                continue;
            }
            if m.0 + m.1 > 1_000_000 {
                continue;
            }
            push(Slope::from_raw(sign * m.0, m.1), tm, &mut out);
            stack.push((l, m, tl, tm, tl * tm - tr));
            stack.push((m, r, tm, tr, tm * tr - tl));
        }
    }
    // root mediants use closed forms; keep their lengths consistent with `length`
    for (c, len) in out.iter_mut() {
        if let GeodesicClass::Orientable(s) = *c {
            if s.p.abs() == 1 {
                *len = slope_length(q, s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(theta: f64, l1: f64, lx: f64) -> SurfacePoint<f64> {
        SurfacePoint::new(theta, l1, lx).unwrap()
    }

    #[test]
    fn slope_normalization() {
        assert_eq!(Slope::new(1, -1).unwrap(), Slope::GAMMA3);
        assert_eq!(Slope::new(-1, 0).unwrap(), Slope::GAMMA2);
        assert_eq!(Slope::new(0, -1).unwrap(), Slope::GAMMA1);
        assert!(Slope::new(2, 4).is_err());
        assert!(Slope::new(0, 0).is_err());
        assert_eq!(Slope::GAMMA3.to_string(), "-1/1");
    }

    #[test]
    fn farey_count() {
        // primitive pairs in the box, up to sign
        let v = Slope::all_within(2);
        assert_eq!(v.len(), 8);
        assert!(v.contains(&Slope::GAMMA2));
    }

    #[test]
    fn wall_loci_at_zero_and_half_twist() {
        for l1 in [0.4, 1.0, 2.2, 3.5] {
            let x = cosh_half_sq(l1);
            let z: f64 = (x - 1.0) * (x - 1.0);
            if z > 1.0 {
                let p = SurfacePoint::from_xz(0.0, x, z).unwrap();
                assert_abs_diff_eq!(len_gamma2(&p), l1, epsilon = 1e-9);
            }
            let z = 2.0 * x.powf(1.5) - 3.0 * x + 1.0;
            if z > 1.0 {
                let p = SurfacePoint::from_xz(0.5, x, z).unwrap();
                assert_abs_diff_eq!(len_gamma2(&p), l1, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn formula_a_squared_form() {
        let p = pt(0.3, 1.4, 2.1);
        let (x, z) = (p.x(), p.z());
        let c = (p.theta1 * p.l1 / 2.0).cosh();
        let want = c * c * (z + x - 1.0) / (x - 1.0);
        assert_abs_diff_eq!(cosh_half_sq(len_gamma2(&p)), want, epsilon = 1e-10);
    }

    #[test]
    fn trace_recursion_matches_closed_forms() {
        let p = pt(0.23, 1.1, 1.7);
        for k in -3i64..=3 {
            let s = Slope::new(1, k).unwrap();
            let via_tree = length_from_trace(slope_trace(&p, s));
            assert_abs_diff_eq!(via_tree, twist_family_length(&p, k as f64), epsilon = 1e-9);
        }
    }

    #[test]
    fn dual_round_trip_and_monotone() {
        let lx = 0.8;
        let mut prev = 0.0;
        for l in [0.2, 0.5, 1.0, 3.0, 7.0] {
            let d = dual_length(l, lx);
            assert!(d > prev);
            prev = d;
            assert_abs_diff_eq!(primal_length(d, lx), l, epsilon = 1e-9);
        }
    }

    #[test]
    fn intersection_rules() {
        use GeodesicClass::*;
        let g1 = Slope::GAMMA1;
        let g2 = Slope::GAMMA2;
        assert_eq!(intersection_number(Orientable(g1), Dual(g1)), 0);
        assert_eq!(intersection_number(Dual(g1), Ovale), 1);
        assert_eq!(intersection_number(Dual(g1), Dual(g2)), 0);
        assert_eq!(intersection_number(Orientable(g1), Ovale), 0);
        assert_eq!(intersection_number(Orientable(g1), Orientable(g2)), 1);
        let s = Slope::new(2, 1).unwrap();
        assert_eq!(intersection_number(Dual(g1), Dual(s)), 1);
        assert_eq!(intersection_number(Orientable(g1), Dual(g2)), 1);
    }

    #[test]
    fn cutoff_zero_is_empty() {
        assert!(candidate_geodesics(0.0, &pt(0.2, 1.0, 1.0)).is_empty());
    }

    #[test]
    fn enumeration_is_complete_against_brute_force() {
        let p = pt(0.31, 0.9, 1.3);
        let cut = 6.0;
        let listed = candidate_geodesics(cut, &p);
        let mut brute: Vec<(GeodesicClass, f64)> = Vec::new();
        for s in Slope::all_within(40) {
            for c in [GeodesicClass::Orientable(s), GeodesicClass::Dual(s)] {
                let l = length(c, &p);
                if l <= cut {
                    brute.push((c, l));
                }
            }
        }
        brute.push((GeodesicClass::Ovale, p.lx));
        sort_classes(&mut brute);
        assert_eq!(listed.len(), brute.len());
        for (a, b) in listed.iter().zip(&brute) {
            assert_eq!(a.0, b.0);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-9);
        }
    }
}
