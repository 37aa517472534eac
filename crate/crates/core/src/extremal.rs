//! Differentials of length functions, eutaxy, perfection, and the extremal polynomials.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{dual_length, length, GeodesicClass, Slope};
use crate::holonomy::SurfacePoint;
use crate::lp::{self, LpResult};
use crate::scalar::{bisect, Real};
use crate::systole::systole;

/// Partials (∂/∂θ₁, ∂/∂l₁, ∂/∂l_X) of a length function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialVector<T> {
    pub d_theta: T,
    pub d_l1: T,
    pub d_lx: T,
}

impl<T: Real> DifferentialVector<T> {
    pub fn as_array(&self) -> [T; 3] {
        [self.d_theta, self.d_l1, self.d_lx]
    }

    fn from_array(v: [T; 3]) -> Self {
        DifferentialVector { d_theta: v[0], d_l1: v[1], d_lx: v[2] }
    }

    /// Signs of the entries, with |v| ≤ `zero` counted as 0.
    pub fn sign_pattern(&self, zero: T) -> [i8; 3] {
        self.as_array().map(|v| {
            if v.abs() <= zero {
                0
            } else if v > T::zero() {
                1
            } else {
                -1
            }
        })
    }
}

/// Length and differential of the slope (1, k) from formula A.
///
/// With φ = (θ₁ + k)l₁/2, Y = sinh²(l₁/2), Z = cosh²(l_X/2):
/// sinh²(l/2) = cosh²φ·Z/Y + sinh²φ.
fn twist_family_differential<T: Real>(p: &SurfacePoint<T>, k: T) -> (T, [T; 3]) {
    let half = T::half();
    let phi = (p.theta1 + k) * p.l1 * half;
    let (c, s) = (phi.cosh(), phi.sinh());
    let (sh1, ch1) = ((p.l1 * half).sinh(), (p.l1 * half).cosh());
    let (shx, chx) = ((p.lx * half).sinh(), (p.lx * half).cosh());
    let y = sh1 * sh1;
    let z = chx * chx;
    let s2 = c * c * z / y + s * s;
    let ds2 = [
        c * s * p.l1 * (z / y + T::one()),
        c * s * (p.theta1 + k) * (z / y + T::one()) - c * c * z * sh1 * ch1 / (y * y),
        c * c * chx * shx / y,
    ];
    let big_s = s2.sqrt();
    let l = T::two() * big_s.asinh();
    // dl = 2 dS / cosh(l/2), dS = dS²/(2S)
    let cl = (T::one() + s2).sqrt();
    (l, ds2.map(|d| d / (big_s * cl)))
}

/// Length and differential of an orientable class, closed form when available.
fn orientable_differential<T: Real>(s: Slope, p: &SurfacePoint<T>) -> (T, [T; 3]) {
    if s.p() == 0 {
        return (p.l1, [T::zero(), T::one(), T::zero()]);
    }
    if s.p().abs() == 1 {
        let k = T::from_i64(s.q() * s.p()).unwrap_or_else(T::zero);
        return twist_family_differential(p, k);
    }
    let g = GeodesicClass::Orientable(s);
    (length(g, p), finite_difference(g, p).as_array())
}

/// Closed-form partials for γ₁, the ovale, slopes (1, k) and their duals; central
/// differences otherwise.
pub fn differential<T: Real>(g: GeodesicClass, p: &SurfacePoint<T>) -> DifferentialVector<T> {
    match g {
        GeodesicClass::Ovale => DifferentialVector::from_array([T::zero(), T::zero(), T::one()]),
        GeodesicClass::Orientable(s) => DifferentialVector::from_array(orientable_differential(s, p).1),
        GeodesicClass::Dual(s) => {
            let half = T::half();
            let (l, dl) = orientable_differential(s, p);
            let ld = dual_length(l, p.lx);
            let cd = (ld * half).cosh();
            let shx = (p.lx * half).sinh();
            // sinh(l'/2) = cosh(l/2)/sinh(l_X/2)
            let dd_l = (l * half).sinh() / (shx * cd);
            let dd_x = -(l * half).cosh() * (p.lx * half).cosh() / (shx * shx * cd);
            DifferentialVector::from_array([dd_l * dl[0], dd_l * dl[1], dd_l * dl[2] + dd_x])
        }
    }
}

/// Central differences with step 1e−5, refined once by Richardson extrapolation.
pub fn finite_difference<T: Real>(g: GeodesicClass, p: &SurfacePoint<T>) -> DifferentialVector<T> {
    let h = T::lit(1e-5);
    let central = |i: usize, h: T| {
        let mut a = [p.theta1, p.l1, p.lx];
        let mut b = a;
        a[i] = a[i] + h;
        b[i] = b[i] - h;
        let at = |v: [T; 3]| SurfacePoint { theta1: v[0], l1: v[1], lx: v[2] };
        (length(g, &at(a)) - length(g, &at(b))) / (T::two() * h)
    };
    let four = T::lit(4.0);
    let three = T::lit(3.0);
    DifferentialVector::from_array(
        [0, 1, 2].map(|i| (four * central(i, h * T::half()) - central(i, h)) / three),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EutaxyCertificate {
    /// Positive weights λ with Σλ = 1 and Σλᵢ dlᵢ = 0.
    Coefficients(Vec<f64>),
    /// A direction w with w·dlᵢ ≥ 0 for all i, positive for some.
    Separating([f64; 3]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eutaxy {
    pub eutactic: bool,
    pub classes: Vec<GeodesicClass>,
    pub differentials: Vec<[f64; 3]>,
    pub certificate: EutaxyCertificate,
}

/// Minimum weight required of every coefficient for strict interiority.
pub const EUTAXY_SLACK: f64 = 1e-10;

fn systole_differentials(p: &SurfacePoint<f64>) -> (Vec<GeodesicClass>, Vec<[f64; 3]>) {
    let classes = systole(p).classes;
    let diffs = classes.iter().map(|&c| differential(c, p).as_array()).collect();
    (classes, diffs)
}

/// Differentials whose singular values fall below this fraction of the largest
/// are treated as lying in a lower-dimensional span.
pub const SPAN_TOL: f64 = 1e-7;

/// Orthonormal basis of the numerical span of `v` and the coordinates of `v` in it.
///
/// Remarking moves exactly coplanar differentials off their plane by rounding
/// noise; projecting first keeps the interiority test about the span they
/// actually have.
fn numerical_span(v: &[[f64; 3]]) -> (Vec<[f64; 3]>, Vec<Vec<f64>>) {
    let mut gram = Matrix3::zeros();
    for vi in v {
        let c = Vector3::from(*vi);
        gram += c * c.transpose();
    }
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    let basis: Vec<[f64; 3]> = (0..3)
        .filter(|&k| top > 0.0 && eig.eigenvalues[k] > SPAN_TOL * SPAN_TOL * top)
        .map(|k| {
            let e = eig.eigenvectors.column(k);
            [e[0], e[1], e[2]]
        })
        .collect();
    let coords = v.iter().map(|vi| basis.iter().map(|u| u[0] * vi[0] + u[1] * vi[1] + u[2] * vi[2]).collect()).collect();
    (basis, coords)
}

/// Decides whether 0 lies in the relative interior of the convex hull of the
/// differentials of the systoles.
pub fn eutaxy(p: &SurfacePoint<f64>) -> Eutaxy {
    let (classes, v) = systole_differentials(p);
    let m = v.len();
    let (basis, w) = numerical_span(&v);
    let r = basis.len();
    // variables μ₁..μ_m, δ with λᵢ = δ + μᵢ; maximize δ
    let mut a = Vec::new();
    for j in 0..r {
        let mut row: Vec<f64> = w.iter().map(|wi| wi[j]).collect();
        row.push(w.iter().map(|wi| wi[j]).sum());
        a.push(row);
    }
    let mut norm = vec![1.0; m];
    norm.push(m as f64);
    a.push(norm);
    let mut c = vec![0.0; m];
    c.push(1.0);
    let mut b = vec![0.0; r];
    b.push(1.0);
    if let LpResult::Optimal { x, value } = lp::solve(&a, &b, &c) {
        if value > EUTAXY_SLACK {
            let lambda = (0..m).map(|i| x[i] + value).collect();
            return Eutaxy { eutactic: true, classes, differentials: v, certificate: EutaxyCertificate::Coefficients(lambda) };
        }
    }
    let ws = separating(&w, r);
    let mut lifted = [0.0; 3];
    for (k, u) in basis.iter().enumerate() {
        for j in 0..3 {
            lifted[j] += ws[k] * u[j];
        }
    }
    let norm = lifted.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        lifted = lifted.map(|x| x / norm);
    }
    Eutaxy { eutactic: false, classes, certificate: EutaxyCertificate::Separating(lifted), differentials: v }
}

/// w with w·vᵢ ≥ 0 and Σ w·vᵢ = 1, from w = w⁺ − w⁻ and slacks sᵢ = w·vᵢ.
fn separating(v: &[Vec<f64>], r: usize) -> Vec<f64> {
    let m = v.len();
    let n = 2 * r + m;
    let mut a = Vec::new();
    for (i, vi) in v.iter().enumerate() {
        let mut row = vec![0.0; n];
        for j in 0..r {
            row[j] = vi[j];
            row[r + j] = -vi[j];
        }
        row[2 * r + i] = -1.0;
        a.push(row);
    }
    let mut total = vec![0.0; n];
    for t in total.iter_mut().skip(2 * r) {
        *t = 1.0;
    }
    a.push(total);
    let mut b = vec![0.0; m];
    b.push(1.0);
    match lp::solve(&a, &b, &vec![0.0; n]) {
        LpResult::Optimal { x, .. } => (0..r).map(|j| x[j] - x[r + j]).collect(),
        _ => vec![0.0; r],
    }
}

pub fn is_eutactic(p: &SurfacePoint<f64>) -> bool {
    eutaxy(p).eutactic
}

fn rank(rows: &[[f64; 3]], tol: f64) -> usize {
    let mut m: Vec<[f64; 3]> = rows.to_vec();
    let scale = m.iter().flat_map(|r| r.iter()).fold(0.0_f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut r = 0;
    for col in 0..3 {
        let Some(piv) = (r..m.len()).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())) else {
            break;
        };
        if m[piv][col].abs() <= tol * scale {
            continue;
        }
        m.swap(r, piv);
        for i in r + 1..m.len() {
            let k = m[i][col] / m[r][col];
            for c in col..3 {
                m[i][c] -= k * m[r][c];
            }
        }
        r += 1;
    }
    r
}

/// The differentials of the systoles affinely span the cotangent space.
pub fn is_perfect(p: &SurfacePoint<f64>) -> bool {
    let (_, v) = systole_differentials(p);
    if v.len() < 4 {
        return false;
    }
    let diffs: Vec<[f64; 3]> = v[1..].iter().map(|w| [w[0] - v[0][0], w[1] - v[0][1], w[2] - v[0][2]]).collect();
    rank(&diffs, 1e-8) == 3
}

pub fn is_extreme(p: &SurfacePoint<f64>) -> bool {
    is_perfect(p) && is_eutactic(p)
}

/// Whether the systole drops at `n` random perturbations of Euclidean norm `radius`.
pub fn sampled_local_max(p: &SurfacePoint<f64>, n: usize, radius: f64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s0 = systole(p).value;
    (0..n).all(|_| {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-12);
        let q = SurfacePoint {
            theta1: p.theta1 + radius * v[0] / norm,
            l1: p.l1 + radius * v[1] / norm,
            lx: p.lx + radius * v[2] / norm,
        };
        systole(&q).value < s0
    })
}

/// The polynomial equations behind the extremal values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolySpec {
    /// 2X² − 5X + 1 = 0: cosh(l₁/2) at the maximum of the orientable systole.
    OrientableQuadratic,
    /// 2X³ − 3X² − 2X + 2 = 0: cosh(l₁/2) at the maximum of the 2-systole.
    TwoSystoleCubic,
    /// X² − X − 1 = 0: cosh of half the side of the regular right-angled pentagon.
    Golden,
    /// 2X² − 3X − 1 = 0: cosh(l₁/2) at X(H).
    HexagonQuadratic,
}

impl PolySpec {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            PolySpec::OrientableQuadratic => 2.0 * x * x - 5.0 * x + 1.0,
            PolySpec::TwoSystoleCubic => 2.0 * x * x * x - 3.0 * x * x - 2.0 * x + 2.0,
            PolySpec::Golden => x * x - x - 1.0,
            PolySpec::HexagonQuadratic => 2.0 * x * x - 3.0 * x - 1.0,
        }
    }

    pub fn bracket(self) -> (f64, f64) {
        match self {
            PolySpec::OrientableQuadratic => (1.0, 3.0),
            PolySpec::TwoSystoleCubic => (1.7, 1.8),
            PolySpec::Golden => (1.0, 2.0),
            PolySpec::HexagonQuadratic => (1.0, 3.0),
        }
    }
}

/// The root of interest, by bisection on the bracket.
pub fn solve_poly(spec: PolySpec) -> f64 {
    let (lo, hi) = spec.bracket();
    bisect(|x| spec.eval(x), lo, hi, 1e-15).expect("bracket holds a sign change")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(theta: f64, l1: f64, lx: f64) -> SurfacePoint<f64> {
        SurfacePoint::new(theta, l1, lx).unwrap()
    }

    #[test]
    fn basic_differentials() {
        let p = pt(0.3, 1.2, 0.9);
        assert_eq!(differential(GeodesicClass::Orientable(Slope::GAMMA1), &p).as_array(), [0.0, 1.0, 0.0]);
        assert_eq!(differential(GeodesicClass::Ovale, &p).as_array(), [0.0, 0.0, 1.0]);
        assert_eq!(differential(GeodesicClass::Dual(Slope::GAMMA1), &p).sign_pattern(0.0), [0, 1, -1]);
    }

    #[test]
    fn closed_forms_match_differences() {
        let p = pt(0.21, 1.4, 1.1);
        for s in Slope::all_within(3) {
            for g in [GeodesicClass::Orientable(s), GeodesicClass::Dual(s)] {
                let a = differential(g, &p).as_array();
                let b = finite_difference(g, &p).as_array();
                for i in 0..3 {
                    assert!((a[i] - b[i]).abs() <= 1e-6f64.max(1e-4 * a[i].abs()), "{g} {i}: {} {}", a[i], b[i]);
                }
            }
        }
    }

    #[test]
    fn polynomials() {
        assert_abs_diff_eq!(solve_poly(PolySpec::OrientableQuadratic), (5.0 + 17f64.sqrt()) / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(solve_poly(PolySpec::Golden), (1.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(solve_poly(PolySpec::HexagonQuadratic), (3.0 + 17f64.sqrt()) / 4.0, epsilon = 1e-12);
        let r = solve_poly(PolySpec::TwoSystoleCubic);
        assert!((r - 1.7445).abs() < 1e-3);
    }

    #[test]
    fn single_systole_is_not_critical() {
        let p = pt(0.25, 1.0, 2.0);
        let e = eutaxy(&p);
        assert!(!e.eutactic);
        if let EutaxyCertificate::Separating(w) = e.certificate {
            for v in &e.differentials {
                assert!(w[0] * v[0] + w[1] * v[1] + w[2] * v[2] >= -1e-12);
            }
        } else {
            panic!("expected a separating direction");
        }
        assert!(!is_perfect(&p));
        assert!(!is_extreme(&p));
    }
}
