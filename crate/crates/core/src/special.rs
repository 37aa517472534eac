//! Distinguished points of T₃⁻ and one representative per cell of D.

use crate::curves::{dual_length, twist_family_length};
use crate::extremal::{solve_poly, PolySpec};
use crate::holonomy::SurfacePoint;
use crate::modular;
use crate::optimize;
use crate::scalar::bisect;
use crate::systole::{k_systole, CellId, KSystole};

const PHI: f64 = 1.618_033_988_749_895;

fn at_xz(theta1: f64, x: f64, z: f64) -> SurfacePoint<f64> {
    SurfacePoint::from_xz(theta1, x, z).expect("x, z > 1")
}

/// The pentagonal surface: θ₁ = 0 and cosh(l₁/2) = cosh(l_X/2) = (1 + √5)/2.
pub fn x_p() -> SurfacePoint<f64> {
    at_xz(0.0, PHI * PHI, PHI * PHI)
}

/// cosh(l₁/2) at X(H), from the two relations sinh²(l_X/2) = X²(2X − 3) and
/// sinh²(l(γ'₁)/2) = 1/(2X − 3) together with l_X = l(γ'₁).
pub fn x_h_half_trace() -> f64 {
    bisect(|x: f64| x * x * (2.0 * x - 3.0).powi(2) - 1.0, 1.5, 3.0, 1e-15).expect("bracketed")
}

/// The hexagonal surface, on the wall θ₁ = 1/2.
pub fn x_h() -> SurfacePoint<f64> {
    let x = x_h_half_trace();
    let sh2 = x * x * (2.0 * x - 3.0);
    SurfacePoint { theta1: 0.5, l1: 2.0 * x.acosh(), lx: 2.0 * sh2.sqrt().asinh() }
}

/// The value (5 + √17)/2 of cosh(systole) at X(H).
pub fn x_h_cosh_systole() -> f64 {
    (5.0 + 17f64.sqrt()) / 2.0
}

/// Point with θ₁ = 0 on the D₄ wall z = (x − 1)².
pub fn d4_point(x: f64) -> SurfacePoint<f64> {
    at_xz(0.0, x, (x - 1.0).powi(2))
}

/// Point with θ₁ = 1/2 on the D₆ wall z = 2X³ − 3X² + 1, X = cosh(l₁/2).
pub fn d6_point(big_x: f64) -> SurfacePoint<f64> {
    at_xz(0.5, big_x * big_x, 2.0 * big_x.powi(3) - 3.0 * big_x * big_x + 1.0)
}

/// Maximizer of the orientable systole: θ₁ = 1/2, l₁ = l₂ = 2l(γ'₁), cosh(l₁/2) = (5 + √17)/4.
pub fn orientable_maximizer() -> SurfacePoint<f64> {
    let big_x = solve_poly(PolySpec::OrientableQuadratic);
    at_xz(0.5, big_x * big_x, 1.0 + 2.0 * big_x * big_x / (big_x - 1.0))
}

/// M₂ from the cubic: θ₁ = 1/2, l₁ = l₂ = l(γ'₁).
pub fn m2_closed_form() -> SurfacePoint<f64> {
    d6_point(solve_poly(PolySpec::TwoSystoleCubic))
}

/// The 2-systole maximizer, located by search over D.
pub fn two_systole_maximizer() -> SurfacePoint<f64> {
    let at = |v: &[f64]| SurfacePoint { theta1: v[0], l1: v[1], lx: v[2] };
    let f = |v: &[f64]| match k_systole(&at(v), 2) {
        Ok(KSystole::Finite { value, .. }) => value,
        _ => f64::NEG_INFINITY,
    };
    let (lo, hi) = ([0.0, 0.05, 0.05], [0.5, 6.0, 6.0]);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (x0, _) in optimize::grid_best(&f, &lo, &hi, 13, 4) {
        let (x, fx) = optimize::pattern_search(&f, &x0, &lo, &hi, 0.02, 1e-10);
        if best.as_ref().is_none_or(|b| fx > b.1) {
            best = Some((x, fx));
        }
    }
    let (x, fx) = best.expect("finite grid values");
    let q = modular::reduce(&at(&x)).point;
    // the search ends on the wall θ₁ = 1/2; finish on l₁ = l₂ = l(γ'₁) there
    let theta = if (q.theta1 - 0.5).abs() < 1e-3 { 0.5 } else { q.theta1 };
    let cands = |v: &[f64]| {
        let p = SurfacePoint { theta1: theta, l1: v[0], lx: v[1] };
        vec![p.l1, twist_family_length(&p, 0.0), dual_length(p.l1, p.lx)]
    };
    let start = [q.l1, q.lx];
    match optimize::equalize(&cands, &start, &[0, 1, 2]) {
        Some(y) => {
            let p = SurfacePoint { theta1: theta, l1: y[0], lx: y[1] };
            if f(&[p.theta1, p.l1, p.lx]) >= fx - 1e-9 {
                return p;
            }
            q
        }
        None => q,
    }
}

/// Supremum of the k-systole over T₃⁻.
pub fn k_systole_supremum(k: u32) -> Option<KSystole<f64>> {
    match k {
        2 => k_systole(&m2_closed_form(), 2).ok(),
        3 => Some(KSystole::Unbounded),
        _ => None,
    }
}

/// l₁ = l₂ inside D at twist θ₁: z = x(x − 1)/c² − x + 1 with c = cosh(θ₁l₁/2).
pub fn wall_z(theta1: f64, x: f64) -> f64 {
    let l1 = 2.0 * x.sqrt().acosh();
    let c = (theta1 * l1 / 2.0).cosh();
    x * (x - 1.0) / (c * c) - x + 1.0
}

/// A point of the given cell.
pub fn cell_representative(cell: CellId) -> SurfacePoint<f64> {
    use CellId::*;
    let g2 = PHI * PHI;
    let t = 0.25;
    let sq = |x: f64| 1.0 + x.sqrt();
    match cell {
        C1 => SurfacePoint { theta1: t, l1: 1.0, lx: 2.0 },
        C2 => SurfacePoint { theta1: t, l1: 2.0, lx: 3.0 },
        C3 => SurfacePoint { theta1: t, l1: 1.0, lx: 0.5 },
        F12 => at_xz(t, 2.0, 3.0),
        F23 => at_xz(t, 2.7, sq(2.7)),
        F13 => at_xz(t, 2.0, 2.0),
        A123 => at_xz(t, g2, g2),
        F2 => at_xz(t, 3.0, wall_z(t, 3.0)),
        F3 => at_xz(t, 2.5, wall_z(t, 2.5)),
        A23 => {
            let x = bisect(|x| wall_z(t, x) - sq(x), g2, 3.0, 1e-15).expect("bracketed");
            at_xz(t, x, sq(x))
        }
        F1_0 => SurfacePoint { theta1: 0.0, l1: 1.0, lx: 2.0 },
        F2_0 => SurfacePoint { theta1: 0.0, l1: 2.0, lx: 3.0 },
        F3_0 => SurfacePoint { theta1: 0.0, l1: 1.0, lx: 0.5 },
        A12_0 => at_xz(0.0, 2.0, 3.0),
        A13_0 => at_xz(0.0, 2.0, 2.0),
        A2_0 => d4_point(4.0),
        A3_0 => d4_point(2.5),
        F1_h => SurfacePoint { theta1: 0.5, l1: 1.0, lx: 2.0 },
        F2_h => SurfacePoint { theta1: 0.5, l1: 2.0, lx: 3.0 },
        F3_h => SurfacePoint { theta1: 0.5, l1: 1.0, lx: 0.5 },
        A12_h => at_xz(0.5, 2.0, 3.0),
        A13_h => at_xz(0.5, 2.0, 2.0),
        A23_h => at_xz(0.5, 3.0, sq(3.0)),
        A2_h => d6_point(2.0),
        A3_h => d6_point(2.5f64.sqrt()),
        S123 => at_xz(0.5, g2, g2),
        XP => x_p(),
        XH => x_h(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systole::{classify_cell, systole};
    use approx::assert_abs_diff_eq;

    #[test]
    fn representatives_classify_to_their_cell() {
        for c in CellId::ALL {
            let p = cell_representative(c);
            assert_eq!(classify_cell(&p).unwrap(), c, "{p:?}");
            assert_eq!(systole(&p).classes, c.systoles(), "{c}");
        }
    }

    #[test]
    fn x_h_values() {
        let p = x_h();
        assert_abs_diff_eq!(x_h_half_trace(), (3.0 + 17f64.sqrt()) / 4.0, epsilon = 1e-13);
        assert_abs_diff_eq!(p.lx.cosh(), x_h_cosh_systole(), epsilon = 1e-12);
        assert_eq!(systole(&p).classes.len(), 4);
    }

    #[test]
    fn x_p_values() {
        let s = systole(&x_p());
        assert_eq!(s.classes.len(), 5);
        assert_abs_diff_eq!(s.value, 2.0 * PHI.acosh(), epsilon = 1e-12);
    }

    #[test]
    fn m2_search_matches_cubic() {
        let found = two_systole_maximizer();
        let want = m2_closed_form();
        assert!(found.distance(&want) < 1e-7, "{found:?} vs {want:?}");
    }
}
