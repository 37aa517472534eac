//! Systoles, the cell decomposition of D, and the bordered slices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{self, dual_length, length, twist_family_length, GeodesicClass, Slope};
use crate::error::{Error, Result};
use crate::holonomy::{pants_to_fn, PantsCoords, SurfacePoint};
use crate::modular::{self, FundamentalDomain, MappingClass};
use crate::optimize;
use crate::scalar::{bisect, Real};

use GeodesicClass::{Dual, Orientable, Ovale};

const G1: GeodesicClass = Orientable(Slope::GAMMA1);
const G2: GeodesicClass = Orientable(Slope::GAMMA2);
const G3: GeodesicClass = Orientable(Slope::GAMMA3);
const D1: GeodesicClass = Dual(Slope::GAMMA1);
const D2: GeodesicClass = Dual(Slope::GAMMA2);
const D3: GeodesicClass = Dual(Slope::GAMMA3);

/// Cells of D. Suffix `_0` lies in the wall θ₁ = 0, `_h` in θ₁ = 1/2.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellId {
    C1,
    C2,
    C3,
    F12,
    F2,
    F23,
    F3,
    F13,
    A123,
    A23,
    F1_0,
    F2_0,
    F3_0,
    A12_0,
    A2_0,
    A3_0,
    A13_0,
    F1_h,
    F2_h,
    F3_h,
    A12_h,
    A2_h,
    A23_h,
    A3_h,
    A13_h,
    S123,
    XP,
    XH,
}

impl CellId {
    pub const ALL: [CellId; 28] = [
        CellId::C1,
        CellId::C2,
        CellId::C3,
        CellId::F12,
        CellId::F2,
        CellId::F23,
        CellId::F3,
        CellId::F13,
        CellId::A123,
        CellId::A23,
        CellId::F1_0,
        CellId::F2_0,
        CellId::F3_0,
        CellId::A12_0,
        CellId::A2_0,
        CellId::A3_0,
        CellId::A13_0,
        CellId::F1_h,
        CellId::F2_h,
        CellId::F3_h,
        CellId::A12_h,
        CellId::A2_h,
        CellId::A23_h,
        CellId::A3_h,
        CellId::A13_h,
        CellId::S123,
        CellId::XP,
        CellId::XH,
    ];

    pub fn name(self) -> &'static str {
        use CellId::*;
        match self {
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            F12 => "F12",
            F2 => "F2",
            F23 => "F23",
            F3 => "F3",
            F13 => "F13",
            A123 => "A123",
            A23 => "A23",
            F1_0 => "F1_0",
            F2_0 => "F2_0",
            F3_0 => "F3_0",
            A12_0 => "A12_0",
            A2_0 => "A2_0",
            A3_0 => "A3_0",
            A13_0 => "A13_0",
            F1_h => "F1_h",
            F2_h => "F2_h",
            F3_h => "F3_h",
            A12_h => "A12_h",
            A2_h => "A2_h",
            A23_h => "A23_h",
            A3_h => "A3_h",
            A13_h => "A13_h",
            S123 => "S123",
            XP => "XP",
            XH => "XH",
        }
    }

    /// Systoles of every point of the cell, as classes at the point itself.
    pub fn systoles(self) -> Vec<GeodesicClass> {
        use CellId::*;
        let mut v = match self {
            C1 | F1_0 | F1_h => vec![G1],
            C2 | F2_0 | F2_h => vec![D1],
            C3 | F3 | F3_0 | A3_0 | F3_h | A3_h => vec![Ovale],
            F12 | A12_0 | A12_h => vec![G1, D1],
            F2 | A2_0 => vec![D1, D2],
            F23 | A23_h => vec![D1, Ovale],
            F13 | A13_0 | A13_h => vec![G1, Ovale],
            A123 | S123 => vec![G1, D1, Ovale],
            A23 => vec![D1, D2, Ovale],
            A2_h => vec![D1, D2, D3],
            XP => vec![G1, G2, D1, D2, Ovale],
            XH => vec![D1, D2, D3, Ovale],
        };
        v.sort();
        v
    }

    pub fn is_vertex(self) -> bool {
        matches!(self, CellId::S123 | CellId::XP | CellId::XH)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CellId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidPoint(format!("unknown cell {s:?}")))
    }
}

/// A length together with the classes realizing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Systole<T> {
    pub value: T,
    pub classes: Vec<GeodesicClass>,
}

fn tie<T: Real>(a: T, b: T, eps: T) -> bool {
    (a - b).abs() <= eps * a.abs().max(b.abs()).max(T::one())
}

/// Lengths at a point of D of every class that can be short there.
fn reduced_lengths<T: Real>(q: &SurfacePoint<T>) -> [(GeodesicClass, T); 7] {
    let l2 = twist_family_length(q, T::zero());
    let l3 = twist_family_length(q, -T::one());
    [
        (G1, q.l1),
        (G2, l2),
        (G3, l3),
        (D1, dual_length(q.l1, q.lx)),
        (D2, dual_length(l2, q.lx)),
        (D3, dual_length(l3, q.lx)),
        (Ovale, q.lx),
    ]
}

fn pull_back(classes: &[GeodesicClass], g: &MappingClass) -> Vec<GeodesicClass> {
    let back = g.inverse();
    let mut v: Vec<GeodesicClass> = classes.iter().map(|c| c.apply(&back)).collect();
    v.sort();
    v
}

/// Minimum of `weighted` lengths and the tied classes.
fn min_with_ties<T: Real>(cands: &[(GeodesicClass, T)], eps: T) -> Systole<T> {
    let value = cands.iter().fold(T::infinity(), |m, c| m.min(c.1));
    let mut classes: Vec<GeodesicClass> = cands.iter().filter(|c| tie(c.1, value, eps)).map(|c| c.0).collect();
    classes.sort();
    classes.dedup();
    Systole { value, classes }
}

pub fn systole<T: Real>(p: &SurfacePoint<T>) -> Systole<T> {
    systole_with(p, T::wall_eps())
}

/// Reduces into D and reads the systoles off the cell table.
pub fn systole_with<T: Real>(p: &SurfacePoint<T>, eps: T) -> Systole<T> {
    let red = modular::reduce_with(p, eps);
    let q = red.point;
    let value = q.l1.min(dual_length(q.l1, q.lx)).min(q.lx);
    let cell = classify_reduced(&q, eps);
    Systole { value, classes: pull_back(&cell.systoles(), &red.mapping) }
}

/// Systole with the realizing set found by comparing all short classes at the
/// reduced point, without the cell table.
pub fn systole_by_ties<T: Real>(p: &SurfacePoint<T>, eps: T) -> Systole<T> {
    let red = modular::reduce_with(p, eps);
    let s = min_with_ties(&reduced_lengths(&red.point), eps);
    Systole { value: s.value, classes: pull_back(&s.classes, &red.mapping) }
}

pub fn classify_cell<T: Real>(p: &SurfacePoint<T>) -> Result<CellId> {
    classify_cell_with(p, T::wall_eps())
}

pub fn classify_cell_with<T: Real>(p: &SurfacePoint<T>, eps: T) -> Result<CellId> {
    if !(FundamentalDomain { eps }).contains(p) {
        return Err(Error::OutsideDomain);
    }
    Ok(classify_reduced(p, eps))
}

fn classify_reduced<T: Real>(q: &SurfacePoint<T>, eps: T) -> CellId {
    use CellId::*;
    let wall0 = q.theta1 <= eps;
    let wallh = q.theta1 >= T::half() - eps;
    let l2 = twist_family_length(q, T::zero());
    let wall_l = tie(q.l1, l2, eps);
    let (a, b, c) = (q.l1, dual_length(q.l1, q.lx), q.lx);
    let m = a.min(b).min(c);
    let (one, dual, ov) = (tie(a, m, eps), tie(b, m, eps), tie(c, m, eps));
    // patterns that cannot occur exactly only arise within tolerance of X(P)
    match (wall0, wallh, wall_l) {
        (false, false, false) => match (one, dual, ov) {
            (true, false, false) => C1,
            (false, true, false) => C2,
            (false, false, true) => C3,
            (true, true, false) => F12,
            (false, true, true) => F23,
            (true, false, true) => F13,
            _ => A123,
        },
        (false, false, true) => match (one, dual, ov) {
            (false, true, false) => F2,
            (false, false, true) => F3,
            (false, true, true) => A23,
            _ => XP,
        },
        (true, _, false) => match (one, dual, ov) {
            (true, false, false) => F1_0,
            (false, true, false) => F2_0,
            (false, false, true) => F3_0,
            (true, true, false) => A12_0,
            (true, false, true) => A13_0,
            _ => XP,
        },
        (true, _, true) => match (one, dual, ov) {
            (false, true, false) => A2_0,
            (false, false, true) => A3_0,
            _ => XP,
        },
        (false, true, false) => match (one, dual, ov) {
            (true, false, false) => F1_h,
            (false, true, false) => F2_h,
            (false, false, true) => F3_h,
            (true, true, false) => A12_h,
            (false, true, true) => A23_h,
            (true, false, true) => A13_h,
            _ => S123,
        },
        (false, true, true) => match (one, dual, ov) {
            (false, true, false) => A2_h,
            (false, false, true) => A3_h,
            (false, true, true) => XH,
            _ => XP,
        },
    }
}

/// Shortest orientable closed geodesic, where a one-sided geodesic contributes its
/// square at twice its length.
pub fn orientable_systole<T: Real>(p: &SurfacePoint<T>) -> Systole<T> {
    let eps = T::wall_eps();
    let red = modular::reduce_with(p, eps);
    let cands: Vec<_> = reduced_lengths(&red.point)
        .into_iter()
        .map(|(c, l)| if c.is_orientable() { (c, l) } else { (c, T::two() * l) })
        .collect();
    let s = min_with_ties(&cands, eps);
    Systole { value: s.value, classes: pull_back(&s.classes, &red.mapping) }
}

/// Shortest one-sided geodesic.
pub fn nonorientable_systole<T: Real>(p: &SurfacePoint<T>) -> Systole<T> {
    let eps = T::wall_eps();
    let red = modular::reduce_with(p, eps);
    let cands: Vec<_> = reduced_lengths(&red.point).into_iter().filter(|(c, _)| !c.is_orientable()).collect();
    let s = min_with_ties(&cands, eps);
    Systole { value: s.value, classes: pull_back(&s.classes, &red.mapping) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum KSystole<T> {
    /// Minimax length and a system realizing it.
    Finite { value: T, system: Vec<GeodesicClass> },
    Unbounded,
}

impl<T: Real> KSystole<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            KSystole::Finite { value, .. } => Some(*value),
            KSystole::Unbounded => None,
        }
    }
}

/// Least, over systems of k disjoint simple closed geodesics, of the longest member.
pub fn k_systole<T: Real>(p: &SurfacePoint<T>, k: u32) -> Result<KSystole<T>> {
    let red = modular::reduce(p);
    let q = red.point;
    let len: std::collections::HashMap<GeodesicClass, T> = reduced_lengths(&q).into_iter().collect();
    let d4 = Dual(Slope::GAMMA4);
    let l4 = dual_length(twist_family_length(&q, T::one()), q.lx);
    let systems: Vec<Vec<GeodesicClass>> = match k {
        2 => vec![
            vec![G1, D1],
            vec![G1, Ovale],
            vec![G2, D2],
            vec![G2, Ovale],
            vec![D1, D2],
            vec![D1, D3],
            vec![D2, D3],
        ],
        3 => vec![vec![D1, D2, D3], vec![D1, D2, d4]],
        _ => return Err(Error::NoSystem(k)),
    };
    let max_len = |sys: &[GeodesicClass]| {
        sys.iter()
            .map(|c| if *c == d4 { l4 } else { len[c] })
            .fold(T::neg_infinity(), |m, l| m.max(l))
    };
    let best = systems
        .iter()
        .min_by(|a, b| max_len(a).partial_cmp(&max_len(b)).unwrap_or(std::cmp::Ordering::Equal))
        .expect("nonempty");
    Ok(KSystole::Finite { value: max_len(best), system: pull_back(best, &red.mapping) })
}

/// A family of bordered surfaces embedded in T₃⁻ by gluing each boundary to itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SliceSpec {
    /// One-holed torus: l_X = b₁/2.
    Torus { b1: f64 },
    /// Klein bottle with one boundary: l(γ'₁) = b₁/2.
    Klein { b1: f64 },
    /// Projective plane with two boundaries: l(γ'₁) = b₁/2, l(γ'₂) = b₂/2.
    ProjectivePlane { b1: f64, b2: f64 },
}

impl SliceSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |b: f64| b > 0.0 && b.is_finite();
        let good = match *self {
            SliceSpec::Torus { b1 } | SliceSpec::Klein { b1 } => ok(b1),
            SliceSpec::ProjectivePlane { b1, b2 } => ok(b1) && ok(b2),
        };
        if good {
            Ok(())
        } else {
            Err(Error::InvalidBoundary(format!("{self:?}")))
        }
    }

    /// Whether a point lies on the slice, up to `tol`.
    pub fn contains(&self, p: &SurfacePoint<f64>, tol: f64) -> bool {
        match *self {
            SliceSpec::Torus { b1 } => (p.lx - b1 / 2.0).abs() <= tol,
            SliceSpec::Klein { b1 } => (dual_length(p.l1, p.lx) - b1 / 2.0).abs() <= tol,
            SliceSpec::ProjectivePlane { b1, b2 } => {
                (dual_length(p.l1, p.lx) - b1 / 2.0).abs() <= tol
                    && (length(D2, p) - b2 / 2.0).abs() <= tol
            }
        }
    }
}

/// Systole of the bordered surface represented by a point of the slice.
pub fn slice_systole(spec: &SliceSpec, p: &SurfacePoint<f64>) -> Systole<f64> {
    let eps = f64::wall_eps();
    match *spec {
        SliceSpec::Torus { .. } => {
            // the interior curves are the orientable simple ones
            let red = modular::reduce(p);
            let cands: Vec<_> = reduced_lengths(&red.point).into_iter().filter(|(c, _)| c.is_orientable()).collect();
            let s = min_with_ties(&cands, eps);
            Systole { value: s.value, classes: pull_back(&s.classes, &red.mapping) }
        }
        SliceSpec::Klein { .. } => {
            // γ₁ and the duals of the Farey neighbours (1, k) of γ₁
            let k0 = -p.theta1.round() as i64;
            let mut cands = vec![(G1, p.l1)];
            for k in [k0 - 1, k0, k0 + 1] {
                let l = dual_length(twist_family_length(p, k as f64), p.lx);
                cands.push((Dual(Slope::from_raw(1, k)), l));
            }
            min_with_ties(&cands, eps)
        }
        SliceSpec::ProjectivePlane { .. } => {
            let cands = [(D3, length(D3, p)), (Dual(Slope::GAMMA4), length(Dual(Slope::GAMMA4), p))];
            min_with_ties(&cands, eps)
        }
    }
}

/// The extremal systole s predicted in closed form: for the torus cosh(s/2) = cosh(b₁/6) + 1/2,
/// for the Klein bottle cosh(s) = cosh(b₁/4) + 1, for the projective plane
/// cosh(s) = cosh(b₁/2) + cosh(b₂/2) + 1.
pub fn slice_closed_form(spec: &SliceSpec) -> f64 {
    match *spec {
        SliceSpec::Torus { b1 } => 2.0 * ((b1 / 6.0).cosh() + 0.5).acosh(),
        SliceSpec::Klein { b1 } => ((b1 / 4.0).cosh() + 1.0).acosh(),
        SliceSpec::ProjectivePlane { b1, b2 } => ((b1 / 2.0).cosh() + (b2 / 2.0).cosh() + 1.0).acosh(),
    }
}

/// Extremal Klein systole from 2(C − 1)²(C + 1) = cosh²(b₁/4), C = cosh(s/2).
///
/// This is what the hexagon relations sinh(s/4) = sinh(z/2)cosh(s/2) and
/// sinh(z/2) = cosh(b₁/4)/(2 sinh(s/2) cosh(s/2)) give when combined.
pub fn klein_extremal_systole(b1: f64) -> f64 {
    let rhs = (b1 / 4.0).cosh().powi(2);
    let f = |c: f64| 2.0 * (c - 1.0).powi(2) * (c + 1.0) - rhs;
    let mut hi = 2.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let c = bisect(f, 1.0, hi, 1e-15).expect("bracketed");
    2.0 * c.acosh()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceExtremum {
    pub point: SurfacePoint<f64>,
    pub systole: Systole<f64>,
}

/// Systole-maximal point of a slice, found numerically.
pub fn slice_extremum(spec: &SliceSpec) -> Result<SliceExtremum> {
    spec.validate()?;
    let point = match *spec {
        SliceSpec::Torus { b1 } => torus_extremum(b1),
        SliceSpec::Klein { b1 } => klein_extremum(b1),
        SliceSpec::ProjectivePlane { b1, b2 } => pp_extremum(b1, b2),
    };
    Ok(SliceExtremum { point, systole: slice_systole(spec, &point) })
}

/// Grid, compass search, then Newton on the equal-length vertex.
fn maximize_on_slice<F, G>(f: &F, cands: &G, lo: &[f64], hi: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (x0, _) in optimize::grid_best(f, lo, hi, 25, 4) {
        let (x, fx) = optimize::pattern_search(f, &x0, lo, hi, 0.02, 1e-10);
        if best.as_ref().is_none_or(|b| fx > b.1) {
            best = Some((x, fx));
        }
    }
    let (x, fx) = best.expect("grid has finite values");
    let c = cands(&x);
    let active = optimize::smallest(&c, x.len() + 1);
    match optimize::equalize(cands, &x, &active) {
        Some(y) if f(&y) >= fx - 1e-9 => y,
        _ => x,
    }
}

fn torus_extremum(b1: f64) -> SurfacePoint<f64> {
    let lx = b1 / 2.0;
    let at = |v: &[f64]| SurfacePoint { theta1: v[0], l1: v[1], lx };
    let f = |v: &[f64]| modular::reduce(&at(v)).point.l1;
    let (lo, hi) = ([0.0, 0.01], [0.5, b1 + 10.0]);
    // polish in reduced coordinates, where γ₁, γ₂, γ₃ are the shortest
    let coarse = maximize_on_slice(&f, &|v: &[f64]| vec![f(v)], &lo, &hi);
    let q = modular::reduce(&at(&coarse)).point;
    let slopes = [Slope::GAMMA1, Slope::GAMMA2, Slope::GAMMA3, Slope::GAMMA4];
    let cands = |v: &[f64]| slopes.iter().map(|&s| curves::slope_length(&at(v), s)).collect::<Vec<_>>();
    let x = [q.theta1, q.l1];
    let active = optimize::smallest(&cands(&x), 3);
    let x = match optimize::equalize(&cands, &x, &active) {
        Some(y) if f(&y) >= f(&x) - 1e-9 => y,
        _ => x.to_vec(),
    };
    modular::reduce(&at(&x)).point
}

fn klein_point(b1: f64, theta1: f64, lx: f64) -> SurfacePoint<f64> {
    // cosh(l₁/2) = sinh(l(γ'₁)/2)·sinh(l_X/2)
    let c = (b1 / 4.0).sinh() * (lx / 2.0).sinh();
    SurfacePoint { theta1, l1: 2.0 * c.max(1.0).acosh(), lx }
}

fn klein_extremum(b1: f64) -> SurfacePoint<f64> {
    let lmin = 2.0 * (1.0 / (b1 / 4.0).sinh()).asinh();
    let spec = SliceSpec::Klein { b1 };
    let at = |v: &[f64]| klein_point(b1, v[0], v[1]);
    let f = |v: &[f64]| slice_systole(&spec, &at(v)).value;
    let cands = |v: &[f64]| {
        let p = at(v);
        let mut c = vec![p.l1];
        for k in [0.0, -1.0, 1.0] {
            c.push(dual_length(twist_family_length(&p, k), p.lx));
        }
        c
    };
    let (lo, hi) = ([0.0, lmin * (1.0 + 1e-9) + 1e-9], [0.5, lmin + 2.0 * b1 + 12.0]);
    let x = maximize_on_slice(&f, &cands, &lo, &hi);
    at(&x)
}

fn pp_extremum(b1: f64, b2: f64) -> SurfacePoint<f64> {
    let at = |n3: f64| pants_to_fn(&PantsCoords { n1: b1 / 2.0, n2: b2 / 2.0, n3 });
    // l(γ'₄) decreases along the slice; the maximum of min(l(γ'₃), l(γ'₄)) is the crossing
    let g = |n3: f64| n3 - length(Dual(Slope::GAMMA4), &at(n3));
    let mut hi = 1.0;
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    let n3 = bisect(g, 1e-9, hi, 1e-15).expect("bracketed");
    at(n3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(theta: f64, l1: f64, lx: f64) -> SurfacePoint<f64> {
        SurfacePoint::new(theta, l1, lx).unwrap()
    }

    #[test]
    fn cell_names_round_trip() {
        for c in CellId::ALL {
            assert_eq!(c.name().parse::<CellId>().unwrap(), c);
        }
        assert!("C9".parse::<CellId>().is_err());
    }

    #[test]
    fn thin_point_is_in_c3() {
        let p = pt(0.2, 3.0, 0.05);
        let s = systole(&p);
        assert_abs_diff_eq!(s.value, 0.05, epsilon = 1e-15);
        assert_eq!(s.classes, vec![Ovale]);
        let q = modular::reduce(&p).point;
        assert_eq!(classify_cell(&q).unwrap(), CellId::C3);
    }

    #[test]
    fn interior_cells() {
        assert_eq!(classify_cell(&pt(0.25, 1.0, 2.0)).unwrap(), CellId::C1);
        assert_eq!(classify_cell(&pt(0.25, 2.0, 3.0)).unwrap(), CellId::C2);
        // z = x: l₁ = l_X below l(γ'₁)
        assert_eq!(classify_cell(&pt(0.25, 1.0, 1.0)).unwrap(), CellId::F13);
        assert_eq!(classify_cell(&pt(0.0, 1.0, 1.0)).unwrap(), CellId::A13_0);
        assert_eq!(classify_cell(&pt(0.5, 1.0, 1.0)).unwrap(), CellId::A13_h);
        assert!(classify_cell(&pt(0.7, 1.0, 1.0)).is_err());
    }

    #[test]
    fn cell_table_agrees_with_ties() {
        for theta in [0.0, 0.1, 0.25, 0.5] {
            for l1 in [0.3, 0.9, 1.6, 2.4, 3.3] {
                for lx in [0.2, 0.8, 1.5, 2.2, 3.0] {
                    let p = pt(theta, l1, lx);
                    let a = systole(&p);
                    let b = systole_by_ties(&p, 1e-9);
                    assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-12);
                    assert_eq!(a.classes, b.classes, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn orientable_and_nonorientable() {
        let p = pt(0.2, 3.0, 0.05);
        assert_abs_diff_eq!(nonorientable_systole(&p).value, 0.05, epsilon = 1e-15);
        let o = orientable_systole(&p);
        assert_abs_diff_eq!(o.value, 0.1, epsilon = 1e-15);
        assert_eq!(o.classes, vec![Ovale]);
    }

    #[test]
    fn k_systoles() {
        let p = pt(0.3, 1.2, 0.9);
        let two = k_systole(&p, 2).unwrap().value().unwrap();
        let three = k_systole(&p, 3).unwrap().value().unwrap();
        assert!(two <= three);
        assert!(k_systole(&p, 4).is_err());
        // the catalogue systems are pairwise disjoint
        if let KSystole::Finite { system, .. } = k_systole(&p, 3).unwrap() {
            for a in &system {
                for b in &system {
                    assert_eq!(curves::intersection_number(*a, *b), 0);
                }
            }
        }
    }

    #[test]
    fn klein_wall_chain() {
        // on l(γ'₁) fixed, l(γ'₂) = l₁ iff cosh²(l(γ'₁)/2) = (sinh²(l₁/2)/cosh(θ₁l₁/2))²
        let b1: f64 = 2.0;
        let ch = (b1 / 4.0).cosh();
        for theta in [0.0, 0.1, 0.3, 0.5] {
            let g = |l1: f64| (l1 / 2.0).sinh().powi(2) / (theta * l1 / 2.0).cosh() - ch;
            let l1 = bisect(g, 1e-6, 20.0, 1e-14).unwrap();
            let lx = 2.0 * ((l1 / 2.0).cosh() / (b1 / 4.0).sinh()).asinh();
            let p = pt(theta, l1, lx);
            assert_abs_diff_eq!(dual_length(p.l1, p.lx), b1 / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(length(D2, &p), l1, epsilon = 1e-9);
        }
    }

    #[test]
    fn slices_match_closed_forms() {
        for b1 in [1.0, 6.0] {
            let spec = SliceSpec::Torus { b1 };
            let e = slice_extremum(&spec).unwrap();
            assert!(spec.contains(&e.point, 1e-12));
            let want = (b1 / 6.0).cosh() + 0.5;
            assert_abs_diff_eq!((e.systole.value / 2.0).cosh(), want, epsilon = 1e-9);
            assert_abs_diff_eq!(e.point.theta1, 0.5, epsilon = 1e-7);
        }
        let spec = SliceSpec::ProjectivePlane { b1: 2.0, b2: 3.0 };
        let e = slice_extremum(&spec).unwrap();
        assert!(spec.contains(&e.point, 1e-9));
        assert_abs_diff_eq!(e.systole.value.cosh(), 1.0f64.cosh() + 1.5f64.cosh() + 1.0, epsilon = 1e-9);
    }

    #[test]
    fn klein_extremum_satisfies_the_hexagon_relation() {
        for b1 in [0.5, 2.0, 8.0] {
            let spec = SliceSpec::Klein { b1 };
            let e = slice_extremum(&spec).unwrap();
            assert!(spec.contains(&e.point, 1e-9));
            assert_abs_diff_eq!(e.systole.value, klein_extremal_systole(b1), epsilon = 1e-8);
            assert_eq!(e.systole.classes.len(), 3);
        }
    }

    #[test]
    fn invalid_slices() {
        assert!(slice_extremum(&SliceSpec::Torus { b1: -1.0 }).is_err());
        assert!(slice_extremum(&SliceSpec::ProjectivePlane { b1: 1.0, b2: 0.0 }).is_err());
    }
}
