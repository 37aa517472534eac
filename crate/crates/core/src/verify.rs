//! The numbered acceptance checks, shared by the test suite and `teich3 verify`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{
    candidate_geodesics, dual_length, dual_length_from_trace, len_gamma2, len_gamma2_truncated, slope_length,
    slope_trace, GeodesicClass, Slope,
};
use crate::extremal::{
    differential, finite_difference, is_eutactic, is_extreme, is_perfect, sampled_local_max, solve_poly, PolySpec,
};
use crate::holonomy::{build_from_fn, dual_word, slope_word, Letter, Orientability, Symbol, SurfacePoint};
use crate::modular::{self, FundamentalDomain, Generator, MappingClass};
use crate::special;
use crate::systole::{k_systole, slice_closed_form, slice_extremum, systole, CellId, SliceSpec};
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?}")),
        }
    }
}

/// One named sub-check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub parts: Vec<Part>,
}

impl CheckReport {
    pub fn part(&self, name: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.name == name)
    }

    pub fn failed_parts(&self) -> Vec<&str> {
        self.parts.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {} {}: {verdict} ({:.2} s)", self.id, self.name, self.seconds)?;
        for p in &self.parts {
            let v = if p.passed { "ok" } else { "FAILED" };
            write!(f, "\n    {} {v}: {}", p.name, p.detail)?;
        }
        Ok(())
    }
}

pub const NAMES: [&str; 9] = [
    "global_maximum",
    "inequality_scan",
    "bordered_formulas",
    "eutaxy_census",
    "oracle_equivalence",
    "group_action",
    "derived_constants",
    "unboundedness",
    "differentials",
];

pub const DEFAULT_SEED: u64 = 20_260_916;

pub struct Verifier {
    pub level: Level,
    pub tol: Tolerances,
    pub seed: u64,
}

impl Verifier {
    pub fn new(level: Level, tol: Tolerances, seed: u64) -> Self {
        Verifier { level, tol, seed }
    }

    pub fn run_all(&self) -> Vec<CheckReport> {
        (1..=9).map(|i| self.run(i).expect("ids 1..=9 exist")).collect()
    }

    pub fn run(&self, id: u32) -> Option<CheckReport> {
        let start = Instant::now();
        let mut parts = match id {
            1 => self.global_maximum(),
            2 => self.inequality_scan(),
            3 => self.bordered_formulas(),
            4 => self.eutaxy_census(),
            5 => self.oracle_equivalence(),
            6 => self.group_action(),
            7 => self.derived_constants(),
            8 => self.unboundedness(),
            9 => self.differentials(),
            _ => return None,
        };
        let seconds = start.elapsed().as_secs_f64();
        let budget = match id {
            1 => Some(1.0),
            2 => Some(60.0),
            3 => Some(30.0),
            _ => None,
        };
        if let Some(b) = budget {
            parts.push(Part {
                name: "runtime".into(),
                passed: seconds < b,
                detail: format!("{seconds:.3} s, budget {b} s"),
            });
        }
        Some(CheckReport {
            id,
            name: NAMES[id as usize - 1].into(),
            passed: parts.iter().all(|p| p.passed),
            seconds,
            parts,
        })
    }

    fn rng(&self, id: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(31).wrapping_add(id))
    }

    fn global_maximum(&self) -> Vec<Part> {
        let want = special::x_h_cosh_systole();
        let p = special::x_h();
        let fast = systole(&p).value.cosh();
        let cands = candidate_geodesics(systole(&p).value + 0.5, &p);
        let oracle = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min).cosh();
        let tol = self.tol.bound;
        vec![
            Part {
                name: "fast_path".into(),
                passed: (fast - want).abs() < tol,
                detail: format!("cosh(sys) = {fast:.12}, want {want:.12}"),
            },
            Part {
                name: "enumeration".into(),
                passed: (oracle - want).abs() < tol,
                detail: format!("cosh(min over {} classes) = {oracle:.12}", cands.len()),
            },
        ]
    }

    fn sample_point(rng: &mut ChaCha8Rng) -> SurfacePoint<f64> {
        let excess = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.5) {
                rng.gen_range(1e-6..20.0)
            } else {
                10f64.powf(rng.gen_range(-3.0..3.0))
            }
        };
        let x = 1.0 + excess(rng);
        let z = 1.0 + excess(rng);
        let theta = if rng.gen_bool(0.5) {
            rng.gen_range(-2.0..2.0)
        } else {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            s * 10f64.powf(rng.gen_range(-4.0..0.5))
        };
        SurfacePoint::from_xz(theta, x, z).expect("x, z > 1")
    }

    fn random_mapping(rng: &mut ChaCha8Rng, max_len: usize) -> MappingClass {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<Generator> =
            (0..len).map(|_| [Generator::N, Generator::T, Generator::S][rng.gen_range(0..3)]).collect();
        MappingClass::from_word(&word)
    }

    fn inequality_scan(&self) -> Vec<Part> {
        let n = match self.level {
            Level::Fast => 10_000,
            Level::Full => 100_000,
        };
        let mut rng = self.rng(2);
        let bound = special::x_h_cosh_systole();
        let xh = special::x_h();
        let (mut worst, mut violations, mut near, mut near_off_orbit, mut orbit_samples) = (0.0f64, 0, 0, 0, 0);
        for i in 0..n {
            // one sample in a hundred sits near the X(H) orbit
            let p = if i % 100 == 0 {
                orbit_samples += 1;
                let d = [0, 1, 2].map(|_| rng.gen_range(-1e-3..1e-3));
                let q = SurfacePoint { theta1: xh.theta1 + d[0], l1: xh.l1 + d[1], lx: xh.lx + d[2] };
                modular::act_on_point(&Self::random_mapping(&mut rng, 6), &q)
            } else {
                Self::sample_point(&mut rng)
            };
            let c = systole(&p).value.cosh();
            worst = worst.max(c);
            if !(c <= bound + self.tol.bound) {
                violations += 1;
            }
            if c > bound - 1e-3 {
                near += 1;
                if modular::reduce(&p).point.distance(&xh) > 0.05 {
                    near_off_orbit += 1;
                }
            }
        }
        vec![
            Part {
                name: "bound".into(),
                passed: violations == 0,
                detail: format!("{n} points, max cosh(sys) = {worst:.12}, bound {bound:.12}, {violations} violations"),
            },
            Part {
                name: "equality_near_orbit".into(),
                passed: near > 0 && near_off_orbit == 0,
                detail: format!(
                    "{near} points within 1e-3 of the bound ({orbit_samples} seeded near the orbit), {near_off_orbit} away from X(H)"
                ),
            },
        ]
    }

    fn bordered_formulas(&self) -> Vec<Part> {
        let tol = self.tol.optimizer;
        let bs = [0.5, 1.0, 2.0, 4.0, 8.0];
        let mut specs = Vec::new();
        for &b1 in &bs {
            specs.push(("torus", SliceSpec::Torus { b1 }));
        }
        for &b1 in &bs {
            specs.push(("klein", SliceSpec::Klein { b1 }));
        }
        for &b1 in &bs {
            for b2 in [0.5, 2.0] {
                specs.push(("pp", SliceSpec::ProjectivePlane { b1, b2 }));
            }
        }
        let mut parts = Vec::new();
        for kind in ["torus", "klein", "pp"] {
            let mut worst = 0.0f64;
            let mut lines = Vec::new();
            for (_, spec) in specs.iter().filter(|s| s.0 == kind) {
                let detail = match slice_extremum(spec) {
                    Ok(e) => {
                        let got = e.systole.value;
                        let want = slice_closed_form(spec);
                        // compare on the scale the formula is stated in
                        let (g, w) = match spec {
                            SliceSpec::Torus { .. } => ((got / 2.0).cosh(), (want / 2.0).cosh()),
                            _ => (got.cosh(), want.cosh()),
                        };
                        worst = worst.max((g - w).abs());
                        format!("{spec:?}: {g:.10} vs {w:.10}")
                    }
                    Err(e) => {
                        worst = f64::INFINITY;
                        format!("{spec:?}: {e}")
                    }
                };
                lines.push(detail);
            }
            parts.push(Part {
                name: kind.into(),
                passed: worst < tol,
                detail: format!("max |Δ| = {worst:.3e}; {}", lines.join("; ")),
            });
        }
        parts
    }

    fn eutaxy_census(&self) -> Vec<Part> {
        let mut wrong = Vec::new();
        let mut reps = 0;
        for c in CellId::ALL {
            let p = special::cell_representative(c);
            let special_point = matches!(c, CellId::XP | CellId::XH);
            if !special_point {
                reps += 1;
            }
            let (e, perf, ext) = (is_eutactic(&p), is_perfect(&p), is_extreme(&p));
            let want_e = special_point;
            let want_x = c == CellId::XH;
            if e != want_e || perf != want_x || ext != want_x {
                wrong.push(format!("{c}: eutactic {e}, perfect {perf}, extreme {ext}"));
            }
        }
        let local = sampled_local_max(&special::x_h(), 1000, 1e-3, self.seed);
        vec![
            Part {
                name: "verdicts".into(),
                passed: wrong.is_empty(),
                detail: format!("{reps} cell representatives plus X(P), X(H); mismatches: {wrong:?}"),
            },
            Part {
                name: "sampled_local_max".into(),
                passed: local,
                detail: format!("systole drops at 1000 perturbations of size 1e-3 around X(H): {local}"),
            },
        ]
    }

    fn oracle_equivalence(&self) -> Vec<Part> {
        let mut rng = self.rng(5);
        let slopes = Slope::all_within(10);
        let tol = self.tol.oracle;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
        let (mut worst, mut bad, mut count) = (0.0f64, Vec::new(), 0usize);
        for _ in 0..200 {
            let p: SurfacePoint<f64> = SurfacePoint {
                theta1: rng.gen_range(-1.0..1.0),
                l1: rng.gen_range(0.2..3.0),
                lx: rng.gen_range(0.2..3.0),
            };
            let g = build_from_fn(&p);
            let mut check = |what: String, closed: f64, holo: f64| {
                let e = rel(closed, holo);
                count += 1;
                worst = worst.max(e);
                if !(e <= tol) && bad.len() < 5 {
                    bad.push(format!("{what} at {p:?}: {closed} vs {holo}"));
                }
            };
            let ovale = g.word_length(&[Symbol { letter: Letter::Glide, inverse: false }]);
            match ovale {
                Ok((Orientability::NonOrientable, l)) => check("ovale".into(), p.lx, l),
                _ => check("ovale".into(), p.lx, f64::NAN),
            }
            for &s in &slopes {
                let trace = slope_trace(&p, s);
                let by_trace = 2.0 * (trace / 2.0).max(1.0).acosh();
                let closed = slope_length(&p, s);
                if s.p().abs() == 1 {
                    check(format!("{s} recursion"), closed, by_trace);
                }
                let holo = match g.word_length(&slope_word(s)) {
                    Ok((Orientability::Orientable, l)) => l,
                    _ => f64::NAN,
                };
                check(format!("{s}"), closed, holo);
                let dual_closed = dual_length(closed, p.lx);
                check(format!("{s}' recursion"), dual_closed, dual_length_from_trace(trace, p.lx));
                let dual_holo = match g.word_length(&dual_word(s)) {
                    Ok((Orientability::NonOrientable, l)) => l,
                    _ => f64::NAN,
                };
                check(format!("{s}'"), dual_closed, dual_holo);
            }
        }
        // the variant that drops a term of formula A
        let mut dev = 0.0f64;
        for i in 0..=10 {
            for j in 1..=20 {
                for k in 1..=20 {
                    let p = SurfacePoint { theta1: i as f64 * 0.05, l1: j as f64 * 0.2, lx: k as f64 * 0.2 };
                    dev = dev.max((len_gamma2_truncated(&p) - len_gamma2(&p)).abs());
                }
            }
        }
        vec![
            Part {
                name: "holonomy".into(),
                passed: bad.is_empty() && worst.is_finite(),
                detail: format!("{count} comparisons at 200 points, max relative error {worst:.3e}; {bad:?}"),
            },
            Part {
                name: "truncated_variant".into(),
                passed: dev > 1e-2,
                detail: format!("max |l2 variant - l2| on the grid = {dev:.4}"),
            },
        ]
    }

    fn group_action(&self) -> Vec<Part> {
        let rels = modular::presentation_relations();
        let failed_rels: Vec<&str> = rels.iter().filter(|r| !r.1).map(|r| r.0).collect();
        let mut rng = self.rng(6);
        let tol = self.tol.action;
        let (mut idem, mut orbit, mut sys) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..100 {
            let p: SurfacePoint<f64> = SurfacePoint {
                theta1: rng.gen_range(-2.0..2.0),
                l1: rng.gen_range(0.3..4.0),
                lx: rng.gen_range(0.3..4.0),
            };
            let g = Self::random_mapping(&mut rng, 12);
            let gp = modular::act_on_point(&g, &p);
            let r = modular::reduce(&p).point;
            let rr = modular::reduce(&r).point;
            let rg = modular::reduce(&gp).point;
            let scale = r.l1.max(r.lx).max(1.0);
            idem = idem.max(rr.distance(&r) / scale);
            orbit = orbit.max(rg.distance(&r) / scale);
            let (a, b) = (systole(&p).value, systole(&gp).value);
            sys = sys.max((a - b).abs() / a.max(1.0));
        }
        vec![
            Part {
                name: "relations".into(),
                passed: failed_rels.is_empty(),
                detail: format!("{} relations, failing: {failed_rels:?}", rels.len()),
            },
            Part { name: "idempotent".into(), passed: idem <= tol, detail: format!("max drift {idem:.3e}") },
            Part { name: "orbit_invariant".into(), passed: orbit <= tol, detail: format!("max distance {orbit:.3e}") },
            Part { name: "systole_invariant".into(), passed: sys <= tol, detail: format!("max relative change {sys:.3e}") },
        ]
    }

    fn derived_constants(&self) -> Vec<Part> {
        let q = solve_poly(PolySpec::OrientableQuadratic);
        let want_q = (5.0 + 17f64.sqrt()) / 4.0;
        let c = solve_poly(PolySpec::TwoSystoleCubic);
        let m2 = special::two_systole_maximizer();
        let l1 = m2.l1;
        let l2 = len_gamma2(&m2);
        let lens = [l1, dual_length(l1, m2.lx), l2, dual_length(l2, m2.lx)];
        let spread = lens.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - lens.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let s = systole(&m2);
        let big_x = (m2.l1 / 2.0).cosh();
        vec![
            Part {
                name: "quadratic".into(),
                passed: (q - want_q).abs() < 1e-12 && (q - 2.2807764).abs() < 1e-7,
                detail: format!("{q:.12} vs (5+√17)/4 = {want_q:.12}"),
            },
            Part {
                name: "cubic".into(),
                passed: (1.7..=1.8).contains(&c) && (c - 1.7445).abs() < 5e-4 && ((c * 100.0).round() - 174.0).abs() < 0.5,
                detail: format!("root {c:.10}"),
            },
            Part {
                name: "m2_equalities".into(),
                passed: spread < self.tol.optimizer,
                detail: format!("M2 = {m2:?}, lengths {lens:?}, spread {spread:.3e}"),
            },
            Part {
                name: "m2_matches_cubic".into(),
                passed: (big_x - c).abs() < self.tol.optimizer,
                detail: format!("cosh(l1/2) = {big_x:.10}"),
            },
            Part {
                name: "m2_systole_is_ovale".into(),
                passed: s.classes == vec![GeodesicClass::Ovale],
                detail: format!("systole {:.10} realized by {:?}", s.value, s.classes),
            },
        ]
    }

    fn unboundedness(&self) -> Vec<Part> {
        let (theta, l1) = (0.3, 1.0);
        let mut rows = Vec::new();
        for k in 1..=6 {
            let lx = 10f64.powi(-k);
            let p = SurfacePoint { theta1: theta, l1, lx };
            let three = k_systole(&p, 3).ok().and_then(|s| s.value()).unwrap_or(f64::NAN);
            let q = modular::reduce(&p).point;
            let dual_min = dual_length(q.l1, q.lx);
            let floor = 2.0 * (1.0 / (lx / 2.0).sinh()).asinh();
            rows.push((lx, three, dual_min, floor));
        }
        let increasing = |f: fn(&(f64, f64, f64, f64)) -> f64| rows.windows(2).all(|w| f(&w[1]) > f(&w[0]));
        let above = rows.iter().all(|r| r.1 >= r.3 - 1e-9 && r.2 >= r.3 - 1e-9);
        let last = rows.last().expect("six rows");
        let table: Vec<String> =
            rows.iter().map(|r| format!("lX={:.0e}: 3-sys {:.4}, dual min {:.4}, floor {:.4}", r.0, r.1, r.2, r.3)).collect();
        vec![
            Part {
                name: "monotone".into(),
                passed: increasing(|r| r.1) && increasing(|r| r.2),
                detail: table.join("; "),
            },
            Part {
                name: "dual_floor".into(),
                passed: above && last.2 > 25.0,
                detail: format!("every value ≥ 2 asinh(1/sinh(lX/2)); last floor {:.4}", last.3),
            },
        ]
    }

    fn differentials(&self) -> Vec<Part> {
        use GeodesicClass::{Dual, Orientable, Ovale};
        let mut rng = self.rng(9);
        let mut classes = vec![Ovale, Orientable(Slope::GAMMA1), Dual(Slope::GAMMA1)];
        for k in -2..=2 {
            classes.push(Orientable(Slope::new(1, k).expect("primitive")));
            classes.push(Dual(Slope::new(1, k).expect("primitive")));
        }
        let (mut bad, mut count) = (Vec::new(), 0);
        for _ in 0..100 {
            let p: SurfacePoint<f64> = SurfacePoint {
                theta1: rng.gen_range(-1.0..1.0),
                l1: rng.gen_range(0.2..4.0),
                lx: rng.gen_range(0.2..4.0),
            };
            for &c in &classes {
                let a: [f64; 3] = differential(c, &p).as_array();
                let f = finite_difference(c, &p).as_array();
                for i in 0..3 {
                    count += 1;
                    if !((a[i] - f[i]).abs() <= self.tol.fd_abs.max(self.tol.fd_rel * a[i].abs())) && bad.len() < 5 {
                        bad.push(format!("{c} ∂{i} at {p:?}: {} vs {}", a[i], f[i]));
                    }
                }
            }
        }
        // sign table over a grid of D
        let g2 = Orientable(Slope::GAMMA2);
        let table: [(GeodesicClass, [i8; 3], [i8; 3]); 5] = [
            (Orientable(Slope::GAMMA1), [0, 1, 0], [0, 1, 0]),
            (Ovale, [0, 0, 1], [0, 0, 1]),
            (Dual(Slope::GAMMA1), [0, 1, -1], [0, 1, -1]),
            (g2, [0, -1, 1], [1, -1, 1]),
            (Dual(Slope::GAMMA2), [0, -1, 2], [1, -1, 2]),
        ];
        let domain = FundamentalDomain { eps: 0.0 };
        let (mut points, mut mismatches) = (0, Vec::new());
        for i in 0..=10 {
            for j in 1..=30 {
                for k in 1..=30 {
                    let p = SurfacePoint { theta1: i as f64 * 0.05, l1: j as f64 * 0.15, lx: k as f64 * 0.15 };
                    if !domain.contains(&p) {
                        continue;
                    }
                    points += 1;
                    for (c, at0, pos) in &table {
                        let want = if i == 0 { at0 } else { pos };
                        let got = differential(*c, &p).sign_pattern(0.0);
                        // 2 marks an entry whose sign is not prescribed
                        let ok = (0..3).all(|m| want[m] == 2 || want[m] == got[m]);
                        if !ok && mismatches.len() < 5 {
                            mismatches.push(format!("{c} at {p:?}: {got:?}"));
                        }
                    }
                }
            }
        }
        vec![
            Part {
                name: "finite_differences".into(),
                passed: bad.is_empty(),
                detail: format!("{count} partials at 100 points; {bad:?}"),
            },
            Part {
                name: "sign_table".into(),
                passed: points > 0 && mismatches.is_empty(),
                detail: format!("{points} grid points of D; mismatches {mismatches:?}"),
            },
        ]
    }
}
