//! The modular group PGL(2, Z) acting on slopes and on twist–length coordinates.
//!
//! Matrices act on column vectors (p, q). The action on points is on the left,
//! with ℓ_c(g·p) = ℓ_{g⁻¹c}(p): remarking by g renames the curve g⁻¹c as c.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curves::{self, Slope};
use crate::error::{Error, Result};
use crate::holonomy::SurfacePoint;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    N,
    T,
    S,
}

impl Generator {
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Generator::N => [[1, 0], [0, -1]],
            Generator::T => [[0, -1], [1, 0]],
            Generator::S => [[0, -1], [1, 1]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Generator::N => 'n',
            Generator::T => 't',
            Generator::S => 's',
        }
    }
}

/// An integer matrix of determinant ±1, up to sign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MappingClass {
    m: [[i64; 2]; 2],
    /// A word in n, t, s evaluating to this class, when known.
    pub word: Option<Vec<Generator>>,
}

impl PartialEq for MappingClass {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Eq for MappingClass {}

impl std::hash::Hash for MappingClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normalized().hash(state)
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.normalized();
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

fn mul(x: &[[i64; 2]; 2], y: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

impl MappingClass {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(Error::BadDeterminant(det as f64));
        }
        Ok(MappingClass { m: [[a, b], [c, d]], word: None })
    }

    pub fn identity() -> Self {
        MappingClass { m: [[1, 0], [0, 1]], word: Some(Vec::new()) }
    }

    pub fn generator(g: Generator) -> Self {
        MappingClass { m: g.matrix(), word: Some(vec![g]) }
    }

    pub fn from_word(word: &[Generator]) -> Self {
        let mut out = Self::identity();
        for &g in word {
            out = out.compose(&Self::generator(g));
        }
        out
    }

    /// Parses a word such as `"stn"`.
    pub fn parse(word: &str) -> Result<Self> {
        let gens = word
            .chars()
            .map(|c| match c {
                'n' => Ok(Generator::N),
                't' => Ok(Generator::T),
                's' => Ok(Generator::S),
                _ => Err(Error::BadLetter(c)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_word(&gens))
    }

    /// The Dehn twist along γ₁: (p, q) ↦ (p, p + q).
    pub fn dehn_twist() -> Self {
        MappingClass { m: [[1, 0], [1, 1]], word: None }
    }

    pub fn dehn_twist_pow(k: i64) -> Self {
        MappingClass { m: [[1, 0], [k, 1]], word: None }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    /// Representative with the first nonzero entry positive.
    pub fn normalized(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.m;
        let first = [a, b, c, d].into_iter().find(|&v| v != 0).unwrap_or(1);
        if first < 0 {
            [[-a, -b], [-c, -d]]
        } else {
            self.m
        }
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn is_identity(&self) -> bool {
        self.normalized() == [[1, 0], [0, 1]]
    }

    pub fn compose(&self, other: &Self) -> Self {
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        MappingClass { m: mul(&self.m, &other.m), word }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        let det = self.det();
        MappingClass { m: [[d * det, -b * det], [-c * det, a * det]], word: None }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity();
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn word_string(&self) -> Option<String> {
        self.word.as_ref().map(|w| w.iter().map(|g| g.symbol()).collect())
    }
}

/// The generators (n, t, s).
pub fn generator_matrices() -> (MappingClass, MappingClass, MappingClass) {
    (
        MappingClass::generator(Generator::N),
        MappingClass::generator(Generator::T),
        MappingClass::generator(Generator::S),
    )
}

/// The six defining relations, each evaluated modulo ±I.
pub fn presentation_relations() -> Vec<(&'static str, bool)> {
    let (n, t, s) = generator_matrices();
    let ninv = n.inverse();
    vec![
        ("s^3 t^2", s.pow(3).compose(&t.pow(2)).is_identity()),
        ("n t n^-1 t", n.compose(&t).compose(&ninv).compose(&t).is_identity()),
        ("n s t n^-1 s t", n.compose(&s).compose(&t).compose(&ninv).compose(&s).compose(&t).is_identity()),
        ("n^2", n.pow(2).is_identity()),
        ("t^4", t.pow(4).is_identity()),
        ("s^6", s.pow(6).is_identity()),
    ]
}

/// Shortest positive word in n, t, s representing `target` (generators have finite order).
pub fn find_word(target: &MappingClass, max_len: usize) -> Option<Vec<Generator>> {
    let gens = [Generator::N, Generator::T, Generator::S];
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let start = MappingClass::identity();
    seen.insert(start.normalized());
    queue.push_back((start, Vec::new()));
    while let Some((m, w)) = queue.pop_front() {
        if &m == target {
            return Some(w);
        }
        if w.len() >= max_len {
            continue;
        }
        for g in gens {
            let next = m.compose(&MappingClass::generator(g));
            if seen.insert(next.normalized()) {
                let mut w2 = w.clone();
                w2.push(g);
                queue.push_back((next, w2));
            }
        }
    }
    None
}

pub fn act_on_slope(g: &MappingClass, s: Slope) -> Slope {
    let [[a, b], [c, d]] = g.m;
    Slope::from_raw(a * s.p() + b * s.q(), c * s.p() + d * s.q())
}

/// τᵏ·p for the Dehn twist τ: the twist coordinate drops by k.
pub fn twist_point<T: Real>(p: &SurfacePoint<T>, k: i64) -> SurfacePoint<T> {
    SurfacePoint { theta1: p.theta1 - T::from_i64(k).unwrap_or_else(T::zero), ..*p }
}

/// n·p: the twist changes sign.
pub fn reflect_point<T: Real>(p: &SurfacePoint<T>) -> SurfacePoint<T> {
    SurfacePoint { theta1: -p.theta1, ..*p }
}

/// t·p: γ₂ becomes the marked curve.
pub fn swap_point<T: Real>(p: &SurfacePoint<T>) -> SurfacePoint<T> {
    let half = T::half();
    let l2 = curves::len_gamma2(p);
    let chx = (p.lx * half).cosh();
    let sh1 = (p.l1 * half).sinh();
    let sh2 = (l2 * half).sinh();
    // sinh²(θ'l₂/2) = sinh²(θ₁l₁/2)·(z + x − 1)/(z + x₂ − 1), with the sign of θ₁ flipped
    let ratio = ((chx * chx + sh1 * sh1) / (chx * chx + sh2 * sh2)).sqrt();
    let s = -(p.theta1 * p.l1 * half).sinh() * ratio;
    SurfacePoint { theta1: T::two() * s.asinh() / l2, l1: l2, lx: p.lx }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Twist(i64),
    Swap,
    Reflect,
}

fn apply_move<T: Real>(m: Move, p: &SurfacePoint<T>) -> SurfacePoint<T> {
    match m {
        Move::Twist(k) => twist_point(p, k),
        Move::Swap => swap_point(p),
        Move::Reflect => reflect_point(p),
    }
}

/// Writes g as a product of twists, swaps and reflections, leftmost first.
fn factor(g: &MappingClass) -> Vec<Move> {
    // row-reduce g to ±I; each left multiplication e is recorded by its inverse
    let [[mut a, mut b], [mut c, mut d]] = g.m;
    let mut inv_moves = Vec::new();
    while c != 0 {
        if a != 0 {
            let k = c / a;
            if k != 0 {
                // τ^{−k}: row2 −= k·row1
                c -= k * a;
                d -= k * b;
                inv_moves.push(Move::Twist(k));
            }
        }
        if c != 0 {
            // t⁻¹: (row1, row2) ↦ (row2, −row1)
            (a, b, c, d) = (c, d, -a, -b);
            inv_moves.push(Move::Swap);
        }
    }
    if a < 0 {
        (a, b, d) = (-a, -b, -d);
    }
    debug_assert_eq!(a, 1);
    if d < 0 {
        // n·g negates row 2 only
        inv_moves.push(Move::Reflect);
    }
    // remaining [[1, b], [0, 1]] = t·τ^{−b}·t⁻¹, and t⁻¹ ≡ t
    let mut moves: Vec<Move> = inv_moves;
    if b != 0 {
        moves.extend([Move::Swap, Move::Twist(-b), Move::Swap]);
    }
    moves
}

/// Coordinates of the same surface remarked by g.
pub fn act_on_point<T: Real>(g: &MappingClass, p: &SurfacePoint<T>) -> SurfacePoint<T> {
    let moves = factor(g);
    let mut q = *p;
    for m in moves.iter().rev() {
        q = apply_move(*m, &q);
    }
    q
}

#[derive(Clone, Debug)]
pub struct Reduction<T> {
    pub point: SurfacePoint<T>,
    /// The class g with point = g·p.
    pub mapping: MappingClass,
}

/// Reduces into D = {0 ≤ θ₁ ≤ 1/2, l₁ ≤ l₂} with the default wall tolerance.
pub fn reduce<T: Real>(p: &SurfacePoint<T>) -> Reduction<T> {
    reduce_with(p, T::wall_eps())
}

pub fn reduce_with<T: Real>(p: &SurfacePoint<T>, eps: T) -> Reduction<T> {
    let mut q = *p;
    let mut g = MappingClass::identity();
    let (_, t, _) = generator_matrices();
    for _ in 0..10_000 {
        let k = q.theta1.round();
        if k != T::zero() {
            let k = k.to_i64().unwrap_or(0);
            q = twist_point(&q, k);
            g = MappingClass::dehn_twist_pow(k).compose(&g);
        }
        let l2 = curves::len_gamma2(&q);
        if l2 < q.l1 - eps * q.l1.max(T::one()) {
            q = swap_point(&q);
            g = t.compose(&g);
        } else {
            break;
        }
    }
    if q.theta1 < T::zero() {
        q = reflect_point(&q);
        g = MappingClass::generator(Generator::N).compose(&g);
    }
    Reduction { point: q, mapping: g }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// The fundamental domain D with a wall tolerance.
#[derive(Clone, Copy, Debug)]
pub struct FundamentalDomain<T> {
    pub eps: T,
}

impl<T: Real> Default for FundamentalDomain<T> {
    fn default() -> Self {
        FundamentalDomain { eps: T::wall_eps() }
    }
}

impl<T: Real> FundamentalDomain<T> {
    pub fn membership(&self, p: &SurfacePoint<T>) -> Membership {
        let eps = self.eps;
        let half = T::half();
        let gap = curves::len_gamma2(p) - p.l1;
        let scale = p.l1.max(T::one());
        if p.theta1 < -eps || p.theta1 > half + eps || gap < -eps * scale {
            Membership::Outside
        } else if p.theta1 <= eps || p.theta1 >= half - eps || gap <= eps * scale {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    pub fn contains(&self, p: &SurfacePoint<T>) -> bool {
        self.membership(p) != Membership::Outside
    }
}
