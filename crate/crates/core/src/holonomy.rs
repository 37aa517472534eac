//! Holonomy groups realizing a point of T₃⁻, and the two global coordinate systems.
//!
//! The torus piece has holonomy A = diag(e^{l₁/2}, e^{−l₁/2}) and B = D(θ₁l₁)·H(d),
//! where D(s) translates by s along the axis of A and H(d) translates by d along the
//! common perpendicular. The boundary of the torus piece has length 2·l_X and closes
//! up by a glide reflection of length l_X.

use serde::{Deserialize, Serialize};

use crate::curves::{self, Slope};
use crate::error::{Error, Result};
use crate::isometry::{classify, glide_sqrt, Isometry, IsometryKind};
use crate::scalar::{acosh_clamped, Real};

/// Twist–length coordinates (θ₁, l₁, l_X); θ₁ is measured in turns of γ₁.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint<T> {
    pub theta1: T,
    pub l1: T,
    pub lx: T,
}

impl<T: Real> SurfacePoint<T> {
    pub fn new(theta1: T, l1: T, lx: T) -> Result<Self> {
        if !theta1.is_finite() {
            return Err(Error::InvalidPoint(format!("twist {theta1} is not finite")));
        }
        if !(l1 > T::zero() && l1.is_finite()) {
            return Err(Error::InvalidPoint(format!("l1 = {l1} must be positive")));
        }
        if !(lx > T::zero() && lx.is_finite()) {
            return Err(Error::InvalidPoint(format!("lX = {lx} must be positive")));
        }
        Ok(SurfacePoint { theta1, l1, lx })
    }

    /// From x = cosh²(l₁/2) and z = cosh²(l_X/2).
    pub fn from_xz(theta1: T, x: T, z: T) -> Result<Self> {
        if !(x > T::one() && z > T::one()) {
            return Err(Error::InvalidPoint(format!("x = {x} and z = {z} must exceed 1")));
        }
        Self::new(theta1, curves::length_from_cosh_half_sq(x), curves::length_from_cosh_half_sq(z))
    }

    pub fn x(&self) -> T {
        curves::cosh_half_sq(self.l1)
    }

    pub fn z(&self) -> T {
        curves::cosh_half_sq(self.lx)
    }

    /// Max-norm distance in coordinates.
    pub fn distance(&self, other: &Self) -> T {
        (self.theta1 - other.theta1)
            .abs()
            .max((self.l1 - other.l1).abs())
            .max((self.lx - other.lx).abs())
    }
}

/// Glide lengths of the three disjoint non-orientable geodesics γ'₁, γ'₂, γ'₃
/// (duals of 0/1, 1/0, −1/1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PantsCoords<T> {
    pub n1: T,
    pub n2: T,
    pub n3: T,
}

impl<T: Real> PantsCoords<T> {
    pub fn new(n1: T, n2: T, n3: T) -> Result<Self> {
        for n in [n1, n2, n3] {
            if !(n > T::zero() && n.is_finite()) {
                return Err(Error::InvalidPoint(format!("pants length {n} must be positive")));
            }
        }
        Ok(PantsCoords { n1, n2, n3 })
    }

    /// Lengths of the common perpendiculars (h₁₂, h₂₃, h₃₁) of the pants hexagon.
    pub fn seams(&self) -> [T; 3] {
        let h = |a: T, b: T, c: T| acosh_clamped((a.cosh() * b.cosh() + c.cosh()) / (a.sinh() * b.sinh()));
        [h(self.n1, self.n2, self.n3), h(self.n2, self.n3, self.n1), h(self.n3, self.n1, self.n2)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
    /// The glide reflection closing up the torus boundary.
    Glide,
    G1,
    G2,
    G3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub letter: Letter,
    pub inverse: bool,
}

/// Parses words like `"ABab"`: upper case is a generator, lower case its inverse.
/// Letters: A, B, X (glide) and U, V, W for the pants glides G₁, G₂, G₃.
pub fn parse_word(s: &str) -> Result<Vec<Symbol>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            let letter = match c.to_ascii_uppercase() {
                'A' => Letter::A,
                'B' => Letter::B,
                'X' => Letter::Glide,
                'U' => Letter::G1,
                'V' => Letter::G2,
                'W' => Letter::G3,
                _ => return Err(Error::BadLetter(c)),
            };
            Ok(Symbol { letter, inverse: c.is_ascii_lowercase() })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientability {
    Orientable,
    NonOrientable,
}

/// Holonomy of a marked surface: the torus-piece basis and the closing glide.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedGroup<T> {
    pub a: Isometry<T>,
    pub b: Isometry<T>,
    pub glide: Isometry<T>,
    /// G₁, G₂, G₃ when the group was built from pants coordinates.
    pub pants: Option<[Isometry<T>; 3]>,
}

impl<T: Real> MarkedGroup<T> {
    fn generator(&self, l: Letter) -> Result<Isometry<T>> {
        let pant = |i: usize, c: char| self.pants.map(|g| g[i]).ok_or(Error::BadLetter(c));
        match l {
            Letter::A => Ok(self.a),
            Letter::B => Ok(self.b),
            Letter::Glide => Ok(self.glide),
            Letter::G1 => pant(0, 'U'),
            Letter::G2 => pant(1, 'V'),
            Letter::G3 => pant(2, 'W'),
        }
    }

    pub fn evaluate(&self, word: &[Symbol]) -> Result<Isometry<T>> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut m = Isometry::identity();
        for s in word {
            let g = self.generator(s.letter)?;
            m = m.compose(&if s.inverse { g.inverse() } else { g });
        }
        Ok(m)
    }

    /// Holonomy of the orientable class of slope `s` (Christoffel word in A, B^{±1}).
    pub fn slope_element(&self, s: Slope) -> Isometry<T> {
        self.evaluate(&slope_word(s)).expect("slope words are nonempty")
    }

    /// Holonomy of the dual of slope `s`, up to conjugacy.
    pub fn dual_element(&self, s: Slope) -> Isometry<T> {
        self.evaluate(&dual_word(s)).expect("dual words are nonempty")
    }

    /// Classifies a word by the parity of its glide letters and reads the length
    /// off the trace. Long words have entries too large for a reliable determinant,
    /// so the matrix is not asked for its orientation.
    pub fn word_length(&self, word: &[Symbol]) -> Result<(Orientability, T)> {
        let m = self.evaluate(word)?;
        let glides = word.iter().filter(|s| s.letter != Letter::A && s.letter != Letter::B).count();
        let half_tr = m.trace().abs() * T::half();
        if glides % 2 == 1 {
            return Ok((Orientability::NonOrientable, T::two() * half_tr.asinh()));
        }
        if half_tr <= T::one() + T::det_eps() {
            return Err(Error::DegenerateWord);
        }
        Ok((Orientability::Orientable, T::two() * half_tr.acosh()))
    }
}

const fn sym(letter: Letter, inverse: bool) -> Symbol {
    Symbol { letter, inverse }
}

const A: Symbol = sym(Letter::A, false);
const B: Symbol = sym(Letter::B, false);
const B_INV: Symbol = sym(Letter::B, true);
const X: Symbol = sym(Letter::Glide, false);
const X_INV: Symbol = sym(Letter::Glide, true);

pub fn inverse_word(w: &[Symbol]) -> Vec<Symbol> {
    w.iter().rev().map(|s| Symbol { letter: s.letter, inverse: !s.inverse }).collect()
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[Symbol]) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::with_capacity(w.len());
    for &s in w {
        match out.last() {
            Some(t) if t.letter == s.letter && t.inverse != s.inverse => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

/// Free and cyclic reduction; the result is conjugate to the input.
pub fn cyclic_reduce(w: &[Symbol]) -> Vec<Symbol> {
    let w = free_reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j - i >= 2 && w[i].letter == w[j - 1].letter && w[i].inverse != w[j - 1].inverse {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

fn cat(parts: &[&[Symbol]]) -> Vec<Symbol> {
    parts.concat()
}

/// Christoffel word of an orientable slope in A and B^{±1}.
pub fn slope_word(s: Slope) -> Vec<Symbol> {
    descend_words(s).0
}

/// A cyclically reduced word for the dual of slope `s`, with X the closing glide
/// (X² = −[A, B]).
///
/// For a basis (U, V) with det(slope U, slope V) = +1 the dual of U is
/// U⁻¹·√(−[U, V]). The glide of each Farey edge is carried down the tree:
/// [L, LR] = L[L, R]L⁻¹ and [LR, R] = [L, R]. Working with words rather than
/// matrices lets the conjugations cancel before anything is multiplied out.
pub fn dual_word(s: Slope) -> Vec<Symbol> {
    cyclic_reduce(&descend_words(s).1)
}

fn descend_words(s: Slope) -> (Vec<Symbol>, Vec<Symbol>) {
    if s == Slope::GAMMA1 {
        // √(−[A, B⁻¹]) = B⁻¹X⁻¹B
        return (vec![A], vec![sym(Letter::A, true), B_INV, X_INV, B]);
    }
    if s == Slope::GAMMA2 {
        // √(−[B, A]) = X⁻¹
        return (vec![B], vec![B_INV, X_INV]);
    }
    let positive = s.p() > 0;
    let target_p = s.p().abs();
    let (mut lw, mut rw) = (vec![A], vec![if positive { B } else { B_INV }]);
    let mut ge = if positive { vec![X] } else { vec![B_INV, X_INV, B] };
    let (mut lp, mut lq, mut rp, mut rq) = (0i64, 1i64, 1i64, 0i64);
    loop {
        let (mp, mq) = (lp + rp, lq + rq);
        let mw = cat(&[&lw, &rw]);
        if mp == target_p && mq == s.q() {
            let dual = if positive {
                // det(L, R) = −1 here, so the dual of M pairs with L
                cat(&[&inverse_word(&rw), &inverse_word(&ge), &inverse_word(&lw)])
            } else {
                cat(&[&inverse_word(&mw), &ge])
            };
            return (mw, dual);
        }
        if target_p * mq < s.q() * mp {
            ge = free_reduce(&cat(&[&lw, &ge, &inverse_word(&lw)]));
            (rp, rq, rw) = (mp, mq, mw);
        } else {
            (lp, lq, lw) = (mp, mq, mw);
        }
    }
}

pub fn element_length<T: Real>(m: &Isometry<T>) -> Result<(Orientability, T)> {
    match classify(m) {
        IsometryKind::Hyperbolic(l) => Ok((Orientability::Orientable, l)),
        IsometryKind::GlideReflection(l) => Ok((Orientability::NonOrientable, l)),
        _ => Err(Error::DegenerateWord),
    }
}

pub fn word_length<T: Real>(g: &MarkedGroup<T>, word: &[Symbol]) -> Result<(Orientability, T)> {
    g.word_length(word)
}

/// Holonomy from twist–length coordinates.
pub fn build_from_fn<T: Real>(p: &SurfacePoint<T>) -> MarkedGroup<T> {
    let half = T::half();
    let a = Isometry::translation(p.l1);
    // tr[A, H(d)] = 2 − 4 sinh²(d/2) sinh²(l₁/2) must equal −2cosh(l_X)
    let sd = (p.lx * half).cosh() / (p.l1 * half).sinh();
    let cd = (T::one() + sd * sd).sqrt();
    let h = Isometry { a: cd, b: sd, c: sd, d: cd };
    let b = Isometry::translation(p.theta1 * p.l1).compose(&h);
    let glide = glide_sqrt(&a.commutator(&b).neg()).expect("commutator of a torus basis is hyperbolic");
    MarkedGroup { a, b, glide, pants: None }
}

/// Holonomy from pants coordinates: reflections in the three seams of a right-angled
/// hexagon with alternate sides n₁, n₂, n₃.
pub fn build_pants<T: Real>(c: &PantsCoords<T>) -> MarkedGroup<T> {
    let [h12, _, _] = c.seams();
    // seam M₁₂ on the imaginary axis, boundary axes on the unit circle and the circle of radius e^{h₁₂}
    let r12 = Isometry::reflection_imaginary_axis();
    let along = |n: T| Isometry::translation_unit_circle(n);
    let r31 = r12.conjugate_by(&along(c.n1));
    let lift = Isometry::translation(h12);
    let r23 = r12.conjugate_by(&lift.compose(&along(c.n2)));
    let c1 = r31.compose(&r12);
    let c2 = r12.compose(&r23);
    let c3 = r23.compose(&r31);
    let g = |m: Isometry<T>| glide_sqrt(&m).expect("pants boundary is hyperbolic");
    let (g1, g2, g3) = (g(c1), g(c2), g(c3));
    let a = g2.compose(&g3);
    let b = g3.compose(&g1).inverse();
    // same normalization as the twist–length builder, so that words in X mean the same thing
    let glide = glide_sqrt(&a.commutator(&b).neg()).expect("commutator of a torus basis is hyperbolic");
    MarkedGroup { a, b, glide, pants: Some([g1, g2, g3]) }
}

pub fn fn_to_pants<T: Real>(p: &SurfacePoint<T>) -> PantsCoords<T> {
    let one = T::one();
    PantsCoords {
        n1: curves::dual_length(p.l1, p.lx),
        n2: curves::dual_length(curves::twist_family_length(p, T::zero()), p.lx),
        n3: curves::dual_length(curves::twist_family_length(p, -one), p.lx),
    }
}

pub fn pants_to_fn<T: Real>(c: &PantsCoords<T>) -> SurfacePoint<T> {
    let half = T::half();
    let lx = c.seams().into_iter().fold(T::zero(), |s, h| s + h);
    let sx = (lx * half).sinh();
    // half-traces cosh(l/2) = sinh(n/2)·sinh(l_X/2)
    let c1 = (c.n1 * half).sinh() * sx;
    let c2 = (c.n2 * half).sinh() * sx;
    let c3 = (c.n3 * half).sinh() * sx;
    let l1 = T::two() * acosh_clamped(c1);
    // formula A: cosh²(l_k/2) = cosh²((θ₁ + k)l₁/2)·K with K = (z + x − 1)/(x − 1), so
    // c₄² − c₃² = K sinh(θ₁l₁) sinh(l₁); Fricke gives c₃ + c₄ = 2c₁c₂
    let chx = (lx * half).cosh();
    let sh1 = (l1 * half).sinh();
    let k = (chx * chx + sh1 * sh1) / (sh1 * sh1);
    let sum = T::two() * c1 * c2;
    let diff = T::two() * (c1 * c2 - c3);
    let theta1 = (diff * sum / (k * l1.sinh())).asinh() / l1;
    SurfacePoint { theta1, l1, lx }
}
