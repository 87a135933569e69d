//! Spherical triangles on the unit 2-sphere.
//!
//! Sides are geodesic arc lengths and angles are interior angles, both in
//! radians and both strictly inside `(0, π)`. The angle stored in
//! [`TriangleAngles::a`] sits at the vertex opposite side
//! [`TriangleSides::a`], and likewise for `b` and `c`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{GeometryError, Result};
use crate::tolerances::{CLAMP_TOLERANCE, DEGENERACY_FLOOR, SINE_FLOOR};

/// Three arc lengths of a spherical triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Three interior angles; `a` is the angle opposite side `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSides {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

impl TriangleAngles {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Checks the range conditions `0 < angle < π` and `π < sum < 3π`.
    pub fn in_range(&self) -> bool {
        let sum = self.a + self.b + self.c;
        self.to_array().iter().all(|&x| open_unit_arc(x)) && sum > PI && sum < 3.0 * PI
    }
}

/// Length Gram matrix of a triangle: entry `(i, j)` is the cosine of the arc
/// between vertices `i` and `j`. Vertex 0 is opposite side `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGram(pub [[f64; 3]; 3]);

impl TriangleGram {
    pub fn from_sides(sides: TriangleSides) -> Self {
        let (ca, cb, cc) = (sides.a.cos(), sides.b.cos(), sides.c.cos());
        TriangleGram([[1.0, cc, cb], [cc, 1.0, ca], [cb, ca, 1.0]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Outcome of [`validate_triangle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriangleValidity {
    Valid,
    /// A side is not finite or lies outside `(0, π)`.
    OutOfRange,
    /// The Gram determinant is at or below the degeneracy floor.
    Degenerate(f64),
}

pub(crate) fn open_unit_arc(x: f64) -> bool {
    x.is_finite() && x > 0.0 && x < PI
}

/// `arccos` on the principal branch, tolerating rounding just outside `[-1, 1]`.
pub(crate) fn checked_acos(q: f64, what: &str) -> Result<f64> {
    if !q.is_finite() {
        return Err(GeometryError::Domain(format!(
            "{what}: non-finite cosine {q}"
        )));
    }
    if q.abs() > 1.0 + CLAMP_TOLERANCE {
        return Err(GeometryError::Domain(format!(
            "{what}: cosine {q} outside [-1, 1]"
        )));
    }
    Ok(q.clamp(-1.0, 1.0).acos())
}

fn sine_of(x: f64, what: &str) -> Result<f64> {
    let s = x.sin();
    if s.abs() < SINE_FLOOR {
        return Err(GeometryError::Domain(format!(
            "{what}: sine of {x} below degeneracy floor"
        )));
    }
    Ok(s)
}

/// Interior angle opposite `opposite` from the three sides (cosine law).
pub fn cosine_law_angle(opposite: f64, adj1: f64, adj2: f64) -> Result<f64> {
    let s1 = sine_of(adj1, "cosine law")?;
    let s2 = sine_of(adj2, "cosine law")?;
    let q = (opposite.cos() - adj1.cos() * adj2.cos()) / (s1 * s2);
    let fallback = checked_acos(q, "cosine law")?;
    // tan²(A/2) = sin(s−b) sin(s−c) / (sin s · sin(s−a))
    let num = sin_dd(half_sum(opposite, -adj1, adj2)) * sin_dd(half_sum(opposite, adj1, -adj2));
    let den = sin_dd(half_sum(opposite, adj1, adj2)) * sin_dd(half_sum(-opposite, adj1, adj2));
    Ok(half_angle(num, den).unwrap_or(fallback))
}

/// Side opposite the angle `opposite` from the three angles (dual cosine law).
pub fn dual_cosine_law_side(opposite: f64, adj1: f64, adj2: f64) -> Result<f64> {
    let s1 = sine_of(adj1, "dual cosine law")?;
    let s2 = sine_of(adj2, "dual cosine law")?;
    let q = (opposite.cos() + adj1.cos() * adj2.cos()) / (s1 * s2);
    let fallback = checked_acos(q, "dual cosine law")?;
    // tan²(a/2) = −cos S · cos(S−A) / (cos(S−B) · cos(S−C))
    let num = -cos_dd(half_sum(opposite, adj1, adj2)) * cos_dd(half_sum(-opposite, adj1, adj2));
    let den = cos_dd(half_sum(opposite, -adj1, adj2)) * cos_dd(half_sum(opposite, adj1, -adj2));
    Ok(half_angle(num, den).unwrap_or(fallback))
}

// The half-angle arguments are formed as unevaluated sums `hi + lo` so that
// near-cancelling combinations such as `(b + c − a)/2`, and their distance to
// π/2 or π, keep full relative precision.

const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn renormalize(hi: f64, lo: f64) -> (f64, f64) {
    let s = hi + lo;
    (s, lo - (s - hi))
}

/// `(x + y + z) / 2` as a double-double.
fn half_sum(x: f64, y: f64, z: f64) -> (f64, f64) {
    let (s1, e1) = two_sum(x, y);
    let (s2, e2) = two_sum(s1, z);
    let (hi, lo) = renormalize(s2, e1 + e2);
    (0.5 * hi, 0.5 * lo)
}

/// `(k_hi + k_lo) − x` for a double-double constant `k`.
fn sub_from(k_hi: f64, k_lo: f64, (hi, lo): (f64, f64)) -> (f64, f64) {
    let (s, e) = two_sum(k_hi, -hi);
    renormalize(s, e + (k_lo - lo))
}

/// Sine of a double-double argument in roughly `[-3π/2, 3π/2]`, reflected
/// into `[-π/2, π/2]` so that values near zero keep relative precision.
fn sin_dd(x: (f64, f64)) -> f64 {
    let (hi, lo) = if x.0 > FRAC_PI_2 {
        sub_from(PI, PI_LO, x)
    } else if x.0 < -FRAC_PI_2 {
        sub_from(-PI, -PI_LO, x)
    } else {
        x
    };
    hi.sin() + hi.cos() * lo
}

fn cos_dd(x: (f64, f64)) -> f64 {
    sin_dd(sub_from(FRAC_PI_2, 0.5 * PI_LO, x))
}

/// `2·atan(√(num/den))`, the half-angle form of the two cosine laws. It
/// keeps full relative precision for angles near 0 and π, where `arccos`
/// does not. `None` when the factors have the wrong signs, which only
/// happens for inputs on or past the degenerate boundary.
fn half_angle(num: f64, den: f64) -> Option<f64> {
    (num >= 0.0 && den >= 0.0 && num + den > 0.0).then(|| 2.0 * num.sqrt().atan2(den.sqrt()))
}

pub fn triangle_angles_from_sides(sides: TriangleSides) -> Result<TriangleAngles> {
    let TriangleSides { a, b, c } = sides;
    Ok(TriangleAngles {
        a: cosine_law_angle(a, b, c)?,
        b: cosine_law_angle(b, c, a)?,
        c: cosine_law_angle(c, a, b)?,
    })
}

/// Inverse of [`triangle_angles_from_sides`]. Fails with
/// [`GeometryError::Domain`] when no triangle has these angles.
pub fn triangle_sides_from_angles(angles: TriangleAngles) -> Result<TriangleSides> {
    let TriangleAngles { a, b, c } = angles;
    Ok(TriangleSides {
        a: dual_cosine_law_side(a, b, c)?,
        b: dual_cosine_law_side(b, c, a)?,
        c: dual_cosine_law_side(c, a, b)?,
    })
}

/// Determinant of the 3×3 length Gram matrix. Equals
/// `(sin A · sin b · sin c)²` for a genuine triangle and is `≤ 0` for
/// triples that violate the triangle inequalities.
pub fn triangle_gram_det(sides: TriangleSides) -> f64 {
    TriangleGram::from_sides(sides).det()
}

pub fn validate_triangle(sides: TriangleSides) -> TriangleValidity {
    if !sides.to_array().iter().all(|&x| open_unit_arc(x)) {
        return TriangleValidity::OutOfRange;
    }
    let det = triangle_gram_det(sides);
    if det < DEGENERACY_FLOOR {
        TriangleValidity::Degenerate(det)
    } else {
        TriangleValidity::Valid
    }
}

/// `∂A/∂a` with `b`, `c` fixed, as `sin a / √det G`.
pub fn triangle_wigner(sides: TriangleSides) -> Result<f64> {
    match validate_triangle(sides) {
        TriangleValidity::Valid => Ok(sides.a.sin() / triangle_gram_det(sides).sqrt()),
        TriangleValidity::OutOfRange => Err(GeometryError::Domain(format!(
            "triangle sides {sides:?} outside (0, π)"
        ))),
        TriangleValidity::Degenerate(det) => Err(GeometryError::Degenerate(format!(
            "triangle Gram determinant {det:e}"
        ))),
    }
}

/// `∂a/∂A` with `B`, `C` fixed, as `sin A / (sin a · sin B · sin C)`.
pub fn triangle_inverse_wigner(angles: TriangleAngles) -> Result<f64> {
    if !angles.to_array().iter().all(|&x| open_unit_arc(x)) {
        return Err(GeometryError::Domain(format!(
            "triangle angles {angles:?} outside (0, π)"
        )));
    }
    let sides = triangle_sides_from_angles(angles)?;
    let sin_a = sides.a.sin();
    if sin_a.abs() < SINE_FLOOR {
        return Err(GeometryError::Degenerate(format!(
            "side {} has vanishing sine",
            sides.a
        )));
    }
    Ok(angles.a.sin() / (sin_a * angles.b.sin() * angles.c.sin()))
}

/// The three sine-law ratios `sin(side)/sin(angle)`; equal for a triangle.
pub fn sine_law_ratios(sides: TriangleSides, angles: TriangleAngles) -> [f64; 3] {
    [
        sides.a.sin() / angles.a.sin(),
        sides.b.sin() / angles.b.sin(),
        sides.c.sin() / angles.c.sin(),
    ]
}
