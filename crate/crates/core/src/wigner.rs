//! Wigner derivatives of a spherical tetrahedron and their numerical oracles.
//!
//! For an edge `e` with opposite edge `e'`:
//!
//! * the *Wigner derivative* is `∂θ_e/∂l_e'` with the other five lengths
//!   fixed;
//! * the *inverse Wigner derivative* is `∂l_e'/∂θ_e` with the other five
//!   dihedral angles fixed.
//!
//! Both equal `sin l_e · sin l_e' / √det G`. A third quantity,
//! `∂l_e'/∂θ_e` with the other five *lengths* fixed, is the reciprocal
//! `√det G / (sin l_e · sin l_e')`.

use crate::error::{GeometryError, Result};
use crate::tetra::{
    complement, dihedral_in_link, dihedrals_from_lengths, gram_det, length_in_face,
    lengths_from_dihedrals, link_side_from_dihedrals, link_triangle, validate_lengths, EdgeId,
    TetAngles, TetLengths, TetValidity,
};
use crate::tolerances::{DEGENERACY_FLOOR, SINE_FLOOR};

fn checked_sqrt_det(lengths: &TetLengths) -> Result<f64> {
    match validate_lengths(lengths) {
        TetValidity::Valid => {}
        TetValidity::OutOfRange => {
            return Err(GeometryError::Domain(format!(
                "edge lengths {:?} outside (0, π)",
                lengths.0
            )))
        }
        TetValidity::Degenerate(why) => return Err(GeometryError::Degenerate(why)),
        TetValidity::NotRealizable(why) => return Err(GeometryError::NotRealizable(why)),
    }
    let det = gram_det(lengths);
    if det <= DEGENERACY_FLOOR {
        return Err(GeometryError::Degenerate(format!(
            "Gram determinant {det:e}"
        )));
    }
    Ok(det.sqrt())
}

/// Product of sines, rejecting any factor that is numerically zero.
fn sine_product(factors: &[f64]) -> Result<f64> {
    factors.iter().try_fold(1.0, |acc, &x| {
        let s = x.sin();
        if s.abs() < SINE_FLOOR {
            Err(GeometryError::Degenerate(format!("sine of {x} vanishes")))
        } else {
            Ok(acc * s)
        }
    })
}

/// `∂θ_edge/∂l_opposite = sin l_edge · sin l_opposite / √det G`.
pub fn wigner_derivative(lengths: &TetLengths, edge: EdgeId) -> Result<f64> {
    let root = checked_sqrt_det(lengths)?;
    Ok(lengths[edge].sin() * lengths[edge.opposite()].sin() / root)
}

/// `√det G / (sin l_edge · sin l_opposite)`: the derivative of the opposite
/// length with respect to `θ_edge` when the other five lengths are held.
pub fn remark_reciprocal(lengths: &TetLengths, edge: EdgeId) -> Result<f64> {
    let root = checked_sqrt_det(lengths)?;
    Ok(root / sine_product(&[lengths[edge], lengths[edge.opposite()]])?)
}

/// The Wigner derivative by the chain rule through the link of `endpoint`:
/// `sin f / (sin E · sin α · sin β · sin a · sin b)` in the letter
/// convention with `endpoint = 0` and `edge = 01`.
pub fn wigner_via_link_at(lengths: &TetLengths, edge: EdgeId, endpoint: usize) -> Result<f64> {
    let (i, j) = edge.vertices();
    assert!(
        endpoint == i || endpoint == j,
        "vertex {endpoint} is not on edge {edge}"
    );
    let v = endpoint;
    let k = if v == i { j } else { i };
    let (p, q) = complement(v, k);
    let link = link_triangle(lengths, v)?;
    let theta = dihedral_in_link(lengths, v, k)?;
    let denom = sine_product(&[
        theta,
        link.side(k, p),
        link.side(k, q),
        lengths.get(v, p),
        lengths.get(v, q),
    ])?;
    Ok(lengths.get(p, q).sin() / denom)
}

/// [`wigner_via_link_at`] at the lower endpoint of `edge`.
pub fn wigner_via_links(lengths: &TetLengths, edge: EdgeId) -> Result<f64> {
    wigner_via_link_at(lengths, edge, edge.vertices().0)
}

/// `∂l_opposite/∂θ_edge` with the other dihedral angles fixed, evaluated on
/// the lengths recovered from `angles`.
pub fn inverse_wigner_derivative(angles: &TetAngles, edge: EdgeId) -> Result<f64> {
    let lengths = lengths_from_dihedrals(angles)?;
    wigner_derivative(&lengths, edge)
}

/// The inverse Wigner derivative by the chain rule through the dual cosine
/// laws: `sin E / (sin f · sin κ · sin σ · sin A · sin B)` for `edge = 01`,
/// where `κ`, `σ` are the angles of face `023` at vertices 2 and 3.
pub fn inverse_via_links(angles: &TetAngles, edge: EdgeId) -> Result<f64> {
    let (v, k) = edge.vertices();
    let (p, q) = complement(v, k);
    let opposite = length_in_face(angles, edge.opposite(), v)?;
    let kappa = link_side_from_dihedrals(angles, p, v, q)?;
    let sigma = link_side_from_dihedrals(angles, q, v, p)?;
    let denom = sine_product(&[opposite, kappa, sigma, angles.get(v, p), angles.get(v, q)])?;
    Ok(angles[edge].sin() / denom)
}

/// Central difference `(map(x + h eᵢ) − map(x − h eᵢ))[out] / 2h`.
///
/// A failed evaluation at either perturbed point is reported as
/// [`GeometryError::StepTooLarge`].
pub fn fd_partial<F>(
    map: F,
    at: &[f64; 6],
    out_index: usize,
    in_index: usize,
    step: f64,
) -> Result<f64>
where
    F: Fn(&[f64; 6]) -> Result<[f64; 6]>,
{
    let column = fd_column(&map, at, in_index, step)?;
    Ok(column[out_index])
}

fn fd_column<F>(map: &F, at: &[f64; 6], in_index: usize, step: f64) -> Result<[f64; 6]>
where
    F: Fn(&[f64; 6]) -> Result<[f64; 6]>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(GeometryError::Domain(format!(
            "finite-difference step {step} must be positive"
        )));
    }
    let eval = |sign: f64| {
        let mut x = *at;
        x[in_index] += sign * step;
        map(&x).map_err(|err| GeometryError::StepTooLarge {
            step,
            reason: err.to_string(),
        })
    };
    let plus = eval(1.0)?;
    let minus = eval(-1.0)?;
    let mut col = [0.0; 6];
    for (c, (p, m)) in col.iter_mut().zip(plus.iter().zip(minus.iter())) {
        *c = (p - m) / (2.0 * step);
    }
    Ok(col)
}

/// `θ(l)` as a plain six-vector map.
pub fn dihedral_map(x: &[f64; 6]) -> Result<[f64; 6]> {
    dihedrals_from_lengths(&TetLengths::new(*x)).map(|a| a.0)
}

/// `l(θ)` as a plain six-vector map.
pub fn length_map(x: &[f64; 6]) -> Result<[f64; 6]> {
    lengths_from_dihedrals(&TetAngles::new(*x)).map(|l| l.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianKind {
    /// Rows are dihedral angles, columns are lengths.
    ThetaOfL,
    /// Rows are lengths, columns are dihedral angles.
    LOfTheta,
}

/// A 6×6 finite-difference Jacobian, rows and columns in canonical
/// [`EdgeId`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian6 {
    pub entries: [[f64; 6]; 6],
    pub kind: JacobianKind,
    pub step: f64,
}

impl Jacobian6 {
    pub fn get(&self, row: EdgeId, col: EdgeId) -> f64 {
        self.entries[row.index()][col.index()]
    }

    pub fn product(&self, rhs: &Jacobian6) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..6).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        out
    }

    /// Max-norm distance of `self · rhs` from the identity.
    pub fn product_identity_residual(&self, rhs: &Jacobian6) -> f64 {
        let p = self.product(rhs);
        let mut worst: f64 = 0.0;
        for (i, row) in p.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((x - id).abs());
            }
        }
        worst
    }
}

#[allow(clippy::needless_range_loop)]
fn jacobian<F>(map: F, at: &[f64; 6], step: f64, kind: JacobianKind) -> Result<Jacobian6>
where
    F: Fn(&[f64; 6]) -> Result<[f64; 6]>,
{
    let mut entries = [[0.0; 6]; 6];
    for col in 0..6 {
        let c = fd_column(&map, at, col, step).map_err(|err| match err {
            GeometryError::StepTooLarge { step, reason } => GeometryError::NotRealizable(format!(
                "perturbation by {step} leaves the valid domain: {reason}"
            )),
            other => other,
        })?;
        for (row, &x) in c.iter().enumerate() {
            entries[row][col] = x;
        }
    }
    Ok(Jacobian6 {
        entries,
        kind,
        step,
    })
}

pub fn jacobian_theta_of_l(lengths: &TetLengths, step: f64) -> Result<Jacobian6> {
    jacobian(dihedral_map, &lengths.0, step, JacobianKind::ThetaOfL)
}

pub fn jacobian_l_of_theta(angles: &TetAngles, step: f64) -> Result<Jacobian6> {
    jacobian(length_map, &angles.0, step, JacobianKind::LOfTheta)
}

/// Solves `θ_edge(lengths with l_opposite = x) = target` for `x` by the
/// secant method, starting from the current opposite length.
fn solve_opposite_length(
    lengths: &TetLengths,
    edge: EdgeId,
    target: f64,
    step: f64,
) -> Result<f64> {
    let opp = edge.opposite();
    let residual = |x: f64| -> Result<f64> {
        Ok(dihedrals_from_lengths(&lengths.with(opp, x))?[edge] - target)
    };
    let mut x0 = lengths[opp];
    let mut g0 = residual(x0)?;
    let mut x1 = x0 - g0.signum() * step;
    let mut g1 = residual(x1)?;
    for _ in 0..60 {
        if g1.abs() <= 2.0 * f64::EPSILON * target.abs() || g1 == g0 {
            return Ok(x1);
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        if (x2 - x1).abs() <= 2.0 * f64::EPSILON * x1.abs() {
            return Ok(x2);
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = residual(x1)?;
    }
    Err(GeometryError::StepTooLarge {
        step,
        reason: format!("secant inversion of θ{edge} did not converge"),
    })
}

/// `∂l_opposite/∂θ_edge` with the other five *lengths* fixed, by inverting
/// `θ_edge(l_opposite)` numerically at `θ ± step` and differencing.
pub fn fd_remark_secant(lengths: &TetLengths, edge: EdgeId, step: f64) -> Result<f64> {
    let theta = dihedrals_from_lengths(lengths)?[edge];
    let wrap = |err: GeometryError| match err {
        e @ GeometryError::StepTooLarge { .. } => e,
        other => GeometryError::StepTooLarge {
            step,
            reason: other.to_string(),
        },
    };
    let plus = solve_opposite_length(lengths, edge, theta + step, step).map_err(wrap)?;
    let minus = solve_opposite_length(lengths, edge, theta - step, step).map_err(wrap)?;
    Ok((plus - minus) / (2.0 * step))
}

/// Analytic, link-route and finite-difference derivatives for one edge and
/// its opposite.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub edge: EdgeId,
    pub opposite: EdgeId,
    pub step: f64,
    pub gram_det: f64,
    /// `∂θ_edge/∂l_opposite`, closed form.
    pub analytic_wigner: f64,
    /// `∂l_opposite/∂θ_edge` with dihedrals held, closed form.
    pub analytic_inverse: f64,
    pub wigner_via_links: f64,
    pub inverse_via_links: f64,
    /// Central difference of the lengths→dihedrals map.
    pub fd_wigner: f64,
    /// Central difference of the dihedrals→lengths map.
    pub fd_inverse: f64,
    /// `√det G / (sin l sin l')`.
    pub remark_reciprocal: f64,
    /// `1 / fd_wigner`.
    pub remark_fd_reciprocal: f64,
    /// Secant-inversion estimate of the lengths-held derivative.
    pub remark_fd_secant: f64,
    pub wigner_residual: f64,
    pub inverse_residual: f64,
}

pub fn reciprocity_report(
    lengths: &TetLengths,
    edge: EdgeId,
    step: f64,
) -> Result<DerivativeReport> {
    let opposite = edge.opposite();
    let analytic = wigner_derivative(lengths, edge)?;
    let angles = dihedrals_from_lengths(lengths)?;
    let fd_wigner = fd_partial(
        dihedral_map,
        &lengths.0,
        edge.index(),
        opposite.index(),
        step,
    )?;
    let fd_inverse = fd_partial(length_map, &angles.0, opposite.index(), edge.index(), step)?;
    Ok(DerivativeReport {
        edge,
        opposite,
        step,
        gram_det: gram_det(lengths),
        analytic_wigner: analytic,
        analytic_inverse: analytic,
        wigner_via_links: wigner_via_links(lengths, edge)?,
        inverse_via_links: inverse_via_links(&angles, edge)?,
        fd_wigner,
        fd_inverse,
        remark_reciprocal: remark_reciprocal(lengths, edge)?,
        remark_fd_reciprocal: 1.0 / fd_wigner,
        remark_fd_secant: fd_remark_secant(lengths, edge, step)?,
        wigner_residual: (analytic - fd_wigner).abs(),
        inverse_residual: (analytic - fd_inverse).abs(),
    })
}
