//! Batch verification of the identities and derivative formulas over
//! sampled tetrahedra.
//!
//! Every check produces a non-negative residual; [`Residuals`] keeps the
//! worst value per class. Tolerance policy belongs to the caller.

use crate::error::{GeometryError, Result};
use crate::sampling::{sample_one, SampleConfig};
use crate::sphtrig::{
    sine_law_ratios, triangle_angles_from_sides, triangle_gram_det, TriangleSides,
};
use crate::tetra::{
    complement, dihedral_in_link, dihedrals_from_lengths, dihedrals_from_vertices, gram_det,
    lengths_from_dihedrals, lengths_from_vertices, link_triangle, vertices_from_lengths, EdgeId,
    TetLengths,
};
use crate::wigner::{
    inverse_via_links, inverse_wigner_derivative, jacobian_l_of_theta, jacobian_theta_of_l,
    reciprocity_report, wigner_derivative, wigner_via_link_at,
};

/// `|x − reference| / |reference|`, falling back to absolute near zero.
pub fn relative(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

macro_rules! residual_classes {
    ($($(#[$doc:meta])* $field:ident),* $(,)?) => {
        /// Worst residual per invariant class.
        #[derive(Debug, Clone, Copy, PartialEq, Default)]
        pub struct Residuals {
            $($(#[$doc])* pub $field: f64,)*
        }

        impl Residuals {
            /// `(name, value)` for every class, in declaration order.
            pub fn entries(&self) -> Vec<(&'static str, f64)> {
                vec![$((stringify!($field), self.$field)),*]
            }

            /// Componentwise maximum.
            pub fn merge(&mut self, other: &Residuals) {
                $(self.$field = self.$field.max(other.$field);)*
            }
        }
    };
}

residual_classes! {
    /// Closed-form Wigner derivative against the lengths→dihedrals difference quotient.
    wigner_vs_fd,
    /// Closed-form inverse derivative against the dihedrals→lengths difference quotient.
    inverse_vs_fd,
    /// The two difference quotients against each other.
    fd_reciprocity,
    /// Secant-inverted lengths-held derivative against `√det G/(sin l sin l')`.
    lengths_held_vs_fd,
    /// 3×3 Gram determinant against `(sin A sin b sin c)²`, faces and links.
    triangle_gram,
    /// `√det G` against the six-sine product through each link.
    tetra_gram,
    /// Link interior angles against dihedral angles from face normals.
    link_vs_normals,
    /// Chain-rule routes against the closed forms.
    link_routes,
    /// A dihedral angle read from either endpoint's link.
    endpoint_symmetry,
    /// Spread of the sine-law ratios, faces and links.
    sine_law,
    /// lengths → dihedrals → lengths, max-norm.
    round_trip,
    /// lengths → vertices → lengths, max-norm.
    vertex_round_trip,
    /// `J_θl · J_lθ − I`, max-norm.
    jacobian_product,
    /// Opposite-pair Jacobian entries against the closed form.
    jacobian_opposite_entries,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.entries()
            .into_iter()
            .map(|(_, v)| v)
            .fold(0.0, f64::max)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.entries().into_iter().all(|(_, v)| v <= tol)
    }
}

fn triangle_checks(sides: TriangleSides) -> Result<(f64, f64)> {
    let angles = triangle_angles_from_sides(sides)?;
    let det = triangle_gram_det(sides);
    let [a, b, c] = sides.to_array();
    let [aa, bb, cc] = angles.to_array();
    let gram = [
        (aa.sin() * b.sin() * c.sin()).powi(2),
        (bb.sin() * c.sin() * a.sin()).powi(2),
        (cc.sin() * a.sin() * b.sin()).powi(2),
    ]
    .iter()
    .map(|p| (det - p).abs() / det.max(1.0))
    .fold(0.0, f64::max);
    let r = sine_law_ratios(sides, angles);
    let sine = r.iter().map(|x| relative(*x, r[0])).fold(0.0, f64::max);
    Ok((gram, sine))
}

/// Closed-form identities that need no finite differences.
pub fn identity_residuals(lengths: &TetLengths) -> Result<Residuals> {
    let mut out = Residuals::default();
    let angles = dihedrals_from_lengths(lengths)?;
    let det = gram_det(lengths);
    let root = det.sqrt();

    for v in 0..4 {
        let link = link_triangle(lengths, v)?;
        let [p, q, r] = link.corners;
        let face = TriangleSides::new(lengths.get(q, r), lengths.get(p, r), lengths.get(p, q));
        for tri in [face, link.sides] {
            let (g, s) = triangle_checks(tri)?;
            out.triangle_gram = out.triangle_gram.max(g);
            out.sine_law = out.sine_law.max(s);
        }
    }

    let verts = vertices_from_lengths(lengths)?;
    let from_normals = dihedrals_from_vertices(&verts)?;
    out.vertex_round_trip = lengths_from_vertices(&verts)?.max_abs_diff(lengths);

    for v in 0..4 {
        let link = link_triangle(lengths, v)?;
        for k in (0..4).filter(|&k| k != v) {
            let (p, q) = complement(v, k);
            let theta = dihedral_in_link(lengths, v, k)?;
            let edge = EdgeId::between(v, k).unwrap();
            out.link_vs_normals = out.link_vs_normals.max(relative(theta, from_normals[edge]));
            out.endpoint_symmetry = out.endpoint_symmetry.max(relative(theta, angles[edge]));
            let product = lengths.get(v, p).sin()
                * lengths.get(v, q).sin()
                * lengths.get(v, k).sin()
                * link.side(k, p).sin()
                * link.side(k, q).sin()
                * theta.sin();
            out.tetra_gram = out.tetra_gram.max(relative(product, root));
        }
    }

    for e in EdgeId::ALL {
        let w = wigner_derivative(lengths, e)?;
        let (i, j) = e.vertices();
        for endpoint in [i, j] {
            out.link_routes = out
                .link_routes
                .max(relative(wigner_via_link_at(lengths, e, endpoint)?, w));
        }
        let inv = inverse_wigner_derivative(&angles, e)?;
        out.link_routes = out
            .link_routes
            .max(relative(inverse_via_links(&angles, e)?, inv));
        out.link_routes = out.link_routes.max(relative(inv, w));
    }

    out.round_trip = lengths_from_dihedrals(&angles)?.max_abs_diff(lengths);
    Ok(out)
}

/// Finite-difference checks for all six edges, plus the Jacobian product.
pub fn derivative_residuals(lengths: &TetLengths, step: f64) -> Result<Residuals> {
    let mut out = Residuals::default();
    for e in EdgeId::ALL {
        let r = reciprocity_report(lengths, e, step)?;
        out.wigner_vs_fd = out
            .wigner_vs_fd
            .max(relative(r.fd_wigner, r.analytic_wigner));
        out.inverse_vs_fd = out
            .inverse_vs_fd
            .max(relative(r.fd_inverse, r.analytic_inverse));
        out.fd_reciprocity = out.fd_reciprocity.max(relative(r.fd_inverse, r.fd_wigner));
        out.lengths_held_vs_fd = out
            .lengths_held_vs_fd
            .max(relative(r.remark_fd_secant, r.remark_reciprocal));
    }
    let angles = dihedrals_from_lengths(lengths)?;
    let jt = jacobian_theta_of_l(lengths, step)?;
    let jl = jacobian_l_of_theta(&angles, step)?;
    out.jacobian_product = jt.product_identity_residual(&jl);
    for e in EdgeId::ALL {
        let w = wigner_derivative(lengths, e)?;
        out.jacobian_opposite_entries = out
            .jacobian_opposite_entries
            .max(relative(jt.get(e, e.opposite()), w))
            .max(relative(jl.get(e.opposite(), e), w));
    }
    Ok(out)
}

pub fn sample_residuals(lengths: &TetLengths, step: f64) -> Result<Residuals> {
    let mut out = identity_residuals(lengths)?;
    out.merge(&derivative_residuals(lengths, step)?);
    Ok(out)
}

/// Outcome for one sample of a batch run.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleOutcome {
    Checked { residuals: Residuals, step: f64 },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub step: f64,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Samples that needed the reduced step.
    pub retried: usize,
    pub max: Residuals,
    pub outcomes: Vec<SampleOutcome>,
}

impl BatchSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.skipped == 0
    }
}

/// Checks one sample, retrying once with `step / 10` when a perturbation
/// leaves the valid domain.
pub fn check_sample(lengths: &TetLengths, step: f64) -> SampleOutcome {
    let retryable = |e: &GeometryError| {
        matches!(
            e,
            GeometryError::StepTooLarge { .. } | GeometryError::NotRealizable(_)
        )
    };
    match sample_residuals(lengths, step) {
        Ok(residuals) => SampleOutcome::Checked { residuals, step },
        Err(e) if retryable(&e) => match sample_residuals(lengths, step / 10.0) {
            Ok(residuals) => SampleOutcome::Checked {
                residuals,
                step: step / 10.0,
            },
            Err(e) => SampleOutcome::Skipped {
                reason: e.to_string(),
            },
        },
        Err(e) => SampleOutcome::Skipped {
            reason: e.to_string(),
        },
    }
}

/// Samples `config.count` tetrahedra and checks each. Reductions run in
/// sample order, so the summary is reproducible.
pub fn verify_batch(config: &SampleConfig, tol: f64, step: f64) -> Result<BatchSummary> {
    config.check()?;
    let mut summary = BatchSummary {
        seed: config.seed,
        count: config.count,
        tol,
        step,
        passed: 0,
        failed: 0,
        skipped: 0,
        retried: 0,
        max: Residuals::default(),
        outcomes: Vec::with_capacity(config.count),
    };
    for index in 0..config.count {
        let lengths = sample_one(config, index)?.lengths;
        let outcome = check_sample(&lengths, step);
        match &outcome {
            SampleOutcome::Checked {
                residuals,
                step: used,
            } => {
                if *used != step {
                    summary.retried += 1;
                }
                if residuals.within(tol) {
                    summary.passed += 1;
                } else {
                    summary.failed += 1;
                }
                summary.max.merge(residuals);
            }
            SampleOutcome::Skipped { .. } => summary.skipped += 1,
        }
        summary.outcomes.push(outcome);
    }
    Ok(summary)
}
