use proptest::prelude::*;
use sphtet::sphtrig::sine_law_ratios;
use sphtet::verify::{identity_residuals, relative};
use sphtet::wigner::fd_remark_secant;
use sphtet::*;

/// A valid tetrahedron from the default sampler, indexed by seed.
fn tetrahedron() -> impl Strategy<Value = TetLengths> {
    any::<u64>().prop_map(|seed| {
        sampling::sample_one(&SampleConfig::new(seed, 1), 0)
            .unwrap()
            .lengths
    })
}

/// Tetrahedra whose Gram determinant is at least `floor`.
fn conditioned(floor: f64) -> impl Strategy<Value = TetLengths> {
    tetrahedron().prop_filter("ill-conditioned", move |l| gram_det(l) >= floor)
}

fn triangle() -> impl Strategy<Value = TriangleSides> {
    (0.05..3.09f64, 0.05..3.09f64, 0.05..3.09f64)
        .prop_map(|(a, b, c)| TriangleSides::new(a, b, c))
        .prop_filter("not a triangle", |s| triangle_gram_det(*s) > 1e-4)
}

/// Routes that pass through the dihedral angles lose about `ε/det G`
/// relative accuracy, since `∂l/∂θ` grows like `1/√det G`.
fn angle_route_tol(l: &TetLengths) -> f64 {
    1e-10 + 4e-15 / gram_det(l)
}

/// Relabels vertices by `perm`: edge `{i, j}` moves to `{perm[i], perm[j]}`.
fn relabel(values: [f64; 6], perm: [usize; 4]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for e in EdgeId::ALL {
        let (i, j) = e.vertices();
        out[EdgeId::between(perm[i], perm[j]).unwrap().index()] = values[e.index()];
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triangle_round_trip(s in triangle()) {
        let angles = triangle_angles_from_sides(s).unwrap();
        prop_assert!(angles.in_range());
        let back = triangle_sides_from_angles(angles).unwrap();
        for (x, y) in back.to_array().iter().zip(s.to_array()) {
            prop_assert!((x - y).abs() < 1e-9, "{back:?} vs {s:?}");
        }
    }

    #[test]
    fn triangle_sine_law_and_gram(s in triangle()) {
        let angles = triangle_angles_from_sides(s).unwrap();
        let r = sine_law_ratios(s, angles);
        prop_assert!(relative(r[1], r[0]) < 1e-10 && relative(r[2], r[0]) < 1e-10, "{r:?}");
        let det = triangle_gram_det(s);
        let product = (angles.a.sin() * s.b.sin() * s.c.sin()).powi(2);
        prop_assert!((det - product).abs() < 1e-12);
        prop_assert!((det - TriangleGram::from_sides(s).det()).abs() < 1e-12);
    }

    #[test]
    fn triangle_wigner_through_sines(s in triangle()) {
        // √det G = sin A sin b sin c turns sin a/√det G into a pure sine ratio
        let angles = triangle_angles_from_sides(s).unwrap();
        let w = triangle_wigner(s).unwrap();
        prop_assert!(relative(w, s.a.sin() / (angles.a.sin() * s.b.sin() * s.c.sin())) < 1e-10);
        prop_assert!(triangle_inverse_wigner(angles).unwrap() > 0.0);
    }

    #[test]
    fn tetra_round_trip(l in tetrahedron()) {
        let angles = dihedrals_from_lengths(&l).unwrap();
        prop_assert!(angles.0.iter().all(|&x| 0.0 < x && x < std::f64::consts::PI));
        let back = lengths_from_dihedrals(&angles).unwrap();
        prop_assert!(back.max_abs_diff(&l) <= 1e-9, "{}", back.max_abs_diff(&l));
        prop_assert_eq!(validate_angles(&angles), TetValidity::Valid);
    }

    #[test]
    fn identities_hold(l in tetrahedron()) {
        let r = identity_residuals(&l).unwrap();
        let tol = angle_route_tol(&l);
        for (name, v) in r.entries() {
            prop_assert!(v <= tol, "{name} = {v:e}, det {:e}", gram_det(&l));
        }
    }

    #[test]
    fn wigner_equals_inverse_wigner(l in tetrahedron(), k in 0usize..6) {
        let e = EdgeId::from_index(k).unwrap();
        let angles = dihedrals_from_lengths(&l).unwrap();
        let w = wigner_derivative(&l, e).unwrap();
        let tol = angle_route_tol(&l);
        prop_assert!(w > 0.0);
        prop_assert!(relative(inverse_wigner_derivative(&angles, e).unwrap(), w) < tol);
        prop_assert!(relative(wigner_via_links(&l, e).unwrap(), w) < 1e-10);
        prop_assert!(relative(inverse_via_links(&angles, e).unwrap(), w) < tol);
        // the opposite pair shares the same derivative
        prop_assert!(relative(wigner_derivative(&l, e.opposite()).unwrap(), w) < 1e-14);
        prop_assert!(relative(remark_reciprocal(&l, e).unwrap() * w, 1.0) < 1e-14);
    }

    #[test]
    fn reciprocity_on_conditioned_tetrahedra(l in conditioned(1e-2), k in 0usize..6) {
        let e = EdgeId::from_index(k).unwrap();
        let r = reciprocity_report(&l, e, 1e-5).unwrap();
        prop_assert_eq!(r.analytic_wigner, r.analytic_inverse);
        prop_assert!(r.wigner_residual < 1e-5, "{r:?}");
        prop_assert!(r.inverse_residual < 1e-5, "{r:?}");
        prop_assert!(relative(r.fd_wigner, r.fd_inverse) < 2e-5, "{r:?}");
        prop_assert!(relative(fd_remark_secant(&l, e, 1e-5).unwrap(), r.remark_reciprocal) < 1e-5);
    }

    #[test]
    fn jacobians_invert_on_conditioned_tetrahedra(l in conditioned(1e-2)) {
        let angles = dihedrals_from_lengths(&l).unwrap();
        let jt = jacobian_theta_of_l(&l, 1e-5).unwrap();
        let jl = jacobian_l_of_theta(&angles, 1e-5).unwrap();
        prop_assert!(jt.product_identity_residual(&jl) < 1e-4);
    }

    #[test]
    fn relabeling_vertices_relabels_angles(l in tetrahedron(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let angles = dihedrals_from_lengths(&l).unwrap();
        let moved = dihedrals_from_lengths(&TetLengths::new(relabel(l.0, perm))).unwrap();
        let expected = relabel(angles.0, perm);
        for (x, y) in moved.0.iter().zip(expected) {
            prop_assert!((x - y).abs() < 1e-10, "{perm:?}: {moved:?} vs {expected:?}");
        }
    }

    #[test]
    fn vertex_realization_round_trip(l in tetrahedron()) {
        let v = vertices_from_lengths(&l).unwrap();
        prop_assert!(lengths_from_vertices(&v).unwrap().max_abs_diff(&l) <= 1e-10);
        let from_normals = dihedrals_from_vertices(&v).unwrap();
        prop_assert!(from_normals.max_abs_diff(&dihedrals_from_lengths(&l).unwrap()) < 1e-9);
        prop_assert!((gram_det(&l) - gram_from_lengths(&l).det()).abs() < 1e-14);
    }

    #[test]
    fn edge_names_round_trip(k in 0usize..6) {
        let e = EdgeId::from_index(k).unwrap();
        prop_assert_eq!(e.to_string().parse::<EdgeId>().unwrap(), e);
        prop_assert_eq!(e.opposite().opposite(), e);
        let (i, j) = e.vertices();
        prop_assert_eq!(format!("{j}{i}").parse::<EdgeId>().unwrap(), e);
    }

    #[test]
    fn zero_perturbation_is_identity(l in tetrahedron(), seed in any::<u64>()) {
        prop_assert_eq!(perturb(&l, 0.0, seed).unwrap(), l);
    }
}
