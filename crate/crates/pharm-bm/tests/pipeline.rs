//! Cross-module integration tests: solver convergence behavior, boundary
//! estimates, level-set geometry and the restart identity, at moderate
//! resolutions (the pinned acceptance battery lives in `acceptance.rs`).

use pharm_bm::convex::{hausdorff, support_of_points, SupportFn};
use pharm_bm::exact::Annulus;
use pharm_bm::geometry::Vec2;
use pharm_bm::ring::{InnerData, RingProblem, ScalarField, Side};

fn annulus_problem(p: f64, mesh: (usize, usize)) -> RingProblem {
    RingProblem::new(
        SupportFn::ball(1.0).unwrap(),
        SupportFn::ball(0.25).unwrap(),
        p,
        InnerData::Const(1.0),
        mesh,
    )
    .unwrap()
}

fn max_nodal_error(field: &ScalarField, ann: &Annulus) -> f64 {
    let mesh = field.mesh();
    let mut worst: f64 = 0.0;
    for j in 0..=mesh.m_rad {
        for i in 0..mesh.m_ang {
            let x = mesh.nodes[mesh.node_index(i, j)];
            worst = worst.max((field.node_value(i, j) - ann.u(x.norm())).abs());
        }
    }
    worst
}

#[test]
fn grid_convergence_across_exponents() {
    for p in [2.0, 2.25, 2.5, 2.75] {
        let ann = Annulus::new(0.25, 1.0, p, 1.0);
        let coarse = annulus_problem(p, (64, 32)).solve().unwrap();
        let fine = annulus_problem(p, (128, 64)).solve().unwrap();
        let e_coarse = max_nodal_error(&coarse, &ann);
        let e_fine = max_nodal_error(&fine, &ann);
        let factor = e_coarse / e_fine;
        assert!(
            factor >= 1.5,
            "p={p}: error {e_coarse:.3e} -> {e_fine:.3e}, factor {factor:.2}"
        );
    }
}

#[test]
fn comparison_principle_and_radial_monotonicity() {
    for p in [2.0, 2.75] {
        let field = annulus_problem(p, (64, 32)).solve().unwrap();
        for &v in field.nodal_values() {
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(field.radial_monotonicity_violation() <= 0.0);
        assert!(field.min_element_gradient() > 0.0);
        assert!(field.converged_gradient_norm() <= 1e-10);
    }
}

#[test]
fn harmonic_case_matches_log_profile() {
    // p = 2 is linear: one Newton step per stage, and the continuation in δ
    // does not move the minimizer at all.
    let field = annulus_problem(2.0, (96, 48)).solve().unwrap();
    let ann = Annulus::new(0.25, 1.0, 2.0, 1.0);
    assert!(max_nodal_error(&field, &ann) < 5e-4);
}

#[test]
fn scaling_covariance_of_solutions() {
    let base = annulus_problem(2.5, (48, 24));
    let f1 = base.solve().unwrap();
    let f2 = pharm_bm::ring::scaled_problem(&base, 1.7).solve().unwrap();
    for (theta, s) in [(0.3, 0.3), (2.0, 0.6), (5.1, 0.85)] {
        let rho = 0.25 + s * 0.75;
        let x = Vec2::unit(theta) * rho;
        let u1 = f1.value_at(x).unwrap();
        let u2 = f2.value_at(x * 1.7).unwrap();
        assert!((u1 - u2).abs() < 1e-6, "u({rho}) {u1} vs scaled {u2}");
    }
}

#[test]
fn boundary_gradient_estimators_agree() {
    let field = annulus_problem(2.5, (128, 64)).solve().unwrap();
    let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
    let bg = field.boundary_gradient(Side::Outer).unwrap();
    let exact = ann.grad_abs(1.0);
    for (ratio, element) in bg.grad.iter().zip(&bg.grad_element) {
        assert!((ratio - exact).abs() / exact < 0.01);
        assert!((ratio - element).abs() / exact < 0.02);
    }
    let inner = field.boundary_gradient(Side::Inner).unwrap();
    let exact_in = ann.grad_abs(0.25);
    for g in &inner.grad {
        assert!((g - exact_in).abs() / exact_in < 0.05);
    }
}

#[test]
fn level_sets_match_closed_form_radii_and_converge_to_boundary() {
    let field = annulus_problem(2.5, (96, 64)).solve().unwrap();
    let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
    for s in [0.2, 0.5, 0.8] {
        let rho = ann.level_radius(s);
        for v in field.level_set(s).unwrap() {
            assert!((v.norm() - rho).abs() < 1e-3);
        }
    }
    // s -> 0 converges to the outer boundary in Hausdorff distance.
    let mut prev = f64::INFINITY;
    for s in [0.2, 0.1, 0.05] {
        let poly = field.level_set(s).unwrap();
        let worst = poly
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < prev);
        prev = worst;
    }
    assert!(prev < 0.06);
}

#[test]
fn ellipse_ring_level_sets_are_convex() {
    let prob = RingProblem::new(
        SupportFn::ellipse(1.3, 1.0, 48).unwrap(),
        SupportFn::ball(0.45).unwrap(),
        2.5,
        InnerData::Const(1.0),
        (96, 48),
    )
    .unwrap();
    let field = prob.solve().unwrap();
    for s in [0.15, 0.4, 0.7] {
        let poly = field.level_set(s).unwrap();
        let defect = ScalarField::polyline_convexity_defect(&poly);
        assert!(defect <= 1e-3, "s={s}: convexity defect {defect:.2e}");
    }
}

#[test]
fn boundary_harnack_window_on_test_geometries() {
    let outers = [
        SupportFn::ball(1.0).unwrap(),
        SupportFn::ellipse(1.3, 1.0, 48).unwrap(),
    ];
    for outer in outers {
        let prob = RingProblem::new(
            outer,
            SupportFn::ball(0.45).unwrap(),
            2.5,
            InnerData::Const(1.0),
            (96, 64),
        )
        .unwrap();
        let field = prob.solve().unwrap();
        let (lo, hi) = field.harnack_window(&[0.1, 0.05]).unwrap();
        assert!(lo >= 1.0 / 3.0 && hi <= 3.0, "window [{lo:.3}, {hi:.3}]");
    }
}

#[test]
fn sublevel_restart_identity() {
    // Closed-form sanity on the annulus at acceptance-grade resolution.
    let field = annulus_problem(2.5, (256, 128)).solve().unwrap();
    let rep = field.sublevel_restart_check(0.2).unwrap();
    assert!(rep.max_discrepancy <= 5e-3, "annulus: {rep:?}");
    assert!(field.sublevel_restart_check(0.0).unwrap().max_discrepancy == 0.0);

    // Regression bound on a random C²⁺ ring at moderate resolution.
    let outer = pharm_bm::convex::random_body(77, 6, 2.0, 0.05).unwrap();
    let prob = RingProblem::new(
        outer,
        SupportFn::ball(0.5).unwrap(),
        2.5,
        InnerData::Const(1.0),
        (128, 96),
    )
    .unwrap();
    let field = prob.solve().unwrap();
    let rep = field.sublevel_restart_check(0.1).unwrap();
    assert!(rep.max_discrepancy <= 1e-2, "random ring: {rep:?}");
}

#[test]
fn level_set_encoding_round_trip() {
    // Support-encoding the outer mesh boundary reproduces the body.
    let outer = pharm_bm::convex::random_body(99, 5, 2.0, 0.06).unwrap();
    let prob = RingProblem::new(
        outer.clone(),
        SupportFn::ball(0.5).unwrap(),
        2.5,
        InnerData::Const(1.0),
        (128, 32),
    )
    .unwrap();
    let mesh = prob.build_mesh().unwrap();
    let poly: Vec<Vec2> = (0..mesh.m_ang)
        .map(|i| mesh.nodes[mesh.node_index(i, mesh.m_rad)])
        .collect();
    let enc = support_of_points(&poly, 128, 16, 1e-9).unwrap();
    assert!(hausdorff(&enc.smoothed, &outer) < 2e-3);
}

#[test]
fn field_dumps_round_trip() {
    let field = annulus_problem(2.5, (32, 16)).solve().unwrap();
    let mut text = Vec::new();
    field.write_text(&mut text).unwrap();
    let text = String::from_utf8(text).unwrap();
    assert!(text.lines().count() == 1 + 32 * 17);
    let first_data = text.lines().nth(1).unwrap();
    assert!(first_data.starts_with("0 0 "));

    let mut bin = Vec::new();
    field.write_binary(&mut bin).unwrap();
    assert_eq!(&bin[0..4], b"PHRM");
    let m_ang = u32::from_le_bytes(bin[4..8].try_into().unwrap()) as usize;
    let m_rad = u32::from_le_bytes(bin[8..12].try_into().unwrap()) as usize;
    assert_eq!((m_ang, m_rad), (32, 16));
    assert_eq!(bin.len(), 12 + 3 * 8 * m_ang * (m_rad + 1));
    // Third column holds the nodal values; check the inner-boundary value.
    let off = 12 + 2 * 8 * m_ang * (m_rad + 1);
    let u00 = f64::from_le_bytes(bin[off..off + 8].try_into().unwrap());
    assert!((u00 - 1.0).abs() < 1e-14);
}

#[test]
fn degenerate_problems_are_rejected() {
    let outer = SupportFn::ball(1.0).unwrap();
    let inner = SupportFn::ball(0.9995).unwrap();
    assert!(RingProblem::new(
        outer.clone(),
        inner,
        2.5,
        InnerData::Const(1.0),
        (32, 16)
    )
    .is_err());
    assert!(RingProblem::new(
        outer.clone(),
        SupportFn::ball(0.5).unwrap(),
        3.2,
        InnerData::Const(1.0),
        (32, 16)
    )
    .is_err());
    assert!(RingProblem::new(
        outer,
        SupportFn::ball(0.5).unwrap(),
        2.5,
        InnerData::Const(0.0),
        (32, 16)
    )
    .is_err());
}
