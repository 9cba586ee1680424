//! Boundary measures with density `|∇u|^(p-1)`, their pushforward to the
//! unit circle, the functional `T(K) = ∫_{∂K} (h∘g) dω`, and the
//! vanishing-level ratio integrals `I(s) = ∫_{u=s} (u/dist)^(p-1) dH¹`.

use crate::error::{Error, Result};
use crate::ring::{ScalarField, Side};
use serde::Serialize;
use std::f64::consts::TAU;

/// Sampled p-harmonic measure on the outer boundary.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundaryMeasure {
    /// Gauss angles `θ_j`.
    pub thetas: Vec<f64>,
    /// Densities `ω_j = |∇u|^(p-1)(F(θ_j))`.
    pub densities: Vec<f64>,
    /// Arc weights `(h''+h)(θ_j) Δθ`.
    pub arc_weights: Vec<f64>,
    pub total_mass: f64,
}

impl BoundaryMeasure {
    /// Total mass of the pushforward density `ω_j (h''+h)(θ_j)` per unit
    /// angle on the circle; equals the boundary mass by change of variables.
    pub fn spherical_mass(&self, field: &ScalarField) -> f64 {
        let outer = &field.problem().outer;
        let m = self.thetas.len();
        let dtheta = TAU / m as f64;
        self.thetas
            .iter()
            .zip(&self.densities)
            .map(|(&t, &w)| w * outer.curvature_radius(t) * dtheta)
            .sum()
    }
}

/// Results of the functional evaluation and limit sweep.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionalReport {
    /// `Σ h(θ_j) ω_j arc_weight_j` over boundary samples.
    pub t_direct: f64,
    /// Same integral through the spherical change of variables.
    pub t_spherical: f64,
    /// Pairs `(s, I(s))` of the vanishing-level sweep, `s` decreasing.
    pub ratio_sweep: Vec<(f64, f64)>,
    /// `T_direct / I(s_min)`; tends to the outer radius on annuli.
    pub limit_ratio: Option<f64>,
}

/// Sample the p-harmonic measure of a converged field on the outer boundary.
pub fn measure(field: &ScalarField) -> Result<BoundaryMeasure> {
    let p = field.problem().p;
    let bg = field.boundary_gradient(Side::Outer)?;
    let pts = field.problem().outer.gauss_points(field.mesh().m_ang);
    let densities: Vec<f64> = bg.grad.iter().map(|g| g.powf(p - 1.0)).collect();
    let arc_weights: Vec<f64> = pts.iter().map(|b| b.arc_weight).collect();
    let total_mass = densities.iter().zip(&arc_weights).map(|(d, w)| d * w).sum();
    Ok(BoundaryMeasure {
        thetas: bg.thetas,
        densities,
        arc_weights,
        total_mass,
    })
}

/// Evaluate `T` through both parameterizations of the same boundary integral.
pub fn functional_t(field: &ScalarField) -> Result<FunctionalReport> {
    let mu = measure(field)?;
    let outer = &field.problem().outer;
    let m = mu.thetas.len();
    let dtheta = TAU / m as f64;
    let mut t_direct = 0.0;
    let mut t_spherical = 0.0;
    for j in 0..m {
        let h = outer.h(mu.thetas[j]);
        t_direct += h * mu.densities[j] * mu.arc_weights[j];
        t_spherical += h * mu.densities[j] * outer.curvature_radius(mu.thetas[j]) * dtheta;
    }
    Ok(FunctionalReport {
        t_direct,
        t_spherical,
        ratio_sweep: Vec::new(),
        limit_ratio: None,
    })
}

/// `I(s) = s^(p-1) ∫_{u=s} dist(x, ∂K)^-(p-1) dH¹` by trapezoid over the
/// level polyline with per-segment midpoint distances.
pub fn level_ratio_integral(field: &ScalarField, s: f64) -> Result<f64> {
    let p = field.problem().p;
    let outer = &field.problem().outer;
    let poly = field.level_set(s)?;
    let n = poly.len();
    let mut integral = 0.0;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let mid = (a + b) * 0.5;
        let dist = outer.distance_to_boundary(mid)?.dist;
        integral += (b - a).norm() * dist.powf(-(p - 1.0));
    }
    Ok(s.powf(p - 1.0) * integral)
}

/// Sweep `I(s)` over a decreasing list of levels and report the limit ratio
/// `T / I(s_min)`. Levels must satisfy `s ≤ 0.2 eps0` and be resolvable by
/// the mesh (`s ≥ 4 h_mesh max |∇u|`).
pub fn level_ratio_sweep(field: &ScalarField, s_list: &[f64]) -> Result<FunctionalReport> {
    let eps0 = field.problem().inner_data.max();
    if s_list.is_empty() || s_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidProblem("levels must be strictly decreasing".into()));
    }
    let bg = field.boundary_gradient(Side::Outer)?;
    let max_grad = bg.grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_resolvable = 4.0 * field.mesh().max_radial_spacing() * max_grad;
    for &s in s_list {
        if s > 0.2 * eps0 {
            return Err(Error::LevelOutOfRange { level: s, max: 0.2 * eps0 });
        }
        if s < min_resolvable {
            return Err(Error::LevelUnresolvable { level: s, min_resolvable });
        }
    }
    let mut report = functional_t(field)?;
    for &s in s_list {
        let i_s = level_ratio_integral(field, s)?;
        report.ratio_sweep.push((s, i_s));
    }
    let i_min = report.ratio_sweep.last().unwrap().1;
    report.limit_ratio = Some(report.t_direct / i_min);
    Ok(report)
}

/// Relative change between the last two sweep values (stabilization metric).
pub fn sweep_final_variation(report: &FunctionalReport) -> Option<f64> {
    let n = report.ratio_sweep.len();
    if n < 2 {
        return None;
    }
    let (_, a) = report.ratio_sweep[n - 2];
    let (_, b) = report.ratio_sweep[n - 1];
    Some((a - b).abs() / b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::SupportFn;
    use crate::exact::Annulus;
    use crate::ring::{InnerData, RingProblem};

    fn annulus_field(p: f64, mesh: (usize, usize)) -> ScalarField {
        let prob = RingProblem::new(
            SupportFn::ball(1.0).unwrap(),
            SupportFn::ball(0.25).unwrap(),
            p,
            InnerData::Const(1.0),
            mesh,
        )
        .unwrap();
        prob.solve().unwrap()
    }

    #[test]
    fn annulus_measure_density_and_mass() {
        let field = annulus_field(2.5, (96, 48));
        let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
        let mu = measure(&field).unwrap();
        let exact_density = ann.grad_abs(1.0).powf(1.5);
        for d in &mu.densities {
            assert!((d - exact_density).abs() / exact_density < 0.01);
        }
        assert!((mu.total_mass - ann.mass()).abs() / ann.mass() < 0.01);
        assert!(mu.densities.iter().all(|&d| d >= 0.0));
        // Pushforward conserves mass to near machine precision.
        let spherical = mu.spherical_mass(&field);
        assert!((spherical - mu.total_mass).abs() <= 1e-12 * mu.total_mass);
    }

    #[test]
    fn harmonic_annulus_uniform_density() {
        let field = annulus_field(2.0, (96, 48));
        let ann = Annulus::new(0.25, 1.0, 2.0, 1.0);
        let mu = measure(&field).unwrap();
        let exact = ann.grad_abs(1.0); // p - 1 = 1
        for d in &mu.densities {
            assert!((d - exact).abs() / exact < 0.01);
        }
    }

    #[test]
    fn functional_matches_closed_form() {
        let field = annulus_field(2.5, (96, 48));
        let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
        let rep = functional_t(&field).unwrap();
        assert!((rep.t_direct - ann.functional_t()).abs() / ann.functional_t() < 0.01);
        assert!((rep.t_direct - rep.t_spherical).abs() / rep.t_direct < 5e-3);
    }

    #[test]
    fn whole_configuration_scaling_of_measure_and_t() {
        let base = RingProblem::new(
            SupportFn::ball(1.0).unwrap(),
            SupportFn::ball(0.25).unwrap(),
            2.5,
            InnerData::Const(1.0),
            (64, 32),
        )
        .unwrap();
        let f1 = base.solve().unwrap();
        let t1 = functional_t(&f1).unwrap().t_direct;
        let m1 = measure(&f1).unwrap().total_mass;
        for lam in [0.9, 1.1, 1.2, 2.0] {
            let scaled = crate::ring::scaled_problem(&base, lam);
            let f2 = scaled.solve().unwrap();
            let t2 = functional_t(&f2).unwrap().t_direct;
            let m2 = measure(&f2).unwrap().total_mass;
            // n - p + 1 = 0.5 and n - p = -0.5 at p = 2.5.
            assert!((t2 / t1 - lam.powf(0.5)).abs() < 1e-3 * lam.powf(0.5));
            assert!((m2 / m1 - lam.powf(-0.5)).abs() < 1e-3 * lam.powf(-0.5));
        }
    }

    #[test]
    fn level_sweep_tends_to_outer_radius() {
        let field = annulus_field(2.5, (128, 128));
        let s_list = [0.1, 0.05, 0.025];
        let rep = level_ratio_sweep(&field, &s_list).unwrap();
        let ratio = rep.limit_ratio.unwrap();
        // At s = 0.025 the level curve is still 2.6% shorter than ∂K and the
        // 128-gon midpoint quadrature adds 1.6%; the acceptance-grade 2%
        // behavior needs the (256, 128) mesh and is gated there.
        assert!((ratio - 1.0).abs() < 0.035, "ratio {ratio}");
        assert!(sweep_final_variation(&rep).unwrap() < 0.02);
    }

    #[test]
    fn unresolvable_level_is_rejected() {
        let field = annulus_field(2.5, (32, 16));
        let err = level_ratio_sweep(&field, &[0.1, 0.001]);
        assert!(matches!(err, Err(Error::LevelUnresolvable { .. })));
    }
}
