//! Config-driven experiments: Minkowski neighborhood families, min-form
//! Brunn-Minkowski margins, concavity defects, homogeneity slopes, the
//! Hadamard variational formula in transported semantics, and locality
//! probes along annulus dilate families.

mod config;

pub use config::{
    BodiesSection, BodySpec, ExperimentConfig, ExperimentSection, InnerSpec, MeshSpec,
    OutputSection, Semantics, SolverSection,
};

use crate::convex::{combine_signed, hausdorff, minkowski_combine, random_body, support_of_points, SupportFn};
use crate::error::{Error, Result};
use crate::exact;
use crate::geometry::Vec2;
use crate::measure::{functional_t, measure};
use crate::ring::{scaled_problem, InnerData, RingProblem, ScalarField};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// Fixed float formatting for byte-stable CSV output.
fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

/// Inner body for fixed-inner experiments.
pub fn inner_body(cfg: &ExperimentConfig, k0: &SupportFn) -> Result<SupportFn> {
    match cfg.experiment.inner {
        InnerSpec::Scale(s) => Ok(k0.scale(s)),
        InnerSpec::LevelSet(_) => Err(Error::InvalidProblem(
            "level-set inner construction requires transported semantics".into(),
        )),
    }
}

fn solve_with_t(cfg: &ExperimentConfig, outer: &SupportFn, inner: &SupportFn) -> Result<(ScalarField, f64)> {
    let prob = RingProblem::new(
        outer.clone(),
        inner.clone(),
        cfg.solver.p,
        InnerData::Const(cfg.experiment.epsilon0),
        cfg.mesh_dims(),
    )?
    .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
    let field = prob.solve()?;
    let t = functional_t(&field)?.t_direct;
    Ok((field, t))
}

/// Neighborhood family `K_t = (K0 + t K')/(1+t)` on a symmetric grid inside
/// `(-τ, τ)`, each member validated C²⁺ and nested around the inner body.
pub fn family(cfg: &ExperimentConfig) -> Result<Vec<(f64, SupportFn)>> {
    let k0 = cfg.bodies.k0.build()?;
    let kprime = cfg
        .bodies
        .kprime
        .as_ref()
        .ok_or_else(|| Error::Config("family requires bodies.kprime".into()))?
        .build()?;
    let inner = inner_body(cfg, &k0)?;
    let margin = 1e-3 * k0.diameter();
    let count = cfg.experiment.family_count as i64;
    let tau = cfg.experiment.tau;
    let mut out = Vec::new();
    for k in -count..=count {
        let t = tau * k as f64 / (count + 1) as f64;
        let body = combine_signed(
            &k0,
            &kprime,
            1.0 / (1.0 + t),
            t / (1.0 + t),
            0.25 * k0.kappa_floor(),
        )?;
        let gap = body.series().combine(inner.series(), 1.0, -1.0);
        if gap.global_min().1 < margin {
            return Err(Error::NeighborhoodTooLarge { t });
        }
        out.push((t, body));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BmRow {
    pub lambda: f64,
    pub t_lambda: f64,
    pub t_min: f64,
    pub margin: f64,
    pub concavity_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BmReport {
    pub p: f64,
    pub mesh: (usize, usize),
    pub semantics: String,
    pub t1: f64,
    pub t2: f64,
    pub rows: Vec<BmRow>,
}

impl BmReport {
    pub fn min_margin(&self) -> f64 {
        self.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "lambda,t_lambda,t_min,margin,concavity_defect")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt(r.lambda),
                fmt(r.t_lambda),
                fmt(r.t_min),
                fmt(r.margin),
                fmt(r.concavity_defect)
            )?;
        }
        Ok(())
    }
}

/// Min-form Brunn-Minkowski scan in fixed-inner semantics: solve on each
/// `K_λ = (1-λ)K1 + λK2` and report `T(K_λ) - min(T(K1), T(K2))` together
/// with the concavity defect of `T^(1/(n-p+1))`.
pub fn bm_min_check(cfg: &ExperimentConfig, k1: &SupportFn, k2: &SupportFn) -> Result<BmReport> {
    if cfg.experiment.semantics != Semantics::FixedInner {
        return Err(Error::InvalidProblem(
            "bm_min_check runs in fixed-inner semantics".into(),
        ));
    }
    let k0 = cfg.bodies.k0.build()?;
    let inner = inner_body(cfg, &k0)?;
    let (_, t1) = solve_with_t(cfg, k1, &inner)?;
    let (_, t2) = solve_with_t(cfg, k2, &inner)?;
    let t_min = t1.min(t2);
    let exponent = 1.0 / (3.0 - cfg.solver.p);
    let rows: Result<Vec<BmRow>> = cfg
        .experiment
        .lambda_grid
        .par_iter()
        .map(|&lam| {
            let body = minkowski_combine(k1, k2, 1.0 - lam, lam)?;
            let (_, t_lam) = solve_with_t(cfg, &body, &inner)?;
            let defect = t_lam.powf(exponent)
                - (1.0 - lam) * t1.powf(exponent)
                - lam * t2.powf(exponent);
            Ok(BmRow {
                lambda: lam,
                t_lambda: t_lam,
                t_min,
                margin: t_lam - t_min,
                concavity_defect: defect,
            })
        })
        .collect();
    Ok(BmReport {
        p: cfg.solver.p,
        mesh: cfg.mesh_dims(),
        semantics: "fixed-inner".into(),
        t1,
        t2,
        rows: rows?,
    })
}

/// Concavity-defect scan. Reported, not asserted: the defect sign along
/// fixed-inner segments is an open empirical question; only the min form is
/// an acceptance gate.
pub fn bm_concavity_check(
    cfg: &ExperimentConfig,
    k1: &SupportFn,
    k2: &SupportFn,
) -> Result<BmReport> {
    bm_min_check(cfg, k1, k2)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityReport {
    pub p: f64,
    pub rows: Vec<(f64, f64)>,
    pub slope: f64,
    pub expected_slope: f64,
}

impl HomogeneityReport {
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "lambda,t_value")?;
        for (lam, t) in &self.rows {
            writeln!(w, "{},{}", fmt(*lam), fmt(*t))?;
        }
        Ok(())
    }
}

/// Whole-configuration scaling: solve the ring scaled by each λ (outer,
/// inner and data domain together) and fit the log-log slope of `T`.
pub fn homogeneity_check(cfg: &ExperimentConfig, lambdas: &[f64]) -> Result<HomogeneityReport> {
    if cfg.experiment.semantics != Semantics::Transported {
        return Err(Error::InvalidProblem(
            "homogeneity_check scales the whole configuration (transported semantics)".into(),
        ));
    }
    let k0 = cfg.bodies.k0.build()?;
    let inner = match cfg.experiment.inner {
        InnerSpec::Scale(s) => k0.scale(s),
        InnerSpec::LevelSet(_) => {
            return Err(Error::InvalidProblem(
                "homogeneity_check requires a scale-constructed inner body".into(),
            ))
        }
    };
    let base = RingProblem::new(
        k0,
        inner,
        cfg.solver.p,
        InnerData::Const(cfg.experiment.epsilon0),
        cfg.mesh_dims(),
    )?
    .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);

    let mut lams: Vec<f64> = lambdas.to_vec();
    if !lams.iter().any(|&l| (l - 1.0).abs() < 1e-12) {
        lams.push(1.0);
    }
    let rows: Result<Vec<(f64, f64)>> = lams
        .par_iter()
        .map(|&lam| {
            let field = scaled_problem(&base, lam).solve()?;
            Ok((lam, functional_t(&field)?.t_direct))
        })
        .collect();
    let rows = rows?;
    let xs: Vec<f64> = rows.iter().map(|(l, _)| l.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, t)| t.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xm) * (y - ym);
        den += (x - xm) * (x - xm);
    }
    Ok(HomogeneityReport {
        p: cfg.solver.p,
        rows,
        slope: num / den,
        expected_slope: 3.0 - cfg.solver.p,
    })
}

/// Presolve-backed setup for transported-data variations: the inner boundary
/// is the `eps0` level of a presolve on a wider ring, and each variation
/// problem carries the data `u0(x/(1+t))` interpolated from the presolve.
pub struct TransportedSetup {
    pub presolve: ScalarField,
    pub inner: SupportFn,
    /// Inner-boundary nodes at the mesh rays.
    pub inner_nodes: Vec<Vec2>,
    pub eps0: f64,
}

pub fn transported_setup(cfg: &ExperimentConfig) -> Result<TransportedSetup> {
    let eps0 = match cfg.experiment.inner {
        InnerSpec::LevelSet(lv) => lv,
        InnerSpec::Scale(_) => {
            return Err(Error::InvalidProblem(
                "transported setup requires a level-set inner construction".into(),
            ))
        }
    };
    let k0 = cfg.bodies.k0.build()?;
    let pre_inner = k0.scale(cfg.experiment.presolve_scale);
    let pre = RingProblem::new(
        k0,
        pre_inner,
        cfg.solver.p,
        InnerData::Const(cfg.experiment.presolve_data),
        cfg.mesh_dims(),
    )?
    .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
    let presolve = pre.solve()?;

    let poly = presolve.level_set(eps0)?;
    let m_ang = cfg.mesh_dims().0;
    let fit_order = (m_ang / 8).clamp(8, 32);
    let inner = support_of_points(&poly, m_ang, fit_order, 1e-9)?.smoothed;
    let mut inner_nodes = Vec::with_capacity(m_ang);
    for i in 0..m_ang {
        let theta = TAU * i as f64 / m_ang as f64;
        inner_nodes.push(Vec2::unit(theta) * inner.radial(theta)?);
    }
    Ok(TransportedSetup {
        presolve,
        inner,
        inner_nodes,
        eps0,
    })
}

impl TransportedSetup {
    /// Transported inner data `u0(x/(1+t))` sampled at the mesh rays.
    pub fn data_at(&self, t: f64) -> Result<InnerData> {
        let mut vals = Vec::with_capacity(self.inner_nodes.len());
        for &x in &self.inner_nodes {
            let y = x * (1.0 / (1.0 + t));
            let v = self
                .presolve
                .value_at(y)
                .ok_or(Error::DataOutOfPresolveRange)?;
            vals.push(v);
        }
        Ok(InnerData::Sampled(vals))
    }

    /// `Γ(K^t)`: the functional of the solve on `K^t = K0 + t K'` with
    /// transported data.
    pub fn gamma(&self, cfg: &ExperimentConfig, outer_t: &SupportFn, t: f64) -> Result<f64> {
        let prob = RingProblem::new(
            outer_t.clone(),
            self.inner.clone(),
            cfg.solver.p,
            self.data_at(t)?,
            cfg.mesh_dims(),
        )?
        .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
        let field = prob.solve()?;
        Ok(functional_t(&field)?.t_direct)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HadamardReport {
    pub p: f64,
    /// Rows `(t, Γ(K^t), T(K_t) = Γ/(1+t)^(n-p+1))`.
    pub t_rows: Vec<(f64, f64, f64)>,
    /// Richardson central difference of `T(K_t)` at `t = 0`.
    pub lhs_derivative: f64,
    /// `(n-p+1) ∫ (h_K' - h_K0) dμ_K0` by spherical quadrature.
    pub rhs_quadrature: f64,
    pub rel_error: f64,
    /// Scaling-identity consistency errors for `K' = K0` and `K' = {0}`.
    pub special_identity_errors: Vec<(String, f64)>,
}

impl HadamardReport {
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "t,gamma,t_functional")?;
        for (t, g, tf) in &self.t_rows {
            writeln!(w, "{},{},{}", fmt(*t), fmt(*g), fmt(*tf))?;
        }
        Ok(())
    }
}

/// Hadamard variational check in transported semantics.
pub fn hadamard_check(cfg: &ExperimentConfig) -> Result<HadamardReport> {
    if cfg.experiment.semantics != Semantics::Transported {
        return Err(Error::InvalidProblem(
            "hadamard_check requires transported semantics".into(),
        ));
    }
    let k0 = cfg.bodies.k0.build()?;
    let kprime = cfg
        .bodies
        .kprime
        .as_ref()
        .ok_or_else(|| Error::Config("hadamard_check requires bodies.kprime".into()))?
        .build()?;
    let setup = transported_setup(cfg)?;
    let power = 3.0 - cfg.solver.p;
    let tau = cfg.experiment.tau;

    let ts = [-tau / 4.0, -tau / 8.0, 0.0, tau / 8.0, tau / 4.0];
    let gammas: Result<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            let outer_t = combine_signed(&k0, &kprime, 1.0, t, 0.25 * k0.kappa_floor())?;
            setup.gamma(cfg, &outer_t, t)
        })
        .collect();
    let gammas = gammas?;
    let t_rows: Vec<(f64, f64, f64)> = ts
        .iter()
        .zip(&gammas)
        .map(|(&t, &g)| (t, g, g / (1.0 + t).powf(power)))
        .collect();

    let tf = |k: usize| t_rows[k].2;
    let d_coarse = (tf(4) - tf(0)) / (tau / 2.0);
    let d_fine = (tf(3) - tf(1)) / (tau / 4.0);
    let lhs = (4.0 * d_fine - d_coarse) / 3.0;

    // RHS quadrature against the t = 0 measure.
    let data0 = setup.data_at(0.0)?;
    let prob0 = RingProblem::new(
        k0.clone(),
        setup.inner.clone(),
        cfg.solver.p,
        data0,
        cfg.mesh_dims(),
    )?
    .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
    let field0 = prob0.solve()?;
    let rhs = power * hadamard_rhs_integral(&field0, &k0, &kprime)?;
    let scale = t_rows[2].2.abs().max(1e-300);
    let rel_error = if rhs.abs() > 1e-12 * scale {
        (lhs - rhs).abs() / rhs.abs()
    } else {
        (lhs - rhs).abs() / scale
    };

    // Scaling-identity consistency for the degenerate directions.
    let rep0 = functional_t(&field0)?;
    let rhs_self = power * hadamard_rhs_integral(&field0, &k0, &k0)?;
    let rhs_point = power * hadamard_rhs_integral(&field0, &k0, &SupportFn::origin_point())?;
    let special = vec![
        // K' = K0: K_t = K0 identically, so dT/dt = 0 = RHS.
        ("kprime=k0".to_string(), (0.0f64 - rhs_self).abs()),
        // K' = {0}: T(K_t) = (1+t)^-(n-p+1) T(K0), so dT/dt = -(n-p+1) T(K0).
        (
            "kprime=point".to_string(),
            (-power * rep0.t_spherical - rhs_point).abs() / rep0.t_spherical,
        ),
    ];

    Ok(HadamardReport {
        p: cfg.solver.p,
        t_rows,
        lhs_derivative: lhs,
        rhs_quadrature: rhs,
        rel_error,
        special_identity_errors: special,
    })
}

/// `∫ (h_K' - h_K0) dμ_K0` through the spherical parameterization.
fn hadamard_rhs_integral(
    field0: &ScalarField,
    k0: &SupportFn,
    kprime: &SupportFn,
) -> Result<f64> {
    let mu = measure(field0)?;
    let m = mu.thetas.len();
    let dtheta = TAU / m as f64;
    let mut sum = 0.0;
    for j in 0..m {
        let theta = mu.thetas[j];
        sum += (kprime.h(theta) - k0.h(theta))
            * mu.densities[j]
            * k0.curvature_radius(theta)
            * dtheta;
    }
    Ok(sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub p: f64,
    /// `(R, T_numeric, T_closed_form)` along the thick dilate family.
    pub thick_rows: Vec<(f64, f64, f64)>,
    pub argmin_numeric: f64,
    pub stationary_closed: f64,
    /// Same triple along the thin family `R ∈ [0.9, 1.1]`, `r = 0.8`.
    pub thin_rows: Vec<(f64, f64, f64)>,
    pub thin_monotone_decreasing: bool,
    /// Min-form margins along the thin family against its endpoints.
    pub thin_min_margin: f64,
}

impl LocalityReport {
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "family,outer_radius,t_numeric,t_closed_form")?;
        for (r, tn, tc) in &self.thick_rows {
            writeln!(w, "thick,{},{},{}", fmt(*r), fmt(*tn), fmt(*tc))?;
        }
        for (r, tn, tc) in &self.thin_rows {
            writeln!(w, "thin,{},{},{}", fmt(*r), fmt(*tn), fmt(*tc))?;
        }
        Ok(())
    }
}

/// Sweep `T(R)` along annulus dilate families. The thick family exhibits an
/// interior minimum (closed form predicts the stationary radius); the thin
/// family is monotone with nonnegative min-form margins. The probe tabulates
/// and localizes, it does not assert.
pub fn locality_probe(cfg: &ExperimentConfig) -> Result<LocalityReport> {
    let p = cfg.solver.p;
    let eps0 = cfg.experiment.epsilon0;
    let r_in = cfg.experiment.locality_inner_radius;
    let [lo_mult, hi_mult] = cfg.experiment.locality_span;
    let n = cfg.experiment.locality_points.max(7);

    let solve_annulus = |big_r: f64| -> Result<f64> {
        let prob = RingProblem::new(
            SupportFn::ball(big_r)?,
            SupportFn::ball(r_in)?,
            p,
            InnerData::Const(eps0),
            cfg.mesh_dims(),
        )?
        .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
        Ok(functional_t(&prob.solve()?)?.t_direct)
    };

    let radii: Vec<f64> = (0..n)
        .map(|k| {
            let f = k as f64 / (n - 1) as f64;
            r_in * lo_mult * (hi_mult / lo_mult).powf(f)
        })
        .collect();
    let thick: Result<Vec<(f64, f64, f64)>> = radii
        .par_iter()
        .map(|&big_r| {
            Ok((
                big_r,
                solve_annulus(big_r)?,
                exact::functional_t_of_outer(r_in, big_r, p, eps0),
            ))
        })
        .collect();
    let thick = thick?;

    // Quadratic fit of log T against log R around the tabulated minimum.
    let min_idx = thick
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let lo = min_idx.saturating_sub(3);
    let hi = (min_idx + 3).min(thick.len() - 1);
    let argmin_numeric = fit_parabola_argmin(
        &thick[lo..=hi]
            .iter()
            .map(|(r, t, _)| (r.ln(), t.ln()))
            .collect::<Vec<_>>(),
    )
    .map(f64::exp)
    .unwrap_or(thick[min_idx].0);

    // Thin dilate family with fixed inner radius 0.8.
    let thin_inner = 0.8;
    let thin_radii: Vec<f64> = (0..9).map(|k| 0.9 + 0.2 * k as f64 / 8.0).collect();
    let thin_prob = |big_r: f64| -> Result<f64> {
        let prob = RingProblem::new(
            SupportFn::ball(big_r)?,
            SupportFn::ball(thin_inner)?,
            p,
            InnerData::Const(eps0),
            cfg.mesh_dims(),
        )?
        .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
        Ok(functional_t(&prob.solve()?)?.t_direct)
    };
    let thin: Result<Vec<(f64, f64, f64)>> = thin_radii
        .par_iter()
        .map(|&big_r| {
            Ok((
                big_r,
                thin_prob(big_r)?,
                exact::functional_t_of_outer(thin_inner, big_r, p, eps0),
            ))
        })
        .collect();
    let thin = thin?;
    let thin_monotone = thin.windows(2).all(|w| w[1].1 < w[0].1);
    let t_end = thin.first().unwrap().1.min(thin.last().unwrap().1);
    let thin_min_margin = thin
        .iter()
        .map(|(_, t, _)| t - t_end)
        .fold(f64::INFINITY, f64::min);

    Ok(LocalityReport {
        p,
        thick_rows: thick,
        argmin_numeric,
        stationary_closed: exact::stationary_outer_radius(r_in, p),
        thin_rows: thin,
        thin_monotone_decreasing: thin_monotone,
        thin_min_margin,
    })
}

/// Vertex of the least-squares parabola through `(x, y)` points.
fn fit_parabola_argmin(pts: &[(f64, f64)]) -> Option<f64> {
    let n = pts.len() as f64;
    if pts.len() < 3 {
        return None;
    }
    // Normal equations for y = a x² + b x + c.
    let (mut sx, mut sx2, mut sx3, mut sx4) = (0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut sxy, mut sx2y) = (0.0, 0.0, 0.0);
    for &(x, y) in pts {
        sx += x;
        sx2 += x * x;
        sx3 += x * x * x;
        sx4 += x * x * x * x;
        sy += y;
        sxy += x * y;
        sx2y += x * x * y;
    }
    let m = [[sx4, sx3, sx2], [sx3, sx2, sx], [sx2, sx, n]];
    let rhs = [sx2y, sxy, sy];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut ma = m;
    for r in 0..3 {
        ma[r][0] = rhs[r];
    }
    let a = det(&ma) / d;
    let mut mb = m;
    for r in 0..3 {
        mb[r][1] = rhs[r];
    }
    let b = det(&mb) / d;
    if a <= 0.0 {
        return None;
    }
    Some(-b / (2.0 * a))
}

/// A random C²⁺ body within the given Hausdorff radius of the unit disk; the
/// perturbation is rescaled deterministically when the draw is too large.
pub fn random_body_near_disk(seed: u64, max_hausdorff: f64) -> Result<SupportFn> {
    let body = random_body(seed, 6, 2.0, 0.6 * max_hausdorff)?;
    let disk = SupportFn::ball(1.0)?;
    let d = hausdorff(&body, &disk);
    if d <= max_hausdorff {
        return Ok(body);
    }
    let shrink = 0.98 * max_hausdorff / d;
    let series = body.series().combine(disk.series(), shrink, 1.0 - shrink);
    SupportFn::from_series(series, body.kappa_floor())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_config(p: f64, mesh: (usize, usize), semantics: &str, inner: &str) -> ExperimentConfig {
        let text = format!(
            r#"{{
            "bodies": {{"k0": {{"kind": "disk", "radius": 1.0}},
                        "kprime": {{"kind": "disk", "radius": 0.5}}}},
            "solver": {{"p": {p}, "mesh": {{"angular": {}, "radial": {}}}}},
            "experiment": {{"inner": {inner}, "semantics": "{semantics}"}},
            "output": {{"dir": "runs/test"}}
        }}"#,
            mesh.0, mesh.1
        );
        ExperimentConfig::from_json(&text).unwrap()
    }

    #[test]
    fn family_disk_algebra() {
        let cfg = test_config(2.5, (32, 16), "fixed-inner", r#"{"scale": 0.5}"#);
        let fam = family(&cfg).unwrap();
        for (t, body) in &fam {
            let expected = (1.0 + 0.5 * t) / (1.0 + t);
            assert!((body.h(0.7) - expected).abs() < 1e-14, "t={t}");
        }
        // hausdorff(K_t, K0) shrinks monotonically toward t = 0 on each side.
        let k0 = SupportFn::ball(1.0).unwrap();
        let dists: Vec<(f64, f64)> = fam.iter().map(|(t, b)| (*t, hausdorff(b, &k0))).collect();
        for w in dists.windows(2) {
            if w[1].0 <= 0.0 {
                assert!(w[1].1 <= w[0].1 + 1e-15);
            } else {
                assert!(w[1].1 >= w[0].1 - 1e-15);
            }
        }
    }

    #[test]
    fn family_degenerate_directions() {
        let mut cfg = test_config(2.5, (32, 16), "fixed-inner", r#"{"scale": 0.5}"#);
        cfg.bodies.kprime = Some(BodySpec::Point);
        for (t, body) in family(&cfg).unwrap() {
            assert!((body.h(1.1) - 1.0 / (1.0 + t)).abs() < 1e-14);
        }
        cfg.bodies.kprime = Some(BodySpec::Disk {
            radius: 1.0,
            center: [0.0, 0.0],
        });
        for (_, body) in family(&cfg).unwrap() {
            assert!((body.h(2.2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn family_rejects_broken_containment() {
        let cfg = test_config(2.5, (32, 16), "fixed-inner", r#"{"scale": 0.95}"#);
        // tau = 0.1 shrinks K_t to 1/(1+t) < 0.95 + margin on the dilation side.
        let mut cfg = cfg;
        cfg.bodies.kprime = Some(BodySpec::Point);
        assert!(matches!(
            family(&cfg),
            Err(Error::NeighborhoodTooLarge { .. })
        ));
    }

    #[test]
    fn bm_scan_margin_symmetry_and_idempotence() {
        let cfg = {
            let mut c = test_config(2.5, (48, 24), "fixed-inner", r#"{"scale": 0.8}"#);
            c.experiment.lambda_grid = vec![0.3, 0.7];
            c
        };
        let k1 = SupportFn::ball(0.98).unwrap();
        let k2 = SupportFn::ball(1.02).unwrap();
        let fwd = bm_min_check(&cfg, &k1, &k2).unwrap();
        let rev = bm_min_check(&cfg, &k2, &k1).unwrap();
        let f03 = fwd.rows.iter().find(|r| (r.lambda - 0.3).abs() < 1e-12).unwrap();
        let r07 = rev.rows.iter().find(|r| (r.lambda - 0.7).abs() < 1e-12).unwrap();
        assert!((f03.t_lambda - r07.t_lambda).abs() < 1e-10);

        let self_scan = bm_min_check(&cfg, &k1, &k1).unwrap();
        for row in &self_scan.rows {
            assert!(row.margin.abs() < 1e-10);
            assert!(row.concavity_defect.abs() < 1e-10);
        }
    }

    #[test]
    fn homogeneity_slope_on_disk_ring() {
        let mut cfg = test_config(2.5, (48, 24), "transported", r#"{"scale": 0.25}"#);
        cfg.experiment.epsilon0 = 1.0;
        let rep = homogeneity_check(&cfg, &[0.9, 1.1, 1.2, 2.0]).unwrap();
        assert!(
            (rep.slope - 0.5).abs() < 1e-3,
            "slope {} vs 0.5",
            rep.slope
        );
        // T(2·ring)/T(ring) = √2.
        let t1 = rep.rows.iter().find(|(l, _)| (l - 1.0).abs() < 1e-12).unwrap().1;
        let t2 = rep.rows.iter().find(|(l, _)| (l - 2.0).abs() < 1e-12).unwrap().1;
        assert!((t2 / t1 - 2f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn locality_parabola_fit() {
        let pts: Vec<(f64, f64)> = (-3..=3)
            .map(|k| {
                let x = k as f64 * 0.1;
                (x + 2.0, 3.0 * (x - 0.04) * (x - 0.04) + 1.0)
            })
            .collect();
        let argmin = fit_parabola_argmin(&pts).unwrap();
        assert!((argmin - 2.04).abs() < 1e-10);
    }

    #[test]
    fn random_bodies_respect_hausdorff_budget() {
        let disk = SupportFn::ball(1.0).unwrap();
        for seed in 0..20 {
            let b = random_body_near_disk(seed, 0.05).unwrap();
            assert!(hausdorff(&b, &disk) <= 0.05);
            assert!(b.min_curvature_radius() > 0.0);
        }
    }
}
