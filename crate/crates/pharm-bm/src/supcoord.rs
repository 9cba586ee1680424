//! Support coordinates of the sublevel-set family.
//!
//! For a solution `u` on a convex ring, each sublevel body `{u > t}` has a
//! support function `h(θ, t)`; rows in `θ` are smooth series (exact spectral
//! derivatives) and the `t` direction is differenced centrally. In these
//! coordinates the p-Laplacian reduces (n = 2) to
//!
//! `-Δ_p u = (-∂_t h)^-(p-1) · B`,  with
//! `B = 1/(h''+h) + (p-1)/(∂_t h)² · ((∂_θ ∂_t h)²/(h''+h) - ∂²_t h)`,
//!
//! so `B` vanishes on p-harmonic fields and is non-positive for supremal
//! convolutions of two such fields (the subsolution property that drives the
//! Brunn-Minkowski inequality).

use crate::convex::support_of_points;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::ring::ScalarField;
use crate::trig::TrigSeries;
use std::f64::consts::TAU;

/// Support function of the level family on a `θ × t` grid.
#[derive(Clone, Debug)]
pub struct SupportCoordTable {
    pub thetas: Vec<f64>,
    pub t_values: Vec<f64>,
    /// Fitted support series per level, outermost (`t` smallest) first.
    pub rows: Vec<TrigSeries>,
    /// Central-difference series `∂_t h` per level (one-sided at the ends).
    pub dt: Vec<TrigSeries>,
    /// Second differences `∂²_t h` per level.
    pub dtt: Vec<TrigSeries>,
    /// Inner Dirichlet datum of the source problem.
    pub eps0: f64,
}

impl SupportCoordTable {
    /// Assemble a table from per-level support rows on a uniform `t` grid.
    pub fn from_rows(
        thetas: Vec<f64>,
        t_values: Vec<f64>,
        rows: Vec<TrigSeries>,
        eps0: f64,
    ) -> Result<Self> {
        let n = t_values.len();
        if n < 4 || rows.len() != n {
            return Err(Error::InvalidProblem(
                "need at least 4 uniformly spaced levels".into(),
            ));
        }
        let dt_step = t_values[1] - t_values[0];
        for w in t_values.windows(2) {
            if ((w[1] - w[0]) - dt_step).abs() > 1e-12 * dt_step.abs() {
                return Err(Error::InvalidProblem("level grid must be uniform".into()));
            }
        }
        let mut dt = Vec::with_capacity(n);
        let mut dtt = Vec::with_capacity(n);
        for k in 0..n {
            let (d1, d2) = if k == 0 {
                (
                    rows[0]
                        .combine(&rows[1], -3.0, 4.0)
                        .combine(&rows[2], 1.0, -1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (2.0 * dt_step), 0.0),
                    rows[0]
                        .combine(&rows[1], 2.0, -5.0)
                        .combine(&rows[2], 1.0, 4.0)
                        .combine(&rows[3], 1.0, -1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (dt_step * dt_step), 0.0),
                )
            } else if k == n - 1 {
                (
                    rows[n - 1]
                        .combine(&rows[n - 2], 3.0, -4.0)
                        .combine(&rows[n - 3], 1.0, 1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (2.0 * dt_step), 0.0),
                    rows[n - 1]
                        .combine(&rows[n - 2], 2.0, -5.0)
                        .combine(&rows[n - 3], 1.0, 4.0)
                        .combine(&rows[n - 4], 1.0, -1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (dt_step * dt_step), 0.0),
                )
            } else {
                (
                    rows[k + 1]
                        .combine(&rows[k - 1], 1.0, -1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (2.0 * dt_step), 0.0),
                    rows[k + 1]
                        .combine(&rows[k], 1.0, -2.0)
                        .combine(&rows[k - 1], 1.0, 1.0)
                        .combine(&TrigSeries::constant(0.0), 1.0 / (dt_step * dt_step), 0.0),
                )
            };
            dt.push(d1);
            dtt.push(d2);
        }
        Ok(SupportCoordTable {
            thetas,
            t_values,
            rows,
            dt,
            dtt,
            eps0,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.t_values.len()
    }

    pub fn dt_step(&self) -> f64 {
        self.t_values[1] - self.t_values[0]
    }

    /// Worst violation of rowwise monotonicity (`h` strictly decreasing in
    /// `t` at each sampled angle); non-positive means all rows nest.
    pub fn max_monotonicity_violation(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for k in 0..self.n_levels() - 1 {
            for &theta in &self.thetas {
                worst = worst.max(self.rows[k + 1].eval(theta) - self.rows[k].eval(theta));
            }
        }
        worst
    }

    /// Largest `∂_t h` over the grid (must be negative: levels shrink).
    pub fn max_dt(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for d in &self.dt {
            for &theta in &self.thetas {
                worst = worst.max(d.eval(theta));
            }
        }
        worst
    }

    /// Smallest curvature radius `h'' + h` over the grid.
    pub fn min_curvature_radius(&self) -> f64 {
        let mut best = f64::INFINITY;
        for row in &self.rows {
            for &theta in &self.thetas {
                best = best.min(row.second_deriv(theta) + row.eval(theta));
            }
        }
        best
    }

    /// Boundary point of level `k` with outward normal angle `theta`.
    pub fn level_point(&self, k: usize, theta: f64) -> Vec2 {
        let h = self.rows[k].eval(theta);
        let dh = self.rows[k].deriv(theta);
        let (s, c) = theta.sin_cos();
        Vec2::new(h * c - dh * s, h * s + dh * c)
    }

    /// Residual grid of the p-Laplacian bracket on interior levels.
    pub fn p_laplace_residual(&self, p: f64) -> Result<ResidualGrid> {
        bracket_residuals(&self.thetas, &self.t_values, &self.rows, &self.dt, &self.dtt, p)
    }
}

/// The bracket `B` and the reconstructed `-Δ_p u` on interior grid rows.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ResidualGrid {
    /// Interior levels `t_1 .. t_{n-2}`.
    pub t_values: Vec<f64>,
    pub thetas: Vec<f64>,
    pub bracket: Vec<Vec<f64>>,
    pub reconstructed: Vec<Vec<f64>>,
    pub sup_abs_bracket: f64,
    /// Largest signed bracket value (for subsolution sign checks).
    pub max_bracket: f64,
}

fn bracket_residuals(
    thetas: &[f64],
    t_values: &[f64],
    rows: &[TrigSeries],
    dt: &[TrigSeries],
    dtt: &[TrigSeries],
    p: f64,
) -> Result<ResidualGrid> {
    let n = t_values.len();
    let mut bracket = Vec::with_capacity(n.saturating_sub(2));
    let mut reconstructed = Vec::with_capacity(n.saturating_sub(2));
    let mut sup_abs: f64 = 0.0;
    let mut max_signed = f64::NEG_INFINITY;
    for k in 1..n - 1 {
        let mut row_b = Vec::with_capacity(thetas.len());
        let mut row_r = Vec::with_capacity(thetas.len());
        for &theta in thetas {
            let m = rows[k].second_deriv(theta) + rows[k].eval(theta);
            let d1 = dt[k].eval(theta);
            if d1.abs() < 1e-8 {
                return Err(Error::SingularLevel);
            }
            let zq = dt[k].deriv(theta);
            let d2 = dtt[k].eval(theta);
            let b = 1.0 / m + (p - 1.0) / (d1 * d1) * (zq * zq / m - d2);
            row_b.push(b);
            row_r.push(b * (-d1).powf(-(p - 1.0)));
            sup_abs = sup_abs.max(b.abs());
            max_signed = max_signed.max(b);
        }
        bracket.push(row_b);
        reconstructed.push(row_r);
    }
    Ok(ResidualGrid {
        t_values: t_values[1..n - 1].to_vec(),
        thetas: thetas.to_vec(),
        bracket,
        reconstructed,
        sup_abs_bracket: sup_abs,
        max_bracket: max_signed,
    })
}

/// Build the level-family table of a converged field on uniform levels.
///
/// The `t = 0` row is encoded from the outer mesh boundary (its nodes lie on
/// `∂K` exactly); positive levels go through `level_set`. Every row is
/// support-encoded at `m_theta` directions and refit to a series of order
/// `fit_order`.
pub fn build_table(
    field: &ScalarField,
    t_values: &[f64],
    m_theta: usize,
    fit_order: usize,
) -> Result<SupportCoordTable> {
    let eps0 = field.problem().inner_data.max();
    if let Some(&last) = t_values.last() {
        if last > 0.5 * eps0 + 1e-12 {
            return Err(Error::LevelOutOfRange {
                level: last,
                max: 0.5 * eps0,
            });
        }
    }
    let mesh = field.mesh();
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let poly: Vec<Vec2> = if t == 0.0 {
            (0..mesh.m_ang)
                .map(|i| mesh.nodes[mesh.node_index(i, mesh.m_rad)])
                .collect()
        } else {
            field.level_set(t)?
        };
        let enc = support_of_points(&poly, m_theta, fit_order, 1e-9)?;
        rows.push(enc.smoothed.series().clone());
    }
    let thetas = (0..m_theta).map(|j| TAU * j as f64 / m_theta as f64).collect();
    SupportCoordTable::from_rows(thetas, t_values.to_vec(), rows, eps0)
}

/// Sup-norms of the three support-coordinate identities checked against the
/// field: `h = ⟨x, ν⟩`, `∇h(ν, t) = x`, and `∂_t h = -1/|∇u|`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityReport {
    pub support_residual: f64,
    pub gradient_residual: f64,
    pub dt_residual: f64,
}

pub fn support_identity_residuals(
    table: &SupportCoordTable,
    field: &ScalarField,
) -> Result<IdentityReport> {
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut r3: f64 = 0.0;
    let n = table.n_levels();
    for k in 1..n - 1 {
        for (i, &theta) in table.thetas.iter().enumerate() {
            if i % 2 != 0 {
                continue;
            }
            let x = table.level_point(k, theta);
            let grad = match field.grad_at(x) {
                Some(g) => g,
                None => continue,
            };
            let gnorm = grad.norm();
            if gnorm < 1e-12 {
                return Err(Error::SingularLevel);
            }
            let nu = -grad * (1.0 / gnorm);
            let tn = nu.angle();
            r1 = r1.max((table.rows[k].eval(tn) - x.dot(nu)).abs());
            r2 = r2.max((table.level_point(k, tn) - x).norm());
            r3 = r3.max((table.dt[k].eval(theta) + 1.0 / gnorm).abs());
        }
    }
    Ok(IdentityReport {
        support_residual: r1,
        gradient_residual: r2,
        dt_residual: r3,
    })
}

/// Supremal convolution of two level families: rowwise combination
/// `h* = (1-λ)h₁ + λh₂` with a membership oracle for `u*_λ`.
#[derive(Clone, Debug)]
pub struct SupConvField {
    pub lambda: f64,
    pub thetas: Vec<f64>,
    pub t_values: Vec<f64>,
    pub rows: Vec<TrigSeries>,
    /// Precomputed `h*(θ_i, t_k)` for the membership oracle.
    row_vals: Vec<Vec<f64>>,
    dirs: Vec<Vec2>,
    eps0: f64,
}

pub fn supremal_convolution(
    t1: &SupportCoordTable,
    t2: &SupportCoordTable,
    lambda: f64,
) -> Result<SupConvField> {
    assert!((0.0..=1.0).contains(&lambda));
    if t1.thetas.len() != t2.thetas.len()
        || t1.n_levels() != t2.n_levels()
        || (t1.eps0 - t2.eps0).abs() > 1e-12
    {
        return Err(Error::GridMismatch);
    }
    for (a, b) in t1.t_values.iter().zip(&t2.t_values) {
        if (a - b).abs() > 1e-12 {
            return Err(Error::GridMismatch);
        }
    }
    let rows: Vec<TrigSeries> = t1
        .rows
        .iter()
        .zip(&t2.rows)
        .map(|(a, b)| a.combine(b, 1.0 - lambda, lambda))
        .collect();
    let dirs: Vec<Vec2> = t1.thetas.iter().map(|&t| Vec2::unit(t)).collect();
    let row_vals: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| t1.thetas.iter().map(|&t| r.eval(t)).collect())
        .collect();
    Ok(SupConvField {
        lambda,
        thetas: t1.thetas.clone(),
        t_values: t1.t_values.clone(),
        rows,
        row_vals,
        dirs,
        eps0: t1.eps0,
    })
}

impl SupConvField {
    /// Signed membership gap of level `k` at `x`: ≤ 0 inside `{u* ≥ t_k}`.
    fn level_gap(&self, k: usize, x: Vec2) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (i, d) in self.dirs.iter().enumerate() {
            worst = worst.max(x.dot(*d) - self.row_vals[k][i]);
        }
        worst
    }

    /// `u*_λ(x) = max { t : x ∈ {u* ≥ t} }` with linear interpolation between
    /// bracketing levels; clamps to the table range.
    pub fn eval(&self, x: Vec2) -> f64 {
        let n = self.t_values.len();
        if self.level_gap(0, x) > 0.0 {
            return 0.0;
        }
        if self.level_gap(n - 1, x) <= 0.0 {
            return self.t_values[n - 1];
        }
        // gaps increase with k; find k with gap_k <= 0 < gap_{k+1}.
        let (mut lo, mut hi) = (0usize, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.level_gap(mid, x) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let glo = self.level_gap(lo, x);
        let ghi = self.level_gap(hi, x);
        let frac = if ghi - glo > 1e-300 { -glo / (ghi - glo) } else { 0.0 };
        self.t_values[lo] + frac * (self.t_values[hi] - self.t_values[lo])
    }

    pub fn table_max(&self) -> f64 {
        *self.t_values.last().unwrap()
    }

    /// Sign check of the bracket `B*` on the combined rows: non-positive up
    /// to discretization means `u*_λ` is a p-Laplace subsolution.
    pub fn sign_check(&self, p: f64) -> Result<ResidualGrid> {
        let table = SupportCoordTable::from_rows(
            self.thetas.clone(),
            self.t_values.clone(),
            self.rows.clone(),
            self.eps0,
        )?;
        bracket_residuals(&table.thetas, &table.t_values, &table.rows, &table.dt, &table.dtt, p)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SubsolutionReport {
    /// `max (u*_λ - u_{K_λ})` over accepted probes.
    pub max_violation: f64,
    /// `5 · max(h_mesh, Δt)` for the probed field and table.
    pub tol_discrete: f64,
    pub probes: usize,
}

/// Compare the supremal convolution against the solution on the combined
/// body at quasi-random ring points (a low-discrepancy lattice).
pub fn subsolution_compare(
    sc: &SupConvField,
    field: &ScalarField,
    n_probes: usize,
) -> Result<SubsolutionReport> {
    // 2-D Kronecker lattice driven by the plastic number.
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let prob = field.problem();
    let t_cap = 0.9 * sc.table_max();
    let mut max_violation = f64::NEG_INFINITY;
    let mut accepted = 0usize;
    let mut k = 0usize;
    while accepted < n_probes && k < 40 * n_probes {
        k += 1;
        let frac = |v: f64| v - v.floor();
        let theta = TAU * frac(A1 * k as f64);
        let s = 0.02 + 0.96 * frac(A2 * k as f64);
        let ri = prob.inner.radial(theta)?;
        let ro = prob.outer.radial(theta)?;
        let x = Vec2::unit(theta) * (ri + s * (ro - ri));
        let u_lam = match field.value_at(x) {
            Some(v) => v,
            None => continue,
        };
        if u_lam > t_cap {
            continue;
        }
        let u_star = sc.eval(x);
        max_violation = max_violation.max(u_star - u_lam);
        accepted += 1;
    }
    let tol_discrete = 5.0 * field.mesh().max_radial_spacing().max(sc.t_values[1] - sc.t_values[0]);
    Ok(SubsolutionReport {
        max_violation,
        tol_discrete,
        probes: accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::SupportFn;
    use crate::exact::Annulus;
    use crate::ring::{InnerData, RingProblem};

    fn annulus_field(p: f64, mesh: (usize, usize)) -> ScalarField {
        RingProblem::new(
            SupportFn::ball(1.0).unwrap(),
            SupportFn::ball(0.25).unwrap(),
            p,
            InnerData::Const(1.0),
            mesh,
        )
        .unwrap()
        .solve()
        .unwrap()
    }

    fn uniform_levels(n: usize, max: f64) -> Vec<f64> {
        (0..n).map(|k| max * k as f64 / (n - 1) as f64).collect()
    }

    /// Closed-form radial table: rows are constants ρ(t_k).
    fn radial_table(ann: &Annulus, n: usize, m_theta: usize) -> SupportCoordTable {
        let t_values = uniform_levels(n, 0.5 * ann.eps0);
        let rows = t_values
            .iter()
            .map(|&t| TrigSeries::constant(ann.level_radius(t)))
            .collect();
        let thetas = (0..m_theta).map(|j| TAU * j as f64 / m_theta as f64).collect();
        SupportCoordTable::from_rows(thetas, t_values, rows, ann.eps0).unwrap()
    }

    #[test]
    fn radial_bracket_vanishes_on_closed_form() {
        for p in [2.0, 2.5] {
            let ann = Annulus::new(0.25, 1.0, p, 1.0);
            let table = radial_table(&ann, 48, 32);
            let grid = table.p_laplace_residual(p).unwrap();
            // Only t-difference truncation remains; the rows are exact.
            assert!(grid.sup_abs_bracket < 2e-3, "p={p}: {}", grid.sup_abs_bracket);
        }
    }

    #[test]
    fn nonharmonic_profile_has_nonvanishing_bracket() {
        // Replace u by u²/eps0: levels of u² at t are levels of u at sqrt(t eps0).
        let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
        let t_values = uniform_levels(32, 0.5);
        let rows = t_values
            .iter()
            .map(|&t| TrigSeries::constant(ann.level_radius((t * ann.eps0).sqrt())))
            .collect();
        let thetas = (0..16).map(|j| TAU * j as f64 / 16.0).collect();
        let table = SupportCoordTable::from_rows(thetas, t_values, rows, 1.0).unwrap();
        let grid = table.p_laplace_residual(2.5).unwrap();
        let mut min_abs = f64::INFINITY;
        for row in &grid.bracket {
            for v in row {
                min_abs = min_abs.min(v.abs());
            }
        }
        assert!(min_abs > 0.05, "bracket should be bounded away from zero: {min_abs}");
    }

    #[test]
    fn built_table_matches_annulus_closed_form() {
        let field = annulus_field(2.5, (128, 96));
        let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
        let t_values = uniform_levels(16, 0.5);
        let table = build_table(&field, &t_values, 128, 12).unwrap();
        // h(θ, t) = ρ(t) independent of θ; t = 0 row matches the outer body.
        for (k, &t) in t_values.iter().enumerate() {
            let rho = ann.level_radius(t);
            for &theta in table.thetas.iter().step_by(8) {
                assert!((table.rows[k].eval(theta) - rho).abs() < 2e-3);
            }
        }
        let chord = 1.0 - (std::f64::consts::PI / 128.0).cos();
        for &theta in table.thetas.iter().step_by(8) {
            assert!((table.rows[0].eval(theta) - 1.0).abs() < 4.0 * chord + 1e-6);
        }
        // ∂_θ ∂_t h = 0 in the radial case.
        for k in 1..table.n_levels() - 1 {
            for &theta in table.thetas.iter().step_by(8) {
                assert!(table.dt[k].deriv(theta).abs() < 1e-3);
            }
        }
        assert!(table.max_monotonicity_violation() < 0.0);
        assert!(table.max_dt() < 0.0);
        assert!(table.min_curvature_radius() > 0.0);
    }

    #[test]
    fn identity_residuals_on_annulus() {
        let field = annulus_field(2.5, (128, 96));
        let t_values = uniform_levels(32, 0.5);
        let table = build_table(&field, &t_values, 128, 12).unwrap();
        let report = support_identity_residuals(&table, &field).unwrap();
        assert!(report.support_residual < 1e-2, "{report:?}");
        assert!(report.gradient_residual < 2e-2, "{report:?}");
        assert!(report.dt_residual < 1e-2, "{report:?}");
    }

    #[test]
    fn radial_supconv_matches_averaged_levels_and_is_subsolution() {
        // Concentric disks: outer radii 0.98 and 1.02, inner 0.8.
        let a1 = Annulus::new(0.8, 0.98, 2.5, 1.0);
        let a2 = Annulus::new(0.8, 1.02, 2.5, 1.0);
        let t1 = radial_table(&a1, 64, 32);
        let t2 = radial_table(&a2, 64, 32);
        let sc = supremal_convolution(&t1, &t2, 0.5).unwrap();

        // Level radii are the averages of the endpoint level radii.
        for (k, &t) in sc.t_values.iter().enumerate().step_by(8) {
            let expected = 0.5 * (a1.level_radius(t) + a2.level_radius(t));
            assert!((sc.rows[k].eval(0.3) - expected).abs() < 1e-12);
        }

        // u* ≤ u_{B_1} pointwise (radial probes, closed-form right side).
        let mid = Annulus::new(0.8, 1.0, 2.5, 1.0);
        let mut worst = f64::NEG_INFINITY;
        for j in 0..2000 {
            let rho = 0.805 + (1.0 - 0.81) * j as f64 / 1999.0;
            let u_star = sc.eval(Vec2::new(rho, 0.0));
            if u_star >= 0.9 * sc.table_max() {
                continue;
            }
            worst = worst.max(u_star - mid.u(rho));
        }
        assert!(worst <= 1e-3, "violation {worst}");

        // Sign of the bracket on the combined rows.
        let grid = sc.sign_check(2.5).unwrap();
        assert!(grid.max_bracket <= 5e-2, "B* max {}", grid.max_bracket);

        // Endpoint λ ∈ {0,1} reduces to the corresponding table (probes kept
        // inside the table range u < eps0/2).
        let sc0 = supremal_convolution(&t1, &t2, 0.0).unwrap();
        assert!((sc0.eval(Vec2::new(0.93, 0.0)) - a1.u(0.93)).abs() < 1e-3);
        let sc1 = supremal_convolution(&t1, &t2, 1.0).unwrap();
        assert!((sc1.eval(Vec2::new(0.95, 0.0)) - a2.u(0.95)).abs() < 1e-3);
    }

    #[test]
    fn idempotent_supconv_equals_endpoint_field() {
        let field = annulus_field(2.5, (64, 48));
        let t_values = uniform_levels(24, 0.5);
        let table = build_table(&field, &t_values, 64, 10).unwrap();
        let sc = supremal_convolution(&table, &table, 0.5).unwrap();
        let report = subsolution_compare(&sc, &field, 2000).unwrap();
        assert!(report.probes >= 1500);
        assert!(report.max_violation.abs() <= report.tol_discrete, "{report:?}");
    }

    #[test]
    fn grid_mismatch_detected() {
        let ann = Annulus::new(0.25, 1.0, 2.5, 1.0);
        let t1 = radial_table(&ann, 16, 32);
        let t2 = radial_table(&ann, 24, 32);
        assert!(matches!(
            supremal_convolution(&t1, &t2, 0.5),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn matrix_convexity_inequalities() {
        // Random SPD pairs: ⟨M_λ⁻¹ z_λ, z_λ⟩ and t_λ² tr(M_λ⁻¹) are convex.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let inv = |m: [[f64; 2]; 2]| {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            [
                [m[1][1] / det, -m[0][1] / det],
                [-m[1][0] / det, m[0][0] / det],
            ]
        };
        let quad = |m: [[f64; 2]; 2], z: [f64; 2]| {
            let mi = inv(m);
            z[0] * (mi[0][0] * z[0] + mi[0][1] * z[1]) + z[1] * (mi[1][0] * z[0] + mi[1][1] * z[1])
        };
        let trace_inv = |m: [[f64; 2]; 2]| {
            let mi = inv(m);
            mi[0][0] + mi[1][1]
        };
        let spd = |rng: &mut rand_chacha::ChaCha8Rng| {
            let g = [
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            ];
            // G^T G + 0.05 I
            [
                [g[0][0] * g[0][0] + g[1][0] * g[1][0] + 0.05, g[0][0] * g[0][1] + g[1][0] * g[1][1]],
                [g[0][0] * g[0][1] + g[1][0] * g[1][1], g[0][1] * g[0][1] + g[1][1] * g[1][1] + 0.05],
            ]
        };
        for _ in 0..1000 {
            let m1 = spd(&mut rng);
            let m2 = spd(&mut rng);
            let z1 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let z2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let t1: f64 = rng.gen_range(-2.0..2.0);
            let t2: f64 = rng.gen_range(-2.0..2.0);
            for lam in [0.25, 0.5, 0.75] {
                let ml = [
                    [
                        (1.0 - lam) * m1[0][0] + lam * m2[0][0],
                        (1.0 - lam) * m1[0][1] + lam * m2[0][1],
                    ],
                    [
                        (1.0 - lam) * m1[1][0] + lam * m2[1][0],
                        (1.0 - lam) * m1[1][1] + lam * m2[1][1],
                    ],
                ];
                let zl = [
                    (1.0 - lam) * z1[0] + lam * z2[0],
                    (1.0 - lam) * z1[1] + lam * z2[1],
                ];
                let tl = (1.0 - lam) * t1 + lam * t2;
                let lhs1 = quad(ml, zl);
                let rhs1 = (1.0 - lam) * quad(m1, z1) + lam * quad(m2, z2);
                assert!(lhs1 <= rhs1 + 1e-12, "{lhs1} vs {rhs1}");
                let lhs2 = tl * tl * trace_inv(ml);
                let rhs2 = (1.0 - lam) * t1 * t1 * trace_inv(m1) + lam * t2 * t2 * trace_inv(m2);
                assert!(lhs2 <= rhs2 + 1e-12, "{lhs2} vs {rhs2}");
            }
        }
        // Equality when the two triples coincide.
        let m = spd(&mut rng);
        let z = [0.3, -0.7];
        let t = 1.3;
        let lhs = quad(m, z);
        assert!((lhs - quad(m, z)).abs() <= 1e-15);
        let tr = t * t * trace_inv(m);
        assert!((tr - t * t * trace_inv(m)).abs() <= 1e-15);
    }
}
