//! Planar convex bodies encoded by support functions.
//!
//! A body `K` is stored as a truncated trigonometric series for its support
//! function `h(θ) = max_{x∈K} ⟨x, (cos θ, sin θ)⟩`. Derivatives are exact in
//! the coefficients, Minkowski combination is coefficientwise, the inverse
//! Gauss map is `F(θ) = (h cos θ - h' sin θ, h sin θ + h' cos θ)`, and the
//! curvature radius of the boundary at normal angle `θ` is `h''(θ) + h(θ)`.

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Vec2};
use crate::trig::{extremum_on_circle, refine_extremum, TrigSeries, COARSE_SAMPLES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Default curvature-radius floor as a fraction of the mean width coefficient.
pub const DEFAULT_FLOOR_FRACTION: f64 = 0.05;

/// A C²⁺ convex body with the origin in its interior, represented by a
/// truncated support-function series. Validated at construction: the
/// curvature radius `h'' + h` stays above `kappa_floor` and `h > 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportFn {
    series: TrigSeries,
    kappa_floor: f64,
    min_radius: f64,
}

/// Boundary sample produced by [`SupportFn::gauss_points`].
#[derive(Clone, Copy, Debug)]
pub struct BodyPoint {
    /// Position `F(θ)` on the boundary.
    pub position: Vec2,
    /// Outward normal angle `θ ∈ [0, 2π)`.
    pub normal_angle: f64,
    /// Local surface element `(h'' + h)(θ) · Δθ`.
    pub arc_weight: f64,
}

/// Result of projecting an interior point onto the boundary.
#[derive(Clone, Copy, Debug)]
pub struct Projection {
    pub dist: f64,
    pub foot: Vec2,
    /// Normal angle of the supporting direction at the foot.
    pub normal_angle: f64,
}

impl SupportFn {
    /// Build a body from series coefficients, validating the C²⁺ condition
    /// (`min (h''+h) ≥ kappa_floor > 0`) and interior origin (`h > 0`).
    pub fn new(c0: f64, cos: Vec<f64>, sin: Vec<f64>, kappa_floor: f64) -> Result<Self> {
        Self::from_series(TrigSeries::new(c0, cos, sin), kappa_floor)
    }

    pub fn from_series(series: TrigSeries, kappa_floor: f64) -> Result<Self> {
        let (_, min_radius) = series.radius_series().global_min();
        if !(kappa_floor > 0.0) || min_radius < kappa_floor {
            return Err(Error::CurvatureFloorViolation {
                min_curvature: min_radius,
                floor: kappa_floor,
            });
        }
        let (_, min_h) = series.global_min();
        if min_h <= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        Ok(SupportFn {
            series,
            kappa_floor,
            min_radius,
        })
    }

    /// Same as [`SupportFn::new`] with the default floor `0.05 · c0`.
    pub fn with_default_floor(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::new(c0, cos, sin, DEFAULT_FLOOR_FRACTION * c0)
    }

    /// Disk of radius `r` centered at `c` (the center enters through the
    /// curvature-neutral `k = 1` coefficients).
    pub fn disk(r: f64, center: Vec2) -> Result<Self> {
        Self::new(r, vec![center.x], vec![center.y], DEFAULT_FLOOR_FRACTION * r)
    }

    /// Origin-centered disk.
    pub fn ball(r: f64) -> Result<Self> {
        Self::disk(r, Vec2::ZERO)
    }

    /// Axis-aligned ellipse with semi-axes `a, b`, projected onto a series of
    /// order `kmax` (the exact support function `√(a²cos²θ + b²sin²θ)` is
    /// analytic, so coefficients decay geometrically).
    pub fn ellipse(a: f64, b: f64, kmax: usize) -> Result<Self> {
        let m = (8 * kmax).next_power_of_two().max(512);
        let vals: Vec<f64> = (0..m)
            .map(|j| {
                let t = TAU * j as f64 / m as f64;
                let (s, c) = t.sin_cos();
                (a * a * c * c + b * b * s * s).sqrt()
            })
            .collect();
        let series = TrigSeries::fit_uniform(&vals, kmax);
        Self::from_series(series, DEFAULT_FLOOR_FRACTION * a.min(b))
    }

    /// The degenerate body `{0}` with `h ≡ 0`. Only valid as a combination
    /// operand (pure dilation direction); it is not a usable PDE domain.
    pub fn origin_point() -> Self {
        SupportFn {
            series: TrigSeries::constant(0.0),
            kappa_floor: 0.0,
            min_radius: 0.0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.min_radius <= 0.0
    }

    pub fn series(&self) -> &TrigSeries {
        &self.series
    }

    pub fn kappa_floor(&self) -> f64 {
        self.kappa_floor
    }

    /// Cached `min_θ (h'' + h)`.
    pub fn min_curvature_radius(&self) -> f64 {
        self.min_radius
    }

    /// `h`, `h'` or `h''` at `theta`, exactly from the coefficients.
    pub fn evaluate(&self, theta: f64, order: u8) -> f64 {
        match order {
            0 => self.series.eval(theta),
            1 => self.series.deriv(theta),
            2 => self.series.second_deriv(theta),
            _ => panic!("derivative order must be 0, 1 or 2"),
        }
    }

    #[inline]
    pub fn h(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    #[inline]
    pub fn dh(&self, theta: f64) -> f64 {
        self.series.deriv(theta)
    }

    /// Curvature radius `h''(θ) + h(θ)` of the boundary at normal angle `θ`.
    #[inline]
    pub fn curvature_radius(&self, theta: f64) -> f64 {
        self.series.second_deriv(theta) + self.series.eval(theta)
    }

    /// Inverse Gauss map: the boundary point with outward normal angle `θ`.
    #[inline]
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        let h = self.series.eval(theta);
        let dh = self.series.deriv(theta);
        let (s, c) = theta.sin_cos();
        Vec2::new(h * c - dh * s, h * s + dh * c)
    }

    /// Exact perimeter `∫ (h''+h) dθ = 2π c0`.
    pub fn perimeter(&self) -> f64 {
        TAU * self.series.c0
    }

    /// Diameter `max_θ (h(θ) + h(θ+π))`.
    pub fn diameter(&self) -> f64 {
        let f = |t: f64| self.h(t) + self.h(t + std::f64::consts::PI);
        let df = |t: f64| self.dh(t) + self.dh(t + std::f64::consts::PI);
        let (_, d) = extremum_on_circle(f, df, true);
        d
    }

    pub fn min_support(&self) -> f64 {
        self.series.global_min().1
    }

    /// Uniform Gauss-map parameterization with `m` points; the arc weights
    /// sum to the perimeter exactly for series of order `< m`.
    pub fn gauss_points(&self, m: usize) -> Vec<BodyPoint> {
        assert!(m >= 16, "need at least 16 boundary samples");
        let dtheta = TAU / m as f64;
        (0..m)
            .map(|j| {
                let theta = dtheta * j as f64;
                BodyPoint {
                    position: self.boundary_point(theta),
                    normal_angle: theta,
                    arc_weight: self.curvature_radius(theta) * dtheta,
                }
            })
            .collect()
    }

    /// Radial gauge: `ρ(ω) = min_{⟨ω,ξ⟩>0} h(ξ)/⟨ω,ξ⟩`, so that `ρ(ω)·ω`
    /// lies on the boundary. Dense scan plus derivative bisection.
    pub fn radial(&self, omega_angle: f64) -> Result<f64> {
        if self.min_support() <= 0.0 {
            return Err(Error::OriginNotInterior);
        }
        let phi = omega_angle;
        // Feasible window (ψ - φ) ∈ (-π/2, π/2); the objective blows up at
        // the edges, so a slightly shrunk window is safe.
        let half = std::f64::consts::FRAC_PI_2 - 1e-3;
        let f = |psi: f64| self.h(psi) / (psi - phi).cos();
        // Numerator of f'; same sign as f' on the window.
        let g = |psi: f64| self.dh(psi) * (psi - phi).cos() + self.h(psi) * (psi - phi).sin();
        let n = COARSE_SAMPLES;
        let mut best_j = 0;
        let mut best = f64::INFINITY;
        for j in 0..n {
            let psi = phi - half + 2.0 * half * j as f64 / (n - 1) as f64;
            let v = f(psi);
            if v < best {
                best = v;
                best_j = j;
            }
        }
        let step = 2.0 * half / (n - 1) as f64;
        let center = phi - half + step * best_j as f64;
        let (_, v) = refine_extremum(&f, &g, center - step, center + step, false);
        Ok(v.min(best))
    }

    /// Distance from a strictly interior point to the boundary, with the foot
    /// of the projection and the supporting normal direction.
    ///
    /// `dist = min_ξ (h(ξ) - ⟨x, ξ⟩)` over unit directions; at the optimum
    /// the foot is `x + dist·ξ*`.
    pub fn distance_to_boundary(&self, x: Vec2) -> Result<Projection> {
        let f = |t: f64| self.h(t) - x.dot(Vec2::unit(t));
        let df = |t: f64| self.dh(t) + x.x * t.sin() - x.y * t.cos();
        let (theta, dist) = extremum_on_circle(f, df, false);
        if dist <= 0.0 {
            return Err(Error::NotInterior);
        }
        let xi = Vec2::unit(theta);
        Ok(Projection {
            dist,
            foot: x + xi * dist,
            normal_angle: normalize_angle(theta),
        })
    }

    /// Scale the body by `s ≥ 0`.
    pub fn scale(&self, s: f64) -> SupportFn {
        assert!(s >= 0.0);
        if s == 0.0 || self.is_degenerate() {
            return SupportFn::origin_point();
        }
        SupportFn {
            series: self.series.combine(&TrigSeries::constant(0.0), s, 0.0),
            kappa_floor: self.kappa_floor * s,
            min_radius: self.min_radius * s,
        }
    }

    /// Serialize the coefficients as a flat text block: first line `c0`, then
    /// one `a_k b_k` pair per line.
    pub fn to_coefficient_text(&self) -> String {
        let mut out = format!("{:.17e}\n", self.series.c0);
        for k in 0..self.series.order() {
            out.push_str(&format!(
                "{:.17e} {:.17e}\n",
                self.series.cos[k], self.series.sin[k]
            ));
        }
        out
    }

    pub fn from_coefficient_text(text: &str, kappa_floor: f64) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let c0: f64 = lines
            .next()
            .ok_or_else(|| Error::Config("empty coefficient file".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Config(format!("bad c0: {e}")))?;
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let a: f64 = it
                .next()
                .ok_or_else(|| Error::Config("missing cosine coefficient".into()))?
                .parse()
                .map_err(|e| Error::Config(format!("bad coefficient: {e}")))?;
            let b: f64 = it
                .next()
                .unwrap_or("0")
                .parse()
                .map_err(|e| Error::Config(format!("bad coefficient: {e}")))?;
            cos.push(a);
            sin.push(b);
        }
        Self::new(c0, cos, sin, kappa_floor)
    }
}

/// Coefficientwise Minkowski combination `α·K1 + β·K2`; the result is
/// revalidated against the stricter of the two curvature floors (scaled).
pub fn minkowski_combine(h1: &SupportFn, h2: &SupportFn, alpha: f64, beta: f64) -> Result<SupportFn> {
    assert!(alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0);
    let series = h1.series.combine(&h2.series, alpha, beta);
    let floor = (alpha * h1.kappa_floor + beta * h2.kappa_floor).max(1e-12);
    SupportFn::from_series(series, floor)
}

/// Signed combination `α·h1 + β·h2` used by neighborhood families where
/// `β` may be negative; validated against `floor`.
pub fn combine_signed(
    h1: &SupportFn,
    h2: &SupportFn,
    alpha: f64,
    beta: f64,
    floor: f64,
) -> Result<SupportFn> {
    SupportFn::from_series(h1.series.combine(&h2.series, alpha, beta), floor)
}

/// Hausdorff distance `sup_θ |h1 - h2|`, exact for the series difference up
/// to refinement tolerance (≤ 1e-10 absolute).
pub fn hausdorff(h1: &SupportFn, h2: &SupportFn) -> f64 {
    let diff = h1.series.combine(&h2.series, 1.0, -1.0);
    let (_, max) = diff.global_max();
    let (_, min) = diff.global_min();
    max.abs().max(min.abs())
}

/// Deterministic random C²⁺ body: `h = 1 + Σ_{k=2..kmax} (a_k cos kθ + b_k sin kθ)`
/// with coefficients uniform in `±amplitude·k^(-decay)`, redrawn until the
/// curvature floor is met. `k = 1` terms are excluded (pure translations), so
/// the Steiner point stays at the origin.
pub fn random_body(seed: u64, kmax: usize, decay: f64, amplitude: f64) -> Result<SupportFn> {
    assert!(decay > 1.0, "decay must exceed 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floor = DEFAULT_FLOOR_FRACTION;
    for _ in 0..1000 {
        let mut cos = vec![0.0; kmax];
        let mut sin = vec![0.0; kmax];
        for k in 2..=kmax {
            let bound = amplitude * (k as f64).powf(-decay);
            cos[k - 1] = rng.gen_range(-bound..=bound);
            sin[k - 1] = rng.gen_range(-bound..=bound);
        }
        if let Ok(body) = SupportFn::new(1.0, cos, sin, floor) {
            return Ok(body);
        }
    }
    Err(Error::GenerationFailed { attempts: 1000 })
}

/// Support samples of a finite point set together with a smoothed series fit.
#[derive(Clone, Debug)]
pub struct SupportSamples {
    /// Sample angles `θ_j = 2πj/m`.
    pub thetas: Vec<f64>,
    /// `h(θ_j) = max_i ⟨x_i, ξ_j⟩`.
    pub values: Vec<f64>,
    /// Least-squares series fit with curvature-floor projection.
    pub smoothed: SupportFn,
}

/// Discrete support function of a point set: `h(θ_j) = max_i ⟨x_i, ξ_j⟩` at
/// `m` uniform directions, plus a smoothed fit of order `fit_order`.
///
/// The fit shrinks the `k ≥ 2` coefficients toward the Steiner ball just
/// enough to restore `min (h''+h) ≥ floor`; `k ≤ 1` terms (mean width and
/// translation) are curvature-neutral and kept as fitted.
pub fn support_of_points(
    points: &[Vec2],
    m: usize,
    fit_order: usize,
    floor: f64,
) -> Result<SupportSamples> {
    if points.len() < 3 {
        return Err(Error::DegenerateSet);
    }
    // Collinearity: all cross products relative to the first edge vanish.
    let base = points[0];
    let dir = points.iter().skip(1).map(|&p| p - base).find(|d| d.norm() > 1e-14);
    let collinear = match dir {
        None => true,
        Some(d) => points
            .iter()
            .all(|&p| (p - base).cross(d).abs() <= 1e-12 * (1.0 + d.norm() * (p - base).norm())),
    };
    if collinear {
        return Err(Error::DegenerateSet);
    }

    let thetas: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
    let values: Vec<f64> = thetas
        .iter()
        .map(|&t| {
            let xi = Vec2::unit(t);
            points.iter().map(|&p| p.dot(xi)).fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();

    let fitted = TrigSeries::fit_uniform(&values, fit_order);
    let smoothed = project_to_curvature_floor(fitted, floor)?;
    Ok(SupportSamples {
        thetas,
        values,
        smoothed,
    })
}

/// Shrink the `k ≥ 2` part of a fitted series until `min(h''+h) ≥ floor`.
fn project_to_curvature_floor(series: TrigSeries, floor: f64) -> Result<SupportFn> {
    if let Ok(ok) = SupportFn::from_series(series.clone(), floor) {
        return Ok(ok);
    }
    // Split off the curvature-neutral part (c0 and k=1 terms).
    let c0 = series.c0;
    let mut high = series.clone();
    high.c0 = 0.0;
    if !high.cos.is_empty() {
        high.cos[0] = 0.0;
        high.sin[0] = 0.0;
    }
    // min over θ of (c0 + γ s(θ)) = c0 + γ min s for γ ≥ 0, where s is the
    // curvature-radius series of the k ≥ 2 part. Target slightly above the
    // floor so revalidation cannot fail on rounding.
    let (_, min_s) = high.radius_series().global_min();
    let target = floor + (1e-9 * c0.abs()).max(1e-12);
    if c0 <= target {
        return Err(Error::CurvatureFloorViolation {
            min_curvature: c0 + min_s.min(0.0),
            floor,
        });
    }
    let gamma = if min_s < 0.0 {
        ((c0 - target) / (-min_s)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let mut projected = series;
    for k in 1..projected.order() {
        projected.cos[k] *= gamma;
        projected.sin[k] *= gamma;
    }
    SupportFn::from_series(projected, floor)
}

/// Quadrature of `∫_{S¹} ⟨a,ω⟩⟨ω,b⟩ dH¹(ω)` with `n` trapezoid points. The
/// exact value is `π ⟨a,b⟩`; the rank-one Rayleigh bounds place it in
/// `[0, 2π⟨a,b⟩]` when `⟨a,b⟩ ≥ 0` and mirrored otherwise.
pub fn rank_one_sphere_quadrature(a: Vec2, b: Vec2, n: usize) -> f64 {
    let mut sum = 0.0;
    for j in 0..n {
        let w = Vec2::unit(TAU * j as f64 / n as f64);
        sum += a.dot(w) * w.dot(b);
    }
    sum * TAU / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_disk() -> SupportFn {
        SupportFn::ball(1.0).unwrap()
    }

    #[test]
    fn disk_support_is_radius_plus_center_term() {
        let c = Vec2::new(0.2, -0.1);
        let k = SupportFn::disk(1.0, c).unwrap();
        for t in [0.0, 0.7, 2.0, 5.0] {
            let expected = c.dot(Vec2::unit(t)) + 1.0;
            assert!((k.h(t) - expected).abs() < 1e-15);
        }
        assert!((unit_disk().h(1.234) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_law_vertex_value() {
        // Exact law h(θ) = |cos θ| + |sin θ| for [-1,1]²; the vertex direction
        // attains √2. The law itself is the oracle here.
        let square_h = |t: f64| t.cos().abs() + t.sin().abs();
        assert!((square_h(std::f64::consts::FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn series_curvature_example() {
        let k = SupportFn::with_default_floor(1.0, vec![0.0, 0.05], vec![]).unwrap();
        assert!((k.curvature_radius(0.0) - 0.85).abs() < 1e-14);
    }

    #[test]
    fn minkowski_combination_of_disks() {
        let a = SupportFn::ball(1.0).unwrap();
        let b = SupportFn::ball(2.5).unwrap();
        let sum = minkowski_combine(&a, &b, 1.0, 1.0).unwrap();
        assert!((sum.h(0.3) - 3.5).abs() < 1e-15);
        // Idempotence of the convex combination.
        let k = random_body(11, 5, 2.0, 0.05).unwrap();
        let same = minkowski_combine(&k, &k, 0.3, 0.7).unwrap();
        assert!(hausdorff(&k, &same) < 1e-14);
    }

    #[test]
    fn combined_series_matches_pointwise_sum() {
        let disk = unit_disk();
        let ell = SupportFn::ellipse(1.5, 1.0, 32).unwrap();
        let sum = minkowski_combine(&disk, &ell, 1.0, 1.0).unwrap();
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            assert!((sum.h(t) - (disk.h(t) + ell.h(t))).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_points_on_disk_and_ellipse() {
        let pts = unit_disk().gauss_points(64);
        let total: f64 = pts.iter().map(|p| p.arc_weight).sum();
        assert!((total - TAU).abs() < 1e-12);
        for p in &pts {
            assert!((p.position.norm() - 1.0).abs() < 1e-13);
        }

        let ell = SupportFn::ellipse(2.0, 1.0, 48).unwrap();
        let f0 = ell.boundary_point(0.0);
        assert!((f0.x - 2.0).abs() < 1e-8 && f0.y.abs() < 1e-8);
    }

    #[test]
    fn perturbed_disk_perimeter_is_exact() {
        let k = SupportFn::with_default_floor(1.0, vec![0.0, 0.05], vec![]).unwrap();
        let pts = k.gauss_points(256);
        let total: f64 = pts.iter().map(|p| p.arc_weight).sum();
        // ∫ (h''+h) dθ = 2π: the cos 2θ term integrates to zero, and the
        // 256-point trapezoid rule is exact on it.
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn gauss_consistency_identity() {
        let k = random_body(3, 6, 2.0, 0.08).unwrap();
        for p in k.gauss_points(128) {
            let nu = Vec2::unit(p.normal_angle);
            assert!((k.h(p.normal_angle) - p.position.dot(nu)).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_gauge_examples() {
        let d = unit_disk();
        for t in [0.0, 1.0, 3.9] {
            assert!((d.radial(t).unwrap() - 1.0).abs() < 1e-10);
        }
        let ell = SupportFn::ellipse(2.0, 1.0, 48).unwrap();
        assert!((ell.radial(0.0).unwrap() - 2.0).abs() < 1e-7);

        // Square via the exact law, evaluated by brute force: ρ(45°) = √2.
        let square_h = |t: f64| t.cos().abs() + t.sin().abs();
        let phi = std::f64::consts::FRAC_PI_4;
        let mut best = f64::INFINITY;
        for j in 0..1_000_000 {
            let psi = phi - 1.5 + 3.0 * j as f64 / 999_999.0;
            let c = (psi - phi).cos();
            if c > 1e-6 {
                best = best.min(square_h(psi) / c);
            }
        }
        assert!((best - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn projection_on_disk_and_ellipse() {
        let d = unit_disk();
        let p = d.distance_to_boundary(Vec2::new(0.3, 0.4)).unwrap();
        assert!((p.dist - 0.5).abs() < 1e-12);
        assert!((p.foot.x - 0.6).abs() < 1e-10 && (p.foot.y - 0.8).abs() < 1e-10);
        assert!((d.distance_to_boundary(Vec2::ZERO).unwrap().dist - 1.0).abs() < 1e-12);

        let ell = SupportFn::ellipse(2.0, 1.0, 48).unwrap();
        let q = ell.distance_to_boundary(Vec2::new(1.5, 0.0)).unwrap();
        assert!((q.dist - 0.5).abs() < 1e-7);
        assert!((q.foot.x - 2.0).abs() < 1e-6 && q.foot.y.abs() < 1e-6);

        // Brute-force oracle over a dense angle grid.
        let x = Vec2::new(1.5, 0.0);
        let mut brute = f64::INFINITY;
        for j in 0..1_000_000 {
            let t = TAU * j as f64 / 1e6;
            brute = brute.min(ell.h(t) - x.dot(Vec2::unit(t)));
        }
        assert!((q.dist - brute).abs() < 1e-9);

        assert!(matches!(
            d.distance_to_boundary(Vec2::new(1.5, 0.0)),
            Err(Error::NotInterior)
        ));
    }

    #[test]
    fn projection_variational_inequality() {
        // ⟨x - foot, v⟩ ≤ 1e-9 for tangent directions v at the foot.
        let k = random_body(17, 6, 2.0, 0.08).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let t = rng.gen_range(0.0..TAU);
            let r = rng.gen_range(0.0..0.8) * k.radial(t).unwrap();
            let x = Vec2::unit(t) * r;
            let proj = k.distance_to_boundary(x).unwrap();
            let tangent = Vec2::unit(proj.normal_angle).perp();
            for i in 0..100 {
                let v = tangent * if i % 2 == 0 { 1.0 } else { -1.0 };
                assert!((x - proj.foot).dot(v) <= 1e-9);
            }
        }
    }

    #[test]
    fn hausdorff_examples() {
        let a = unit_disk();
        let b = SupportFn::disk(1.0, Vec2::new(0.3, 0.0)).unwrap();
        assert!((hausdorff(&a, &b) - 0.3).abs() < 1e-12);
        let c = SupportFn::ball(1.7).unwrap();
        assert!((hausdorff(&a, &c) - 0.7).abs() < 1e-12);
        let d = SupportFn::with_default_floor(1.0, vec![0.0, 0.05], vec![]).unwrap();
        assert!((hausdorff(&a, &d) - 0.05).abs() < 1e-10);
    }

    #[test]
    fn random_body_acceptance_thresholds() {
        // amplitude 0 is the unit disk
        let k = random_body(5, 4, 2.0, 0.0).unwrap();
        assert!(hausdorff(&k, &unit_disk()) < 1e-15);
        // single a2 = 0.05 gives min curvature radius 1 - 3·0.05 = 0.85
        let ok = SupportFn::new(1.0, vec![0.0, 0.05], vec![], 0.1).unwrap();
        assert!((ok.min_curvature_radius() - 0.85).abs() < 1e-12);
        // a2 = 0.4 gives 1 - 1.2 < 0: rejected
        assert!(SupportFn::new(1.0, vec![0.0, 0.4], vec![], 0.1).is_err());
    }

    #[test]
    fn support_of_points_square_and_circle() {
        let square = [
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
        ];
        let s = support_of_points(&square, 64, 8, 1e-6).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        assert!((s.values[8] - 2f64.sqrt()).abs() < 1e-14); // θ = π/4 at j = 8

        let circle: Vec<Vec2> = (0..360).map(|j| Vec2::unit(TAU * j as f64 / 360.0)).collect();
        let c = support_of_points(&circle, 256, 8, 1e-6).unwrap();
        for v in &c.values {
            assert!((v - 1.0).abs() <= 1.6e-4); // chord error bound
        }

        let line: Vec<Vec2> = (0..5).map(|j| Vec2::new(j as f64, 2.0 * j as f64)).collect();
        assert!(matches!(support_of_points(&line, 32, 4, 1e-6), Err(Error::DegenerateSet)));
    }

    #[test]
    fn support_of_minkowski_sum_of_sampled_bodies() {
        let k1 = random_body(21, 5, 2.0, 0.06).unwrap();
        let k2 = random_body(22, 5, 2.0, 0.06).unwrap();
        let m = 256;
        let pts1: Vec<Vec2> = k1.gauss_points(m).iter().map(|p| p.position).collect();
        let pts2: Vec<Vec2> = k2.gauss_points(m).iter().map(|p| p.position).collect();
        let mut sum_pts = Vec::with_capacity(m);
        for j in 0..m {
            sum_pts.push(pts1[j] + pts2[j]); // common normal angle ⇒ boundary of the sum
        }
        let s_sum = support_of_points(&sum_pts, m, 8, 1e-6).unwrap();
        let s1 = support_of_points(&pts1, m, 8, 1e-6).unwrap();
        let s2 = support_of_points(&pts2, m, 8, 1e-6).unwrap();
        let chord = 1.0 - (std::f64::consts::PI / m as f64).cos();
        for j in 0..m {
            let d = (s_sum.values[j] - s1.values[j] - s2.values[j]).abs();
            assert!(d <= 2.0 * chord * 3.0 + 1e-12, "defect {d}");
        }
    }

    #[test]
    fn sublinearity_of_homogeneous_extension() {
        let k = random_body(7, 6, 2.0, 0.08).unwrap();
        let ext = |v: Vec2| v.norm() * k.h(v.angle());
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for _ in 0..1000 {
            let xi = Vec2::unit(rng.gen_range(0.0..TAU));
            let zeta = Vec2::unit(rng.gen_range(0.0..TAU));
            if (xi + zeta).norm() < 1e-9 {
                continue;
            }
            assert!(ext(xi + zeta) <= k.h(xi.angle()) + k.h(zeta.angle()) + 1e-12);
        }
    }

    #[test]
    fn minkowski_additivity_against_samples() {
        let k1 = random_body(31, 6, 2.0, 0.07).unwrap();
        let k2 = random_body(32, 6, 2.0, 0.07).unwrap();
        let sum = minkowski_combine(&k1, &k2, 1.0, 1.0).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..512 {
            let t = TAU * j as f64 / 512.0;
            worst = worst.max((sum.h(t) - k1.h(t) - k2.h(t)).abs());
        }
        assert!(worst <= 1e-10);
    }

    #[test]
    fn curvature_decreases_under_minkowski_addition() {
        let k1 = random_body(41, 6, 2.0, 0.07).unwrap();
        let k2 = random_body(42, 6, 2.0, 0.07).unwrap();
        for j in 0..256 {
            let t = TAU * j as f64 / 256.0;
            let r1 = k1.curvature_radius(t);
            let r2 = k2.curvature_radius(t);
            let k_sum = 1.0 / (r1 + r2);
            assert!(k_sum <= (1.0 / r1).min(1.0 / r2) + 1e-15);
            assert!(k_sum <= 1.0 / r1 + 1.0 / r2 + 1e-15);
        }
    }

    #[test]
    fn rank_one_rayleigh_bounds() {
        // Spot value: a = b = e1 gives ∫ cos²θ dθ = π.
        let e1 = Vec2::new(1.0, 0.0);
        let spot = rank_one_sphere_quadrature(e1, e1, 10_000);
        assert!((spot - std::f64::consts::PI).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let q = rank_one_sphere_quadrature(a, b, 10_000);
            let ab = a.dot(b);
            if ab >= 0.0 {
                assert!(q >= -1e-9 && q <= TAU * ab + 1e-9);
            } else {
                assert!(q <= 1e-9 && q >= TAU * ab - 1e-9);
            }
        }
    }

    #[test]
    fn coefficient_text_round_trip() {
        let k = random_body(55, 6, 2.0, 0.08).unwrap();
        let text = k.to_coefficient_text();
        let back = SupportFn::from_coefficient_text(&text, k.kappa_floor()).unwrap();
        assert!(hausdorff(&k, &back) < 1e-15);
    }
}
