//! Closed-form radial p-harmonic solutions on annuli.
//!
//! On the ring `r < |x| < R` with `u = eps0` on the inner circle and `u = 0`
//! on the outer circle, the p-harmonic solution is radial:
//!
//! - `p > 2`: `u(ρ) = eps0 (ρ^α - R^α)/(r^α - R^α)` with `α = (p-2)/(p-1)`;
//! - `p = 2`: `u(ρ) = eps0 ln(R/ρ)/ln(R/r)`.
//!
//! These are the independent oracles for the ring solver, the boundary
//! measures and the functional `T`; the stationary radius of `T` along the
//! dilate family backs the locality probe.

/// Exponent `α = (p-2)/(p-1)` of the radial p-harmonic profile.
pub fn radial_exponent(p: f64) -> f64 {
    (p - 2.0) / (p - 1.0)
}

fn is_linear_case(p: f64) -> bool {
    (p - 2.0).abs() < 1e-12
}

/// Closed-form data for the annulus Dirichlet problem.
#[derive(Clone, Copy, Debug)]
pub struct Annulus {
    pub r: f64,
    pub big_r: f64,
    pub p: f64,
    pub eps0: f64,
}

impl Annulus {
    pub fn new(r: f64, big_r: f64, p: f64, eps0: f64) -> Self {
        assert!(r > 0.0 && big_r > r && p >= 2.0 && p < 3.0 && eps0 > 0.0);
        Annulus { r, big_r, p, eps0 }
    }

    /// Solution value at radius `rho`.
    pub fn u(&self, rho: f64) -> f64 {
        if is_linear_case(self.p) {
            self.eps0 * (self.big_r / rho).ln() / (self.big_r / self.r).ln()
        } else {
            let a = radial_exponent(self.p);
            self.eps0 * (rho.powf(a) - self.big_r.powf(a)) / (self.r.powf(a) - self.big_r.powf(a))
        }
    }

    /// `|u'(ρ)|`.
    pub fn grad_abs(&self, rho: f64) -> f64 {
        if is_linear_case(self.p) {
            self.eps0 / (rho * (self.big_r / self.r).ln())
        } else {
            let a = radial_exponent(self.p);
            self.eps0 * a * rho.powf(a - 1.0) / (self.big_r.powf(a) - self.r.powf(a))
        }
    }

    /// Radius of the level set `{u = t}`.
    pub fn level_radius(&self, t: f64) -> f64 {
        assert!((0.0..=self.eps0).contains(&t));
        if is_linear_case(self.p) {
            self.big_r * (self.r / self.big_r).powf(t / self.eps0)
        } else {
            let a = radial_exponent(self.p);
            let ra = self.r.powf(a);
            let ba = self.big_r.powf(a);
            (ba + (t / self.eps0) * (ra - ba)).powf(1.0 / a)
        }
    }

    /// Total boundary-measure mass `∫_{∂B_R} |∇u|^{p-1} dH¹ = 2πR |u'(R)|^{p-1}`.
    pub fn mass(&self) -> f64 {
        std::f64::consts::TAU * self.big_r * self.grad_abs(self.big_r).powf(self.p - 1.0)
    }

    /// `T = ∫_{∂B_R} (h∘g) |∇u|^{p-1} dH¹ = R · mass` for an origin-centered
    /// annulus; reduces to `2π (eps0 α)^{p-1} R (R^α - r^α)^{-(p-1)}` for
    /// `p > 2` and to `2π R eps0 / ln(R/r)` for `p = 2`.
    pub fn functional_t(&self) -> f64 {
        self.big_r * self.mass()
    }
}

/// The closed-form `T(R)` of the dilate family at fixed inner radius.
pub fn functional_t_of_outer(r: f64, big_r: f64, p: f64, eps0: f64) -> f64 {
    Annulus::new(r, big_r, p, eps0).functional_t()
}

/// Stationary radius of `R ↦ T(R)`: `R* = r (3-p)^{-1/α}` for `2 < p < 3`
/// (e.g. `8r` at `p = 2.5`) and `R* = e·r` for `p = 2`.
pub fn stationary_outer_radius(r: f64, p: f64) -> f64 {
    if is_linear_case(p) {
        r * std::f64::consts::E
    } else {
        let a = radial_exponent(p);
        r * (3.0 - p).powf(-1.0 / a)
    }
}
