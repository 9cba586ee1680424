//! Converged discrete solutions: interpolation, boundary gradients, level
//! sets and the sublevel restart identity.

use super::mesh::RingMesh;
use super::{InnerData, RingProblem};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Outer,
    Inner,
}

/// Boundary gradient samples at Gauss angles of the chosen boundary.
#[derive(Clone, Debug)]
pub struct BoundaryGradient {
    pub side: Side,
    /// Normal angles `θ_j = 2πj/M`.
    pub thetas: Vec<f64>,
    /// Offset-ratio estimate with Richardson extrapolation (primary).
    pub grad: Vec<f64>,
    /// Raw element-gradient estimate near the boundary (cross-check).
    pub grad_element: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SublevelRestartReport {
    pub level: f64,
    /// `max |u_fresh - (u - t)/(1 - t/eps0)|` over fresh-mesh nodes.
    pub max_discrepancy: f64,
}

#[derive(Clone, Debug)]
pub struct ScalarField {
    prob: RingProblem,
    mesh: RingMesh,
    u: Vec<f64>,
    tri_grads: Vec<Vec2>,
    min_tri_grad: f64,
    converged_grad_norm: f64,
}

impl ScalarField {
    pub(crate) fn new(
        prob: RingProblem,
        mesh: RingMesh,
        u: Vec<f64>,
        tri_grads: Vec<Vec2>,
        min_tri_grad: f64,
        converged_grad_norm: f64,
    ) -> Self {
        ScalarField {
            prob,
            mesh,
            u,
            tri_grads,
            min_tri_grad,
            converged_grad_norm,
        }
    }

    pub fn problem(&self) -> &RingProblem {
        &self.prob
    }

    pub fn mesh(&self) -> &RingMesh {
        &self.mesh
    }

    pub fn nodal_values(&self) -> &[f64] {
        &self.u
    }

    pub fn node_value(&self, i: usize, j: usize) -> f64 {
        self.u[self.mesh.node_index(i, j)]
    }

    /// Smallest element gradient magnitude; reported rather than assumed
    /// positive (thick rings can develop small-gradient elements).
    pub fn min_element_gradient(&self) -> f64 {
        self.min_tri_grad
    }

    pub fn converged_gradient_norm(&self) -> f64 {
        self.converged_grad_norm
    }

    pub fn max_value(&self) -> f64 {
        self.u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.u.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Interpolated value at an arbitrary ring point.
    pub fn value_at(&self, x: Vec2) -> Option<f64> {
        let (ti, bary) = self.mesh.locate(x)?;
        let t = self.mesh.tris[ti];
        Some(self.u[t[0]] * bary[0] + self.u[t[1]] * bary[1] + self.u[t[2]] * bary[2])
    }

    /// Area-weighted gradient of a whole quad column cell.
    fn quad_grad(&self, i: usize, j: usize) -> Vec2 {
        let quad = j * self.mesh.m_ang + (i % self.mesh.m_ang);
        let (t0, t1) = (2 * quad, 2 * quad + 1);
        let (a0, a1) = (self.mesh.tri_areas[t0], self.mesh.tri_areas[t1]);
        (self.tri_grads[t0] * a0 + self.tri_grads[t1] * a1) * (1.0 / (a0 + a1))
    }

    /// Recovered gradient at `x`: quad-averaged gradients blended in angle
    /// between the two columns whose mid-rays bracket `x` (a quad gradient
    /// is centered on its mid-angle, so the blend removes the half-cell
    /// angular bias at ray-aligned points).
    pub fn grad_at(&self, x: Vec2) -> Option<Vec2> {
        let (ti, _) = self.mesh.locate(x)?;
        let quad = ti / 2;
        let m = self.mesh.m_ang;
        let i = quad % m;
        let j = quad / m;
        let dtheta = TAU / m as f64;
        let mid = (i as f64 + 0.5) * dtheta;
        let mut off = x.angle() - mid;
        if off > std::f64::consts::PI {
            off -= TAU;
        }
        if off < -std::f64::consts::PI {
            off += TAU;
        }
        let w = (off / dtheta).clamp(-0.5, 0.5);
        let g_here = self.quad_grad(i, j);
        let neighbor = if w >= 0.0 { i + 1 } else { i + m - 1 };
        let g_next = self.quad_grad(neighbor, j);
        Some(g_here * (1.0 - w.abs()) + g_next * w.abs())
    }

    /// Is `u` non-increasing outward along every radial grid line?
    pub fn radial_monotonicity_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.mesh.m_ang {
            for j in 0..self.mesh.m_rad {
                let a = self.node_value(i, j);
                let b = self.node_value(i, j + 1);
                worst = worst.max(b - a);
            }
        }
        worst
    }

    /// `|∇u|` on a boundary via the two-point inward-offset ratio with
    /// Richardson extrapolation over offsets `{h, 2h}` (`h` = local radial
    /// spacing), plus the raw element-gradient estimate for cross-checking.
    pub fn boundary_gradient(&self, side: Side) -> Result<BoundaryGradient> {
        let m = self.mesh.m_ang;
        let body = match side {
            Side::Outer => &self.prob.outer,
            Side::Inner => &self.prob.inner,
        };
        let mut thetas = Vec::with_capacity(m);
        let mut grad = Vec::with_capacity(m);
        let mut grad_element = Vec::with_capacity(m);
        for j in 0..m {
            let theta = TAU * j as f64 / m as f64;
            let f = body.boundary_point(theta);
            let nu = Vec2::unit(theta);
            let h = self.mesh.radial_spacing_at(f.angle());
            let width = {
                let i = self.mesh.nearest_ray(f.angle());
                self.mesh.outer_radii[i] - self.mesh.inner_radii[i]
            };
            if 2.0 * h >= width {
                return Err(Error::OffsetOutsideRing);
            }
            let (v1, v2) = match side {
                Side::Outer => {
                    let p1 = f - nu * h;
                    let p2 = f - nu * (2.0 * h);
                    let u1 = self.value_at(p1).ok_or(Error::OffsetOutsideRing)?;
                    let u2 = self.value_at(p2).ok_or(Error::OffsetOutsideRing)?;
                    (u1 / h, u2 / (2.0 * h))
                }
                Side::Inner => {
                    let g0 = match &self.prob.inner_data {
                        InnerData::Const(v) => *v,
                        // Boundary value at this normal angle: nearest-ray sample.
                        InnerData::Sampled(vs) => vs[self.mesh.nearest_ray(f.angle())],
                    };
                    let p1 = f + nu * h;
                    let p2 = f + nu * (2.0 * h);
                    let u1 = self.value_at(p1).ok_or(Error::OffsetOutsideRing)?;
                    let u2 = self.value_at(p2).ok_or(Error::OffsetOutsideRing)?;
                    ((g0 - u1) / h, (g0 - u2) / (2.0 * h))
                }
            };
            let richardson = 2.0 * v1 - v2;
            let probe = match side {
                Side::Outer => f - nu * (0.5 * h),
                Side::Inner => f + nu * (0.5 * h),
            };
            let ge = self.grad_at(probe).ok_or(Error::OffsetOutsideRing)?.norm();
            thetas.push(theta);
            grad.push(richardson);
            grad_element.push(ge);
        }
        Ok(BoundaryGradient {
            side,
            thetas,
            grad,
            grad_element,
        })
    }

    /// Closed polyline of the level set `{u = s}`: one linear-interpolation
    /// crossing per radial grid line, ordered by polar angle.
    pub fn level_set(&self, s: f64) -> Result<Vec<Vec2>> {
        let max = self.prob.inner_data.max();
        if !(s > 0.0 && s < max) {
            return Err(Error::LevelOutOfRange { level: s, max });
        }
        let mesh = &self.mesh;
        let mut poly = Vec::with_capacity(mesh.m_ang);
        for i in 0..mesh.m_ang {
            if self.node_value(i, 0) < s {
                return Err(Error::LevelOutOfRange { level: s, max });
            }
            // Largest j with u >= s; u decreases outward along the ray.
            let mut jstar = 0;
            for j in (0..=mesh.m_rad).rev() {
                if self.node_value(i, j) >= s {
                    jstar = j;
                    break;
                }
            }
            if jstar == mesh.m_rad {
                return Err(Error::LevelOutOfRange { level: s, max });
            }
            let (ua, ub) = (self.node_value(i, jstar), self.node_value(i, jstar + 1));
            let frac = if (ua - ub).abs() < 1e-300 { 0.0 } else { (ua - s) / (ua - ub) };
            let ra = mesh.nodes[mesh.node_index(i, jstar)].norm();
            let rb = mesh.nodes[mesh.node_index(i, jstar + 1)].norm();
            let rho = ra + frac * (rb - ra);
            let theta = TAU * i as f64 / mesh.m_ang as f64;
            poly.push(Vec2::unit(theta) * rho);
        }
        Ok(poly)
    }

    /// Worst normalized concavity of a closed polyline (0 for convex).
    pub fn polyline_convexity_defect(poly: &[Vec2]) -> f64 {
        let n = poly.len();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let a = poly[k];
            let b = poly[(k + 1) % n];
            let c = poly[(k + 2) % n];
            let u = b - a;
            let v = c - b;
            let denom = u.norm() * v.norm();
            if denom > 0.0 {
                worst = worst.max(-(u.cross(v)) / denom);
            }
        }
        worst
    }

    /// Re-solve on the ring between `{u = t}` (support-encoded) and the
    /// original inner body with the same data, and compare against the
    /// rescaled original solution `(u - t)/(1 - t/eps0)`.
    pub fn sublevel_restart_check(&self, t: f64) -> Result<SublevelRestartReport> {
        let eps0 = match &self.prob.inner_data {
            InnerData::Const(v) => *v,
            InnerData::Sampled(_) => {
                return Err(Error::InvalidProblem(
                    "sublevel restart requires constant inner data".into(),
                ))
            }
        };
        if !(t >= 0.0 && t < 0.5 * eps0) {
            return Err(Error::LevelOutOfRange { level: t, max: 0.5 * eps0 });
        }
        if t == 0.0 {
            return Ok(SublevelRestartReport {
                level: t,
                max_discrepancy: 0.0,
            });
        }
        let poly = self.level_set(t)?;
        let fit_order = (self.mesh.m_ang / 8).clamp(8, 32);
        let samples =
            crate::convex::support_of_points(&poly, self.mesh.m_ang, fit_order, 1e-9)?;
        let fresh_outer = samples.smoothed;
        let fresh = RingProblem::new(
            fresh_outer,
            self.prob.inner.clone(),
            self.prob.p,
            InnerData::Const(eps0),
            self.prob.mesh,
        )?
        .with_solver_params(self.prob.reg_delta, self.prob.tol, self.prob.max_iter);
        let fresh_field = fresh.solve()?;

        let scale = 1.0 - t / eps0;
        let mut worst: f64 = 0.0;
        for (n, &x) in fresh_field.mesh.nodes.iter().enumerate() {
            if let Some(u_orig) = self.value_at(x) {
                let expected = (u_orig - t) / scale;
                worst = worst.max((fresh_field.u[n] - expected).abs());
            }
        }
        Ok(SublevelRestartReport {
            level: t,
            max_discrepancy: worst,
        })
    }

    /// Boundary Harnack window: min and max of `|∇u| · dist(x, ∂K) / u(x)`
    /// over vertices of the level sets `{u = s}`, `s` in `levels`.
    pub fn harnack_window(&self, levels: &[f64]) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &s in levels {
            for x in self.level_set(s)? {
                let grad = self.grad_at(x).ok_or(Error::OffsetOutsideRing)?.norm();
                let dist = self.prob.outer.distance_to_boundary(x)?.dist;
                let ratio = grad * dist / s;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
        Ok((lo, hi))
    }

    /// Decay-rate bound: worst ratio of `dist(x, ∂K)` against
    /// `s · max_{∂K} (1/|∇u|)` over the level set `{u = s}` (≤ 1.05 expected).
    pub fn decay_rate_excess(&self, s: f64) -> Result<f64> {
        let bg = self.boundary_gradient(Side::Outer)?;
        let inv_grad_max = bg.grad.iter().map(|g| 1.0 / g).fold(f64::NEG_INFINITY, f64::max);
        let bound = s * inv_grad_max;
        let mut worst: f64 = 0.0;
        for x in self.level_set(s)? {
            let dist = self.prob.outer.distance_to_boundary(x)?.dist;
            worst = worst.max(dist / bound);
        }
        Ok(worst)
    }

    /// Dump `i, j, x, y, u` records as text.
    pub fn write_text(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "# i j x y u")?;
        for j in 0..=self.mesh.m_rad {
            for i in 0..self.mesh.m_ang {
                let n = self.mesh.nodes[self.mesh.node_index(i, j)];
                writeln!(
                    w,
                    "{} {} {:.17e} {:.17e} {:.17e}",
                    i,
                    j,
                    n.x,
                    n.y,
                    self.node_value(i, j)
                )?;
            }
        }
        Ok(())
    }

    /// Binary column dump: magic `PHRM`, u32 dims, then x, y, u columns as
    /// little-endian f64.
    pub fn write_binary(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        w.write_all(b"PHRM")?;
        w.write_all(&(self.mesh.m_ang as u32).to_le_bytes())?;
        w.write_all(&(self.mesh.m_rad as u32).to_le_bytes())?;
        for col in 0..3 {
            for j in 0..=self.mesh.m_rad {
                for i in 0..self.mesh.m_ang {
                    let n = self.mesh.nodes[self.mesh.node_index(i, j)];
                    let v = match col {
                        0 => n.x,
                        1 => n.y,
                        _ => self.node_value(i, j),
                    };
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }
}
