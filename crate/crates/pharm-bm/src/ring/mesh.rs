//! Structured radial-angular triangulation of a convex ring.
//!
//! Nodes sit on rays from the origin: `x(θ_i, s_j) = (ρ_I(θ_i) + s_j (ρ_K(θ_i)
//! - ρ_I(θ_i))) · (cos θ_i, sin θ_i)` with `s_j = j / M_radial`. Each quad is
//! split into two positively oriented triangles. The rays make point location
//! exact: the angular column comes from the polar angle, the radial row from
//! a binary search against the chord radii.

use crate::convex::SupportFn;
use crate::error::{Error, Result};
use crate::geometry::{triangle_area, Vec2};
use std::f64::consts::TAU;

#[derive(Clone, Debug)]
pub struct RingMesh {
    pub m_ang: usize,
    pub m_rad: usize,
    /// Node positions, indexed by `j * m_ang + i`.
    pub nodes: Vec<Vec2>,
    /// Inner and outer radial gauges per ray.
    pub inner_radii: Vec<f64>,
    pub outer_radii: Vec<f64>,
    /// Triangles as node index triples, positively oriented. Quad `(i, j)`
    /// owns triangles `2*(j*m_ang+i)` and `2*(j*m_ang+i)+1`.
    pub tris: Vec<[usize; 3]>,
    pub tri_areas: Vec<f64>,
    /// Constant gradients of the three P1 basis functions per triangle.
    pub tri_basis_grads: Vec<[Vec2; 3]>,
    pub min_quality: f64,
}

impl RingMesh {
    pub fn build(outer: &SupportFn, inner: &SupportFn, m_ang: usize, m_rad: usize) -> Result<Self> {
        let mut inner_radii = Vec::with_capacity(m_ang);
        let mut outer_radii = Vec::with_capacity(m_ang);
        for i in 0..m_ang {
            let theta = TAU * i as f64 / m_ang as f64;
            inner_radii.push(inner.radial(theta)?);
            outer_radii.push(outer.radial(theta)?);
        }
        let mut nodes = Vec::with_capacity(m_ang * (m_rad + 1));
        for j in 0..=m_rad {
            let s = j as f64 / m_rad as f64;
            for i in 0..m_ang {
                let theta = TAU * i as f64 / m_ang as f64;
                let rho = inner_radii[i] + s * (outer_radii[i] - inner_radii[i]);
                nodes.push(Vec2::unit(theta) * rho);
            }
        }
        let idx = |i: usize, j: usize| j * m_ang + (i % m_ang);
        let mut tris = Vec::with_capacity(2 * m_ang * m_rad);
        for j in 0..m_rad {
            for i in 0..m_ang {
                // Counterclockwise quad: inner-left, outer-left, outer-right,
                // inner-right (radial index j grows outward).
                let a = idx(i, j);
                let b = idx(i + 1, j);
                let c = idx(i + 1, j + 1);
                let d = idx(i, j + 1);
                tris.push([a, d, c]);
                tris.push([a, c, b]);
            }
        }
        let mut tri_areas = Vec::with_capacity(tris.len());
        let mut tri_basis_grads = Vec::with_capacity(tris.len());
        let mut min_quality = f64::INFINITY;
        for t in &tris {
            let (pa, pb, pc) = (nodes[t[0]], nodes[t[1]], nodes[t[2]]);
            let area = triangle_area(pa, pb, pc);
            if !(area > 1e-14) {
                return Err(Error::MeshQualityFailure { quality: area });
            }
            // P1 basis gradients: ∇φ_a = perp(c - b) / (2 area), cyclic.
            let g = |p: Vec2, q: Vec2| (q - p).perp() * (1.0 / (2.0 * area));
            tri_basis_grads.push([g(pb, pc), g(pc, pa), g(pa, pb)]);
            tri_areas.push(area);

            let (la, lb, lc) = ((pb - pa).norm(), (pc - pb).norm(), (pa - pc).norm());
            let s = 0.5 * (la + lb + lc);
            let inradius = area / s;
            let circum = la * lb * lc / (4.0 * area);
            min_quality = min_quality.min(inradius / circum);
        }
        if min_quality <= 1e-9 {
            return Err(Error::MeshQualityFailure { quality: min_quality });
        }
        Ok(RingMesh {
            m_ang,
            m_rad,
            nodes,
            inner_radii,
            outer_radii,
            tris,
            tri_areas,
            tri_basis_grads,
            min_quality,
        })
    }

    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.m_ang + (i % self.m_ang)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Largest element edge length.
    pub fn max_edge(&self) -> f64 {
        let mut h: f64 = 0.0;
        for t in &self.tris {
            let (a, b, c) = (self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]);
            h = h.max((b - a).norm()).max((c - b).norm()).max((a - c).norm());
        }
        h
    }

    /// Largest radial node spacing.
    pub fn max_radial_spacing(&self) -> f64 {
        (0..self.m_ang)
            .map(|i| (self.outer_radii[i] - self.inner_radii[i]) / self.m_rad as f64)
            .fold(0.0, f64::max)
    }

    /// Radial spacing along the ray nearest to angle `theta`.
    pub fn radial_spacing_at(&self, theta: f64) -> f64 {
        let i = self.nearest_ray(theta);
        (self.outer_radii[i] - self.inner_radii[i]) / self.m_rad as f64
    }

    pub fn nearest_ray(&self, theta: f64) -> usize {
        let t = crate::geometry::normalize_angle(theta);
        ((t / TAU * self.m_ang as f64).round() as usize) % self.m_ang
    }

    /// Radius at which the ray at `phi` crosses the chord of row `j` in
    /// column `i` (the segment between nodes `(i,j)` and `(i+1,j)`).
    fn chord_radius(&self, i: usize, j: usize, dir: Vec2) -> f64 {
        let p0 = self.nodes[self.node_index(i, j)];
        let p1 = self.nodes[self.node_index(i + 1, j)];
        // Solve p0 + w (p1 - p0) = r dir; cross with dir eliminates r.
        let denom = (p1 - p0).cross(dir);
        if denom.abs() < 1e-300 {
            return p0.norm();
        }
        let w = (-p0.cross(dir)) / denom;
        let p = p0 + (p1 - p0) * w.clamp(0.0, 1.0);
        p.norm()
    }

    /// Locate the triangle containing `x` and return `(tri_index,
    /// barycentric)`. Points outside the polygonal ring by more than a small
    /// slack return `None`; points within the slack are clamped.
    pub fn locate(&self, x: Vec2) -> Option<(usize, [f64; 3])> {
        let r = x.norm();
        if r == 0.0 {
            return None;
        }
        let dir = x * (1.0 / r);
        let phi = x.angle();
        let col = ((phi / TAU * self.m_ang as f64).floor() as usize).min(self.m_ang - 1);

        // Binary search for the radial row: chord radii increase with j.
        let r_in = self.chord_radius(col, 0, dir);
        let r_out = self.chord_radius(col, self.m_rad, dir);
        let slack = 1e-9 * (1.0 + r_out);
        if r < r_in - slack || r > r_out + slack {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.m_rad);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.chord_radius(col, mid, dir) <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Try the two triangles of the quad (col, lo), with neighbors as a
        // fallback for points that sit on a shared edge.
        for j in [lo, lo.saturating_sub(1), (lo + 1).min(self.m_rad - 1)] {
            let quad = j * self.m_ang + col;
            for ti in [2 * quad, 2 * quad + 1] {
                if let Some(bary) = self.barycentric(ti, x, 1e-9) {
                    return Some((ti, bary));
                }
            }
        }
        // Clamp: project barycentrics of the best candidate quad.
        let quad = lo * self.m_ang + col;
        for ti in [2 * quad, 2 * quad + 1] {
            if let Some(bary) = self.barycentric(ti, x, 1e-3) {
                let mut b = bary;
                for v in &mut b {
                    *v = v.max(0.0);
                }
                let s: f64 = b.iter().sum();
                return Some((ti, [b[0] / s, b[1] / s, b[2] / s]));
            }
        }
        None
    }

    fn barycentric(&self, tri: usize, x: Vec2, tol: f64) -> Option<[f64; 3]> {
        let t = self.tris[tri];
        let (a, b, c) = (self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]);
        let area = self.tri_areas[tri];
        let wa = triangle_area(x, b, c) / area;
        let wb = triangle_area(a, x, c) / area;
        let wc = 1.0 - wa - wb;
        if wa >= -tol && wb >= -tol && wc >= -tol {
            Some([wa, wb, wc])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_mesh_counts_and_node_positions() {
        let outer = SupportFn::ball(1.0).unwrap();
        let inner = SupportFn::ball(0.25).unwrap();
        let mesh = RingMesh::build(&outer, &inner, 8, 4).unwrap();
        assert_eq!(mesh.tris.len(), 64); // 32 quads
        assert_eq!(mesh.n_nodes(), 8 * 5);
        let n = mesh.nodes[mesh.node_index(0, 4)];
        assert!((n.x - 1.0).abs() < 1e-10 && n.y.abs() < 1e-12);
        // Congruent per ring: all quads in a row have equal triangle areas.
        for j in 0..4 {
            let a0 = mesh.tri_areas[2 * (j * 8)];
            for i in 0..8 {
                assert!((mesh.tri_areas[2 * (j * 8 + i)] - a0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ellipse_ring_positive_orientation() {
        let outer = SupportFn::ellipse(1.4, 1.0, 32).unwrap();
        let inner = SupportFn::ball(0.4).unwrap();
        let mesh = RingMesh::build(&outer, &inner, 48, 12).unwrap();
        assert!(mesh.tri_areas.iter().all(|&a| a > 0.0));
        assert!(mesh.min_quality > 0.0 && mesh.min_quality <= 0.5 + 1e-12);
    }

    #[test]
    fn locate_round_trips_node_positions() {
        let outer = SupportFn::ellipse(1.4, 1.0, 32).unwrap();
        let inner = SupportFn::ball(0.4).unwrap();
        let mesh = RingMesh::build(&outer, &inner, 32, 8).unwrap();
        for (ti, t) in mesh.tris.iter().enumerate() {
            let centroid = (mesh.nodes[t[0]] + mesh.nodes[t[1]] + mesh.nodes[t[2]]) * (1.0 / 3.0);
            let (found, bary) = mesh.locate(centroid).expect("centroid must be inside");
            let f = mesh.tris[found];
            let rebuilt = mesh.nodes[f[0]] * bary[0] + mesh.nodes[f[1]] * bary[1] + mesh.nodes[f[2]] * bary[2];
            assert!((rebuilt - centroid).norm() < 1e-10, "tri {ti}");
        }
        assert!(mesh.locate(Vec2::new(0.0, 0.01)).is_none());
        assert!(mesh.locate(Vec2::new(5.0, 0.0)).is_none());
    }
}
