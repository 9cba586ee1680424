//! Damped Newton minimization of the regularized p-Dirichlet energy
//! `Σ_e A_e (|∇u|² + δ²)^(p/2)` with δ-continuation, on P1 elements.
//!
//! The energy is convex for `p ≥ 2`, the Hessian is symmetric positive
//! definite on the free nodes, and each Newton system is solved by a
//! Jacobi-preconditioned conjugate-gradient iteration. Everything runs in a
//! fixed serial order, so results are deterministic.

use super::field::ScalarField;
use super::mesh::RingMesh;
use super::{InnerData, RingProblem, CONTINUATION_DELTAS};
use crate::error::{Error, Result};


/// Compressed sparse rows with a symmetric pattern.
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn slot(&self, row: usize, col: usize) -> usize {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        match self.cols[lo..hi].binary_search(&col) {
            Ok(k) => lo + k,
            Err(_) => unreachable!("entry outside sparsity pattern"),
        }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for r in 0..x.len() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[r] = acc;
        }
    }

    fn diag(&self) -> Vec<f64> {
        (0..self.row_ptr.len() - 1).map(|r| self.vals[self.slot(r, r)]).collect()
    }
}

struct Workspace {
    free_of_node: Vec<usize>,
    node_of_free: Vec<usize>,
    pattern: Csr,
}

const FIXED: usize = usize::MAX;

fn build_workspace(mesh: &RingMesh) -> Workspace {
    let n = mesh.n_nodes();
    let mut free_of_node = vec![FIXED; n];
    let mut node_of_free = Vec::new();
    for j in 1..mesh.m_rad {
        for i in 0..mesh.m_ang {
            let node = mesh.node_index(i, j);
            free_of_node[node] = node_of_free.len();
            node_of_free.push(node);
        }
    }
    let nf = node_of_free.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(10); nf];
    for t in &mesh.tris {
        for &a in t {
            let fa = free_of_node[a];
            if fa == FIXED {
                continue;
            }
            for &b in t {
                let fb = free_of_node[b];
                if fb != FIXED {
                    adj[fa].push(fb);
                }
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(nf + 1);
    let mut cols = Vec::new();
    row_ptr.push(0);
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
        cols.extend_from_slice(list);
        row_ptr.push(cols.len());
    }
    let vals = vec![0.0; cols.len()];
    Workspace {
        free_of_node,
        node_of_free,
        pattern: Csr { row_ptr, cols, vals },
    }
}

fn energy(mesh: &RingMesh, u: &[f64], p: f64, delta: f64) -> f64 {
    let d2 = delta * delta;
    let mut e = 0.0;
    for (ti, t) in mesh.tris.iter().enumerate() {
        let g = &mesh.tri_basis_grads[ti];
        let grad = g[0] * u[t[0]] + g[1] * u[t[1]] + g[2] * u[t[2]];
        let q = grad.dot(grad) + d2;
        e += mesh.tri_areas[ti] * q.powf(0.5 * p);
    }
    e
}

/// Gradient of the energy restricted to free nodes.
fn gradient(mesh: &RingMesh, ws: &Workspace, u: &[f64], p: f64, delta: f64, g_out: &mut [f64]) {
    let d2 = delta * delta;
    g_out.iter_mut().for_each(|v| *v = 0.0);
    for (ti, t) in mesh.tris.iter().enumerate() {
        let bg = &mesh.tri_basis_grads[ti];
        let grad = bg[0] * u[t[0]] + bg[1] * u[t[1]] + bg[2] * u[t[2]];
        let q = grad.dot(grad) + d2;
        let w = mesh.tri_areas[ti] * p * q.powf(0.5 * p - 1.0);
        for a in 0..3 {
            let fa = ws.free_of_node[t[a]];
            if fa != FIXED {
                g_out[fa] += w * grad.dot(bg[a]);
            }
        }
    }
}

fn hessian(mesh: &RingMesh, ws: &Workspace, u: &[f64], p: f64, delta: f64, h: &mut Csr) {
    let d2 = delta * delta;
    h.vals.iter_mut().for_each(|v| *v = 0.0);
    for (ti, t) in mesh.tris.iter().enumerate() {
        let bg = &mesh.tri_basis_grads[ti];
        let grad = bg[0] * u[t[0]] + bg[1] * u[t[1]] + bg[2] * u[t[2]];
        let q = grad.dot(grad) + d2;
        let w1 = mesh.tri_areas[ti] * p * q.powf(0.5 * p - 1.0);
        let w2 = mesh.tri_areas[ti] * p * (p - 2.0) * q.powf(0.5 * p - 2.0);
        for a in 0..3 {
            let fa = ws.free_of_node[t[a]];
            if fa == FIXED {
                continue;
            }
            let ga = grad.dot(bg[a]);
            for b in 0..3 {
                let fb = ws.free_of_node[t[b]];
                if fb == FIXED {
                    continue;
                }
                let v = w1 * bg[a].dot(bg[b]) + w2 * ga * grad.dot(bg[b]);
                let slot = h.slot(fa, fb);
                h.vals[slot] += v;
            }
        }
    }
}

/// Symmetric Gauss-Seidel preconditioner: z = (D+U)⁻¹ D (D+L)⁻¹ r.
fn sgs_apply(h: &Csr, diag: &[f64], r: &[f64], z: &mut [f64], tmp: &mut [f64]) {
    let n = r.len();
    // Forward solve (D + L) tmp = r.
    for i in 0..n {
        let mut acc = r[i];
        for k in h.row_ptr[i]..h.row_ptr[i + 1] {
            let j = h.cols[k];
            if j < i {
                acc -= h.vals[k] * tmp[j];
            }
        }
        tmp[i] = acc / diag[i];
    }
    // Backward solve (D + U) z = D tmp.
    for i in (0..n).rev() {
        let mut acc = diag[i] * tmp[i];
        for k in h.row_ptr[i]..h.row_ptr[i + 1] {
            let j = h.cols[k];
            if j > i {
                acc -= h.vals[k] * z[j];
            }
        }
        z[i] = acc / diag[i];
    }
}

/// Conjugate gradients with a symmetric Gauss-Seidel preconditioner; returns
/// the iteration count.
fn pcg(h: &Csr, b: &[f64], x: &mut [f64], rel_tol: f64, max_iter: usize) -> usize {
    let n = b.len();
    let diag: Vec<f64> = h.diag().iter().map(|&d| if d > 0.0 { d } else { 1.0 }).collect();
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    sgs_apply(h, &diag, &r, &mut z, &mut tmp);
    let mut pdir = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return 0;
    }
    let target = rel_tol * b_norm;
    let mut hp = vec![0.0; n];
    for it in 0..max_iter {
        h.matvec(&pdir, &mut hp);
        let php: f64 = pdir.iter().zip(&hp).map(|(a, b)| a * b).sum();
        if php <= 0.0 {
            return it; // numerical breakdown; H is SPD in exact arithmetic
        }
        let alpha = rz / php;
        for k in 0..n {
            x[k] += alpha * pdir[k];
            r[k] -= alpha * hp[k];
        }
        let r_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r_norm <= target {
            return it + 1;
        }
        sgs_apply(h, &diag, &r, &mut z, &mut tmp);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            pdir[k] = z[k] + beta * pdir[k];
        }
    }
    max_iter
}

fn newton_stage(
    mesh: &RingMesh,
    ws: &Workspace,
    u: &mut [f64],
    p: f64,
    delta: f64,
    tol: f64,
    max_iter: usize,
    h: &mut Csr,
    stage: usize,
) -> Result<f64> {
    let nf = ws.node_of_free.len();
    let mut g = vec![0.0; nf];
    let mut d = vec![0.0; nf];
    for iter in 0..max_iter {
        gradient(mesh, ws, u, p, delta, &mut g);
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= tol {
            return Ok(gnorm);
        }
        hessian(mesh, ws, u, p, delta, h);
        let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        // Inexact Newton: solve tighter as the gradient shrinks.
        let eta = gnorm.clamp(1e-9, 1e-2);
        pcg(h, &rhs, &mut d, eta, 4 * nf);

        // Armijo backtracking on the energy. Once predicted decrease falls
        // below the float resolution of the energy, the comparison is pure
        // noise and the (tiny) full Newton step is taken as is.
        let e0 = energy(mesh, u, p, delta);
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let noise_floor = 1e-12 * (1.0 + e0.abs());
        let mut step = 1.0;
        let mut accepted = slope.abs() <= noise_floor;
        if accepted {
            for (k, &node) in ws.node_of_free.iter().enumerate() {
                u[node] += d[k];
            }
        }
        if !accepted {
            for _ in 0..60 {
                for (k, &node) in ws.node_of_free.iter().enumerate() {
                    u[node] += step * d[k];
                }
                let e1 = energy(mesh, u, p, delta);
                if e1 <= e0 + 1e-4 * step * slope + noise_floor {
                    accepted = true;
                    break;
                }
                for (k, &node) in ws.node_of_free.iter().enumerate() {
                    u[node] -= step * d[k];
                }
                step *= 0.5;
            }
        }
        if !accepted {
            return Err(Error::NonConvergence {
                stage,
                iterations: iter,
                grad_norm: gnorm,
            });
        }
    }
    gradient(mesh, ws, u, p, delta, &mut g);
    let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if gnorm <= tol {
        Ok(gnorm)
    } else {
        Err(Error::NonConvergence {
            stage,
            iterations: max_iter,
            grad_norm: gnorm,
        })
    }
}

pub fn solve(prob: &RingProblem) -> Result<ScalarField> {
    let mesh = prob.build_mesh()?;
    let ws = build_workspace(&mesh);

    // Dirichlet data and a radially linear initial guess.
    let mut u = vec![0.0; mesh.n_nodes()];
    for j in 0..=mesh.m_rad {
        let s = j as f64 / mesh.m_rad as f64;
        for i in 0..mesh.m_ang {
            u[mesh.node_index(i, j)] = prob.inner_data.at(i) * (1.0 - s);
        }
    }

    let mut h = Csr {
        row_ptr: ws.pattern.row_ptr.clone(),
        cols: ws.pattern.cols.clone(),
        vals: ws.pattern.vals.clone(),
    };

    let mut schedule: Vec<f64> = CONTINUATION_DELTAS
        .iter()
        .copied()
        .filter(|&d| d > prob.reg_delta)
        .collect();
    schedule.push(prob.reg_delta);

    let mut final_gnorm = f64::NAN;
    let last = schedule.len() - 1;
    for (stage, &delta) in schedule.iter().enumerate() {
        // Intermediate continuation stages only need a warm-start-quality
        // solve; the final stage converges to the requested tolerance.
        let stage_tol = if stage == last { prob.tol } else { prob.tol.max(1e-8) };
        final_gnorm = newton_stage(
            &mesh, &ws, &mut u, prob.p, delta, stage_tol, prob.max_iter, &mut h, stage,
        )?;
    }

    // Per-element gradients of the converged field.
    let mut tri_grads = Vec::with_capacity(mesh.tris.len());
    let mut min_grad: f64 = f64::INFINITY;
    for (ti, t) in mesh.tris.iter().enumerate() {
        let bg = &mesh.tri_basis_grads[ti];
        let grad = bg[0] * u[t[0]] + bg[1] * u[t[1]] + bg[2] * u[t[2]];
        min_grad = min_grad.min(grad.norm());
        tri_grads.push(grad);
    }

    Ok(ScalarField::new(prob.clone(), mesh, u, tri_grads, min_grad, final_gnorm))
}

/// Scale every length in the problem by `lam` while keeping the data; used by
/// whole-configuration scaling checks.
pub fn scaled_problem(prob: &RingProblem, lam: f64) -> RingProblem {
    RingProblem {
        outer: prob.outer.scale(lam),
        inner: prob.inner.scale(lam),
        p: prob.p,
        inner_data: match &prob.inner_data {
            InnerData::Const(v) => InnerData::Const(*v),
            InnerData::Sampled(vs) => InnerData::Sampled(vs.clone()),
        },
        mesh: prob.mesh,
        reg_delta: prob.reg_delta,
        tol: prob.tol,
        max_iter: prob.max_iter,
    }
}
