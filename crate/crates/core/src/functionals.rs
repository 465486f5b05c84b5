//! Lyapunov functional, auxiliary functionals, the dissipation form and the
//! phase-space norms.
//!
//! Scalar gradient energies are taken on cell edges so that they pair exactly
//! with the five-point Laplacians; vector combinations use node gradients.

use num_complex::Complex64;

use crate::boundary::BoundaryData;
use crate::field::VectorField;
use crate::ops::{self, kernels, Bc, Inner};
use crate::params::PhysicalParams;
use crate::state::{State, StateDot};
use crate::terms::Couplings;

fn wsum(w: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let mut s = 0.0;
    for (k, wk) in w.iter().enumerate() {
        s += wk * f(k);
    }
    s
}

/// `||(i/k) grad psi + psi A||^2` in its discrete split form.
pub fn kinetic(state: &State, c: &Couplings, kappa: f64) -> f64 {
    let g = state.grid();
    let w = g.weights();
    let grad = kernels::grad_energy_complex(&g, &state.psi.values) / (kappa * kappa);
    let rest = wsum(&w, |k| {
        c.rho[k] * c.a_sq(k) - 2.0 * (c.a.x[k] * c.jx[k] + c.a.y[k] * c.jy[k])
    });
    grad + rest
}

pub fn lyapunov(state: &State, p: &PhysicalParams, b: &BoundaryData) -> f64 {
    let c = Couplings::new(state, b, p.kappa);
    lyapunov_with(state, p, b, &c)
}

pub(crate) fn lyapunov_with(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    c: &Couplings,
) -> f64 {
    let g = state.grid();
    let w = g.weights();
    let a = &state.a;
    let curl = ops::curl_masked(a);
    let pot = wsum(&w, |k| {
        let r = c.rho[k];
        0.5 * (r - 1.0) * (r - 1.0)
            + r * b.u_h.values[k]
            + p.mu * curl.values[k] * curl.values[k]
            + p.eta * c.d[k] * c.d[k]
            + 2.0 * (b.curl_g.x[k] * a.x[k] + b.curl_g.y[k] * a.y[k])
            + p.c0 * state.u.values[k] * state.u.values[k]
    });
    0.5 * (kinetic(state, c, p.kappa) + pot)
}

pub fn f1(state: &State, p: &PhysicalParams, b: &BoundaryData) -> f64 {
    let c = Couplings::new(state, b, p.kappa);
    let g = state.grid();
    let w = g.weights();
    let curl = ops::curl_masked(&state.a);
    let rest = wsum(&w, |k| {
        let r = c.rho[k];
        0.5 * (r - 1.0) * (r - 1.0)
            + r * b.u_h.values[k]
            + c.d[k] * c.d[k]
            + curl.values[k] * curl.values[k]
            + state.u.values[k] * state.u.values[k]
    });
    kinetic(state, &c, p.kappa) + rest
}

pub fn f2(state: &State, p: &PhysicalParams, b: &BoundaryData) -> f64 {
    let lap = ops::laplacian_complex(&state.psi, Bc::Neumann);
    let cc = ops::curlcurl2d(&state.a);
    let mut v = ops::graddiv(&state.a);
    v.axpy(-1.0, &ops::grad(&state.u, Bc::Neumann));
    v.axpy(-1.0, &b.curl_g);
    let lap_sq = lap.inner(&lap).re;
    let eps = p.epsilon();
    lap_sq / (p.kappa * p.kappa)
        + p.mu * cc.inner(&cc)
        + v.inner(&v)
        + p.k0 / (2.0 * eps * p.c0) * ops::grad_norm_sq(&state.u)
}

/// Coefficients of `q` in `(A_t, grad div A, grad u)`.
pub fn q_matrix(p: &PhysicalParams) -> [[f64; 3]; 3] {
    let a = (p.eta - 2.0) / 2.0;
    [[1.0, a, 1.0], [a, 1.0, -1.0], [1.0, -1.0, p.k0 + 1.0]]
}

/// Leading principal minors by cofactor expansion.
pub fn q_leading_minors(p: &PhysicalParams) -> [f64; 3] {
    let m = q_matrix(p);
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let m3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [m[0][0], m2, m3]
}

/// Eigenvalues of a symmetric 3x3 matrix in ascending order, from the roots of
/// the characteristic polynomial in trigonometric form.
pub fn symmetric_eigenvalues_3x3(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let tr = m[0][0] + m[1][1] + m[2][2];
    if p1 == 0.0 {
        let mut e = [m[0][0], m[1][1], m[2][2]];
        e.sort_by(f64::total_cmp);
        return e;
    }
    let q = tr / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let pp = (p2 / 6.0).sqrt();
    let mut bm = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            bm[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / pp;
        }
    }
    let det = bm[0][0] * (bm[1][1] * bm[2][2] - bm[1][2] * bm[2][1])
        - bm[0][1] * (bm[1][0] * bm[2][2] - bm[1][2] * bm[2][0])
        + bm[0][2] * (bm[1][0] * bm[2][1] - bm[1][1] * bm[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * pp * phi.cos();
    let e3 = q + 2.0 * pp * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = tr - e1 - e3;
    let mut e = [e1, e2, e3];
    e.sort_by(f64::total_cmp);
    e
}

pub fn q_min_eigenvalue(p: &PhysicalParams) -> f64 {
    symmetric_eigenvalues_3x3(&q_matrix(p))[0]
}

/// `int |a|^2 + |b|^2 + (k0+1)|c|^2 + (eta-2) a.b + 2 a.c - 2 b.c`
pub fn q_value(a: &VectorField, b: &VectorField, c: &VectorField, p: &PhysicalParams) -> f64 {
    let w = a.grid.weights();
    let dot = |u: &VectorField, v: &VectorField, k: usize| u.x[k] * v.x[k] + u.y[k] * v.y[k];
    wsum(&w, |k| {
        dot(a, a, k)
            + dot(b, b, k)
            + (p.k0 + 1.0) * dot(c, c, k)
            + (p.eta - 2.0) * dot(a, b, k)
            + 2.0 * dot(a, c, k)
            - 2.0 * dot(b, c, k)
    })
}

/// `D = gamma ||psi_t - i k psi div A||^2 + q(A_t, grad div A, grad u)`.
pub fn dissipation(state: &State, dot: &StateDot, p: &PhysicalParams) -> f64 {
    let g = state.grid();
    let w = g.weights();
    let d = ops::div(&state.a);
    let ik = Complex64::new(0.0, p.kappa);
    let psi_part = wsum(&w, |k| {
        (dot.psit.values[k] - ik * state.psi.values[k] * d.values[k]).norm_sqr()
    });
    let gd = ops::grad(&d, Bc::Neumann);
    let gu = ops::grad(&state.u, Bc::Neumann);
    p.gamma * psi_part + q_value(&dot.at, &gd, &gu, p)
}

pub fn z1_norm(state: &State) -> f64 {
    let psi = state.psi.inner(&state.psi).re + ops::grad_norm_sq_complex(&state.psi);
    let d = ops::div(&state.a);
    let c = ops::curl_masked(&state.a);
    let u = state.u.inner(&state.u);
    (psi + d.inner(&d) + c.inner(&c) + u).max(0.0).sqrt()
}

pub fn z2_norm(state: &State) -> f64 {
    let lap = ops::laplacian_complex(&state.psi, Bc::Neumann);
    let psi =
        state.psi.inner(&state.psi).re + ops::grad_norm_sq_complex(&state.psi) + lap.inner(&lap).re;
    let gd = ops::graddiv(&state.a);
    let cc = ops::curlcurl2d(&state.a);
    (psi + gd.inner(&gd) + cc.inner(&cc) + ops::grad_norm_sq(&state.u))
        .max(0.0)
        .sqrt()
}

/// `| |psi_t|^2 - ( |psi_t - i k psi d|^2 - k^2 |psi|^2 d^2 - i k (psi_t conj(psi) - conj(psi_t) psi) d ) |`
pub fn pointwise_identity_residual(psi: Complex64, psit: Complex64, d: f64, kappa: f64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let lhs = psit.norm_sqr();
    let rhs = (psit - i * kappa * psi * d).norm_sqr()
        - kappa * kappa * psi.norm_sqr() * d * d
        - i * kappa * (psit * psi.conj() - psit.conj() * psi) * d;
    (rhs - lhs).norm()
}

/// Natural scale of the pointwise identity terms.
pub fn pointwise_identity_scale(psi: Complex64, psit: Complex64, d: f64, kappa: f64) -> f64 {
    let a = psit.norm_sqr();
    let b = kappa * kappa * psi.norm_sqr() * d * d;
    let c = 2.0 * kappa * (psit * psi.conj()).norm() * d.abs();
    a.max(b).max(c).max(f64::MIN_POSITIVE)
}

/// Gradient of the Lyapunov functional in the real trapezoidal pairing:
/// `dL[dz] = Re<g_psi, dpsi> + <g_A, dA> + <g_u, du>` for admissible `dz`.
pub fn lyapunov_gradient(state: &State, p: &PhysicalParams, b: &BoundaryData) -> StateDot {
    let g = state.grid();
    let n = g.len();
    let c = Couplings::new(state, b, p.kappa);
    let psi = &state.psi.values;
    let mut lap = vec![Complex64::default(); n];
    kernels::laplacian(&g, psi, &mut lap, Bc::Neumann);
    let skew = c.skew_transport(&g, psi, p.kappa);
    let k2 = 1.0 / (p.kappa * p.kappa);
    let gpsi: Vec<Complex64> = (0..n)
        .map(|k| {
            let e = lap[k] * k2 + skew[k] - psi[k] * (c.a_sq(k) + c.rho[k] - 1.0 + b.u_h.values[k]);
            -e
        })
        .collect();
    let gd = ops::graddiv(&state.a);
    let cc = ops::curlcurl2d(&state.a);
    let mut ga = VectorField::zeros(g);
    for k in 0..n {
        ga.x[k] =
            -(p.eta * gd.x[k] - p.mu * cc.x[k] - c.rho[k] * c.a.x[k] + c.jx[k] - b.curl_g.x[k]);
        ga.y[k] =
            -(p.eta * gd.y[k] - p.mu * cc.y[k] - c.rho[k] * c.a.y[k] + c.jy[k] - b.curl_g.y[k]);
    }
    ga.zero_normal_boundary();
    let mut gu = state.u.scaled(p.c0);
    gu.zero_boundary();
    StateDot {
        psit: crate::field::ComplexField::from_values(g, gpsi),
        at: ga,
        ut: gu,
    }
}
