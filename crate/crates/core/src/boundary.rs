//! Time-independent boundary data and their interior extensions.
//!
//! `A_H = C* phi` with `C C* phi = -omega` at interior nodes, so that the
//! masked curl of `A_H` is exactly `-omega` in the interior and `div A_H`
//! vanishes by the commuting-difference structure. `u_H` is the five-point
//! harmonic extension of the boundary temperature. `G` is the least-squares
//! potential with `C* G ~ grad u_H + g` and `G = 0` on the boundary.

use crate::error::Result;
use crate::field::{ScalarField, VectorField};
use crate::grid::Grid2D;
use crate::ops::{self, kernels, Bc, Inner};
use crate::solver::{cg, CgOptions};

/// `G` fits with a residual above this are flagged as incompatible.
pub const G_RESIDUAL_THRESHOLD: f64 = 1e-8;

/// Boundary temperature profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemperatureProfile {
    /// `u_b = value` everywhere on the boundary.
    Constant(f64),
    /// `u_b = value * x / lx`.
    LinearX(f64),
}

/// Body-force profiles; every profile is divergence free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForceProfile {
    Zero,
    /// `g = amp * C* chi` with `chi = sin(pi x / lx) sin(pi y / ly)`.
    Stream(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub omega: f64,
    /// Boundary temperature trace; interior values are not used.
    pub u_b: ScalarField,
    pub g: VectorField,
    pub a_h: VectorField,
    pub u_h: ScalarField,
    pub g_pot: ScalarField,
    /// `C* G` cached for the dynamics.
    pub curl_g: VectorField,
    /// `|| C* G - (grad u_H + g) ||`.
    pub g_residual: f64,
    pub g_incompatible: bool,
}

impl BoundaryData {
    pub fn zero(grid: Grid2D) -> Self {
        Self {
            omega: 0.0,
            u_b: ScalarField::zeros(grid),
            g: VectorField::zeros(grid),
            a_h: VectorField::zeros(grid),
            u_h: ScalarField::zeros(grid),
            g_pot: ScalarField::zeros(grid),
            curl_g: VectorField::zeros(grid),
            g_residual: 0.0,
            g_incompatible: false,
        }
    }

    pub fn build(
        grid: Grid2D,
        omega: f64,
        temp: TemperatureProfile,
        force: ForceProfile,
        tol: f64,
    ) -> Result<Self> {
        let opts = CgOptions::with_tol(&grid, tol);
        let u_b = temperature_trace(grid, temp);
        let g = force_field(grid, force);
        let u_h = harmonic_extension(&u_b, opts)?;
        let a_h = vector_potential_extension(grid, omega, opts)?;
        let fit = fit_g(&u_h, &g, opts)?;
        Ok(Self {
            omega,
            u_b,
            g,
            a_h,
            u_h,
            curl_g: ops::curl_of_scalar(&fit.g_pot),
            g_pot: fit.g_pot,
            g_residual: fit.residual,
            g_incompatible: fit.incompatible,
        })
    }

    pub fn grid(&self) -> Grid2D {
        self.u_h.grid
    }

    pub fn is_zero(&self) -> bool {
        self.omega == 0.0
            && self.a_h.max_abs() == 0.0
            && self.u_h.max_abs() == 0.0
            && self.curl_g.max_abs() == 0.0
    }
}

pub fn temperature_trace(grid: Grid2D, temp: TemperatureProfile) -> ScalarField {
    match temp {
        TemperatureProfile::Constant(v) => ScalarField::constant(grid, v),
        TemperatureProfile::LinearX(v) => ScalarField::from_fn(grid, |x, _| v * x / grid.lx),
    }
}

pub fn force_field(grid: Grid2D, force: ForceProfile) -> VectorField {
    match force {
        ForceProfile::Zero => VectorField::zeros(grid),
        ForceProfile::Stream(amp) => {
            let chi = sine_bump(grid);
            ops::curl_of_scalar(&chi).scaled(amp)
        }
    }
}

/// `sin(pi x / lx) sin(pi y / ly)`, zero on the boundary.
pub fn sine_bump(grid: Grid2D) -> ScalarField {
    use std::f64::consts::PI;
    let mut s = ScalarField::from_fn(grid, |x, y| {
        (PI * x / grid.lx).sin() * (PI * y / grid.ly).sin()
    });
    s.zero_boundary();
    s
}

/// Five-point harmonic extension of the boundary values of `u_b`.
///
/// Constant data are reproduced exactly; otherwise the interior is seeded
/// with the boundary mean.
pub fn build_harmonic_temperature(u_b: &ScalarField) -> Result<ScalarField> {
    harmonic_extension(u_b, CgOptions::for_grid(&u_b.grid))
}

pub fn harmonic_extension(u_b: &ScalarField, opts: CgOptions) -> Result<ScalarField> {
    let g = u_b.grid;
    let n = g.len();
    let mut trace = u_b.values.clone();
    let mut bsum = 0.0;
    let mut bcount = 0.0;
    for (k, (i, j, _, _)) in g.coords().enumerate() {
        if g.is_boundary(i, j) {
            bsum += trace[k];
            bcount += 1.0;
        } else {
            trace[k] = 0.0;
        }
    }
    let mean = bsum / bcount;
    let first = u_b.values[0];
    if g.coords()
        .all(|(i, j, _, _)| !g.is_boundary(i, j) || u_b.at(i, j) == first)
    {
        return Ok(ScalarField::constant(g, first));
    }
    // -lap_D v = lap(trace) restricted to the interior, then u = trace + v
    let mut rhs = vec![0.0; n];
    five_point_interior(&g, &trace, &mut rhs);
    let mask = g.interior_mask();
    for k in 0..n {
        rhs[k] *= mask[k];
    }
    let mut v: Vec<f64> = mask.iter().map(|m| m * mean).collect();
    let w = g.weights();
    cg(
        |x, o| {
            kernels::laplacian(&g, x, o, Bc::Dirichlet0);
            for v in o.iter_mut() {
                *v = -*v;
            }
        },
        &rhs,
        &mut v,
        &w,
        opts,
    )?;
    let values = trace.iter().zip(&v).map(|(a, b)| a + b).collect();
    Ok(ScalarField::from_values(g, values))
}

/// Plain five-point Laplacian at interior nodes, reading boundary values as
/// given; zero on the boundary.
fn five_point_interior(g: &Grid2D, s: &[f64], out: &mut [f64]) {
    let nxp = g.nodes_x();
    let ax = 1.0 / (g.hx * g.hx);
    let ay = 1.0 / (g.hy * g.hy);
    for j in 0..=g.ny {
        for i in 0..=g.nx {
            let k = j * nxp + i;
            out[k] = if g.is_boundary(i, j) {
                0.0
            } else {
                ((s[k + 1] - s[k]) + (s[k - 1] - s[k])) * ax
                    + ((s[k + nxp] - s[k]) + (s[k - nxp] - s[k])) * ay
            };
        }
    }
}

/// Max-norm five-point Laplacian residual of `u` at interior nodes.
pub fn interior_laplace_residual(u: &ScalarField) -> f64 {
    let mut out = vec![0.0; u.grid.len()];
    five_point_interior(&u.grid, &u.values, &mut out);
    out.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Solves `C C* phi = f` for `phi` vanishing on the boundary.
pub fn solve_curl_potential(f: &ScalarField, opts: CgOptions) -> Result<ScalarField> {
    let g = f.grid;
    let n = g.len();
    let mut rhs = f.values.clone();
    kernels::zero_boundary(&g, &mut rhs);
    let mut phi = vec![0.0; n];
    let w = g.weights();
    let mut vx = vec![0.0; n];
    let mut vy = vec![0.0; n];
    cg(
        |x, o| {
            kernels::curl_adjoint(&g, x, &mut vx, &mut vy);
            kernels::curl_masked(&g, &vx, &vy, o);
        },
        &rhs,
        &mut phi,
        &w,
        opts,
    )?;
    Ok(ScalarField::from_values(g, phi))
}

pub fn build_vector_potential_extension(grid: Grid2D, omega: f64) -> Result<VectorField> {
    vector_potential_extension(grid, omega, CgOptions::for_grid(&grid))
}

pub fn vector_potential_extension(
    grid: Grid2D,
    omega: f64,
    opts: CgOptions,
) -> Result<VectorField> {
    if omega == 0.0 {
        return Ok(VectorField::zeros(grid));
    }
    let mut f = ScalarField::constant(grid, -omega);
    f.zero_boundary();
    let phi = solve_curl_potential(&f, opts)?;
    Ok(ops::curl_of_scalar(&phi))
}

/// Curl-curl of `v` with the boundary curl prescribed as `c_boundary`
/// (interior curl from the masked operator).
pub fn curlcurl_with_boundary_curl(v: &VectorField, c_boundary: f64) -> VectorField {
    let g = v.grid;
    let mut c = ops::curl_masked(v);
    for (k, (i, j, _, _)) in g.coords().enumerate() {
        if g.is_boundary(i, j) {
            c.values[k] = c_boundary;
        }
    }
    let mut out = VectorField::zeros(g);
    kernels::d_y(&g, &c.values, &mut out.x, Bc::Dirichlet0);
    kernels::d_x(&g, &c.values, &mut out.y, Bc::Dirichlet0);
    for v in out.y.iter_mut() {
        *v = -*v;
    }
    out.zero_normal_boundary();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GFit {
    pub g_pot: ScalarField,
    /// `|| C* G - (grad u_H + g) ||`
    pub residual: f64,
    pub incompatible: bool,
}

pub fn build_g(u_h: &ScalarField, g: &VectorField) -> Result<GFit> {
    fit_g(u_h, g, CgOptions::for_grid(&u_h.grid))
}

pub fn fit_g(u_h: &ScalarField, g: &VectorField, opts: CgOptions) -> Result<GFit> {
    let mut target = ops::grad(u_h, Bc::Neumann).add(g);
    target.zero_normal_boundary();
    let rhs = ops::curl_masked(&target);
    let g_pot = if rhs.max_abs() == 0.0 {
        ScalarField::zeros(u_h.grid)
    } else {
        solve_curl_potential(&rhs, opts)?
    };
    let residual = ops::curl_of_scalar(&g_pot).sub(&target).norm();
    Ok(GFit {
        g_pot,
        residual,
        incompatible: residual > G_RESIDUAL_THRESHOLD,
    })
}
