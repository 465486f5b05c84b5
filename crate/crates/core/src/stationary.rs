//! Steady states: residuals of the stationary system, a finder based on the
//! gradient-flow structure, and boundedness diagnostics.

use num_complex::Complex64;

use crate::boundary::BoundaryData;
use crate::dynamics::{rhs, IntegratorConfig, Stepper};
use crate::error::Result;
use crate::field::VectorField;
use crate::functionals::{dissipation, lyapunov, lyapunov_gradient, z1_norm};
use crate::init::random_perturbation;
use crate::ops::{self, Inner};
use crate::params::PhysicalParams;
use crate::state::State;
use crate::terms::Couplings;

/// Norms of the three stationary-equation imbalances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryResidual {
    pub r_psi: f64,
    pub r_a: f64,
    pub r_u: f64,
    pub grad_u: f64,
    pub div_a: f64,
}

impl StationaryResidual {
    pub fn max(&self) -> f64 {
        self.r_psi.max(self.r_a).max(self.r_u)
    }
}

pub fn stationary_residual(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
) -> Result<StationaryResidual> {
    let dot = rhs(state, p, b)?;
    let g = state.grid();
    let psi_imb = dot.psit.scaled(p.gamma);
    // c0 u_t minus the psi_t coupling, which vanishes at a steady state
    let mut u_imb = dot.ut.scaled(p.c0);
    for (k, (i, j, _, _)) in g.coords().enumerate() {
        if !g.is_boundary(i, j) {
            u_imb.values[k] -= (state.psi.values[k].conj() * dot.psit.values[k]).re;
        }
    }
    Ok(StationaryResidual {
        r_psi: psi_imb.norm(),
        r_a: dot.at.norm(),
        r_u: u_imb.norm(),
        grad_u: ops::grad_norm_sq(&state.u).sqrt(),
        div_a: ops::div(&state.a).norm(),
    })
}

/// Threshold on `||u||` and `||div A||` above which the reduced system is not
/// applicable.
pub const REDUCED_PRECONDITION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedResidual {
    pub r_psi: f64,
    pub r_a: f64,
    /// Set when `u` or `div A` is not negligible.
    pub precondition_warning: bool,
}

/// Residuals of the stationary system with `u = 0` and `div A = 0` imposed.
pub fn reduced_residual(state: &State, p: &PhysicalParams, b: &BoundaryData) -> ReducedResidual {
    let grad = lyapunov_gradient(state, p, b);
    let c = Couplings::new(state, b, p.kappa);
    let cc = ops::curlcurl2d(&state.a);
    let g = state.grid();
    let mut ra = VectorField::zeros(g);
    for k in 0..g.len() {
        ra.x[k] = p.mu * cc.x[k] + c.rho[k] * c.a.x[k] - c.jx[k] + b.curl_g.x[k];
        ra.y[k] = p.mu * cc.y[k] + c.rho[k] * c.a.y[k] - c.jy[k] + b.curl_g.y[k];
    }
    ra.zero_normal_boundary();
    let warn = state.u.norm() > REDUCED_PRECONDITION_TOL
        || ops::div(&state.a).norm() > REDUCED_PRECONDITION_TOL;
    ReducedResidual {
        r_psi: grad.psit.norm(),
        r_a: ra.norm(),
        precondition_warning: warn,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryOutcome {
    pub state: State,
    pub residual: StationaryResidual,
    pub converged: bool,
    /// Integration time used.
    pub t: f64,
    pub l: f64,
    pub d: f64,
}

/// Stopping rule: `D <= tol^2 (1 + |L|)`.
pub fn dissipation_converged(d: f64, l: f64, tol: f64) -> bool {
    d <= tol * tol * (1.0 + l.abs())
}

/// Integrates the flow until the dissipation stopping rule holds or
/// `max_time` is reached. On timeout the state with the smallest dissipation
/// seen is returned with `converged == false`.
pub fn find_stationary(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    tol: f64,
    max_time: f64,
    cfg: IntegratorConfig,
) -> Result<StationaryOutcome> {
    const CHECK_EVERY: usize = 10;
    let stepper = Stepper::new(p, b, cfg)?;
    let mut state = z0.clone();
    let eval = |s: &State| -> Result<(f64, f64)> {
        let dot = rhs(s, p, b)?;
        Ok((lyapunov(s, p, b), dissipation(s, &dot, p)))
    };
    let (mut l, mut d) = eval(&state)?;
    let mut best = (d, l, state.clone(), 0.0);
    let n_max = crate::dynamics::step_count(max_time, cfg.dt);
    let mut prev: Option<State> = None;
    let mut step = 0;
    while !dissipation_converged(d, l, tol) && step < n_max {
        let next = stepper.step_from(&state, prev.as_ref())?;
        if !next.is_finite() {
            return Err(crate::error::GlsfError::NonFinite {
                step: step + 1,
                t: (step + 1) as f64 * cfg.dt,
                last_good_t: step as f64 * cfg.dt,
            });
        }
        prev = Some(std::mem::replace(&mut state, next));
        step += 1;
        if step % CHECK_EVERY == 0 || step == n_max {
            (l, d) = eval(&state)?;
            if d < best.0 {
                best = (d, l, state.clone(), step as f64 * cfg.dt);
            }
        }
    }
    let converged = dissipation_converged(d, l, tol);
    let (state, l, d, t) = if converged {
        (state, l, d, step as f64 * cfg.dt)
    } else {
        (best.2, best.1, best.0, best.3)
    };
    let residual = stationary_residual(&state, p, b)?;
    Ok(StationaryOutcome {
        state,
        residual,
        converged,
        t,
        l,
        d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryProperties {
    pub u_norm: f64,
    pub div_a: f64,
    pub z1: f64,
    /// `||u|| <= tol` and `||div A|| <= tol`.
    pub pass: bool,
}

pub fn stationary_properties_check(state: &State, tol: f64) -> StationaryProperties {
    let u_norm = state.u.norm();
    let div_a = ops::div(&state.a).norm();
    StationaryProperties {
        u_norm,
        div_a,
        z1: z1_norm(state),
        pass: u_norm <= tol && div_a <= tol,
    }
}

/// Smallest `L(z + s d) - L(z)` over the uniform real `psi` direction plus
/// `n_dirs` random smooth unit directions, with `s` in a symmetric grid of
/// `[-s_max, s_max]`. A negative value beyond roundoff marks a saddle.
pub fn local_min_gap(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    n_dirs: usize,
    seed: u64,
    s_max: f64,
) -> f64 {
    let g = state.grid();
    let l0 = lyapunov(state, p, b);
    let uniform = State::uniform(g, Complex64::new(1.0, 0.0));
    let uniform = uniform.scaled(1.0 / z1_norm(&uniform));
    let dirs = std::iter::once(uniform)
        .chain((0..n_dirs).map(|k| random_perturbation(g, seed.wrapping_add(k as u64), 1.0)));
    let mut gap = f64::INFINITY;
    for d in dirs {
        for m in [-4i32, -3, -2, -1, 1, 2, 3, 4] {
            let s = s_max * m as f64 / 4.0;
            let mut z = state.clone();
            z.axpy(s, &d);
            gap = gap.min(lyapunov(&z, p, b) - l0);
        }
    }
    gap
}

/// Max-norm of the difference between a state and its image under one IMEX
/// step of size `dt`.
pub fn fixed_point_defect(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    dt: f64,
    tol: f64,
) -> Result<f64> {
    let next = crate::dynamics::step_imex(state, p, b, dt, tol)?;
    Ok(next.sub(state).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;

    #[test]
    fn trivial_states_have_zero_residual() {
        let g = Grid2D::unit_square(8).unwrap();
        let b = BoundaryData::zero(g);
        let p = PhysicalParams::unit();
        for v in [0.0, 1.0] {
            let z = State::uniform(g, Complex64::new(v, 0.0));
            let r = stationary_residual(&z, &p, &b).unwrap();
            assert!(r.max() <= 1e-14);
            let rr = reduced_residual(&z, &p, &b);
            assert!(rr.r_psi <= 1e-14 && rr.r_a <= 1e-14 && !rr.precondition_warning);
            assert_eq!(r.grad_u, 0.0);
        }
    }

    #[test]
    fn reduced_residual_warns_on_temperature() {
        let g = Grid2D::unit_square(8).unwrap();
        let b = BoundaryData::zero(g);
        let mut z = State::uniform(g, Complex64::new(1.0, 0.0));
        z.u = crate::boundary::sine_bump(g).scaled(0.1);
        assert!(reduced_residual(&z, &PhysicalParams::unit(), &b).precondition_warning);
    }

    #[test]
    fn stationary_input_returns_immediately() {
        let g = Grid2D::unit_square(8).unwrap();
        let b = BoundaryData::zero(g);
        let p = PhysicalParams::unit();
        let z = State::uniform(g, Complex64::new(1.0, 0.0));
        let out = find_stationary(&z, &p, &b, 1e-8, 10.0, IntegratorConfig::imex(1e-2)).unwrap();
        assert!(out.converged);
        assert_eq!(out.t, 0.0);
        assert_eq!(out.state, z);
    }
}
