//! Right-hand side of the evolution system, time steppers and trajectory
//! experiments.
//!
//! The IMEX step treats `(1/k^2) lap` on `psi`, `grad div - mu curl curl` on
//! `A` and `k0 lap` on `u` implicitly and everything else explicitly from the
//! current state, in the order `psi -> A -> u`. The temperature coupling uses
//! `(|psi'|^2 - |psi|^2) / (2 dt)`, the discrete form of `Re(conj(psi) psi_t)`.

use num_complex::Complex64;

use crate::boundary::BoundaryData;
use crate::error::{GlsfError, Result};
use crate::field::{ComplexField, ScalarField, VectorField};
use crate::functionals::{self, dissipation, lyapunov, z1_norm, z2_norm};
use crate::grid::Grid2D;
use crate::ops::{self, kernels, Bc, Inner};
use crate::params::PhysicalParams;
use crate::solver::{cg, CgOptions, CgStats, DEFAULT_TOL};
use crate::state::{State, StateDot};
use crate::terms::Couplings;

/// Imaginary parts of the supercurrent above this (relative) indicate an
/// adjointness bug.
pub const SUPERCURRENT_IMAG_TOL: f64 = 1e-13;

/// Default step bound for grids with `h >= 1/128`.
pub const DT_MAX: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Imex,
    ExplicitEuler,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Imex => "imex",
            Scheme::ExplicitEuler => "explicit-euler",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "imex" => Some(Scheme::Imex),
            "explicit-euler" | "explicit_euler" | "euler" => Some(Scheme::ExplicitEuler),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub tol: f64,
    pub max_steps: usize,
}

impl IntegratorConfig {
    pub fn imex(dt: f64) -> Self {
        Self {
            dt,
            scheme: Scheme::Imex,
            tol: DEFAULT_TOL,
            max_steps: usize::MAX,
        }
    }

    pub fn explicit(dt: f64) -> Self {
        Self {
            scheme: Scheme::ExplicitEuler,
            ..Self::imex(dt)
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(GlsfError::Param {
                field: "dt",
                value: self.dt,
            });
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(GlsfError::Param {
                field: "solver_tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

/// Explicit part of the `psi` equation (times `gamma`):
/// `-(i/k)[div(A psi) + A . G psi] + i k gamma d psi - |A|^2 psi - psi(|psi|^2 - 1 + u + u_H)`.
fn psi_explicit(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    c: &Couplings,
) -> Vec<Complex64> {
    let g = state.grid();
    let psi = &state.psi.values;
    let mut out = c.skew_transport(&g, psi, p.kappa);
    let ikg = Complex64::new(0.0, p.kappa * p.gamma);
    for k in 0..g.len() {
        let pot = c.a_sq(k) + c.rho[k] - 1.0 + state.u.values[k] + b.u_h.values[k];
        out[k] += ikg * c.d[k] * psi[k] - psi[k] * pot;
    }
    out
}

/// Explicit part of the `A` equation: `-|psi|^2 A + J_s - grad u - C* G`.
fn a_explicit(state: &State, b: &BoundaryData, c: &Couplings) -> VectorField {
    let mut out = c.current();
    out.axpy(-1.0, &ops::grad(&state.u, Bc::Neumann));
    out.axpy(-1.0, &b.curl_g);
    out.zero_normal_boundary();
    out
}

/// `div J` with `J = -|psi|^2 A + J_s`, interior nodes only.
fn div_current(g: &Grid2D, c: &Couplings) -> Vec<f64> {
    let j = c.current();
    let mut out = vec![0.0; g.len()];
    kernels::div(g, &j.x, &j.y, &mut out);
    kernels::zero_boundary(g, &mut out);
    out
}

fn check_supercurrent(c: &Couplings) -> Result<()> {
    let scale = c.jx.iter().chain(&c.jy).fold(1.0f64, |m, v| m.max(v.abs()));
    if c.sc_imag > SUPERCURRENT_IMAG_TOL * scale {
        return Err(GlsfError::Consistency(format!(
            "supercurrent imaginary part {:.3e} exceeds roundoff",
            c.sc_imag
        )));
    }
    Ok(())
}

fn check_grids(state: &State, b: &BoundaryData) -> Result<()> {
    state.grid().check_same(&state.a.grid)?;
    state.grid().check_same(&state.u.grid)?;
    state.grid().check_same(&b.grid())
}

/// Instantaneous time derivative of the full system.
pub fn rhs(state: &State, p: &PhysicalParams, b: &BoundaryData) -> Result<StateDot> {
    check_grids(state, b)?;
    let g = state.grid();
    let n = g.len();
    let c = Couplings::new(state, b, p.kappa);
    check_supercurrent(&c)?;
    let mut lap = vec![Complex64::default(); n];
    kernels::laplacian(&g, &state.psi.values, &mut lap, Bc::Neumann);
    let npsi = psi_explicit(state, p, b, &c);
    let k2 = 1.0 / (p.kappa * p.kappa);
    let psit: Vec<Complex64> = (0..n).map(|k| (lap[k] * k2 + npsi[k]) / p.gamma).collect();

    let mut at = ops::graddiv(&state.a);
    at.axpy(-p.mu, &ops::curlcurl2d(&state.a));
    at.axpy(1.0, &a_explicit(state, b, &c));
    at.zero_normal_boundary();

    let mut lu = vec![0.0; n];
    kernels::laplacian(&g, &state.u.values, &mut lu, Bc::Dirichlet0);
    let dj = div_current(&g, &c);
    let psi = &state.psi.values;
    let mut ut: Vec<f64> = (0..n)
        .map(|k| ((psi[k].conj() * psit[k]).re + p.k0 * lu[k] + dj[k]) / p.c0)
        .collect();
    kernels::zero_boundary(&g, &mut ut);
    Ok(StateDot {
        psit: ComplexField::from_values(g, psit),
        at,
        ut: ScalarField::from_values(g, ut),
    })
}

pub fn step_explicit_euler(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    dt: f64,
) -> Result<State> {
    let dot = rhs(state, p, b)?;
    Ok(state.advanced(&dot, dt))
}

/// Implicit operators shared by the IMEX and linear-flow steppers.
#[derive(Debug, Clone)]
pub struct ImplicitOps {
    pub grid: Grid2D,
    w: Vec<f64>,
    w2: Vec<f64>,
    pub opts: CgOptions,
}

impl ImplicitOps {
    pub fn new(grid: Grid2D, tol: f64) -> Self {
        let w = grid.weights();
        let mut w2 = w.clone();
        w2.extend_from_slice(&w);
        Self {
            grid,
            w,
            w2,
            opts: CgOptions::with_tol(&grid, tol),
        }
    }

    /// Solves `(diag - coef * lap_N) x = rhs` for a complex field, componentwise.
    pub fn solve_psi(
        &self,
        diag: f64,
        coef: f64,
        rhs: &[Complex64],
        x: &mut [Complex64],
    ) -> Result<CgStats> {
        let g = self.grid;
        let n = g.len();
        let mut worst = CgStats {
            iterations: 0,
            residual: 0.0,
        };
        for part in 0..2 {
            let pick = |v: &Complex64| if part == 0 { v.re } else { v.im };
            let b: Vec<f64> = rhs.iter().map(pick).collect();
            let mut xs: Vec<f64> = x.iter().map(pick).collect();
            let st = cg(
                |v, o| {
                    kernels::laplacian(&g, v, o, Bc::Neumann);
                    for k in 0..n {
                        o[k] = diag * v[k] - coef * o[k];
                    }
                },
                &b,
                &mut xs,
                &self.w,
                self.opts,
            )?;
            for k in 0..n {
                if part == 0 {
                    x[k].re = xs[k];
                } else {
                    x[k].im = xs[k];
                }
            }
            worst.iterations = worst.iterations.max(st.iterations);
            worst.residual = worst.residual.max(st.residual);
        }
        Ok(worst)
    }

    /// Solves `(I - dt grad div + dt mu curl curl) x = rhs` on fields with
    /// zero normal boundary components.
    pub fn solve_a(
        &self,
        dt: f64,
        mu: f64,
        rhs: &VectorField,
        x: &mut VectorField,
    ) -> Result<CgStats> {
        let g = self.grid;
        let n = g.len();
        let mut b = rhs.x.clone();
        b.extend_from_slice(&rhs.y);
        let mut xs = x.x.clone();
        xs.extend_from_slice(&x.y);
        {
            let (bx, by) = b.split_at_mut(n);
            crate::field::zero_normal_components(&g, bx, by);
            let (xx, xy) = xs.split_at_mut(n);
            crate::field::zero_normal_components(&g, xx, xy);
        }
        let mut d = vec![0.0; n];
        let mut gx = vec![0.0; n];
        let mut gy = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut cx = vec![0.0; n];
        let mut cy = vec![0.0; n];
        let st = cg(
            |v, o| {
                let (vx, vy) = v.split_at(n);
                kernels::div(&g, vx, vy, &mut d);
                kernels::d_x(&g, &d, &mut gx, Bc::Neumann);
                kernels::d_y(&g, &d, &mut gy, Bc::Neumann);
                kernels::curl_masked(&g, vx, vy, &mut c);
                kernels::curl_adjoint(&g, &c, &mut cx, &mut cy);
                let (ox, oy) = o.split_at_mut(n);
                for k in 0..n {
                    ox[k] = vx[k] + dt * (mu * cx[k] - gx[k]);
                    oy[k] = vy[k] + dt * (mu * cy[k] - gy[k]);
                }
                crate::field::zero_normal_components(&g, ox, oy);
            },
            &b,
            &mut xs,
            &self.w2,
            self.opts,
        )?;
        x.x.copy_from_slice(&xs[..n]);
        x.y.copy_from_slice(&xs[n..]);
        Ok(st)
    }

    /// Solves `(diag - coef * lap_D) x = rhs` with `x = 0` on the boundary.
    pub fn solve_u(&self, diag: f64, coef: f64, rhs: &[f64], x: &mut [f64]) -> Result<CgStats> {
        let g = self.grid;
        let n = g.len();
        let mut b = rhs.to_vec();
        kernels::zero_boundary(&g, &mut b);
        kernels::zero_boundary(&g, x);
        cg(
            |v, o| {
                kernels::laplacian(&g, v, o, Bc::Dirichlet0);
                for k in 0..n {
                    o[k] = diag * v[k] - coef * o[k];
                }
                kernels::zero_boundary(&g, o);
            },
            &b,
            x,
            &self.w,
            self.opts,
        )
    }
}

/// Time stepper bound to one parameter set and one set of boundary data.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    pub params: &'a PhysicalParams,
    pub bdata: &'a BoundaryData,
    pub cfg: IntegratorConfig,
    pub ops: ImplicitOps,
}

impl<'a> Stepper<'a> {
    pub fn new(
        params: &'a PhysicalParams,
        bdata: &'a BoundaryData,
        cfg: IntegratorConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            params,
            bdata,
            cfg,
            ops: ImplicitOps::new(bdata.grid(), cfg.tol),
        })
    }

    pub fn step(&self, state: &State) -> Result<State> {
        match self.cfg.scheme {
            Scheme::Imex => self.step_imex(state),
            Scheme::ExplicitEuler => {
                step_explicit_euler(state, self.params, self.bdata, self.cfg.dt)
            }
        }
    }

    pub fn step_imex(&self, state: &State) -> Result<State> {
        step_imex_with(state, None, self.params, self.bdata, self.cfg.dt, &self.ops)
    }

    /// Step from `state` given the previous state; the implicit solves start
    /// from the linear extrapolation `2 z_n - z_{n-1}`. The result agrees with
    /// [`Stepper::step`] to solver tolerance.
    pub fn step_from(&self, state: &State, prev: Option<&State>) -> Result<State> {
        match (self.cfg.scheme, prev) {
            (Scheme::Imex, Some(prev)) => {
                let mut guess = state.scaled(2.0);
                guess.axpy(-1.0, prev);
                step_imex_with(
                    state,
                    Some(&guess),
                    self.params,
                    self.bdata,
                    self.cfg.dt,
                    &self.ops,
                )
            }
            _ => self.step(state),
        }
    }
}

pub fn step_imex(
    state: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    dt: f64,
    tol: f64,
) -> Result<State> {
    step_imex_with(state, None, p, b, dt, &ImplicitOps::new(state.grid(), tol))
}

fn step_imex_with(
    state: &State,
    guess: Option<&State>,
    p: &PhysicalParams,
    b: &BoundaryData,
    dt: f64,
    io: &ImplicitOps,
) -> Result<State> {
    let start = guess.unwrap_or(state);
    check_grids(state, b)?;
    let g = state.grid();
    let n = g.len();
    let c = Couplings::new(state, b, p.kappa);
    check_supercurrent(&c)?;

    let npsi = psi_explicit(state, p, b, &c);
    let psi = &state.psi.values;
    let rhs_psi: Vec<Complex64> = (0..n).map(|k| psi[k] * p.gamma + npsi[k] * dt).collect();
    let mut psi_new = start.psi.values.clone();
    io.solve_psi(p.gamma, dt / (p.kappa * p.kappa), &rhs_psi, &mut psi_new)?;

    let mut rhs_a = state.a.clone();
    rhs_a.axpy(dt, &a_explicit(state, b, &c));
    let mut a_new = start.a.clone();
    io.solve_a(dt, p.mu, &rhs_a, &mut a_new)?;

    let dj = div_current(&g, &c);
    let rhs_u: Vec<f64> = (0..n)
        .map(|k| {
            let couple = 0.5 * (psi_new[k].norm_sqr() - psi[k].norm_sqr());
            p.c0 * state.u.values[k] + couple + dt * dj[k]
        })
        .collect();
    let mut u_new = start.u.values.clone();
    io.solve_u(p.c0, dt * p.k0, &rhs_u, &mut u_new)?;

    Ok(State {
        psi: ComplexField::from_values(g, psi_new),
        a: a_new,
        u: ScalarField::from_values(g, u_new),
    })
}

/// One row of the diagnostic time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub l: f64,
    pub d: f64,
    pub z1: f64,
    pub z2: f64,
    pub grad_u: f64,
    pub div_a: f64,
    pub psit: f64,
    pub f2: f64,
}

impl TrajectoryRecord {
    pub fn evaluate(state: &State, p: &PhysicalParams, b: &BoundaryData, t: f64) -> Result<Self> {
        let dot = rhs(state, p, b)?;
        Ok(Self::with_dot(state, &dot, p, b, t))
    }

    pub fn with_dot(
        state: &State,
        dot: &StateDot,
        p: &PhysicalParams,
        b: &BoundaryData,
        t: f64,
    ) -> Self {
        Self {
            t,
            l: lyapunov(state, p, b),
            d: dissipation(state, dot, p),
            z1: z1_norm(state),
            z2: z2_norm(state),
            grad_u: ops::grad_norm_sq(&state.u).sqrt(),
            div_a: ops::div(&state.a).norm(),
            psit: dot.psit.norm(),
            f2: functionals::f2(state, p, b),
        }
    }

    pub fn values(&self) -> [f64; 9] {
        [
            self.t,
            self.l,
            self.d,
            self.z1,
            self.z2,
            self.grad_u,
            self.div_a,
            self.psit,
            self.f2,
        ]
    }
}

/// Per-step tolerance for the discrete monotonicity check.
pub fn tol_step(l: f64, d: f64, dt: f64, c_scheme: f64) -> f64 {
    1e-12 * l.abs().max(1.0) + c_scheme * dt * dt * (1.0 + d)
}

pub const C_SCHEME: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub final_state: State,
    pub steps: usize,
    /// Steps with `L(t+dt) > L(t) + tol_step`.
    pub violations: usize,
    /// Largest `L(t+dt) - L(t)` seen, possibly negative.
    pub max_increase: f64,
    /// Running `int (|psi_t|^2 + |A_t|^2)`.
    pub int_rates: f64,
    /// Running `int (|grad div A|^2 + |grad u|^2)`.
    pub int_regular: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulateOptions {
    pub t_end: f64,
    pub record_every: usize,
    /// Evaluate `L` and `D` every step for the monotonicity monitor.
    pub monitor: bool,
}

impl SimulateOptions {
    pub fn new(t_end: f64, record_every: usize) -> Self {
        Self {
            t_end,
            record_every: record_every.max(1),
            monitor: true,
        }
    }
}

pub fn step_count(t_end: f64, dt: f64) -> usize {
    (t_end / dt).round().max(0.0) as usize
}

pub fn simulate(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    opts: SimulateOptions,
) -> Result<Trajectory> {
    simulate_observed(z0, p, b, cfg, opts, |_, _, _| Ok(()))
}

/// Like [`simulate`], calling `observer(step, t, state)` after every step
/// (and once for the initial state).
pub fn simulate_observed(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    opts: SimulateOptions,
    mut observer: impl FnMut(usize, f64, &State) -> Result<()>,
) -> Result<Trajectory> {
    let stepper = Stepper::new(p, b, cfg)?;
    let n_steps = step_count(opts.t_end, cfg.dt).min(cfg.max_steps);
    let mut state = z0.clone();
    state.validate()?;
    let mut dot = rhs(&state, p, b)?;
    let rec = TrajectoryRecord::with_dot(&state, &dot, p, b, 0.0);
    let (mut l_prev, mut d_prev) = (rec.l, rec.d);
    let mut records = vec![rec];
    observer(0, 0.0, &state)?;
    let mut violations = 0;
    let mut max_increase = f64::NEG_INFINITY;
    let mut int_rates = 0.0;
    let mut int_regular = 0.0;
    let mut last_good_t = 0.0;
    let mut prev: Option<State> = None;
    for step in 1..=n_steps {
        let t = step as f64 * cfg.dt;
        let next = stepper.step_from(&state, prev.as_ref())?;
        if !next.is_finite() {
            return Err(GlsfError::NonFinite {
                step,
                t,
                last_good_t,
            });
        }
        let record_now = step % opts.record_every == 0 || step == n_steps;
        if opts.monitor || record_now {
            let next_dot = rhs(&next, p, b)?;
            let (l_next, d_next) = if record_now {
                let r = TrajectoryRecord::with_dot(&next, &next_dot, p, b, t);
                records.push(r);
                (r.l, r.d)
            } else {
                (lyapunov(&next, p, b), dissipation(&next, &next_dot, p))
            };
            if !(l_next.is_finite() && d_next.is_finite()) {
                return Err(GlsfError::NonFinite {
                    step,
                    t,
                    last_good_t,
                });
            }
            let inc = l_next - l_prev;
            max_increase = max_increase.max(inc);
            if inc > tol_step(l_prev, d_prev, cfg.dt, C_SCHEME) {
                violations += 1;
            }
            int_rates += cfg.dt * (dot.psit.inner(&dot.psit).re + dot.at.inner(&dot.at));
            let gd = ops::graddiv(&state.a);
            let gu = ops::grad(&state.u, Bc::Neumann);
            int_regular += cfg.dt * (gd.inner(&gd) + gu.inner(&gu));
            l_prev = l_next;
            d_prev = d_next;
            dot = next_dot;
        }
        prev = Some(std::mem::replace(&mut state, next));
        last_good_t = t;
        observer(step, t, &state)?;
    }
    Ok(Trajectory {
        records,
        final_state: state,
        steps: n_steps,
        violations,
        max_increase,
        int_rates,
        int_regular,
    })
}

/// `rho(t) = z1(z_1(t) - z_2(t))^2 / z1(z_01 - z_02)^2` at every recorded step.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceSeries {
    pub times: Vec<f64>,
    pub rho: Vec<f64>,
}

pub fn continuous_dependence_experiment(
    z01: &State,
    z02: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    t_end: f64,
    record_every: usize,
) -> Result<DependenceSeries> {
    let stepper = Stepper::new(p, b, cfg)?;
    let d0 = z1_norm(&z01.sub(z02)).powi(2);
    let n_steps = step_count(t_end, cfg.dt);
    let record_every = record_every.max(1);
    let (mut s1, mut s2) = (z01.clone(), z02.clone());
    let mut times = vec![0.0];
    let mut rho = vec![if d0 == 0.0 { 0.0 } else { 1.0 }];
    for step in 1..=n_steps {
        let (n1, n2) = rayon::join(|| stepper.step(&s1), || stepper.step(&s2));
        s1 = n1?;
        s2 = n2?;
        if step % record_every == 0 || step == n_steps {
            let t = step as f64 * cfg.dt;
            if !(s1.is_finite() && s2.is_finite()) {
                return Err(GlsfError::NonFinite {
                    step,
                    t,
                    last_good_t: times[times.len() - 1],
                });
            }
            times.push(t);
            let dist = z1_norm(&s1.sub(&s2)).powi(2);
            rho.push(if d0 == 0.0 { 0.0 } else { dist / d0 });
        }
    }
    Ok(DependenceSeries { times, rho })
}

/// Affine upper envelope `log rho <= a + b t`: least-squares slope, intercept
/// raised until every sample lies below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBound {
    pub intercept: f64,
    pub slope: f64,
}

pub fn fit_affine_upper_bound(times: &[f64], log_rho: &[f64]) -> Option<AffineBound> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(log_rho)
        .filter(|(_, y)| y.is_finite())
        .map(|(t, y)| (*t, *y))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (slope, _, _) = least_squares(&pts)?;
    let intercept = pts
        .iter()
        .map(|(t, y)| y - slope * t)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(AffineBound { intercept, slope })
}

/// Returns `(slope, intercept, r^2)`.
pub fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Some((slope, my - slope * mx, r2))
}

#[derive(Debug, Clone, PartialEq)]
pub enum HolderEstimate {
    /// All differences vanished: the trajectory sits on a fixed point.
    FixedPoint,
    Fitted {
        alpha: f64,
        c: f64,
        deltas: Vec<f64>,
        diffs: Vec<f64>,
    },
}

/// Fits `||S(t*+delta) z - S(t*) z||_Z1 ~ C delta^alpha` over
/// `delta = 2^-k t*`, `k = 4..=10`. The step is `t* 2^-12`.
pub fn holder_time_check(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    t_star: f64,
    tol: f64,
) -> Result<HolderEstimate> {
    let dt = t_star / 4096.0;
    let cfg = IntegratorConfig::imex(dt).with_tol(tol);
    let stepper = Stepper::new(p, b, cfg)?;
    let mut state = z0.clone();
    for _ in 0..4096 {
        state = stepper.step(&state)?;
    }
    let base = state.clone();
    let mut deltas = Vec::new();
    let mut diffs = Vec::new();
    // delta = 2^-k t* = 2^(12-k) steps; walk forward to the largest offset
    let offsets: Vec<usize> = (4..=10).rev().map(|k| 1usize << (12 - k)).collect();
    let mut taken = 0;
    for &off in &offsets {
        while taken < off {
            state = stepper.step(&state)?;
            taken += 1;
        }
        deltas.push(off as f64 * dt);
        diffs.push(z1_norm(&state.sub(&base)));
    }
    if diffs.iter().all(|d| *d == 0.0) {
        return Ok(HolderEstimate::FixedPoint);
    }
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| **d > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let (alpha, logc, _) = least_squares(&pts)
        .ok_or_else(|| GlsfError::Consistency("degenerate Holder fit".into()))?;
    Ok(HolderEstimate::Fitted {
        alpha,
        c: logc.exp(),
        deltas,
        diffs,
    })
}
