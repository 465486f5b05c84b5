//! Decomposition `z = z_l + z_k` of a trajectory into the solution of the
//! decaying linear system and a forced remainder.
//!
//! The linear system is
//! `gamma psi_t = (1/k^2) lap psi - psi`,
//! `A_t = grad div A - mu curl curl A - grad u`,
//! `c0 u_t = k0 lap u`,
//! and the forcings collect everything else, so that
//! `rhs(z) = linear_rhs(z) + (Upsilon/gamma, Theta, Gamma/c0)` holds exactly.
//! `z_k` is obtained by subtraction and checked against the forced system.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary::BoundaryData;
use crate::dynamics::{
    least_squares, rhs, step_count, ImplicitOps, IntegratorConfig, Stepper, TrajectoryRecord,
};
use crate::error::{GlsfError, Result};
use crate::field::{ComplexField, ScalarField, VectorField};
use crate::functionals::{z1_norm, z2_norm};
use crate::grid::Grid2D;
use crate::ops::{self, kernels, Bc};
use crate::params::PhysicalParams;
use crate::state::{State, StateDot};
use crate::terms::Couplings;

/// Bound on `max |z_l + z_k - z|` at recorded times.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

pub fn linear_rhs(state: &State, p: &PhysicalParams) -> StateDot {
    let g = state.grid();
    let n = g.len();
    let mut lap = vec![Complex64::default(); n];
    kernels::laplacian(&g, &state.psi.values, &mut lap, Bc::Neumann);
    let k2 = 1.0 / (p.kappa * p.kappa);
    let psit: Vec<Complex64> = (0..n)
        .map(|k| (lap[k] * k2 - state.psi.values[k]) / p.gamma)
        .collect();
    let mut at = ops::graddiv(&state.a);
    at.axpy(-p.mu, &ops::curlcurl2d(&state.a));
    at.axpy(-1.0, &ops::grad(&state.u, Bc::Neumann));
    at.zero_normal_boundary();
    let mut ut = ops::laplacian(&state.u, Bc::Dirichlet0).scaled(p.k0 / p.c0);
    ut.zero_boundary();
    StateDot {
        psit: ComplexField::from_values(g, psit),
        at,
        ut,
    }
}

/// `Upsilon`, `Theta`, `Gamma` on the full solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcings {
    pub upsilon: ComplexField,
    pub theta: VectorField,
    pub gamma: ScalarField,
}

impl Forcings {
    /// `(Upsilon/gamma, Theta, Gamma/c0)` as a time derivative.
    pub fn as_dot(&self, p: &PhysicalParams) -> StateDot {
        StateDot {
            psit: self.upsilon.scaled(1.0 / p.gamma),
            at: self.theta.clone(),
            ut: self.gamma.scaled(1.0 / p.c0),
        }
    }
}

/// Forcings of the split system; `psit` is the time derivative of `psi` on
/// the full solution and enters `Gamma` through `Re(conj(psi) psi_t)`.
pub fn forcings(
    state: &State,
    psit: &ComplexField,
    p: &PhysicalParams,
    b: &BoundaryData,
) -> Forcings {
    let g = state.grid();
    let n = g.len();
    let c = Couplings::new(state, b, p.kappa);
    let psi = &state.psi.values;
    let mut ups = c.skew_transport(&g, psi, p.kappa);
    let ikg = Complex64::new(0.0, p.kappa * p.gamma);
    for k in 0..n {
        let pot = c.a_sq(k) + c.rho[k] - 2.0 + state.u.values[k] + b.u_h.values[k];
        ups[k] += ikg * c.d[k] * psi[k] - psi[k] * pot;
    }
    let j = c.current();
    let mut theta = j.clone();
    theta.axpy(-1.0, &b.curl_g);
    theta.zero_normal_boundary();
    let mut dj = vec![0.0; n];
    kernels::div(&g, &j.x, &j.y, &mut dj);
    let mut gam: Vec<f64> = (0..n)
        .map(|k| (psi[k].conj() * psit.values[k]).re + dj[k])
        .collect();
    kernels::zero_boundary(&g, &mut gam);
    Forcings {
        upsilon: ComplexField::from_values(g, ups),
        theta,
        gamma: ScalarField::from_values(g, gam),
    }
}

/// Max-norm of `rhs(z) - linear_rhs(z) - forcings(z)`.
pub fn forcing_consistency(state: &State, p: &PhysicalParams, b: &BoundaryData) -> Result<f64> {
    let full = rhs(state, p, b)?;
    let f = forcings(state, &full.psit, p, b).as_dot(p);
    let lin = linear_rhs(state, p);
    let mut worst = 0.0f64;
    let g = state.grid();
    for k in 0..g.len() {
        worst = worst
            .max((full.psit.values[k] - lin.psit.values[k] - f.psit.values[k]).norm())
            .max((full.at.x[k] - lin.at.x[k] - f.at.x[k]).abs())
            .max((full.at.y[k] - lin.at.y[k] - f.at.y[k]).abs())
            .max((full.ut.values[k] - lin.ut.values[k] - f.ut.values[k]).abs());
    }
    Ok(worst)
}

/// Backward-Euler integrator for the linear system.
///
/// The solves stop at a tolerance relative to the right-hand side, so the
/// step is homogeneous: scaling the input by a power of two scales the output
/// bitwise.
#[derive(Debug, Clone)]
pub struct LinearFlow<'a> {
    pub params: &'a PhysicalParams,
    pub dt: f64,
    ops: ImplicitOps,
}

impl<'a> LinearFlow<'a> {
    pub fn new(params: &'a PhysicalParams, grid: Grid2D, dt: f64, tol: f64) -> Result<Self> {
        IntegratorConfig::imex(dt).with_tol(tol).validate()?;
        Ok(Self {
            params,
            dt,
            ops: ImplicitOps::new(grid, tol),
        })
    }

    fn scaled_ops(&self, scale: f64) -> ImplicitOps {
        let mut io = self.ops.clone();
        io.opts.tol *= scale;
        io
    }

    /// Order `u -> A -> psi`; the `A` solve sees the updated `u`.
    pub fn step(&self, z: &State) -> Result<State> {
        let p = self.params;
        let dt = self.dt;
        let g = z.grid();
        g.check_same(&self.ops.grid)?;
        let n = g.len();

        let rhs_u = z.u.scaled(p.c0);
        let mut u_new = z.u.values.clone();
        let s = rhs_u.max_abs();
        if s == 0.0 {
            u_new.iter_mut().for_each(|v| *v = 0.0);
        } else {
            self.scaled_ops(s)
                .solve_u(p.c0, dt * p.k0, &rhs_u.values, &mut u_new)?;
        }
        let u_new = ScalarField::from_values(g, u_new);

        let mut rhs_a = z.a.clone();
        rhs_a.axpy(-dt, &ops::grad(&u_new, Bc::Neumann));
        rhs_a.zero_normal_boundary();
        let mut a_new = z.a.clone();
        let s = rhs_a.max_abs();
        if s == 0.0 {
            a_new = VectorField::zeros(g);
        } else {
            self.scaled_ops(s).solve_a(dt, p.mu, &rhs_a, &mut a_new)?;
        }

        let rhs_psi: Vec<Complex64> = z.psi.values.iter().map(|v| v * p.gamma).collect();
        let mut psi_new = z.psi.values.clone();
        let s = rhs_psi
            .iter()
            .fold(0.0f64, |m, v| m.max(v.re.abs()).max(v.im.abs()));
        if s == 0.0 {
            psi_new = vec![Complex64::default(); n];
        } else {
            let k2 = 1.0 / (p.kappa * p.kappa);
            self.scaled_ops(s)
                .solve_psi(p.gamma + dt, dt * k2, &rhs_psi, &mut psi_new)?;
        }
        Ok(State {
            psi: ComplexField::from_values(g, psi_new),
            a: a_new,
            u: u_new,
        })
    }

    pub fn advance(&self, z: &State, steps: usize) -> Result<State> {
        let mut s = z.clone();
        for _ in 0..steps {
            s = self.step(&s)?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSeries {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Steps where `z1_norm` increased by more than roundoff.
    pub norm_increases: usize,
}

pub fn simulate_linear(
    z0: &State,
    p: &PhysicalParams,
    dt: f64,
    t_end: f64,
    record_every: usize,
    tol: f64,
) -> Result<LinearSeries> {
    let flow = LinearFlow::new(p, z0.grid(), dt, tol)?;
    let n_steps = step_count(t_end, dt);
    let record_every = record_every.max(1);
    let mut z = z0.clone();
    let mut times = vec![0.0];
    let mut states = vec![z.clone()];
    let mut norm = z1_norm(&z);
    let mut norm_increases = 0;
    for step in 1..=n_steps {
        z = flow.step(&z)?;
        let next = z1_norm(&z);
        if next > norm * (1.0 + 1e-12) + 1e-300 {
            norm_increases += 1;
        }
        norm = next;
        if step % record_every == 0 || step == n_steps {
            times.push(step as f64 * dt);
            states.push(z.clone());
        }
    }
    Ok(LinearSeries {
        times,
        states,
        norm_increases,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayFit {
    /// Every norm in the fit window is below the cutoff.
    AlreadyZero,
    Fitted {
        nu: f64,
        m1: f64,
        r_squared: f64,
    },
}

/// Norms below this are excluded from the decay fit.
pub const DECAY_NORM_CUTOFF: f64 = 1e-12;

/// Fits `log norm = log m1 - nu t`, dropping the first 10% of the time span
/// and every sample from the first norm below the cutoff on.
pub fn fit_decay_rate(times: &[f64], norms: &[f64]) -> DecayFit {
    let (Some(t0), Some(t1)) = (times.first(), times.last()) else {
        return DecayFit::AlreadyZero;
    };
    let start = t0 + 0.1 * (t1 - t0);
    let mut pts = Vec::new();
    for (t, v) in times.iter().zip(norms) {
        if *v < DECAY_NORM_CUTOFF {
            break;
        }
        if *t >= start {
            pts.push((*t, v.ln()));
        }
    }
    match least_squares(&pts) {
        Some((slope, intercept, r2)) => DecayFit::Fitted {
            nu: -slope,
            m1: intercept.exp(),
            r_squared: r2,
        },
        None => DecayFit::AlreadyZero,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitTrajectory {
    pub times: Vec<f64>,
    pub z_l: Vec<State>,
    pub z_k: Vec<State>,
    pub decay: DecayFit,
    pub z_k_z2: Vec<f64>,
    /// `(t, r)` with `r` the Z1 norm of the forced-system residual of `z_k`
    /// over the step starting at `t`.
    pub forced_residual: Vec<(f64, f64)>,
    /// Largest `max |z_l + z_k - z|` over recorded times.
    pub reconstruction: f64,
}

impl SplitTrajectory {
    /// Residual recorded at the time closest to `t`.
    pub fn residual_near(&self, t: f64) -> Option<f64> {
        self.forced_residual
            .iter()
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
            .map(|r| r.1)
    }
}

/// Z1 norm of
/// `(z_k' - z_k)/dt - linear_rhs(z_k) - forcings(z)`,
/// with `z_k = z - z_l` at both ends of one step.
pub fn forced_residual(
    z: &State,
    z_next: &State,
    zl: &State,
    zl_next: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    dt: f64,
) -> Result<f64> {
    let zk = z.sub(zl);
    let zk_next = z_next.sub(zl_next);
    let full = rhs(z, p, b)?;
    let f = forcings(z, &full.psit, p, b).as_dot(p);
    let lin = linear_rhs(&zk, p);
    let mut r = zk_next.sub(&zk).scaled(1.0 / dt);
    r.axpy(-1.0, &lin.as_state());
    r.axpy(-1.0, &f.as_state());
    Ok(z1_norm(&r))
}

/// Runs the full and the linear flow in lockstep. The forced residual is
/// evaluated over the step following each recorded time.
pub fn split(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    t_end: f64,
    record_every: usize,
) -> Result<SplitTrajectory> {
    let stepper = Stepper::new(p, b, cfg)?;
    let flow = LinearFlow::new(p, z0.grid(), cfg.dt, cfg.tol)?;
    let n_steps = step_count(t_end, cfg.dt);
    let record_every = record_every.max(1);
    let mut z = z0.clone();
    let mut zl = z0.clone();
    let mut prev: Option<State> = None;
    let mut out = SplitTrajectory {
        times: Vec::new(),
        z_l: Vec::new(),
        z_k: Vec::new(),
        decay: DecayFit::AlreadyZero,
        z_k_z2: Vec::new(),
        forced_residual: Vec::new(),
        reconstruction: 0.0,
    };
    let record = |out: &mut SplitTrajectory, t: f64, z: &State, zl: &State| -> Result<()> {
        let zk = z.sub(zl);
        let err = zl.add(&zk).sub(z).max_abs();
        if !(err <= RECONSTRUCTION_TOL) {
            return Err(GlsfError::Consistency(format!(
                "split reconstruction error {err:.3e} at t = {t}"
            )));
        }
        out.reconstruction = out.reconstruction.max(err);
        out.times.push(t);
        out.z_k_z2.push(z2_norm(&zk));
        out.z_l.push(zl.clone());
        out.z_k.push(zk);
        Ok(())
    };
    record(&mut out, 0.0, &z, &zl)?;
    for step in 1..=n_steps {
        let t = step as f64 * cfg.dt;
        let z_next = stepper.step_from(&z, prev.as_ref())?;
        let zl_next = flow.step(&zl)?;
        if !(z_next.is_finite() && zl_next.is_finite()) {
            return Err(GlsfError::NonFinite {
                step,
                t,
                last_good_t: t - cfg.dt,
            });
        }
        if (step - 1) % record_every == 0 {
            let r = forced_residual(&z, &z_next, &zl, &zl_next, p, b, cfg.dt)?;
            out.forced_residual.push(((step - 1) as f64 * cfg.dt, r));
        }
        prev = Some(std::mem::replace(&mut z, z_next));
        zl = zl_next;
        if step % record_every == 0 || step == n_steps {
            record(&mut out, t, &z, &zl)?;
        }
    }
    let norms: Vec<f64> = out.z_l.iter().map(z1_norm).collect();
    out.decay = fit_decay_rate(&out.times, &norms);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionSweep {
    pub t_stars: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Smallest swept `t*` with `lambda < 1/2`.
    pub first_below_half: Option<f64>,
}

impl ContractionSweep {
    pub fn non_increasing(&self) -> bool {
        self.lambdas
            .windows(2)
            .all(|w| w[1] <= w[0] * (1.0 + 1e-12))
    }
}

/// `lambda(t*) = max z1(flow(delta, t*)) / z1(delta)` over the sample
/// differences, for every `t*` in `t_stars` (ascending). The linear flow is
/// linear, so differences of images equal images of differences.
pub fn contraction_estimate(
    deltas: &[State],
    p: &PhysicalParams,
    t_stars: &[f64],
    dt: f64,
    tol: f64,
) -> Result<ContractionSweep> {
    if deltas.is_empty() {
        return Err(GlsfError::Consistency(
            "contraction sweep needs at least one sample".into(),
        ));
    }
    if t_stars.windows(2).any(|w| w[1] < w[0]) {
        return Err(GlsfError::Consistency(
            "contraction sweep times must ascend".into(),
        ));
    }
    let flow = LinearFlow::new(p, deltas[0].grid(), dt, tol)?;
    let per_delta: Vec<Vec<f64>> = deltas
        .par_iter()
        .map(|d| -> Result<Vec<f64>> {
            let n0 = z1_norm(d);
            let mut s = d.clone();
            let mut taken = 0;
            let mut ratios = Vec::with_capacity(t_stars.len());
            for &t in t_stars {
                let target = step_count(t, dt);
                s = flow.advance(&s, target - taken)?;
                taken = target;
                ratios.push(z1_norm(&s) / n0);
            }
            Ok(ratios)
        })
        .collect::<Result<_>>()?;
    let lambdas: Vec<f64> = (0..t_stars.len())
        .map(|i| per_delta.iter().map(|r| r[i]).fold(0.0, f64::max))
        .collect();
    let first_below_half = t_stars
        .iter()
        .zip(&lambdas)
        .find(|(_, l)| **l < 0.5)
        .map(|(t, _)| *t);
    Ok(ContractionSweep {
        t_stars: t_stars.to_vec(),
        lambdas,
        first_below_half,
    })
}

/// `K(z) = S(t*) z - flow(z, t*)`.
pub fn smoothing_part(
    z0: &State,
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    t_star: f64,
) -> Result<State> {
    let steps = step_count(t_star, cfg.dt);
    let stepper = Stepper::new(p, b, cfg)?;
    let mut z = z0.clone();
    for _ in 0..steps {
        z = stepper.step(&z)?;
    }
    let zl = LinearFlow::new(p, z0.grid(), cfg.dt, cfg.tol)?.advance(z0, steps)?;
    Ok(z.sub(&zl))
}

/// `Lambda = max z2(K(z1) - K(z2)) / z1(z1(0) - z2(0))` over the pairs.
pub fn smoothing_estimate(
    pairs: &[(State, State)],
    p: &PhysicalParams,
    b: &BoundaryData,
    cfg: IntegratorConfig,
    t_star: f64,
) -> Result<f64> {
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|(a, c)| -> Result<f64> {
            let d0 = z1_norm(&a.sub(c));
            if d0 == 0.0 {
                return Ok(0.0);
            }
            let (ka, kc) = rayon::join(
                || smoothing_part(a, p, b, cfg, t_star),
                || smoothing_part(c, p, b, cfg, t_star),
            );
            Ok(z2_norm(&ka?.sub(&kc?)) / d0)
        })
        .collect::<Result<_>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Tail statistics of one trajectory's regularity series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauStats {
    pub z2_sup_tail: f64,
    pub f2_sup_tail: f64,
    /// `(max - min)` of `z2` over `[T/2, T]` divided by its max over `[0, T]`.
    pub z2_variation: f64,
    pub f2_variation: f64,
}

fn tail_variation(
    records: &[&TrajectoryRecord],
    t_half: f64,
    get: impl Fn(&TrajectoryRecord) -> f64,
) -> (f64, f64) {
    let whole = records.iter().map(|r| get(r)).fold(0.0f64, f64::max);
    let tail: Vec<f64> = records
        .iter()
        .filter(|r| r.t >= t_half)
        .map(|r| get(r))
        .collect();
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let var = if whole > 0.0 { (hi - lo) / whole } else { 0.0 };
    (hi, var)
}

/// Plateau statistics of the records with `t <= t_end`, tail `[t_end/2, t_end]`.
pub fn plateau_stats(records: &[TrajectoryRecord], t_end: f64) -> PlateauStats {
    let eps = 1e-9 * t_end.abs().max(1.0);
    let upto: Vec<&TrajectoryRecord> = records.iter().filter(|r| r.t <= t_end + eps).collect();
    let half = 0.5 * t_end - eps;
    let (z2_sup_tail, z2_variation) = tail_variation(&upto, half, |r| r.z2);
    let (f2_sup_tail, f2_variation) = tail_variation(&upto, half, |r| r.f2);
    PlateauStats {
        z2_sup_tail,
        f2_sup_tail,
        z2_variation,
        f2_variation,
    }
}

/// Plateau threshold on the tail variation.
pub const PLATEAU_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingReport {
    pub runs: Vec<PlateauStats>,
    /// Common bound: max over runs of the tail sup of `z2`.
    pub r2_hat: f64,
    pub all_plateau: bool,
}

pub fn absorbing_diagnostics(runs: &[Vec<TrajectoryRecord>], t_end: f64) -> AbsorbingReport {
    let stats: Vec<PlateauStats> = runs.iter().map(|r| plateau_stats(r, t_end)).collect();
    let r2_hat = stats.iter().map(|s| s.z2_sup_tail).fold(0.0, f64::max);
    let all_plateau = stats
        .iter()
        .all(|s| s.z2_variation <= PLATEAU_TOL && s.f2_variation <= PLATEAU_TOL);
    AbsorbingReport {
        runs: stats,
        r2_hat,
        all_plateau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_superfluid_forcings() {
        let g = Grid2D::unit_square(8).unwrap();
        let b = BoundaryData::zero(g);
        let p = PhysicalParams::unit();
        let z = State::uniform(g, Complex64::new(1.0, 0.0));
        let f = forcings(&z, &ComplexField::zeros(g), &p, &b);
        for v in &f.upsilon.values {
            assert_eq!(*v, Complex64::new(1.0, 0.0));
        }
        assert_eq!(f.theta.max_abs(), 0.0);
        assert_eq!(f.gamma.max_abs(), 0.0);
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = Grid2D::unit_square(8).unwrap();
        let p = PhysicalParams::unit();
        let z = State::zeros(g);
        assert_eq!(linear_rhs(&z, &p).max_abs(), 0.0);
        let flow = LinearFlow::new(&p, g, 1e-2, 1e-10).unwrap();
        assert_eq!(flow.advance(&z, 5).unwrap(), z);
    }

    #[test]
    fn decay_fit_of_exact_exponential() {
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let norms: Vec<f64> = times.iter().map(|t| 3.0 * (-2.0 * t).exp()).collect();
        match fit_decay_rate(&times, &norms) {
            DecayFit::Fitted { nu, m1, r_squared } => {
                assert!((nu - 2.0).abs() < 1e-12);
                assert!((m1 - 3.0).abs() < 1e-11);
                assert!(r_squared > 1.0 - 1e-12);
            }
            DecayFit::AlreadyZero => panic!("expected a fit"),
        }
        assert_eq!(
            fit_decay_rate(&times, &vec![0.0; 50]),
            DecayFit::AlreadyZero
        );
    }
}
