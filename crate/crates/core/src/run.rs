//! Experiment drivers behind the `glsf` command line.
//!
//! Every run writes `config.txt` (the canonical echo of its configuration)
//! and `report.txt` into the output directory; trajectory experiments also
//! write `series.csv` and `state_<step>.fld` snapshots. Report lines are
//! `PASS <check> ...`, `FAIL <check> ...` or `metric <name> = <value>`, and
//! the last line is `verdict: PASS` or `verdict: FAIL`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::boundary::BoundaryData;
use crate::config::{Experiment, InitKind, RunConfig};
use crate::dynamics::{
    continuous_dependence_experiment, fit_affine_upper_bound, simulate_observed, step_count,
    step_explicit_euler, IntegratorConfig, SimulateOptions, Stepper, TrajectoryRecord,
};
use crate::error::Result;
use crate::functionals::{q_leading_minors, q_min_eigenvalue, z1_norm};
use crate::grid::Grid2D;
use crate::init::{random_perturbation, random_smooth_state};
use crate::io::{fmt_f64, write_series, write_snapshot};
use crate::params::derive_params;
use crate::splitting::{split, DecayFit, RECONSTRUCTION_TOL};
use crate::state::State;
use crate::stationary::{find_stationary, reduced_residual, stationary_properties_check};

/// Verdicts and metrics of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub checks: Vec<(String, bool, String)>,
    pub metrics: Vec<(String, String)>,
}

impl Report {
    fn new(e: Experiment) -> Self {
        Self {
            experiment: e.name().into(),
            ..Self::default()
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), pass, detail.into()));
    }

    pub fn metric(&mut self, name: &str, v: f64) {
        self.metrics.push((name.into(), fmt_f64(v)));
    }

    pub fn metric_text(&mut self, name: &str, v: impl ToString) {
        self.metrics.push((name.into(), v.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("experiment: {}\n", self.experiment);
        for (name, pass, detail) in &self.checks {
            let _ = writeln!(s, "{} {name} {detail}", if *pass { "PASS" } else { "FAIL" });
        }
        for (name, v) in &self.metrics {
            let _ = writeln!(s, "metric {name} = {v}");
        }
        let _ = writeln!(
            s,
            "verdict: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }
}

pub fn initial_state(cfg: &RunConfig, g: Grid2D) -> State {
    match cfg.init {
        InitKind::Random => random_smooth_state(g, cfg.seed, cfg.radius),
        InitKind::Superfluid => State::uniform(g, Complex64::new(1.0, 0.0)),
        InitKind::Normal => State::zeros(g),
        InitKind::Half => State::uniform(g, Complex64::new(0.5, 0.0)),
    }
}

pub fn boundary_data(cfg: &RunConfig, g: Grid2D) -> Result<BoundaryData> {
    BoundaryData::build(g, cfg.omega, cfg.u_b, cfg.g, cfg.solver_tol)
}

fn snapshot_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(format!("state_{step}.fld"))
}

/// Runs the configured experiment, writing artifacts under `cfg.out`. The
/// report is written even when checks fail; errors abort after keeping the
/// artifacts written so far.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("config.txt"), cfg.to_text())?;
    let report = match cfg.experiment {
        Experiment::Simulate => run_simulate(cfg)?,
        Experiment::Stationary => run_stationary(cfg)?,
        Experiment::Split => run_split(cfg)?,
        Experiment::Qcheck => run_qcheck(cfg)?,
        Experiment::Depcheck => run_depcheck(cfg)?,
        Experiment::Oracle => run_oracle(cfg)?,
    };
    fs::write(cfg.out.join("report.txt"), report.to_text())?;
    Ok(report)
}

fn run_simulate(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.grid()?;
    let p = cfg.params()?;
    let b = boundary_data(cfg, g)?;
    let z0 = initial_state(cfg, g);
    let icfg = cfg.integrator();
    let n_steps = step_count(cfg.t_end, cfg.dt).min(icfg.max_steps);
    let out = cfg.out.clone();
    let every = cfg.snapshot_every;
    let traj = simulate_observed(
        &z0,
        &p,
        &b,
        icfg,
        SimulateOptions::new(cfg.t_end, cfg.record_every),
        |step, _, s| {
            if step == 0 || step == n_steps || (every > 0 && step % every == 0) {
                write_snapshot(s, &snapshot_path(&out, step))?;
            }
            Ok(())
        },
    )?;
    write_series(&traj.records, &cfg.out.join("series.csv"))?;
    let mut r = Report::new(Experiment::Simulate);
    r.check(
        "lyapunov_monotone",
        traj.violations == 0,
        format!("violations={} steps={}", traj.violations, traj.steps),
    );
    r.metric_text("steps", traj.steps);
    r.metric_text("violations", traj.violations);
    r.metric("max_increase", traj.max_increase);
    r.metric("L_initial", traj.records[0].l);
    r.metric("L_final", traj.records[traj.records.len() - 1].l);
    r.metric(
        "z2_max",
        traj.records.iter().map(|x| x.z2).fold(0.0, f64::max),
    );
    r.metric(
        "F2_max",
        traj.records.iter().map(|x| x.f2).fold(0.0, f64::max),
    );
    r.metric("int_rates", traj.int_rates);
    r.metric("int_regular", traj.int_regular);
    if b.g_incompatible {
        r.metric("g_residual", b.g_residual);
    }
    Ok(r)
}

fn run_stationary(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.grid()?;
    let p = cfg.params()?;
    let b = boundary_data(cfg, g)?;
    let z0 = initial_state(cfg, g);
    write_snapshot(&z0, &snapshot_path(&cfg.out, 0))?;
    let out = find_stationary(&z0, &p, &b, cfg.stat_tol, cfg.t_end, cfg.integrator())?;
    let steps = step_count(out.t, cfg.dt);
    write_snapshot(&out.state, &snapshot_path(&cfg.out, steps))?;
    write_series(
        &[
            TrajectoryRecord::evaluate(&z0, &p, &b, 0.0)?,
            TrajectoryRecord::evaluate(&out.state, &p, &b, out.t)?,
        ],
        &cfg.out.join("series.csv"),
    )?;
    let tol = cfg.stat_tol;
    let props = stationary_properties_check(&out.state, tol);
    let red = reduced_residual(&out.state, &p, &b);
    let mut r = Report::new(Experiment::Stationary);
    r.check(
        "converged",
        out.converged,
        format!("t={} D={:e}", out.t, out.d),
    );
    r.check(
        "residuals",
        out.residual.max() <= 10.0 * tol,
        format!("max={:e} bound={:e}", out.residual.max(), 10.0 * tol),
    );
    r.check(
        "u_and_divA_vanish",
        props.pass,
        format!("u={:e} divA={:e} tol={tol:e}", props.u_norm, props.div_a),
    );
    r.metric("t", out.t);
    r.metric("L", out.l);
    r.metric("D", out.d);
    r.metric("r_psi", out.residual.r_psi);
    r.metric("r_A", out.residual.r_a);
    r.metric("r_u", out.residual.r_u);
    r.metric("grad_u", out.residual.grad_u);
    r.metric("divA", out.residual.div_a);
    r.metric("reduced_r_psi", red.r_psi);
    r.metric("reduced_r_A", red.r_a);
    r.metric_text("reduced_precondition_warning", red.precondition_warning);
    r.metric("z1", props.z1);
    r.metric("mean_abs_psi_sq", mean_abs_psi_sq(&out.state));
    Ok(r)
}

fn mean_abs_psi_sq(s: &State) -> f64 {
    let g = s.grid();
    crate::ops::integrate(&s.psi.modulus_sq()) / (g.lx * g.ly)
}

fn run_split(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.grid()?;
    let p = cfg.params()?;
    let b = boundary_data(cfg, g)?;
    let z0 = initial_state(cfg, g);
    let s = split(&z0, &p, &b, cfg.integrator(), cfg.t_end, cfg.record_every)?;
    let mut records = Vec::with_capacity(s.times.len());
    let mut table = String::from("t,zl_z1,zk_z2,forced_residual\n");
    for (i, t) in s.times.iter().enumerate() {
        let z = s.z_l[i].add(&s.z_k[i]);
        records.push(TrajectoryRecord::evaluate(&z, &p, &b, *t)?);
        let res = s
            .forced_residual
            .iter()
            .find(|r| (r.0 - t).abs() <= 0.5 * cfg.dt)
            .map(|r| fmt_f64(r.1))
            .unwrap_or_default();
        let _ = writeln!(
            table,
            "{},{},{},{res}",
            fmt_f64(*t),
            fmt_f64(z1_norm(&s.z_l[i])),
            fmt_f64(s.z_k_z2[i])
        );
    }
    write_series(&records, &cfg.out.join("series.csv"))?;
    fs::write(cfg.out.join("split.csv"), table)?;
    write_snapshot(&z0, &snapshot_path(&cfg.out, 0))?;
    let last = s.times.len() - 1;
    write_snapshot(
        &s.z_l[last].add(&s.z_k[last]),
        &snapshot_path(&cfg.out, step_count(cfg.t_end, cfg.dt)),
    )?;
    let mut r = Report::new(Experiment::Split);
    r.check(
        "reconstruction",
        s.reconstruction <= RECONSTRUCTION_TOL,
        format!("max={:e}", s.reconstruction),
    );
    match s.decay {
        DecayFit::Fitted { nu, m1, r_squared } => {
            r.check("linear_decay", nu > 0.0, format!("nu={nu} r2={r_squared}"));
            r.metric("nu", nu);
            r.metric("m1", m1);
            r.metric("r_squared", r_squared);
        }
        DecayFit::AlreadyZero => r.check("linear_decay", true, "already zero"),
    }
    r.metric("zk_z2_max", s.z_k_z2.iter().copied().fold(0.0, f64::max));
    if let Some(res) = s.residual_near(0.5 * cfg.t_end) {
        r.metric("forced_residual_mid", res);
    }
    Ok(r)
}

fn run_qcheck(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new(Experiment::Qcheck);
    let mut all = true;
    for &k0 in &cfg.k0_sweep {
        let p = derive_params(cfg.gamma, cfg.kappa, cfg.mu, cfg.c0, k0)?;
        let lam = q_min_eigenvalue(&p);
        let m = q_leading_minors(&p);
        all &= lam > 0.0;
        r.metric(&format!("k0={k0:?} min_eigenvalue"), lam);
        r.metric_text(
            &format!("k0={k0:?} leading_minors"),
            m.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" "),
        );
    }
    r.check(
        "q_positive_definite",
        all,
        format!("k0 values={}", cfg.k0_sweep.len()),
    );
    Ok(r)
}

/// Largest `|rho_a / rho_b - 1|` over samples where both are positive.
pub fn linear_response_gap(rho_a: &[f64], rho_b: &[f64]) -> f64 {
    rho_a
        .iter()
        .zip(rho_b)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a / b - 1.0).abs())
        .fold(0.0, f64::max)
}

fn run_depcheck(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.grid()?;
    let p = cfg.params()?;
    let b = boundary_data(cfg, g)?;
    let z01 = initial_state(cfg, g);
    let delta = random_perturbation(g, cfg.seed.wrapping_add(1), cfg.dep_eps);
    let mut z02 = z01.clone();
    z02.axpy(1.0, &delta);
    let mut z03 = z01.clone();
    z03.axpy(0.1, &delta);
    let icfg = cfg.integrator();
    let (a, c) = rayon::join(
        || continuous_dependence_experiment(&z01, &z02, &p, &b, icfg, cfg.t_end, cfg.record_every),
        || continuous_dependence_experiment(&z01, &z03, &p, &b, icfg, cfg.t_end, cfg.record_every),
    );
    let (a, c) = (a?, c?);
    let mut table = String::from("t,rho,rho_small\n");
    for i in 0..a.times.len() {
        let _ = writeln!(
            table,
            "{},{},{}",
            fmt_f64(a.times[i]),
            fmt_f64(a.rho[i]),
            fmt_f64(c.rho[i])
        );
    }
    fs::write(cfg.out.join("dependence.csv"), table)?;
    let log_rho: Vec<f64> = a.rho.iter().map(|v| v.ln()).collect();
    let bound = fit_affine_upper_bound(&a.times, &log_rho);
    let gap = linear_response_gap(&a.rho, &c.rho);
    let mut r = Report::new(Experiment::Depcheck);
    match bound {
        Some(bd) => {
            r.check(
                "affine_log_bound",
                bd.slope.is_finite() && bd.intercept.is_finite(),
                format!("a={} b={}", bd.intercept, bd.slope),
            );
            r.metric("bound_intercept", bd.intercept);
            r.metric("bound_slope", bd.slope);
        }
        None => r.check("affine_log_bound", false, "fewer than two finite samples"),
    }
    r.check("linear_response", gap <= 0.1, format!("max_rel_gap={gap}"));
    r.metric("rho_max", a.rho.iter().copied().fold(0.0, f64::max));
    r.metric("rho_final", a.rho[a.rho.len() - 1]);
    Ok(r)
}

fn run_oracle(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.grid()?;
    let p = cfg.params()?;
    let b = boundary_data(cfg, g)?;
    let z0 = initial_state(cfg, g);
    let (imex, explicit) = oracle_pair(
        &z0,
        &p,
        &b,
        cfg.integrator(),
        cfg.t_end,
        cfg.oracle_substeps,
    )?;
    let rel = z1_norm(&imex.sub(&explicit)) / z1_norm(&explicit).max(f64::MIN_POSITIVE);
    write_snapshot(&z0, &snapshot_path(&cfg.out, 0))?;
    write_snapshot(
        &imex,
        &snapshot_path(&cfg.out, step_count(cfg.t_end, cfg.dt)),
    )?;
    write_series(
        &[
            TrajectoryRecord::evaluate(&z0, &p, &b, 0.0)?,
            TrajectoryRecord::evaluate(&imex, &p, &b, cfg.t_end)?,
        ],
        &cfg.out.join("series.csv"),
    )?;
    let mut r = Report::new(Experiment::Oracle);
    r.check(
        "imex_matches_explicit",
        rel <= 1e-3,
        format!("rel_z1={rel:e}"),
    );
    r.metric("rel_z1", rel);
    r.metric("explicit_dt", cfg.dt / cfg.oracle_substeps as f64);
    Ok(r)
}

/// Final states of the IMEX run and of explicit Euler with `substeps` steps
/// per IMEX step.
pub fn oracle_pair(
    z0: &State,
    p: &crate::params::PhysicalParams,
    b: &BoundaryData,
    icfg: IntegratorConfig,
    t_end: f64,
    substeps: usize,
) -> Result<(State, State)> {
    let steps = step_count(t_end, icfg.dt);
    let stepper = Stepper::new(
        p,
        b,
        IntegratorConfig {
            scheme: crate::dynamics::Scheme::Imex,
            ..icfg
        },
    )?;
    let edt = icfg.dt / substeps as f64;
    let (a, e) = rayon::join(
        || -> Result<State> {
            let mut s = z0.clone();
            for _ in 0..steps {
                s = stepper.step(&s)?;
            }
            Ok(s)
        },
        || -> Result<State> {
            let mut s = z0.clone();
            for _ in 0..steps * substeps {
                s = step_explicit_euler(&s, p, b, edt)?;
            }
            Ok(s)
        },
    );
    Ok((a?, e?))
}
