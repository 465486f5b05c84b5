//! Nonlinear coupling terms shared by the functionals and the dynamics.
//!
//! With `A = A_hat + A_H`, `G` the Neumann gradient and `div` its negative
//! adjoint, the discrete kinetic energy is
//! `(1/k^2)|grad_e psi|^2 + sum w |psi|^2 |A|^2 - 2 <A, J_s>` with the
//! supercurrent `J_s = (1/k) Im(conj(psi) G psi)`. Its exact variation in
//! `psi` produces the skew term `-(i/k) [div(A psi) + A . G psi]`.

use num_complex::Complex64;

use crate::boundary::BoundaryData;
use crate::field::{ComplexField, ScalarField, VectorField};
use crate::grid::Grid2D;
use crate::ops::{kernels, Bc};
use crate::state::State;

/// Everything the right-hand side and the energy need from one state.
#[derive(Debug, Clone)]
pub struct Couplings {
    /// `A_hat + A_H`
    pub a: VectorField,
    pub gx: Vec<Complex64>,
    pub gy: Vec<Complex64>,
    /// `|psi|^2`
    pub rho: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
    /// `div A_hat`
    pub d: Vec<f64>,
    /// Largest discarded imaginary part of the supercurrent.
    pub sc_imag: f64,
}

impl Couplings {
    pub fn new(state: &State, bdata: &BoundaryData, kappa: f64) -> Self {
        let g = state.grid();
        let n = g.len();
        let a = state.a.add(&bdata.a_h);
        let psi = &state.psi.values;
        let mut gx = vec![Complex64::default(); n];
        let mut gy = vec![Complex64::default(); n];
        kernels::d_x(&g, psi, &mut gx, Bc::Neumann);
        kernels::d_y(&g, psi, &mut gy, Bc::Neumann);
        let rho: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
        let (jx, jy, sc_imag) = supercurrent(psi, &gx, &gy, kappa);
        let mut d = vec![0.0; n];
        kernels::div(&g, &state.a.x, &state.a.y, &mut d);
        Self {
            a,
            gx,
            gy,
            rho,
            jx,
            jy,
            d,
            sc_imag,
        }
    }

    /// `-(i/k) [div(A psi) + A . G psi]`
    pub fn skew_transport(&self, g: &Grid2D, psi: &[Complex64], kappa: f64) -> Vec<Complex64> {
        let n = g.len();
        let ax: Vec<Complex64> = psi.iter().zip(&self.a.x).map(|(p, a)| p * a).collect();
        let ay: Vec<Complex64> = psi.iter().zip(&self.a.y).map(|(p, a)| p * a).collect();
        let mut out = vec![Complex64::default(); n];
        kernels::div(g, &ax, &ay, &mut out);
        let f = Complex64::new(0.0, -1.0 / kappa);
        for k in 0..n {
            out[k] = f * (out[k] + self.gx[k] * self.a.x[k] + self.gy[k] * self.a.y[k]);
        }
        out
    }

    /// `|A|^2`
    pub fn a_sq(&self, k: usize) -> f64 {
        self.a.x[k] * self.a.x[k] + self.a.y[k] * self.a.y[k]
    }

    /// `J = -|psi|^2 A + J_s`, the flux appearing in the temperature equation.
    pub fn current(&self) -> VectorField {
        let g = self.a.grid;
        let n = g.len();
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for k in 0..n {
            x[k] = -self.rho[k] * self.a.x[k] + self.jx[k];
            y[k] = -self.rho[k] * self.a.y[k] + self.jy[k];
        }
        VectorField::from_components(g, x, y)
    }

    pub fn supercurrent_field(&self) -> VectorField {
        VectorField::from_components(self.a.grid, self.jx.clone(), self.jy.clone())
    }
}

/// `(i/2k)(psi grad conj(psi) - conj(psi) grad psi)` evaluated in complex
/// arithmetic; returns the real part and the largest imaginary residue.
pub fn supercurrent(
    psi: &[Complex64],
    gx: &[Complex64],
    gy: &[Complex64],
    kappa: f64,
) -> (Vec<f64>, Vec<f64>, f64) {
    let f = Complex64::new(0.0, 0.5 / kappa);
    let mut imag: f64 = 0.0;
    let mut comp = |grad: &[Complex64]| -> Vec<f64> {
        psi.iter()
            .zip(grad)
            .map(|(p, dp)| {
                let v = f * (p * dp.conj() - p.conj() * dp);
                imag = imag.max(v.im.abs());
                v.re
            })
            .collect()
    };
    let x = comp(gx);
    let y = comp(gy);
    (x, y, imag)
}

pub fn supercurrent_of(psi: &ComplexField, kappa: f64) -> VectorField {
    let g = psi.grid;
    let mut gx = vec![Complex64::default(); g.len()];
    let mut gy = vec![Complex64::default(); g.len()];
    kernels::d_x(&g, &psi.values, &mut gx, Bc::Neumann);
    kernels::d_y(&g, &psi.values, &mut gy, Bc::Neumann);
    let (x, y, _) = supercurrent(&psi.values, &gx, &gy, kappa);
    VectorField::from_components(g, x, y)
}

pub fn masked(g: &Grid2D, mut v: Vec<f64>) -> ScalarField {
    kernels::zero_boundary(g, &mut v);
    ScalarField::from_values(*g, v)
}
