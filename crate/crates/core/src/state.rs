//! Phase-space points `z = (psi, A, u)` and their time derivatives.

use num_complex::Complex64;

use crate::error::{GlsfError, Result};
use crate::field::{ComplexField, ScalarField, VectorField};
use crate::grid::Grid2D;

/// `A` carries zero normal components and `u` vanishes on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub psi: ComplexField,
    pub a: VectorField,
    pub u: ScalarField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDot {
    pub psit: ComplexField,
    pub at: VectorField,
    pub ut: ScalarField,
}

impl State {
    /// Builds a state and enforces the boundary encodings.
    pub fn new(psi: ComplexField, mut a: VectorField, mut u: ScalarField) -> Result<Self> {
        psi.grid.check_same(&a.grid)?;
        psi.grid.check_same(&u.grid)?;
        a.zero_normal_boundary();
        u.zero_boundary();
        Ok(Self { psi, a, u })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            psi: ComplexField::zeros(grid),
            a: VectorField::zeros(grid),
            u: ScalarField::zeros(grid),
        }
    }

    /// `psi = value`, `A = 0`, `u = 0`.
    pub fn uniform(grid: Grid2D, value: Complex64) -> Self {
        Self {
            psi: ComplexField::constant(grid, value),
            ..Self::zeros(grid)
        }
    }

    pub fn grid(&self) -> Grid2D {
        self.psi.grid
    }

    pub fn is_finite(&self) -> bool {
        self.psi.is_finite() && self.a.is_finite() && self.u.is_finite()
    }

    /// Largest violation of the boundary encodings.
    pub fn boundary_violation(&self) -> f64 {
        let g = self.grid();
        let mut m = self.a.max_normal_boundary();
        for (k, (i, j, _, _)) in g.coords().enumerate() {
            if g.is_boundary(i, j) {
                m = m.max(self.u.values[k].abs());
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        self.grid().check_same(&self.a.grid)?;
        self.grid().check_same(&self.u.grid)?;
        if !self.is_finite() {
            return Err(GlsfError::Consistency(
                "state contains non-finite values".into(),
            ));
        }
        if self.boundary_violation() != 0.0 {
            return Err(GlsfError::Consistency(
                "state violates its boundary encoding".into(),
            ));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            psi: self.psi.scaled(s),
            a: self.a.scaled(s),
            u: self.u.scaled(s),
        }
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) {
        self.psi.axpy(s, &other.psi);
        self.a.axpy(s, &other.a);
        self.u.axpy(s, &other.u);
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    /// Largest pointwise magnitude over all components.
    pub fn max_abs(&self) -> f64 {
        self.psi
            .max_abs()
            .max(self.a.max_abs())
            .max(self.u.max_abs())
    }

    /// Explicit Euler update `self + dt * dot`.
    pub fn advanced(&self, dot: &StateDot, dt: f64) -> Self {
        let mut out = self.clone();
        out.psi.axpy(dt, &dot.psit);
        out.a.axpy(dt, &dot.at);
        out.u.axpy(dt, &dot.ut);
        out
    }
}

impl StateDot {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            psit: ComplexField::zeros(grid),
            at: VectorField::zeros(grid),
            ut: ScalarField::zeros(grid),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.psit.is_finite() && self.at.is_finite() && self.ut.is_finite()
    }

    pub fn max_abs(&self) -> f64 {
        self.psit
            .max_abs()
            .max(self.at.max_abs())
            .max(self.ut.max_abs())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            psit: self.psit.sub(&other.psit),
            at: self.at.sub(&other.at),
            ut: self.ut.sub(&other.ut),
        }
    }

    /// Reinterprets the derivative as a state-shaped vector.
    pub fn as_state(&self) -> State {
        State {
            psi: self.psit.clone(),
            a: self.at.clone(),
            u: self.ut.clone(),
        }
    }
}
