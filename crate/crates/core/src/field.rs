//! Node-valued scalar, complex and vector fields.

use num_complex::Complex64;

use crate::grid::Grid2D;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid2D,
    pub values: Vec<Complex64>,
}

/// In-plane vector field; `x` and `y` hold the two components per node.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: Grid2D,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.coords().map(|(_, _, x, y)| f(x, y)).collect(),
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count does not match grid");
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sets every boundary node to zero.
    pub fn zero_boundary(&mut self) {
        let g = self.grid;
        for (k, (i, j, _, _)) in g.coords().enumerate() {
            if g.is_boundary(i, j) {
                self.values[k] = 0.0;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| a * v).collect(),
        }
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s += a * o;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }
}

impl ComplexField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn constant(grid: Grid2D, value: Complex64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        Self {
            grid,
            values: grid.coords().map(|(_, _, x, y)| f(x, y)).collect(),
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count does not match grid");
        Self { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * a).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s += o * a;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn re(&self) -> ScalarField {
        ScalarField::from_values(self.grid, self.values.iter().map(|v| v.re).collect())
    }

    pub fn im(&self) -> ScalarField {
        ScalarField::from_values(self.grid, self.values.iter().map(|v| v.im).collect())
    }

    pub fn modulus_sq(&self) -> ScalarField {
        ScalarField::from_values(
            self.grid,
            self.values.iter().map(|v| v.norm_sqr()).collect(),
        )
    }
}

impl VectorField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            x: vec![0.0; grid.len()],
            y: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid2D, vx: f64, vy: f64) -> Self {
        Self {
            grid,
            x: vec![vx; grid.len()],
            y: vec![vy; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let (x, y) = grid.coords().map(|(_, _, x, y)| f(x, y)).unzip();
        Self { grid, x, y }
    }

    pub fn from_components(grid: Grid2D, x: Vec<f64>, y: Vec<f64>) -> Self {
        assert_eq!(x.len(), grid.len(), "x component count does not match grid");
        assert_eq!(y.len(), grid.len(), "y component count does not match grid");
        Self { grid, x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    /// Enforces `v . n = 0`: x-components vanish on the vertical sides,
    /// y-components on the horizontal ones.
    pub fn zero_normal_boundary(&mut self) {
        zero_normal_components(&self.grid, &mut self.x, &mut self.y);
    }

    pub fn max_normal_boundary(&self) -> f64 {
        let g = self.grid;
        let mut m: f64 = 0.0;
        for (k, (i, j, _, _)) in g.coords().enumerate() {
            if i == 0 || i == g.nx {
                m = m.max(self.x[k].abs());
            }
            if j == 0 || j == g.ny {
                m = m.max(self.y[k].abs());
            }
        }
        m
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            x: self.x.iter().map(|v| a * v).collect(),
            y: self.y.iter().map(|v| a * v).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.grid, other.grid);
        for (s, o) in self.x.iter_mut().zip(&other.x) {
            *s += a * o;
        }
        for (s, o) in self.y.iter_mut().zip(&other.y) {
            *s += a * o;
        }
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
}

pub(crate) fn zero_normal_components(g: &Grid2D, x: &mut [f64], y: &mut [f64]) {
    let nxp = g.nodes_x();
    for j in 0..=g.ny {
        x[j * nxp] = 0.0;
        x[j * nxp + g.nx] = 0.0;
    }
    for i in 0..=g.nx {
        y[i] = 0.0;
        y[g.ny * nxp + i] = 0.0;
    }
}
