//! Structured rectangular grid with collocated nodes and trapezoidal quadrature.

use crate::error::{GlsfError, Result};

/// Node-centred grid on `[0, lx] x [0, ly]` with `nx x ny` cells.
///
/// Nodes are stored row-major with `x` varying fastest: node `(i, j)` sits at
/// `(i * hx, j * hy)` and has flat index `j * (nx + 1) + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub hx: f64,
    pub hy: f64,
}

impl Grid2D {
    pub const MIN_CELLS: usize = 4;

    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < Self::MIN_CELLS || ny < Self::MIN_CELLS {
            return Err(GlsfError::Grid(format!(
                "cell counts must be >= {}, got nx={nx}, ny={ny}",
                Self::MIN_CELLS
            )));
        }
        if !(lx.is_finite() && lx > 0.0 && ly.is_finite() && ly > 0.0) {
            return Err(GlsfError::Grid(format!(
                "side lengths must be positive and finite, got lx={lx}, ly={ly}"
            )));
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            hx: lx / nx as f64,
            hy: ly / ny as f64,
        })
    }

    /// Unit square with `n x n` cells.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, 1.0, 1.0)
    }

    #[inline]
    pub fn nodes_x(&self) -> usize {
        self.nx + 1
    }

    #[inline]
    pub fn nodes_y(&self) -> usize {
        self.ny + 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx {
            self.lx
        } else {
            i as f64 * self.hx
        }
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        if j == self.ny {
            self.ly
        } else {
            j as f64 * self.hy
        }
    }

    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx || j == self.ny
    }

    /// Trapezoidal weight factor along x (1/2 at the end nodes).
    #[inline]
    pub fn wx(&self, i: usize) -> f64 {
        if i == 0 || i == self.nx {
            0.5
        } else {
            1.0
        }
    }

    #[inline]
    pub fn wy(&self, j: usize) -> f64 {
        if j == 0 || j == self.ny {
            0.5
        } else {
            1.0
        }
    }

    /// Quadrature weights, one per node, summing to `lx * ly`.
    pub fn weights(&self) -> Vec<f64> {
        let cell = self.hx * self.hy;
        let mut w = Vec::with_capacity(self.len());
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                w.push(cell * self.wx(i) * self.wy(j));
            }
        }
        w
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn coords(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..=self.ny).flat_map(move |j| (0..=self.nx).map(move |i| (i, j, self.x(i), self.y(j))))
    }

    /// `1.0` at interior nodes, `0.0` on the boundary.
    pub fn interior_mask(&self) -> Vec<f64> {
        self.coords()
            .map(|(i, j, _, _)| if self.is_boundary(i, j) { 0.0 } else { 1.0 })
            .collect()
    }

    pub fn check_same(&self, other: &Grid2D) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(GlsfError::GridMismatch)
        }
    }
}
