//! Boundary-aware difference operators on collocated nodes.
//!
//! Centered second-order differences in the interior, ghost-node closures on
//! the boundary. The divergence is assembled as the negative adjoint of the
//! Neumann gradient under the trapezoidal inner product, so
//! `<grad s, v> + <s, div v> = 0` holds to rounding for every `v` with
//! vanishing normal boundary components. The masked curl `C` (zero on the
//! boundary) and its adjoint `C*` give `curlcurl = C* C`.
//!
//! The slice kernels below are what the time stepper uses; the typed wrappers
//! at the bottom are the public surface.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::field::{ComplexField, ScalarField, VectorField};
use crate::grid::Grid2D;

/// Boundary closure for scalar operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc {
    /// Mirror ghosts: zero normal derivative.
    Neumann,
    /// Field vanishes on the boundary (odd ghosts).
    Dirichlet0,
}

pub trait FieldValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
}

impl FieldValue for f64 {}
impl FieldValue for Complex64 {}

pub mod kernels {
    use super::*;

    /// d/dx. Neumann: zero on the vertical sides. Dirichlet0: one-sided on the
    /// vertical sides, which equals the odd-ghost centered value when the
    /// boundary value is zero.
    pub fn d_x<T: FieldValue>(g: &Grid2D, s: &[T], out: &mut [T], bc: Bc) {
        let n = g.nx;
        let nxp = g.nodes_x();
        let c = 0.5 / g.hx;
        let o = 1.0 / g.hx;
        for j in 0..=g.ny {
            let r = &s[j * nxp..(j + 1) * nxp];
            let w = &mut out[j * nxp..(j + 1) * nxp];
            for i in 1..n {
                w[i] = (r[i + 1] - r[i - 1]) * c;
            }
            match bc {
                Bc::Neumann => {
                    w[0] = T::default();
                    w[n] = T::default();
                }
                Bc::Dirichlet0 => {
                    w[0] = (r[1] - r[0]) * o;
                    w[n] = (r[n] - r[n - 1]) * o;
                }
            }
        }
    }

    pub fn d_y<T: FieldValue>(g: &Grid2D, s: &[T], out: &mut [T], bc: Bc) {
        let n = g.ny;
        let nxp = g.nodes_x();
        let c = 0.5 / g.hy;
        let o = 1.0 / g.hy;
        for j in 1..n {
            for i in 0..nxp {
                out[j * nxp + i] = (s[(j + 1) * nxp + i] - s[(j - 1) * nxp + i]) * c;
            }
        }
        for i in 0..nxp {
            match bc {
                Bc::Neumann => {
                    out[i] = T::default();
                    out[n * nxp + i] = T::default();
                }
                Bc::Dirichlet0 => {
                    out[i] = (s[nxp + i] - s[i]) * o;
                    out[n * nxp + i] = (s[n * nxp + i] - s[(n - 1) * nxp + i]) * o;
                }
            }
        }
    }

    /// Negative adjoint of the Neumann gradient. Normal boundary components
    /// of the input are ignored (treated as zero).
    pub fn div<T: FieldValue>(g: &Grid2D, vx: &[T], vy: &[T], out: &mut [T]) {
        let nx = g.nx;
        let ny = g.ny;
        let nxp = g.nodes_x();
        let cx = 0.5 / g.hx;
        let cy = 0.5 / g.hy;
        let ox = 1.0 / g.hx;
        let oy = 1.0 / g.hy;
        let z = T::default();
        for j in 0..=ny {
            let r = &vx[j * nxp..(j + 1) * nxp];
            let w = &mut out[j * nxp..(j + 1) * nxp];
            w[0] = r[1] * ox;
            w[1] = r[2] * cx;
            for i in 2..nx - 1 {
                w[i] = (r[i + 1] - r[i - 1]) * cx;
            }
            w[nx - 1] = (z - r[nx - 2]) * cx;
            w[nx] = z - r[nx - 1] * ox;
        }
        let zeros = vec![z; nxp];
        for j in 0..=ny {
            let (up, down, f) = if j == 0 {
                (&vy[nxp..2 * nxp], &zeros[..], oy)
            } else if j == ny {
                (&zeros[..], &vy[(ny - 1) * nxp..ny * nxp], oy)
            } else {
                let up = if j + 1 == ny {
                    &zeros[..]
                } else {
                    &vy[(j + 1) * nxp..(j + 2) * nxp]
                };
                let down = if j == 1 {
                    &zeros[..]
                } else {
                    &vy[(j - 1) * nxp..j * nxp]
                };
                (up, down, cy)
            };
            let w = &mut out[j * nxp..(j + 1) * nxp];
            for i in 0..nxp {
                w[i] = w[i] + (up[i] - down[i]) * f;
            }
        }
    }

    /// Five-point Laplacian with ghost closure. For `Dirichlet0` the boundary
    /// values are read as zero and the output vanishes on the boundary.
    pub fn laplacian<T: FieldValue>(g: &Grid2D, s: &[T], out: &mut [T], bc: Bc) {
        let nx = g.nx;
        let ny = g.ny;
        let nxp = g.nodes_x();
        let ax = 1.0 / (g.hx * g.hx);
        let ay = 1.0 / (g.hy * g.hy);
        let z = T::default();
        let f = |c: T, l: T, r: T, d: T, u: T| ((r - c) + (l - c)) * ax + ((u - c) + (d - c)) * ay;
        match bc {
            Bc::Neumann => {
                for j in 0..=ny {
                    let jm = if j == 0 { 1 } else { j - 1 };
                    let jp = if j == ny { ny - 1 } else { j + 1 };
                    let r = &s[j * nxp..(j + 1) * nxp];
                    let rm = &s[jm * nxp..(jm + 1) * nxp];
                    let rp = &s[jp * nxp..(jp + 1) * nxp];
                    let o = &mut out[j * nxp..(j + 1) * nxp];
                    o[0] = f(r[0], r[1], r[1], rm[0], rp[0]);
                    for i in 1..nx {
                        o[i] = f(r[i], r[i - 1], r[i + 1], rm[i], rp[i]);
                    }
                    o[nx] = f(r[nx], r[nx - 1], r[nx - 1], rm[nx], rp[nx]);
                }
            }
            Bc::Dirichlet0 => {
                let zeros = vec![z; nxp];
                out[..nxp].fill(z);
                out[ny * nxp..].fill(z);
                for j in 1..ny {
                    let r = &s[j * nxp..(j + 1) * nxp];
                    let rm = if j == 1 {
                        &zeros[..]
                    } else {
                        &s[(j - 1) * nxp..j * nxp]
                    };
                    let rp = if j + 1 == ny {
                        &zeros[..]
                    } else {
                        &s[(j + 1) * nxp..(j + 2) * nxp]
                    };
                    let o = &mut out[j * nxp..(j + 1) * nxp];
                    o[0] = z;
                    o[nx] = z;
                    o[1] = f(r[1], z, r[2], rm[1], rp[1]);
                    for i in 2..nx - 1 {
                        o[i] = f(r[i], r[i - 1], r[i + 1], rm[i], rp[i]);
                    }
                    o[nx - 1] = f(r[nx - 1], r[nx - 2], z, rm[nx - 1], rp[nx - 1]);
                }
            }
        }
    }

    /// Curl `dx vy - dy vx` with centered interior differences and one-sided
    /// differences on the boundary.
    pub fn curl(g: &Grid2D, vx: &[f64], vy: &[f64], out: &mut [f64]) {
        let mut tmp = vec![0.0; g.len()];
        d_x(g, vy, out, Bc::Dirichlet0);
        d_y(g, vx, &mut tmp, Bc::Dirichlet0);
        for (o, t) in out.iter_mut().zip(&tmp) {
            *o -= t;
        }
    }

    /// Curl at interior nodes, zero on the boundary. This is the operator `C`
    /// whose boundary closure encodes `(curl A) x n = 0`.
    pub fn curl_masked(g: &Grid2D, vx: &[f64], vy: &[f64], out: &mut [f64]) {
        let nx = g.nx;
        let ny = g.ny;
        let nxp = g.nodes_x();
        let cx = 0.5 / g.hx;
        let cy = 0.5 / g.hy;
        out[..nxp].fill(0.0);
        out[ny * nxp..].fill(0.0);
        for j in 1..ny {
            let b = j * nxp;
            out[b] = 0.0;
            out[b + nx] = 0.0;
            for k in b + 1..b + nx {
                out[k] = (vy[k + 1] - vy[k - 1]) * cx - (vx[k + nxp] - vx[k - nxp]) * cy;
            }
        }
    }

    /// Adjoint `C*` of the masked curl: `(dy c, -dx c)` for a scalar `c`
    /// vanishing on the boundary. The output has zero normal components.
    pub fn curl_adjoint(g: &Grid2D, c: &[f64], ox: &mut [f64], oy: &mut [f64]) {
        let nx = g.nx;
        let ny = g.ny;
        let nxp = g.nodes_x();
        let cx = 0.5 / g.hx;
        let cy = 0.5 / g.hy;
        let hx = 1.0 / g.hx;
        let hy = 1.0 / g.hy;
        // boundary values of c are read as zero throughout
        for j in 0..=ny {
            let b = j * nxp;
            ox[b] = 0.0;
            ox[b + nx] = 0.0;
            for i in 1..nx {
                let k = b + i;
                ox[k] = if j == 0 {
                    c[k + nxp] * hy
                } else if j == ny {
                    -c[k - nxp] * hy
                } else {
                    let up = if j + 1 == ny { 0.0 } else { c[k + nxp] };
                    let down = if j == 1 { 0.0 } else { c[k - nxp] };
                    (up - down) * cy
                };
            }
        }
        oy[..nxp].fill(0.0);
        oy[ny * nxp..].fill(0.0);
        for j in 1..ny {
            let b = j * nxp;
            let r = &c[b..b + nxp];
            let o = &mut oy[b..b + nxp];
            o[0] = -r[1] * hx;
            o[nx] = r[nx - 1] * hx;
            o[1] = -r[2] * cx;
            for i in 2..nx - 1 {
                o[i] = -(r[i + 1] - r[i - 1]) * cx;
            }
            o[nx - 1] = r[nx - 2] * cx;
        }
    }

    pub fn zero_boundary<T: FieldValue>(g: &Grid2D, s: &mut [T]) {
        let nxp = g.nodes_x();
        for i in 0..nxp {
            s[i] = T::default();
            s[g.ny * nxp + i] = T::default();
        }
        for j in 0..=g.ny {
            s[j * nxp] = T::default();
            s[j * nxp + g.nx] = T::default();
        }
    }

    /// Edge-based Dirichlet energy `sum_edges w_e |s_b - s_a|^2 / h^2`; equals
    /// `-<s, lap s>` for the Neumann Laplacian, and for the Dirichlet one when
    /// `s` vanishes on the boundary.
    pub fn grad_energy_real(g: &Grid2D, s: &[f64]) -> f64 {
        edge_energy(g, |a, b| {
            let d = s[b] - s[a];
            d * d
        })
    }

    pub fn grad_energy_complex(g: &Grid2D, s: &[Complex64]) -> f64 {
        edge_energy(g, |a, b| (s[b] - s[a]).norm_sqr())
    }

    fn edge_energy(g: &Grid2D, sq: impl Fn(usize, usize) -> f64) -> f64 {
        let nxp = g.nodes_x();
        let mut ex = 0.0;
        for j in 0..=g.ny {
            let mut row = 0.0;
            for i in 0..g.nx {
                let k = j * nxp + i;
                row += sq(k, k + 1);
            }
            ex += g.wy(j) * row;
        }
        let mut ey = 0.0;
        for j in 0..g.ny {
            for i in 0..=g.nx {
                let k = j * nxp + i;
                ey += g.wx(i) * sq(k, k + nxp);
            }
        }
        ex * g.hy / g.hx + ey * g.hx / g.hy
    }

    pub fn dot_w(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
        w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
    }
}

use kernels as k;

pub fn grad(s: &ScalarField, bc: Bc) -> VectorField {
    let g = s.grid;
    let mut out = VectorField::zeros(g);
    k::d_x(&g, &s.values, &mut out.x, bc);
    k::d_y(&g, &s.values, &mut out.y, bc);
    out
}

/// Gradient of a complex field with Neumann closure, as (d/dx, d/dy).
pub fn grad_complex(s: &ComplexField) -> (ComplexField, ComplexField) {
    let g = s.grid;
    let mut gx = ComplexField::zeros(g);
    let mut gy = ComplexField::zeros(g);
    k::d_x(&g, &s.values, &mut gx.values, Bc::Neumann);
    k::d_y(&g, &s.values, &mut gy.values, Bc::Neumann);
    (gx, gy)
}

pub fn div(v: &VectorField) -> ScalarField {
    let g = v.grid;
    let mut out = ScalarField::zeros(g);
    k::div(&g, &v.x, &v.y, &mut out.values);
    out
}

pub fn curl2d(v: &VectorField) -> ScalarField {
    let g = v.grid;
    let mut out = ScalarField::zeros(g);
    k::curl(&g, &v.x, &v.y, &mut out.values);
    out
}

/// Curl with the boundary closure `c = 0` used by the curl-curl operator and
/// by the `H^1`-type vector norms.
pub fn curl_masked(v: &VectorField) -> ScalarField {
    let g = v.grid;
    let mut out = ScalarField::zeros(g);
    k::curl_masked(&g, &v.x, &v.y, &mut out.values);
    out
}

/// `(dy c, -dx c)` for a scalar potential vanishing on the boundary.
pub fn curl_of_scalar(c: &ScalarField) -> VectorField {
    let g = c.grid;
    let mut out = VectorField::zeros(g);
    k::curl_adjoint(&g, &c.values, &mut out.x, &mut out.y);
    out
}

pub fn curlcurl2d(v: &VectorField) -> VectorField {
    curl_of_scalar(&curl_masked(v))
}

pub fn graddiv(v: &VectorField) -> VectorField {
    grad(&div(v), Bc::Neumann)
}

pub fn laplacian(s: &ScalarField, bc: Bc) -> ScalarField {
    let g = s.grid;
    let mut out = ScalarField::zeros(g);
    k::laplacian(&g, &s.values, &mut out.values, bc);
    out
}

pub fn laplacian_complex(s: &ComplexField, bc: Bc) -> ComplexField {
    let g = s.grid;
    let mut out = ComplexField::zeros(g);
    k::laplacian(&g, &s.values, &mut out.values, bc);
    out
}

/// `||grad s||^2` evaluated on cell edges.
pub fn grad_norm_sq(s: &ScalarField) -> f64 {
    k::grad_energy_real(&s.grid, &s.values)
}

pub fn grad_norm_sq_complex(s: &ComplexField) -> f64 {
    k::grad_energy_complex(&s.grid, &s.values)
}

/// Trapezoidal L2 inner products.
pub trait Inner {
    type Output;
    fn inner(&self, other: &Self) -> Self::Output;
    fn norm(&self) -> f64;
}

impl Inner for ScalarField {
    type Output = f64;
    fn inner(&self, other: &Self) -> f64 {
        k::dot_w(&self.grid.weights(), &self.values, &other.values)
    }
    fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }
}

impl Inner for VectorField {
    type Output = f64;
    fn inner(&self, other: &Self) -> f64 {
        let w = self.grid.weights();
        k::dot_w(&w, &self.x, &other.x) + k::dot_w(&w, &self.y, &other.y)
    }
    fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }
}

impl Inner for ComplexField {
    type Output = Complex64;
    /// Conjugate-linear in the first slot.
    fn inner(&self, other: &Self) -> Complex64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .zip(&other.values)
            .map(|((w, a), b)| a.conj() * b * *w)
            .sum()
    }
    fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }
}

pub fn integrate(s: &ScalarField) -> f64 {
    s.grid
        .weights()
        .iter()
        .zip(&s.values)
        .map(|(w, v)| w * v)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    /// Deterministic pseudo-random values without pulling the RNG into unit tests.
    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (0..n)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn constant_fields_have_zero_derivatives() {
        let g = Grid2D::new(9, 7, 1.3, 0.8).unwrap();
        let s = ScalarField::constant(g, 2.5);
        for bc in [Bc::Neumann, Bc::Dirichlet0] {
            let v = grad(&s, bc);
            // Dirichlet0 one-sided values are only meaningful for fields vanishing on the boundary
            if bc == Bc::Neumann {
                assert_eq!(v.max_abs(), 0.0);
            }
        }
        assert_eq!(laplacian(&s, Bc::Neumann).max_abs(), 0.0);
        let v = VectorField::constant(g, 0.7, -1.1);
        assert!(curlcurl2d(&v).max_abs() < 1e-12);
        assert!(graddiv(&v).x.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn affine_gradient_is_exact() {
        let g = Grid2D::unit_square(8).unwrap();
        let s = ScalarField::from_fn(g, |x, _| x);
        let v = grad(&s, Bc::Neumann);
        for j in 0..=g.ny {
            for i in 1..g.nx {
                assert!((v.x[g.idx(i, j)] - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn dirichlet_gradient_is_second_order_for_sine() {
        let err = |n: usize| {
            let g = Grid2D::unit_square(n).unwrap();
            let s = ScalarField::from_fn(g, |x, _| (PI * x).sin());
            let v = grad(&s, Bc::Dirichlet0);
            g.coords()
                .map(|(_, _, x, _)| x)
                .zip(&v.x)
                .map(|(x, d)| (d - PI * (PI * x).cos()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(16), err(32));
        assert!(e1 / e2 > 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn summation_by_parts_holds() {
        let g = Grid2D::new(11, 8, 1.0, 0.7).unwrap();
        for seed in 0..20 {
            let s = ScalarField::from_values(g, noise(g.len(), seed));
            let mut v = VectorField::from_components(
                g,
                noise(g.len(), seed + 100),
                noise(g.len(), seed + 200),
            );
            v.zero_normal_boundary();
            let lhs = grad(&s, Bc::Neumann).inner(&v);
            let rhs = s.inner(&div(&v));
            assert!((lhs + rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
        }
    }

    #[test]
    fn div_ignores_normal_boundary_components() {
        let g = Grid2D::unit_square(6).unwrap();
        let v = VectorField::from_components(g, noise(g.len(), 1), noise(g.len(), 2));
        let mut w = v.clone();
        w.zero_normal_boundary();
        assert_eq!(div(&v).values, div(&w).values);
    }

    #[test]
    fn constant_vector_field_is_divergence_free_away_from_boundary() {
        let g = Grid2D::unit_square(10).unwrap();
        let mut v = VectorField::constant(g, 0.4, -0.9);
        v.zero_normal_boundary();
        let d = div(&v);
        for j in 2..=g.ny - 2 {
            for i in 2..=g.nx - 2 {
                assert!(d.at(i, j).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn curl_annihilates_gradients_in_interior() {
        let g = Grid2D::new(12, 9, 1.0, 1.5).unwrap();
        let s = ScalarField::from_values(g, noise(g.len(), 7));
        let c = curl2d(&grad(&s, Bc::Neumann));
        for j in 1..g.ny {
            for i in 1..g.nx {
                assert!(c.at(i, j).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stream_function_fields_are_divergence_free() {
        let g = Grid2D::new(10, 13, 1.0, 1.2).unwrap();
        let mut phi = ScalarField::from_values(g, noise(g.len(), 9));
        phi.zero_boundary();
        let v = curl_of_scalar(&phi);
        assert_eq!(v.max_normal_boundary(), 0.0);
        let scale = phi.max_abs() / (g.hx * g.hy);
        assert!(div(&v).max_abs() <= 1e-13 * scale);
    }

    #[test]
    fn rotation_field_has_curl_two_in_deep_interior() {
        let g = Grid2D::unit_square(16).unwrap();
        let mut v = VectorField::from_fn(g, |x, y| (-y, x));
        v.zero_normal_boundary();
        let c = curl2d(&v);
        for j in 2..=g.ny - 2 {
            for i in 2..=g.nx - 2 {
                assert!((c.at(i, j) - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curl_adjoint_is_adjoint() {
        let g = Grid2D::new(9, 11, 0.9, 1.1).unwrap();
        for seed in 0..10 {
            let mut v =
                VectorField::from_components(g, noise(g.len(), seed), noise(g.len(), seed + 50));
            v.zero_normal_boundary();
            let mut c = ScalarField::from_values(g, noise(g.len(), seed + 90));
            c.zero_boundary();
            let a = curl_masked(&v).inner(&c);
            let b = v.inner(&curl_of_scalar(&c));
            assert!(rel(a, b) < 1e-12 || (a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn laplacian_matches_edge_energy() {
        let g = Grid2D::new(7, 10, 1.4, 0.6).unwrap();
        let s = ScalarField::from_values(g, noise(g.len(), 3));
        let e = grad_norm_sq(&s);
        assert!(rel(-s.inner(&laplacian(&s, Bc::Neumann)), e) < 1e-12);
        let mut u = s.clone();
        u.zero_boundary();
        assert!(rel(-u.inner(&laplacian(&u, Bc::Dirichlet0)), grad_norm_sq(&u)) < 1e-12);
    }

    #[test]
    fn laplacian_eigenfunctions() {
        let ratio_err = |n: usize, bc: Bc| {
            let g = Grid2D::unit_square(n).unwrap();
            let (s, lam) = match bc {
                Bc::Dirichlet0 => (
                    ScalarField::from_fn(g, |x, y| (PI * x).sin() * (PI * y).sin()),
                    -2.0 * PI * PI,
                ),
                Bc::Neumann => (ScalarField::from_fn(g, |x, _| (PI * x).cos()), -PI * PI),
            };
            let l = laplacian(&s, bc);
            let mut m: f64 = 0.0;
            for j in 1..g.ny {
                for i in 1..g.nx {
                    let v = s.at(i, j);
                    if v.abs() > 0.1 {
                        m = m.max((l.at(i, j) / v - lam).abs() / lam.abs());
                    }
                }
            }
            m
        };
        for bc in [Bc::Neumann, Bc::Dirichlet0] {
            let (a, b) = (ratio_err(16, bc), ratio_err(32, bc));
            assert!(a < 0.02 && a / b > 3.5, "{bc:?}: {a} {b}");
        }
    }

    #[test]
    fn inner_products() {
        let g = Grid2D::unit_square(32).unwrap();
        let one = ScalarField::constant(g, 1.0);
        assert!((one.inner(&one) - 1.0).abs() < 1e-12);
        let s = ScalarField::from_fn(g, |x, _| (PI * x).sin());
        assert!((s.inner(&s) - 0.5).abs() < 1e-3);
        let a = ComplexField::from_values(
            g,
            noise(g.len(), 1)
                .iter()
                .zip(noise(g.len(), 2))
                .map(|(r, i)| Complex64::new(*r, i))
                .collect(),
        );
        let b = ComplexField::from_values(
            g,
            noise(g.len(), 3)
                .iter()
                .zip(noise(g.len(), 4))
                .map(|(r, i)| Complex64::new(*r, i))
                .collect(),
        );
        let ab = a.inner(&b);
        let ba = b.inner(&a);
        assert!((ab - ba.conj()).norm() < 1e-14);
    }
}
