//! Seeded random smooth states built from a few low Fourier modes.
//!
//! `psi` uses cosine modes (compatible with the Neumann closure), `A` is a
//! Neumann gradient plus a stream-function field (both with zero normal
//! components) and `u` uses sine modes vanishing on the boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{ComplexField, ScalarField};
use crate::functionals::z1_norm;
use crate::grid::Grid2D;
use crate::ops::{self, Bc};
use crate::state::State;

/// Highest mode index in each direction.
pub const MAX_MODE: usize = 2;

fn cos_modes(g: Grid2D, coef: &[(usize, usize, f64)]) -> ScalarField {
    ScalarField::from_fn(g, |x, y| {
        coef.iter()
            .map(|&(m, n, c)| {
                c * (m as f64 * PI * x / g.lx).cos() * (n as f64 * PI * y / g.ly).cos()
            })
            .sum()
    })
}

fn sin_modes(g: Grid2D, coef: &[(usize, usize, f64)]) -> ScalarField {
    let mut s = ScalarField::from_fn(g, |x, y| {
        coef.iter()
            .map(|&(m, n, c)| {
                c * (m as f64 * PI * x / g.lx).sin() * (n as f64 * PI * y / g.ly).sin()
            })
            .sum()
    });
    s.zero_boundary();
    s
}

fn draw(rng: &mut ChaCha8Rng, amp: f64, from: usize, skip_zero: bool) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for m in from..=MAX_MODE {
        for n in from..=MAX_MODE {
            if skip_zero && m == 0 && n == 0 {
                continue;
            }
            out.push((m, n, rng.gen_range(-amp..=amp)));
        }
    }
    out
}

/// Smooth fluctuation around zero: every component is a random combination of
/// low modes with the given amplitude.
fn fluctuation(g: Grid2D, rng: &mut ChaCha8Rng, amp: f64) -> State {
    let re = cos_modes(g, &draw(rng, amp, 0, true));
    let im = cos_modes(g, &draw(rng, amp, 0, true));
    let psi = ComplexField::from_values(
        g,
        re.values
            .iter()
            .zip(&im.values)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect(),
    );
    let pot = cos_modes(g, &draw(rng, amp / PI, 0, true));
    let stream = sin_modes(g, &draw(rng, amp / PI, 1, false));
    let mut a = ops::grad(&pot, Bc::Neumann);
    a.axpy(1.0, &ops::curl_of_scalar(&stream));
    a.zero_normal_boundary();
    let u = sin_modes(g, &draw(rng, amp, 1, false));
    State { psi, a, u }
}

/// Random smooth state with `z1_norm <= radius`.
///
/// `psi = e^{i alpha} (a + fluctuation)` with `a` in `[0.3, 0.9]`; the whole
/// state is scaled down when its norm exceeds the radius.
pub fn random_smooth_state(g: Grid2D, seed: u64, radius: f64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = rng.gen_range(0.0..2.0 * PI);
    let base = rng.gen_range(0.3..0.9);
    let mut z = fluctuation(g, &mut rng, 0.15);
    let rot = Complex64::from_polar(1.0, alpha);
    for v in z.psi.values.iter_mut() {
        *v = (*v + base) * rot;
    }
    let n = z1_norm(&z);
    if n > radius {
        z = z.scaled(0.99 * radius / n);
    }
    z
}

/// Random smooth direction normalized to `z1_norm == size`.
pub fn random_perturbation(g: Grid2D, seed: u64, size: f64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let z = fluctuation(g, &mut rng, 1.0);
    let n = z1_norm(&z);
    z.scaled(size / n)
}
