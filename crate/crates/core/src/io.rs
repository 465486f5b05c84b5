//! Output formats: the `series.csv` time series and binary `.fld` snapshots.
//!
//! Snapshot layout, all little-endian: magic `GLSF`, `u32` version, `u32 nx`,
//! `u32 ny`, `f64 lx`, `f64 ly`, then the arrays `Re psi`, `Im psi`, `A1`,
//! `A2`, `u`, each `(nx+1)(ny+1)` `f64` values in row-major node order.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::TrajectoryRecord;
use crate::error::{GlsfError, Result};
use crate::field::{ComplexField, ScalarField, VectorField};
use crate::grid::Grid2D;
use crate::state::State;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"GLSF";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 8;

pub const SERIES_HEADER: &str = "t,L,D,z1,z2,grad_u,divA,psit,F2";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn series_csv(records: &[TrajectoryRecord]) -> String {
    let mut s = String::with_capacity(64 + records.len() * 9 * 24);
    s.push_str(SERIES_HEADER);
    s.push('\n');
    for r in records {
        let row: Vec<String> = r.values().iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn write_series(records: &[TrajectoryRecord], path: &Path) -> Result<()> {
    fs::write(path, series_csv(records))?;
    Ok(())
}

/// Parses a file produced by [`series_csv`].
pub fn parse_series(text: &str) -> Result<Vec<TrajectoryRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(SERIES_HEADER) {
        return Err(GlsfError::Format("series header mismatch".into()));
    }
    lines
        .enumerate()
        .map(|(i, l)| {
            let v: Vec<f64> = l
                .split(',')
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| GlsfError::Format(format!("series row {}: {e}", i + 1)))?;
            if v.len() != 9 {
                return Err(GlsfError::Format(format!(
                    "series row {}: expected 9 columns, got {}",
                    i + 1,
                    v.len()
                )));
            }
            Ok(TrajectoryRecord {
                t: v[0],
                l: v[1],
                d: v[2],
                z1: v[3],
                z2: v[4],
                grad_u: v[5],
                div_a: v[6],
                psit: v[7],
                f2: v[8],
            })
        })
        .collect()
}

pub fn snapshot_bytes(state: &State) -> Vec<u8> {
    let g = state.grid();
    let n = g.len();
    let mut out = Vec::with_capacity(HEADER_LEN + 5 * 8 * n);
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.nx as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny as u32).to_le_bytes());
    out.extend_from_slice(&g.lx.to_le_bytes());
    out.extend_from_slice(&g.ly.to_le_bytes());
    let arrays: [Box<dyn Iterator<Item = f64> + '_>; 5] = [
        Box::new(state.psi.values.iter().map(|v| v.re)),
        Box::new(state.psi.values.iter().map(|v| v.im)),
        Box::new(state.a.x.iter().copied()),
        Box::new(state.a.y.iter().copied()),
        Box::new(state.u.values.iter().copied()),
    ];
    for a in arrays {
        for v in a {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("4 bytes"))
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("8 bytes"))
}

pub fn state_from_bytes(b: &[u8]) -> Result<State> {
    if b.len() < HEADER_LEN {
        return Err(GlsfError::Format(format!(
            "file too short for a header: {} bytes, need {HEADER_LEN}",
            b.len()
        )));
    }
    if &b[..4] != SNAPSHOT_MAGIC {
        return Err(GlsfError::Format("bad magic bytes, expected `GLSF`".into()));
    }
    let version = u32_at(b, 4);
    if version != SNAPSHOT_VERSION {
        return Err(GlsfError::Format(format!(
            "unsupported snapshot version {version}, this build reads version {SNAPSHOT_VERSION}"
        )));
    }
    let (nx, ny) = (u32_at(b, 8) as usize, u32_at(b, 12) as usize);
    let grid = Grid2D::new(nx, ny, f64_at(b, 16), f64_at(b, 24))
        .map_err(|e| GlsfError::Format(e.to_string()))?;
    let n = grid.len();
    let expected = HEADER_LEN + 5 * 8 * n;
    if b.len() != expected {
        return Err(GlsfError::Format(format!(
            "size mismatch: {} bytes, expected {expected} for a {nx}x{ny} grid",
            b.len()
        )));
    }
    let array = |k: usize| -> Vec<f64> {
        (0..n)
            .map(|i| f64_at(b, HEADER_LEN + 8 * (k * n + i)))
            .collect()
    };
    let (re, im) = (array(0), array(1));
    let psi = re
        .iter()
        .zip(&im)
        .map(|(r, i)| Complex64::new(*r, *i))
        .collect();
    Ok(State {
        psi: ComplexField::from_values(grid, psi),
        a: VectorField::from_components(grid, array(2), array(3)),
        u: ScalarField::from_values(grid, array(4)),
    })
}

pub fn write_snapshot(state: &State, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&snapshot_bytes(state))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<State> {
    state_from_bytes(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::random_smooth_state;

    #[test]
    fn snapshot_round_trip_is_bitwise() {
        let g = Grid2D::new(8, 5, 1.0, 0.7).unwrap();
        let s = random_smooth_state(g, 4, 2.0);
        let b = snapshot_bytes(&s);
        assert_eq!(b.len(), 32 + 5 * 8 * 9 * 6);
        let r = state_from_bytes(&b).unwrap();
        assert_eq!(snapshot_bytes(&r), b);
        assert_eq!(r, s);
    }

    #[test]
    fn rejects_damage() {
        let g = Grid2D::unit_square(4).unwrap();
        let mut b = snapshot_bytes(&State::zeros(g));
        assert!(state_from_bytes(&b[..b.len() - 1])
            .unwrap_err()
            .to_string()
            .contains("size mismatch"));
        b[4] = 2;
        assert!(state_from_bytes(&b)
            .unwrap_err()
            .to_string()
            .contains("version 2"));
        b[0] = b'X';
        assert!(state_from_bytes(&b)
            .unwrap_err()
            .to_string()
            .contains("magic"));
    }

    #[test]
    fn csv_round_trips_values() {
        let r = TrajectoryRecord {
            t: 0.1,
            l: -1.0 / 3.0,
            d: 1e-300,
            z1: 2.0,
            z2: f64::MIN_POSITIVE,
            grad_u: 0.0,
            div_a: 1.0 / 7.0,
            psit: 5e-17,
            f2: 123456.789,
        };
        let text = series_csv(&[r, r]);
        assert!(text.starts_with("t,L,D,z1,z2,grad_u,divA,psit,F2\n"));
        assert_eq!(parse_series(&text).unwrap(), vec![r, r]);
    }
}
