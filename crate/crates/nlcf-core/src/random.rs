//! Deterministic random smooth fields for verification harnesses.
//!
//! Fields are built from physical-space Gaussian white noise shaped by a
//! power-law spectral envelope, so the same seed yields bit-identical
//! fields on every platform (ChaCha stream cipher RNG, fixed iteration
//! order).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{forward, SpectralScalar, SpectralVector};
use crate::grid::Grid;
use crate::ops;

/// Standard-normal sample via Box–Muller (avoids distribution-crate
/// version drift in the determinism contract).
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random real field with Gaussian coefficients decaying like
/// `|k|^{-decay}`, zero mean, dealiased, normalized to unit L².
pub fn smooth_scalar(grid: Grid, seed: u64, decay: f64) -> SpectralScalar {
    smooth_scalar_stream(grid, seed, 0, decay)
}

pub fn smooth_scalar_stream(grid: Grid, seed: u64, stream: u64, decay: f64) -> SpectralScalar {
    let mut rng = rng_for(seed, stream);
    let mut buf: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(normal(&mut rng), 0.0))
        .collect();
    forward(grid, &mut buf);
    grid.for_each_deriv_mode(|flat, k| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            buf[flat] = Complex64::new(0.0, 0.0);
        } else {
            buf[flat] *= k2.powf(-decay / 2.0);
        }
    });
    let mut f = SpectralScalar::from_coeffs(grid, buf);
    ops::dealias(&mut f);
    let norm = f.l2_norm();
    if norm > 0.0 {
        f.scale(1.0 / norm);
    }
    f
}

/// Random vector field with independent smooth components.
pub fn smooth_vector(grid: Grid, seed: u64, decay: f64) -> SpectralVector {
    SpectralVector::from_components(
        (0..grid.dim())
            .map(|ax| smooth_scalar_stream(grid, seed, 1 + ax as u64, decay))
            .collect(),
    )
}

/// Random real field with coefficients supported on the annulus
/// `lo <= |k| <= hi` (differentiation wavevector; Nyquist-bearing modes
/// excluded). Returns `None` when the annulus contains no resolved mode.
pub fn annulus_scalar(grid: Grid, seed: u64, stream: u64, lo: f64, hi: f64) -> Option<SpectralScalar> {
    let mut rng = rng_for(seed, stream);
    let mut buf: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(normal(&mut rng), 0.0))
        .collect();
    forward(grid, &mut buf);
    let nyq = (grid.n() / 2) as i64;
    let mut kept = 0usize;
    grid.for_each_mode(|flat, k| {
        let has_nyquist = (0..grid.dim()).any(|ax| k[ax] == nyq);
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let r = k2.sqrt();
        if has_nyquist || r < lo || r > hi {
            buf[flat] = Complex64::new(0.0, 0.0);
        } else {
            kept += 1;
        }
    });
    if kept == 0 {
        return None;
    }
    let mut f = SpectralScalar::from_coeffs(grid, buf);
    let norm = f.l2_norm();
    if norm == 0.0 {
        return None;
    }
    f.scale(1.0 / norm);
    Some(f)
}

/// Random real field band-limited to `|k_m| <= kmax` per axis, unit L².
/// Products of such fields up to degree `N/(2 kmax)` are alias-free.
pub fn bandlimited_scalar(grid: Grid, seed: u64, stream: u64, kmax: i64) -> SpectralScalar {
    let mut rng = rng_for(seed, stream);
    let mut buf: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(normal(&mut rng), 0.0))
        .collect();
    forward(grid, &mut buf);
    grid.for_each_mode(|flat, k| {
        let inside = (0..grid.dim()).all(|ax| k[ax].abs() <= kmax && k[ax] != (grid.n() / 2) as i64);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if !inside || k2 == 0 {
            buf[flat] = Complex64::new(0.0, 0.0);
        } else {
            buf[flat] *= (k2 as f64).powf(-1.5);
        }
    });
    let mut f = SpectralScalar::from_coeffs(grid, buf);
    let norm = f.l2_norm();
    if norm > 0.0 {
        f.scale(1.0 / norm);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let g = Grid::new(2, 32).unwrap();
        let a = smooth_scalar(g, 42, 3.0);
        let b = smooth_scalar(g, 42, 3.0);
        assert_eq!(a.coeffs(), b.coeffs());
        let c = smooth_scalar(g, 43, 3.0);
        assert!(a.sub(&c).l2_norm() > 1e-3);
    }

    #[test]
    fn annulus_support_is_respected() {
        let g = Grid::new(2, 32).unwrap();
        let f = annulus_scalar(g, 1, 0, 3.0, 8.0).unwrap();
        g.for_each_mode(|flat, k| {
            let r = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
            if (r < 3.0 || r > 8.0) && f.coeffs()[flat].norm() > 0.0 {
                panic!("coefficient outside annulus at {k:?}");
            }
        });
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_annulus_returns_none() {
        let g = Grid::new(2, 32).unwrap();
        assert!(annulus_scalar(g, 1, 0, 0.1, 0.9).is_none());
    }

    #[test]
    fn fields_are_real() {
        let g = Grid::new(2, 32).unwrap();
        assert!(smooth_scalar(g, 5, 3.0).hermitian_error() < 1e-13);
        assert!(bandlimited_scalar(g, 5, 0, 4).hermitian_error() < 1e-13);
    }
}
