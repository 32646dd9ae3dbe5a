//! Uniform periodic grids on the torus `[0,2π)^dim`.

use crate::error::{Error, Result};

/// Cubic periodic grid with the same power-of-two point count on every axis.
///
/// Wavenumbers along an axis are the integers in `(-N/2, N/2]` in standard
/// FFT index order; the Nyquist mode `N/2` is kept in storage but treated as
/// zero by every differential operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if !n.is_power_of_two() || n < 16 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 16, got {n}"
            )));
        }
        Ok(Grid { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points / spectral modes.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2π/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    /// Volume of the periodic box, `(2π)^dim`.
    pub fn volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.dim as i32)
    }

    /// Signed wavenumber of axis index `i`, in `(-N/2, N/2]`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber used by differential operators: Nyquist is zeroed.
    #[inline]
    pub fn deriv_wavenumber(&self, i: usize) -> i64 {
        if i == self.n / 2 {
            0
        } else {
            self.wavenumber(i)
        }
    }

    /// Flat row-major index of a multi-index (last axis fastest).
    #[inline]
    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut f = 0;
        for &i in idx.iter().take(self.dim) {
            f = f * self.n + i;
        }
        f
    }

    /// Multi-index of a flat index.
    #[inline]
    pub fn unflat(&self, mut f: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for ax in (0..self.dim).rev() {
            idx[ax] = f % self.n;
            f /= self.n;
        }
        idx
    }

    /// Visit every mode: `f(flat, k)` where `k` is the signed wavevector
    /// ([k0,k1,0] in 2D). Row-major order, deterministic.
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, [i64; 3])) {
        let n = self.n;
        match self.dim {
            2 => {
                let mut flat = 0;
                for i0 in 0..n {
                    let k0 = self.wavenumber(i0);
                    for i1 in 0..n {
                        f(flat, [k0, self.wavenumber(i1), 0]);
                        flat += 1;
                    }
                }
            }
            _ => {
                let mut flat = 0;
                for i0 in 0..n {
                    let k0 = self.wavenumber(i0);
                    for i1 in 0..n {
                        let k1 = self.wavenumber(i1);
                        for i2 in 0..n {
                            f(flat, [k0, k1, self.wavenumber(i2)]);
                            flat += 1;
                        }
                    }
                }
            }
        }
    }

    /// Like [`Grid::for_each_mode`] but with the differentiation wavevector
    /// (Nyquist components zeroed).
    pub fn for_each_deriv_mode(&self, mut f: impl FnMut(usize, [f64; 3])) {
        let nyq = (self.n / 2) as i64;
        self.for_each_mode(|flat, k| {
            let mut kd = [0.0f64; 3];
            for (ax, &kc) in k.iter().enumerate() {
                kd[ax] = if kc == nyq { 0.0 } else { kc as f64 };
            }
            f(flat, kd);
        });
    }

    /// Physical coordinates of grid point with flat index `f`.
    pub fn point(&self, f: usize) -> [f64; 3] {
        let idx = self.unflat(f);
        let h = self.spacing();
        [idx[0] as f64 * h, idx[1] as f64 * h, idx[2] as f64 * h]
    }

    /// Largest wavevector magnitude resolved on this grid (cube corner).
    pub fn max_radius(&self) -> f64 {
        (self.dim as f64).sqrt() * (self.n as f64) / 2.0
    }
}
