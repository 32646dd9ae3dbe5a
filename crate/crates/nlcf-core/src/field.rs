//! Real-valued periodic fields stored as complex Fourier coefficients.
//!
//! Transform convention: unnormalized forward transform, `1/N^dim` on the
//! inverse, so a pure mode `e^{ik·x}` carries the coefficient `N^dim` at `k`.
//! All fields are real in physical space, hence Hermitian-symmetric in
//! coefficients; every operation in this crate preserves that symmetry.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

fn transform_axis(grid: Grid, buf: &mut [Complex64], ax: usize, inverse: bool) {
    let n = grid.n();
    let fft = plan(n, inverse);
    if ax == grid.dim() - 1 {
        // Lines along the last axis are contiguous; rustfft processes the
        // buffer in chunks of the FFT length.
        fft.process(buf);
        return;
    }
    let stride = n.pow((grid.dim() - 1 - ax) as u32);
    let mut scratch = vec![Complex64::new(0.0, 0.0); buf.len()];
    let blocks = buf.len() / (stride * n);
    let mut line = 0;
    for b in 0..blocks {
        for s in 0..stride {
            let base = b * stride * n + s;
            for j in 0..n {
                scratch[line * n + j] = buf[base + j * stride];
            }
            line += 1;
        }
    }
    fft.process(&mut scratch);
    line = 0;
    for b in 0..blocks {
        for s in 0..stride {
            let base = b * stride * n + s;
            for j in 0..n {
                buf[base + j * stride] = scratch[line * n + j];
            }
            line += 1;
        }
    }
}

/// In-place unnormalized forward transform over all axes.
pub fn forward(grid: Grid, buf: &mut [Complex64]) {
    for ax in 0..grid.dim() {
        transform_axis(grid, buf, ax, false);
    }
}

/// In-place inverse transform with `1/N^dim` normalization.
pub fn inverse(grid: Grid, buf: &mut [Complex64]) {
    for ax in 0..grid.dim() {
        transform_axis(grid, buf, ax, true);
    }
    let scale = 1.0 / grid.len() as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// Scalar field on a periodic grid, held in spectral space.
#[derive(Debug, Clone)]
pub struct SpectralScalar {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralScalar {
    pub fn zero(grid: Grid) -> Self {
        SpectralScalar {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), grid.len());
        SpectralScalar { grid, coeffs }
    }

    /// Transform physical-space samples (row-major) into a spectral field.
    pub fn from_physical(grid: Grid, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.len());
        let mut c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        forward(grid, &mut c);
        SpectralScalar { grid, coeffs: c }
    }

    /// Sample a function of physical coordinates on the grid and transform.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let vals: Vec<f64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self::from_physical(grid, &vals)
    }

    /// Real single mode `amp_re·cos(k·x) + amp_im·sin(k·x)`.
    pub fn harmonic(grid: Grid, k: [i64; 3], amp_cos: f64, amp_sin: f64) -> Self {
        let mut field = Self::zero(grid);
        let nn = grid.len() as f64;
        // cos = (e^{ik·x}+e^{-ik·x})/2, sin = (e^{ik·x}-e^{-ik·x})/(2i)
        let cp = Complex64::new(amp_cos / 2.0, -amp_sin / 2.0) * nn;
        let cm = cp.conj();
        let ip = mode_index(grid, k);
        let im = mode_index(grid, [-k[0], -k[1], -k[2]]);
        field.coeffs[ip] += cp;
        field.coeffs[im] += cm;
        field
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Physical-space samples (row-major). Imaginary residue is discarded;
    /// it is at rounding level for Hermitian-symmetric coefficients.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut c = self.coeffs.clone();
        inverse(self.grid, &mut c);
        c.into_iter().map(|z| z.re).collect()
    }

    /// Mean value over the box (the `k = 0` coefficient).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.grid.len() as f64
    }

    pub fn set_mean(&mut self, m: f64) {
        self.coeffs[0] = Complex64::new(m * self.grid.len() as f64, 0.0);
    }

    /// Physical `L²` norm over the box, computed by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let nn = self.grid.len() as f64;
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        self.grid.volume() * sum / (nn * nn)
    }

    /// `L²` inner product `∫ f g dx` by Plancherel.
    pub fn inner(&self, other: &SpectralScalar) -> f64 {
        assert_eq!(self.grid, other.grid);
        let nn = self.grid.len() as f64;
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        self.grid.volume() * sum / (nn * nn)
    }

    /// Max absolute value on the physical grid.
    pub fn linf(&self) -> f64 {
        self.to_physical().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&mut self, c: f64) {
        for z in &mut self.coeffs {
            *z *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> SpectralScalar {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * rhs`.
    pub fn axpy(&mut self, c: f64, rhs: &SpectralScalar) {
        assert_eq!(self.grid, rhs.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += c * b;
        }
    }

    pub fn add(&self, rhs: &SpectralScalar) -> SpectralScalar {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }

    pub fn sub(&self, rhs: &SpectralScalar) -> SpectralScalar {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }

    pub fn check_finite(&self, what: &str, time: f64) -> Result<()> {
        for c in &self.coeffs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    what: what.to_string(),
                    time,
                });
            }
        }
        Ok(())
    }

    /// Largest violation of the Hermitian symmetry `c(-k) = conj(c(k))`.
    pub fn hermitian_error(&self) -> f64 {
        let g = self.grid;
        let mut worst = 0.0f64;
        g.for_each_mode(|flat, k| {
            let im = mode_index(g, [-k[0], -k[1], -k[2]]);
            let err = (self.coeffs[im] - self.coeffs[flat].conj()).norm();
            worst = worst.max(err);
        });
        worst / (g.len() as f64)
    }
}

/// Flat index of the coefficient for signed wavevector `k`. Components may
/// be any integers in `(-N/2, N/2]`.
pub fn mode_index(grid: Grid, k: [i64; 3]) -> usize {
    let n = grid.n() as i64;
    let mut idx = [0usize; 3];
    for ax in 0..grid.dim() {
        let mut kc = k[ax];
        debug_assert!(kc > -n / 2 - 1 && kc <= n / 2 || kc == -n / 2);
        if kc < 0 {
            kc += n;
        }
        idx[ax] = (kc % n) as usize;
    }
    grid.flat(&idx[..grid.dim()])
}

/// Vector field with one [`SpectralScalar`] per spatial dimension.
#[derive(Debug, Clone)]
pub struct SpectralVector {
    comps: Vec<SpectralScalar>,
}

impl SpectralVector {
    pub fn zero(grid: Grid) -> Self {
        SpectralVector {
            comps: (0..grid.dim()).map(|_| SpectralScalar::zero(grid)).collect(),
        }
    }

    pub fn from_components(comps: Vec<SpectralScalar>) -> Self {
        assert!(!comps.is_empty());
        let g = comps[0].grid();
        assert!(comps.iter().all(|c| c.grid() == g));
        assert_eq!(comps.len(), g.dim());
        SpectralVector { comps }
    }

    pub fn grid(&self) -> Grid {
        self.comps[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &SpectralScalar {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut SpectralScalar {
        &mut self.comps[i]
    }

    pub fn components(&self) -> &[SpectralScalar] {
        &self.comps
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpectralScalar> {
        self.comps.iter()
    }

    pub fn l2_norm(&self) -> f64 {
        self.comps
            .iter()
            .map(SpectralScalar::l2_norm_sq)
            .sum::<f64>()
            .sqrt()
    }

    /// Max pointwise Euclidean length on the physical grid.
    pub fn linf(&self) -> f64 {
        let phys: Vec<Vec<f64>> = self.comps.iter().map(|c| c.to_physical()).collect();
        let mut worst = 0.0f64;
        for i in 0..phys[0].len() {
            let mut s = 0.0;
            for p in &phys {
                s += p[i] * p[i];
            }
            worst = worst.max(s);
        }
        worst.sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        for comp in &mut self.comps {
            comp.scale(c);
        }
    }

    pub fn scaled(&self, c: f64) -> SpectralVector {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    pub fn axpy(&mut self, c: f64, rhs: &SpectralVector) {
        assert_eq!(self.dim(), rhs.dim());
        for (a, b) in self.comps.iter_mut().zip(&rhs.comps) {
            a.axpy(c, b);
        }
    }

    pub fn add(&self, rhs: &SpectralVector) -> SpectralVector {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }

    pub fn sub(&self, rhs: &SpectralVector) -> SpectralVector {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }

    pub fn check_finite(&self, what: &str, time: f64) -> Result<()> {
        for c in &self.comps {
            c.check_finite(what, time)?;
        }
        Ok(())
    }
}
