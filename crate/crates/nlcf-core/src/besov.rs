//! Littlewood–Paley dyadic decomposition and homogeneous Besov norms
//! `Ḃ^s_{2,1}` on the resolved frequency band of a periodic grid.
//!
//! The torus is a desk-scale surrogate for whole space: dyadic annuli that
//! carry no resolved integer wavevector are dropped, and whatever block
//! mass the resolved range fails to reproduce is reported as
//! `truncation_mass` rather than silently ignored. The mean mode is
//! excluded from all homogeneous quantities and reported separately.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{SpectralScalar, SpectralVector};
use crate::grid::Grid;

/// Inner edge of the support annulus of the radial profile `φ`.
pub const ANNULUS_LO: f64 = 0.75;
/// Outer edge of the support annulus of `φ`.
pub const ANNULUS_HI: f64 = 8.0 / 3.0;

/// `C^∞` cutoff built from `exp(-1/t)`: equals 1 on `[0, 3/4]`, vanishes on
/// `[4/3, ∞)`, strictly decreasing in between.
pub fn chi(r: f64) -> f64 {
    let lo = 0.75;
    let hi = 4.0 / 3.0;
    if r <= lo {
        return 1.0;
    }
    if r >= hi {
        return 0.0;
    }
    let t = (r - lo) / (hi - lo);
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    b / (a + b)
}

/// Radial annulus profile `φ(r) = χ(r/2) − χ(r)`, supported in
/// `[3/4, 8/3]`; the dyadic family `φ(2^{-j}·)` telescopes to 1 away from
/// the origin.
pub fn profile(r: f64) -> f64 {
    chi(r / 2.0) - chi(r)
}

/// Annulus-supported partition of unity tabulated on a grid's modes.
#[derive(Debug, Clone)]
pub struct DyadicFilter {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    /// `weights[j - j_min][flat]` = `φ(2^{-j} k)` with `k` the signed
    /// wavevector (Nyquist included: block filters are not derivatives).
    weights: Vec<Vec<f64>>,
    /// |k| per mode, cached.
    radius: Vec<f64>,
}

impl DyadicFilter {
    /// Build the filter for a grid. The dyadic range starts at the lowest
    /// annulus touching `|k| = 1` and ends at the highest annulus that
    /// intersects the resolved cube (corner modes included, so the
    /// partition of unity holds at every resolved wavevector).
    pub fn new(grid: Grid) -> Self {
        let j_min = -1;
        let r_max = grid.max_radius();
        // largest j with 3/4·2^j < r_max
        let mut j_max = j_min;
        while ANNULUS_LO * 2f64.powi(j_max + 1) < r_max {
            j_max += 1;
        }
        let mut radius = vec![0.0f64; grid.len()];
        grid.for_each_mode(|flat, k| {
            radius[flat] = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
        });
        let weights = (j_min..=j_max)
            .map(|j| {
                let s = 2f64.powi(-j);
                radius.iter().map(|&r| profile(s * r)).collect()
            })
            .collect();
        DyadicFilter {
            grid,
            j_min,
            j_max,
            weights,
            radius,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn j_range(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    fn weight_row(&self, j: i32) -> Result<&[f64]> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::BlockOutOfRange {
                j,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        Ok(&self.weights[(j - self.j_min) as usize])
    }

    /// Worst deviation of `Σ_j φ(2^{-j}k)` from 1 over resolved `k ≠ 0`.
    pub fn partition_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for flat in 0..self.grid.len() {
            if self.radius[flat] == 0.0 {
                continue;
            }
            let sum: f64 = self.weights.iter().map(|row| row[flat]).sum();
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// Dyadic block `Δ_j u`: coefficients multiplied by `φ(2^{-j}k)`.
    pub fn apply_block(&self, u: &SpectralScalar, j: i32) -> Result<SpectralScalar> {
        let row = self.weight_row(j)?;
        let mut out = u.clone();
        for (c, &w) in out.coeffs_mut().iter_mut().zip(row) {
            *c *= w;
        }
        Ok(out)
    }

    /// `L²` norm of `Δ_j u` for a multi-component field, via Plancherel
    /// (no inverse transform needed).
    pub fn block_l2(&self, comps: &[&SpectralScalar], j: i32) -> Result<f64> {
        let row = self.weight_row(j)?;
        let grid = comps[0].grid();
        let nn = grid.len() as f64;
        let mut sum = 0.0;
        for c in comps {
            debug_assert_eq!(c.grid(), grid);
            for (z, &w) in c.coeffs().iter().zip(row) {
                sum += (w * w) * z.norm_sqr();
            }
        }
        Ok((grid.volume() * sum / (nn * nn)).sqrt())
    }

    /// Homogeneous Besov norm `Σ_j 2^{js} ||Δ_j u||_{L²}` over the resolved
    /// range, for a multi-component field.
    pub fn besov(&self, comps: &[&SpectralScalar], s: f64) -> BesovReport {
        let grid = comps[0].grid();
        let nn = grid.len() as f64;
        let mut per_j = Vec::with_capacity(self.weights.len());
        let mut value = 0.0;
        for j in self.j_min..=self.j_max {
            let norm = self.block_l2(comps, j).expect("j in range");
            per_j.push(JContribution { j, l2: norm });
            value += 2f64.powf(j as f64 * s) * norm;
        }
        // Mass the resolved blocks fail to reproduce: || (1 - Σφ_j) û ||
        // over k ≠ 0, plus the mean reported separately.
        let mut resid = 0.0;
        let mut mean_sq = 0.0;
        for c in comps {
            for (flat, z) in c.coeffs().iter().enumerate() {
                if self.radius[flat] == 0.0 {
                    mean_sq += z.norm_sqr();
                    continue;
                }
                let sum: f64 = self.weights.iter().map(|row| row[flat]).sum();
                resid += (1.0 - sum).powi(2) * z.norm_sqr();
            }
        }
        let vol = grid.volume();
        BesovReport {
            s,
            value,
            per_j,
            mean_l2: (vol * mean_sq / (nn * nn)).sqrt(),
            truncation_mass: (vol * resid / (nn * nn)).sqrt(),
        }
    }

    pub fn besov_scalar(&self, u: &SpectralScalar, s: f64) -> BesovReport {
        self.besov(&[u], s)
    }

    pub fn besov_vector(&self, u: &SpectralVector, s: f64) -> BesovReport {
        let comps: Vec<&SpectralScalar> = u.iter().collect();
        self.besov(&comps, s)
    }

    /// Split `u` into `u_low = mean + Σ_{j <= j0} Δ_j u` and
    /// `u_high = u − u_low`.
    pub fn lowhigh_split(&self, u: &SpectralScalar, j0: i32) -> Result<(SpectralScalar, SpectralScalar)> {
        if j0 < self.j_min || j0 > self.j_max {
            return Err(Error::BlockOutOfRange {
                j: j0,
                j_min: self.j_min,
                j_max: self.j_max,
            });
        }
        let grid = u.grid();
        let mut low = SpectralScalar::zero(grid);
        for (flat, z) in u.coeffs().iter().enumerate() {
            let w = if self.radius[flat] == 0.0 {
                1.0
            } else {
                (self.j_min..=j0)
                    .map(|j| self.weights[(j - self.j_min) as usize][flat])
                    .sum()
            };
            low.coeffs_mut()[flat] = w * z;
        }
        let high = u.sub(&low);
        Ok((low, high))
    }
}

/// Per-block contribution to a Besov norm.
#[derive(Debug, Clone, Serialize)]
pub struct JContribution {
    pub j: i32,
    pub l2: f64,
}

/// Result of a Besov-norm evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct BesovReport {
    /// Regularity index.
    pub s: f64,
    /// `Σ_j 2^{js} ||Δ_j u||_{L²}` over the resolved range.
    pub value: f64,
    pub per_j: Vec<JContribution>,
    /// `L²` content of the excluded mean mode.
    pub mean_l2: f64,
    /// `L²` mass of `u - mean` not reproduced by the resolved blocks.
    pub truncation_mass: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::smooth_scalar;
    use proptest::prelude::*;

    fn filter(n: usize) -> (Grid, DyadicFilter) {
        let g = Grid::new(2, n).unwrap();
        (g, DyadicFilter::new(g))
    }

    #[test]
    fn chi_endpoints() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.75), 1.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(chi(2.0), 0.0);
        assert!(chi(1.0) > 0.0 && chi(1.0) < 1.0);
    }

    #[test]
    fn profile_support_and_telescoping() {
        assert_eq!(profile(0.5), 0.0); // below annulus
        assert_eq!(profile(3.0), chi(1.5)); // χ(3) = 0
        // only neighbouring scales overlap: φ(3) + φ(3/2) = 1
        assert!((profile(3.0) + profile(1.5) - 1.0).abs() < 1e-15);
        // separation: φ(r)·φ(4r) = 0 (two dyadic steps apart)
        for r in [0.8, 1.0, 1.7, 2.5] {
            assert_eq!(profile(r) * profile(4.0 * r), 0.0);
        }
    }

    #[test]
    fn partition_of_unity_everywhere() {
        for n in [16usize, 64] {
            let (_, f) = filter(n);
            assert!(f.partition_defect() < 1e-12, "defect {}", f.partition_defect());
        }
        let g3 = Grid::new(3, 32).unwrap();
        let f3 = DyadicFilter::new(g3);
        assert!(f3.partition_defect() < 1e-12);
    }

    #[test]
    fn partition_at_unit_frequency() {
        let (_, f) = filter(32);
        let sum: f64 = f.j_range().map(|j| profile(2f64.powi(-j))).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resolved_range_matches_grid() {
        let (_, f) = filter(64);
        assert_eq!(f.j_min(), -1);
        assert_eq!(f.j_max(), 5); // covers |k| up to 32√2
        let g3 = Grid::new(3, 32).unwrap();
        let f3 = DyadicFilter::new(g3);
        assert_eq!(f3.j_max(), 5); // covers |k| up to 16√3
    }

    #[test]
    fn blocks_reassemble_pure_mode() {
        let (g, f) = filter(32);
        let u = SpectralScalar::harmonic(g, [4, 0, 0], 1.0, 0.5);
        let mut sum = SpectralScalar::zero(g);
        for j in f.j_range() {
            sum.axpy(1.0, &f.apply_block(&u, j).unwrap());
        }
        assert!(sum.sub(&u).l2_norm() < 1e-12);
        // block with disjoint support is exactly zero: φ(2^{-j}·4) = 0 for j = -1
        assert_eq!(f.apply_block(&u, -1).unwrap().l2_norm(), 0.0);
        // single-frequency block norm is φ(2^{-j}·4)·||u||
        for j in f.j_range() {
            let bn = f.block_l2(&[&u], j).unwrap();
            let expect = profile(2f64.powi(-j) * 4.0) * u.l2_norm();
            assert!((bn - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn block_out_of_range_is_flagged() {
        let (g, f) = filter(32);
        let u = smooth_scalar(g, 3, 3.0);
        assert!(matches!(
            f.apply_block(&u, f.j_max() + 1),
            Err(Error::BlockOutOfRange { .. })
        ));
    }

    #[test]
    fn besov_of_constant_is_zero() {
        let (g, f) = filter(32);
        let mut u = SpectralScalar::zero(g);
        u.set_mean(3.5);
        let rep = f.besov_scalar(&u, 0.5);
        assert_eq!(rep.value, 0.0);
        assert!((rep.mean_l2 - 3.5 * g.volume().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn besov_single_mode_closed_form() {
        // ||sin 4x||_{Ḃ⁰_{2,1}} = ||sin 4x||_{L²} = π√2 on [0,2π)²
        let g = Grid::new(2, 64).unwrap();
        let f = DyadicFilter::new(g);
        let u = SpectralScalar::harmonic(g, [4, 0, 0], 0.0, 1.0);
        let rep = f.besov_scalar(&u, 0.0);
        let expect = std::f64::consts::PI * 2f64.sqrt();
        assert!((rep.value - expect).abs() < 1e-10);
        assert!(rep.truncation_mass < 1e-12);

        // s = 1 versus s = 0: ratio is Σ 2^j φ(2^{-j}4) / Σ φ(2^{-j}4),
        // computable exactly from the profile (only j = 1, 2 contribute).
        let rep1 = f.besov_scalar(&u, 1.0);
        let expect_ratio =
            (2.0 * profile(2.0) + 4.0 * profile(1.0)) / (profile(2.0) + profile(1.0));
        assert!((rep1.value / rep.value - expect_ratio).abs() < 1e-10);
        assert!(expect_ratio > 2.0 && expect_ratio < 4.0);
    }

    #[test]
    fn block_almost_orthogonality() {
        let (g, f) = filter(32);
        let u = smooth_scalar(g, 9, 2.0);
        for j in f.j_range() {
            for jp in f.j_range() {
                if (j - jp).abs() >= 2 {
                    let a = f.apply_block(&u, j).unwrap();
                    let b = f.apply_block(&u, jp).unwrap();
                    assert_eq!(a.inner(&b), 0.0, "blocks {j},{jp} not orthogonal");
                }
            }
        }
    }

    #[test]
    fn lowhigh_split_telescopes() {
        let (g, f) = filter(32);
        let u = smooth_scalar(g, 21, 2.0);
        let (lo, hi) = f.lowhigh_split(&u, 1).unwrap();
        assert!(lo.add(&hi).sub(&u).l2_norm() < 1e-13);
        // pure mode at N/4 with j0 = j_max: everything is low
        let v = SpectralScalar::harmonic(g, [(g.n() / 4) as i64, 0, 0], 1.0, 0.0);
        let (lo, hi) = f.lowhigh_split(&v, f.j_max()).unwrap();
        assert!(hi.l2_norm() < 1e-12);
        assert!(lo.sub(&v).l2_norm() < 1e-12);
        // |k| = 1 and |k| = N/4 split cleanly at j0 = 1
        let w = SpectralScalar::harmonic(g, [1, 0, 0], 1.0, 0.0)
            .add(&SpectralScalar::harmonic(g, [(g.n() / 4) as i64, 0, 0], 1.0, 0.0));
        let (lo, hi) = f.lowhigh_split(&w, 1).unwrap();
        let part1 = SpectralScalar::harmonic(g, [1, 0, 0], 1.0, 0.0);
        assert!(lo.sub(&part1).l2_norm() < 1e-12);
        assert!(hi.sub(&w.sub(&part1)).l2_norm() < 1e-12);
    }

    #[test]
    fn blocks_sum_to_mean_free_field() {
        let (g, f) = filter(64);
        let mut u = smooth_scalar(g, 33, 1.0);
        u.set_mean(0.7);
        let mut sum = SpectralScalar::zero(g);
        for j in f.j_range() {
            sum.axpy(1.0, &f.apply_block(&u, j).unwrap());
        }
        let mut mean_free = u.clone();
        mean_free.set_mean(0.0);
        assert!(sum.sub(&mean_free).l2_norm() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn besov_absolutely_homogeneous(seed in 0u64..500, c in -4.0f64..4.0) {
            let (g, f) = filter(32);
            let u = smooth_scalar(g, seed, 2.0);
            let su = u.scaled(c);
            let r1 = f.besov_scalar(&u, 0.5);
            let r2 = f.besov_scalar(&su, 0.5);
            prop_assert!((r2.value - c.abs() * r1.value).abs() <= 1e-12 * r1.value.max(1e-30));
        }
    }
}
