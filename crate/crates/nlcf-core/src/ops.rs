//! Exact spectral calculus: gradients, divergence, Laplacian, Helmholtz
//! projectors and 2/3-rule dealiasing.
//!
//! Every operator acts mode by mode on the differentiation wavevector
//! (Nyquist components treated as zero). The mean mode and pure-Nyquist
//! modes, which the calculus cannot see, are assigned to the
//! divergence-free projector `P`.

use num_complex::Complex64;

use crate::field::{SpectralScalar, SpectralVector};
use crate::grid::Grid;

/// Spectral gradient; component `m` has coefficients `i k_m f̂(k)`.
pub fn gradient(f: &SpectralScalar) -> SpectralVector {
    let g = f.grid();
    let mut comps = Vec::with_capacity(g.dim());
    for ax in 0..g.dim() {
        let mut out = SpectralScalar::zero(g);
        {
            let oc = out.coeffs_mut();
            let fc = f.coeffs();
            g.for_each_deriv_mode(|flat, k| {
                oc[flat] = Complex64::new(0.0, k[ax]) * fc[flat];
            });
        }
        comps.push(out);
    }
    SpectralVector::from_components(comps)
}

/// Spectral divergence `Σ_m i k_m ŵ_m(k)`.
pub fn divergence(w: &SpectralVector) -> SpectralScalar {
    let g = w.grid();
    let mut out = SpectralScalar::zero(g);
    {
        let oc = out.coeffs_mut();
        g.for_each_deriv_mode(|flat, k| {
            let mut s = Complex64::new(0.0, 0.0);
            for ax in 0..g.dim() {
                s += Complex64::new(0.0, k[ax]) * w.comp(ax).coeffs()[flat];
            }
            oc[flat] = s;
        });
    }
    out
}

/// Spectral Laplacian `-|k|² f̂(k)`.
pub fn laplacian(f: &SpectralScalar) -> SpectralScalar {
    let g = f.grid();
    let mut out = SpectralScalar::zero(g);
    {
        let oc = out.coeffs_mut();
        let fc = f.coeffs();
        g.for_each_deriv_mode(|flat, k| {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            oc[flat] = -k2 * fc[flat];
        });
    }
    out
}

pub fn laplacian_vec(w: &SpectralVector) -> SpectralVector {
    SpectralVector::from_components(w.iter().map(laplacian).collect())
}

/// All second partials `∂_i ∂_j f` in row-major `(i,j)` order (`dim²` fields).
pub fn hessian(f: &SpectralScalar) -> Vec<SpectralScalar> {
    let g = f.grid();
    let mut out = Vec::with_capacity(g.dim() * g.dim());
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let mut h = SpectralScalar::zero(g);
            {
                let hc = h.coeffs_mut();
                let fc = f.coeffs();
                g.for_each_deriv_mode(|flat, k| {
                    hc[flat] = -k[i] * k[j] * fc[flat];
                });
            }
            out.push(h);
        }
    }
    out
}

/// Gradient-part (compressible) Helmholtz projector: per mode `k ≠ 0`,
/// `Q̂w = (k·ŵ/|k|²) k`. Mean and pure-Nyquist modes go to `P`.
pub fn project_q(w: &SpectralVector) -> SpectralVector {
    let g = w.grid();
    let mut out = SpectralVector::zero(g);
    g.for_each_deriv_mode(|flat, k| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            return;
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for ax in 0..g.dim() {
            dot += k[ax] * w.comp(ax).coeffs()[flat];
        }
        let scale = dot / k2;
        for ax in 0..g.dim() {
            out.comp_mut(ax).coeffs_mut()[flat] = scale * k[ax];
        }
    });
    out
}

/// Divergence-free (solenoidal) Helmholtz projector `P = I − Q`.
pub fn project_p(w: &SpectralVector) -> SpectralVector {
    let q = project_q(w);
    w.sub(&q)
}

/// True when `3|k_m| > N` for some axis, i.e. the mode is discarded by the
/// 2/3 rule. Uses the signed wavenumber including Nyquist.
#[inline]
fn aliased(grid: Grid, k: [i64; 3]) -> bool {
    let n = grid.n() as i64;
    (0..grid.dim()).any(|ax| 3 * k[ax].abs() > n)
}

/// 2/3-rule dealiasing: zero every coefficient with `|k_m| > N/3` on any
/// axis. Idempotent.
pub fn dealias(f: &mut SpectralScalar) {
    let g = f.grid();
    let fc = f.coeffs_mut();
    g.for_each_mode(|flat, k| {
        if aliased(g, k) {
            fc[flat] = Complex64::new(0.0, 0.0);
        }
    });
}

pub fn dealiased(f: &SpectralScalar) -> SpectralScalar {
    let mut out = f.clone();
    dealias(&mut out);
    out
}

pub fn dealias_vec(w: &mut SpectralVector) {
    for ax in 0..w.dim() {
        dealias(w.comp_mut(ax));
    }
}

/// Pointwise product of two fields, transformed back and dealiased.
pub fn product(f: &SpectralScalar, g: &SpectralScalar) -> SpectralScalar {
    let fa = f.to_physical();
    let fb = g.to_physical();
    let prod: Vec<f64> = fa.iter().zip(&fb).map(|(a, b)| a * b).collect();
    let mut out = SpectralScalar::from_physical(f.grid(), &prod);
    dealias(&mut out);
    out
}

/// Advection term `w·∇f` with the pointwise product dealiased.
pub fn advect(w: &SpectralVector, f: &SpectralScalar) -> SpectralScalar {
    let g = f.grid();
    let grad = gradient(f);
    let mut acc = vec![0.0; g.len()];
    for ax in 0..g.dim() {
        let wp = w.comp(ax).to_physical();
        let gp = grad.comp(ax).to_physical();
        for (a, (b, c)) in acc.iter_mut().zip(wp.iter().zip(&gp)) {
            *a += b * c;
        }
    }
    let mut out = SpectralScalar::from_physical(g, &acc);
    dealias(&mut out);
    out
}

pub fn advect_vec(w: &SpectralVector, f: &SpectralVector) -> SpectralVector {
    SpectralVector::from_components(f.iter().map(|c| advect(w, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::mode_index;
    use crate::random::smooth_scalar;
    use crate::Grid;
    use proptest::prelude::*;

    fn g2() -> Grid {
        Grid::new(2, 32).unwrap()
    }

    #[test]
    fn gradient_of_zero_is_zero() {
        let f = SpectralScalar::zero(g2());
        let grad = gradient(&f);
        assert_eq!(grad.l2_norm(), 0.0);
    }

    #[test]
    fn gradient_of_single_modes() {
        let g = g2();
        // f = sin(x) -> (cos x, 0)
        let f = SpectralScalar::harmonic(g, [1, 0, 0], 0.0, 1.0);
        let grad = gradient(&f);
        let expect = SpectralScalar::harmonic(g, [1, 0, 0], 1.0, 0.0);
        assert!(grad.comp(0).sub(&expect).l2_norm() < 1e-12);
        assert!(grad.comp(1).l2_norm() < 1e-14);

        // f = cos(3y) -> (0, -3 sin(3y))
        let f = SpectralScalar::harmonic(g, [0, 3, 0], 1.0, 0.0);
        let grad = gradient(&f);
        let expect = SpectralScalar::harmonic(g, [0, 3, 0], 0.0, -3.0);
        assert!(grad.comp(0).l2_norm() < 1e-14);
        assert!(grad.comp(1).sub(&expect).l2_norm() < 1e-12);
    }

    #[test]
    fn laplacian_of_sin_2x() {
        let g = g2();
        let f = SpectralScalar::harmonic(g, [2, 0, 0], 0.0, 1.0);
        let lap = laplacian(&f);
        let expect = f.scaled(-4.0);
        assert!(lap.sub(&expect).l2_norm() < 1e-12);
    }

    #[test]
    fn div_grad_equals_laplacian_in_coefficients() {
        let g = g2();
        let f = smooth_scalar(g, 7, 3.0);
        let dg = divergence(&gradient(&f));
        let lap = laplacian(&f);
        // same mode-by-mode identity, up to one rounding in i·k·(i·k·ĉ)
        let scale: f64 = lap.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let err: f64 = dg
            .coeffs()
            .iter()
            .zip(lap.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-14 * scale);
    }

    #[test]
    fn curl_field_is_divergence_free() {
        let g = g2();
        let psi = smooth_scalar(g, 11, 3.0);
        let gp = gradient(&psi);
        let w = SpectralVector::from_components(vec![gp.comp(1).scaled(-1.0), gp.comp(0).clone()]);
        assert!(divergence(&w).l2_norm() < 1e-12);
        // P fixes solenoidal fields
        let pw = project_p(&w);
        assert!(pw.sub(&w).l2_norm() < 1e-12 * w.l2_norm().max(1.0));
    }

    #[test]
    fn q_fixes_gradients() {
        let g = g2();
        let mut f = smooth_scalar(g, 13, 3.0);
        f.set_mean(0.0);
        let w = gradient(&f);
        let qw = project_q(&w);
        let pw = project_p(&w);
        assert!(qw.sub(&w).l2_norm() < 1e-12 * w.l2_norm());
        assert!(pw.l2_norm() < 1e-12 * w.l2_norm());
    }

    #[test]
    fn projector_algebra() {
        let g = g2();
        let w = crate::random::smooth_vector(g, 17, 3.0);
        let p = project_p(&w);
        let q = project_q(&w);
        let scale = w.l2_norm();
        assert!(p.add(&q).sub(&w).l2_norm() < 1e-12 * scale);
        assert!(project_q(&p).l2_norm() < 1e-12 * scale);
        assert!(project_p(&p).sub(&p).l2_norm() < 1e-12 * scale);
        assert!(project_q(&q).sub(&q).l2_norm() < 1e-12 * scale);
    }

    #[test]
    fn adjointness_of_gradient_and_divergence() {
        let g = g2();
        let mut f = smooth_scalar(g, 19, 3.0);
        f.set_mean(0.0);
        let w = crate::random::smooth_vector(g, 23, 3.0);
        let lhs: f64 = (0..g.dim())
            .map(|ax| gradient(&f).comp(ax).inner(w.comp(ax)))
            .sum();
        let rhs = -f.inner(&divergence(&w));
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn dealias_drops_mode_above_third() {
        // N = 16: mode (N/2 - 1, 0) = (7, 0) exceeds N/3 and must vanish
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralScalar::harmonic(g, [7, 0, 0], 1.0, 0.0);
        let d = dealiased(&f);
        assert_eq!(d.l2_norm(), 0.0);
        // mode (5,0): 3·5 = 15 <= 16 is retained
        let f = SpectralScalar::harmonic(g, [5, 0, 0], 1.0, 0.0);
        let d = dealiased(&f);
        assert!(d.sub(&f).l2_norm() < 1e-12);
    }

    #[test]
    fn nyquist_is_dropped_from_derivatives() {
        let g = Grid::new(2, 16).unwrap();
        let nyq = (g.n() / 2) as i64;
        let mut f = SpectralScalar::zero(g);
        f.coeffs_mut()[mode_index(g, [nyq, 1, 0])] = Complex64::new(8.0, 0.0);
        f.coeffs_mut()[mode_index(g, [nyq, -1, 0])] = Complex64::new(8.0, 0.0);
        let grad = gradient(&f);
        assert_eq!(grad.comp(0).l2_norm(), 0.0);
        assert!(grad.comp(1).l2_norm() > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn plancherel_random(seed in 0u64..1000) {
            let g = g2();
            let f = smooth_scalar(g, seed, 2.0);
            let phys = f.to_physical();
            let h = g.spacing();
            let quad: f64 = phys.iter().map(|v| v * v).sum::<f64>() * h * h;
            let spec = f.l2_norm_sq();
            prop_assert!((quad - spec).abs() <= 1e-12 * quad.max(1e-30));
        }

        #[test]
        fn dealias_idempotent(seed in 0u64..1000) {
            let g = g2();
            let f = smooth_scalar(g, seed, 1.0);
            let d1 = dealiased(&f);
            let d2 = dealiased(&d1);
            prop_assert!(d2.sub(&d1).l2_norm() == 0.0);
        }

        #[test]
        fn projectors_sum_to_identity(seed in 0u64..1000) {
            let g = g2();
            let w = crate::random::smooth_vector(g, seed, 2.0);
            let back = project_p(&w).add(&project_q(&w));
            prop_assert!(back.sub(&w).l2_norm() <= 1e-12 * w.l2_norm().max(1e-30));
        }
    }
}
