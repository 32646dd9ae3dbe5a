//! State containers, constitutive laws and right-hand-side assembly for
//! the compressible nematic system and its incompressible limit.
//!
//! Nonlinear terms are evaluated pointwise in physical space and dealiased
//! on output. The momentum equation is evolved in velocity form (density
//! divided out), which isolates a constant-coefficient linear part that
//! the integrator propagates exactly; the functions here return the
//! nonlinear remainders and, separately, the assembled full right-hand
//! sides used by diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{SpectralScalar, SpectralVector};
use crate::grid::Grid;
use crate::ops;

/// Isentropic pressure `P(ρ) = A ρ^γ` normalized so that `P'(1) = Aγ = 1`.
#[derive(Debug, Clone, Copy)]
pub struct PressureLaw {
    coef: f64,
    gamma: f64,
}

impl PressureLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Validation(format!(
                "pressure law requires gamma > 1, got {gamma}"
            )));
        }
        Ok(PressureLaw {
            coef: 1.0 / gamma,
            gamma,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Leading coefficient `A = 1/γ`.
    pub fn coef(&self) -> f64 {
        self.coef
    }

    pub fn pressure_of(&self, rho: f64) -> f64 {
        self.coef * rho.powf(self.gamma)
    }

    /// `P'(ρ) = ρ^{γ-1}` under the `Aγ = 1` normalization.
    pub fn dpressure_of(&self, rho: f64) -> f64 {
        rho.powf(self.gamma - 1.0)
    }

    /// Pressure-slope deviation `k(a) = P'(1+a) − 1`. Exactly `a` for γ = 2.
    pub fn k_of(&self, a: f64) -> f64 {
        if self.gamma == 2.0 {
            a
        } else {
            (1.0 + a).powf(self.gamma - 1.0) - 1.0
        }
    }

    /// Internal-energy density `Π(ρ)` with `Π″ = P'/ρ`, `Π(1) = Π'(1) = 0`.
    pub fn internal_energy_of(&self, rho: f64) -> f64 {
        let g = self.gamma;
        (rho.powf(g) - 1.0) / (g * (g - 1.0)) - (rho - 1.0) / (g - 1.0)
    }
}

/// State of the compressible system: `a = ρ − 1`, velocity, director.
#[derive(Debug, Clone)]
pub struct CompressibleState {
    pub a: SpectralScalar,
    pub v: SpectralVector,
    pub d: SpectralVector,
    pub t: f64,
}

/// State of the incompressible limit system: solenoidal velocity, director.
#[derive(Debug, Clone)]
pub struct IncompressibleState {
    pub v: SpectralVector,
    pub d: SpectralVector,
    pub t: f64,
}

impl IncompressibleState {
    pub fn check_solenoidal(&self) -> Result<()> {
        let div = ops::divergence(&self.v).l2_norm();
        if div > 1e-8 * (1.0 + self.v.l2_norm()) {
            return Err(Error::NonSolenoidal { norm: div });
        }
        Ok(())
    }
}

/// Physical-space density `1 + a`, failing on the first nonpositive point.
pub fn density_values(a: &SpectralScalar, t: f64) -> Result<Vec<f64>> {
    let grid = a.grid();
    let phys = a.to_physical();
    for (i, &val) in phys.iter().enumerate() {
        if 1.0 + val <= 0.0 {
            let idx = grid.unflat(i);
            return Err(Error::NonPositiveDensity {
                index: idx[..grid.dim()].to_vec(),
                value: 1.0 + val,
                time: t,
            });
        }
    }
    Ok(phys.into_iter().map(|v| 1.0 + v).collect())
}

/// Pointwise `P(1+a)`, dealiased.
pub fn pressure(a: &SpectralScalar, law: &PressureLaw, t: f64) -> Result<SpectralScalar> {
    let rho = density_values(a, t)?;
    let vals: Vec<f64> = rho.iter().map(|&r| law.pressure_of(r)).collect();
    let mut out = SpectralScalar::from_physical(a.grid(), &vals);
    ops::dealias(&mut out);
    Ok(out)
}

/// Pointwise `k(a) = P'(1+a) − 1`, dealiased.
pub fn k_of_a(a: &SpectralScalar, law: &PressureLaw, t: f64) -> Result<SpectralScalar> {
    let rho = density_values(a, t)?;
    let vals: Vec<f64> = rho.iter().map(|&r| law.k_of(r - 1.0)).collect();
    let mut out = SpectralScalar::from_physical(a.grid(), &vals);
    ops::dealias(&mut out);
    Ok(out)
}

/// All partials `∂_i d_m` as physical-space samples, indexed `[i][m]`.
fn director_gradients(d: &SpectralVector) -> Vec<Vec<Vec<f64>>> {
    let dim = d.dim();
    let mut grads = vec![Vec::with_capacity(dim); dim];
    for m in 0..dim {
        let g = ops::gradient(d.comp(m));
        for (i, row) in grads.iter_mut().enumerate() {
            row.push(g.comp(i).to_physical());
        }
    }
    grads
}

/// Elastic force `−div(∇d ⊙ ∇d − ½|∇d|² I)`, the director stress
/// contribution as it enters the momentum balance. Dealiased.
pub fn ericksen_force(d: &SpectralVector) -> SpectralVector {
    stress_divergence(d, true).scaled(-1.0)
}

/// `−div(∇d ⊙ ∇d)` without the trace part, as in the limit system where
/// the isotropic piece is absorbed into the pressure.
pub fn ericksen_force_traceless(d: &SpectralVector) -> SpectralVector {
    stress_divergence(d, false).scaled(-1.0)
}

/// `div(∇d ⊙ ∇d − ½|∇d|²I)` (or without the trace subtraction), where
/// `(∇d ⊙ ∇d)_{ij} = ∂_i d · ∂_j d`.
fn stress_divergence(d: &SpectralVector, subtract_trace: bool) -> SpectralVector {
    let grid = d.grid();
    let dim = grid.dim();
    let grads = director_gradients(d);
    let npts = grid.len();
    // |∇d|² = Σ_{i,m} (∂_i d_m)²
    let mut gsq = vec![0.0; npts];
    if subtract_trace {
        for row in &grads {
            for comp in row {
                for (s, &v) in gsq.iter_mut().zip(comp) {
                    *s += v * v;
                }
            }
        }
    }
    let mut out_comps = Vec::with_capacity(dim);
    for i in 0..dim {
        // row i of the stress: S_ij = ∂_i d · ∂_j d − ½ δ_ij |∇d|²
        let mut row_fields = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut s = vec![0.0; npts];
            for m in 0..dim {
                let gi = &grads[i][m];
                let gj = &grads[j][m];
                for ((sv, &a), &b) in s.iter_mut().zip(gi).zip(gj) {
                    *sv += a * b;
                }
            }
            if subtract_trace && i == j {
                for (sv, &g2) in s.iter_mut().zip(&gsq) {
                    *sv -= 0.5 * g2;
                }
            }
            let mut field = SpectralScalar::from_physical(grid, &s);
            ops::dealias(&mut field);
            row_fields.push(field);
        }
        // (div S)_i = Σ_j ∂_j S_ij
        let mut div_i = SpectralScalar::zero(grid);
        for (j, f) in row_fields.iter().enumerate() {
            div_i.axpy(1.0, &ops::gradient(f).components()[j]);
        }
        out_comps.push(div_i);
    }
    SpectralVector::from_components(out_comps)
}

/// `|∇d|² d` evaluated pointwise, dealiased.
fn gradient_energy_times_director(d: &SpectralVector) -> SpectralVector {
    let grid = d.grid();
    let dim = grid.dim();
    let grads = director_gradients(d);
    let mut gsq = vec![0.0; grid.len()];
    for row in &grads {
        for comp in row {
            for (s, &v) in gsq.iter_mut().zip(comp) {
                *s += v * v;
            }
        }
    }
    let mut comps = Vec::with_capacity(dim);
    for m in 0..dim {
        let dm = d.comp(m).to_physical();
        let vals: Vec<f64> = gsq.iter().zip(&dm).map(|(&g, &x)| g * x).collect();
        let mut f = SpectralScalar::from_physical(grid, &vals);
        ops::dealias(&mut f);
        comps.push(f);
    }
    SpectralVector::from_components(comps)
}

/// Full director right-hand side `Δd + |∇d|² d − v·∇d`.
pub fn director_rhs(v: &SpectralVector, d: &SpectralVector) -> SpectralVector {
    let mut out = ops::laplacian_vec(d);
    out.axpy(1.0, &gradient_energy_times_director(d));
    out.axpy(-1.0, &ops::advect_vec(v, d));
    out
}

/// Nonlinear director part (heat diffusion excluded): `|∇d|²d − v·∇d`.
pub fn director_nonlinear(v: &SpectralVector, d: &SpectralVector) -> SpectralVector {
    let mut out = gradient_energy_times_director(d);
    out.axpy(-1.0, &ops::advect_vec(v, d));
    out
}

/// Nonlinear right-hand sides of the compressible system in velocity form.
///
/// The constant-coefficient viscous terms, the acoustic coupling
/// `(−div Qv, −∇a)` and director diffusion are excluded: the integrator's
/// propagator handles them exactly. Returned parts:
///
/// * `da = −div(a v)`
/// * `dv = −v·∇v + ((1+a)^{-1} − 1)(μΔv + (μ+λ)∇div v)
///         − ((1+a)^{γ-2} − 1)∇a + (1+a)^{-1}·elastic force`
/// * `dd = |∇d|²d − v·∇d`
pub fn compressible_nonlinear(
    state: &CompressibleState,
    law: &PressureLaw,
    mu: f64,
    lambda: f64,
) -> Result<(SpectralScalar, SpectralVector, SpectralVector)> {
    let grid = state.a.grid();
    let rho = density_values(&state.a, state.t)?;
    let v_phys: Vec<Vec<f64>> = state.v.iter().map(|c| c.to_physical()).collect();

    // mass: −div(a v), conservative form, exactly mean-free
    let da = {
        let mut comps = Vec::with_capacity(grid.dim());
        for vp in &v_phys {
            let av: Vec<f64> = rho.iter().zip(vp).map(|(&r, &v)| (r - 1.0) * v).collect();
            let mut f = SpectralScalar::from_physical(grid, &av);
            ops::dealias(&mut f);
            comps.push(f);
        }
        ops::divergence(&SpectralVector::from_components(comps)).scaled(-1.0)
    };

    // momentum
    let mut dv = ops::advect_vec(&state.v, &state.v).scaled(-1.0);

    // variable-coefficient viscous correction ((1+a)^{-1} − 1)·Lamé(v)
    let lame = {
        let mut w = ops::laplacian_vec(&state.v).scaled(mu);
        w.axpy(mu + lambda, &ops::gradient(&ops::divergence(&state.v)));
        w
    };
    let recip_m1: Vec<f64> = rho.iter().map(|&r| 1.0 / r - 1.0).collect();
    for ax in 0..grid.dim() {
        let wp = lame.comp(ax).to_physical();
        let vals: Vec<f64> = recip_m1.iter().zip(&wp).map(|(&c, &w)| c * w).collect();
        let mut f = SpectralScalar::from_physical(grid, &vals);
        ops::dealias(&mut f);
        dv.comp_mut(ax).axpy(1.0, &f);
    }

    // pressure-gradient remainder −((1+a)^{γ-2} − 1)∇a; vanishes for γ = 2
    if law.gamma() != 2.0 {
        let grad_a = ops::gradient(&state.a);
        let factor: Vec<f64> = rho.iter().map(|&r| r.powf(law.gamma() - 2.0) - 1.0).collect();
        for ax in 0..grid.dim() {
            let gp = grad_a.comp(ax).to_physical();
            let vals: Vec<f64> = factor.iter().zip(&gp).map(|(&c, &g)| -c * g).collect();
            let mut f = SpectralScalar::from_physical(grid, &vals);
            ops::dealias(&mut f);
            dv.comp_mut(ax).axpy(1.0, &f);
        }
    }

    // elastic force divided by density
    let force = ericksen_force(&state.d);
    for ax in 0..grid.dim() {
        let fp = force.comp(ax).to_physical();
        let vals: Vec<f64> = rho.iter().zip(&fp).map(|(&r, &f)| f / r).collect();
        let mut f = SpectralScalar::from_physical(grid, &vals);
        ops::dealias(&mut f);
        dv.comp_mut(ax).axpy(1.0, &f);
    }

    let dd = director_nonlinear(&state.v, &state.d);
    Ok((da, dv, dd))
}

/// Full compressible right-hand sides (nonlinear parts plus the linear
/// acoustic/viscous/diffusive terms), used by diagnostics.
pub fn compressible_full_rhs(
    state: &CompressibleState,
    law: &PressureLaw,
    mu: f64,
    lambda: f64,
) -> Result<(SpectralScalar, SpectralVector, SpectralVector)> {
    let (mut da, mut dv, mut dd) = compressible_nonlinear(state, law, mu, lambda)?;
    da.axpy(-1.0, &ops::divergence(&state.v));
    dv.axpy(mu, &ops::laplacian_vec(&state.v));
    dv.axpy(mu + lambda, &ops::gradient(&ops::divergence(&state.v)));
    dv.axpy(-1.0, &ops::gradient(&state.a));
    dd.axpy(1.0, &ops::laplacian_vec(&state.d));
    Ok((da, dv, dd))
}

/// Nonlinear right-hand sides of the incompressible limit system:
/// `dv = P(−v·∇v − div(∇d⊙∇d))`, `dd = |∇d|²d − v·∇d`.
pub fn incompressible_nonlinear(
    state: &IncompressibleState,
) -> Result<(SpectralVector, SpectralVector)> {
    state.check_solenoidal()?;
    let mut dv = ops::advect_vec(&state.v, &state.v).scaled(-1.0);
    dv.axpy(1.0, &ericksen_force_traceless(&state.d));
    let dv = ops::project_p(&dv);
    let dd = director_nonlinear(&state.v, &state.d);
    Ok((dv, dd))
}

/// Full incompressible right-hand sides including diffusion.
pub fn incompressible_full_rhs(
    state: &IncompressibleState,
    mu: f64,
) -> Result<(SpectralVector, SpectralVector)> {
    let (mut dv, mut dd) = incompressible_nonlinear(state)?;
    dv.axpy(mu, &ops::laplacian_vec(&state.v));
    dd.axpy(1.0, &ops::laplacian_vec(&state.d));
    Ok((dv, dd))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub internal: f64,
    pub elastic: f64,
    pub total: f64,
}

/// Discrete energy `∫ ½(1+a)|v|² + Π(1+a) + ½|∇d|² dx`.
pub fn energy(state: &CompressibleState, law: &PressureLaw) -> Result<EnergyBreakdown> {
    let grid = state.a.grid();
    let rho = density_values(&state.a, state.t)?;
    let cell = grid.spacing().powi(grid.dim() as i32);

    let v_phys: Vec<Vec<f64>> = state.v.iter().map(|c| c.to_physical()).collect();
    let mut kinetic = 0.0;
    for (i, &r) in rho.iter().enumerate() {
        let mut vsq = 0.0;
        for vp in &v_phys {
            vsq += vp[i] * vp[i];
        }
        kinetic += 0.5 * r * vsq;
    }
    kinetic *= cell;

    let internal: f64 = rho.iter().map(|&r| law.internal_energy_of(r)).sum::<f64>() * cell;

    let mut elastic = 0.0;
    for m in 0..grid.dim() {
        let g = ops::gradient(state.d.comp(m));
        for comp in g.iter() {
            elastic += 0.5 * comp.l2_norm_sq();
        }
    }

    Ok(EnergyBreakdown {
        kinetic,
        internal,
        elastic,
        total: kinetic + internal + elastic,
    })
}

/// Named initial-condition presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    Rest,
    TaylorGreen,
    TgDirectorTwist,
    /// Twist preset plus a small gradient velocity component, so the
    /// potential part of the data is nonzero.
    TgDirectorTwistQ,
    AcousticPulse,
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rest" => Ok(Preset::Rest),
            "taylor-green" => Ok(Preset::TaylorGreen),
            "tg-plus-director-twist" => Ok(Preset::TgDirectorTwist),
            "tg-plus-director-twist-q" => Ok(Preset::TgDirectorTwistQ),
            "acoustic-pulse" => Ok(Preset::AcousticPulse),
            other => Err(format!(
                "unknown preset '{other}' (expected rest | taylor-green | \
                 tg-plus-director-twist | tg-plus-director-twist-q | acoustic-pulse)"
            )),
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Preset::Rest => "rest",
            Preset::TaylorGreen => "taylor-green",
            Preset::TgDirectorTwist => "tg-plus-director-twist",
            Preset::TgDirectorTwistQ => "tg-plus-director-twist-q",
            Preset::AcousticPulse => "acoustic-pulse",
        };
        write!(f, "{s}")
    }
}

/// Preset amplitudes: `eps1`/`eps2` enter the director twist phase (and
/// the pulse amplitude), `eps_q` scales the gradient velocity component.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PresetParams {
    pub eps1: f64,
    pub eps2: f64,
    pub eps_q: f64,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams {
            eps1: 0.2,
            eps2: 0.2,
            eps_q: 0.05,
        }
    }
}

fn constant_director(grid: Grid) -> SpectralVector {
    let mut d = SpectralVector::zero(grid);
    d.comp_mut(0).set_mean(1.0);
    d
}

fn taylor_green_velocity(grid: Grid) -> SpectralVector {
    let mut v = SpectralVector::zero(grid);
    if grid.dim() == 2 {
        *v.comp_mut(0) = SpectralScalar::from_fn(grid, |p| p[0].sin() * p[1].cos());
        *v.comp_mut(1) = SpectralScalar::from_fn(grid, |p| -p[0].cos() * p[1].sin());
    } else {
        *v.comp_mut(0) = SpectralScalar::from_fn(grid, |p| p[0].sin() * p[1].cos() * p[2].cos());
        *v.comp_mut(1) = SpectralScalar::from_fn(grid, |p| -p[0].cos() * p[1].sin() * p[2].cos());
    }
    ops::dealias_vec(&mut v);
    v
}

fn twisted_director(grid: Grid, eps1: f64, eps2: f64) -> SpectralVector {
    let mut d = SpectralVector::zero(grid);
    let theta = move |p: [f64; 3]| eps1 * p[0].sin() + eps2 * p[1].cos();
    *d.comp_mut(0) = SpectralScalar::from_fn(grid, move |p| theta(p).cos());
    *d.comp_mut(1) = SpectralScalar::from_fn(grid, move |p| theta(p).sin());
    ops::dealias_vec(&mut d);
    d
}

/// Build `(a, v, d)` for a preset. All fields are dealiased.
pub fn build_preset(preset: Preset, grid: Grid, params: PresetParams) -> CompressibleState {
    let (a, v, d) = match preset {
        Preset::Rest => (
            SpectralScalar::zero(grid),
            SpectralVector::zero(grid),
            constant_director(grid),
        ),
        Preset::TaylorGreen => (
            SpectralScalar::zero(grid),
            taylor_green_velocity(grid),
            constant_director(grid),
        ),
        Preset::TgDirectorTwist => (
            SpectralScalar::zero(grid),
            taylor_green_velocity(grid),
            twisted_director(grid, params.eps1, params.eps2),
        ),
        Preset::TgDirectorTwistQ => {
            let mut v = taylor_green_velocity(grid);
            // gradient component eps_q·∇(sin x) = eps_q·cos(x) e₁
            v.comp_mut(0)
                .axpy(params.eps_q, &SpectralScalar::harmonic(grid, [1, 0, 0], 1.0, 0.0));
            (
                SpectralScalar::zero(grid),
                v,
                twisted_director(grid, params.eps1, params.eps2),
            )
        }
        Preset::AcousticPulse => (
            SpectralScalar::harmonic(grid, [1, 0, 0], params.eps1, 0.0),
            SpectralVector::zero(grid),
            constant_director(grid),
        ),
    };
    CompressibleState { a, v, d, t: 0.0 }
}
