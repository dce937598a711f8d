//! Phase-space hydrogen atom.
//!
//! With the ansatz `ψ = e^{i p r γ/(ħδ)}·Ω` and the collective variable
//! `A = αr + iħβp̄`, the radial equation reduces to
//!
//! ```text
//! Ω″ − 2Ω′/(αδ·A) + (−ω + ζA − κA²)/(α²δ²A²)·Ω = 0
//! ω = L(L+1),  ζ = 2e²km/ħ²,  κ = −2mE/ħ²
//! ```
//!
//! which is a Nikiforov-Uvarov problem with `σ = −αδ·A`, `τ̃ = 2`,
//! `σ̃ = −ω + ζA − κA²`. The radicand becomes a perfect square for every
//! `L` exactly when `(αδ + 2)² = 1`, i.e. `αδ ∈ {−1, −3}`. The `−1` branch is
//! ordinary configuration space; `−3` keeps a genuine phase-space dependence.

use alloc::vec::Vec;

// inherent f64 methods win whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use crate::ept::ExpPowerTerm;
use crate::nu::{self, EnergyParametrizedProblem};
use crate::opspace::{is_on_manifold, OpPoint};
use crate::poly::Poly;
use crate::{Complex, Error, Result};

const BRANCH_TOL: f64 = 1e-12;

/// Physical constants and the angular momentum quantum number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
    pub coulomb_k: f64,
    /// `e²`.
    pub charge_sq: f64,
    pub l: u32,
}

impl PhysicalParams {
    /// `m = ħ = k = e² = 1`.
    pub const fn atomic(l: u32) -> Self {
        PhysicalParams {
            mass: 1.0,
            hbar: 1.0,
            coulomb_k: 1.0,
            charge_sq: 1.0,
            l,
        }
    }

    pub fn with_l(self, l: u32) -> Self {
        PhysicalParams { l, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mass, self.hbar, self.coulomb_k, self.charge_sq];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "physical constants must be positive and finite",
            ))
        }
    }

    /// Bohr radius `ħ²/(m k e²)`.
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.coulomb_k * self.charge_sq)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub omega: f64,
    pub zeta: f64,
    /// `−2m/ħ²`, so that `κ = kappa_per_energy · E`.
    pub kappa_per_energy: f64,
}

impl DerivedConstants {
    pub fn kappa_of_energy(&self, energy: f64) -> f64 {
        self.kappa_per_energy * energy
    }

    pub fn energy_of_kappa(&self, kappa: f64) -> f64 {
        kappa / self.kappa_per_energy
    }
}

pub fn derived_constants(params: &PhysicalParams) -> DerivedConstants {
    let l = params.l as f64;
    let h2 = params.hbar * params.hbar;
    DerivedConstants {
        omega: l * (l + 1.0),
        zeta: 2.0 * params.charge_sq * params.coulomb_k * params.mass / h2,
        kappa_per_energy: -2.0 * params.mass / h2,
    }
}

/// The two `αδ` for which `(αδ + 2)² + 4ω` is a perfect square for all
/// integer `L`: the roots of `(x + 2)² − 1`, returned as `(−1, −3)`.
pub fn perfect_square_alphadelta() -> (f64, f64) {
    let (lo, hi) = Poly::from_real(&[3.0, 4.0, 1.0])
        .quadratic_roots()
        .expect("monic quadratic");
    (hi.re, lo.re)
}

/// `(αδ + 2)² + 4ω`, the radicand under `√κ` in the `K` roots.
pub fn k_radicand(alphadelta: f64, omega: f64) -> f64 {
    (alphadelta + 2.0).powi(2) + 4.0 * omega
}

pub fn build_radial_family(
    constants: &DerivedConstants,
    alphadelta: f64,
) -> Result<EnergyParametrizedProblem> {
    if alphadelta == 0.0 || !alphadelta.is_finite() {
        return Err(Error::InvalidInput("αδ must be nonzero and finite"));
    }
    Ok(EnergyParametrizedProblem {
        sigma: Poly::from_real(&[0.0, -alphadelta]),
        tau_tilde: Poly::from_real(&[2.0]),
        sigma_tilde_base: Poly::from_real(&[-constants.omega, constants.zeta]),
        sigma_tilde_kappa_coeff: Poly::from_real(&[0.0, 0.0, -1.0]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Configuration,
    PhaseSpace,
}

fn branch_of(alphadelta: f64) -> Result<Branch> {
    if (alphadelta + 1.0).abs() <= BRANCH_TOL {
        Ok(Branch::Configuration)
    } else if (alphadelta + 3.0).abs() <= BRANCH_TOL {
        Ok(Branch::PhaseSpace)
    } else {
        Err(Error::UnsupportedBranch { alphadelta })
    }
}

/// Closed-form energies: `−e⁴k²m/(2ħ²(L+3n+2)²)` for `αδ = −3` and the
/// ordinary `−e⁴k²m/(2ħ²(L+n+1)²)` for `αδ = −1`.
pub fn closed_form_energy(params: &PhysicalParams, n: usize, alphadelta: f64) -> Result<f64> {
    params.validate()?;
    let (l, n) = (params.l as f64, n as f64);
    let denom = match branch_of(alphadelta)? {
        Branch::Configuration => l + n + 1.0,
        Branch::PhaseSpace => l + 3.0 * n + 2.0,
    };
    let e2k = params.charge_sq * params.coulomb_k;
    Ok(-e2k * e2k * params.mass / (2.0 * params.hbar * params.hbar * denom * denom))
}

/// Energy from the generic pipeline: bisection on `κ` then `E = −ħ²κ/(2m)`.
pub fn solve_energy(params: &PhysicalParams, n: usize, alphadelta: f64) -> Result<f64> {
    params.validate()?;
    let constants = derived_constants(params);
    let family = build_radial_family(&constants, alphadelta)?;
    let kappa = nu::solve_kappa(&family, n)?;
    Ok(constants.energy_of_kappa(kappa))
}

/// Operator definitions used for a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtaConfig {
    pub point: OpPoint,
    pub alphadelta: f64,
}

impl HtaConfig {
    pub fn new(point: OpPoint) -> Result<Self> {
        if !is_on_manifold(&point) {
            return Err(Error::InvalidInput(
                "operator point must satisfy βγ − αδ = 1",
            ));
        }
        Ok(HtaConfig {
            point,
            alphadelta: point.alphadelta(),
        })
    }

    /// `(α, β, γ, δ) = (−3, 1, −2, 1)`.
    pub fn phase_space() -> Self {
        HtaConfig {
            point: OpPoint::new(-3.0, 1.0, -2.0, 1.0),
            alphadelta: -3.0,
        }
    }

    /// `(1, 0, 0, −1)`.
    pub fn configuration() -> Self {
        HtaConfig {
            point: OpPoint::CONFIGURATION,
            alphadelta: -1.0,
        }
    }

    /// Default point for a supported `αδ`.
    pub fn for_alphadelta(alphadelta: f64) -> Result<Self> {
        Ok(match branch_of(alphadelta)? {
            Branch::Configuration => Self::configuration(),
            Branch::PhaseSpace => Self::phase_space(),
        })
    }
}

/// Which variable the body is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyVariable {
    /// `A = αr + iħβp̄`.
    Collective,
    /// `A = αr` after recovery to configuration space.
    Radial,
}

/// `ψ = e^{i p r·prefactor_rate/ħ}·body(A)`, with the prefactor kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionForm {
    /// `γ/δ`.
    pub prefactor_rate: Complex,
    /// `φ(A)·y_n(A)` with `B_n = 1`.
    pub body: ExpPowerTerm,
    pub config: HtaConfig,
    pub n: usize,
    pub kappa: f64,
    pub variable: BodyVariable,
}

pub fn assemble_wavefunction(
    params: &PhysicalParams,
    config: &HtaConfig,
    n: usize,
) -> Result<WavefunctionForm> {
    if config.point.delta == 0.0 {
        return Err(Error::DivisionByZero);
    }
    branch_of(config.alphadelta)?;
    params.validate()?;
    let constants = derived_constants(params);
    let family = build_radial_family(&constants, config.alphadelta)?;
    let kappa = nu::solve_kappa(&family, n)?;
    let solution = nu::solve(&family.at(kappa)?, n)?;
    let rate = config.point.gamma / config.point.delta;
    Ok(WavefunctionForm {
        // γ = 0 with δ < 0 would otherwise give −0
        prefactor_rate: Complex::new(if rate == 0.0 { 0.0 } else { rate }, 0.0),
        body: solution.psi(),
        config: *config,
        n,
        kappa,
        variable: BodyVariable::Collective,
    })
}

/// `A = αr + iħβ·p̄`.
pub fn collective_variable(point: &OpPoint, r: f64, pbar: Complex, hbar: f64) -> Complex {
    Complex::new(point.alpha * r, 0.0) + Complex::new(0.0, hbar * point.beta) * pbar
}

/// Body evaluated at `A`; the `p_r`-space prefactor is not folded in.
pub fn eval_wavefunction(
    wf: &WavefunctionForm,
    r: f64,
    pbar: Complex,
    hbar: f64,
) -> Result<Complex> {
    let a = match wf.variable {
        BodyVariable::Collective => collective_variable(&wf.config.point, r, pbar, hbar),
        BodyVariable::Radial => Complex::new(wf.config.point.alpha * r, 0.0),
    };
    wf.body.eval(a)
}

/// Max over samples of `|Ω″ − 2Ω′/(αδA) + σ̃(A)Ω/(αδA)²| / (1 + |Ω|)`,
/// with exact derivatives of `Ω`.
pub fn radial_ode_residual(
    constants: &DerivedConstants,
    alphadelta: f64,
    kappa: f64,
    omega_fn: &ExpPowerTerm,
    samples: &[Complex],
) -> Result<f64> {
    let d1 = omega_fn.derive();
    let d2 = d1.derive();
    let ad = Complex::new(alphadelta, 0.0);
    let mut worst = 0.0f64;
    for &a in samples {
        let (w, w1, w2) = (omega_fn.eval(a)?, d1.eval(a)?, d2.eval(a)?);
        let st = Complex::new(-constants.omega, 0.0) + a * constants.zeta - a * a * kappa;
        let lhs = w2 - w1 * 2.0 / (ad * a) + st / (ad * ad * a * a) * w;
        worst = worst.max(lhs.norm() / (1.0 + w.norm()));
    }
    Ok(worst)
}

/// Residual of the radial equation for the quantized state.
pub fn ode_residual(
    params: &PhysicalParams,
    config: &HtaConfig,
    n: usize,
    samples: &[Complex],
) -> Result<f64> {
    let wf = assemble_wavefunction(params, config, n)?;
    radial_ode_residual(
        &derived_constants(params),
        config.alphadelta,
        wf.kappa,
        &wf.body,
        samples,
    )
}

/// Residual when the whole pipeline is run at a given, possibly detuned, `κ`:
/// `Ω = φ·y_n` is built at `κ` and tested against the equation at `κ`.
pub fn ode_residual_at_kappa(
    params: &PhysicalParams,
    alphadelta: f64,
    n: usize,
    kappa: f64,
    samples: &[Complex],
) -> Result<f64> {
    params.validate()?;
    let constants = derived_constants(params);
    let family = build_radial_family(&constants, alphadelta)?;
    let solution = nu::solve(&family.at(kappa)?, n)?;
    radial_ode_residual(&constants, alphadelta, kappa, &solution.psi(), samples)
}

/// Deterministic points in `0.5 ≤ |A| ≤ 5`, `Re A > 0`.
pub fn sample_annulus(count: usize) -> Vec<Complex> {
    // additive recurrence with the golden ratio for radius, uniform angle
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let half_pi = core::f64::consts::FRAC_PI_2;
    (0..count)
        .map(|i| {
            let u = (0.5 + i as f64 * GOLDEN).fract();
            let r = 0.5 + 4.5 * u;
            let theta = -half_pi * 0.95 + half_pi * 1.9 * (i as f64 + 0.5) / count as f64;
            Complex::from_polar(r, theta)
        })
        .collect()
}

/// Reads the body as a function of `αr` alone. Only possible when `β = 0`
/// (no `p̄` dependence) and `γ = 0` (no prefactor).
pub fn recover_configuration_space(wf: &WavefunctionForm) -> Result<WavefunctionForm> {
    let p = &wf.config.point;
    if p.beta != 0.0 || p.gamma != 0.0 {
        return Err(Error::UnsupportedRecovery);
    }
    Ok(WavefunctionForm {
        prefactor_rate: Complex::new(0.0, 0.0),
        variable: BodyVariable::Radial,
        ..wf.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn derived_constants_examples() {
        let c = derived_constants(&PhysicalParams::atomic(0));
        assert_eq!((c.omega, c.zeta), (0.0, 2.0));
        assert_eq!(derived_constants(&PhysicalParams::atomic(1)).omega, 2.0);
        assert_eq!(c.kappa_of_energy(-0.5), 1.0);
        assert_eq!(c.energy_of_kappa(1.0), -0.5);
    }

    #[test]
    fn perfect_square_roots() {
        let (a, b) = perfect_square_alphadelta();
        assert_eq!((a, b), (-1.0, -3.0));
        for l in 0..10u32 {
            let omega = (l * (l + 1)) as f64;
            let target = ((2 * l + 1) * (2 * l + 1)) as f64;
            assert_eq!(k_radicand(a, omega), target);
            assert_eq!(k_radicand(b, omega), target);
            assert_eq!(k_radicand(-3.0, omega), 4.0 * omega + 1.0);
        }
    }

    #[test]
    fn family_examples() {
        let c = derived_constants(&PhysicalParams::atomic(0));
        let fam = build_radial_family(&c, -3.0).unwrap();
        assert_eq!(fam.sigma, Poly::from_real(&[0.0, 3.0]));
        assert_eq!(fam.tau_tilde, Poly::from_real(&[2.0]));
        assert_eq!(
            fam.at(0.25).unwrap().sigma_tilde,
            Poly::from_real(&[0.0, 2.0, -0.25])
        );
        assert_eq!(
            build_radial_family(&c, -1.0).unwrap().sigma,
            Poly::from_real(&[0.0, 1.0])
        );
        let c1 = derived_constants(&PhysicalParams::atomic(1));
        assert_eq!(
            build_radial_family(&c1, -3.0)
                .unwrap()
                .sigma_tilde_base
                .coeff(0),
            c64(-2.0, 0.0)
        );
        assert!(build_radial_family(&c, 0.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let p = PhysicalParams::atomic(0);
        assert_eq!(closed_form_energy(&p, 0, -3.0).unwrap(), -0.125);
        assert_eq!(closed_form_energy(&p, 1, -3.0).unwrap(), -0.02);
        assert_eq!(closed_form_energy(&p, 0, -1.0).unwrap(), -0.5);
        assert_eq!(
            closed_form_energy(&p, 0, -2.0),
            Err(Error::UnsupportedBranch { alphadelta: -2.0 })
        );
    }

    #[test]
    fn solve_energy_examples() {
        let p = PhysicalParams::atomic(0);
        assert!(rel(solve_energy(&p, 0, -3.0).unwrap(), -0.125) < 1e-10);
        assert!(rel(solve_energy(&p.with_l(1), 0, -3.0).unwrap(), -1.0 / 18.0) < 1e-10);
        assert!(rel(solve_energy(&p, 1, -1.0).unwrap(), -0.125) < 1e-10);
    }

    #[test]
    fn solve_energy_custom_units() {
        let p = PhysicalParams {
            mass: 2.0,
            hbar: 0.5,
            coulomb_k: 3.0,
            charge_sq: 0.7,
            l: 2,
        };
        for ad in [-1.0, -3.0] {
            for n in 0..3 {
                let e = solve_energy(&p, n, ad).unwrap();
                assert!(rel(e, closed_form_energy(&p, n, ad).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn config_constraint() {
        let cfg = HtaConfig::new(OpPoint::new(-3.0, 1.0, -2.0, 1.0)).unwrap();
        assert_eq!(cfg.alphadelta, -3.0);
        assert_eq!(cfg.point.beta * cfg.point.gamma, -2.0);
        assert!(HtaConfig::new(OpPoint::new(-3.0, 1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn wavefunction_ground_state() {
        let p = PhysicalParams::atomic(0);
        let wf = assemble_wavefunction(&p, &HtaConfig::phase_space(), 0).unwrap();
        assert_eq!(wf.prefactor_rate, c64(-2.0, 0.0));
        assert!((wf.body.rate - c64(-1.0 / 6.0, 0.0)).norm() < 1e-12);
        assert!((wf.body.power - c64(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert_eq!(wf.body.poly.degree(), Some(0));
        assert!((wf.kappa - 0.25).abs() < 1e-12);
    }

    #[test]
    fn wavefunction_first_excited() {
        let p = PhysicalParams::atomic(0);
        let wf = assemble_wavefunction(&p, &HtaConfig::phase_space(), 1).unwrap();
        assert!((wf.kappa - 0.04).abs() < 1e-12);
        // φ rate −√κ/3
        assert!((wf.body.rate.re + 0.2 / 3.0).abs() < 1e-12);
        assert!((wf.body.power.re - 1.0 / 3.0).abs() < 1e-12);
        // y₁ ∝ τ = 4 − 0.4A
        let y = &wf.body.poly;
        assert_eq!(y.degree(), Some(1));
        assert!((y.coeff(1) / y.coeff(0) - c64(-0.1, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn wavefunction_configuration_branch() {
        let p = PhysicalParams::atomic(0);
        let wf = assemble_wavefunction(&p, &HtaConfig::configuration(), 0).unwrap();
        assert_eq!(wf.prefactor_rate, c64(0.0, 0.0));
        // R(r) = e^{−r}: the reduced u = r·R is r·e^{−r}
        assert!((wf.body.rate - c64(-1.0, 0.0)).norm() < 1e-12);
        assert!(wf.body.power.norm() < 1e-12);
        let v = eval_wavefunction(&wf, 1.0, c64(7.0, 3.0), 1.0).unwrap();
        assert!((v - c64((-1.0f64).exp(), 0.0)).norm() < 1e-12);
        assert!((v.re - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn eval_examples() {
        let p = PhysicalParams::atomic(0);
        let wf = assemble_wavefunction(&p, &HtaConfig::phase_space(), 0).unwrap();
        let expect = (-1.0f64 / 6.0).exp();
        let v = eval_wavefunction(&wf, -1.0 / 3.0, c64(0.0, 0.0), 1.0).unwrap();
        assert!((v - c64(expect, 0.0)).norm() < 1e-12);
        let v = eval_wavefunction(&wf, 0.0, c64(0.0, -1.0), 1.0).unwrap();
        assert!((v - c64(expect, 0.0)).norm() < 1e-12);
        assert_eq!(
            eval_wavefunction(&wf, 0.0, c64(0.0, 0.0), 1.0),
            Err(Error::BranchPoint)
        );
    }

    #[test]
    fn residual_examples() {
        let p = PhysicalParams::atomic(0);
        let samples = sample_annulus(100);
        let cfg = HtaConfig::phase_space();
        assert!(ode_residual(&p, &cfg, 0, &samples).unwrap() < 1e-10);
        assert!(ode_residual_at_kappa(&p, -3.0, 0, 0.275, &samples).unwrap() > 1e-3);
        assert!(ode_residual(&p.with_l(1), &cfg, 2, &samples).unwrap() < 1e-8);
    }

    #[test]
    fn samples_in_annulus() {
        for z in sample_annulus(100) {
            assert!(z.re > 0.0 && z.norm() >= 0.5 - 1e-12 && z.norm() <= 5.0 + 1e-12);
        }
    }

    #[test]
    fn recovery() {
        let p = PhysicalParams::atomic(0);
        let wf = assemble_wavefunction(&p, &HtaConfig::configuration(), 0).unwrap();
        let rec = recover_configuration_space(&wf).unwrap();
        assert_eq!(rec.prefactor_rate, c64(0.0, 0.0));
        assert_eq!(rec.variable, BodyVariable::Radial);
        let v = eval_wavefunction(&rec, 2.0, c64(0.0, 0.0), 1.0).unwrap();
        assert!((v.re - (-2.0f64).exp()).abs() < 1e-12);

        let wf = assemble_wavefunction(&p, &HtaConfig::phase_space(), 0).unwrap();
        assert_eq!(
            recover_configuration_space(&wf),
            Err(Error::UnsupportedRecovery)
        );

        // γ ≠ 0 with αδ = −1 (β = 0): still refused
        let cfg = HtaConfig::new(OpPoint::new(1.0, 0.0, 0.5, -1.0)).unwrap();
        let wf = assemble_wavefunction(&p, &cfg, 0).unwrap();
        assert_eq!(
            recover_configuration_space(&wf),
            Err(Error::UnsupportedRecovery)
        );
    }

    #[test]
    fn unsupported_configs() {
        let p = PhysicalParams::atomic(0);
        let momentum = HtaConfig::new(OpPoint::MOMENTUM).unwrap();
        assert_eq!(
            assemble_wavefunction(&p, &momentum, 0),
            Err(Error::DivisionByZero)
        );
        let odd = HtaConfig::new(OpPoint::on_manifold(2.0, 1.0, -1.0).unwrap()).unwrap();
        assert!(matches!(
            assemble_wavefunction(&p, &odd, 0),
            Err(Error::UnsupportedBranch { .. })
        ));
    }
}
