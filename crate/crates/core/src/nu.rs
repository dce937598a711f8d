//! Nikiforov-Uvarov pipeline for `Ψ″ + (τ̃/σ)Ψ′ + (σ̃/σ²)Ψ = 0`.
//!
//! Given `(σ, σ̃, τ̃)` the solver finds the constants `K` that make the radicand
//! `((σ′−τ̃)/2)² − σ̃ + Kσ` a perfect square, selects a `(K, ±)` branch with
//! `Re τ′ < 0`, and builds `φ`, the weight `ρ` and the Rodrigues polynomial
//! `y_n = (B_n/ρ)·dⁿ/dsⁿ[σⁿρ]`. Energy quantization is a scalar root-find in
//! the energy parameter `κ` on `λ(κ) = λ_n(κ)`.
//!
//! `φ`, `ρ` and `y_n` are only built for `σ(s) = c·s`; other shapes return
//! [`Error::UnsupportedSigma`].

use alloc::format;
use alloc::vec::Vec;

// inherent f64 methods win whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use crate::ept::ExpPowerTerm;
use crate::poly::{Poly, ZERO_TOL};
use crate::{Complex, Error, Result};

/// Relative tolerance on the radicand discriminant in [`pi_from_k`].
pub const PERFECT_SQUARE_TOL: f64 = 1e-9;
/// Residual rate/power allowed in the Rodrigues quotient.
pub const CANCELLATION_TOL: f64 = 1e-9;
/// Lower end of the κ scan.
pub const KAPPA_MIN: f64 = 1e-12;
/// Relative bracket width at which bisection stops.
pub const KAPPA_RTOL: f64 = 1e-12;
/// Log-spaced samples used to locate the sign change before bisecting.
pub const KAPPA_SCAN_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct NuProblem {
    pub sigma: Poly,
    pub sigma_tilde: Poly,
    pub tau_tilde: Poly,
}

impl NuProblem {
    pub fn new(sigma: Poly, sigma_tilde: Poly, tau_tilde: Poly) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::InvalidInput("σ must not be identically zero"));
        }
        if sigma.degree() > Some(2) {
            return Err(Error::InvalidInput("σ must have degree ≤ 2"));
        }
        if sigma_tilde.degree() > Some(2) {
            return Err(Error::InvalidInput("σ̃ must have degree ≤ 2"));
        }
        if tau_tilde.degree() > Some(1) {
            return Err(Error::InvalidInput("τ̃ must have degree ≤ 1"));
        }
        Ok(NuProblem {
            sigma,
            sigma_tilde,
            tau_tilde,
        })
    }

    /// `(σ′ − τ̃)/2`.
    fn half_gap(&self) -> Poly {
        (&self.sigma.derive() - &self.tau_tilde).scaled(Complex::new(0.5, 0.0))
    }

    /// Radicand `h² − σ̃ + Kσ`, split as `(h² − σ̃, σ)`.
    fn radicand_parts(&self) -> (Poly, Poly) {
        let h = self.half_gap();
        (&(&h * &h) - &self.sigma_tilde, self.sigma.clone())
    }

    fn radicand(&self, k: Complex) -> Poly {
        let (a, b) = self.radicand_parts();
        &a + &b.scaled(k)
    }

    /// The `c` in `σ(s) = c·s`.
    fn linear_sigma(&self) -> Result<Complex> {
        let c = self.sigma.coeff(1);
        if self.sigma.degree() != Some(1) || self.sigma.coeff(0).norm() > ZERO_TOL * c.norm() {
            return Err(Error::UnsupportedSigma);
        }
        Ok(c)
    }
}

/// A resolved `(K, ±)` choice.
#[derive(Debug, Clone, PartialEq)]
pub struct NuBranch {
    pub k: Complex,
    pub pi: Poly,
    pub tau: Poly,
    /// Position of `K` in the ordered output of [`k_candidates`].
    pub k_index: usize,
    /// Sign in front of the radical, `+1` or `−1`.
    pub pi_sign: i8,
}

impl NuBranch {
    pub fn tau_slope(&self) -> Complex {
        self.tau.coeff(1)
    }
}

/// How [`select_branch_with`] picks a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchChoice {
    /// Preference order plus weight screen.
    #[default]
    Auto,
    /// Force a `(k_index, sign)` combination, still requiring `Re τ′ < 0`.
    Fixed { k_index: usize, pi_sign: i8 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuSolution {
    pub lambda: Complex,
    pub lambda_n: Complex,
    pub phi: ExpPowerTerm,
    pub rho: ExpPowerTerm,
    pub y: Poly,
    pub n: usize,
    pub b_n: Complex,
    pub branch: NuBranch,
}

impl NuSolution {
    /// `Ψ = φ·y`.
    pub fn psi(&self) -> ExpPowerTerm {
        self.phi.mul_poly(&self.y)
    }
}

/// Family of problems whose `σ̃` is affine in an energy parameter `κ`:
/// `σ̃(κ) = base + κ·coeff`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyParametrizedProblem {
    pub sigma: Poly,
    pub tau_tilde: Poly,
    pub sigma_tilde_base: Poly,
    pub sigma_tilde_kappa_coeff: Poly,
}

impl EnergyParametrizedProblem {
    pub fn at(&self, kappa: f64) -> Result<NuProblem> {
        let st = &self.sigma_tilde_base
            + &self
                .sigma_tilde_kappa_coeff
                .scaled(Complex::new(kappa, 0.0));
        NuProblem::new(self.sigma.clone(), st, self.tau_tilde.clone())
    }

    /// Upper end of the κ scan, `max(10·ζ², 1)` with `ζ` the modulus of the
    /// linear coefficient of the κ-independent part of `σ̃`.
    pub fn kappa_max(&self) -> f64 {
        let zeta = self.sigma_tilde_base.coeff(1).norm();
        (10.0 * zeta * zeta).max(1.0)
    }
}

/// The two `K` that make the radicand's discriminant vanish, ordered by real
/// part (the minus-sign root first).
pub fn k_candidates(problem: &NuProblem) -> Result<(Complex, Complex)> {
    let (a, b) = problem.radicand_parts();
    let (a0, a1, a2) = (a.coeff(0), a.coeff(1), a.coeff(2));
    let (b0, b1, b2) = (b.coeff(0), b.coeff(1), b.coeff(2));
    // (a1 + K b1)² − 4 (a2 + K b2)(a0 + K b0) = 0
    let k_quadratic = Poly::new(alloc::vec![
        a1 * a1 - a2 * a0 * 4.0,
        a1 * b1 * 2.0 - (a2 * b0 + b2 * a0) * 4.0,
        b1 * b1 - b2 * b0 * 4.0,
    ]);
    match k_quadratic.degree() {
        Some(1) | Some(2) => k_quadratic.quadratic_roots(),
        _ => Err(Error::DegenerateDiscriminant),
    }
}

/// `π(s) = (σ′−τ̃)/2 ± √(radicand)`, with the square root taken as `u·s + v`,
/// `Re u ≥ 0`.
pub fn pi_from_k(problem: &NuProblem, k: Complex, sign: i8) -> Result<Poly> {
    let h = problem.half_gap();
    let r = problem.radicand(k);
    let (r0, r1, r2) = (r.coeff(0), r.coeff(1), r.coeff(2));
    let scale = r.scale();
    if scale == 0.0 {
        return Ok(h);
    }
    let disc = (r1 * r1 - r2 * r0 * 4.0).norm();
    let tolerance = PERFECT_SQUARE_TOL * scale * scale;
    if disc > tolerance {
        return Err(Error::NotPerfectSquare {
            discriminant: disc,
            tolerance,
        });
    }
    let root = if r2.norm() > ZERO_TOL * scale {
        let u = r2.sqrt();
        Poly::new(alloc::vec![r1 / (u * 2.0), u])
    } else {
        Poly::constant(r0.sqrt())
    };
    let s = if sign < 0 { -1.0 } else { 1.0 };
    Ok(&h + &root.scaled(Complex::new(s, 0.0)))
}

/// `τ = τ̃ + 2π`.
pub fn tau_of(problem: &NuProblem, pi: &Poly) -> Poly {
    &problem.tau_tilde + &pi.scaled(Complex::new(2.0, 0.0))
}

/// `λ = K + π′`.
pub fn lambda_of(branch: &NuBranch) -> Complex {
    branch.k + branch.pi.coeff(1)
}

/// `λ_n = −nτ′ − n(n−1)/2·σ″`.
pub fn lambda_n_of(problem: &NuProblem, branch: &NuBranch, n: usize) -> Complex {
    let nf = n as f64;
    let sigma_pp = problem.sigma.coeff(2) * 2.0;
    -branch.tau_slope() * nf - sigma_pp * (nf * (nf - 1.0) / 2.0)
}

/// `φ` with `φ′/φ = π/σ`; for `σ = c·s`, `π = p₁s + p₀` this is
/// `e^{(p₁/c)s}·s^{p₀/c}`.
pub fn phi_of(problem: &NuProblem, branch: &NuBranch) -> Result<ExpPowerTerm> {
    phi_for_pi(problem, &branch.pi)
}

pub fn phi_for_pi(problem: &NuProblem, pi: &Poly) -> Result<ExpPowerTerm> {
    let c = problem.linear_sigma()?;
    Ok(ExpPowerTerm::monomial(pi.coeff(1) / c, pi.coeff(0) / c))
}

/// Weight `ρ` solving `(σρ)′ = τρ`; for `τ = t₁s + t₀` this is
/// `e^{(t₁/c)s}·s^{(t₀−c)/c}`.
pub fn rho_of(problem: &NuProblem, branch: &NuBranch) -> Result<ExpPowerTerm> {
    rho_for_tau(problem, &branch.tau)
}

pub fn rho_for_tau(problem: &NuProblem, tau: &Poly) -> Result<ExpPowerTerm> {
    let c = problem.linear_sigma()?;
    Ok(ExpPowerTerm::monomial(
        tau.coeff(1) / c,
        (tau.coeff(0) - c) / c,
    ))
}

/// Decaying weight with an integrable power at the origin.
fn weight_admissible(rho: &ExpPowerTerm) -> bool {
    rho.rate.re < 0.0 && rho.power.re > -1.0
}

fn build_branch(
    problem: &NuProblem,
    ks: (Complex, Complex),
    k_index: usize,
    pi_sign: i8,
) -> Result<NuBranch> {
    let k = if k_index == 0 { ks.0 } else { ks.1 };
    let pi = pi_from_k(problem, k, pi_sign)?;
    let tau = tau_of(problem, &pi);
    Ok(NuBranch {
        k,
        pi,
        tau,
        k_index,
        pi_sign,
    })
}

/// Combos in preference order: `K` index 0 before 1, sign −1 before +1.
const COMBOS: [(usize, i8); 4] = [(0, -1), (0, 1), (1, -1), (1, 1)];

/// Selects the branch with `Re τ′ < 0`, preferring the minus-sign `K` and the
/// minus-sign radical, screened for a decaying, integrable weight.
pub fn select_branch(problem: &NuProblem) -> Result<NuBranch> {
    select_branch_with(problem, BranchChoice::Auto)
}

pub fn select_branch_with(problem: &NuProblem, choice: BranchChoice) -> Result<NuBranch> {
    let ks = k_candidates(problem)?;
    if let BranchChoice::Fixed { k_index, pi_sign } = choice {
        if k_index > 1 || !(pi_sign == 1 || pi_sign == -1) {
            return Err(Error::InvalidInput(
                "branch override needs k_index ∈ {0,1}, sign ±1",
            ));
        }
        let branch = build_branch(problem, ks, k_index, pi_sign)?;
        if branch.tau_slope().re < 0.0 {
            return Ok(branch);
        }
        return Err(Error::NoBranch {
            detail: format!(
                "forced branch ({k_index}, {pi_sign}) has Re τ′ = {}",
                branch.tau_slope().re
            ),
        });
    }

    let mut decreasing = Vec::new();
    let mut slopes = Vec::new();
    for (k_index, pi_sign) in COMBOS {
        let branch = build_branch(problem, ks, k_index, pi_sign)?;
        slopes.push(branch.tau_slope().re);
        if branch.tau_slope().re < 0.0 {
            decreasing.push(branch);
        }
    }
    if decreasing.is_empty() {
        return Err(Error::NoBranch {
            detail: format!("Re τ′ over (K, ±) combos = {slopes:?}"),
        });
    }

    let mut admissible = Vec::new();
    for branch in decreasing {
        let rho = rho_of(problem, &branch)?;
        if weight_admissible(&rho) {
            admissible.push(branch);
        }
    }
    // `admissible` keeps preference order, so a lone survivor or the
    // preferred combo both sit at the front
    match admissible.len() {
        0 => Err(Error::NoBranch {
            detail: "no combo with Re τ′ < 0 has an admissible weight".into(),
        }),
        1 => Ok(admissible.remove(0)),
        _ if is_preferred(&admissible[0], problem, ks)? => Ok(admissible.remove(0)),
        _ => Err(Error::AmbiguousBranch {
            candidates: admissible.iter().map(|b| (b.k_index, b.pi_sign)).collect(),
        }),
    }
}

/// Whether `branch` is the first combo (in preference order) with `Re τ′ < 0`.
fn is_preferred(branch: &NuBranch, problem: &NuProblem, ks: (Complex, Complex)) -> Result<bool> {
    for (k_index, pi_sign) in COMBOS {
        let b = build_branch(problem, ks, k_index, pi_sign)?;
        if b.tau_slope().re < 0.0 {
            return Ok(b.k_index == branch.k_index && b.pi_sign == branch.pi_sign);
        }
    }
    Ok(false)
}

/// `y_n = (B_n/ρ)·dⁿ/dsⁿ[σⁿρ]`, computed exactly in the
/// [`ExpPowerTerm`] family.
pub fn rodrigues_y(
    problem: &NuProblem,
    rho: &ExpPowerTerm,
    n: usize,
    b_n: Complex,
) -> Result<Poly> {
    let c = problem.linear_sigma()?;
    let cn = c.powi(n as i32);
    let mut term = ExpPowerTerm::new(rho.poly.scaled(cn), rho.rate, rho.power + n as f64);
    for _ in 0..n {
        term = term.derive();
    }
    if term.is_zero() {
        return Err(Error::CancellationFailure {
            rate: 0.0,
            power: 0.0,
        });
    }
    let rate = (term.rate - rho.rate).norm();
    // canonical form may have pulled factors of s into the power
    let extra = term.power - rho.power;
    let shift = extra.re.round();
    let power_gap = (extra - Complex::new(shift, 0.0)).norm();
    if rate > CANCELLATION_TOL || power_gap > CANCELLATION_TOL || shift < 0.0 {
        return Err(Error::CancellationFailure {
            rate,
            power: (extra).norm(),
        });
    }
    // ρ's own polynomial part is 1 for every weight built by `rho_of`
    if rho.poly.degree() != Some(0) {
        return Err(Error::InvalidInput(
            "weight must be a pure exponential-power term",
        ));
    }
    let y = term
        .poly
        .shifted(shift as usize)
        .scaled(b_n / rho.poly.coeff(0));
    if y.degree() != Some(n) {
        return Err(Error::CancellationFailure {
            rate,
            power: extra.norm(),
        });
    }
    Ok(y)
}

/// Full solution for degree `n` on the automatically selected branch.
pub fn solve(problem: &NuProblem, n: usize) -> Result<NuSolution> {
    solve_with(problem, n, BranchChoice::Auto, Complex::new(1.0, 0.0))
}

pub fn solve_with(
    problem: &NuProblem,
    n: usize,
    choice: BranchChoice,
    b_n: Complex,
) -> Result<NuSolution> {
    let branch = select_branch_with(problem, choice)?;
    let phi = phi_of(problem, &branch)?;
    let rho = rho_of(problem, &branch)?;
    let y = rodrigues_y(problem, &rho, n, b_n)?;
    Ok(NuSolution {
        lambda: lambda_of(&branch),
        lambda_n: lambda_n_of(problem, &branch, n),
        phi,
        rho,
        y,
        n,
        b_n,
        branch,
    })
}

/// `Re(λ − λ_n)` on the branch selected at this `κ`.
pub fn eigen_residual(family: &EnergyParametrizedProblem, kappa: f64, n: usize) -> Result<f64> {
    eigen_residual_with(family, kappa, n, BranchChoice::Auto)
}

pub fn eigen_residual_with(
    family: &EnergyParametrizedProblem,
    kappa: f64,
    n: usize,
    choice: BranchChoice,
) -> Result<f64> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidInput("κ must be positive and finite"));
    }
    let problem = family.at(kappa)?;
    let branch = select_branch_with(&problem, choice)?;
    Ok((lambda_of(&branch) - lambda_n_of(&problem, &branch, n)).re)
}

/// Finds `κ` with `λ(κ) = λ_n(κ)` by bracketing on a log-spaced scan of
/// `[1e−12, κ_max]` followed by bisection.
pub fn solve_kappa(family: &EnergyParametrizedProblem, n: usize) -> Result<f64> {
    solve_kappa_with(family, n, BranchChoice::Auto)
}

pub fn solve_kappa_with(
    family: &EnergyParametrizedProblem,
    n: usize,
    choice: BranchChoice,
) -> Result<f64> {
    let lo = KAPPA_MIN;
    let hi = family.kappa_max();
    let f = |k: f64| eigen_residual_with(family, k, n, choice);

    let ratio = (hi / lo).ln() / (KAPPA_SCAN_POINTS - 1) as f64;
    let mut brackets = Vec::new();
    let mut prev = (lo, f(lo)?);
    if prev.1 == 0.0 {
        return Ok(lo);
    }
    for i in 1..KAPPA_SCAN_POINTS {
        let k = if i == KAPPA_SCAN_POINTS - 1 {
            hi
        } else {
            lo * (ratio * i as f64).exp()
        };
        let fk = f(k)?;
        if fk == 0.0 {
            return Ok(k);
        }
        if fk.signum() != prev.1.signum() {
            brackets.push((prev, (k, fk)));
        }
        prev = (k, fk);
    }
    let ((mut a, mut fa), (mut b, _)) = match brackets.len() {
        0 => return Err(Error::NoSignChange { lo, hi }),
        1 => brackets[0],
        count => return Err(Error::MultipleSignChanges { count }),
    };
    while b - a > KAPPA_RTOL * b {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
