//! Independent numerical checks.
//!
//! Nothing here goes through the NU solver or the phase-space pipeline:
//! the spectrum comes from a finite-difference discretization of the
//! ordinary radial equation for `u = rR`, Laguerre values from the
//! three-term recurrence, and the commutator from finite differences on a
//! Gaussian.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Sub};

// inherent f64 methods win whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use crate::hta::PhysicalParams;
use crate::opspace::OpPoint;
use crate::{Complex, Error, Result};

/// Relative agreement required between the two grid refinements and
/// between the full and shrunken boxes.
pub const DEFAULT_FD_TOL: f64 = 1e-3;

/// Fraction of the box kept for the truncation check.
const BOX_SHRINK: f64 = 0.8;

const MIN_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        let g = RadialGrid {
            r_min,
            r_max,
            n_points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min.is_finite() && self.r_max.is_finite()) {
            return Err(Error::InvalidInput("grid needs 0 < r_min and finite ends"));
        }
        if self.r_max <= self.r_min {
            return Err(Error::InvalidInput("grid needs r_max > r_min"));
        }
        if self.n_points < MIN_POINTS {
            return Err(Error::InvalidInput("grid needs at least 100 points"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` linking `i` and `i+1`.
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// `LDLᵀ` pivots of `T − xI`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = d - x - coupling;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `count` lowest eigenvalues by bisection, ascending.
    fn lowest(&self, count: usize) -> Vec<f64> {
        let (g_lo, g_hi) = self.gershgorin();
        let max_off2 = self.off.iter().map(|e| e * e).fold(1.0, f64::max);
        let pivmin = f64::MIN_POSITIVE * max_off2;
        (0..count)
            .map(|k| {
                let (mut lo, mut hi) = (g_lo, g_hi);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid, pivmin) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

/// Discretization of `−(ħ²/2m)u″ + [ħ²L(L+1)/(2mr²) − ke²/r]u` on nodes
/// `r_min + i·h`, `i < nodes`, with `u = 0` one step past the last node.
///
/// The left end is closed with a ghost value at `r_min − h` taken from the
/// regular solution near the origin, `u ≈ r^{L+1}(1 − r/((L+1)a₀))`. A plain
/// wall at `r_min` would shift the ground state by `O(r_min)` and spoil the
/// second-order convergence.
fn radial_operator(
    params: &PhysicalParams,
    l: u32,
    r_min: f64,
    h: f64,
    nodes: usize,
) -> Tridiagonal {
    let kinetic = params.hbar * params.hbar / (2.0 * params.mass);
    let t = kinetic / (h * h);
    let ll = (l as f64) * (l as f64 + 1.0);
    let coulomb = params.coulomb_k * params.charge_sq;
    let mut diag: Vec<f64> = (0..nodes)
        .map(|i| {
            let r = r_min + i as f64 * h;
            2.0 * t + kinetic * ll / (r * r) - coulomb / r
        })
        .collect();
    let a0 = params.bohr_radius();
    let regular = |x: f64| x.powi(l as i32 + 1) * (1.0 - x / ((l as f64 + 1.0) * a0));
    let at_min = regular(r_min);
    if at_min != 0.0 {
        diag[0] -= t * regular(r_min - h) / at_min;
    }
    Tridiagonal {
        diag,
        off: alloc::vec![-t; nodes - 1],
    }
}

fn spectrum_at(
    params: &PhysicalParams,
    l: u32,
    r_min: f64,
    h: f64,
    nodes: usize,
    n_states: usize,
) -> Result<Vec<f64>> {
    if n_states > nodes {
        return Err(Error::InvalidInput("more states requested than grid nodes"));
    }
    Ok(radial_operator(params, l, r_min, h, nodes).lowest(n_states))
}

/// Relative gap per state; returns the worst `(state, deviation)`.
fn worst_gap(a: &[f64], b: &[f64]) -> (usize, f64) {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(f64::MIN_POSITIVE))
        .enumerate()
        .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc })
}

/// Lowest `n_states` radial eigenvalues with [`DEFAULT_FD_TOL`].
pub fn fd_spectrum(
    params: &PhysicalParams,
    l: u32,
    grid: &RadialGrid,
    n_states: usize,
) -> Result<Vec<f64>> {
    fd_spectrum_with_tol(params, l, grid, n_states, DEFAULT_FD_TOL)
}

/// Lowest `n_states` radial eigenvalues, ascending.
///
/// The operator is built on the given grid and on one with half the
/// spacing; the half-spacing values are returned. They must agree with the
/// coarse ones, and with a box shortened to 80% of its length, to within
/// `tol` relative, otherwise `GridTooCoarse` names the worst state.
pub fn fd_spectrum_with_tol(
    params: &PhysicalParams,
    l: u32,
    grid: &RadialGrid,
    n_states: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    params.validate()?;
    grid.validate()?;
    if n_states == 0 {
        return Ok(Vec::new());
    }
    let h = grid.spacing();
    // the node at r_max carries the Dirichlet value
    let coarse_nodes = grid.n_points - 1;
    let fine_nodes = 2 * coarse_nodes;
    let coarse = spectrum_at(params, l, grid.r_min, h, coarse_nodes, n_states)?;
    let fine = spectrum_at(params, l, grid.r_min, h / 2.0, fine_nodes, n_states)?;

    let (state, deviation) = worst_gap(&fine, &coarse);
    if deviation.is_nan() || deviation > tol {
        return Err(Error::GridTooCoarse { state, deviation });
    }

    let short_nodes = (BOX_SHRINK * fine_nodes as f64) as usize;
    let short = spectrum_at(params, l, grid.r_min, h / 2.0, short_nodes, n_states)?;
    let (state, deviation) = worst_gap(&fine, &short);
    if deviation.is_nan() || deviation > tol {
        return Err(Error::GridTooCoarse { state, deviation });
    }
    Ok(fine)
}

/// Arithmetic needed by the Laguerre recurrence.
pub trait LaguerreArg:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + From<f64>
{
}

impl<T> LaguerreArg for T where
    T: Copy
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Mul<f64, Output = T>
        + Div<f64, Output = T>
        + From<f64>
{
}

/// `L_n^{(a)}(x)` by `(k+1)L_{k+1} = (2k+1+a−x)L_k − (k+a)L_{k−1}`.
pub fn laguerre_generic<T: LaguerreArg>(n: usize, a: f64, x: T) -> T {
    let one = T::from(1.0);
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = T::from(1.0 + a) - x;
    for k in 1..n {
        let kf = k as f64;
        let lin = T::from(2.0 * kf + 1.0 + a) - x;
        let next = (lin * cur - prev * (kf + a)) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    laguerre_generic(n, a, x)
}

pub fn laguerre_complex(n: usize, a: f64, z: Complex) -> Complex {
    laguerre_generic(n, a, z)
}

/// Step for the central differences in [`commutator_check`].
pub const COMMUTATOR_STEP: f64 = 1e-4;

/// Smallest test-state value a sample may have.
pub const COMMUTATOR_MIN_PSI: f64 = 1e-6;

fn gaussian(r: f64, p: f64) -> Complex {
    Complex::new((-(r * r + p * p) / 2.0).exp(), 0.0)
}

/// Mean of `[r̂, p̂]ψ / (iħψ)` over the samples, with `r̂ = αr + iħβ∂_p`,
/// `p̂ = γp + iħδ∂_r` applied by central differences to `e^{−(r²+p²)/2}`.
pub fn commutator_check(point: &OpPoint, hbar: f64, samples: &[(f64, f64)]) -> Result<Complex> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("commutator check needs samples"));
    }
    let h = COMMUTATOR_STEP;
    let ih = Complex::new(0.0, hbar);
    let apply_r = |f: &dyn Fn(f64, f64) -> Complex, r: f64, p: f64| {
        f(r, p) * (point.alpha * r) + ih * point.beta * (f(r, p + h) - f(r, p - h)) / (2.0 * h)
    };
    let apply_p = |f: &dyn Fn(f64, f64) -> Complex, r: f64, p: f64| {
        f(r, p) * (point.gamma * p) + ih * point.delta * (f(r + h, p) - f(r - h, p)) / (2.0 * h)
    };
    let p_psi = |r: f64, p: f64| apply_p(&gaussian, r, p);
    let r_psi = |r: f64, p: f64| apply_r(&gaussian, r, p);
    let mut sum = Complex::new(0.0, 0.0);
    for &(r, p) in samples {
        let psi = gaussian(r, p);
        if psi.re < COMMUTATOR_MIN_PSI {
            return Err(Error::InvalidInput(
                "sample where the test state is below 1e-6",
            ));
        }
        let comm = apply_r(&p_psi, r, p) - apply_p(&r_psi, r, p);
        sum += comm / (ih * psi);
    }
    Ok(sum / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn atomic_grid() -> RadialGrid {
        RadialGrid::new(1e-3, 100.0, 4000).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(1e-3, 100.0, 99).is_err());
        assert!(RadialGrid::new(0.0, 100.0, 1000).is_err());
        assert!(RadialGrid::new(1.0, 0.5, 1000).is_err());
        assert_eq!(
            RadialGrid::new(0.0 + 1.0, 100.0, 100).unwrap().spacing(),
            1.0
        );
    }

    #[test]
    fn sturm_count_small_matrix() {
        // eigenvalues of tridiag(−1, 2, −1) of size 3: 2 − √2, 2, 2 + √2
        let t = Tridiagonal {
            diag: alloc::vec![2.0; 3],
            off: alloc::vec![-1.0; 2],
        };
        let ev = t.lowest(3);
        let s = core::f64::consts::SQRT_2;
        for (got, want) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(t.count_below(2.0 - s + 1e-9, f64::MIN_POSITIVE), 1);
    }

    #[test]
    fn hydrogen_s_states() {
        let ev = fd_spectrum(&PhysicalParams::atomic(0), 0, &atomic_grid(), 2).unwrap();
        assert!(rel(ev[0], -0.5) < 1e-4, "{ev:?}");
        assert!(rel(ev[1], -0.125) < 1e-4, "{ev:?}");
    }

    #[test]
    fn hydrogen_p_state() {
        let ev = fd_spectrum(&PhysicalParams::atomic(1), 1, &atomic_grid(), 1).unwrap();
        assert!(rel(ev[0], -0.125) < 1e-4, "{ev:?}");
    }

    #[test]
    fn small_box_detected() {
        let grid = RadialGrid::new(1e-3, 5.0, 4000).unwrap();
        match fd_spectrum(&PhysicalParams::atomic(0), 0, &grid, 2) {
            Err(Error::GridTooCoarse { state, .. }) => assert_eq!(state, 1),
            other => panic!("expected GridTooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn coarse_grid_detected() {
        let grid = RadialGrid::new(1e-3, 100.0, 100).unwrap();
        assert!(matches!(
            fd_spectrum(&PhysicalParams::atomic(0), 0, &grid, 1),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn richardson_ratio() {
        let p = PhysicalParams::atomic(0);
        let e1 = fd_spectrum(&p, 0, &RadialGrid::new(1e-3, 60.0, 2000).unwrap(), 1).unwrap()[0];
        let e2 = fd_spectrum(&p, 0, &RadialGrid::new(1e-3, 60.0, 4000).unwrap(), 1).unwrap()[0];
        let ratio = (e1 + 0.5) / (e2 + 0.5);
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn non_atomic_units() {
        let p = PhysicalParams {
            mass: 2.0,
            hbar: 1.5,
            coulomb_k: 1.0,
            charge_sq: 0.8,
            l: 0,
        };
        // E₁ = −mk²e⁴/(2ħ²), lengths scale with a₀ = ħ²/(mke²)
        let exact = -p.mass * 0.64 / (2.0 * p.hbar * p.hbar);
        let a0 = p.bohr_radius();
        let grid = RadialGrid::new(1e-3 * a0, 100.0 * a0, 4000).unwrap();
        let ev = fd_spectrum(&p, 0, &grid, 1).unwrap();
        assert!(rel(ev[0], exact) < 1e-4, "{ev:?} vs {exact}");
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 0.7, 3.0), 1.0);
        assert!((laguerre(1, 1.0 / 3.0, 2.0) + 2.0 / 3.0).abs() < 1e-15);
        assert!((laguerre(2, 0.0, 1.0) + 0.5).abs() < 1e-15);
        let z = c64(0.3, -1.2);
        let w = laguerre_complex(1, 0.5, z);
        assert!((w - (c64(1.5, 0.0) - z)).norm() < 1e-15);
    }

    #[test]
    fn commutator_examples() {
        let samples = [(0.3, -0.2), (1.0, 0.5), (-0.7, 1.1), (0.0, 0.0)];
        for (pt, want) in [
            (OpPoint::CONFIGURATION, 1.0),
            (OpPoint::new(-3.0, 1.0, -2.0, 1.0), 1.0),
            (OpPoint::new(1.0, 0.0, 0.0, -2.0), 2.0),
        ] {
            let c = commutator_check(&pt, 1.0, &samples).unwrap();
            assert!((c - c64(want, 0.0)).norm() < 1e-6, "{pt:?}: {c}");
        }
        assert!(commutator_check(&OpPoint::CONFIGURATION, 1.0, &[]).is_err());
        assert!(commutator_check(&OpPoint::CONFIGURATION, 1.0, &[(6.0, 0.0)]).is_err());
    }
}
