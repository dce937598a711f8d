//! Operator-coefficient space.
//!
//! A point `(α, β, γ, δ)` fixes the operator definitions
//! `r̂ = αr + iħβ∂/∂p`, `p̂ = γp + iħδ∂/∂r`; their commutator is
//! `iħ(βγ − αδ)`, so the canonical points lie on the level set `βγ − αδ = 1`.
//!
//! Transforms act as diagonal integer matrices on the coefficient 4-vector.
//! The fundamental `g_ηk` zeroes coefficient `k`; its complement `I − g_ηk`
//! marks the coefficient it touches, and composition is
//! `g′ = g₀ − Σ nᵢ·g_Cᵢ`. Transforms on `{α, β}` and on `{γ, δ}` may not be
//! mixed.

use crate::{Complex, Error, Result};

/// Tolerance on `βγ − αδ = 1`.
pub const MANIFOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpPoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl OpPoint {
    pub const fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        OpPoint {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// `x̂ = x`, `p̂ = −iħ∂x`.
    pub const CONFIGURATION: OpPoint = OpPoint::new(1.0, 0.0, 0.0, -1.0);
    /// `x̂ = iħ∂p`, `p̂ = p`.
    pub const MOMENTUM: OpPoint = OpPoint::new(0.0, 1.0, 1.0, 0.0);

    /// Point on the manifold with `γ = (1 + αδ)/β`.
    pub fn on_manifold(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        if beta == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(OpPoint::new(
            alpha,
            beta,
            (1.0 + alpha * delta) / beta,
            delta,
        ))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        OpPoint::new(c[0], c[1], c[2], c[3])
    }

    pub fn alphadelta(&self) -> f64 {
        self.alpha * self.delta
    }
}

/// `βγ − αδ`, the `c` in `[r̂, p̂] = iħc`.
pub fn commutator_coefficient(p: &OpPoint) -> f64 {
    p.beta * p.gamma - p.alpha * p.delta
}

pub fn is_on_manifold(p: &OpPoint) -> bool {
    (commutator_coefficient(p) - 1.0).abs() <= MANIFOLD_TOL
}

/// The older one-parameter convention `α + γ = 1`, kept separate from the
/// manifold condition.
pub fn satisfies_legacy_constraint(p: &OpPoint) -> bool {
    (p.alpha + p.gamma - 1.0).abs() <= MANIFOLD_TOL
}

/// Which coefficient a fundamental transform acts on (`φ₁…φ₄` ↔ `α…δ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhaseKind {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl PhaseKind {
    pub const ALL: [PhaseKind; 4] = [
        PhaseKind::Phi1,
        PhaseKind::Phi2,
        PhaseKind::Phi3,
        PhaseKind::Phi4,
    ];

    /// From the 1-based index used on the command line.
    pub fn from_index(k: u8) -> Option<Self> {
        match k {
            1 => Some(PhaseKind::Phi1),
            2 => Some(PhaseKind::Phi2),
            3 => Some(PhaseKind::Phi3),
            4 => Some(PhaseKind::Phi4),
            _ => None,
        }
    }

    /// 0-based coefficient slot.
    pub fn slot(self) -> usize {
        self as usize
    }

    fn group(self) -> Group {
        match self {
            PhaseKind::Phi1 | PhaseKind::Phi2 => Group::AlphaBeta,
            PhaseKind::Phi3 | PhaseKind::Phi4 => Group::GammaDelta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    AlphaBeta,
    GammaDelta,
}

/// Diagonal integer 4×4 transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GEta {
    pub diag: [i64; 4],
}

impl GEta {
    pub const IDENTITY: GEta = GEta { diag: [1, 1, 1, 1] };

    pub const fn new(diag: [i64; 4]) -> Self {
        GEta { diag }
    }

    /// Identity with the coefficient of `kind` zeroed.
    pub fn fundamental(kind: PhaseKind) -> Self {
        let mut diag = [1; 4];
        diag[kind.slot()] = 0;
        GEta { diag }
    }

    /// Dense matrix form.
    pub fn matrix(&self) -> [[i64; 4]; 4] {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = self.diag[i];
        }
        m
    }
}

/// `I − g_η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GComplement {
    pub diag: [i64; 4],
}

impl GComplement {
    pub fn fundamental(kind: PhaseKind) -> Self {
        complement(&GEta::fundamental(kind))
    }

    /// The complement read back as a transform.
    pub fn as_geta(&self) -> GEta {
        GEta { diag: self.diag }
    }

    fn group(&self) -> Result<Option<Group>> {
        let ab = self.diag[0] != 0 || self.diag[1] != 0;
        let gd = self.diag[2] != 0 || self.diag[3] != 0;
        match (ab, gd) {
            (false, false) => Ok(None),
            (true, false) => Ok(Some(Group::AlphaBeta)),
            (false, true) => Ok(Some(Group::GammaDelta)),
            (true, true) => Err(Error::ForbiddenCombination),
        }
    }
}

pub fn complement(g: &GEta) -> GComplement {
    GComplement {
        diag: core::array::from_fn(|i| 1 - g.diag[i]),
    }
}

/// `g′ = g₀ − Σ countᵢ·g_Cᵢ`. A negative count undoes that many applications.
pub fn compose(g0: &GEta, applications: &[(GComplement, i64)]) -> Result<GEta> {
    let mut group = None;
    for (gc, _) in applications {
        match (group, gc.group()?) {
            (_, None) => {}
            (None, g) => group = g,
            (Some(a), Some(b)) if a != b => return Err(Error::ForbiddenCombination),
            _ => {}
        }
    }
    let mut diag = g0.diag;
    for (gc, count) in applications {
        for (d, c) in diag.iter_mut().zip(gc.diag) {
            *d -= count * c;
        }
    }
    Ok(GEta { diag })
}

/// Whether transforms of these kinds may be applied together.
pub fn can_combine(kinds: &[PhaseKind]) -> bool {
    let mut groups = kinds.iter().map(|k| k.group());
    match groups.next() {
        None => true,
        Some(first) => groups.all(|g| g == first),
    }
}

/// Componentwise action on the coefficient vector, with the image's
/// manifold membership.
pub fn apply_to_point(g: &GEta, p: &OpPoint) -> (OpPoint, bool) {
    let c = p.to_array();
    let image = OpPoint::from_array(core::array::from_fn(|i| g.diag[i] as f64 * c[i]));
    (image, is_on_manifold(&image))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSpaceClass {
    PositionLike,
    MomentumLike,
    Full,
    Other,
}

impl PhaseSpaceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseSpaceClass::PositionLike => "position_like",
            PhaseSpaceClass::MomentumLike => "momentum_like",
            PhaseSpaceClass::Full => "full",
            PhaseSpaceClass::Other => "other",
        }
    }
}

pub fn classify(g: &GEta) -> PhaseSpaceClass {
    match g.diag {
        [1, 0, 0, 1] => PhaseSpaceClass::PositionLike,
        [0, 1, 1, 0] => PhaseSpaceClass::MomentumLike,
        [1, 1, 1, 1] => PhaseSpaceClass::Full,
        _ => PhaseSpaceClass::Other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAngleSpec {
    pub kind: PhaseKind,
    /// Arbitrary constant `C` appearing in the φ₂/φ₄ angles.
    pub constant_c: Complex,
}

/// Rotation angle for φ₁ (`(pr/ħ)·α/β`) and φ₃ (`(pr/ħ)·γ/δ`).
///
/// φ₂ and φ₄ involve `log ψ` and are rejected.
pub fn phase_angle(
    spec: &PhaseAngleSpec,
    r: f64,
    p: f64,
    point: &OpPoint,
    hbar: f64,
) -> Result<Complex> {
    let (num, den) = match spec.kind {
        PhaseKind::Phi1 => (point.alpha, point.beta),
        PhaseKind::Phi3 => (point.gamma, point.delta),
        PhaseKind::Phi2 | PhaseKind::Phi4 => return Err(Error::WavefunctionDependentAngle),
    };
    if den == 0.0 || hbar == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(Complex::new(p * r / hbar * (num / den), 0.0))
}
