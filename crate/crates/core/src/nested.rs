//! Two concentric regular `n`-gons with one vorticity per ring.
//!
//! Ring `d` has vertices `s_d ρ^k` and vorticity `Γ_d`. With `x = |s₂/s₁|`
//! and `r = Γ₂/Γ₁`, the configuration is a relative equilibrium exactly when
//! `s₂/s₁` lies on a vertex ray (aligned) or a midpoint ray (staggered) of
//! the first ring and `x` is a positive root of
//!
//! ```text
//! G_n(α, β, γ, x) = (x² - α)(xⁿ - β) - γ
//! ```
//!
//! with `λ = 2n/(n-1)`, `α = r + λ`, and `(β, γ) = ±(λr + 1, λ(r² + λr + 1))`
//! (plus sign aligned, minus sign staggered). Roots are found numerically by
//! splitting `(0, X_max]` at the critical points of `G_n`, which are the
//! square roots of the positive zeros of
//!
//! ```text
//! F_n(α, β, t) = (n/2 + 1) t^{n/2} - α (n/2) t^{n/2 - 1} - β.
//! ```
//!
//! An independent case analysis of the same equation predicts the number of
//! roots from sign conditions on the coefficients.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{classify, EquilibriumKind, EquilibriumReport, DEFAULT_CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::plane::{angle_offset, arg, unit, PlanePoint};
use crate::polygon::vertices;
use crate::roots::{dedup_roots, roots_on_monotone_pieces};
use crate::system::VortexSystem;

/// Relative tolerance for deciding signs of case-deciding quantities.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Relative tolerance for deduplicating numeric roots.
pub const ROOT_DEDUP_TOL: f64 = 1e-9;
/// Relative tolerance on `Γ₁ + Γ₂` for the zero-total-vorticity case.
pub const ZERO_TOTAL_REL_TOL: f64 = 1e-12;

/// `λₙ = 2n/(n-1)`.
pub fn lambda(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 1.0)
}

/// `μₙ = n/(n-1) + √((n/(n-1))² - 1)`; the larger root of `r² - λₙ r + 1`.
pub fn mu(n: usize) -> f64 {
    let a = n as f64 / (n as f64 - 1.0);
    a + (a * a - 1.0).sqrt()
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")))
    } else {
        Ok(())
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r == 0.0 || !r.is_finite() {
        Err(Error::InvalidParameter(format!(
            "vorticity ratio must be finite and nonzero, got {r}"
        )))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Alignment {
    /// `arg(s₂/s₁) = 2Kπ/n`: ring 2 on the vertex rays of ring 1.
    Aligned,
    /// `arg(s₂/s₁) = (2K+1)π/n`: ring 2 on the midpoint rays of ring 1.
    Staggered,
}

impl Alignment {
    pub const BOTH: [Alignment; 2] = [Alignment::Aligned, Alignment::Staggered];

    /// Canonical (`K = 0`) argument of `s₂/s₁`.
    pub fn angle(self, n: usize) -> f64 {
        match self {
            Alignment::Aligned => 0.0,
            Alignment::Staggered => PI / n as f64,
        }
    }

    /// Alignment of a ring ratio `s₂/s₁`, if its argument is a multiple of `π/n`.
    pub fn of_ratio(n: usize, ratio: PlanePoint) -> Option<Alignment> {
        let theta = arg(ratio);
        let step = 2.0 * PI / n as f64;
        if angle_offset(theta, step) < 1e-10 {
            Some(Alignment::Aligned)
        } else if angle_offset(theta - PI / n as f64, step) < 1e-10 {
            Some(Alignment::Staggered)
        } else {
            None
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Alignment::Aligned => "aligned",
            Alignment::Staggered => "staggered",
        }
    }
}

/// Two concentric rings: `n`, vertex-0 positions and ring vorticities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedPolygonConfig {
    pub n: usize,
    pub s1: PlanePoint,
    pub s2: PlanePoint,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl NestedPolygonConfig {
    pub fn new(n: usize, s1: PlanePoint, s2: PlanePoint, gamma1: f64, gamma2: f64) -> Result<Self> {
        check_n(n)?;
        if s1.norm() == 0.0 || s2.norm() == 0.0 || !s1.is_finite() || !s2.is_finite() {
            return Err(Error::InvalidParameter("ring positions must be nonzero".into()));
        }
        if gamma1 == 0.0 || gamma2 == 0.0 || !gamma1.is_finite() || !gamma2.is_finite() {
            return Err(Error::InvalidParameter("ring vorticities must be nonzero".into()));
        }
        let ratio = s2 / s1;
        if (ratio.norm() - 1.0).abs() < 1e-12
            && angle_offset(arg(ratio), 2.0 * PI / n as f64) < 1e-12
        {
            return Err(Error::InvalidParameter("rings coincide (s2/s1 is a power of ρ)".into()));
        }
        Ok(NestedPolygonConfig {
            n,
            s1,
            s2,
            gamma1,
            gamma2,
        })
    }

    /// `x = |s₂/s₁|`.
    pub fn radius_ratio(&self) -> f64 {
        (self.s2 / self.s1).norm()
    }

    pub fn gamma_ratio(&self) -> f64 {
        self.gamma2 / self.gamma1
    }

    pub fn alignment(&self) -> Option<Alignment> {
        Alignment::of_ratio(self.n, self.s2 / self.s1)
    }

    /// Ring 1 vertices first, then ring 2.
    pub fn to_system(&self) -> Result<VortexSystem> {
        let mut positions = vertices(self.n, self.s1);
        positions.extend(vertices(self.n, self.s2));
        let mut vorticities = vec![self.gamma1; self.n];
        vorticities.extend(std::iter::repeat_n(self.gamma2, self.n));
        VortexSystem::new(positions, vorticities)
    }
}

/// Coefficients of `G_n(α, β, γ, ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialInstance {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub n: usize,
}

impl PolynomialInstance {
    /// `G_n(α, β, γ, x) = (x² - α)(xⁿ - β) - γ`.
    pub fn g(&self, x: f64) -> f64 {
        (x * x - self.alpha) * (x.powi(self.n as i32) - self.beta) - self.gamma
    }

    /// Limit of `G_n` at `x → 0⁺`.
    pub fn g_at_zero(&self) -> f64 {
        self.alpha * self.beta - self.gamma
    }

    /// `F_n(α, β, t) = ∂/∂t [(t - α)(t^{n/2} - β)]`.
    pub fn f(&self, t: f64) -> f64 {
        let h = self.n as f64 / 2.0;
        (h + 1.0) * t.powf(h) - self.alpha * h * t.powf(h - 1.0) - self.beta
    }

    fn g_scale(&self, x: f64) -> f64 {
        (x * x + self.alpha.abs()) * (x.powi(self.n as i32) + self.beta.abs()) + self.gamma.abs()
    }

    /// Every positive root lies below this bound.
    pub fn root_bound(&self) -> f64 {
        1.0 + self
            .alpha
            .abs()
            .max(self.beta.abs())
            .max(self.gamma.abs())
            .max(self.g_at_zero().abs())
    }
}

pub fn g_eval(p: &PolynomialInstance, x: f64) -> f64 {
    p.g(x)
}

pub fn f_eval(p: &PolynomialInstance, t: f64) -> f64 {
    p.f(t)
}

/// Coefficients of the equilibrium equation for ratio `r = Γ₂/Γ₁`.
pub fn equation_coefficients(n: usize, gamma_ratio: f64, alignment: Alignment) -> PolynomialInstance {
    let l = lambda(n);
    let r = gamma_ratio;
    let beta = l * r + 1.0;
    let gamma = l * (r * r + l * r + 1.0);
    let sign = match alignment {
        Alignment::Aligned => 1.0,
        Alignment::Staggered => -1.0,
    };
    PolynomialInstance {
        alpha: r + l,
        beta: sign * beta,
        gamma: sign * gamma,
        n,
    }
}

/// Positive zeros `t` of `F_n(α, β, ·)`, i.e. the squared critical points of `G_n`.
pub fn critical_points(p: &PolynomialInstance) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    if p.n == 2 {
        let t = 0.5 * (a + b);
        return if t > 0.0 { vec![t] } else { Vec::new() };
    }
    let n = p.n as f64;
    let t_max = 1.0 + a.abs() + b.abs();
    let f = |t: f64| p.f(t);
    let mut nodes = vec![0.0];
    let mut values = vec![-b];
    if a > 0.0 {
        // F_n decreases up to its minimum at α(n-2)/(n+2) and increases after.
        let t_min = a * (n - 2.0) / (n + 2.0);
        nodes.push(t_min);
        values.push(f(t_min));
    }
    nodes.push(t_max);
    values.push(f(t_max));
    let scale = |t: f64| (n / 2.0 + 1.0) * t.powf(n / 2.0) + b.abs();
    let roots = roots_on_monotone_pieces(f, &nodes, &values, |i| {
        i > 0 && i + 1 < nodes.len() && values[i].abs() <= 1e-14 * scale(nodes[i])
    });
    dedup_roots(roots, ROOT_DEDUP_TOL)
}

/// All roots `x > 0` of `G_n`, sorted.
pub fn positive_roots(p: &PolynomialInstance) -> Vec<f64> {
    let x_max = p.root_bound();
    let mut nodes = vec![0.0];
    let mut values = vec![p.g_at_zero()];
    for t in critical_points(p) {
        let x = t.sqrt();
        if x > 0.0 && x < x_max {
            nodes.push(x);
            values.push(p.g(x));
        }
    }
    nodes.push(x_max);
    values.push(p.g(x_max));
    let roots = roots_on_monotone_pieces(|x| p.g(x), &nodes, &values, |i| {
        i > 0 && i + 1 < nodes.len() && values[i].abs() <= 1e-13 * p.g_scale(nodes[i])
    });
    dedup_roots(roots, ROOT_DEDUP_TOL)
}

fn decide(quantity: &'static str, value: f64, scale: f64) -> Result<Ordering> {
    if value.abs() <= BOUNDARY_TOL * scale.max(1.0) {
        Err(Error::Boundary { quantity, value })
    } else if value > 0.0 {
        Ok(Ordering::Greater)
    } else {
        Ok(Ordering::Less)
    }
}

/// Region of the `(α, β)` plane that fixes the number of positive zeros of `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FRegion {
    /// `β > 0`: one zero.
    D31,
    /// `β < 0` and `β² > αⁿ ((n-2)/(n+2))^{n-2}` (or `α ≤ 0`): no zero.
    D12,
    /// `β < 0`, `α > 0` and `β² < αⁿ ((n-2)/(n+2))^{n-2}`: two zeros.
    D23,
}

fn f_region(p: &PolynomialInstance) -> Result<FRegion> {
    let (a, b) = (p.alpha, p.beta);
    if decide("beta", b, a.abs() + 1.0)? == Ordering::Greater {
        return Ok(FRegion::D31);
    }
    if a <= 0.0 {
        return Ok(FRegion::D12);
    }
    let n = p.n as i32;
    let c = ((p.n as f64 - 2.0) / (p.n as f64 + 2.0)).powi(n - 2);
    let curve = a.powi(n) * c;
    match decide("beta^2 - alpha^n (n-2)^(n-2)/(n+2)^(n-2)", b * b - curve, b * b + curve)? {
        Ordering::Greater => Ok(FRegion::D12),
        _ => Ok(FRegion::D23),
    }
}

/// Number of roots `x > 0` of `G_n` predicted by sign conditions on the
/// coefficients.
///
/// Fails with [`Error::Boundary`] when a quantity that decides the case lies
/// within [`BOUNDARY_TOL`] (relative) of zero. A vanishing `γ` is the
/// explicit `γ = 0` case, not a boundary.
pub fn count_roots_analytic(p: &PolynomialInstance) -> Result<usize> {
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    let q = a * b - g;
    let q_scale = (a * b).abs() + g.abs();
    if p.n == 2 {
        // t = x² solves t² - (α+β) t + (αβ - γ) = 0.
        let sum = a + b;
        let disc = 0.25 * (b - a) * (b - a) + g;
        if decide("gamma + (beta-alpha)^2/4", disc, 0.25 * (b - a) * (b - a) + g.abs())?
            == Ordering::Less
        {
            return Ok(0);
        }
        return match decide("alpha*beta - gamma", q, q_scale)? {
            Ordering::Less => Ok(1),
            _ => match decide("alpha + beta", sum, a.abs() + b.abs())? {
                Ordering::Greater => Ok(2),
                _ => Ok(0),
            },
        };
    }

    let n = p.n as i32;
    let gamma_scale = p.g_scale(1.0);
    if g.abs() <= BOUNDARY_TOL * gamma_scale.max(1.0) {
        // γ = 0: roots √α and β^{1/n} when positive.
        let pos_a = decide("alpha", a, b.abs() + 1.0)? == Ordering::Greater;
        let pos_b = decide("beta", b, a.abs() + 1.0)? == Ordering::Greater;
        if pos_a && pos_b {
            let diff = a.sqrt().powi(n) - b;
            decide("alpha^(n/2) - beta", diff, b.abs())?;
        }
        return Ok(pos_a as usize + pos_b as usize);
    }

    let q_sign = decide("alpha*beta - gamma", q, q_scale)?;
    if g > 0.0 {
        return Ok(match q_sign {
            Ordering::Less => 1,
            _ if a > 0.0 && b > 0.0 => 2,
            _ => 0,
        });
    }

    let region = f_region(p)?;
    match (q_sign, region) {
        (Ordering::Less, FRegion::D12 | FRegion::D31) => return Ok(1),
        (Ordering::Greater, FRegion::D12) => return Ok(0),
        _ => {}
    }

    // Remaining γ < 0 cases: G_n is monotone between its critical points, so
    // the root count is the number of sign changes along them.
    let mut signs = vec![q_sign];
    for t in critical_points(p) {
        let x = t.sqrt();
        signs.push(decide("G_n at a critical point", p.g(x), p.g_scale(x))?);
    }
    signs.push(Ordering::Greater);
    Ok(signs.windows(2).filter(|w| w[0] != w[1]).count())
}

/// A predicted number of equilibria: exact, or an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountPrediction {
    Exact(usize),
    Between(usize, usize),
}

impl CountPrediction {
    pub fn contains(self, k: usize) -> bool {
        match self {
            CountPrediction::Exact(e) => k == e,
            CountPrediction::Between(lo, hi) => (lo..=hi).contains(&k),
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            CountPrediction::Exact(e) => Some(e),
            CountPrediction::Between(..) => None,
        }
    }

    pub fn range(self) -> Option<(usize, usize)> {
        match self {
            CountPrediction::Exact(_) => None,
            CountPrediction::Between(lo, hi) => Some((lo, hi)),
        }
    }
}

impl fmt::Display for CountPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountPrediction::Exact(e) => write!(f, "{e}"),
            CountPrediction::Between(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// Vorticity-ratio regimes of the two-ring counting result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Γ₂/Γ₁ > 0`.
    SameSign,
    /// `n = 2`, opposite signs, `Γ₁ + Γ₂ ≠ 0`.
    OppositeSign,
    /// `n ≥ 3`, `-1/μₙ < Γ₂/Γ₁ < 0`.
    WeakOpposite,
    /// `n ≥ 3`, `Γ₂/Γ₁ = -1/μₙ` or `-μₙ`.
    MuThreshold,
    /// `n ≥ 3`, `-μₙ < Γ₂/Γ₁ < -1/μₙ`, `Γ₂/Γ₁ ≠ -1`.
    IntermediateOpposite,
    /// `n ≥ 3`, `Γ₂/Γ₁ < -μₙ`.
    StrongOpposite,
    /// `Γ₁ + Γ₂ = 0`.
    ZeroTotal,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::SameSign => "same_sign",
            Regime::OppositeSign => "opposite_sign",
            Regime::WeakOpposite => "weak_opposite",
            Regime::MuThreshold => "mu_threshold",
            Regime::IntermediateOpposite => "intermediate_opposite",
            Regime::StrongOpposite => "strong_opposite",
            Regime::ZeroTotal => "zero_total",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeClassification {
    pub n: usize,
    pub gamma_ratio: f64,
    pub regime: Regime,
    pub aligned: CountPrediction,
    pub staggered: CountPrediction,
    pub mu_n: f64,
    pub lambda_n: f64,
}

fn is_zero_total(gamma_ratio: f64) -> bool {
    (gamma_ratio + 1.0).abs() < ZERO_TOTAL_REL_TOL * gamma_ratio.abs().max(1.0)
}

/// Predicted numbers of aligned and staggered equilibria for `r = Γ₂/Γ₁`.
///
/// At `r = -1` the aligned root `x = 1` (coinciding rings) is excluded, so
/// the aligned count is zero.
pub fn classify_regime(n: usize, gamma_ratio: f64) -> Result<RegimeClassification> {
    use CountPrediction::{Between, Exact};
    check_n(n)?;
    check_ratio(gamma_ratio)?;
    let r = gamma_ratio;
    let m = mu(n);
    let near = |target: f64| (r - target).abs() <= BOUNDARY_TOL * target.abs();
    let (regime, aligned, staggered) = if r > 0.0 {
        if n == 2 {
            (Regime::SameSign, Exact(2), Exact(1))
        } else {
            (Regime::SameSign, Exact(2), Between(1, 3))
        }
    } else if is_zero_total(r) {
        (Regime::ZeroTotal, Exact(0), Exact(2))
    } else if n == 2 {
        (Regime::OppositeSign, Exact(1), Exact(2))
    } else if near(-m) || near(-1.0 / m) {
        (Regime::MuThreshold, Exact(1), Exact(2))
    } else if r > -1.0 / m {
        (Regime::WeakOpposite, Exact(1), Between(0, 2))
    } else if r > -m {
        (Regime::IntermediateOpposite, Between(1, 3), Exact(2))
    } else {
        (Regime::StrongOpposite, Exact(1), Between(0, 2))
    };
    Ok(RegimeClassification {
        n,
        gamma_ratio: r,
        regime,
        aligned,
        staggered,
        mu_n: m,
        lambda_n: lambda(n),
    })
}

/// Positive roots of the equilibrium equation that correspond to actual
/// equilibria: the aligned root `x = 1` is dropped when `Γ₁ + Γ₂ = 0`.
pub fn equilibrium_radii(n: usize, gamma_ratio: f64, alignment: Alignment) -> Vec<f64> {
    let mut roots = positive_roots(&equation_coefficients(n, gamma_ratio, alignment));
    if alignment == Alignment::Aligned && is_zero_total(gamma_ratio) {
        roots.retain(|x| (x - 1.0).abs() > ROOT_DEDUP_TOL);
    }
    roots
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestedSolution {
    pub alignment: Alignment,
    pub x: f64,
    pub config: NestedPolygonConfig,
    pub system: VortexSystem,
    pub report: EquilibriumReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestedSolveResult {
    pub solutions: Vec<NestedSolution>,
    /// Disagreements with, or boundary hits of, the analytic root count.
    pub warnings: Vec<String>,
}

/// All two-ring relative equilibria with ring vorticities `gamma1`, `gamma2`
/// and first ring at `s1`, with the staggered argument fixed at `π/n`.
pub fn solve_nested(
    n: usize,
    gamma1: f64,
    gamma2: f64,
    s1: PlanePoint,
) -> Result<NestedSolveResult> {
    check_n(n)?;
    if gamma1 == 0.0 || gamma2 == 0.0 || !gamma1.is_finite() || !gamma2.is_finite() {
        return Err(Error::InvalidParameter("ring vorticities must be nonzero".into()));
    }
    if s1.norm() == 0.0 || !s1.is_finite() {
        return Err(Error::InvalidParameter("s1 must be nonzero".into()));
    }
    let r = gamma2 / gamma1;
    let mut solutions = Vec::new();
    let mut warnings = Vec::new();
    for alignment in Alignment::BOTH {
        let p = equation_coefficients(n, r, alignment);
        let all_roots = positive_roots(&p);
        match count_roots_analytic(&p) {
            Ok(k) if k != all_roots.len() => warnings.push(format!(
                "{}: analytic count {k} differs from numeric count {}",
                alignment.label(),
                all_roots.len()
            )),
            Ok(_) => {}
            Err(e) => warnings.push(format!("{}: {e}", alignment.label())),
        }
        for x in equilibrium_radii(n, r, alignment) {
            let s2 = s1 * unit(alignment.angle(n)) * x;
            let config = NestedPolygonConfig::new(n, s1, s2, gamma1, gamma2)?;
            let system = config.to_system()?;
            let report = classify(&system, DEFAULT_CLASSIFY_TOL);
            if !matches!(report.kind, EquilibriumKind::Rotation | EquilibriumKind::Absolute) {
                warnings.push(format!(
                    "{} root x = {x} classified {} (residual {:e})",
                    alignment.label(),
                    report.kind.label(),
                    report.residual
                ));
            }
            solutions.push(NestedSolution {
                alignment,
                x,
                config,
                system,
                report,
            });
        }
    }
    Ok(NestedSolveResult {
        solutions,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsoluteEquilibrium {
    pub gamma2: f64,
    pub s2_over_s1: PlanePoint,
    pub config: NestedPolygonConfig,
    pub system: VortexSystem,
}

/// The two-ring absolute equilibrium with `Γ₂/Γ₁ = -μₙ`, `|s₂/s₁| = μₙ^{2/n}`
/// and `arg(s₂/s₁) = π/n`; ring 2 is the outer ring.
pub fn absolute_equilibrium(n: usize, gamma1: f64) -> Result<AbsoluteEquilibrium> {
    absolute_equilibrium_at(n, gamma1, PlanePoint::new(1.0, 0.0))
}

pub fn absolute_equilibrium_at(n: usize, gamma1: f64, s1: PlanePoint) -> Result<AbsoluteEquilibrium> {
    check_n(n)?;
    if gamma1 == 0.0 || !gamma1.is_finite() {
        return Err(Error::InvalidParameter("gamma1 must be nonzero".into()));
    }
    let m = mu(n);
    let gamma2 = -m * gamma1;
    let s2_over_s1 = unit(PI / n as f64) * m.powf(2.0 / n as f64);
    let config = NestedPolygonConfig::new(n, s1, s1 * s2_over_s1, gamma1, gamma2)?;
    let system = config.to_system()?;
    Ok(AbsoluteEquilibrium {
        gamma2,
        s2_over_s1,
        config,
        system,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeScanRow {
    pub classification: RegimeClassification,
    pub aligned_numeric: usize,
    pub staggered_numeric: usize,
}

impl RegimeScanRow {
    /// Numeric counts fall inside the predictions.
    pub fn consistent(&self) -> bool {
        self.classification.aligned.contains(self.aligned_numeric)
            && self.classification.staggered.contains(self.staggered_numeric)
    }
}

/// Predicted and numeric equilibrium counts for every ratio in `ratio_grid`,
/// in grid order.
pub fn scan_regimes(n: usize, ratio_grid: &[f64]) -> Result<Vec<RegimeScanRow>> {
    ratio_grid
        .par_iter()
        .map(|&r| {
            Ok(RegimeScanRow {
                classification: classify_regime(n, r)?,
                aligned_numeric: equilibrium_radii(n, r, Alignment::Aligned).len(),
                staggered_numeric: equilibrium_radii(n, r, Alignment::Staggered).len(),
            })
        })
        .collect()
}

pub const SCAN_CSV_HEADER: &str = "n,gamma_ratio,regime_label,aligned_predicted,aligned_numeric,staggered_predicted,staggered_numeric,mu_n";

pub fn scan_to_csv(rows: &[RegimeScanRow]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for row in rows {
        let c = &row.classification;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.n,
            crate::fmt_f64(c.gamma_ratio),
            c.regime.label(),
            c.aligned,
            row.aligned_numeric,
            c.staggered,
            row.staggered_numeric,
            crate::fmt_f64(c.mu_n)
        ));
    }
    out
}
