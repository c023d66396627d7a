//! Zero-vorticity tracers that co-rotate with a polygonal equilibrium.
//!
//! A tracer at `z` co-rotates when the field of the rings equals `iωz`. For
//! the configurations handled here every such point lies on a ray
//! `arg(z/s₁) = K'π/n`, where the condition reduces to a real polynomial in
//! `t = |z/s₁|`. Even `K'` are vertex rays of the first ring, odd `K'` are
//! midpoint rays. The rotation by `ρ = e^{2iπ/n}` maps ray `K'` to `K' + 2`,
//! so each root of a ray equation appears once on each of the `n` rays of
//! its class.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{classify, EquilibriumKind, DEFAULT_CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::nested::{absolute_equilibrium_at, mu, Alignment, NestedPolygonConfig};
use crate::plane::{unit, PlanePoint};
use crate::polygon::{polygon_field, polygon_omega};
use crate::roots::{dedup_roots, scan_roots, Poly};
use crate::system::VortexSystem;

/// Accepted field residual for a reported point.
pub const RESIDUAL_TOL: f64 = 1e-10;
const SUBDIVISIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RayKind {
    Origin,
    VertexRay,
    MidpointRay,
}

impl RayKind {
    pub fn label(self) -> &'static str {
        match self {
            RayKind::Origin => "ORIGIN",
            RayKind::VertexRay => "VERTEX_RAY",
            RayKind::MidpointRay => "MIDPOINT_RAY",
        }
    }

    fn of_index(k: usize) -> RayKind {
        if k % 2 == 0 {
            RayKind::VertexRay
        } else {
            RayKind::MidpointRay
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorotatingPoint {
    pub ray: RayKind,
    /// Ray index `K'` with `arg(z/s₁) = K'π/n`; zero for the origin.
    #[serde(rename = "K")]
    pub k: usize,
    /// `|z/s₁|`.
    pub radius: f64,
    pub position: PlanePoint,
    /// `|field(z) - iωz|`.
    pub residual: f64,
}

impl CorotatingPoint {
    fn origin() -> Self {
        CorotatingPoint {
            ray: RayKind::Origin,
            k: 0,
            radius: 0.0,
            position: PlanePoint::new(0.0, 0.0),
            residual: 0.0,
        }
    }
}

/// A ring of the generating configuration: `n`, vertex-0 position, vorticity.
#[derive(Debug, Clone, Copy)]
struct Ring {
    s: PlanePoint,
    gamma: f64,
}

fn ring_residual(n: usize, rings: &[Ring], omega: f64, z: PlanePoint) -> Option<f64> {
    let mut v = PlanePoint::new(0.0, 0.0);
    for r in rings {
        v += polygon_field(n, r.s, r.gamma, z).ok()?;
    }
    Some((v - crate::plane::I * z * omega).norm())
}

/// Positive roots of `p` on `(0, bound)`, avoiding the points in `poles`.
fn ray_roots(p: &Poly, poles: &[f64]) -> Vec<f64> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let bound = p.cauchy_bound();
    let mut nodes = vec![0.0, bound];
    nodes.extend(poles.iter().copied().filter(|&x| x > 0.0 && x < bound));
    // Geometric breakpoints keep the grid fine near zero and over wide ranges.
    let mut b = 1.0;
    while b < bound {
        nodes.push(b);
        b *= 2.0;
    }
    nodes.extend((1..=10).map(|k| 0.5f64.powi(k)));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let f = |t: f64| p.eval(t);
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        roots.extend(scan_roots(&f, w[0], w[1], SUBDIVISIONS));
    }
    roots.retain(|&t| t > 1e-12 * bound && poles.iter().all(|&q| t != q));
    dedup_roots(roots, 1e-12)
}

fn points_on_rays(
    n: usize,
    s1: PlanePoint,
    rings: &[Ring],
    omega: f64,
    radii: impl Fn(usize) -> Vec<f64>,
) -> Vec<CorotatingPoint> {
    let mut out = vec![CorotatingPoint::origin()];
    let per_parity = [radii(0), radii(1)];
    for k in 0..2 * n {
        let dir = s1 * unit(k as f64 * PI / n as f64);
        for &t in &per_parity[k % 2] {
            let z = dir * t;
            if let Some(residual) = ring_residual(n, rings, omega, z) {
                if residual < RESIDUAL_TOL {
                    out.push(CorotatingPoint {
                        ray: RayKind::of_index(k),
                        k,
                        radius: t,
                        position: z,
                        residual,
                    });
                }
            }
        }
    }
    out
}

fn check_single(n: usize, s: PlanePoint, gamma: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    if s.norm() == 0.0 || !s.is_finite() {
        return Err(Error::InvalidParameter("s must be nonzero".into()));
    }
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter("gamma must be nonzero".into()));
    }
    Ok(())
}

/// Co-rotating points of a regular `n`-gon with equal vorticities `gamma`.
///
/// On the vertex rays `t = |z/s|` solves `(n-1)tⁿ - 2n tⁿ⁻² - (n-1) = 0`, on
/// the midpoint rays `(n-1)tⁿ - 2n tⁿ⁻² + (n-1) = 0`. The origin comes first,
/// then the points ordered by ray index and radius.
pub fn corotating_single(n: usize, s: PlanePoint, gamma: f64) -> Result<Vec<CorotatingPoint>> {
    check_single(n, s, gamma)?;
    let omega = polygon_omega(n, s, n as f64 * gamma);
    let nf = n as f64;
    let base = Poly::monomial(nf - 1.0, n).add(&Poly::monomial(-2.0 * nf, n - 2));
    let vertex = base.add(&Poly::new(vec![-(nf - 1.0)]));
    let midpoint = base.add(&Poly::new(vec![nf - 1.0]));
    let rings = [Ring { s, gamma }];
    Ok(points_on_rays(n, s, &rings, omega, |parity| {
        if parity == 0 {
            ray_roots(&vertex, &[1.0])
        } else {
            ray_roots(&midpoint, &[])
        }
    }))
}

/// The two-ring ray polynomial
/// `nσ₁tⁿ⁻²[Γ₁(σ₁tⁿ - σ₂xⁿ) + Γ₂(σ₁tⁿ - 1)] - ω|s₁|²(σ₁tⁿ - 1)(σ₁tⁿ - σ₂xⁿ)`
/// with `σ₁ = ±1` the ray parity and `σ₂xⁿ = (s₂/s₁)ⁿ`.
fn nested_ray_poly(c: &NestedPolygonConfig, sigma2: f64, sigma1: f64, omega: f64) -> Poly {
    let n = c.n;
    let xn = c.radius_ratio().powi(n as i32);
    let tn = Poly::monomial(sigma1, n);
    let a = tn.add(&Poly::new(vec![-1.0]));
    let b = tn.add(&Poly::new(vec![-sigma2 * xn]));
    let inner = b.scale(c.gamma1).add(&a.scale(c.gamma2));
    Poly::monomial(n as f64 * sigma1, n - 2)
        .mul(&inner)
        .add(&a.mul(&b).scale(-omega * c.s1.norm_sqr()))
}

/// Co-rotating points on the rays `arg(z/s₁) = K'π/n` of a two-ring
/// configuration rotating with angular velocity `omega` about the origin.
///
/// Unlike [`corotating_nested`] this does not check that every co-rotating
/// point lies on these rays.
pub fn corotating_on_rays(c: &NestedPolygonConfig, omega: f64) -> Result<Vec<CorotatingPoint>> {
    let alignment = c.alignment().ok_or_else(|| {
        Error::InvalidParameter("s2/s1 is neither aligned nor staggered".into())
    })?;
    let sigma2 = match alignment {
        Alignment::Aligned => 1.0,
        Alignment::Staggered => -1.0,
    };
    let x = c.radius_ratio();
    let rings = [
        Ring {
            s: c.s1,
            gamma: c.gamma1,
        },
        Ring {
            s: c.s2,
            gamma: c.gamma2,
        },
    ];
    Ok(points_on_rays(c.n, c.s1, &rings, omega, |parity| {
        let sigma1 = if parity == 0 { 1.0 } else { -1.0 };
        let mut poles = Vec::new();
        if sigma1 > 0.0 {
            poles.push(1.0);
        }
        if sigma1 * sigma2 > 0.0 {
            poles.push(x);
        }
        ray_roots(&nested_ray_poly(c, sigma2, sigma1, omega), &poles)
    }))
}

/// Co-rotating points of a two-ring relative equilibrium.
///
/// Requires same-sign vorticities on aligned rings or opposite-sign
/// vorticities on staggered rings; under either hypothesis every co-rotating
/// point lies on a ray `arg(z/s₁) = K'π/n`.
pub fn corotating_nested(c: &NestedPolygonConfig) -> Result<Vec<CorotatingPoint>> {
    let alignment = c.alignment().ok_or_else(|| {
        Error::HypothesisUnmet("s2/s1 is neither aligned nor staggered".into())
    })?;
    let same_sign = c.gamma1 * c.gamma2 > 0.0;
    match (same_sign, alignment) {
        (true, Alignment::Aligned) | (false, Alignment::Staggered) => {}
        (true, Alignment::Staggered) => {
            return Err(Error::HypothesisUnmet(
                "same-sign vorticities require aligned rings".into(),
            ))
        }
        (false, Alignment::Aligned) => {
            return Err(Error::HypothesisUnmet(
                "opposite-sign vorticities require staggered rings".into(),
            ))
        }
    }
    let report = classify(&c.to_system()?, DEFAULT_CLASSIFY_TOL);
    let omega = match report.kind {
        EquilibriumKind::Absolute => 0.0,
        EquilibriumKind::Rotation => report.omega,
        other => {
            return Err(Error::HypothesisUnmet(format!(
                "configuration is not a rotating equilibrium ({})",
                other.label()
            )))
        }
    };
    corotating_on_rays(c, omega)
}

/// The nonzero fixed point of the two-ring absolute equilibrium with
/// `s₁ = 1`, on the vertex ray `K' = 0` of the inner ring.
///
/// With `r = Γ₂/Γ₁ = -μₙ` it satisfies `(z/s₁)ⁿ = r(1 - r)/(1 + r)`; the other
/// nonzero fixed points are its images under `ρ`.
pub fn corotating_absolute(n: usize, gamma1: f64) -> Result<CorotatingPoint> {
    let eq = absolute_equilibrium_at(n, gamma1, PlanePoint::new(1.0, 0.0))?;
    let r = -mu(n);
    let t = (r * (1.0 - r) / (1.0 + r)).powf(1.0 / n as f64);
    let z = eq.config.s1 * t;
    let rings = [
        Ring {
            s: eq.config.s1,
            gamma: eq.config.gamma1,
        },
        Ring {
            s: eq.config.s2,
            gamma: eq.config.gamma2,
        },
    ];
    let residual = ring_residual(n, &rings, 0.0, z).ok_or(Error::Singular)?;
    Ok(CorotatingPoint {
        ray: RayKind::VertexRay,
        k: 0,
        radius: t,
        position: z,
        residual,
    })
}

#[derive(Serialize)]
struct Export<'a> {
    generator: &'a VortexSystem,
    points: &'a [CorotatingPoint],
}

/// `{"generator": <system>, "points": [{"ray", "K", "radius", "position", "residual"}]}`.
pub fn corotating_to_json(generator: &VortexSystem, points: &[CorotatingPoint]) -> String {
    serde_json::to_string(&Export { generator, points }).expect("finite values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::point;

    fn on_class(points: &[CorotatingPoint], ray: RayKind, k: usize) -> Vec<f64> {
        points
            .iter()
            .filter(|p| p.ray == ray && p.k == k)
            .map(|p| p.radius)
            .collect()
    }

    #[test]
    fn pair_points() {
        let pts = corotating_single(2, point(1.0, 0.0), 1.0).unwrap();
        assert_eq!(pts[0].ray, RayKind::Origin);
        assert_eq!(pts[0].residual, 0.0);
        let v = on_class(&pts, RayKind::VertexRay, 0);
        let m = on_class(&pts, RayKind::MidpointRay, 1);
        assert_eq!(v.len(), 1);
        assert_eq!(m.len(), 1);
        assert!((v[0] - 5f64.sqrt()).abs() < 1e-12);
        assert!((m[0] - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(pts.len(), 5);
    }

    #[test]
    fn triangle_midpoint_roots() {
        let pts = corotating_single(3, point(0.4, -1.1), -2.0).unwrap();
        let m = on_class(&pts, RayKind::MidpointRay, 3);
        assert_eq!(m.len(), 2);
        for t in m {
            assert!((t * t * t - 3.0 * t + 1.0).abs() < 1e-12);
        }
        assert_eq!(on_class(&pts, RayKind::VertexRay, 4).len(), 1);
    }

    #[test]
    fn nested_refuses_outside_hypotheses() {
        let s1 = point(1.0, 0.0);
        let c = NestedPolygonConfig::new(2, s1, point(0.0, 1.0), 1.0, 1.0).unwrap();
        assert!(matches!(corotating_nested(&c), Err(Error::HypothesisUnmet(_))));
    }

    #[test]
    fn staggered_pairs_form_a_square() {
        // Two staggered equal pairs are a square; on the rays kπ/2 its
        // co-rotating points are the square's vertex-ray points.
        let c = NestedPolygonConfig::new(2, point(1.0, 0.0), point(0.0, 1.0), 1.0, 1.0).unwrap();
        let pts = corotating_on_rays(&c, 1.5).unwrap();
        let square = corotating_single(4, point(1.0, 0.0), 1.0).unwrap();
        let expected = on_class(&square, RayKind::VertexRay, 0)[0];
        assert!((expected - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(pts.len(), 5);
        for p in &pts[1..] {
            assert!((p.radius - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn absolute_pair_point() {
        let p = corotating_absolute(2, 1.0).unwrap();
        let expected = 3.0 + 2.0 * 3f64.sqrt();
        assert!((p.radius * p.radius - expected).abs() < 1e-12);
        assert!((p.radius - 2.5425).abs() < 1e-4);
        assert!(p.residual < 1e-10);
    }

    #[test]
    fn json_shape() {
        let pts = corotating_single(2, point(1.0, 0.0), 1.0).unwrap();
        let sys = VortexSystem::new(vec![point(1.0, 0.0), point(-1.0, 0.0)], vec![1.0, 1.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&corotating_to_json(&sys, &pts)).unwrap();
        assert_eq!(v["points"][0]["ray"], "ORIGIN");
        assert_eq!(v["points"][1]["K"], 0);
        assert_eq!(v["points"][1]["position"].as_array().unwrap().len(), 2);
        assert!(v["generator"]["vorticities"].is_array());
    }
}
