//! Helmholtz velocity field and relative-equilibrium classification.

use serde::{Deserialize, Serialize};

use crate::plane::{PlanePoint, I};
use crate::system::VortexSystem;

/// Default tolerance for [`classify`] on order-one systems.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Velocity of every vortex, `v_k = i Σ_{l≠k} Γ_l (z_k - z_l) / |z_k - z_l|²`.
pub fn velocities(s: &VortexSystem) -> Vec<PlanePoint> {
    velocities_raw(s.positions(), s.vorticities())
}

pub(crate) fn velocities_raw(z: &[PlanePoint], g: &[f64]) -> Vec<PlanePoint> {
    let n = z.len();
    let mut v = vec![PlanePoint::new(0.0, 0.0); n];
    for k in 0..n {
        for l in k + 1..n {
            let d = z[k] - z[l];
            let w = d / d.norm_sqr();
            v[k] += w * g[l];
            v[l] -= w * g[k];
        }
    }
    for vk in &mut v {
        *vk *= I;
    }
    v
}

/// Velocity induced by the whole system at a point `z` that is not a vortex.
pub fn field_at(s: &VortexSystem, z: PlanePoint) -> PlanePoint {
    let sum: PlanePoint = s
        .positions()
        .iter()
        .zip(s.vorticities())
        .map(|(&zl, &gl)| {
            let d = z - zl;
            d / d.norm_sqr() * gl
        })
        .sum();
    I * sum
}

/// `Σ_{k<l} Γ_k Γ_l`; vanishes for every absolute equilibrium.
pub fn oneil_sum(s: &VortexSystem) -> f64 {
    let g = s.vorticities();
    let mut acc = 0.0;
    for k in 0..g.len() {
        for l in k + 1..g.len() {
            acc += g[k] * g[l];
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EquilibriumKind {
    Absolute,
    RigidTranslation,
    Rotation,
    None,
}

impl EquilibriumKind {
    pub fn label(self) -> &'static str {
        match self {
            EquilibriumKind::Absolute => "ABSOLUTE",
            EquilibriumKind::RigidTranslation => "RIGID_TRANSLATION",
            EquilibriumKind::Rotation => "ROTATION",
            EquilibriumKind::None => "NONE",
        }
    }

    pub fn is_equilibrium(self) -> bool {
        self != EquilibriumKind::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub kind: EquilibriumKind,
    /// Best-fit angular velocity; zero for absolute equilibria and translations.
    pub omega: f64,
    pub translation_velocity: Option<PlanePoint>,
    /// Center of rotation, present for `Rotation`.
    pub center: Option<PlanePoint>,
    /// `max_{k<l} |(v_l - v_k) - iω(z_l - z_k)|` at the reported `omega`.
    pub residual: f64,
    /// `max_k |v_k|`.
    pub max_speed: f64,
}

/// Classify a configuration as absolute equilibrium, rigid translation,
/// rotation or none of these.
///
/// The angular velocity is the least-squares solution of
/// `v_l - v_k = iω(z_l - z_k)` over all pairs.
pub fn classify(s: &VortexSystem, tol: f64) -> EquilibriumReport {
    let z = s.positions();
    let v = velocities(s);
    let max_speed = v.iter().map(|x| x.norm()).fold(0.0, f64::max);

    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..z.len() {
        for l in k + 1..z.len() {
            let b = I * (z[l] - z[k]);
            let a = v[l] - v[k];
            num += (b.conj() * a).re;
            den += b.norm_sqr();
        }
    }
    let fit = num / den;
    let residual_at = |omega: f64| {
        let mut r: f64 = 0.0;
        for k in 0..z.len() {
            for l in k + 1..z.len() {
                r = r.max(((v[l] - v[k]) - I * (z[l] - z[k]) * omega).norm());
            }
        }
        r
    };

    if max_speed < tol {
        return EquilibriumReport {
            kind: EquilibriumKind::Absolute,
            omega: 0.0,
            translation_velocity: None,
            center: None,
            residual: residual_at(0.0),
            max_speed,
        };
    }

    let residual = residual_at(fit);
    if residual >= tol {
        return EquilibriumReport {
            kind: EquilibriumKind::None,
            omega: fit,
            translation_velocity: None,
            center: None,
            residual,
            max_speed,
        };
    }

    if fit.abs() < tol {
        let mean: PlanePoint = v.iter().sum::<PlanePoint>() / v.len() as f64;
        let spread = v.iter().map(|x| (x - mean).norm()).fold(0.0, f64::max);
        let kind = if spread < tol {
            EquilibriumKind::RigidTranslation
        } else {
            EquilibriumKind::None
        };
        return EquilibriumReport {
            kind,
            omega: if kind == EquilibriumKind::None { fit } else { 0.0 },
            translation_velocity: (kind == EquilibriumKind::RigidTranslation).then_some(mean),
            center: None,
            residual: if kind == EquilibriumKind::None {
                residual
            } else {
                residual_at(0.0)
            },
            max_speed,
        };
    }

    let center: PlanePoint = z
        .iter()
        .zip(&v)
        .map(|(&zk, &vk)| zk - vk / (I * fit))
        .sum::<PlanePoint>()
        / z.len() as f64;
    EquilibriumReport {
        kind: EquilibriumKind::Rotation,
        omega: fit,
        translation_velocity: None,
        center: Some(center),
        residual,
        max_speed,
    }
}
