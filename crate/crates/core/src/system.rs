//! Vortex systems and their conserved quantities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::{from_pair, to_pair, PlanePoint};

/// Smallest mutual distance accepted at construction.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Absolute tolerance below which the total vorticity counts as zero.
pub const ZERO_TOTAL_TOL: f64 = 1e-12;

/// Positions and vorticities of `N >= 2` point vortices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct VortexSystem {
    positions: Vec<PlanePoint>,
    vorticities: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    positions: Vec<[f64; 2]>,
    vorticities: Vec<f64>,
}

impl TryFrom<RawSystem> for VortexSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        VortexSystem::new(
            raw.positions.into_iter().map(from_pair).collect(),
            raw.vorticities,
        )
    }
}

impl From<VortexSystem> for RawSystem {
    fn from(s: VortexSystem) -> Self {
        RawSystem {
            positions: s.positions.into_iter().map(to_pair).collect(),
            vorticities: s.vorticities,
        }
    }
}

impl VortexSystem {
    pub fn new(positions: Vec<PlanePoint>, vorticities: Vec<f64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::InvalidSystem(format!(
                "need at least 2 vortices, got {}",
                positions.len()
            )));
        }
        if positions.len() != vorticities.len() {
            return Err(Error::InvalidSystem(format!(
                "{} positions but {} vorticities",
                positions.len(),
                vorticities.len()
            )));
        }
        if positions.iter().any(|p| !p.is_finite()) || vorticities.iter().any(|g| !g.is_finite())
        {
            return Err(Error::InvalidSystem("non-finite coordinate or vorticity".into()));
        }
        if let Some((k, l, distance)) = closest_pair(&positions) {
            if distance < MIN_SEPARATION {
                return Err(Error::CloseVortices { k, l, distance });
            }
        }
        Ok(VortexSystem {
            positions,
            vorticities,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[PlanePoint] {
        &self.positions
    }

    pub fn vorticities(&self) -> &[f64] {
        &self.vorticities
    }

    pub fn total_vorticity(&self) -> f64 {
        self.vorticities.iter().sum()
    }

    /// Same vorticities at new positions.
    pub fn with_positions(&self, positions: Vec<PlanePoint>) -> Result<Self> {
        VortexSystem::new(positions, self.vorticities.clone())
    }

    /// Apply `z -> a z + b` to every position.
    pub fn transformed(&self, a: PlanePoint, b: PlanePoint) -> Result<Self> {
        self.with_positions(self.positions.iter().map(|&z| a * z + b).collect())
    }

    /// Append a vortex; used to insert zero-vorticity tracers.
    pub fn with_vortex(&self, z: PlanePoint, gamma: f64) -> Result<Self> {
        let mut positions = self.positions.clone();
        let mut vorticities = self.vorticities.clone();
        positions.push(z);
        vorticities.push(gamma);
        VortexSystem::new(positions, vorticities)
    }

    pub fn min_distance(&self) -> f64 {
        closest_pair(&self.positions).map_or(f64::INFINITY, |(_, _, d)| d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vortex systems always serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub(crate) fn closest_pair(positions: &[PlanePoint]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for k in 0..positions.len() {
        for l in k + 1..positions.len() {
            let d = (positions[k] - positions[l]).norm();
            if best.is_none_or(|(_, _, b)| d < b) {
                best = Some((k, l, d));
            }
        }
    }
    best
}

/// Symmetric matrix of mutual distances `|z_k - z_l|`.
pub fn mutual_distances(s: &VortexSystem) -> Vec<Vec<f64>> {
    let z = s.positions();
    let n = z.len();
    let mut d = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in k + 1..n {
            let r = (z[k] - z[l]).norm();
            d[k][l] = r;
            d[l][k] = r;
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    pub total_vorticity: f64,
    /// Absent when the total vorticity is zero.
    pub center_of_vorticity: Option<PlanePoint>,
    pub hamiltonian: f64,
    pub angular_impulse: f64,
}

pub fn conserved(s: &VortexSystem) -> ConservedQuantities {
    let z = s.positions();
    let g = s.vorticities();
    let total: f64 = g.iter().sum();
    let center_of_vorticity = if total.abs() < ZERO_TOTAL_TOL {
        None
    } else {
        let moment: PlanePoint = z.iter().zip(g).map(|(&zk, &gk)| zk * gk).sum();
        Some(moment / total)
    };
    ConservedQuantities {
        total_vorticity: total,
        center_of_vorticity,
        hamiltonian: hamiltonian(s),
        angular_impulse: z.iter().zip(g).map(|(zk, gk)| gk * zk.norm_sqr()).sum(),
    }
}

/// `-(1/4π) Σ_{k<l} Γ_k Γ_l ln|z_k - z_l|`.
pub fn hamiltonian(s: &VortexSystem) -> f64 {
    let z = s.positions();
    let g = s.vorticities();
    let mut acc = 0.0;
    for k in 0..z.len() {
        for l in k + 1..z.len() {
            acc += g[k] * g[l] * (z[k] - z[l]).norm().ln();
        }
    }
    -acc / (4.0 * PI)
}
