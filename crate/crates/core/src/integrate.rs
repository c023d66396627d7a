//! Adaptive Dormand–Prince 5(4) integration of the Helmholtz equations.

use std::fmt::Write as _;

use crate::dynamics::velocities_raw;
use crate::error::{Error, Result};
use crate::plane::PlanePoint;
use crate::system::{closest_pair, hamiltonian, mutual_distances, VortexSystem, MIN_SEPARATION};

const MAX_STEPS: usize = 5_000_000;

// Dormand–Prince tableau; the field is autonomous so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights are the last row of A; E holds b5 - b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Recorded solution of the vortex equations.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<VortexSystem>,
    /// `max_t |H(t) - H(0)|` divided by `max(|H(0)|, Σ_{k<l} |Γ_k Γ_l| / 4π)`.
    pub max_hamiltonian_drift: f64,
    /// `max_t max_{k<l} |d_kl(t) - d_kl(0)| / d_kl(0)`.
    pub max_distance_drift: f64,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn initial(&self) -> &VortexSystem {
        &self.states[0]
    }

    pub fn last(&self) -> &VortexSystem {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest displacement of any vortex from its initial position.
    pub fn max_displacement(&self) -> f64 {
        let z0 = self.initial().positions();
        self.states
            .iter()
            .flat_map(|s| s.positions().iter().zip(z0).map(|(z, w)| (z - w).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest displacement between the final and initial positions.
    pub fn return_error(&self) -> f64 {
        self.last()
            .positions()
            .iter()
            .zip(self.initial().positions())
            .map(|(z, w)| (z - w).norm())
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,x_0,y_0,...`; one state per line.
    pub fn to_csv(&self) -> String {
        let n = self.initial().len();
        let mut out = String::from("t");
        for k in 0..n {
            let _ = write!(out, ",x_{k},y_{k}");
        }
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            out.push_str(&crate::fmt_f64(*t));
            for z in s.positions() {
                out.push(',');
                out.push_str(&crate::fmt_f64(z.re));
                out.push(',');
                out.push_str(&crate::fmt_f64(z.im));
            }
            out.push('\n');
        }
        out
    }
}

fn unpack(y: &[f64]) -> Vec<PlanePoint> {
    y.chunks_exact(2).map(|c| PlanePoint::new(c[0], c[1])).collect()
}

fn rhs(y: &[f64], g: &[f64], out: &mut [f64]) {
    let v = velocities_raw(&unpack(y), g);
    for (o, vk) in out.chunks_exact_mut(2).zip(v) {
        o[0] = vk.re;
        o[1] = vk.im;
    }
}

fn rms_norm(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

/// Integrate the vortex equations from `s` up to `t_end`, recording every
/// accepted step.
///
/// Local error is controlled with mixed absolute/relative weights
/// `rel_tol * (1 + |y|)`.
pub fn integrate(s: &VortexSystem, t_end: f64, rel_tol: f64) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
    }
    if !(1e-14..=1e-3).contains(&rel_tol) {
        return Err(Error::InvalidParameter(format!(
            "rel_tol must lie in [1e-14, 1e-3], got {rel_tol}"
        )));
    }

    let g = s.vorticities().to_vec();
    let dim = 2 * s.len();
    let mut y: Vec<f64> = s.positions().iter().flat_map(|z| [z.re, z.im]).collect();

    let h0 = hamiltonian(s);
    let pair_scale: f64 = {
        let mut acc = 0.0;
        for k in 0..g.len() {
            for l in k + 1..g.len() {
                acc += (g[k] * g[l]).abs();
            }
        }
        acc / (4.0 * std::f64::consts::PI)
    };
    let h_scale = h0.abs().max(pair_scale).max(f64::MIN_POSITIVE);
    let d0 = mutual_distances(s);

    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut err = vec![0.0; dim];

    rhs(&y, &g, &mut k[0]);
    let mut h = {
        let d_y = rms_norm(&y);
        let d_f = rms_norm(&k[0]);
        let guess = if d_y < 1e-5 || d_f < 1e-5 { 1e-6 } else { 0.01 * d_y / d_f };
        guess.min(t_end)
    };

    let mut t = 0.0;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![s.clone()],
        max_hamiltonian_drift: 0.0,
        max_distance_drift: 0.0,
        rejected_steps: 0,
    };

    let mut steps = 0;
    while t < t_end {
        steps += 1;
        if steps > MAX_STEPS || h < 1e-15 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for i in 1..7 {
            for j in 0..dim {
                let mut acc = 0.0;
                for (m, km) in k.iter().enumerate().take(i) {
                    acc += A[i][m] * km[j];
                }
                stage[j] = y[j] + h * acc;
            }
            rhs(&stage, &g, &mut k[i]);
        }
        // The seventh stage is evaluated at the fifth-order solution.
        y_new.copy_from_slice(&stage);
        for j in 0..dim {
            let mut acc = 0.0;
            for (m, km) in k.iter().enumerate() {
                acc += E[m] * km[j];
            }
            err[j] = h * acc / (rel_tol * (1.0 + y[j].abs().max(y_new[j].abs())));
        }
        let e = rms_norm(&err);

        if e <= 1.0 && y_new.iter().all(|x| x.is_finite()) {
            t = if last { t_end } else { t + h };
            y.copy_from_slice(&y_new);
            k.swap(0, 6);

            let positions = unpack(&y);
            if let Some((a, b, distance)) = closest_pair(&positions) {
                if distance < MIN_SEPARATION {
                    return Err(Error::CloseApproach {
                        t,
                        k: a,
                        l: b,
                        distance,
                    });
                }
            }
            let state = VortexSystem::new(positions, g.clone())?;
            let dh = (hamiltonian(&state) - h0).abs() / h_scale;
            traj.max_hamiltonian_drift = traj.max_hamiltonian_drift.max(dh);
            let d = mutual_distances(&state);
            for a in 0..d.len() {
                for b in a + 1..d.len() {
                    let rel = (d[a][b] - d0[a][b]).abs() / d0[a][b];
                    traj.max_distance_drift = traj.max_distance_drift.max(rel);
                }
            }
            traj.times.push(t);
            traj.states.push(state);

            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            traj.rejected_steps += 1;
            let factor = if e.is_finite() { (0.9 * e.powf(-0.2)).clamp(0.1, 1.0) } else { 0.1 };
            h *= factor;
        }
    }
    Ok(traj)
}
