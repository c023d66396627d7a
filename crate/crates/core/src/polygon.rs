//! A single regular polygon of vortices.
//!
//! Vertices sit at `s ρ^k` with `ρ = exp(2πi/n)`. This module gives the
//! angular velocity of a polygonal relative equilibrium, the closed-form
//! field of an equal-vorticity polygon, the spectra of the two circulant
//! matrices that govern unequal vorticities, and the real vorticity vectors
//! for which a polygon is a relative equilibrium.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::{root_of_unity, PlanePoint, I};
use crate::system::VortexSystem;

/// Closed-form eigenvalues with modulus below this are treated as exact zeros.
pub const KERNEL_EIGENVALUE_TOL: f64 = 1e-9;
/// Singular-value cutoff for the real-intersection rank computation.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonRing {
    n: usize,
    s: PlanePoint,
    vorticities: Vec<f64>,
}

impl PolygonRing {
    pub fn new(n: usize, s: PlanePoint, vorticities: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("polygon needs n >= 2, got {n}")));
        }
        if !(s.norm() > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter("polygon vertex s must be nonzero".into()));
        }
        if vorticities.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n} vorticities, got {}",
                vorticities.len()
            )));
        }
        Ok(PolygonRing { n, s, vorticities })
    }

    pub fn equal(n: usize, s: PlanePoint, gamma: f64) -> Result<Self> {
        PolygonRing::new(n, s, vec![gamma; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> PlanePoint {
        self.s
    }

    pub fn vorticities(&self) -> &[f64] {
        &self.vorticities
    }

    pub fn vertices(&self) -> Vec<PlanePoint> {
        vertices(self.n, self.s)
    }

    pub fn to_system(&self) -> Result<VortexSystem> {
        ring_to_system(self)
    }
}

pub(crate) fn vertices(n: usize, s: PlanePoint) -> Vec<PlanePoint> {
    (0..n as i64).map(|k| s * root_of_unity(n, k)).collect()
}

pub fn ring_to_system(r: &PolygonRing) -> Result<VortexSystem> {
    VortexSystem::new(r.vertices(), r.vorticities.clone())
}

/// Angular velocity `(n-1) / (2n|s|²) · ΣΓ` of a polygonal relative equilibrium.
pub fn polygon_omega(n: usize, s: PlanePoint, total_vorticity: f64) -> f64 {
    let n = n as f64;
    (n - 1.0) / (2.0 * n * s.norm_sqr()) * total_vorticity
}

/// Velocity generated at `z` by `n` vortices of vorticity `gamma` at `s ρ^k`:
/// `gamma · i n z̄^{n-1} / (z̄^n - s̄^n)`.
///
/// Evaluated in the frame scaled by `max(|z|, |s|)` so that large `n` does
/// not overflow.
pub fn polygon_field(n: usize, s: PlanePoint, gamma: f64, z: PlanePoint) -> Result<PlanePoint> {
    if z.norm() == 0.0 {
        return Ok(PlanePoint::new(0.0, 0.0));
    }
    let m = z.norm().max(s.norm());
    let zs = (z / m).conj();
    let ss = (s / m).conj();
    let n_i = n as i32;
    let denom = zs.powi(n_i) - ss.powi(n_i);
    if denom.norm() < 1e-12 {
        return Err(Error::Singular);
    }
    Ok(I * zs.powi(n_i - 1) / denom * (gamma * n as f64 / m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CirculantKind {
    /// Rotating case: first row `((n-1)/2n, 1/(1-ρ^{-l}) + (n-1)/(2n) ρ^l)`.
    C,
    /// Translating case: first row `(0, 1/(1-ρ^{-l}))`.
    C0,
}

impl CirculantKind {
    pub fn label(self) -> &'static str {
        match self {
            CirculantKind::C => "C",
            CirculantKind::C0 => "C0",
        }
    }

    /// Closed-form eigenvalue for eigenvector `v_k`.
    pub fn closed_form_eigenvalue(self, n: usize, k: usize) -> f64 {
        if self == CirculantKind::C && k == n - 1 {
            0.0
        } else {
            (n as f64 - 1.0) / 2.0 - k as f64
        }
    }
}

impl std::str::FromStr for CirculantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(CirculantKind::C),
            "C0" | "c0" => Ok(CirculantKind::C0),
            other => Err(Error::InvalidParameter(format!("unknown circulant kind {other:?}"))),
        }
    }
}

/// First row of the circulant matrix of the given kind.
pub fn circulant_first_row(n: usize, kind: CirculantKind) -> Vec<PlanePoint> {
    let shift = (n as f64 - 1.0) / (2.0 * n as f64);
    (0..n)
        .map(|l| {
            let l_i = l as i64;
            let pole = if l == 0 {
                PlanePoint::new(0.0, 0.0)
            } else {
                (PlanePoint::new(1.0, 0.0) - root_of_unity(n, -l_i)).inv()
            };
            match kind {
                CirculantKind::C0 => pole,
                CirculantKind::C => pole + root_of_unity(n, l_i) * shift,
            }
        })
        .collect()
}

/// Fourier vector `v_k = (1, ρ^k, ..., ρ^{(n-1)k})`.
pub fn fourier_vector(n: usize, k: usize) -> Vec<PlanePoint> {
    (0..n as i64).map(|j| root_of_unity(n, j * k as i64)).collect()
}

fn circulant_apply(row: &[PlanePoint], v: &[PlanePoint]) -> Vec<PlanePoint> {
    let n = row.len();
    (0..n)
        .map(|r| (0..n).map(|c| row[(c + n - r) % n] * v[c]).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpectrum {
    pub n: usize,
    pub kind: CirculantKind,
    /// Eigenvalues extracted numerically from `M v_k` (real parts).
    pub eigenvalues: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub eigenvectors: Vec<Vec<PlanePoint>>,
    /// Largest imaginary part of the extracted eigenvalues.
    pub imaginary_residue: f64,
    /// `max_k max_j |(M v_k)_j - λ_k (v_k)_j|` with the closed-form `λ_k`.
    pub max_residual: f64,
}

impl CirculantSpectrum {
    /// Largest deviation between extracted and closed-form eigenvalues.
    pub fn max_eigenvalue_error(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.closed_form)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            kind: &'a str,
            eigenvalues: &'a [f64],
        }
        serde_json::to_string(&Out {
            n: self.n,
            kind: self.kind.label(),
            eigenvalues: &self.eigenvalues,
        })
        .expect("spectrum serializes")
    }
}

/// Build the circulant matrix from its first row, apply it to every Fourier
/// vector and read off the eigenvalues.
pub fn circulant_spectrum(n: usize, kind: CirculantKind) -> Result<CirculantSpectrum> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    let row = circulant_first_row(n, kind);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut closed_form = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut imaginary_residue: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    for k in 0..n {
        let v = fourier_vector(n, k);
        let mv = circulant_apply(&row, &v);
        let rayleigh: PlanePoint =
            v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<PlanePoint>() / n as f64;
        let exact = kind.closed_form_eigenvalue(n, k);
        for (a, b) in mv.iter().zip(&v) {
            max_residual = max_residual.max((a - b * exact).norm());
        }
        imaginary_residue = imaginary_residue.max(rayleigh.im.abs());
        eigenvalues.push(rayleigh.re);
        closed_form.push(exact);
        eigenvectors.push(v);
    }
    Ok(CirculantSpectrum {
        n,
        kind,
        eigenvalues,
        closed_form,
        eigenvectors,
        imaginary_residue,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MotionCase {
    /// Nonzero total vorticity, rotation about the center of vorticity.
    Rotating,
    /// Zero total vorticity, rigid translation with any velocity.
    Translating,
}

impl std::str::FromStr for MotionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotating" => Ok(MotionCase::Rotating),
            "translating" => Ok(MotionCase::Translating),
            other => Err(Error::InvalidParameter(format!("unknown case {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VorticitySolutionSpace {
    pub n: usize,
    pub case: MotionCase,
    pub dimension: usize,
    /// Orthonormal real basis.
    pub basis: Vec<Vec<f64>>,
}

impl VorticitySolutionSpace {
    /// Euclidean distance from `gamma` to the space.
    pub fn distance(&self, gamma: &[f64]) -> f64 {
        let mut rest = gamma.to_vec();
        for b in &self.basis {
            let c: f64 = b.iter().zip(gamma).map(|(x, y)| x * y).sum();
            for (r, x) in rest.iter_mut().zip(b) {
                *r -= c * x;
            }
        }
        rest.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Real vectors in the span of `complex_basis`, restricted by the real linear
/// constraints `c · Γ = 0`.
fn real_intersection(
    n: usize,
    complex_basis: &[Vec<PlanePoint>],
    constraints: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let m = complex_basis.len();
    if m == 0 {
        return Vec::new();
    }
    // Coefficients a_j = p_j + i q_j, unknowns ordered (p_1..p_m, q_1..q_m).
    let re_map = DMatrix::from_fn(n, 2 * m, |r, c| {
        if c < m {
            complex_basis[c][r].re
        } else {
            -complex_basis[c - m][r].im
        }
    });
    let im_map = DMatrix::from_fn(n, 2 * m, |r, c| {
        if c < m {
            complex_basis[c][r].im
        } else {
            complex_basis[c - m][r].re
        }
    });
    let rows = (n + constraints.len()).max(2 * m);
    let mut system = DMatrix::zeros(rows, 2 * m);
    system.view_mut((0, 0), (n, 2 * m)).copy_from(&im_map);
    for (i, c) in constraints.iter().enumerate() {
        let row = DMatrix::from_row_slice(1, n, c) * &re_map;
        system.row_mut(n + i).copy_from(&row.row(0));
    }

    let svd = system.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.max().max(1.0);
    let null: Vec<_> = (0..2 * m)
        .filter(|&i| svd.singular_values[i] <= RANK_TOL * scale)
        .map(|i| v_t.row(i).transpose())
        .collect();
    null.into_iter()
        .map(|coeffs| (&re_map * coeffs).iter().copied().collect())
        .collect()
}

/// Orthonormal basis of the span of `vectors`, with singular-value cutoff.
fn orthonormal_span(n: usize, vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let cols = vectors.len().max(n);
    let mut a = DMatrix::zeros(n, cols);
    for (j, v) in vectors.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            a[(i, j)] = *x;
        }
    }
    let svd = a.svd(true, false);
    let u = svd.u.expect("requested U");
    let scale = svd.singular_values.max().max(1.0);
    let mut basis: Vec<Vec<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_TOL * scale)
        .map(|i| {
            let mut b: Vec<f64> = u.column(i).iter().copied().collect();
            // Canonical sign: the largest-magnitude entry is positive.
            let pivot = b.iter().copied().fold(0.0, |acc: f64, x| {
                if x.abs() > acc.abs() + 1e-12 {
                    x
                } else {
                    acc
                }
            });
            if pivot < 0.0 {
                b.iter_mut().for_each(|x| *x = -*x);
            }
            b
        })
        .collect();
    basis.sort_by(|a, b| b.iter().sum::<f64>().total_cmp(&a.iter().sum::<f64>()));
    basis
}

/// Real vorticity vectors for which the regular `n`-gon is a relative
/// equilibrium of the given kind.
///
/// Rotating: `span{(1,...,1)}` plus the real vectors in the kernel of `C`.
/// Translating: real zero-sum vectors `Γ` with `C0 Γ = w v_{n-1}` for some
/// complex `w`, i.e. the real part of `span{v_{n-1}} ⊕ ker C0`.
pub fn vorticity_solution_space(n: usize, case: MotionCase) -> Result<VorticitySolutionSpace> {
    let (kind, extra) = match case {
        MotionCase::Rotating => (CirculantKind::C, None),
        MotionCase::Translating => (CirculantKind::C0, Some(n - 1)),
    };
    let spectrum = circulant_spectrum(n, kind)?;
    let mut complex_basis: Vec<Vec<PlanePoint>> = spectrum
        .closed_form
        .iter()
        .enumerate()
        .filter(|(_, lambda)| lambda.abs() < KERNEL_EIGENVALUE_TOL)
        .map(|(k, _)| spectrum.eigenvectors[k].clone())
        .collect();
    if let Some(k) = extra {
        if !complex_basis.contains(&spectrum.eigenvectors[k]) {
            complex_basis.push(spectrum.eigenvectors[k].clone());
        }
    }

    let mut real_vectors = match case {
        MotionCase::Rotating => real_intersection(n, &complex_basis, &[]),
        MotionCase::Translating => real_intersection(n, &complex_basis, &[vec![1.0; n]]),
    };
    if case == MotionCase::Rotating {
        real_vectors.push(vec![1.0; n]);
    }
    let basis = orthonormal_span(n, &real_vectors);
    Ok(VorticitySolutionSpace {
        n,
        case,
        dimension: basis.len(),
        basis,
    })
}
