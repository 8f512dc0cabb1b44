//! The two case-study plants: a low-thrust spacecraft whose inputs are 14
//! Fourier thrust coefficients, and two agents steered by five media
//! channels.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::system::SystemSpec;

/// Classical orbital elements. Angles are stored in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalElements {
    /// Semi-major axis, km.
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
}

impl OrbitalElements {
    /// Builds elements from angles given in degrees.
    pub fn from_degrees(a: f64, e: f64, i: f64, raan: f64, argp: f64, mean_anomaly: f64) -> Self {
        Self {
            a,
            e,
            i: i.to_radians(),
            raan: raan.to_radians(),
            argp: argp.to_radians(),
            mean_anomaly: mean_anomaly.to_radians(),
        }
    }

    /// State vector `(a, e, i, Ω, ω, M)` with angles in degrees.
    pub fn state_degrees(&self) -> [f64; 6] {
        [
            self.a,
            self.e,
            self.i.to_degrees(),
            self.raan.to_degrees(),
            self.argp.to_degrees(),
            self.mean_anomaly.to_degrees(),
        ]
    }
}

/// Gravitational parameter, km³/s².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravParameter(pub f64);

impl GravParameter {
    /// Earth, 3.986e14 m³/s² expressed in km³/s².
    pub const EARTH: GravParameter = GravParameter(3.986e5);
}

const E_MIN: f64 = 1e-6;
const SIN_I_MIN: f64 = 1e-6;

/// The 6×14 averaged control matrix at the given orbit.
///
/// Block layout (0-based columns): rows 0–1 hold `B1` in columns 3–6,
/// rows 2–3 hold `B2` in columns 9–13, rows 4–5 hold `B3` in columns 0–2,
/// `B4` in columns 7–8 and `B5` in columns 9–13. All other entries are 0.
pub fn spacecraft_bbar(el: &OrbitalElements, mu: GravParameter) -> Result<Matrix> {
    let OrbitalElements { a, e, i, argp: w, .. } = *el;
    let GravParameter(mu) = mu;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::SingularElements(format!("semi-major axis must be positive, got {a}")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::SingularElements(format!("gravitational parameter must be positive, got {mu}")));
    }
    if !(e > E_MIN && e < 1.0) {
        return Err(Error::SingularElements(format!("eccentricity {e} outside ({E_MIN}, 1)")));
    }
    if !(i.sin() > SIN_I_MIN) {
        return Err(Error::SingularElements(format!("sin(i) = {} too close to zero", i.sin())));
    }

    let s = (a / mu).sqrt();
    let s3 = (a * a * a / mu).sqrt();
    let q = (1.0 - e * e).sqrt();
    let csc = 1.0 / i.sin();
    let (sw, cw) = w.sin_cos();
    let ci = i.cos();

    let b1 = [
        [s3 * e, 2.0 * s3 * q, 0.0, 0.0],
        [0.5 * s * (1.0 - e * e), -1.5 * e * s * q, s * q, -0.25 * e * s * q],
    ];
    let b2 = [
        [
            -1.5 * e * cw / q,
            0.5 * (1.0 + e * e) * cw / q,
            -0.25 * e * cw / q,
            -0.5 * sw,
            0.25 * e * sw,
        ]
        .map(|v| s * v),
        [
            -1.5 * e * sw * csc / q,
            0.5 * (1.0 + e * e) * sw * csc / q,
            -0.25 * e * sw * csc / q,
            0.5 * cw * csc,
            -0.25 * e * cw * csc,
        ]
        .map(|v| s * v),
    ];
    let b3 = [
        [s * q, -s * q / (2.0 * e), 0.0],
        [-3.0 * s, s * (1.5 * e + 0.5 / e), -0.5 * e * e * s],
    ];
    let b4 = [
        [0.5 * (2.0 - e * e) / e, -0.25].map(|v| s * v),
        [-(2.0 - e * e) * q / (2.0 * e), 0.25 * q].map(|v| s * v),
    ];
    let b5_top = [
        1.5 * e * sw * csc / q,
        -0.5 * (1.0 + e * e) * sw * csc / q,
        0.25 * e * sw * csc / q,
        -0.5 * csc,
        0.25 * e * csc,
    ]
    .map(|v| ci * s * v);

    let mut m = Matrix::zeros(6, 14);
    for r in 0..2 {
        for (k, v) in b1[r].iter().enumerate() {
            m[(r, 3 + k)] = *v;
        }
        for (k, v) in b2[r].iter().enumerate() {
            m[(2 + r, 9 + k)] = *v;
        }
        for (k, v) in b3[r].iter().enumerate() {
            m[(4 + r, k)] = *v;
        }
        for (k, v) in b4[r].iter().enumerate() {
            m[(4 + r, 7 + k)] = *v;
        }
    }
    for (k, v) in b5_top.iter().enumerate() {
        m[(4, 9 + k)] = *v;
    }
    Ok(m)
}

/// The published 6×14 matrix, in units of 1e-6.
pub const PRINTED_SPACECRAFT_BBAR_E6: [[f64; 14]; 6] = [
    [0.0, 0.0, 0.0, 18314.0, 40583.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.1, -3.4, 2.3, -0.4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -5.2, 3.8, -0.9, -0.7, 0.2],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -5.5, 4.0, -0.9, 5.6, -1.9],
    [3.0, -2.7, 0.0, 0.0, 0.0, 0.0, 0.0, 4.7, -1.0, 5.2, -3.8, 1.3, -5.6, 1.9],
    [-12.3, 7.2, -0.9, 0.0, 0.0, 0.0, 0.0, -3.5, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0],
];

/// Orbit-raising case study.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacecraftExample {
    pub printed_bbar: SystemSpec,
    pub initial: OrbitalElements,
    pub target: OrbitalElements,
    /// `x_goal − x_0` as published: km, dimensionless, then degrees.
    pub target_distance_d: Vec<f64>,
}

pub fn spacecraft_example() -> SpacecraftExample {
    let rows: Vec<Vec<f64>> =
        PRINTED_SPACECRAFT_BBAR_E6.iter().map(|r| r.iter().map(|v| v * 1e-6).collect()).collect();
    SpacecraftExample {
        printed_bbar: SystemSpec::from_rows(&rows, 1.0).expect("printed matrix is valid"),
        initial: OrbitalElements::from_degrees(6678.0, 0.67, 20.0, 20.0, 20.0, 20.0),
        target: OrbitalElements::from_degrees(7345.0, 0.737, 22.0, 22.0, 22.0, 20.0),
        target_distance_d: vec![667.0, 0.067, 2.0, 2.0, 2.0, 2.0],
    }
}

/// Control matrix rebuilt from the block formulas at the initial orbit.
pub fn spacecraft_reconstructed() -> Result<SystemSpec> {
    let ex = spacecraft_example();
    SystemSpec::new(spacecraft_bbar(&ex.initial, GravParameter::EARTH)?, 1.0)
}

/// Least-squares scale `s` minimizing `Σ (s·recon_ij / printed_ij − 1)²`
/// over the nonzero printed entries.
pub fn fit_global_scale(printed: &Matrix, recon: &Matrix) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (p, r) in printed.as_slice().iter().zip(recon.as_slice()) {
        if *p != 0.0 {
            let ratio = r / p;
            num += ratio;
            den += ratio * ratio;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        1.0
    }
}

/// Two agents, five channels.
pub fn opinion_example() -> SystemSpec {
    SystemSpec::from_rows(&[[0.8, -0.9, 0.5, -0.5, 0.0], [0.9, -0.8, -0.4, 0.4, 0.1]], 1.0)
        .expect("opinion matrix is valid")
}

/// Consensus and polarization targets.
pub const OPINION_CONSENSUS: [f64; 2] = [1.0, 1.0];
pub const OPINION_POLARIZATION: [f64; 2] = [-1.0, 1.0];
