//! Stokes/Mueller and Jones descriptions of polarized light.
//!
//! Stokes vectors are `(S0, S1, S2, S3)` with `S3 = A² − B²`,
//! `S1 + iS2 = 2AB e^{iΔ}` for a wave with amplitudes `A, B` and phase
//! difference `Δ`. A Jones spinor `ψ` corresponds to the density matrix
//!
//! ```text
//! ψ ψ† = ½ [ S0 + S3    S1 − iS2 ]
//!          [ S1 + iS2   S0 − S3  ]
//! ```
//!
//! so `ψ ↦ Uψ` rotates the Stokes vector by [`su2_to_so3`]`(U)`.

use std::ops::Add;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::factorize::{factor, FactorizationPattern, FactorizationResult};
use crate::group_maps::{so3_to_su2, su2_to_so3, Matrix4, Rotation3};
use crate::quat::UnitQuaternion;

/// Relative tolerance for treating a Stokes vector as fully polarized.
pub const POLARIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    s: [f64; 4],
}

impl StokesVector {
    pub const ZERO: StokesVector = StokesVector { s: [0.0; 4] };

    /// Requires finite components and `S0 ≥ |S|` up to a relative `1e-9`.
    pub fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Result<Self> {
        let s = [s0, s1, s2, s3];
        if s.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!(
                "Stokes components must be finite, got {s:?}"
            )));
        }
        if s0 < 0.0 {
            return Err(invalid(format!("intensity S0 = {s0} is negative")));
        }
        let v = Self { s };
        if v.polarized_intensity() > s0 * (1.0 + POLARIZATION_TOLERANCE) {
            return Err(invalid(format!(
                "|S| = {} exceeds the intensity S0 = {s0}",
                v.polarized_intensity()
            )));
        }
        Ok(v)
    }

    pub fn from_array(s: [f64; 4]) -> Result<Self> {
        Self::new(s[0], s[1], s[2], s[3])
    }

    pub fn components(&self) -> [f64; 4] {
        self.s
    }

    pub fn intensity(&self) -> f64 {
        self.s[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.s[1], self.s[2], self.s[3]]
    }

    /// `|S| = √(S1² + S2² + S3²)`.
    pub fn polarized_intensity(&self) -> f64 {
        let [_, s1, s2, s3] = self.s;
        (s1 * s1 + s2 * s2 + s3 * s3).sqrt()
    }

    /// `p = |S| / S0`, clamped to 1 when rounding pushes it slightly above.
    pub fn degree_of_polarization(&self) -> Result<f64> {
        if self.s[0] <= 0.0 {
            return Err(invalid("degree of polarization needs S0 > 0"));
        }
        Ok((self.polarized_intensity() / self.s[0]).min(1.0))
    }

    /// Incoherent superposition of two beams.
    pub fn add_incoherent(&self, other: &Self) -> Self {
        Self {
            s: std::array::from_fn(|i| self.s[i] + other.s[i]),
        }
    }

    pub fn is_fully_polarized(&self) -> bool {
        self.s[0] > 0.0
            && (self.polarized_intensity() - self.s[0]).abs() <= POLARIZATION_TOLERANCE * self.s[0]
    }

    /// Largest componentwise difference relative to `max(S0, other.S0, 1)`.
    pub fn relative_diff(&self, other: &Self) -> f64 {
        let scale = self.s[0].max(other.s[0]).max(1.0);
        self.s
            .iter()
            .zip(other.s.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / scale
    }
}

impl Add for StokesVector {
    type Output = StokesVector;

    fn add(self, rhs: Self) -> Self {
        self.add_incoherent(&rhs)
    }
}

/// Stokes vector of a steady wave `(A e^{iα}, B e^{iβ})` with `Δ = β − α`.
pub fn stokes_from_wave(a: f64, b: f64, delta: f64) -> Result<StokesVector> {
    if !(a.is_finite() && b.is_finite() && delta.is_finite()) {
        return Err(invalid("wave parameters must be finite"));
    }
    if a < 0.0 || b < 0.0 {
        return Err(invalid(format!(
            "amplitudes must be non-negative, got A = {a}, B = {b}"
        )));
    }
    let (sin_d, cos_d) = delta.sin_cos();
    Ok(StokesVector {
        s: [
            a * a + b * b,
            2.0 * a * b * cos_d,
            2.0 * a * b * sin_d,
            a * a - b * b,
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesSpinor {
    psi: [Complex64; 2],
}

impl JonesSpinor {
    pub fn new(psi1: Complex64, psi2: Complex64) -> Result<Self> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !(finite(psi1) && finite(psi2)) {
            return Err(invalid("Jones components must be finite"));
        }
        Ok(Self { psi: [psi1, psi2] })
    }

    /// `(A e^{iα}, B e^{iβ})`.
    pub fn from_polar(a: f64, alpha: f64, b: f64, beta: f64) -> Result<Self> {
        Self::new(
            Complex64::from_polar(a, alpha),
            Complex64::from_polar(b, beta),
        )
    }

    pub fn psi1(&self) -> Complex64 {
        self.psi[0]
    }

    pub fn psi2(&self) -> Complex64 {
        self.psi[1]
    }

    pub fn components(&self) -> [Complex64; 2] {
        self.psi
    }

    pub fn intensity(&self) -> f64 {
        self.psi[0].norm_sqr() + self.psi[1].norm_sqr()
    }

    /// `ψ ↦ Uψ`.
    pub fn transformed(&self, u: &UnitQuaternion) -> Self {
        let m = u.matrix();
        Self {
            psi: [
                m[0][0] * self.psi[0] + m[0][1] * self.psi[1],
                m[1][0] * self.psi[0] + m[1][1] * self.psi[1],
            ],
        }
    }

    /// Multiplies both components by `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        let w = Complex64::from_polar(1.0, phi);
        Self {
            psi: [w * self.psi[0], w * self.psi[1]],
        }
    }
}

pub fn jones_to_stokes(psi: &JonesSpinor) -> StokesVector {
    let [p1, p2] = psi.psi;
    let (i1, i2) = (p1.norm_sqr(), p2.norm_sqr());
    let cross = 2.0 * p2 * p1.conj();
    StokesVector {
        s: [i1 + i2, cross.re, cross.im, i1 - i2],
    }
}

/// Jones spinor of a fully polarized state, with global phase `e^{iγ/2}`.
pub fn stokes_to_jones(s: &StokesVector, gamma: f64) -> Result<JonesSpinor> {
    if !gamma.is_finite() {
        return Err(invalid("gamma must be finite"));
    }
    let [s0, s1, s2, s3] = s.s;
    let p = s.degree_of_polarization()?;
    if p < 1.0 - POLARIZATION_TOLERANCE {
        return Err(Error::Domain(format!(
            "degree of polarization {p} < 1: a partially polarized state has no Jones spinor"
        )));
    }
    let a = (0.5 * (s0 + s3)).max(0.0).sqrt();
    let b = (0.5 * (s0 - s3)).max(0.0).sqrt();
    let delta = if s1 == 0.0 && s2 == 0.0 {
        0.0
    } else {
        s2.atan2(s1)
    };
    JonesSpinor::from_polar(a, 0.5 * (gamma - delta), b, 0.5 * (gamma + delta))
}

/// An elementary Mueller device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuellerElement {
    /// Scales the polarized part by `e^{−λ}`, `λ ≥ 0`.
    PolAttenuator { lambda: f64 },
    /// Scales the whole vector by `e^{σ}`.
    IntAttenuator { sigma: f64 },
    /// Rotates the polarized part.
    Rotator(Rotation3),
}

impl MuellerElement {
    pub fn pol_attenuator(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(invalid(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self::PolAttenuator { lambda })
    }

    pub fn int_attenuator(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(invalid(format!("sigma must be finite, got {sigma}")));
        }
        Ok(Self::IntAttenuator { sigma })
    }

    pub fn rotator(r: Rotation3) -> Self {
        Self::Rotator(r)
    }

    pub fn to_matrix(&self) -> Matrix4 {
        let mut m = [[0.0; 4]; 4];
        match self {
            Self::PolAttenuator { lambda } => {
                let k = (-lambda).exp();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = if i == 0 { 1.0 } else { k };
                }
            }
            Self::IntAttenuator { sigma } => {
                let k = sigma.exp();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = k;
                }
            }
            Self::Rotator(r) => {
                let rm = r.matrix();
                m[0][0] = 1.0;
                for i in 0..3 {
                    m[i + 1][1..4].copy_from_slice(&rm[i]);
                }
            }
        }
        m
    }

    pub fn apply(&self, s: &StokesVector) -> StokesVector {
        let [s0, s1, s2, s3] = s.s;
        let out = match self {
            Self::PolAttenuator { lambda } => {
                let k = (-lambda).exp();
                [s0, k * s1, k * s2, k * s3]
            }
            Self::IntAttenuator { sigma } => {
                let k = sigma.exp();
                [k * s0, k * s1, k * s2, k * s3]
            }
            Self::Rotator(r) => {
                let [x, y, z] = r.apply([s1, s2, s3]);
                [s0, x, y, z]
            }
        };
        StokesVector { s: out }
    }
}

/// Three single-axis rotators whose product, left to right, is the input rotation.
///
/// Light traverses the elements right to left: `elements[2]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatorTrain {
    pub factorization: FactorizationResult,
    pub elements: [MuellerElement; 3],
}

impl RotatorTrain {
    /// Product of the element rotations in stored order.
    pub fn rotation(&self) -> Rotation3 {
        self.elements
            .iter()
            .map(|e| match e {
                MuellerElement::Rotator(r) => *r,
                _ => unreachable!("a rotator train holds only rotators"),
            })
            .fold(Rotation3::IDENTITY, |acc, r| acc * r)
    }

    pub fn apply(&self, s: &StokesVector) -> StokesVector {
        self.elements.iter().rev().fold(*s, |acc, e| e.apply(&acc))
    }
}

/// Splits a Stokes-space rotation into rotations about coordinate axes
/// following `pattern`. The factor angles are those of the SU(2) lift, so an
/// angle `θ` about axis `k` is the Stokes rotation [`su2_to_so3`] of `U_k(θ)`.
pub fn decompose_rotator(r: &Rotation3, pattern: FactorizationPattern) -> Result<RotatorTrain> {
    let u = so3_to_su2(r)?;
    let factorization = factor(&u, pattern);
    let elements = factorization
        .factors()
        .map(|f| MuellerElement::Rotator(su2_to_so3(&f.to_quaternion())));
    Ok(RotatorTrain {
        factorization,
        elements,
    })
}
