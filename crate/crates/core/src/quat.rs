//! Unit quaternions as elements of SU(2).
//!
//! A [`UnitQuaternion`] with components `(n0, n1, n2, n3)` stands for the 2×2
//! unitary matrix `n0 + i n1 σ1 + i n2 σ2 + i n3 σ3`. Multiplication follows
//! the Pauli algebra (`σ1 σ2 = i σ3` and cyclic), so
//!
//! ```text
//! (a0 + i a·σ)(b0 + i b·σ) = (a0 b0 − a·b) + i (a0 b + b0 a − a × b)·σ
//! ```
//!
//! Note the minus sign on the cross product: this is the opposite handedness
//! from the Hamilton product most quaternion libraries use. Components are
//! always stored scalar-first.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

/// Largest deviation of `|n|` from one accepted by [`UnitQuaternion::new`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// One of the three Pauli / Stokes coordinate axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// 1-based axis number (1, 2 or 3), matching the component index in `n`.
    pub fn number(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn from_number(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            _ => Err(invalid(format!("axis must be 1, 2 or 3, got {k}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Maps an angle onto the half-open interval (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// A unit-norm element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    n: [f64; 4],
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self {
        n: [1.0, 0.0, 0.0, 0.0],
    };

    /// Builds a quaternion from components that are already unit norm
    /// (within [`NORM_TOLERANCE`]); the result is renormalized exactly.
    pub fn new(n0: f64, n1: f64, n2: f64, n3: f64) -> Result<Self> {
        let n = [n0, n1, n2, n3];
        check_finite(&n)?;
        let norm = norm4(&n);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(invalid(format!(
                "quaternion norm {norm} differs from 1 by more than {NORM_TOLERANCE:e}"
            )));
        }
        Ok(Self::scaled(n, norm))
    }

    /// Normalizes an arbitrary non-zero finite 4-vector onto the unit sphere.
    pub fn normalized(n0: f64, n1: f64, n2: f64, n3: f64) -> Result<Self> {
        let n = [n0, n1, n2, n3];
        check_finite(&n)?;
        let norm = norm4(&n);
        if norm < f64::MIN_POSITIVE.sqrt() {
            return Err(invalid("cannot normalize a zero quaternion"));
        }
        Ok(Self::scaled(n, norm))
    }

    pub fn from_array(n: [f64; 4]) -> Result<Self> {
        Self::new(n[0], n[1], n[2], n[3])
    }

    /// `cos(angle/2) + i sin(angle/2) σ_axis`.
    pub fn elementary(axis: Axis, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(invalid(format!(
                "elementary angle must be finite, got {angle}"
            )));
        }
        Ok(Self::elementary_unchecked(axis, angle))
    }

    pub(crate) fn elementary_unchecked(axis: Axis, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        let mut n = [c, 0.0, 0.0, 0.0];
        n[axis.number()] = s;
        Self { n }
    }

    fn scaled(n: [f64; 4], norm: f64) -> Self {
        Self {
            n: [n[0] / norm, n[1] / norm, n[2] / norm, n[3] / norm],
        }
    }

    pub fn components(&self) -> [f64; 4] {
        self.n
    }

    pub fn n0(&self) -> f64 {
        self.n[0]
    }
    pub fn n1(&self) -> f64 {
        self.n[1]
    }
    pub fn n2(&self) -> f64 {
        self.n[2]
    }
    pub fn n3(&self) -> f64 {
        self.n[3]
    }

    pub fn norm(&self) -> f64 {
        norm4(&self.n)
    }

    /// SU(2) product `self · other`, renormalized to remove rounding drift.
    pub fn multiply(&self, other: &Self) -> Self {
        let [a0, a1, a2, a3] = self.n;
        let [b0, b1, b2, b3] = other.n;
        let p = [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + b0 * a1 - (a2 * b3 - a3 * b2),
            a0 * b2 + b0 * a2 - (a3 * b1 - a1 * b3),
            a0 * b3 + b0 * a3 - (a1 * b2 - a2 * b1),
        ];
        Self::scaled(p, norm4(&p))
    }

    /// Hermitian conjugate, which is also the group inverse.
    pub fn conjugate(&self) -> Self {
        Self {
            n: [self.n[0], -self.n[1], -self.n[2], -self.n[3]],
        }
    }

    /// Picks the representative of `±self` whose first non-zero component is positive.
    pub fn canonicalize(&self) -> Self {
        match self.n.iter().find(|c| **c != 0.0) {
            Some(c) if *c < 0.0 => -*self,
            _ => *self,
        }
    }

    /// The 2×2 unitary `n0 + i(n1σ1 + n2σ2 + n3σ3)`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [n0, n1, n2, n3] = self.n;
        [
            [Complex64::new(n0, n3), Complex64::new(n2, n1)],
            [Complex64::new(-n2, n1), Complex64::new(n0, -n3)],
        ]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.n.iter().zip(other.n.iter()).map(|(a, b)| a * b).sum()
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.n
            .iter()
            .zip(other.n.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Componentwise distance to the nearer of `other` and `−other`.
    pub fn max_abs_diff_up_to_sign(&self, other: &Self) -> f64 {
        self.max_abs_diff(other).min(self.max_abs_diff(&-*other))
    }

    /// Deterministic uniform sample on the 3-sphere for a given seed.
    pub fn sample_random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random(&mut rng)
    }

    /// Uniform sample on the 3-sphere: four independent standard normals, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let n: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let norm = norm4(&n);
            if norm > 1e-6 {
                return Self::scaled(n, norm);
            }
        }
    }
}

impl Default for UnitQuaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: Self) -> Self::Output {
        self.multiply(&rhs)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> Self::Output {
        Self {
            n: self.n.map(|c| -c),
        }
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.n;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// A single axis rotation `cos(angle/2) + i sin(angle/2) σ_axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryFactor {
    pub axis: Axis,
    pub angle: f64,
}

impl ElementaryFactor {
    /// The angle is reduced to (−π, π]. Reduction by 2π flips the sign of the
    /// SU(2) element, so `to_quaternion` may differ from the unreduced factor by −1.
    pub fn new(axis: Axis, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(invalid(format!(
                "elementary angle must be finite, got {angle}"
            )));
        }
        Ok(Self {
            axis,
            angle: normalize_angle(angle),
        })
    }

    pub fn to_quaternion(&self) -> UnitQuaternion {
        UnitQuaternion::elementary_unchecked(self.axis, self.angle)
    }
}

fn norm4(n: &[f64; 4]) -> f64 {
    n.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn check_finite(n: &[f64; 4]) -> Result<()> {
    if n.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(invalid(format!(
            "quaternion components must be finite, got {n:?}"
        )))
    }
}
