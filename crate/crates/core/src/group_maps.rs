//! Vector representations of SU(2) and SL(2,C).
//!
//! `su2_to_so3` is the adjoint action: for `U = n0 + i n·σ` it returns the
//! rotation `R` with `U (x·σ) U† = (R x)·σ`. It is a group homomorphism for
//! the product in [`crate::quat`], and equals the transpose of the frequently
//! quoted matrix whose first row is `1 − 2(n2² + n3²), 2(n1n2 − n0n3), 2(n1n3 + n0n2)`.
//! That matrix is the image of `U† = n0 − i n·σ`, see [`su2_block`].

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quat::{Axis, UnitQuaternion};

/// Orthogonality and determinant tolerance for [`Rotation3`] and [`Lorentz4`].
pub const GROUP_TOLERANCE: f64 = 1e-9;

pub type Matrix3 = [[f64; 3]; 3];
pub type Matrix4 = [[f64; 4]; 4];

fn mat3_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

fn mat3_transpose(a: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

fn det3(a: &Matrix3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// A proper rotation of R³, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: Matrix3,
}

impl Rotation3 {
    pub const IDENTITY: Rotation3 = Rotation3 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Checks `RᵀR = I` and `det R = +1` within [`GROUP_TOLERANCE`].
    pub fn new(m: Matrix3) -> Result<Self> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("rotation matrix has non-finite entries"));
        }
        let rtr = mat3_mul(&mat3_transpose(&m), &m);
        let off = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (rtr[i][j] - if i == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        if off > GROUP_TOLERANCE {
            return Err(invalid(format!(
                "matrix is not orthogonal (max |RᵀR − I| = {off:.3e})"
            )));
        }
        let det = det3(&m);
        if (det - 1.0).abs() > GROUP_TOLERANCE {
            return Err(invalid(format!(
                "rotation determinant is {det}, expected +1"
            )));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix3) -> Self {
        Self { m }
    }

    /// Counter-clockwise rotation by `angle` about a coordinate axis.
    pub fn about_axis(axis: Axis, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let m = match axis {
            Axis::X => [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]],
            Axis::Y => [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]],
            Axis::Z => [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        };
        Self { m }
    }

    pub fn matrix(&self) -> Matrix3 {
        self.m
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: mat3_transpose(&self.m),
        }
    }

    pub fn determinant(&self) -> f64 {
        det3(&self.m)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|k| self.m[i][k] * v[k]).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let t = self.m[0][0] + self.m[1][1] + self.m[2][2];
        (0.5 * (t - 1.0)).clamp(-1.0, 1.0).acos().min(PI)
    }
}

impl Mul for Rotation3 {
    type Output = Rotation3;

    fn mul(self, rhs: Self) -> Self {
        Self {
            m: mat3_mul(&self.m, &rhs.m),
        }
    }
}

/// The 3×3 matrix `B(n)` with entries quadratic in `n`:
///
/// ```text
/// 1 − 2(n2² + n3²)    2(n1n2 − n0n3)     2(n1n3 + n0n2)
/// 2(n1n2 + n0n3)      1 − 2(n1² + n3²)   2(n2n3 − n0n1)
/// 2(n1n3 − n0n2)      2(n2n3 + n0n1)     1 − 2(n1² + n2²)
/// ```
///
/// This is the rotation induced by `n0 − i n·σ`, i.e. by the conjugate of `u`.
pub fn su2_block(u: &UnitQuaternion) -> Matrix3 {
    let [n0, n1, n2, n3] = u.components();
    [
        [
            1.0 - 2.0 * (n2 * n2 + n3 * n3),
            2.0 * (n1 * n2 - n0 * n3),
            2.0 * (n1 * n3 + n0 * n2),
        ],
        [
            2.0 * (n1 * n2 + n0 * n3),
            1.0 - 2.0 * (n1 * n1 + n3 * n3),
            2.0 * (n2 * n3 - n0 * n1),
        ],
        [
            2.0 * (n1 * n3 - n0 * n2),
            2.0 * (n2 * n3 + n0 * n1),
            1.0 - 2.0 * (n1 * n1 + n2 * n2),
        ],
    ]
}

/// Double-cover map: the rotation `R` with `U (x·σ) U† = (R x)·σ`.
pub fn su2_to_so3(u: &UnitQuaternion) -> Rotation3 {
    Rotation3::from_matrix_unchecked(mat3_transpose(&su2_block(u)))
}

/// Canonical lift of a rotation back to SU(2).
///
/// Uses the largest of the four quadratic forms `1 ± R00 ± R11 ± R22` as the
/// pivot so that no square root is taken of a nearly cancelled quantity.
pub fn so3_to_su2(r: &Rotation3) -> Result<UnitQuaternion> {
    let r = Rotation3::new(r.m)?;
    // work with B = Rᵀ, whose entries are the quadratic forms above
    let b = mat3_transpose(&r.m);
    let forms = [
        1.0 + b[0][0] + b[1][1] + b[2][2],
        1.0 + b[0][0] - b[1][1] - b[2][2],
        1.0 - b[0][0] + b[1][1] - b[2][2],
        1.0 - b[0][0] - b[1][1] + b[2][2],
    ];
    let pivot = (0..4)
        .max_by(|&i, &j| forms[i].total_cmp(&forms[j]))
        .unwrap_or(0);
    let s = 0.5 * forms[pivot].max(0.0).sqrt();
    let d = 0.25 / s;
    let n = match pivot {
        0 => [
            s,
            (b[2][1] - b[1][2]) * d,
            (b[0][2] - b[2][0]) * d,
            (b[1][0] - b[0][1]) * d,
        ],
        1 => [
            (b[2][1] - b[1][2]) * d,
            s,
            (b[0][1] + b[1][0]) * d,
            (b[0][2] + b[2][0]) * d,
        ],
        2 => [
            (b[0][2] - b[2][0]) * d,
            (b[0][1] + b[1][0]) * d,
            s,
            (b[1][2] + b[2][1]) * d,
        ],
        _ => [
            (b[1][0] - b[0][1]) * d,
            (b[0][2] + b[2][0]) * d,
            (b[1][2] + b[2][1]) * d,
            s,
        ],
    };
    Ok(UnitQuaternion::normalized(n[0], n[1], n[2], n[3])?.canonicalize())
}

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// A Lorentz transformation `L_b^a` preserving `diag(+, −, −, −)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentz4 {
    m: Matrix4,
}

impl Lorentz4 {
    pub const IDENTITY: Lorentz4 = Lorentz4 {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub fn new(m: Matrix4) -> Result<Self> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("Lorentz matrix has non-finite entries"));
        }
        let l = Self { m };
        let err = l.metric_error();
        if err > GROUP_TOLERANCE * l.scale() {
            return Err(invalid(format!(
                "matrix does not preserve the Minkowski form (error {err:.3e})"
            )));
        }
        Ok(l)
    }

    pub fn matrix(&self) -> Matrix4 {
        self.m
    }

    /// `max |Lᵀ g L − g|`.
    pub fn metric_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, gi) in METRIC.iter().enumerate() {
            for j in 0..4 {
                let v: f64 = (0..4)
                    .map(|k| self.m[k][i] * METRIC[k] * self.m[k][j])
                    .sum();
                let g = if i == j { *gi } else { 0.0 };
                worst = worst.max((v - g).abs());
            }
        }
        worst
    }

    // Large boosts lose absolute precision; scale the tolerance with L⁰₀².
    fn scale(&self) -> f64 {
        self.m[0][0].abs().max(1.0).powi(2)
    }

    /// The lower-right 3×3 block.
    pub fn spatial_block(&self) -> Matrix3 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.m[i + 1][j + 1]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for Lorentz4 {
    type Output = Lorentz4;

    fn mul(self, rhs: Self) -> Self {
        Self {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum())
            }),
        }
    }
}

/// Parameters of `B(k) = k0 + k_j σ_j ∈ SL(2,C)`, constrained by `det B = k0² − k·k = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexKVector {
    k: [Complex64; 4],
}

impl ComplexKVector {
    pub fn new(k: [Complex64; 4]) -> Result<Self> {
        if k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("k-vector has non-finite components"));
        }
        let det = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
        let err = (det - 1.0).norm();
        if err >= GROUP_TOLERANCE {
            return Err(invalid(format!(
                "k0² − k² = {} + {}i, expected 1",
                det.re, det.im
            )));
        }
        Ok(Self { k })
    }

    /// `B(k) = u`, i.e. `k = (n0, i n1, i n2, i n3)`.
    pub fn from_su2(u: &UnitQuaternion) -> Self {
        let [n0, n1, n2, n3] = u.components();
        Self {
            k: [
                Complex64::new(n0, 0.0),
                Complex64::new(0.0, n1),
                Complex64::new(0.0, n2),
                Complex64::new(0.0, n3),
            ],
        }
    }

    /// `B(k) = u†`, i.e. `k = (n0, −i n1, −i n2, −i n3)`. Its Lorentz image
    /// has [`su2_block`] of `u` as spatial part.
    pub fn from_su2_conjugate(u: &UnitQuaternion) -> Self {
        Self::from_su2(&u.conjugate())
    }

    pub fn components(&self) -> [Complex64; 4] {
        self.k
    }

    /// The 2×2 matrix `B(k)`.
    pub fn spinor_matrix(&self) -> [[Complex64; 2]; 2] {
        let [k0, k1, k2, k3] = self.k;
        let i = Complex64::i();
        [[k0 + k3, k1 - i * k2], [k1 + i * k2, k0 - k3]]
    }
}

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)`, zero on repeats.
fn epsilon4(idx: [usize; 4]) -> f64 {
    let mut v = idx;
    let mut sign = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if v[i] == v[j] {
                return 0.0;
            }
        }
    }
    for i in 0..4 {
        while v[i] != i {
            let t = v[i];
            v.swap(i, t);
            sign = -sign;
        }
    }
    sign
}

/// The vector representation of `B(k)`:
///
/// `L_b^a = δ̄_b^c [−δ_c^a k^n k*_n + k_c k^a* + k*_c k^a + i ε_c^{anm} k_n k*_m]`
///
/// with `δ̄ = diag(+, −, −, −)`, indices moved by `g = diag(+, −, −, −)` and
/// `ε^{0123} = +1`. The imaginary parts cancel. The result is returned as the
/// action on contravariant vectors, `x'^b = L^b_a x^a`, which is the bracket
/// above with both indices moved by `g`: `B (x^a σ_a) B† = (L x)^b σ_b`.
pub fn sl2c_to_lorentz(k: &ComplexKVector) -> Lorentz4 {
    let lower = k.k;
    let upper: [Complex64; 4] = std::array::from_fn(|a| lower[a] * METRIC[a]);
    let kk: Complex64 = (0..4).map(|n| upper[n] * lower[n].conj()).sum();
    let i = Complex64::i();
    let mut m = [[0.0; 4]; 4];
    for (b, row) in m.iter_mut().enumerate() {
        let c = b;
        for (a, entry) in row.iter_mut().enumerate() {
            let mut v = lower[c] * upper[a].conj() + lower[c].conj() * upper[a];
            if a == c {
                v -= kk;
            }
            let mut eps = Complex64::new(0.0, 0.0);
            for n in 0..4 {
                for mm in 0..4 {
                    // ε_c^{anm} = −ε_{canm} g^{aa} g^{nn} g^{mm} when ε^{0123} = +1
                    let e = -epsilon4([c, a, n, mm]) * METRIC[a] * METRIC[n] * METRIC[mm];
                    if e != 0.0 {
                        eps += lower[n] * lower[mm].conj() * e;
                    }
                }
            }
            v += i * eps;
            // δ̄ on the row, then g on both indices for the contravariant action
            *entry = METRIC[b] * v.re * METRIC[b] * METRIC[a];
        }
    }
    Lorentz4 { m }
}
