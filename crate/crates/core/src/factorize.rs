//! Two- and three-element axis factorizations of SU(2) elements.
//!
//! Every unit quaternion `U` can be written as a product of three elementary
//! rotations `U = U_i(a) U_j(b) U_k(c)` for each of twelve axis orders:
//!
//! * six *two-element* (Euler-type) orders with a repeated outer axis,
//!   `121 212 131 313 232 323`;
//! * six *three-element* orders over distinct axes,
//!   `123 132 231 213 312 321`.
//!
//! Only two kernels are implemented: one for `121` and one for `123`. Every
//! other order is reduced to one of them by relabelling and re-signing the
//! components of `n` (a [`Substitution`]). The tables are checked against
//! the group product itself by [`crate::audit`].
//!
//! Branch conventions: for two-element orders the middle angle lies in
//! `[0, π]`, for three-element orders in `[−π/2, π/2]`. Outer angles lie in
//! `(−π, π]`. The returned angles reproduce the input up to an overall sign,
//! recorded in [`FactorizationResult::sign`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::quat::{normalize_angle, Axis, ElementaryFactor, UnitQuaternion};

/// Below this value of the outer-angle denominator the factorization is
/// treated as gimbal-locked.
pub const DEGENERACY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    TwoElement,
    ThreeElement,
}

/// An axis order for a three-factor product, e.g. `121` or `312`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorizationPattern {
    axes: [Axis; 3],
}

const fn pat(a: Axis, b: Axis, c: Axis) -> FactorizationPattern {
    FactorizationPattern { axes: [a, b, c] }
}

impl FactorizationPattern {
    /// All twelve valid orders, two-element first.
    pub const ALL: [FactorizationPattern; 12] = [
        pat(Axis::X, Axis::Y, Axis::X),
        pat(Axis::Y, Axis::X, Axis::Y),
        pat(Axis::X, Axis::Z, Axis::X),
        pat(Axis::Z, Axis::X, Axis::Z),
        pat(Axis::Y, Axis::Z, Axis::Y),
        pat(Axis::Z, Axis::Y, Axis::Z),
        pat(Axis::X, Axis::Y, Axis::Z),
        pat(Axis::X, Axis::Z, Axis::Y),
        pat(Axis::Y, Axis::Z, Axis::X),
        pat(Axis::Y, Axis::X, Axis::Z),
        pat(Axis::Z, Axis::X, Axis::Y),
        pat(Axis::Z, Axis::Y, Axis::X),
    ];

    pub fn new(axes: [Axis; 3]) -> Result<Self> {
        let [a, b, c] = axes;
        let two = a == c && a != b;
        let three = a != b && b != c && a != c;
        if two || three {
            Ok(Self { axes })
        } else {
            Err(invalid(format!(
                "axis order {a}{b}{c} is neither a two-element nor a three-element pattern"
            )))
        }
    }

    pub(crate) const fn from_axes_unchecked(axes: [Axis; 3]) -> Self {
        Self { axes }
    }

    pub fn kind(&self) -> PatternKind {
        if self.axes[0] == self.axes[2] {
            PatternKind::TwoElement
        } else {
            PatternKind::ThreeElement
        }
    }

    pub fn axes(&self) -> [Axis; 3] {
        self.axes
    }

    /// Three-digit code such as `"213"`.
    pub fn code(&self) -> String {
        self.axes.iter().map(|a| a.to_string()).collect()
    }

    /// The relabelling that maps this order onto its kernel order (`121` or `123`).
    pub fn substitution(&self) -> Substitution {
        let table = match self.kind() {
            PatternKind::TwoElement => &TWO_ELEMENT_TABLE,
            PatternKind::ThreeElement => &THREE_ELEMENT_TABLE,
        };
        table
            .iter()
            .find(|(p, _)| p == self)
            .map(|(_, s)| *s)
            .expect("every valid pattern has a table row")
    }
}

const fn sub(slots: [SignedComponent; 3], negate_first_angle: bool) -> Substitution {
    Substitution {
        slots,
        negate_first_angle,
    }
}

use SignedComponent as C;

/// Component relabelling onto the `121` kernel: `(n0, n_i, n_j, ε_ijk n_k)`.
pub const TWO_ELEMENT_TABLE: [(FactorizationPattern, Substitution); 6] = [
    (
        pat(Axis::Y, Axis::Z, Axis::Y),
        sub([C::plus(2), C::plus(3), C::plus(1)], false),
    ),
    (
        pat(Axis::Z, Axis::Y, Axis::Z),
        sub([C::plus(3), C::plus(2), C::minus(1)], false),
    ),
    (
        pat(Axis::Z, Axis::X, Axis::Z),
        sub([C::plus(3), C::plus(1), C::plus(2)], false),
    ),
    (
        pat(Axis::X, Axis::Z, Axis::X),
        sub([C::plus(1), C::plus(3), C::minus(2)], false),
    ),
    (
        pat(Axis::X, Axis::Y, Axis::X),
        sub([C::plus(1), C::plus(2), C::plus(3)], false),
    ),
    (
        pat(Axis::Y, Axis::X, Axis::Y),
        sub([C::plus(2), C::plus(1), C::minus(3)], false),
    ),
];

/// Component relabelling onto the `123` kernel. Odd axis orders also flip
/// `n_i` and the sign of the first angle.
pub const THREE_ELEMENT_TABLE: [(FactorizationPattern, Substitution); 6] = [
    (
        pat(Axis::X, Axis::Y, Axis::Z),
        sub([C::plus(1), C::plus(2), C::plus(3)], false),
    ),
    (
        pat(Axis::X, Axis::Z, Axis::Y),
        sub([C::minus(1), C::plus(3), C::plus(2)], true),
    ),
    (
        pat(Axis::Y, Axis::Z, Axis::X),
        sub([C::plus(2), C::plus(3), C::plus(1)], false),
    ),
    (
        pat(Axis::Y, Axis::X, Axis::Z),
        sub([C::minus(2), C::plus(1), C::plus(3)], true),
    ),
    (
        pat(Axis::Z, Axis::X, Axis::Y),
        sub([C::plus(3), C::plus(1), C::plus(2)], false),
    ),
    (
        pat(Axis::Z, Axis::Y, Axis::X),
        sub([C::minus(3), C::plus(2), C::plus(1)], true),
    ),
];

impl fmt::Display for FactorizationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl FromStr for FactorizationPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .trim()
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| invalid(format!("pattern {s:?} must consist of digits 1-3")))?;
        if digits.len() != 3 {
            return Err(invalid(format!(
                "pattern {s:?} must have exactly three axes"
            )));
        }
        let axes = [
            Axis::from_number(digits[0])?,
            Axis::from_number(digits[1])?,
            Axis::from_number(digits[2])?,
        ];
        Self::new(axes)
    }
}

/// `±n_index` for one slot of a substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedComponent {
    pub index: usize,
    pub negated: bool,
}

impl SignedComponent {
    pub const fn plus(index: usize) -> Self {
        Self {
            index,
            negated: false,
        }
    }

    pub const fn minus(index: usize) -> Self {
        Self {
            index,
            negated: true,
        }
    }

    fn pick(&self, n: &[f64; 4]) -> f64 {
        if self.negated {
            -n[self.index]
        } else {
            n[self.index]
        }
    }
}

/// Replaces `(n0, n1, n2, n3)` by `(n0, ±n_p, ±n_q, ±n_r)` before running a
/// kernel, optionally negating the first angle the kernel returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Substitution {
    pub slots: [SignedComponent; 3],
    pub negate_first_angle: bool,
}

impl Substitution {
    pub fn apply(&self, n: [f64; 4]) -> [f64; 4] {
        [
            n[0],
            self.slots[0].pick(&n),
            self.slots[1].pick(&n),
            self.slots[2].pick(&n),
        ]
    }

    /// A slot list that repeats a component cannot describe a relabelling.
    pub fn is_permutation(&self) -> bool {
        let mut seen = [false; 4];
        self.slots.iter().all(|s| {
            let fresh = (1..=3).contains(&s.index) && !seen[s.index];
            if fresh {
                seen[s.index] = true;
            }
            fresh
        })
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n0")?;
        for s in &self.slots {
            write!(f, ", {}n{}", if s.negated { "-" } else { "" }, s.index)?;
        }
        write!(f, ")")?;
        if self.negate_first_angle {
            write!(f, " with first angle negated")?;
        }
        Ok(())
    }
}

/// Angles of one factorization, in product order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationResult {
    pub pattern: FactorizationPattern,
    /// `[first, middle, last]` in radians.
    pub angles: [f64; 3],
    /// Set when the outer angles are not separately determined (gimbal lock);
    /// the last angle is then fixed at zero.
    pub degenerate: bool,
    /// `+1` or `−1`: the recomposed product equals `sign · u`.
    pub sign: i8,
}

impl FactorizationResult {
    pub fn first(&self) -> f64 {
        self.angles[0]
    }
    pub fn middle(&self) -> f64 {
        self.angles[1]
    }
    pub fn last(&self) -> f64 {
        self.angles[2]
    }

    pub fn factors(&self) -> [ElementaryFactor; 3] {
        let axes = self.pattern.axes();
        std::array::from_fn(|i| ElementaryFactor {
            axis: axes[i],
            angle: self.angles[i],
        })
    }
}

struct KernelOutput {
    angles: [f64; 3],
    degenerate: bool,
}

/// `U = U1(a) U2(b) U1(a')` for components already mapped onto the 121 order.
fn euler_kernel(m: [f64; 4]) -> KernelOutput {
    let [n0, n1, n2, n3] = m;
    let r01 = n0.hypot(n1);
    let r23 = n2.hypot(n3);
    let denom = r01 * r23;
    let middle = (2.0 * denom).atan2(n0 * n0 + n1 * n1 - n2 * n2 - n3 * n3);
    if denom < DEGENERACY_EPS {
        // Only a + a' (middle ≈ 0) or a' − a (middle ≈ π) is determined.
        let first = if r01 >= r23 {
            2.0 * n1.atan2(n0)
        } else {
            -2.0 * n3.atan2(n2)
        };
        return KernelOutput {
            angles: [normalize_angle(first), middle, 0.0],
            degenerate: true,
        };
    }
    let first = (n1 * n2 - n0 * n3).atan2(n0 * n2 + n1 * n3);
    let last = (n0 * n3 + n1 * n2).atan2(n0 * n2 - n1 * n3);
    KernelOutput {
        angles: [normalize_angle(first), middle, normalize_angle(last)],
        degenerate: false,
    }
}

/// `U = U1(a) U2(b) U3(c)` for components already mapped onto the 123 order.
///
/// The (cos, sin) pairs for `a` and `c` are quadratic in `n` and factor as
/// products of `p = (n0 − n2) + i(n1 + n3)` and `q = (n0 + n2) + i(n1 ∓ n3)`,
/// so `a = arg p + arg q` and `c = arg p − arg q'`. Evaluating the arguments
/// separately avoids the cancellation in `n0² + n3² − n1² − n2²` near lock.
fn tait_bryan_kernel(m: [f64; 4]) -> KernelOutput {
    let [n0, n1, n2, n3] = m;
    let (p_re, p_im) = (n0 - n2, n1 + n3);
    let (q_re, q_im) = (n0 + n2, n1 - n3);
    let p_abs = p_re.hypot(p_im);
    let q_abs = q_re.hypot(q_im);
    let sin_b = 2.0 * (n0 * n2 - n1 * n3);
    // |p|² = 1 − sin b and |q|² = 1 + sin b
    let cos_b = p_abs * q_abs;
    let middle = sin_b.atan2(cos_b);
    if cos_b < DEGENERACY_EPS {
        // sin b = +1 fixes a − c, sin b = −1 fixes a + c.
        let first = if q_abs >= p_abs {
            2.0 * q_im.atan2(q_re)
        } else {
            2.0 * p_im.atan2(p_re)
        };
        return KernelOutput {
            angles: [normalize_angle(first), middle, 0.0],
            degenerate: true,
        };
    }
    let theta = p_im.atan2(p_re);
    let phi = q_im.atan2(q_re);
    KernelOutput {
        angles: [
            normalize_angle(theta + phi),
            middle,
            normalize_angle(theta - phi),
        ],
        degenerate: false,
    }
}

/// Factorizes `u` for `pattern` using an explicit substitution instead of the
/// built-in one. Used to audit alternative tables.
pub fn factor_with_substitution(
    u: &UnitQuaternion,
    pattern: FactorizationPattern,
    substitution: &Substitution,
) -> FactorizationResult {
    let m = substitution.apply(u.components());
    let mut out = match pattern.kind() {
        PatternKind::TwoElement => euler_kernel(m),
        PatternKind::ThreeElement => tait_bryan_kernel(m),
    };
    if substitution.negate_first_angle {
        out.angles[0] = normalize_angle(-out.angles[0]);
    }
    let mut result = FactorizationResult {
        pattern,
        angles: out.angles,
        degenerate: out.degenerate,
        sign: 1,
    };
    if recompose(&result).dot(u) < 0.0 {
        result.sign = -1;
    }
    result
}

/// Factorizes `u` for any of the twelve patterns.
pub fn factor(u: &UnitQuaternion, pattern: FactorizationPattern) -> FactorizationResult {
    factor_with_substitution(u, pattern, &pattern.substitution())
}

/// Euler-type factorization `U_i(a) U_j(b) U_i(a')`.
pub fn factor_two_element(
    u: &UnitQuaternion,
    pattern: FactorizationPattern,
) -> Result<FactorizationResult> {
    if pattern.kind() != PatternKind::TwoElement {
        return Err(Error::Contract(format!(
            "pattern {pattern} is not a two-element pattern"
        )));
    }
    Ok(factor(u, pattern))
}

/// Factorization `U_i(a) U_j(b) U_k(c)` over three distinct axes.
pub fn factor_three_element(
    u: &UnitQuaternion,
    pattern: FactorizationPattern,
) -> Result<FactorizationResult> {
    if pattern.kind() != PatternKind::ThreeElement {
        return Err(Error::Contract(format!(
            "pattern {pattern} is not a three-element pattern"
        )));
    }
    Ok(factor(u, pattern))
}

/// Product of the three elementary factors, left to right.
pub fn recompose(result: &FactorizationResult) -> UnitQuaternion {
    compose_unchecked(result.pattern, result.angles)
}

/// Product `U_i(angles[0]) U_j(angles[1]) U_k(angles[2])`.
pub fn compose(pattern: FactorizationPattern, angles: [f64; 3]) -> Result<UnitQuaternion> {
    if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
        return Err(invalid(format!("angles must be finite, got {bad}")));
    }
    Ok(compose_unchecked(pattern, angles))
}

pub(crate) fn compose_unchecked(pattern: FactorizationPattern, angles: [f64; 3]) -> UnitQuaternion {
    let axes = pattern.axes();
    let f = |i: usize| UnitQuaternion::elementary_unchecked(axes[i], angles[i]);
    f(0) * f(1) * f(2)
}

/// Middle-angle range of a pattern's branch convention.
pub fn middle_angle_range(kind: PatternKind) -> (f64, f64) {
    match kind {
        PatternKind::TwoElement => (0.0, PI),
        PatternKind::ThreeElement => (-0.5 * PI, 0.5 * PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn p(code: &str) -> FactorizationPattern {
        code.parse().unwrap()
    }

    fn el(axis: Axis, angle: f64) -> UnitQuaternion {
        UnitQuaternion::elementary(axis, angle).unwrap()
    }

    fn assert_angles(r: &FactorizationResult, expected: [f64; 3], eps: f64) {
        for (got, want) in r.angles.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = eps);
        }
    }

    #[test]
    fn parses_all_twelve_patterns() {
        for code in [
            "121", "212", "131", "313", "232", "323", "123", "132", "231", "213", "312", "321",
        ] {
            assert_eq!(p(code).code(), code);
        }
        for bad in ["111", "122", "12", "1234", "124", "abc", "", "012"] {
            assert!(bad.parse::<FactorizationPattern>().is_err(), "{bad}");
        }
        let codes: Vec<String> = FactorizationPattern::ALL.iter().map(|p| p.code()).collect();
        assert_eq!(codes.len(), 12);
        assert_eq!(
            FactorizationPattern::ALL
                .iter()
                .filter(|p| p.kind() == PatternKind::TwoElement)
                .count(),
            6
        );
    }

    fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
        match (i, j, k) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
            (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
            _ => 0,
        }
    }

    // Each table row follows from the Pauli product: n_k carries ε_ijk for
    // two-element orders, odd three-element orders flip n_i and the first angle.
    #[test]
    fn tables_follow_levi_civita_rule() {
        for pattern in FactorizationPattern::ALL {
            let [i, j, k] = pattern.axes().map(Axis::number);
            let s = pattern.substitution();
            match pattern.kind() {
                PatternKind::TwoElement => {
                    let k = 6 - i - j;
                    assert_eq!(s.slots[0], SignedComponent::plus(i));
                    assert_eq!(s.slots[1], SignedComponent::plus(j));
                    assert_eq!(
                        s.slots[2],
                        SignedComponent {
                            index: k,
                            negated: levi_civita(i, j, k) < 0
                        }
                    );
                    assert!(!s.negate_first_angle);
                }
                PatternKind::ThreeElement => {
                    let odd = levi_civita(i, j, k) < 0;
                    assert_eq!(
                        s.slots,
                        [
                            SignedComponent {
                                index: i,
                                negated: odd
                            },
                            SignedComponent::plus(j),
                            SignedComponent::plus(k)
                        ]
                    );
                    assert_eq!(s.negate_first_angle, odd);
                }
            }
        }
    }

    #[test]
    fn builtin_tables_are_permutations() {
        for pattern in FactorizationPattern::ALL {
            assert!(pattern.substitution().is_permutation(), "{pattern}");
        }
        assert_eq!(
            p("232").substitution().slots,
            [
                SignedComponent::plus(2),
                SignedComponent::plus(3),
                SignedComponent::plus(1)
            ]
        );
        assert_eq!(
            p("212").substitution().slots,
            [
                SignedComponent::plus(2),
                SignedComponent::plus(1),
                SignedComponent::minus(3)
            ]
        );
        let s = p("213").substitution();
        assert_eq!(
            s.slots,
            [
                SignedComponent::minus(2),
                SignedComponent::plus(1),
                SignedComponent::plus(3)
            ]
        );
        assert!(s.negate_first_angle);
        assert_eq!(s.to_string(), "(n0, -n2, n1, n3) with first angle negated");
    }

    #[test]
    fn two_element_examples() {
        let r = factor_two_element(&el(Axis::Y, FRAC_PI_2), p("121")).unwrap();
        assert_angles(&r, [0.0, FRAC_PI_2, 0.0], 1e-15);
        assert!(!r.degenerate);

        let h = UnitQuaternion::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let r = factor_two_element(&h, p("121")).unwrap();
        assert_angles(&r, [0.0, FRAC_PI_2, FRAC_PI_2], 1e-15);
        assert_eq!(r.sign, 1);

        let u = el(Axis::X, FRAC_PI_3) * el(Axis::Y, FRAC_PI_2) * el(Axis::X, FRAC_PI_4);
        let r = factor_two_element(&u, p("121")).unwrap();
        assert_angles(&r, [FRAC_PI_3, FRAC_PI_2, FRAC_PI_4], 1e-14);

        let r = factor_two_element(&UnitQuaternion::IDENTITY, p("121")).unwrap();
        assert_angles(&r, [0.0, 0.0, 0.0], 0.0);
        assert!(r.degenerate);
    }

    #[test]
    fn three_element_examples() {
        let r = factor_three_element(&el(Axis::Y, FRAC_PI_3), p("123")).unwrap();
        assert_angles(&r, [0.0, FRAC_PI_3, 0.0], 1e-15);

        let h = UnitQuaternion::new(0.5, 0.5, 0.5, 0.5).unwrap();
        let r = factor_three_element(&h, p("123")).unwrap();
        assert_angles(&r, [FRAC_PI_2, 0.0, FRAC_PI_2], 1e-15);

        // cos b ≥ 0 forces b = π/3 with compensating half turns outside.
        let r = factor_three_element(&el(Axis::Y, 2.0 * FRAC_PI_3), p("123")).unwrap();
        assert_angles(&r, [PI, FRAC_PI_3, PI], 1e-15);
        assert!(recompose(&r).max_abs_diff_up_to_sign(&el(Axis::Y, 2.0 * FRAC_PI_3)) < 1e-15);
    }

    #[test]
    fn wrong_kind_is_a_contract_error() {
        let u = UnitQuaternion::sample_random(3);
        assert!(matches!(
            factor_two_element(&u, p("123")),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            factor_three_element(&u, p("313")),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn recompose_examples() {
        let r = compose(p("121"), [0.0, FRAC_PI_2, 0.0]).unwrap();
        assert!(
            r.max_abs_diff(&UnitQuaternion::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0).unwrap())
                < 1e-15
        );
        let r = compose(p("123"), [FRAC_PI_2, 0.0, FRAC_PI_2]).unwrap();
        assert!(r.max_abs_diff(&UnitQuaternion::new(0.5, 0.5, 0.5, 0.5).unwrap()) < 1e-15);
        assert!(compose(p("123"), [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn recompose_matches_printed_component_formulas() {
        for (a, b, c) in [(0.3, -1.2, 2.5), (-2.9, 0.4, 1.1), (1.7, 2.2, -0.6)] {
            let (x0, x1) = ((a / 2.0f64).cos(), (a / 2.0f64).sin());
            let (y0, y2) = ((b / 2.0f64).cos(), (b / 2.0f64).sin());
            let (z0, z3) = ((c / 2.0f64).cos(), (c / 2.0f64).sin());
            let expected = [
                x0 * y0 * z0 + x1 * y2 * z3,
                -x0 * y2 * z3 + x1 * y0 * z0,
                x0 * y2 * z0 + x1 * y0 * z3,
                x0 * y0 * z3 - x1 * y2 * z0,
            ];
            let got = compose(p("123"), [a, b, c]).unwrap().components();
            for (g, e) in got.iter().zip(expected) {
                assert_abs_diff_eq!(*g, e, epsilon = 1e-15);
            }
        }
    }

    // The alternative expression set for the 121 outer angles (solving for
    // the half angles of a from those of a') agrees with the adopted one.
    #[test]
    fn alternative_outer_angle_set_agrees() {
        for seed in 0..500 {
            let u = UnitQuaternion::sample_random(seed);
            let [n0, n1, n2, n3] = u.components();
            let r = factor(&u, p("121"));
            if r.degenerate {
                continue;
            }
            let (x1p, x0p) = (0.5 * r.last()).sin_cos();
            let r01 = n0.hypot(n1);
            let x0 = (n0 * x0p + n1 * x1p) / r01;
            let x1 = (n1 * x0p - n0 * x1p) / r01;
            let (s, c) = (0.5 * r.first()).sin_cos();
            let same = (x0 - c).abs().max((x1 - s).abs());
            let flipped = (x0 + c).abs().max((x1 + s).abs());
            assert!(same.min(flipped) < 1e-12, "seed {seed}: {same} {flipped}");
            // second variant built from n2, n3
            let r23 = n2.hypot(n3);
            let x0 = (n2 * x0p + n3 * x1p) / r23;
            let x1 = (n2 * x1p - n3 * x0p) / r23;
            let same = (x0 - c).abs().max((x1 - s).abs());
            let flipped = (x0 + c).abs().max((x1 + s).abs());
            assert!(same.min(flipped) < 1e-12, "seed {seed}: {same} {flipped}");
        }
    }

    #[test]
    fn middle_angle_formulas_are_pythagorean() {
        for seed in 0..1000 {
            let [n0, n1, n2, n3] = UnitQuaternion::sample_random(seed).components();
            let cos_b = n0 * n0 + n1 * n1 - n2 * n2 - n3 * n3;
            let sin_b = 2.0 * n0.hypot(n1) * n2.hypot(n3);
            assert_abs_diff_eq!(sin_b * sin_b + cos_b * cos_b, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadratic_identity_between_outer_pairs() {
        for seed in 0..1000 {
            let [n0, n1, n2, n3] = UnitQuaternion::sample_random(seed).components();
            let lhs = (n0 * n0 + n3 * n3 - n1 * n1 - n2 * n2).powi(2)
                + (2.0 * n2 * n3 + 2.0 * n0 * n1).powi(2);
            let rhs = (n0 * n0 - n3 * n3 + n1 * n1 - n2 * n2).powi(2)
                + (2.0 * n0 * n3 + 2.0 * n1 * n2).powi(2);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_inputs_every_pattern() {
        for pattern in FactorizationPattern::ALL {
            let [i, j, _] = pattern.axes();
            let lock = match pattern.kind() {
                PatternKind::TwoElement => [0.0, PI],
                PatternKind::ThreeElement => [FRAC_PI_2, -FRAC_PI_2],
            };
            for b in lock {
                let u = compose(pattern, [0.7, b, -1.3]).unwrap();
                let r = factor(&u, pattern);
                assert!(r.degenerate, "{pattern} b={b}");
                assert_eq!(r.last(), 0.0);
                assert!(r.angles.iter().all(|a| a.is_finite()));
                assert!(
                    recompose(&r).max_abs_diff_up_to_sign(&u) < 1e-12,
                    "{pattern} b={b}"
                );
            }
            // a pure first-axis rotation is locked for two-element orders only
            let u = el(i, 1.1);
            assert_eq!(
                factor(&u, pattern).degenerate,
                pattern.kind() == PatternKind::TwoElement
            );
            // a pure middle-axis rotation is never locked unless its angle is
            let u = el(j, 0.9);
            assert!(!factor(&u, pattern).degenerate);
        }
    }

    prop_compose! {
        fn unit_quaternion()(seed in any::<u64>()) -> UnitQuaternion {
            UnitQuaternion::sample_random(seed)
        }
    }

    fn any_pattern() -> impl Strategy<Value = FactorizationPattern> {
        (0usize..12).prop_map(|i| FactorizationPattern::ALL[i])
    }

    proptest! {
        #[test]
        fn round_trip(u in unit_quaternion(), pattern in any_pattern()) {
            let r = factor(&u, pattern);
            let back = recompose(&r);
            let signed = if r.sign > 0 { u } else { -u };
            prop_assert!(back.max_abs_diff(&signed) < 1e-9);
        }

        #[test]
        fn angles_ignore_overall_sign(u in unit_quaternion(), pattern in any_pattern()) {
            let a = factor(&u, pattern);
            let b = factor(&-u, pattern);
            for (x, y) in a.angles.iter().zip(b.angles) {
                // ±π are the same outer angle
                let d = normalize_angle(x - y);
                prop_assert!(d.abs() < 1e-12, "{:?} vs {:?}", a.angles, b.angles);
            }
            prop_assert_eq!(a.sign, -b.sign);
        }

        #[test]
        fn branch_conventions(u in unit_quaternion(), pattern in any_pattern()) {
            let r = factor(&u, pattern);
            let (lo, hi) = middle_angle_range(pattern.kind());
            prop_assert!(r.middle() >= lo && r.middle() <= hi);
            prop_assert!(r.first() > -PI && r.first() <= PI);
            prop_assert!(r.last() > -PI && r.last() <= PI);
        }

        #[test]
        fn compose_then_factor(a in -3.1..3.1f64, b in 0.01..3.13f64, c in -3.1..3.1f64) {
            // inside the branch the angles come back exactly
            let u = compose(p("121"), [a, b, c]).unwrap();
            let r = factor(&u, p("121"));
            prop_assert!((r.first() - a).abs() < 1e-9 && (r.middle() - b).abs() < 1e-9 && (r.last() - c).abs() < 1e-9);
            let b3 = b / 2.0 - 0.75;
            let u = compose(p("312"), [a, b3, c]).unwrap();
            let r = factor(&u, p("312"));
            prop_assert!((r.first() - a).abs() < 1e-9 && (r.middle() - b3).abs() < 1e-9 && (r.last() - c).abs() < 1e-9);
        }
    }
}
