//! Checks the component substitution tables against the group product.
//!
//! The reference substitution tables for the two- and three-element orders
//! are transcribed here as printed, including two rows that repeat a
//! component and therefore cannot be right. For every pattern the audit
//!
//! 1. runs factor-then-recompose with the printed row over random inputs,
//! 2. derives the correct row independently, by searching all signed
//!    relabellings for the one under which the pattern's product expansion
//!    coincides with the kernel order's expansion,
//! 3. re-runs the round trip with the derived row and compares it with the
//!    table compiled into [`crate::factorize`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::factorize::{
    compose_unchecked, factor_with_substitution, recompose, FactorizationPattern, PatternKind,
    SignedComponent as C, Substitution,
};
use crate::quat::{Axis, UnitQuaternion};

const fn row(
    axes: [Axis; 3],
    slots: [C; 3],
    negate_first_angle: bool,
) -> (FactorizationPattern, Substitution) {
    (
        FactorizationPattern::from_axes_unchecked(axes),
        Substitution {
            slots,
            negate_first_angle,
        },
    )
}

use Axis::{X, Y, Z};

/// Two-element reference table, as printed.
pub const PRINTED_TWO_ELEMENT_TABLE: [(FactorizationPattern, Substitution); 6] = [
    row([Y, Z, Y], [C::plus(2), C::plus(3), C::plus(1)], false),
    row([Z, Y, Z], [C::plus(3), C::plus(2), C::minus(1)], false),
    row([Z, X, Z], [C::plus(3), C::plus(1), C::plus(2)], false),
    row([X, Z, X], [C::plus(1), C::plus(3), C::minus(2)], false),
    row([X, Y, X], [C::plus(1), C::plus(2), C::plus(3)], false),
    row([Y, X, Y], [C::plus(2), C::plus(1), C::minus(3)], false),
];

/// Three-element reference table, as printed. The first-angle flip of
/// the odd orders is not in the table itself but in the accompanying product
/// expansions, where the first factor enters with a negated sine.
pub const PRINTED_THREE_ELEMENT_TABLE: [(FactorizationPattern, Substitution); 6] = [
    row([X, Y, Z], [C::plus(1), C::plus(2), C::plus(3)], false),
    row([X, Z, Y], [C::minus(1), C::plus(3), C::plus(2)], true),
    row([Y, Z, X], [C::plus(2), C::plus(3), C::plus(1)], false),
    row([Y, X, Z], [C::minus(2), C::plus(2), C::plus(3)], true),
    row([Z, X, Y], [C::plus(3), C::plus(1), C::plus(2)], false),
    row([Z, Y, X], [C::minus(3), C::plus(2), C::plus(2)], true),
];

pub fn printed_substitution(pattern: FactorizationPattern) -> Substitution {
    PRINTED_TWO_ELEMENT_TABLE
        .iter()
        .chain(PRINTED_THREE_ELEMENT_TABLE.iter())
        .find(|(p, _)| *p == pattern)
        .map(|(_, s)| *s)
        .expect("every pattern has a printed row")
}

fn kernel_pattern(kind: PatternKind) -> FactorizationPattern {
    match kind {
        PatternKind::TwoElement => FactorizationPattern::from_axes_unchecked([X, Y, X]),
        PatternKind::ThreeElement => FactorizationPattern::from_axes_unchecked([X, Y, Z]),
    }
}

const PROBE_ANGLES: [[f64; 3]; 4] = [
    [0.37, 1.11, -0.83],
    [2.1, -0.4, 1.7],
    [-1.3, 0.9, 2.9],
    [0.05, -2.6, -1.45],
];

/// Finds the signed relabelling under which the expansion of `pattern`
/// matches the kernel order's expansion for arbitrary angles.
///
/// For every probe `(a, b, c)` the product for `pattern` is compared with the
/// kernel product at `(±a, b, c)`; the kernel components must equal
/// `(n0, ±n_p, ±n_q, ±n_r)` of the pattern product.
pub fn derive_substitution(pattern: FactorizationPattern) -> Option<Substitution> {
    let kernel = kernel_pattern(pattern.kind());
    let perms = [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    for negate_first_angle in [false, true] {
        for perm in perms {
            for signs in 0u8..8 {
                let slots: [C; 3] = std::array::from_fn(|s| C {
                    index: perm[s],
                    negated: signs & (1 << s) != 0,
                });
                let candidate = Substitution {
                    slots,
                    negate_first_angle,
                };
                let matches = PROBE_ANGLES.iter().all(|&[a, b, c]| {
                    let n = compose_unchecked(pattern, [a, b, c]).components();
                    let first = if negate_first_angle { -a } else { a };
                    let t = compose_unchecked(kernel, [first, b, c]).components();
                    let m = candidate.apply(n);
                    t.iter().zip(m).all(|(x, y)| (x - y).abs() < 1e-12)
                });
                if matches {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// Largest factor-then-recompose error (up to overall sign) for one row.
pub fn round_trip_error(
    pattern: FactorizationPattern,
    substitution: &Substitution,
    samples: &[UnitQuaternion],
) -> f64 {
    samples
        .iter()
        .map(|u| {
            let r = factor_with_substitution(u, pattern, substitution);
            recompose(&r).max_abs_diff_up_to_sign(u)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub pattern: FactorizationPattern,
    pub printed: Substitution,
    pub printed_max_error: f64,
    pub printed_passes: bool,
    /// `None` only if no signed relabelling reproduces the product.
    pub derived: Option<Substitution>,
    pub derived_max_error: f64,
    pub derived_passes: bool,
    /// The compiled-in table row equals the derived one.
    pub builtin_matches_derived: bool,
}

impl AuditRow {
    /// The printed row had to be replaced.
    pub fn corrected(&self) -> bool {
        !self.printed_passes || self.derived != Some(self.printed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    /// Every pattern round-trips with the derived row, and the compiled-in
    /// tables agree with it.
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.derived_passes && r.builtin_matches_derived)
    }

    pub fn failing_printed_rows(&self) -> impl Iterator<Item = &AuditRow> {
        self.rows.iter().filter(|r| !r.printed_passes)
    }

    pub fn row(&self, pattern: FactorizationPattern) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.pattern == pattern)
    }
}

/// Audits all twelve substitution rows over `samples` random unit quaternions.
pub fn verify_substitution_tables(samples: usize, seed: u64, tolerance: f64) -> AuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<UnitQuaternion> = (0..samples)
        .map(|_| UnitQuaternion::random(&mut rng))
        .collect();
    let rows = FactorizationPattern::ALL
        .iter()
        .map(|&pattern| {
            let printed = printed_substitution(pattern);
            let printed_max_error = round_trip_error(pattern, &printed, &inputs);
            let derived = derive_substitution(pattern);
            let derived_max_error = derived
                .map(|d| round_trip_error(pattern, &d, &inputs))
                .unwrap_or(f64::INFINITY);
            AuditRow {
                pattern,
                printed,
                printed_max_error,
                printed_passes: printed_max_error < tolerance,
                derived,
                derived_max_error,
                derived_passes: derived_max_error < tolerance,
                builtin_matches_derived: derived == Some(pattern.substitution()),
            }
        })
        .collect();
    AuditReport {
        samples,
        seed,
        tolerance,
        rows,
    }
}
