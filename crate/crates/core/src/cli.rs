//! Command-line front end. One JSON document in on stdin, one out on stdout.
//!
//! Exit codes: `0` success, `2` invalid input (JSON error object on stderr),
//! `1` internal failure.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::audit::{verify_substitution_tables, AuditReport};
use crate::error::Error;
use crate::factorize::{compose, factor, FactorizationPattern, FactorizationResult};
use crate::group_maps::{so3_to_su2, su2_to_so3, Rotation3};
use crate::polarization::{
    decompose_rotator, jones_to_stokes, stokes_to_jones, JonesSpinor, MuellerElement, StokesVector,
};
use crate::quat::UnitQuaternion;

/// Input quaternions may be off unit norm by this much; they are renormalized.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "su2-factor",
    version,
    about = "Axis factorizations of rotations and polarization tools"
)]
struct Cli {
    /// Read and write angles in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quaternion [n0,n1,n2,n3] -> {first, middle, last, degenerate, sign}.
    Factor {
        #[arg(long)]
        pattern: FactorizationPattern,
    },
    /// Angles {first, middle, last} or [a,b,c] -> quaternion.
    Compose {
        #[arg(long)]
        pattern: FactorizationPattern,
    },
    /// Quaternion -> 3x3 rotation matrix.
    #[command(name = "su2-to-so3")]
    Su2ToSo3,
    /// 3x3 rotation matrix -> canonical quaternion.
    #[command(name = "so3-to-su2")]
    So3ToSu2,
    /// Jones spinor [[re,im],[re,im]] -> Stokes vector.
    JonesToStokes,
    /// Fully polarized Stokes vector -> Jones spinor.
    StokesToJones {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// {"element": ..., "stokes": [...]} -> Stokes vector.
    Apply,
    /// 3x3 rotation matrix -> three single-axis rotators.
    DecomposeRotator {
        #[arg(long)]
        pattern: FactorizationPattern,
    },
    /// Audit the component substitution tables.
    VerifyTables {
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Outcome {
    pub fn stdout_str(&self) -> &str {
        std::str::from_utf8(&self.stdout).unwrap_or("")
    }

    pub fn stderr_str(&self) -> &str {
        std::str::from_utf8(&self.stderr).unwrap_or("")
    }
}

#[derive(Debug)]
enum Failure {
    Input { code: &'static str, message: String },
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => "invalid_input",
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
        };
        Failure::Input {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(code: &'static str, message: impl Into<String>) -> Failure {
    Failure::Input {
        code,
        message: message.into(),
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text.into_bytes(),
                    stderr: Vec::new(),
                },
                _ => error_outcome(2, "usage", text.trim_end()),
            };
        }
    };
    match dispatch(&cli, stdin).and_then(|v| to_json(&v)) {
        Ok(mut text) => {
            text.push('\n');
            Outcome {
                code: 0,
                stdout: text.into_bytes(),
                stderr: Vec::new(),
            }
        }
        Err(Failure::Input { code, message }) => error_outcome(2, code, &message),
        Err(Failure::Internal(message)) => error_outcome(1, "internal", &message),
    }
}

fn error_outcome(exit: i32, code: &str, message: &str) -> Outcome {
    let body = json!({ "code": code, "message": message });
    Outcome {
        code: exit,
        stdout: Vec::new(),
        stderr: format!("{body}\n").into_bytes(),
    }
}

fn read_input<T: DeserializeOwned>(stdin: &mut dyn Read) -> Result<T, Failure> {
    let mut text = String::new();
    stdin
        .read_to_string(&mut text)
        .map_err(|e| input_error("malformed_json", format!("cannot read stdin: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input_error("malformed_json", e.to_string()))
}

fn read_quaternion(stdin: &mut dyn Read) -> Result<UnitQuaternion, Failure> {
    let n: [f64; 4] = read_input(stdin)?;
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE || norm.is_nan() {
        return Err(input_error(
            "invalid_input",
            format!("quaternion norm {norm} is not within {INPUT_NORM_TOLERANCE:e} of 1"),
        ));
    }
    Ok(UnitQuaternion::normalized(n[0], n[1], n[2], n[3])?)
}

fn read_rotation(stdin: &mut dyn Read) -> Result<Rotation3, Failure> {
    let m: [[f64; 3]; 3] = read_input(stdin)?;
    Ok(Rotation3::new(m)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnglesInput {
    Object(AnglesObject),
    Array([f64; 3]),
}

// `degenerate` and `sign` are accepted so that factor output can be piped back in.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct AnglesObject {
    first: f64,
    middle: f64,
    last: f64,
    degenerate: Option<bool>,
    sign: Option<i8>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ElementInput {
    PolAttenuator { lambda: f64 },
    IntAttenuator { sigma: f64 },
    Rotator { matrix: [[f64; 3]; 3] },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ApplyInput {
    element: ElementInput,
    stokes: [f64; 4],
}

struct Units {
    degrees: bool,
}

impl Units {
    fn input(&self, angle: f64) -> f64 {
        if self.degrees {
            angle.to_radians()
        } else {
            angle
        }
    }

    fn output(&self, angle: f64) -> f64 {
        if self.degrees {
            angle.to_degrees()
        } else {
            angle
        }
    }

    fn angles(&self, r: &FactorizationResult) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("first".into(), json!(self.output(r.first())));
        m.insert("middle".into(), json!(self.output(r.middle())));
        m.insert("last".into(), json!(self.output(r.last())));
        m.insert("degenerate".into(), json!(r.degenerate));
        m.insert("sign".into(), json!(r.sign));
        m
    }
}

fn quaternion_json(u: &UnitQuaternion) -> Value {
    json!(u.components())
}

fn matrix_json(r: &Rotation3) -> Value {
    json!(r.matrix())
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let units = Units {
        degrees: cli.degrees,
    };
    Ok(match &cli.command {
        Command::Factor { pattern } => {
            let u = read_quaternion(stdin)?;
            Value::Object(units.angles(&factor(&u, *pattern)))
        }
        Command::Compose { pattern } => {
            let angles = match read_input::<AnglesInput>(stdin)? {
                AnglesInput::Object(o) => [o.first, o.middle, o.last],
                AnglesInput::Array(a) => a,
            };
            quaternion_json(&compose(*pattern, angles.map(|a| units.input(a)))?)
        }
        Command::Su2ToSo3 => matrix_json(&su2_to_so3(&read_quaternion(stdin)?)),
        Command::So3ToSu2 => quaternion_json(&so3_to_su2(&read_rotation(stdin)?)?),
        Command::JonesToStokes => {
            let [[a, b], [c, d]]: [[f64; 2]; 2] = read_input(stdin)?;
            let psi = JonesSpinor::new(Complex64::new(a, b), Complex64::new(c, d))?;
            json!(jones_to_stokes(&psi).components())
        }
        Command::StokesToJones { gamma } => {
            let s = StokesVector::from_array(read_input(stdin)?)?;
            let psi = stokes_to_jones(&s, units.input(*gamma))?;
            let [p1, p2] = psi.components();
            json!([[p1.re, p1.im], [p2.re, p2.im]])
        }
        Command::Apply => {
            let req: ApplyInput = read_input(stdin)?;
            let element = match req.element {
                ElementInput::PolAttenuator { lambda } => MuellerElement::pol_attenuator(lambda)?,
                ElementInput::IntAttenuator { sigma } => MuellerElement::int_attenuator(sigma)?,
                ElementInput::Rotator { matrix } => {
                    MuellerElement::rotator(Rotation3::new(matrix)?)
                }
            };
            let s = StokesVector::from_array(req.stokes)?;
            json!(element.apply(&s).components())
        }
        Command::DecomposeRotator { pattern } => {
            let train = decompose_rotator(&read_rotation(stdin)?, *pattern)?;
            let mut m = units.angles(&train.factorization);
            let elements: Vec<Value> = train
                .elements
                .iter()
                .zip(train.factorization.factors())
                .map(|(e, f)| {
                    let MuellerElement::Rotator(r) = e else {
                        unreachable!("decomposition yields rotators")
                    };
                    json!({
                        "axis": f.axis.number(),
                        "angle": units.output(f.angle),
                        "matrix": matrix_json(r),
                    })
                })
                .collect();
            m.insert("elements".into(), Value::Array(elements));
            Value::Object(m)
        }
        Command::VerifyTables {
            tolerance,
            seed,
            samples,
        } => {
            if !(tolerance.is_finite() && *tolerance > 0.0) {
                return Err(input_error(
                    "invalid_input",
                    "tolerance must be positive and finite",
                ));
            }
            if *samples == 0 {
                return Err(input_error("invalid_input", "samples must be at least 1"));
            }
            let report = verify_substitution_tables(*samples, *seed, *tolerance);
            if !report.passed() {
                return Err(Failure::Internal(format!(
                    "built-in substitution tables failed the audit: {}",
                    report_json(&report)
                )));
            }
            report_json(&report)
        }
    })
}

fn report_json(report: &AuditReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "pattern": r.pattern.code(),
                "printed": r.printed.to_string(),
                "printed_max_error": r.printed_max_error,
                "printed_passes": r.printed_passes,
                "corrected": r.corrected(),
                "derived": r.derived.map(|d| d.to_string()),
                "derived_max_error": r.derived_max_error,
                "derived_passes": r.derived_passes,
                "builtin_matches_derived": r.builtin_matches_derived,
            })
        })
        .collect();
    json!({
        "passed": report.passed(),
        "samples": report.samples,
        "seed": report.seed,
        "tolerance": report.tolerance,
        "failing_printed_rows": report.failing_printed_rows().map(|r| r.pattern.code()).collect::<Vec<_>>(),
        "rows": rows,
    })
}

/// `printf("%.17g")` formatting, with `-0` written as `0`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-4..17).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            out.push_str(&"0".repeat((-exp - 1) as usize));
            out.push_str(digits);
        } else {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(digits);
                out.push_str(&"0".repeat(int_len - digits.len()));
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!(
            "e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        ));
    }
    out
}

fn to_json(v: &Value) -> Result<String, Failure> {
    let mut out = String::new();
    write_json(v, &mut out)?;
    Ok(out)
}

fn write_json(v: &Value, out: &mut String) -> Result<(), Failure> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if !x.is_finite() {
                    return Err(Failure::Internal(format!("non-finite output {x}")));
                }
                out.push_str(&format_float(x));
            }
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(item, out)?;
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_json(item, out)?;
            }
            out.push('}');
        }
        // serde_json turns non-finite floats into null
        Value::Null => return Err(Failure::Internal("non-finite output".into())),
        other => out.push_str(&other.to_string()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> Outcome {
        let argv = std::iter::once("su2-factor").chain(args.iter().copied());
        run(argv, &mut input.as_bytes())
    }

    #[test]
    fn float_format_matches_printf() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (std::f64::consts::FRAC_PI_2, "1.5707963267948966"),
            (0.1, "0.10000000000000001"),
            (1e-5, "1.0000000000000001e-05"),
            (0.0001, "0.0001"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (6.123233995736766e-17, "6.123233995736766e-17"),
            (1.5e300, "1.5000000000000001e+300"),
        ];
        for (x, want) in cases {
            assert_eq!(format_float(x), want, "{x:e}");
        }
    }

    #[test]
    fn factor_example() {
        let out = call(&["factor", "--pattern", "121"], "[0.5,0.5,0.5,0.5]");
        assert_eq!(out.code, 0, "{}", out.stderr_str());
        assert_eq!(
            out.stdout_str(),
            "{\"first\":0,\"middle\":1.5707963267948966,\"last\":1.5707963267948966,\"degenerate\":false,\"sign\":1}\n"
        );
    }

    #[test]
    fn compose_and_jones_examples() {
        let out = call(&["compose", "--pattern", "123"], "[0,0,0]");
        assert_eq!(out.stdout_str(), "[1,0,0,0]\n");
        let out = call(&["jones-to-stokes"], "[[1,0],[0,0]]");
        assert_eq!(out.stdout_str(), "[1,0,0,1]\n");
    }

    #[test]
    fn degrees_flag() {
        let out = call(
            &["--degrees", "factor", "--pattern", "121"],
            "[0.5,0.5,0.5,0.5]",
        );
        assert!(
            out.stdout_str().contains("\"middle\":90,"),
            "{}",
            out.stdout_str()
        );
        let out = call(&["compose", "--pattern", "121", "--degrees"], "[0,180,0]");
        let v: Vec<f64> = serde_json::from_str(out.stdout_str()).unwrap();
        assert!((v[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn error_exits() {
        let out = call(&["factor", "--pattern", "121"], "[0.5,0.5");
        assert_eq!(out.code, 2);
        let err: Value = serde_json::from_str(out.stderr_str()).unwrap();
        assert_eq!(err["code"], "malformed_json");
        assert!(err["message"].is_string());

        assert_eq!(call(&["factor", "--pattern", "122"], "[1,0,0,0]").code, 2);
        assert_eq!(call(&["factor"], "[1,0,0,0]").code, 2);
        assert_eq!(call(&["frobnicate"], "").code, 2);
        assert_eq!(call(&["factor", "--pattern", "121"], "[2,0,0,0]").code, 2);
        let out = call(&["stokes-to-jones"], "[2,0,0,1]");
        assert_eq!(out.code, 2);
        assert!(out.stderr_str().contains("\"domain\""));
        assert_eq!(call(&["so3-to-su2"], "[[1,0,0],[0,1,0],[0,0,-1]]").code, 2);
        assert_eq!(
            call(
                &["compose", "--pattern", "121"],
                "{\"first\":0,\"middle\":0,\"last\":0,\"extra\":1}"
            )
            .code,
            2
        );
        assert_eq!(
            call(
                &["apply"],
                "{\"element\":{\"int_attenuator\":{\"sigma\":0}},\"stokes\":[1,0,0,0],\"x\":1}"
            )
            .code,
            2
        );
        assert_eq!(call(&["verify-tables", "--samples", "0"], "").code, 2);
    }

    #[test]
    fn apply_command() {
        let out = call(
            &["apply"],
            "{\"element\":{\"pol_attenuator\":{\"lambda\":0.6931471805599453}},\"stokes\":[2,0,0,1.6]}",
        );
        assert_eq!(out.stdout_str(), "[2,0,0,0.80000000000000004]\n");
    }

    #[test]
    fn help_goes_to_stdout() {
        let out = call(&["--help"], "");
        assert_eq!(out.code, 0);
        assert!(out.stdout_str().contains("decompose-rotator"));
    }
}
