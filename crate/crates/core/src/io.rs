//! Text formats: `re+imi` complex literals, target and map specs, fixed-width
//! JSON, and CSV tables.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::designers::DesignResult;
use crate::domains::{BoundaryCurve, MultiplierSet};
use crate::duality::AveragingSet;
use crate::error::{Error, Result};
use crate::simulator::{MapSpec, TrajectoryRecord};

/// Significant digits of every float written by this module.
pub const SIGNIFICANT_DIGITS: usize = 17;

/// Parses `2`, `-1.5i`, `i`, `2-1.5i`, `1e-3+2e2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Ok(Complex64::new(re, im))
}

/// `re+imi` with shortest round-trip digits.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// `point:MU`, `segment:MU_M`, `horocycle:MU_M`, `sector:MU_M,THETA`.
pub fn parse_target(s: &str) -> Result<MultiplierSet> {
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("target needs kind:value, got {s:?}")))?;
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {t:?}")))
    };
    match kind {
        "point" | "unit_disk_complement_point" => MultiplierSet::point(parse_complex(args)?),
        "segment" | "real_segment" => MultiplierSet::real_segment(number(args)?),
        "horocycle" | "horocycle_disk" => MultiplierSet::horocycle(number(args)?),
        "sector" => {
            let (m, theta) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("sector needs mu_M,theta, got {args:?}")))?;
            MultiplierSet::sector(number(m)?, number(theta)?)
        }
        other => Err(Error::Parse(format!("unknown target kind {other:?}"))),
    }
}

/// `quadratic:C`, `logistic:LAMBDA`, `polynomial:C0,C1,...` (ascending).
pub fn parse_map(s: &str) -> Result<MapSpec> {
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("map needs kind:value, got {s:?}")))?;
    match kind {
        "quadratic" | "quadratic_c" => Ok(MapSpec::quadratic(parse_complex(args)?)),
        "logistic" => Ok(MapSpec::logistic(parse_complex(args)?)),
        "polynomial" => MapSpec::polynomial(args.split(',').map(parse_complex).collect::<Result<_>>()?),
        other => Err(Error::Parse(format!("unknown map kind {other:?}"))),
    }
}

/// A float with [`SIGNIFICANT_DIGITS`] significant digits, in JSON syntax.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let sci = format!("{:.prec$e}", x.abs(), prec = SIGNIFICANT_DIGITS - 1);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    match exp {
        0..=15 => {
            let (int, frac) = digits.split_at(exp as usize + 1);
            format!("{sign}{int}.{frac}")
        }
        -5..=-1 => format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize)),
        _ => format!("{sign}{mantissa}e{exp}"),
    }
}

/// Pretty JSON with two-space indent, keys in insertion order, and every
/// float through [`format_float`].
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) if !n.is_f64() => out.push_str(&i.to_string()),
            (_, Some(u), _) if !n.is_f64() => out.push_str(&u.to_string()),
            (_, _, Some(x)) => out.push_str(&format_float(x)),
            _ => out.push_str("null"),
        },
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// The documented design file: `{method, T, n, a, p, target, verified, margin, probes_passed, probes}`.
pub fn design_json(result: &DesignResult) -> Value {
    let design = &result.design;
    json!({
        "method": result.method_used.name(),
        "T": design.cycle_length(),
        "n": design.order(),
        "a": design.a(),
        "p": design.p().coeffs(),
        "target": result.target,
        "verified": result.verified,
        "margin": result.margin,
        "probes_passed": result.probes_passed,
        "probes": result.probes.len(),
    })
}

/// Reads `a` and `T` from a design file; other fields are ignored.
pub fn read_design(text: &str) -> Result<AveragingSet> {
    Ok(serde_json::from_str(text)?)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// Columns `phi,re,im`.
pub fn write_boundary_csv<W: Write>(curve: &BoundaryCurve, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["phi", "re", "im"]).map_err(csv_error)?;
    for (phi, z) in &curve.samples {
        w.write_record([format_float(*phi), format_float(z.re), format_float(z.im)])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `step,re,im,distance`; `distance` is empty for an unmeasured orbit.
pub fn write_trajectory_csv<W: Write>(record: &TrajectoryRecord, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["step", "re", "im", "distance"]).map_err(csv_error)?;
    for (k, z) in record.points.iter().enumerate() {
        let d = record.distances.get(k).map(|&d| format_float(d)).unwrap_or_default();
        w.write_record([k.to_string(), format_float(z.re), format_float(z.im), d])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// `{converged, escaped, steps, steps_to_converge, final_distance, empirical_rate, predicted_rate}`.
pub fn trajectory_summary(record: &TrajectoryRecord) -> Value {
    json!({
        "converged": record.converged,
        "escaped": record.escaped,
        "steps": record.points.len().saturating_sub(1),
        "steps_to_converge": record.steps_to_converge,
        "final_distance": record.distances.last(),
        "empirical_rate": record.empirical_rate,
        "predicted_rate": record.predicted_rate,
    })
}
