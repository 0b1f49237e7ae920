//! Parsing of command-line values into library types.

use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

use cutseq_core::{build_polygon, LabeledPolygon, Point, ProjectiveDirection, Sequence, Q2};

use crate::CliError;
use crate::cli::DirectionArgs;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `pi`, `pi/8`, `3*pi/8`, `3pi/8` or `3*pi` as `(k, m)`.
fn parse_pi_multiple(s: &str) -> Option<(u32, u32)> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse().ok()?),
        None => (s, 1),
    };
    let k = num.strip_suffix("pi")?.trim_end_matches('*');
    let k = if k.is_empty() { 1 } else { k.parse().ok()? };
    Some((k, den))
}

/// Radians, an exact multiple of π (exact only for the octagon and multiples
/// of π/8), or an exact cotangent.
pub fn direction(args: &DirectionArgs, n: usize) -> Result<ProjectiveDirection, CliError> {
    if let Some(c) = &args.cot {
        let mu = Q2::from_str(c).map_err(|e| usage(format!("--cot: {e}")))?;
        return Ok(ProjectiveDirection::from_cot(mu));
    }
    let Some(t) = &args.theta else {
        return Err(usage("a direction is required: pass --theta or --cot"));
    };
    let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if t.contains("pi") {
        let (k, m) = parse_pi_multiple(&t).ok_or_else(|| usage(format!("--theta: cannot read '{t}'")))?;
        if m == 0 {
            return Err(usage("--theta: zero denominator"));
        }
        if n == 4 && 8 % m == 0 {
            return Ok(ProjectiveDirection::multiple_of_pi(k, m)?);
        }
        return Ok(ProjectiveDirection::approx(PI * k as f64 / m as f64)?);
    }
    let theta: f64 = t.parse().map_err(|_| usage(format!("--theta: '{t}' is not a number")))?;
    Ok(ProjectiveDirection::approx(theta)?)
}

/// A word given inline or as a path to a file holding it.
pub fn word(s: &str, n: usize) -> Result<Sequence, CliError> {
    let text = if Path::new(s).is_file() {
        std::fs::read_to_string(s).map_err(|e| usage(format!("cannot read {s}: {e}")))?
    } else {
        s.to_string()
    };
    Ok(Sequence::parse(text.trim(), n)?)
}

pub fn usize_list(s: &str, flag: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| usage(format!("{flag}: '{x}' is not a non-negative integer"))))
        .collect()
}

pub fn polygon(n: usize) -> Result<LabeledPolygon, CliError> {
    Ok(build_polygon(n)?)
}

/// Exact start point "x,y"; each coordinate is anything [`Q2`] reads.
pub fn exact_point(s: &str) -> Result<Point<Q2>, CliError> {
    let (x, y) = s.split_once(',').ok_or_else(|| usage("--start expects \"x,y\""))?;
    let q = |v: &str| Q2::from_str(v).map_err(|e| usage(format!("--start: {e}")));
    Ok(Point::new(q(x)?, q(y)?))
}

pub fn float_point(s: &str) -> Result<Point<f64>, CliError> {
    let (x, y) = s.split_once(',').ok_or_else(|| usage("--start expects \"x,y\""))?;
    let f = |v: &str| v.trim().parse::<f64>().map_err(|_| usage(format!("--start: '{v}' is not a number")));
    Ok(Point::new(f(x)?, f(y)?))
}
