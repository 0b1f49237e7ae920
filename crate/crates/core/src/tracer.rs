//! Linear trajectories on the polygon with opposite sides glued, read off as
//! cutting sequences.

use std::fmt::Write as _;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{ProjectiveDirection, Q2};
use crate::polygon::{letter_name, LabeledPolygon, Point};
use crate::symbolic::FiniteWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceMode {
    Approx,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceConfig {
    /// Crossings closer than this to a vertex (in side-length units) are rejected.
    pub epsilon: f64,
    pub max_crossings: usize,
    pub mode: TraceMode,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { epsilon: 1e-9, max_crossings: 1000, mode: TraceMode::Approx }
    }
}

impl TraceConfig {
    pub fn new(max_crossings: usize) -> Self {
        TraceConfig { max_crossings, ..Default::default() }
    }

    pub fn exact(max_crossings: usize) -> Self {
        TraceConfig { max_crossings, mode: TraceMode::Exact, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || self.max_crossings == 0 {
            return Err(Error::Parse("epsilon must be positive and max_crossings at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub letter: usize,
    /// Exit point on the crossed side.
    pub point: [f64; 2],
    pub side: usize,
}

/// Serializable record of one trace.
#[derive(Clone, Debug, Serialize)]
pub struct TraceLog {
    pub direction: String,
    pub theta: f64,
    pub start: [f64; 2],
    pub seed: Option<u64>,
    pub word: String,
    pub crossings: Vec<Crossing>,
}

struct SideF {
    v: [f64; 2],
    e: [f64; 2],
    normal: [f64; 2],
    shift: [f64; 2],
}

fn float_sides(poly: &LabeledPolygon) -> Vec<SideF> {
    (0..poly.side_count())
        .map(|k| {
            let (a, b) = poly.side(k);
            let e = [b.x - a.x, b.y - a.y];
            SideF { v: [a.x, a.y], e, normal: [-e[1], e[0]], shift: [-(a.x + b.x), -(a.y + b.y)] }
        })
        .collect()
}

/// Walks the trajectory, calling `visit(index, side, s, exit point)` for every
/// crossing, where `s ∈ (0, 1)` is the position along the side. Stops early
/// when `visit` returns false.
fn walk_f64<F>(poly: &LabeledPolygon, start: &Point<f64>, theta: f64, cfg: &TraceConfig, mut visit: F) -> Result<()>
where
    F: FnMut(usize, usize, f64, [f64; 2]) -> bool,
{
    let sides = float_sides(poly);
    let d = [theta.cos(), theta.sin()];
    let inside = sides.iter().all(|s| (start.x - s.v[0]) * s.normal[0] + (start.y - s.v[1]) * s.normal[1] < 0.0);
    if !inside {
        return Err(Error::StartOutside);
    }
    let exits: Vec<(usize, f64)> = sides
        .iter()
        .enumerate()
        .map(|(k, s)| (k, d[0] * s.normal[0] + d[1] * s.normal[1]))
        .filter(|&(_, dn)| dn > 1e-15)
        .collect();
    let mut p = [start.x, start.y];
    for idx in 0..cfg.max_crossings {
        let mut best = (usize::MAX, f64::INFINITY);
        for &(k, dn) in &exits {
            let s = &sides[k];
            let t = ((s.v[0] - p[0]) * s.normal[0] + (s.v[1] - p[1]) * s.normal[1]) / dn;
            if t < best.1 {
                best = (k, t);
            }
        }
        let (k, t) = best;
        let side = &sides[k];
        let q = [p[0] + t * d[0], p[1] + t * d[1]];
        let s = (q[0] - side.v[0]) * side.e[0] + (q[1] - side.v[1]) * side.e[1];
        if s < cfg.epsilon || s > 1.0 - cfg.epsilon {
            return Err(Error::VertexHit { crossing: idx, side: k });
        }
        // project back onto the side to stop drift
        let q = [side.v[0] + s * side.e[0], side.v[1] + s * side.e[1]];
        if !visit(idx, k, s, q) {
            return Ok(());
        }
        p = [q[0] + side.shift[0], q[1] + side.shift[1]];
    }
    Ok(())
}

struct SideQ {
    v: [Q2; 2],
    e: [Q2; 2],
    normal: [Q2; 2],
    shift: [Q2; 2],
}

fn dot(a: &[Q2; 2], b: &[Q2; 2]) -> Q2 {
    &(&a[0] * &b[0]) + &(&a[1] * &b[1])
}

fn walk_exact<F>(poly: &LabeledPolygon, start: &Point<Q2>, dir: &ProjectiveDirection, cfg: &TraceConfig, mut visit: F) -> Result<()>
where
    F: FnMut(usize, usize, &Q2, [Q2; 2]) -> bool,
{
    let verts = poly
        .exact_vertices()
        .ok_or_else(|| Error::ExactUnavailable(format!("no exact vertices for n = {}", poly.n())))?;
    let d = match dir {
        ProjectiveDirection::Exact { x, y } => [x.clone(), y.clone()],
        ProjectiveDirection::Approx { .. } => {
            return Err(Error::ExactUnavailable("direction is not exact".into()));
        }
    };
    let m = verts.len();
    let sides: Vec<SideQ> = (0..m)
        .map(|k| {
            let (a, b) = (&verts[k], &verts[(k + 1) % m]);
            let e = [&b.x - &a.x, &b.y - &a.y];
            SideQ {
                v: [a.x.clone(), a.y.clone()],
                normal: [-&e[1], e[0].clone()],
                e,
                shift: [-(&a.x + &b.x), -(&a.y + &b.y)],
            }
        })
        .collect();
    let mut p = [start.x.clone(), start.y.clone()];
    let inside = sides.iter().all(|s| dot(&[&p[0] - &s.v[0], &p[1] - &s.v[1]], &s.normal).is_negative());
    if !inside {
        return Err(Error::StartOutside);
    }
    let exits: Vec<(usize, Q2)> = sides
        .iter()
        .enumerate()
        .map(|(k, s)| (k, dot(&d, &s.normal)))
        .filter(|(_, dn)| dn.is_positive())
        .collect();
    for idx in 0..cfg.max_crossings {
        let mut best: Option<(usize, Q2)> = None;
        for (k, dn) in &exits {
            let s = &sides[*k];
            let t = dot(&[&s.v[0] - &p[0], &s.v[1] - &p[1]], &s.normal).checked_div(dn)?;
            if best.as_ref().map_or(true, |(_, bt)| t < *bt) {
                best = Some((*k, t));
            }
        }
        let (k, t) = best.expect("a direction always leaves a convex polygon");
        let side = &sides[k];
        let q = [&p[0] + &(&t * &d[0]), &p[1] + &(&t * &d[1])];
        let s = dot(&[&q[0] - &side.v[0], &q[1] - &side.v[1]], &side.e);
        if !s.is_positive() || s >= Q2::one() {
            return Err(Error::VertexHit { crossing: idx, side: k });
        }
        let next = [&q[0] + &side.shift[0], &q[1] + &side.shift[1]];
        if !visit(idx, k, &s, q) {
            return Ok(());
        }
        p = next;
    }
    Ok(())
}

fn exact_point(p: &Point<f64>) -> Result<Point<Q2>> {
    let conv = |v: f64| {
        BigRational::from_float(v).map(Q2::rational).ok_or_else(|| Error::Parse(format!("{v} is not finite")))
    };
    Ok(Point::new(conv(p.x)?, conv(p.y)?))
}

/// Traces `cfg.max_crossings` crossings and returns the cutting sequence with
/// its log. In exact mode the start point is read as an exact rational.
pub fn trace(
    poly: &LabeledPolygon,
    start: &Point<f64>,
    dir: &ProjectiveDirection,
    cfg: &TraceConfig,
) -> Result<(FiniteWord, Vec<Crossing>)> {
    cfg.validate()?;
    let n = poly.n();
    let mut letters = Vec::with_capacity(cfg.max_crossings);
    let mut log = Vec::with_capacity(cfg.max_crossings);
    match cfg.mode {
        TraceMode::Approx => walk_f64(poly, start, dir.theta(), cfg, |_, k, _, q| {
            letters.push((k % n) as u8);
            log.push(Crossing { letter: k % n, point: q, side: k });
            true
        })?,
        TraceMode::Exact => walk_exact(poly, &exact_point(start)?, dir, cfg, |_, k, _, q| {
            letters.push((k % n) as u8);
            log.push(Crossing { letter: k % n, point: [q[0].to_f64(), q[1].to_f64()], side: k });
            true
        })?,
    }
    Ok((FiniteWord::new(n, letters)?, log))
}

/// Exact trace from an exact start point.
pub fn trace_exact(
    poly: &LabeledPolygon,
    start: &Point<Q2>,
    dir: &ProjectiveDirection,
    cfg: &TraceConfig,
) -> Result<(FiniteWord, Vec<Crossing>)> {
    cfg.validate()?;
    let n = poly.n();
    let mut letters = Vec::with_capacity(cfg.max_crossings);
    let mut log = Vec::new();
    walk_exact(poly, start, dir, cfg, |_, k, _, q| {
        letters.push((k % n) as u8);
        log.push(Crossing { letter: k % n, point: [q[0].to_f64(), q[1].to_f64()], side: k });
        true
    })?;
    Ok((FiniteWord::new(n, letters)?, log))
}

/// The cutting sequence alone, for long floating traces.
pub fn trace_word(poly: &LabeledPolygon, start: &Point<f64>, theta: f64, max_crossings: usize) -> Result<FiniteWord> {
    let cfg = TraceConfig::new(max_crossings);
    cfg.validate()?;
    let n = poly.n();
    let mut letters = Vec::with_capacity(max_crossings);
    walk_f64(poly, start, theta, &cfg, |_, k, _, _| {
        letters.push((k % n) as u8);
        true
    })?;
    FiniteWord::new(n, letters)
}

/// Smallest number of crossings after which the first exit state (side and
/// position on it) recurs, if that happens within `cfg.max_crossings`.
pub fn detect_period(
    poly: &LabeledPolygon,
    start: &Point<f64>,
    dir: &ProjectiveDirection,
    cfg: &TraceConfig,
) -> Result<Option<usize>> {
    cfg.validate()?;
    let mut found = None;
    let mut bounded = cfg.clone();
    // one extra crossing so that a period equal to the bound is seen
    bounded.max_crossings = cfg.max_crossings + 1;
    match cfg.mode {
        TraceMode::Approx => {
            let mut first = None;
            walk_f64(poly, start, dir.theta(), &bounded, |idx, k, s, _| match first {
                None => {
                    first = Some((k, s));
                    true
                }
                Some((k0, s0)) => {
                    if k == k0 && (s - s0).abs() < cfg.epsilon {
                        found = Some(idx);
                        false
                    } else {
                        true
                    }
                }
            })?
        }
        TraceMode::Exact => return detect_period_exact(poly, &exact_point(start)?, dir, cfg),
    }
    Ok(found)
}

pub fn detect_period_exact(
    poly: &LabeledPolygon,
    start: &Point<Q2>,
    dir: &ProjectiveDirection,
    cfg: &TraceConfig,
) -> Result<Option<usize>> {
    cfg.validate()?;
    let mut bounded = cfg.clone();
    bounded.max_crossings = cfg.max_crossings + 1;
    let mut first: Option<(usize, Q2)> = None;
    let mut found = None;
    walk_exact(poly, start, dir, &bounded, |idx, k, s, _| match &first {
        None => {
            first = Some((k, s.clone()));
            true
        }
        Some((k0, s0)) => {
            if k == *k0 && s == s0 {
                found = Some(idx);
                false
            } else {
                true
            }
        }
    })?;
    Ok(found)
}

/// Uniform point in the disc of radius half the inradius about the centre.
pub fn sample_start_rng<R: Rng + ?Sized>(poly: &LabeledPolygon, rng: &mut R) -> Point<f64> {
    let r = 0.5 * poly.inradius() * rng.gen::<f64>().sqrt();
    let a = std::f64::consts::TAU * rng.gen::<f64>();
    Point::new(r * a.cos(), r * a.sin())
}

pub fn sample_start(poly: &LabeledPolygon, seed: u64) -> Point<f64> {
    sample_start_rng(poly, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Builds the serializable log of a trace.
pub fn trace_log(
    start: &Point<f64>,
    dir: &ProjectiveDirection,
    seed: Option<u64>,
    word: &FiniteWord,
    crossings: Vec<Crossing>,
) -> TraceLog {
    TraceLog {
        direction: dir.to_string(),
        theta: dir.theta(),
        start: [start.x, start.y],
        seed,
        word: word.to_string(),
        crossings,
    }
}

/// SVG picture of the polygon with side labels and the traced segments.
pub fn plot_svg(log: &TraceLog, poly: &LabeledPolygon) -> Result<String> {
    if log.crossings.is_empty() {
        return Err(Error::EmptyLog);
    }
    let n = poly.n();
    let r = poly.vertices().iter().map(|p| p.x.hypot(p.y)).fold(0.0, f64::max) + 0.25;
    let scale = 200.0 / r;
    let px = |x: f64| x * scale;
    let py = |y: f64| -y * scale;
    let size = 2.0 * r * scale;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.0}" height="{size:.0}" viewBox="{:.3} {:.3} {size:.3} {size:.3}">"#,
        -r * scale,
        -r * scale
    );
    let mut d = String::new();
    for (i, v) in poly.vertices().iter().enumerate() {
        let _ = write!(d, "{}{:.3} {:.3} ", if i == 0 { "M" } else { "L" }, px(v.x), py(v.y));
    }
    d.push('Z');
    let _ = writeln!(svg, r#"<path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#);
    for k in 0..poly.side_count() {
        let m = poly.midpoint(k);
        let len = m.x.hypot(m.y);
        let (lx, ly) = (m.x + 0.12 * m.x / len, m.y + 0.12 * m.y / len);
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            px(lx),
            py(ly),
            letter_name(poly.side_letter(k), n)
        );
    }
    let mut entry = log.start;
    for c in &log.crossings {
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="steelblue" stroke-width="0.8"/>"#,
            px(entry[0]),
            py(entry[1]),
            px(c.point[0]),
            py(c.point[1])
        );
        let mid = poly.midpoint(c.side);
        entry = [c.point[0] - 2.0 * mid.x, c.point[1] - 2.0 * mid.y];
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::build_polygon;
    use crate::symbolic::build_diagram;
    use std::f64::consts::PI;

    #[test]
    fn vertical_trace_reads_top_letter() {
        let oct = build_polygon(4).unwrap();
        let dir = ProjectiveDirection::approx(PI / 2.0).unwrap();
        let (w, log) = trace(&oct, &Point::new(0.0, 0.01), &dir, &TraceConfig::new(10)).unwrap();
        assert_eq!(w.to_string(), "AAAAAAAAAA");
        assert_eq!(log.len(), 10);
        let (w, _) = trace(&oct, &Point::new(0.0, 0.01), &ProjectiveDirection::multiple_of_pi(1, 2).unwrap(), &TraceConfig::exact(10)).unwrap();
        assert_eq!(w.to_string(), "AAAAAAAAAA");
    }

    #[test]
    fn sector_zero_trace_is_admissible() {
        let oct = build_polygon(4).unwrap();
        let start = sample_start(&oct, 7);
        let (w, _) = trace(&oct, &start, &ProjectiveDirection::approx(0.2).unwrap(), &TraceConfig::new(1000)).unwrap();
        assert!(build_diagram(0, 4).unwrap().admits(w.letters()));
    }

    #[test]
    fn aiming_at_a_vertex() {
        let oct = build_polygon(4).unwrap();
        let o3 = &oct.vertices()[2];
        let t = 0.8;
        let start = Point::new(o3.x - t * (PI / 8.0).cos(), o3.y - t * (PI / 8.0).sin());
        let dir = ProjectiveDirection::approx(PI / 8.0).unwrap();
        let err = trace(&oct, &start, &dir, &TraceConfig::new(5)).unwrap_err();
        assert!(matches!(err, Error::VertexHit { crossing: 0, side: 1 | 2 }));
    }

    #[test]
    fn exact_vertex_hit() {
        let oct = build_polygon(4).unwrap();
        // O_2 = (1/2, (1+√2)/2) straight above (1/2, 0)
        let start = Point::new(Q2::from_fracs(1, 2, 0, 1), Q2::zero());
        let err = trace_exact(&oct, &start, &ProjectiveDirection::from_cot(Q2::zero()), &TraceConfig::exact(3)).unwrap_err();
        assert!(matches!(err, Error::VertexHit { crossing: 0, .. }));
    }

    #[test]
    fn crossings_lie_on_sides_and_reenter_by_translation() {
        let oct = build_polygon(4).unwrap();
        let start = sample_start(&oct, 3);
        let (_, log) = trace(&oct, &start, &ProjectiveDirection::approx(1.1).unwrap(), &TraceConfig::new(500)).unwrap();
        for c in &log {
            let (a, b) = oct.side(c.side);
            let cross = (b.x - a.x) * (c.point[1] - a.y) - (b.y - a.y) * (c.point[0] - a.x);
            assert!(cross.abs() < 1e-10);
        }
    }

    #[test]
    fn periods() {
        let oct = build_polygon(4).unwrap();
        let start = sample_start(&oct, 11);
        let p = detect_period(&oct, &start, &ProjectiveDirection::multiple_of_pi(1, 8).unwrap(), &TraceConfig::exact(1000)).unwrap();
        assert!(p.is_some());
        let cot = ProjectiveDirection::from_cot(Q2::from_ints(2, 1));
        assert!(detect_period(&oct, &start, &cot, &TraceConfig::exact(10_000)).unwrap().is_some());
        let generic = ProjectiveDirection::approx(1.0).unwrap();
        assert_eq!(detect_period(&oct, &start, &generic, &TraceConfig::new(100_000)).unwrap(), None);
    }

    #[test]
    fn outside_start_rejected() {
        let oct = build_polygon(4).unwrap();
        let dir = ProjectiveDirection::approx(1.0).unwrap();
        assert_eq!(trace(&oct, &Point::new(3.0, 0.0), &dir, &TraceConfig::new(3)).unwrap_err(), Error::StartOutside);
    }

    #[test]
    fn svg_output() {
        let oct = build_polygon(4).unwrap();
        let start = Point::new(0.1, 0.2);
        let dir = ProjectiveDirection::approx(0.7).unwrap();
        let (w, log) = trace(&oct, &start, &dir, &TraceConfig::new(1)).unwrap();
        let svg = plot_svg(&trace_log(&start, &dir, None, &w, log), &oct).unwrap();
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(svg.matches("<path").count(), 1);
        let empty = trace_log(&start, &dir, None, &FiniteWord::empty(4), Vec::new());
        assert_eq!(plot_svg(&empty, &oct).unwrap_err(), Error::EmptyLog);
    }
}
