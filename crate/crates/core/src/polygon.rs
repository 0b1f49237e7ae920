//! Regular 2n-gons with unit sides, the labelling of their side pairs, the
//! dihedral isometries ν_i with the letter permutations they induce, and the
//! affine Veech elements σ and γ.
//!
//! Vertices run clockwise starting from the left end of the horizontal top
//! side. Side `k` joins vertex `k` to vertex `k + 1`; sides `k` and `k + n`
//! carry letter `k mod n` and are glued by a translation.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{Mat2, Scalar, Q2};

#[derive(Clone, Debug, PartialEq)]
pub struct Point<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl Point<Q2> {
    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.x.to_f64(), self.y.to_f64())
    }
}

/// Display name of a letter: `A`.. for alphabets of at most four letters,
/// `L1`, `L2`, .. otherwise.
pub fn letter_name(letter: usize, n: usize) -> String {
    if n <= 4 {
        ((b'A' + letter as u8) as char).to_string()
    } else {
        format!("L{}", letter + 1)
    }
}

/// Inverse of [`letter_name`].
pub fn parse_letter(s: &str, n: usize) -> Result<usize> {
    let bad = || Error::Parse(format!("'{s}' is not a letter of the {n}-letter alphabet"));
    let idx = if let Some(num) = s.strip_prefix('L') {
        num.parse::<usize>().map_err(|_| bad())?.checked_sub(1).ok_or_else(bad)?
    } else {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'A'..='Z'), None) => (c as u8 - b'A') as usize,
            _ => return Err(bad()),
        }
    };
    if idx < n {
        Ok(idx)
    } else {
        Err(bad())
    }
}

/// A regular 2n-gon with unit sides centred at the origin.
#[derive(Clone, Debug)]
pub struct LabeledPolygon {
    n: usize,
    vertices: Vec<Point<f64>>,
    exact_vertices: Option<Vec<Point<Q2>>>,
}

fn exact_vertices(n: usize) -> Option<Vec<Point<Q2>>> {
    let half = Q2::from_fracs(1, 2, 0, 1);
    match n {
        2 => Some(vec![
            Point::new(-half.clone(), half.clone()),
            Point::new(half.clone(), half.clone()),
            Point::new(half.clone(), -half.clone()),
            Point::new(-half.clone(), -half),
        ]),
        4 => {
            // apothem (1 + √2)/2
            let h = Q2::from_fracs(1, 2, 1, 2);
            Some(vec![
                Point::new(-half.clone(), h.clone()),
                Point::new(half.clone(), h.clone()),
                Point::new(h.clone(), half.clone()),
                Point::new(h.clone(), -half.clone()),
                Point::new(half.clone(), -h.clone()),
                Point::new(-half.clone(), -h.clone()),
                Point::new(-h.clone(), -half.clone()),
                Point::new(-h, half),
            ])
        }
        _ => None,
    }
}

pub fn build_polygon(n: usize) -> Result<LabeledPolygon> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let exact = exact_vertices(n);
    let vertices = match &exact {
        Some(v) => v.iter().map(Point::to_f64).collect(),
        None => {
            let r = 1.0 / (2.0 * (PI / (2 * n) as f64).sin());
            (0..2 * n)
                .map(|k| {
                    let a = PI / 2.0 + PI / (2 * n) as f64 - k as f64 * PI / n as f64;
                    Point::new(r * a.cos(), r * a.sin())
                })
                .collect()
        }
    };
    Ok(LabeledPolygon { n, vertices, exact_vertices: exact })
}

impl LabeledPolygon {
    /// Number of side pairs, which is also the alphabet size.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side_count(&self) -> usize {
        2 * self.n
    }

    pub fn vertices(&self) -> &[Point<f64>] {
        &self.vertices
    }

    pub fn exact_vertices(&self) -> Option<&[Point<Q2>]> {
        self.exact_vertices.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact_vertices.is_some()
    }

    pub fn side_letter(&self, side: usize) -> usize {
        side % self.n
    }

    pub fn opposite_side(&self, side: usize) -> usize {
        (side + self.n) % (2 * self.n)
    }

    /// Endpoints of side `k`, in clockwise order.
    pub fn side(&self, k: usize) -> (&Point<f64>, &Point<f64>) {
        (&self.vertices[k], &self.vertices[(k + 1) % (2 * self.n)])
    }

    pub fn midpoint(&self, k: usize) -> Point<f64> {
        let (p, q) = self.side(k);
        Point::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
    }

    pub fn exact_midpoint(&self, k: usize) -> Option<Point<Q2>> {
        let v = self.exact_vertices.as_ref()?;
        let (p, q) = (&v[k], &v[(k + 1) % (2 * self.n)]);
        let half = Q2::from_fracs(1, 2, 0, 1);
        Some(Point::new(&(&p.x + &q.x) * &half, &(&p.y + &q.y) * &half))
    }

    /// Distance from the centre to each side.
    pub fn inradius(&self) -> f64 {
        0.5 / (PI / (2 * self.n) as f64).tan()
    }

    pub fn export(&self) -> PolygonExport {
        PolygonExport {
            n: self.n,
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
            exact_vertices: self.exact_vertices.as_ref().map(|v| {
                v.iter().map(|p| [p.x.to_string(), p.y.to_string()]).collect()
            }),
            side_labels: (0..2 * self.n).map(|k| letter_name(self.side_letter(k), self.n)).collect(),
        }
    }
}

/// Serializable view of a polygon.
#[derive(Clone, Debug, Serialize)]
pub struct PolygonExport {
    pub n: usize,
    pub vertices: Vec<[f64; 2]>,
    pub exact_vertices: Option<Vec<[String; 2]>>,
    pub side_labels: Vec<String>,
}

/// A bijection of the alphabet `{0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LetterPermutation {
    map: Vec<usize>,
}

impl LetterPermutation {
    pub fn identity(n: usize) -> Self {
        LetterPermutation { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || seen[v] {
                return Err(Error::Parse(format!("{map:?} is not a bijection")));
            }
            seen[v] = true;
        }
        Ok(LetterPermutation { map })
    }

    /// Builds a permutation from disjoint cycles; `(a b c)` sends a to b, b to c, c to a.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::IndexOutOfRange { index: a, bound: n });
                }
                map[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_map(map)
    }

    /// Parses cycle notation such as `(AD)(BC)`, `(L1 L4)(L2 L3)` or `id`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        if s == "id" || s == "()" || s.is_empty() {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        for chunk in s.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("bad cycle notation '{s}'")))?;
            let letters = if body.contains('L') {
                body.split_whitespace().map(|t| parse_letter(t, n)).collect::<Result<Vec<_>>>()?
            } else {
                body.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| parse_letter(&c.to_string(), n))
                    .collect::<Result<Vec<_>>>()?
            };
            cycles.push(letters);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(n, &refs)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, letter: usize) -> usize {
        self.map[letter]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        LetterPermutation { map: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LetterPermutation) -> Self {
        LetterPermutation { map: other.map.iter().map(|&v| self.map[v]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Non-trivial cycles, each starting at its smallest letter.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.map[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.map[cur];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for LetterPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.map.len();
        if self.is_identity() {
            return write!(f, "id");
        }
        for cycle in self.cycles() {
            let names: Vec<String> = cycle.iter().map(|&l| letter_name(l, n)).collect();
            let sep = if n <= 4 { "" } else { " " };
            write!(f, "({})", names.join(sep))?;
        }
        Ok(())
    }
}

/// A matrix that is always available in floating point and, for the square
/// and the octagon, also exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct VeechMatrix {
    pub approx: Mat2<f64>,
    pub exact: Option<Mat2<Q2>>,
}

impl VeechMatrix {
    fn from_exact(m: Mat2<Q2>) -> Self {
        VeechMatrix { approx: m.to_f64(), exact: Some(m) }
    }

    fn from_f64(m: Mat2<f64>) -> Self {
        VeechMatrix { approx: m, exact: None }
    }

    pub fn product(&self, rhs: &VeechMatrix) -> VeechMatrix {
        match (&self.exact, &rhs.exact) {
            (Some(a), Some(b)) => VeechMatrix::from_exact(a.product(b)),
            _ => VeechMatrix::from_f64(self.approx.product(&rhs.approx)),
        }
    }

    pub fn inverse(&self) -> Result<VeechMatrix> {
        Ok(match &self.exact {
            Some(m) => VeechMatrix::from_exact(m.inverse()?),
            None => VeechMatrix::from_f64(self.approx.inverse()?),
        })
    }
}

fn exact_trig(n: usize) -> Option<(Q2, Q2)> {
    // cos(π/n), sin(π/n)
    match n {
        2 => Some((Q2::zero(), Q2::one())),
        4 => Some((Q2::from_fracs(0, 1, 1, 2), Q2::from_fracs(0, 1, 1, 2))),
        _ => None,
    }
}

fn nu_from_trig<T: Scalar>(i: usize, c: T, s: T) -> Mat2<T> {
    let alpha = Mat2::new(T::one(), T::zero(), T::zero(), -T::one());
    // reflection in the line at angle π/2n
    let beta = Mat2::new(c.clone(), s.clone(), s, -c);
    let k = (i / 2) as u32;
    if i % 2 == 0 {
        alpha.product(&beta).pow(k)
    } else {
        beta.product(&alpha).pow(k).product(&beta)
    }
}

/// The isometry ν_i taking the closed sector `[iπ/2n, (i+1)π/2n]` onto `[0, π/2n]`.
pub fn isometry_nu(i: usize, n: usize) -> Result<VeechMatrix> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    if i >= 2 * n {
        return Err(Error::IndexOutOfRange { index: i, bound: 2 * n });
    }
    Ok(match exact_trig(n) {
        Some((c, s)) => VeechMatrix::from_exact(nu_from_trig(i, c, s)),
        None => {
            let a = PI / n as f64;
            VeechMatrix::from_f64(nu_from_trig(i, a.cos(), a.sin()))
        }
    })
}

/// cot(π/2n), exactly when it lies in Q(√2).
pub fn cot_half_angle(n: usize) -> (f64, Option<Q2>) {
    let exact = match n {
        2 => Some(Q2::one()),
        4 => Some(Q2::from_ints(1, 1)),
        _ => None,
    };
    (1.0 / (PI / (2 * n) as f64).tan(), exact)
}

/// The shear σ and the affine reflection γ = σ · diag(-1, 1).
pub fn veech_elements(n: usize) -> Result<(VeechMatrix, VeechMatrix)> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    Ok(match cot_half_angle(n) {
        (_, Some(c)) => {
            let two_c = &Q2::from_ints(2, 0) * &c;
            (
                VeechMatrix::from_exact(Mat2::new(Q2::one(), two_c.clone(), Q2::zero(), Q2::one())),
                VeechMatrix::from_exact(Mat2::new(-Q2::one(), two_c, Q2::zero(), Q2::one())),
            )
        }
        (c, None) => (
            VeechMatrix::from_f64(Mat2::new(1.0, 2.0 * c, 0.0, 1.0)),
            VeechMatrix::from_f64(Mat2::new(-1.0, 2.0 * c, 0.0, 1.0)),
        ),
    })
}

/// The permutation of letters induced by ν_i, found by locating the image of
/// every side midpoint.
pub fn induced_permutation(i: usize, n: usize) -> Result<LetterPermutation> {
    let poly = build_polygon(n)?;
    let nu = isometry_nu(i, n)?;
    let sides = 2 * n;
    let mut map = vec![usize::MAX; n];
    for k in 0..n {
        let target = match (&nu.exact, poly.exact_midpoint(k)) {
            (Some(m), Some(mid)) => {
                let (x, y) = m.apply(&mid.x, &mid.y);
                (0..sides).find(|&j| {
                    let mj = poly.exact_midpoint(j).unwrap();
                    mj.x == x && mj.y == y
                })
            }
            _ => {
                let mid = poly.midpoint(k);
                let (x, y) = nu.approx.apply(&mid.x, &mid.y);
                (0..sides).find(|&j| {
                    let mj = poly.midpoint(j);
                    (mj.x - x).hypot(mj.y - y) < 1e-9
                })
            }
        };
        let j = target.ok_or_else(|| {
            Error::Parse(format!("image of side {k} under nu_{i} is not a side"))
        })?;
        map[k] = poly.side_letter(j);
    }
    LetterPermutation::from_map(map)
}
