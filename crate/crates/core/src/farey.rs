//! The piecewise projective Farey map of the 2n-gon, its itineraries and the
//! additive continued fraction they define; also the classical square Farey map.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{moebius_apply, moebius_apply_f64, ProjectiveDirection, Q2};
use crate::polygon::{isometry_nu, veech_elements, VeechMatrix};

/// The branch `F_i = γ · ν_i` on the closed sector `Σ̄_i`.
#[derive(Clone, Debug)]
pub struct FareyBranch {
    pub sector: usize,
    pub matrix: VeechMatrix,
    pub inverse: VeechMatrix,
    /// Endpoints `iπ/2n` and `(i+1)π/2n`.
    pub lo: ProjectiveDirection,
    pub hi: ProjectiveDirection,
}

#[derive(Clone, Debug)]
pub struct FareyMap {
    n: usize,
    branches: Vec<FareyBranch>,
    /// cot(kπ/2n) for k = 1..2n-1, when exact.
    cots: Option<Vec<Q2>>,
}

/// The direction kπ/2n, exact when possible.
fn boundary_direction(k: usize, n: usize) -> ProjectiveDirection {
    match n {
        2 | 4 => ProjectiveDirection::multiple_of_pi(k as u32, 2 * n as u32).expect("divides 8"),
        _ => ProjectiveDirection::Approx { theta: k as f64 * PI / (2 * n) as f64 },
    }
}

/// Outcome of a termination test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Termination {
    /// The orbit reached a fixed point after `depth` steps; `proven` is true
    /// for exact arithmetic.
    Terminating { depth: usize, tail: usize, proven: bool },
    NotWithinDepth,
}

impl Termination {
    pub fn is_terminating(&self) -> bool {
        matches!(self, Termination::Terminating { .. })
    }
}

/// A closed interval of directions with the prefix that defines it.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorInterval {
    pub lo: ProjectiveDirection,
    pub hi: ProjectiveDirection,
    pub prefix: Vec<usize>,
}

impl SectorInterval {
    pub fn lo_theta(&self) -> f64 {
        self.lo.theta()
    }

    pub fn hi_theta(&self) -> f64 {
        self.hi.theta()
    }

    pub fn width(&self) -> f64 {
        self.hi_theta() - self.lo_theta()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_theta(&self, theta: f64, tol: f64) -> bool {
        theta >= self.lo_theta() - tol && theta <= self.hi_theta() + tol
    }

    /// Containment, exact when all three directions are exact.
    pub fn contains(&self, d: &ProjectiveDirection) -> bool {
        self.lo.angle_cmp(d) != Ordering::Greater && d.angle_cmp(&self.hi) != Ordering::Greater
    }

    pub fn contains_interval(&self, other: &SectorInterval) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }
}

/// An additive continued fraction expansion `[s_0; s_1, ...]`, optionally
/// followed by a constant tail repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub n: usize,
    pub entries: Vec<usize>,
    pub tail: Option<usize>,
}

impl Expansion {
    pub fn new(n: usize, entries: Vec<usize>, tail: Option<usize>) -> Self {
        Expansion { n, entries, tail }
    }

    /// Entry `k`, reading into the tail.
    pub fn entry(&self, k: usize) -> Option<usize> {
        self.entries.get(k).copied().or(self.tail)
    }

    pub fn prefix(&self, len: usize) -> Vec<usize> {
        (0..len).map_while(|k| self.entry(k)).collect()
    }

    /// Entries lie in `0..2n` and 0 occurs at most in front.
    pub fn in_s_star(&self) -> bool {
        let m = 2 * self.n;
        let ok = |k: usize, s: usize| s < m && (s != 0 || k == 0);
        self.entries.iter().enumerate().all(|(k, &s)| ok(k, s))
            && self.tail.map_or(true, |t| ok(self.entries.len(), t))
    }

    /// The further constraints on tails that itineraries satisfy: an
    /// eventually-1 tail follows an odd entry, an eventually-(2n-1) tail an
    /// even non-zero one.
    pub fn is_sector_sequence(&self) -> bool {
        if !self.in_s_star() {
            return false;
        }
        let top = 2 * self.n - 1;
        let Some(t) = self.tail else { return true };
        if t != 1 && t != top {
            return true;
        }
        let Some(&prev) = self.entries.iter().rev().find(|&&s| s != t) else {
            return true;
        };
        if t == 1 {
            prev % 2 == 1
        } else {
            prev % 2 == 0 && prev != 0
        }
    }

    /// The second expansion of a terminating direction, obtained by lowering
    /// the entry in front of the tail by one.
    pub fn alternate(&self) -> Option<Expansion> {
        let t = self.tail?;
        let top = 2 * self.n - 1;
        let last = *self.entries.last()?;
        let allowed = (t == 1 && last % 2 == 1 && last >= 3) || (t == top && last % 2 == 0 && last >= 2);
        if !allowed || last == t {
            return None;
        }
        let mut entries = self.entries.clone();
        *entries.last_mut().unwrap() -= 1;
        Some(Expansion { n: self.n, entries, tail: Some(t) })
    }
}

impl FareyMap {
    pub fn new(n: usize) -> Result<Self> {
        let (_, gamma) = veech_elements(n)?;
        let branches = (0..2 * n)
            .map(|i| {
                let matrix = gamma.product(&isometry_nu(i, n)?);
                Ok(FareyBranch {
                    sector: i,
                    inverse: matrix.inverse()?,
                    matrix,
                    lo: boundary_direction(i, n),
                    hi: boundary_direction(i + 1, n),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cots = match n {
            2 | 4 => Some((1..2 * n).map(|k| boundary_direction(k, n).cot().unwrap()).collect()),
            _ => None,
        };
        Ok(FareyMap { n, branches, cots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch(&self, i: usize) -> &FareyBranch {
        &self.branches[i]
    }

    pub fn is_exact(&self) -> bool {
        self.cots.is_some()
    }

    fn step(&self) -> f64 {
        PI / (2 * self.n) as f64
    }

    /// Index of the half-open sector `[iπ/2n, (i+1)π/2n)` containing `d`; π
    /// belongs to the last sector.
    pub fn sector(&self, d: &ProjectiveDirection) -> usize {
        let last = 2 * self.n - 1;
        match (d, &self.cots) {
            (ProjectiveDirection::Exact { x, y }, Some(cots)) => {
                if y.is_zero() {
                    return if x.is_positive() { 0 } else { last };
                }
                cots.iter().filter(|c| x <= *c).count()
            }
            _ => ((d.theta() / self.step()).floor() as usize).min(last),
        }
    }

    fn fix_forward(&self, theta: f64) -> f64 {
        // images lie in [π/2n, π]; a value near 0 is the horizontal line read as π
        if theta < self.step() / 2.0 {
            PI
        } else {
            theta
        }
    }

    /// `F_i(d)` without checking that `d` lies in sector `i`.
    pub fn apply_branch(&self, i: usize, d: &ProjectiveDirection) -> Result<ProjectiveDirection> {
        let b = &self.branches[i];
        match (d, &b.matrix.exact) {
            (ProjectiveDirection::Exact { .. }, Some(m)) => moebius_apply(m, d),
            _ => Ok(ProjectiveDirection::Approx { theta: self.fix_forward(moebius_apply_f64(&b.matrix.approx, d.theta())) }),
        }
    }

    /// `F(d)` together with the sector of `d`.
    pub fn apply(&self, d: &ProjectiveDirection) -> Result<(ProjectiveDirection, usize)> {
        let i = self.sector(d);
        Ok((self.apply_branch(i, d)?, i))
    }

    /// `F_i^{-1}(d)`, a direction in the closed sector `Σ̄_i`.
    pub fn inverse_branch(&self, i: usize, d: &ProjectiveDirection) -> Result<ProjectiveDirection> {
        let b = &self.branches[i];
        let last = 2 * self.n - 1;
        match (d, &b.inverse.exact) {
            (ProjectiveDirection::Exact { .. }, Some(m)) => {
                let r = moebius_apply(m, d)?;
                Ok(match &r {
                    ProjectiveDirection::Exact { y, .. } if y.is_zero() => {
                        if i == 0 {
                            ProjectiveDirection::zero()
                        } else {
                            ProjectiveDirection::pi()
                        }
                    }
                    _ => r,
                })
            }
            _ => {
                let mut r = moebius_apply_f64(&b.inverse.approx, d.theta());
                if i == 0 && r > PI / 2.0 {
                    r = 0.0;
                } else if i == last && r < PI / 2.0 {
                    r = PI;
                }
                let (lo, hi) = (i as f64 * self.step(), (i + 1) as f64 * self.step());
                Ok(ProjectiveDirection::Approx { theta: r.clamp(lo, hi) })
            }
        }
    }

    /// Sectors of `d, F(d), F²(d), ...`.
    pub fn itinerary(&self, d: &ProjectiveDirection, depth: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(depth);
        let mut cur = d.clone();
        for _ in 0..depth {
            let (next, s) = self.apply(&cur)?;
            out.push(s);
            cur = next;
        }
        Ok(out)
    }

    fn check_prefix(&self, prefix: &[usize]) -> Result<()> {
        if prefix.is_empty() {
            return Err(Error::InvalidPrefix("empty prefix".into()));
        }
        let m = 2 * self.n;
        for (k, &s) in prefix.iter().enumerate() {
            if s >= m {
                return Err(Error::InvalidPrefix(format!("entry {s} at position {k} is not a sector index")));
            }
            if s == 0 && k > 0 {
                return Err(Error::InvalidPrefix(format!("entry 0 at position {k}")));
            }
        }
        Ok(())
    }

    fn pull_back(&self, prefix: &[usize], lo: ProjectiveDirection, hi: ProjectiveDirection) -> Result<SectorInterval> {
        let (mut lo, mut hi) = (lo, hi);
        for &s in prefix.iter().rev() {
            lo = self.inverse_branch(s, &lo)?;
            hi = self.inverse_branch(s, &hi)?;
        }
        if lo.angle_cmp(&hi) == Ordering::Greater {
            std::mem::swap(&mut lo, &mut hi);
        }
        Ok(SectorInterval { lo, hi, prefix: Vec::new() })
    }

    /// `F_{s_0}^{-1} ⋯ F_{s_k}^{-1} [0, π]`.
    pub fn sector_interval(&self, prefix: &[usize]) -> Result<SectorInterval> {
        self.check_prefix(prefix)?;
        let (init, last) = prefix.split_at(prefix.len() - 1);
        let b = &self.branches[last[0]];
        let mut iv = self.pull_back(init, b.lo.clone(), b.hi.clone())?;
        iv.prefix = prefix.to_vec();
        Ok(iv)
    }

    /// Fixed point of the branch repeated in a constant tail, if it has one.
    pub fn tail_fixed_point(&self, tail: usize) -> Option<ProjectiveDirection> {
        if tail == 1 {
            Some(boundary_direction(1, self.n))
        } else if tail == 2 * self.n - 1 {
            Some(boundary_direction(2 * self.n, self.n))
        } else {
            None
        }
    }

    /// The interval cut out by the first `depth` entries; expansions ending in
    /// a constant 1 or 2n-1 tail give the exact limit point instead.
    pub fn direction_from_expansion(&self, s: &Expansion, depth: usize) -> Result<SectorInterval> {
        if !s.in_s_star() {
            return Err(Error::InvalidPrefix("expansion is not in S*".into()));
        }
        if let Some(fix) = s.tail.and_then(|t| self.tail_fixed_point(t)) {
            let mut iv = if s.entries.is_empty() {
                SectorInterval { lo: fix.clone(), hi: fix, prefix: Vec::new() }
            } else {
                self.check_prefix(&s.entries)?;
                self.pull_back(&s.entries, fix.clone(), fix)?
            };
            iv.prefix = s.entries.clone();
            iv.prefix.push(s.tail.unwrap());
            return Ok(iv);
        }
        self.sector_interval(&s.prefix(depth.max(1)))
    }

    /// Iterates the map looking for one of its two fixed points.
    ///
    /// Exact directions are tested by exact equality. Floating directions use a
    /// heuristic: the last 10 entries are constant 1 or 2n-1 and the final
    /// iterate lies within 1e-6 of the corresponding fixed point.
    pub fn is_terminating(&self, d: &ProjectiveDirection, max_depth: usize) -> Result<Termination> {
        let top = 2 * self.n - 1;
        let fix_lo = boundary_direction(1, self.n);
        let fix_hi = ProjectiveDirection::pi();
        let exact = d.is_exact() && self.is_exact();
        let mut cur = d.clone();
        let mut sectors = Vec::with_capacity(max_depth);
        for depth in 0..max_depth {
            if exact {
                if cur == fix_lo {
                    return Ok(Termination::Terminating { depth, tail: 1, proven: true });
                }
                if cur == fix_hi {
                    return Ok(Termination::Terminating { depth, tail: top, proven: true });
                }
            }
            let (next, s) = self.apply(&cur)?;
            sectors.push(s);
            cur = next;
        }
        if exact || sectors.len() < 10 {
            return Ok(Termination::NotWithinDepth);
        }
        let tail = &sectors[sectors.len() - 10..];
        let t = tail[0];
        if tail.iter().all(|&s| s == t) && (t == 1 || t == top) {
            let target = if t == 1 { fix_lo.theta() } else { PI };
            if (cur.theta() - target).abs() < 1e-6 {
                let start = sectors.iter().rposition(|&s| s != t).map_or(0, |p| p + 1);
                return Ok(Termination::Terminating { depth: start, tail: t, proven: false });
            }
        }
        Ok(Termination::NotWithinDepth)
    }

    /// The itinerary as an expansion: entries up to the fixed point plus the
    /// constant tail when the direction terminates within `depth`, otherwise
    /// the first `depth` entries.
    pub fn expansion(&self, d: &ProjectiveDirection, depth: usize) -> Result<Expansion> {
        match self.is_terminating(d, depth)? {
            Termination::Terminating { depth: k, tail, proven: true } => {
                Ok(Expansion::new(self.n, self.itinerary(d, k)?, Some(tail)))
            }
            _ => Ok(Expansion::new(self.n, self.itinerary(d, depth)?, None)),
        }
    }
}

/// One-shot `F(d)` for polygon size `n`.
pub fn farey_apply(d: &ProjectiveDirection, n: usize) -> Result<(ProjectiveDirection, usize)> {
    FareyMap::new(n)?.apply(d)
}

pub fn itinerary(d: &ProjectiveDirection, n: usize, depth: usize) -> Result<Vec<usize>> {
    FareyMap::new(n)?.itinerary(d, depth)
}

pub fn sector_interval(prefix: &[usize], n: usize) -> Result<SectorInterval> {
    FareyMap::new(n)?.sector_interval(prefix)
}

pub fn direction_from_expansion(s: &Expansion, depth: usize) -> Result<SectorInterval> {
    FareyMap::new(s.n)?.direction_from_expansion(s, depth)
}

pub fn is_terminating(d: &ProjectiveDirection, n: usize, max_depth: usize) -> Result<Termination> {
    FareyMap::new(n)?.is_terminating(d, max_depth)
}

/// The classical Farey map on `[0, 1]`.
pub fn square_farey(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::AngleOutOfRange(t));
    }
    Ok(if t <= 0.5 { t / (1.0 - t) } else { (1.0 - t) / t })
}

pub fn square_farey_exact(t: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    if t < &BigRational::zero() || t > &one {
        return Err(Error::Parse(format!("{t} is outside [0, 1]")));
    }
    Ok(if t <= &half { t / (&one - t) } else { (&one - t) / t })
}

/// The coordinate `sin θ / (cos θ + sin θ)` on `[0, π/2]`.
pub fn square_coordinate(theta: f64) -> f64 {
    theta.sin() / (theta.cos() + theta.sin())
}
