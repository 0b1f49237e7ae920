//! Coherence of words with respect to pairs of diagrams, the renormalization
//! scheme `w_{k+1} = n(w_k)'` and recognition of directions from windows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{FareyMap, SectorInterval};
use crate::generation::{generate, sandwich_groups, SandwichGroup};
use crate::polygon::letter_name;
use crate::symbolic::{admissible_diagrams, derive, diagram_set, permute, Sequence, WordWindow};

/// For each letter, the letters that sandwich it somewhere in the word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SandwichProfile {
    pub n: usize,
    pub sandwiched_by: BTreeMap<u8, BTreeSet<u8>>,
}

impl SandwichProfile {
    /// True when every recorded letter is sandwiched only as `g` prescribes.
    pub fn fits(&self, g: &SandwichGroup) -> bool {
        self.sandwiched_by.iter().all(|(&l, s)| s.len() == 1 && s.contains(&g.sandwich_of(l)))
    }

    pub fn has_conflict(&self) -> bool {
        self.sandwiched_by.values().any(|s| s.len() > 1)
    }

    pub fn is_empty(&self) -> bool {
        self.sandwiched_by.is_empty()
    }
}

impl fmt::Display for SandwichProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sandwiched_by
            .iter()
            .map(|(&l, s)| {
                let s: Vec<String> = s.iter().map(|&x| letter_name(x as usize, self.n)).collect();
                format!("{}:{{{}}}", letter_name(l as usize, self.n), s.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Positions `p` with equal neighbours; windows skip their end letters.
fn sandwiched_positions(w: &Sequence) -> Vec<usize> {
    let l = w.letters();
    let len = l.len();
    match w {
        Sequence::Window(_) if len < 3 => Vec::new(),
        Sequence::Window(_) => (1..len - 1).filter(|&j| l[j - 1] == l[j + 1]).collect(),
        Sequence::Periodic(_) => (0..len).filter(|&j| l[(j + len - 1) % len] == l[(j + 1) % len]).collect(),
    }
}

fn left_of(w: &Sequence, p: usize) -> u8 {
    let l = w.letters();
    l[(p + l.len() - 1) % l.len()]
}

pub fn sandwich_profile(w: &Sequence) -> SandwichProfile {
    let mut sandwiched_by: BTreeMap<u8, BTreeSet<u8>> = BTreeMap::new();
    for p in sandwiched_positions(w) {
        sandwiched_by.entry(w.letters()[p]).or_default().insert(left_of(w, p));
    }
    SandwichProfile { n: w.n(), sandwiched_by }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoherenceCondition {
    C0,
    C1,
    C2,
    C3,
}

impl fmt::Display for CoherenceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "condition", rename_all = "lowercase")]
pub enum Coherence {
    Accept,
    Reject(CoherenceCondition),
}

impl Coherence {
    pub fn is_accept(&self) -> bool {
        matches!(self, Coherence::Accept)
    }
}

/// Groups `G_l` fitting the sandwich profile of `π_i · w`.
pub fn fitting_groups(w: &Sequence, i: usize) -> Result<Vec<usize>> {
    let set = diagram_set(w.n())?;
    let profile = sandwich_profile(&permute(set.pi(i), w));
    Ok(sandwich_groups(w.n())?.iter().filter(|g| profile.fits(g)).map(|g| g.index).collect())
}

/// Checks conditions C0..C3 in order and reports the first failing one.
pub fn check_coherent(w: &Sequence, i: usize, j: usize) -> Result<Coherence> {
    let n = w.n();
    let set = diagram_set(n)?;
    if i >= set.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: set.len() });
    }
    if j == 0 || j >= set.len() {
        return Err(Error::IndexOutOfRange { index: j, bound: set.len() });
    }
    if !set.diagram(i).contains_table(&w.transition_table()) {
        return Ok(Coherence::Reject(CoherenceCondition::C0));
    }
    let groups = fitting_groups(w, i)?;
    if groups.is_empty() {
        return Ok(Coherence::Reject(CoherenceCondition::C1));
    }
    let derived = derive(&permute(set.pi(i), w));
    if !set.diagram(j).contains_table(&derived.transition_table()) {
        return Ok(Coherence::Reject(CoherenceCondition::C2));
    }
    if !groups.contains(&(j / 2)) {
        return Ok(Coherence::Reject(CoherenceCondition::C3));
    }
    Ok(Coherence::Accept)
}

/// Every `j` for which `w` is coherent with respect to `(i, j)`.
pub fn coherent_targets(w: &Sequence, i: usize) -> Result<Vec<usize>> {
    let m = diagram_set(w.n())?.len();
    let mut out = Vec::new();
    for j in 1..m {
        if check_coherent(w, i, j)?.is_accept() {
            out.push(j);
        }
    }
    Ok(out)
}

/// `w = g_{j→i}(v)` with `v = n(w)'`, for each listed `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub diagrams: Vec<usize>,
    pub derived: Sequence,
}

fn regenerates(w: &Sequence, i: usize, j: usize, v: &Sequence) -> Result<bool> {
    let set = diagram_set(w.n())?;
    if !set.diagram(j).contains_table(&v.transition_table()) {
        return Ok(false);
    }
    let g = generate(j, i, v)?;
    match w {
        Sequence::Periodic(_) => Ok(v.is_empty() || &g == w),
        Sequence::Window(_) => {
            let pos = sandwiched_positions(w);
            let (Some(&first), Some(&last)) = (pos.first(), pos.last()) else {
                return Ok(true);
            };
            // the outer neighbours of the first and last kept letters are not
            // covered by the regenerated segment
            let l = w.letters();
            let norm = set.pi(i);
            let group = &sandwich_groups(w.n())?[j / 2];
            let outer_ok = [first, last]
                .iter()
                .all(|&p| norm.apply(l[p - 1] as usize) == group.sandwich_of(norm.apply(l[p] as usize) as u8) as usize);
            Ok(outer_ok && g.letters() == &l[first..=last])
        }
    }
}

/// Lists the diagrams `j` with `w = g_{j→i}(n(w)')`, regenerating and
/// comparing for each candidate.
pub fn decompose_generation(w: &Sequence, i: usize) -> Result<Decomposition> {
    let set = diagram_set(w.n())?;
    if i >= set.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: set.len() });
    }
    if !set.diagram(i).contains_table(&w.transition_table()) {
        return Err(Error::InadmissibleInput(i));
    }
    let v = derive(&permute(set.pi(i), w));
    let mut diagrams = Vec::new();
    for j in 1..set.len() {
        if regenerates(w, i, j, &v)? {
            diagrams.push(j);
        }
    }
    if diagrams.is_empty() {
        return Err(Error::NotCoherent);
    }
    Ok(Decomposition { diagrams, derived: v })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum HaltReason {
    /// Fewer than two letters left.
    WindowExhausted,
    Inadmissible,
    Ambiguous { candidates: Vec<usize> },
    /// The chosen start diagram does not admit the word.
    StartRejected { diagram: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormalizationStep {
    pub word: Sequence,
    pub candidates: Vec<usize>,
    pub diagram: usize,
    pub normalized: Sequence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormalizationTrace {
    pub steps: Vec<RenormalizationStep>,
    /// Word left after the last step.
    pub last: Sequence,
    pub halt: Option<HaltReason>,
}

impl RenormalizationTrace {
    pub fn diagrams(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.diagram).collect()
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

fn candidates(w: &Sequence, step: usize) -> Result<Vec<usize>> {
    // beyond the first step the diagram index is never 0
    Ok(admissible_diagrams(w)?.into_iter().filter(|&d| step == 0 || d != 0).collect())
}

/// Runs `w_{k+1} = n(w_k)'` for up to `max_steps` diagrams, requiring a unique
/// admissible diagram at each step (except the first when `start` is given).
pub fn renormalize(w: &Sequence, max_steps: usize, start: Option<usize>) -> Result<RenormalizationTrace> {
    let set = diagram_set(w.n())?;
    let mut cur = w.clone();
    let mut steps = Vec::new();
    let mut halt = None;
    while steps.len() < max_steps {
        let k = steps.len();
        if cur.len() < 2 {
            halt = Some(HaltReason::WindowExhausted);
            break;
        }
        let cands = candidates(&cur, k)?;
        let d = match (k, start) {
            (0, Some(s)) if cands.contains(&s) => s,
            (0, Some(s)) => {
                halt = Some(HaltReason::StartRejected { diagram: s });
                break;
            }
            _ => match cands.as_slice() {
                [] => {
                    halt = Some(HaltReason::Inadmissible);
                    break;
                }
                [d] => *d,
                _ => {
                    halt = Some(HaltReason::Ambiguous { candidates: cands });
                    break;
                }
            },
        };
        let normalized = permute(set.pi(d), &cur);
        let next = derive(&normalized);
        steps.push(RenormalizationStep { word: cur, candidates: cands, diagram: d, normalized });
        cur = next;
    }
    Ok(RenormalizationTrace { steps, last: cur, halt })
}

/// Sequences `s_0 .. s_{depth-1}` starting at `start` along which a periodic
/// word stays coherent, i.e. `w_k` is coherent with respect to `(s_k, s_{k+1})`.
/// At most `limit` sequences are returned, in lexicographic order.
pub fn coherent_sequences(w: &Sequence, start: usize, depth: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    let set = diagram_set(w.n())?;
    if !set.diagram(start % set.len()).contains_table(&w.transition_table()) || start >= set.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut seq = vec![start];
    fn dfs(
        w: &Sequence,
        seq: &mut Vec<usize>,
        depth: usize,
        limit: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if out.len() >= limit {
            return Ok(());
        }
        if seq.len() >= depth || w.is_empty() {
            out.push(seq.clone());
            return Ok(());
        }
        let i = *seq.last().unwrap();
        let set = diagram_set(w.n())?;
        let next = derive(&permute(set.pi(i), w));
        for j in coherent_targets(w, i)? {
            seq.push(j);
            dfs(&next, seq, depth, limit, out)?;
            seq.pop();
        }
        Ok(())
    }
    dfs(w, &mut seq, depth, limit, &mut out)?;
    Ok(out)
}

/// `Σ̄[d_0; d_1, .., d_k]` from the diagrams of a window, `k = depth`.
pub fn recognize_direction(w: &WordWindow, depth: usize) -> Result<SectorInterval> {
    let seq = Sequence::Window(w.clone());
    let trace = renormalize(&seq, depth + 1, None)?;
    let reached = trace.depth();
    match trace.halt {
        None => FareyMap::new(seq.n())?.sector_interval(&trace.diagrams()),
        Some(HaltReason::Ambiguous { candidates }) => Err(Error::AmbiguousDiagram { step: reached, candidates }),
        Some(HaltReason::Inadmissible) => Err(Error::Inadmissible),
        Some(_) => Err(Error::InsufficientWindow { depth_reached: reached }),
    }
}
