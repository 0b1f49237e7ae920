use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polygon::{induced_permutation, letter_name, LetterPermutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DiagramIndex {
    /// `D_i` for trajectories with direction in sector `i`.
    Sector(usize),
    /// `D_{k-1} ∩ D_k`.
    Boundary(usize),
}

impl fmt::Display for DiagramIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramIndex::Sector(i) => write!(f, "D{i}"),
            DiagramIndex::Boundary(k) => write!(f, "D{},{k}", k.checked_sub(1).map_or("-1".into(), |v| v.to_string())),
        }
    }
}

/// Allowed consecutive-letter pairs, stored as an `n × n` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDiagram {
    n: usize,
    table: Vec<bool>,
    index: DiagramIndex,
}

impl TransitionDiagram {
    pub fn from_edges(n: usize, edges: &[(usize, usize)], index: DiagramIndex) -> Self {
        let mut table = vec![false; n * n];
        for &(a, b) in edges {
            table[a * n + b] = true;
        }
        TransitionDiagram { n, table, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> DiagramIndex {
        self.index
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.table[a * self.n + b]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n).filter(|&e| self.table[e]).map(|e| (e / self.n, e % self.n)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.has_edge(a, b))
    }

    /// True when every entry set in `table` is an edge.
    pub fn contains_table(&self, table: &[bool]) -> bool {
        table.iter().zip(&self.table).all(|(&t, &e)| !t || e)
    }

    pub fn admits(&self, letters: &[u8]) -> bool {
        letters.windows(2).all(|p| self.has_edge(p[0] as usize, p[1] as usize))
    }

    /// The diagram with every edge `(a, b)` replaced by `(p(a), p(b))`.
    pub fn relabel(&self, p: &LetterPermutation, index: DiagramIndex) -> TransitionDiagram {
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| (p.apply(a), p.apply(b))).collect();
        TransitionDiagram::from_edges(self.n, &edges, index)
    }

    pub fn intersect(&self, other: &TransitionDiagram, index: DiagramIndex) -> TransitionDiagram {
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| a && b).collect();
        TransitionDiagram { n: self.n, table, index }
    }

    /// Edges as two-letter strings, e.g. `["AD", "BC"]`.
    pub fn edge_names(&self) -> Vec<String> {
        let sep = if self.n <= 4 { "" } else { " " };
        self.edges()
            .into_iter()
            .map(|(a, b)| format!("{}{sep}{}", letter_name(a, self.n), letter_name(b, self.n)))
            .collect()
    }
}

fn sector_zero(n: usize) -> TransitionDiagram {
    let mut edges = Vec::new();
    for j in 0..n {
        edges.push((j, n - 1 - j));
        if j >= 1 {
            edges.push((j, n - j));
        }
    }
    TransitionDiagram::from_edges(n, &edges, DiagramIndex::Sector(0))
}

/// All `2n` sector diagrams together with the permutations `π_i`.
#[derive(Debug)]
pub struct DiagramSet {
    n: usize,
    pis: Vec<LetterPermutation>,
    diagrams: Vec<TransitionDiagram>,
}

impl DiagramSet {
    fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        let d0 = sector_zero(n);
        let pis = (0..2 * n).map(|i| induced_permutation(i, n)).collect::<Result<Vec<_>>>()?;
        let diagrams = pis.iter().enumerate().map(|(i, p)| d0.relabel(&p.inverse(), DiagramIndex::Sector(i))).collect();
        Ok(DiagramSet { n, pis, diagrams })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sectors, `2n`.
    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagram(&self, i: usize) -> &TransitionDiagram {
        &self.diagrams[i]
    }

    pub fn pi(&self, i: usize) -> &LetterPermutation {
        &self.pis[i]
    }

    pub fn boundary(&self, k: usize) -> TransitionDiagram {
        let m = self.len();
        let k = k % m;
        self.diagrams[(k + m - 1) % m].intersect(&self.diagrams[k], DiagramIndex::Boundary(k))
    }
}

/// Shared, lazily built diagram data for alphabet size `n`.
pub fn diagram_set(n: usize) -> Result<Arc<DiagramSet>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DiagramSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(s));
    }
    let set = Arc::new(DiagramSet::new(n)?);
    cache.lock().unwrap().insert(n, Arc::clone(&set));
    Ok(set)
}

pub fn build_diagram(i: usize, n: usize) -> Result<TransitionDiagram> {
    let set = diagram_set(n)?;
    if i >= set.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: set.len() });
    }
    Ok(set.diagram(i).clone())
}

/// `D_{k-1} ∩ D_k`, indices mod `2n`.
pub fn boundary_diagram(k: usize, n: usize) -> Result<TransitionDiagram> {
    Ok(diagram_set(n)?.boundary(k))
}
