//! Words over the side alphabet: finite windows, periodic words, derivation,
//! normal forms and relabelling.

mod diagram;
mod factors;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polygon::{letter_name, parse_letter, LetterPermutation};

pub use diagram::{boundary_diagram, build_diagram, diagram_set, DiagramIndex, DiagramSet, TransitionDiagram};
pub use factors::{factor_count, factor_set, FactorTrie};

/// A finite sequence of letters `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord {
    n: usize,
    letters: Vec<u8>,
}

impl FiniteWord {
    pub fn new(n: usize, letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= n) {
            return Err(Error::IndexOutOfRange { index: bad as usize, bound: n });
        }
        Ok(FiniteWord { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        FiniteWord { n, letters: Vec::new() }
    }

    /// Letters `A..` for `n <= 4`, otherwise whitespace separated `L1 L2 ..`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let letters = if n <= 4 {
            s.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| parse_letter(&c.to_string(), n).map(|l| l as u8))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.split_whitespace().map(|t| parse_letter(t, n).map(|l| l as u8)).collect::<Result<Vec<_>>>()?
        };
        Ok(FiniteWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn permute(&self, p: &LetterPermutation) -> FiniteWord {
        FiniteWord { n: self.n, letters: permute_letters(p, &self.letters) }
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters, self.n)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8], n: usize) -> fmt::Result {
    for (i, &l) in letters.iter().enumerate() {
        if n > 4 && i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(&letter_name(l as usize, n))?;
    }
    Ok(())
}

fn permute_letters(p: &LetterPermutation, letters: &[u8]) -> Vec<u8> {
    let map: Vec<u8> = p.as_slice().iter().map(|&v| v as u8).collect();
    letters.iter().map(|&l| map[l as usize]).collect()
}

/// A finite piece of a bi-infinite word. The truncation flags record that the
/// neighbours of the boundary letters are not known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordWindow {
    pub word: FiniteWord,
    pub left_truncated: bool,
    pub right_truncated: bool,
}

impl WordWindow {
    pub fn new(word: FiniteWord) -> Self {
        WordWindow { word, left_truncated: true, right_truncated: true }
    }

    pub fn letters(&self) -> &[u8] {
        self.word.letters()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Length of the shortest `r` with `w = r^k`.
pub fn primitive_root_len(w: &[u8]) -> usize {
    let len = w.len();
    if len == 0 {
        return 0;
    }
    let mut fail = vec![0usize; len];
    let mut k = 0;
    for i in 1..len {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = len - fail[len - 1];
    if len % p == 0 {
        p
    } else {
        len
    }
}

/// Start index of the lexicographically least rotation.
pub fn least_rotation(w: &[u8]) -> usize {
    let len = w.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < len && j < len && k < len {
        let (a, b) = (w[(i + k) % len], w[(j + k) % len]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// A bi-infinite periodic word, stored as its primitive period in least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicWord {
    n: usize,
    period: Vec<u8>,
}

impl PeriodicWord {
    pub fn new(n: usize, letters: Vec<u8>) -> Result<Self> {
        let w = FiniteWord::new(n, letters)?;
        Ok(Self::canonical(n, w.letters))
    }

    fn canonical(n: usize, mut letters: Vec<u8>) -> Self {
        letters.truncate(primitive_root_len(&letters));
        let r = least_rotation(&letters);
        letters.rotate_left(r);
        PeriodicWord { n, period: letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn len(&self) -> usize {
        self.period.len()
    }

    /// True for the degenerate word left when no letter survives derivation.
    pub fn is_empty(&self) -> bool {
        self.period.is_empty()
    }

    /// The first `len` letters of the bi-infinite word read from the canonical start.
    pub fn unroll(&self, len: usize) -> Vec<u8> {
        if self.period.is_empty() {
            return Vec::new();
        }
        self.period.iter().copied().cycle().take(len).collect()
    }
}

impl fmt::Display for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.period, self.n)
    }
}

/// Either a finite window or a periodic word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sequence {
    Window(WordWindow),
    Periodic(PeriodicWord),
}

impl Sequence {
    /// Parses a word; a `per:` prefix marks a periodic word.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix("per:") {
            Some(rest) => {
                let w = FiniteWord::parse(rest, n)?;
                if w.is_empty() {
                    return Err(Error::Parse("empty period".into()));
                }
                Ok(Sequence::Periodic(PeriodicWord::canonical(n, w.letters)))
            }
            None => Ok(Sequence::Window(WordWindow::new(FiniteWord::parse(s, n)?))),
        }
    }

    pub fn window(word: FiniteWord) -> Self {
        Sequence::Window(WordWindow::new(word))
    }

    pub fn n(&self) -> usize {
        match self {
            Sequence::Window(w) => w.word.n,
            Sequence::Periodic(p) => p.n,
        }
    }

    /// The window letters, or one period.
    pub fn letters(&self) -> &[u8] {
        match self {
            Sequence::Window(w) => w.letters(),
            Sequence::Periodic(p) => &p.period,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Sequence::Periodic(_))
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters().is_empty()
    }

    /// All consecutive pairs, including the wrap-around pair of a periodic word.
    pub fn transitions(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        let l = self.letters();
        let wrap = match self {
            Sequence::Periodic(_) if !l.is_empty() => Some((l[l.len() - 1], l[0])),
            _ => None,
        };
        l.windows(2).map(|p| (p[0], p[1])).chain(wrap)
    }

    /// `n × n` table of the transitions that occur.
    pub fn transition_table(&self) -> Vec<bool> {
        let n = self.n();
        let mut t = vec![false; n * n];
        for (a, b) in self.transitions() {
            t[a as usize * n + b as usize] = true;
        }
        t
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Window(w) => write!(f, "{}", w.word),
            Sequence::Periodic(p) => write!(f, "per:{p}"),
        }
    }
}

impl FromStr for Sequence {
    type Err = Error;

    /// Parses with the octagon alphabet.
    fn from_str(s: &str) -> Result<Self> {
        Sequence::parse(s, 4)
    }
}

/// Letters whose two neighbours coincide. Boundary letters of a window are
/// dropped, since their neighbours are unknown.
pub fn derive_window(w: &WordWindow) -> WordWindow {
    let l = w.letters();
    let kept = if l.len() < 3 {
        Vec::new()
    } else {
        (1..l.len() - 1).filter(|&j| l[j - 1] == l[j + 1]).map(|j| l[j]).collect()
    };
    WordWindow {
        word: FiniteWord { n: w.word.n, letters: kept },
        left_truncated: true,
        right_truncated: true,
    }
}

pub fn derive_periodic(p: &PeriodicWord) -> PeriodicWord {
    let l = &p.period;
    let len = l.len();
    let kept = (0..len)
        .filter(|&j| l[(j + len - 1) % len] == l[(j + 1) % len])
        .map(|j| l[j])
        .collect();
    PeriodicWord::canonical(p.n, kept)
}

pub fn derive(w: &Sequence) -> Sequence {
    match w {
        Sequence::Window(w) => Sequence::Window(derive_window(w)),
        Sequence::Periodic(p) => Sequence::Periodic(derive_periodic(p)),
    }
}

pub fn permute(p: &LetterPermutation, w: &Sequence) -> Sequence {
    match w {
        Sequence::Window(win) => Sequence::Window(WordWindow {
            word: win.word.permute(p),
            left_truncated: win.left_truncated,
            right_truncated: win.right_truncated,
        }),
        Sequence::Periodic(per) => Sequence::Periodic(PeriodicWord::canonical(per.n, permute_letters(p, &per.period))),
    }
}

/// Indices `i` such that every transition of `w` is an edge of `D_i`.
pub fn admissible_diagrams(w: &Sequence) -> Result<Vec<usize>> {
    let set = diagram_set(w.n())?;
    let table = w.transition_table();
    Ok((0..set.len()).filter(|&i| set.diagram(i).contains_table(&table)).collect())
}

/// `π_i · w` for the unique diagram `i` admitting `w`, or for `diagram` when given.
pub fn normal_form(w: &Sequence, diagram: Option<usize>) -> Result<(Sequence, usize)> {
    let set = diagram_set(w.n())?;
    let i = match diagram {
        Some(i) => {
            if i >= set.len() {
                return Err(Error::IndexOutOfRange { index: i, bound: set.len() });
            }
            if !set.diagram(i).contains_table(&w.transition_table()) {
                return Err(Error::InadmissibleInput(i));
            }
            i
        }
        None => {
            let adm = admissible_diagrams(w)?;
            match adm.len() {
                0 => return Err(Error::Inadmissible),
                1 => adm[0],
                _ => return Err(Error::Ambiguous(adm)),
            }
        }
    };
    Ok((permute(set.pi(i), w), i))
}

/// Derivation on the square: erase one letter from each block of the letter
/// that occurs in runs. Fails when both `AA` and `BB` occur.
pub fn square_derive(w: &FiniteWord) -> Result<FiniteWord> {
    if w.n != 2 {
        return Err(Error::AlphabetMismatch(w.n, 2));
    }
    let l = &w.letters;
    let has = |x: u8| l.windows(2).any(|p| p[0] == x && p[1] == x);
    let runs = match (has(0), has(1)) {
        (true, true) => return Err(Error::Inadmissible),
        (true, false) => 0,
        _ => 1,
    };
    let mut out = Vec::with_capacity(l.len());
    for (j, &c) in l.iter().enumerate() {
        // drop the first letter of every block
        if c == runs && (j == 0 || l[j - 1] != runs) {
            continue;
        }
        out.push(c);
    }
    Ok(FiniteWord { n: 2, letters: out })
}
