//! Interpolating words and the generation operators that invert derivation,
//! the seed sets of short periodic words and the families built from them.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::ProjectiveDirection;
use crate::farey::{FareyMap, Termination};
use crate::polygon::{letter_name, LetterPermutation};
use crate::symbolic::{diagram_set, permute, FactorTrie, FiniteWord, PeriodicWord, Sequence, WordWindow};

/// For each letter, the letter that must sandwich it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichGroup {
    pub index: usize,
    pub map: Vec<u8>,
}

impl SandwichGroup {
    pub fn sandwich_of(&self, letter: u8) -> u8 {
        self.map[letter as usize]
    }

    pub fn describe(&self) -> String {
        let n = self.map.len();
        self.map
            .iter()
            .enumerate()
            .map(|(l, &s)| format!("{}-sandwiched {}", letter_name(s as usize, n), letter_name(l, n)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `π↑`, induced by the reflection `ν_1`.
pub fn pi_up(n: usize) -> Result<LetterPermutation> {
    Ok(diagram_set(n)?.pi(1).clone())
}

/// `π→`, induced by the reflection in the vertical axis.
pub fn pi_right(n: usize) -> Result<LetterPermutation> {
    Ok(diagram_set(n)?.pi(2 * n - 1).clone())
}

/// Groups `G_0 .. G_{n-1}`: in `G_l` the letter `L_j` is `π↑(L_j)`-sandwiched
/// for `j <= n - l` and `π→(L_j)`-sandwiched otherwise (1-based `j`).
pub fn sandwich_groups(n: usize) -> Result<Vec<SandwichGroup>> {
    let up = pi_up(n)?;
    let right = pi_right(n)?;
    Ok((0..n)
        .map(|l| SandwichGroup {
            index: l,
            map: (0..n).map(|j| if j + 1 <= n - l { up.apply(j) } else { right.apply(j) } as u8).collect(),
        })
        .collect())
}

/// Interpolating words `w^k_{XY}` for every edge `X → Y` of every `D_k`, `k >= 1`.
/// They depend on `k` only through the group index `⌊k/2⌋`.
#[derive(Clone, Debug)]
pub struct InterpolationTable {
    n: usize,
    words: HashMap<(usize, u8, u8), Vec<u8>>,
}

impl InterpolationTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `w^k_{XY}`, or `None` when `X → Y` is not an edge of `D_k`.
    pub fn get(&self, k: usize, x: u8, y: u8) -> Option<&[u8]> {
        let set = diagram_set(self.n).ok()?;
        if k == 0 || k >= set.len() || !set.diagram(k).has_edge(x as usize, y as usize) {
            return None;
        }
        self.words.get(&(k / 2, x, y)).map(Vec::as_slice)
    }

    /// All entries of `D_k` as `(X, Y, word)`.
    pub fn entries(&self, k: usize) -> Vec<(u8, u8, Vec<u8>)> {
        let Ok(set) = diagram_set(self.n) else { return Vec::new() };
        set.diagram(k)
            .edges()
            .into_iter()
            .filter_map(|(x, y)| {
                let w = self.words.get(&(k / 2, x as u8, y as u8))?;
                Some((x as u8, y as u8, w.clone()))
            })
            .collect()
    }
}

/// Sandwich-free paths `X u Y` in `D_0` whose end letters are sandwiched as
/// group `g` prescribes.
fn interpolations(n: usize, g: &SandwichGroup, x: u8, y: u8) -> Result<Vec<Vec<u8>>> {
    let set = diagram_set(n)?;
    let d0 = set.diagram(0);
    let max_len = 2 * n + 2;
    let mut found = Vec::new();
    let mut path = vec![x];
    fn dfs(
        d0: &crate::symbolic::TransitionDiagram,
        g: &SandwichGroup,
        y: u8,
        max_len: usize,
        path: &mut Vec<u8>,
        found: &mut Vec<Vec<u8>>,
    ) {
        let last = *path.last().unwrap();
        for c in d0.successors(last as usize) {
            let c = c as u8;
            let m = path.len();
            // the letter before `c` is interior to the interpolation and must not be sandwiched
            if m >= 2 && path[m - 2] == c {
                continue;
            }
            if c == y {
                let u = &path[1..];
                let ok = match (u.first(), u.last()) {
                    (Some(&first), Some(&lst)) => first == g.sandwich_of(path[0]) && lst == g.sandwich_of(y),
                    _ => y == g.sandwich_of(path[0]) && path[0] == g.sandwich_of(y),
                };
                if ok {
                    found.push(u.to_vec());
                }
            }
            if m < max_len {
                path.push(c);
                dfs(d0, g, y, max_len, path, found);
                path.pop();
            }
        }
    }
    dfs(d0, g, y, max_len, &mut path, &mut found);
    Ok(found)
}

/// Builds the interpolation table by matching sandwich-free paths in `D_0`
/// against the sandwich groups.
pub fn synthesize_table(n: usize) -> Result<InterpolationTable> {
    if n < 3 {
        return Err(Error::InvalidN(n));
    }
    let set = diagram_set(n)?;
    let groups = sandwich_groups(n)?;
    let mut words = HashMap::new();
    for k in 1..set.len() {
        let l = k / 2;
        for (x, y) in set.diagram(k).edges() {
            let key = (l, x as u8, y as u8);
            if words.contains_key(&key) {
                continue;
            }
            let cands = interpolations(n, &groups[l], x as u8, y as u8)?;
            if cands.len() != 1 {
                return Err(Error::SynthesisFailure(format!(
                    "{} candidates for edge {}{} of D{k}",
                    cands.len(),
                    letter_name(x, n),
                    letter_name(y, n)
                )));
            }
            words.insert(key, cands.into_iter().next().unwrap());
        }
    }
    Ok(InterpolationTable { n, words })
}

/// Shared table for alphabet size `n`.
pub fn interpolation_table(n: usize) -> Result<Arc<InterpolationTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<InterpolationTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(synthesize_table(n)?);
    cache.lock().unwrap().insert(n, Arc::clone(&t));
    Ok(t)
}

fn interpolate(table: &InterpolationTable, k: usize, letters: &[u8], cyclic: bool) -> Vec<u8> {
    let len = letters.len();
    let mut out = Vec::with_capacity(len * 4);
    let pairs = if cyclic { len } else { len.saturating_sub(1) };
    for j in 0..len {
        out.push(letters[j]);
        if j < pairs {
            let (x, y) = (letters[j], letters[(j + 1) % len]);
            out.extend_from_slice(&table.words[&(k / 2, x, y)]);
        }
    }
    out
}

/// `g_{k→i}(w) = π_i^{-1} · g_{k→0}(w)` for `w` admissible in `D_k`.
pub fn generate(k: usize, i: usize, w: &Sequence) -> Result<Sequence> {
    let n = w.n();
    let set = diagram_set(n)?;
    if k == 0 || k >= set.len() {
        return Err(Error::IndexOutOfRange { index: k, bound: set.len() });
    }
    if i >= set.len() {
        return Err(Error::IndexOutOfRange { index: i, bound: set.len() });
    }
    if !set.diagram(k).contains_table(&w.transition_table()) {
        return Err(Error::InadmissibleInput(k));
    }
    let table = interpolation_table(n)?;
    let to_zero = match w {
        Sequence::Window(win) => Sequence::Window(WordWindow {
            word: FiniteWord::new(n, interpolate(&table, k, win.letters(), false))?,
            left_truncated: win.left_truncated,
            right_truncated: win.right_truncated,
        }),
        Sequence::Periodic(p) => Sequence::Periodic(PeriodicWord::new(n, interpolate(&table, k, p.period(), true))?),
    };
    Ok(permute(&set.pi(i).inverse(), &to_zero))
}

/// `P_k`: periodic words of period one or two admissible in `D_{k-1,k}` or `D_{k,k+1}`.
pub fn periodic_seeds(k: usize, n: usize) -> Result<Vec<PeriodicWord>> {
    let set = diagram_set(n)?;
    if k >= set.len() {
        return Err(Error::IndexOutOfRange { index: k, bound: set.len() });
    }
    let mut out = boundary_words(k, n)?;
    out.extend(boundary_words(k + 1, n)?);
    Ok(out.into_iter().collect())
}

/// Period-1 and period-2 words admissible in `D_{k-1,k}`.
fn boundary_words(k: usize, n: usize) -> Result<BTreeSet<PeriodicWord>> {
    let b = diagram_set(n)?.boundary(k);
    let mut out = BTreeSet::new();
    for x in 0..n {
        if b.has_edge(x, x) {
            out.insert(PeriodicWord::new(n, vec![x as u8])?);
        }
        for y in x + 1..n {
            if b.has_edge(x, y) && b.has_edge(y, x) {
                out.insert(PeriodicWord::new(n, vec![x as u8, y as u8])?);
            }
        }
    }
    Ok(out)
}

pub fn check_family_prefix(prefix: &[usize], n: usize) -> Result<()> {
    let m = 2 * n;
    match prefix.split_first() {
        None => Err(Error::InvalidPrefix("empty prefix".into())),
        Some((&s0, rest)) => {
            if s0 >= m {
                return Err(Error::InvalidPrefix(format!("s_0 = {s0} is not a sector index")));
            }
            if let Some(&bad) = rest.iter().find(|&&s| s == 0 || s >= m) {
                return Err(Error::InvalidPrefix(format!("entry {bad} outside 1..{}", m - 1)));
            }
            Ok(())
        }
    }
}

/// `g_{s_1→s_0} ∘ ⋯ ∘ g_{s_k→s_{k-1}}(u)`.
pub fn generate_chain(prefix: &[usize], u: &Sequence) -> Result<Sequence> {
    check_family_prefix(prefix, u.n())?;
    let mut cur = u.clone();
    for j in (1..prefix.len()).rev() {
        cur = generate(prefix[j], prefix[j - 1], &cur)?;
    }
    Ok(cur)
}

/// Seeds for [`build_family`].
#[derive(Clone, Debug)]
pub enum FamilySeeds {
    /// The set `P_{s_k}` for the last prefix entry.
    Periodic,
    Words(Vec<Sequence>),
}

/// The family `P(s_0, .., s_k)` (or `G(..)` restricted to the given seeds),
/// sorted.
pub fn build_family(prefix: &[usize], n: usize, seeds: &FamilySeeds) -> Result<Vec<Sequence>> {
    check_family_prefix(prefix, n)?;
    let seeds: Vec<Sequence> = match seeds {
        FamilySeeds::Periodic => {
            periodic_seeds(*prefix.last().unwrap(), n)?.into_iter().map(Sequence::Periodic).collect()
        }
        FamilySeeds::Words(w) => w.clone(),
    };
    let mut out = seeds.iter().map(|u| generate_chain(prefix, u)).collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|s| (s.is_periodic(), s.letters().to_vec()));
    out.dedup();
    Ok(out)
}

/// Result of [`enumerate_factors`].
#[derive(Clone, Debug, Serialize)]
pub struct FactorEnumeration {
    pub prefix: Vec<usize>,
    /// Depth `d` of the family `P(s_0..s_d)` the factors were read from.
    pub depth: usize,
    pub counts_by_depth: Vec<usize>,
    pub factors: Vec<Vec<u8>>,
}

fn family_factors(prefix: &[usize], n: usize, len: usize) -> Result<(Vec<Vec<u8>>, usize)> {
    let family = build_family(prefix, n, &FamilySeeds::Periodic)?;
    let mut trie = FactorTrie::new(n, len);
    let mut total = 0;
    for w in &family {
        total += w.len();
        trie.insert_periodic(w.letters());
    }
    Ok((trie.factors(len), total))
}

/// Length-`len` factors of the periodic family along `prefix`.
///
/// With `depth = Some(d)` the family `P(s_0..s_d)` is used. Otherwise the depth
/// grows until the factor set has been the same for three consecutive depths,
/// the count reaches `(n-1)·len + 1`, the prefix is exhausted or the family
/// words exceed `max_letters` in total.
pub fn enumerate_factors(
    prefix: &[usize],
    n: usize,
    len: usize,
    depth: Option<usize>,
    max_letters: usize,
) -> Result<FactorEnumeration> {
    if len == 0 {
        return Err(Error::Parse("factor length must be at least 1".into()));
    }
    check_family_prefix(prefix, n)?;
    if let Some(d) = depth {
        if d >= prefix.len() {
            return Err(Error::InvalidPrefix(format!("depth {d} needs {} entries", d + 1)));
        }
        let (factors, _) = family_factors(&prefix[..=d], n, len)?;
        return Ok(FactorEnumeration { prefix: prefix[..=d].to_vec(), depth: d, counts_by_depth: vec![factors.len()], factors });
    }
    let ceiling = (n - 1) * len + 1;
    let mut counts = Vec::new();
    let mut best: Option<(usize, Vec<Vec<u8>>)> = None;
    let mut stable = 0;
    for d in 0..prefix.len() {
        let (factors, total) = family_factors(&prefix[..=d], n, len)?;
        counts.push(factors.len());
        if best.as_ref().is_some_and(|(_, f)| *f == factors) {
            stable += 1;
        } else {
            stable = 1;
        }
        let done = factors.len() >= ceiling || stable >= 3 || total > max_letters;
        best = Some((d, factors));
        if done {
            break;
        }
    }
    let (d, factors) = best.unwrap();
    Ok(FactorEnumeration { prefix: prefix[..=d].to_vec(), depth: d, counts_by_depth: counts, factors })
}

/// [`enumerate_factors`] along the itinerary of `theta`.
///
/// An exact direction whose orbit reaches a fixed point `F^k(θ)` is handled
/// without the depth search: its words are the images of the period-≤2 words
/// at that fixed point under the chain `s_0 .. s_k`.
pub fn enumerate_factors_direction(
    theta: &ProjectiveDirection,
    n: usize,
    len: usize,
    depth: Option<usize>,
    max_depth: usize,
    max_letters: usize,
) -> Result<FactorEnumeration> {
    let map = FareyMap::new(n)?;
    if depth.is_none() {
        if let Termination::Terminating { depth: k, tail, proven: true } = map.is_terminating(theta, max_depth)? {
            if len == 0 {
                return Err(Error::Parse("factor length must be at least 1".into()));
            }
            let mut prefix = map.itinerary(theta, k)?;
            prefix.push(tail);
            // fixed points π/2n and π sit on the boundaries D_{0,1} and D_{2n-1,0}
            let at = if tail == 1 { 1 } else { 0 };
            let seeds = boundary_words(at, n)?.into_iter().map(Sequence::Periodic).collect();
            let mut trie = FactorTrie::new(n, len);
            for w in build_family(&prefix, n, &FamilySeeds::Words(seeds))? {
                trie.insert_periodic(w.letters());
            }
            let factors = trie.factors(len);
            return Ok(FactorEnumeration { prefix, depth: k, counts_by_depth: vec![factors.len()], factors });
        }
    }
    let steps = depth.map_or(max_depth, |d| d + 1);
    let prefix = map.itinerary(theta, steps)?;
    enumerate_factors(&prefix, n, len, depth, max_letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::derive;

    fn w(s: &str) -> Sequence {
        Sequence::parse(s, 4).unwrap()
    }

    fn name(l: &[u8]) -> String {
        FiniteWord::new(4, l.to_vec()).unwrap().to_string()
    }

    #[test]
    fn octagon_groups() {
        let g = sandwich_groups(4).unwrap();
        let maps: Vec<String> = g.iter().map(|g| name(&g.map)).collect();
        assert_eq!(maps, ["DCBA", "DCBB", "DCCB", "DDCB"]);
    }

    #[test]
    fn reflection_permutations_match_cycle_formulas() {
        for n in 3..=8 {
            let up = pi_up(n).unwrap();
            let right = pi_right(n).unwrap();
            for j in 0..n {
                assert_eq!(up.apply(j), n - 1 - j, "up n={n}");
                assert_eq!(right.apply(j), if j == 0 { 0 } else { n - j }, "right n={n}");
            }
        }
    }

    #[test]
    fn table_for_sector_three() {
        let t = synthesize_table(4).unwrap();
        let get = |x: char, y: char| name(t.get(3, x as u8 - b'A', y as u8 - b'A').unwrap());
        assert_eq!(get('D', 'B'), "BCC");
        assert_eq!(get('A', 'A'), "DBCCBD");
        assert_eq!(get('A', 'B'), "DBCC");
        assert_eq!(get('B', 'A'), "CCBD");
        assert_eq!(get('C', 'D'), "B");
        assert_eq!(get('B', 'D'), "CCB");
    }

    #[test]
    fn table_for_sector_six() {
        let t = synthesize_table(4).unwrap();
        let get = |x: char, y: char| name(t.get(6, x as u8 - b'A', y as u8 - b'A').unwrap());
        assert_eq!(get('B', 'A'), "D");
        assert_eq!(get('A', 'B'), "D");
        assert_eq!(get('D', 'D'), "BCCB");
        assert_eq!(get('A', 'C'), "DBC");
        assert_eq!(get('C', 'A'), "CBD");
        assert_eq!(get('C', 'D'), "CB");
        assert_eq!(get('D', 'C'), "BC");
    }

    #[test]
    fn tables_are_total() {
        for n in 3..=8 {
            let t = synthesize_table(n).unwrap();
            let set = diagram_set(n).unwrap();
            for k in 1..2 * n {
                assert_eq!(t.entries(k).len(), set.diagram(k).edge_count(), "n={n} k={k}");
            }
        }
        assert!(matches!(synthesize_table(2), Err(Error::InvalidN(2))));
    }

    #[test]
    fn vertex_letters_are_the_only_sandwiched_ones() {
        for n in 3..=6 {
            let t = synthesize_table(n).unwrap();
            let set = diagram_set(n).unwrap();
            for k in 1..2 * n {
                let d = set.diagram(k);
                for (a, b) in d.edges() {
                    for c in d.successors(b) {
                        let mut path = vec![a as u8];
                        path.extend_from_slice(t.get(k, a as u8, b as u8).unwrap());
                        let mid = path.len();
                        path.push(b as u8);
                        path.extend_from_slice(t.get(k, b as u8, c as u8).unwrap());
                        path.push(c as u8);
                        assert!(set.diagram(0).admits(&path));
                        let sandwiched: Vec<usize> =
                            (1..path.len() - 1).filter(|&j| path[j - 1] == path[j + 1]).collect();
                        assert_eq!(sandwiched, [mid], "n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn generation_example() {
        let g = generate(3, 0, &w("CDBAABDBD")).unwrap();
        assert_eq!(g.to_string(), "CBDBCCBCCBDADBCCBDADBCCBCCBDBCCBCCBD");
        assert_eq!(derive(&g).to_string(), "DBAABDB");
        assert!(matches!(generate(3, 0, &w("CC")), Err(Error::InadmissibleInput(3))));
    }

    #[test]
    fn seeds_and_families() {
        let p6: Vec<String> = periodic_seeds(6, 4).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(p6, ["AB", "AC", "CD", "D"]);
        for k in 0..8 {
            assert_eq!(periodic_seeds(k, 4).unwrap().len(), 4, "P_{k}");
        }
        let fam = |p: &[usize]| -> BTreeSet<String> {
            build_family(p, 4, &FamilySeeds::Periodic).unwrap().iter().map(|s| s.to_string()).collect()
        };
        let expect = |v: &[&str]| -> BTreeSet<String> { v.iter().map(|s| w(&format!("per:{s}")).to_string()).collect() };
        assert_eq!(fam(&[6]), expect(&["BA", "AC", "CD", "D"]));
        assert_eq!(fam(&[0, 6]), expect(&["BDAD", "ADBCCCBD", "CCBDBC", "DBCCB"]));
        assert_eq!(fam(&[1, 6]), expect(&["CADA", "DACBBBCA", "BBCACB", "ACBBC"]));
        assert_eq!(
            fam(&[0, 1, 6]),
            expect(&["CBDADADB", "DADBCBCCBCCBCBDA", "BCCBCBDADBCBCC", "ADBCBCCBCBD"])
        );
        assert!(matches!(build_family(&[0, 0], 4, &FamilySeeds::Periodic), Err(Error::InvalidPrefix(_))));
    }

    #[test]
    fn factors_of_fixed_direction() {
        let e = enumerate_factors(&[1; 12], 4, 3, None, 1 << 22).unwrap();
        assert!(e.factors.len() <= 3 * 3 + 1);
        let one = enumerate_factors_direction(&ProjectiveDirection::approx(0.7).unwrap(), 4, 1, None, 30, 1 << 22).unwrap();
        assert_eq!(one.factors.len(), 4);
    }
}
