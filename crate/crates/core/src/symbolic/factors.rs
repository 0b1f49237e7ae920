use std::collections::BTreeSet;

use super::FiniteWord;

/// Distinct length-`len` subwords of `w`.
pub fn factor_set(w: &FiniteWord, len: usize) -> BTreeSet<Vec<u8>> {
    if len == 0 || len > w.len() {
        return BTreeSet::new();
    }
    w.letters().windows(len).map(<[u8]>::to_vec).collect()
}

pub fn factor_count(w: &FiniteWord, len: usize) -> usize {
    factor_set(w, len).len()
}

const NONE: u32 = u32::MAX;

/// Trie of all factors up to a fixed length, with per-length counts.
///
/// Children are stored in one flat array with stride `n`.
#[derive(Clone, Debug)]
pub struct FactorTrie {
    n: usize,
    max_len: usize,
    children: Vec<u32>,
    counts: Vec<usize>,
}

impl FactorTrie {
    pub fn new(n: usize, max_len: usize) -> Self {
        FactorTrie { n, max_len, children: vec![NONE; n], counts: vec![0; max_len + 1] }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn child(&mut self, node: usize, letter: u8) -> (usize, bool) {
        let slot = node * self.n + letter as usize;
        match self.children[slot] {
            NONE => {
                let id = self.children.len() / self.n;
                self.children[slot] = id as u32;
                self.children.resize(self.children.len() + self.n, NONE);
                (id, true)
            }
            c => (c as usize, false),
        }
    }

    fn insert_from(&mut self, letters: &[u8], start: usize, stop: usize) {
        let mut node = 0;
        for (depth, &l) in letters[start..stop].iter().enumerate() {
            let (next, fresh) = self.child(node, l);
            if fresh {
                self.counts[depth + 1] += 1;
            }
            node = next;
        }
    }

    /// Adds every factor of `letters` of length at most `max_len`.
    pub fn insert_word(&mut self, letters: &[u8]) {
        for start in 0..letters.len() {
            let stop = (start + self.max_len).min(letters.len());
            self.insert_from(letters, start, stop);
        }
    }

    /// Adds the factors of the bi-infinite word with the given period.
    pub fn insert_periodic(&mut self, period: &[u8]) {
        if period.is_empty() {
            return;
        }
        let p = period.len();
        let unrolled: Vec<u8> = period.iter().copied().cycle().take(p + self.max_len).collect();
        for start in 0..p {
            self.insert_from(&unrolled, start, start + self.max_len);
        }
    }

    /// Number of distinct factors of length `len`.
    pub fn count(&self, len: usize) -> usize {
        self.counts.get(len).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        if word.len() > self.max_len {
            return false;
        }
        let mut node = 0usize;
        for &l in word {
            match self.children[node * self.n + l as usize] {
                NONE => return false,
                c => node = c as usize,
            }
        }
        true
    }

    /// All stored factors of length `len`, in lexicographic order.
    pub fn factors(&self, len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(len);
        self.collect(0, len, &mut path, &mut out);
        out
    }

    fn collect(&self, node: usize, len: usize, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if path.len() == len {
            out.push(path.clone());
            return;
        }
        for l in 0..self.n {
            let c = self.children[node * self.n + l];
            if c != NONE {
                path.push(l as u8);
                self.collect(c as usize, len, path, out);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trie_matches_set() {
        let w = FiniteWord::parse("ADBCCBDADBCBDA", 4).unwrap();
        let mut t = FactorTrie::new(4, 6);
        t.insert_word(w.letters());
        for len in 1..=6 {
            let set = factor_set(&w, len);
            assert_eq!(t.count(len), set.len());
            assert_eq!(t.factors(len), set.into_iter().collect::<Vec<_>>());
        }
        assert!(t.contains(&[0, 3, 1]));
        assert!(!t.contains(&[0, 0]));
    }

    #[test]
    fn periodic_factors() {
        let mut t = FactorTrie::new(4, 5);
        t.insert_periodic(&[0, 3]);
        assert_eq!(t.count(1), 2);
        assert_eq!(t.count(5), 2);
        assert!(t.contains(&[3, 0, 3]));
    }

    #[test]
    fn single_letters_bounded_by_alphabet() {
        let w = FiniteWord::parse("ABCDDCBA", 4).unwrap();
        assert!(factor_count(&w, 1) <= 4);
        assert_eq!(factor_count(&w, 9), 0);
    }
}
