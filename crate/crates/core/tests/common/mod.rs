#![allow(dead_code)]

use std::collections::VecDeque;

use cutseq_core::symbolic::TransitionDiagram;
use cutseq_core::{FiniteWord, PeriodicWord, Sequence};
use rand::seq::IteratorRandom;
use rand::Rng;

/// Random path of `len` letters in `d`.
pub fn random_path<R: Rng>(d: &TransitionDiagram, len: usize, rng: &mut R) -> Vec<u8> {
    let mut cur = (0..d.n()).filter(|&a| d.successors(a).next().is_some()).choose(rng).unwrap();
    let mut out = vec![cur as u8];
    while out.len() < len {
        cur = d.successors(cur).choose(rng).unwrap();
        out.push(cur as u8);
    }
    out
}

fn shortest_return(d: &TransitionDiagram, from: usize, to: usize) -> Vec<u8> {
    let mut prev = vec![usize::MAX; d.n()];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; d.n()];
    seen[from] = true;
    while let Some(a) = queue.pop_front() {
        for b in d.successors(a) {
            if b == to {
                let mut path = Vec::new();
                let mut c = a;
                while c != from {
                    path.push(c as u8);
                    c = prev[c];
                }
                path.reverse();
                return path;
            }
            if !seen[b] {
                seen[b] = true;
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    panic!("diagram is not strongly connected");
}

/// Random closed walk in `d`, read as a periodic word.
pub fn random_cycle<R: Rng>(d: &TransitionDiagram, len: usize, rng: &mut R) -> Sequence {
    let mut path = random_path(d, len, rng);
    let (first, last) = (path[0] as usize, *path.last().unwrap() as usize);
    if !d.has_edge(last, first) {
        let back = shortest_return(d, last, first);
        path.extend(back);
    }
    Sequence::Periodic(PeriodicWord::new(d.n(), path).unwrap())
}

pub fn random_window<R: Rng>(d: &TransitionDiagram, len: usize, rng: &mut R) -> Sequence {
    Sequence::window(FiniteWord::new(d.n(), random_path(d, len, rng)).unwrap())
}

pub fn seq(s: &str) -> Sequence {
    Sequence::parse(s, 4).unwrap()
}
