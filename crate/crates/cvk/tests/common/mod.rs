//! Shared test support: an abstract Coxeter word-problem oracle,
//! independent of the matrix representation it is used to check.
//!
//! Elements are canonical reduced words. A word is reduced iff no sequence
//! of braid moves produces two equal adjacent letters; two reduced words
//! represent the same element iff their braid-move closures coincide, so the
//! lexicographically least member of the closure is a canonical form.

#![allow(dead_code)]

use cvk::coxsys::{CoxeterSystem, Label};
use std::collections::BTreeSet;

pub struct WordOracle {
    rank: usize,
    /// m_st for finite labels, None for ∞.
    labels: Vec<Vec<Option<u32>>>,
}

impl WordOracle {
    pub fn new(sys: &CoxeterSystem) -> Self {
        let rank = sys.rank();
        let labels = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match sys.label(i, j) {
                        Label::Finite(m) => Some(m),
                        Label::Infinite => None,
                    })
                    .collect()
            })
            .collect();
        WordOracle { rank, labels }
    }

    /// All words reachable by braid moves (no deletions).
    fn braid_closure(&self, word: &[u8]) -> BTreeSet<Vec<u8>> {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut queue = vec![word.to_vec()];
        seen.insert(word.to_vec());
        while let Some(w) = queue.pop() {
            for i in 0..w.len() {
                if i + 1 >= w.len() {
                    continue;
                }
                let a = w[i];
                let b = w[i + 1];
                if a == b {
                    continue;
                }
                let Some(m) = self.labels[a as usize][b as usize] else { continue };
                let m = m as usize;
                if i + m > w.len() {
                    continue;
                }
                // Window must alternate a, b, a, b, …
                let alternating = (0..m).all(|k| w[i + k] == if k % 2 == 0 { a } else { b });
                if !alternating {
                    continue;
                }
                let mut flipped = w.clone();
                for k in 0..m {
                    flipped[i + k] = if k % 2 == 0 { b } else { a };
                }
                if seen.insert(flipped.clone()) {
                    queue.push(flipped);
                }
            }
        }
        seen
    }

    /// Canonical reduced form: apply deletions through the braid closure
    /// until none remain, then take the least member of the closure.
    pub fn reduce(&self, word: &[u8]) -> Vec<u8> {
        let mut current = word.to_vec();
        'outer: loop {
            let closure = self.braid_closure(&current);
            for w in &closure {
                for i in 0..w.len().saturating_sub(1) {
                    if w[i] == w[i + 1] {
                        let mut shorter = w.clone();
                        shorter.drain(i..=i + 1);
                        current = shorter;
                        continue 'outer;
                    }
                }
            }
            return closure.into_iter().next().expect("closure is nonempty");
        }
    }

    /// Element counts per word length, by breadth-first search over
    /// canonical forms.
    pub fn counts_by_length(&self, max_len: usize) -> Vec<usize> {
        let mut counts = vec![0usize; max_len + 1];
        counts[0] = 1;
        let mut known: BTreeSet<Vec<u8>> = BTreeSet::new();
        known.insert(Vec::new());
        let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
        for len in 1..=max_len {
            let mut next: BTreeSet<Vec<u8>> = BTreeSet::new();
            for w in &frontier {
                for s in 0..self.rank as u8 {
                    if w.last() == Some(&s) {
                        continue;
                    }
                    let mut cand = w.clone();
                    cand.push(s);
                    let reduced = self.reduce(&cand);
                    if reduced.len() == len && !known.contains(&reduced) {
                        next.insert(reduced);
                    }
                }
            }
            counts[len] = next.len();
            known.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        counts
    }
}

#[cfg(test)]
mod oracle_self_checks {
    use super::*;
    use cvk::coxsys::{fin, system_from_edges};

    #[test]
    fn dihedral_group_counts() {
        // I_2(7): dihedral of order 14: counts 1,2,2,2,2,2,2,1 up to length 7.
        let sys = system_from_edges(2, &[(0, 1, fin(7))]);
        let oracle = WordOracle::new(&sys);
        assert_eq!(oracle.counts_by_length(7), vec![1, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(oracle.counts_by_length(8), vec![1, 2, 2, 2, 2, 2, 2, 1, 0]);
    }

    #[test]
    fn symmetric_group_counts() {
        // A_3 = S_4: the length generating function is 1,3,5,6,5,3,1.
        let sys = system_from_edges(3, &[(0, 1, fin(3)), (1, 2, fin(3))]);
        let oracle = WordOracle::new(&sys);
        assert_eq!(oracle.counts_by_length(7), vec![1, 3, 5, 6, 5, 3, 1, 0]);
    }

    #[test]
    fn free_product_counts() {
        // (∞,∞,∞): the universal Coxeter group on 3 letters: every
        // alternating word is reduced, counts 1, 3, 3·2, 3·2², …
        let sys = cvk::coxsys::CoxeterSystem::triangle(
            cvk::coxsys::INF,
            cvk::coxsys::INF,
            cvk::coxsys::INF,
        );
        let oracle = WordOracle::new(&sys);
        assert_eq!(oracle.counts_by_length(5), vec![1, 3, 6, 12, 24, 48]);
    }
}
