//! Exhaustive automorphism search by backtracking over vertex images.
//!
//! Vertices are assigned in order; a candidate image must have the same
//! signature (in/out degree, membership in In, Out and Leak) and preserve
//! adjacency with every vertex already placed.

use super::{Model, ModelError, Permutation};

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 12;

type Signature = (usize, usize, bool, bool, bool);

struct Search<'a> {
    m: &'a Model,
    sig: Vec<Signature>,
    fixed: Vec<Option<usize>>,
    images: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.sig[v] != self.sig[w] {
            return false;
        }
        if self.fixed[v].is_some_and(|t| t != w) {
            return false;
        }
        (1..v).all(|u| {
            let su = self.images[u - 1];
            self.m.has_edge(u, v) == self.m.has_edge(su, w)
                && self.m.has_edge(v, u) == self.m.has_edge(w, su)
        })
    }

    fn run(&mut self, v: usize, out: &mut Vec<Permutation>, first_only: bool) {
        let n = self.m.n();
        if v > n {
            out.push(Permutation::from_images(self.images.clone()).expect("bijection"));
            return;
        }
        for w in 1..=n {
            if self.used[w] || !self.consistent(v, w) {
                continue;
            }
            self.used[w] = true;
            self.images.push(w);
            self.run(v + 1, out, first_only);
            self.images.pop();
            self.used[w] = false;
            if first_only && !out.is_empty() {
                return;
            }
        }
    }
}

impl Model {
    fn search(&self, constraints: &[(usize, usize)], first_only: bool) -> Vec<Permutation> {
        let n = self.n();
        let mut sig = vec![(0, 0, false, false, false); n + 1];
        for e in self.edges() {
            sig[e.from].1 += 1;
            sig[e.to].0 += 1;
        }
        for (v, s) in sig.iter_mut().enumerate().skip(1) {
            s.2 = self.inputs().contains(&v);
            s.3 = self.outputs().contains(&v);
            s.4 = self.leaks().contains(&v);
        }
        let mut fixed = vec![None; n + 1];
        for &(v, w) in constraints {
            if fixed[v].is_some_and(|t| t != w) {
                return Vec::new();
            }
            fixed[v] = Some(w);
        }
        let mut s = Search {
            m: self,
            sig,
            fixed,
            images: Vec::with_capacity(n),
            used: vec![false; n + 1],
        };
        let mut out = Vec::new();
        s.run(1, &mut out, first_only);
        out
    }

    /// Every automorphism, in lexicographic order of image vectors.
    pub fn automorphisms(&self) -> Result<Vec<Permutation>, ModelError> {
        self.automorphisms_bounded(DEFAULT_AUTOMORPHISM_BOUND)
    }

    pub fn automorphisms_bounded(&self, bound: usize) -> Result<Vec<Permutation>, ModelError> {
        if self.n() > bound {
            return Err(ModelError::TooLarge { n: self.n(), bound });
        }
        Ok(self.search(&[], false))
    }

    /// The lexicographically first automorphism with `σ(v) = w` for every
    /// `(v, w)` in `constraints`.
    pub fn find_automorphism(&self, constraints: &[(usize, usize)]) -> Option<Permutation> {
        self.search(constraints, true).into_iter().next()
    }

    pub fn is_automorphism(&self, sigma: &Permutation) -> bool {
        sigma.n() == self.n() && self.relabel(sigma) == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize, i: usize, j: usize) -> Model {
        let edges = (2..=n).flat_map(|k| [(1, k), (k, 1)]);
        Model::new(n, edges, [i], [j], []).unwrap()
    }

    #[test]
    fn star_with_io_at_center() {
        for n in 3..=6 {
            let auts = star(n, 1, 1).automorphisms().unwrap();
            let fact: usize = (1..n).product();
            assert_eq!(auts.len(), fact);
            assert!(auts[0].is_identity());
        }
    }

    #[test]
    fn star_four_one_two() {
        let auts = star(4, 1, 2).automorphisms().unwrap();
        assert_eq!(auts.len(), 2);
        assert_eq!(auts[1], Permutation::transposition(4, 3, 4));
    }

    #[test]
    fn star_two_three_permutes_the_rest() {
        let m = star(6, 2, 3);
        let auts = m.automorphisms().unwrap();
        assert_eq!(auts.len(), 6);
        for a in &auts {
            assert_eq!(&a.images()[..3], &[1, 2, 3]);
            assert!(m.is_automorphism(a));
        }
    }

    #[test]
    fn group_closure() {
        let auts = star(5, 1, 2).automorphisms().unwrap();
        for a in &auts {
            assert!(auts.contains(&a.inverse()));
            for b in &auts {
                assert!(auts.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn constrained_search_and_bound() {
        let m = star(5, 1, 2);
        let s = m.find_automorphism(&[(3, 5)]).unwrap();
        assert_eq!(s.apply(3), 5);
        assert!(m.find_automorphism(&[(2, 3)]).is_none());
        assert!(matches!(
            star(13, 1, 1).automorphisms(),
            Err(ModelError::TooLarge { n: 13, bound: 12 })
        ));
    }
}
