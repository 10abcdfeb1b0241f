//! Spanning incoming forests: edge subsets where every vertex has at most
//! one outgoing edge and the underlying undirected multigraph has no cycle.

use crate::model::{Digraph, Edge};
use crate::poly::Monomial;

pub type Forest = Vec<Edge>;

struct Enumerator<'a> {
    g: &'a Digraph,
    parent: Vec<usize>,
    chosen: Vec<Edge>,
    max_edges: usize,
}

impl Enumerator<'_> {
    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn run(&mut self, v: usize, visit: &mut dyn FnMut(&[Edge], &dyn Fn(usize, usize) -> bool)) {
        if v > self.g.n {
            let parent = &self.parent;
            let root = |mut x: usize| {
                while parent[x] != x {
                    x = parent[x];
                }
                x
            };
            visit(&self.chosen, &|a, b| root(a) == root(b));
            return;
        }
        self.run(v + 1, visit);
        if self.chosen.len() == self.max_edges {
            return;
        }
        let outs: Vec<Edge> = self.g.out_edges(v).copied().collect();
        for e in outs {
            let (ra, rb) = (self.find(e.from), self.find(e.to));
            if ra == rb {
                continue;
            }
            self.parent[ra] = rb;
            self.chosen.push(e);
            self.run(v + 1, visit);
            self.chosen.pop();
            self.parent[ra] = ra;
        }
    }
}

/// Calls `visit` once per spanning incoming forest with at most `max_edges`
/// edges. The second argument answers "are these two vertices in the same
/// component of the forest".
pub fn for_each_forest(
    g: &Digraph,
    max_edges: usize,
    visit: &mut dyn FnMut(&[Edge], &dyn Fn(usize, usize) -> bool),
) {
    let mut en = Enumerator {
        g,
        parent: (0..=g.n).collect(),
        chosen: Vec::new(),
        max_edges,
    };
    en.run(1, visit);
}

/// Every spanning incoming forest of `g` with exactly `l` edges, optionally
/// only those in which `connect = (j, i)` share a component. Sorted
/// lexicographically by edge list.
pub fn spanning_incoming_forests(
    g: &Digraph,
    l: usize,
    connect: Option<(usize, usize)>,
) -> Vec<Forest> {
    let mut out = Vec::new();
    for_each_forest(g, l, &mut |edges, same| {
        if edges.len() == l && connect.map_or(true, |(j, i)| same(j, i)) {
            out.push(edges.to_vec());
        }
    });
    out.sort();
    out
}

/// `π_F`, the product of the edge labels.
pub fn forest_monomial(f: &[Edge]) -> Monomial {
    Monomial::from_factors(f.iter().map(|e| (e.symbol(), 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

    fn star(n: usize) -> Model {
        let edges = (2..=n).flat_map(|k| [(1, k), (k, 1)]);
        Model::new(n, edges, [1], [2], []).unwrap()
    }

    fn labels(fs: &[Forest]) -> Vec<Vec<String>> {
        fs.iter()
            .map(|f| f.iter().map(|e| e.symbol().to_string()).collect())
            .collect()
    }

    #[test]
    fn three_edge_forests_of_four_star() {
        let fs = spanning_incoming_forests(&star(4).graph(), 3, None);
        let mut got: Vec<Vec<String>> = labels(&fs)
            .into_iter()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        got.sort();
        let want = [
            ["k12", "k13", "k14"],
            ["k12", "k13", "k41"],
            ["k12", "k14", "k31"],
            ["k13", "k14", "k21"],
        ];
        assert_eq!(got, want.map(|r| r.map(String::from).to_vec()).to_vec());
    }

    #[test]
    fn connected_forests_of_reduced_graph() {
        let g = star(4).reduced_graph(2).unwrap();
        let fs = spanning_incoming_forests(&g, 2, Some((1, 2)));
        let got = labels(&fs);
        assert_eq!(got, vec![vec!["k21", "k13"], vec!["k21", "k14"]]);
    }

    #[test]
    fn counts() {
        for n in 3..=7 {
            let g = star(n).graph();
            assert_eq!(spanning_incoming_forests(&g, 1, None).len(), 2 * (n - 1));
            assert!(spanning_incoming_forests(&g, n, None).is_empty());
            assert_eq!(spanning_incoming_forests(&g, 0, None).len(), 1);
        }
    }

    #[test]
    fn two_cycle_is_not_a_forest() {
        let m = Model::new(2, [(1, 2), (2, 1)], [1], [1], []).unwrap();
        let fs = spanning_incoming_forests(&m.graph(), 2, None);
        assert!(fs.is_empty());
    }
}
