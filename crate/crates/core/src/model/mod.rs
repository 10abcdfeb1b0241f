//! Linear compartmental models: graph, input/output/leak sets, the
//! compartmental matrix and model automorphisms.

mod automorphism;
mod permutation;

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::poly::{MultiPoly, ParamPoint, PolyError, Symbol};
use crate::scalar::Scalar;

pub use automorphism::DEFAULT_AUTOMORPHISM_BOUND;
pub use permutation::Permutation;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Malformed(String),
    #[error("index out of range: {index} not in 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at compartment {0}")]
    SelfLoop(usize),
    #[error("compartment {0} is not an output")]
    NotAnOutput(usize),
    #[error("automorphism search limited to n <= {bound}, model has n = {n}")]
    TooLarge { n: usize, bound: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Directed edge `from -> to`, carrying the rate `k_{to,from}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
}

impl Edge {
    pub fn new(from: usize, to: usize) -> Self {
        Edge { from, to }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::rate(self.to, self.from)
    }
}

/// A directed graph on vertices `1..=n` with edges kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Digraph {
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.binary_search(&Edge::new(from, to)).is_ok()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == v)
    }

    fn reaches_all(&self, start: usize, forward: bool) -> bool {
        let mut seen = vec![false; self.n + 1];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                let (a, b) = if forward { (e.from, e.to) } else { (e.to, e.from) };
                if a == v && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n <= 1 || (self.reaches_all(1, true) && self.reaches_all(1, false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    n: usize,
    edges: Vec<Edge>,
    inputs: BTreeSet<usize>,
    outputs: BTreeSet<usize>,
    leaks: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub strongly_connected: bool,
    pub inputs: usize,
    pub outputs: usize,
    pub leaks: usize,
    pub forest_formula_applicable: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    version: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(rename = "in")]
    inputs: Vec<usize>,
    #[serde(rename = "out")]
    outputs: Vec<usize>,
    #[serde(default, rename = "leak")]
    leaks: Vec<usize>,
}

#[derive(Serialize)]
struct ModelDocRef<'a> {
    version: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(rename = "in")]
    inputs: &'a BTreeSet<usize>,
    #[serde(rename = "out")]
    outputs: &'a BTreeSet<usize>,
    #[serde(rename = "leak")]
    leaks: &'a BTreeSet<usize>,
}

impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModelDocRef {
            version: 1,
            n: self.n,
            edges: self.edges.iter().map(|e| [e.from, e.to]).collect(),
            inputs: &self.inputs,
            outputs: &self.outputs,
            leaks: &self.leaks,
        }
        .serialize(serializer)
    }
}

pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let doc: ModelDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Malformed(e.to_string()))?;
    if doc.version != 1 {
        return Err(ModelError::Malformed(format!(
            "unsupported version {}",
            doc.version
        )));
    }
    Model::new(
        doc.n,
        doc.edges.iter().map(|[f, t]| (*f, *t)),
        doc.inputs,
        doc.outputs,
        doc.leaks,
    )
}

impl Model {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
        leaks: impl IntoIterator<Item = usize>,
    ) -> Result<Model, ModelError> {
        if n == 0 {
            return Err(ModelError::Malformed("n must be at least 1".into()));
        }
        let check = |i: usize| {
            if (1..=n).contains(&i) {
                Ok(i)
            } else {
                Err(ModelError::IndexOutOfRange { index: i, n })
            }
        };
        let mut seen = BTreeSet::new();
        for (from, to) in edges {
            check(from)?;
            check(to)?;
            if from == to {
                return Err(ModelError::SelfLoop(from));
            }
            if !seen.insert(Edge::new(from, to)) {
                return Err(ModelError::DuplicateEdge(from, to));
            }
        }
        let collect = |it: &mut dyn Iterator<Item = usize>| -> Result<BTreeSet<usize>, ModelError> {
            it.map(check).collect()
        };
        Ok(Model {
            n,
            edges: seen.into_iter().collect(),
            inputs: collect(&mut inputs.into_iter())?,
            outputs: collect(&mut outputs.into_iter())?,
            leaks: collect(&mut leaks.into_iter())?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &BTreeSet<usize> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<usize> {
        &self.outputs
    }

    pub fn leaks(&self) -> &BTreeSet<usize> {
        &self.leaks
    }

    pub fn graph(&self) -> Digraph {
        Digraph {
            n: self.n,
            edges: self.edges.clone(),
        }
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.binary_search(&Edge::new(from, to)).is_ok()
    }

    /// All parameter symbols (edge rates and leak rates), sorted.
    pub fn parameters(&self) -> Vec<Symbol> {
        let mut p: Vec<Symbol> = self
            .edges
            .iter()
            .map(Edge::symbol)
            .chain(self.leaks.iter().map(|&j| Symbol::leak(j)))
            .collect();
        p.sort();
        p
    }

    /// Canonical JSON document.
    pub fn to_json(&self) -> String {
        let list = |s: &BTreeSet<usize>| {
            let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
            format!("[{}]", v.join(","))
        };
        let mut edges = String::new();
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                edges.push(',');
            }
            let _ = write!(edges, "[{},{}]", e.from, e.to);
        }
        format!(
            "{{ \"version\": 1, \"n\": {}, \"edges\": [{}], \"in\": {}, \"out\": {}, \"leak\": {} }}",
            self.n,
            edges,
            list(&self.inputs),
            list(&self.outputs),
            list(&self.leaks)
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let strongly_connected = self.graph().is_strongly_connected();
        ValidationReport {
            strongly_connected,
            inputs: self.inputs.len(),
            outputs: self.outputs.len(),
            leaks: self.leaks.len(),
            forest_formula_applicable: strongly_connected
                && self.inputs.len() == 1
                && self.outputs.len() == 1
                && self.leaks.is_empty(),
        }
    }

    /// The symbolic compartmental matrix `A`: `a_ij = k_ij` for an edge
    /// `j -> i`, and `a_ii` is minus the total outflow of `i` (including its
    /// leak).
    pub fn compartmental_matrix(&self) -> Matrix<MultiPoly> {
        let n = self.n;
        let mut a = Matrix::zeros(n, n);
        for e in &self.edges {
            let k = MultiPoly::var(e.symbol());
            a[(e.to - 1, e.from - 1)] = &a[(e.to - 1, e.from - 1)] + &k;
            a[(e.from - 1, e.from - 1)] = &a[(e.from - 1, e.from - 1)] - &k;
        }
        for &j in &self.leaks {
            let k = MultiPoly::var(Symbol::leak(j));
            a[(j - 1, j - 1)] = &a[(j - 1, j - 1)] - &k;
        }
        a
    }

    /// The compartmental matrix with every parameter replaced by its value.
    pub fn compartmental_matrix_at<T: Scalar>(
        &self,
        point: &ParamPoint<T>,
    ) -> Result<Matrix<T>, ModelError> {
        let n = self.n;
        let value = |s: Symbol| {
            point
                .get(&s)
                .cloned()
                .ok_or(ModelError::Poly(PolyError::MissingSymbol(s)))
        };
        let mut a = Matrix::from_fn(n, n, |_, _| T::zero());
        for e in &self.edges {
            let k = value(e.symbol())?;
            let (i, j) = (e.to - 1, e.from - 1);
            a[(i, j)] = a[(i, j)].clone() + k.clone();
            a[(j, j)] = a[(j, j)].clone() - k;
        }
        for &j in &self.leaks {
            let k = value(Symbol::leak(j))?;
            a[(j - 1, j - 1)] = a[(j - 1, j - 1)].clone() - k;
        }
        Ok(a)
    }

    /// The graph with every edge leaving the output `i` removed.
    pub fn reduced_graph(&self, i: usize) -> Result<Digraph, ModelError> {
        if !self.outputs.contains(&i) {
            return Err(ModelError::NotAnOutput(i));
        }
        Ok(Digraph {
            n: self.n,
            edges: self.edges.iter().copied().filter(|e| e.from != i).collect(),
        })
    }

    /// The same model with every compartment `v` renamed to `sigma(v)`.
    pub fn relabel(&self, sigma: &Permutation) -> Model {
        let map = |s: &BTreeSet<usize>| s.iter().map(|&v| sigma.apply(v)).collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(sigma.apply(e.from), sigma.apply(e.to)))
            .collect();
        edges.sort();
        Model {
            n: self.n,
            edges,
            inputs: map(&self.inputs),
            outputs: map(&self.outputs),
            leaks: map(&self.leaks),
        }
    }

    pub fn with_io(
        &self,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
    ) -> Result<Model, ModelError> {
        Model::new(
            self.n,
            self.edges.iter().map(|e| (e.from, e.to)),
            inputs,
            outputs,
            self.leaks.iter().copied(),
        )
    }

    pub fn with_leaks(&self, leaks: impl IntoIterator<Item = usize>) -> Result<Model, ModelError> {
        Model::new(
            self.n,
            self.edges.iter().map(|e| (e.from, e.to)),
            self.inputs.iter().copied(),
            self.outputs.iter().copied(),
            leaks,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    pub(crate) const STAR4: &str = r#"{ "version": 1, "n": 4, "edges": [[1,2],[2,1],[1,3],[3,1],[1,4],[4,1]], "in": [1], "out": [2], "leak": [] }"#;

    fn names(m: &Model) -> Vec<String> {
        m.parameters().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_star() {
        let m = parse_model(STAR4).unwrap();
        assert_eq!(m.edges().len(), 6);
        assert_eq!(names(&m), ["k12", "k13", "k14", "k21", "k31", "k41"]);
        assert_eq!(m.edges()[0], Edge::new(1, 2));
        assert_eq!(m.edges()[3], Edge::new(2, 1));
    }

    #[test]
    fn parse_errors() {
        let out_of_range = r#"{"version":1,"n":4,"edges":[[5,1]],"in":[1],"out":[1],"leak":[]}"#;
        let e = parse_model(out_of_range).unwrap_err();
        assert!(e.to_string().contains("index out of range"), "{e}");
        let dup = r#"{"version":1,"n":2,"edges":[[1,2],[1,2]],"in":[1],"out":[1],"leak":[]}"#;
        assert!(parse_model(dup).unwrap_err().to_string().contains("duplicate edge"));
        let selfloop = r#"{"version":1,"n":2,"edges":[[2,2]],"in":[1],"out":[1],"leak":[]}"#;
        assert!(matches!(parse_model(selfloop), Err(ModelError::SelfLoop(2))));
        assert!(matches!(parse_model("{"), Err(ModelError::Malformed(_))));
        let bad_io = r#"{"version":1,"n":2,"edges":[],"in":[3],"out":[1],"leak":[]}"#;
        assert!(matches!(
            parse_model(bad_io),
            Err(ModelError::IndexOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn serialization_is_canonical() {
        let m = parse_model(STAR4).unwrap();
        let text = m.to_json();
        assert_eq!(
            text,
            r#"{ "version": 1, "n": 4, "edges": [[1,2],[1,3],[1,4],[2,1],[3,1],[4,1]], "in": [1], "out": [2], "leak": [] }"#
        );
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn validation_flags() {
        let m = parse_model(STAR4).unwrap();
        let r = m.validate();
        assert!(r.strongly_connected && r.forest_formula_applicable);
        let path = Model::new(3, [(1, 2), (2, 3)], [1], [3], []).unwrap();
        assert!(!path.validate().strongly_connected);
        let leaky = m.with_leaks([2]).unwrap();
        let r = leaky.validate();
        assert!(r.strongly_connected && !r.forest_formula_applicable);
        assert_eq!(r.leaks, 1);
    }

    #[test]
    fn compartmental_matrix_of_star() {
        let m = parse_model(STAR4).unwrap();
        let a = m.compartmental_matrix();
        assert_eq!(
            a[(0, 0)],
            "-1*k21 + -1*k31 + -1*k41".parse::<MultiPoly>().unwrap()
        );
        assert_eq!(a[(0, 1)], MultiPoly::var(Symbol::rate(1, 2)));
        assert_eq!(a[(1, 1)], -MultiPoly::var(Symbol::rate(1, 2)));
        assert!(a[(2, 3)].is_zero());
        for j in 0..4 {
            let col: MultiPoly = (0..4).map(|i| a[(i, j)].clone()).sum();
            assert!(col.is_zero());
        }
    }

    #[test]
    fn leak_on_diagonal() {
        let m = Model::new(3, [(1, 2), (2, 1), (1, 3), (3, 1)], [1], [1], [1]).unwrap();
        let a = m.compartmental_matrix();
        assert_eq!(
            a[(0, 0)],
            "-1*k01 + -1*k21 + -1*k31".parse::<MultiPoly>().unwrap()
        );
        let col: MultiPoly = (0..3).map(|i| a[(i, 0)].clone()).sum();
        assert_eq!(col, -MultiPoly::var(Symbol::leak(1)));
    }

    #[test]
    fn empty_model_matrix_is_zero() {
        let m = Model::new(3, [], [1], [1], []).unwrap();
        let a = m.compartmental_matrix();
        assert!((0..3).all(|i| (0..3).all(|j| a[(i, j)].is_zero())));
    }

    #[test]
    fn reduced_graphs() {
        let m = parse_model(STAR4).unwrap();
        let g2 = m.reduced_graph(2).unwrap();
        assert_eq!(g2.edges.len(), 5);
        assert!(!g2.has_edge(2, 1));
        let g1 = m.with_io([1], [1]).unwrap().reduced_graph(1).unwrap();
        let into_one: Vec<Edge> = g1.edges.clone();
        assert_eq!(into_one, vec![Edge::new(2, 1), Edge::new(3, 1), Edge::new(4, 1)]);
        assert!(matches!(m.reduced_graph(3), Err(ModelError::NotAnOutput(3))));
    }

    #[test]
    fn numeric_matrix_matches_symbolic() {
        let m = parse_model(STAR4).unwrap().with_leaks([3]).unwrap();
        let point: ParamPoint<i64> = m
            .parameters()
            .into_iter()
            .zip(1..)
            .collect();
        let q = point.map(|v| crate::Rational::from_i64(*v));
        let a = m.compartmental_matrix_at(&q).unwrap();
        let s = m.compartmental_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s[(i, j)].evaluate(&q).unwrap(), a[(i, j)]);
            }
        }
    }
}
