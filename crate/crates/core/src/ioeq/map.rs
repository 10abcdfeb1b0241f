//! The coefficient map: the non-constant coefficients of all input-output
//! equations as functions of the model parameters.

use serde::{Deserialize, Serialize};

use super::{coeffs_forest, coeffs_symbolic, IoEquation, IoError};
use crate::model::Model;
use crate::poly::{CompiledPoly, MultiPoly, ParamPoint, PolyError, Symbol};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Spanning incoming forests; single input and output, no leaks.
    Forest,
    /// Symbolic cofactor expansion of `sI - A`.
    Determinant,
    /// Forests when they apply, determinants otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub name: String,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct CoefficientMap {
    params: Vec<Symbol>,
    equations: Vec<IoEquation<MultiPoly>>,
    entries: Vec<CoefficientEntry>,
    dropped: Vec<String>,
    jacobian: Vec<Vec<MultiPoly>>,
}

pub fn coefficient_map(m: &Model, method: Method) -> Result<CoefficientMap, IoError> {
    let equations = match method {
        Method::Forest => vec![coeffs_forest(m)?],
        Method::Determinant => coeffs_symbolic(m)?,
        Method::Auto => {
            if m.validate().forest_formula_applicable {
                vec![coeffs_forest(m)?]
            } else {
                coeffs_symbolic(m)?
            }
        }
    };
    CoefficientMap::from_equations(m.parameters(), equations)
}

impl CoefficientMap {
    pub fn from_equations(
        params: Vec<Symbol>,
        equations: Vec<IoEquation<MultiPoly>>,
    ) -> Result<CoefficientMap, IoError> {
        let qualified = equations.len() > 1 || equations.iter().any(|e| e.rhs.len() > 1);
        let mut entries = Vec::new();
        let mut dropped = Vec::new();
        for eq in &equations {
            for (name, poly) in eq.named(qualified) {
                if poly.is_constant() {
                    dropped.push(name);
                } else {
                    entries.push(CoefficientEntry {
                        name,
                        poly: poly.clone(),
                    });
                }
            }
        }
        if entries.is_empty() {
            return Err(IoError::NoCoefficients);
        }
        let jacobian = entries
            .iter()
            .map(|e| params.iter().map(|p| e.poly.differentiate(p)).collect())
            .collect();
        Ok(CoefficientMap {
            params,
            equations,
            entries,
            dropped,
            jacobian,
        })
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn equations(&self) -> &[IoEquation<MultiPoly>] {
        &self.equations
    }

    pub fn entries(&self) -> &[CoefficientEntry] {
        &self.entries
    }

    /// Names of the coefficients left out because they are constant.
    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, name: &str) -> Option<&MultiPoly> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.poly)
    }

    pub fn param_index(&self, p: &Symbol) -> Option<usize> {
        self.params.iter().position(|q| q == p)
    }

    /// `∂ entry_r / ∂ param_c` as polynomials.
    pub fn jacobian_polys(&self) -> &[Vec<MultiPoly>] {
        &self.jacobian
    }

    pub fn evaluate<T: Scalar>(&self, point: &ParamPoint<T>) -> Result<Vec<T>, PolyError> {
        self.entries.iter().map(|e| e.poly.evaluate(point)).collect()
    }

    pub fn compile(&self) -> CompiledMap {
        let compile = |p: &MultiPoly| p.compile(&self.params).expect("symbols are parameters");
        CompiledMap {
            values: self.entries.iter().map(|e| compile(&e.poly)).collect(),
            jacobian: self
                .jacobian
                .iter()
                .map(|row| row.iter().map(compile).collect())
                .collect(),
        }
    }
}

/// Floating-point evaluator for the map and its Jacobian, indexed by
/// parameter position.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    values: Vec<CompiledPoly>,
    jacobian: Vec<Vec<CompiledPoly>>,
}

impl CompiledMap {
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.values.iter().map(|p| p.eval(x)).collect()
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x)).collect())
            .collect()
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
    fn four_star_map() {
        let cm = coefficient_map(&star(4, 1, 2), Method::Forest).unwrap();
        assert_eq!(cm.len(), 6);
        assert_eq!(cm.params().len(), 6);
        let names: Vec<&str> = cm.entries().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["c3", "c2", "c1", "d2", "d1", "d0"]);
        assert_eq!(cm.dropped(), ["c0", "d3"]);
    }

    #[test]
    fn two_three_drops_top_rhs() {
        let cm = coefficient_map(&star(5, 2, 3), Method::Auto).unwrap();
        assert!(cm.dropped().contains(&"d3".to_string()));
        assert!(cm.dropped().contains(&"c0".to_string()));
        assert_eq!(cm.entry("d2").unwrap().to_string(), "1*k12*k31");
    }

    #[test]
    fn no_edges_has_no_coefficients() {
        let m = Model::new(3, [], [1], [1], []).unwrap();
        assert!(matches!(
            coefficient_map(&m, Method::Determinant),
            Err(IoError::NoCoefficients)
        ));
    }

    #[test]
    fn qualified_names_with_two_outputs() {
        let m = star(3, 1, 1).with_io([1], [1, 2]).unwrap();
        let cm = coefficient_map(&m, Method::Auto).unwrap();
        assert!(cm.entry("c2[y1]").is_some());
        assert!(cm.entry("d1[u1,y2]").is_some());
    }

    #[test]
    fn compiled_agrees_with_exact() {
        let cm = coefficient_map(&star(4, 2, 2), Method::Forest).unwrap();
        let x: Vec<f64> = (0..cm.params().len()).map(|i| 1.0 + i as f64).collect();
        let pt = ParamPoint::from_values(cm.params(), &x);
        assert_eq!(cm.compile().eval(&x), cm.evaluate(&pt).unwrap());
    }
}
