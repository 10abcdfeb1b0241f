use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Symbol;
use crate::scalar::Scalar;

/// An assignment of values to symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamPoint<T> {
    values: BTreeMap<Symbol, T>,
}

impl<T> Default for ParamPoint<T> {
    fn default() -> Self {
        ParamPoint {
            values: BTreeMap::new(),
        }
    }
}

impl<T> ParamPoint<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: &Symbol) -> Option<&T> {
        self.values.get(s)
    }

    pub fn insert(&mut self, s: Symbol, v: T) -> Option<T> {
        self.values.insert(s, v)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.values.contains_key(s)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &T)> {
        self.values.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.values.keys()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> ParamPoint<U> {
        ParamPoint {
            values: self.values.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }
}

impl<T: Clone> ParamPoint<T> {
    /// Values listed in the order of `symbols`; `None` if any is missing.
    pub fn values_for(&self, symbols: &[Symbol]) -> Option<Vec<T>> {
        symbols.iter().map(|s| self.values.get(s).cloned()).collect()
    }

    pub fn from_values(symbols: &[Symbol], values: &[T]) -> Self {
        symbols.iter().cloned().zip(values.iter().cloned()).collect()
    }
}

impl<T: Scalar> ParamPoint<T> {
    pub fn to_f64(&self) -> ParamPoint<f64> {
        self.map(|v| v.to_f64())
    }
}

impl<T> FromIterator<(Symbol, T)> for ParamPoint<T> {
    fn from_iter<I: IntoIterator<Item = (Symbol, T)>>(iter: I) -> Self {
        ParamPoint {
            values: iter.into_iter().collect(),
        }
    }
}

impl<T> IntoIterator for ParamPoint<T> {
    type Item = (Symbol, T);
    type IntoIter = std::collections::btree_map::IntoIter<Symbol, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.into_iter()
    }
}
