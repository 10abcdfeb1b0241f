use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{ParamPoint, Symbol};

/// A bijection of `{1..n}`; `images[v - 1]` is the image of `v`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// `None` unless `images` is a permutation of `1..=len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of `v`; vertex 0 (the environment) is fixed.
    pub fn apply(&self, v: usize) -> usize {
        if v == 0 {
            0
        } else {
            self.images[v - 1]
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `k_ij -> k_{σ(i)σ(j)}`; named symbols are unchanged.
    pub fn rename(&self, s: &Symbol) -> Symbol {
        match s.as_rate() {
            Some((to, from)) => Symbol::rate(self.apply(to), self.apply(from)),
            None => s.clone(),
        }
    }

    /// The point `x` with `x[k_ij] = point[k_{σ(i)σ(j)}]`.
    pub fn pull_back<T: Clone>(&self, point: &ParamPoint<T>) -> ParamPoint<T> {
        point
            .iter()
            .map(|(s, _)| {
                let v = point
                    .get(&self.rename(s))
                    .expect("point not closed under the permutation");
                (s.clone(), v.clone())
            })
            .collect()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(3 4)`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut any = false;
        for start in 1..=n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            write!(f, "({start}")?;
            seen[start] = true;
            let mut v = self.apply(start);
            while v != start {
                write!(f, " {v}")?;
                seen[v] = true;
                v = self.apply(v);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_operations() {
        let a = Permutation::from_images(vec![2, 3, 1, 4]).unwrap();
        let b = Permutation::transposition(4, 3, 4);
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&b).apply(3), a.apply(4));
        assert_eq!(a.to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_images(vec![1, 1]).is_none());
    }

    #[test]
    fn renames_rates_and_fixes_leaks() {
        let s = Permutation::transposition(4, 3, 4);
        assert_eq!(s.rename(&Symbol::rate(1, 3)), Symbol::rate(1, 4));
        assert_eq!(s.rename(&Symbol::leak(3)), Symbol::leak(4));
        assert_eq!(s.rename(&Symbol::rate(2, 1)), Symbol::rate(2, 1));
    }
}
