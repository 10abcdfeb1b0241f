use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An indeterminate of a [`MultiPoly`](super::MultiPoly).
///
/// Rate constants of a compartmental model are `Rate { to, from }`, written
/// `k{to}{from}` (the rate of the edge `from -> to`); leak rates use `to = 0`.
/// Anything else (auxiliary indeterminates, test variables) is `Named`.
///
/// The derived order puts every rate before every named symbol and orders
/// rates numerically by `(to, from)`, which gives `k12 < k13 < k21 < k31`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Rate { to: u16, from: u16 },
    Named(Arc<str>),
}

impl Symbol {
    pub fn rate(to: usize, from: usize) -> Self {
        Symbol::Rate {
            to: to as u16,
            from: from as u16,
        }
    }

    pub fn leak(compartment: usize) -> Self {
        Symbol::rate(0, compartment)
    }

    pub fn named(name: &str) -> Self {
        Symbol::Named(Arc::from(name))
    }

    /// `(to, from)` for rate symbols.
    pub fn as_rate(&self) -> Option<(usize, usize)> {
        match self {
            Symbol::Rate { to, from } => Some((*to as usize, *from as usize)),
            Symbol::Named(_) => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Rate { to, from } if *to < 10 && *from < 10 => write!(f, "k{to}{from}"),
            Symbol::Rate { to, from } => write!(f, "k{to}_{from}"),
            Symbol::Named(name) => f.write_str(name),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Symbol {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(parse_rate(s).unwrap_or_else(|| Symbol::named(s)))
    }
}

fn parse_rate(s: &str) -> Option<Symbol> {
    let body = s.strip_prefix('k')?;
    if !body.is_empty() && !body.bytes().all(|b| b.is_ascii_digit() || b == b'_') {
        return None;
    }
    let (to, from) = match body.split_once('_') {
        Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
        None if body.len() == 2 => (body[..1].parse().ok()?, body[1..].parse().ok()?),
        None => return None,
    };
    Some(Symbol::Rate { to, from })
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().unwrap())
    }
}
