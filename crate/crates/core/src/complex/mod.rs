//! Covers, fuzzy covers, simplicial complexes and nerves.

mod cover;
mod export;
mod nerve;

pub use cover::{threshold, Cover, FuzzyCover};
pub use export::{NerveEdge, NerveGraph, NerveVertex};
pub use nerve::{fuzzy_nerve_filtration, fuzzy_nerve_levels, nerve};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{ensure, Error, Result};

/// A simplex as a strictly increasing list of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from arbitrary vertex ids (sorted, must be distinct).
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        ensure!(!vertices.is_empty(), Invariant, "empty simplex");
        vertices.sort_unstable();
        ensure!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            Invariant,
            "repeated vertex in simplex {vertices:?}"
        );
        Ok(Self(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Codimension-one faces, in the order obtained by dropping vertex 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let len = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..len).map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Canonical order: dimension first, then lexicographic.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A face-closed set of simplices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let simplices: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &simplices {
            for face in s.facets() {
                ensure!(
                    simplices.contains(&face),
                    Invariant,
                    "face {face} of {s} is missing"
                );
            }
        }
        Ok(Self { simplices })
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplices(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn count_dim(&self, d: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == d).count()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices.iter().filter(|s| s.dim() == 0).map(|s| s.0[0]).collect()
    }

    /// Simplices of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self.simplices.iter().filter(|s| s.dim() <= d).cloned().collect(),
        }
    }

    /// Same complex with every simplex carrying filtration value 0.
    pub fn to_filtered(&self) -> FilteredComplex {
        FilteredComplex::new(self.simplices.iter().map(|s| (s.clone(), 0.0)))
            .expect("a face-closed complex at constant value is a valid filtration")
    }
}

/// A face-closed complex with a monotone filtration value on each simplex.
///
/// Entries are stored in canonical `(dimension, lexicographic)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    entries: Vec<(Simplex, f64)>,
    index: HashMap<Simplex, usize>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    simplex: Vec<usize>,
    filtration: f64,
}

impl FilteredComplex {
    /// Validates face closure, finiteness and monotonicity.
    pub fn new(entries: impl IntoIterator<Item = (Simplex, f64)>) -> Result<Self> {
        let mut entries: Vec<(Simplex, f64)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (s, v)) in entries.iter().enumerate() {
            ensure!(v.is_finite(), Invariant, "simplex {s} has non-finite value {v}");
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::Invariant(format!("simplex {s} listed twice")));
            }
        }
        for (s, v) in &entries {
            for face in s.facets() {
                match index.get(&face) {
                    None => {
                        return Err(Error::Invariant(format!("face {face} of {s} is missing")))
                    }
                    Some(&j) => ensure!(
                        entries[j].1 <= *v,
                        Invariant,
                        "filtration not monotone: f({face}) = {} > f({s}) = {v}",
                        entries[j].1
                    ),
                }
            }
        }
        Ok(Self { entries, index })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, f64)> {
        self.entries.iter().map(|(s, v)| (s, *v))
    }

    pub fn entries(&self) -> &[(Simplex, f64)] {
        &self.entries
    }

    pub fn value(&self, s: &Simplex) -> Option<f64> {
        self.index.get(s).map(|&i| self.entries[i].1)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.entries.iter().map(|(s, _)| s.dim()).max()
    }

    /// Simplices with value `<= r`.
    pub fn sublevel(&self, r: f64) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self.entries.iter().filter(|(_, v)| *v <= r).map(|(s, _)| s.clone()).collect(),
        }
    }

    /// Simplices of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> FilteredComplex {
        let entries: Vec<_> = self.entries.iter().filter(|(s, _)| s.dim() <= d).cloned().collect();
        let index = entries.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        FilteredComplex { entries, index }
    }

    /// Applies a strictly increasing reparametrization to every value.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<FilteredComplex> {
        FilteredComplex::new(self.entries.iter().map(|(s, v)| (s.clone(), f(*v))))
    }

    /// JSON list of `{simplex: [ids], filtration: value}` in canonical order.
    pub fn to_json(&self) -> Result<String> {
        let list: Vec<JsonEntry> = self
            .entries
            .iter()
            .map(|(s, v)| JsonEntry { simplex: s.0.clone(), filtration: *v })
            .collect();
        Ok(serde_json::to_string_pretty(&list)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: Vec<JsonEntry> = serde_json::from_str(text)?;
        let entries = list
            .into_iter()
            .map(|e| Ok((Simplex::new(e.simplex)?, e.filtration)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}
