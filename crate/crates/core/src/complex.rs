//! Abstract simplicial complexes and their rational realizations.
//!
//! Vertices are ordered lexicographically by label and edges
//! lexicographically by their (sorted) label pairs. Both orders are fixed
//! at construction and determine the layout of the squared-length vector and
//! the columns of the length Jacobian.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::ComplexError;
use crate::lcp::{simplex_square_distance, SimplexDistance};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// Sorted vertex indices.
pub type Simplex = Vec<usize>;

#[derive(Clone, PartialEq, Eq)]
pub struct AbstractSimplicialComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Simplex>,
    edges: Vec<(usize, usize)>,
    /// The maximal simplices as supplied, kept for logs and serialization.
    input: Vec<Vec<String>>,
}

impl AbstractSimplicialComplex {
    /// Builds the subset closure of the given simplices.
    pub fn from_maximal_simplices<S: AsRef<str>>(data: &[Vec<S>]) -> Result<Self, ComplexError> {
        if data.is_empty() {
            return Err(ComplexError::NoSimplices);
        }
        let mut labels = BTreeSet::new();
        for s in data {
            if s.is_empty() {
                return Err(ComplexError::EmptySimplex);
            }
            for v in s {
                let v = v.as_ref();
                if v.is_empty() || v.contains(',') || v.trim() != v {
                    return Err(ComplexError::BadLabel(v.to_string()));
                }
                labels.insert(v.to_string());
            }
        }
        let vertices: Vec<String> = labels.into_iter().collect();
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();

        let mut simplices = BTreeSet::new();
        for s in data {
            let mut idx: Vec<usize> = s.iter().map(|v| index[v.as_ref()]).collect();
            idx.sort_unstable();
            idx.dedup();
            // all non-empty subsets
            let k = idx.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| idx[b])
                    .collect();
                simplices.insert(face);
            }
        }
        let edges = simplices
            .iter()
            .filter(|s| s.len() == 2)
            .map(|s| (s[0], s[1]))
            .collect();
        let input = data
            .iter()
            .map(|s| s.iter().map(|v| v.as_ref().to_string()).collect())
            .collect();
        Ok(AbstractSimplicialComplex {
            vertices,
            simplices,
            edges,
            input,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(label))
            .ok()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Edges as vertex-index pairs `(i, j)` with `i < j`, in the fixed order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplices_of_dim(&self, dim: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.len() == dim + 1)
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn maximal_input(&self) -> &[Vec<String>] {
        &self.input
    }

    pub fn labels_of(&self, s: &[usize]) -> Vec<&str> {
        s.iter().map(|&i| self.vertices[i].as_str()).collect()
    }

    /// Unordered pairs of simplices with disjoint vertex sets.
    ///
    /// With `maximal_only`, a pair is kept only if neither side can be
    /// enlarged by a vertex while staying a simplex disjoint from the other
    /// side; every disjoint pair is contained in such a maximal one.
    pub fn non_adjacent_pairs(&self, maximal_only: bool) -> Vec<(Simplex, Simplex)> {
        let all: Vec<&Simplex> = self.simplices.iter().collect();
        let mut out = Vec::new();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if !disjoint(a, b) {
                    continue;
                }
                if maximal_only && (self.extendable(a, b) || self.extendable(b, a)) {
                    continue;
                }
                out.push(((*a).clone(), (*b).clone()));
            }
        }
        out
    }

    fn extendable(&self, side: &[usize], other: &[usize]) -> bool {
        (0..self.vertices.len())
            .filter(|v| !side.contains(v) && !other.contains(v))
            .any(|v| {
                let mut bigger = side.to_vec();
                bigger.push(v);
                bigger.sort_unstable();
                self.simplices.contains(&bigger)
            })
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| !b.contains(v))
}

impl fmt::Debug for AbstractSimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbstractSimplicialComplex")
            .field("vertices", &self.vertices)
            .field("maximal", &self.input)
            .finish()
    }
}

/// Rational coordinates in `E^dim` for every vertex of a complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realization {
    complex: AbstractSimplicialComplex,
    dim: usize,
    /// Indexed like `complex.vertices()`.
    coords: Vec<Vec<Rational>>,
}

impl Realization {
    pub fn new(
        complex: AbstractSimplicialComplex,
        dim: usize,
        coords: &BTreeMap<String, Vec<Rational>>,
    ) -> Result<Self, ComplexError> {
        for label in coords.keys() {
            if complex.vertex_index(label).is_none() {
                return Err(ComplexError::UnknownVertex(label.clone()));
            }
        }
        let ordered = complex
            .vertices()
            .iter()
            .map(|v| {
                coords
                    .get(v)
                    .cloned()
                    .ok_or_else(|| ComplexError::MissingCoordinates(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Realization::from_ordered(complex, dim, ordered)
    }

    /// Coordinates given in vertex order.
    pub fn from_ordered(
        complex: AbstractSimplicialComplex,
        dim: usize,
        coords: Vec<Vec<Rational>>,
    ) -> Result<Self, ComplexError> {
        if dim == 0 {
            return Err(ComplexError::ZeroDimension);
        }
        if coords.len() != complex.num_vertices() {
            return Err(ComplexError::MissingCoordinates(format!(
                "{} of {} vertices given",
                coords.len(),
                complex.num_vertices()
            )));
        }
        for (label, c) in complex.vertices().iter().zip(&coords) {
            if c.len() != dim {
                return Err(ComplexError::CoordinateCount {
                    vertex: label.clone(),
                    got: c.len(),
                    expected: dim,
                });
            }
        }
        Ok(Realization {
            complex,
            dim,
            coords,
        })
    }

    pub fn complex(&self) -> &AbstractSimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Vec<Rational>] {
        &self.coords
    }

    pub fn coord(&self, vertex: usize) -> &[Rational] {
        &self.coords[vertex]
    }

    pub fn coords_by_label(&self) -> BTreeMap<String, Vec<Rational>> {
        self.complex
            .vertices()
            .iter()
            .cloned()
            .zip(self.coords.iter().cloned())
            .collect()
    }

    /// Copy with vertex `v` moved to `to`.
    pub fn with_vertex_moved(&self, v: usize, to: Vec<Rational>) -> Result<Self, ComplexError> {
        let mut coords = self.coords.clone();
        coords[v] = to;
        Realization::from_ordered(self.complex.clone(), self.dim, coords)
    }

    /// Stacked coordinate vector `α ∈ Q^{d|V|}` in vertex order.
    pub fn stacked(&self) -> Vec<Rational> {
        self.coords.iter().flatten().cloned().collect()
    }

    pub fn simplex_points(&self, s: &[usize]) -> Vec<Vec<Rational>> {
        s.iter().map(|&v| self.coords[v].clone()).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.coords
            .iter()
            .map(|c| c.iter().map(Rational::to_f64).collect())
            .collect()
    }
}

fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).square()).sum()
}

/// Exact squared edge lengths in edge order.
pub fn squared_lengths(r: &Realization) -> Vec<Rational> {
    r.complex
        .edges()
        .iter()
        .map(|&(i, j)| squared_distance(&r.coords[i], &r.coords[j]))
        .collect()
}

/// `|E| × d|V|` Jacobian of the squared-length map. The row of edge `(i, j)`
/// holds `2(αᵢ − αⱼ)` in vertex `i`'s block and `2(αⱼ − αᵢ)` in `j`'s.
pub fn length_jacobian(r: &Realization) -> RatMatrix {
    let d = r.dim;
    let edges = r.complex.edges();
    let mut m = RatMatrix::zeros(edges.len(), d * r.complex.num_vertices());
    let two = Rational::from(2);
    for (row, &(i, j)) in edges.iter().enumerate() {
        for k in 0..d {
            let diff = &two * (&r.coords[i][k] - &r.coords[j][k]);
            m[(row, d * j + k)] = -&diff;
            m[(row, d * i + k)] = diff;
        }
    }
    m
}

/// Desired squared edge lengths: explicit per-edge entries plus an
/// optional default for every other edge.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SquaredLengthSpec {
    entries: BTreeMap<(String, String), Rational>,
    default: Option<Rational>,
}

impl SquaredLengthSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_default(value: Rational) -> Self {
        SquaredLengthSpec {
            entries: BTreeMap::new(),
            default: Some(value),
        }
    }

    /// Key order is irrelevant: `("b", "a")` and `("a", "b")` name the same edge.
    pub fn set(&mut self, a: &str, b: &str, value: Rational) -> &mut Self {
        self.entries.insert(edge_key(a, b), value);
        self
    }

    pub fn set_default(&mut self, value: Option<Rational>) -> &mut Self {
        self.default = value;
        self
    }

    pub fn default_value(&self) -> Option<&Rational> {
        self.default.as_ref()
    }

    pub fn entries(&self) -> &BTreeMap<(String, String), Rational> {
        &self.entries
    }

    /// One positive value per edge of `c`, in edge order.
    pub fn resolve(&self, c: &AbstractSimplicialComplex) -> Result<Vec<Rational>, ComplexError> {
        for (a, b) in self.entries.keys() {
            match (c.vertex_index(a), c.vertex_index(b)) {
                (Some(i), Some(j)) if c.contains(&sorted_pair(i, j)) => {}
                _ => return Err(ComplexError::NotAnEdge(a.clone(), b.clone())),
            }
        }
        c.edges()
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (&c.vertices()[i], &c.vertices()[j]);
                let v = self
                    .entries
                    .get(&edge_key(a, b))
                    .or(self.default.as_ref())
                    .ok_or_else(|| ComplexError::MissingLength(a.clone(), b.clone()))?;
                if !v.is_positive() {
                    return Err(ComplexError::NonPositiveLength(a.clone(), b.clone()));
                }
                Ok(v.clone())
            })
            .collect()
    }
}

fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

fn sorted_pair(i: usize, j: usize) -> Vec<usize> {
    if i < j {
        vec![i, j]
    } else {
        vec![j, i]
    }
}

/// Exact squared collision distance with the pair that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollisionDistance {
    /// No non-adjacent pair exists, so nothing can collide.
    Unconstrained,
    Finite {
        squared: Rational,
        pair: (Simplex, Simplex),
        closest: Box<SimplexDistance>,
    },
}

impl CollisionDistance {
    pub fn squared(&self) -> Option<&Rational> {
        match self {
            CollisionDistance::Unconstrained => None,
            CollisionDistance::Finite { squared, .. } => Some(squared),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.squared().is_some_and(Rational::is_zero)
    }
}

/// Minimum over maximal non-adjacent pairs of the exact squared distance
/// between their realized hulls. Ties go to the earliest pair.
pub fn collision_distance_squared(r: &Realization) -> Result<CollisionDistance, ComplexError> {
    collision_distance_over(r, &r.complex.non_adjacent_pairs(true))
}

pub fn collision_distance_over(
    r: &Realization,
    pairs: &[(Simplex, Simplex)],
) -> Result<CollisionDistance, ComplexError> {
    let distances = pairs
        .par_iter()
        .map(|(a, b)| simplex_square_distance(&r.simplex_points(a), &r.simplex_points(b)))
        .collect::<Result<Vec<_>, _>>()?;
    let best = distances.into_iter().zip(pairs).reduce(|best, cur| {
        if cur.0.squared < best.0.squared {
            cur
        } else {
            best
        }
    });
    Ok(match best {
        None => CollisionDistance::Unconstrained,
        Some((closest, pair)) => CollisionDistance::Finite {
            squared: closest.squared.clone(),
            pair: pair.clone(),
            closest: Box::new(closest),
        },
    })
}

pub fn is_self_intersecting(r: &Realization) -> Result<bool, ComplexError> {
    Ok(collision_distance_squared(r)?.is_zero())
}
