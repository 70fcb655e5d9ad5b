//! Sample sets, distance matrices and the neighbor complex at resolution `r`.
//!
//! Only the 1-skeleton of the Čech complex is materialized: the number of
//! path-components (β₀) is fully determined by it. Two samples are joined
//! when `d(i, j) <= r`.

use serde::{Deserialize, Serialize};

use crate::bits::VertexSet;
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest tolerated `|d(i, j) - d(j, i)|` in a precomputed matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Levenshtein distance with unit insertion, deletion and substitution costs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// One input sample.
#[derive(Clone, Debug, PartialEq)]
pub enum Sample {
    Symbols(String),
    Vector(Vec<f64>),
}

impl Sample {
    fn kind(&self) -> &'static str {
        match self {
            Sample::Symbols(_) => "symbol-string",
            Sample::Vector(_) => "vector",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Points {
    Strings(Vec<String>),
    Vectors(Vec<Vec<f64>>),
    /// Opaque samples known only through their pairwise distances.
    Precomputed(DistanceMatrix),
}

/// An ordered, nonempty sample set. Indices `0..n` are stable for the run.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPointSet {
    points: Points,
    labels: Vec<String>,
}

impl LabeledPointSet {
    pub fn new(points: Points) -> Result<Self> {
        let n = match &points {
            Points::Strings(s) => s.len(),
            Points::Vectors(v) => v.len(),
            Points::Precomputed(dm) => dm.len(),
        };
        if n == 0 {
            return Err(Error::EmptyInput("sample set"));
        }
        let labels = match &points {
            Points::Strings(s) => s.clone(),
            _ => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self { points, labels })
    }

    pub fn strings<S: Into<String>>(items: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(Points::Strings(items.into_iter().map(Into::into).collect()))
    }

    pub fn vectors(items: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(Points::Vectors(items))
    }

    pub fn precomputed(dm: DistanceMatrix) -> Result<Self> {
        Self::new(Points::Precomputed(dm))
    }

    /// Builds a set from heterogeneous samples, rejecting mixed kinds.
    pub fn from_samples(samples: Vec<Sample>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::EmptyInput("sample set"));
        };
        if let Some(other) = samples.iter().find(|s| s.kind() != first.kind()) {
            return Err(Error::MixedKinds { first: first.kind(), other: other.kind() });
        }
        match first {
            Sample::Symbols(_) => Self::strings(samples.into_iter().map(|s| match s {
                Sample::Symbols(s) => s,
                Sample::Vector(_) => unreachable!(),
            })),
            Sample::Vector(_) => Self::vectors(
                samples
                    .into_iter()
                    .map(|s| match s {
                        Sample::Vector(v) => v,
                        Sample::Symbols(_) => unreachable!(),
                    })
                    .collect(),
            ),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch { index: 0, expected: self.len(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn points(&self) -> &Points {
        &self.points
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Edit,
    Hamming,
    Euclidean,
    Precomputed,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Edit => "edit",
            Metric::Hamming => "hamming",
            Metric::Euclidean => "euclidean",
            Metric::Precomputed => "precomputed",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edit" => Ok(Metric::Edit),
            "hamming" => Ok(Metric::Hamming),
            "euclidean" => Ok(Metric::Euclidean),
            "precomputed" => Ok(Metric::Precomputed),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// Symmetric matrix of nonnegative pairwise distances with a zero diagonal.
/// The triangle inequality is not checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a square matrix. Entries within [`SYMMETRY_TOLERANCE`] of
    /// their transpose are accepted and the upper triangle is kept; larger
    /// asymmetry is rejected.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput("distance matrix"));
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, expected: n, found: r.len() });
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let value = rows[i][j];
                let bad_diagonal = i == j && value.abs() > SYMMETRY_TOLERANCE;
                if !value.is_finite() || value < 0.0 || bad_diagonal {
                    return Err(Error::InvalidDistance { i, j, value });
                }
                if i < j {
                    let (a, b) = (rows[i][j], rows[j][i]);
                    if (a - b).abs() > SYMMETRY_TOLERANCE {
                        return Err(Error::Asymmetric { i, j, a, b });
                    }
                    data[i * n + j] = a;
                    data[j * n + i] = a;
                }
            }
        }
        Ok(Self { n, data })
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let row = |i: usize| (0..n).map(|j| if i == j { 0.0 } else { f(i.min(j), i.max(j)) }).collect::<Vec<_>>();
        #[cfg(feature = "parallel")]
        let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(row).collect();
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<Vec<f64>> = (0..n).map(row).collect();
        Self { n, data: rows.concat() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1))
    }
}

/// Pairwise distances under `metric`. Symbol strings accept `edit` and
/// `hamming` (equal lengths); vectors accept `hamming` (count of differing
/// coordinates) and `euclidean`; precomputed matrices accept `precomputed`.
pub fn build_distance_matrix(points: &LabeledPointSet, metric: Metric) -> Result<DistanceMatrix> {
    match (&points.points, metric) {
        (Points::Strings(s), Metric::Edit) => {
            Ok(DistanceMatrix::from_fn(s.len(), |i, j| edit_distance(&s[i], &s[j]) as f64))
        }
        (Points::Strings(s), Metric::Hamming) => {
            let chars: Vec<Vec<char>> = s.iter().map(|x| x.chars().collect()).collect();
            check_lengths(chars.iter().map(Vec::len))?;
            Ok(DistanceMatrix::from_fn(s.len(), |i, j| {
                chars[i].iter().zip(&chars[j]).filter(|(a, b)| a != b).count() as f64
            }))
        }
        (Points::Vectors(v), Metric::Hamming) => {
            check_lengths(v.iter().map(Vec::len))?;
            Ok(DistanceMatrix::from_fn(v.len(), |i, j| v[i].iter().zip(&v[j]).filter(|(a, b)| a != b).count() as f64))
        }
        (Points::Vectors(v), Metric::Euclidean) => {
            check_lengths(v.iter().map(Vec::len))?;
            if let Some((i, _)) = v.iter().enumerate().find(|(_, x)| x.iter().any(|c| !c.is_finite())) {
                return Err(Error::InvalidDistance { i, j: i, value: f64::NAN });
            }
            Ok(DistanceMatrix::from_fn(v.len(), |i, j| {
                v[i].iter().zip(&v[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            }))
        }
        (Points::Precomputed(dm), Metric::Precomputed) => Ok(dm.clone()),
        (p, m) => Err(Error::MetricMismatch {
            metric: m.name(),
            kind: match p {
                Points::Strings(_) => "symbol-string",
                Points::Vectors(_) => "vector",
                Points::Precomputed(_) => "precomputed",
            },
        }),
    }
}

fn check_lengths(mut lengths: impl Iterator<Item = usize>) -> Result<()> {
    let Some(expected) = lengths.next() else { return Ok(()) };
    for (i, found) in lengths.enumerate() {
        if found != expected {
            return Err(Error::LengthMismatch { index: i + 1, expected, found });
        }
    }
    Ok(())
}

/// The 1-skeleton of the neighbor complex: an undirected simple graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborComplex {
    rows: Vec<VertexSet>,
    resolution: Option<f64>,
    source: String,
}

impl NeighborComplex {
    pub fn edgeless(n: usize) -> Self {
        Self { rows: vec![VertexSet::empty(n); n], resolution: None, source: format!("edgeless:{n}") }
    }

    /// Graph given verbatim by an edge list. Duplicate edges are merged;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::edgeless(n);
        g.source = "edges".into();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(())
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter()
    }

    pub fn adjacency(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Every edge of `self` is an edge of `other` (same vertex count).
    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.len() == other.len() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len());
        let mut g = Self::edgeless(self.len());
        for (u, v) in self.edges() {
            g.rows[perm[u]].insert(perm[v]);
            g.rows[perm[v]].insert(perm[u]);
        }
        g.resolution = self.resolution;
        g.source = self.source.clone();
        g
    }

    /// Induced subgraph on `keep`, with vertices renumbered in ascending
    /// order. Returns the new graph and the original index of each vertex.
    pub fn induced(&self, keep: &VertexSet) -> (Self, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (k, &v) in old.iter().enumerate() {
            new_index[v] = k;
        }
        let mut g = Self::edgeless(old.len());
        for (k, &v) in old.iter().enumerate() {
            for u in self.neighbors(v).filter(|&u| keep.contains(u)) {
                g.rows[k].insert(new_index[u]);
            }
        }
        g.resolution = self.resolution;
        g.source = format!("{}[induced]", self.source);
        (g, old)
    }
}

/// Joins `i != j` exactly when `d(i, j) <= r`.
pub fn build_complex(dm: &DistanceMatrix, r: f64) -> Result<NeighborComplex> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidRadius(r));
    }
    let n = dm.len();
    let mut g = NeighborComplex::edgeless(n);
    for i in 0..n {
        for j in i + 1..n {
            if dm.get(i, j) <= r {
                g.rows[i].insert(j);
                g.rows[j].insert(i);
            }
        }
    }
    g.resolution = Some(r);
    g.source = format!("distance-matrix:n={n}");
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> LabeledPointSet {
        LabeledPointSet::strings(["1111", "0000", "0001"]).unwrap()
    }

    /// Full Wagner-Fischer table, kept separate from the two-row version.
    fn edit_table(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in t.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            t[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let sub = t[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
                t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
            }
        }
        t[a.len()][b.len()]
    }

    #[test]
    fn edit_distance_examples() {
        assert_eq!(edit_distance("", "010"), 3);
        assert_eq!(edit_distance("0000", "0001"), 1);
        assert_eq!(edit_table("1111", "0000"), 4);
        assert_eq!(edit_distance("1111", "0000"), 4);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("", ""), 0);
    }

    #[test]
    fn g3_distances() {
        let dm = build_distance_matrix(&g3(), Metric::Edit).unwrap();
        assert_eq!(dm.get(0, 1), 4.0);
        assert_eq!(dm.get(0, 2), 3.0);
        assert_eq!(dm.get(1, 2), 1.0);
        assert_eq!(dm.get(2, 1), 1.0);
        assert_eq!(dm.get(1, 1), 0.0);
    }

    #[test]
    fn degenerate_sets() {
        let dm = build_distance_matrix(&LabeledPointSet::strings(["01"]).unwrap(), Metric::Edit).unwrap();
        assert_eq!(dm.len(), 1);
        assert_eq!(dm.get(0, 0), 0.0);
        let dm = build_distance_matrix(&LabeledPointSet::strings(["0110", "0110"]).unwrap(), Metric::Edit).unwrap();
        assert_eq!(dm.get(0, 1), 0.0);
        assert_eq!(LabeledPointSet::strings(Vec::<String>::new()), Err(Error::EmptyInput("sample set")));
    }

    #[test]
    fn rejects_mixed_kinds_and_bad_matrices() {
        let mixed = vec![Sample::Symbols("01".into()), Sample::Vector(vec![1.0])];
        assert!(matches!(LabeledPointSet::from_samples(mixed), Err(Error::MixedKinds { .. })));

        let asym = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.1, 0.0]]);
        assert!(matches!(asym, Err(Error::Asymmetric { i: 0, j: 1, .. })));
        let slight = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0 + 1e-12, 0.0]]).unwrap();
        assert_eq!(slight.get(1, 0), 1.0);
        assert!(DistanceMatrix::from_rows(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(DistanceMatrix::from_rows(vec![vec![1.0]]).is_err());
        assert!(matches!(
            DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        // Triangle inequality violations pass through untouched.
        let m = DistanceMatrix::from_rows(vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]]);
        assert!(m.is_ok());
    }

    #[test]
    fn metric_kind_checks() {
        assert!(matches!(build_distance_matrix(&g3(), Metric::Euclidean), Err(Error::MetricMismatch { .. })));
        let v = LabeledPointSet::vectors(vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![3.0, 0.0]]).unwrap();
        let dm = build_distance_matrix(&v, Metric::Euclidean).unwrap();
        assert_eq!(dm.get(0, 1), 5.0);
        let dm = build_distance_matrix(&v, Metric::Hamming).unwrap();
        assert_eq!(dm.get(0, 1), 2.0);
        assert_eq!(dm.get(1, 2), 1.0);
        let bad = LabeledPointSet::vectors(vec![vec![0.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(build_distance_matrix(&bad, Metric::Euclidean), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn complex_at_various_radii() {
        let dm = build_distance_matrix(&g3(), Metric::Edit).unwrap();
        let c = build_complex(&dm, 1.0).unwrap();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(c.degree(0), 0);
        assert_eq!(build_complex(&dm, 0.0).unwrap().edge_count(), 0);
        assert_eq!(build_complex(&dm, dm.max_entry()).unwrap().edge_count(), 3);
        assert_eq!(build_complex(&dm, -1.0), Err(Error::InvalidRadius(-1.0)));
        assert!(build_complex(&dm, f64::NAN).is_err());
    }

    #[test]
    fn edge_list_validation() {
        assert_eq!(NeighborComplex::from_edges(3, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert!(matches!(NeighborComplex::from_edges(3, [(0, 3)]), Err(Error::VertexOutOfRange { .. })));
        let g = NeighborComplex::from_edges(4, [(0, 1), (1, 0), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        let (sub, map) = g.induced(&VertexSet::from_indices(4, [1, 2, 3]));
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }
}
