//! β₀ of vertex-induced subcomplexes.
//!
//! The production path counts components with a union-find. The spectral
//! path counts zero eigenvalues of the induced Laplacian `L = D - A` and is
//! kept as an independent reference: a graph has `m` connected components
//! iff 0 is an eigenvalue of `L` with multiplicity `m`.

use nalgebra::DMatrix;

use crate::bits::VertexSet;
use crate::error::{Error, Result};
use crate::metric::NeighborComplex;

/// Union by size with path compression.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], components: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns `true` when two distinct components were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        true
    }

    /// Number of disjoint sets over all `n` elements.
    pub fn components(&self) -> usize {
        self.components
    }
}

/// Union by size without path compression, so that unions can be undone in
/// LIFO order. Used by the exhaustive subset walk.
#[derive(Clone, Debug)]
pub(crate) struct RollbackDisjointSet {
    parent: Vec<u8>,
    size: Vec<u8>,
    history: Vec<(u8, u8)>,
}

impl RollbackDisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n <= u8::MAX as usize);
        Self { parent: (0..n as u8).collect(), size: vec![1; n], history: Vec::with_capacity(n) }
    }

    #[inline]
    fn find(&self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    #[inline]
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a as u8), self.find(b as u8));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.history.push((b, a));
        true
    }

    #[inline]
    pub(crate) fn checkpoint(&self) -> usize {
        self.history.len()
    }

    #[inline]
    pub(crate) fn rollback(&mut self, checkpoint: usize) {
        while self.history.len() > checkpoint {
            let (child, root) = self.history.pop().expect("history underflow");
            self.parent[child as usize] = child;
            self.size[root as usize] -= self.size[child as usize];
        }
    }
}

fn check_width(complex: &NeighborComplex, subset: &VertexSet) {
    assert_eq!(
        subset.width(),
        complex.len(),
        "subset width {} does not match complex size {}",
        subset.width(),
        complex.len()
    );
}

/// Number of connected components of the subgraph induced by `subset`.
/// The empty subset has β₀ = 0.
///
/// Panics if the subset width differs from the complex size.
pub fn betti0_union_find(complex: &NeighborComplex, subset: &VertexSet) -> usize {
    check_width(complex, subset);
    let mut dsu = DisjointSet::new(complex.len());
    for u in subset.iter() {
        for v in complex.neighbors(u).filter(|&v| v > u && subset.contains(v)) {
            dsu.union(u, v);
        }
    }
    dsu.components() - (complex.len() - subset.len())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    /// Eigenvalues with `|λ| <= zero_tolerance` count as zero.
    pub zero_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { zero_tolerance: 1e-8, max_iterations: 10_000 }
    }
}

/// Laplacian `D - A` of the subgraph induced by `subset`, rows ordered by
/// ascending vertex index.
pub fn induced_laplacian(complex: &NeighborComplex, subset: &VertexSet) -> DMatrix<f64> {
    check_width(complex, subset);
    let vertices: Vec<usize> = subset.iter().collect();
    let k = vertices.len();
    let mut l = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a + 1..k {
            if complex.has_edge(vertices[a], vertices[b]) {
                l[(a, b)] = -1.0;
                l[(b, a)] = -1.0;
                l[(a, a)] += 1.0;
                l[(b, b)] += 1.0;
            }
        }
    }
    l
}

/// β₀ as the multiplicity of the zero eigenvalue of the induced Laplacian.
pub fn betti0_laplacian(complex: &NeighborComplex, subset: &VertexSet, cfg: &SpectralConfig) -> Result<usize> {
    if cfg.zero_tolerance.is_nan() || cfg.zero_tolerance <= 0.0 {
        return Err(Error::InvalidParameter("zero_tolerance must be positive".into()));
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let l = induced_laplacian(complex, subset);
    let eigen = l
        .try_symmetric_eigen(f64::EPSILON, cfg.max_iterations)
        .ok_or(Error::EigenNonConvergence(cfg.max_iterations))?;
    Ok(eigen.eigenvalues.iter().filter(|ev| ev.abs() <= cfg.zero_tolerance).count())
}

/// A subset together with a union-find over it, so that the effect of adding
/// one more vertex can be computed without recounting from scratch.
#[derive(Clone, Debug)]
pub struct ComponentSnapshot<'a> {
    complex: &'a NeighborComplex,
    subset: VertexSet,
    dsu: DisjointSet,
    components: usize,
}

impl<'a> ComponentSnapshot<'a> {
    pub fn new(complex: &'a NeighborComplex, subset: VertexSet) -> Self {
        check_width(complex, &subset);
        let mut snapshot = Self {
            complex,
            subset: VertexSet::empty(complex.len()),
            dsu: DisjointSet::new(complex.len()),
            components: 0,
        };
        for v in subset.iter() {
            snapshot.components = snapshot.merge(v);
        }
        snapshot
    }

    pub fn subset(&self) -> &VertexSet {
        &self.subset
    }

    pub fn components(&self) -> usize {
        self.components
    }

    fn merge(&mut self, v: usize) -> usize {
        let merged = self
            .complex
            .neighbors(v)
            .filter(|&u| self.subset.contains(u))
            .collect::<Vec<_>>()
            .into_iter()
            .filter(|&u| self.dsu.union(u, v))
            .count();
        self.subset.insert(v);
        self.components + 1 - merged
    }

    /// Adds `v` and returns the new β₀.
    pub fn add_vertex(&mut self, v: usize) -> Result<usize> {
        if v >= self.complex.len() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.complex.len() });
        }
        if self.subset.contains(v) {
            return Err(Error::VertexInSubset(v));
        }
        self.components = self.merge(v);
        Ok(self.components)
    }
}

/// β₀ of `subset ∪ {added}`, computed by merging the neighborhood of
/// `added` into a union-find built over `subset`.
pub fn incremental_components(complex: &NeighborComplex, subset: &VertexSet, added: usize) -> Result<usize> {
    if subset.contains(added) {
        return Err(Error::VertexInSubset(added));
    }
    ComponentSnapshot::new(complex, subset.clone()).add_vertex(added)
}
