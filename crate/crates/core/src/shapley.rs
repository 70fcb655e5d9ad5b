//! Shapley decomposition of β₀, influence measure and entropy.
//!
//! The game value of a vertex subset `C` is `β₀(C)`, and each marginal is
//! taken in absolute value:
//!
//! ```text
//! s(i) = Σ_{C ⊆ X∖{i}} |C|!(n-|C|-1)!/n! · |β₀(C ∪ {i}) − β₀(C)|
//! ```
//!
//! The exact path fills a table of β₀ over all `2^n` subsets, accumulates the
//! integer counts `t[i][k]` of absolute marginals per cardinality `k`, and
//! applies the factorial weights once per cardinality in exact rational
//! arithmetic. Integer accumulation makes the result independent of the
//! thread count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{DisjointSet, RollbackDisjointSet};
use crate::metric::{build_complex, build_distance_matrix, LabeledPointSet, Metric, NeighborComplex};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_EXACT_CAP: usize = 20;
/// Above this the `2^n` β₀ table no longer fits comfortably in memory.
pub const HARD_EXACT_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ShapleyMethod {
    Exact { cap: usize },
    Sampled { permutations: usize, seed: u64 },
}

impl Default for ShapleyMethod {
    fn default() -> Self {
        ShapleyMethod::Exact { cap: DEFAULT_EXACT_CAP }
    }
}

/// How a Shapley vector was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Exact,
    Sampled { num_permutations: usize, seed: u64, std_errors: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapleyVector {
    pub values: Vec<f64>,
    /// `t[i][k]`: sum over `|C| = k`, `i ∉ C` of `|β₀(C ∪ {i}) − β₀(C)|`.
    /// Present on the exact path only.
    pub cardinality_counts: Option<Vec<Vec<u64>>>,
    pub provenance: Provenance,
}

impl ShapleyVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact rational Shapley values rebuilt from the integer table.
    pub fn exact_values(&self) -> Option<Vec<BigRational>> {
        let table = self.cardinality_counts.as_ref()?;
        Some(table.iter().map(|row| weighted_sum(row)).collect())
    }

    pub fn std_errors(&self) -> Option<&[f64]> {
        match &self.provenance {
            Provenance::Sampled { std_errors, .. } => Some(std_errors),
            Provenance::Exact => None,
        }
    }
}

/// `Σ_k t[k] · k!(n-k-1)!/n!` with `n = t.len()`, i.e. `Σ_k t[k] / (n·C(n-1, k))`.
fn weighted_sum(counts: &[u64]) -> BigRational {
    let n = counts.len();
    let mut total = BigRational::zero();
    let mut binom = BigInt::from(1u32); // C(n-1, k)
    for (k, &t) in counts.iter().enumerate() {
        if t != 0 {
            total += BigRational::new(BigInt::from(t), BigInt::from(n) * &binom);
        }
        binom = binom * BigInt::from(n - 1 - k) / BigInt::from(k + 1);
    }
    total
}

/// Fills `table[mask] = β₀(mask)` for every subset of the vertices.
fn betti_table(complex: &NeighborComplex) -> Vec<u8> {
    let n = complex.len();
    let neighbors: Vec<u32> = (0..n).map(|v| complex.adjacency(v).low_word() as u32).collect();
    let mut table = vec![0u8; 1usize << n];

    #[cfg(feature = "parallel")]
    let fixed = {
        let threads = rayon::current_num_threads().max(1);
        let bits = usize::BITS - (threads - 1).leading_zeros();
        (bits as usize + 2).min(n).min(12)
    };
    #[cfg(not(feature = "parallel"))]
    let fixed = 0usize;

    // Vertices are decided from n-1 down to 0, so fixing the top `fixed`
    // vertices selects one contiguous chunk of the table.
    let free = n - fixed;
    let fill_chunk = |(prefix, chunk): (usize, &mut [u8])| {
        let mut dsu = RollbackDisjointSet::new(n);
        let high = (prefix << free) as u32;
        let mut components = 0u8;
        let mut mask = 0u32;
        for v in (free..n).rev() {
            if high & (1 << v) != 0 {
                components = include(&mut dsu, &neighbors, mask, v, components);
                mask |= 1 << v;
            }
        }
        walk(&mut dsu, &neighbors, free, mask, components, chunk);
    };

    #[cfg(feature = "parallel")]
    table.par_chunks_mut(1 << free).enumerate().for_each(fill_chunk);
    #[cfg(not(feature = "parallel"))]
    table.chunks_mut(1 << free).enumerate().for_each(fill_chunk);
    table
}

/// Adds `v` to the union-find over `mask` and returns the new β₀.
#[inline]
fn include(dsu: &mut RollbackDisjointSet, neighbors: &[u32], mask: u32, v: usize, components: u8) -> u8 {
    let mut present = neighbors[v] & mask;
    let mut merged = 0u8;
    while present != 0 {
        let u = present.trailing_zeros() as usize;
        present &= present - 1;
        merged += u8::from(dsu.union(u, v));
    }
    debug_assert!(merged as u32 <= (neighbors[v] & mask).count_ones());
    components + 1 - merged
}

/// Decides vertices `remaining-1 .. 0`; `chunk[low bits of mask]` receives β₀.
fn walk(
    dsu: &mut RollbackDisjointSet,
    neighbors: &[u32],
    remaining: usize,
    mask: u32,
    components: u8,
    chunk: &mut [u8],
) {
    if remaining == 0 {
        chunk[(mask as usize) & (chunk.len() - 1)] = components;
        return;
    }
    let v = remaining - 1;
    walk(dsu, neighbors, v, mask, components, chunk);
    let checkpoint = dsu.checkpoint();
    let next = include(dsu, neighbors, mask, v, components);
    walk(dsu, neighbors, v, mask | (1 << v), next, chunk);
    dsu.rollback(checkpoint);
}

/// Integer marginal table `t[i][k]` for vertex `i`.
fn marginal_counts(table: &[u8], n: usize, i: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n];
    let bit = 1usize << i;
    for mask in (0..table.len()).filter(|m| m & bit == 0) {
        let delta = table[mask | bit].abs_diff(table[mask]);
        counts[mask.count_ones() as usize] += u64::from(delta);
    }
    counts
}

/// Exact Shapley values with the default size cap.
pub fn exact_shapley(complex: &NeighborComplex) -> Result<ShapleyVector> {
    exact_shapley_with_cap(complex, DEFAULT_EXACT_CAP)
}

/// Exact Shapley values by enumerating all `2^n` subsets. `cap` is clamped
/// to [`HARD_EXACT_CAP`].
pub fn exact_shapley_with_cap(complex: &NeighborComplex, cap: usize) -> Result<ShapleyVector> {
    let n = complex.len();
    let cap = cap.min(HARD_EXACT_CAP);
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    if n == 0 {
        return Err(Error::EmptyInput("complex"));
    }
    let table = betti_table(complex);

    #[cfg(feature = "parallel")]
    let counts: Vec<Vec<u64>> = (0..n).into_par_iter().map(|i| marginal_counts(&table, n, i)).collect();
    #[cfg(not(feature = "parallel"))]
    let counts: Vec<Vec<u64>> = (0..n).map(|i| marginal_counts(&table, n, i)).collect();

    let values = counts
        .iter()
        .map(|row| weighted_sum(row).to_f64().expect("finite Shapley value"))
        .collect::<Vec<_>>();
    debug_assert!(values.iter().all(|&s| (0.0..=n as f64).contains(&s)));
    Ok(ShapleyVector { values, cardinality_counts: Some(counts), provenance: Provenance::Exact })
}

/// Absolute β₀ marginals of each vertex when vertices join in `order`
/// (which must be a permutation of `0..n`).
pub fn permutation_marginals(complex: &NeighborComplex, order: &[usize]) -> Vec<u32> {
    let n = complex.len();
    assert_eq!(order.len(), n, "order must be a permutation of the vertices");
    let mut dsu = DisjointSet::new(n);
    let mut present = vec![false; n];
    let mut marginals = vec![0u32; n];
    for &v in order {
        let mut merged = 0u32;
        for u in complex.neighbors(v) {
            if present[u] && dsu.union(u, v) {
                merged += 1;
            }
        }
        present[v] = true;
        // Δβ₀ = 1 − merged.
        marginals[v] = merged.abs_diff(1);
    }
    marginals
}

fn permutation_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The `index`-th sampled permutation for `seed`.
pub fn sampled_permutation(n: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut permutation_rng(seed, index));
    order
}

/// Unbiased Monte Carlo estimate from `num_permutations` uniformly random
/// join orders. Permutation `k` depends only on `(seed, k)`, and sums are
/// accumulated as integers, so the output does not depend on scheduling.
pub fn sampled_shapley(complex: &NeighborComplex, num_permutations: usize, seed: u64) -> Result<ShapleyVector> {
    let n = complex.len();
    if num_permutations == 0 {
        return Err(Error::InvalidParameter("num_permutations must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptyInput("complex"));
    }
    let one = |k: usize| {
        let order = sampled_permutation(n, seed, k as u64);
        let m = permutation_marginals(complex, &order);
        let sum: Vec<u64> = m.iter().map(|&x| u64::from(x)).collect();
        let sq: Vec<u64> = m.iter().map(|&x| u64::from(x) * u64::from(x)).collect();
        (sum, sq)
    };
    let add = |(mut a, mut b): (Vec<u64>, Vec<u64>), (c, d): (Vec<u64>, Vec<u64>)| {
        a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
        b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
        (a, b)
    };
    #[cfg(feature = "parallel")]
    let (sum, sq) = (0..num_permutations).into_par_iter().map(one).reduce(|| (vec![0; n], vec![0; n]), add);
    #[cfg(not(feature = "parallel"))]
    let (sum, sq) = (0..num_permutations).map(one).fold((vec![0; n], vec![0; n]), add);

    let p = num_permutations as f64;
    let values: Vec<f64> = sum.iter().map(|&s| s as f64 / p).collect();
    let std_errors = sum
        .iter()
        .zip(&sq)
        .map(|(&s, &q)| {
            if num_permutations < 2 {
                return 0.0;
            }
            let mean = s as f64 / p;
            let var = ((q as f64 - p * mean * mean) / (p - 1.0)).max(0.0);
            (var / p).sqrt()
        })
        .collect();
    Ok(ShapleyVector {
        values,
        cardinality_counts: None,
        provenance: Provenance::Sampled { num_permutations, seed, std_errors },
    })
}

/// Normalized Shapley vector, its entropy and how it was computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile {
    pub labels: Vec<String>,
    pub shapley: Vec<f64>,
    pub mu: Vec<f64>,
    /// Natural-log entropy of `mu`.
    pub entropy: f64,
    pub provenance: Provenance,
    pub resolution: Option<f64>,
    pub metric: Option<String>,
}

impl InfluenceProfile {
    /// Vertices by descending influence; ties keep ascending index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.mu.len()).collect();
        order.sort_by(|&a, &b| self.mu[b].total_cmp(&self.mu[a]).then(a.cmp(&b)));
        order
    }

    /// Entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy / std::f64::consts::LN_2
    }
}

/// `μ(i) = s(i) / Σ s`, plus entropy. Labels default to vertex indices.
pub fn normalize_influence(sv: &ShapleyVector) -> Result<InfluenceProfile> {
    let total: f64 = match sv.exact_values() {
        // Normalize the exact rationals so uniform inputs give exactly uniform output.
        Some(exact) => {
            let sum: BigRational = exact.iter().cloned().sum();
            if sum.is_zero() {
                return Err(Error::ZeroShapley);
            }
            let mu: Vec<f64> = exact.iter().map(|s| (s / &sum).to_f64().expect("finite")).collect();
            return Ok(profile_from(sv, mu));
        }
        None => sv.values.iter().sum(),
    };
    if !(total > 0.0) {
        return Err(Error::ZeroShapley);
    }
    let mu = sv.values.iter().map(|s| s / total).collect();
    Ok(profile_from(sv, mu))
}

fn profile_from(sv: &ShapleyVector, mu: Vec<f64>) -> InfluenceProfile {
    InfluenceProfile {
        labels: (0..sv.len()).map(|i| i.to_string()).collect(),
        shapley: sv.values.clone(),
        entropy: entropy(&mu),
        mu,
        provenance: sv.provenance.clone(),
        resolution: None,
        metric: None,
    }
}

/// `−Σ μ ln μ` with `0 ln 0 = 0`.
pub fn entropy(mu: &[f64]) -> f64 {
    let h: f64 = mu.iter().filter(|&&m| m > 0.0).map(|&m| -m * m.ln()).sum();
    h.max(0.0)
}

/// Shapley vector of `complex` by the selected method.
pub fn shapley(complex: &NeighborComplex, method: &ShapleyMethod) -> Result<ShapleyVector> {
    match *method {
        ShapleyMethod::Exact { cap } => exact_shapley_with_cap(complex, cap),
        ShapleyMethod::Sampled { permutations, seed } => sampled_shapley(complex, permutations, seed),
    }
}

/// Influence profile of a complex given directly (e.g. a graph input).
pub fn complex_influence(complex: &NeighborComplex, method: &ShapleyMethod) -> Result<InfluenceProfile> {
    let mut profile = normalize_influence(&shapley(complex, method)?)?;
    profile.resolution = complex.resolution();
    Ok(profile)
}

/// Distances, complex at radius `r`, Shapley values, normalization and
/// entropy in one pass.
pub fn run_influence(
    points: &LabeledPointSet,
    metric: Metric,
    r: f64,
    method: &ShapleyMethod,
) -> Result<InfluenceProfile> {
    let dm = build_distance_matrix(points, metric)?;
    let complex = build_complex(&dm, r)?;
    let mut profile = complex_influence(&complex, method)?;
    profile.labels = points.labels().to_vec();
    profile.metric = Some(metric.name().to_string());
    Ok(profile)
}

/// One independent profile per radius, in the order given. The distance
/// matrix is computed once.
pub fn radius_sweep(
    points: &LabeledPointSet,
    metric: Metric,
    radii: &[f64],
    method: &ShapleyMethod,
) -> Result<Vec<InfluenceProfile>> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("at least one radius is required".into()));
    }
    let dm = build_distance_matrix(points, metric)?;
    let complexes = radii.iter().map(|&r| build_complex(&dm, r)).collect::<Result<Vec<_>>>()?;

    let mut by_radius: Vec<usize> = (0..radii.len()).collect();
    by_radius.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    for pair in by_radius.windows(2) {
        assert!(complexes[pair[0]].is_subcomplex_of(&complexes[pair[1]]), "complexes must be nested in r");
    }

    complexes
        .iter()
        .map(|c| {
            let mut profile = complex_influence(c, method)?;
            profile.labels = points.labels().to_vec();
            profile.metric = Some(metric.name().to_string());
            Ok(profile)
        })
        .collect()
}
