//! Influence-guided masking on random graphs.
//!
//! Each graph is labeled by its number of connected components (1 to 3).
//! Masking deletes vertices (induced subgraph on the rest), and the label is
//! recomputed from scratch. The report gives, per `J`, the fraction of
//! graphs whose label changed when the `J` most influential, the `J` least
//! influential or `J` random vertices were removed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::VertexSet;
use crate::error::{Error, Result};
use crate::families::{make_family, FamilySpec};
use crate::homology::betti0_union_find;
use crate::metric::NeighborComplex;
use crate::shapley::{complex_influence, ShapleyMethod};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub graph: NeighborComplex,
    /// Connected-component count.
    pub label: usize,
}

impl LabeledGraph {
    pub fn new(graph: NeighborComplex) -> Self {
        let label = component_count(&graph);
        Self { graph, label }
    }
}

pub fn component_count(graph: &NeighborComplex) -> usize {
    betti0_union_find(graph, &VertexSet::full(graph.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub classes: usize,
    pub seed: u64,
    /// Draws allowed per requested graph before giving up.
    pub retries_per_graph: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { count: 300, n_min: 8, n_max: 14, p_min: 0.02, p_max: 0.21, classes: 3, seed: 0, retries_per_graph: 2000 }
    }
}

/// Rejection-samples Erdős–Rényi graphs until the classes `1..=classes`
/// together hold `count` graphs, split as evenly as possible. Graphs appear
/// in draw order.
pub fn generate_er_dataset(cfg: &EnsembleConfig) -> Result<Vec<LabeledGraph>> {
    if cfg.classes == 0 || cfg.n_min == 0 || cfg.n_min > cfg.n_max || !(cfg.p_min <= cfg.p_max) {
        return Err(Error::InvalidParameter("empty node, probability or class range".into()));
    }
    if !(0.0..=1.0).contains(&cfg.p_min) || !(0.0..=1.0).contains(&cfg.p_max) {
        return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
    }
    // The first `count % classes` classes take one extra graph.
    let quota: Vec<usize> =
        (0..cfg.classes).map(|c| cfg.count / cfg.classes + usize::from(c < cfg.count % cfg.classes)).collect();
    let mut filled = vec![0usize; cfg.classes];
    let mut graphs = Vec::with_capacity(cfg.count);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = cfg.retries_per_graph.saturating_mul(cfg.count.max(1));
    let mut attempts = 0;
    while filled.iter().zip(&quota).any(|(f, q)| f < q) {
        if attempts == budget {
            let class = filled.iter().zip(&quota).position(|(f, q)| f < q).expect("unfilled class") + 1;
            return Err(Error::ClassUnreachable {
                class,
                attempts,
                n_min: cfg.n_min,
                n_max: cfg.n_max,
                p_min: cfg.p_min,
                p_max: cfg.p_max,
            });
        }
        attempts += 1;
        let n = rng.random_range(cfg.n_min..=cfg.n_max);
        let p = if cfg.p_min == cfg.p_max { cfg.p_min } else { rng.random_range(cfg.p_min..cfg.p_max) };
        let graph = make_family(&FamilySpec::ErdosRenyi { n, p, seed: rng.random() })?;
        let g = LabeledGraph::new(graph);
        if (1..=cfg.classes).contains(&g.label) && filled[g.label - 1] < quota[g.label - 1] {
            filled[g.label - 1] += 1;
            graphs.push(g);
        }
    }
    Ok(graphs)
}

/// Vertices by descending influence, ties by ascending index.
pub fn rank_nodes(graph: &NeighborComplex, method: &ShapleyMethod) -> Result<Vec<usize>> {
    Ok(complex_influence(graph, method)?.ranking())
}

/// Deletes `vertices` and their incident edges.
pub fn mask_nodes(graph: &NeighborComplex, vertices: &[usize]) -> Result<NeighborComplex> {
    let n = graph.len();
    if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let removed = VertexSet::from_indices(n, vertices.iter().copied());
    if removed.len() == n {
        return Err(Error::MaskAll(n));
    }
    Ok(graph.induced(&removed.complement()).0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskVariant {
    Top,
    Bottom,
    Random,
}

impl MaskVariant {
    pub const ALL: [MaskVariant; 3] = [MaskVariant::Top, MaskVariant::Bottom, MaskVariant::Random];

    pub fn name(self) -> &'static str {
        match self {
            MaskVariant::Top => "top",
            MaskVariant::Bottom => "bottom",
            MaskVariant::Random => "random",
        }
    }
}

/// The three masked copies of a dataset for one `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskedDatasetTriple {
    pub j: usize,
    pub top: Vec<LabeledGraph>,
    pub bottom: Vec<LabeledGraph>,
    pub random: Vec<LabeledGraph>,
}

fn random_stream(seed: u64, graph: usize, j: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((graph as u64) << 16) | j as u64);
    rng
}

fn masked_for(
    graph: &LabeledGraph,
    ranking: &[usize],
    index: usize,
    j: usize,
    seed: u64,
) -> Result<[LabeledGraph; 3]> {
    let n = graph.graph.len();
    let top = &ranking[..j];
    let bottom = &ranking[n - j..];
    let random = sample(&mut random_stream(seed, index, j), n, j).into_vec();
    Ok([
        LabeledGraph::new(mask_nodes(&graph.graph, top)?),
        LabeledGraph::new(mask_nodes(&graph.graph, bottom)?),
        LabeledGraph::new(mask_nodes(&graph.graph, &random)?),
    ])
}

fn check_j(dataset: &[LabeledGraph], j: usize) -> Result<()> {
    let min = dataset.iter().map(|g| g.graph.len()).min().unwrap_or(0);
    if j >= min {
        return Err(Error::InvalidParameter(format!("J = {j} must be below the smallest graph size {min}")));
    }
    Ok(())
}

fn rankings(dataset: &[LabeledGraph], method: &ShapleyMethod) -> Result<Vec<Vec<usize>>> {
    #[cfg(feature = "parallel")]
    let iter = dataset.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = dataset.iter();
    iter.map(|g| rank_nodes(&g.graph, method)).collect()
}

pub fn build_masked_triple(
    dataset: &[LabeledGraph],
    j: usize,
    seed: u64,
    method: &ShapleyMethod,
) -> Result<MaskedDatasetTriple> {
    check_j(dataset, j)?;
    let ranks = rankings(dataset, method)?;
    let mut triple = MaskedDatasetTriple { j, top: Vec::new(), bottom: Vec::new(), random: Vec::new() };
    for (i, (g, r)) in dataset.iter().zip(&ranks).enumerate() {
        let [top, bottom, random] = masked_for(g, r, i, j, seed)?;
        triple.top.push(top);
        triple.bottom.push(bottom);
        triple.random.push(random);
    }
    Ok(triple)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskOutcome {
    pub graph: usize,
    pub j: usize,
    pub variant: MaskVariant,
    pub original_label: usize,
    pub masked_label: usize,
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipRates {
    pub j: usize,
    pub top: f64,
    pub bottom: f64,
    pub random: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskingReport {
    pub graph_count: usize,
    pub n_range: (usize, usize),
    pub seed: u64,
    pub rates: Vec<FlipRates>,
    pub outcomes: Vec<MaskOutcome>,
}

/// Label-flip rates under top, bottom and random masking for each `J`.
pub fn run_masking_experiment(
    dataset: &[LabeledGraph],
    j_values: &[usize],
    seed: u64,
    method: &ShapleyMethod,
) -> Result<MaskingReport> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput("dataset"));
    }
    for &j in j_values {
        check_j(dataset, j)?;
    }
    let ranks = rankings(dataset, method)?;
    let mut outcomes = Vec::new();
    let mut rates = Vec::new();
    for &j in j_values {
        let mut flips = [0usize; 3];
        for (i, (g, r)) in dataset.iter().zip(&ranks).enumerate() {
            let masked = masked_for(g, r, i, j, seed)?;
            for ((variant, m), count) in MaskVariant::ALL.into_iter().zip(masked).zip(flips.iter_mut()) {
                let flipped = m.label != g.label;
                *count += usize::from(flipped);
                outcomes.push(MaskOutcome {
                    graph: i,
                    j,
                    variant,
                    original_label: g.label,
                    masked_label: m.label,
                    flipped,
                });
            }
        }
        let total = dataset.len() as f64;
        rates.push(FlipRates {
            j,
            top: flips[0] as f64 / total,
            bottom: flips[1] as f64 / total,
            random: flips[2] as f64 / total,
        });
    }
    let n_min = dataset.iter().map(|g| g.graph.len()).min().unwrap_or(0);
    let n_max = dataset.iter().map(|g| g.graph.len()).max().unwrap_or(0);
    Ok(MaskingReport { graph_count: dataset.len(), n_range: (n_min, n_max), seed, rates, outcomes })
}
