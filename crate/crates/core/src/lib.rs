//! Shapley-value decomposition of the 0th Betti number.
//!
//! A finite sample set is turned into a neighbor complex at a fixed
//! resolution `r` (two samples are joined when their distance is at most
//! `r`). The number of connected components of every vertex-induced
//! subcomplex defines a cooperative game, and each sample's Shapley value in
//! that game measures its influence on the topology of the whole set.
//! Normalizing the Shapley vector gives a probability measure whose entropy
//! summarizes the complexity of the data space.
//!
//! ```
//! use shapley_homology::{run_influence, LabeledPointSet, Metric, ShapleyMethod};
//!
//! let points = LabeledPointSet::strings(["1111", "0000", "0001"]).unwrap();
//! let profile = run_influence(&points, Metric::Edit, 1.0, &ShapleyMethod::default()).unwrap();
//! assert_eq!(profile.mu, vec![0.5, 0.25, 0.25]);
//! assert!((profile.entropy - 1.5 * std::f64::consts::LN_2).abs() < 1e-12);
//! ```

pub mod bits;
pub mod error;
pub mod families;
pub mod grammar;
pub mod homology;
pub mod io;
pub mod masking;
pub mod metric;
pub mod shapley;

pub use bits::VertexSet;
pub use error::{Error, Result};
pub use families::{closed_form, family_entropy, make_family, verify_appendix_identities, FamilySpec};
pub use grammar::{builtin_grammar, grammar_entropy, Dfa};
pub use homology::{betti0_laplacian, betti0_union_find, incremental_components, SpectralConfig};
pub use masking::{generate_er_dataset, mask_nodes, rank_nodes, run_masking_experiment};
pub use metric::{build_complex, build_distance_matrix, edit_distance, DistanceMatrix, LabeledPointSet, Metric, NeighborComplex};
pub use shapley::{
    entropy, exact_shapley, normalize_influence, radius_sweep, run_influence, sampled_shapley, InfluenceProfile,
    ShapleyMethod, ShapleyVector,
};
