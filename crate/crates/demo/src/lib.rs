//! Browser bindings. Every export returns a JSON string: either
//! `{"ok": true, ...}` with the profile and the graph to draw, or
//! `{"ok": false, "error": "..."}`.

use serde::Serialize;
use shapley_homology::families::{closed_form, make_family, FamilySpec};
use shapley_homology::grammar::builtin_grammar;
use shapley_homology::shapley::{complex_influence, InfluenceProfile, ShapleyMethod};
use shapley_homology::{build_complex, build_distance_matrix, LabeledPointSet, Metric, NeighborComplex};
use wasm_bindgen::prelude::*;

/// Exact enumeration in the browser stays below this size.
const BROWSER_CAP: usize = 16;
const SAMPLED_PERMUTATIONS: usize = 4000;

#[derive(Serialize)]
struct Response {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<InfluenceProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    title: Option<String>,
}

fn method_for(n: usize) -> ShapleyMethod {
    if n <= BROWSER_CAP {
        ShapleyMethod::Exact { cap: BROWSER_CAP }
    } else {
        ShapleyMethod::Sampled { permutations: SAMPLED_PERMUTATIONS, seed: 0 }
    }
}

fn respond(result: Result<(NeighborComplex, InfluenceProfile, Option<f64>), String>) -> String {
    let body = match result {
        Ok((graph, profile, closed)) => Response {
            ok: true,
            error: None,
            edges: Some(graph.edges().collect()),
            profile: Some(profile),
            closed_form_entropy: closed,
            title: Some(graph.source().to_string()),
        },
        Err(e) => Response { ok: false, error: Some(e), profile: None, edges: None, closed_form_entropy: None, title: None },
    };
    serde_json::to_string(&body).unwrap_or_else(|e| format!("{{\"ok\":false,\"error\":\"{e}\"}}"))
}

fn family(kind: &str, n: usize, m: usize) -> Result<FamilySpec, String> {
    Ok(match kind {
        "complete" => FamilySpec::Complete { n },
        "cycle" => FamilySpec::Cycle { n },
        "wheel" => FamilySpec::Wheel { n },
        "star" => FamilySpec::Star { n },
        "path" => FamilySpec::Path { n },
        "bipartite" => FamilySpec::CompleteBipartite { m, n },
        other => return Err(format!("unknown family {other:?}")),
    })
}

/// Influence of every vertex of a named graph family. `m` is only read for
/// `bipartite`.
#[wasm_bindgen]
pub fn family_influence(kind: &str, n: usize, m: usize) -> String {
    respond((|| {
        let spec = family(kind, n, m)?;
        let graph = make_family(&spec).map_err(|e| e.to_string())?;
        let profile = complex_influence(&graph, &method_for(graph.len())).map_err(|e| e.to_string())?;
        let closed = closed_form(&spec).map_err(|e| e.to_string())?.entropy;
        Ok((graph, profile, Some(closed)))
    })())
}

/// Influence of the length-`len` strings of built-in grammar `g` under the
/// edit distance at radius `r`.
#[wasm_bindgen]
pub fn grammar_influence(g: u8, len: usize, r: f64) -> String {
    respond((|| {
        let dfa = builtin_grammar(g).map_err(|e| e.to_string())?;
        let strings = dfa.enumerate(len);
        if strings.is_empty() {
            return Err(format!("g{g} has no strings of length {len}"));
        }
        if strings.len() > 4 * BROWSER_CAP {
            return Err(format!("{} strings is too many to draw", strings.len()));
        }
        points_profile(&LabeledPointSet::strings(strings).map_err(|e| e.to_string())?, Metric::Edit, r)
    })())
}

/// Influence of planar points given as `[x0, y0, x1, y1, ...]` under the
/// Euclidean distance at radius `r`.
#[wasm_bindgen]
pub fn points_influence(coords: &[f64], r: f64) -> String {
    respond((|| {
        if coords.len() % 2 != 0 {
            return Err("coordinates must come in pairs".into());
        }
        if coords.is_empty() {
            return Err("add at least one point".into());
        }
        let rows = coords.chunks(2).map(<[f64]>::to_vec).collect();
        points_profile(&LabeledPointSet::vectors(rows).map_err(|e| e.to_string())?, Metric::Euclidean, r)
    })())
}

fn points_profile(points: &LabeledPointSet, metric: Metric, r: f64) -> Result<(NeighborComplex, InfluenceProfile, Option<f64>), String> {
    let dm = build_distance_matrix(points, metric).map_err(|e| e.to_string())?;
    let graph = build_complex(&dm, r).map_err(|e| e.to_string())?;
    let mut profile = complex_influence(&graph, &method_for(graph.len())).map_err(|e| e.to_string())?;
    profile.labels = points.labels().to_vec();
    Ok((graph, profile, None))
}
