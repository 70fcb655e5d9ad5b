//! Report envelope and the three output encodings.

use std::fmt::Write as _;

use serde::Serialize;
use shapley_homology::families::{ClosedFormResult, IdentityReport};
use shapley_homology::grammar::LabeledString;
use shapley_homology::masking::MaskingReport;
use shapley_homology::shapley::{InfluenceProfile, Provenance};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct ReportEnvelope<C: Serialize> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: C,
    pub payload: Payload,
}

impl<C: Serialize> ReportEnvelope<C> {
    pub fn new(config: C, payload: Payload) -> Self {
        Self { schema_version: SCHEMA_VERSION, tool_version: env!("CARGO_PKG_VERSION"), config, payload }
    }
}

#[derive(Debug, Serialize)]
pub struct RoleRow {
    pub role: String,
    pub multiplicity: usize,
    /// Exact value as `p/q`.
    pub shapley_exact: String,
    pub influence_exact: String,
    pub shapley: f64,
    pub influence: f64,
}

impl RoleRow {
    pub fn rows(result: &ClosedFormResult) -> Vec<RoleRow> {
        use num_traits::ToPrimitive;
        result
            .roles
            .iter()
            .map(|r| RoleRow {
                role: serde_json::to_value(r.role).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default(),
                multiplicity: r.multiplicity,
                shapley_exact: r.shapley.to_string(),
                influence_exact: r.influence.to_string(),
                shapley: r.shapley.to_f64().unwrap_or(f64::NAN),
                influence: r.influence.to_f64().unwrap_or(f64::NAN),
            })
            .collect()
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Payload {
    Profile { profile: InfluenceProfile },
    Sweep { profiles: Vec<InfluenceProfile> },
    Family { family: String, closed_form: Option<Vec<RoleRow>>, closed_form_entropy: Option<f64>, profile: Option<InfluenceProfile> },
    Identities { report: IdentityReport },
    Grammar { grammar: u8, strings: Vec<LabeledString>, profile: Option<InfluenceProfile> },
    Masking { report: MaskingReport },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn render<C: Serialize>(env: &ReportEnvelope<C>, format: Format, bits: bool) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(env).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => csv_bytes(&env.payload).map_err(|e| e.to_string()),
        Format::Table => Ok(table(&env.payload, bits).into_bytes()),
    }
}

fn profile_records(w: &mut csv::Writer<Vec<u8>>, p: &InfluenceProfile, radius: Option<f64>) -> csv::Result<()> {
    for (i, label) in p.labels.iter().enumerate() {
        let mut rec = Vec::with_capacity(5);
        if let Some(r) = radius {
            rec.push(r.to_string());
        }
        rec.extend([i.to_string(), label.clone(), p.shapley[i].to_string(), p.mu[i].to_string()]);
        w.write_record(rec)?;
    }
    Ok(())
}

fn csv_bytes(payload: &Payload) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match payload {
        Payload::Profile { profile } => {
            w.write_record(["index", "label", "s", "mu"])?;
            profile_records(&mut w, profile, None)?;
        }
        Payload::Sweep { profiles } => {
            w.write_record(["radius", "index", "label", "s", "mu"])?;
            for p in profiles {
                profile_records(&mut w, p, Some(p.resolution.unwrap_or(f64::NAN)))?;
            }
        }
        Payload::Family { closed_form, profile, .. } => match (profile, closed_form) {
            (Some(p), _) => {
                w.write_record(["index", "label", "s", "mu"])?;
                profile_records(&mut w, p, None)?;
            }
            (None, Some(roles)) => {
                w.write_record(["role", "multiplicity", "s", "mu"])?;
                for r in roles {
                    w.write_record([r.role.clone(), r.multiplicity.to_string(), r.shapley.to_string(), r.influence.to_string()])?;
                }
            }
            (None, None) => {}
        },
        Payload::Identities { report } => {
            w.write_record(["identity", "checked", "mismatches"])?;
            for (k, checked) in report.checked.iter().enumerate() {
                let bad = report.mismatches.iter().filter(|m| usize::from(m.identity) == k + 1).count();
                w.write_record([(k + 1).to_string(), checked.to_string(), bad.to_string()])?;
            }
        }
        Payload::Grammar { strings, .. } => {
            w.write_record(["string", "accepted"])?;
            for s in strings {
                w.write_record([s.text.as_str(), if s.accepted { "1" } else { "0" }])?;
            }
        }
        Payload::Masking { report } => {
            w.write_record(["graph", "j", "variant", "original_label", "masked_label", "flipped"])?;
            for o in &report.outcomes {
                w.write_record([
                    o.graph.to_string(),
                    o.j.to_string(),
                    o.variant.name().to_string(),
                    o.original_label.to_string(),
                    o.masked_label.to_string(),
                    u8::from(o.flipped).to_string(),
                ])?;
            }
        }
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn entropy_line(out: &mut String, h: f64, bits: bool) {
    if bits {
        let _ = writeln!(out, "H = {:.6} bits", h / std::f64::consts::LN_2);
    } else {
        let _ = writeln!(out, "H = {h:.6} nats");
    }
}

fn profile_table(out: &mut String, p: &InfluenceProfile, bits: bool) {
    let method = match &p.provenance {
        Provenance::Exact => "exact".to_string(),
        Provenance::Sampled { num_permutations, seed, .. } => format!("sampled, {num_permutations} permutations, seed {seed}"),
    };
    let _ = writeln!(
        out,
        "n = {}, r = {}, metric = {}, {method}",
        p.mu.len(),
        p.resolution.map_or("-".into(), |r| r.to_string()),
        p.metric.as_deref().unwrap_or("-")
    );
    let width = p.labels.iter().map(String::len).max().unwrap_or(0).max(5);
    let _ = writeln!(out, "{:>5}  {:<width$}  {:>12}  {:>10}", "index", "label", "s", "mu");
    for (i, label) in p.labels.iter().enumerate() {
        let _ = writeln!(out, "{i:>5}  {label:<width$}  {:>12.6}  {:>10.6}", p.shapley[i], p.mu[i]);
    }
    entropy_line(out, p.entropy, bits);
}

fn table(payload: &Payload, bits: bool) -> String {
    let mut out = String::new();
    match payload {
        Payload::Profile { profile } => profile_table(&mut out, profile, bits),
        Payload::Sweep { profiles } => {
            for (k, p) in profiles.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                profile_table(&mut out, p, bits);
            }
        }
        Payload::Family { family, closed_form, closed_form_entropy, profile } => {
            let _ = writeln!(out, "{family}");
            if let Some(roles) = closed_form {
                let _ = writeln!(out, "{:<10}  {:>4}  {:>14}  {:>14}", "role", "mult", "s", "mu");
                for r in roles {
                    let _ = writeln!(
                        out,
                        "{:<10}  {:>4}  {:>14}  {:>14}",
                        r.role, r.multiplicity, r.shapley_exact, r.influence_exact
                    );
                }
                if let Some(h) = closed_form_entropy {
                    entropy_line(&mut out, *h, bits);
                }
            }
            if let Some(p) = profile {
                if closed_form.is_some() {
                    out.push_str("\nenumerated:\n");
                }
                profile_table(&mut out, p, bits);
            }
        }
        Payload::Identities { report } => {
            for (k, checked) in report.checked.iter().enumerate() {
                let _ = writeln!(out, "identity {}: {checked} cases checked", k + 1);
            }
            let _ = writeln!(out, "{} mismatches", report.mismatches.len());
            for m in &report.mismatches {
                let _ = writeln!(out, "  identity {} at {:?}: {} != {}", m.identity, m.params, m.lhs, m.rhs);
            }
        }
        Payload::Grammar { strings, profile, .. } => {
            for s in strings {
                let _ = writeln!(out, "{}\t{}", s.text, u8::from(s.accepted));
            }
            if let Some(p) = profile {
                out.push('\n');
                profile_table(&mut out, p, bits);
            }
        }
        Payload::Masking { report } => {
            let _ = writeln!(
                out,
                "{} graphs, n in {}..={}, seed {}",
                report.graph_count, report.n_range.0, report.n_range.1, report.seed
            );
            let _ = writeln!(out, "{:>3}  {:>8}  {:>8}  {:>8}", "J", "top", "random", "bottom");
            for r in &report.rates {
                let _ = writeln!(out, "{:>3}  {:>8.4}  {:>8.4}  {:>8.4}", r.j, r.top, r.random, r.bottom);
            }
        }
    }
    out
}
