//! Text input formats.
//!
//! * strings: one sample per line; only the first whitespace-separated
//!   token is used, so `grammar` output with labels can be fed back in;
//! * vectors: comma-separated numbers, one sample per row;
//! * matrix: a square comma-separated distance matrix;
//! * edges: `u v` per line (a lone `v` declares an isolated vertex).
//!
//! Blank lines and lines starting with `#` are skipped everywhere.

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, LabeledPointSet, NeighborComplex};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_strings(text: &str) -> Result<LabeledPointSet> {
    let items: Vec<&str> = content_lines(text).filter_map(|(_, l)| l.split_whitespace().next()).collect();
    if items.is_empty() {
        return Err(Error::EmptyInput("strings file"));
    }
    LabeledPointSet::strings(items)
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    content_lines(text)
        .map(|(line, l)| {
            l.split(',')
                .map(|field| {
                    field.trim().parse::<f64>().map_err(|e| Error::Parse { line, message: format!("{field:?}: {e}") })
                })
                .collect()
        })
        .collect()
}

pub fn parse_vectors(text: &str) -> Result<LabeledPointSet> {
    let rows = parse_rows(text)?;
    if rows.is_empty() {
        return Err(Error::EmptyInput("vectors file"));
    }
    LabeledPointSet::vectors(rows)
}

pub fn parse_matrix(text: &str) -> Result<DistanceMatrix> {
    DistanceMatrix::from_rows(parse_rows(text)?)
}

pub fn parse_edge_list(text: &str) -> Result<NeighborComplex> {
    let mut edges = Vec::new();
    let mut n = 0;
    let mut any = false;
    for (line, l) in content_lines(text) {
        let fields = l
            .split_whitespace()
            .map(|f| f.parse::<usize>().map_err(|e| Error::Parse { line, message: format!("{f:?}: {e}") }))
            .collect::<Result<Vec<_>>>()?;
        match fields.as_slice() {
            [v] => n = n.max(v + 1),
            [u, v] => {
                n = n.max(u.max(v) + 1);
                edges.push((*u, *v));
            }
            _ => return Err(Error::Parse { line, message: "expected `u v` or `v`".into() }),
        }
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput("edge list"));
    }
    Ok(NeighborComplex::from_edges(n, edges)?.with_source("edge-list"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Points;

    #[test]
    fn strings_with_labels_and_comments() {
        let set = parse_strings("# g3\n1111\t1\n0000 1\n\n0001\n").unwrap();
        assert_eq!(set.labels(), ["1111", "0000", "0001"]);
        assert_eq!(parse_strings("\n# nothing\n"), Err(Error::EmptyInput("strings file")));
    }

    #[test]
    fn numeric_tables() {
        let v = parse_vectors("0, 0\n3,4\n").unwrap();
        assert_eq!(v.points(), &Points::Vectors(vec![vec![0.0, 0.0], vec![3.0, 4.0]]));
        assert!(matches!(parse_vectors("1,x\n"), Err(Error::Parse { line: 1, .. })));
        let m = parse_matrix("0,1\n1,0\n").unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert!(matches!(parse_matrix("0,1\n2,0\n"), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("0 1\n1 2\n5\n").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.edge_count(), 2);
        assert!(matches!(parse_edge_list("0 1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("1 1\n"), Err(Error::SelfLoop(1))));
        assert!(parse_edge_list("").is_err());
    }
}
