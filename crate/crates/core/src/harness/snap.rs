//! SNAP edge-list reader.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::influence::DirectedGraph;

/// A graph read from an edge list, with the original vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapGraph {
    pub graph: DirectedGraph,
    /// `ids[v]` is the id used in the file for dense vertex `v`.
    pub ids: Vec<u64>,
}

/// Parses lines of `u v` as directed edges `u -> v`.
///
/// Blank lines and lines starting with `#` are skipped. Ids are remapped to
/// `0..n` in order of first appearance; duplicate edges collapse.
pub fn parse_snap<R: BufRead>(reader: R, edge_probability: f64) -> Result<SnapGraph> {
    let mut dense: HashMap<u64, u32> = HashMap::new();
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |id: u64| -> u32 {
        *dense.entry(id).or_insert_with(|| {
            ids.push(id);
            (ids.len() - 1) as u32
        })
    };
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two vertex ids, found {} fields", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{s}` is not a non-negative integer vertex id"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        let u = intern(u);
        let v = intern(v);
        edges.push((u, v));
    }
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = DirectedGraph::from_edges(ids.len(), edges, edge_probability)?;
    Ok(SnapGraph { graph, ids })
}

pub fn load_snap_graph(path: &Path, edge_probability: f64) -> Result<SnapGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_snap(BufReader::new(file), edge_probability)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SnapGraph> {
        parse_snap(text.as_bytes(), 0.1)
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse("# comment\n0 1\n1 2\n").unwrap();
        assert_eq!(g.graph.vertex_count(), 3);
        assert_eq!(g.graph.edge_count(), 2);
        let g = parse("# FromNodeId\tToNodeId\n\n  \n7\t3\n").unwrap();
        assert_eq!(g.ids, vec![7, 3]);
        assert_eq!(g.graph.out_neighbors(0), &[1]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse("0 1\n0 1\n").unwrap();
        assert_eq!(g.graph.edge_count(), 1);
    }

    #[test]
    fn ids_remapped_by_first_appearance() {
        let g = parse("100 5\n5 42\n42 100\n").unwrap();
        assert_eq!(g.ids, vec![100, 5, 42]);
        assert_eq!(
            g.graph.edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 0)]
        );
    }

    #[test]
    fn malformed_lines_report_line_number() {
        assert!(matches!(
            parse("0 1\na b\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse("# x\n0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse("-1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse("# nothing\n\n"), Err(Error::EmptyGraph)));
    }
}
