//! DIMACS ASCII graph reader/writer.
//!
//! The accepted dialect is the classic clique-benchmark format: `c` comment
//! lines, a single `p edge <n> <m>` problem line, and `e <u> <v>` edge lines
//! with 1-based endpoints. Duplicate edge lines are collapsed (counted in
//! [`ParseOutcome::duplicate_edges`]); self-loops are rejected. The binary
//! `.b` format is out of scope.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: malformed problem line (expected `p edge <n> <m>`)")]
    MalformedHeader { line: usize },
    #[error("line {line}: second problem line")]
    DuplicateHeader { line: usize },
    #[error("line {line}: edge line before the problem line")]
    EdgeBeforeHeader { line: usize },
    #[error("missing `p edge` problem line")]
    MissingHeader,
    #[error("line {line}: malformed edge line (expected `e <u> <v>`)")]
    MalformedEdge { line: usize },
    #[error("line {line}: endpoint {id} out of range 1..={n}")]
    EndpointOutOfRange { line: usize, id: i64, n: usize },
    #[error("line {line}: self-loop `e {v} {v}` not allowed")]
    SelfLoop { line: usize, v: u32 },
    #[error("line {line}: unrecognized line")]
    Unrecognized { line: usize },
}

#[derive(Debug)]
pub struct ParseOutcome {
    pub graph: Graph,
    /// Number of edge lines that repeated an already-seen edge.
    pub duplicate_edges: usize,
}

/// Parses DIMACS ASCII from a buffered reader.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<ParseOutcome, DimacsError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(DimacsError::DuplicateHeader { line: line_no });
                }
                let format = fields.next();
                let declared_n = fields.next().and_then(|t| t.parse::<usize>().ok());
                let declared_m = fields.next().and_then(|t| t.parse::<usize>().ok());
                match (format, declared_n, declared_m) {
                    (Some("edge"), Some(nv), Some(_)) if fields.next().is_none() => {
                        n = Some(nv);
                    }
                    _ => return Err(DimacsError::MalformedHeader { line: line_no }),
                }
            }
            Some("e") => {
                let n = n.ok_or(DimacsError::EdgeBeforeHeader { line: line_no })?;
                let u = fields.next().and_then(|t| t.parse::<i64>().ok());
                let v = fields.next().and_then(|t| t.parse::<i64>().ok());
                let (u, v) = match (u, v) {
                    (Some(u), Some(v)) if fields.next().is_none() => (u, v),
                    _ => return Err(DimacsError::MalformedEdge { line: line_no }),
                };
                for id in [u, v] {
                    if id < 1 || id as usize > n {
                        return Err(DimacsError::EndpointOutOfRange { line: line_no, id, n });
                    }
                }
                if u == v {
                    return Err(DimacsError::SelfLoop {
                        line: line_no,
                        v: u as u32,
                    });
                }
                edges.push((u as u32 - 1, v as u32 - 1));
            }
            _ => return Err(DimacsError::Unrecognized { line: line_no }),
        }
    }
    let n = n.ok_or(DimacsError::MissingHeader)?;
    let graph = Graph::from_edges(n, &edges);
    Ok(ParseOutcome {
        duplicate_edges: edges.len() - graph.edge_count(),
        graph,
    })
}

/// Convenience wrapper for in-memory text.
pub fn parse_dimacs_str(text: &str) -> Result<ParseOutcome, DimacsError> {
    parse_dimacs(text.as_bytes())
}

/// Writes a graph in DIMACS ASCII, one `e u v` line per edge with `u < v`.
pub fn write_dimacs<W: Write>(graph: &Graph, mut writer: W) -> io::Result<()> {
    writeln!(
        writer,
        "p edge {} {}",
        graph.vertex_count(),
        graph.edge_count()
    )?;
    for (u, v) in graph.edges() {
        writeln!(writer, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}
