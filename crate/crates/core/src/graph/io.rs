//! Plain-text edge lists, cover files and Graphviz export.
//!
//! Edge list: an optional `vertices <n>` header, then one `<u> <v>` pair per
//! line. `#` starts a comment. Without a header `n` is one more than the
//! largest id seen. Cover files hold one part per line as space-separated ids.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Edge, Graph, VertexSet};
use crate::error::{Error, Result};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("`{tok}` is not a vertex id")))
}

pub fn read_graph(text: &str) -> Result<Graph> {
    let mut declared = None;
    let mut seen = BTreeSet::new();
    let mut max_id = None;
    let mut first_content = true;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "vertices" {
            if !first_content {
                return Err(Error::parse(lineno, "`vertices` header must come first"));
            }
            if toks.len() != 2 {
                return Err(Error::parse(lineno, "expected `vertices <n>`"));
            }
            declared = Some(parse_id(toks[1], lineno)?);
            first_content = false;
            continue;
        }
        first_content = false;
        if toks.len() != 2 {
            return Err(Error::parse(lineno, "expected `<u> <v>`"));
        }
        let (a, b) = (parse_id(toks[0], lineno)?, parse_id(toks[1], lineno)?);
        if a == b {
            return Err(Error::parse(lineno, format!("self-loop at {a}")));
        }
        if let Some(n) = declared {
            if a.max(b) >= n {
                return Err(Error::parse(
                    lineno,
                    format!("vertex {} exceeds declared count {n}", a.max(b)),
                ));
            }
        }
        let e = Edge::new(a, b);
        if !seen.insert(e) {
            return Err(Error::parse(lineno, format!("duplicate edge {e}")));
        }
        max_id = max_id.max(Some(a.max(b)));
    }
    let n = declared.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Ok(Graph::from_edges(n, seen))
}

/// Canonical edge list; always carries the `vertices` header so isolated
/// vertices survive a round trip.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.n());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u(), e.v());
    }
    out
}

/// Undirected DOT; edges in `highlight` are drawn with `penwidth=3`.
pub fn write_dot(g: &Graph, highlight: &[Edge]) -> String {
    let marked: BTreeSet<Edge> = highlight.iter().copied().collect();
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for e in g.edges() {
        if marked.contains(e) {
            let _ = writeln!(out, "  {} -- {} [penwidth=3];", e.u(), e.v());
        } else {
            let _ = writeln!(out, "  {} -- {};", e.u(), e.v());
        }
    }
    out.push_str("}\n");
    out
}

pub fn read_cover(text: &str) -> Result<Vec<VertexSet>> {
    let mut parts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let ids = line
            .split_whitespace()
            .map(|t| parse_id(t, i + 1))
            .collect::<Result<Vec<_>>>()?;
        let part = VertexSet::new(ids.iter().copied());
        if part.len() != ids.len() {
            return Err(Error::parse(i + 1, "repeated vertex in cover part"));
        }
        parts.push(part);
    }
    Ok(parts)
}

pub fn write_cover(parts: &[VertexSet]) -> String {
    let mut out = String::new();
    for p in parts {
        let ids: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{double_banana, path};
    use super::*;

    #[test]
    fn parses_header_and_comments() {
        let g = read_graph("vertices 3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, path(3));
        let h = read_graph("# a path\n0 1   # first\n\n2 1\n").unwrap();
        assert_eq!(h, path(3));
        assert_eq!(read_graph("vertices 5\n").unwrap().n(), 5);
        assert_eq!(read_graph("").unwrap().n(), 0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("vertices 3\n0 1\n1 3\n", 3),
            ("0 1\n1 0\n", 2),
            ("0 0\n", 1),
            ("0 1\n\n1 x\n", 3),
            ("0 1 2\n", 1),
            ("0 1\nvertices 4\n", 2),
        ];
        for (text, line) in cases {
            match read_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn round_trips() {
        let g = double_banana(true);
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
        let isolated = Graph::new(6, [(0, 1)]).unwrap();
        assert_eq!(read_graph(&write_graph(&isolated)).unwrap(), isolated);
        let cover = vec![VertexSet::new(0..5), VertexSet::new(3..8)];
        assert_eq!(read_cover(&write_cover(&cover)).unwrap(), cover);
    }

    #[test]
    fn dot_marks_highlights() {
        let dot = write_dot(&path(3), &[Edge::new(1, 2)]);
        assert!(dot.contains("1 -- 2 [penwidth=3];"));
        assert!(dot.contains("0 -- 1;"));
    }
}
