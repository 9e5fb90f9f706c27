//! Plain-text edge lists: an optional `p <n> <m>` header, one `u v` pair per
//! line, `#` comments, 0-based vertices.

use std::fmt::Write as _;

use crate::error::{CoreError, Result};
use crate::graph::{Graph, VertexId};

fn parse_err(line: usize, message: impl Into<String>) -> CoreError {
    CoreError::Parse { line, message: message.into() }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut pairs: Vec<(usize, VertexId, VertexId)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() || !pairs.is_empty() {
                return Err(parse_err(line_no, "header must come before every edge and appear once"));
            }
            let [_, n, m] = fields[..] else {
                return Err(parse_err(line_no, "header must read `p <n> <m>`"));
            };
            let n = n.parse().map_err(|_| parse_err(line_no, format!("bad vertex count '{n}'")))?;
            let m = m.parse().map_err(|_| parse_err(line_no, format!("bad edge count '{m}'")))?;
            header = Some((line_no, n, m));
            continue;
        }
        let [a, b] = fields[..] else {
            return Err(parse_err(line_no, format!("expected two vertex ids, found {} fields", fields.len())));
        };
        let a: VertexId = a.parse().map_err(|_| parse_err(line_no, format!("bad vertex id '{a}'")))?;
        let b: VertexId = b.parse().map_err(|_| parse_err(line_no, format!("bad vertex id '{b}'")))?;
        if a == b {
            return Err(parse_err(line_no, format!("self-loop at vertex {a}")));
        }
        pairs.push((line_no, a, b));
    }
    let n = match header {
        Some((line_no, n, m)) => {
            if m != pairs.len() {
                return Err(parse_err(line_no, format!("header declares {m} edges, file has {}", pairs.len())));
            }
            n
        }
        None => pairs.iter().map(|&(_, a, b)| a.max(b) + 1).max().unwrap_or(0),
    };
    let mut g = Graph::new(n);
    for (line_no, a, b) in pairs {
        if a.max(b) >= n {
            return Err(parse_err(line_no, format!("vertex {} out of range for n = {n}", a.max(b))));
        }
        if !g.add_edge(a, b) {
            return Err(parse_err(line_no, format!("duplicate edge {a} {b}")));
        }
    }
    Ok(g)
}

/// Writes a header and the edges in lexicographic order; `comments` become
/// leading `#` lines.
pub fn write_edge_list(g: &Graph, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "p {} {}", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.a, e.b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_header() {
        let g = parse_edge_list("# a path\np 4 2\n0 1\n1 2 # trailing\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 2));
        let g = parse_edge_list("0 1\n\n1 2\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        assert_eq!(parse_edge_list("").unwrap().n(), 0);
    }

    #[test]
    fn errors_name_the_line() {
        let line_of = |text: &str| match parse_edge_list(text) {
            Err(CoreError::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(line_of("0 1\n1 x\n"), 2);
        assert_eq!(line_of("0 1\n2 2\n"), 2);
        assert_eq!(line_of("p 3 1\n0 1\n1 2\n"), 1);
        assert_eq!(line_of("p 2 1\n0 5\n"), 2);
        assert_eq!(line_of("0 1 2\n"), 1);
        assert_eq!(line_of("0 1\n1 0\n"), 2);
    }

    #[test]
    fn round_trip() {
        let g = Graph::cycle(6);
        assert_eq!(parse_edge_list(&write_edge_list(&g, &["cycle", "two\nlines"])).unwrap(), g);
        // isolated trailing vertices survive through the header
        let g = Graph::from_edges(5, &[(0, 1)]).unwrap();
        assert_eq!(parse_edge_list(&write_edge_list(&g, &[])).unwrap(), g);
    }
}
