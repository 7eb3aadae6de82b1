//! Text encodings for graphs: graph6 and a plain edge list.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by
//! column into 6-bit groups offset by 63, after a single length byte;
//! only the short form (order ≤ 62) is supported. The edge-list format
//! is an `n m` header line followed by `m` lines `u v` with 0-based
//! endpoints. Both directions round-trip exactly.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order representable by the short graph6 form.
pub const MAX_GRAPH6_ORDER: usize = 62;

const GRAPH6_HEADER: &str = ">>graph6<<";

/// Column-major upper-triangle pair order used by graph6:
/// (0,1), (0,2), (1,2), (0,3), (1,3), (2,3), …
fn triangle_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |j| (0..j).map(move |i| (i, j)))
}

/// Encodes a graph as a graph6 line (no trailing newline, no header).
pub fn to_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > MAX_GRAPH6_ORDER {
        return Err(Error::TooLarge {
            what: "graph6 short-form order",
            limit: MAX_GRAPH6_ORDER,
            actual: n,
        });
    }
    let mut out = vec![63 + n as u8];
    let mut group = 0u8;
    let mut filled = 0;
    for (i, j) in triangle_pairs(n) {
        group = (group << 1) | u8::from(g.has_edge(i, j));
        filled += 1;
        if filled == 6 {
            out.push(63 + group);
            group = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(63 + (group << (6 - filled)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

/// Decodes a graph6 line; an optional `>>graph6<<` header is accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.trim();
    let line = line.strip_prefix(GRAPH6_HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    let parse_err = |column: usize, msg: String| Error::Parse {
        line: 1,
        column,
        msg,
    };
    let &first = bytes
        .first()
        .ok_or_else(|| parse_err(1, "empty graph6 text".into()))?;
    if first == b'~' {
        return Err(parse_err(1, "long-form graph6 orders are not supported".into()));
    }
    if !(63..=125).contains(&first) {
        return Err(parse_err(1, format!("invalid graph6 length byte {first:#x}")));
    }
    let n = (first - 63) as usize;
    let bits_needed = n * n.saturating_sub(1) / 2;
    let body = &bytes[1..];
    if body.len() != bits_needed.div_ceil(6) {
        return Err(parse_err(
            body.len() + 2,
            format!(
                "graph6 body for order {n} needs {} bytes, got {}",
                bits_needed.div_ceil(6),
                body.len()
            ),
        ));
    }
    let mut bits = Vec::with_capacity(body.len() * 6);
    for (k, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(k + 2, format!("invalid graph6 byte {b:#x}")));
        }
        let group = b - 63;
        for shift in (0..6).rev() {
            bits.push(group >> shift & 1 == 1);
        }
    }
    if bits[bits_needed..].iter().any(|&b| b) {
        return Err(parse_err(body.len() + 1, "nonzero graph6 padding bits".into()));
    }
    let edges: Vec<(usize, usize)> = triangle_pairs(n)
        .zip(&bits)
        .filter(|&(_, &bit)| bit)
        .map(|(e, _)| e)
        .collect();
    Graph::new(n, edges)
}

/// Encodes a graph as an `n m` header plus one `u v` line per edge.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.size());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn parse_usize(token: &str, line: usize, column: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        column,
        msg: format!("expected {what}, got {token:?}"),
    })
}

/// Token and its 1-based starting column on the line.
fn tokens_of(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        out.push((start + 1, &line[start..end]));
    }
    out
}

/// Parses the edge-list format.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        msg: "empty edge-list text".into(),
    })?;
    let head_tokens = tokens_of(header);
    if head_tokens.len() != 2 {
        return Err(Error::Parse {
            line: header_no,
            column: 1,
            msg: format!("header must be \"n m\", got {header:?}"),
        });
    }
    let n = parse_usize(head_tokens[0].1, header_no, head_tokens[0].0, "vertex count")?;
    let m = parse_usize(head_tokens[1].1, header_no, head_tokens[1].0, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines.by_ref().take(m) {
        let toks = tokens_of(line);
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                msg: format!("edge line must be \"u v\", got {line:?}"),
            });
        }
        let u = parse_usize(toks[0].1, line_no, toks[0].0, "endpoint")?;
        let v = parse_usize(toks[1].1, line_no, toks[1].0, "endpoint")?;
        for (col, w) in [(toks[0].0, u), (toks[1].0, v)] {
            if w >= n {
                return Err(Error::Parse {
                    line: line_no,
                    column: col,
                    msg: format!("endpoint {w} out of range for order {n}"),
                });
            }
        }
        edges.push((u, v));
    }
    if edges.len() < m {
        return Err(Error::Parse {
            line: text.lines().count(),
            column: 1,
            msg: format!("expected {m} edge lines, found {}", edges.len()),
        });
    }
    if let Some((line_no, line)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            column: 1,
            msg: format!("unexpected trailing line {line:?}"),
        });
    }
    Graph::new(n, edges).map_err(|e| Error::Parse {
        line: header_no,
        column: 1,
        msg: e.to_string(),
    })
}

/// Parses either format, deciding by shape: a first non-empty line made
/// of exactly two integers is an edge-list header, anything else is
/// graph6.
pub fn parse_graph_text(text: &str) -> Result<Graph> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let toks = tokens_of(first);
    if toks.len() == 2 && toks.iter().all(|(_, t)| t.parse::<usize>().is_ok()) {
        parse_edge_list(text)
    } else {
        parse_graph6(text)
    }
}
