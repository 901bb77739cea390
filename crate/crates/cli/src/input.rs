//! Plain-text input files. Blank lines and `#` comments are ignored.
//!
//! Sets list one generator per line. Graphs use `vertices <v>...` and
//! `edge <label> <src> <tgt>` lines. Groups are either `group <name>` with a
//! catalogue name, or `elements <e>...` followed by one row of the Cayley
//! table per element, written with element labels.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use freemon::finset::FinSet;
use freemon::fingrp::{named, CayleyGroup};
use freemon::span::{Span, SpanBackend};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, field: Option<usize>, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            field,
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            field: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.field) {
            (Some(l), Some(c)) => write!(f, "line {l}, field {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

/// Non-blank, non-comment lines as `(line number, fields)`.
fn records(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
        })
        .collect()
}

pub fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|e| ParseError::whole(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_set(text: &str) -> Result<FinSet, ParseError> {
    let mut seen = HashSet::new();
    let mut labels = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() != 1 {
            return Err(ParseError::at(line, Some(2), "expected one label per line"));
        }
        let label = fields[0];
        if label.contains(',') {
            return Err(ParseError::at(line, Some(1), format!("label {label:?} contains a comma")));
        }
        if !seen.insert(label) {
            return Err(ParseError::at(line, Some(1), format!("duplicate label {label:?}")));
        }
        labels.push(label.to_string());
    }
    FinSet::new(labels).map_err(|e| ParseError::whole(e.to_string()))
}

pub fn parse_graph(text: &str) -> Result<(SpanBackend, Span), ParseError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, [String; 3])> = Vec::new();
    for (line, fields) in records(text) {
        match fields[0] {
            "vertices" | "vertex" => {
                for (k, v) in fields.iter().enumerate().skip(1) {
                    if vertices.iter().any(|w| w == v) {
                        return Err(ParseError::at(line, Some(k + 1), format!("duplicate vertex {v:?}")));
                    }
                    vertices.push(v.to_string());
                }
            }
            "edge" => {
                if fields.len() != 4 {
                    return Err(ParseError::at(
                        line,
                        Some(fields.len().min(4) + 1),
                        "expected `edge <label> <src> <tgt>`",
                    ));
                }
                if fields[1].contains(',') {
                    return Err(ParseError::at(line, Some(2), "edge labels cannot contain commas"));
                }
                edges.push((line, [fields[1].to_string(), fields[2].to_string(), fields[3].to_string()]));
            }
            other => return Err(ParseError::at(line, Some(1), format!("unknown keyword {other:?}"))),
        }
    }
    if vertices.is_empty() {
        return Err(ParseError::whole("a graph needs at least one vertex"));
    }
    let mut seen = HashSet::new();
    for (line, [label, src, tgt]) in &edges {
        for (k, v) in [(3, src), (4, tgt)] {
            if !vertices.contains(v) {
                return Err(ParseError::at(*line, Some(k), format!("unknown vertex {v:?}")));
            }
        }
        if !seen.insert(label.clone()) {
            return Err(ParseError::at(*line, Some(2), format!("duplicate edge label {label:?}")));
        }
    }
    let backend = SpanBackend::new(&vertices).map_err(|e| ParseError::whole(e.to_string()))?;
    let triples: Vec<[String; 3]> = edges.into_iter().map(|(_, t)| t).collect();
    let triples: Vec<(&str, &str, &str)> =
        triples.iter().map(|[l, s, t]| (l.as_str(), s.as_str(), t.as_str())).collect();
    let graph = backend.graph(&triples).map_err(|e| ParseError::whole(e.to_string()))?;
    Ok((backend, graph))
}

pub fn parse_group(text: &str) -> Result<CayleyGroup, ParseError> {
    let recs = records(text);
    let (line, head) = recs.first().ok_or_else(|| ParseError::whole("empty group file"))?;
    match head[0] {
        "group" => {
            if head.len() != 2 {
                return Err(ParseError::at(*line, Some(2), "expected `group <name>`"));
            }
            if let Some((extra, _)) = recs.get(1) {
                return Err(ParseError::at(*extra, Some(1), "unexpected line after `group`"));
            }
            named(head[1]).map_err(|e| ParseError::at(*line, Some(2), e.to_string()))
        }
        "elements" => {
            let labels: Vec<String> = head[1..].iter().map(|s| s.to_string()).collect();
            let n = labels.len();
            if n == 0 {
                return Err(ParseError::at(*line, Some(2), "no elements listed"));
            }
            let mut seen = HashSet::new();
            for (k, l) in labels.iter().enumerate() {
                if !seen.insert(l) {
                    return Err(ParseError::at(*line, Some(k + 2), format!("duplicate element {l:?}")));
                }
            }
            let body = &recs[1..];
            if body.len() != n {
                let at = body.get(n).map(|r| r.0).unwrap_or(*line);
                return Err(ParseError::at(at, None, format!("expected {n} table rows, found {}", body.len())));
            }
            let mut rows = Vec::with_capacity(n);
            for (row_line, fields) in body {
                if fields.len() != n {
                    return Err(ParseError::at(
                        *row_line,
                        Some(fields.len().min(n) + 1),
                        format!("expected {n} entries"),
                    ));
                }
                let row = fields
                    .iter()
                    .enumerate()
                    .map(|(k, f)| {
                        labels
                            .iter()
                            .position(|l| l == f)
                            .ok_or_else(|| ParseError::at(*row_line, Some(k + 1), format!("unknown element {f:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
            CayleyGroup::from_table(rows, Some(labels)).map_err(|e| ParseError::at(*line, None, e.to_string()))
        }
        other => Err(ParseError::at(*line, Some(1), format!("expected `group` or `elements`, found {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use freemon::Backend;

    #[test]
    fn sets_skip_comments() {
        let x = parse_set("# letters\na\n\nb  # second\n").unwrap();
        assert_eq!(x.len(), 2);
    }

    #[test]
    fn duplicate_label_is_located() {
        let e = parse_set("a\nb\na\n").unwrap_err();
        assert_eq!((e.line, e.field), (Some(3), Some(1)));
    }

    #[test]
    fn graph_with_unknown_vertex() {
        let e = parse_graph("vertices a b\nedge f a c\n").unwrap_err();
        assert_eq!((e.line, e.field), (Some(2), Some(4)));
        assert!(e.message.contains("\"c\""));
    }

    #[test]
    fn graph_parses() {
        let (b, g) = parse_graph("vertices a b c\nedge f a b\nedge g b c\n").unwrap();
        assert_eq!(b.vertices().len(), 3);
        assert_eq!(b.size(&g), 2);
    }

    #[test]
    fn group_table_moves_identity_first() {
        let text = "elements a e b c\nb a c e\na e b c\nc b e a\ne c a b\n";
        let g = parse_group(text).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.label(0), "e");
        assert!(g.is_abelian());
    }

    #[test]
    fn group_table_errors() {
        let e = parse_group("elements e a\ne a\na x\n").unwrap_err();
        assert_eq!((e.line, e.field), (Some(3), Some(2)));
        let e = parse_group("elements e a\ne a\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(parse_group("group S3\n").is_ok());
        assert!(parse_group("group X9\n").is_err());
    }
}
