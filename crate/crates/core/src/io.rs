//! File formats.
//!
//! * `hg-text`: first line `n m`, then one line per hyperedge,
//!   `w v1 v2 ... vs` with 0-based vertex ids.
//! * `hg-json`: `{"n": .., "hyperedges": [{"w": .., "members": [..]}]}`.
//! * `hyperedge-list`: one hyperedge per line as space-separated vertex
//!   ids, all weights 1, `n` is one past the largest id.
//! * labels: one integer community label per line, line `i` for vertex `i`.
//!
//! Blank lines and lines starting with `#` or `%` are skipped in the text
//! formats.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detection::Partition;
use crate::error::{Error, Result};
use crate::hypergraph::{CliqueExpansion, Hypergraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    HgText,
    HgJson,
    HyperedgeList,
}

impl Format {
    /// `.json` is `hg-json`, `.hg` is `hg-text`, anything else a hyperedge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::HgJson,
            Some("hg") => Format::HgText,
            _ => Format::HyperedgeList,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hg-text" => Ok(Format::HgText),
            "hg-json" => Ok(Format::HgJson),
            "hyperedge-list" => Ok(Format::HyperedgeList),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown format {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Discard hyperedges with fewer than two members instead of rejecting
    /// the file. Single-member hyperedges relate no pair of vertices.
    pub drop_singletons: bool,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let t = line.trim();
        (!t.is_empty() && !t.starts_with('#') && !t.starts_with('%')).then_some((i + 1, t))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_token<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {token:?}")))
}

fn finish(n: usize, mut edges: Vec<Vec<VertexId>>, mut weights: Vec<f64>, opts: IngestOptions) -> Result<Hypergraph> {
    if opts.drop_singletons {
        let keep: Vec<bool> = edges.iter().map(|e| e.len() >= 2).collect();
        let mut it = keep.iter();
        edges.retain(|_| *it.next().expect("same length"));
        let mut it = keep.iter();
        weights.retain(|_| *it.next().expect("same length"));
    }
    Hypergraph::new(n, edges, weights)
}

/// Parses `hg-text`. Vertex ids out of range are reported with their line.
pub fn parse_hg_text(text: &str, opts: IngestOptions) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n m` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(header_line, "header must be `n m`"));
    }
    let n: usize = parse_token(header_line, fields[0], "vertex count")?;
    let m: usize = parse_token(header_line, fields[1], "hyperedge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        if edges.len() == m {
            return Err(parse_err(line, format!("more than the declared {m} hyperedges")));
        }
        let mut tokens = content.split_whitespace();
        let w: f64 = parse_token(line, tokens.next().expect("non-empty line"), "weight")?;
        let members = tokens
            .map(|t| {
                let v: VertexId = parse_token(line, t, "vertex id")?;
                if v >= n {
                    return Err(parse_err(line, format!("vertex id {v} out of range for n = {n}")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(members);
        weights.push(w);
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("declared {m} hyperedges, found {}", edges.len()),
        ));
    }
    finish(n, edges, weights, opts)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonHyperedge {
    w: f64,
    members: Vec<VertexId>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonHypergraph {
    n: usize,
    hyperedges: Vec<JsonHyperedge>,
}

pub fn parse_hg_json(text: &str, opts: IngestOptions) -> Result<Hypergraph> {
    let parsed: JsonHypergraph = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let (edges, weights) = parsed
        .hyperedges
        .into_iter()
        .map(|h| (h.members, h.w))
        .unzip();
    finish(parsed.n, edges, weights, opts)
}

/// Raw hyperedges of a hyperedge list, before any validation.
pub fn parse_hyperedge_list_raw(text: &str) -> Result<Vec<Vec<VertexId>>> {
    content_lines(text)
        .map(|(line, content)| {
            content
                .split_whitespace()
                .map(|t| parse_token(line, t, "vertex id"))
                .collect()
        })
        .collect()
}

pub fn parse_hyperedge_list(text: &str, opts: IngestOptions) -> Result<Hypergraph> {
    let edges = parse_hyperedge_list_raw(text)?;
    let n = edges.iter().flatten().max().map_or(0, |&v| v + 1);
    let m = edges.len();
    finish(n, edges, vec![1.0; m], opts)
}

pub fn parse(text: &str, format: Format, opts: IngestOptions) -> Result<Hypergraph> {
    match format {
        Format::HgText => parse_hg_text(text, opts),
        Format::HgJson => parse_hg_json(text, opts),
        Format::HyperedgeList => parse_hyperedge_list(text, opts),
    }
}

pub fn to_hg_text(g: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", g.num_vertices(), g.num_edges());
    for (l, members) in g.edges().iter().enumerate() {
        let _ = write!(out, "{}", g.weight(l));
        for v in members {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn to_hg_json(g: &Hypergraph) -> String {
    let doc = JsonHypergraph {
        n: g.num_vertices(),
        hyperedges: g
            .edges()
            .iter()
            .zip(g.weights())
            .map(|(members, &w)| JsonHyperedge {
                w,
                members: members.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("hypergraph serializes")
}

pub fn parse_labels(text: &str) -> Result<Partition> {
    let raw = content_lines(text)
        .map(|(line, content)| parse_token::<i64>(line, content, "label"))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_labels(&raw))
}

pub fn to_labels(p: &Partition) -> String {
    let mut out = String::with_capacity(p.len() * 3);
    for &l in p.labels() {
        let _ = writeln!(out, "{l}");
    }
    out
}

/// Counts of a raw hyperedge list, in the terms used to summarize datasets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shape {
    pub vertices: usize,
    pub hyperedges: usize,
    pub avg_hyperedge_size: f64,
    pub avg_node_degree: f64,
}

pub fn shape(n: usize, edges: &[Vec<VertexId>]) -> Shape {
    let total: usize = edges.iter().map(Vec::len).sum();
    Shape {
        vertices: n,
        hyperedges: edges.len(),
        avg_hyperedge_size: total as f64 / edges.len().max(1) as f64,
        avg_node_degree: total as f64 / n.max(1) as f64,
    }
}

/// Graphviz export of a clique expansion; vertices carry their community
/// when a partition is given.
pub fn clique_to_dot(ce: &CliqueExpansion, communities: Option<&Partition>) -> String {
    let mut out = String::from("graph clique_expansion {\n");
    for v in 0..ce.n {
        match communities {
            Some(p) => {
                let _ = writeln!(out, "  {v} [community={}];", p.label(v));
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for &(u, v, w) in &ce.edges {
        let _ = writeln!(out, "  {u} -- {v} [weight={w}];");
    }
    out.push_str("}\n");
    out
}

pub fn clique_to_csv(ce: &CliqueExpansion) -> String {
    let mut out = String::from("source,target,weight\n");
    for &(u, v, w) in &ce.edges {
        let _ = writeln!(out, "{u},{v},{w}");
    }
    out
}
