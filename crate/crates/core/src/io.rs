//! METIS and edge-list readers and writers.
//!
//! METIS: first non-comment line is `n m [fmt]`, then one line per vertex
//! listing its 1-based neighbors. Lines starting with `%` are comments.
//!
//! Edge list: one `u v` pair per line, `#` comments, configurable index base.
//! A comment of the form `# n=<count>` fixes the vertex count so isolated
//! trailing vertices survive a round trip; the writer always emits it.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeInsertionSet, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Metis,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "metis" | "graph" => Ok(GraphFormat::Metis),
            "edgelist" | "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            other => Err(Error::InvalidArgument(format!("unknown graph format `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// 0 or 1.
    pub index_base: usize,
    /// Minimum number of vertices; ids beyond it grow the graph.
    pub num_vertices: Option<usize>,
}


/// What an edge-list reader had to drop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeListStats {
    pub self_loops: usize,
    pub duplicates: usize,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Loads a graph; edge lists are read 0-based.
pub fn load_graph(path: &Path, format: GraphFormat) -> Result<Graph> {
    load_graph_with(path, format, EdgeListOptions::default())
}

pub fn load_graph_with(path: &Path, format: GraphFormat, opts: EdgeListOptions) -> Result<Graph> {
    let reader = open(path)?;
    match format {
        GraphFormat::Metis => read_metis(reader),
        GraphFormat::EdgeList => {
            let (g, stats) = read_edge_list(reader, opts)?;
            if stats.self_loops > 0 || stats.duplicates > 0 {
                warn!(
                    "{}: dropped {} self-loops and {} duplicate edges",
                    path.display(),
                    stats.self_loops,
                    stats.duplicates
                );
            }
            Ok(g)
        }
    }
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse { line, message: format!("expected a non-negative integer, found `{tok}`") })
}

pub fn read_metis<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(Error::Parse { line: 0, message: "missing METIS header".into() }),
            Some((no, line)) => {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('%') {
                    continue;
                }
                break (no, t.to_string());
            }
        }
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(Error::Parse { line: header_line, message: "header needs `n m`".into() });
    }
    let n = parse_num(fields[0], header_line)?;
    let m = parse_num(fields[1], header_line)?;
    if let Some(fmt) = fields.get(2) {
        if fmt.chars().any(|c| c != '0') {
            return Err(Error::MetisHeader(format!("weighted format `{fmt}` is not supported")));
        }
    }

    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (no, line) in lines {
        let line = line?;
        if line.trim_start().starts_with('%') {
            continue;
        }
        if adj.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::MetisHeader(format!("more than the declared {n} vertex lines (line {no})")));
        }
        let v = adj.len();
        let mut list = Vec::new();
        for tok in line.split_whitespace() {
            let u = parse_num(tok, no)?;
            if u == 0 || u > n {
                return Err(Error::Parse { line: no, message: format!("neighbor {u} outside 1..={n}") });
            }
            if u - 1 == v {
                return Err(Error::Parse { line: no, message: format!("self-loop on vertex {u}") });
            }
            list.push(u - 1);
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse { line: no, message: "repeated neighbor".into() });
        }
        adj.push(list);
    }
    if adj.len() != n {
        return Err(Error::MetisHeader(format!("declared {n} vertices, found {} lines", adj.len())));
    }
    for (v, list) in adj.iter().enumerate() {
        for &u in list {
            if adj[u].binary_search(&v).is_err() {
                return Err(Error::MetisHeader(format!(
                    "asymmetric adjacency: {} lists {} but not vice versa",
                    v + 1,
                    u + 1
                )));
            }
        }
    }
    let half: usize = adj.iter().map(Vec::len).sum();
    if half != 2 * m {
        return Err(Error::MetisHeader(format!("declared {m} edges, found {}", half / 2)));
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

pub fn read_edge_list<R: BufRead>(reader: R, opts: EdgeListOptions) -> Result<(Graph, EdgeListStats)> {
    if opts.index_base > 1 {
        return Err(Error::InvalidArgument("index base must be 0 or 1".into()));
    }
    let mut n = opts.num_vertices.unwrap_or(0);
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#') {
            if let Some(declared) = declared_vertex_count(comment) {
                n = n.max(declared);
            }
            continue;
        }
        let mut toks = t.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(Error::Parse { line: no, message: "expected `u v`".into() });
        };
        let (a, b) = (parse_num(a, no)?, parse_num(b, no)?);
        if a < opts.index_base || b < opts.index_base {
            return Err(Error::Parse { line: no, message: "vertex id below the index base".into() });
        }
        let (u, v) = (a - opts.index_base, b - opts.index_base);
        n = n.max(u + 1).max(v + 1);
        pairs.push((u, v));
    }
    let (g, self_loops, duplicates) = Graph::from_edges_lossy(n, pairs)?;
    Ok((g, EdgeListStats { self_loops, duplicates }))
}

fn declared_vertex_count(comment: &str) -> Option<usize> {
    comment
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("n="))
        .and_then(|v| v.parse().ok())
}

pub fn write_metis<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for v in 0..g.n() {
        let mut first = true;
        for &u in g.neighbors(v) {
            if !first {
                w.write_all(b" ")?;
            }
            write!(w, "{}", u + 1)?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W, index_base: usize) -> Result<()> {
    writeln!(w, "# n={} m={}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", u + index_base, v + index_base)?;
    }
    Ok(())
}

pub fn save_graph(g: &Graph, path: &Path, format: GraphFormat, index_base: usize) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut w = BufWriter::new(file);
    match format {
        GraphFormat::Metis => write_metis(g, &mut w)?,
        GraphFormat::EdgeList => write_edge_list(g, &mut w, index_base)?,
    }
    w.flush()?;
    Ok(())
}

/// Writes an insertion set as `u v` lines in the given index base.
pub fn write_insertion_set<W: Write>(s: &EdgeInsertionSet, mut w: W, index_base: usize) -> Result<()> {
    for &(u, v) in s.edges() {
        writeln!(w, "{} {}", u + index_base, v + index_base)?;
    }
    Ok(())
}

/// Reads an insertion set from `u v` lines. Duplicates and self-loops are
/// kept as errors so that verification can name them.
pub fn read_insertion_pairs<R: BufRead>(reader: R, index_base: usize) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut toks = t.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(Error::Parse { line: i + 1, message: "expected `u v`".into() });
        };
        let (a, b) = (parse_num(a, i + 1)?, parse_num(b, i + 1)?);
        if a < index_base || b < index_base {
            return Err(Error::Parse { line: i + 1, message: "vertex id below the index base".into() });
        }
        pairs.push((a - index_base, b - index_base));
    }
    Ok(pairs)
}

pub fn load_insertion_pairs(path: &Path, index_base: usize) -> Result<Vec<(usize, usize)>> {
    read_insertion_pairs(open(path)?, index_base)
}
