//! Plain-text edge lists.
//!
//! ```text
//! # n=4
//! # e=3
//! 0 1
//! 0 2
//! 2 3
//! ```
//!
//! Lines starting with `#` are comments; `# key=value` comments carry metadata.
//! Edges are written one per line as `u<TAB>v` (a space above) with `u < v`, in
//! ascending order, so equal graphs with equal headers serialize to identical
//! bytes. Any whitespace separates ids on input. Comments are kept verbatim and
//! re-emitted in order, which makes read-then-write an identity on files
//! produced by [`write_edge_list`].

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Comment key holding the vertex count.
pub const KEY_VERTICES: &str = "n";
/// Comment key holding the edge count.
pub const KEY_EDGES: &str = "e";
/// Comment key holding the size of the initial graph; vertices at or above it
/// were born at `id - g0_vertices + 1`.
pub const KEY_INITIAL_VERTICES: &str = "g0_vertices";

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    pub graph: Graph,
}

impl EdgeList {
    /// Wraps `graph` with `n=` and `e=` comments followed by `extra` key/value
    /// pairs.
    pub fn new<K: AsRef<str>, V: ToString>(graph: Graph, extra: impl IntoIterator<Item = (K, V)>) -> Self {
        let mut comments = vec![
            format!(" {KEY_VERTICES}={}", graph.num_vertices()),
            format!(" {KEY_EDGES}={}", graph.num_edges()),
        ];
        comments.extend(
            extra
                .into_iter()
                .map(|(k, v)| format!(" {}={}", k.as_ref(), v.to_string())),
        );
        Self { comments, graph }
    }

    /// Value of the first `key=value` comment with this key.
    pub fn meta(&self, key: &str) -> Option<&str> {
        meta_value(&self.comments, key)
    }
}

fn meta_value<'a>(comments: &'a [String], key: &str) -> Option<&'a str> {
    comments.iter().find_map(|c| {
        let (k, v) = c.trim().split_once('=')?;
        (k.trim() == key).then(|| v.trim())
    })
}

pub fn write_edge_list<W: Write>(mut out: W, list: &EdgeList) -> std::io::Result<()> {
    for c in &list.comments {
        writeln!(out, "#{c}")?;
    }
    for (u, v) in list.graph.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    out.flush()
}

pub fn write_edge_list_file(path: impl AsRef<Path>, list: &EdgeList) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(BufWriter::new(file), list).map_err(|e| Error::io(path, e))
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<EdgeList> {
    let mut comments = Vec::new();
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two vertex ids, got '{line}'"),
            });
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad vertex id '{s}': {e}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                message: format!("self-loop on vertex {u}"),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((lineno, u, v));
    }

    let declared = |key: &str| -> Result<Option<usize>> {
        meta_value(&comments, key)
            .map(|s| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("header '{key}={s}': {e}"),
                })
            })
            .transpose()
    };

    let inferred = max_id.map_or(0, |m| m + 1);
    let n = match declared(KEY_VERTICES)? {
        Some(n) if n < inferred => {
            let (line, _, _) = edges
                .iter()
                .find(|(_, u, v)| *u >= n || *v >= n)
                .copied()
                .unwrap_or((0, 0, 0));
            return Err(Error::Parse {
                line,
                message: format!("vertex id out of range for declared n={n}"),
            });
        }
        Some(n) => n,
        None => inferred,
    };

    let mut graph = Graph::with_vertices(n);
    for (line, u, v) in edges {
        if !graph.add_edge(u, v)? {
            return Err(Error::Parse {
                line,
                message: format!("duplicate edge {u} {v}"),
            });
        }
    }
    if let Some(e) = declared(KEY_EDGES)? {
        if e != graph.num_edges() {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares e={e} but {} edges were read", graph.num_edges()),
            });
        }
    }
    if let Some(g0) = declared(KEY_INITIAL_VERTICES)? {
        for v in g0..n {
            graph.set_birth_time(v, (v - g0 + 1) as u64)?;
        }
    }
    Ok(EdgeList { comments, graph })
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(BufReader::new(file))
}
