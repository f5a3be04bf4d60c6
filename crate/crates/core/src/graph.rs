//! Simple undirected graphs and the PACE-2017 `.gr` format.
//!
//! Vertices are `0..n` internally and `1..=n` in files.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge endpoint {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl GraphError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        GraphError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    num_edges: usize,
}

impl Graph {
    pub fn empty(num_vertices: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); num_vertices],
            num_edges: 0,
        }
    }

    /// Builds a graph from an edge list; parallel edges are merged.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); num_vertices];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= num_vertices {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        num_vertices,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut num_edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        Ok(Graph {
            adj,
            num_edges: num_edges / 2,
        })
    }

    pub fn complete(num_vertices: usize) -> Self {
        let edges = (0..num_vertices).flat_map(|u| (u + 1..num_vertices).map(move |v| (u, v)));
        Graph::from_edges(num_vertices, edges).expect("complete graph edges are valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph keeping only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let edges: Vec<_> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_edges(self.num_vertices(), edges).expect("subgraph of a valid graph")
    }

    /// Whether every pair of `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Whether all members of `set` share the same neighborhood outside `set`.
    pub fn is_module(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.num_vertices()];
        for &v in set {
            inside[v] = true;
        }
        let outside = |v: usize| -> Vec<usize> { self.adj[v].iter().copied().filter(|&u| !inside[u]).collect() };
        let Some(&first) = set.first() else {
            return true;
        };
        let reference = outside(first);
        set.iter().all(|&v| outside(v) == reference)
    }
}

/// Reads a PACE `.gr` document (`p tw N M` header, `u v` edge lines).
pub fn read_gr(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                return Err(GraphError::parse(lineno, "duplicate problem line"));
            }
            if fields.len() != 4 || fields[1] != "tw" {
                return Err(GraphError::parse(lineno, "expected `p tw <vertices> <edges>`"));
            }
            let n = parse_num(lineno, fields[2])?;
            let m = parse_num(lineno, fields[3])?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(GraphError::parse(lineno, "edge before the problem line"));
        };
        if fields.len() != 2 {
            return Err(GraphError::parse(lineno, "edge lines have exactly two endpoints"));
        }
        let u = parse_vertex(lineno, fields[0], n)?;
        let v = parse_vertex(lineno, fields[1], n)?;
        if u == v {
            return Err(GraphError::parse(lineno, format!("self-loop on vertex {}", u + 1)));
        }
        edges.push((u, v));
    }
    let Some((n, m)) = header else {
        return Err(GraphError::parse(0, "missing `p tw` line"));
    };
    let graph = Graph::from_edges(n, edges.iter().copied())?;
    if graph.num_edges() != edges.len() {
        return Err(GraphError::parse(0, "duplicate edges"));
    }
    if edges.len() != m {
        return Err(GraphError::parse(
            0,
            format!("header announces {m} edges but {} were read", edges.len()),
        ));
    }
    Ok(graph)
}

pub(crate) fn parse_num(line: usize, token: &str) -> Result<usize, GraphError> {
    token
        .parse()
        .map_err(|_| GraphError::parse(line, format!("`{token}` is not a non-negative integer")))
}

pub(crate) fn parse_vertex(line: usize, token: &str, n: usize) -> Result<usize, GraphError> {
    let v = parse_num(line, token)?;
    if v == 0 || v > n {
        return Err(GraphError::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn write_gr(graph: &Graph) -> String {
    write_gr_with_comments(graph, &[])
}

/// `.gr` rendering with leading `c` comment lines.
pub fn write_gr_with_comments(graph: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p tw {} {}", graph.num_vertices(), graph.num_edges()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}
