//! Graph data structure, matrix representations, the directed ring modelling
//! periodic time, and the Cartesian-product joint graph.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Which matrix stands in for the graph in spectral computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Laplacian,
    #[serde(rename = "normalized", alias = "normalized_laplacian")]
    NormalizedLaplacian,
    Adjacency,
}

impl std::str::FromStr for MatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplacian" => Ok(MatrixKind::Laplacian),
            "normalized" | "normalized_laplacian" => Ok(MatrixKind::NormalizedLaplacian),
            "adjacency" => Ok(MatrixKind::Adjacency),
            other => Err(Error::InvalidArgument(format!(
                "unknown representation {other:?} (expected laplacian|normalized|adjacency)"
            ))),
        }
    }
}

impl std::fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MatrixKind::Laplacian => "laplacian",
            MatrixKind::NormalizedLaplacian => "normalized",
            MatrixKind::Adjacency => "adjacency",
        };
        f.write_str(s)
    }
}

/// An edge `from -> to` (0-based). Undirected graphs store each unordered
/// pair once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

/// Immutable weighted graph. Node indices are 0-based internally; the I/O
/// layer converts from the 1-based on-disk format.
#[derive(Debug, Clone)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl Graph {
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize, f64)>, directed: bool) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidArgument("graph needs at least one node".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (from, to, weight) in edges {
            if from >= n_nodes || to >= n_nodes {
                let index = from.max(to) + 1;
                return Err(Error::IndexOutOfRange { index, n_nodes });
            }
            if from == to {
                return Err(Error::SelfLoop(from + 1));
            }
            if !(weight > 0.0) {
                return Err(Error::NonPositiveWeight(weight));
            }
            let key = if directed {
                (from, to)
            } else {
                (from.min(to), from.max(to))
            };
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(key.0 + 1, key.1 + 1));
            }
            out.push(Edge { from, to, weight });
        }
        Ok(Graph { n_nodes, edges: out, directed })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of stored edges (M).
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Neighbor lists for undirected graphs: for each node, the incident
    /// `(neighbor, weight)` pairs.
    pub fn neighbor_lists(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_nodes];
        for e in &self.edges {
            adj[e.from].push((e.to, e.weight));
            if !self.directed {
                adj[e.to].push((e.from, e.weight));
            }
        }
        adj
    }

    /// Adjacency with the in-edge convention: `A[i][j]` is the weight of the
    /// edge `j -> i` (and of `i -- j` for undirected graphs).
    pub fn adjacency(&self) -> Array2<f64> {
        let n = self.n_nodes;
        let mut a = Array2::zeros((n, n));
        for e in &self.edges {
            a[[e.to, e.from]] += e.weight;
            if !self.directed {
                a[[e.from, e.to]] += e.weight;
            }
        }
        a
    }

    pub fn representation_matrix(&self, kind: MatrixKind) -> Array2<f64> {
        let a = self.adjacency();
        match kind {
            MatrixKind::Adjacency => a,
            MatrixKind::Laplacian => laplacian_from_adjacency(&a),
            MatrixKind::NormalizedLaplacian => {
                let l = laplacian_from_adjacency(&a);
                let n = self.n_nodes;
                let mut scale = vec![0.0; n];
                for i in 0..n {
                    let d: f64 = a.row(i).sum();
                    // zero-degree nodes keep a zero row/column
                    scale[i] = if d > 0.0 { d.powf(-0.5) } else { 0.0 };
                }
                let mut nl = Array2::zeros((n, n));
                for i in 0..n {
                    for j in 0..n {
                        nl[[i, j]] = scale[i] * l[[i, j]] * scale[j];
                    }
                }
                nl
            }
        }
    }
}

fn laplacian_from_adjacency(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut l = -a.clone();
    for i in 0..n {
        l[[i, i]] += a.row(i).sum() + a[[i, i]];
    }
    l
}

/// Directed cycle on `t` nodes modelling one signal period. `t = 1` yields a
/// single node with no edges so that the 1x1 Laplacian is zero.
pub fn ring_graph(t: usize) -> Graph {
    assert!(t >= 1, "period must be at least 1");
    let edges = if t == 1 {
        Vec::new()
    } else {
        (0..t).map(|i| (i, (i + 1) % t, 1.0)).collect()
    };
    Graph::new(t, edges, true).expect("ring edges are valid")
}

/// Kronecker sum `a (+) b = I_T (x) b + a (x) I_N`, matching the joint
/// Laplacian ordering `L_J = L_T (+) L_G`.
pub fn kronecker_sum(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "kronecker sum needs square inputs, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let t = a.nrows();
    let n = b.nrows();
    let mut out = Array2::zeros((n * t, n * t));
    for bi in 0..t {
        for i in 0..n {
            for j in 0..n {
                out[[bi * n + i, bi * n + j]] += b[[i, j]];
            }
        }
    }
    for bi in 0..t {
        for bj in 0..t {
            let v = a[[bi, bj]];
            if v != 0.0 {
                for i in 0..n {
                    out[[bi * n + i, bj * n + i]] += v;
                }
            }
        }
    }
    Ok(out)
}

/// Cartesian product of an undirected graph with the time ring: T copies of
/// `g` plus directed temporal edges `(n,t) -> (n,t+1 mod T)` of weight 1.
/// Node `(n,t)` sits at vectorized index `t*N + n`.
pub fn joint_graph(g: &Graph, t: usize) -> Result<Graph> {
    if g.is_directed() {
        return Err(Error::InvalidArgument(
            "joint graph requires an undirected input graph".into(),
        ));
    }
    assert!(t >= 1);
    let n = g.n_nodes();
    let mut edges = Vec::with_capacity(2 * g.n_edges() * t + n * t);
    for copy in 0..t {
        let base = copy * n;
        for e in g.edges() {
            // undirected copy edge, stored as both directions in the
            // directed joint graph
            edges.push((base + e.from, base + e.to, e.weight));
            edges.push((base + e.to, base + e.from, e.weight));
        }
    }
    if t > 1 {
        for copy in 0..t {
            let next = (copy + 1) % t;
            for node in 0..n {
                edges.push((copy * n + node, next * n + node, 1.0));
            }
        }
    }
    Graph::new(n * t, edges, true)
}
