//! Finite simple connected graphs: construction, validation, classification and
//! (de)serialization.
//!
//! Every constructor funnels through [`Graph::from_edges_with_limit`], so an existing
//! `Graph` is always symmetric, loop-free and connected.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_VERTICES: usize = 4096;
pub const DEFAULT_MAX_RETRIES: usize = 1_000_000;

/// Size and retry guards applied by the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_retries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

/// Undirected, unweighted, simple, connected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Array2<u8>,
    degrees: Vec<usize>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Self::from_edges_with_limit(n, edges, DEFAULT_MAX_VERTICES)
    }

    /// Build a graph from unordered pairs. Duplicate pairs (in either orientation)
    /// collapse to a single edge.
    pub fn from_edges_with_limit(
        n: usize,
        edges: &[(usize, usize)],
        max_vertices: usize,
    ) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n > max_vertices {
            return Err(Error::TooLarge {
                n,
                max: max_vertices,
            });
        }
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange(i, j, n));
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            set.insert((i.min(j), i.max(j)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = Array2::zeros((n, n));
        let mut degrees = vec![0; n];
        for &(i, j) in &edges {
            adjacency[[i, j]] = 1;
            adjacency[[j, i]] = 1;
            degrees[i] += 1;
            degrees[j] += 1;
        }
        let g = Graph {
            n,
            edges,
            adjacency,
            degrees,
        };
        let reached = g.reachable_from(0);
        if reached != n {
            return Err(Error::Disconnected { reached, n });
        }
        Ok(g)
    }

    fn reachable_from(&self, start: usize) -> usize {
        let adj = self.neighbor_lists();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> &Array2<u8> {
        &self.adjacency
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[[i, j]] == 1
    }

    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees[0];
        self.degrees.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_complete(&self) -> bool {
        self.num_edges() == self.n * (self.n - 1) / 2
    }

    /// `‖L e_i‖²` in exact integer arithmetic.
    pub fn laplacian_column_norm_sq(&self, i: usize) -> u64 {
        (0..self.n)
            .map(|j| {
                let l = if i == j {
                    self.degrees[i] as i64
                } else {
                    -(self.adjacency[[i, j]] as i64)
                };
                (l * l) as u64
            })
            .sum()
    }

    /// Whether `perm` (vertex `v` maps to `perm[v]`) preserves adjacency.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.edges
            .iter()
            .all(|&(i, j)| self.is_adjacent(perm[i], perm[j]))
    }

    /// Short content hash of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        let mut s = String::with_capacity(16);
        for b in &digest[..8] {
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDocument {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&doc).expect("graph document serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        let edges: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(doc.n, &edges)
    }

    /// One `i j` pair per line; `#` starts a comment. The vertex count is one more
    /// than the largest label unless `n` is given.
    pub fn from_edge_list_text(text: &str, n: Option<usize>) -> Result<Graph> {
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected two vertices", lineno + 1)))?
                    .parse()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let (i, j) = (next()?, next()?);
            if it.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: expected exactly two vertices",
                    lineno + 1
                )));
            }
            edges.push((i, j));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0));
        Graph::from_edges(n, &edges)
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("# n = {}\n", self.n);
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Parameters `(n, k, a, c)` of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParameters {
    pub n: usize,
    pub k: usize,
    pub a: usize,
    pub c: usize,
}

impl SrgParameters {
    /// Validates the feasibility identity `k(k - a - 1) = (n - 1 - k) c`.
    pub fn new(n: usize, k: usize, a: usize, c: usize) -> Result<SrgParameters> {
        if k == 0 || k + 1 >= n || a + 1 > k {
            return Err(Error::InvalidParameter(format!(
                "({n},{k},{a},{c}) is not a valid parameter set"
            )));
        }
        if k * (k - a - 1) != (n - 1 - k) * c {
            return Err(Error::InvalidParameter(format!(
                "({n},{k},{a},{c}) violates k(k-a-1) = (n-1-k)c"
            )));
        }
        Ok(SrgParameters { n, k, a, c })
    }

    /// The two non-principal adjacency eigenvalues `r > s`.
    pub fn adjacency_eigenvalues(&self) -> (f64, f64) {
        let diff = self.a as f64 - self.c as f64;
        let disc = (diff * diff + 4.0 * (self.k as f64 - self.c as f64)).sqrt();
        ((diff + disc) / 2.0, (diff - disc) / 2.0)
    }

    /// Distinct nonzero Laplacian eigenvalues `k - r < k - s`.
    pub fn laplacian_eigenvalues(&self) -> (f64, f64) {
        let (r, s) = self.adjacency_eigenvalues();
        (self.k as f64 - r, self.k as f64 - s)
    }
}

/// Brute-force strong-regularity test over all vertex pairs.
pub fn detect_srg_parameters(g: &Graph) -> Result<SrgParameters> {
    let n = g.n();
    if g.num_edges() == 0 || g.is_complete() {
        return Err(Error::NotStronglyRegular);
    }
    let k = g.regular_degree().ok_or(Error::NotStronglyRegular)?;
    let words = n.div_ceil(64);
    let mut rows = vec![0u64; n * words];
    for &(i, j) in g.edges() {
        rows[i * words + j / 64] |= 1 << (j % 64);
        rows[j * words + i / 64] |= 1 << (i % 64);
    }
    let common = |u: usize, v: usize| -> usize {
        (0..words)
            .map(|w| (rows[u * words + w] & rows[v * words + w]).count_ones() as usize)
            .sum()
    };
    let (mut a, mut c) = (None, None);
    for u in 0..n {
        for v in (u + 1)..n {
            let slot = if g.is_adjacent(u, v) { &mut a } else { &mut c };
            let m = common(u, v);
            match *slot {
                None => *slot = Some(m),
                Some(prev) if prev != m => return Err(Error::NotStronglyRegular),
                _ => {}
            }
        }
    }
    match (a, c) {
        (Some(a), Some(c)) => SrgParameters::new(n, k, a, c),
        _ => Err(Error::NotStronglyRegular),
    }
}

/// Cycle `C_n`.
pub fn ring_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Path `P_n`; the simplest non-regular family.
pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    complete_graph_with(n, Limits::default())
}

pub fn complete_graph_with(n: usize, limits: Limits) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("complete graph needs n >= 2, got {n}")));
    }
    if n > limits.max_vertices {
        return Err(Error::TooLarge {
            n,
            max: limits.max_vertices,
        });
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    Graph::from_edges_with_limit(n, &edges, limits.max_vertices)
}

pub fn hypercube_graph(d: u32) -> Result<Graph> {
    hypercube_graph_with(d, Limits::default())
}

/// `Q_d`: binary labels of length `d`, adjacent when they differ in exactly one bit.
pub fn hypercube_graph_with(d: u32, limits: Limits) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidParameter("hypercube needs d >= 1".into()));
    }
    let n = 1usize
        .checked_shl(d)
        .filter(|&n| n <= limits.max_vertices)
        .ok_or(Error::TooLarge {
            n: if d < usize::BITS { 1 << d } else { usize::MAX },
            max: limits.max_vertices,
        })?;
    let edges: Vec<_> = (0..n)
        .flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))).filter(|&(v, w)| v < w))
        .collect();
    Graph::from_edges_with_limit(n, &edges, limits.max_vertices)
}

/// Kneser graph `K(5,2)`: 2-subsets of `{0..5}` adjacent when disjoint.
pub fn petersen_graph() -> Graph {
    let subsets: Vec<u8> = (0u8..32).filter(|m| m.count_ones() == 2).collect();
    let mut edges = Vec::new();
    for (i, &a) in subsets.iter().enumerate() {
        for (j, &b) in subsets.iter().enumerate().skip(i + 1) {
            if a & b == 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(subsets.len(), &edges).expect("Petersen graph is valid")
}

/// Cayley graph of `Z4 x Z4` with connection set `{±(1,0), ±(0,1), ±(1,1)}`.
/// Vertex `(x, y)` has index `4x + y`.
pub fn shrikhande_graph() -> Graph {
    const GENERATORS: [(usize, usize); 6] = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let index = |x: usize, y: usize| 4 * (x % 4) + (y % 4);
    let mut edges = Vec::new();
    for x in 0..4 {
        for y in 0..4 {
            for &(dx, dy) in &GENERATORS {
                edges.push((index(x, y), index(x + dx, y + dy)));
            }
        }
    }
    Graph::from_edges(16, &edges).expect("Shrikhande graph is valid")
}

pub fn random_regular_graph(n: usize, k: usize, seed: u64) -> Result<Graph> {
    random_regular_graph_with(n, k, seed, Limits::default())
}

/// Pairing-model sampler. Each attempt draws a uniform perfect matching of the
/// `n·k` half-edges; an attempt that produces a loop, a repeated edge or a
/// disconnected graph is discarded whole.
pub fn random_regular_graph_with(n: usize, k: usize, seed: u64, limits: Limits) -> Result<Graph> {
    if (n * k) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n·k = {} is odd", n * k)));
    }
    if k >= n || n == 0 {
        return Err(Error::InvalidParameter(format!("need k < n, got n={n}, k={k}")));
    }
    if n > limits.max_vertices {
        return Err(Error::TooLarge {
            n,
            max: limits.max_vertices,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = Vec::with_capacity(n * k);
    let mut seen = BTreeSet::new();
    for _ in 0..limits.max_retries {
        points.clear();
        points.extend((0..n * k).map(|p| p / k));
        seen.clear();
        if let Some(edges) = try_pairing(&mut points, &mut seen, &mut rng) {
            match Graph::from_edges_with_limit(n, &edges, limits.max_vertices) {
                Ok(g) => return Ok(g),
                Err(Error::Disconnected { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::RetriesExhausted(limits.max_retries))
}

/// Sequential Fisher-Yates pairing: the partner of the next unmatched point is uniform
/// over the remaining points, which yields a uniform perfect matching. Stops at the
/// first defect since the attempt would be rejected anyway.
fn try_pairing(
    points: &mut [usize],
    seen: &mut BTreeSet<(usize, usize)>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<(usize, usize)>> {
    let m = points.len();
    let mut edges = Vec::with_capacity(m / 2);
    let mut head = 0;
    while head < m {
        let pick = rng.gen_range(head + 1..m);
        points.swap(head + 1, pick);
        let (u, v) = (points[head], points[head + 1]);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return None;
        }
        edges.push((u, v));
        head += 2;
    }
    Some(edges)
}

/// Vertex permutation `v -> (v + shift) mod n`.
pub fn cyclic_shift(n: usize, shift: usize) -> Vec<usize> {
    (0..n).map(|v| (v + shift) % n).collect()
}

/// Random relabeling, used to check that results do not depend on vertex order.
pub fn relabel(g: &Graph, perm: &[usize]) -> Result<Graph> {
    if perm.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: perm.len(),
        });
    }
    let edges: Vec<_> = g.edges().iter().map(|&(i, j)| (perm[i], perm[j])).collect();
    Graph::from_edges(g.n(), &edges)
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}
