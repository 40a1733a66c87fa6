//! Generic height orders on the vertices of a polytope and the Morse data
//! they induce.
//!
//! A height function is replaced by a total order on vertices. Orienting
//! every edge from its lower to its higher endpoint, an order is *admissible*
//! when the oriented graph has a unique source and a unique sink and every
//! facet cycle has exactly one local minimum and one local maximum; these are
//! exactly the properties a generic linear functional has.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;
use crate::polytope::Polytope;

/// Step budget for the order search. Admissible orders exist for every
/// simple 3-polytope and the search rarely backtracks; running out means the
/// input is broken.
const SEARCH_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderFile {
    pub rank: Vec<usize>,
}

/// An admissible total order on vertices. `rank[v]` is the height position
/// of vertex `v`, 0 being the lowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    rank: Vec<usize>,
    by_rank: Vec<usize>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidOrder(msg.into())
}

impl VertexOrder {
    /// Validates `rank` against `p`.
    pub fn new(p: &Polytope, rank: Vec<usize>) -> Result<Self> {
        let n = p.vertex_count();
        if rank.len() != n {
            return Err(invalid(format!("{} ranks for {n} vertices", rank.len())));
        }
        let mut by_rank = vec![usize::MAX; n];
        for (v, &r) in rank.iter().enumerate() {
            if r >= n {
                return Err(invalid(format!("rank {r} of vertex {v} out of range")));
            }
            if by_rank[r] != usize::MAX {
                return Err(invalid(format!("rank {r} used twice")));
            }
            by_rank[r] = v;
        }
        let order = VertexOrder { rank, by_rank };
        order.check(p)?;
        Ok(order)
    }

    fn check(&self, p: &Polytope) -> Result<()> {
        let n = p.vertex_count();
        let mut counts = [0usize; 4];
        for v in 0..n {
            let lower = p.neighbors(v).iter().filter(|&&u| self.rank[u] < self.rank[v]).count();
            counts[lower] += 1;
        }
        if counts[0] != 1 || counts[3] != 1 {
            return Err(invalid(format!(
                "not generic: {} sources and {} sinks",
                counts[0], counts[3]
            )));
        }
        for (f, cycle) in p.facets().iter().enumerate() {
            let len = cycle.len();
            let minima = (0..len)
                .filter(|&i| {
                    let r = self.rank[cycle[i]];
                    r < self.rank[cycle[(i + 1) % len]] && r < self.rank[cycle[(i + len - 1) % len]]
                })
                .count();
            if minima != 1 {
                return Err(invalid(format!("not generic: facet {f} has {minima} local minima")));
            }
        }
        if counts != p.h_vector() {
            return Err(invalid(format!("index counts {counts:?} differ from h-vector {:?}", p.h_vector())));
        }
        Ok(())
    }

    pub fn from_json(p: &Polytope, text: &str) -> Result<Self> {
        let file: OrderFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        VertexOrder::new(p, file.rank)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&OrderFile { rank: self.rank.clone() }).expect("order serializes")
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Vertices from lowest to highest.
    pub fn vertices_ascending(&self) -> &[usize] {
        &self.by_rank
    }

    pub fn source(&self) -> usize {
        self.by_rank[0]
    }

    pub fn sink(&self) -> usize {
        *self.by_rank.last().expect("nonempty order")
    }

    /// `(tail, head)` of edge `e`, oriented upwards.
    pub fn orient(&self, p: &Polytope, e: usize) -> (usize, usize) {
        let [a, b] = p.edge(e).vertices;
        if self.rank[a] < self.rank[b] {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// Order by ascending height; heights must be distinct and finite.
pub fn order_from_heights(p: &Polytope, heights: &[f64]) -> Result<VertexOrder> {
    if heights.len() != p.vertex_count() {
        return Err(invalid(format!("{} heights for {} vertices", heights.len(), p.vertex_count())));
    }
    if let Some(v) = heights.iter().position(|h| !h.is_finite()) {
        return Err(invalid(format!("height of vertex {v} is not finite")));
    }
    let mut vertices: Vec<usize> = (0..heights.len()).collect();
    vertices.sort_by(|&a, &b| heights[a].total_cmp(&heights[b]));
    for w in vertices.windows(2) {
        if heights[w[0]] == heights[w[1]] {
            return Err(invalid(format!("vertices {} and {} have equal heights", w[0], w[1])));
        }
    }
    let mut rank = vec![0; heights.len()];
    for (r, &v) in vertices.iter().enumerate() {
        rank[v] = r;
    }
    VertexOrder::new(p, rank)
}

struct OrderSearch<'a> {
    p: &'a Polytope,
    added: Vec<bool>,
    sequence: Vec<usize>,
    steps: usize,
}

impl OrderSearch<'_> {
    /// Whether appending `w` keeps every prefix admissible: each facet meets
    /// the added set in a single arc, and `w` is not a premature sink.
    fn can_add(&self, w: usize) -> bool {
        let n = self.p.vertex_count();
        if self.sequence.len() + 1 < n && self.p.neighbors(w).iter().all(|&u| self.added[u]) {
            return false;
        }
        self.p.vertex_facets(w).iter().all(|&f| {
            let cycle = self.p.facet(f);
            let len = cycle.len();
            let inside = |x: usize| x == w || self.added[x];
            let arcs = (0..len).filter(|&i| inside(cycle[i]) && !inside(cycle[(i + len - 1) % len])).count();
            arcs <= 1
        })
    }

    fn candidates(&self) -> Vec<usize> {
        // Frontier in order of discovery: by the rank of the earliest added
        // neighbour, then by id.
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (r, &v) in self.sequence.iter().enumerate() {
            for u in self.p.neighbors(v) {
                if !self.added[u] && !out.iter().any(|&(_, x)| x == u) {
                    out.push((r, u));
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(|(_, u)| u).collect()
    }

    fn run<R: Rng>(&mut self, rng: &mut Option<&mut R>) -> Result<bool> {
        if self.sequence.len() == self.p.vertex_count() {
            return Ok(true);
        }
        self.steps += 1;
        if self.steps > SEARCH_BUDGET {
            return Err(Error::SearchFailed("no admissible vertex order found within budget".into()));
        }
        let mut cands = self.candidates();
        if let Some(rng) = rng.as_mut() {
            cands.shuffle(*rng);
        }
        for w in cands {
            if !self.can_add(w) {
                continue;
            }
            self.added[w] = true;
            self.sequence.push(w);
            if self.run(rng)? {
                return Ok(true);
            }
            self.sequence.pop();
            self.added[w] = false;
        }
        Ok(false)
    }
}

fn search_order<R: Rng>(p: &Polytope, start: usize, mut rng: Option<&mut R>) -> Result<VertexOrder> {
    let mut search = OrderSearch { p, added: vec![false; p.vertex_count()], sequence: vec![start], steps: 0 };
    search.added[start] = true;
    if !search.run(&mut rng)? {
        return Err(Error::SearchFailed(format!("no admissible vertex order starting at vertex {start}")));
    }
    let mut rank = vec![0; p.vertex_count()];
    for (r, &v) in search.sequence.iter().enumerate() {
        rank[v] = r;
    }
    VertexOrder::new(p, rank).map_err(|e| Error::SearchFailed(format!("search produced an invalid order: {e}")))
}

/// Deterministic admissible order grown breadth-first from vertex 0.
pub fn default_order(p: &Polytope) -> Result<VertexOrder> {
    search_order::<ChaCha8Rng>(p, 0, None)
}

/// A random admissible order: random source, random frontier choices.
pub fn random_order<R: Rng>(p: &Polytope, rng: &mut R) -> Result<VertexOrder> {
    let start = rng.gen_range(0..p.vertex_count());
    search_order(p, start, Some(rng))
}

/// `count` random admissible orders; order `i` is drawn from a generator
/// seeded with `seed + i`, so the result does not depend on scheduling.
pub fn sample_orders(p: &Polytope, count: usize, seed: u64) -> Result<Vec<VertexOrder>> {
    parallel::map_range(count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        random_order(p, &mut rng)
    })
    .into_iter()
    .collect()
}

/// Morse data of an admissible order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseData {
    /// Number of lower neighbours of each vertex.
    pub index: Vec<usize>,
    /// For every vertex except the source, the incoming edge from its lowest
    /// lower neighbour.
    pub parent_edge: Vec<Option<usize>>,
    /// For index-1 vertices, the unique incoming edge.
    pub e_v: Vec<Option<usize>>,
    /// Highest vertex of each facet.
    pub top_vertex: Vec<usize>,
    /// Facets by ascending rank of their top vertex; the three facets through
    /// the sink come last, by facet id.
    pub shelling: Vec<usize>,
    pub source: usize,
    pub sink: usize,
}

impl MorseData {
    pub fn index_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        self.index.iter().for_each(|&i| c[i] += 1);
        c
    }

    /// Edges of the parent tree, ascending.
    pub fn tree_edges(&self) -> Vec<usize> {
        let mut edges: Vec<usize> = self.parent_edge.iter().flatten().copied().collect();
        edges.sort_unstable();
        edges
    }

    /// Vertices of the given index, ascending by rank.
    pub fn vertices_of_index(&self, order: &VertexOrder, index: usize) -> Vec<usize> {
        order.vertices_ascending().iter().copied().filter(|&v| self.index[v] == index).collect()
    }

    /// The facet whose top vertex is `v`, for index-2 vertices.
    pub fn facet_topped_by(&self, v: usize) -> Option<usize> {
        if self.index[v] != 2 {
            return None;
        }
        self.top_vertex.iter().position(|&t| t == v)
    }
}

pub fn morse_data(p: &Polytope, order: &VertexOrder) -> MorseData {
    let n = p.vertex_count();
    let mut index = vec![0; n];
    let mut parent_edge = vec![None; n];
    let mut e_v = vec![None; n];
    for v in 0..n {
        let incoming: Vec<usize> = p
            .vertex_edges(v)
            .into_iter()
            .filter(|&e| order.rank(p.edge(e).other(v)) < order.rank(v))
            .collect();
        index[v] = incoming.len();
        parent_edge[v] = incoming.iter().copied().min_by_key(|&e| order.rank(p.edge(e).other(v)));
        if incoming.len() == 1 {
            e_v[v] = Some(incoming[0]);
        }
    }
    let top_vertex: Vec<usize> = p
        .facets()
        .iter()
        .map(|cycle| *cycle.iter().max_by_key(|&&v| order.rank(v)).expect("nonempty facet"))
        .collect();
    let mut shelling: Vec<usize> = (0..p.facet_count()).collect();
    shelling.sort_by_key(|&f| (order.rank(top_vertex[f]), f));
    MorseData { index, parent_edge, e_v, top_vertex, shelling, source: order.source(), sink: order.sink() }
}
