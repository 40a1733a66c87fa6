//! Combinatorial simple 3-polytopes.
//!
//! A polytope is given by its vertex count and its facets, each facet a cyclic
//! sequence of vertex ids. Edges, vertex-facet incidences and the facet
//! adjacency relation are derived on construction, and every structural
//! invariant of a simple 3-polytope is checked there: after construction a
//! [`Polytope`] is immutable and known to be valid.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge of a polytope: its endpoints (ascending) and its two facets
/// (ascending).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub facets: [usize; 2],
}

impl Edge {
    /// The endpoint of the edge that is not `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.vertices[0] == v {
            self.vertices[1]
        } else {
            self.vertices[0]
        }
    }
}

/// On-disk form of a polytope: `{"vertex_count": N, "facets": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub vertex_count: usize,
    pub facets: Vec<Vec<usize>>,
}

/// A face of a polytope addressed by id, used by the injectivity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Facet(usize),
    Edge(usize),
}

/// The shapes with a built-in canonical numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Simplex,
    Cube,
    Prism(usize),
    Dodecahedron,
    Permutohedron,
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplex" => Ok(Shape::Simplex),
            "cube" => Ok(Shape::Cube),
            "dodecahedron" => Ok(Shape::Dodecahedron),
            "permutohedron" => Ok(Shape::Permutohedron),
            _ => {
                let n = s
                    .strip_prefix("prism:")
                    .or_else(|| s.strip_prefix("prism"))
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::Syntax(format!("unknown shape '{s}'")))?;
                Ok(Shape::Prism(n))
            }
        }
    }
}

/// A belt: a cyclic sequence of facets in which consecutive facets share an
/// edge, non-consecutive facets are disjoint and the common intersection is
/// empty. Stored in its lexicographically minimal rotation/reflection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Belt(pub Vec<usize>);

impl Belt {
    pub fn facets(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Canonical representative of a facet cycle up to rotation and reflection.
    pub fn canonical(cycle: &[usize]) -> Belt {
        let n = cycle.len();
        let mut best: Option<Vec<usize>> = None;
        let mut reversed = cycle.to_vec();
        reversed.reverse();
        for seq in [cycle, reversed.as_slice()] {
            for start in 0..n {
                let rot: Vec<usize> = (0..n).map(|i| seq[(start + i) % n]).collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        Belt(best.unwrap_or_default())
    }
}

impl fmt::Display for Belt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    edge_index: HashMap<(usize, usize), usize>,
    /// Edge ids of each facet in cycle order: entry `i` joins `cycle[i]` and
    /// `cycle[i + 1]`.
    facet_edges: Vec<Vec<usize>>,
    vertex_facets: Vec<[usize; 3]>,
    vertex_edges: Vec<[usize; 3]>,
    /// Shared edge of each pair of adjacent facets, keyed by the ordered pair.
    facet_adjacency: HashMap<(usize, usize), usize>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidPolytope(msg.into())
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Polytope {
    /// Builds and validates a polytope from facet cycles.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(invalid("vertex_count must be positive"));
        }
        if facets.is_empty() {
            return Err(invalid("no facets"));
        }
        for (i, cycle) in facets.iter().enumerate() {
            if cycle.len() < 3 {
                return Err(invalid(format!("facet {i} cycle too short ({} vertices)", cycle.len())));
            }
            let mut seen = BTreeSet::new();
            for &v in cycle {
                if v >= vertex_count {
                    return Err(invalid(format!("facet {i} references vertex {v} >= vertex_count {vertex_count}")));
                }
                if !seen.insert(v) {
                    return Err(invalid(format!("facet {i} repeats vertex {v}")));
                }
            }
        }

        // Edge -> incident facets.
        let mut edge_facets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, cycle) in facets.iter().enumerate() {
            let n = cycle.len();
            for j in 0..n {
                edge_facets.entry(key(cycle[j], cycle[(j + 1) % n])).or_default().push(i);
            }
        }
        let mut edges = Vec::with_capacity(edge_facets.len());
        let mut edge_index = HashMap::with_capacity(edge_facets.len());
        for (&(u, v), fs) in &edge_facets {
            if fs.len() != 2 {
                return Err(invalid(format!("edge ({u},{v}) lies in {} facets, expected 2", fs.len())));
            }
            if fs[0] == fs[1] {
                return Err(invalid(format!("edge ({u},{v}) appears twice in facet {}", fs[0])));
            }
            let mut pair = [fs[0], fs[1]];
            pair.sort_unstable();
            edge_index.insert((u, v), edges.len());
            edges.push(Edge { vertices: [u, v], facets: pair });
        }

        let mut facet_adjacency = HashMap::new();
        for (id, e) in edges.iter().enumerate() {
            let [f, g] = e.facets;
            if facet_adjacency.insert((f, g), id).is_some() {
                return Err(invalid(format!("facets {f} and {g} share more than one edge")));
            }
            facet_adjacency.insert((g, f), id);
        }

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for (i, cycle) in facets.iter().enumerate() {
            for &v in cycle {
                incident[v].push(i);
            }
        }
        let mut adjacent_edges: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            adjacent_edges[e.vertices[0]].push(id);
            adjacent_edges[e.vertices[1]].push(id);
        }
        let mut vertex_facets = Vec::with_capacity(vertex_count);
        let mut vertex_edges = Vec::with_capacity(vertex_count);
        for v in 0..vertex_count {
            if incident[v].is_empty() {
                return Err(invalid(format!("vertex {v} lies in no facet")));
            }
            if incident[v].len() != 3 {
                return Err(invalid(format!("vertex {v} lies in {} facets, expected 3", incident[v].len())));
            }
            if adjacent_edges[v].len() != 3 {
                return Err(invalid(format!("vertex {v} has degree {}", adjacent_edges[v].len())));
            }
            vertex_facets.push([incident[v][0], incident[v][1], incident[v][2]]);
            vertex_edges.push([adjacent_edges[v][0], adjacent_edges[v][1], adjacent_edges[v][2]]);
        }

        let facet_edges = facets
            .iter()
            .map(|cycle| {
                let n = cycle.len();
                (0..n).map(|j| edge_index[&key(cycle[j], cycle[(j + 1) % n])]).collect()
            })
            .collect();

        let p = Polytope {
            vertex_count,
            facets,
            edges,
            edge_index,
            facet_edges,
            vertex_facets,
            vertex_edges,
            facet_adjacency,
        };

        if !p.is_connected() {
            return Err(invalid("vertex-edge graph is not connected"));
        }
        let (f0, f1, f2) = p.f_vector();
        if f0 as i64 - f1 as i64 + f2 as i64 != 2 {
            return Err(invalid(format!("Euler relation fails: {f0} - {f1} + {f2} != 2")));
        }
        if 8 - 4 * f2 as i64 != f0 as i64 - 2 * f1 as i64 {
            return Err(invalid("Dehn-Sommerville relation 8 - 4 f2 = f0 - 2 f1 fails"));
        }
        Ok(p)
    }

    /// Parses the JSON polytope format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolytopeFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        Polytope::new(file.vertex_count, file.facets)
    }

    pub fn to_file(&self) -> PolytopeFile {
        PolytopeFile { vertex_count: self.vertex_count, facets: self.facets.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("polytope serializes")
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.vertex_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet(&self, f: usize) -> &[usize] {
        &self.facets[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn facet_edges(&self, f: usize) -> &[usize] {
        &self.facet_edges[f]
    }

    pub fn vertex_facets(&self, v: usize) -> [usize; 3] {
        self.vertex_facets[v]
    }

    pub fn vertex_edges(&self, v: usize) -> [usize; 3] {
        self.vertex_edges[v]
    }

    pub fn neighbors(&self, v: usize) -> [usize; 3] {
        self.vertex_edges[v].map(|e| self.edges[e].other(v))
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&key(u, v)).copied()
    }

    /// The edge shared by two facets, if they are adjacent.
    pub fn shared_edge(&self, f: usize, g: usize) -> Option<usize> {
        self.facet_adjacency.get(&(f, g)).copied()
    }

    pub fn facets_adjacent(&self, f: usize, g: usize) -> bool {
        self.facet_adjacency.contains_key(&(f, g))
    }

    /// Facets sharing an edge with `f`, in the cycle order of `f`'s edges.
    pub fn adjacent_facets(&self, f: usize) -> Vec<usize> {
        self.facet_edges[f]
            .iter()
            .map(|&e| {
                let [a, b] = self.edges[e].facets;
                if a == f {
                    b
                } else {
                    a
                }
            })
            .collect()
    }

    pub fn facet_contains(&self, f: usize, v: usize) -> bool {
        self.vertex_facets[v].contains(&f)
    }

    /// `(f0, f1, f2)`: numbers of vertices, edges and facets.
    pub fn f_vector(&self) -> (usize, usize, usize) {
        (self.vertex_count, self.edges.len(), self.facets.len())
    }

    /// `(1, f2 - 3, f2 - 3, 1)`.
    pub fn h_vector(&self) -> [usize; 4] {
        let f2 = self.facets.len();
        let h = [1, f2 - 3, f2 - 3, 1];
        debug_assert_eq!(h.iter().sum::<usize>(), self.vertex_count);
        h
    }

    /// All `k`-belts (k >= 3), each once, sorted.
    ///
    /// For 3-polytopes two distinct facets intersect exactly when they share
    /// an edge, so a `k`-belt is an induced `k`-cycle of the facet adjacency
    /// graph, with the extra empty-intersection condition for `k = 3`.
    pub fn find_belts(&self, k: usize) -> Result<Vec<Belt>> {
        if k < 3 {
            return Err(Error::Precondition(format!("belt length must be at least 3, got {k}")));
        }
        let mut found = BTreeSet::new();
        let mut path = Vec::with_capacity(k);
        for start in 0..self.facet_count() {
            path.clear();
            path.push(start);
            self.extend_belt(k, &mut path, &mut found);
        }
        Ok(found.into_iter().collect())
    }

    fn extend_belt(&self, k: usize, path: &mut Vec<usize>, found: &mut BTreeSet<Belt>) {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == k {
            if !self.facets_adjacent(last, start) {
                return;
            }
            if k == 3 && self.common_vertex(path).is_some() {
                return;
            }
            found.insert(Belt::canonical(path));
            return;
        }
        for next in self.adjacent_facets(last) {
            // Smallest facet first keeps each cycle rooted once per direction.
            if next <= start || path.contains(&next) {
                continue;
            }
            let pos = path.len();
            // Non-consecutive members must be disjoint.
            let interior = if pos >= 2 { &path[1..pos - 1] } else { &[][..] };
            let chord = interior.iter().any(|&f| self.facets_adjacent(f, next))
                || (pos >= 2 && pos < k - 1 && self.facets_adjacent(start, next));
            if chord {
                continue;
            }
            path.push(next);
            self.extend_belt(k, path, found);
            path.pop();
        }
    }

    fn common_vertex(&self, facets: &[usize]) -> Option<usize> {
        (0..self.vertex_count).find(|&v| facets.iter().all(|&f| self.facet_contains(f, v)))
    }

    pub fn is_simplex(&self) -> bool {
        self.facet_count() == 4
    }

    /// Flag: not the simplex, and no 3-belts.
    pub fn is_flag(&self) -> bool {
        !self.is_simplex() && self.find_belts(3).map(|b| b.is_empty()).unwrap_or(false)
    }

    /// Pogorelov: flag and no 4-belts.
    pub fn is_pogorelov(&self) -> bool {
        self.is_flag() && self.find_belts(4).map(|b| b.is_empty()).unwrap_or(false)
    }

    /// Combinatorial criterion for the face submanifold over `face` to be
    /// π₁-injective: any two facets transversal to the face that meet must
    /// meet inside it.
    pub fn face_injectivity(&self, face: Face) -> Result<bool> {
        match face {
            Face::Facet(f) => {
                if f >= self.facet_count() {
                    return Err(Error::OutOfRange { what: "facet", id: f, len: self.facet_count() });
                }
                let neighbours = self.adjacent_facets(f);
                for (i, &g) in neighbours.iter().enumerate() {
                    for &h in &neighbours[i + 1..] {
                        if self.facets_adjacent(g, h) && self.common_vertex(&[f, g, h]).is_none() {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Face::Edge(e) => {
                if e >= self.edge_count() {
                    return Err(Error::OutOfRange { what: "edge", id: e, len: self.edge_count() });
                }
                // The transversal facets are the third facets at the two endpoints;
                // they can only meet the edge in different endpoints.
                let edge = self.edges[e];
                let third = |v: usize| {
                    self.vertex_facets[v].into_iter().find(|f| !edge.facets.contains(f)).expect("simple vertex")
                };
                let (g, h) = (third(edge.vertices[0]), third(edge.vertices[1]));
                Ok(!self.facets_adjacent(g, h))
            }
        }
    }

    /// Cuts off vertex `v`. The new polytope keeps every old vertex id
    /// (`v` becomes one corner of the new triangle), appends two vertices
    /// and appends the triangle as the last facet.
    pub fn truncate_vertex(&self, v: usize) -> Result<Polytope> {
        if v >= self.vertex_count {
            return Err(Error::OutOfRange { what: "vertex", id: v, len: self.vertex_count });
        }
        let nbrs = self.neighbors(v);
        let corner = |u: usize| -> usize {
            match nbrs.iter().position(|&n| n == u) {
                Some(0) => v,
                Some(1) => self.vertex_count,
                Some(2) => self.vertex_count + 1,
                _ => unreachable!("neighbour of truncated vertex"),
            }
        };
        let mut facets = Vec::with_capacity(self.facet_count() + 1);
        for cycle in &self.facets {
            let n = cycle.len();
            match cycle.iter().position(|&x| x == v) {
                None => facets.push(cycle.clone()),
                Some(i) => {
                    let prev = cycle[(i + n - 1) % n];
                    let next = cycle[(i + 1) % n];
                    let mut out = Vec::with_capacity(n + 1);
                    for (j, &x) in cycle.iter().enumerate() {
                        if j == i {
                            out.push(corner(prev));
                            out.push(corner(next));
                        } else {
                            out.push(x);
                        }
                    }
                    facets.push(out);
                }
            }
        }
        facets.push(vec![v, self.vertex_count, self.vertex_count + 1]);
        Polytope::new(self.vertex_count + 2, facets)
    }

    /// Builds one of the shapes with fixed numbering; see [`Polytope::simplex`]
    /// and friends.
    pub fn build(shape: Shape) -> Result<Polytope> {
        match shape {
            Shape::Simplex => Ok(Polytope::simplex()),
            Shape::Cube => Ok(Polytope::cube()),
            Shape::Prism(n) => Polytope::prism(n),
            Shape::Dodecahedron => Ok(Polytope::dodecahedron()),
            Shape::Permutohedron => Ok(Polytope::permutohedron()),
        }
    }

    /// Vertices 0..4; facet `i` consists of all vertices except `i`.
    pub fn simplex() -> Polytope {
        let facets = (0..4).map(|i| (0..4).filter(|&v| v != i).collect()).collect();
        Polytope::new(4, facets).expect("simplex is valid")
    }

    /// Vertex `v` has coordinates `(v & 1, v >> 1 & 1, v >> 2 & 1)`.
    /// Facets 0, 1, 2 are `x = 0`, `y = 0`, `z = 0`; facet `i + 3` is the
    /// facet opposite facet `i`.
    pub fn cube() -> Polytope {
        let mut facets = Vec::with_capacity(6);
        for value in 0..2 {
            for axis in 0..3 {
                let (j, k) = ((axis + 1) % 3, (axis + 2) % 3);
                let cycle = [(0, 0), (1, 0), (1, 1), (0, 1)]
                    .iter()
                    .map(|&(a, b)| (value << axis) | (a << j) | (b << k))
                    .collect();
                facets.push(cycle);
            }
        }
        Polytope::new(8, facets).expect("cube is valid")
    }

    /// Bottom vertices `0..n`, top vertices `n..2n` (vertex `n + i` above `i`).
    /// Facet 0 is the bottom, facet 1 the top, facet `2 + i` the quadrilateral
    /// over the bottom edge `(i, i + 1)`.
    pub fn prism(n: usize) -> Result<Polytope> {
        if n < 3 {
            return Err(Error::Precondition(format!("prism needs n >= 3, got {n}")));
        }
        let mut facets = vec![(0..n).collect(), (n..2 * n).collect()];
        for i in 0..n {
            let j = (i + 1) % n;
            facets.push(vec![i, j, n + j, n + i]);
        }
        Polytope::new(2 * n, facets)
    }

    /// Four layers of five vertices: top pentagon `T_i = i`, upper ring
    /// `U_i = 5 + i`, lower ring `L_i = 10 + i`, bottom pentagon `W_i = 15 + i`,
    /// with edges `T_i U_i`, `U_i L_i`, `L_i U_{i+1}`, `L_i W_i`.
    /// Facet 0 is the top, facets `1 + i` the upper pentagons
    /// `T_i T_{i+1} U_{i+1} L_i U_i`, facets `6 + i` the lower pentagons
    /// `W_i W_{i+1} L_{i+1} U_{i+1} L_i`, facet 11 the bottom.
    pub fn dodecahedron() -> Polytope {
        let mut facets = vec![(0..5).collect::<Vec<_>>()];
        for i in 0..5 {
            let j = (i + 1) % 5;
            facets.push(vec![i, j, 5 + j, 10 + i, 5 + i]);
        }
        for i in 0..5 {
            let j = (i + 1) % 5;
            facets.push(vec![15 + i, 15 + j, 10 + j, 5 + j, 10 + i]);
        }
        facets.push((15..20).collect());
        Polytope::new(20, facets).expect("dodecahedron is valid")
    }

    /// Vertices are the permutations of `[0, 1, 2, 3]` in lexicographic order;
    /// edges swap two adjacent positions. Facets correspond to nonempty proper
    /// subsets `S` of `{0, 1, 2, 3}` (the permutations whose first `|S|`
    /// entries form `S`), ordered by `(|S|, bitmask of S)`: facets 0..4 and
    /// 10..14 are hexagons, facets 4..10 are squares.
    pub fn permutohedron() -> Polytope {
        let perms = permutations4();
        let index: HashMap<[usize; 4], usize> = perms.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut subsets: Vec<u32> = (1..15).collect();
        subsets.sort_by_key(|&m| (m.count_ones(), m));
        let swap = |p: [usize; 4], i: usize| {
            let mut q = p;
            q.swap(i, i + 1);
            q
        };
        let mut facets = Vec::with_capacity(14);
        for mask in subsets {
            let k = mask.count_ones() as usize;
            let gens: Vec<usize> = (0..3).filter(|&i| i != k - 1).collect();
            let start = *perms
                .iter()
                .find(|p| p[..k].iter().all(|&x| mask & (1 << x) != 0))
                .expect("subset is realised");
            let mut cycle = vec![index[&start]];
            let mut cur = start;
            let mut step = 0;
            loop {
                cur = swap(cur, gens[step % 2]);
                step += 1;
                if cur == start {
                    break;
                }
                cycle.push(index[&cur]);
            }
            facets.push(cycle);
        }
        Polytope::new(24, facets).expect("permutohedron is valid")
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&x| seen[x] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Combinatorial equivalence of two simple 3-polytopes: a vertex bijection
/// preserving edges and mapping facets onto facets.
pub fn combinatorially_equivalent(p: &Polytope, q: &Polytope) -> bool {
    if p.f_vector() != q.f_vector() {
        return false;
    }
    let mut p_sizes: Vec<usize> = p.facets().iter().map(Vec::len).collect();
    let mut q_sizes: Vec<usize> = q.facets().iter().map(Vec::len).collect();
    p_sizes.sort_unstable();
    q_sizes.sort_unstable();
    if p_sizes != q_sizes {
        return false;
    }

    // BFS order of p's vertices with a parent for each non-root vertex.
    let n = p.vertex_count();
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for u in p.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                order.push(u);
            }
        }
    }

    let q_facets: BTreeSet<Vec<usize>> = q
        .facets()
        .iter()
        .map(|f| {
            let mut s = f.clone();
            s.sort_unstable();
            s
        })
        .collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    (0..n).any(|root| {
        map[order[0]] = root;
        used[root] = true;
        let ok = extend_iso(p, q, &order, &parent, 1, &mut map, &mut used, &q_facets);
        used[root] = false;
        ok
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    p: &Polytope,
    q: &Polytope,
    order: &[usize],
    parent: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    q_facets: &BTreeSet<Vec<usize>>,
) -> bool {
    if depth == order.len() {
        return p.facets().iter().all(|f| {
            let mut image: Vec<usize> = f.iter().map(|&v| map[v]).collect();
            image.sort_unstable();
            q_facets.contains(&image)
        });
    }
    let v = order[depth];
    for cand in q.neighbors(map[parent[v]]) {
        if used[cand] {
            continue;
        }
        let consistent = p.neighbors(v).iter().all(|&u| {
            map[u] == usize::MAX || q.edge_between(cand, map[u]).is_some()
        });
        if !consistent {
            continue;
        }
        map[v] = cand;
        used[cand] = true;
        if extend_iso(p, q, order, parent, depth + 1, map, used, q_facets) {
            return true;
        }
        used[cand] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_belts(p: &Polytope, k: usize) -> Vec<Belt> {
        let n = p.facet_count();
        let mut out = BTreeSet::new();
        let adj = |a: usize, b: usize| p.facets_adjacent(a, b);
        if k == 3 {
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let meet = (0..p.vertex_count())
                            .any(|v| p.facet_contains(a, v) && p.facet_contains(b, v) && p.facet_contains(c, v));
                        if adj(a, b) && adj(b, c) && adj(a, c) && !meet {
                            out.insert(Belt::canonical(&[a, b, c]));
                        }
                    }
                }
            }
        } else {
            assert_eq!(k, 4);
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        for d in c + 1..n {
                            for cyc in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                                let ok = (0..4).all(|i| adj(cyc[i], cyc[(i + 1) % 4]))
                                    && !adj(cyc[0], cyc[2])
                                    && !adj(cyc[1], cyc[3]);
                                if ok {
                                    out.insert(Belt::canonical(&cyc));
                                }
                            }
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    fn corpus() -> Vec<Polytope> {
        let mut v = vec![Polytope::simplex(), Polytope::cube(), Polytope::dodecahedron(), Polytope::permutohedron()];
        for n in 3..=7 {
            v.push(Polytope::prism(n).unwrap());
        }
        v.push(Polytope::cube().truncate_vertex(0).unwrap());
        v.push(Polytope::dodecahedron().truncate_vertex(7).unwrap());
        v
    }

    #[test]
    fn f_vectors_of_builders() {
        assert_eq!(Polytope::simplex().f_vector(), (4, 6, 4));
        assert_eq!(Polytope::cube().f_vector(), (8, 12, 6));
        assert_eq!(Polytope::dodecahedron().f_vector(), (20, 30, 12));
        assert_eq!(Polytope::permutohedron().f_vector(), (24, 36, 14));
        assert_eq!(Polytope::prism(5).unwrap().f_vector(), (10, 15, 7));
    }

    #[test]
    fn h_vectors() {
        assert_eq!(Polytope::simplex().h_vector(), [1, 1, 1, 1]);
        assert_eq!(Polytope::dodecahedron().h_vector(), [1, 9, 9, 1]);
        assert_eq!(Polytope::permutohedron().h_vector(), [1, 11, 11, 1]);
    }

    #[test]
    fn permutohedron_facet_sizes() {
        let p = Polytope::permutohedron();
        let quads = p.facets().iter().filter(|f| f.len() == 4).count();
        let hexes = p.facets().iter().filter(|f| f.len() == 6).count();
        assert_eq!((quads, hexes), (6, 8));
    }

    #[test]
    fn parse_rejects_short_facet() {
        let text = r#"{"vertex_count": 4, "facets": [[1,2,3],[0,2,3],[0,1,3],[0,1]]}"#;
        let err = Polytope::from_json(text).unwrap_err();
        assert!(err.to_string().contains("facet 3 cycle too short"), "{err}");
    }

    #[test]
    fn parse_reports_degree_violation() {
        // Square pyramid: apex has degree 4.
        let text = r#"{"vertex_count": 5, "facets": [[0,1,2,3],[0,1,4],[1,2,4],[2,3,4],[3,0,4]]}"#;
        let err = Polytope::from_json(text).unwrap_err();
        assert!(err.to_string().contains("vertex 4 lies in 4 facets"), "{err}");
    }

    #[test]
    fn parse_rejects_bad_json() {
        assert!(matches!(Polytope::from_json("{\"vertex_count\": 4"), Err(Error::Syntax(_))));
    }

    #[test]
    fn json_round_trip() {
        let p = Polytope::dodecahedron();
        assert_eq!(Polytope::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn belts_match_brute_force() {
        for p in corpus() {
            for k in [3, 4] {
                assert_eq!(p.find_belts(k).unwrap(), brute_force_belts(&p, k), "k={k} f={:?}", p.f_vector());
            }
        }
    }

    #[test]
    fn belt_examples() {
        let prism3 = Polytope::prism(3).unwrap();
        assert_eq!(prism3.find_belts(3).unwrap(), vec![Belt(vec![2, 3, 4])]);
        let d = Polytope::dodecahedron();
        assert!(d.find_belts(3).unwrap().is_empty());
        assert!(d.find_belts(4).unwrap().is_empty());
        let cube = Polytope::cube();
        assert_eq!(cube.find_belts(4).unwrap().len(), 3);
        assert!(cube.find_belts(2).is_err());
    }

    #[test]
    fn flag_and_pogorelov() {
        assert!(!Polytope::simplex().is_flag());
        assert!(Polytope::cube().is_flag());
        assert!(!Polytope::prism(3).unwrap().is_flag());
        assert!(Polytope::dodecahedron().is_pogorelov());
        assert!(!Polytope::cube().is_pogorelov());
        assert!(!Polytope::simplex().is_pogorelov());
    }

    #[test]
    fn injectivity() {
        let d = Polytope::dodecahedron();
        for f in 0..12 {
            assert!(d.face_injectivity(Face::Facet(f)).unwrap());
        }
        let prism3 = Polytope::prism(3).unwrap();
        assert!(!prism3.face_injectivity(Face::Facet(2)).unwrap());
        assert!(prism3.face_injectivity(Face::Facet(0)).unwrap());
        // RP^2 in RP^3 induces an isomorphism on π₁; the edge circles do not inject.
        let s = Polytope::simplex();
        assert!(s.face_injectivity(Face::Facet(0)).unwrap());
        assert!(!s.face_injectivity(Face::Edge(0)).unwrap());
        assert!(Polytope::cube().face_injectivity(Face::Edge(0)).unwrap());
        assert!(s.face_injectivity(Face::Facet(9)).is_err());
    }

    #[test]
    fn truncation_counts() {
        let t = Polytope::cube().truncate_vertex(3).unwrap();
        assert_eq!(t.f_vector(), (10, 15, 7));
        assert_eq!(t.facet(6).len(), 3);
        assert!(Polytope::cube().truncate_vertex(8).is_err());
    }

    #[test]
    fn truncated_simplex_is_prism() {
        let prism3 = Polytope::prism(3).unwrap();
        for v in 0..4 {
            assert!(combinatorially_equivalent(&Polytope::simplex().truncate_vertex(v).unwrap(), &prism3));
        }
    }

    #[test]
    fn double_truncation_of_simplex() {
        let twice = Polytope::simplex().truncate_vertex(0).unwrap().truncate_vertex(1).unwrap();
        assert_eq!(twice.f_vector(), (8, 12, 6));
        assert!(!combinatorially_equivalent(&twice, &Polytope::cube()));
    }

    #[test]
    fn prism4_is_cube() {
        assert!(combinatorially_equivalent(&Polytope::prism(4).unwrap(), &Polytope::cube()));
        assert!(!combinatorially_equivalent(&Polytope::prism(5).unwrap(), &Polytope::cube().truncate_vertex(0).unwrap()));
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("prism:5".parse::<Shape>().unwrap(), Shape::Prism(5));
        assert_eq!("dodecahedron".parse::<Shape>().unwrap(), Shape::Dodecahedron);
        assert!("hexagon".parse::<Shape>().is_err());
        assert!(Polytope::build(Shape::Prism(2)).is_err());
    }
}
