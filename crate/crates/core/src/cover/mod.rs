//! The cell structure of the small cover `M = P × Z₂³ / ∼` and the
//! presentations of its fundamental group read off from it.
//!
//! Cells of `M` over a face `f` of `P` are indexed by cosets of
//! `G_f = ⟨λ(F) : F ⊇ f⟩`: one vertex over each vertex of `P`, two lifts of
//! every edge, four copies of every facet and eight copies of `P`.

mod simplify;
mod wu_yu;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use simplify::{simplify, SimplifyLimits, Simplified};
pub use wu_yu::wu_yu_presentation;

use crate::charmap::{coset_label, ensure_valid, span, CharMap, Gf2Vec};
use crate::error::{Error, Result};
use crate::morse::VertexOrder;
use crate::pi1::{Letter, Presentation, Word};
use crate::polytope::Polytope;

/// One of the two lifts of an edge of `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftedEdge {
    pub edge: usize,
    /// Minimal element of the coset of `G_e` this lift sits over.
    pub label: Gf2Vec,
    /// Canonical direction.
    pub tail: usize,
    pub head: usize,
}

/// A copy of a facet, glued from the coset `label + ⟨λ(F)⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceCopy {
    pub facet: usize,
    pub label: Gf2Vec,
    /// Lifted-edge indices in facet-cycle order, with `true` when the edge is
    /// traversed along its canonical direction.
    pub boundary: Vec<(usize, bool)>,
}

/// Subgroup `G_e` for the edge `e`, as a bitmask.
fn edge_group(p: &Polytope, map: &CharMap, e: usize) -> u8 {
    let [f, g] = p.edge(e).facets;
    span(&[map.color(f), map.color(g)])
}

/// Non-zero label of the second lift of `e`.
fn second_label(group: u8) -> Gf2Vec {
    Gf2Vec::all().find(|g| group & (1 << g.bits()) == 0).expect("G_e has index 2")
}

fn build_lifted_edges(p: &Polytope, map: &CharMap, order: Option<&VertexOrder>) -> Vec<LiftedEdge> {
    let mut out = Vec::with_capacity(2 * p.edge_count());
    for e in 0..p.edge_count() {
        let [u, v] = p.edge(e).vertices;
        let (tail, head) = match order {
            Some(o) if o.rank(u) > o.rank(v) => (v, u),
            _ => (u, v),
        };
        let group = edge_group(p, map, e);
        for label in [Gf2Vec::ZERO, second_label(group)] {
            out.push(LiftedEdge { edge: e, label, tail, head });
        }
    }
    out
}

fn build_face_copies(p: &Polytope, map: &CharMap, lifts: &[LiftedEdge]) -> Vec<FaceCopy> {
    let mut out = Vec::with_capacity(4 * p.facet_count());
    for f in 0..p.facet_count() {
        let own = span(&[map.color(f)]);
        let cycle = p.facet(f);
        for label in crate::charmap::coset_labels(own) {
            let boundary = p
                .facet_edges(f)
                .iter()
                .enumerate()
                .map(|(j, &e)| {
                    let l = coset_label(label, edge_group(p, map, e));
                    let idx = if l == Gf2Vec::ZERO { 2 * e } else { 2 * e + 1 };
                    debug_assert_eq!(lifts[idx].label, l);
                    (idx, lifts[idx].tail == cycle[j])
                })
                .collect();
            out.push(FaceCopy { facet: f, label, boundary });
        }
    }
    out
}

/// The `2 f₁` lifted edges; lift `2e` has label 0 and lift `2e + 1` the
/// other label. Edges are directed from the lower to the higher vertex id.
pub fn lifted_edges(p: &Polytope, map: &CharMap) -> Result<Vec<LiftedEdge>> {
    ensure_valid(p, map)?;
    Ok(build_lifted_edges(p, map, None))
}

/// The `4 f₂` facet copies, four per facet in ascending label order.
pub fn face_copies(p: &Polytope, map: &CharMap) -> Result<Vec<FaceCopy>> {
    ensure_valid(p, map)?;
    Ok(build_face_copies(p, map, &build_lifted_edges(p, map, None)))
}

/// A spanning tree of the vertex-edge graph, as sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    pub fn new(p: &Polytope, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let n = p.vertex_count();
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &e in &edges {
            if e >= p.edge_count() {
                return Err(Error::OutOfRange { what: "edge", id: e, len: p.edge_count() });
            }
            let [u, v] = p.edge(e).vertices;
            let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
            if ru == rv {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
            parent[ru] = rv;
        }
        Ok(SpanningTree { edges })
    }

    /// Breadth-first tree from vertex 0, neighbours in id order.
    pub fn bfs(p: &Polytope) -> Self {
        let n = p.vertex_count();
        let mut seen = vec![false; n];
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            let mut nbrs: Vec<(usize, usize)> =
                p.vertex_edges(u).iter().map(|&e| (p.edge(e).other(u), e)).collect();
            nbrs.sort_unstable();
            for (v, e) in nbrs {
                if !seen[v] {
                    seen[v] = true;
                    edges.push(e);
                    queue.push_back(v);
                }
            }
        }
        edges.sort_unstable();
        SpanningTree { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// The CW presentation together with its bookkeeping.
#[derive(Debug, Clone)]
pub(crate) struct CwData {
    pub presentation: Presentation,
    /// Generator index of each lifted edge; `None` for tree lifts.
    pub generator_of_lift: Vec<Option<usize>>,
    /// Facet of each relator (relator `i` is the `i`-th face copy).
    pub relator_facet: Vec<usize>,
}

pub(crate) fn build_cw(p: &Polytope, map: &CharMap, tree: &SpanningTree, order: Option<&VertexOrder>) -> CwData {
    let lifts = build_lifted_edges(p, map, order);
    let copies = build_face_copies(p, map, &lifts);
    let mut names = Vec::new();
    let mut generator_of_lift = vec![None; lifts.len()];
    for (i, l) in lifts.iter().enumerate() {
        if l.label == Gf2Vec::ZERO && tree.contains(l.edge) {
            continue;
        }
        generator_of_lift[i] = Some(names.len());
        names.push(format!("e{}_{}", l.edge, l.label.bits()));
    }
    let relators: Vec<Word> = copies
        .iter()
        .map(|c| {
            c.boundary
                .iter()
                .filter_map(|&(l, forward)| generator_of_lift[l].map(|g| Letter::new(g, !forward)))
                .collect()
        })
        .collect();
    let relator_facet = copies.iter().map(|c| c.facet).collect();
    // A facet copy never reduces to the empty word (its lifts are distinct
    // and not all in the tree), so relator i stays the i-th copy.
    let presentation = Presentation::new(names, relators).expect("well-formed CW presentation");
    debug_assert_eq!(presentation.relator_count(), copies.len());
    CwData { presentation, generator_of_lift, relator_facet }
}

/// The presentation of π₁(M) from the 2-skeleton: one generator per lifted
/// edge except the label-0 lifts of `tree`, one relator per facet copy.
pub fn cw_presentation(p: &Polytope, map: &CharMap, tree: &SpanningTree) -> Result<Presentation> {
    ensure_valid(p, map)?;
    SpanningTree::new(p, tree.edges.clone())?;
    Ok(build_cw(p, map, tree, None).presentation)
}

/// Handlebody counts and genera of the canonical Heegaard splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    /// (0-handles, 1-handles) of the handlebody around the dual graph.
    pub dual_profile: (usize, usize),
    /// (0-handles, 1-handles) of the handlebody around the 1-skeleton.
    pub skeleton_profile: (usize, usize),
    pub canonical_genus: usize,
    pub reduced_canonical_genus: usize,
    pub minimal_genus: usize,
}

pub fn heegaard_report(p: &Polytope) -> GenusReport {
    let (f0, f1, f2) = p.f_vector();
    let dual_profile = (8, 4 * f2);
    let skeleton_profile = (f0, 2 * f1);
    // Both handlebodies bound the same surface.
    assert_eq!(8 + 2 * f1, f0 + 4 * f2, "Euler characteristics of the two handlebodies differ");
    GenusReport {
        dual_profile,
        skeleton_profile,
        canonical_genus: 4 * f2 - 7,
        reduced_canonical_genus: 4 * (f2 - 3),
        minimal_genus: f2 - 3,
    }
}
