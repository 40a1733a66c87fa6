#![allow(dead_code)]

use smallcover::charmap::{is_orientable, proper_colorings, span, CharMap, Gf2Vec, ORIENTABLE_PALETTE};
use smallcover::morse::{default_order, sample_orders, VertexOrder};
use smallcover::Polytope;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// The base polytopes of the corpus.
pub fn base_corpus() -> Vec<(String, Polytope)> {
    let mut out = vec![("simplex".to_string(), Polytope::simplex()), ("cube".to_string(), Polytope::cube())];
    for n in 3..=6 {
        out.push((format!("prism{n}"), Polytope::prism(n).unwrap()));
    }
    out.push(("dodecahedron".to_string(), Polytope::dodecahedron()));
    out.push(("permutohedron".to_string(), Polytope::permutohedron()));
    out
}

/// (name, original, truncated vertex) for the truncation fixtures.
pub fn truncation_cases() -> Vec<(String, Polytope, usize)> {
    let twice = Polytope::cube().truncate_vertex(0).unwrap();
    vec![
        ("simplex-t0".to_string(), Polytope::simplex(), 0),
        ("cube-t0".to_string(), Polytope::cube(), 0),
        ("cube-t0-t7".to_string(), twice, 7),
        ("prism5-t3".to_string(), Polytope::prism(5).unwrap(), 3),
        ("dodecahedron-t0".to_string(), Polytope::dodecahedron(), 0),
        ("permutohedron-t5".to_string(), Polytope::permutohedron(), 5),
    ]
}

pub fn full_corpus() -> Vec<(String, Polytope)> {
    let mut out = base_corpus();
    for (name, p, v) in truncation_cases() {
        out.push((name, p.truncate_vertex(v).unwrap()));
    }
    out
}

/// Up to `count` orientable colorings, distinct up to permuting the palette.
pub fn orientable_colorings(p: &Polytope, count: usize) -> Vec<CharMap> {
    proper_colorings(p, &ORIENTABLE_PALETTE, true, count)
}

/// The default order followed by seeded random orders, all distinct.
pub fn distinct_orders(p: &Polytope, count: usize, seed: u64) -> Vec<VertexOrder> {
    let mut out = vec![default_order(p).unwrap()];
    for o in sample_orders(p, 4 * count, seed).unwrap() {
        if out.len() == count {
            break;
        }
        if !out.contains(&o) {
            out.push(o);
        }
    }
    out
}

/// First valid characteristic map admitting no orientation functional, by
/// backtracking over facets with colors 1..=7.
pub fn nonorientable_map(p: &Polytope) -> Option<CharMap> {
    fn rec(p: &Polytope, f: usize, colors: &mut Vec<Gf2Vec>) -> bool {
        if f == p.facet_count() {
            let map = CharMap::new(colors.clone());
            return !is_orientable(p, &map).unwrap();
        }
        for bits in 1..8u8 {
            colors.push(Gf2Vec::new(bits).unwrap());
            let ok = (0..p.vertex_count()).all(|v| {
                let fs = p.vertex_facets(v);
                fs.iter().any(|&g| g > f) || span(&fs.map(|g| colors[g])) == 0xff
            });
            if ok && rec(p, f + 1, colors) {
                return true;
            }
            colors.pop();
        }
        false
    }
    let mut colors = Vec::new();
    rec(p, 0, &mut colors).then(|| CharMap::new(colors))
}
