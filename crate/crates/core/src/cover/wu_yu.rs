use std::collections::HashSet;

use crate::charmap::{coset_label, coset_labels, ensure_valid, span, CharMap, Gf2Vec};
use crate::error::{Error, Result};
use crate::pi1::{canonical_cyclic, Letter, Presentation, Word};
use crate::polytope::Polytope;

/// Symbol `s_{F,g}` after folding `s_{F,g+λ(F)} = s_{F,g}⁻¹`: generators are
/// numbered `4F + j` where `j` is the position of the coset label.
fn symbol(map: &CharMap, f: usize, g: Gf2Vec) -> Letter {
    let own = span(&[map.color(f)]);
    let label = coset_label(g, own);
    let j = coset_labels(own).iter().position(|&l| l == label).expect("label of a coset");
    Letter::new(4 * f + j, label != g)
}

/// Presentation with generators `s{F}_{g}` (four per facet), one relator per
/// distinct 4-cycle `s_{F,g} s_{F',g+λF} s_{F,g+λF'}⁻¹ s_{F',g}⁻¹` over an
/// edge `F ∩ F'`, and `s_{F,g} = 1` for the three facets through `v0`.
pub fn wu_yu_presentation(p: &Polytope, map: &CharMap, v0: usize) -> Result<Presentation> {
    ensure_valid(p, map)?;
    if v0 >= p.vertex_count() {
        return Err(Error::OutOfRange { what: "vertex", id: v0, len: p.vertex_count() });
    }
    let mut names = Vec::with_capacity(4 * p.facet_count());
    for f in 0..p.facet_count() {
        for label in coset_labels(span(&[map.color(f)])) {
            names.push(format!("s{f}_{}", label.bits()));
        }
    }
    let mut relators: Vec<Word> = Vec::new();
    let mut seen = HashSet::new();
    for edge in p.edges() {
        let [f, h] = edge.facets;
        let (lf, lh) = (map.color(f), map.color(h));
        for g in Gf2Vec::all() {
            let word = vec![
                symbol(map, f, g),
                symbol(map, h, g ^ lf),
                symbol(map, f, g ^ lh).inv(),
                symbol(map, h, g).inv(),
            ];
            if seen.insert(canonical_cyclic(&word)) {
                relators.push(word);
            }
        }
    }
    let mut base = p.vertex_facets(v0);
    base.sort_unstable();
    for f in base {
        for j in 0..4 {
            relators.push(vec![Letter::pos(4 * f + j)]);
        }
    }
    Presentation::new(names, relators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{cw_presentation, SpanningTree};
    use crate::pi1::{abelianization, AbelianInvariants};

    #[test]
    fn simplex() {
        let p = Polytope::simplex();
        let map = CharMap::from_bits(&[1, 2, 4, 7]).unwrap();
        let wy = wu_yu_presentation(&p, &map, 0).unwrap();
        assert_eq!(wy.generator_count(), 16);
        assert_eq!(wy.relators().iter().filter(|r| r.len() == 1).count(), 12);
        assert_eq!(abelianization(&wy).unwrap(), AbelianInvariants { free_rank: 0, torsion: vec![2] });
    }

    #[test]
    fn relator_shape() {
        let p = Polytope::cube();
        let map = CharMap::from_bits(&[1, 2, 4, 1, 2, 4]).unwrap();
        let wy = wu_yu_presentation(&p, &map, 5).unwrap();
        for r in wy.relators().iter().filter(|r| r.len() > 1) {
            assert_eq!(r.len(), 4);
            // Letters alternate between the two facets of an edge.
            assert_eq!(r[0].generator / 4, r[2].generator / 4);
            assert_eq!(r[1].generator / 4, r[3].generator / 4);
            assert_ne!(r[0].generator / 4, r[1].generator / 4);
        }
        for v0 in 0..8 {
            let wy = wu_yu_presentation(&p, &map, v0).unwrap();
            assert_eq!(abelianization(&wy).unwrap(), AbelianInvariants::free(3));
        }
    }

    #[test]
    fn agrees_with_cw_on_homology() {
        let p = Polytope::prism(5).unwrap();
        let map = crate::charmap::find_orientable_coloring(&p).unwrap();
        let cw = cw_presentation(&p, &map, &SpanningTree::bfs(&p)).unwrap();
        let wy = wu_yu_presentation(&p, &map, 3).unwrap();
        assert_eq!(abelianization(&cw).unwrap(), abelianization(&wy).unwrap());
        assert!(wu_yu_presentation(&p, &map, 99).is_err());
    }
}
