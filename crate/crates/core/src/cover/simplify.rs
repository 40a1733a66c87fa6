use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::pi1::{canonical_cyclic, occurrences, Presentation, Word};

/// Growth caps for [`simplify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyLimits {
    /// Longest relator an elimination may produce.
    pub max_word_len: usize,
    /// Largest total relator length an elimination may produce.
    pub max_total_len: usize,
}

impl Default for SimplifyLimits {
    fn default() -> Self {
        SimplifyLimits { max_word_len: 10_000, max_total_len: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplified {
    pub presentation: Presentation,
    /// Some elimination was skipped because it would exceed the limits.
    pub capped: bool,
}

/// Cyclic reduction plus removal of duplicate relators (up to rotation and
/// inversion). Relators are stored in canonical cyclic form.
fn normalize(pres: &Presentation) -> Presentation {
    let mut seen = HashSet::new();
    let relators: Vec<Word> = pres
        .relators()
        .iter()
        .map(|r| canonical_cyclic(r))
        .filter(|r| !r.is_empty() && seen.insert(r.clone()))
        .collect();
    Presentation::new(pres.generators().to_vec(), relators).expect("same generators")
}

/// Generic Tietze simplification, run to a fixpoint: relators are cyclically
/// reduced and deduplicated, and a generator occurring exactly once in some
/// relator is eliminated through it (single-letter relators first, then the
/// cheapest move). Moves that would break `limits` are skipped and reported.
pub fn simplify(pres: &Presentation, limits: SimplifyLimits) -> Simplified {
    let mut current = normalize(pres);
    let mut capped = false;
    loop {
        let mut counts = vec![0usize; current.generator_count()];
        for r in current.relators() {
            for l in r {
                counts[l.generator] += 1;
            }
        }
        // (cost, relator, generator), cheapest first.
        let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
        for (ri, r) in current.relators().iter().enumerate() {
            let mut gens: Vec<usize> = r.iter().map(|l| l.generator).collect();
            gens.sort_unstable();
            gens.dedup();
            for g in gens {
                if occurrences(r, g) == 1 {
                    let cost = (r.len() - 1) * (counts[g] - 1);
                    candidates.push((cost, ri, g));
                }
            }
        }
        candidates.sort_unstable();
        let mut next = None;
        for (_, r, g) in candidates {
            let reduced = normalize(&current.tietze_eliminate(g, r).expect("g occurs once in r"));
            let longest = reduced.relators().iter().map(Vec::len).max().unwrap_or(0);
            if longest > limits.max_word_len || reduced.total_length() > limits.max_total_len {
                capped = true;
                continue;
            }
            next = Some(reduced);
            break;
        }
        match next {
            Some(p) => current = p,
            None => return Simplified { presentation: current, capped },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmap::CharMap;
    use crate::cover::wu_yu_presentation;
    use crate::pi1::{abelianization, count_homs, parse_presentation, FiniteGroupTable};
    use crate::polytope::Polytope;
    use proptest::prelude::*;

    #[test]
    fn trivial_example() {
        let p = parse_presentation("gens: a, b\nrel: a\nrel: a b\n").unwrap();
        let s = simplify(&p, SimplifyLimits::default());
        assert_eq!(s.presentation.generator_count(), 0);
        assert_eq!(s.presentation.relator_count(), 0);
        assert!(!s.capped);
    }

    #[test]
    fn simplex_wu_yu() {
        let p = Polytope::simplex();
        let map = CharMap::from_bits(&[1, 2, 4, 7]).unwrap();
        let wy = wu_yu_presentation(&p, &map, 0).unwrap();
        let s = simplify(&wy, SimplifyLimits::default()).presentation;
        assert!(s.generator_count() <= 4);
        assert_eq!(abelianization(&s).unwrap(), abelianization(&wy).unwrap());
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        assert_eq!(count_homs(&s, &s3, 1_000_000).unwrap(), 4);
    }

    #[test]
    fn cap_is_reported() {
        let p = parse_presentation("gens: a, b, c\nrel: a b c b c\nrel: a a b\n").unwrap();
        let tight = SimplifyLimits { max_word_len: 2, max_total_len: 2 };
        let s = simplify(&p, tight);
        assert!(s.capped);
        assert!(s.presentation.generator_count() >= 1);
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        let letter = (0..3usize, any::<bool>());
        let word = prop::collection::vec(letter, 1..6);
        prop::collection::vec(word, 0..4).prop_map(|rels| {
            let relators = rels
                .into_iter()
                .map(|w| w.into_iter().map(|(g, i)| crate::pi1::Letter::new(g, i)).collect())
                .collect();
            Presentation::new(vec!["a".into(), "b".into(), "c".into()], relators).unwrap()
        })
    }

    proptest! {
        #[test]
        fn preserves_invariants_and_is_idempotent(p in arb_presentation()) {
            let limits = SimplifyLimits::default();
            let s = simplify(&p, limits).presentation;
            prop_assert_eq!(abelianization(&s).unwrap(), abelianization(&p).unwrap());
            for k in 1..=2 {
                let h = FiniteGroupTable::z2_power(k);
                prop_assert_eq!(count_homs(&s, &h, 1_000_000).unwrap(), count_homs(&p, &h, 1_000_000).unwrap());
            }
            let s3 = FiniteGroupTable::symmetric(3).unwrap();
            prop_assert_eq!(count_homs(&s, &s3, 1_000_000).unwrap(), count_homs(&p, &s3, 1_000_000).unwrap());
            prop_assert_eq!(simplify(&s, limits).presentation, s);
        }
    }
}
