//! The minimal balanced presentation read off a Morse order.
//!
//! Start from the CW presentation whose tree is the Morse parent tree and
//! whose edges point upward. Index-1 vertices contribute the protected
//! generators; the facet topped by an index-2 vertex glues four copies into a
//! disk whose interior lifts are eliminated, leaving one relator; the sink's
//! lifts are eliminated last and the relators around it dropped.

use serde::{Deserialize, Serialize};

use super::abelian::abelianization;
use super::homs::{count_homs, FiniteGroupTable};
use super::presentation::Presentation;
use super::word::{cyclic_reduce, exponent_sums, inverse, occurrences, solve_for, substitute, Letter, Word};
use crate::charmap::{ensure_valid, CharMap};
use crate::cover::{build_cw, SpanningTree};
use crate::error::{Error, Result};
use crate::morse::{morse_data, VertexOrder};
use crate::polytope::Polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalOptions {
    /// Longest relator allowed at any point of the elimination.
    pub max_word_len: usize,
    /// Assignment cap for each hom count of the post-check.
    pub hom_cap: u64,
}

impl Default for MinimalOptions {
    fn default() -> Self {
        MinimalOptions { max_word_len: 10_000, hom_cap: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EliminationLevel {
    /// Every step used the relator predicted by the cell structure.
    Certified,
    /// Some step had to search the whole presentation.
    Heuristic,
}

/// How the dropped relators were shown to follow from the kept ones,
/// strongest first. A presentation's level is that of its weakest leftover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeftoverLevel {
    /// Cyclically reduces to the empty word.
    FreelyTrivial,
    /// Rewritten to the empty word by replacing more than half of a kept
    /// relator (or its inverse, cyclically) with the rest of it.
    KeptConsequence,
    /// Zero exponent sum in every generator.
    AbelianTrivial,
    /// Exponent vector lies in the integer span of the kept relators.
    HomologyConsequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub elimination: EliminationLevel,
    pub leftovers: LeftoverLevel,
    pub heuristic_steps: usize,
    pub dropped_relators: usize,
    /// Dropped relators only shown redundant in homology.
    pub weak_leftovers: usize,
    /// Targets whose hom counts were compared with the CW presentation.
    pub checked_targets: Vec<String>,
    /// Targets skipped because a count hit the cap.
    pub skipped_targets: Vec<String>,
}

impl Certificate {
    pub fn level(&self) -> &'static str {
        match self.elimination {
            EliminationLevel::Certified => "certified",
            EliminationLevel::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPresentation {
    /// Generators `a{v}` in rank order, relators in shelling order.
    pub presentation: Presentation,
    /// Index-1 vertex behind each generator.
    pub generator_vertices: Vec<usize>,
    /// Facet behind each relator.
    pub relator_facets: Vec<usize>,
    pub certificate: Certificate,
}

impl MinimalPresentation {
    /// Relator labels `r{F}`.
    pub fn relator_labels(&self) -> Vec<String> {
        self.relator_facets.iter().map(|f| format!("r{f}")).collect()
    }

    pub fn to_text(&self) -> String {
        self.presentation.to_text_labelled(Some(&self.relator_labels()))
    }
}

/// Mutable elimination state over the CW generators.
struct Eliminator {
    relators: Vec<Option<Word>>,
    relator_facet: Vec<usize>,
    eliminated: Vec<bool>,
    max_word_len: usize,
    heuristic_steps: usize,
}

impl Eliminator {
    fn eliminate(&mut self, g: usize, r: usize) -> Result<()> {
        let word = self.relators[r].take().expect("live relator");
        let solution = solve_for(&word, g).expect("caller checked the occurrence count");
        for slot in self.relators.iter_mut().flatten() {
            if occurrences(slot, g) > 0 {
                *slot = substitute(slot, g, &solution);
                if slot.len() > self.max_word_len {
                    return Err(Error::WordGrowth { len: slot.len(), cap: self.max_word_len });
                }
            }
        }
        self.eliminated[g] = true;
        Ok(())
    }

    /// Eliminates every generator of `targets` using relators from `pool`,
    /// each time picking a relator in which exactly one remaining target
    /// occurs, exactly once. Falls back to any live relator in which the
    /// generator occurs once.
    fn eliminate_group(&mut self, targets: &[usize], pool: &[usize]) -> Result<()> {
        let mut remaining: Vec<usize> = targets.to_vec();
        while !remaining.is_empty() {
            let guided = pool.iter().find_map(|&r| {
                let word = self.relators[r].as_ref()?;
                let present: Vec<usize> =
                    remaining.iter().copied().filter(|&g| occurrences(word, g) > 0).collect();
                match present[..] {
                    [g] if occurrences(word, g) == 1 => Some((g, r)),
                    _ => None,
                }
            });
            let (g, r) = match guided {
                Some(step) => step,
                None => {
                    self.heuristic_steps += 1;
                    self.fallback(&remaining)?
                }
            };
            self.eliminate(g, r)?;
            remaining.retain(|&x| x != g);
        }
        Ok(())
    }

    /// Shortest live relator in which some remaining generator occurs once.
    fn fallback(&self, remaining: &[usize]) -> Result<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for &g in remaining {
            for (r, word) in self.relators.iter().enumerate() {
                if let Some(word) = word {
                    if occurrences(word, g) == 1 && best.is_none_or(|(len, _, _)| word.len() < len) {
                        best = Some((word.len(), g, r));
                    }
                }
            }
        }
        best.map(|(_, g, r)| (g, r))
            .ok_or_else(|| Error::SearchFailed("no relator admits a Tietze elimination".into()))
    }

    fn live_relators_of(&self, facet: usize) -> Vec<usize> {
        (0..self.relators.len())
            .filter(|&r| self.relator_facet[r] == facet && self.relators[r].is_some())
            .collect()
    }
}

/// Minimal presentation with default options.
pub fn minimal_presentation(p: &Polytope, map: &CharMap, order: &VertexOrder) -> Result<MinimalPresentation> {
    minimal_presentation_with(p, map, order, &MinimalOptions::default())
}

pub fn minimal_presentation_with(
    p: &Polytope,
    map: &CharMap,
    order: &VertexOrder,
    options: &MinimalOptions,
) -> Result<MinimalPresentation> {
    ensure_valid(p, map)?;
    let morse = morse_data(p, order);
    let tree = SpanningTree::new(p, morse.tree_edges())?;
    let cw = build_cw(p, map, &tree, Some(order));
    let lift_gen = |e: usize, j: usize| cw.generator_of_lift[2 * e + j];

    let index1 = morse.vertices_of_index(order, 1);
    let protected: Vec<usize> = index1
        .iter()
        .map(|&v| lift_gen(morse.e_v[v].expect("index-1 vertex has e_v"), 1).expect("non-tree lift"))
        .collect();

    let mut state = Eliminator {
        relators: cw.presentation.relators().iter().cloned().map(Some).collect(),
        relator_facet: cw.relator_facet.clone(),
        eliminated: vec![false; cw.presentation.generator_count()],
        max_word_len: options.max_word_len,
        heuristic_steps: 0,
    };

    let incoming_generators = |w: usize| -> Vec<usize> {
        p.vertex_edges(w)
            .into_iter()
            .filter(|&e| order.rank(p.edge(e).other(w)) < order.rank(w))
            .flat_map(|e| [lift_gen(e, 0), lift_gen(e, 1)])
            .flatten()
            .collect()
    };

    let mut kept: Vec<(usize, usize)> = Vec::new(); // (facet, relator index)
    for w in morse.vertices_of_index(order, 2) {
        let f = morse.facet_topped_by(w).expect("index-2 vertex tops a facet");
        let targets = incoming_generators(w);
        debug_assert_eq!(targets.len(), 3);
        let pool = state.live_relators_of(f);
        state.eliminate_group(&targets, &pool)?;
        let left = state.live_relators_of(f);
        if left.len() != 1 {
            // Only reachable after a fallback consumed relators elsewhere.
            state.heuristic_steps += 1;
        }
        let r = *left.first().ok_or_else(|| Error::SearchFailed(format!("facet {f} lost all its relators")))?;
        kept.push((f, r));
    }

    let sink = morse.sink;
    let sink_targets = incoming_generators(sink);
    debug_assert_eq!(sink_targets.len(), 5);
    let mut sink_pool: Vec<usize> =
        p.vertex_facets(sink).iter().flat_map(|&f| state.live_relators_of(f)).collect();
    sink_pool.sort_unstable();
    state.eliminate_group(&sink_targets, &sink_pool)?;

    if state.eliminated.iter().filter(|&&e| !e).count() != protected.len() {
        return Err(Error::SearchFailed("generators other than the protected ones survived".into()));
    }

    let mut new_index = vec![usize::MAX; cw.presentation.generator_count()];
    for (i, &g) in protected.iter().enumerate() {
        new_index[g] = i;
    }
    let reindex = |w: &Word| -> Word { w.iter().map(|l| Letter::new(new_index[l.generator], l.inverse)).collect() };
    let kept_rel: Vec<usize> = kept.iter().map(|&(_, r)| r).collect();
    let relators: Vec<Word> =
        kept_rel.iter().map(|&r| reindex(state.relators[r].as_ref().expect("kept relator is live"))).collect();
    let names = index1.iter().map(|v| format!("a{v}")).collect();
    let presentation = Presentation::new(names, relators)?;
    if presentation.relator_count() != kept.len() {
        return Err(Error::PostCheck("a kept relator became trivial".into()));
    }

    // Everything not kept is dropped, after checking how it follows from the
    // kept relators.
    let leftovers: Vec<Word> = state
        .relators
        .iter()
        .enumerate()
        .filter(|(r, _)| !kept_rel.contains(r))
        .filter_map(|(_, w)| w.as_ref().map(reindex))
        .collect();
    let (leftover_level, weak) = classify_leftovers(&presentation, &leftovers)?;

    let mut certificate = Certificate {
        elimination: if state.heuristic_steps == 0 { EliminationLevel::Certified } else { EliminationLevel::Heuristic },
        leftovers: leftover_level,
        heuristic_steps: state.heuristic_steps,
        dropped_relators: leftovers.len(),
        weak_leftovers: weak,
        checked_targets: Vec::new(),
        skipped_targets: Vec::new(),
    };
    post_check(&presentation, &cw.presentation, options.hom_cap, &mut certificate)?;

    Ok(MinimalPresentation {
        presentation,
        generator_vertices: index1,
        relator_facets: kept.iter().map(|&(f, _)| f).collect(),
        certificate,
    })
}

/// Abelianization and hom counts to Z₂, Z₂², Z₂³ must match the CW
/// presentation; counts over the cap are skipped and recorded.
/// Words longer than this are not fed to the rewriting check.
const REWRITE_LIMIT: usize = 4096;

fn classify_leftovers(kept: &Presentation, leftovers: &[Word]) -> Result<(LeftoverLevel, usize)> {
    let n = kept.generator_count();
    let mut levels = vec![None; leftovers.len()];
    for (level, w) in levels.iter_mut().zip(leftovers) {
        if cyclic_reduce(w).is_empty() {
            *level = Some(LeftoverLevel::FreelyTrivial);
        }
    }
    // Proven leftovers are consequences too and may be used for the rest.
    let mut known: Vec<Word> = kept.relators().to_vec();
    loop {
        let mut progress = false;
        for (level, w) in levels.iter_mut().zip(leftovers) {
            if level.is_none() && w.len() <= REWRITE_LIMIT && rewrite_with(w, &known).is_empty() {
                *level = Some(LeftoverLevel::KeptConsequence);
                known.push(w.clone());
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let mut unresolved = Vec::new();
    for (level, w) in levels.iter_mut().zip(leftovers) {
        if level.is_none() {
            *level = Some(if exponent_sums(w, n).iter().all(|&x| x == 0) {
                LeftoverLevel::AbelianTrivial
            } else {
                unresolved.push(w.clone());
                LeftoverLevel::HomologyConsequence
            });
        }
    }
    if !unresolved.is_empty() {
        // Over Z, adding rows to a relation matrix leaves the quotient
        // unchanged only if they lie in the row span.
        let mut all = kept.relators().to_vec();
        all.extend(unresolved);
        let extended = Presentation::new(kept.generators().to_vec(), all)?;
        let (a, b) = (abelianization(kept)?, abelianization(&extended)?);
        if a != b {
            return Err(Error::PostCheck(format!(
                "dropped relators change the abelianization from {a} to {b}"
            )));
        }
    }
    let levels: Vec<LeftoverLevel> = levels.into_iter().flatten().collect();
    let weak = levels.iter().filter(|&&l| l >= LeftoverLevel::AbelianTrivial).count();
    Ok((levels.into_iter().max().unwrap_or(LeftoverLevel::FreelyTrivial), weak))
}

/// Greedy cyclic rewriting: while some cyclic conjugate of the word starts
/// with more than half of a cyclic conjugate of a relator `r^{±1} = u v`,
/// replace that `u` by `v⁻¹`. Each step multiplies by a conjugate of a
/// relator and shortens the word, so an empty result proves the word is a
/// consequence of `relators`.
pub(crate) fn rewrite_with(word: &[Letter], relators: &[Word]) -> Word {
    let mut w = cyclic_reduce(word);
    let forms: Vec<Word> = relators
        .iter()
        .flat_map(|r| {
            let r = cyclic_reduce(r);
            let inv = inverse(&r);
            let m = r.len();
            (0..m).flat_map(move |s| {
                [(0..m).map(|i| r[(s + i) % m]).collect::<Word>(), (0..m).map(|i| inv[(s + i) % m]).collect()]
            })
        })
        .collect();
    'outer: loop {
        let n = w.len();
        if n == 0 {
            return w;
        }
        for form in &forms {
            let m = form.len();
            for start in 0..n {
                let k = (0..m.min(n)).take_while(|&i| w[(start + i) % n] == form[i]).count();
                if 2 * k > m {
                    let mut next = inverse(&form[k..]);
                    next.extend((k..n).map(|i| w[(start + i) % n]));
                    w = cyclic_reduce(&next);
                    continue 'outer;
                }
            }
        }
        return w;
    }
}

fn post_check(minimal: &Presentation, cw: &Presentation, cap: u64, cert: &mut Certificate) -> Result<()> {
    let (a, b) = (abelianization(minimal)?, abelianization(cw)?);
    if a != b {
        return Err(Error::PostCheck(format!("abelianization {a} differs from CW {b}")));
    }
    for k in 1..=3 {
        let h = FiniteGroupTable::z2_power(k);
        // Every hom is a leaf of the search, so a count larger than the cap
        // cannot finish; skip it without searching.
        if b.hom_count_to_z2_power(k).is_none_or(|n| n > cap as u128) {
            cert.skipped_targets.push(h.name().to_string());
            continue;
        }
        let counts = count_homs(minimal, &h, cap).and_then(|x| Ok((x, count_homs(cw, &h, cap)?)));
        match counts {
            Ok((x, y)) if x == y => cert.checked_targets.push(h.name().to_string()),
            Ok((x, y)) => {
                return Err(Error::PostCheck(format!("{} homs: minimal {x}, CW {y}", h.name())));
            }
            Err(Error::CapExceeded { .. }) => cert.skipped_targets.push(h.name().to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
