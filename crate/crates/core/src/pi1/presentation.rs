use std::collections::HashMap;
use std::fmt;

use super::word::{free_reduce, solve_for, substitute, Letter, Word};
use crate::error::{Error, Result};

/// A finitely presented group. Relators are stored freely reduced and never
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if !is_valid_name(g) {
                return Err(Error::InvalidPresentation(format!("invalid generator name '{g}'")));
            }
            if seen.insert(g.as_str(), i).is_some() {
                return Err(Error::InvalidPresentation(format!("duplicate generator '{g}'")));
            }
        }
        for (r, word) in relators.iter().enumerate() {
            if let Some(l) = word.iter().find(|l| l.generator >= generators.len()) {
                return Err(Error::InvalidPresentation(format!(
                    "relator {r} uses generator index {} of {}",
                    l.generator,
                    generators.len()
                )));
            }
        }
        let relators = relators.iter().map(|w| free_reduce(w)).filter(|w| !w.is_empty()).collect();
        Ok(Presentation { generators, relators })
    }

    pub fn trivial() -> Self {
        Presentation { generators: Vec::new(), relators: Vec::new() }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.generators.len() == self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Text form with an optional comment line before each relator.
    pub fn to_text_labelled(&self, labels: Option<&[String]>) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(", "));
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(label) = labels.and_then(|l| l.get(i)) {
                out.push_str(&format!("# {label}\n"));
            }
            out.push_str(&format!("rel: {}\n", self.format_word(r)));
        }
        out
    }

    /// Removes generator `g` using relator `r`, in which it must occur
    /// exactly once; every other occurrence is replaced by the solved word.
    pub fn tietze_eliminate(&self, g: usize, r: usize) -> Result<Presentation> {
        if g >= self.generators.len() {
            return Err(Error::OutOfRange { what: "generator", id: g, len: self.generators.len() });
        }
        if r >= self.relators.len() {
            return Err(Error::OutOfRange { what: "relator", id: r, len: self.relators.len() });
        }
        let solution = solve_for(&self.relators[r], g).ok_or_else(|| {
            Error::Precondition(format!(
                "generator {} does not occur exactly once in relator {r}",
                self.generators[g]
            ))
        })?;
        let relators = self
            .relators
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, w)| substitute(w, g, &solution))
            .collect();
        Ok(self.without_generator(g, relators))
    }

    /// Drops generator `g` (which must not occur in `relators`) and shifts
    /// higher indices down.
    pub(crate) fn without_generator(&self, g: usize, relators: Vec<Word>) -> Presentation {
        let mut generators = self.generators.clone();
        generators.remove(g);
        let relators = relators
            .into_iter()
            .map(|w| {
                w.into_iter()
                    .map(|l| {
                        debug_assert_ne!(l.generator, g);
                        Letter::new(if l.generator > g { l.generator - 1 } else { l.generator }, l.inverse)
                    })
                    .collect::<Word>()
            })
            .filter(|w| !w.is_empty())
            .collect();
        Presentation { generators, relators }
    }

    /// The same presentation with generators reordered by `perm` (new index
    /// `i` is old generator `perm[i]`) and relators reordered by `rel_perm`.
    pub fn permuted(&self, perm: &[usize], rel_perm: &[usize]) -> Presentation {
        let mut new_index = vec![0; perm.len()];
        for (i, &old) in perm.iter().enumerate() {
            new_index[old] = i;
        }
        let generators = perm.iter().map(|&old| self.generators[old].clone()).collect();
        let relators = rel_perm
            .iter()
            .map(|&r| self.relators[r].iter().map(|l| Letter::new(new_index[l.generator], l.inverse)).collect())
            .collect();
        Presentation { generators, relators }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text_labelled(None))
    }
}

/// Parses the line-based presentation grammar:
///
/// ```text
/// gens: a, b
/// rel: a a b^-1
/// # comment
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut generators: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relators = Vec::new();
    let mut seen_gens = false;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gens:") {
            seen_gens = true;
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                if !is_valid_name(name) {
                    return Err(Error::Syntax(format!("line {lineno}: invalid generator name '{name}'")));
                }
                if index.insert(name.to_string(), generators.len()).is_some() {
                    return Err(Error::Syntax(format!("line {lineno}: duplicate generator '{name}'")));
                }
                generators.push(name.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("rel:") {
            if !seen_gens {
                return Err(Error::Syntax(format!("line {lineno}: 'rel:' before any 'gens:' line")));
            }
            let mut word = Vec::new();
            for term in rest.split_whitespace() {
                let (name, inverse) = match term.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (term, false),
                };
                if !is_valid_name(name) {
                    return Err(Error::Syntax(format!("line {lineno}: invalid term '{term}'")));
                }
                let g = *index
                    .get(name)
                    .ok_or_else(|| Error::Syntax(format!("line {lineno}: unknown generator '{name}'")))?;
                word.push(Letter::new(g, inverse));
            }
            if word.is_empty() {
                return Err(Error::Syntax(format!("line {lineno}: empty relator")));
            }
            relators.push(word);
        } else {
            return Err(Error::Syntax(format!("line {lineno}: expected 'gens:', 'rel:' or '#'")));
        }
    }
    if !seen_gens {
        return Err(Error::Syntax("no 'gens:' line".into()));
    }
    Presentation::new(generators, relators)
}
