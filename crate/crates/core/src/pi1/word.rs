use std::cmp::Ordering;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

pub type Word = Vec<Letter>;

/// Cancels adjacent `x x⁻¹` pairs until none remain.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancelling inverse letters at the two ends.
pub fn cyclic_reduce(word: &[Letter]) -> Word {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inv() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

pub fn inverse(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inv()).collect()
}

pub fn exponent_sums(word: &[Letter], generators: usize) -> Vec<i64> {
    let mut v = vec![0; generators];
    for l in word {
        v[l.generator] += l.exponent();
    }
    v
}

pub fn occurrences(word: &[Letter], generator: usize) -> usize {
    word.iter().filter(|l| l.generator == generator).count()
}

/// Representative of a cyclic word up to rotation and inversion:
/// the lexicographically smallest rotation of the word or its inverse.
pub fn canonical_cyclic(word: &[Letter]) -> Word {
    let w = cyclic_reduce(word);
    let inv = inverse(&w);
    let n = w.len();
    let mut best: Option<(&[Letter], usize)> = None;
    for seq in [&w[..], &inv[..]] {
        for start in 0..n {
            let better = match best {
                None => true,
                Some((b, bs)) => compare_rotations(seq, start, b, bs) == Ordering::Less,
            };
            if better {
                best = Some((seq, start));
            }
        }
    }
    match best {
        Some((seq, start)) => (0..n).map(|i| seq[(start + i) % n]).collect(),
        None => Vec::new(),
    }
}

fn compare_rotations(a: &[Letter], sa: usize, b: &[Letter], sb: usize) -> Ordering {
    let n = a.len();
    (0..n).map(|i| a[(sa + i) % n].cmp(&b[(sb + i) % n])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Replaces every occurrence of `generator` by `replacement` (and its
/// inverse by the inverse word), then freely reduces.
pub fn substitute(word: &[Letter], generator: usize, replacement: &[Letter]) -> Word {
    if !word.iter().any(|l| l.generator == generator) {
        return word.to_vec();
    }
    let inv = inverse(replacement);
    let mut out = Vec::with_capacity(word.len() + replacement.len());
    for &l in word {
        if l.generator == generator {
            out.extend_from_slice(if l.inverse { &inv } else { replacement });
        } else {
            out.push(l);
        }
    }
    free_reduce(&out)
}

/// If `generator` occurs exactly once in `relator`, the word it equals:
/// from `u g^ε v = 1` follows `g = (u⁻¹ v⁻¹)^ε`.
pub fn solve_for(relator: &[Letter], generator: usize) -> Option<Word> {
    if occurrences(relator, generator) != 1 {
        return None;
    }
    let pos = relator.iter().position(|l| l.generator == generator)?;
    let (u, rest) = relator.split_at(pos);
    let v = &rest[1..];
    let mut w = inverse(u);
    w.extend(inverse(v));
    let w = free_reduce(&w);
    Some(if rest[0].inverse { inverse(&w) } else { w })
}
