//! Counting homomorphisms from a finitely presented group to a finite group.
//!
//! Generators are assigned images one at a time; a relator is evaluated as
//! soon as all of its generators have images, pruning the branch when it is
//! not the identity. The number of assignments visited is deterministic, so
//! the cap and the count do not depend on how work is scheduled.

use std::sync::atomic::{AtomicU64, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::presentation::Presentation;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: String| Error::InvalidGroup(m);
        if n == 0 {
            return Err(bad("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(bad("table is not an n×n table over 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| bad("no identity element".into()))?;
        let mut inverses = vec![0; n];
        for (x, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| bad(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { name: name.into(), table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroupTable::new(format!("Z{n}"), table).expect("cyclic group")
    }

    /// `(Z/2)^k`, elements encoded as bitmasks.
    pub fn z2_power(k: u32) -> Self {
        let n = 1usize << k;
        let table = (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect();
        let name = if k == 1 { "Z2".to_string() } else { format!("Z2^{k}") };
        FiniteGroupTable::new(name, table).expect("elementary abelian group")
    }

    /// The symmetric group on `n <= 5` points; elements are permutations in
    /// lexicographic order, multiplied as composition `(p q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::InvalidGroup(format!("symmetric group S{n} not supported")));
        }
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            perms = perms
                .iter()
                .flat_map(|p| (0..n).filter(|x| !p.contains(x)).map(|x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        perms.sort();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation");
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&(0..n).map(|i| p[q[i]]).collect()))
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(format!("S{n}"), table)
    }

    /// Parses `z2`, `z2^k`, `zN`, `sN` (case-insensitive).
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let err = || Error::Syntax(format!("unknown target group '{name}'"));
        if let Some(k) = lower.strip_prefix("z2^") {
            let k: u32 = k.parse().map_err(|_| err())?;
            if !(1..=6).contains(&k) {
                return Err(err());
            }
            return Ok(FiniteGroupTable::z2_power(k));
        }
        if let Some(n) = lower.strip_prefix('z') {
            let n: usize = n.parse().map_err(|_| err())?;
            if !(1..=64).contains(&n) {
                return Err(err());
            }
            return Ok(if n == 2 { FiniteGroupTable::z2_power(1) } else { FiniteGroupTable::cyclic(n) });
        }
        if let Some(n) = lower.strip_prefix('s') {
            let n: usize = n.parse().map_err(|_| err())?;
            return FiniteGroupTable::symmetric(n);
        }
        Err(err())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// Relators rewritten over assignment positions, grouped by the position at
/// which they become fully assigned.
struct HomSearch<'a> {
    group: &'a FiniteGroupTable,
    generators: usize,
    /// `closing[d]`: relators whose last-assigned generator sits at depth d,
    /// as (position, inverse) letters.
    closing: Vec<Vec<Vec<(usize, bool)>>>,
}

impl<'a> HomSearch<'a> {
    fn new(pres: &Presentation, group: &'a FiniteGroupTable) -> Self {
        let n = pres.generator_count();
        let rel_gens: Vec<Vec<usize>> = pres
            .relators()
            .iter()
            .map(|r| {
                let mut g: Vec<usize> = r.iter().map(|l| l.generator).collect();
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect();
        // Greedy order: next generator is the one closing the most relators,
        // then the one touching the most partially assigned relators.
        let mut position = vec![usize::MAX; n];
        for depth in 0..n {
            let score = |g: usize| {
                let mut closes = 0;
                let mut touches = 0;
                let mut total = 0;
                for gens in rel_gens.iter().filter(|gs| gs.contains(&g)) {
                    total += 1;
                    let missing = gens.iter().filter(|&&x| position[x] == usize::MAX).count();
                    if missing == 1 {
                        closes += 1;
                    }
                    if missing < gens.len() {
                        touches += 1;
                    }
                }
                (closes, touches, total)
            };
            let best = (0..n)
                .filter(|&g| position[g] == usize::MAX)
                .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
                .expect("unassigned generator remains");
            position[best] = depth;
        }
        let mut closing = vec![Vec::new(); n];
        for (r, gens) in pres.relators().iter().zip(&rel_gens) {
            let depth = gens.iter().map(|&g| position[g]).max().expect("nonempty relator");
            closing[depth].push(r.iter().map(|l| (position[l.generator], l.inverse)).collect());
        }
        HomSearch { group, generators: n, closing }
    }

    fn relators_hold(&self, depth: usize, images: &[usize]) -> bool {
        self.closing[depth].iter().all(|word| {
            let value = word.iter().fold(self.group.identity(), |acc, &(pos, inv)| {
                let x = images[pos];
                self.group.mul(acc, if inv { self.group.inverse(x) } else { x })
            });
            value == self.group.identity()
        })
    }

    fn dfs(&self, depth: usize, images: &mut [usize], budget: &mut Budget<'_>) -> Result<u64> {
        if depth == self.generators {
            return Ok(1);
        }
        let mut count = 0;
        for x in 0..self.group.order() {
            budget.tick()?;
            images[depth] = x;
            if self.relators_hold(depth, images) {
                count += self.dfs(depth + 1, images, budget)?;
            }
        }
        Ok(count)
    }

    /// Surviving assignments of the first `depth` positions.
    #[cfg(feature = "parallel")]
    fn prefixes(&self, depth: usize, budget: &mut Budget<'_>) -> Result<Vec<Vec<usize>>> {
        let mut layer = vec![Vec::new()];
        for d in 0..depth {
            let mut next = Vec::new();
            for prefix in layer {
                for x in 0..self.group.order() {
                    budget.tick()?;
                    let mut images = prefix.clone();
                    images.push(x);
                    if self.relators_hold(d, &images) {
                        next.push(images);
                    }
                }
            }
            layer = next;
        }
        Ok(layer)
    }
}

/// Shared assignment counter, flushed in batches.
struct Budget<'a> {
    shared: &'a AtomicU64,
    local: u64,
    cap: u64,
}

const FLUSH: u64 = 4096;

impl<'a> Budget<'a> {
    fn new(shared: &'a AtomicU64, cap: u64) -> Self {
        Budget { shared, local: 0, cap }
    }

    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == FLUSH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.shared.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.cap {
            return Err(Error::CapExceeded { cap: self.cap });
        }
        Ok(())
    }
}

/// Homomorphism count on the current thread.
pub fn count_homs_sequential(pres: &Presentation, group: &FiniteGroupTable, cap: u64) -> Result<u64> {
    let search = HomSearch::new(pres, group);
    let shared = AtomicU64::new(0);
    let mut budget = Budget::new(&shared, cap);
    let mut images = vec![0; search.generators];
    let count = search.dfs(0, &mut images, &mut budget)?;
    budget.flush()?;
    Ok(count)
}

/// Homomorphism count with the search tree split across the rayon pool.
#[cfg(feature = "parallel")]
pub fn count_homs_parallel(pres: &Presentation, group: &FiniteGroupTable, cap: u64) -> Result<u64> {
    let search = HomSearch::new(pres, group);
    let shared = AtomicU64::new(0);
    // Split deep enough to give every worker several subtrees.
    let target = 8 * rayon::current_num_threads().max(1);
    let mut split = 0;
    let mut width = 1usize;
    while split < search.generators && width < target {
        width = width.saturating_mul(group.order());
        split += 1;
    }
    let mut budget = Budget::new(&shared, cap);
    let prefixes = search.prefixes(split, &mut budget)?;
    budget.flush()?;
    let counts: Vec<u64> = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut budget = Budget::new(&shared, cap);
            let mut images = vec![0; search.generators];
            images[..split].copy_from_slice(&prefix);
            let c = search.dfs(split, &mut images, &mut budget)?;
            budget.flush()?;
            Ok(c)
        })
        .collect::<Result<_>>()?;
    if shared.load(Ordering::Relaxed) > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(counts.into_iter().sum())
}

/// Number of homomorphisms `pres -> group`; fails once more than `cap`
/// generator assignments have been tried.
pub fn count_homs(pres: &Presentation, group: &FiniteGroupTable, cap: u64) -> Result<u64> {
    #[cfg(feature = "parallel")]
    {
        count_homs_parallel(pres, group, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_homs_sequential(pres, group, cap)
    }
}
