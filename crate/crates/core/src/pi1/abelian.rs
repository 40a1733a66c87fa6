//! Abelianization through the Smith normal form of the relation matrix.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use super::word::exponent_sums;
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^r ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with
/// `d₁ | d₂ | … | d_k` and every `dᵢ >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    /// Invariants of the cokernel of an integer matrix with `cols` columns
    /// (one per generator) and the given rows (one per relation).
    pub fn from_relation_matrix(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let matrix: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let diag = smith_diagonal(matrix, cols)?;
        let rank = diag.len();
        let torsion = diag
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| u64::try_from(d).map_err(|_| Error::Overflow("torsion coefficient")))
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianInvariants { free_rank: cols - rank, torsion })
    }

    /// Dimension of `H ⊗ Z₂`.
    pub fn mod2_rank(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|&&d| d % 2 == 0).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, if finite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> Result<AbelianInvariants> {
        let orders: Vec<u64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        let n = orders.len();
        let rows: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut row = vec![0i64; n];
                row[i] = i64::try_from(d).map_err(|_| Error::Overflow("torsion coefficient"))?;
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let mut sum = AbelianInvariants::from_relation_matrix(&rows, n)?;
        sum.free_rank += self.free_rank + other.free_rank;
        Ok(sum)
    }

    /// Number of homomorphisms to `(Z/2)^k`.
    pub fn hom_count_to_z2_power(&self, k: u32) -> Option<u128> {
        2u128.checked_pow(self.mod2_rank() as u32 * k)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Exponent-sum matrix of a presentation: one row per relator.
pub fn relation_matrix(pres: &Presentation) -> Vec<Vec<i64>> {
    pres.relators().iter().map(|r| exponent_sums(r, pres.generator_count())).collect()
}

pub fn abelianization(pres: &Presentation) -> Result<AbelianInvariants> {
    AbelianInvariants::from_relation_matrix(&relation_matrix(pres), pres.generator_count())
}

fn overflow() -> Error {
    Error::Overflow("Smith normal form")
}

/// `row[dst] -= q * row[src]` over the given column range, checked.
fn sub_row(m: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        let delta = m[src][j].checked_mul(q).ok_or_else(overflow)?;
        m[dst][j] = m[dst][j].checked_sub(delta).ok_or_else(overflow)?;
    }
    Ok(())
}

fn sub_col(m: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let delta = row[src].checked_mul(q).ok_or_else(overflow)?;
        row[dst] = row[dst].checked_sub(delta).ok_or_else(overflow)?;
    }
    Ok(())
}

/// Nonzero invariant factors (positive, in divisibility order) of an integer
/// matrix with `cols` columns.
pub fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Result<Vec<i128>> {
    let rows = m.len();
    for row in &m {
        if row.len() != cols {
            return Err(Error::Precondition("ragged relation matrix".into()));
        }
    }
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / m[t][t];
                sub_row(&mut m, i, t, q)?;
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / m[t][t];
                sub_col(&mut m, j, t, q)?;
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                } else if best.1 != t {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let p = m[t][t];
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match offender {
                Some(i) => sub_row(&mut m, t, i, -1)?,
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi1::parse_presentation;
    use proptest::prelude::*;

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    fn det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Invariant factors via determinantal divisors: d_k is the gcd of all
    /// k×k minors and the k-th factor is d_k / d_{k-1}.
    fn factors_by_minors(m: &[Vec<i128>], cols: usize) -> Vec<i128> {
        let rows = m.len();
        let mut out = Vec::new();
        let mut prev = 1;
        for k in 1..=rows.min(cols) {
            let mut d = 0;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                    d = gcd(d, det(&sub));
                }
            }
            if d == 0 {
                break;
            }
            out.push(d / prev);
            prev = d;
        }
        out
    }

    #[test]
    fn basic_groups() {
        let z2 = abelianization(&parse_presentation("gens: a\nrel: a a\n").unwrap()).unwrap();
        assert_eq!(z2, AbelianInvariants { free_rank: 0, torsion: vec![2] });
        assert_eq!(z2.to_string(), "Z/2");
        let free = abelianization(&parse_presentation("gens: a, b\nrel: a b a^-1 b^-1\n").unwrap()).unwrap();
        assert_eq!(free, AbelianInvariants::free(2));
        assert_eq!(free.to_string(), "Z^2");
        let trivial = abelianization(&Presentation::trivial()).unwrap();
        assert_eq!(trivial.to_string(), "0");
    }

    #[test]
    fn divisor_chain() {
        // Z/4 ⊕ Z/6 = Z/2 ⊕ Z/12
        let inv = AbelianInvariants::from_relation_matrix(&[vec![4, 0], vec![0, 6]], 2).unwrap();
        assert_eq!(inv.torsion, vec![2, 12]);
        let sum = AbelianInvariants { free_rank: 1, torsion: vec![3] }
            .direct_sum(&AbelianInvariants { free_rank: 0, torsion: vec![2] })
            .unwrap();
        assert_eq!(sum, AbelianInvariants { free_rank: 1, torsion: vec![6] });
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX;
        let rows = vec![vec![big, big - 1, 3], vec![big - 2, big, 5], vec![7, big - 3, big]];
        match AbelianInvariants::from_relation_matrix(&rows, 3) {
            Ok(inv) => assert!(inv.free_rank <= 3),
            Err(e) => assert!(matches!(e, Error::Overflow(_))),
        }
    }

    proptest! {
        #[test]
        fn smith_matches_determinantal_divisors(
            rows in 1usize..5, cols in 1usize..5,
            entries in proptest::collection::vec(-6i64..7, 16)
        ) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect()).collect();
            let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let diag = smith_diagonal(wide.clone(), cols).unwrap();
            prop_assert_eq!(diag, factors_by_minors(&wide, cols));
        }

        #[test]
        fn invariant_under_row_and_column_permutation(
            entries in proptest::collection::vec(-4i64..5, 12), shift in 0usize..4
        ) {
            let m: Vec<Vec<i64>> = (0..3).map(|i| (0..4).map(|j| entries[i * 4 + j]).collect()).collect();
            let permuted: Vec<Vec<i64>> = (0..3)
                .map(|i| (0..4).map(|j| m[(i + 1) % 3][(j + shift) % 4]).collect())
                .collect();
            prop_assert_eq!(
                AbelianInvariants::from_relation_matrix(&m, 4).unwrap(),
                AbelianInvariants::from_relation_matrix(&permuted, 4).unwrap()
            );
        }
    }
}
