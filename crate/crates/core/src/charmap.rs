//! Characteristic maps `facets -> Z₂³ \ {0}`.

use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;

/// An element of Z₂³ encoded in the low three bits (bit i = coordinate eᵢ₊₁).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf2Vec(u8);

impl Gf2Vec {
    pub const ZERO: Gf2Vec = Gf2Vec(0);
    pub const E1: Gf2Vec = Gf2Vec(1);
    pub const E2: Gf2Vec = Gf2Vec(2);
    pub const E3: Gf2Vec = Gf2Vec(4);
    pub const E123: Gf2Vec = Gf2Vec(7);

    pub fn new(bits: u8) -> Result<Self> {
        if bits > 7 {
            return Err(Error::InvalidCharMap(format!("{bits} is not an element of Z2^3")));
        }
        Ok(Gf2Vec(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All eight elements in numeric order.
    pub fn all() -> impl Iterator<Item = Gf2Vec> {
        (0..8).map(Gf2Vec)
    }

    /// Value of the functional with coefficient mask `phi` (dot product mod 2).
    pub fn pair(self, phi: u8) -> bool {
        (self.0 & phi).count_ones() % 2 == 1
    }
}

impl BitXor for Gf2Vec {
    type Output = Gf2Vec;

    fn bitxor(self, rhs: Gf2Vec) -> Gf2Vec {
        Gf2Vec(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Gf2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The subgroup of Z₂³ spanned by `gens`, as a bitmask over the 8 elements.
pub fn span(gens: &[Gf2Vec]) -> u8 {
    let mut set: u8 = 1; // {0}
    for &g in gens {
        let mut next = set;
        for x in 0..8u8 {
            if set & (1 << x) != 0 {
                next |= 1 << (x ^ g.0);
            }
        }
        set = next;
    }
    set
}

/// Minimal element of the coset `g + H`, where `subgroup` is a bitmask as
/// returned by [`span`]. This is the canonical label of the coset.
pub fn coset_label(g: Gf2Vec, subgroup: u8) -> Gf2Vec {
    (0..8u8)
        .filter(|&h| subgroup & (1 << h) != 0)
        .map(|h| Gf2Vec(g.0 ^ h))
        .min()
        .expect("subgroup contains 0")
}

/// Canonical labels of all cosets of `subgroup`, ascending.
pub fn coset_labels(subgroup: u8) -> Vec<Gf2Vec> {
    let mut labels: Vec<Gf2Vec> = Gf2Vec::all().map(|g| coset_label(g, subgroup)).collect();
    labels.sort_unstable();
    labels.dedup();
    labels
}

/// On-disk form: `{"colors": [c0, c1, ...]}` with entries in 1..=7.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharMapFile {
    pub colors: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharMap {
    colors: Vec<Gf2Vec>,
}

/// A violated characteristic-map condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroColor { facet: usize },
    Degenerate { vertex: usize, facets: [usize; 3] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroColor { facet } => write!(f, "facet {facet} has color 0"),
            Violation::Degenerate { vertex, facets } => {
                write!(f, "vertex {vertex}: colors of facets {facets:?} are linearly dependent")
            }
        }
    }
}

impl CharMap {
    /// Wraps colors without validation; see [`validate_charmap`].
    pub fn new(colors: Vec<Gf2Vec>) -> Self {
        CharMap { colors }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Ok(CharMap { colors: bits.iter().map(|&b| Gf2Vec::new(b)).collect::<Result<_>>()? })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CharMapFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        CharMap::from_bits(&file.colors)
    }

    pub fn to_file(&self) -> CharMapFile {
        CharMapFile { colors: self.colors.iter().map(|c| c.0).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("charmap serializes")
    }

    pub fn colors(&self) -> &[Gf2Vec] {
        &self.colors
    }

    pub fn color(&self, facet: usize) -> Gf2Vec {
        self.colors[facet]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Post-composition with a linear map of Z₂³ given by the images of
    /// e₁, e₂, e₃.
    pub fn map_linear(&self, images: [Gf2Vec; 3]) -> CharMap {
        let apply = |v: Gf2Vec| {
            (0..3).filter(|i| v.0 & (1 << i) != 0).fold(Gf2Vec::ZERO, |acc, i| acc ^ images[i])
        };
        CharMap { colors: self.colors.iter().map(|&c| apply(c)).collect() }
    }

    /// Extends a map over `p` to `p.truncate_vertex(v)`: old facets keep
    /// their colors and the new triangle gets the sum of the three colors at
    /// `v`. For a proper coloring by [`ORIENTABLE_PALETTE`] that sum is the
    /// fourth palette color.
    pub fn extend_to_truncation(&self, p: &Polytope, v: usize) -> Result<CharMap> {
        check_len(p, self)?;
        if v >= p.vertex_count() {
            return Err(Error::OutOfRange { what: "vertex", id: v, len: p.vertex_count() });
        }
        let [a, b, c] = p.vertex_facets(v).map(|f| self.colors[f]);
        let mut colors = self.colors.clone();
        colors.push(a ^ b ^ c);
        Ok(CharMap { colors })
    }
}

fn check_len(p: &Polytope, map: &CharMap) -> Result<()> {
    if map.len() != p.facet_count() {
        return Err(Error::InvalidCharMap(format!(
            "{} colors for {} facets",
            map.len(),
            p.facet_count()
        )));
    }
    Ok(())
}

/// Checks every characteristic-map condition, listing all violations.
/// A length mismatch is an error rather than a violation.
pub fn validate_charmap(p: &Polytope, map: &CharMap) -> Result<Vec<Violation>> {
    check_len(p, map)?;
    let mut out = Vec::new();
    for (facet, c) in map.colors.iter().enumerate() {
        if c.is_zero() {
            out.push(Violation::ZeroColor { facet });
        }
    }
    for vertex in 0..p.vertex_count() {
        let facets = p.vertex_facets(vertex);
        let [a, b, c] = facets.map(|f| map.colors[f]);
        if span(&[a, b, c]).count_ones() != 8 {
            out.push(Violation::Degenerate { vertex, facets });
        }
    }
    Ok(out)
}

/// Validates and turns violations into an error.
pub fn ensure_valid(p: &Polytope, map: &CharMap) -> Result<()> {
    let violations = validate_charmap(p, map)?;
    if let Some(v) = violations.first() {
        let more = if violations.len() > 1 { format!(" (and {} more)", violations.len() - 1) } else { String::new() };
        return Err(Error::InvalidCharMap(format!("{v}{more}")));
    }
    Ok(())
}

/// A nonzero functional taking the value 1 on every facet color, if any.
pub fn orientation_functional(p: &Polytope, map: &CharMap) -> Result<Option<u8>> {
    ensure_valid(p, map)?;
    Ok((1..8u8).find(|&phi| map.colors.iter().all(|c| c.pair(phi))))
}

pub fn is_orientable(p: &Polytope, map: &CharMap) -> Result<bool> {
    Ok(orientation_functional(p, map)?.is_some())
}

/// Colors used for orientable covers: any three of them form a basis.
pub const ORIENTABLE_PALETTE: [Gf2Vec; 4] = [Gf2Vec::E1, Gf2Vec::E2, Gf2Vec::E3, Gf2Vec::E123];

/// Colors used for linear models.
pub const LINEAR_PALETTE: [Gf2Vec; 3] = [Gf2Vec::E1, Gf2Vec::E2, Gf2Vec::E3];

/// Proper facet colorings with the given palette, by backtracking over facets
/// in id order with colors tried in palette order. With `up_to_relabeling`
/// only colorings in which colors first appear in palette order are produced,
/// i.e. one per orbit under permutations of the palette.
pub fn proper_colorings(p: &Polytope, palette: &[Gf2Vec], up_to_relabeling: bool, limit: usize) -> Vec<CharMap> {
    let mut out = Vec::new();
    let mut colors = vec![usize::MAX; p.facet_count()];
    let neighbours: Vec<Vec<usize>> = (0..p.facet_count()).map(|f| p.adjacent_facets(f)).collect();
    color_rec(&neighbours, palette.len(), up_to_relabeling, 0, 0, &mut colors, &mut out, limit);
    out.into_iter()
        .map(|idx: Vec<usize>| CharMap { colors: idx.into_iter().map(|i| palette[i]).collect() })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn color_rec(
    neighbours: &[Vec<usize>],
    k: usize,
    canonical: bool,
    facet: usize,
    used: usize,
    colors: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if facet == neighbours.len() {
        out.push(colors.clone());
        return;
    }
    let max = if canonical { (used + 1).min(k) } else { k };
    for c in 0..max {
        if neighbours[facet].iter().any(|&g| colors[g] == c) {
            continue;
        }
        colors[facet] = c;
        color_rec(neighbours, k, canonical, facet + 1, used.max(c + 1), colors, out, limit);
        colors[facet] = usize::MAX;
        if out.len() >= limit {
            return;
        }
    }
}

/// First proper coloring by `{e₁, e₂, e₃, e₁+e₂+e₃}`; always a valid,
/// orientable characteristic map.
pub fn find_orientable_coloring(p: &Polytope) -> Option<CharMap> {
    proper_colorings(p, &ORIENTABLE_PALETTE, false, 1).pop()
}

/// First proper 3-coloring by `{e₁, e₂, e₃}` (the linear model), if the
/// polytope admits one.
pub fn find_linear_coloring(p: &Polytope) -> Option<CharMap> {
    proper_colorings(p, &LINEAR_PALETTE, false, 1).pop()
}

/// Every facet is an even polygon (equivalently, a 3-coloring exists).
pub fn is_linear_model_polytope(p: &Polytope) -> bool {
    p.facets().iter().all(|f| f.len() % 2 == 0)
}

/// The map induced on facet `f`: for each edge of `f` in cycle order, the
/// class of the neighbouring facet's color in Z₂³/⟨λ(f)⟩, labelled by its
/// minimal element.
pub fn induced_map(p: &Polytope, map: &CharMap, f: usize) -> Result<Vec<Gf2Vec>> {
    ensure_valid(p, map)?;
    if f >= p.facet_count() {
        return Err(Error::OutOfRange { what: "facet", id: f, len: p.facet_count() });
    }
    let sub = span(&[map.colors[f]]);
    Ok(p.adjacent_facets(f).into_iter().map(|g| coset_label(map.colors[g], sub)).collect())
}

/// Closed surface type: orientable of genus `g`, or nonorientable with `g`
/// crosscaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub orientable: bool,
    pub genus: usize,
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "S_{}", self.genus)
        } else {
            write!(f, "N_{}", self.genus)
        }
    }
}

/// Type of the face surface over facet `f`: a `2g+2`-gon with a 2-valued
/// induced map gives `S_g`; any other `n`-gon gives `N_{n-2}`.
pub fn face_surface_type(p: &Polytope, map: &CharMap, f: usize) -> Result<SurfaceType> {
    let induced = induced_map(p, map, f)?;
    let gon = induced.len();
    let mut values = induced.clone();
    values.sort_unstable();
    values.dedup();
    if gon % 2 == 0 && values.len() == 2 {
        Ok(SurfaceType { orientable: true, genus: (gon - 2) / 2 })
    } else {
        Ok(SurfaceType { orientable: false, genus: gon - 2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[u8]) -> CharMap {
        CharMap::from_bits(v).unwrap()
    }

    /// The three images of e₁, e₂, e₃ for all 168 elements of GL(3, Z₂).
    fn gl3() -> Vec<[Gf2Vec; 3]> {
        let mut out = Vec::new();
        for a in 1..8 {
            for b in 1..8 {
                for c in 1..8 {
                    let imgs = [Gf2Vec(a), Gf2Vec(b), Gf2Vec(c)];
                    if span(&imgs).count_ones() == 8 {
                        out.push(imgs);
                    }
                }
            }
        }
        out
    }

    /// Orientability by searching for a basis on which every color has odd
    /// coordinate sum.
    fn orientable_by_basis(map: &CharMap) -> bool {
        gl3().into_iter().any(|basis| {
            // Coordinates of x in `basis`: find the combination equal to x.
            map.colors().iter().all(|&x| {
                let coords = (0..8u8)
                    .find(|&m| {
                        (0..3).filter(|i| m & (1 << i) != 0).fold(Gf2Vec::ZERO, |acc, i| acc ^ basis[i]) == x
                    })
                    .unwrap();
                coords.count_ones() % 2 == 1
            })
        })
    }

    #[test]
    fn cosets() {
        let g = span(&[Gf2Vec::E1, Gf2Vec::E2]);
        assert_eq!(g.count_ones(), 4);
        assert_eq!(coset_labels(g), vec![Gf2Vec(0), Gf2Vec(4)]);
        let h = span(&[Gf2Vec::E123]);
        assert_eq!(coset_labels(h), vec![Gf2Vec(0), Gf2Vec(1), Gf2Vec(2), Gf2Vec(3)]);
        assert_eq!(coset_label(Gf2Vec(6), h), Gf2Vec(1));
    }

    #[test]
    fn validation_examples() {
        let s = Polytope::simplex();
        assert!(validate_charmap(&s, &bits(&[1, 2, 4, 7])).unwrap().is_empty());
        let bad = validate_charmap(&s, &bits(&[1, 2, 4, 1])).unwrap();
        // Facets 0 and 3 meet at vertices 1 and 2 (vertex i is missing from facet i).
        let vertices: Vec<usize> = bad
            .iter()
            .map(|v| match v {
                Violation::Degenerate { vertex, .. } => *vertex,
                other => panic!("{other}"),
            })
            .collect();
        assert_eq!(vertices, vec![1, 2]);
        assert!(validate_charmap(&Polytope::cube(), &bits(&[1, 2, 4, 1, 2, 4])).unwrap().is_empty());
        assert!(validate_charmap(&s, &bits(&[1, 2, 4])).is_err());
        assert!(CharMap::from_bits(&[9]).is_err());
        let zero = validate_charmap(&s, &bits(&[0, 2, 4, 7])).unwrap();
        assert!(zero.contains(&Violation::ZeroColor { facet: 0 }));
    }

    #[test]
    fn orientability_examples() {
        assert_eq!(orientation_functional(&Polytope::simplex(), &bits(&[1, 2, 4, 7])).unwrap(), Some(7));
        assert!(is_orientable(&Polytope::cube(), &bits(&[1, 2, 4, 1, 2, 4])).unwrap());
        // Triangles e₁, squares e₂, e₃, e₂+e₃.
        let prism = Polytope::prism(3).unwrap();
        assert!(!is_orientable(&prism, &bits(&[1, 1, 2, 4, 6])).unwrap());
        assert!(is_orientable(&prism, &bits(&[1, 1, 2, 4, 7])).unwrap());
    }

    #[test]
    fn functional_test_agrees_with_basis_search() {
        let p = Polytope::prism(3).unwrap();
        let mut checked = 0;
        for code in 0..7u32.pow(5) {
            let colors: Vec<u8> = (0..5).map(|i| (code / 7u32.pow(i) % 7 + 1) as u8).collect();
            let m = bits(&colors);
            if ensure_valid(&p, &m).is_ok() {
                assert_eq!(is_orientable(&p, &m).unwrap(), orientable_by_basis(&m), "{colors:?}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn orientability_is_gl3_invariant() {
        let cube = Polytope::cube();
        let maps = [bits(&[1, 2, 4, 1, 2, 4]), bits(&[1, 2, 4, 3, 2, 4]), bits(&[1, 2, 4, 7, 2, 4])];
        for m in &maps {
            let base = is_orientable(&cube, m).unwrap();
            for g in gl3() {
                assert_eq!(is_orientable(&cube, &m.map_linear(g)).unwrap(), base);
            }
        }
        assert_eq!(gl3().len(), 168);
    }

    #[test]
    fn coloring_search() {
        let s = Polytope::simplex();
        let c = find_orientable_coloring(&s).unwrap();
        assert_eq!(c, bits(&[1, 2, 4, 7]));
        assert!(is_orientable(&s, &c).unwrap());
        // Unique up to permutation of the palette.
        assert_eq!(proper_colorings(&s, &ORIENTABLE_PALETTE, true, usize::MAX).len(), 1);

        for p in [Polytope::cube(), Polytope::dodecahedron(), Polytope::permutohedron()] {
            let c = find_orientable_coloring(&p).unwrap();
            assert!(validate_charmap(&p, &c).unwrap().is_empty());
            assert!(is_orientable(&p, &c).unwrap());
        }
        assert_eq!(find_orientable_coloring(&Polytope::cube()).unwrap(), bits(&[1, 2, 4, 1, 2, 4]));
    }

    #[test]
    fn linear_models() {
        assert!(is_linear_model_polytope(&Polytope::cube()));
        assert!(is_linear_model_polytope(&Polytope::permutohedron()));
        assert!(!is_linear_model_polytope(&Polytope::dodecahedron()));
        assert!(find_linear_coloring(&Polytope::permutohedron()).is_some());
        assert!(find_linear_coloring(&Polytope::dodecahedron()).is_none());
    }

    #[test]
    fn induced_maps() {
        let s = Polytope::simplex();
        let m = bits(&[1, 2, 4, 7]);
        let mut img = induced_map(&s, &m, 3).unwrap();
        img.sort_unstable();
        assert_eq!(img, vec![Gf2Vec(1), Gf2Vec(2), Gf2Vec(3)]);

        let cube = Polytope::cube();
        let cm = bits(&[1, 2, 4, 1, 2, 4]);
        for f in 0..6 {
            let mut v = induced_map(&cube, &cm, f).unwrap();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 2);
        }
        assert!(induced_map(&s, &m, 4).is_err());
    }

    #[test]
    fn surface_types() {
        let s = Polytope::simplex();
        let m = bits(&[1, 2, 4, 7]);
        for f in 0..4 {
            assert_eq!(face_surface_type(&s, &m, f).unwrap(), SurfaceType { orientable: false, genus: 1 });
        }
        let cube = Polytope::cube();
        let cm = bits(&[1, 2, 4, 1, 2, 4]);
        for f in 0..6 {
            assert_eq!(face_surface_type(&cube, &cm, f).unwrap(), SurfaceType { orientable: true, genus: 1 });
        }
    }

    #[test]
    fn truncation_extension() {
        let s = Polytope::simplex();
        let m = bits(&[1, 2, 4, 7]);
        let t = s.truncate_vertex(0).unwrap();
        let tm = m.extend_to_truncation(&s, 0).unwrap();
        // Vertex 0 lies in facets 1, 2, 3 (colors 2, 4, 7), so the triangle gets 1.
        assert_eq!(tm.color(4), Gf2Vec(1));
        assert!(ensure_valid(&t, &tm).is_ok());
        assert!(is_orientable(&t, &tm).unwrap());
    }
}
