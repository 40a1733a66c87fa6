//! Reading inputs: files or stdin (`-`), holding a polytope, a bundle, or a
//! presentation.

use std::fs;
use std::io::Read;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use smallcover::charmap::{ensure_valid, CharMap, CharMapFile};
use smallcover::morse::{default_order, OrderFile, VertexOrder};
use smallcover::pi1::{parse_presentation, Presentation};
use smallcover::polytope::PolytopeFile;
use smallcover::Polytope;

/// A polytope together with an optional coloring and order. Serialized as
/// `{"polytope": {...}, "colors": [...], "order": [...]}`; a bundle is also a
/// valid coloring file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleFile {
    pub polytope: PolytopeFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
}

pub fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

pub enum Loaded {
    Bundle { polytope: Polytope, colors: Option<CharMap>, order: Option<Vec<usize>> },
    Presentation(Presentation),
}

pub fn load(path: &str) -> Result<Loaded> {
    let text = read_text(path)?;
    let Ok(value) = serde_json::from_str::<Value>(&text) else {
        let pres = parse_presentation(&text).with_context(|| format!("{path}: neither JSON nor a presentation"))?;
        return Ok(Loaded::Presentation(pres));
    };
    if value.get("vertex_count").is_some() {
        return Ok(Loaded::Bundle { polytope: Polytope::from_json(&text)?, colors: None, order: None });
    }
    if value.get("polytope").is_some() {
        let bundle: BundleFile = serde_json::from_value(value).with_context(|| format!("{path}: malformed bundle"))?;
        let polytope = Polytope::new(bundle.polytope.vertex_count, bundle.polytope.facets)?;
        let colors = bundle.colors.map(|c| CharMap::from_bits(&c)).transpose()?;
        return Ok(Loaded::Bundle { polytope, colors, order: bundle.order });
    }
    bail!("{path}: expected a polytope or a bundle")
}

/// Polytope, coloring and order for the commands that need a cover.
pub struct Instance {
    pub polytope: Polytope,
    pub colors: Option<CharMap>,
    order: Option<Vec<usize>>,
}

impl Instance {
    pub fn load(path: &str, colors: Option<&str>, order: Option<&str>) -> Result<Self> {
        Self::from_loaded(load(path)?, path, colors, order)
    }

    /// Like `load`, for input that was already read (stdin can only be read once).
    pub fn from_loaded(loaded: Loaded, path: &str, colors: Option<&str>, order: Option<&str>) -> Result<Self> {
        let Loaded::Bundle { polytope, colors: mut c, order: mut o } = loaded else {
            bail!("{path}: expected a polytope, got a presentation");
        };
        if let Some(f) = colors {
            let file: CharMapFile =
                serde_json::from_str(&read_text(f)?).with_context(|| format!("{f}: malformed coloring"))?;
            c = Some(CharMap::from_bits(&file.colors)?);
        }
        if let Some(f) = order {
            let file: OrderFile =
                serde_json::from_str(&read_text(f)?).with_context(|| format!("{f}: malformed order"))?;
            o = Some(file.rank);
        }
        Ok(Instance { polytope, colors: c, order: o })
    }

    /// The validated coloring; required.
    pub fn charmap(&self) -> Result<&CharMap> {
        let map = self.colors.as_ref().context("a coloring is required (--colors or a bundle with colors)")?;
        ensure_valid(&self.polytope, map)?;
        Ok(map)
    }

    /// The given order, or the default one.
    pub fn order(&self) -> Result<VertexOrder> {
        Ok(match &self.order {
            Some(rank) => VertexOrder::new(&self.polytope, rank.clone())?,
            None => default_order(&self.polytope)?,
        })
    }

    pub fn explicit_order(&self) -> Option<&[usize]> {
        self.order.as_deref()
    }

    pub fn bundle(&self, order: Option<&VertexOrder>) -> BundleFile {
        BundleFile {
            polytope: self.polytope.to_file(),
            colors: self.colors.as_ref().map(|m| m.colors().iter().map(|c| c.bits()).collect()),
            order: order.map(|o| o.ranks().to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cube.json");
        let p = Polytope::cube();
        let inst = Instance { polytope: p.clone(), colors: Some(CharMap::from_bits(&[1, 2, 4, 1, 2, 4]).unwrap()), order: None };
        fs::write(&path, serde_json::to_string(&inst.bundle(None)).unwrap()).unwrap();
        let back = Instance::load(path.to_str().unwrap(), None, None).unwrap();
        assert_eq!(back.polytope, p);
        assert!(back.charmap().is_ok());
        assert!(back.explicit_order().is_none());
    }

    #[test]
    fn presentation_text_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rp3.txt");
        fs::write(&path, "gens: a\nrel: a a\n").unwrap();
        assert!(matches!(load(path.to_str().unwrap()).unwrap(), Loaded::Presentation(_)));
    }
}
