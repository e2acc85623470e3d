//! Algebra-spec files (JSON or TOML).
//!
//! A spec names a family (`family = "poi(0|4)"`, or `family = "sl"` with
//! `params = { m = 2, n = 1 }`) or gives a custom table with
//! `family = "custom"`. Rationals are written as `"p/q"` strings or plain
//! integers. Optional fields override the builder defaults.
//!
//! ```toml
//! family = "custom"
//! basis = [{ label = "e", parity = "even" }, { label = "h", parity = "even" }, { label = "f", parity = "even" }]
//! brackets = [{ left = "h", right = "e", result = { e = "2" } }]
//! cartan = ["h"]
//! splitter_H = { h = "1" }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{build, Family, Form, Grading, Lattice, SuperAlgebra, Vector, Weight};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{int, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Str(String),
}

impl RatLit {
    fn value(&self) -> Result<Rat> {
        match self {
            RatLit::Int(n) => Ok(int(*n)),
            RatLit::Str(s) => parse_rat(s),
        }
    }

    fn of(r: &Rat) -> RatLit {
        if r.is_integer() {
            if let Ok(n) = r.to_integer().to_string().parse::<i64>() {
                return RatLit::Int(n);
            }
        }
        RatLit::Str(r.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub parity: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, RatLit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub parity: String,
    /// `[left, right, value]`; unlisted entries are zero.
    pub entries: Vec<(String, String, RatLit)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingSpec {
    pub r: u32,
    pub classes: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<BasisEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<BracketEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormSpec>,
    /// Cartan basis labels; custom tables only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<String>>,
    /// Diagonally acting Cartan labels; defaults to all even Cartan vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<Vec<String>>,
    #[serde(default, rename = "splitter_H", skip_serializing_if = "Option::is_none")]
    pub splitter_h: Option<BTreeMap<String, RatLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingSpec>,
    /// Named weights, each given by its values on torus labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<BTreeMap<String, BTreeMap<String, RatLit>>>,
}

fn parity_of(s: &str) -> Result<bool> {
    match s {
        "even" | "0" => Ok(false),
        "odd" | "1" => Ok(true),
        _ => Err(Error::Parse(format!("parity must be `even` or `odd`, got `{s}`"))),
    }
}

fn parity_name(odd: bool) -> String {
    if odd { "odd" } else { "even" }.to_string()
}

impl AlgebraSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    fn family_string(&self) -> String {
        match &self.params {
            Some(Params { m: Some(m), n: Some(n) }) => format!("{}({m}|{n})", self.family),
            Some(Params { m: Some(m), n: None }) | Some(Params { m: None, n: Some(m) }) => {
                format!("{}({m})", self.family)
            }
            _ => self.family.clone(),
        }
    }

    pub fn build(&self) -> Result<SuperAlgebra> {
        let mut g = if self.family == "custom" {
            self.build_custom()?
        } else {
            let fam = Family::from_str(&self.family_string())?;
            build(&fam)?
        };
        let lookup = |g: &SuperAlgebra, l: &str| {
            g.index_of(l)
                .ok_or_else(|| Error::InvalidInput(format!("unknown basis label `{l}`")))
        };
        if let Some(t) = &self.torus {
            let idx = t.iter().map(|l| lookup(&g, l)).collect::<Result<Vec<_>>>()?;
            g = g.with_torus(idx)?;
        }
        if let Some(l) = &self.lattice {
            let mut names = Vec::new();
            let mut vectors = Vec::new();
            for (name, vals) in l {
                let mut coords = vec![Rat::from_integer(0.into()); g.torus().len()];
                for (lab, v) in vals {
                    let i = lookup(&g, lab)?;
                    let p = g
                        .torus()
                        .iter()
                        .position(|&t| t == i)
                        .ok_or_else(|| Error::InvalidInput(format!("`{lab}` is not in the torus")))?;
                    coords[p] = v.value()?;
                }
                names.push(name.clone());
                vectors.push(Weight { coords });
            }
            g = g.with_lattice(Some(Lattice { names, vectors }))?;
        }
        if let Some(h) = &self.splitter_h {
            let mut coords = vec![Rat::from_integer(0.into()); g.torus().len()];
            for (lab, v) in h {
                let i = lookup(&g, lab)?;
                let p = g
                    .torus()
                    .iter()
                    .position(|&t| t == i)
                    .ok_or_else(|| Error::InvalidInput(format!("splitter uses `{lab}` outside the torus")))?;
                coords[p] = v.value()?;
            }
            g = g.with_splitter(Some(coords))?;
        }
        if let Some(gr) = &self.grading {
            let mut classes = vec![0; g.dim()];
            for (lab, c) in &gr.classes {
                classes[lookup(&g, lab)?] = *c;
            }
            g = g.with_grading(Some(Grading { r: gr.r, classes }))?;
        }
        Ok(g)
    }

    fn build_custom(&self) -> Result<SuperAlgebra> {
        let basis = self
            .basis
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("custom algebra needs `basis`".into()))?;
        let labels: Vec<String> = basis.iter().map(|b| b.label.clone()).collect();
        let parities = basis.iter().map(|b| parity_of(&b.parity)).collect::<Result<Vec<_>>>()?;
        let idx = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::InvalidInput(format!("unknown basis label `{l}`")))
        };
        let mut brackets = Vec::new();
        for b in self.brackets.iter().flatten() {
            let mut v = Vector::new();
            for (l, c) in &b.result {
                super::add_scaled(&mut v, idx(l)?, c.value()?);
            }
            brackets.push(((idx(&b.left)?, idx(&b.right)?), v));
        }
        let mut g = SuperAlgebra::from_table("custom", labels.clone(), parities, brackets)?;
        if let Some(f) = &self.form {
            let d = labels.len();
            let mut gram = linalg::zeros(d, d);
            for (a, b, v) in &f.entries {
                gram[idx(a)?][idx(b)?] = v.value()?;
            }
            g = g.with_form(Some(Form {
                gram,
                odd: parity_of(&f.parity)?,
            }))?;
        }
        if let Some(c) = &self.cartan {
            let ids = c.iter().map(|l| idx(l)).collect::<Result<Vec<_>>>()?;
            g = g.with_cartan(ids, c.clone())?;
        }
        Ok(g)
    }

    /// Full structure-constant description of a built algebra.
    pub fn from_algebra(g: &SuperAlgebra) -> AlgebraSpec {
        let basis = (0..g.dim())
            .map(|i| BasisEntry {
                label: g.label(i).to_string(),
                parity: parity_name(g.parity(i)),
            })
            .collect();
        let mut brackets = Vec::new();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let b = g.bracket(i, j);
                if !b.is_empty() {
                    brackets.push(BracketEntry {
                        left: g.label(i).to_string(),
                        right: g.label(j).to_string(),
                        result: b.iter().map(|(k, c)| (g.label(*k).to_string(), RatLit::of(c))).collect(),
                    });
                }
            }
        }
        let form = g.form().map(|f| FormSpec {
            parity: parity_name(f.odd),
            entries: (0..g.dim())
                .flat_map(|i| (0..g.dim()).map(move |j| (i, j)))
                .filter(|&(i, j)| !f.gram[i][j].is_zero())
                .map(|(i, j)| (g.label(i).to_string(), g.label(j).to_string(), RatLit::of(&f.gram[i][j])))
                .collect(),
        });
        let torus_label = |p: usize| g.label(g.torus()[p]).to_string();
        AlgebraSpec {
            family: "custom".into(),
            params: None,
            basis: Some(basis),
            brackets: Some(brackets),
            form,
            // Custom tables name Cartan vectors by their basis labels.
            cartan: Some(g.cartan().iter().map(|&i| g.label(i).to_string()).collect()),
            torus: Some(g.torus().iter().map(|&i| g.label(i).to_string()).collect()),
            splitter_h: g.splitter().map(|h| {
                h.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(p, c)| (torus_label(p), RatLit::of(c)))
                    .collect()
            }),
            grading: g.grading().map(|gr| GradingSpec {
                r: gr.r,
                classes: (0..g.dim()).map(|i| (g.label(i).to_string(), gr.classes[i])).collect(),
            }),
            lattice: g.lattice().map(|l| {
                l.names
                    .iter()
                    .zip(&l.vectors)
                    .map(|(n, w)| {
                        (
                            n.clone(),
                            w.coords
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .map(|(p, c)| (torus_label(p), RatLit::of(c)))
                                .collect(),
                        )
                    })
                    .collect()
            }),
        }
    }
}

use num_traits::Zero;

/// Loads a spec file, choosing the format by extension.
pub fn load_spec(path: &Path) -> Result<SuperAlgebra> {
    let text = std::fs::read_to_string(path)?;
    let spec = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => AlgebraSpec::from_json(&text)?,
        Some("toml") => AlgebraSpec::from_toml(&text)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "spec file `{}` must end in .json or .toml",
                path.display()
            )))
        }
    };
    spec.build()
}

/// Interprets `s` as a family string, or as a spec-file path if it names
/// an existing file.
pub fn resolve_algebra(s: &str) -> Result<SuperAlgebra> {
    let p = Path::new(s);
    if p.is_file() {
        load_spec(p)
    } else {
        build(&Family::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::verify_algebra;

    const SL2: &str = r#"
family = "custom"
basis = [{ label = "e", parity = "even" }, { label = "h", parity = "even" }, { label = "f", parity = "even" }]
brackets = [
  { left = "h", right = "e", result = { e = 2 } },
  { left = "e", right = "h", result = { e = -2 } },
  { left = "h", right = "f", result = { f = -2 } },
  { left = "f", right = "h", result = { f = 2 } },
  { left = "e", right = "f", result = { h = "1" } },
  { left = "f", right = "e", result = { h = "-1" } },
]
cartan = ["h"]
splitter_H = { h = "1/2" }
[form]
parity = "even"
entries = [["e", "f", 1], ["f", "e", 1], ["h", "h", 2]]
"#;

    #[test]
    fn custom_toml() {
        let g = AlgebraSpec::from_toml(SL2).unwrap().build().unwrap();
        assert_eq!(g.dim(), 3);
        assert!(verify_algebra(&g).passed());
        assert!(crate::liesuper::root_decomposition(&g).is_ok());
    }

    #[test]
    fn named_family_with_params() {
        let spec = AlgebraSpec::from_json(r#"{"family": "sl", "params": {"m": 2, "n": 1}}"#).unwrap();
        assert_eq!(spec.build().unwrap().dim(), 8);
        let g = AlgebraSpec::from_json(r#"{"family": "poi(0|4)", "grading": {"r": 2, "classes": {"x1": 1}}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(g.grading().unwrap().classes[g.index_of("x1").unwrap()], 1);
    }

    #[test]
    fn round_trip_through_json() {
        let g = build(&Family::Sl(2, 1)).unwrap();
        let spec = AlgebraSpec::from_algebra(&g);
        let back = AlgebraSpec::from_json(&spec.to_json()).unwrap().build().unwrap();
        assert_eq!(back.dim(), g.dim());
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(back.bracket(i, j), g.bracket(i, j));
            }
        }
        assert_eq!(back.form(), g.form());
        assert_eq!(back.splitter(), g.splitter());
    }

    #[test]
    fn bad_inputs() {
        assert!(AlgebraSpec::from_json("{").is_err());
        let s = r#"{"family": "custom", "basis": [{"label": "x", "parity": "weird"}]}"#;
        assert!(AlgebraSpec::from_json(s).unwrap().build().is_err());
        let s = r#"{"family": "custom", "basis": [{"label": "x", "parity": "even"}],
                    "brackets": [{"left": "x", "right": "y", "result": {}}]}"#;
        assert!(AlgebraSpec::from_json(s).unwrap().build().is_err());
    }
}
