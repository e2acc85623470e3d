use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use super::SuperAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::{parse_rat, split_signed_terms, Rat};

/// A weight, as its values on the torus generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Rat>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> Weight {
        Weight {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// `⟨self, H⟩` for a splitter given on the same torus.
    pub fn pair(&self, h: &[Rat]) -> Rat {
        self.coords.iter().zip(h).map(|(a, b)| a * b).sum()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

/// Named weights used to read and print weight literals such as `2*e1 - e2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub names: Vec<String>,
    pub vectors: Vec<Weight>,
}

impl Lattice {
    pub fn vector(&self, name: &str) -> Option<&Weight> {
        self.names.iter().position(|n| n == name).map(|i| &self.vectors[i])
    }

    /// Parses `k1*e1 + k2*e2`; the `*` may be omitted (`2a`).
    pub fn parse_weight(&self, s: &str, rank: usize) -> Result<Weight> {
        let mut w = Weight::zero(rank);
        if s.trim() == "0" {
            return Ok(w);
        }
        for (neg, term) in split_signed_terms(s)? {
            let split = term
                .char_indices()
                .find(|(_, c)| c.is_alphabetic())
                .map(|(i, _)| i)
                .ok_or_else(|| Error::Parse(format!("weight term `{term}` has no lattice name")))?;
            let (coef, name) = term.split_at(split);
            let coef = coef.trim().trim_end_matches('*').trim();
            let mut c = if coef.is_empty() { Rat::from_integer(1.into()) } else { parse_rat(coef)? };
            if neg {
                c = -c;
            }
            let v = self
                .vector(name.trim())
                .ok_or_else(|| Error::Parse(format!("unknown lattice name `{name}`; known: {}", self.names.join(", "))))?;
            w = &w + &v.scale(&c);
        }
        Ok(w)
    }

    /// Coordinates over the lattice names, if the weight lies in their span.
    /// Aliases (repeated vectors) are skipped.
    pub fn express(&self, w: &Weight) -> Option<Vec<(String, Rat)>> {
        let mut names = Vec::new();
        let mut cols: Vec<&Weight> = Vec::new();
        for (n, v) in self.names.iter().zip(&self.vectors) {
            if !cols.contains(&v) {
                names.push(n.clone());
                cols.push(v);
            }
        }
        let a: Matrix = linalg::transpose(&cols.iter().map(|v| v.coords.clone()).collect());
        let a = if a.is_empty() { vec![Vec::new(); w.coords.len()] } else { a };
        let x = linalg::solve(&a, &w.coords)?;
        Some(names.into_iter().zip(x).collect())
    }

    pub fn format_weight(&self, w: &Weight) -> String {
        match self.express(w) {
            Some(c) => {
                let mut out = String::new();
                let mut first = true;
                for (n, x) in c.iter().filter(|(_, x)| !x.is_zero()) {
                    crate::scalars::fmt_coeff_prefix(x, first, &mut out, true);
                    out.push_str(n);
                    first = false;
                }
                if first {
                    out.push('0');
                }
                out
            }
            None => format!("{w}"),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub weight: Weight,
    /// Basis vectors spanning the root space.
    pub indices: Vec<usize>,
    /// `α(H)`.
    pub value: Rat,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }
}

/// Roots sorted by decreasing `α(H)`, plus per-basis-vector lookups.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub roots: Vec<Root>,
    pub cartan: Vec<usize>,
    weights: Vec<Weight>,
    values: Vec<Rat>,
}

impl RootDatum {
    pub fn weight_of(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn value_of(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    pub fn positives(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn negatives(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| !r.is_positive())
    }

    pub fn positive_vectors(&self) -> Vec<usize> {
        self.positives().flat_map(|r| r.indices.iter().copied()).collect()
    }

    pub fn negative_vectors(&self) -> Vec<usize> {
        self.negatives().flat_map(|r| r.indices.iter().copied()).collect()
    }

    pub fn root(&self, w: &Weight) -> Option<&Root> {
        self.roots.iter().find(|r| &r.weight == w)
    }
}

/// Root space decomposition with respect to the torus, split by the sign
/// of `α(H)`.
pub fn root_decomposition(g: &SuperAlgebra) -> Result<RootDatum> {
    let h = g.splitter().ok_or(Error::MissingSplitter)?;
    let d = g.dim();
    let mut weights = Vec::with_capacity(d);
    for j in 0..d {
        let mut coords = Vec::with_capacity(g.torus().len());
        for &t in g.torus() {
            let br = g.bracket(t, j);
            let diag = match br {
                [] => Rat::zero(),
                [(k, c)] if *k == j => c.clone(),
                _ => {
                    return Err(Error::NonDiagonalAction {
                        cartan: g.label(t).to_string(),
                        vector: g.label(j).to_string(),
                    })
                }
            };
            coords.push(diag);
        }
        weights.push(Weight { coords });
    }
    let values: Vec<Rat> = weights.iter().map(|w| w.pair(h)).collect();
    let mut roots: Vec<Root> = Vec::new();
    for j in 0..d {
        let in_cartan = g.cartan().contains(&j);
        let zero = weights[j].is_zero();
        if zero != in_cartan {
            return Err(Error::CartanNotWeightZero(g.label(j).to_string()));
        }
        if zero {
            continue;
        }
        if values[j].is_zero() {
            return Err(Error::ZeroOnRoot(g.label(j).to_string()));
        }
        match roots.iter_mut().find(|r| r.weight == weights[j]) {
            Some(r) => r.indices.push(j),
            None => roots.push(Root {
                weight: weights[j].clone(),
                indices: vec![j],
                value: values[j].clone(),
            }),
        }
    }
    roots.sort_by(|a, b| b.value.cmp(&a.value).then_with(|| a.weight.cmp(&b.weight)));
    Ok(RootDatum {
        roots,
        cartan: g.cartan().to_vec(),
        weights,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::{build, Family};
    use crate::scalars::int;
    use std::str::FromStr;

    fn fam(s: &str) -> SuperAlgebra {
        build(&Family::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn sl2_roots() {
        let g = fam("sl(2)");
        let rd = root_decomposition(&g).unwrap();
        assert_eq!(rd.roots.len(), 2);
        assert_eq!(rd.positives().count(), 1);
        let pos = rd.positives().next().unwrap();
        assert_eq!(pos.indices, vec![g.index_of("E12").unwrap()]);
    }

    #[test]
    fn poi05_positive_system() {
        let g = fam("poi(0|5)");
        let rd = root_decomposition(&g).unwrap();
        let l = g.lattice().unwrap();
        let mut pos: Vec<String> = rd.positives().map(|r| l.format_weight(&r.weight)).collect();
        pos.sort();
        assert_eq!(pos, vec!["e1", "e1 + e2", "e1 - e2", "e2"]);
        let dims: usize = rd.roots.iter().map(|r| r.indices.len()).sum();
        assert_eq!(dims + g.cartan().len(), g.dim());
    }

    #[test]
    fn poi03_positive_system() {
        let g = fam("poi(0|3)");
        let rd = root_decomposition(&g).unwrap();
        let l = g.lattice().unwrap();
        let pos: Vec<String> = rd.positives().map(|r| l.format_weight(&r.weight)).collect();
        assert_eq!(pos, vec!["e1"]);
        assert_eq!(rd.positives().next().unwrap().indices.len(), 2);
    }

    #[test]
    fn weight_literals() {
        let g = fam("sl(3)");
        let l = g.lattice().unwrap();
        let w = l.parse_weight("2*a1 + a2", 2).unwrap();
        assert_eq!(l.format_weight(&w), "2*a1 + a2");
        let g2 = fam("sl(2)");
        let w2 = g2.lattice().unwrap().parse_weight("2a", 1).unwrap();
        assert_eq!(w2.coords, vec![int(4)]);
        assert!(l.parse_weight("2*zz", 2).is_err());
    }

    #[test]
    fn errors() {
        let g = fam("sl(2)").with_splitter(None).unwrap();
        assert!(matches!(root_decomposition(&g), Err(Error::MissingSplitter)));
        let g = fam("sl(2)").with_splitter(Some(vec![int(0)])).unwrap();
        assert!(matches!(root_decomposition(&g), Err(Error::ZeroOnRoot(_))));
        // ξ₁η₁ξ₂η₂ is not semisimple on poi(0|4).
        let g = fam("poi(0|4)");
        let bad_torus = g.even_cartan();
        let g = g.with_torus(bad_torus).unwrap();
        let g = g.with_splitter(Some(vec![int(1), int(2), int(3), int(4)])).unwrap();
        assert!(matches!(root_decomposition(&g), Err(Error::NonDiagonalAction { .. })));
    }
}
