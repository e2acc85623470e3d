use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{fmt_coeff_prefix, parse_rat, CartanPoly, Rat};
use crate::error::{Error, Result};

/// An affine form `Σ cᵢ hᵢ + c₀` in named Cartan generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coefficients: BTreeMap<String, Rat>,
    constant: Rat,
}

impl LinearForm {
    pub fn new(coefficients: impl IntoIterator<Item = (String, Rat)>, constant: Rat) -> Result<Self> {
        let coefficients: BTreeMap<String, Rat> = coefficients
            .into_iter()
            .fold(BTreeMap::new(), |mut m, (k, v)| {
                *m.entry(k).or_insert_with(Rat::zero) += v;
                m
            })
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if coefficients.is_empty() && constant.is_zero() {
            return Err(Error::InvalidInput("linear form must be nonzero".into()));
        }
        Ok(LinearForm {
            coefficients,
            constant,
        })
    }

    /// `name + constant`.
    pub fn var_plus(name: &str, constant: Rat) -> Self {
        LinearForm::new([(name.to_string(), Rat::one())], constant).unwrap()
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rat> {
        &self.coefficients
    }

    pub fn constant(&self) -> &Rat {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn to_poly<S: AsRef<str>>(&self, vars: &[S]) -> CartanPoly {
        let mut p = CartanPoly::constant(vars, self.constant.clone());
        for (name, c) in &self.coefficients {
            p = &p + &CartanPoly::var(vars, name).scale(c);
        }
        p
    }

    /// Rescales so the first nonzero coefficient is 1; used to dedupe
    /// candidates that differ by a scalar.
    pub fn normalized(&self) -> LinearForm {
        let lead = self
            .coefficients
            .values()
            .next()
            .cloned()
            .unwrap_or_else(|| self.constant.clone());
        LinearForm {
            coefficients: self.coefficients.iter().map(|(k, v)| (k.clone(), v / &lead)).collect(),
            constant: &self.constant / &lead,
        }
    }

    /// Parses forms such as `h1 - 1/2`, `h01 + h10 - 2`, `2*h0`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        let mut constant = Rat::zero();
        for (neg, term) in split_signed_terms(s)? {
            let (c, name) = match term.rsplit_once('*') {
                Some((c, n)) => (parse_rat(c)?, Some(n.trim().to_string())),
                None => match parse_rat(&term) {
                    Ok(c) => (c, None),
                    Err(_) => (Rat::one(), Some(term.trim().to_string())),
                },
            };
            let c = if neg { -c } else { c };
            match name {
                Some(n) if !n.is_empty() && n.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '.' || ch == '\'') => {
                    coeffs.push((n, c))
                }
                Some(n) => return Err(Error::Parse(format!("bad generator name `{n}` in `{s}`"))),
                None => constant += c,
            }
        }
        LinearForm::new(coeffs, constant)
    }
}

/// Splits `a - b + c` into `(negated, term)` pairs. A sign directly after
/// `*`, `^` or `/` belongs to the term.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !matches!(prev, Some('*') | Some('^') | Some('/')) {
            if cur.trim().is_empty() {
                if prev.is_some() {
                    return Err(Error::Parse(format!("dangling sign in `{s}`")));
                }
            } else {
                out.push((neg, cur.trim().to_string()));
                cur.clear();
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("empty term in `{s}`")));
    }
    out.push((neg, cur.trim().to_string()));
    Ok(out)
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (name, c) in &self.coefficients {
            fmt_coeff_prefix(c, first, &mut out, true);
            out.push_str(name);
            first = false;
        }
        if !self.constant.is_zero() || first {
            if first {
                out.push_str(&self.constant.to_string());
            } else {
                out.push_str(if self.constant.is_negative() { " - " } else { " + " });
                out.push_str(&self.constant.abs().to_string());
            }
        }
        f.write_str(&out)
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
