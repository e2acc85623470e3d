use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{fmt_coeff_prefix, Rat};

/// Multivariate polynomial over the rationals in named commuting generators.
///
/// Exponent vectors are dense over `vars`. Operations between polynomials
/// with different variable lists align by name; the result carries the union
/// (left operand's order first).
#[derive(Clone, Debug)]
pub struct CartanPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl CartanPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        CartanPoly {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The generator `name`; it is appended to `vars` if missing.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Self {
        let mut names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let idx = match names.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        };
        let mut e = vec![0; names.len()];
        e[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        CartanPoly {
            vars: names.into(),
            terms,
        }
    }

    /// Builds from raw terms; zero coefficients are dropped.
    pub fn from_terms<S: AsRef<str>>(vars: &[S], terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in one variable (0 if absent).
    pub fn degree_in(&self, name: &str) -> u32 {
        match self.vars.iter().position(|v| v == name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Leading term in lexicographic order of exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses `self` over `target`, which must contain every variable
    /// used with a nonzero exponent.
    pub fn align_to(&self, target: &Arc<[String]>) -> CartanPoly {
        if Arc::ptr_eq(&self.vars, target) || *self.vars == **target {
            return CartanPoly {
                vars: target.clone(),
                terms: self.terms.clone(),
            };
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let j = map[i].unwrap_or_else(|| panic!("variable `{}` missing from target list", self.vars[i]));
                ne[j] = x;
            }
            terms.insert(ne, c.clone());
        }
        CartanPoly {
            vars: target.clone(),
            terms,
        }
    }

    fn common_vars(&self, other: &CartanPoly) -> Arc<[String]> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            return self.vars.clone();
        }
        let mut v: Vec<String> = self.vars.to_vec();
        for name in other.vars.iter() {
            if !v.contains(name) {
                v.push(name.clone());
            }
        }
        if v.len() == self.vars.len() {
            self.vars.clone()
        } else {
            v.into()
        }
    }

    fn aligned(&self, other: &CartanPoly) -> (CartanPoly, CartanPoly) {
        let vars = self.common_vars(other);
        (self.align_to(&vars), other.align_to(&vars))
    }

    pub fn scale(&self, c: &Rat) -> CartanPoly {
        if c.is_zero() {
            return CartanPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        CartanPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CartanPoly {
        let mut acc = CartanPoly::one(&self.vars);
        acc.vars = self.vars.clone();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at the given values; `None` if a used variable is unassigned.
    pub fn eval(&self, values: &HashMap<String, Rat>) -> Option<Rat> {
        let vals: Vec<Option<&Rat>> = self.vars.iter().map(|v| values.get(v)).collect();
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    let v = vals[i]?;
                    for _ in 0..x {
                        t *= v;
                    }
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitutes values for some variables, keeping the rest symbolic.
    pub fn partial_eval(&self, values: &HashMap<String, Rat>) -> CartanPoly {
        let mut out = CartanPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut ne = e.clone();
            for (i, x) in ne.iter_mut().enumerate() {
                if let Some(v) = values.get(&self.vars[i]) {
                    for _ in 0..*x {
                        t *= v;
                    }
                    *x = 0;
                }
            }
            out.add_term(ne, t);
        }
        out
    }

    fn mul_term(&self, e: &[u32], c: &Rat) -> BTreeMap<Vec<u32>, Rat> {
        self.terms
            .iter()
            .map(|(f, x)| (f.iter().zip(e).map(|(a, b)| a + b).collect(), x * c))
            .collect()
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &CartanPoly) -> Option<CartanPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (mut rem, d) = self.aligned(divisor);
        let mut q = CartanPoly {
            vars: rem.vars.clone(),
            terms: BTreeMap::new(),
        };
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        while let Some((lm, lc)) = rem.leading() {
            if lm.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = lm.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let c = lc / &dc;
            for (m, x) in d.mul_term(&e, &c) {
                rem.add_term(m, -x);
            }
            q.add_term(e, c);
        }
        Some(q)
    }

    /// Drops variables that occur in no term.
    pub fn compact(&self) -> CartanPoly {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self.clone();
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter().zip(&used).filter(|(_, &u)| u).map(|(x, _)| *x).collect(),
                    c.clone(),
                )
            })
            .collect();
        CartanPoly {
            vars: vars.into(),
            terms,
        }
    }
}

impl PartialEq for CartanPoly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for CartanPoly {}

impl<'a> Add<&'a CartanPoly> for &'a CartanPoly {
    type Output = CartanPoly;
    fn add(self, rhs: &CartanPoly) -> CartanPoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a> Sub<&'a CartanPoly> for &'a CartanPoly {
    type Output = CartanPoly;
    fn sub(self, rhs: &CartanPoly) -> CartanPoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl<'a> Mul<&'a CartanPoly> for &'a CartanPoly {
    type Output = CartanPoly;
    fn mul(self, rhs: &CartanPoly) -> CartanPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = CartanPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &a.terms {
            for (f, d) in &b.terms {
                out.add_term(e.iter().zip(f).map(|(x, y)| x + y).collect(), c * d);
            }
        }
        out
    }
}

impl Neg for &CartanPoly {
    type Output = CartanPoly;
    fn neg(self) -> CartanPoly {
        CartanPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for CartanPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut body = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => body.push(self.vars[i].clone()),
                    _ => body.push(format!("{}^{}", self.vars[i], x)),
                }
            }
            fmt_coeff_prefix(c, n == 0, &mut out, !body.is_empty());
            out.push_str(&body.join("*"));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn h() -> CartanPoly {
        CartanPoly::var(&["h"], "h")
    }

    #[test]
    fn doubling() {
        let p = &h() + &h();
        assert_eq!(p, h().scale(&int(2)));
        assert_eq!(p.to_string(), "2*h");
    }

    #[test]
    fn difference_of_squares() {
        let one = CartanPoly::one(&["h"]);
        let p = &(&h() + &one) * &(&h() - &one);
        assert_eq!(p.to_string(), "h^2 - 1");
    }

    #[test]
    fn annihilator() {
        let z = CartanPoly::zero(&["h"]);
        let p = &(&h() * &h()) + &CartanPoly::constant(&["h"], rat(1, 3));
        assert!((&z * &p).is_zero());
    }

    #[test]
    fn alignment_by_name() {
        let a = CartanPoly::var(&["h1", "h2"], "h2");
        let b = CartanPoly::var(&["h2", "h3"], "h3");
        let s = &a + &b;
        assert_eq!(s.vars(), &["h1".to_string(), "h2".into(), "h3".into()]);
        assert_eq!(s, &b + &a);
        assert_eq!(s.to_string(), "h2 + h3");
    }

    #[test]
    fn exact_division() {
        let one = CartanPoly::one(&["h"]);
        let p = &(&h() * &h()) - &h();
        assert_eq!(p.div_exact(&h()).unwrap(), &h() - &one);
        let q = &(&h() * &h()) + &one;
        assert!(q.div_exact(&h()).is_none());
    }

    #[test]
    fn evaluation() {
        let p = &(&h() * &h()) - &CartanPoly::constant(&["h"], int(2));
        let mut v = HashMap::new();
        v.insert("h".to_string(), rat(1, 2));
        assert_eq!(p.eval(&v).unwrap(), rat(-7, 4));
        assert!(p.eval(&HashMap::new()).is_none());
    }
}
