//! The Grassmann algebra `G(m)` with left derivatives, the Berezin integral,
//! the Poisson bracket in both the `θ` and the `ξ, η (, θ)` presentations,
//! and Hamiltonian vector fields.
//!
//! Monomials are bitmasks over the canonical variable order. In the
//! `θ` presentation that is `θ₁ … θ_m`; in the `ξη` presentation it is
//! `ξ₁ η₁ ξ₂ η₂ … ξ_r η_r` followed by `θ` when `m = 2r + 1`.
//!
//! The derivative convention is "move the variable to the front, then strike
//! it". The top monomial for the Berezin integral is the product of all
//! variables in canonical order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{fmt_coeff_prefix, parse_rat, sign, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Presentation {
    /// Generators `θ₁ … θ_m` with bracket `(-1)^{p(f)} Σ ∂ⱼf ∂ⱼg`.
    Theta,
    /// Generators `ξᵢ, ηᵢ` (and `θ` when `m` is odd).
    XiEta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElement {
    num_vars: usize,
    presentation: Presentation,
    terms: BTreeMap<u32, Rat>,
}

/// Sign of `mono(a) · mono(b)` after sorting; `None` if they share a variable.
pub fn monomial_product_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut odd = false;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 31 { 0 } else { a >> (j + 1) };
        odd ^= above.count_ones() % 2 == 1;
    }
    Some(odd)
}

impl GrassmannElement {
    pub fn zero(num_vars: usize, presentation: Presentation) -> Self {
        assert!(num_vars <= 31, "at most 31 Grassmann generators are supported");
        GrassmannElement {
            num_vars,
            presentation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize, presentation: Presentation) -> Self {
        Self::monomial(num_vars, presentation, 0, Rat::one())
    }

    pub fn monomial(num_vars: usize, presentation: Presentation, mask: u32, c: Rat) -> Self {
        let mut e = Self::zero(num_vars, presentation);
        assert!(mask < (1u32 << num_vars), "monomial uses a variable beyond m");
        e.add_term(mask, c);
        e
    }

    /// Generator at canonical position `pos` (0-based).
    pub fn generator(num_vars: usize, presentation: Presentation, pos: usize) -> Self {
        Self::monomial(num_vars, presentation, 1 << pos, Rat::one())
    }

    /// `θⱼ` in the `θ` presentation (1-based).
    pub fn theta(num_vars: usize, j: usize) -> Self {
        Self::generator(num_vars, Presentation::Theta, j - 1)
    }

    /// `ξⱼ` in the `ξη` presentation (1-based).
    pub fn xi(num_vars: usize, j: usize) -> Self {
        Self::generator(num_vars, Presentation::XiEta, 2 * (j - 1))
    }

    /// `ηⱼ` in the `ξη` presentation (1-based).
    pub fn eta(num_vars: usize, j: usize) -> Self {
        Self::generator(num_vars, Presentation::XiEta, 2 * (j - 1) + 1)
    }

    /// The extra odd generator `θ` of the `ξη` presentation for odd `m`.
    pub fn odd_theta(num_vars: usize) -> Self {
        assert!(num_vars % 2 == 1, "θ exists only for odd m");
        Self::generator(num_vars, Presentation::XiEta, num_vars - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u32) -> Rat {
        self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.num_vars, self.presentation)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars || self.presentation != other.presentation {
            return Err(Error::PresentationMismatch(format!(
                "{:?}({}) vs {:?}({})",
                self.presentation, self.num_vars, other.presentation, other.num_vars
            )));
        }
        Ok(())
    }

    /// Parity if homogeneous (`Some(true)` = odd); zero counts as even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.count_ones() % 2 == 1);
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    /// Splits into `(even part, odd part)`.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = self.empty_like();
        let mut odd = self.empty_like();
        for (m, c) in &self.terms {
            if m.count_ones() % 2 == 1 {
                odd.add_term(*m, c.clone());
            } else {
                even.add_term(*m, c.clone());
            }
        }
        (even, odd)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.empty_like();
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    /// Supercommutative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.empty_like();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(odd) = monomial_product_sign(*a, *b) {
                    out.add_term(a | b, sign(odd) * x * y);
                }
            }
        }
        Ok(out)
    }

    /// Left derivative along the generator at canonical position `pos`.
    pub fn partial_at(&self, pos: usize) -> Self {
        let mut out = self.empty_like();
        let bit = 1u32 << pos;
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let before = (m & (bit - 1)).count_ones();
            out.add_term(m & !bit, sign(before % 2 == 1) * c);
        }
        out
    }

    /// Left derivative `∂/∂θⱼ` with 1-based `j` in canonical order.
    pub fn partial(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.num_vars,
            });
        }
        Ok(self.partial_at(j - 1))
    }

    /// Coefficient of the top monomial.
    pub fn berezin(&self) -> Rat {
        let top = if self.num_vars == 0 {
            0
        } else {
            (1u32 << self.num_vars) - 1
        };
        self.coefficient(top)
    }

    /// Pairs `(a, b)` of canonical positions such that the bracket is
    /// `(-1)^{p(f)} Σ ∂_a f · ∂_b g`.
    fn bracket_pairs(&self) -> Vec<(usize, usize)> {
        match self.presentation {
            Presentation::Theta => (0..self.num_vars).map(|j| (j, j)).collect(),
            Presentation::XiEta => {
                let r = self.num_vars / 2;
                let mut v = Vec::with_capacity(self.num_vars);
                for i in 0..r {
                    v.push((2 * i, 2 * i + 1));
                    v.push((2 * i + 1, 2 * i));
                }
                if self.num_vars % 2 == 1 {
                    v.push((2 * r, 2 * r));
                }
                v
            }
        }
    }

    /// Poisson bracket; inhomogeneous `f` is split by parity.
    pub fn poisson(&self, g: &Self) -> Result<Self> {
        self.check_compatible(g)?;
        let mut out = self.empty_like();
        let (f_even, f_odd) = self.split_parity();
        for (part, odd) in [(f_even, false), (f_odd, true)] {
            if part.is_zero() {
                continue;
            }
            for (a, b) in part.bracket_pairs() {
                let term = part.partial_at(a).mul(&g.partial_at(b))?;
                out = out.add(&term.scale(&sign(odd)))?;
            }
        }
        Ok(out)
    }

    /// Applies the Hamiltonian vector field `H_f` to `g`.
    pub fn hamiltonian_field(&self, g: &Self) -> Result<Self> {
        HamiltonianField::new(self)?.apply(g)
    }

    /// Canonical text form, e.g. `3*x1*e1 - 1/2*th`.
    pub fn labels(&self) -> Vec<String> {
        variable_labels(self.num_vars, self.presentation)
    }

    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str, num_vars: usize, presentation: Presentation) -> Result<Self> {
        let labels = variable_labels(num_vars, presentation);
        let mut out = Self::zero(num_vars, presentation);
        for (neg, term) in crate::scalars::split_signed_terms(s)? {
            let mut acc = Self::one(num_vars, presentation);
            for factor in term.split('*') {
                let factor = factor.trim();
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                if let Some(pos) = labels.iter().position(|l| l == name) {
                    for _ in 0..exp {
                        acc = acc.mul(&Self::generator(num_vars, presentation, pos))?;
                    }
                } else {
                    let c = parse_rat(name).map_err(|_| Error::Parse(format!("unknown generator `{name}`")))?;
                    for _ in 0..exp {
                        acc = acc.scale(&c);
                    }
                }
            }
            if neg {
                acc = acc.scale(&-Rat::one());
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Text for a single monomial, `1` for the empty one.
    pub fn monomial_label(num_vars: usize, presentation: Presentation, mask: u32) -> String {
        let labels = variable_labels(num_vars, presentation);
        if mask == 0 {
            return "1".into();
        }
        (0..num_vars)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| labels[i].clone())
            .collect::<Vec<_>>()
            .join("*")
    }
}

pub fn variable_labels(num_vars: usize, presentation: Presentation) -> Vec<String> {
    match presentation {
        Presentation::Theta => (1..=num_vars).map(|j| format!("th{j}")).collect(),
        Presentation::XiEta => {
            let r = num_vars / 2;
            let mut v = Vec::new();
            for i in 1..=r {
                v.push(format!("x{i}"));
                v.push(format!("e{i}"));
            }
            if num_vars % 2 == 1 {
                v.push("th".into());
            }
            v
        }
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (n, (m, c)) in self.terms.iter().enumerate() {
            fmt_coeff_prefix(c, n == 0, &mut out, *m != 0);
            if *m != 0 {
                out.push_str(&Self::monomial_label(self.num_vars, self.presentation, *m));
            }
        }
        f.write_str(&out)
    }
}

/// `H_f = (-1)^{p(f)} (Σ ∂f/∂ξⱼ ∂/∂ηⱼ + ∂f/∂ηⱼ ∂/∂ξⱼ + ∂f/∂θ ∂/∂θ)` as a
/// list of coefficient functions paired with derivations.
#[derive(Clone, Debug)]
pub struct HamiltonianField {
    components: Vec<(GrassmannElement, usize)>,
}

impl HamiltonianField {
    pub fn new(f: &GrassmannElement) -> Result<Self> {
        if f.presentation != Presentation::XiEta {
            return Err(Error::PresentationMismatch(
                "Hamiltonian fields are defined in the ξη presentation".into(),
            ));
        }
        let mut components = Vec::new();
        let (even, odd) = f.split_parity();
        for (part, is_odd) in [(even, false), (odd, true)] {
            if part.is_zero() {
                continue;
            }
            for (a, b) in part.bracket_pairs() {
                let c = part.partial_at(a).scale(&sign(is_odd));
                if !c.is_zero() {
                    components.push((c, b));
                }
            }
        }
        Ok(HamiltonianField { components })
    }

    pub fn apply(&self, g: &GrassmannElement) -> Result<GrassmannElement> {
        let mut out = g.empty_like();
        for (c, b) in &self.components {
            out = out.add(&c.mul(&g.partial_at(*b))?)?;
        }
        Ok(out)
    }
}
