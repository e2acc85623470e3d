//! Harish-Chandra projection and weight-space enumeration.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{PbwAlgebra, PbwElement, PbwMonomial};
use crate::error::{Error, Result};
use crate::liesuper::Weight;
use crate::scalars::{CartanPoly, Rat};

/// An element of `U(𝔱)` written as `Σ_S p_S · t_S`, where `t_S` is the
/// ordered product of the odd Cartan generators in the subset `S` and
/// `p_S ∈ S(𝔱_ev)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement {
    vars: Arc<[String]>,
    num_odd: usize,
    terms: BTreeMap<u32, CartanPoly>,
}

impl CliffordElement {
    pub fn zero(vars: &[String], num_odd: usize) -> Self {
        CliffordElement {
            vars: vars.iter().cloned().collect(),
            num_odd,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: &[String], num_odd: usize, terms: impl IntoIterator<Item = (u32, CartanPoly)>) -> Self {
        let mut out = Self::zero(vars, num_odd);
        for (s, p) in terms {
            out.add(s, p.align_to(&out.vars));
        }
        out
    }

    pub fn num_odd(&self) -> usize {
        self.num_odd
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &CartanPoly)> {
        self.terms.iter().map(|(s, p)| (*s, p))
    }

    pub fn coefficient(&self, subset: u32) -> CartanPoly {
        self.terms.get(&subset).cloned().unwrap_or_else(|| CartanPoly::zero(&self.vars))
    }

    /// Coefficient of the product of all odd generators; the Berezin-type
    /// integral over `U(𝔱)`.
    pub fn top(&self) -> CartanPoly {
        let full = if self.num_odd == 0 { 0 } else { (1u32 << self.num_odd) - 1 };
        self.coefficient(full)
    }

    /// The even part, `p_∅`.
    pub fn scalar_part(&self) -> CartanPoly {
        self.coefficient(0)
    }

    fn add(&mut self, subset: u32, p: CartanPoly) {
        let e = self.terms.entry(subset).or_insert_with(|| CartanPoly::zero(&self.vars));
        *e = &*e + &p;
        if e.is_zero() {
            self.terms.remove(&subset);
        }
    }
}

impl PbwAlgebra {
    fn check_cartan_for_hc(&self) -> Result<()> {
        if self.roots.is_none() {
            return Err(Error::MissingSplitter);
        }
        let g = &self.g;
        for &a in &g.even_cartan() {
            for &b in g.cartan() {
                if !g.bracket(a, b).is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "even Cartan vector `{}` does not commute with `{}`",
                        g.label(a),
                        g.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// HC projection retaining odd Cartan factors.
    pub fn hc_clifford(&self, e: &PbwElement) -> Result<CliffordElement> {
        self.check_cartan_for_hc()?;
        let g = &self.g;
        let even = g.even_cartan();
        let odd = g.odd_cartan();
        let names = g.even_cartan_names();
        let mut out = CliffordElement::zero(&names, odd.len());
        let mut buf: BTreeMap<u32, Vec<(Vec<u32>, Rat)>> = BTreeMap::new();
        'terms: for (m, c) in e.terms() {
            let mut exps = vec![0u32; even.len()];
            let mut subset = 0u32;
            for &p in &m.0 {
                if !self.is_cartan(p) {
                    continue 'terms;
                }
                let i = self.basis_index(p);
                if let Some(k) = even.iter().position(|&x| x == i) {
                    exps[k] += 1;
                } else {
                    let k = odd.iter().position(|&x| x == i).expect("Cartan vector is even or odd");
                    subset |= 1 << k;
                }
            }
            buf.entry(subset).or_default().push((exps, c.clone()));
        }
        for (s, terms) in buf {
            out.add(s, CartanPoly::from_terms(&names, terms));
        }
        Ok(out)
    }

    /// HC projection into `S(𝔱_ev)`, dropping monomials with odd Cartan factors.
    pub fn hc_even(&self, e: &PbwElement) -> Result<CartanPoly> {
        Ok(self.hc_clifford(e)?.scalar_part())
    }

    /// HC projection for algebras whose Cartan subalgebra is purely even.
    pub fn hc_project(&self, e: &PbwElement) -> Result<CartanPoly> {
        if !self.g.odd_cartan().is_empty() {
            return Err(Error::OddCartan);
        }
        self.hc_even(e)
    }

    /// The PBW element of a Clifford element.
    pub fn clifford_to_pbw(&self, c: &CliffordElement) -> PbwElement {
        let g = &self.g;
        let even = g.even_cartan();
        let odd = g.odd_cartan();
        let mut out = PbwElement::zero();
        for (s, p) in c.terms() {
            let mut odd_part = PbwElement::one();
            for (k, &i) in odd.iter().enumerate().rev() {
                if s & (1 << k) != 0 {
                    odd_part = self.gen_times(self.position(i), &odd_part);
                }
            }
            for (exps, coef) in p.terms() {
                let mut mono = odd_part.clone();
                for (k, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        mono = self.gen_times(self.position(even[k]), &mono);
                    }
                }
                out.add_scaled(&mono, coef);
            }
        }
        out
    }

    pub fn clifford_mul(&self, a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
        let p = self.mul(&self.clifford_to_pbw(a), &self.clifford_to_pbw(b));
        self.hc_clifford(&p)
    }

    /// PBW monomials in negative root vectors of total weight `-χ`, in
    /// canonical order. Empty when `χ` is not a sum of positive roots.
    pub fn weight_basis(&self, chi: &Weight) -> Result<Vec<PbwMonomial>> {
        const LIMIT: usize = 5_000_000;
        let rd = self.roots.as_ref().ok_or(Error::MissingSplitter)?;
        let h = self.g.splitter().ok_or(Error::MissingSplitter)?;
        let gens: Vec<(u32, Weight, Rat, bool)> = self
            .negative_positions()
            .map(|p| {
                let i = self.basis_index(p);
                (p, rd.weight_of(i).clone(), rd.value_of(i).clone(), self.position_parity(p))
            })
            .collect();
        let target = -chi;
        let target_value = target.pair(h);
        let mut out = Vec::new();
        if target_value.is_positive() {
            return Ok(out);
        }
        struct Ctx<'a> {
            gens: &'a [(u32, Weight, Rat, bool)],
            out: &'a mut Vec<PbwMonomial>,
            overflow: bool,
        }
        fn rec(ctx: &mut Ctx, start: usize, rem: &Weight, rem_value: &Rat, cur: &mut Vec<u32>) {
            if ctx.overflow {
                return;
            }
            if rem_value.is_zero() {
                if rem.is_zero() {
                    ctx.out.push(PbwMonomial(cur.clone()));
                    if ctx.out.len() > LIMIT {
                        ctx.overflow = true;
                    }
                }
                return;
            }
            for k in start..ctx.gens.len() {
                let (p, w, v, odd) = &ctx.gens[k];
                if v < rem_value {
                    continue;
                }
                let max_mult = if *odd { 1 } else { (rem_value / v).to_integer().try_into().unwrap_or(u32::MAX) };
                let mut r = rem.clone();
                let mut rv = rem_value.clone();
                for _ in 0..max_mult {
                    r = &r - w;
                    rv -= v;
                    cur.push(*p);
                    rec(ctx, k + 1, &r, &rv, cur);
                }
                for _ in 0..max_mult {
                    cur.pop();
                }
            }
        }
        let mut ctx = Ctx {
            gens: &gens,
            out: &mut out,
            overflow: false,
        };
        rec(&mut ctx, 0, &target, &target_value, &mut Vec::new());
        if ctx.overflow {
            return Err(Error::InfinitePartitions(format!("more than {LIMIT} monomials")));
        }
        out.sort();
        Ok(out)
    }
}

/// `K(χ)`, the number of weight-basis monomials.
pub fn weight_basis_count(u: &PbwAlgebra, chi: &Weight) -> Result<usize> {
    Ok(u.weight_basis(chi)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::{build, Family};
    use crate::scalars::int;
    use std::str::FromStr;

    fn pbw(s: &str) -> PbwAlgebra {
        PbwAlgebra::new(&build(&Family::from_str(s).unwrap()).unwrap()).unwrap()
    }

    fn chi(u: &PbwAlgebra, s: &str) -> Weight {
        let g = u.algebra();
        g.lattice().unwrap().parse_weight(s, g.torus().len()).unwrap()
    }

    #[test]
    fn sl2_hc() {
        let u = pbw("sl(2)");
        let g = u.algebra();
        let (e, f, h) = (g.index_of("E12").unwrap(), g.index_of("E21").unwrap(), g.index_of("h1").unwrap());
        assert_eq!(u.hc_project(&u.word(&[e, f])).unwrap().to_string(), "h1");
        let x = u.word(&[h, h]).add(&u.word(&[f, e]));
        assert_eq!(u.hc_project(&x).unwrap().to_string(), "h1^2");
        assert_eq!(u.hc_project(&PbwElement::one()).unwrap().to_string(), "1");
    }

    #[test]
    fn hc_multiplicative_on_cartan() {
        let u = pbw("sl(3)");
        let g = u.algebra();
        let (h1, h2) = (g.index_of("h1").unwrap(), g.index_of("h2").unwrap());
        let a = u.word(&[h1, h2]).add(&u.word(&[h1]));
        let b = u.word(&[h2, h2]).sub(&PbwElement::scalar(int(3)));
        let lhs = u.hc_project(&u.mul(&a, &b)).unwrap();
        let rhs = &u.hc_project(&a).unwrap() * &u.hc_project(&b).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_bases() {
        let u = pbw("sl(2)");
        let b = u.weight_basis(&chi(&u, "3a")).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(u.format_monomial(&b[0]), "E21^3");
        assert_eq!(u.weight_basis(&chi(&u, "0")).unwrap(), vec![PbwMonomial::one()]);
        assert!(u.weight_basis(&chi(&u, "-a")).unwrap().is_empty());
        let u = pbw("poi(0|3)");
        let b = u.weight_basis(&chi(&u, "e1")).unwrap();
        let names: Vec<String> = b.iter().map(|m| u.format_monomial(m)).collect();
        assert_eq!(names.len(), 2);
        assert!(names.contains(&"e1".to_string()) && names.contains(&"e1*th".to_string()));
    }

    #[test]
    fn odd_cartan_redirect() {
        let u = pbw("poi(0|3)");
        assert!(matches!(u.hc_project(&PbwElement::one()), Err(Error::OddCartan)));
        let th = u.algebra().index_of("th").unwrap();
        let c = u.hc_clifford(&u.generator(th)).unwrap();
        assert_eq!(c.num_odd(), 2);
        assert!(!c.coefficient(1).is_zero());
        // θθ = -1/2
        let sq = u.clifford_mul(&c, &c).unwrap();
        assert_eq!(sq.scalar_part().to_string(), "-1/2*h0");
    }
}
