//! The Shapovalov form for algebras whose Cartan subalgebra has odd
//! elements: `U(𝔱)` is a Clifford algebra over `S(𝔱_ev)`, and the
//! `U(𝔱)`-valued form is pushed to `S(𝔱_ev)` by taking the coefficient of
//! the product of all odd Cartan generators.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{pair_products, weight_slice, ShapovalovGram};
use crate::error::{Error, Result};
use crate::liesuper::{SuperAlgebra, Weight};
use crate::scalars::{rat, CartanPoly};
use crate::uea::{CliffordElement, PbwAlgebra, PbwMonomial, SigmaMap};

/// Multiplication in `U(𝔱)` written over the odd generators `t_a`, using
/// `t_a t_b + t_b t_a = [t_a, t_b] ∈ 𝔱_ev`.
#[derive(Clone, Debug)]
pub struct Clifford {
    vars: Vec<String>,
    n: usize,
    /// `q[a][b] = [t_a, t_b]` as a linear polynomial.
    q: Vec<Vec<CartanPoly>>,
}

impl Clifford {
    pub fn new(u: &PbwAlgebra) -> Result<Self> {
        let g = u.algebra();
        let odd = g.odd_cartan();
        let even = g.even_cartan();
        let vars = g.even_cartan_names();
        if odd.len() > 30 {
            return Err(Error::InvalidInput("too many odd Cartan generators".into()));
        }
        let mut q = vec![vec![CartanPoly::zero(&vars); odd.len()]; odd.len()];
        for (a, &i) in odd.iter().enumerate() {
            for (b, &j) in odd.iter().enumerate() {
                let mut p = CartanPoly::zero(&vars);
                for (k, c) in g.bracket(i, j) {
                    let pos = even.iter().position(|x| x == k).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "[{}, {}] leaves the even Cartan subalgebra",
                            g.label(i),
                            g.label(j)
                        ))
                    })?;
                    p = &p + &CartanPoly::var(&vars, &vars[pos]).scale(c);
                }
                q[a][b] = p;
            }
        }
        for &i in &even {
            for &j in g.cartan() {
                if !g.bracket(i, j).is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "even Cartan vector `{}` is not central in the Cartan subalgebra",
                        g.label(i)
                    )));
                }
            }
        }
        Ok(Clifford {
            vars,
            n: odd.len(),
            q,
        })
    }

    pub fn num_odd(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// `t_S · t_b` for a sorted subset `S`.
    fn subset_times_gen(&self, s: u32, b: usize, out: &mut BTreeMap<u32, CartanPoly>, coef: &CartanPoly) {
        if s == 0 {
            add(out, 1 << b, coef.clone());
            return;
        }
        let last = 31 - s.leading_zeros() as usize;
        if b > last {
            add(out, s | (1 << b), coef.clone());
            return;
        }
        let rest = s & !(1 << last);
        if b == last {
            // t_b t_b = ½[t_b, t_b]
            let c = &self.q[b][b].scale(&rat(1, 2)) * coef;
            if !c.is_zero() {
                add(out, rest, c);
            }
            return;
        }
        // t_last t_b = -t_b t_last + [t_last, t_b]
        let mut inner = BTreeMap::new();
        self.subset_times_gen(rest, b, &mut inner, &-coef);
        for (v, c) in inner {
            add(out, v | (1 << last), c);
        }
        let c = &self.q[last][b] * coef;
        if !c.is_zero() {
            add(out, rest, c);
        }
    }

    pub fn mul(&self, x: &CliffordElement, y: &CliffordElement) -> CliffordElement {
        let mut acc: BTreeMap<u32, CartanPoly> = BTreeMap::new();
        for (s, p) in x.terms() {
            for (t, r) in y.terms() {
                let pr = p * r;
                let mut cur: BTreeMap<u32, CartanPoly> = BTreeMap::new();
                cur.insert(s, pr);
                for b in 0..self.n {
                    if t & (1 << b) == 0 {
                        continue;
                    }
                    let mut next = BTreeMap::new();
                    for (v, c) in &cur {
                        self.subset_times_gen(*v, b, &mut next, c);
                    }
                    cur = next;
                }
                for (v, c) in cur {
                    add(&mut acc, v, c);
                }
            }
        }
        CliffordElement::from_terms(&self.vars, self.n, acc)
    }

    /// The basis element `t_S`.
    pub fn basis(&self, s: u32) -> CliffordElement {
        CliffordElement::from_terms(&self.vars, self.n, [(s, CartanPoly::one(&self.vars))])
    }
}

fn add(m: &mut BTreeMap<u32, CartanPoly>, k: u32, c: CartanPoly) {
    match m.get_mut(&k) {
        Some(e) => {
            *e = &*e + &c;
            if e.is_zero() {
                m.remove(&k);
            }
        }
        None => {
            if !c.is_zero() {
                m.insert(k, c);
            }
        }
    }
}

/// `g` with its odd Cartan vectors taken in the order `perm`, given as
/// indices into `g.odd_cartan()`. Even Cartan vectors keep their slots.
pub fn reorder_odd_cartan(g: &SuperAlgebra, perm: &[usize]) -> Result<SuperAlgebra> {
    let odd = g.odd_cartan();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..odd.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of the odd Cartan vectors")));
    }
    let mut next = perm.iter().map(|&k| odd[k]);
    let cartan: Vec<usize> = g
        .cartan()
        .iter()
        .map(|&c| if g.parity(c) { next.next().expect("counted") } else { c })
        .collect();
    let names = cartan
        .iter()
        .map(|&c| g.cartan_name_of(c).expect("Cartan vector").to_string())
        .collect();
    g.clone().with_cartan(cartan, names)?.with_torus(g.torus().to_vec())
}

/// Which vacuum the Verma module is induced from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vacuum {
    /// `U(g⁻)m` only: the form is `∫HC(σ(X)Y)` on `U(g⁻)(−χ)`.
    Trivial,
    /// `U(g⁻) ⊗ U(𝔱) ⊗_{U(𝔱_ev)} C(λ)`: basis `X·t_S·m`, form
    /// `∫(σ(t_S) HC(σ(X)Y) t_T)`.
    #[default]
    Full,
}

/// Gram matrix of the Clifford-valued form on the weight `−χ` slice.
pub fn bsh_gram(u: &PbwAlgebra, sigma: &SigmaMap, chi: &Weight, vacuum: Vacuum) -> Result<ShapovalovGram> {
    let cl = Clifford::new(u)?;
    let basis = weight_slice(u, chi)?;
    let products = pair_products(u, sigma, &basis);
    let hc: Vec<Vec<CliffordElement>> = products
        .par_iter()
        .map(|row| row.iter().map(|p| u.hc_clifford(p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = basis.iter().map(|m| u.format_monomial(m)).collect();
    let vars = cl.vars().to_vec();
    let (matrix, basis) = match vacuum {
        Vacuum::Trivial => (
            hc.iter().map(|row| row.iter().map(CliffordElement::top).collect()).collect(),
            labels,
        ),
        Vacuum::Full => {
            let n_sub = 1u32 << cl.num_odd();
            let odd = u.algebra().odd_cartan();
            let sigma_t: Vec<CliffordElement> = (0..n_sub)
                .map(|s| {
                    let m = PbwMonomial(
                        (0..odd.len())
                            .filter(|k| s & (1 << k) != 0)
                            .map(|k| u.position(odd[k]))
                            .collect(),
                    );
                    u.hc_clifford(&sigma.apply_monomial(u, &m))
                })
                .collect::<Result<_>>()?;
            let t: Vec<CliffordElement> = (0..n_sub).map(|s| cl.basis(s)).collect();
            let k = basis.len();
            let index: Vec<(usize, u32)> = (0..k).flat_map(|i| (0..n_sub).map(move |s| (i, s))).collect();
            let matrix = index
                .par_iter()
                .map(|&(i, s)| {
                    (0..k)
                        .flat_map(|j| {
                            let left = cl.mul(&sigma_t[s as usize], &hc[i][j]);
                            (0..n_sub).map(|tt| cl.mul(&left, &t[tt as usize]).top()).collect::<Vec<_>>()
                        })
                        .collect()
                })
                .collect();
            let names = u.algebra().cartan_names().to_vec();
            let odd_names: Vec<&str> = odd
                .iter()
                .map(|&o| {
                    let pos = u.algebra().cartan().iter().position(|&c| c == o).expect("odd Cartan");
                    names[pos].as_str()
                })
                .collect();
            let rows = index
                .iter()
                .map(|&(i, s)| {
                    let mut l = labels[i].clone();
                    for (b, name) in odd_names.iter().enumerate() {
                        if s & (1 << b) != 0 {
                            l.push('*');
                            l.push_str(name);
                        }
                    }
                    l
                })
                .collect();
            (matrix, rows)
        }
    };
    Ok(ShapovalovGram {
        chi: chi.clone(),
        basis,
        vars,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapovalov::tests::{chi, setup};

    #[test]
    fn native_clifford_matches_pbw() {
        for name in ["poi(0|3)", "q(2)", "sq(2)"] {
            let (u, _) = setup(name);
            let cl = Clifford::new(&u).unwrap();
            let n = 1u32 << cl.num_odd();
            for s in 0..n {
                for t in 0..n {
                    let a = cl.basis(s);
                    let b = cl.basis(t);
                    assert_eq!(cl.mul(&a, &b), u.clifford_mul(&a, &b).unwrap(), "{name} {s} {t}");
                }
            }
        }
    }

    #[test]
    fn single_odd_generator_is_commutative() {
        // U(𝔱) for one odd generator t: t² = ½[t, t], an ordinary commutative ring
        let (u, s) = setup("sq(2)");
        let cl = Clifford::new(&u).unwrap();
        assert_eq!(cl.num_odd(), 1);
        let t = cl.basis(1);
        assert_eq!(cl.mul(&t, &t), u.clifford_mul(&t, &t).unwrap());
        let g = bsh_gram(&u, &s, &chi(&u, "0"), Vacuum::Full).unwrap();
        assert_eq!(g.size(), 2);
    }

    #[test]
    fn trivial_vacuum_at_zero() {
        let (u, s) = setup("poi(0|3)");
        let g = bsh_gram(&u, &s, &chi(&u, "0"), Vacuum::Trivial).unwrap();
        assert_eq!(g.size(), 1);
        assert!(g.matrix[0][0].is_zero());
    }

    #[test]
    fn full_vacuum_sizes() {
        let (u, s) = setup("poi(0|3)");
        let g = bsh_gram(&u, &s, &chi(&u, "e1"), Vacuum::Full).unwrap();
        assert_eq!(g.size(), 2 * 4);
        assert!(!g.determinant().is_zero());
        // the vacuum block: superdimension 2|2
        let g0 = bsh_gram(&u, &s, &chi(&u, "0"), Vacuum::Full).unwrap();
        assert_eq!(g0.size(), 4);
    }

    #[test]
    fn odd_order_and_sigma_mode_change_sign_only() {
        let (u, s) = setup("poi(0|3)");
        let w = chi(&u, "2e1");
        let base = bsh_gram(&u, &s, &w, Vacuum::Full).unwrap().determinant();
        let g2 = reorder_odd_cartan(u.algebra(), &[1, 0]).unwrap();
        assert_ne!(g2.odd_cartan(), u.algebra().odd_cartan());
        let u2 = PbwAlgebra::new(&g2).unwrap();
        let d2 = bsh_gram(&u2, &s, &w, Vacuum::Full).unwrap().determinant();
        assert!(d2 == base || d2 == -&base);
        let r = s.with_mode(u.algebra(), crate::uea::SigmaMode::RespectSignRule).unwrap();
        let d3 = bsh_gram(&u, &r, &w, Vacuum::Full).unwrap().determinant();
        assert!(d3 == base || d3 == -&base);
        assert!(reorder_odd_cartan(u.algebra(), &[0, 0]).is_err());
    }
}
