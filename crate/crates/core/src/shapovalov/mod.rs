//! Shapovalov forms on `U(g⁻)` and their determinants.
//!
//! For a purely even commutative Cartan subalgebra the form is
//! `(X, Y) ↦ HC(σ(X)Y)` with values in `S(𝔱)`. With odd Cartan elements the
//! values live in a Clifford algebra and [`bsh`] integrates them down to
//! `S(𝔱_ev)`.

pub mod blocks;
pub mod bsh;
pub mod formula;
pub mod harness;
pub mod modular;

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::liesuper::Weight;
use crate::scalars::{factor_over_candidates, CartanPoly, FactorizationReport, LinearForm, Rat};
use crate::uea::{PbwAlgebra, PbwElement, PbwMonomial, SigmaMap};

pub use bsh::{bsh_gram, reorder_odd_cartan, Clifford, Vacuum};
pub use formula::{kk_formula, kk_formula_with, partition_count, partition_count_avoiding, ExponentRule, FormulaData};

/// Gram matrix of a Shapovalov-type form on the weight `−χ` slice.
#[derive(Clone, Debug)]
pub struct ShapovalovGram {
    pub chi: Weight,
    /// Row labels, in canonical order.
    pub basis: Vec<String>,
    pub vars: Vec<String>,
    pub matrix: Vec<Vec<CartanPoly>>,
}

impl ShapovalovGram {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// Exact determinant, computed block by block.
    pub fn determinant(&self) -> CartanPoly {
        let blocks = self.blocks();
        if blocks.iter().any(|b| !b.is_square()) {
            return CartanPoly::zero(&self.vars);
        }
        let mut d = CartanPoly::one(&self.vars);
        for b in &blocks {
            d = &d * &bareiss_det(&self.submatrix(b), &self.vars);
            if d.is_zero() {
                return d;
            }
        }
        if blocks::block_sign(&blocks) {
            -&d
        } else {
            d
        }
    }

    pub fn blocks(&self) -> Vec<blocks::Block> {
        blocks::components(self.size(), |i, j| !self.matrix[i][j].is_zero())
    }

    pub fn submatrix(&self, b: &blocks::Block) -> Vec<Vec<CartanPoly>> {
        b.rows
            .iter()
            .map(|&i| b.cols.iter().map(|&j| self.matrix[i][j].clone()).collect())
            .collect()
    }

    /// `matrix` with every variable replaced by a value.
    pub fn specialize(&self, values: &HashMap<String, Rat>) -> Matrix {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|p| p.eval(values).expect("all variables assigned")).collect())
            .collect()
    }
}

/// The monomials of `weight_basis`, failing with [`Error::NotAWeight`] when
/// `χ ≠ 0` has none.
pub(crate) fn weight_slice(u: &PbwAlgebra, chi: &Weight) -> Result<Vec<PbwMonomial>> {
    let basis = u.weight_basis(chi)?;
    if basis.is_empty() {
        let name = u
            .algebra()
            .lattice()
            .map(|l| l.format_weight(chi))
            .unwrap_or_else(|| chi.to_string());
        return Err(Error::NotAWeight(name));
    }
    Ok(basis)
}

/// `σ(Xᵢ)Xⱼ` straightened, for every pair.
pub(crate) fn pair_products(u: &PbwAlgebra, sigma: &SigmaMap, basis: &[PbwMonomial]) -> Vec<Vec<PbwElement>> {
    let left: Vec<PbwElement> = basis.par_iter().map(|m| sigma.apply_monomial(u, m)).collect();
    left.par_iter()
        .map(|l| {
            basis
                .iter()
                .map(|m| u.mul(l, &PbwElement::monomial(m.clone(), Rat::one())))
                .collect()
        })
        .collect()
}

/// `HC(σ(Xᵢ)Xⱼ)` over the canonical basis of `U(g⁻)(−χ)`.
pub fn gram_matrix(u: &PbwAlgebra, sigma: &SigmaMap, chi: &Weight) -> Result<ShapovalovGram> {
    if !u.algebra().odd_cartan().is_empty() {
        return Err(Error::OddCartan);
    }
    let basis = weight_slice(u, chi)?;
    let products = pair_products(u, sigma, &basis);
    let matrix = products
        .par_iter()
        .map(|row| row.iter().map(|p| u.hc_project(p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapovalovGram {
        chi: chi.clone(),
        basis: basis.iter().map(|m| u.format_monomial(m)).collect(),
        vars: u.algebra().even_cartan_names(),
        matrix,
    })
}

/// Fraction-free determinant; every division is exact.
pub fn bareiss_det(m: &[Vec<CartanPoly>], vars: &[String]) -> CartanPoly {
    let n = m.len();
    if n == 0 {
        return CartanPoly::one(vars);
    }
    let mut a: Vec<Vec<CartanPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = CartanPoly::one(vars);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return CartanPoly::zero(vars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        rest.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let v = &(&row[j] * &pivot_row[k]) - &(&row[k] * &pivot_row[j]);
                row[j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[k] = CartanPoly::zero(vars);
        });
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

pub fn shapovalov_det(gram: &ShapovalovGram, candidates: &[LinearForm]) -> FactorizationReport {
    factor_over_candidates(&gram.determinant(), candidates)
}

/// Values of the even Cartan generators, in their builder order.
pub fn valuation(u: &PbwAlgebra, values: &[Rat]) -> Result<HashMap<String, Rat>> {
    let names = u.algebra().even_cartan_names();
    if names.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} Cartan values ({}), got {}",
            names.len(),
            names.join(", "),
            values.len()
        )));
    }
    Ok(names.into_iter().zip(values.iter().cloned()).collect())
}

/// `λ − χ` as a valuation of the even Cartan generators.
pub fn shifted_valuation(u: &PbwAlgebra, lambda: &HashMap<String, Rat>, chi: &Weight) -> HashMap<String, Rat> {
    let g = u.algebra();
    let mut out = lambda.clone();
    for (k, &t) in g.torus().iter().enumerate() {
        if let Some(name) = g.cartan_name_of(t) {
            if let Some(v) = out.get_mut(name) {
                *v -= &chi.coords[k];
            }
        }
    }
    out
}

/// The action of `x ∈ U(g)` on `X·m^λ`, as coordinates over the negative
/// PBW monomials. Odd Cartan generators act by zero on the vacuum.
fn act_on_vacuum(u: &PbwAlgebra, e: &PbwElement, lambda: &HashMap<String, Rat>) -> HashMap<PbwMonomial, Rat> {
    let g = u.algebra();
    let mut out: HashMap<PbwMonomial, Rat> = HashMap::new();
    'terms: for (m, c) in e.terms() {
        let mut neg = Vec::new();
        let mut coef = c.clone();
        for &p in m.positions() {
            if u.is_negative(p) {
                neg.push(p);
            } else if u.is_cartan(p) {
                let i = u.basis_index(p);
                match g.cartan_name_of(i).and_then(|n| lambda.get(n)) {
                    Some(v) if !g.parity(i) => coef *= v,
                    _ => continue 'terms,
                }
            } else {
                continue 'terms;
            }
            if coef.is_zero() {
                continue 'terms;
            }
        }
        let e = out.entry(PbwMonomial(neg)).or_insert_with(Rat::zero);
        *e += coef;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// A basis of the singular vectors of `M^λ` of weight `λ − χ`, as
/// coefficient vectors over `weight_basis(χ)`. Empty for `χ = 0`.
pub fn find_singular_vectors(u: &PbwAlgebra, lambda: &HashMap<String, Rat>, chi: &Weight) -> Result<Vec<Vec<Rat>>> {
    if chi.is_zero() {
        return Ok(Vec::new());
    }
    let basis = u.weight_basis(chi)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let positives: Vec<u32> = u.positive_positions().collect();
    let columns: Vec<Vec<HashMap<PbwMonomial, Rat>>> = basis
        .par_iter()
        .map(|m| {
            let x = PbwElement::monomial(m.clone(), Rat::one());
            positives.iter().map(|&p| act_on_vacuum(u, &u.gen_times(p, &x), lambda)).collect()
        })
        .collect();
    // one block of rows per positive generator
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for k in 0..positives.len() {
        let mut keys: Vec<&PbwMonomial> = columns.iter().flat_map(|c| c[k].keys()).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            rows.push(columns.iter().map(|c| c[k].get(key).cloned().unwrap_or_else(Rat::zero)).collect());
        }
    }
    Ok(linalg::nullspace(&rows, basis.len()))
}

/// JSON-facing summary of one determinant computation.
#[derive(Clone, Debug, Serialize)]
pub struct DeterminantReport {
    pub algebra: String,
    pub chi: String,
    pub basis_size: usize,
    pub det: String,
    pub factorization: FactorizationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
}

/// Whether `a = c·b` for a nonzero rational `c`.
pub fn proportional(a: &CartanPoly, b: &CartanPoly) -> Option<Rat> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let vars: std::sync::Arc<[String]> = {
        let mut v: Vec<String> = a.vars().to_vec();
        for x in b.vars() {
            if !v.contains(x) {
                v.push(x.clone());
            }
        }
        v.into()
    };
    let (a, b) = (a.align_to(&vars), b.align_to(&vars));
    let (_, ca) = a.leading()?;
    let (_, cb) = b.leading()?;
    let c = ca / cb;
    (a == b.scale(&c)).then_some(c)
}
