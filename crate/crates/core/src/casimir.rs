//! Quadratic and cubic Casimir elements and the operator `A`.
//!
//! Every construction comes with its centrality residuals `[e_k, C]`
//! computed in `U(g)`; an element is reported central only when all of
//! them straighten to zero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liesuper::{add_scaled, SuperAlgebra, Vector};
use crate::linalg::Matrix;
use crate::scalars::{sign, Rat};
use crate::uea::{PbwAlgebra, PbwElement};

/// PBW algebra for `g`, using the root order when a splitter is available.
pub fn pbw_for(g: &SuperAlgebra) -> Result<PbwAlgebra> {
    match PbwAlgebra::new(g) {
        Ok(u) => Ok(u),
        Err(Error::MissingSplitter) => PbwAlgebra::in_basis_order(g),
        Err(e) => Err(e),
    }
}

fn require_form(g: &SuperAlgebra, odd: bool) -> Result<Matrix> {
    let form = g.form().ok_or_else(|| Error::MissingForm(g.name().to_string()))?;
    if form.odd != odd {
        return Err(Error::FormParityMismatch {
            expected: if odd { "odd" } else { "even" },
            found: form.parity_name(),
        });
    }
    g.gram_inverse()
}

/// `[e_k, c]` for every basis vector, in parallel.
pub fn centrality_residuals(u: &PbwAlgebra, c: &PbwElement) -> Vec<PbwElement> {
    (0..u.algebra().dim())
        .into_par_iter()
        .map(|k| u.commutator(&u.generator(k), c))
        .collect()
}

#[derive(Debug)]
pub struct QuadraticCasimir {
    /// Inverse Gram matrix.
    pub b: Matrix,
    /// Whether `Σ b_ji eᵢeⱼ` was used instead of `Σ b_ij eᵢeⱼ`.
    pub transposed: bool,
    pub element: PbwElement,
    pub residuals: Vec<PbwElement>,
}

impl QuadraticCasimir {
    pub fn is_central(&self) -> bool {
        self.residuals.iter().all(PbwElement::is_zero)
    }

    /// Nonzero entries `(i, j, coefficient of eᵢ⊗eⱼ)`.
    pub fn tensor(&self) -> Vec<(usize, usize, Rat)> {
        let d = self.b.len();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let c = if self.transposed { &self.b[j][i] } else { &self.b[i][j] };
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }
}

fn quadratic_element(u: &PbwAlgebra, b: &Matrix, transposed: bool) -> PbwElement {
    let d = b.len();
    let mut out = PbwElement::zero();
    for i in 0..d {
        for j in 0..d {
            let c = if transposed { &b[j][i] } else { &b[i][j] };
            if !c.is_zero() {
                out.add_scaled(&u.word(&[i, j]), c);
            }
        }
    }
    out
}

/// `Ω₀ = Σ b_ij eᵢeⱼ` for an even nondegenerate form.
///
/// If the literal index order leaves a nonzero residual, the transposed
/// coefficients are tried; the result records which one was used.
pub fn omega0_in(u: &PbwAlgebra) -> Result<QuadraticCasimir> {
    let b = require_form(u.algebra(), false)?;
    let mut first = None;
    for transposed in [false, true] {
        let element = quadratic_element(u, &b, transposed);
        let residuals = centrality_residuals(u, &element);
        let q = QuadraticCasimir {
            b: b.clone(),
            transposed,
            element,
            residuals,
        };
        if q.is_central() {
            return Ok(q);
        }
        first.get_or_insert(q);
    }
    Ok(first.expect("at least one attempt"))
}

pub fn omega0(g: &SuperAlgebra) -> Result<QuadraticCasimir> {
    omega0_in(&pbw_for(g)?)
}

/// Triples `(i, j, k)` violating `Σ_l (b_lj c_kl^i + (-1)^{pᵢp_k} b_il c_kl^j) = 0`.
pub fn b_identity_violations(g: &SuperAlgebra, b: &Matrix) -> Vec<(usize, usize, usize)> {
    let d = g.dim();
    (0..d)
        .into_par_iter()
        .flat_map_iter(|k| {
            // t[i][j] accumulates the sum for this k
            let mut t = vec![vec![Rat::zero(); d]; d];
            for l in 0..d {
                for (m, c) in g.bracket(k, l) {
                    for j in 0..d {
                        if !b[l][j].is_zero() {
                            t[*m][j] += c * &b[l][j];
                        }
                    }
                    for i in 0..d {
                        if !b[i][l].is_zero() {
                            t[i][*m] += g.sign_rule(i, k) * c * &b[i][l];
                        }
                    }
                }
            }
            let mut bad = Vec::new();
            for (i, row) in t.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
            bad
        })
        .collect()
}

/// `A x = Σ b_ij [[x, eᵢ], eⱼ]`.
pub fn a_apply(g: &SuperAlgebra, b: &Matrix, x: &Vector) -> Vector {
    let d = g.dim();
    let mut out = Vector::new();
    for (i, row) in b.iter().enumerate() {
        let xi = ad_right(g, x, i);
        if xi.is_empty() {
            continue;
        }
        for j in 0..d {
            if b[i][j].is_zero() {
                continue;
            }
            for (k, c) in ad_right(g, &xi, j) {
                add_scaled(&mut out, k, c * &row[j]);
            }
        }
    }
    out
}

/// `[x, eⱼ]`.
fn ad_right(g: &SuperAlgebra, x: &Vector, j: usize) -> Vector {
    let mut out = Vector::new();
    for (i, a) in x {
        for (k, c) in g.bracket(*i, j) {
            add_scaled(&mut out, *k, a * c);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct AMapReport {
    /// Column `j` holds the coordinates of `A eⱼ`.
    pub matrix: Matrix,
    pub scalar: bool,
    pub lambda: Option<Rat>,
}

impl AMapReport {
    /// `A eⱼ` as a sparse vector.
    pub fn image(&self, j: usize) -> Vector {
        self.matrix
            .iter()
            .enumerate()
            .filter(|(_, row)| !row[j].is_zero())
            .map(|(i, row)| (i, row[j].clone()))
            .collect()
    }
}

pub fn a_map(g: &SuperAlgebra) -> Result<AMapReport> {
    let b = require_form(g, false)?;
    let d = g.dim();
    let mut matrix = vec![vec![Rat::zero(); d]; d];
    let cols: Vec<Vector> = (0..d).into_par_iter().map(|j| a_apply(g, &b, &SuperAlgebra::unit(j))).collect();
    for (j, col) in cols.into_iter().enumerate() {
        for (i, c) in col {
            matrix[i][j] = c;
        }
    }
    let lambda = if d == 0 { Some(Rat::zero()) } else { Some(matrix[0][0].clone()) };
    let scalar = (0..d).all(|i| (0..d).all(|j| if i == j { Some(&matrix[i][j]) == lambda.as_ref() } else { matrix[i][j].is_zero() }));
    Ok(AMapReport {
        matrix,
        scalar,
        lambda: if scalar { lambda } else { None },
    })
}

/// `λ` with `A = λ·id`, or [`Error::NonScalarA`].
pub fn a_scalar(g: &SuperAlgebra) -> Result<Rat> {
    a_map(g)?.lambda.ok_or(Error::NonScalarA)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub pairs_checked: usize,
    /// `(k, j)` with `[e_k, A eⱼ] ≠ A[e_k, eⱼ]`.
    pub violations: Vec<(usize, usize)>,
}

impl CommutationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn ad_commutes_with_a(g: &SuperAlgebra) -> Result<CommutationReport> {
    let b = require_form(g, false)?;
    let d = g.dim();
    let a_cols: Vec<Vector> = (0..d).into_par_iter().map(|j| a_apply(g, &b, &SuperAlgebra::unit(j))).collect();
    let apply_a = |x: &Vector| {
        let mut out = Vector::new();
        for (j, c) in x {
            for (i, v) in &a_cols[*j] {
                add_scaled(&mut out, *i, c * v);
            }
        }
        out
    };
    let violations: Vec<(usize, usize)> = (0..d)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut bad = Vec::new();
            for j in 0..d {
                let lhs = g.ad_basis(k, &a_cols[j]);
                let rhs = apply_a(&g.ad_basis(k, &SuperAlgebra::unit(j)));
                if lhs != rhs {
                    bad.push((k, j));
                }
            }
            bad
        })
        .collect();
    Ok(CommutationReport {
        pairs_checked: d * d,
        violations,
    })
}

#[derive(Debug)]
pub struct CubicCasimir {
    /// `F(k, l, m)`, nonzero entries only.
    pub f: BTreeMap<(usize, usize, usize), Rat>,
    pub element: PbwElement,
    pub residuals: Vec<PbwElement>,
    /// Triples where `F(k,l,m) = (-1)^{p_k p_l} F(l,k,m) = (-1)^{p_l p_m} F(k,m,l)` fails.
    pub symmetry_violations: Vec<(usize, usize, usize)>,
}

impl CubicCasimir {
    pub fn is_central(&self) -> bool {
        self.residuals.iter().all(PbwElement::is_zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.element.degree()
    }
}

/// `F(k,l,m) = Σ_{i,j} (-1)^{p_l} c_ij^k b_im b_jl`.
pub fn cubic_coefficients(g: &SuperAlgebra, b: &Matrix) -> BTreeMap<(usize, usize, usize), Rat> {
    let d = g.dim();
    let mut f = BTreeMap::new();
    for i in 0..d {
        for j in 0..d {
            for (k, c) in g.bracket(i, j) {
                for m in 0..d {
                    if b[i][m].is_zero() {
                        continue;
                    }
                    for l in 0..d {
                        if b[j][l].is_zero() {
                            continue;
                        }
                        let v = sign(g.parity(l)) * c * &b[i][m] * &b[j][l];
                        let e = f.entry((*k, l, m)).or_insert_with(Rat::zero);
                        *e += v;
                    }
                }
            }
        }
    }
    f.retain(|_, v: &mut Rat| !v.is_zero());
    f
}

fn f_symmetry_violations(g: &SuperAlgebra, f: &BTreeMap<(usize, usize, usize), Rat>) -> Vec<(usize, usize, usize)> {
    let get = |t: (usize, usize, usize)| f.get(&t).cloned().unwrap_or_else(Rat::zero);
    let d = g.dim();
    let mut bad = Vec::new();
    for k in 0..d {
        for l in 0..d {
            for m in 0..d {
                let v = get((k, l, m));
                let swap_kl = g.sign_rule(k, l) * get((l, k, m));
                let swap_lm = g.sign_rule(l, m) * get((k, m, l));
                if v != swap_kl || v != swap_lm {
                    bad.push((k, l, m));
                }
            }
        }
    }
    bad
}

/// `C₃ = Σ F(k,l,m) e_k e_l e_m` for an odd nondegenerate form.
pub fn c3_in(u: &PbwAlgebra) -> Result<CubicCasimir> {
    let g = u.algebra();
    let b = require_form(g, true)?;
    let f = cubic_coefficients(g, &b);
    let mut element = PbwElement::zero();
    for ((k, l, m), c) in &f {
        element.add_scaled(&u.word(&[*k, *l, *m]), c);
    }
    let residuals = centrality_residuals(u, &element);
    let symmetry_violations = f_symmetry_violations(g, &f);
    Ok(CubicCasimir {
        f,
        element,
        residuals,
        symmetry_violations,
    })
}

pub fn c3(g: &SuperAlgebra) -> Result<CubicCasimir> {
    c3_in(&pbw_for(g)?)
}

/// Whether `A` is `λ·id` on each block of a basis partition, with the
/// per-block scalars.
pub fn blockwise_scalars(report: &AMapReport, blocks: &[Vec<usize>]) -> Option<Vec<Rat>> {
    let d = report.matrix.len();
    let mut out = Vec::new();
    for block in blocks {
        let lambda = block.first().map(|&i| report.matrix[i][i].clone()).unwrap_or_else(Rat::one);
        for &j in block {
            for i in 0..d {
                let expect = if i == j { lambda.clone() } else { Rat::zero() };
                if report.matrix[i][j] != expect {
                    return None;
                }
            }
        }
        out.push(lambda);
    }
    Some(out)
}
