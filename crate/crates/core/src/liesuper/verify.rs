use num_traits::Zero;
use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use super::{add_scaled, SuperAlgebra, Vector};
use crate::scalars::sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Anticommutativity,
    ParityHomogeneity,
    Jacobi,
    FormSupersymmetry,
    FormParity,
    FormInvariance,
    GradingBracket,
    GradingForm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Witnessing basis indices (0-based).
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub algebra: String,
    pub dim: usize,
    /// `true` when every triple was checked, `false` when sampled.
    pub exhaustive: bool,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Above this dimension, triple checks are sampled instead of exhaustive.
pub const EXHAUSTIVE_DIM: usize = 64;
const SAMPLED_TRIPLES: usize = 200_000;

fn jacobi_residual(g: &SuperAlgebra, i: usize, j: usize, k: usize) -> Vector {
    // [x,[y,z]] - [[x,y],z] - (-1)^{p_x p_y} [y,[x,z]]
    let mut out = Vector::new();
    for (m, c) in g.bracket(j, k) {
        for (n, d) in g.bracket(i, *m) {
            add_scaled(&mut out, *n, c * d);
        }
    }
    for (m, c) in g.bracket(i, j) {
        for (n, d) in g.bracket(*m, k) {
            add_scaled(&mut out, *n, -(c * d));
        }
    }
    let s = g.sign_rule(i, j);
    for (m, c) in g.bracket(i, k) {
        for (n, d) in g.bracket(j, *m) {
            add_scaled(&mut out, *n, -(&s * c * d));
        }
    }
    out
}

fn triple_violations(g: &SuperAlgebra, i: usize, j: usize, k: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let res = jacobi_residual(g, i, j, k);
    if !res.is_empty() {
        out.push(Violation {
            kind: ViolationKind::Jacobi,
            indices: vec![i, j, k],
            detail: format!(
                "Jacobi fails on ({}, {}, {}): residual {}",
                g.label(i),
                g.label(j),
                g.label(k),
                g.format_vector(&res)
            ),
        });
    }
    if let Some(form) = g.form() {
        let lhs: crate::scalars::Rat = g.bracket(i, j).iter().map(|(m, c)| c * &form.gram[*m][k]).sum();
        let rhs: crate::scalars::Rat = g.bracket(j, k).iter().map(|(m, c)| c * &form.gram[i][*m]).sum();
        if lhs != rhs {
            out.push(Violation {
                kind: ViolationKind::FormInvariance,
                indices: vec![i, j, k],
                detail: format!(
                    "([{0},{1}]|{2}) = {3} but ({0}|[{1},{2}]) = {4}",
                    g.label(i),
                    g.label(j),
                    g.label(k),
                    lhs,
                    rhs
                ),
            });
        }
    }
    out
}

/// Checks every axiom the algebra data claims to satisfy.
pub fn verify_algebra(g: &SuperAlgebra) -> VerifyReport {
    let d = g.dim();
    let mut violations = Vec::new();

    for i in 0..d {
        for j in 0..d {
            let mut v = Vector::new();
            for (k, c) in g.bracket(i, j) {
                add_scaled(&mut v, *k, c.clone());
                if g.parity(*k) != (g.parity(i) ^ g.parity(j)) {
                    violations.push(Violation {
                        kind: ViolationKind::ParityHomogeneity,
                        indices: vec![i, j, *k],
                        detail: format!("[{}, {}] has a component along {}", g.label(i), g.label(j), g.label(*k)),
                    });
                }
                if let Some(gr) = g.grading() {
                    if (gr.classes[i] + gr.classes[j]) % gr.r != gr.classes[*k] {
                        violations.push(Violation {
                            kind: ViolationKind::GradingBracket,
                            indices: vec![i, j, *k],
                            detail: format!("[{}, {}] leaves its grading class", g.label(i), g.label(j)),
                        });
                    }
                }
            }
            let s = g.sign_rule(i, j);
            for (k, c) in g.bracket(j, i) {
                add_scaled(&mut v, *k, &s * c);
            }
            if !v.is_empty() {
                violations.push(Violation {
                    kind: ViolationKind::Anticommutativity,
                    indices: vec![i, j],
                    detail: format!(
                        "[{0},{1}] + (-1)^(p p)[{1},{0}] = {2}",
                        g.label(i),
                        g.label(j),
                        g.format_vector(&v)
                    ),
                });
            }
            if let Some(form) = g.form() {
                let a = &form.gram[i][j];
                if !a.is_zero() {
                    if (g.parity(i) ^ g.parity(j)) != form.odd {
                        violations.push(Violation {
                            kind: ViolationKind::FormParity,
                            indices: vec![i, j],
                            detail: format!("({}|{}) != 0 for an {} form", g.label(i), g.label(j), form.parity_name()),
                        });
                    }
                    if let Some(gr) = g.grading() {
                        if (gr.classes[i] + gr.classes[j]) % gr.r != 0 {
                            violations.push(Violation {
                                kind: ViolationKind::GradingForm,
                                indices: vec![i, j],
                                detail: format!("({}|{}) pairs classes not summing to 0", g.label(i), g.label(j)),
                            });
                        }
                    }
                }
                if *a != sign(g.parity(i) && g.parity(j)) * &form.gram[j][i] {
                    violations.push(Violation {
                        kind: ViolationKind::FormSupersymmetry,
                        indices: vec![i, j],
                        detail: format!("({0}|{1}) and ({1}|{0}) violate supersymmetry", g.label(i), g.label(j)),
                    });
                }
            }
        }
    }

    let exhaustive = d <= EXHAUSTIVE_DIM;
    let (triples_checked, mut triple_viol) = if exhaustive {
        let v: Vec<Violation> = (0..d)
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..d)
                    .flat_map(move |j| (0..d).map(move |k| (j, k)))
                    .flat_map(move |(j, k)| triple_violations(g, i, j, k))
                    .collect::<Vec<_>>()
            })
            .collect();
        (d * d * d, v)
    } else {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let triples: Vec<(usize, usize, usize)> = (0..SAMPLED_TRIPLES)
            .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)))
            .collect();
        let v = triples
            .par_iter()
            .flat_map_iter(|&(i, j, k)| triple_violations(g, i, j, k))
            .collect();
        (SAMPLED_TRIPLES, v)
    };
    violations.append(&mut triple_viol);
    VerifyReport {
        algebra: g.name().to_string(),
        dim: d,
        exhaustive,
        triples_checked,
        violations,
    }
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
    fn small_families_pass() {
        for s in ["poi(0|2)", "poi(0|3)", "h(0|3)", "sl(2)", "sl(2|1)", "gl(1|1)", "q(2)", "sq(2)", "psq(2)", "pq(2)"] {
            let r = verify_algebra(&fam(s));
            assert!(r.passed(), "{s}: {:?}", r.violations.first());
        }
    }

    #[test]
    fn injected_fault() {
        let g = fam("sl(2)");
        let e = g.index_of("E12").unwrap();
        let f = g.index_of("E21").unwrap();
        let h = g.index_of("h1").unwrap();
        let bad = g.with_structure_constant(e, f, h, int(-1));
        let r = verify_algebra(&bad);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Anticommutativity && v.indices == vec![e, f]));
    }

    #[test]
    fn parity_grading_compatible() {
        let g = fam("poi(0|4)").with_parity_grading();
        assert!(verify_algebra(&g).passed());
    }
}
