use std::collections::BTreeSet;
use std::str::FromStr;

use num_traits::Zero;
use proptest::prelude::*;

use superlie::liesuper::{build, root_decomposition, Family, SuperAlgebra, Weight};
use superlie::scalars::{factor_over_candidates, rat, trial_divide, CartanPoly, LinearForm, Rat};
use superlie::shapovalov::blocks::{block_sign, components};
use superlie::shapovalov::harness::{Harness, Method, Target};
use superlie::shapovalov::{partition_count, FormulaData};
use superlie::uea::{weight_basis_count, PbwAlgebra, PbwElement, PbwMonomial, SigmaMap};

const VARS: [&str; 3] = ["h1", "h2", "h3"];

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = CartanPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), small_rat()), 0..5)
        .prop_map(|terms| CartanPoly::from_terms(&VARS, terms))
}

fn form() -> impl Strategy<Value = LinearForm> {
    (prop::collection::vec(-2i64..=2, 3), -4i64..=4)
        .prop_filter("nonconstant", |(c, _)| c.iter().any(|&x| x != 0))
        .prop_map(|(c, k)| {
            let coefs = VARS.iter().zip(c).map(|(v, x)| (v.to_string(), rat(x, 1)));
            LinearForm::new(coefs, rat(k, 2)).unwrap()
        })
}

fn alg(s: &str) -> SuperAlgebra {
    build(&Family::from_str(s).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn trial_division_recovers_quotient(p in poly(), f in form()) {
        prop_assume!(!p.is_zero());
        let (q, divides) = trial_divide(&(&p * &f.to_poly(&VARS)), &f);
        prop_assert!(divides);
        prop_assert_eq!(q, p);
    }

    #[test]
    fn factorization_reconstructs(p in poly(), fs in prop::collection::vec(form(), 1..4), extra in prop::collection::vec(form(), 0..3)) {
        let mut target = p.clone();
        for f in &fs {
            target = &target * &f.to_poly(&VARS);
        }
        let mut candidates = fs.clone();
        candidates.extend(extra);
        let r = factor_over_candidates(&target, &candidates);
        prop_assert_eq!(r.expand(), target);
    }

    #[test]
    fn block_determinant_sign(entries in prop::collection::vec((0usize..5, 0usize..5, 1i64..5), 3..9)) {
        let n = 5;
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (i, j, v) in entries {
            m[i][j] = rat(v, 1);
        }
        let blocks = components(n, |i, j| !m[i][j].is_zero());
        let full = det(&m);
        if blocks.iter().any(|b| !b.is_square()) {
            prop_assert!(full.is_zero());
        } else {
            let mut prod = Rat::from_integer(1.into());
            for b in &blocks {
                let sub: Vec<Vec<Rat>> = b.rows.iter().map(|&i| b.cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                prod *= det(&sub);
            }
            if block_sign(&blocks) {
                prod = -prod;
            }
            prop_assert_eq!(full, prod);
        }
    }

    #[test]
    fn pbw_dimension_matches_partitions(name in prop::sample::select(vec!["sl(3)", "sl(2|1)"]), a in 0i64..=3, b in 0i64..=3) {
        let g = alg(name);
        let u = PbwAlgebra::new(&g).unwrap();
        let fd = FormulaData::from_algebra(&g).unwrap();
        let lattice = g.lattice().unwrap();
        let chi = lattice.parse_weight(&format!("{a}a1 + {b}a2"), g.torus().len()).unwrap();
        let from_basis = weight_basis_count(&u, &chi).unwrap() as u64;
        prop_assert_eq!(from_basis, partition_count(&fd, &[a, b]));
    }

    #[test]
    fn distinct_weights_are_orthogonal(i in 0usize..64, j in 0usize..64) {
        let (u, s, slices) = sl21_slices();
        let all: Vec<&PbwMonomial> = slices.iter().flatten().collect();
        let (x, y) = (all[i % all.len()], all[j % all.len()]);
        prop_assume!(u.monomial_weight(x) != u.monomial_weight(y));
        let xy = u.mul(&s.apply_monomial(u, x), &PbwElement::monomial(y.clone(), rat(1, 1)));
        prop_assert!(u.hc_project(&xy).unwrap().is_zero());
    }

    #[test]
    fn line_method_is_seed_independent(seed in 0u64..1000) {
        let h = poi03();
        let chi = h.parse_chi("2e1").unwrap();
        let exact = h.run(&chi, Method::Exact, 0).unwrap();
        let lines = h.run(&chi, Method::Lines, seed).unwrap();
        prop_assert!(lines.consistent);
        prop_assert_eq!(exact.degree, lines.degree);
        let key = |r: &superlie::shapovalov::harness::ChiReport| {
            r.factors.iter().map(|f| (f.form.clone(), f.multiplicity)).collect::<BTreeSet<_>>()
        };
        prop_assert_eq!(key(&exact), key(&lines));
    }
}

fn poi03() -> &'static Harness {
    static H: std::sync::OnceLock<Harness> = std::sync::OnceLock::new();
    H.get_or_init(|| Harness::new(Target::Poi03).unwrap())
}

type Slices = (PbwAlgebra, SigmaMap, Vec<Vec<PbwMonomial>>);

fn sl21_slices() -> &'static Slices {
    static S: std::sync::OnceLock<Slices> = std::sync::OnceLock::new();
    S.get_or_init(|| {
        let g = alg("sl(2|1)");
        let u = PbwAlgebra::new(&g).unwrap();
        let s = SigmaMap::default_for(&g).unwrap();
        let lattice = g.lattice().unwrap();
        let slices = ["a1", "a2", "a1 + a2", "2a1 + a2", "a1 + 2a2", "2a1 + 2a2"]
            .iter()
            .map(|w| u.weight_basis(&lattice.parse_weight(w, g.torus().len()).unwrap()).unwrap())
            .collect();
        (u, s, slices)
    })
}

/// Cofactor expansion; independent of the elimination code under test.
fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::from_integer(1.into());
    }
    let mut acc = Rat::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rat>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[test]
fn root_spaces_fill_the_complement_of_the_cartan() {
    for name in ["sl(2|1)", "gl(2|1)", "poi(0|4)", "poi(0|5)", "q(2)", "sl(3)"] {
        let g = alg(name);
        let rd = root_decomposition(&g).unwrap();
        let in_roots: usize = rd.roots.iter().map(|r| r.indices.len()).sum();
        assert_eq!(in_roots, g.dim() - g.cartan().len(), "{name}");
    }
}

#[test]
fn berezin_form_pairs_complementary_degrees() {
    for m in 2..=6 {
        let g = alg(&format!("poi(0|{m})"));
        let gram = &g.form().unwrap().gram;
        let deg = |i: usize| if g.label(i) == "1" { 0 } else { g.label(i).split('*').count() };
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                if !gram[i][j].is_zero() {
                    assert_eq!(deg(i) + deg(j), m, "poi(0|{m}) {} {}", g.label(i), g.label(j));
                }
            }
        }
    }
}

#[test]
fn poisson_modulo_center_is_hamiltonian() {
    for m in 3..=5 {
        let p = alg(&format!("poi(0|{m})"));
        let h = alg(&format!("h(0|{m})"));
        assert_eq!(h.dim(), p.dim() - 1);
        let one = p.index_of("1").unwrap();
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                let pi = p.index_of(h.label(i)).unwrap();
                let pj = p.index_of(h.label(j)).unwrap();
                let mut lhs: Vec<(String, Rat)> = p
                    .bracket(pi, pj)
                    .iter()
                    .filter(|(k, _)| *k != one)
                    .map(|(k, c)| (p.label(*k).to_string(), c.clone()))
                    .collect();
                let mut rhs: Vec<(String, Rat)> =
                    h.bracket(i, j).iter().map(|(k, c)| (h.label(*k).to_string(), c.clone())).collect();
                lhs.sort();
                rhs.sort();
                assert_eq!(lhs, rhs, "h(0|{m}) [{}, {}]", h.label(i), h.label(j));
            }
        }
    }
}

#[test]
fn weight_literal_round_trip() {
    let g = alg("sl(2|1)");
    let l = g.lattice().unwrap();
    let w: Weight = l.parse_weight("2a1 - a2", g.torus().len()).unwrap();
    let back = l.parse_weight(&l.format_weight(&w), g.torus().len()).unwrap();
    assert_eq!(w, back);
}
