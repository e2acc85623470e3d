//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed; exits nonzero when a criterion's outcome
//! differs from the expected one.

use std::collections::HashMap;
use std::str::FromStr;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use superlie::casimir::{a_map, a_scalar, ad_commutes_with_a, b_identity_violations, c3, omega0, omega0_in};
use superlie::linalg;
use superlie::liesuper::{build, verify_algebra, Family, SuperAlgebra, Weight};
use superlie::loop_km::verify_km_centrality;
use superlie::scalars::{int, rat, Rat};
use superlie::shapovalov::harness::{ChiReport, Harness, Method, Target};
use superlie::shapovalov::{
    bsh_gram, find_singular_vectors, gram_matrix, kk_formula, kk_formula_with, proportional, reorder_odd_cartan,
    shifted_valuation, valuation, ExponentRule, FormulaData, Vacuum,
};
use superlie::uea::{PbwAlgebra, SigmaMap, SigmaMode};
use superlie::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn alg(s: &str) -> SuperAlgebra {
    build(&Family::from_str(s).unwrap()).unwrap()
}

fn pbw(s: &str) -> (PbwAlgebra, SigmaMap) {
    let g = alg(s);
    let sigma = SigmaMap::default_for(&g).unwrap();
    (PbwAlgebra::new(&g).unwrap(), sigma)
}

fn weight(u: &PbwAlgebra, s: &str) -> Weight {
    let g = u.algebra();
    g.lattice().unwrap().parse_weight(s, g.torus().len()).unwrap()
}

fn structural() -> Outcome {
    let names = [
        "poi(0|2)", "poi(0|3)", "poi(0|4)", "poi(0|5)", "poi(0|6)", "h(0|3)", "h(0|4)", "h(0|5)", "gl(2|1)",
        "sl(2|1)", "sl(2|2)", "q(2)", "q(3)",
    ];
    let mut bad = Vec::new();
    for n in names {
        let r = verify_algebra(&alg(n));
        if !r.passed() || !r.exhaustive {
            bad.push(format!("{n} ({} violations)", r.violations.len()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} algebras, exhaustive", names.len()) } else { bad.join(", ") })
}

fn quadratic() -> Outcome {
    let mut bad = Vec::new();
    for n in ["sl(2)", "sl(2|1)", "poi(0|4)", "poi(0|6)"] {
        let g = alg(n);
        match omega0(&g) {
            Ok(q) if q.is_central() => {}
            Ok(_) => bad.push(format!("{n}: residual")),
            Err(e) => bad.push(format!("{n}: {e}")),
        }
        let b = g.gram_inverse().unwrap();
        let v = b_identity_violations(&g, &b);
        if !v.is_empty() {
            bad.push(format!("{n}: b-identity fails at {} triples", v.len()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "Ω₀ central and b-identity exact".into() } else { bad.join(", ") })
}

fn poly_degree(label: &str) -> usize {
    if label == "1" {
        0
    } else {
        label.split('*').count()
    }
}

fn a_values() -> Outcome {
    let mut bad = Vec::new();
    for (n, want) in [("sl(2|1)", 2), ("sl(3|1)", 4), ("poi(0|4)", 0), ("poi(0|6)", 0)] {
        match a_scalar(&alg(n)) {
            Ok(l) if l == int(want) => {}
            other => bad.push(format!("{n}: {other:?}")),
        }
    }
    let g = alg("poi(0|2)");
    let r = a_map(&g).unwrap();
    let nonzero_on = |d: usize| (0..g.dim()).any(|j| poly_degree(g.label(j)) == d && !r.image(j).is_empty());
    let one = g.index_of("1").unwrap();
    if r.scalar {
        bad.push("poi(0|2): A is scalar".into());
    }
    if !r.image(one).is_empty() {
        bad.push("poi(0|2): A(1) ≠ 0".into());
    }
    if !nonzero_on(1) {
        bad.push("poi(0|2): A vanishes on degree 1 (A lowers degree by 2)".into());
    }
    if !nonzero_on(2) {
        bad.push("poi(0|2): A vanishes on degree 2".into());
    }
    for n in ["sl(2|1)", "sl(3|1)", "poi(0|2)", "poi(0|4)", "poi(0|6)"] {
        if !ad_commutes_with_a(&alg(n)).unwrap().passed() {
            bad.push(format!("{n}: [ad, A] ≠ 0"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all values reproduced".into() } else { bad.join("; ") })
}

fn km_centrality() -> Outcome {
    let cases = [
        (alg("sl(2)"), 1, 3),
        (alg("poi(0|4)"), 1, 3),
        (alg("poi(0|4)").with_parity_grading(), 2, 2),
    ];
    let mut bad = Vec::new();
    let mut checks = 0;
    for (g, r, w) in &cases {
        match verify_km_centrality(g, *r, *w) {
            Ok(rep) => {
                checks += rep.checks.len();
                for f in rep.failures() {
                    bad.push(format!("{} r={r}: {}", g.name(), f.generator));
                }
            }
            Err(e) => bad.push(format!("{} r={r}: {e}", g.name())),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{checks} generators, all slices zero") } else { bad.join(", ") })
}

fn cubic() -> Outcome {
    let mut bad = Vec::new();
    for n in ["poi(0|3)", "q(2)"] {
        match c3(&alg(n)) {
            Ok(c) => {
                if !c.is_central() {
                    bad.push(format!("{n}: residual"));
                }
                if !c.symmetry_violations.is_empty() {
                    bad.push(format!("{n}: F-symmetry fails"));
                }
                if c.degree() != Some(3) {
                    bad.push(format!("{n}: degree {:?}", c.degree()));
                }
            }
            Err(e) => bad.push(format!("{n}: {e}")),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "C₃ central, F symmetric, degree 3".into() } else { bad.join(", ") })
}

/// Compares against the product formula under both exponent rules; only the
/// literal one decides the outcome.
fn oracle() -> Outcome {
    let mut literal_bad = Vec::new();
    let mut corrected_bad = Vec::new();
    let mut compared = 0;
    let (u, s) = pbw("sl(2)");
    let fd = FormulaData::from_algebra(u.algebra()).unwrap();
    for k in 1..=4i64 {
        let det = gram_matrix(&u, &s, &weight(&u, &format!("{k}a1"))).unwrap().determinant();
        compared += 1;
        if proportional(&det, &kk_formula(&fd, &[k]).unwrap().expand()).is_none() {
            literal_bad.push(format!("sl(2) {k}α"));
        }
    }
    let (u, s) = pbw("sl(2|1)");
    let fd = FormulaData::from_algebra(u.algebra()).unwrap();
    for a in 0..=3i64 {
        for b in 0..=3 - a {
            if a + b == 0 {
                continue;
            }
            let chi = weight(&u, &format!("{a}a1 + {b}a2"));
            let det = match gram_matrix(&u, &s, &chi) {
                Ok(g) => g.determinant(),
                Err(Error::NotAWeight(_)) => continue,
                Err(e) => return outcome(false, format!("sl(2|1) ({a},{b}): {e}")),
            };
            compared += 1;
            let label = format!("sl(2|1) {a}α1+{b}α2");
            let lit = kk_formula(&fd, &[a, b]).unwrap();
            if proportional(&det, &lit.expand()).is_none() {
                let d = det.total_degree().unwrap_or(0);
                literal_bad.push(format!("{label} (det degree {d}, formula degree {})", lit.degree()));
            }
            let cor = kk_formula_with(&fd, &[a, b], ExponentRule::IsotropicAvoiding).unwrap();
            if proportional(&det, &cor.expand()).is_none() {
                corrected_bad.push(label);
            }
        }
    }
    let detail = format!(
        "{compared} weights; literal formula mismatches: [{}]; isotropic-avoiding exponents mismatches: [{}]",
        literal_bad.join(", "),
        corrected_bad.join(", ")
    );
    outcome(literal_bad.is_empty(), detail)
}

fn linkage() -> Outcome {
    let (u, s) = pbw("sl(2)");
    let omega = omega0_in(&u).unwrap();
    let hc = u.hc_project(&omega.element).unwrap();
    let mut grid: Vec<Rat> = (-8..=8).map(|m| rat(m, 2)).collect();
    grid.extend([rat(1, 3), rat(-2, 3), rat(5, 3), rat(7, 4)]);
    let grams: Vec<_> = (1..=4).map(|k| gram_matrix(&u, &s, &weight(&u, &format!("{k}a1"))).unwrap()).collect();
    let mut bad = Vec::new();
    let mut singular_weights = 0;
    for lam in &grid {
        let lambda = valuation(&u, std::slice::from_ref(lam)).unwrap();
        let found: Vec<bool> = (1..=4)
            .map(|j| {
                let chi = weight(&u, &format!("{j}a1"));
                let v = find_singular_vectors(&u, &lambda, &chi).unwrap();
                if !v.is_empty() {
                    singular_weights += 1;
                    let mu: HashMap<String, Rat> = shifted_valuation(&u, &lambda, &chi);
                    if hc.eval(&lambda) != hc.eval(&mu) {
                        bad.push(format!("HC(Ω₀) differs at λ = {lam}, χ′ = {j}α"));
                    }
                }
                !v.is_empty()
            })
            .collect();
        for (k, gram) in grams.iter().enumerate() {
            let m = gram.specialize(&lambda);
            let degenerate = linalg::rank(&m) < m.len();
            if degenerate != found[..=k].iter().any(|&f| f) {
                bad.push(format!("λ = {lam}, χ = {}α", k + 1));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} grid points, {singular_weights} singular weights linked", grid.len())
        } else {
            bad.join(", ")
        },
    )
}

fn summary(r: &ChiReport) -> String {
    let f: Vec<String> = r.factors.iter().map(|f| format!("({})^{}", f.form, f.multiplicity)).collect();
    format!("{}: {} [{}]", r.chi, f.join(" "), r.method)
}

fn poi03() -> Outcome {
    let h = Harness::new(Target::Poi03).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for k in 1..=3 {
        match h.run(&h.parse_chi(&format!("{k}e1")).unwrap(), Method::Auto, 1) {
            Ok(r) => {
                pass &= r.within_family();
                let flag = if r.within_family() { "" } else { " FINDING" };
                parts.push(format!("{}{flag}", summary(&r)));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{k}e1: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn poi05() -> Outcome {
    let h = Harness::new(Target::Poi05).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for chi in ["e1", "e2", "e1 + e2"] {
        let start = Instant::now();
        match h.run(&h.parse_chi(chi).unwrap(), Method::Auto, 1) {
            Ok(r) => {
                pass &= r.consistent && r.degree.is_some();
                let audit = if r.within_family() {
                    "within table".to_string()
                } else {
                    format!("FINDING unexplained {:?}", r.unexplained)
                };
                parts.push(format!("{} {audit} ({:.0} s)", summary(&r), start.elapsed().as_secs_f64()));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{chi}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn bsh_sign() -> Outcome {
    let (u, s) = pbw("poi(0|3)");
    let g = u.algebra().clone();
    let respect = s.with_mode(&g, SigmaMode::RespectSignRule).unwrap();
    let n_odd = g.odd_cartan().len();
    let perms = proptest::sample::select(permutations(n_odd));
    let mut runner = TestRunner::new(Config {
        cases: 12,
        failure_persistence: None,
        ..Config::default()
    });
    let mut dets: HashMap<i64, superlie::CartanPoly> = HashMap::new();
    let mut base = |k: i64| {
        dets.entry(k)
            .or_insert_with(|| bsh_gram(&u, &s, &weight(&u, &format!("{k}e1")), Vacuum::Full).unwrap().determinant())
            .clone()
    };
    let bases: Vec<_> = (1..=3).map(&mut base).collect();
    let result = runner.run(&(1..=3i64, perms, any::<bool>()), |(k, perm, flip_mode)| {
        let w = weight(&u, &format!("{k}e1"));
        let g2 = reorder_odd_cartan(&g, &perm).unwrap();
        let u2 = PbwAlgebra::new(&g2).unwrap();
        let sigma = if flip_mode { &respect } else { &s };
        let d = bsh_gram(&u2, sigma, &w, Vacuum::Full).unwrap().determinant();
        let b = &bases[k as usize - 1];
        prop_assert!(d == *b || d == -b, "k = {k}, order {perm:?}, respect = {flip_mode}");
        Ok(())
    });
    match result {
        Ok(()) => outcome(true, format!("{} odd Cartan generators, all orders and both σ modes", n_odd)),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Criteria whose outcome is FAIL by construction, each with the reason.
const EXPECTED_FAIL: &[(usize, &str)] = &[
    (3, "A on poi(0|2) lowers degree by 2, so it vanishes on degree 1"),
    (6, "the printed exponent K(χ−mα) overcounts isotropic odd roots at sl(2|1) α1+2α2"),
];

fn main() {
    type Check = (usize, &'static str, fn() -> Outcome);
    let checks: [Check; 10] = [
        (1, "structural axioms", structural),
        (2, "quadratic Casimir", quadratic),
        (3, "A-map values", a_values),
        (4, "Kac-Moody centrality", km_centrality),
        (5, "cubic Casimir", cubic),
        (6, "determinant oracle equivalence", oracle),
        (7, "singular-vector linkage", linkage),
        (8, "conjecture harness poi(0|3)", poi03),
        (9, "conjecture harness poi(0|5)", poi05),
        (10, "odd Cartan form well-definedness", bsh_sign),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = 0;
    for (id, name, f) in checks {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let expected_fail = EXPECTED_FAIL.iter().find(|(i, _)| *i == id);
        println!(
            "criterion {id:>2} {}: {name} ({secs:.1} s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if let Some((_, why)) = expected_fail {
            println!("             known: {why}");
        }
        if o.pass == expected_fail.is_some() {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria changed outcome");
        std::process::exit(1);
    }
}
