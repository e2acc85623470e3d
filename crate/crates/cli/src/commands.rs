use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use superlie::casimir::{a_map, c3_in, omega0_in, pbw_for};
use superlie::liesuper::spec_file::resolve_algebra;
use superlie::liesuper::{verify_algebra, SuperAlgebra, Weight};
use superlie::loop_km::verify_km_centrality;
use superlie::scalars::{parse_rat, LinearForm, Rat};
use superlie::shapovalov::harness::{ChiReport, Harness, Method, Target};
use superlie::shapovalov::{
    bsh_gram, find_singular_vectors, gram_matrix, kk_formula_with, proportional, shapovalov_det as factor_det,
    valuation, DeterminantReport, ExponentRule, FormulaData, Vacuum,
};
use superlie::uea::{PbwAlgebra, SigmaMap};
use superlie::{Error, Result};

use crate::report::{Report, Text};
use crate::{MethodArg, Rule};

/// A family string, or a path to a TOML or JSON table.
pub fn load(arg: &str) -> Result<SuperAlgebra> {
    resolve_algebra(arg)
}

fn parse_weight(g: &SuperAlgebra, s: &str) -> Result<Weight> {
    let lattice = g
        .lattice()
        .ok_or_else(|| Error::InvalidInput(format!("{} has no weight lattice", g.name())))?;
    lattice.parse_weight(s, g.torus().len())
}

#[derive(Serialize)]
struct AlgebraSummary {
    algebra: String,
    dim: usize,
    even: usize,
    odd: usize,
    cartan: Vec<String>,
    form: Option<&'static str>,
    labels: Vec<String>,
}

pub fn algebra_build(arg: &str) -> Result<Report> {
    let g = load(arg)?;
    let odd = g.parities().iter().filter(|&&p| p).count();
    let s = AlgebraSummary {
        algebra: g.name().to_string(),
        dim: g.dim(),
        even: g.dim() - odd,
        odd,
        cartan: g.cartan_names().to_vec(),
        form: g.form().map(|f| f.parity_name()),
        labels: g.labels().to_vec(),
    };
    let mut t = Text::default();
    t.line("algebra", &s.algebra)
        .line("dimension", format!("{}|{}", s.even, s.odd))
        .line("cartan", s.cartan.join(", "))
        .line("form", s.form.unwrap_or("none"));
    Ok(Report::new(true, s, t.0))
}

pub fn algebra_verify(arg: &str) -> Result<Report> {
    let g = load(arg)?;
    let r = verify_algebra(&g);
    let mut t = Text::default();
    t.line("algebra", &r.algebra)
        .line("triples", format!("{} ({})", r.triples_checked, if r.exhaustive { "exhaustive" } else { "sampled" }))
        .line("violations", r.violations.len());
    for v in r.violations.iter().take(20) {
        t.raw(format!("  {:?} {:?}: {}", v.kind, v.indices, v.detail));
    }
    Ok(Report::new(r.passed(), &r, t.0))
}

#[derive(Serialize)]
struct CasimirSummary {
    algebra: String,
    element: String,
    degree: Option<usize>,
    central: bool,
    residuals: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transposed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symmetry_violations: Option<usize>,
}

fn casimir_text(s: &CasimirSummary) -> String {
    let mut t = Text::default();
    t.line("algebra", &s.algebra)
        .line("degree", s.degree.map_or("-".into(), |d| d.to_string()))
        .line("central", s.central);
    if let Some(v) = s.symmetry_violations {
        t.line("F-symmetry violations", v);
    }
    t.line("element", &s.element);
    t.0
}

pub fn casimir_quadratic(arg: &str) -> Result<Report> {
    let g = load(arg)?;
    let u = pbw_for(&g)?;
    let q = omega0_in(&u)?;
    let s = CasimirSummary {
        algebra: g.name().to_string(),
        element: u.format(&q.element),
        degree: q.element.degree(),
        central: q.is_central(),
        residuals: q.residuals.iter().filter(|r| !r.is_zero()).map(|r| u.format(r)).collect(),
        transposed: Some(q.transposed),
        symmetry_violations: None,
    };
    let text = casimir_text(&s);
    Ok(Report::new(s.central, s, text))
}

pub fn casimir_cubic(arg: &str) -> Result<Report> {
    let g = load(arg)?;
    let u = pbw_for(&g)?;
    let c = c3_in(&u)?;
    let s = CasimirSummary {
        algebra: g.name().to_string(),
        element: u.format(&c.element),
        degree: c.degree(),
        central: c.is_central(),
        residuals: c.residuals.iter().filter(|r| !r.is_zero()).map(|r| u.format(r)).collect(),
        transposed: None,
        symmetry_violations: Some(c.symmetry_violations.len()),
    };
    let ok = s.central && c.symmetry_violations.is_empty();
    let text = casimir_text(&s);
    Ok(Report::new(ok, s, text))
}

#[derive(Serialize)]
struct AmapSummary {
    algebra: String,
    scalar: bool,
    lambda: Option<String>,
    matrix: Vec<Vec<String>>,
}

pub fn casimir_amap(arg: &str) -> Result<Report> {
    let g = load(arg)?;
    let r = a_map(&g)?;
    let s = AmapSummary {
        algebra: g.name().to_string(),
        scalar: r.scalar,
        lambda: r.lambda.as_ref().map(Rat::to_string),
        matrix: r.matrix.iter().map(|row| row.iter().map(Rat::to_string).collect()).collect(),
    };
    let mut t = Text::default();
    t.line("algebra", &s.algebra);
    match &s.lambda {
        Some(l) => t.line("A", format!("{l}·id")),
        None => {
            t.line("A", "not scalar");
            for j in 0..g.dim() {
                let v = r.image(j);
                if !v.is_empty() {
                    t.raw(format!("  A({}) = {}", g.label(j), g.format_vector(&v)));
                }
            }
            &mut t
        }
    };
    Ok(Report::new(true, s, t.0))
}

pub fn loop_check(arg: &str, twist: u32, window: i64, parity_grading: bool) -> Result<Report> {
    let mut g = load(arg)?;
    if parity_grading {
        g = g.with_parity_grading();
    }
    let r = verify_km_centrality(&g, twist, window)?;
    let mut t = Text::default();
    t.line("algebra", &r.algebra)
        .line("twist", r.twist)
        .line("lambda", &r.lambda)
        .line("window", r.window)
        .line("generators checked", r.checks.len());
    let failures: Vec<_> = r.failures().collect();
    t.line("failures", failures.len());
    for f in failures.iter().take(20) {
        t.raw(format!("  {}: {}", f.generator, f.residual.join(" + ")));
    }
    Ok(Report::new(r.passed(), &r, t.0))
}

fn exponent_rule(r: Rule) -> ExponentRule {
    match r {
        Rule::Literal => ExponentRule::Literal,
        Rule::IsotropicAvoiding => ExponentRule::IsotropicAvoiding,
    }
}

/// Simple-root coordinates of `chi`, as the product formula expects them.
fn simple_coords(g: &SuperAlgebra, chi: &Weight) -> Result<Vec<i64>> {
    let lattice = g.lattice().ok_or(Error::MissingSplitter)?;
    let coords = lattice
        .express(chi)
        .ok_or_else(|| Error::InvalidInput(format!("{chi} is outside the root lattice")))?;
    coords
        .into_iter()
        .map(|(name, c)| {
            if c.is_integer() {
                i64::try_from(c.to_integer()).map_err(|_| Error::InvalidInput(format!("coefficient of {name} too large")))
            } else {
                Err(Error::InvalidInput(format!("{chi} has a fractional coefficient on {name}")))
            }
        })
        .collect()
}

fn formula_report(g: &SuperAlgebra, chi: &Weight, rule: ExponentRule) -> Result<superlie::FactorizationReport> {
    let fd = FormulaData::from_algebra(g)?;
    kk_formula_with(&fd, &simple_coords(g, chi)?, rule)
}

pub fn shapovalov_det(arg: &str, chis: &[String], oracle: bool, extra: &[String], rule: Rule) -> Result<Report> {
    let g = load(arg)?;
    let u = PbwAlgebra::new(&g)?;
    let sigma = SigmaMap::default_for(&g)?;
    let extra: Vec<LinearForm> = extra.iter().map(|s| LinearForm::parse(s)).collect::<Result<_>>()?;
    let weights: Vec<(String, Weight)> = chis
        .iter()
        .map(|s| Ok((s.clone(), parse_weight(&g, s)?)))
        .collect::<Result<_>>()?;
    let reports: Vec<DeterminantReport> = weights
        .par_iter()
        .map(|(label, chi)| {
            let gram = if g.odd_cartan().is_empty() {
                gram_matrix(&u, &sigma, chi)?
            } else {
                bsh_gram(&u, &sigma, chi, Vacuum::Full)?
            };
            let formula = if oracle {
                Some(formula_report(&g, chi, exponent_rule(rule))?)
            } else {
                FormulaData::from_algebra(&g)
                    .ok()
                    .and_then(|fd| kk_formula_with(&fd, &simple_coords(&g, chi).ok()?, exponent_rule(rule)).ok())
            };
            let mut candidates = extra.clone();
            if let Some(f) = &formula {
                candidates.extend(f.factors.iter().map(|(l, _)| l.clone()));
            }
            let det = gram.determinant();
            let factorization = factor_det(&gram, &candidates);
            let oracle_match = oracle.then(|| {
                formula
                    .as_ref()
                    .is_some_and(|f| proportional(&det, &f.expand()).is_some())
            });
            Ok(DeterminantReport {
                algebra: g.name().to_string(),
                chi: label.clone(),
                basis_size: gram.size(),
                det: det.to_string(),
                factorization,
                oracle_match,
            })
        })
        .collect::<Result<_>>()?;
    let mut t = Text::default();
    for r in &reports {
        t.line("chi", &r.chi)
            .line("  basis", r.basis_size)
            .line("  det", &r.det)
            .line("  factored", factored(&r.factorization));
        if let Some(m) = r.oracle_match {
            t.line("  formula", if m { "match up to scalar" } else { "MISMATCH" });
        }
    }
    let ok = reports.iter().all(|r| r.oracle_match != Some(false));
    Ok(Report::new(ok, &reports, t.0))
}

fn factored(f: &superlie::FactorizationReport) -> String {
    let mut parts = vec![f.scalar.to_string()];
    parts.extend(f.factors.iter().map(|(l, k)| format!("({l})^{k}")));
    if !f.cofactor_is_trivial() {
        parts.push(format!("[{}]", f.cofactor));
    }
    parts.join(" ")
}

#[derive(Serialize)]
struct FormulaSummary {
    chi: String,
    formula: superlie::FactorizationReport,
    expanded: String,
}

pub fn shapovalov_formula(arg: &str, chis: &[String], rule: Rule) -> Result<Report> {
    let g = load(arg)?;
    let mut out = Vec::new();
    let mut t = Text::default();
    for s in chis {
        let chi = parse_weight(&g, s)?;
        let f = formula_report(&g, &chi, exponent_rule(rule))?;
        t.line("chi", s).line("  formula", factored(&f));
        out.push(FormulaSummary {
            chi: s.clone(),
            expanded: f.expand().to_string(),
            formula: f,
        });
    }
    Ok(Report::new(true, out, t.0))
}

#[derive(Serialize)]
struct SingularSummary {
    chi: String,
    lambda: Vec<String>,
    basis: Vec<String>,
    vectors: Vec<Vec<String>>,
}

pub fn shapovalov_singular(arg: &str, chis: &[String], lambda: &str) -> Result<Report> {
    let g = load(arg)?;
    let u = PbwAlgebra::new(&g)?;
    let values: Vec<Rat> = lambda.split(',').map(|v| parse_rat(v.trim())).collect::<Result<_>>()?;
    let val = valuation(&u, &values)?;
    let mut out = Vec::new();
    let mut t = Text::default();
    for s in chis {
        let chi = parse_weight(&g, s)?;
        let basis: Vec<String> = u.weight_basis(&chi)?.iter().map(|m| u.format_monomial(m)).collect();
        let vectors: Vec<Vec<String>> = find_singular_vectors(&u, &val, &chi)?
            .iter()
            .map(|v| v.iter().map(Rat::to_string).collect())
            .collect();
        t.line("chi", s).line("  singular vectors", vectors.len());
        for v in &vectors {
            let terms: Vec<String> = v
                .iter()
                .zip(&basis)
                .filter(|(c, _)| c.as_str() != "0")
                .map(|(c, m)| format!("({c})*{m}"))
                .collect();
            t.raw(format!("    {}", terms.join(" + ")));
        }
        out.push(SingularSummary {
            chi: s.clone(),
            lambda: values.iter().map(Rat::to_string).collect(),
            basis,
            vectors,
        });
    }
    Ok(Report::new(true, out, t.0))
}

#[derive(Serialize)]
struct ConjectureSummary {
    #[serde(flatten)]
    report: ChiReport,
    candidates: Vec<String>,
}

pub fn conjecture(target: &str, chis: &[String], method: MethodArg, seed: u64) -> Result<Report> {
    let h = Harness::new(Target::from_str(target)?)?;
    let method = match method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Exact => Method::Exact,
        MethodArg::Lines => Method::Lines,
    };
    let weights: Vec<Weight> = chis.iter().map(|s| h.parse_chi(s)).collect::<Result<_>>()?;
    for w in &weights {
        h.check_cone(w)?;
    }
    let out: Vec<ConjectureSummary> = weights
        .par_iter()
        .map(|w| {
            let candidates = h
                .conjectured(w)?
                .iter()
                .map(|e| format!("{} [{}{}]", e.form, e.condition, if e.holds { "" } else { ", fails" }))
                .collect();
            Ok(ConjectureSummary {
                report: h.run(w, method, seed)?,
                candidates,
            })
        })
        .collect::<Result<_>>()?;
    let mut t = Text::default();
    for s in &out {
        let r = &s.report;
        let f: Vec<String> = r.factors.iter().map(|f| format!("({})^{}", f.form, f.multiplicity)).collect();
        t.line("chi", &r.chi)
            .line("  method", &r.method)
            .line("  size", format!("{} ({} blocks)", r.gram_size, r.blocks.len()))
            .line("  degree", r.degree.map_or("-".into(), |d| d.to_string()))
            .line("  factors", f.join(" "))
            .line("  cofactor", &r.cofactor)
            .line("  within conjectured family", r.within_family());
        if !r.unexplained.is_empty() {
            t.line("  unexplained", r.unexplained.join(", "));
        }
        if !r.absent.is_empty() {
            t.line("  predicted but absent", r.absent.join(", "));
        }
    }
    let ok = out.iter().all(|s| s.report.consistent);
    Ok(Report::new(ok, &out, t.0))
}
