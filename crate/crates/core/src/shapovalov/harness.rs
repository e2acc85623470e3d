//! Measures how Shapovalov determinants of Poisson-type algebras factor
//! against conjectured families of linear forms. Nothing is asserted: each
//! weight yields the factors found, their multiplicities, which of them the
//! family predicts, and what is left over.
//!
//! Cartan variables follow the builders: `h{bits}` is the product of the
//! pairs `ξᵢηᵢ` whose bit is set, `h0…0` being the constant function.
//! Conjectured forms are written for brackets where `ε₁(h_{10…0}) = 1`. When
//! the algebra has the opposite sign every Cartan variable changes sign, so
//! constant terms are negated before matching.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::bsh::{bsh_gram, Vacuum};
use super::modular::factor_on_lines;
use super::{gram_matrix, ShapovalovGram};
use crate::error::{Error, Result};
use crate::liesuper::{build, root_decomposition, Family, SuperAlgebra, Weight};
use crate::loop_km::KacMoody;
use crate::scalars::{factor_over_candidates, int, rat, LinearForm, Rat};
use crate::uea::{PbwAlgebra, SigmaMap};

/// Largest block handled by exact elimination under [`Method::Auto`].
pub const EXACT_BLOCK_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Poi03,
    Poi05,
    /// `poi(0|2n+1)`.
    PoiOdd(usize),
    /// The loop algebra of `poi(0|2n)` with loop degrees `|k| ≤ cutoff`.
    LoopPoi { n: usize, cutoff: i64 },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Poi03 => write!(f, "poi03"),
            Target::Poi05 => write!(f, "poi05"),
            Target::PoiOdd(n) => write!(f, "poi_odd({n})"),
            Target::LoopPoi { n, cutoff } => write!(f, "loop_poi({n},{cutoff})"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let args = |prefix: &str| -> Option<Vec<i64>> {
            let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            inner.split(',').map(|x| x.parse().ok()).collect()
        };
        match s.as_str() {
            "poi03" => return Ok(Target::Poi03),
            "poi05" => return Ok(Target::Poi05),
            _ => {}
        }
        if let Some(a) = args("poi_odd") {
            if let [n] = a[..] {
                if n >= 1 {
                    return Ok(Target::PoiOdd(n as usize));
                }
            }
        }
        if let Some(a) = args("loop_poi") {
            if let [n, cutoff] = a[..] {
                if n >= 1 && cutoff >= 1 {
                    return Ok(Target::LoopPoi { n: n as usize, cutoff });
                }
            }
        }
        Err(Error::Parse(format!(
            "unknown target `{s}`; expected poi03, poi05, poi_odd(n) or loop_poi(n,cutoff)"
        )))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact when every block is at most [`EXACT_BLOCK_LIMIT`], else lines.
    #[default]
    Auto,
    Exact,
    Lines,
}

/// A conjectured factor with the condition under which it is predicted.
#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub form: LinearForm,
    pub condition: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundFactor {
    pub form: String,
    pub multiplicity: u32,
    /// Predicted with its side condition satisfied.
    pub conjectured: bool,
    /// The predicting condition, when the form is in the family at all.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiReport {
    pub target: String,
    pub algebra: String,
    pub chi: String,
    pub basis_size: usize,
    pub gram_size: usize,
    pub blocks: Vec<usize>,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<String>,
    pub degree: Option<usize>,
    pub factors: Vec<FoundFactor>,
    pub cofactor: String,
    pub cofactor_trivial: bool,
    /// Factors outside the conjectured family, or predicted only under a
    /// side condition that fails.
    pub unexplained: Vec<String>,
    /// Conjectured factors (condition holding) that do not divide.
    pub absent: Vec<String>,
    pub consistent: bool,
    pub seconds: f64,
}

impl ChiReport {
    /// Everything found is predicted and nothing is left over.
    pub fn within_family(&self) -> bool {
        self.unexplained.is_empty() && self.cofactor_trivial && self.degree.is_some()
    }

    pub fn multiplicity(&self, form: &LinearForm) -> u32 {
        let key = form.normalized().to_string();
        self.factors
            .iter()
            .find(|f| f.form == key)
            .map_or(0, |f| f.multiplicity)
    }
}

pub struct Harness {
    target: Target,
    algebra: SuperAlgebra,
    u: PbwAlgebra,
    sigma: SigmaMap,
    pairs: usize,
    odd_cartan: bool,
    flip: bool,
}

fn pair_name(pairs: usize, set: impl Fn(usize) -> bool) -> String {
    let bits: String = (0..pairs).map(|i| if set(i) { '1' } else { '0' }).collect();
    format!("h{bits}")
}

fn form(coefs: Vec<(String, Rat)>, constant: Rat) -> Option<LinearForm> {
    LinearForm::new(coefs.into_iter().filter(|(_, c)| !c.is_zero()), constant).ok()
}

impl Harness {
    pub fn new(target: Target) -> Result<Self> {
        let (base, pairs) = match &target {
            Target::Poi03 => (Family::Poisson(3), 1),
            Target::Poi05 => (Family::Poisson(5), 2),
            Target::PoiOdd(n) => (Family::Poisson(2 * n + 1), *n),
            Target::LoopPoi { n, .. } => (Family::Poisson(2 * n), *n),
        };
        let g = build(&base)?;
        let base_sigma = SigmaMap::default_for(&g)?;
        let flip = g
            .lattice()
            .and_then(|l| l.vectors.first())
            .and_then(|w| w.coords.first())
            .is_some_and(|c| c.is_negative());
        let (algebra, sigma) = match &target {
            Target::LoopPoi { cutoff, .. } => {
                let tr = KacMoody::new(&g)?.truncate(*cutoff)?;
                let s = tr.sigma(&base_sigma)?;
                (tr.algebra, s)
            }
            _ => (g, base_sigma),
        };
        let u = PbwAlgebra::new(&algebra)?;
        let odd_cartan = !algebra.odd_cartan().is_empty();
        Ok(Harness {
            target,
            algebra,
            u,
            sigma,
            pairs,
            odd_cartan,
            flip,
        })
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.algebra
    }

    pub fn pbw(&self) -> &PbwAlgebra {
        &self.u
    }

    /// Whether constant terms of conjectured forms are negated.
    pub fn flipped(&self) -> bool {
        self.flip
    }

    pub fn parse_chi(&self, s: &str) -> Result<Weight> {
        let l = self
            .algebra
            .lattice()
            .ok_or_else(|| Error::InvalidInput("algebra has no weight lattice".into()))?;
        l.parse_weight(s, self.algebra.torus().len())
    }

    pub fn format_chi(&self, chi: &Weight) -> String {
        self.algebra
            .lattice()
            .map_or_else(|| format!("{:?}", chi.coords), |l| l.format_weight(chi))
    }

    /// Coordinates over the lattice names `e1, …, en` (and `d`).
    fn coords(&self, chi: &Weight) -> Result<Vec<Rat>> {
        let l = self.algebra.lattice().expect("checked in parse_chi");
        let c = l
            .express(chi)
            .ok_or_else(|| Error::NotAWeight(format!("{:?}", chi.coords)))?;
        Ok(c.into_iter().map(|(_, x)| x).collect())
    }

    fn is_nonneg_weight(&self, w: &Weight) -> Result<bool> {
        Ok(w.is_zero() || !self.u.weight_basis(w)?.is_empty())
    }

    /// Fails with [`Error::OutOfCone`] outside the region where the
    /// conjectures are stated.
    pub fn check_cone(&self, chi: &Weight) -> Result<()> {
        let c = self.coords(chi)?;
        let integral = c.iter().all(|x| x.is_integer());
        let ok = integral
            && match self.target {
                Target::Poi03 => c[0].is_positive(),
                Target::Poi05 => {
                    let (k, l) = (&c[0], &c[1]);
                    !k.is_negative() && !(k + l).is_negative() && (k.is_positive() || l.is_positive())
                }
                _ => !chi.is_zero() && self.is_nonneg_weight(chi)?,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfCone(self.format_chi(chi)))
        }
    }

    fn convention(&self, f: LinearForm) -> LinearForm {
        if self.flip {
            LinearForm::new(f.coefficients().clone(), -f.constant().clone()).expect("nonzero form")
        } else {
            f
        }
    }

    /// `h_max`, the product of all pairs.
    pub fn h_max(&self) -> LinearForm {
        LinearForm::var_plus(&pair_name(self.pairs, |_| true), Rat::zero())
    }

    /// `h_γ = Σ cᵢ Π_{j≠i} ξⱼηⱼ (+ c′z)` for `γ = Σ cᵢεᵢ (+ c′ε′)`.
    pub fn h_gamma(&self, gamma: &Weight) -> Result<Option<LinearForm>> {
        let c = self.coords(gamma)?;
        let mut coefs: Vec<(String, Rat)> = (0..self.pairs)
            .map(|i| (pair_name(self.pairs, |j| j != i), c[i].clone()))
            .collect();
        if matches!(self.target, Target::LoopPoi { .. }) {
            coefs.push(("z".into(), c[self.pairs].clone()));
        }
        Ok(form(coefs, Rat::zero()))
    }

    /// `{h_max} ∪ {h_γ : γ > 0, χ − γ ≥ 0}`.
    pub fn root_family(&self, chi: &Weight) -> Result<Vec<Expected>> {
        let rd = root_decomposition(&self.algebra)?;
        let mut out = vec![Expected {
            form: self.h_max(),
            condition: "h_max".into(),
            holds: true,
        }];
        for r in rd.positives() {
            let rest = chi - &r.weight;
            if !self.is_nonneg_weight(&rest)? {
                continue;
            }
            if let Some(f) = self.h_gamma(&r.weight)? {
                out.push(Expected {
                    form: f,
                    condition: format!("h_gamma, gamma = {}", self.format_chi(&r.weight)),
                    holds: true,
                });
            }
        }
        Ok(out)
    }

    /// The conjectured family for `χ`, with side conditions evaluated.
    pub fn conjectured(&self, chi: &Weight) -> Result<Vec<Expected>> {
        let c = self.coords(chi)?;
        let mut out = Vec::new();
        let mut push = |f: Option<LinearForm>, condition: String, holds: bool| {
            if let Some(f) = f {
                out.push(Expected {
                    form: self.convention(f),
                    condition,
                    holds,
                });
            }
        };
        match self.target {
            Target::Poi03 => {
                let k = c[0].to_integer().to_i64().unwrap_or(0);
                push(form(vec![("h0".into(), int(1))], Rat::zero()), "always".into(), true);
                for m in 1..=2 * k.max(1) + 2 {
                    push(
                        form(vec![("h1".into(), int(1))], rat(-m, 2)),
                        format!("h1 - m/2, m = {m}, 1 <= m <= k"),
                        m <= k,
                    );
                }
            }
            Target::Poi05 => {
                let (k, l) = (c[0].clone(), c[1].clone());
                let kl = &k + &l;
                let v = |s: &str| (s.to_string(), int(1));
                push(form(vec![v("h11")], Rat::zero()), "always".into(), true);
                push(
                    form(vec![v("h01")], Rat::zero()),
                    "k, k+l >= 1".into(),
                    k >= Rat::one() && kl >= Rat::one(),
                );
                push(form(vec![v("h10")], Rat::zero()), "k+l >= 1".into(), kl >= Rat::one());
                let top = k.to_integer().to_i64().unwrap_or(0).max(1) + 2;
                for m in 1..=top {
                    let mr = int(m);
                    push(
                        form(vec![v("h01"), ("h10".into(), int(-1))], mr.clone()),
                        format!("h01 - h10 + m, m = {m}, 1 <= m <= k"),
                        mr <= k,
                    );
                    push(
                        form(vec![v("h01"), v("h10")], -mr.clone()),
                        format!("h01 + h10 - m, m = {m}, 1 <= m <= k, (k+l)/2"),
                        mr <= k && &mr * int(2) <= kl,
                    );
                }
            }
            Target::PoiOdd(_) | Target::LoopPoi { .. } => {}
        }
        out.extend(self.root_family(chi)?);
        Ok(out)
    }

    /// Forms with coefficients in `{-1, 0, 1}` and half-integer constants
    /// up to `bound`, used to name factors outside the conjectured family.
    pub fn discovery_family(&self, bound: i64) -> Vec<LinearForm> {
        let vars = self.algebra.even_cartan_names();
        let n = vars.len() as u32;
        let mut out = Vec::new();
        for code in 1..3i64.pow(n) {
            let mut x = code;
            let mut coefs = Vec::new();
            for v in &vars {
                let d = x % 3;
                x /= 3;
                if d != 0 {
                    coefs.push((v.clone(), int(if d == 1 { 1 } else { -1 })));
                }
            }
            // one representative per sign class: first coefficient positive
            if coefs.first().is_some_and(|(_, c)| c.is_negative()) {
                continue;
            }
            for m in -2 * bound..=2 * bound {
                if let Some(f) = form(coefs.clone(), rat(m, 2)) {
                    out.push(f);
                }
            }
        }
        out
    }

    pub fn gram(&self, chi: &Weight) -> Result<ShapovalovGram> {
        if self.odd_cartan {
            bsh_gram(&self.u, &self.sigma, chi, Vacuum::Full)
        } else {
            gram_matrix(&self.u, &self.sigma, chi)
        }
    }

    /// Runs one weight through the determinant and the families.
    pub fn run(&self, chi: &Weight, method: Method, seed: u64) -> Result<ChiReport> {
        self.check_cone(chi)?;
        let start = Instant::now();
        let expected = self.conjectured(chi)?;
        let height: i64 = self
            .coords(chi)?
            .iter()
            .map(|x| x.abs().ceil().to_integer().to_i64().unwrap_or(0))
            .sum();
        let mut candidates: Vec<LinearForm> = expected.iter().map(|e| e.form.normalized()).collect();
        for f in self.discovery_family(height + 1) {
            let f = f.normalized();
            if !candidates.contains(&f) {
                candidates.push(f);
            }
        }
        let gram = self.gram(chi)?;
        let blocks: Vec<usize> = gram.blocks().iter().map(|b| b.rows.len().max(b.cols.len())).collect();
        let exact = match method {
            Method::Exact => true,
            Method::Lines => false,
            Method::Auto => blocks.iter().all(|&b| b <= EXACT_BLOCK_LIMIT),
        };
        let (found, det, scalar, degree, cofactor, cofactor_trivial, consistent, method_name) = if exact {
            let d = gram.determinant();
            let r = factor_over_candidates(&d, &candidates);
            let found: Vec<(String, u32)> = r.factors.iter().map(|(f, m)| (f.normalized().to_string(), *m)).collect();
            let degree = (!d.is_zero()).then(|| d.total_degree().unwrap_or(0) as usize);
            (
                found,
                Some(d.to_string()),
                Some(r.scalar.to_string()),
                degree,
                r.cofactor.to_string(),
                r.cofactor_is_trivial(),
                true,
                "exact".to_string(),
            )
        } else {
            let r = factor_on_lines(&gram, &candidates, 2, seed)?;
            let found = r.factors.iter().map(|f| (f.form.clone(), f.multiplicity)).collect();
            (
                found,
                None,
                None,
                r.degree,
                format!("degree {}", r.cofactor_degree),
                r.cofactor_degree == 0,
                r.consistent,
                format!("random-line(p = {}, seed = {}, lines = {})", r.prime, r.seed, r.lines),
            )
        };
        let keyed: Vec<(String, &Expected)> = expected.iter().map(|e| (e.form.normalized().to_string(), e)).collect();
        let lookup = |key: &String| -> Vec<&Expected> {
            keyed.iter().filter(|(k, _)| k == key).map(|(_, e)| *e).collect()
        };
        let factors: Vec<FoundFactor> = found
            .iter()
            .map(|(f, m)| {
                let matches = lookup(f);
                let holding = matches.iter().find(|e| e.holds);
                let any = matches.first();
                FoundFactor {
                    form: f.clone(),
                    multiplicity: *m,
                    conjectured: holding.is_some(),
                    condition: holding.or(any).map(|e| e.condition.clone()),
                }
            })
            .collect();
        let unexplained = factors.iter().filter(|f| !f.conjectured).map(|f| f.form.clone()).collect();
        let mut absent: Vec<String> = expected
            .iter()
            .filter(|e| e.holds)
            .map(|e| e.form.normalized().to_string())
            .filter(|k| !found.iter().any(|(f, _)| f == k))
            .collect();
        absent.sort();
        absent.dedup();
        Ok(ChiReport {
            target: self.target.to_string(),
            algebra: self.algebra.name().to_string(),
            chi: self.format_chi(chi),
            basis_size: self.u.weight_basis(chi)?.len(),
            gram_size: gram.size(),
            blocks,
            method: method_name,
            det,
            scalar,
            degree,
            factors,
            cofactor,
            cofactor_trivial,
            unexplained,
            absent,
            consistent,
            seconds: start.elapsed().as_secs_f64(),
        })
    }
}
