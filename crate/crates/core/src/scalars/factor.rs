use num_traits::{One, Zero};
use serde::Serialize;

use super::{CartanPoly, LinearForm, Rat};

/// `p = scalar · Π factorᵢ^{multᵢ} · cofactor`, with the cofactor divisible
/// by none of the candidates that were tried.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub scalar: Rat,
    pub factors: Vec<(LinearForm, u32)>,
    pub cofactor: CartanPoly,
}

impl FactorizationReport {
    /// Multiplies everything back together.
    pub fn expand(&self) -> CartanPoly {
        let mut acc = self.cofactor.scale(&self.scalar);
        for (f, k) in &self.factors {
            acc = &acc * &f.to_poly(self.cofactor.vars()).pow(*k);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn cofactor_is_trivial(&self) -> bool {
        self.cofactor.is_constant()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum::<u32>() + self.cofactor.total_degree().unwrap_or(0)
    }

    pub fn multiplicity(&self, f: &LinearForm) -> u32 {
        let n = f.normalized();
        self.factors
            .iter()
            .find(|(g, _)| g.normalized() == n)
            .map(|(_, k)| *k)
            .unwrap_or(0)
    }
}

#[derive(Serialize)]
struct FactorEntry<'a> {
    form: &'a LinearForm,
    multiplicity: u32,
}

impl Serialize for FactorizationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FactorizationReport", 3)?;
        st.serialize_field("scalar", &self.scalar.to_string())?;
        let factors: Vec<FactorEntry> = self
            .factors
            .iter()
            .map(|(form, multiplicity)| FactorEntry {
                form,
                multiplicity: *multiplicity,
            })
            .collect();
        st.serialize_field("factors", &factors)?;
        st.serialize_field("cofactor", &self.cofactor.to_string())?;
        st.end()
    }
}

/// Divides `p` by the linear form `f` if that is exact; otherwise returns
/// `p` unchanged with `false`.
pub fn trial_divide(p: &CartanPoly, f: &LinearForm) -> (CartanPoly, bool) {
    let d = f.to_poly(p.vars());
    if p.is_zero() {
        return (p.clone(), true);
    }
    match p.div_exact(&d) {
        Some(q) => (q, true),
        None => (p.clone(), false),
    }
}

/// Strips every candidate from `p` as many times as it divides.
///
/// Candidates that agree up to a scalar are tried once. The leftover is
/// normalized so its lexicographically leading coefficient is 1, the
/// removed constant moving into `scalar`.
pub fn factor_over_candidates(p: &CartanPoly, candidates: &[LinearForm]) -> FactorizationReport {
    if p.is_zero() {
        return FactorizationReport {
            scalar: Rat::zero(),
            factors: Vec::new(),
            cofactor: CartanPoly::one(p.vars()),
        };
    }
    let mut seen: Vec<LinearForm> = Vec::new();
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for c in candidates {
        let n = c.normalized();
        if seen.contains(&n) {
            continue;
        }
        seen.push(n);
        if c.is_constant() {
            continue;
        }
        let mut k = 0;
        loop {
            let (q, exact) = trial_divide(&rest, c);
            if !exact {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            factors.push((c.clone(), k));
        }
    }
    let lead = rest.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::one);
    let cofactor = rest.scale(&(Rat::one() / &lead));
    FactorizationReport {
        scalar: lead,
        factors,
        cofactor,
    }
}
