//! The universal enveloping superalgebra in a PBW basis.
//!
//! Generators are renumbered into a global order: negative root vectors,
//! then the Cartan subalgebra, then positive root vectors. A monomial is the
//! non-decreasing list of generator positions; odd positions occur at most
//! once. Products are straightened with `x y = (-1)^{p(x)p(y)} y x + [x, y]`
//! and `x x = ½[x, x]` for odd `x`, memoizing `generator · monomial`.

mod hc;
mod sigma;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

pub use hc::{weight_basis_count, CliffordElement};
pub use sigma::{SigmaMap, SigmaMode};

use crate::error::{Error, Result};
use crate::liesuper::{root_decomposition, RootDatum, SuperAlgebra, Vector, Weight};
use crate::scalars::{rat, sign, Rat};

/// Non-decreasing generator positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PbwMonomial(pub Vec<u32>);

impl PbwMonomial {
    pub fn one() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn positions(&self) -> &[u32] {
        &self.0
    }

    /// `(position, exponent)` pairs.
    pub fn factors(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PbwElement {
    terms: BTreeMap<PbwMonomial, Rat>,
}

impl PbwElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rat::one())
    }

    pub fn scalar(c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(PbwMonomial::one(), c);
        e
    }

    pub fn monomial(m: PbwMonomial, c: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest monomial length, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(PbwMonomial::degree).max()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElement, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scale(&self, c: &Rat) -> PbwElement {
        let mut out = PbwElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn retain(&mut self, f: impl FnMut(&PbwMonomial, &mut Rat) -> bool) {
        self.terms.retain(f);
    }
}

type Cache = RwLock<HashMap<(u32, PbwMonomial), Arc<PbwElement>>>;

/// An algebra together with its PBW order and a straightening cache.
#[derive(Debug)]
pub struct PbwAlgebra {
    g: SuperAlgebra,
    order: Vec<usize>,
    pos_of: Vec<u32>,
    parity: Vec<bool>,
    table: Vec<Vec<Vec<(u32, Rat)>>>,
    n_neg: usize,
    n_cartan: usize,
    roots: Option<RootDatum>,
    cache: Cache,
}

impl PbwAlgebra {
    /// PBW order from the root decomposition: negatives by decreasing
    /// `α(H)`, Cartan in builder order, positives by increasing `α(H)`,
    /// ties broken by label.
    pub fn new(g: &SuperAlgebra) -> Result<Self> {
        let rd = root_decomposition(g)?;
        let key = |i: &usize| (rd.value_of(*i).clone(), g.label(*i).to_string());
        let mut neg = rd.negative_vectors();
        neg.sort_by(|a, b| {
            let (va, la) = key(a);
            let (vb, lb) = key(b);
            vb.cmp(&va).then(la.cmp(&lb))
        });
        let mut pos = rd.positive_vectors();
        pos.sort_by_key(key);
        let n_neg = neg.len();
        let n_cartan = g.cartan().len();
        let order: Vec<usize> = neg.into_iter().chain(g.cartan().iter().copied()).chain(pos).collect();
        Self::with_order(g, order, n_neg, n_cartan, Some(rd))
    }

    /// Builder basis order, without a triangular decomposition. Enough for
    /// Casimir computations on algebras with no splitter.
    pub fn in_basis_order(g: &SuperAlgebra) -> Result<Self> {
        Self::with_order(g, (0..g.dim()).collect(), 0, 0, None)
    }

    fn with_order(
        g: &SuperAlgebra,
        order: Vec<usize>,
        n_neg: usize,
        n_cartan: usize,
        roots: Option<RootDatum>,
    ) -> Result<Self> {
        let d = g.dim();
        if order.len() != d {
            return Err(Error::InvalidInput("PBW order must list every basis vector once".into()));
        }
        let mut pos_of = vec![u32::MAX; d];
        for (p, &i) in order.iter().enumerate() {
            pos_of[i] = p as u32;
        }
        if pos_of.contains(&u32::MAX) {
            return Err(Error::InvalidInput("PBW order must list every basis vector once".into()));
        }
        let parity = order.iter().map(|&i| g.parity(i)).collect();
        let table = order
            .iter()
            .map(|&i| {
                order
                    .iter()
                    .map(|&j| {
                        let mut v: Vec<(u32, Rat)> = g.bracket(i, j).iter().map(|(k, c)| (pos_of[*k], c.clone())).collect();
                        v.sort_by_key(|(k, _)| *k);
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(PbwAlgebra {
            g: g.clone(),
            order,
            pos_of,
            parity,
            table,
            n_neg,
            n_cartan,
            roots,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.g
    }

    pub fn roots(&self) -> Option<&RootDatum> {
        self.roots.as_ref()
    }

    pub fn position(&self, basis_index: usize) -> u32 {
        self.pos_of[basis_index]
    }

    pub fn basis_index(&self, position: u32) -> usize {
        self.order[position as usize]
    }

    pub fn is_negative(&self, p: u32) -> bool {
        (p as usize) < self.n_neg
    }

    pub fn is_cartan(&self, p: u32) -> bool {
        let p = p as usize;
        p >= self.n_neg && p < self.n_neg + self.n_cartan
    }

    pub fn is_positive(&self, p: u32) -> bool {
        self.roots.is_some() && (p as usize) >= self.n_neg + self.n_cartan
    }

    /// Positions of the negative root vectors.
    pub fn negative_positions(&self) -> std::ops::Range<u32> {
        0..self.n_neg as u32
    }

    pub fn positive_positions(&self) -> std::ops::Range<u32> {
        if self.roots.is_some() {
            (self.n_neg + self.n_cartan) as u32..self.order.len() as u32
        } else {
            0..0
        }
    }

    pub fn position_parity(&self, p: u32) -> bool {
        self.parity[p as usize]
    }

    pub fn monomial_parity(&self, m: &PbwMonomial) -> bool {
        m.0.iter().filter(|&&p| self.parity[p as usize]).count() % 2 == 1
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity_of(&self, e: &PbwElement) -> Option<bool> {
        let mut it = e.terms.keys().map(|m| self.monomial_parity(m));
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    /// Weight of a monomial (sum of generator weights).
    pub fn monomial_weight(&self, m: &PbwMonomial) -> Option<Weight> {
        let rd = self.roots.as_ref()?;
        let mut w = Weight::zero(self.g.torus().len());
        for &p in &m.0 {
            w = &w + rd.weight_of(self.basis_index(p));
        }
        Some(w)
    }

    pub fn generator(&self, basis_index: usize) -> PbwElement {
        PbwElement::monomial(PbwMonomial(vec![self.pos_of[basis_index]]), Rat::one())
    }

    pub fn from_vector(&self, v: &Vector) -> PbwElement {
        let mut e = PbwElement::zero();
        for (i, c) in v {
            e.add_term(PbwMonomial(vec![self.pos_of[*i]]), c.clone());
        }
        e
    }

    /// Ordered product of basis vectors, straightened.
    pub fn word(&self, basis_indices: &[usize]) -> PbwElement {
        let mut acc = PbwElement::one();
        for &i in basis_indices.iter().rev() {
            acc = self.gen_times(self.pos_of[i], &acc);
        }
        acc
    }

    /// `x · m` for a generator position and a PBW monomial.
    pub fn gen_times_monomial(&self, x: u32, m: &PbwMonomial) -> Arc<PbwElement> {
        let first = m.0.first().copied();
        match first {
            None => return Arc::new(PbwElement::monomial(PbwMonomial(vec![x]), Rat::one())),
            Some(y) if x < y || (x == y && !self.parity[x as usize]) => {
                let mut v = Vec::with_capacity(m.0.len() + 1);
                v.push(x);
                v.extend_from_slice(&m.0);
                return Arc::new(PbwElement::monomial(PbwMonomial(v), Rat::one()));
            }
            _ => {}
        }
        let key = (x, m.clone());
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let y = first.unwrap();
        let rest = PbwMonomial(m.0[1..].to_vec());
        let mut out = PbwElement::zero();
        if x == y {
            // Odd x: x x = ½ [x, x].
            for (k, c) in &self.table[x as usize][x as usize] {
                out.add_scaled(&self.gen_times_monomial(*k, &rest), &(c * rat(1, 2)));
            }
        } else {
            // x y rest = s y (x rest) + [x, y] rest
            let s = sign(self.parity[x as usize] && self.parity[y as usize]);
            let xr = self.gen_times_monomial(x, &rest);
            for (mono, c) in xr.terms() {
                out.add_scaled(&self.gen_times_monomial(y, mono), &(c * &s));
            }
            for (k, c) in &self.table[x as usize][y as usize] {
                out.add_scaled(&self.gen_times_monomial(*k, &rest), c);
            }
        }
        let out = Arc::new(out);
        self.cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// `x · e` for a generator position.
    pub fn gen_times(&self, x: u32, e: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (m, c) in e.terms() {
            out.add_scaled(&self.gen_times_monomial(x, m), c);
        }
        out
    }

    pub fn monomial_times(&self, a: &PbwMonomial, e: &PbwElement) -> PbwElement {
        let mut acc = e.clone();
        for &x in a.0.iter().rev() {
            acc = self.gen_times(x, &acc);
        }
        acc
    }

    pub fn mul(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (m, c) in a.terms() {
            out.add_scaled(&self.monomial_times(m, b), c);
        }
        out
    }

    /// Supercommutator `[a, b] = ab - (-1)^{p(a)p(b)} ba`; `a` and `b` must
    /// be homogeneous.
    pub fn commutator(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        let pa = self.parity_of(a).expect("commutator needs homogeneous arguments");
        let pb = self.parity_of(b).expect("commutator needs homogeneous arguments");
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        let mut out = ab;
        out.add_scaled(&ba, &-sign(pa && pb));
        out
    }

    pub fn format_monomial(&self, m: &PbwMonomial) -> String {
        if m.0.is_empty() {
            return "1".into();
        }
        m.factors()
            .iter()
            .map(|&(p, e)| {
                let l = self.g.label(self.basis_index(p));
                if e == 1 {
                    l.to_string()
                } else {
                    format!("{l}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text, terms in PBW order.
    pub fn format(&self, e: &PbwElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (m, c)) in e.terms().enumerate() {
            crate::scalars::fmt_coeff_prefix(c, n == 0, &mut out, !m.0.is_empty());
            if !m.0.is_empty() {
                out.push_str(&self.format_monomial(m));
            }
        }
        out
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::{build, Family};
    use crate::scalars::int;
    use proptest::prelude::*;
    use std::str::FromStr;

    fn pbw(s: &str) -> PbwAlgebra {
        PbwAlgebra::new(&build(&Family::from_str(s).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn sl2_straightening() {
        let u = pbw("sl(2)");
        let g = u.algebra();
        let (e, f, h) = (g.index_of("E12").unwrap(), g.index_of("E21").unwrap(), g.index_of("h1").unwrap());
        assert_eq!(u.format(&u.word(&[e, f])), "E21*E12 + h1");
        assert_eq!(u.format(&u.word(&[h, h])), "h1^2");
        assert_eq!(u.format(&u.word(&[e, h])), "h1*E12 - 2*E12");
        assert_eq!(u.format(&u.word(&[f, e])), "E21*E12");
    }

    #[test]
    fn odd_square() {
        let u = pbw("sl(2|1)");
        let g = u.algebra();
        for i in 0..g.dim() {
            if g.parity(i) {
                let lhs = u.word(&[i, i]);
                let half = u.from_vector(&g.bracket(i, i).iter().cloned().collect()).scale(&rat(1, 2));
                assert_eq!(lhs, half, "{}", g.label(i));
            }
        }
        let u = pbw("poi(0|3)");
        let th = u.algebra().index_of("th").unwrap();
        // θ·θ = ½{θ,θ}, a multiple of the central basis vector `1`
        let one = u.algebra().index_of("1").unwrap();
        assert_eq!(u.word(&[th, th]), u.generator(one).scale(&rat(-1, 2)));
    }

    #[test]
    fn generator_commutators_match_bracket() {
        for s in ["sl(2|1)", "poi(0|4)", "q(2)"] {
            let u = pbw(s);
            let g = u.algebra();
            for i in 0..g.dim() {
                for j in 0..g.dim() {
                    let c = u.commutator(&u.generator(i), &u.generator(j));
                    let expect = u.from_vector(&g.bracket(i, j).iter().cloned().collect());
                    assert_eq!(c, expect, "{s}: [{}, {}]", g.label(i), g.label(j));
                }
            }
        }
    }

    #[test]
    fn scalar_identity() {
        let u = pbw("sl(2)");
        let x = u.word(&[0, 1, 2]);
        assert_eq!(u.mul(&PbwElement::one(), &x), x);
        assert_eq!(u.mul(&x, &PbwElement::scalar(int(3))), x.scale(&int(3)));
    }

    fn random_word(d: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..d, 0..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn associativity_sl21(a in random_word(8), b in random_word(8), c in random_word(8)) {
            let u = pbw("sl(2|1)");
            let (x, y, z) = (u.word(&a), u.word(&b), u.word(&c));
            prop_assert_eq!(u.mul(&u.mul(&x, &y), &z), u.mul(&x, &u.mul(&y, &z)));
        }

        #[test]
        fn associativity_poi3(a in random_word(8), b in random_word(8), c in random_word(8)) {
            let u = pbw("poi(0|3)");
            let (x, y, z) = (u.word(&a), u.word(&b), u.word(&c));
            prop_assert_eq!(u.mul(&u.mul(&x, &y), &z), u.mul(&x, &u.mul(&y, &z)));
        }

        #[test]
        fn word_concatenation(a in random_word(8), b in random_word(8)) {
            let u = pbw("q(2)");
            let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(u.word(&ab), u.mul(&u.word(&a), &u.word(&b)));
        }
    }
}
