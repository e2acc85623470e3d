//! Builders for the shipped families.
//!
//! Poisson-type algebras come from Grassmann monomials under the Poisson
//! bracket in the `ξη` presentation. Matrix families come from explicit
//! matrices in `gl(m|n)` under the supercommutator; structure constants are
//! read off by solving for coordinates, so quotients are handled by adding
//! the killed matrices as extra spanning vectors whose coordinates are
//! dropped.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{add_scaled, Family, Form, Lattice, SuperAlgebra, Vector, Weight};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Presentation};
use crate::linalg::{self, Matrix};
use crate::scalars::{int, sign, Rat};

pub fn build(family: &Family) -> Result<SuperAlgebra> {
    let g = match family {
        Family::Poisson(m) => poisson_like(*m, PoiVariant::Full)?,
        Family::Hamiltonian(m) => poisson_like(*m, PoiVariant::ModConstants)?,
        Family::HamiltonianPrime(m) => poisson_like(*m, PoiVariant::Derived)?,
        Family::Gl(m, n) => general_linear(*m, *n, false)?,
        Family::Sl(m, n) => general_linear(*m, *n, true)?,
        Family::Queer(n) => queer(*n, false, false)?,
        Family::SpecialQueer(n) => queer(*n, true, false)?,
        Family::ProjectiveQueer(n) => queer(*n, false, true)?,
        Family::ProjectiveSpecialQueer(n) => queer(*n, true, true)?,
        Family::DirectSum(parts) => {
            let built = parts.iter().map(build).collect::<Result<Vec<_>>>()?;
            return SuperAlgebra::direct_sum(&built);
        }
        Family::Custom => {
            return Err(Error::InvalidParameters(
                "custom algebras are loaded from a structure-constant table".into(),
            ))
        }
    };
    Ok(g.with_family(family.clone()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PoiVariant {
    Full,
    ModConstants,
    Derived,
}

fn poisson_like(m: usize, variant: PoiVariant) -> Result<SuperAlgebra> {
    if m == 0 || m > 8 {
        return Err(Error::InvalidParameters(format!("poi(0|m) needs 1 <= m <= 8, got {m}")));
    }
    let p = Presentation::XiEta;
    let top = (1u32 << m) - 1;
    let mut masks: Vec<u32> = (0..=top)
        .filter(|&s| match variant {
            PoiVariant::Full => true,
            PoiVariant::ModConstants => s != 0,
            PoiVariant::Derived => s != 0 && s != top,
        })
        .collect();
    masks.sort_by_key(|&s| (s.count_ones(), s));
    let index: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let elems: Vec<GrassmannElement> = masks.iter().map(|&s| GrassmannElement::monomial(m, p, s, Rat::one())).collect();
    let labels: Vec<String> = masks.iter().map(|&s| GrassmannElement::monomial_label(m, p, s)).collect();
    let parities: Vec<bool> = masks.iter().map(|s| s.count_ones() % 2 == 1).collect();

    let mut brackets = Vec::new();
    for (i, f) in elems.iter().enumerate() {
        for (j, g) in elems.iter().enumerate() {
            let b = f.poisson(g)?;
            let mut v = Vector::new();
            for (s, c) in b.terms() {
                match index.get(&s) {
                    Some(&k) => add_scaled(&mut v, k, c.clone()),
                    None if s == 0 && variant != PoiVariant::Full => {}
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "bracket leaves the span at monomial {}",
                            GrassmannElement::monomial_label(m, p, s)
                        )))
                    }
                }
            }
            if !v.is_empty() {
                brackets.push(((i, j), v));
            }
        }
    }
    let mut g = SuperAlgebra::from_table("", labels, parities, brackets)?;

    if variant == PoiVariant::Full {
        let d = elems.len();
        let mut gram = linalg::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                gram[i][j] = elems[i].mul(&elems[j])?.berezin();
            }
        }
        g = g.with_form(Some(Form { gram, odd: m % 2 == 1 }))?;
    }

    // Cartan: products of ξᵢηᵢ, optionally times θ.
    let r = m / 2;
    let pair_bits = |s: u32| -> Option<String> {
        let mut bits = String::new();
        for i in 0..r {
            match (s >> (2 * i)) & 0b11 {
                0b00 => bits.push('0'),
                0b11 => bits.push('1'),
                _ => return None,
            }
        }
        Some(bits)
    };
    let theta_bit = if m % 2 == 1 { 1u32 << (m - 1) } else { 0 };
    let mut cartan = Vec::new();
    let mut names = Vec::new();
    for (i, &s) in masks.iter().enumerate() {
        if let Some(bits) = pair_bits(s & !theta_bit) {
            cartan.push(i);
            let prefix = if s & theta_bit != 0 { "t" } else { "h" };
            names.push(format!("{prefix}{bits}"));
        }
    }
    let torus: Vec<usize> = (0..r).filter_map(|i| index.get(&(0b11 << (2 * i))).copied()).collect();
    g = g.with_cartan(cartan, names)?.with_torus(torus.clone())?;
    if torus.len() == r && r > 0 {
        let h: Vec<Rat> = (0..r).map(|i| -int(3i64.pow((r - 1 - i) as u32))).collect();
        g = g.with_splitter(Some(h))?;
        let lattice_gens: Vec<usize> = (0..r).map(|i| index[&(1 << (2 * i))]).collect();
        let names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
        let lattice = lattice_from_generators(&g, names, &lattice_gens);
        g = g.with_lattice(Some(lattice))?;
    }
    Ok(g)
}

/// Weight vectors of the given basis vectors, assuming they are torus eigenvectors.
fn lattice_from_generators(g: &SuperAlgebra, names: Vec<String>, gens: &[usize]) -> Lattice {
    let vectors = gens
        .iter()
        .map(|&j| Weight {
            coords: g.torus().iter().map(|&t| g.structure_constant(t, j, j)).collect(),
        })
        .collect();
    Lattice { names, vectors }
}

type SparseMat = BTreeMap<(usize, usize), Rat>;

fn unit(i: usize, j: usize) -> SparseMat {
    let mut m = SparseMat::new();
    m.insert((i, j), Rat::one());
    m
}

fn combo(parts: &[(Rat, SparseMat)]) -> SparseMat {
    let mut out = SparseMat::new();
    for (c, m) in parts {
        for (k, v) in m {
            let e = out.entry(*k).or_insert_with(Rat::zero);
            *e += c * v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Matrices in `gl(m|n)` spanning a subalgebra, plus matrices spanning an
/// ideal to quotient by.
struct MatrixModel {
    even_size: usize,
    basis: Vec<SparseMat>,
    killed: Vec<SparseMat>,
    positions: Vec<(usize, usize)>,
    left_inverse: Matrix,
}

impl MatrixModel {
    fn new(even_size: usize, basis: Vec<SparseMat>, killed: Vec<SparseMat>) -> Result<Self> {
        let all: Vec<&SparseMat> = basis.iter().chain(&killed).collect();
        let mut positions: Vec<(usize, usize)> = all.iter().flat_map(|m| m.keys().copied()).collect();
        positions.sort();
        positions.dedup();
        let cols: Matrix = all
            .iter()
            .map(|m| positions.iter().map(|p| m.get(p).cloned().unwrap_or_else(Rat::zero)).collect())
            .collect();
        // cols is (basis × positions); left inverse of its transpose.
        let mt = linalg::transpose(&cols);
        let gram = linalg::mat_mul(&cols, &mt);
        let inv = linalg::inverse(&gram)
            .ok_or_else(|| Error::InvalidParameters("matrix basis is linearly dependent".into()))?;
        let left_inverse = linalg::mat_mul(&inv, &cols);
        Ok(MatrixModel {
            even_size,
            basis,
            killed,
            positions,
            left_inverse,
        })
    }

    fn entry_odd(&self, i: usize, j: usize) -> bool {
        (i >= self.even_size) != (j >= self.even_size)
    }

    fn parity(&self, m: &SparseMat) -> bool {
        m.keys().next().map(|&(i, j)| self.entry_odd(i, j)).unwrap_or(false)
    }

    fn product(a: &SparseMat, b: &SparseMat) -> SparseMat {
        let mut out = SparseMat::new();
        for ((i, k), x) in a {
            for ((k2, j), y) in b {
                if k == k2 {
                    let e = out.entry((*i, *j)).or_insert_with(Rat::zero);
                    *e += x * y;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn supercommutator(&self, a: &SparseMat, b: &SparseMat) -> SparseMat {
        let s = sign(self.parity(a) && self.parity(b));
        combo(&[(Rat::one(), Self::product(a, b)), (-s, Self::product(b, a))])
    }

    fn coordinates(&self, x: &SparseMat) -> Result<Vector> {
        if x.keys().any(|p| self.positions.binary_search(p).is_err()) {
            return Err(Error::InvalidInput("bracket leaves the matrix span".into()));
        }
        let vec: Vec<Rat> = self
            .positions
            .iter()
            .map(|p| x.get(p).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let coords: Vec<Rat> = self
            .left_inverse
            .iter()
            .map(|row| row.iter().zip(&vec).map(|(a, b)| a * b).sum())
            .collect();
        let parts: Vec<(Rat, SparseMat)> = coords
            .iter()
            .zip(self.basis.iter().chain(&self.killed))
            .map(|(c, m)| (c.clone(), m.clone()))
            .collect();
        if combo(&parts) != *x {
            return Err(Error::InvalidInput("bracket leaves the matrix span".into()));
        }
        Ok(coords
            .into_iter()
            .take(self.basis.len())
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    fn algebra(&self, labels: Vec<String>) -> Result<SuperAlgebra> {
        let parities = self.basis.iter().map(|m| self.parity(m)).collect();
        let mut brackets = Vec::new();
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let v = self.coordinates(&self.supercommutator(a, b))?;
                if !v.is_empty() {
                    brackets.push(((i, j), v));
                }
            }
        }
        SuperAlgebra::from_table("", labels, parities, brackets)
    }

    fn gram(&self, f: impl Fn(&SparseMat) -> Rat) -> Matrix {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| f(&Self::product(a, b))).collect())
            .collect()
    }
}

fn entry_label(prefix: &str, i: usize, j: usize, big: bool) -> String {
    if big {
        format!("{prefix}{}_{}", i + 1, j + 1)
    } else {
        format!("{prefix}{}{}", i + 1, j + 1)
    }
}

/// Splitter `H` on the torus with value 1 on every simple root, when one exists.
fn attach_splitter_and_lattice(
    mut g: SuperAlgebra,
    simple_root_vectors: &[usize],
    names: Vec<String>,
) -> Result<SuperAlgebra> {
    let lattice = lattice_from_generators(&g, names, simple_root_vectors);
    let rows: Matrix = lattice.vectors.iter().map(|w| w.coords.clone()).collect();
    let ones = vec![Rat::one(); rows.len()];
    let h = if rows.is_empty() { None } else { linalg::solve(&rows, &ones) };
    g = g.with_lattice(Some(lattice))?;
    if let Some(h) = h {
        let candidate = g.clone().with_splitter(Some(h.clone()))?;
        if super::root_decomposition(&candidate).is_ok() {
            g = candidate;
        }
    }
    Ok(g)
}

fn general_linear(m: usize, n: usize, special: bool) -> Result<SuperAlgebra> {
    let size = m + n;
    if m == 0 || size < 2 && special || size == 0 {
        return Err(Error::InvalidParameters(format!("bad sizes ({m}|{n})")));
    }
    let big = size >= 10;
    let s = |i: usize| if i < m { Rat::one() } else { -Rat::one() };
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut cartan = Vec::new();
    let mut cartan_names = Vec::new();
    let mut simple = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i != j {
                if j == i + 1 {
                    simple.push(basis.len());
                }
                basis.push(unit(i, j));
                labels.push(entry_label("E", i, j, big));
            }
        }
    }
    if special {
        for i in 0..size - 1 {
            cartan.push(basis.len());
            let name = format!("h{}", i + 1);
            cartan_names.push(name.clone());
            labels.push(name);
            basis.push(combo(&[(Rat::one(), unit(i, i)), (-(s(i) * s(i + 1)), unit(i + 1, i + 1))]));
        }
    } else {
        for i in 0..size {
            cartan.push(basis.len());
            let name = entry_label("E", i, i, big);
            cartan_names.push(name.clone());
            labels.push(name);
            basis.push(unit(i, i));
        }
    }
    let model = MatrixModel::new(m, basis, Vec::new())?;
    let mut g = model.algebra(labels)?;
    let gram = model.gram(|z| (0..size).map(|i| s(i) * z.get(&(i, i)).cloned().unwrap_or_else(Rat::zero)).sum());
    g = g.with_form(Some(Form { gram, odd: false }))?;
    g = g.with_cartan(cartan, cartan_names)?;
    let mut names: Vec<String> = (1..size).map(|i| format!("a{i}")).collect();
    let mut simple_vecs = simple.clone();
    if size == 2 {
        names.push("a".into());
        simple_vecs.push(simple[0]);
    }
    attach_splitter_and_lattice(g, &simple_vecs, names)
}

fn queer(n: usize, special: bool, projective: bool) -> Result<SuperAlgebra> {
    if n == 0 || (projective || special) && n < 2 {
        return Err(Error::InvalidParameters(format!("queer algebras need n >= 2 here, got {n}")));
    }
    let big = n >= 10;
    let a = |i: usize, j: usize| combo(&[(Rat::one(), unit(i, j)), (Rat::one(), unit(n + i, n + j))]);
    let b = |i: usize, j: usize| combo(&[(Rat::one(), unit(i, n + j)), (Rat::one(), unit(n + i, j))]);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut cartan = Vec::new();
    let mut cartan_names = Vec::new();
    let mut simple = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if j == i + 1 {
                    simple.push(basis.len());
                }
                basis.push(a(i, j));
                labels.push(entry_label("a", i, j, big));
            }
        }
    }
    let diag_a = if projective { n - 1 } else { n };
    for i in 0..diag_a {
        cartan.push(basis.len());
        let l = entry_label("a", i, i, big);
        cartan_names.push(l.clone());
        labels.push(l);
        basis.push(a(i, i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(b(i, j));
                labels.push(entry_label("b", i, j, big));
            }
        }
    }
    if special {
        for i in 0..n - 1 {
            cartan.push(basis.len());
            let l = format!("d{}", i + 1);
            cartan_names.push(l.clone());
            labels.push(l);
            basis.push(combo(&[(Rat::one(), b(i, i)), (-Rat::one(), b(i + 1, i + 1))]));
        }
    } else {
        for i in 0..n {
            cartan.push(basis.len());
            let l = entry_label("b", i, i, big);
            cartan_names.push(l.clone());
            labels.push(l);
            basis.push(b(i, i));
        }
    }
    let killed = if projective {
        vec![combo(&(0..n).map(|i| (Rat::one(), a(i, i))).collect::<Vec<_>>())]
    } else {
        Vec::new()
    };
    let model = MatrixModel::new(n, basis, killed)?;
    let mut g = model.algebra(labels)?;
    let form = if projective && !special {
        // The odd trace does not descend to q(n)/E and no other odd
        // invariant form exists, so the attached form is zero.
        let d = g.dim();
        Form {
            gram: linalg::zeros(d, d),
            odd: true,
        }
    } else {
        let gram = model.gram(|z| (0..n).map(|i| z.get(&(i, n + i)).cloned().unwrap_or_else(Rat::zero)).sum());
        Form { gram, odd: true }
    };
    g = g.with_form(Some(form))?.with_cartan(cartan, cartan_names)?;
    let names = (1..n).map(|i| format!("a{i}")).collect();
    attach_splitter_and_lattice(g, &simple, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn fam(s: &str) -> SuperAlgebra {
        build(&Family::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(fam("poi(0|4)").dim(), 16);
        assert_eq!(fam("poi(0|3)").dim(), 8);
        assert_eq!(fam("h(0|4)").dim(), 15);
        assert_eq!(fam("h'(0|4)").dim(), 14);
        assert_eq!(fam("gl(2|1)").dim(), 9);
        assert_eq!(fam("sl(2|1)").dim(), 8);
        assert_eq!(fam("sl(2)").dim(), 3);
        assert_eq!(fam("q(2)").dim(), 8);
        assert_eq!(fam("sq(2)").dim(), 7);
        assert_eq!(fam("pq(2)").dim(), 7);
        assert_eq!(fam("psq(2)").dim(), 6);
        assert_eq!(fam("sl(2)+sl(3)").dim(), 11);
    }

    #[test]
    fn form_parities() {
        assert!(!fam("poi(0|4)").form().unwrap().odd);
        assert!(fam("poi(0|3)").form().unwrap().odd);
        assert!(fam("q(2)").form().unwrap().odd);
        assert!(fam("h(0|4)").form().is_none());
    }

    #[test]
    fn sl2_brackets() {
        let g = fam("sl(2)");
        let e = g.index_of("E12").unwrap();
        let f = g.index_of("E21").unwrap();
        let h = g.index_of("h1").unwrap();
        assert_eq!(g.bracket(e, f), &[(h, int(1))]);
        assert_eq!(g.bracket(h, e), &[(e, int(2))]);
        assert_eq!(g.form_value(h, h), int(2));
        assert_eq!(g.form_value(e, f), int(1));
    }

    #[test]
    fn cartan_of_poisson() {
        let g = fam("poi(0|5)");
        assert_eq!(g.even_cartan_names(), vec!["h00", "h10", "h01", "h11"]);
        assert_eq!(g.odd_cartan().len(), 4);
        assert_eq!(g.torus().len(), 2);
        let g3 = fam("poi(0|3)");
        assert_eq!(g3.even_cartan_names(), vec!["h0", "h1"]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(build(&Family::Poisson(0)).is_err());
        assert!(build(&Family::ProjectiveQueer(1)).is_err());
        assert!(build(&Family::Sl(1, 0)).is_err());
        assert!(build(&Family::Custom).is_err());
    }
}
