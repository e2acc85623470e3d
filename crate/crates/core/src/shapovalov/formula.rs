//! Closed-form Shapovalov determinant for algebras with a symmetrizable
//! Cartan matrix.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::liesuper::{root_decomposition, SuperAlgebra};
use crate::scalars::{rat, CartanPoly, FactorizationReport, LinearForm, Rat};

/// A positive root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveRoot {
    pub coords: Vec<i64>,
    pub odd: bool,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaData {
    /// `A_ij = α_j(h_i)`.
    pub cartan_matrix: Matrix,
    /// Parity of each simple root.
    pub odd: Vec<bool>,
    /// Symmetrizer `D`, with `B = DA` symmetric.
    pub d: Vec<Rat>,
    pub b: Matrix,
    /// Names of the coroots `h_i`, used as polynomial variables.
    pub coroots: Vec<String>,
    pub roots: Vec<PositiveRoot>,
}

impl FormulaData {
    /// Finds a symmetrizer and assembles the data. The first index of each
    /// connected component gets `d = 1`.
    pub fn new(cartan_matrix: Matrix, odd: Vec<bool>, coroots: Vec<String>, roots: Vec<PositiveRoot>) -> Result<Self> {
        let n = cartan_matrix.len();
        if odd.len() != n || coroots.len() != n || cartan_matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("Cartan data dimensions disagree".into()));
        }
        let mut d: Vec<Option<Rat>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Rat::one());
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let di = d[i].clone().expect("visited");
                for j in 0..n {
                    let (aij, aji) = (&cartan_matrix[i][j], &cartan_matrix[j][i]);
                    if i == j || (aij.is_zero() && aji.is_zero()) {
                        continue;
                    }
                    if aji.is_zero() || aij.is_zero() {
                        return Err(Error::InvalidInput(format!("Cartan matrix not symmetrizable at ({i}, {j})")));
                    }
                    let dj = &di * aij / aji;
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                        Some(x) if *x != dj => {
                            return Err(Error::InvalidInput("Cartan matrix not symmetrizable".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        let d: Vec<Rat> = d.into_iter().map(|x| x.expect("all visited")).collect();
        let b: Matrix = (0..n)
            .map(|i| (0..n).map(|j| &d[i] * &cartan_matrix[i][j]).collect())
            .collect();
        Ok(FormulaData {
            cartan_matrix,
            odd,
            d,
            b,
            coroots,
            roots,
        })
    }

    /// Reads the data off an algebra whose lattice lists simple roots and
    /// whose torus consists of the matching coroots.
    pub fn from_algebra(g: &SuperAlgebra) -> Result<Self> {
        let lattice = g.lattice().ok_or(Error::MissingSplitter)?;
        let rd = root_decomposition(g)?;
        let mut simple = Vec::new();
        let mut names = Vec::new();
        for (name, v) in lattice.names.iter().zip(&lattice.vectors) {
            if !simple.contains(v) {
                simple.push(v.clone());
                names.push(name.clone());
            }
        }
        let torus = g.torus();
        if simple.len() != torus.len() {
            return Err(Error::InvalidInput(format!(
                "{} simple roots but a torus of dimension {}",
                simple.len(),
                torus.len()
            )));
        }
        let n = simple.len();
        let cartan_matrix: Matrix = (0..n).map(|i| (0..n).map(|j| simple[j].coords[i].clone()).collect()).collect();
        let coroots: Vec<String> = torus
            .iter()
            .map(|&t| g.cartan_name_of(t).unwrap_or(g.label(t)).to_string())
            .collect();
        let mut odd = vec![false; n];
        let mut roots: BTreeMap<(Vec<i64>, bool), usize> = BTreeMap::new();
        for root in rd.positives() {
            let coords = lattice
                .express(&root.weight)
                .ok_or_else(|| Error::InvalidInput(format!("root {} outside the simple-root lattice", root.weight)))?;
            let coords: Vec<i64> = coords
                .iter()
                .map(|(_, c)| {
                    if c.is_integer() && !c.is_negative() {
                        Ok(c.to_integer().try_into().expect("small root coordinate"))
                    } else {
                        Err(Error::InvalidInput(format!("positive root {} is not a nonnegative integer combination", root.weight)))
                    }
                })
                .collect::<Result<_>>()?;
            for &i in &root.indices {
                *roots.entry((coords.clone(), g.parity(i))).or_insert(0) += 1;
            }
            if let Some(k) = simple.iter().position(|s| *s == root.weight) {
                odd[k] = root.indices.iter().any(|&i| g.parity(i));
            }
        }
        let roots = roots
            .into_iter()
            .map(|((coords, odd), multiplicity)| PositiveRoot { coords, odd, multiplicity })
            .collect();
        FormulaData::new(cartan_matrix, odd, coroots, roots)
    }

    pub fn rank(&self) -> usize {
        self.cartan_matrix.len()
    }

    /// `(α, β) = Σ aᵢbⱼ B_ij`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Rat {
        let mut s = Rat::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += &self.b[i][j] * Rat::from_integer((x * y).into());
            }
        }
        s
    }

    /// `F(α) = Σ kᵢ · ½B_ii`.
    pub fn f(&self, a: &[i64]) -> Rat {
        a.iter()
            .enumerate()
            .map(|(i, k)| Rat::from_integer((*k).into()) * &self.b[i][i] * rat(1, 2))
            .sum()
    }

    /// `h_γ = Σ kᵢdᵢhᵢ` plus a constant.
    pub fn h(&self, a: &[i64], constant: Rat) -> LinearForm {
        let coefs = a
            .iter()
            .enumerate()
            .map(|(i, k)| (self.coroots[i].clone(), Rat::from_integer((*k).into()) * &self.d[i]));
        LinearForm::new(coefs, constant).expect("coroot names are valid")
    }

    fn is_root(&self, a: &[i64]) -> bool {
        self.roots.iter().any(|r| r.coords == a)
    }

    /// The reduced sets: even roots `α` with `α/2` not a root and odd roots
    /// with `2α` not a root.
    pub fn reduced_roots(&self) -> Vec<&PositiveRoot> {
        self.roots
            .iter()
            .filter(|r| {
                if r.odd {
                    let double: Vec<i64> = r.coords.iter().map(|x| 2 * x).collect();
                    !self.is_root(&double)
                } else {
                    let half_ok = r.coords.iter().all(|x| x % 2 == 0);
                    let half: Vec<i64> = r.coords.iter().map(|x| x / 2).collect();
                    !(half_ok && self.is_root(&half))
                }
            })
            .collect()
    }
}

/// `K(μ)`: PBW monomials in negative root vectors of weight `−μ`, counted
/// from the positive roots and their multiplicities (odd ones at most once).
pub fn partition_count(fd: &FormulaData, mu: &[i64]) -> u64 {
    partition_count_avoiding(fd, mu, None)
}

/// `K_α(μ)`: as [`partition_count`], but never using the root `α`.
pub fn partition_count_avoiding(fd: &FormulaData, mu: &[i64], alpha: Option<&[i64]>) -> u64 {
    if mu.iter().any(|&x| x < 0) {
        return 0;
    }
    // expand multiplicities into individual generators
    let gens: Vec<(&[i64], bool)> = fd
        .roots
        .iter()
        .filter(|r| Some(r.coords.as_slice()) != alpha)
        .flat_map(|r| std::iter::repeat_n((r.coords.as_slice(), r.odd), r.multiplicity))
        .collect();
    let mut memo: HashMap<(usize, Vec<i64>), u64> = HashMap::new();
    count(&gens, 0, mu.to_vec(), &mut memo)
}

fn count(gens: &[(&[i64], bool)], k: usize, rem: Vec<i64>, memo: &mut HashMap<(usize, Vec<i64>), u64>) -> u64 {
    if rem.iter().all(|&x| x == 0) {
        return 1;
    }
    if k == gens.len() {
        return 0;
    }
    if let Some(&v) = memo.get(&(k, rem.clone())) {
        return v;
    }
    let (root, odd) = gens[k];
    let mut total = 0;
    let mut cur = rem.clone();
    let mut used = 0;
    loop {
        total += count(gens, k + 1, cur.clone(), memo);
        used += 1;
        if odd && used > 1 {
            break;
        }
        for (c, r) in cur.iter_mut().zip(root) {
            *c -= r;
        }
        if cur.iter().any(|&x| x < 0) || root.iter().all(|&x| x == 0) {
            break;
        }
    }
    memo.insert((k, rem), total);
    total
}

/// How exponents are counted for odd roots with `(α, α) = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentRule {
    /// `K(χ − mα)` summed over odd `m`, the same rule as for every other root.
    #[default]
    Literal,
    /// A single factor with exponent `K_α(χ − α)`, partitions avoiding `α`.
    IsotropicAvoiding,
}

/// The product formula, returned already factored. Odd roots contribute
/// only odd `m`.
pub fn kk_formula(fd: &FormulaData, chi: &[i64]) -> Result<FactorizationReport> {
    kk_formula_with(fd, chi, ExponentRule::Literal)
}

/// [`kk_formula`] with a choice of exponent rule for isotropic odd roots.
pub fn kk_formula_with(fd: &FormulaData, chi: &[i64], rule: ExponentRule) -> Result<FactorizationReport> {
    if chi.len() != fd.rank() {
        return Err(Error::InvalidInput(format!("weight has {} coordinates, rank is {}", chi.len(), fd.rank())));
    }
    if chi.iter().any(|&x| x != 0) && partition_count(fd, chi) == 0 {
        return Err(Error::NotAWeight(format!("{chi:?}")));
    }
    let mut exps: Vec<(LinearForm, u32)> = Vec::new();
    for root in fd.reduced_roots() {
        let a = &root.coords;
        let aa = fd.pairing(a, a);
        let avoid = rule == ExponentRule::IsotropicAvoiding && root.odd && aa.is_zero();
        for m in 1i64.. {
            let rest: Vec<i64> = chi.iter().zip(a).map(|(c, x)| c - m * x).collect();
            if rest.iter().any(|&x| x < 0) {
                break;
            }
            if root.odd && m % 2 == 0 {
                continue;
            }
            if avoid && m > 1 {
                break;
            }
            let k = if avoid {
                partition_count_avoiding(fd, &rest, Some(a))
            } else {
                partition_count(fd, &rest)
            } * root.multiplicity as u64;
            if k == 0 {
                continue;
            }
            let constant = fd.f(a) - Rat::from_integer(m.into()) * rat(1, 2) * &aa;
            let form = fd.h(a, constant);
            let k = u32::try_from(k).expect("exponent fits in u32");
            match exps.iter_mut().find(|(f, _)| f.normalized() == form.normalized()) {
                Some((_, e)) => *e += k,
                None => exps.push((form, k)),
            }
        }
    }
    let vars = &fd.coroots;
    // constant forms fold into the scalar
    let mut scalar = Rat::one();
    exps.retain(|(f, k)| {
        if f.is_constant() {
            scalar *= num_traits::pow(f.constant().clone(), *k as usize);
            false
        } else {
            true
        }
    });
    Ok(FactorizationReport {
        scalar,
        factors: exps,
        cofactor: CartanPoly::one(vars),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::{build, Family};
    use crate::scalars::int;
    use std::str::FromStr;

    fn fd(s: &str) -> FormulaData {
        FormulaData::from_algebra(&build(&Family::from_str(s).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn sl2_data() {
        let f = fd("sl(2)");
        assert_eq!(f.cartan_matrix, vec![vec![int(2)]]);
        assert_eq!(f.d, vec![int(1)]);
        let r = kk_formula(&f, &[2]).unwrap();
        let forms: Vec<String> = r.factors.iter().map(|(l, k)| format!("{l}^{k}")).collect();
        assert_eq!(forms, vec!["h1^1", "h1 - 1^1"]);
        let r0 = kk_formula(&f, &[0]).unwrap();
        assert!(r0.factors.is_empty());
    }

    #[test]
    fn sl21_data() {
        let f = fd("sl(2|1)");
        assert_eq!(f.odd, vec![false, true]);
        assert_eq!(f.b[0][1], f.b[1][0]);
        assert_eq!(f.roots.len(), 3);
        assert_eq!(partition_count(&f, &[0, 2]), 0);
        assert_eq!(partition_count(&f, &[1, 2]), 1);
        assert!(matches!(kk_formula(&f, &[0, 2]), Err(Error::NotAWeight(_))));
    }

    #[test]
    fn partition_counts_sl3() {
        let f = fd("sl(3)");
        // α1+α2 = (α1)+(α2) or (α1+α2)
        assert_eq!(partition_count(&f, &[1, 1]), 2);
        assert_eq!(partition_count(&f, &[2, 2]), 3);
    }

    #[test]
    fn literal_reduction_for_osp12_type_data() {
        // one odd simple root whose double is an even root
        let roots = vec![
            PositiveRoot { coords: vec![1], odd: true, multiplicity: 1 },
            PositiveRoot { coords: vec![2], odd: false, multiplicity: 1 },
        ];
        let f = FormulaData::new(vec![vec![int(2)]], vec![true], vec!["h".into()], roots).unwrap();
        assert!(f.reduced_roots().is_empty());
    }

    #[test]
    fn odd_roots_skip_even_multiples() {
        let f = fd("sl(2|1)");
        let chi = [1, 2];
        let r = kk_formula(&f, &chi).unwrap();
        let odd_simple = f.h(&[0, 1], f.f(&[0, 1]) - f.pairing(&[0, 1], &[0, 1]));
        // m = 2 on the odd simple root would give the same form h2; only m = 1 counts
        assert_eq!(r.multiplicity(&odd_simple), partition_count(&f, &[1, 1]) as u32);
    }

    #[test]
    fn isotropic_rule_avoids_the_root() {
        let f = fd("sl(2|1)");
        assert_eq!(partition_count_avoiding(&f, &[1, 1], Some(&[0, 1])), 1);
        let r = kk_formula_with(&f, &[1, 2], ExponentRule::IsotropicAvoiding).unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(kk_formula(&f, &[1, 2]).unwrap().degree(), 3);
    }
}
