use num_traits::{One, Zero};

use super::{PbwAlgebra, PbwElement, PbwMonomial};
use crate::error::{Error, Result};
use crate::grassmann::{GrassmannElement, Presentation};
use crate::liesuper::{Family, SuperAlgebra, Vector};
use crate::linalg::solve_gf2;
use crate::scalars::{sign, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SigmaMode {
    /// `σ([x, y]) = [σ(y), σ(x)]` and `σ(ab) = σ(b)σ(a)`.
    #[default]
    IgnoreSignRule,
    /// `σ([x, y]) = (-1)^{p(x)p(y)} [σ(y), σ(x)]`, with the matching sign on products.
    RespectSignRule,
}

/// A signed permutation of the basis used as the Chevalley-type
/// anti-involution.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaMap {
    images: Vec<(usize, Rat)>,
    mode: SigmaMode,
}

fn swapped_matrix_label(label: &str) -> Option<String> {
    let (prefix, tail) = match label.rfind('.') {
        Some(p) => label.split_at(p + 1),
        None => ("", label),
    };
    let head_len = tail.find(|c: char| c.is_ascii_digit())?;
    let (head, digits) = tail.split_at(head_len);
    if let Some((a, b)) = digits.split_once('_') {
        return Some(format!("{prefix}{head}{b}_{a}"));
    }
    if digits.len() == 2 && digits.chars().all(|c| c.is_ascii_digit()) {
        let (a, b) = digits.split_at(1);
        return Some(format!("{prefix}{head}{b}{a}"));
    }
    None
}

impl SigmaMap {
    pub fn from_images(images: Vec<(usize, Rat)>, mode: SigmaMode) -> Self {
        SigmaMap { images, mode }
    }

    /// The default involution: `ξᵢ ↔ ηᵢ` extended anti-multiplicatively for
    /// Poisson-type algebras; transposition for matrix families. Cartan
    /// vectors not matched by either rule are fixed. The result is
    /// validated before it is returned.
    pub fn default_for(g: &SuperAlgebra) -> Result<Self> {
        let images = match g.family() {
            Family::Poisson(m) | Family::Hamiltonian(m) | Family::HamiltonianPrime(m) => poisson_images(g, *m)?,
            _ => (0..g.dim())
                .map(|i| {
                    if g.cartan().contains(&i) {
                        return Ok((i, Rat::one()));
                    }
                    let target = swapped_matrix_label(g.label(i))
                        .and_then(|l| g.index_of(&l))
                        .ok_or_else(|| Error::InvalidSigma(format!("no transpose partner for `{}`", g.label(i))))?;
                    Ok((target, Rat::one()))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let s = SigmaMap {
            images,
            mode: SigmaMode::IgnoreSignRule,
        };
        s.validate(g)?;
        Ok(s)
    }

    pub fn mode(&self) -> SigmaMode {
        self.mode
    }

    pub fn image(&self, i: usize) -> &(usize, Rat) {
        &self.images[i]
    }

    pub fn apply_vector(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            let (j, s) = &self.images[*i];
            crate::liesuper::add_scaled(&mut out, *j, c * s);
        }
        out
    }

    /// Converts to the sign-respecting convention by solving for basis
    /// signs `s_k = (-1)^{p_i p_j} s_i s_j` over every nonzero `c_{ij}^k`.
    pub fn respecting(&self, g: &SuperAlgebra) -> Result<Self> {
        if self.mode == SigmaMode::RespectSignRule {
            return Ok(self.clone());
        }
        let d = g.dim();
        let mut eqs = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, _) in g.bracket(i, j) {
                    eqs.push((vec![*k, i, j], g.parity(i) && g.parity(j)));
                }
            }
        }
        let signs = solve_gf2(d, &eqs)
            .ok_or_else(|| Error::InvalidSigma("no sign twist makes σ respect the Sign Rule".into()))?;
        let images = self
            .images
            .iter()
            .zip(&signs)
            .map(|((j, c), &s)| (*j, c * sign(s)))
            .collect();
        let out = SigmaMap {
            images,
            mode: SigmaMode::RespectSignRule,
        };
        out.validate(g)?;
        Ok(out)
    }

    pub fn with_mode(&self, g: &SuperAlgebra, mode: SigmaMode) -> Result<Self> {
        match mode {
            SigmaMode::IgnoreSignRule => Ok(self.clone()),
            SigmaMode::RespectSignRule => self.respecting(g),
        }
    }

    /// Checks the anti-automorphism identity on all basis pairs, that
    /// Cartan vectors are fixed up to sign, that root spaces are exchanged
    /// with their negatives, and (ignore mode) that `σ² = id`.
    pub fn validate(&self, g: &SuperAlgebra) -> Result<()> {
        let d = g.dim();
        if self.images.len() != d {
            return Err(Error::InvalidSigma("wrong number of images".into()));
        }
        let mut hit = vec![false; d];
        for (j, c) in &self.images {
            if *j >= d || c.is_zero() || hit[*j] {
                return Err(Error::InvalidSigma("images must form a signed permutation".into()));
            }
            hit[*j] = true;
        }
        for i in 0..d {
            if g.parity(self.images[i].0) != g.parity(i) {
                return Err(Error::InvalidSigma(format!("σ changes the parity of `{}`", g.label(i))));
            }
            if self.mode == SigmaMode::IgnoreSignRule {
                let (j, c) = &self.images[i];
                let (k, c2) = &self.images[*j];
                if *k != i || (c * c2) != Rat::one() {
                    return Err(Error::InvalidSigma(format!("σ² moves `{}`", g.label(i))));
                }
            }
        }
        for &h in g.cartan() {
            if self.images[h].0 != h {
                return Err(Error::InvalidSigma(format!("σ moves Cartan vector `{}`", g.label(h))));
            }
        }
        if g.splitter().is_some() {
            if let Ok(rd) = crate::liesuper::root_decomposition(g) {
                for i in 0..d {
                    if rd.weight_of(self.images[i].0) != &-rd.weight_of(i) {
                        return Err(Error::InvalidSigma(format!("σ(`{}`) is not in the opposite root space", g.label(i))));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.apply_vector(&g.bracket(i, j).iter().cloned().collect());
                let (si, ci) = &self.images[i];
                let (sj, cj) = &self.images[j];
                let mut rhs = Vector::new();
                let s = match self.mode {
                    SigmaMode::IgnoreSignRule => Rat::one(),
                    SigmaMode::RespectSignRule => sign(g.parity(i) && g.parity(j)),
                };
                for (k, c) in g.bracket(*sj, *si) {
                    crate::liesuper::add_scaled(&mut rhs, *k, c * ci * cj * &s);
                }
                if lhs != rhs {
                    return Err(Error::InvalidSigma(format!(
                        "anti-automorphism identity fails on ({}, {})",
                        g.label(i),
                        g.label(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extends to `U(g)`: reverses each monomial, maps generators, and in
    /// respect mode multiplies by `(-1)^{Σ_{i<j} pᵢpⱼ}`.
    pub fn apply(&self, u: &PbwAlgebra, e: &PbwElement) -> PbwElement {
        let mut out = PbwElement::zero();
        for (m, c) in e.terms() {
            out.add_scaled(&self.apply_monomial(u, m), c);
        }
        out
    }

    pub fn apply_monomial(&self, u: &PbwAlgebra, m: &PbwMonomial) -> PbwElement {
        let mut coeff = Rat::one();
        let mut odd = 0usize;
        // σ(x₁…x_k) = σ(x_k)…σ(x₁): left-multiplying by σ(x₁), then σ(x₂), …
        // builds exactly that product.
        let mut acc = PbwElement::one();
        for &p in &m.0 {
            let (j, c) = &self.images[u.basis_index(p)];
            coeff *= c;
            acc = u.gen_times(u.position(*j), &acc);
            odd += u.position_parity(p) as usize;
        }
        if self.mode == SigmaMode::RespectSignRule && (odd * odd.saturating_sub(1) / 2) % 2 == 1 {
            coeff = -coeff;
        }
        acc.scale(&coeff)
    }
}

/// `ξᵢ ↔ ηᵢ`, `θ` fixed, extended anti-multiplicatively to monomials.
fn poisson_images(g: &SuperAlgebra, m: usize) -> Result<Vec<(usize, Rat)>> {
    let p = Presentation::XiEta;
    let labels = crate::grassmann::variable_labels(m, p);
    let swap = |pos: usize| -> usize {
        if m % 2 == 1 && pos == m - 1 {
            pos
        } else {
            pos ^ 1
        }
    };
    (0..g.dim())
        .map(|i| {
            let label = g.label(i);
            let mask = if label == "1" {
                0u32
            } else {
                label
                    .split('*')
                    .map(|v| labels.iter().position(|l| l == v).map(|q| 1u32 << q))
                    .sum::<Option<u32>>()
                    .ok_or_else(|| Error::InvalidSigma(format!("cannot read monomial `{label}`")))?
            };
            // Reverse product of the swapped variables.
            let mut acc = GrassmannElement::one(m, p);
            for pos in (0..m).rev().filter(|q| mask & (1 << q) != 0) {
                acc = acc.mul(&GrassmannElement::generator(m, p, swap(pos)))?;
            }
            let (img_mask, c) = acc.terms().next().map(|(s, c)| (s, c.clone())).expect("monomial image");
            let j = g
                .index_of(&GrassmannElement::monomial_label(m, p, img_mask))
                .ok_or_else(|| Error::InvalidSigma(format!("image of `{label}` is not a basis vector")))?;
            Ok((j, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesuper::build;
    use std::str::FromStr;

    fn alg(s: &str) -> SuperAlgebra {
        build(&Family::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn sl2_sigma() {
        let g = alg("sl(2)");
        let s = SigmaMap::default_for(&g).unwrap();
        let (e, f, h) = (g.index_of("E12").unwrap(), g.index_of("E21").unwrap(), g.index_of("h1").unwrap());
        assert_eq!(s.image(e).0, f);
        assert_eq!(s.image(f).0, e);
        assert_eq!(s.image(h).0, h);
        let u = PbwAlgebra::new(&g).unwrap();
        // σ(e f) = σ(f) σ(e) = e f = f e + h
        let ef = u.word(&[e, f]);
        assert_eq!(u.format(&s.apply(&u, &ef)), "E21*E12 + h1");
    }

    #[test]
    fn involutive_on_words() {
        for name in ["sl(2|1)", "poi(0|3)", "poi(0|4)", "q(2)"] {
            let g = alg(name);
            let s = SigmaMap::default_for(&g).unwrap();
            let u = PbwAlgebra::new(&g).unwrap();
            let w = u.word(&[0, 3, 1, 5, 2]);
            assert_eq!(s.apply(&u, &s.apply(&u, &w)), w, "{name}");
        }
    }

    #[test]
    fn anti_multiplicative() {
        let g = alg("poi(0|3)");
        let u = PbwAlgebra::new(&g).unwrap();
        for mode in [SigmaMode::IgnoreSignRule, SigmaMode::RespectSignRule] {
            let s = SigmaMap::default_for(&g).unwrap().with_mode(&g, mode).unwrap();
            for a in 0..g.dim() {
                for b in 0..g.dim() {
                    let x = u.word(&[a, 3]);
                    let y = u.word(&[b]);
                    let lhs = s.apply(&u, &u.mul(&x, &y));
                    let mut rhs = u.mul(&s.apply(&u, &y), &s.apply(&u, &x));
                    if mode == SigmaMode::RespectSignRule {
                        let px = u.parity_of(&x).unwrap();
                        let py = u.parity_of(&y).unwrap();
                        rhs = rhs.scale(&sign(px && py));
                    }
                    assert_eq!(lhs, rhs, "{mode:?} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn label_swap() {
        assert_eq!(swapped_matrix_label("E12").unwrap(), "E21");
        assert_eq!(swapped_matrix_label("g2.b13").unwrap(), "g2.b31");
        assert_eq!(swapped_matrix_label("E1_10").unwrap(), "E10_1");
        assert!(swapped_matrix_label("h1").is_none());
    }

    #[test]
    fn bad_sigma_rejected() {
        let g = alg("sl(2)");
        let id = SigmaMap::from_images((0..3).map(|i| (i, Rat::one())).collect(), SigmaMode::IgnoreSignRule);
        assert!(id.validate(&g).is_err());
    }
}
