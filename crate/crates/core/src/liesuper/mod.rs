//! Finite-dimensional Lie superalgebras as structure-constant tables.
//!
//! A [`SuperAlgebra`] stores, for every ordered pair of basis vectors, the
//! sparse expansion of their bracket. Optional data rides along: an
//! invariant bilinear form, a Cartan subalgebra spanned by basis vectors, a
//! torus inside it that acts diagonally, a splitting element `H` on the
//! torus, a `Z/r` grading, and a lattice used to name weights.

mod builders;
mod family;
mod roots;
pub mod spec_file;
mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

pub use builders::build;
pub use family::Family;
pub use roots::{root_decomposition, Lattice, Root, RootDatum, Weight};
pub use verify::{verify_algebra, VerifyReport, Violation, ViolationKind};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::{sign, Rat};

/// Sparse vector in basis coordinates.
pub type Vector = BTreeMap<usize, Rat>;

pub fn add_scaled(v: &mut Vector, k: usize, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&k);
    }
}

/// Bilinear form `(eᵢ|eⱼ) = gram[i][j]` together with its parity.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub gram: Matrix,
    pub odd: bool,
}

impl Form {
    pub fn parity_name(&self) -> &'static str {
        if self.odd {
            "odd"
        } else {
            "even"
        }
    }
}

/// A `Z/r` grading given as a class per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub r: u32,
    pub classes: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct SuperAlgebra {
    name: String,
    family: Family,
    labels: Vec<String>,
    parities: Vec<bool>,
    table: Arc<Vec<Vec<Vec<(usize, Rat)>>>>,
    cartan: Vec<usize>,
    cartan_names: Vec<String>,
    torus: Vec<usize>,
    form: Option<Form>,
    grading: Option<Grading>,
    splitter: Option<Vec<Rat>>,
    lattice: Option<Lattice>,
}

impl SuperAlgebra {
    /// Creates an algebra from explicit brackets. Pairs not listed bracket
    /// to zero; nothing is inferred by antisymmetry.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        parities: Vec<bool>,
        brackets: impl IntoIterator<Item = ((usize, usize), Vector)>,
    ) -> Result<Self> {
        let d = labels.len();
        if parities.len() != d {
            return Err(Error::InvalidInput("labels and parities differ in length".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidInput(format!("duplicate basis label `{l}`")));
            }
        }
        let mut table = vec![vec![Vec::new(); d]; d];
        for ((i, j), v) in brackets {
            if i >= d || j >= d || v.keys().any(|&k| k >= d) {
                return Err(Error::InvalidInput(format!("bracket index out of range at ({i},{j})")));
            }
            table[i][j] = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        Ok(SuperAlgebra {
            name: name.into(),
            family: Family::Custom,
            labels,
            parities,
            table: Arc::new(table),
            cartan: Vec::new(),
            cartan_names: Vec::new(),
            torus: Vec::new(),
            form: None,
            grading: None,
            splitter: None,
            lattice: None,
        })
    }

    pub(crate) fn with_family(mut self, family: Family) -> Self {
        self.name = family.to_string();
        self.family = family;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_form(mut self, form: Option<Form>) -> Result<Self> {
        if let Some(f) = &form {
            let d = self.dim();
            if f.gram.len() != d || f.gram.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidInput("Gram matrix has the wrong shape".into()));
            }
        }
        self.form = form;
        Ok(self)
    }

    /// Sets the Cartan basis vectors and their names; the torus defaults to
    /// every even Cartan vector.
    pub fn with_cartan(mut self, cartan: Vec<usize>, names: Vec<String>) -> Result<Self> {
        if cartan.len() != names.len() || cartan.iter().any(|&i| i >= self.dim()) {
            return Err(Error::InvalidInput("bad Cartan specification".into()));
        }
        self.torus = cartan.iter().copied().filter(|&i| !self.parities[i]).collect();
        self.cartan = cartan;
        self.cartan_names = names;
        Ok(self)
    }

    pub fn with_torus(mut self, torus: Vec<usize>) -> Result<Self> {
        if torus.iter().any(|t| !self.cartan.contains(t) || self.parities[*t]) {
            return Err(Error::InvalidInput("torus must consist of even Cartan vectors".into()));
        }
        self.torus = torus;
        Ok(self)
    }

    /// Splitting element as coefficients over the torus.
    pub fn with_splitter(mut self, h: Option<Vec<Rat>>) -> Result<Self> {
        if let Some(h) = &h {
            if h.len() != self.torus.len() {
                return Err(Error::InvalidInput("splitter length differs from torus rank".into()));
            }
        }
        self.splitter = h;
        Ok(self)
    }

    pub fn with_grading(mut self, grading: Option<Grading>) -> Result<Self> {
        if let Some(g) = &grading {
            if g.r == 0 || g.classes.len() != self.dim() || g.classes.iter().any(|&c| c >= g.r) {
                return Err(Error::InvalidInput("bad grading".into()));
            }
        }
        self.grading = grading;
        Ok(self)
    }

    /// Grades by parity, `r = 2`.
    pub fn with_parity_grading(self) -> Self {
        let classes = self.parities.iter().map(|&p| p as u32).collect();
        self.with_grading(Some(Grading { r: 2, classes })).expect("parity grading is well-formed")
    }

    pub fn with_lattice(mut self, lattice: Option<Lattice>) -> Result<Self> {
        if let Some(l) = &lattice {
            if l.vectors.iter().any(|v| v.coords.len() != self.torus.len()) {
                return Err(Error::InvalidInput("lattice vectors must live on the torus".into()));
            }
        }
        self.lattice = lattice;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn parities(&self) -> &[bool] {
        &self.parities
    }

    pub fn parity(&self, i: usize) -> bool {
        self.parities[i]
    }

    /// `[eᵢ, eⱼ]` as a sparse list.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.table[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rat {
        self.table[i][j]
            .iter()
            .find(|(m, _)| *m == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn bracket_vec(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in &self.table[*i][*j] {
                    add_scaled(&mut out, *k, &ab * c);
                }
            }
        }
        out
    }

    /// `[eᵢ, x]`.
    pub fn ad_basis(&self, i: usize, x: &Vector) -> Vector {
        let mut out = Vector::new();
        for (j, b) in x {
            for (k, c) in &self.table[i][*j] {
                add_scaled(&mut out, *k, b * c);
            }
        }
        out
    }

    /// Parity of a vector if homogeneous.
    pub fn vector_parity(&self, x: &Vector) -> Option<bool> {
        let mut it = x.keys().map(|&k| self.parities[k]);
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn unit(i: usize) -> Vector {
        let mut v = Vector::new();
        v.insert(i, num_traits::One::one());
        v
    }

    pub fn format_vector(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in v.iter().enumerate() {
            crate::scalars::fmt_coeff_prefix(c, n == 0, &mut out, true);
            out.push_str(&self.labels[*k]);
        }
        out
    }

    pub fn form(&self) -> Option<&Form> {
        self.form.as_ref()
    }

    pub fn form_value(&self, i: usize, j: usize) -> Rat {
        self.form.as_ref().map(|f| f.gram[i][j].clone()).unwrap_or_else(Rat::zero)
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn cartan_names(&self) -> &[String] {
        &self.cartan_names
    }

    pub fn cartan_name_of(&self, i: usize) -> Option<&str> {
        self.cartan.iter().position(|&c| c == i).map(|p| self.cartan_names[p].as_str())
    }

    pub fn even_cartan(&self) -> Vec<usize> {
        self.cartan.iter().copied().filter(|&i| !self.parities[i]).collect()
    }

    pub fn odd_cartan(&self) -> Vec<usize> {
        self.cartan.iter().copied().filter(|&i| self.parities[i]).collect()
    }

    /// Names of the even Cartan vectors, i.e. the variables of HC images.
    pub fn even_cartan_names(&self) -> Vec<String> {
        self.even_cartan()
            .into_iter()
            .map(|i| self.cartan_name_of(i).unwrap().to_string())
            .collect()
    }

    pub fn torus(&self) -> &[usize] {
        &self.torus
    }

    pub fn splitter(&self) -> Option<&[Rat]> {
        self.splitter.as_deref()
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// Whether the bracket is identically zero.
    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|r| r.iter().all(Vec::is_empty))
    }

    /// Exact inverse `b` of the Gram matrix.
    pub fn gram_inverse(&self) -> Result<Matrix> {
        let form = self.form.as_ref().ok_or_else(|| Error::MissingForm(self.name.clone()))?;
        linalg::inverse(&form.gram).ok_or(Error::DegenerateForm)
    }

    /// Block-diagonal direct sum; the form survives if every summand has one
    /// of the same parity.
    pub fn direct_sum(parts: &[SuperAlgebra]) -> Result<SuperAlgebra> {
        if parts.is_empty() {
            return Err(Error::InvalidParameters("empty direct sum".into()));
        }
        let multi = parts.len() > 1;
        let tag = |k: usize, s: &str| if multi { format!("g{}.{}", k + 1, s) } else { s.to_string() };
        let mut labels = Vec::new();
        let mut parities = Vec::new();
        let mut offsets = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            offsets.push(labels.len());
            labels.extend(p.labels.iter().map(|l| tag(k, l)));
            parities.extend_from_slice(&p.parities);
        }
        let d = labels.len();
        let mut brackets = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let o = offsets[k];
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    let v: Vector = p.table[i][j].iter().map(|(m, c)| (m + o, c.clone())).collect();
                    if !v.is_empty() {
                        brackets.push(((i + o, j + o), v));
                    }
                }
            }
        }
        let name = parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join("+");
        let mut g = SuperAlgebra::from_table(name, labels, parities, brackets)?;
        let form_parity = parts[0].form.as_ref().map(|f| f.odd);
        let shared = form_parity.filter(|_| parts.iter().all(|p| p.form.as_ref().map(|f| f.odd) == form_parity));
        let form = if let Some(odd) = shared {
            let mut gram = linalg::zeros(d, d);
            for (k, p) in parts.iter().enumerate() {
                let o = offsets[k];
                let f = p.form.as_ref().unwrap();
                for i in 0..p.dim() {
                    for j in 0..p.dim() {
                        gram[i + o][j + o] = f.gram[i][j].clone();
                    }
                }
            }
            Some(Form {
                gram,
                odd,
            })
        } else {
            None
        };
        g = g.with_form(form)?;
        let mut cartan = Vec::new();
        let mut names = Vec::new();
        let mut torus = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let o = offsets[k];
            cartan.extend(p.cartan.iter().map(|i| i + o));
            names.extend(p.cartan_names.iter().map(|n| tag(k, n)));
            torus.extend(p.torus.iter().map(|i| i + o));
        }
        g = g.with_cartan(cartan, names)?.with_torus(torus)?;
        let rank: usize = parts.iter().map(|p| p.torus.len()).sum();
        if parts.iter().all(|p| p.splitter.is_some()) {
            let h: Vec<Rat> = parts.iter().flat_map(|p| p.splitter.clone().unwrap()).collect();
            g = g.with_splitter(Some(h))?;
        }
        if parts.iter().all(|p| p.lattice.is_some()) {
            let mut names = Vec::new();
            let mut vectors = Vec::new();
            let mut shift = 0;
            for (k, p) in parts.iter().enumerate() {
                let l = p.lattice.as_ref().unwrap();
                for (n, v) in l.names.iter().zip(&l.vectors) {
                    names.push(tag(k, n));
                    let mut c = vec![Rat::zero(); rank];
                    for (t, x) in v.coords.iter().enumerate() {
                        c[shift + t] = x.clone();
                    }
                    vectors.push(Weight { coords: c });
                }
                shift += p.torus.len();
            }
            g = g.with_lattice(Some(Lattice { names, vectors }))?;
        }
        let fam = Family::DirectSum(parts.iter().map(|p| p.family.clone()).collect());
        let name = g.name.clone();
        Ok(g.with_family(fam).with_name(name))
    }

    /// Replaces one structure constant; for fault injection in tests and
    /// for patching custom tables.
    pub fn with_structure_constant(mut self, i: usize, j: usize, k: usize, c: Rat) -> Self {
        let table = Arc::make_mut(&mut self.table);
        let entry = &mut table[i][j];
        entry.retain(|(m, _)| *m != k);
        if !c.is_zero() {
            entry.push((k, c));
            entry.sort_by_key(|(m, _)| *m);
        }
        self
    }

    /// `(-1)^{pᵢ pⱼ}`.
    pub fn sign_rule(&self, i: usize, j: usize) -> Rat {
        sign(self.parities[i] && self.parities[j])
    }
}
