//! Multiplicities of linear factors of a Gram determinant too large for
//! exact multivariate elimination.
//!
//! The determinant is restricted to random lines `base + t·dir` over
//! `F_p`, recovered there as a univariate polynomial by evaluation and
//! interpolation, and each candidate form `L` is read off as the order of
//! the root of `L(base + t·dir)`. A factor that is not a candidate shows up
//! as leftover degree. The result holds with probability at least
//! `1 - lines·deg/p` per claim; it is not a proof.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::blocks::Block;
use super::ShapovalovGram;
use crate::error::{Error, Result};
use crate::scalars::{CartanPoly, LinearForm, Rat};

/// The Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, PRIME - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(PRIME)).to_u64().expect("reduced below the modulus")
}

/// `r mod p`, or `None` when `p` divides the denominator.
pub fn rat_mod(r: &Rat) -> Option<u64> {
    let d = int_mod(r.denom());
    (d != 0).then(|| mul(int_mod(r.numer()), inv(d)))
}

/// A polynomial with coefficients reduced mod `p`.
struct ModPoly(Vec<(Vec<u32>, u64)>);

impl ModPoly {
    fn new(p: &CartanPoly) -> Result<Self> {
        p.terms()
            .map(|(e, c)| {
                rat_mod(c)
                    .map(|c| (e.clone(), c))
                    .ok_or_else(|| Error::InvalidInput("coefficient denominator divisible by the modulus".into()))
            })
            .collect::<Result<_>>()
            .map(ModPoly)
    }

    fn eval(&self, x: &[u64]) -> u64 {
        let mut s = 0;
        for (e, c) in &self.0 {
            let mut t = *c;
            for (k, &d) in e.iter().enumerate() {
                if d > 0 {
                    t = mul(t, pow(x[k], d as u64));
                }
            }
            s = add(s, t);
        }
        s
    }
}

/// Determinant over `F_p` by Gaussian elimination.
pub fn det_mod(mut a: Vec<Vec<u64>>) -> u64 {
    let n = a.len();
    let mut det = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = sub(0, det);
        }
        det = mul(det, a[k][k]);
        let iv = inv(a[k][k]);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            if row[k] == 0 {
                continue;
            }
            let f = mul(row[k], iv);
            for j in k..n {
                row[j] = sub(row[j], mul(f, pivot[j]));
            }
        }
    }
    det
}

/// Coefficients (low to high) of the polynomial through `(i, ys[i])`.
pub fn interpolate(ys: &[u64]) -> Vec<u64> {
    let n = ys.len();
    // Newton divided differences on the nodes 0, 1, …, n-1.
    let mut dd = ys.to_vec();
    for level in 1..n {
        let iv = inv(level as u64);
        for i in (level..n).rev() {
            dd[i] = mul(sub(dd[i], dd[i - 1]), iv);
        }
    }
    let mut coeffs = vec![0u64; n];
    // Horner on the Newton basis.
    for i in (0..n).rev() {
        // coeffs = coeffs·(t - i) + dd[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if coeffs[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add(next[k + 1], coeffs[k]);
            }
            next[k] = sub(next[k], mul(coeffs[k], i as u64 % PRIME));
        }
        next[0] = add(next[0], dd[i]);
        coeffs = next;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

/// Divides out `(t - t0)` as often as it goes.
pub fn root_order(coeffs: &mut Vec<u64>, t0: u64) -> u32 {
    let mut k = 0;
    while coeffs.len() > 1 {
        let n = coeffs.len();
        let mut q = vec![0u64; n - 1];
        let mut acc = 0;
        for i in (0..n).rev() {
            acc = add(mul(acc, t0), coeffs[i]);
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if acc != 0 {
            break;
        }
        *coeffs = q;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, Serialize)]
pub struct LineFactor {
    pub form: String,
    pub multiplicity: u32,
}

/// Factor multiplicities read on random lines.
#[derive(Clone, Debug, Serialize)]
pub struct LineFactorization {
    pub method: &'static str,
    pub prime: u64,
    pub seed: u64,
    pub lines: usize,
    pub blocks: Vec<usize>,
    /// `None` when the determinant vanished on every line.
    pub degree: Option<usize>,
    pub factors: Vec<LineFactor>,
    pub cofactor_degree: usize,
    /// Multiplicities and leftover degree agreed on every line.
    pub consistent: bool,
}

impl LineFactorization {
    pub fn is_zero(&self) -> bool {
        self.degree.is_none()
    }

    pub fn multiplicity(&self, f: &LinearForm) -> u32 {
        let key = f.normalized().to_string();
        self.factors
            .iter()
            .find(|x| x.form == key)
            .map_or(0, |x| x.multiplicity)
    }
}

struct Line {
    base: Vec<u64>,
    dir: Vec<u64>,
}

fn form_on_line(f: &LinearForm, vars: &[String], line: &Line) -> Result<(u64, u64)> {
    let mut c0 = rat_mod(f.constant()).ok_or_else(|| Error::InvalidInput("bad candidate".into()))?;
    let mut c1 = 0;
    for (name, c) in f.coefficients() {
        let k = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidInput(format!("candidate uses unknown variable `{name}`")))?;
        let c = rat_mod(c).ok_or_else(|| Error::InvalidInput("bad candidate".into()))?;
        c0 = add(c0, mul(c, line.base[k]));
        c1 = add(c1, mul(c, line.dir[k]));
    }
    Ok((c0, c1))
}

fn block_degree_bound(gram: &ShapovalovGram, b: &Block) -> usize {
    let deg = |i: usize, j: usize| gram.matrix[i][j].total_degree().unwrap_or(0) as usize;
    let rows: usize = b.rows.iter().map(|&i| b.cols.iter().map(|&j| deg(i, j)).max().unwrap_or(0)).sum();
    let cols: usize = b.cols.iter().map(|&j| b.rows.iter().map(|&i| deg(i, j)).max().unwrap_or(0)).sum();
    rows.min(cols)
}

/// Restriction of the block determinant to `line`, low to high.
fn block_on_line(polys: &[Vec<ModPoly>], bound: usize, line: &Line) -> Vec<u64> {
    let ys: Vec<u64> = (0..=bound as u64)
        .map(|t| {
            let x: Vec<u64> = line.base.iter().zip(&line.dir).map(|(b, d)| add(*b, mul(t, *d))).collect();
            det_mod(polys.iter().map(|r| r.iter().map(|p| p.eval(&x)).collect()).collect())
        })
        .collect();
    interpolate(&ys)
}

/// Reads the multiplicity of every candidate on `lines` random lines
/// drawn from a generator seeded with `seed`.
pub fn factor_on_lines(
    gram: &ShapovalovGram,
    candidates: &[LinearForm],
    lines: usize,
    seed: u64,
) -> Result<LineFactorization> {
    let vars = &gram.vars;
    let blocks = gram.blocks();
    let sizes: Vec<usize> = blocks.iter().map(|b| b.rows.len()).collect();
    let mut cands: Vec<LinearForm> = Vec::new();
    for f in candidates.iter().filter(|f| !f.is_constant()) {
        let f = f.normalized();
        if !cands.contains(&f) {
            cands.push(f);
        }
    }
    let mut report = LineFactorization {
        method: "random-line",
        prime: PRIME,
        seed,
        lines,
        blocks: sizes,
        degree: None,
        factors: Vec::new(),
        cofactor_degree: 0,
        consistent: true,
    };
    if blocks.iter().any(|b| !b.is_square()) {
        return Ok(report);
    }
    let compiled: Vec<(Vec<Vec<ModPoly>>, usize)> = blocks
        .iter()
        .map(|b| {
            let m = b
                .rows
                .iter()
                .map(|&i| b.cols.iter().map(|&j| ModPoly::new(&gram.matrix[i][j])).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok((m, block_degree_bound(gram, b)))
        })
        .collect::<Result<_>>()?;

    let mut rng = StdRng::seed_from_u64(seed);
    let mut seen: Option<(Vec<u32>, usize, usize)> = None;
    let mut done = 0;
    let mut attempts = 0;
    while done < lines {
        attempts += 1;
        if attempts > 10 * lines + 10 {
            return Err(Error::InvalidInput("could not find a generic line".into()));
        }
        let line = Line {
            base: (0..vars.len()).map(|_| rng.gen_range(0..PRIME)).collect(),
            dir: (0..vars.len()).map(|_| rng.gen_range(0..PRIME)).collect(),
        };
        // Each candidate must cut the line at one point, and no two at the same one.
        let mut roots = Vec::with_capacity(cands.len());
        let mut generic = true;
        for f in &cands {
            let (c0, c1) = form_on_line(f, vars, &line)?;
            if c1 == 0 {
                generic = false;
                break;
            }
            roots.push(mul(sub(0, c0), inv(c1)));
        }
        let mut sorted = roots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if !generic || sorted.len() != roots.len() {
            continue;
        }
        let mut mult = vec![0u32; cands.len()];
        let mut degree = 0;
        let mut leftover = 0;
        let mut vanished = false;
        for (polys, bound) in &compiled {
            let mut c = block_on_line(polys, *bound, &line);
            if c.is_empty() {
                vanished = true;
                break;
            }
            degree += c.len() - 1;
            for (k, &t0) in roots.iter().enumerate() {
                mult[k] += root_order(&mut c, t0);
            }
            leftover += c.len() - 1;
        }
        done += 1;
        if vanished {
            if seen.is_some() {
                report.consistent = false;
            }
            continue;
        }
        match &seen {
            None => seen = Some((mult, degree, leftover)),
            Some(prev) => {
                if *prev != (mult, degree, leftover) {
                    report.consistent = false;
                }
            }
        }
    }
    if let Some((mult, degree, leftover)) = seen {
        report.degree = Some(degree);
        report.cofactor_degree = leftover;
        report.factors = cands
            .iter()
            .zip(mult)
            .filter(|(_, m)| *m > 0)
            .map(|(f, m)| LineFactor {
                form: f.to_string(),
                multiplicity: m,
            })
            .collect();
    }
    Ok(report)
}
