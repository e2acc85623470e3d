use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The algebra families with builders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `poi(0|m)`, the Poisson superalgebra on `G(m)`.
    Poisson(usize),
    /// `h(0|m) = poi(0|m)` modulo constants.
    Hamiltonian(usize),
    /// `h'(0|m)`, the derived algebra of `h(0|m)`.
    HamiltonianPrime(usize),
    Gl(usize, usize),
    Sl(usize, usize),
    Queer(usize),
    SpecialQueer(usize),
    ProjectiveQueer(usize),
    ProjectiveSpecialQueer(usize),
    DirectSum(Vec<Family>),
    Custom,
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_args(args: &str) -> Result<Vec<usize>> {
    args.split('|')
        .map(|a| {
            a.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad family parameter `{a}`")))
        })
        .collect()
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parts = split_top_level(&s, '+');
        if parts.len() > 1 {
            return parts
                .into_iter()
                .map(Family::from_str)
                .collect::<Result<Vec<_>>>()
                .map(Family::DirectSum);
        }
        let bad = || Error::Parse(format!("unknown algebra family `{s}`"));
        let (head, args) = match s.find('(') {
            Some(p) if s.ends_with(')') => (&s[..p], parse_args(&s[p + 1..s.len() - 1])?),
            _ => {
                // Shorthand such as `sl2` or `q3`.
                let p = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
                (&s[..p], vec![s[p..].parse::<usize>().map_err(|_| bad())?])
            }
        };
        let zero_m = |args: &[usize]| -> Result<usize> {
            match args {
                [0, m] => Ok(*m),
                [m] => Ok(*m),
                _ => Err(bad()),
            }
        };
        let mn = |args: &[usize]| -> Result<(usize, usize)> {
            match args {
                [m, n] => Ok((*m, *n)),
                [m] => Ok((*m, 0)),
                _ => Err(bad()),
            }
        };
        let one = |args: &[usize]| -> Result<usize> {
            match args {
                [n] => Ok(*n),
                _ => Err(bad()),
            }
        };
        Ok(match head {
            "poi" => Family::Poisson(zero_m(&args)?),
            "h" => Family::Hamiltonian(zero_m(&args)?),
            "h'" => Family::HamiltonianPrime(zero_m(&args)?),
            "gl" => {
                let (m, n) = mn(&args)?;
                Family::Gl(m, n)
            }
            "sl" => {
                let (m, n) = mn(&args)?;
                Family::Sl(m, n)
            }
            "q" => Family::Queer(one(&args)?),
            "sq" => Family::SpecialQueer(one(&args)?),
            "pq" => Family::ProjectiveQueer(one(&args)?),
            "psq" => Family::ProjectiveSpecialQueer(one(&args)?),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Poisson(m) => write!(f, "poi(0|{m})"),
            Family::Hamiltonian(m) => write!(f, "h(0|{m})"),
            Family::HamiltonianPrime(m) => write!(f, "h'(0|{m})"),
            Family::Gl(m, 0) => write!(f, "gl({m})"),
            Family::Gl(m, n) => write!(f, "gl({m}|{n})"),
            Family::Sl(m, 0) => write!(f, "sl({m})"),
            Family::Sl(m, n) => write!(f, "sl({m}|{n})"),
            Family::Queer(n) => write!(f, "q({n})"),
            Family::SpecialQueer(n) => write!(f, "sq({n})"),
            Family::ProjectiveQueer(n) => write!(f, "pq({n})"),
            Family::ProjectiveSpecialQueer(n) => write!(f, "psq({n})"),
            Family::DirectSum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&s.join("+"))
            }
            Family::Custom => f.write_str("custom"),
        }
    }
}
