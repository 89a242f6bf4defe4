//! Characters of `C_p = ⟨g⟩`.
//!
//! `χ_a(g^b) = ζ^{ab}`. Characters are addressed by their index `a`
//! everywhere else in the crate; values are only materialised here.

use serde::Serialize;

use crate::cyclotomic::{CycInt, Prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharTable {
    p: Prime,
    entries: Vec<Vec<CycInt>>,
}

impl CharTable {
    pub fn new(p: Prime) -> Self {
        let n = p.as_usize();
        let entries = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| CycInt::zeta_pow(p, (a * b) as i64))
                    .collect()
            })
            .collect();
        CharTable { p, entries }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `χ_a(g^b)`.
    pub fn value(&self, a: usize, b: usize) -> &CycInt {
        &self.entries[a][b]
    }

    pub fn rows(&self) -> &[Vec<CycInt>] {
        &self.entries
    }

    pub fn character(&self, a: usize) -> ClassFunction {
        ClassFunction {
            p: self.p,
            values: self.entries[a].clone(),
        }
    }

    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(CycInt::symbolic).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> CharTableJson {
        CharTableJson {
            p: self.p.get(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(CycInt::symbolic).collect())
                .collect(),
            coeffs: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.coeffs().to_vec()).collect())
                .collect(),
        }
    }
}

/// Serialised form of a character table; `entries` are symbolic strings and
/// `coeffs` the canonical coefficient lists.
#[derive(Clone, Debug, Serialize)]
pub struct CharTableJson {
    pub p: u32,
    pub entries: Vec<Vec<String>>,
    pub coeffs: Vec<Vec<Vec<i64>>>,
}

/// A `CycInt`-valued function on `C_p`; `values[b]` is the value at `g^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    p: Prime,
    values: Vec<CycInt>,
}

impl ClassFunction {
    pub fn new(p: Prime, values: Vec<CycInt>) -> Result<Self> {
        if values.len() != p.as_usize() {
            return Err(Error::Arity {
                expected: p.as_usize(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| v.prime() != p) {
            return Err(Error::PrimeMismatch(p.get(), bad.prime().get()));
        }
        Ok(ClassFunction { p, values })
    }

    pub fn zero(p: Prime) -> Self {
        ClassFunction {
            p,
            values: vec![CycInt::zero(p); p.as_usize()],
        }
    }

    /// The irreducible character `χ_a`.
    pub fn character(p: Prime, a: usize) -> Self {
        let n = p.as_usize();
        ClassFunction {
            p,
            values: (0..n)
                .map(|b| CycInt::zeta_pow(p, (a * b) as i64))
                .collect(),
        }
    }

    /// Indicator of the element `g^j`.
    pub fn indicator(p: Prime, j: usize) -> Self {
        let mut f = ClassFunction::zero(p);
        f.values[j % p.as_usize()] = CycInt::one(p);
        f
    }

    /// The generalized character `Σ_a coeffs[a]·χ_a`.
    pub fn from_character_coeffs(p: Prime, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != p.as_usize() {
            return Err(Error::Arity {
                expected: p.as_usize(),
                found: coeffs.len(),
            });
        }
        let mut acc = ClassFunction::zero(p);
        for (a, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc = acc.try_add(&ClassFunction::character(p, a).try_scale(c)?)?;
            }
        }
        Ok(acc)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn values(&self) -> &[CycInt] {
        &self.values
    }

    /// Value at `g^b`, `b` taken modulo `p`.
    pub fn at(&self, b: i64) -> &CycInt {
        &self.values[self.p.reduce(b)]
    }

    pub fn try_add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.try_add(y))
            .collect::<Result<_>>()?;
        Ok(ClassFunction { p: self.p, values })
    }

    pub fn try_scale(&self, n: i64) -> Result<ClassFunction> {
        let values = self
            .values
            .iter()
            .map(|x| x.try_scale(n))
            .collect::<Result<_>>()?;
        Ok(ClassFunction { p: self.p, values })
    }

    pub fn neg(&self) -> ClassFunction {
        self.try_scale(-1).expect("negation of a class function")
    }

    /// True when the function vanishes at every non-identity element.
    pub fn supported_on_p_regular(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(b, v)| p_regular(b) || v.is_zero())
    }
}

/// `⟨x, y⟩ = (1/p) Σ_b x(g^b)·y(g^{-b})`.
///
/// The second argument is read at inverse elements, which for characters is
/// complex conjugation. Fails when the sum is not divisible by `p`.
pub fn inner_product(x: &ClassFunction, y: &ClassFunction) -> Result<CycInt> {
    if x.p != y.p {
        return Err(Error::PrimeMismatch(x.p.get(), y.p.get()));
    }
    let p = x.p;
    let mut sum = CycInt::zero(p);
    for b in 0..p.as_usize() {
        let term = x.values[b].try_mul(y.at(-(b as i64)))?;
        sum = sum.try_add(&term)?;
    }
    sum.div_p().ok_or(Error::NonIntegralInnerProduct)
}

/// `χ_a·χ_k = χ_{a+k}`.
#[inline]
pub fn mult_index(p: Prime, a: usize, k: usize) -> usize {
    (a + k) % p.as_usize()
}

/// Index of `χ_k^{σ_u}` where `σ_u: g ↦ g^u` acts by
/// `θ^σ(h) = θ(h^{σ^{-1}})`, i.e. `k·u^{-1} mod p`.
pub fn aut_twist_index(p: Prime, u: usize, k: usize) -> Result<usize> {
    let inv = p
        .inverse(u)
        .ok_or(Error::NotAUnit(u as i64, p.get()))?;
    Ok(k * inv % p.as_usize())
}

/// In `C_p` only the identity has order prime to `p`.
#[inline]
pub fn p_regular(b: usize) -> bool {
    b == 0
}
