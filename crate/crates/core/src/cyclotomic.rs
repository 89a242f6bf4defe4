//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ_p]`.
//!
//! Elements are stored as `p` integer coefficients on `1, ζ, …, ζ^{p-1}`.
//! Since `1 + ζ + … + ζ^{p-1} = 0` that representation is not unique; the
//! canonical form subtracts the last coefficient from every slot so that
//! `c_{p-1} = 0`. In canonical form the remaining coefficients are the
//! coordinates on the integral basis `1, ζ, …, ζ^{p-2}`, which is what
//! makes the `pO` membership test a plain coefficient congruence.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted anywhere in the crate.
///
/// Coefficients are `i64`; the values produced here are sums of at most `p`
/// roots of unity and their pairwise products, so this bound keeps
/// everything many orders of magnitude away from overflow.
pub const MAX_PRIME: u32 = 1 << 16;

/// A prime modulus `p`, the order of `ζ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// `x mod p` for any signed `x`, as an index in `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> usize {
        x.rem_euclid(self.as_i64()) as usize
    }

    /// Multiplicative inverse of `u` modulo `p`, or `None` when `p | u`.
    pub fn inverse(self, u: usize) -> Option<usize> {
        let p = self.as_usize();
        let u = u % p;
        if u == 0 {
            return None;
        }
        // u^{p-2} mod p
        let mut base = u as u64;
        let mut exp = (p - 2) as u64;
        let mut acc = 1u64;
        let m = p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(acc as usize)
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element `Σ c_i ζ^i` of `Z[ζ_p]`, always held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: Prime,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: Prime) -> Self {
        CycInt {
            p,
            coeffs: vec![0; p.as_usize()],
        }
    }

    pub fn from_int(p: Prime, n: i64) -> Self {
        let mut x = CycInt::zero(p);
        x.coeffs[0] = n;
        x
    }

    pub fn one(p: Prime) -> Self {
        CycInt::from_int(p, 1)
    }

    /// `ζ^k`, with `k` reduced modulo `p`.
    pub fn zeta_pow(p: Prime, k: i64) -> Self {
        let mut raw = vec![0; p.as_usize()];
        raw[p.reduce(k)] = 1;
        CycInt::from_raw_unchecked(p, raw)
    }

    /// Builds an element from any (not necessarily canonical) length-`p`
    /// coefficient vector.
    pub fn from_coeffs(p: Prime, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != p.as_usize() {
            return Err(Error::Arity {
                expected: p.as_usize(),
                found: coeffs.len(),
            });
        }
        let last = coeffs[coeffs.len() - 1];
        let mut out = coeffs;
        for c in out.iter_mut() {
            *c = c.checked_sub(last).ok_or(Error::Overflow)?;
        }
        Ok(CycInt { p, coeffs: out })
    }

    // Callers guarantee the length and that the entries are small counts.
    pub(crate) fn from_raw_unchecked(p: Prime, mut raw: Vec<i64>) -> Self {
        debug_assert_eq!(raw.len(), p.as_usize());
        canonicalize_in_place(&mut raw);
        CycInt { p, coeffs: raw }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Canonical coefficients `(c_0, …, c_{p-1})` with `c_{p-1} = 0`.
    #[inline]
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_int(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Recognises `c·ζ^k` with `c ≠ 0`, returning `(c, k)`.
    ///
    /// `ζ^{p-1}` canonicalizes to `-(1 + ζ + … + ζ^{p-2})`, so it shows up as
    /// a constant run rather than a single slot.
    pub fn as_scaled_root(&self) -> Option<(i64, usize)> {
        let p = self.p.as_usize();
        let head = &self.coeffs[..p - 1];
        let nonzero: Vec<usize> = (0..p - 1).filter(|&i| head[i] != 0).collect();
        match nonzero.as_slice() {
            [k] if p > 2 || *k == 0 => Some((head[*k], *k)),
            _ if p > 2 && head[0] != 0 && head.iter().all(|&c| c == head[0]) => {
                Some((-head[0], p - 1))
            }
            _ => None,
        }
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt> {
        self.same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        // Sum of two canonical forms is canonical.
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn try_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_neg(&self) -> Result<CycInt> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Product by convolution of exponents modulo `p` (`ζ^p = 1`).
    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.same_prime(other)?;
        let p = self.p.as_usize();
        let mut raw = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = (i + j) % p;
                let term = a.checked_mul(b).ok_or(Error::Overflow)?;
                raw[k] = raw[k].checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        CycInt::from_coeffs(self.p, raw)
    }

    pub fn try_scale(&self, n: i64) -> Result<CycInt> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(n).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Multiplication by `ζ^k`: a rotation of the raw coefficients.
    pub fn mul_zeta_pow(&self, k: i64) -> CycInt {
        let p = self.p.as_usize();
        let shift = self.p.reduce(k);
        let mut raw = vec![0; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            raw[(i + shift) % p] = c;
        }
        CycInt::from_raw_unchecked(self.p, raw)
    }

    /// Tests membership in `pO`, returning `x/p` when it holds.
    ///
    /// With `c_{p-1} = 0` the congruence `c_i ≡ c_j (mod p)` for all `i, j`
    /// reduces to every coefficient being divisible by `p`.
    pub fn div_p(&self) -> Option<CycInt> {
        let p = self.p.as_i64();
        if self.coeffs.iter().all(|c| c % p == 0) {
            Some(CycInt {
                p: self.p,
                coeffs: self.coeffs.iter().map(|c| c / p).collect(),
            })
        } else {
            None
        }
    }

    pub fn divisible_by_p(&self) -> bool {
        let p = self.p.as_i64();
        self.coeffs.iter().all(|c| c % p == 0)
    }

    fn same_prime(&self, other: &CycInt) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p.get(), other.p.get()))
        }
    }

    /// Short exact rendering: an integer, `c*z^k` for a scaled root of
    /// unity, or the canonical coefficient list.
    pub fn symbolic(&self) -> String {
        if let Some(n) = self.as_int() {
            return n.to_string();
        }
        if let Some((c, k)) = self.as_scaled_root() {
            let root = if k == 1 {
                "z".to_string()
            } else {
                format!("z^{k}")
            };
            return match c {
                1 => root,
                -1 => format!("-{root}"),
                _ => format!("{c}*{root}"),
            };
        }
        let parts: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Exponent-count form of `Σ_k ζ^{e_k}` with the congruence test applied
/// directly, without materialising a canonical element.
#[inline]
pub(crate) fn counts_divisible_by_p(counts: &[i64], p: i64) -> bool {
    let last = counts[counts.len() - 1];
    counts.iter().all(|&c| (c - last) % p == 0)
}

#[inline]
pub(crate) fn counts_are_zero(counts: &[i64]) -> bool {
    let last = counts[counts.len() - 1];
    counts.iter().all(|&c| c == last)
}

/// Subtracts the last coefficient from all slots.
pub fn canonicalize_in_place(coeffs: &mut [i64]) {
    let last = coeffs[coeffs.len() - 1];
    if last != 0 {
        for c in coeffs.iter_mut() {
            *c -= last;
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

// Operator impls panic on mismatched primes or overflow; the `try_*`
// methods are the fallible surface.

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("CycInt addition")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("CycInt subtraction")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("CycInt multiplication")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.try_neg().expect("CycInt negation")
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn cyc(n: u32, c: &[i64]) -> CycInt {
        CycInt::from_coeffs(p(n), c.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        for n in [0, 1, 4, 6, 9, 15, 21] {
            assert_eq!(Prime::new(n), Err(Error::NotPrime(n)));
        }
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(13).is_ok());
    }

    #[test]
    fn zeta_pow_examples() {
        assert_eq!(CycInt::zeta_pow(p(5), 0).coeffs(), &[1, 0, 0, 0, 0]);
        assert_eq!(CycInt::zeta_pow(p(3), 2).coeffs(), &[-1, -1, 0]);
        assert_eq!(CycInt::zeta_pow(p(5), 7), CycInt::zeta_pow(p(5), 2));
        assert_eq!(CycInt::zeta_pow(p(5), -3), CycInt::zeta_pow(p(5), 2));
    }

    #[test]
    fn p2_zeta_is_minus_one() {
        let z = CycInt::zeta_pow(p(2), 1);
        assert_eq!(z.as_int(), Some(-1));
        assert_eq!(z.coeffs(), &[-1, 0]);
    }

    #[test]
    fn mul_examples() {
        // (1+ζ)(1+ζ²) = 1 + ζ + ζ² + ζ³ = 0 + 1 at p = 3
        let a = cyc(3, &[1, 1, 0]);
        let b = cyc(3, &[1, 0, 1]);
        assert_eq!((&a * &b), CycInt::one(p(3)));

        let z = CycInt::zeta_pow(p(5), 1);
        let z4 = CycInt::zeta_pow(p(5), 4);
        assert_eq!(&z * &z4, CycInt::one(p(5)));

        let x = cyc(5, &[3, -1, 4, 1, -5]);
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn mismatched_primes_rejected() {
        let a = CycInt::one(p(3));
        let b = CycInt::one(p(5));
        assert_eq!(a.try_add(&b), Err(Error::PrimeMismatch(3, 5)));
        assert_eq!(a.try_mul(&b), Err(Error::PrimeMismatch(3, 5)));
    }

    #[test]
    fn wrong_arity_rejected() {
        assert!(matches!(
            CycInt::from_coeffs(p(5), vec![1, 2]),
            Err(Error::Arity { expected: 5, found: 2 })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let big = CycInt::from_int(p(3), i64::MAX);
        assert_eq!(big.try_add(&big), Err(Error::Overflow));
        assert_eq!(big.try_mul(&big), Err(Error::Overflow));
    }

    #[test]
    fn divisibility_examples() {
        let five = CycInt::from_int(p(5), 5);
        assert_eq!(five.div_p(), Some(CycInt::one(p(5))));
        assert!(cyc(5, &[1, 1, 0, 0, 0]).div_p().is_none());
        let x = cyc(3, &[2, 2, 2]);
        assert!(x.is_zero());
        assert_eq!(x.div_p(), Some(CycInt::zero(p(3))));
        // 3ζ² = (-3,-3,0) at p = 3
        assert!(CycInt::zeta_pow(p(3), 2).try_scale(3).unwrap().divisible_by_p());
    }

    #[test]
    fn root_of_unity_sums() {
        for n in [2u32, 3, 5, 7, 11, 13] {
            let q = p(n);
            for m in -30i64..=30 {
                let s = (1..=n as i64).fold(CycInt::zero(q), |acc, k| {
                    acc + CycInt::zeta_pow(q, k * m)
                });
                let expect = if m % n as i64 == 0 { n as i64 } else { 0 };
                assert_eq!(s, CycInt::from_int(q, expect), "p={n} m={m}");
            }
        }
    }

    #[test]
    fn symbolic_rendering() {
        assert_eq!(CycInt::zeta_pow(p(3), 1).symbolic(), "z");
        assert_eq!(CycInt::zeta_pow(p(3), 2).symbolic(), "z^2");
        assert_eq!(CycInt::zeta_pow(p(2), 1).symbolic(), "-1");
        assert_eq!(CycInt::zeta_pow(p(5), 4).try_scale(5).unwrap().symbolic(), "5*z^4");
        assert_eq!(CycInt::zeta_pow(p(5), 2).try_neg().unwrap().symbolic(), "-z^2");
        assert_eq!(cyc(5, &[1, 1, 0, 0, 0]).symbolic(), "[1,1,0,0,0]");
        assert_eq!(CycInt::zero(p(7)).symbolic(), "0");
    }

    #[test]
    fn display_lists_all_coefficients() {
        assert_eq!(cyc(3, &[1, 2, 0]).to_string(), "1 + 2*z + 0*z^2");
    }

    #[test]
    fn inverse_mod_p() {
        assert_eq!(p(5).inverse(2), Some(3));
        assert_eq!(p(7).inverse(3), Some(5));
        assert_eq!(p(2).inverse(1), Some(1));
        assert_eq!(p(7).inverse(0), None);
        assert_eq!(p(7).inverse(14), None);
    }

    fn arb_cyc(n: u32) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-50i64..=50, n as usize)
            .prop_map(move |c| CycInt::from_coeffs(Prime::new(n).unwrap(), c).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
        prop_oneof![Just(2u32), Just(3), Just(5), Just(7)]
            .prop_flat_map(|n| (arb_cyc(n), arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #[test]
        fn ring_axioms((x, y, z) in arb_triple()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &CycInt::one(x.prime()), x.clone());
        }

        #[test]
        fn canonical_form_is_idempotent(c in proptest::collection::vec(-100i64..=100, 7)) {
            let x = CycInt::from_coeffs(p(7), c).unwrap();
            let again = CycInt::from_coeffs(p(7), x.coeffs().to_vec()).unwrap();
            prop_assert_eq!(x.coeffs()[6], 0);
            prop_assert_eq!(again, x);
        }

        #[test]
        fn quotient_times_p_is_x(x in arb_cyc(5).prop_map(|x| x.try_scale(5).unwrap()), y in arb_cyc(5)) {
            let q = x.div_p().expect("multiples of p are divisible");
            prop_assert_eq!(q.try_scale(5).unwrap(), x);
            if let Some(q) = y.div_p() {
                prop_assert_eq!(q.try_scale(5).unwrap(), y);
            }
        }

        #[test]
        fn zeta_shift_matches_mul(x in arb_cyc(7), k in -20i64..20) {
            prop_assert_eq!(x.mul_zeta_pow(k), &x * &CycInt::zeta_pow(p(7), k));
        }
    }
}
