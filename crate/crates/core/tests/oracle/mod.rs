//! Reference computations kept independent of the library's code paths.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use perfiso::{Prime, Sign, SignedIsometry};

/// Solves `p·(y_0 + y_1 ζ + … + y_{p-2} ζ^{p-2}) + t·(1 + ζ + … + ζ^{p-1}) = x`
/// coefficient-wise for a raw (non-canonical) vector `x` of length `p`, by
/// Gaussian elimination over `Q`. The system is square and nonsingular;
/// `x ∈ pZ[ζ]` exactly when every `y_i` is an integer, which is returned.
pub fn rational_div_p(p: u32, raw: &[i64]) -> Option<Vec<BigInt>> {
    let n = p as usize;
    assert_eq!(raw.len(), n);
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    // columns 0..n-1: p·e_i ; column n-1: all-ones relation
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            let mut r: Vec<BigRational> = (0..n)
                .map(|col| {
                    if col + 1 == n {
                        q(1)
                    } else if col == row {
                        q(p as i64)
                    } else {
                        q(0)
                    }
                })
                .collect();
            r.push(q(raw[row]));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, pivot);
        let inv = BigRational::one() / a[col][col].clone();
        for c in col..=n {
            a[col][c] = a[col][c].clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let sub = f.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - sub;
                }
            }
        }
    }
    let y: Vec<BigRational> = (0..n - 1).map(|i| a[i][n].clone()).collect();
    if y.iter().all(|v| v.is_integer()) {
        Some(y.into_iter().map(|v| v.to_integer()).collect())
    } else {
        None
    }
}

/// Largest absolute coefficient, for sanity on generated inputs.
pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Every permutation of `0..n` in lexicographic order, built recursively.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All `2^p·p!` signed isometries.
pub fn all_signed_isometries(p: Prime) -> Vec<SignedIsometry> {
    let n = p.as_usize();
    let mut out = Vec::new();
    for perm in permutations(n) {
        for mask in 0u32..(1 << n) {
            let sign = (0..n)
                .map(|k| if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect();
            out.push(SignedIsometry::new(p, perm.clone(), sign).unwrap());
        }
    }
    out
}
