//! Exact sums of roots of unity.
//!
//! A sum `Σ_e c_e ζ^e` over `L`-th roots of unity is encoded by its exponent
//! multiset `c ∈ Z^L` and reduced modulo the cyclotomic polynomial `Φ_L`,
//! the minimal polynomial of a primitive `L`-th root. The sum is an integer
//! exactly when the remainder is constant.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic; coefficients low-to-high
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len().saturating_sub(dn)];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division not exact");
    quot
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        num = poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    cyclotomic_cache().lock().unwrap().insert(n, num.clone());
    num
}

/// Reduces `Σ_e counts[e] ζ_L^e` modulo `Φ_L`; the result has degree `< φ(L)`.
pub fn reduce_root_sum(counts: &[i64], order: u32) -> Vec<i64> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    let mut rem = counts.to_vec();
    for k in (deg..rem.len()).rev() {
        let c = rem[k];
        if c != 0 {
            for (j, &d) in phi.iter().enumerate() {
                rem[k - deg + j] -= c * d;
            }
        }
    }
    rem.truncate(deg);
    rem
}

/// The exact value of `Σ_e counts[e] ζ_L^e` when it is a rational integer.
pub fn root_sum_integer(counts: &[i64], order: u32) -> Option<i64> {
    let rem = reduce_root_sum(counts, order);
    if rem.iter().skip(1).all(|&c| c == 0) {
        Some(rem.first().copied().unwrap_or(0))
    } else {
        None
    }
}
