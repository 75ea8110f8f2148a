//! Small exact combinatorial helpers shared across modules.

use num_bigint::BigInt;
use num_traits::One;

/// `n!` for `n ≤ 20`.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= 20, "factorial({n}) overflows u64");
    (1..=n as u64).product()
}

pub fn factorial_big(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `n (n−1) ⋯ (n−r+1)`, zero once `r > n`.
pub fn falling_factorial(n: u64, r: usize) -> BigInt {
    (0..r as u64).fold(BigInt::one(), |acc, i| {
        if i >= n {
            BigInt::from(0)
        } else {
            acc * (n - i)
        }
    })
}

/// Integer partitions of `n`, each as a non-increasing list of parts.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=left.min(max)).rev() {
            acc.push(part);
            rec(left - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Advances `v` to the next lexicographic permutation; repeated values yield
/// each distinct arrangement once. Returns `false` after the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Advances a sorted multiset `v` over `0..n` to the next sorted multiset
/// (combinations with repetition in lexicographic order).
pub fn next_multiset(v: &mut [usize], n: usize) -> bool {
    let mut i = v.len();
    while i > 0 {
        i -= 1;
        if v[i] + 1 < n {
            let x = v[i] + 1;
            for slot in &mut v[i..] {
                *slot = x;
            }
            return true;
        }
    }
    false
}
