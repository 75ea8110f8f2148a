//! Counting distinct tuples in `Z_2^n` under zero-sum constraints, and exact
//! polynomial fits in `N = 2^n` of Walsh-matrix counts.
//!
//! Elements of `Z_2^n` are `n`-bit masks; the group law is XOR.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{GlowError, Result};
use crate::fourier::i_fourier;
use crate::group::GroupSpec;
use crate::partition::{enumerate_partitions, SetPartition};
use crate::polyfit::{polynomial_fit_in_n, FitReport};

pub const WALSH_WORK_LIMIT: f64 = 1e9;
/// Largest index set handled by the batched system counts.
pub const MAX_BATCH_INDICES: usize = 4;

/// `#{(a_i)_{i∈I} distinct in Z_2^n : Σ_{j∈J_s} a_j = 0 ∀s}` with `I = {1..k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshCount {
    pub n: usize,
    pub index_count: usize,
    /// Constraint sets, 1-based subsets of `I`.
    pub constraints: Vec<Vec<usize>>,
    pub value: u64,
}

fn subset_mask(k: usize, set: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    for &j in set {
        if j == 0 || j > k {
            return Err(GlowError::argument(format!("index {j} outside 1..={k}")));
        }
        mask |= 1 << (j - 1);
    }
    Ok(mask)
}

fn check_work(n: usize, k: usize) -> Result<()> {
    let work = 2f64.powi((n * k) as i32);
    if work > WALSH_WORK_LIMIT {
        return Err(GlowError::size(format!(
            "2^(n·|I|) = {work:e} exceeds {WALSH_WORK_LIMIT:e}"
        )));
    }
    Ok(())
}

/// Calls `f` on every tuple of `k` distinct elements of `Z_2^n` starting with `first`.
fn for_each_distinct(n: usize, k: usize, first: u32, mut f: impl FnMut(&[u32])) {
    fn rec(n: usize, k: usize, acc: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for x in 0..1u32 << n {
            if acc.contains(&x) {
                continue;
            }
            acc.push(x);
            rec(n, k, acc, f);
            acc.pop();
        }
    }
    let mut acc = vec![first];
    rec(n, k, &mut acc, &mut f);
}

fn xor_over(tuple: &[u32], mask: u32) -> u32 {
    tuple
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(0, |acc, (_, &x)| acc ^ x)
}

pub fn walsh_count(n: usize, index_count: usize, constraints: &[Vec<usize>]) -> Result<WalshCount> {
    if index_count == 0 {
        return Err(GlowError::argument("index set must be nonempty"));
    }
    check_work(n, index_count)?;
    let masks: Vec<u32> = constraints
        .iter()
        .map(|c| subset_mask(index_count, c))
        .collect::<Result<_>>()?;
    let value = (0..1u32 << n)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u64;
            for_each_distinct(n, index_count, first, |t| {
                if masks.iter().all(|&m| xor_over(t, m) == 0) {
                    count += 1;
                }
            });
            count
        })
        .sum();
    Ok(WalshCount {
        n,
        index_count,
        constraints: constraints.to_vec(),
        value,
    })
}

/// Counts for every constraint system on `I = {1..k}` at once.
///
/// Nonempty subsets of `I` are numbered `1..2^k` by their bitmask; a system is
/// a bitmask over those `2^k − 1` subsets (bit `s−1` for subset `s`). Entry
/// `sys` of the result is the count for that system.
pub fn walsh_system_counts(n: usize, k: usize) -> Result<Vec<u64>> {
    if k == 0 || k > MAX_BATCH_INDICES {
        return Err(GlowError::range(format!(
            "|I| = {k} outside 1..={MAX_BATCH_INDICES}"
        )));
    }
    check_work(n, k)?;
    let subsets = (1u32 << k) - 1;
    let systems = 1usize << subsets;
    // histogram of the set of subsets summing to zero, per distinct tuple
    let hist = (0..1u32 << n)
        .into_par_iter()
        .map(|first| {
            let mut h = vec![0u64; systems];
            for_each_distinct(n, k, first, |t| {
                let mut zero = 0usize;
                for s in 1..=subsets {
                    if xor_over(t, s) == 0 {
                        zero |= 1 << (s - 1);
                    }
                }
                h[zero] += 1;
            });
            h
        })
        .reduce(
            || vec![0u64; systems],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            },
        );
    // superset sums: count(sys) = Σ_{zero ⊇ sys} hist[zero]
    let mut counts = hist;
    for bit in 0..subsets {
        let b = 1usize << bit;
        for sys in 0..systems {
            if sys & b == 0 {
                counts[sys] += counts[sys | b];
            }
        }
    }
    Ok(counts)
}

/// Rank over `F_2` of subsets given as bitmasks.
pub fn f2_rank(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &r in rows {
        let mut x = r;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn system_subsets(k: usize, sys: usize) -> Vec<u32> {
    (1..1u32 << k).filter(|s| sys >> (s - 1) & 1 == 1).collect()
}

pub fn system_constraints(k: usize, sys: usize) -> Vec<Vec<usize>> {
    system_subsets(k, sys)
        .into_iter()
        .map(|s| (1..=k).filter(|j| s >> (j - 1) & 1 == 1).collect())
        .collect()
}

/// Polynomiality of all constraint systems with `|I| = k` over `n = 0..=n_max`.
#[derive(Clone, Debug)]
pub struct SystemFitSummary {
    pub index_count: usize,
    pub systems: usize,
    pub n_values: Vec<usize>,
    /// Systems whose fit had at least one holdout point.
    pub with_holdout: usize,
    /// Systems that failed a holdout check, with their constraints.
    pub failures: Vec<Vec<Vec<usize>>>,
}

impl SystemFitSummary {
    pub fn all_match(&self) -> bool {
        self.failures.is_empty()
    }
}

fn points(ns: &[usize], values: impl Fn(usize) -> BigRational) -> Vec<(BigInt, BigRational)> {
    ns.iter()
        .map(|&n| (BigInt::from(1u64 << n), values(n)))
        .collect()
}

/// Fits every system of degree `k − rank` on the first points, holding out the rest.
pub fn fit_all_systems(k: usize, n_max: usize) -> Result<SystemFitSummary> {
    let ns: Vec<usize> = (0..=n_max).collect();
    let tables = ns
        .iter()
        .map(|&n| walsh_system_counts(n, k))
        .collect::<Result<Vec<_>>>()?;
    let systems = tables[0].len();
    let mut with_holdout = 0;
    let mut failures = Vec::new();
    for sys in 0..systems {
        let degree = k - f2_rank(&system_subsets(k, sys));
        let pts = points(&ns, |n| BigRational::from_integer(tables[n][sys].into()));
        let fit = polynomial_fit_in_n(&pts, degree.min(pts.len() - 1))?;
        if !fit.holdout.is_empty() {
            with_holdout += 1;
        }
        if !fit.all_match() {
            failures.push(system_constraints(k, sys));
        }
    }
    Ok(SystemFitSummary {
        index_count: k,
        systems,
        n_values: ns,
        with_holdout,
        failures,
    })
}

/// Exact fit of `I(Z_2^n, π)` in `N` over `n = 0..=n_max`.
pub fn fit_ipartition(pi: &SetPartition, n_max: usize, degree: usize) -> Result<FitReport> {
    let pts = (0..=n_max)
        .map(|n| {
            let g = GroupSpec::elementary_two(n)?;
            Ok((
                BigInt::from(1u64 << n),
                BigRational::from_integer(i_fourier(&g, pi)?.value),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    polynomial_fit_in_n(&pts, degree)
}

/// [`fit_ipartition`] for every partition of `{1..p}`, with degree `p`.
pub fn fit_all_ipartitions(p: usize, n_max: usize) -> Result<Vec<(SetPartition, FitReport)>> {
    enumerate_partitions(p)?
        .into_iter()
        .map(|pi| {
            let fit = fit_ipartition(&pi, n_max, p)?;
            Ok((pi, fit))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::i_pair_closed;

    #[test]
    fn count_examples() {
        for n in 1..=4 {
            let big_n = 1u64 << n;
            assert_eq!(walsh_count(n, 2, &[vec![1, 2]]).unwrap().value, 0);
            assert_eq!(walsh_count(n, 2, &[]).unwrap().value, big_n * (big_n - 1));
            assert_eq!(
                walsh_count(n, 3, &[vec![1, 2, 3]]).unwrap().value,
                (big_n - 1) * (big_n - 2)
            );
        }
        assert!(walsh_count(2, 2, &[vec![3]]).is_err());
        assert!(walsh_count(8, 4, &[]).is_err());
    }

    #[test]
    fn count_bounded_by_falling_factorial() {
        for sys in 0..1usize << 7 {
            let c = walsh_count(3, 3, &system_constraints(3, sys)).unwrap();
            assert!(c.value <= 8 * 7 * 6);
        }
    }

    #[test]
    fn batched_matches_direct() {
        for n in 0..=3 {
            for k in 1..=3 {
                let table = walsh_system_counts(n, k).unwrap();
                for (sys, &v) in table.iter().enumerate() {
                    let direct = walsh_count(n, k, &system_constraints(k, sys))
                        .unwrap()
                        .value;
                    assert_eq!(v, direct, "n={n} k={k} sys={sys}");
                }
            }
        }
        let t4 = walsh_system_counts(2, 4).unwrap();
        for sys in [0usize, 1, 5, 100, 4097, 32767] {
            assert_eq!(
                t4[sys],
                walsh_count(2, 4, &system_constraints(4, sys))
                    .unwrap()
                    .value
            );
        }
    }

    #[test]
    fn rank() {
        assert_eq!(f2_rank(&[]), 0);
        assert_eq!(f2_rank(&[0b011, 0b110, 0b101]), 2);
        assert_eq!(f2_rank(&[0b001, 0b010, 0b100]), 3);
    }

    #[test]
    fn small_systems_are_polynomial() {
        for k in 1..=3 {
            let s = fit_all_systems(k, 4).unwrap();
            assert!(s.all_match(), "{:?}", s.failures);
            assert_eq!(s.with_holdout, s.systems);
        }
    }

    #[test]
    fn ipartition_fits() {
        let fit = fit_ipartition(&"1,2".parse().unwrap(), 4, 2).unwrap();
        assert_eq!(fit.polynomial.to_string(), "2N^2 - N");
        assert!(fit.all_match());
        let pair: SetPartition = "1,2|3,4".parse().unwrap();
        let fit = fit_ipartition(&pair, 5, 4).unwrap();
        assert!(fit.all_match());
        for n in 1..=4 {
            let g = GroupSpec::elementary_two(n).unwrap();
            let x = BigRational::from_integer(BigInt::from(1u64 << n));
            assert_eq!(
                fit.polynomial.eval(&x),
                BigRational::from_integer(i_pair_closed(&g))
            );
        }
        assert_eq!(fit.polynomial.to_string(), "4N^4 - 10N^2 + 7N");
    }
}
