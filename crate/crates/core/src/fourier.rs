//! Exact counts `I(π)` for Fourier matrices and the expansion of their glow moments.
//!
//! For `F_G`, `I(π) = #{(i, j) ∈ G^p × G^p : [i] = [j], Σ_{r∈β} i_r = Σ_{r∈β} j_r ∀β∈π}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, factorial, factorial_big, next_multiset, next_permutation};
use crate::error::{GlowError, Result};
use crate::group::{AdditionTable, GroupSpec};
use crate::matrix::fourier_matrix;
use crate::mc::{random_phases, run_chunks, McConfig, Moments};
use crate::moments::{i_oneblock_closed, moment_exact};
use crate::partition::SetPartition;
use crate::polyfit::{polynomial_fit_in_n, FitReport};

/// Cap on (index tuples × rearrangements) enumerated by either counting path.
pub const FOURIER_WORK_LIMIT: f64 = 1e9;
pub const TORUS_MAX_ORDER: usize = 16;
pub const TORUS_MAX_SAMPLES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierCount {
    pub group: GroupSpec,
    pub partition: SetPartition,
    pub value: BigInt,
    /// `I°(π) = ∏_β I(one block of size |β|)`.
    pub nonarithmetic: BigInt,
    pub arithmetic: BigInt,
}

struct Adder<'g> {
    group: &'g GroupSpec,
    table: Option<AdditionTable>,
}

impl<'g> Adder<'g> {
    fn new(group: &'g GroupSpec) -> Self {
        Adder {
            group,
            table: group.addition_table().ok(),
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t.add(a, b),
            None => self.group.add_index(a, b),
        }
    }
}

fn check_work(n: usize, p: usize, tuples: f64) -> Result<()> {
    let work = tuples * factorial(p) as f64;
    if work > FOURIER_WORK_LIMIT {
        return Err(GlowError::size(format!(
            "counting I(π) for N = {n}, p = {p} needs {work:e} steps, limit {FOURIER_WORK_LIMIT:e}"
        )));
    }
    Ok(())
}

pub fn nonarithmetic_part(group: &GroupSpec, pi: &SetPartition) -> Result<BigInt> {
    let n = group.order() as u64;
    pi.block_sizes()
        .iter()
        .try_fold(BigInt::one(), |acc, &b| Ok(acc * i_oneblock_closed(b, n)?))
}

/// Counts by multiset: for each sorted `M`, the arrangements of `M` are bucketed
/// by their block-sum signature and each bucket of size `c` contributes `c²`.
pub fn i_fourier(group: &GroupSpec, pi: &SetPartition) -> Result<FourierCount> {
    let n = group.order();
    let p = pi.size();
    check_work(n, p, binomial((n + p - 1) as u64, p as u64) as f64)?;
    let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
    if bits as usize * pi.num_blocks() > 128 {
        return Err(GlowError::size(
            "block-sum signature does not fit in 128 bits",
        ));
    }
    let adder = Adder::new(group);
    let blocks = pi.block_indices();
    let total: u128 = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = 0u128;
            let mut rest = vec![first; p - 1];
            let mut keys: Vec<u128> = Vec::new();
            loop {
                let mut j: Vec<usize> =
                    std::iter::once(first).chain(rest.iter().copied()).collect();
                keys.clear();
                loop {
                    let mut key = 0u128;
                    for block in &blocks {
                        let s = block.iter().fold(0, |a, &r| adder.add(a, j[r]));
                        key = (key << bits) | s as u128;
                    }
                    keys.push(key);
                    if !next_permutation(&mut j) {
                        break;
                    }
                }
                keys.sort_unstable();
                for run in keys.chunk_by(|a, b| a == b) {
                    acc += (run.len() * run.len()) as u128;
                }
                if rest.is_empty() || !next_multiset(&mut rest, n) {
                    break;
                }
            }
            acc
        })
        .sum();
    let value = BigInt::from(total);
    let nonarithmetic = nonarithmetic_part(group, pi)?;
    Ok(FourierCount {
        group: group.clone(),
        partition: pi.clone(),
        arithmetic: &value - &nonarithmetic,
        nonarithmetic,
        value,
    })
}

/// The defining enumeration: every `i ∈ G^p`, every distinct rearrangement `j`.
pub fn i_fourier_direct(group: &GroupSpec, pi: &SetPartition) -> Result<BigInt> {
    let n = group.order();
    let p = pi.size();
    check_work(n, p, (n as f64).powi(p as i32))?;
    let adder = Adder::new(group);
    let blocks = pi.block_indices();
    let block_sum = |t: &[usize], b: &[usize]| b.iter().fold(0, |a, &r| adder.add(a, t[r]));
    let total: u64 = (0..n.pow(p as u32))
        .into_par_iter()
        .map(|code| {
            let i: Vec<usize> = (0..p)
                .map(|s| code / n.pow((p - 1 - s) as u32) % n)
                .collect();
            let sums: Vec<usize> = blocks.iter().map(|b| block_sum(&i, b)).collect();
            let mut j = i.clone();
            j.sort_unstable();
            let mut count = 0u64;
            loop {
                if blocks
                    .iter()
                    .zip(&sums)
                    .all(|(b, &s)| block_sum(&j, b) == s)
                {
                    count += 1;
                }
                if !next_permutation(&mut j) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(BigInt::from(total))
}

/// `N(4N³ − 11N + 2^e + 7)` for the partition `{12}{34}`, `e` the number of even factors.
pub fn i_pair_closed(group: &GroupSpec) -> BigInt {
    let n = BigInt::from(group.order());
    let two_e = BigInt::one() << group.even_factor_count();
    &n * (BigInt::from(4) * &n * &n * &n - BigInt::from(11) * &n + two_e + 7)
}

/// The `1/N` coefficient of `I(π) / (∏ b_i! N^p)`.
pub fn second_order_coefficient(pi: &SetPartition) -> BigRational {
    let b: Vec<u64> = pi.block_sizes().iter().map(|&x| x as u64).collect();
    let mut cross = 0u64;
    for x in 0..b.len() {
        for y in x + 1..b.len() {
            cross += (2..=b[x].min(b[y]))
                .map(|c| binomial(b[x], c) * binomial(b[y], c))
                .sum::<u64>();
        }
    }
    let diag: u64 = b.iter().map(|&x| binomial(x, 2)).sum();
    BigRational::from_integer(cross.into()) - BigRational::new(diag.into(), 2.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrder {
    pub c1: BigRational,
    /// `I(π) / (∏ b_i! N^p)`.
    pub ratio: BigRational,
    /// `N² (ratio − 1 − c₁/N)`.
    pub scaled_residual: BigRational,
}

pub fn second_order_residual(group: &GroupSpec, pi: &SetPartition) -> Result<SecondOrder> {
    let count = i_fourier(group, pi)?;
    let n = BigInt::from(group.order());
    let block_fact: BigInt = pi.block_sizes().iter().map(|&b| factorial_big(b)).product();
    let ratio = BigRational::new(
        count.value,
        block_fact * num_traits::pow(n.clone(), pi.size()),
    );
    let c1 = second_order_coefficient(pi);
    let nr = BigRational::from_integer(n);
    let scaled_residual = (&ratio - BigRational::one() - &c1 / &nr) * &nr * &nr;
    Ok(SecondOrder {
        c1,
        ratio,
        scaled_residual,
    })
}

/// `K1, K2, K3` of `1 − K1/N + K2/N² − K3/N³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCoefficients {
    pub k1: BigRational,
    pub k2: BigRational,
    pub k3: BigRational,
}

impl ExpansionCoefficients {
    pub fn for_order(p: usize) -> Self {
        let p = p as i64;
        let big = |v: i64| BigInt::from(v);
        let c2 = big(binomial(p as u64, 2) as i64);
        let c3 = big(binomial(p as u64, 3) as i64);
        ExpansionCoefficients {
            k1: BigRational::from_integer(c2.clone()),
            k2: BigRational::new(c2 * big(3 * p * p + p - 8), big(12)),
            k3: BigRational::new(c3 * big(p * p * p + 4 * p * p + p - 18), big(8)),
        }
    }

    pub fn truncated(&self, n: usize) -> BigRational {
        let inv = BigRational::new(BigInt::one(), BigInt::from(n));
        BigRational::one() - &self.k1 * &inv + &self.k2 * &inv * &inv
            - &self.k3 * &inv * &inv * &inv
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRow {
    pub group: GroupSpec,
    pub n: usize,
    pub p: usize,
    pub moment: BigInt,
    pub normalized: BigRational,
    pub residual_x_n4: BigRational,
}

/// Exact moments of `F_G` against the three-term expansion, one row per group.
pub fn fourier_moment_polynomial_check(
    groups: &[GroupSpec],
    p: usize,
) -> Result<Vec<ExpansionRow>> {
    if p == 0 || p > 4 {
        return Err(GlowError::range(format!(
            "expansion check is for 1 ≤ p ≤ 4, got {p}"
        )));
    }
    let coeffs = ExpansionCoefficients::for_order(p);
    groups
        .iter()
        .map(|g| {
            let f = fourier_matrix(g)?;
            let report = moment_exact(&f, p)?;
            let moment = report
                .total_integer()
                .expect("Fourier moments are integers");
            let normalized = report.normalized.as_exact().expect("exact").clone();
            let n = g.order();
            let n4 = BigRational::from_integer(BigInt::from(n).pow(4));
            Ok(ExpansionRow {
                group: g.clone(),
                n,
                p,
                residual_x_n4: (&normalized - coeffs.truncated(n)) * n4,
                moment,
                normalized,
            })
        })
        .collect()
}

/// Leading coefficients recovered from an exact fit of `E|Ω|^{2p}` in `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittedExpansion {
    pub fit: FitReport,
    pub leading: BigRational,
    pub coefficients: ExpansionCoefficients,
}

/// Fits `E|Ω|^{2p}` over the given groups by a degree-`2p` polynomial in `N`
/// (first `2p+1` groups; the rest are holdout) and reads off `K1..K3`.
pub fn fit_expansion(groups: &[GroupSpec], p: usize) -> Result<FittedExpansion> {
    let points = groups
        .iter()
        .map(|g| {
            let report = moment_exact(&fourier_matrix(g)?, p)?;
            Ok((
                BigInt::from(g.order()),
                BigRational::from_integer(report.total_integer().expect("integer moment")),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = polynomial_fit_in_n(&points, 2 * p)?;
    let pf = BigRational::from_integer(factorial_big(p));
    let c = |k: usize| fit.polynomial.coefficient(k) / &pf;
    let coefficients = ExpansionCoefficients {
        k1: -c(2 * p - 1),
        k2: c(2 * p - 2),
        k3: if p >= 2 {
            -c(2 * p - 3)
        } else {
            BigRational::zero()
        },
    };
    Ok(FittedExpansion {
        leading: c(2 * p),
        coefficients,
        fit,
    })
}

/// Which conjugation builds the matrix in the torus-integral representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// `H = F A F*`.
    FAFStar,
    /// `H = F* A F`.
    FStarAF,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McScalar {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of `∫_{T^N} ∏_{β∈π} (1/N²) Σ_{xy} |H_{xy}|^{2|β|} da`
/// with `A = diag(a)` and `F` the unnormalized Fourier matrix of `G`.
pub fn torus_integral_mc(
    group: &GroupSpec,
    pi: &SetPartition,
    samples: u64,
    seed: u64,
    conjugation: Conjugation,
) -> Result<McScalar> {
    let n = group.order();
    if n > TORUS_MAX_ORDER {
        return Err(GlowError::size(format!(
            "torus integral limited to N ≤ {TORUS_MAX_ORDER}"
        )));
    }
    if samples > TORUS_MAX_SAMPLES {
        return Err(GlowError::size(format!(
            "at most {TORUS_MAX_SAMPLES} samples"
        )));
    }
    let f = fourier_matrix(group)?.realize_complex();
    let sizes = pi.block_sizes();
    let max_size = sizes.iter().copied().max().unwrap_or(0);
    let cfg = McConfig::new(samples, seed);
    let parts = run_chunks(&cfg, |rng, count| {
        let mut stats = Moments::default();
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        for _ in 0..count {
            let a = random_phases(rng, n);
            for x in 0..n {
                for y in 0..n {
                    h[x * n + y] = (0..n)
                        .map(|i| match conjugation {
                            Conjugation::FAFStar => f.entry(x, i) * a[i] * f.entry(y, i).conj(),
                            Conjugation::FStarAF => f.entry(i, x).conj() * a[i] * f.entry(i, y),
                        })
                        .sum();
                }
            }
            // power sums (1/N²) Σ |H_xy|^{2k} for k = 1..max block size
            let mut power = vec![0.0; max_size + 1];
            for z in &h {
                let m = z.norm_sqr();
                let mut t = 1.0;
                for slot in power.iter_mut().skip(1) {
                    t *= m;
                    *slot += t;
                }
            }
            let scale = (n * n) as f64;
            stats.push(sizes.iter().map(|&k| power[k] / scale).product());
        }
        stats
    })?;
    let mut total = Moments::default();
    for part in &parts {
        total.merge(part);
    }
    Ok(McScalar {
        estimate: total.mean(),
        stderr: total.stderr(),
        samples,
    })
}

/// Memoized `I(π)` by (group, block shape); counts are relabeling invariant.
#[derive(Default)]
pub struct FourierCountCache {
    map: HashMap<(Vec<u32>, Vec<usize>), BigInt>,
}

impl FourierCountCache {
    pub fn get(&mut self, group: &GroupSpec, pi: &SetPartition) -> Result<BigInt> {
        let key = (group.factors().to_vec(), pi.shape());
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let v = i_fourier(group, &SetPartition::from_shape(&pi.shape()))?.value;
        self.map.insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::i_generic;
    use crate::partition::enumerate_partitions;
    use num_traits::{Signed, ToPrimitive};

    fn g(f: &[u32]) -> GroupSpec {
        GroupSpec::new(f).unwrap()
    }

    fn part(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        for n in 1..=9u32 {
            let z = g(&[n]);
            let n = n as i64;
            assert_eq!(
                i_fourier(&z, &part("1,2")).unwrap().value,
                BigInt::from(n * (2 * n - 1))
            );
            for p in 1..=4 {
                assert_eq!(
                    i_fourier(&z, &SetPartition::singletons(p)).unwrap().value,
                    BigInt::from(n.pow(p as u32))
                );
            }
        }
        let pair = part("1,2|3,4");
        assert_eq!(i_fourier(&g(&[4]), &pair).unwrap().value, BigInt::from(884));
        assert_eq!(
            i_fourier(&g(&[2, 2]), &pair).unwrap().value,
            BigInt::from(892)
        );
    }

    #[test]
    fn pair_closed_examples() {
        assert_eq!(i_pair_closed(&g(&[5])), BigInt::from(2265));
        assert_eq!(i_pair_closed(&g(&[8])), BigInt::from(15752));
        assert_eq!(i_pair_closed(&g(&[2, 4])), BigInt::from(15768));
        // e = 3 gives 8·(2048 − 88 + 8 + 7); 15784 would need 2e in place of 2^e
        assert_eq!(i_pair_closed(&g(&[2, 2, 2])), BigInt::from(15800));
        assert_eq!(i_pair_closed(&g(&[6])), BigInt::from(4842));
    }

    #[test]
    fn pair_closed_exhaustive() {
        let pair = part("1,2|3,4");
        for f in [
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![5],
            vec![6],
            vec![7],
            vec![8],
            vec![2, 4],
            vec![2, 2, 2],
            vec![9],
            vec![3, 3],
        ] {
            let grp = g(&f);
            assert_eq!(
                i_fourier(&grp, &pair).unwrap().value,
                i_pair_closed(&grp),
                "{grp}"
            );
        }
    }

    #[test]
    fn fast_path_matches_direct() {
        for f in [vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6]] {
            let grp = g(&f);
            for p in 1..=4 {
                if grp.order() > 5 && p == 4 {
                    continue;
                }
                for pi in enumerate_partitions(p).unwrap() {
                    assert_eq!(
                        i_fourier(&grp, &pi).unwrap().value,
                        i_fourier_direct(&grp, &pi).unwrap(),
                        "{grp} {pi}"
                    );
                }
            }
        }
    }

    #[test]
    fn agrees_with_generic_integral() {
        for f in [vec![3], vec![4], vec![2, 2], vec![8]] {
            let grp = g(&f);
            let h = fourier_matrix(&grp).unwrap().realize_complex();
            let n = grp.order() as f64;
            let pmax = if grp.order() > 4 { 3 } else { 4 };
            for p in 1..=pmax {
                for pi in enumerate_partitions(p).unwrap() {
                    let exact = i_fourier(&grp, &pi).unwrap().value.to_f64().unwrap();
                    let approx = i_generic(&h, &pi).unwrap().value;
                    assert!(
                        (exact - approx).abs() <= 1e-6 * n.powi(p as i32),
                        "{grp} {pi}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonarithmetic_law() {
        for n in [2u32, 3, 4, 6, 8, 12] {
            let grp = g(&[n]);
            for p in 1..=5 {
                if n > 6 && p == 5 {
                    continue;
                }
                for pi in enumerate_partitions(p).unwrap() {
                    let c = i_fourier(&grp, &pi).unwrap();
                    assert!(c.arithmetic >= BigInt::zero(), "{grp} {pi}");
                    let nontrivial = pi.block_sizes().iter().filter(|&&b| b > 1).count();
                    if nontrivial <= 1 {
                        assert_eq!(c.arithmetic, BigInt::zero(), "{grp} {pi}");
                    }
                }
            }
        }
    }

    #[test]
    fn relabeling_invariance() {
        let grp = g(&[2, 3]);
        let base = part("1,2|3,4|5");
        let v = i_fourier(&grp, &base).unwrap().value;
        for perm in [[4, 3, 2, 1, 0], [1, 3, 0, 4, 2], [2, 0, 1, 3, 4]] {
            assert_eq!(i_fourier(&grp, &base.permuted(&perm)).unwrap().value, v);
        }
        let mut cache = FourierCountCache::default();
        assert_eq!(cache.get(&grp, &part("1,5|2|3,4")).unwrap(), v);
    }

    #[test]
    fn second_order_examples() {
        assert_eq!(
            second_order_coefficient(&part("1,2|3,4")),
            BigRational::zero()
        );
        assert_eq!(
            second_order_coefficient(&part("1,2,3|4,5")),
            BigRational::one()
        );
        for p in 1..=6 {
            let expected = -BigRational::new(BigInt::from(binomial(p as u64, 2)), BigInt::from(2));
            assert_eq!(
                second_order_coefficient(&SetPartition::one_block(p)),
                expected
            );
        }
        let limit = BigRational::new(BigInt::from(-11), BigInt::from(4));
        for n in [4u32, 8, 16, 32] {
            let r = second_order_residual(&g(&[n]), &part("1,2|3,4")).unwrap();
            let exact = limit.clone() + BigRational::new(BigInt::from(9), BigInt::from(4 * n));
            assert_eq!(r.scaled_residual, exact);
        }
    }

    #[test]
    fn leading_order_trend() {
        // |ratio − 1| ≤ (|c₁| + C)/N, with C read off the two largest groups.
        let family = [5u32, 7, 9, 11, 13];
        for pi in enumerate_partitions(4)
            .unwrap()
            .into_iter()
            .chain([part("1,2,3|4,5")])
        {
            let rows: Vec<(u32, SecondOrder)> = family
                .iter()
                .filter(|&&n| pi.size() < 5 || n <= 9)
                .map(|&n| (n, second_order_residual(&g(&[n]), &pi).unwrap()))
                .collect();
            let c = rows[rows.len() - 2..]
                .iter()
                .map(|(_, r)| r.scaled_residual.abs())
                .max()
                .unwrap();
            for (n, r) in &rows {
                let bound = (r.c1.abs() + &c) / BigRational::from_integer((*n).into());
                assert!((&r.ratio - BigRational::one()).abs() <= bound, "{pi} N={n}");
            }
        }
    }

    #[test]
    fn expansion_coefficients() {
        let half = BigRational::new(1.into(), 2.into());
        let c2 = ExpansionCoefficients::for_order(2);
        assert_eq!(
            (c2.k1.clone(), c2.k2.clone(), c2.k3.clone()),
            (BigRational::one(), half, BigRational::zero())
        );
        let c3 = ExpansionCoefficients::for_order(3);
        assert_eq!(c3.k2, BigRational::new(11.into(), 2.into()));
        assert_eq!(c3.k3, BigRational::from_integer(6.into()));
        let c4 = ExpansionCoefficients::for_order(4);
        assert_eq!(c4.k1, BigRational::from_integer(6.into()));
        assert_eq!(c4.k2, BigRational::from_integer(22.into()));
        assert_eq!(c4.k3, BigRational::from_integer(57.into()));
    }

    #[test]
    fn expansion_residuals() {
        let groups: Vec<GroupSpec> = (2..=8)
            .map(|n| g(&[n]))
            .chain([g(&[2, 2]), g(&[2, 4])])
            .collect();
        for row in fourier_moment_polynomial_check(&groups, 2).unwrap() {
            assert_eq!(row.residual_x_n4, BigRational::zero());
        }
        for row in fourier_moment_polynomial_check(&groups, 3).unwrap() {
            assert_eq!(row.residual_x_n4, BigRational::new(8.into(), 3.into()));
        }
        let rows = fourier_moment_polynomial_check(&[g(&[8]), g(&[2, 2, 2])], 4).unwrap();
        assert_ne!(rows[0].residual_x_n4, rows[1].residual_x_n4);
        assert!(fourier_moment_polynomial_check(&groups, 5).is_err());
    }

    #[test]
    fn p4_residuals_frozen() {
        let groups = [g(&[4]), g(&[8]), g(&[12]), g(&[2, 2, 2])];
        let rows = fourier_moment_polynomial_check(&groups, 4).unwrap();
        let expected = [(29857, 384), (136513, 1536), (11891, 128), (137377, 1536)];
        for (row, (a, b)) in rows.iter().zip(expected) {
            assert_eq!(
                row.residual_x_n4,
                BigRational::new(a.into(), b.into()),
                "{}",
                row.group
            );
        }
    }

    #[test]
    fn fitted_expansion_p4() {
        for start in [1u32, 2] {
            let groups: Vec<GroupSpec> = (0..10).map(|k| g(&[start + 2 * k])).collect();
            let fit = fit_expansion(&groups, 4).unwrap();
            assert!(fit.fit.all_match());
            assert_eq!(fit.coefficients, ExpansionCoefficients::for_order(4));
            assert_eq!(
                fit.fit.polynomial.coefficient(4),
                BigRational::from_integer(2434.into())
            );
        }
    }

    #[test]
    fn fitted_expansion_p3() {
        let groups: Vec<GroupSpec> = (1..=9).map(|n| g(&[n])).collect();
        let fit = fit_expansion(&groups, 3).unwrap();
        assert!(fit.fit.all_match());
        assert_eq!(fit.leading, BigRational::one());
        assert_eq!(fit.coefficients, ExpansionCoefficients::for_order(3));
    }

    #[test]
    fn torus_integral_singleton_is_constant() {
        for conj in [Conjugation::FAFStar, Conjugation::FStarAF] {
            let r =
                torus_integral_mc(&g(&[5]), &SetPartition::singletons(1), 1000, 1, conj).unwrap();
            assert!((r.estimate - 5.0).abs() < 1e-9);
            assert!(r.stderr < 1e-9);
        }
        assert!(torus_integral_mc(&g(&[17]), &part("1"), 10, 0, Conjugation::FAFStar).is_err());
        assert!(
            torus_integral_mc(&g(&[2]), &part("1"), 2_000_000, 0, Conjugation::FAFStar).is_err()
        );
    }

    #[test]
    fn torus_integral_oneblock() {
        for conj in [Conjugation::FAFStar, Conjugation::FStarAF] {
            let r = torus_integral_mc(&g(&[3]), &part("1,2"), 20_000, 4, conj).unwrap();
            assert!((r.estimate - 15.0).abs() <= 5.0 * r.stderr, "{r:?}");
        }
    }

    #[test]
    fn work_bounds() {
        assert!(matches!(
            i_fourier_direct(&g(&[64]), &SetPartition::one_block(6)),
            Err(GlowError::Size(_))
        ));
        assert!(matches!(
            i_fourier(&g(&[1 << 12]), &SetPartition::one_block(4)),
            Err(GlowError::Size(_))
        ));
    }
}
