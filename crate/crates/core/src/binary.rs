//! Exact binary glow: the law of `φ(a,b) = Σ_{ij} a_i b_j H_{ij}` for `(a,b)`
//! uniform on `{±1}^N × {±1}^N`.
//!
//! The law is assembled column-switch by column-switch: for fixed `b` the row
//! sums `S = Hb` are fixed and `a` flips their signs independently, so the
//! component at `b` is the convolution of the symmetric two-point laws on
//! `±|S_i|`. It only depends on the multiset of `|S_i|`, which is used to
//! deduplicate work across the `2^{N−1}` switches.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{GlowError, Result};
use crate::matrix::BinaryHadamard;

pub const MAX_EXACT_ORDER: usize = 20;
pub const MAX_MOMENT_ORDER: u32 = 64;

/// A finitely supported probability mass function on `Z` with exact weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlowPmf {
    weights: BTreeMap<i64, BigRational>,
}

impl GlowPmf {
    pub fn point_mass(k: i64) -> Self {
        GlowPmf {
            weights: BTreeMap::from([(k, BigRational::one())]),
        }
    }

    /// Builds a pmf from integer counts over a population of `2^log2_total`.
    pub fn from_counts(counts: &BTreeMap<i64, u64>, log2_total: u32) -> Self {
        let denom = BigInt::one() << log2_total;
        let weights = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, &c)| (k, BigRational::new(BigInt::from(c), denom.clone())))
            .collect();
        GlowPmf { weights }
    }

    pub fn weight(&self, k: i64) -> BigRational {
        self.weights
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Support points with their weights, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.weights.iter().map(|(&k, w)| (k, w))
    }

    pub fn support(&self) -> Vec<i64> {
        self.weights.keys().copied().collect()
    }

    pub fn total_mass(&self) -> BigRational {
        self.weights.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.weights.iter().all(|(&k, w)| self.weight(-k) == *w)
    }

    pub fn supported_in_multiples_of(&self, m: i64) -> bool {
        self.weights.keys().all(|k| k.rem_euclid(m) == 0)
    }

    /// Every weight has a power-of-two denominator.
    pub fn is_dyadic(&self) -> bool {
        self.weights.values().all(|w| {
            let d = w.denom();
            (d & (d - BigInt::one())).is_zero()
        })
    }

    /// Largest `log2` of a denominator among the weights.
    pub fn max_denominator_log2(&self) -> u64 {
        self.weights
            .values()
            .map(|w| w.denom().bits() - 1)
            .max()
            .unwrap_or(0)
    }
}

/// Row sums of the column-switched matrix and the multiplicities
/// `c_r = #{i : |S_i| = r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSumProfile {
    pub sums: Vec<i64>,
    pub multiplicity: Vec<usize>,
}

impl RowSumProfile {
    pub fn new(h: &BinaryHadamard, b: &[i8]) -> Result<Self> {
        let n = h.order();
        if b.len() != n {
            return Err(GlowError::argument("switching vector length must equal N"));
        }
        if b.iter().any(|&x| x != 1 && x != -1) {
            return Err(GlowError::argument("switching vector takes ±1 entries"));
        }
        let sums: Vec<i64> = (0..n)
            .map(|i| h.row(i).iter().zip(b).map(|(&x, &y)| (x * y) as i64).sum())
            .collect();
        let mut multiplicity = vec![0; n + 1];
        for s in &sums {
            multiplicity[s.unsigned_abs() as usize] += 1;
        }
        Ok(RowSumProfile { sums, multiplicity })
    }
}

/// Counts of `Σ ±s_i` over all `2^len` sign choices, densely indexed from `−Σs`.
fn signed_sum_counts(abs_sums: &[u64]) -> (i64, Vec<u64>) {
    let total: u64 = abs_sums.iter().sum();
    let width = 2 * total as usize + 1;
    let mut counts = vec![0u64; width];
    let offset = total as usize;
    counts[offset] = 1;
    let mut reach = 0usize;
    for &s in abs_sums {
        let s = s as usize;
        let mut next = vec![0u64; width];
        for k in offset - reach..=offset + reach {
            let c = counts[k];
            if c != 0 {
                next[k + s] += c;
                next[k - s] += c;
            }
        }
        counts = next;
        reach += s;
    }
    (-(total as i64), counts)
}

/// The glow component `μ_b`: the law of `±S_1 ± ⋯ ± S_N` with `S = Hb`.
pub fn glow_component(h: &BinaryHadamard, b: &[i8]) -> Result<GlowPmf> {
    let profile = RowSumProfile::new(h, b)?;
    let abs: Vec<u64> = profile.sums.iter().map(|s| s.unsigned_abs()).collect();
    let (start, dense) = signed_sum_counts(&abs);
    let counts: BTreeMap<i64, u64> = dense
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (start + k as i64, c))
        .collect();
    Ok(GlowPmf::from_counts(&counts, h.order() as u32))
}

const SWITCH_CHUNK_LOG2: u32 = 12;

/// Histogram of sorted `|S|` profiles over column switches with `b_0 = +1`.
fn profile_histogram(h: &BinaryHadamard) -> HashMap<Vec<u64>, u64> {
    let n = h.order();
    let free = n.saturating_sub(1) as u32;
    let total: u64 = 1 << free;
    let chunk = 1u64 << SWITCH_CHUNK_LOG2.min(free);
    let chunks = total / chunk;
    let partials: Vec<HashMap<Vec<u64>, u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist: HashMap<Vec<u64>, u64> = HashMap::new();
            let start = c * chunk;
            // Gray code: switch k flips b_{j+1} for bit j of k ^ (k >> 1)
            let gray = start ^ (start >> 1);
            let mut b: Vec<i64> = (0..n)
                .map(|j| {
                    if j > 0 && (gray >> (j - 1)) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect();
            let mut sums: Vec<i64> = (0..n)
                .map(|i| h.row(i).iter().zip(&b).map(|(&x, &y)| x as i64 * y).sum())
                .collect();
            let mut key = vec![0u64; n];
            for k in start..start + chunk {
                if k > start {
                    let col = k.trailing_zeros() as usize + 1;
                    for (i, s) in sums.iter_mut().enumerate() {
                        *s -= 2 * h.entry(i, col) as i64 * b[col];
                    }
                    b[col] = -b[col];
                }
                for (slot, s) in key.iter_mut().zip(&sums) {
                    *slot = s.unsigned_abs();
                }
                key.sort_unstable();
                *hist.entry(key.clone()).or_default() += 1;
            }
            hist
        })
        .collect();
    let mut merged: HashMap<Vec<u64>, u64> = HashMap::new();
    for part in partials {
        for (k, v) in part {
            *merged.entry(k).or_default() += v;
        }
    }
    merged
}

/// The full glow `μ = 2^{−N} Σ_b μ_b`, exact.
pub fn exact_glow(h: &BinaryHadamard) -> Result<GlowPmf> {
    let n = h.order();
    if n > MAX_EXACT_ORDER {
        return Err(GlowError::size(format!(
            "exact glow limited to N ≤ {MAX_EXACT_ORDER}"
        )));
    }
    h.require_hadamard()?;
    if n == 0 {
        return Ok(GlowPmf::point_mass(0));
    }
    let hist = profile_histogram(h);
    let mut profiles: Vec<(&Vec<u64>, &u64)> = hist.iter().collect();
    profiles.sort();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for (abs, &mult) in profiles {
        let (start, dense) = signed_sum_counts(abs);
        for (k, &c) in dense.iter().enumerate() {
            if c > 0 {
                // factor 2 accounts for the b ↔ −b pairing
                *counts.entry(start + k as i64).or_default() += 2 * c * mult;
            }
        }
    }
    Ok(GlowPmf::from_counts(&counts, 2 * n as u32))
}

/// Residues of the row sums behind the 4Z / 8Z structure of the glow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSumParityReport {
    pub row_sums: Vec<i64>,
    pub residues_mod4: Vec<i64>,
    pub residues_mod8: Vec<i64>,
    /// All row sums even and congruent modulo 4.
    pub even_and_equal_mod4: bool,
    /// `Some(count)` of rows ≡ 4 (mod 8) when every row sum is ≡ 0 (mod 4).
    pub rows_four_mod_eight: Option<usize>,
    /// Whether that count is odd for `N ≡ 4 (mod 8)` and even for `N ≡ 0 (mod 8)`.
    pub parity_matches_order: Option<bool>,
}

impl RowSumParityReport {
    pub fn holds(&self) -> bool {
        self.even_and_equal_mod4 && self.parity_matches_order.unwrap_or(true)
    }
}

pub fn check_row_sum_parities(h: &BinaryHadamard) -> Result<RowSumParityReport> {
    let n = h.order();
    if n < 4 {
        return Err(GlowError::precondition(
            "row-sum parity statements need N ≥ 4",
        ));
    }
    h.require_hadamard()?;
    let row_sums: Vec<i64> = (0..n)
        .map(|i| h.row(i).iter().map(|&x| x as i64).sum())
        .collect();
    let residues_mod4: Vec<i64> = row_sums.iter().map(|s| s.rem_euclid(4)).collect();
    let residues_mod8: Vec<i64> = row_sums.iter().map(|s| s.rem_euclid(8)).collect();
    let even_and_equal_mod4 =
        residues_mod4.iter().all(|&r| r % 2 == 0) && residues_mod4.windows(2).all(|w| w[0] == w[1]);
    let (rows_four_mod_eight, parity_matches_order) = if residues_mod4.iter().all(|&r| r == 0) {
        let count = residues_mod8.iter().filter(|&&r| r == 4).count();
        let expected_odd = n % 8 == 4;
        (Some(count), Some((count % 2 == 1) == expected_odd))
    } else {
        (None, None)
    };
    Ok(RowSumParityReport {
        row_sums,
        residues_mod4,
        residues_mod8,
        even_and_equal_mod4,
        rows_four_mod_eight,
        parity_matches_order,
    })
}

/// Masses on `8Z` and `8Z + 4`, with the mass-one rescaled restrictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenOddSplit {
    pub mass_even: BigRational,
    pub mass_odd: BigRational,
    pub even: GlowPmf,
    pub odd: GlowPmf,
}

pub fn even_odd_split(pmf: &GlowPmf) -> Result<EvenOddSplit> {
    if !pmf.supported_in_multiples_of(4) {
        return Err(GlowError::precondition("pmf is not supported on 4Z"));
    }
    let mut even = BTreeMap::new();
    let mut odd = BTreeMap::new();
    for (k, w) in pmf.iter() {
        if k.rem_euclid(8) == 0 {
            even.insert(k, w.clone());
        } else {
            odd.insert(k, w.clone());
        }
    }
    let mass_even: BigRational = even.values().sum();
    let mass_odd: BigRational = odd.values().sum();
    let rescale = |m: BTreeMap<i64, BigRational>, mass: &BigRational| GlowPmf {
        weights: if mass.is_zero() {
            BTreeMap::new()
        } else {
            m.into_iter().map(|(k, w)| (k, w / mass)).collect()
        },
    };
    Ok(EvenOddSplit {
        even: rescale(even, &mass_even),
        odd: rescale(odd, &mass_odd),
        mass_even,
        mass_odd,
    })
}

/// `Σ_k weight(k) k^r`.
pub fn binary_moment(pmf: &GlowPmf, r: u32) -> Result<BigRational> {
    if r > MAX_MOMENT_ORDER {
        return Err(GlowError::range(format!(
            "moment order {r} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    Ok(pmf
        .iter()
        .map(|(k, w)| w * BigRational::from_integer(num_traits::pow(BigInt::from(k), r as usize)))
        .sum())
}

/// `E(Ω/N)^r` from a pmf of `Ω`.
pub fn normalized_binary_moment(pmf: &GlowPmf, n: usize, r: u32) -> Result<BigRational> {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(n), r as usize));
    Ok(binary_moment(pmf, r)? / scale)
}

/// Work cap (number of index-tuple pairs) for [`binary_moment_via_kernels`].
pub const KERNEL_WORK_LIMIT: u64 = 100_000_000;

/// Tuples in `[0,N)^r` in which every value occurs an even number of times.
fn even_tuples(n: usize, r: usize) -> Vec<Vec<u16>> {
    fn rec(
        n: usize,
        r: usize,
        acc: &mut Vec<u16>,
        parity: &mut Vec<bool>,
        out: &mut Vec<Vec<u16>>,
    ) {
        let odd = parity.iter().filter(|&&p| p).count();
        if odd > r - acc.len() {
            return;
        }
        if acc.len() == r {
            out.push(acc.clone());
            return;
        }
        for v in 0..n {
            acc.push(v as u16);
            parity[v] = !parity[v];
            rec(n, r, acc, parity, out);
            parity[v] = !parity[v];
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `E Ω^r = Σ_{i,x} ∏_s H_{i_s x_s}` over index tuples with even kernels,
/// which is what remains after integrating out the switches.
pub fn binary_moment_via_kernels(h: &BinaryHadamard, r: usize) -> Result<BigInt> {
    if r % 2 == 1 {
        return Err(GlowError::argument(
            "kernel expansion is for even moment orders",
        ));
    }
    if r > 8 {
        return Err(GlowError::size("kernel expansion limited to r ≤ 8"));
    }
    let n = h.order();
    if n > u16::MAX as usize {
        return Err(GlowError::size("matrix too large"));
    }
    // count even tuples before materializing them
    let count = crate::partition::PartitionIter::new(r.max(1))
        .filter(|s| r == 0 || s.is_even())
        .map(|s| {
            let k = if r == 0 { 0 } else { s.num_blocks() };
            crate::combinatorics::falling_factorial(n as u64, k)
        })
        .sum::<BigInt>();
    let limit = BigInt::from(KERNEL_WORK_LIMIT);
    if &count * &count > limit {
        return Err(GlowError::size(format!(
            "kernel expansion needs {} tuple pairs, limit {KERNEL_WORK_LIMIT}",
            &count * &count
        )));
    }
    if r == 0 {
        return Ok(BigInt::one());
    }
    let tuples = even_tuples(n, r);
    let total: i64 = tuples
        .par_iter()
        .map(|i| {
            tuples
                .iter()
                .map(|x| {
                    i.iter()
                        .zip(x)
                        .map(|(&a, &b)| h.entry(a as usize, b as usize) as i64)
                        .product::<i64>()
                })
                .sum::<i64>()
        })
        .sum();
    Ok(BigInt::from(total))
}
