//! Set partitions of `{1..p}` under the reversed-refinement order.
//!
//! Throughout this crate `π ≤ σ` means that `σ` refines `π`: the one-block
//! partition is the minimum and the all-singletons partition the maximum.
//! Partitions are stored as restricted-growth strings (RGS), which makes the
//! canonical form (blocks sorted internally, blocks ordered by least element)
//! coincide with structural equality.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{factorial, factorial_big, integer_partitions};
use crate::error::{GlowError, Result};

/// Largest ground set accepted by the enumerating operations (Bell(12) = 4 213 597).
pub const MAX_GROUND_SET: usize = 12;

/// A partition of `{1..p}`, stored as its restricted-growth string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    /// Builds a partition from arbitrary per-element block labels; elements with
    /// equal labels share a block.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut seen: HashMap<T, u8> = HashMap::new();
        let rgs = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u8;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        SetPartition { labels: rgs }
    }

    /// Builds a partition of `{1..p}` from 1-based blocks, checking coverage
    /// and disjointness.
    pub fn from_blocks(p: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; p];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(GlowError::argument("empty block"));
            }
            for &e in block {
                if e == 0 || e > p {
                    return Err(GlowError::argument(format!("element {e} outside 1..{p}")));
                }
                if labels[e - 1] != usize::MAX {
                    return Err(GlowError::argument(format!("element {e} appears twice")));
                }
                labels[e - 1] = b;
            }
        }
        if let Some(missing) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(GlowError::argument(format!(
                "element {} not covered",
                missing + 1
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn one_block(p: usize) -> Self {
        SetPartition { labels: vec![0; p] }
    }

    pub fn singletons(p: usize) -> Self {
        SetPartition {
            labels: (0..p as u8).collect(),
        }
    }

    /// Consecutive blocks with the given sizes, e.g. `[2, 1]` → `{12}{3}`.
    pub fn from_shape(sizes: &[usize]) -> Self {
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k as u8, s))
            .collect();
        SetPartition { labels }
    }

    /// Ground-set size `p`.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// The restricted-growth string (0-based block label of each element).
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Blocks as 0-based element indices, in canonical order.
    pub fn block_indices(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(i);
        }
        blocks
    }

    /// Blocks as 1-based elements, in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.block_indices()
            .into_iter()
            .map(|b| b.into_iter().map(|i| i + 1).collect())
            .collect()
    }

    /// Block lengths in canonical block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Block lengths sorted descending: the integer partition of `p` this
    /// set partition lies over.
    pub fn shape(&self) -> Vec<usize> {
        let mut s = self.block_sizes();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Disjoint union `π ⊔ π′` on `{1..p+p′}`; the elements of `other` are
    /// shifted by `p`.
    pub fn disjoint_union(&self, other: &SetPartition) -> SetPartition {
        let shift = self.num_blocks() as u8;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| l + shift));
        SetPartition { labels }
    }

    /// `π` followed by `extra` singleton blocks.
    pub fn padded(&self, extra: usize) -> SetPartition {
        self.disjoint_union(&SetPartition::singletons(extra))
    }

    /// Relabels the ground set: element `i` of the result sits where element
    /// `perm[i]` sat in `self`.
    pub fn permuted(&self, perm: &[usize]) -> SetPartition {
        let labels: Vec<u8> = perm.iter().map(|&i| self.labels[i]).collect();
        SetPartition::from_labels(&labels)
    }

    pub fn is_even(&self) -> bool {
        self.block_sizes().iter().all(|s| s % 2 == 0)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", text.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|e| e.to_string()).collect::<String>())
            .collect();
        write!(f, "{{{}}}", text.join("}{"))
    }
}

impl FromStr for SetPartition {
    type Err = GlowError;

    /// Parses the `1,2|3,4` grammar: blocks separated by `|`, elements by `,`.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for block_text in s.split('|') {
            let mut block = Vec::new();
            let mut elem_offset = offset;
            for elem in block_text.split(',') {
                let trimmed = elem.trim();
                let value: usize = trimmed.parse().map_err(|_| {
                    GlowError::parse(
                        elem_offset,
                        format!("expected a positive integer, got {trimmed:?}"),
                    )
                })?;
                if value == 0 {
                    return Err(GlowError::parse(elem_offset, "elements are 1-based"));
                }
                block.push(value);
                elem_offset += elem.len() + 1;
            }
            blocks.push(block);
            offset += block_text.len() + 1;
        }
        let p = blocks.iter().flatten().copied().max().unwrap_or(0);
        if p > u8::MAX as usize {
            return Err(GlowError::size(format!("ground set of size {p} too large")));
        }
        SetPartition::from_blocks(p, &blocks).map_err(|e| match e {
            GlowError::Argument(msg) => GlowError::parse(0, msg),
            other => other,
        })
    }
}

/// Iterator over all partitions of `{1..p}` in RGS-lexicographic order.
///
/// The first item is the one-block partition, the last the all-singletons one.
pub struct PartitionIter {
    current: Option<Vec<u8>>,
    prefix_max: Vec<u8>,
}

impl PartitionIter {
    pub fn new(p: usize) -> Self {
        PartitionIter {
            current: Some(vec![0; p]),
            prefix_max: vec![0; p],
        }
    }
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        let rgs = self.current.as_mut()?;
        let out = SetPartition {
            labels: rgs.clone(),
        };
        let p = rgs.len();
        // prefix_max[i] = max(rgs[0..=i])
        let mut i = p;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            if rgs[i] <= self.prefix_max[i - 1] {
                rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(rgs[i]);
                for k in i + 1..p {
                    rgs[k] = 0;
                    self.prefix_max[k] = self.prefix_max[i];
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

fn check_ground_set(p: usize) -> Result<()> {
    if p == 0 || p > MAX_GROUND_SET {
        return Err(GlowError::size(format!(
            "ground set size {p} outside 1..={MAX_GROUND_SET}"
        )));
    }
    Ok(())
}

/// Every partition of `{1..p}` exactly once, in RGS-lexicographic order.
pub fn enumerate_partitions(p: usize) -> Result<Vec<SetPartition>> {
    check_ground_set(p)?;
    Ok(PartitionIter::new(p).collect())
}

fn check_same_size(pi: &SetPartition, sigma: &SetPartition) -> Result<()> {
    if pi.size() != sigma.size() {
        return Err(GlowError::argument(format!(
            "partitions of different ground sets ({} vs {})",
            pi.size(),
            sigma.size()
        )));
    }
    Ok(())
}

fn refines(pi: &SetPartition, sigma: &SetPartition) -> bool {
    // every σ-block must map into a single π-block
    let mut image = [u8::MAX; 256];
    for (s, p) in sigma.labels.iter().zip(&pi.labels) {
        let slot = &mut image[*s as usize];
        if *slot == u8::MAX {
            *slot = *p;
        } else if *slot != *p {
            return false;
        }
    }
    true
}

/// `π ≤ σ` in the reversed-refinement order, i.e. `σ` refines `π`.
pub fn is_coarser_or_equal(pi: &SetPartition, sigma: &SetPartition) -> Result<bool> {
    check_same_size(pi, sigma)?;
    Ok(refines(pi, sigma))
}

/// Möbius function of the reversed-refinement order, closed form
/// `∏_{β∈π} (−1)^{k_β−1} (k_β−1)!` with `k_β` the number of σ-blocks inside β.
pub fn moebius(pi: &SetPartition, sigma: &SetPartition) -> Result<i64> {
    check_same_size(pi, sigma)?;
    Ok(moebius_unchecked(pi, sigma))
}

fn moebius_unchecked(pi: &SetPartition, sigma: &SetPartition) -> i64 {
    if !refines(pi, sigma) {
        return 0;
    }
    let mut inner = vec![0usize; pi.num_blocks()];
    let mut counted = vec![false; sigma.num_blocks()];
    for (s, p) in sigma.labels.iter().zip(&pi.labels) {
        if !counted[*s as usize] {
            counted[*s as usize] = true;
            inner[*p as usize] += 1;
        }
    }
    inner
        .iter()
        .map(|&k| {
            let magnitude = factorial(k - 1) as i64;
            if k % 2 == 1 {
                magnitude
            } else {
                -magnitude
            }
        })
        .product()
}

/// Möbius values `μ(π, σ)` for every `σ ≥ π`, computed from the defining
/// recursion `μ(π,π) = 1`, `μ(π,σ) = −Σ_{π≤τ<σ} μ(π,τ)`.
pub fn moebius_row_recursive(pi: &SetPartition) -> Vec<(SetPartition, i64)> {
    let mut upset = refinements(pi);
    upset.sort_by_key(|s| s.num_blocks());
    let mut values: Vec<(SetPartition, i64)> = Vec::with_capacity(upset.len());
    for sigma in upset {
        let value = if sigma == *pi {
            1
        } else {
            -values
                .iter()
                .filter(|(tau, _)| tau.num_blocks() < sigma.num_blocks() && refines(tau, &sigma))
                .map(|(_, m)| *m)
                .sum::<i64>()
        };
        values.push((sigma, value));
    }
    values
}

/// Möbius value from the defining recursion; the cross-check path for [`moebius`].
pub fn moebius_recursive(pi: &SetPartition, sigma: &SetPartition) -> Result<i64> {
    check_same_size(pi, sigma)?;
    if !refines(pi, sigma) {
        return Ok(0);
    }
    Ok(moebius_row_recursive(pi)
        .into_iter()
        .find(|(s, _)| s == sigma)
        .map(|(_, m)| m)
        .expect("σ refines π, so it lies in the up-set"))
}

/// All partitions `σ ≥ π`, i.e. every refinement of `π` (including `π`).
pub fn refinements(pi: &SetPartition) -> Vec<SetPartition> {
    let blocks = pi.block_indices();
    let local: Vec<Vec<SetPartition>> = blocks
        .iter()
        .map(|b| PartitionIter::new(b.len()).collect())
        .collect();
    let mut choice = vec![0usize; blocks.len()];
    let mut out = Vec::new();
    let mut labels = vec![0u16; pi.size()];
    loop {
        let mut offset = 0u16;
        for (b, block) in blocks.iter().enumerate() {
            let sub = &local[b][choice[b]];
            for (k, &elem) in block.iter().enumerate() {
                labels[elem] = offset + sub.labels[k] as u16;
            }
            offset += sub.num_blocks() as u16;
        }
        out.push(SetPartition::from_labels(&labels));
        // odometer
        let mut b = 0;
        loop {
            if b == blocks.len() {
                return out;
            }
            choice[b] += 1;
            if choice[b] < local[b].len() {
                break;
            }
            choice[b] = 0;
            b += 1;
        }
    }
}

/// `binom(p, σ) = p! / (b_1! ⋯ b_s!)` over the block lengths of σ.
pub fn partition_multinomial(sigma: &SetPartition) -> u64 {
    let denom: u64 = sigma.block_sizes().iter().map(|&b| factorial(b)).product();
    factorial(sigma.size()) / denom
}

/// `K(π)` and its normalization `K̃(π) = K(π) / p!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCoefficient {
    pub value: BigInt,
    pub normalized: BigRational,
}

impl KCoefficient {
    fn new(value: BigInt, p: usize) -> Self {
        let normalized = BigRational::new(value.clone(), factorial_big(p));
        KCoefficient { value, normalized }
    }
}

fn k_cache() -> &'static Mutex<HashMap<Vec<usize>, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<usize>, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `K(π) = Σ_{σ ≥ π} μ(π,σ) binom(p,σ)`; memoized on the block shape of π.
pub fn coefficient_k(pi: &SetPartition) -> Result<KCoefficient> {
    check_ground_set(pi.size())?;
    let shape = pi.shape();
    if let Some(v) = k_cache().lock().expect("K cache poisoned").get(&shape) {
        return Ok(KCoefficient::new(v.clone(), pi.size()));
    }
    let value: BigInt = refinements(pi)
        .iter()
        .map(|sigma| {
            BigInt::from(moebius_unchecked(pi, sigma)) * BigInt::from(partition_multinomial(sigma))
        })
        .sum();
    k_cache()
        .lock()
        .expect("K cache poisoned")
        .insert(shape, value.clone());
    Ok(KCoefficient::new(value, pi.size()))
}

/// `C_{pr} = Σ_{σ∈P(p), |σ|=r} binom(p,σ)`, summed over integer partitions of
/// `p` with `r` parts weighted by the number of set partitions of that shape.
pub fn composition_count(p: usize, r: usize) -> Result<u64> {
    check_ground_set(p)?;
    if r == 0 || r > p {
        return Err(GlowError::range(format!("r = {r} outside 1..={p}")));
    }
    let pf = factorial(p) as u128;
    let total: u128 = integer_partitions(p)
        .into_iter()
        .filter(|lambda| lambda.len() == r)
        .map(|lambda| {
            let block_fact: u128 = lambda.iter().map(|&b| factorial(b) as u128).product();
            let mut mult: HashMap<usize, u64> = HashMap::new();
            for &b in &lambda {
                *mult.entry(b).or_default() += 1;
            }
            let mult_fact: u128 = mult
                .values()
                .map(|&m| factorial(m as usize) as u128)
                .product();
            let count = pf / (block_fact * mult_fact);
            let weight = pf / block_fact;
            count * weight
        })
        .sum();
    Ok(total as u64)
}

/// `K(one block) = Σ_{r=1}^{p} (−1)^{r−1} (r−1)! C_{pr}`.
pub fn coefficient_k_oneblock(p: usize) -> Result<BigInt> {
    check_ground_set(p)?;
    let mut total = BigInt::zero();
    for r in 1..=p {
        let term = BigInt::from(factorial(r - 1)) * BigInt::from(composition_count(p, r)?);
        if r % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// The partitions of `{1..p}` whose blocks all have even size.
#[derive(Clone, Debug)]
pub struct EvenPartitionSet {
    pub p: usize,
    pub members: Vec<SetPartition>,
}

impl EvenPartitionSet {
    /// Maximal elements in the reversed-refinement order: the perfect matchings.
    pub fn maximal(&self) -> Vec<&SetPartition> {
        self.members
            .iter()
            .filter(|m| {
                !self
                    .members
                    .iter()
                    .any(|other| other != *m && refines(m, other))
            })
            .collect()
    }
}

/// All partitions of `{1..r}` with every block of even size.
pub fn enumerate_even_partitions(r: usize) -> Result<EvenPartitionSet> {
    if r % 2 == 1 {
        return Err(GlowError::argument(format!("r = {r} must be even")));
    }
    check_ground_set(r)?;
    let members = PartitionIter::new(r).filter(|s| s.is_even()).collect();
    Ok(EvenPartitionSet { p: r, members })
}

/// Number of perfect matchings of `r` points, `(r)!/(2^{r/2}(r/2)!) = 1·3·5⋯(r−1)`.
pub fn matchings_count(r: usize) -> u64 {
    if r % 2 == 1 {
        return 0;
    }
    (1..r as u64).step_by(2).product::<u64>().max(1)
}

/// `K̃` of the one-block partition of size `p`, as an exact rational.
pub fn k_tilde_oneblock(p: usize) -> Result<BigRational> {
    if p == 0 {
        return Ok(BigRational::one());
    }
    Ok(coefficient_k(&SetPartition::one_block(p))?.normalized)
}
