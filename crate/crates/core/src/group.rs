//! Finite abelian groups `Z_{N1} × ⋯ × Z_{Nk}` in mixed-radix encoding.
//!
//! Elements are addressed by a linear index in `[0, N)`; the first factor is
//! the most significant digit, which makes the Fourier matrix of the group
//! equal to the Kronecker product `F_{N1} ⊗ ⋯ ⊗ F_{Nk}` entry for entry.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::combinatorics::integer_partitions;
use crate::error::{GlowError, Result};

pub const MAX_GROUP_ORDER: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
    exponent: u32,
    even_factor_count: usize,
}

impl GroupSpec {
    /// Builds `Z_{N1} × ⋯ × Z_{Nk}`, keeping the factor order as given.
    pub fn new(factors: &[u32]) -> Result<Self> {
        if factors.is_empty() {
            return Err(GlowError::size("a group needs at least one cyclic factor"));
        }
        if factors.contains(&0) {
            return Err(GlowError::size("cyclic factors must be at least 1"));
        }
        let mut order: usize = 1;
        for &f in factors {
            order = order
                .checked_mul(f as usize)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or_else(|| GlowError::size(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        }
        let exponent = factors.iter().fold(1u32, |acc, &f| acc.lcm(&f));
        let even_factor_count = factors.iter().filter(|&&f| f % 2 == 0).count();
        let mut strides = vec![1usize; factors.len()];
        for r in (0..factors.len().saturating_sub(1)).rev() {
            strides[r] = strides[r + 1] * factors[r + 1] as usize;
        }
        Ok(GroupSpec {
            factors: factors.to_vec(),
            strides,
            order,
            exponent,
            even_factor_count,
        })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(&[n])
    }

    /// `Z_2^n`; `n = 0` gives the trivial group (represented as `Z_1`).
    pub fn elementary_two(n: usize) -> Result<Self> {
        if n == 0 {
            Self::new(&[1])
        } else {
            Self::new(&vec![2; n])
        }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    /// Group order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Exponent `L = lcm(N_r)`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Number of even cyclic factors.
    pub fn even_factor_count(&self) -> usize {
        self.even_factor_count
    }

    pub fn decode(&self, index: usize) -> Vec<u32> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| ((index / s) % f as usize) as u32)
            .collect()
    }

    pub fn encode(&self, coords: &[u32]) -> Result<usize> {
        if coords.len() != self.factors.len() {
            return Err(GlowError::argument(
                "coordinate count does not match the group",
            ));
        }
        let mut idx = 0;
        for ((&c, &f), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= f {
                return Err(GlowError::range(format!("coordinate {c} not below {f}")));
            }
            idx += c as usize * s;
        }
        Ok(idx)
    }

    /// Sum of two elements given by linear index.
    pub fn add_index(&self, a: usize, b: usize) -> usize {
        let mut idx = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            idx += (((a / s) % f + (b / s) % f) % f) * s;
        }
        idx
    }

    pub fn neg_index(&self, a: usize) -> usize {
        let mut idx = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            idx += ((f - (a / s) % f) % f) * s;
        }
        idx
    }

    pub fn element(&self, index: usize) -> Result<GroupElement<'_>> {
        if index >= self.order {
            return Err(GlowError::range(format!(
                "index {index} not below {}",
                self.order
            )));
        }
        Ok(GroupElement {
            group: self,
            coords: self.decode(index),
        })
    }

    pub fn zero(&self) -> GroupElement<'_> {
        GroupElement {
            group: self,
            coords: vec![0; self.factors.len()],
        }
    }

    /// Dense addition table, usable for orders up to `2^12`.
    pub fn addition_table(&self) -> Result<AdditionTable> {
        if self.order > 1 << 12 {
            return Err(GlowError::size(
                "addition table limited to groups of order ≤ 4096",
            ));
        }
        let n = self.order;
        let mut sum = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                sum[a * n + b] = self.add_index(a, b) as u16;
            }
        }
        Ok(AdditionTable { n, sum })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for GroupSpec {
    type Err = GlowError;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s)
    }
}

/// Parses `Z4xZ2`, `Z2^3`, `z3xz4^2` (case-insensitive).
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let lower = text.to_ascii_lowercase();
    let mut factors = Vec::new();
    let mut offset = 0;
    for token in lower.split('x') {
        let t = token.trim();
        let lead = offset + (token.len() - token.trim_start().len());
        let Some(rest) = t.strip_prefix('z') else {
            return Err(GlowError::parse(
                lead,
                format!("expected 'Z<k>', got {t:?}"),
            ));
        };
        let (base, power) = match rest.split_once('^') {
            Some((b, e)) => (b, Some(e)),
            None => (rest, None),
        };
        let n: u32 = base
            .parse()
            .map_err(|_| GlowError::parse(lead + 1, format!("bad cyclic order {base:?}")))?;
        let m: usize = match power {
            Some(e) => e.parse().map_err(|_| {
                GlowError::parse(lead + 2 + base.len(), format!("bad exponent {e:?}"))
            })?,
            None => 1,
        };
        if m == 0 {
            return Err(GlowError::parse(
                lead + 2 + base.len(),
                "exponent must be positive",
            ));
        }
        if m > 64 {
            return Err(GlowError::size("exponent too large"));
        }
        factors.extend(std::iter::repeat_n(n, m));
        offset += token.len() + 1;
    }
    GroupSpec::new(&factors)
}

/// Precomputed `a + b` for small groups, row-major.
#[derive(Clone, Debug)]
pub struct AdditionTable {
    n: usize,
    sum: Vec<u16>,
}

impl AdditionTable {
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.sum[a * self.n + b] as usize
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

/// An element of a specific group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement<'g> {
    group: &'g GroupSpec,
    coords: Vec<u32>,
}

impl<'g> GroupElement<'g> {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        self.group
            .encode(&self.coords)
            .expect("coordinates in range")
    }

    pub fn group(&self) -> &'g GroupSpec {
        self.group
    }

    pub fn add(&self, other: &GroupElement<'_>) -> Result<GroupElement<'g>> {
        if self.group != other.group {
            return Err(GlowError::argument(format!(
                "cannot add elements of {} and {}",
                self.group, other.group
            )));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.group.factors)
            .map(|((a, b), f)| (a + b) % f)
            .collect();
        Ok(GroupElement {
            group: self.group,
            coords,
        })
    }

    pub fn neg(&self) -> GroupElement<'g> {
        let coords = self
            .coords
            .iter()
            .zip(&self.group.factors)
            .map(|(a, f)| (f - a) % f)
            .collect();
        GroupElement {
            group: self.group,
            coords,
        }
    }
}

fn prime_factorization(mut n: u32) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// One representative per isomorphism class of abelian groups of order `n`,
/// in invariant-factor form `Z_{d1} × ⋯ × Z_{dk}` with `d1 | d2 | ⋯`.
pub fn abelian_groups_of_order(n: u32) -> Result<Vec<GroupSpec>> {
    if n == 0 {
        return Err(GlowError::range("group order must be positive"));
    }
    if n == 1 {
        return Ok(vec![GroupSpec::new(&[1])?]);
    }
    let primes = prime_factorization(n);
    let mut combos: Vec<Vec<u32>> = vec![vec![]];
    for (p, e) in primes {
        let mut next = Vec::new();
        for lambda in integer_partitions(e) {
            for combo in &combos {
                // lambda is non-increasing; the k-th largest prime-power goes
                // into the k-th largest invariant factor.
                let mut merged = combo.clone();
                if merged.len() < lambda.len() {
                    merged.resize(lambda.len(), 1);
                }
                for (k, &part) in lambda.iter().enumerate() {
                    merged[k] *= p.pow(part as u32);
                }
                next.push(merged);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            GroupSpec::new(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_group_examples() {
        let g = GroupSpec::new(&[4, 2]).unwrap();
        assert_eq!((g.order(), g.even_factor_count()), (8, 2));
        let g = GroupSpec::new(&[5]).unwrap();
        assert_eq!((g.order(), g.even_factor_count()), (5, 0));
        let g = GroupSpec::new(&[2, 2, 2]).unwrap();
        assert_eq!((g.order(), g.exponent(), g.even_factor_count()), (8, 2, 3));
        assert!(matches!(GroupSpec::new(&[]), Err(GlowError::Size(_))));
        assert!(matches!(
            GroupSpec::new(&[1024, 2048]),
            Err(GlowError::Size(_))
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let s = z4.element(3).unwrap().add(&z4.element(2).unwrap()).unwrap();
        assert_eq!(s.index(), 1);
        let v = GroupSpec::new(&[2, 2]).unwrap();
        let a = v.encode(&[1, 0]).unwrap();
        let b = v.encode(&[1, 1]).unwrap();
        assert_eq!(v.decode(v.add_index(a, b)), vec![0, 1]);
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert!(z4.zero().add(&z3.zero()).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for n in 1..=64u32 {
            for g in abelian_groups_of_order(n).unwrap() {
                let t = g.addition_table().unwrap();
                let n = g.order();
                for a in 0..n {
                    assert_eq!(t.add(a, 0), a);
                    assert_eq!(t.add(a, g.neg_index(a)), 0);
                    let e = g.element(a).unwrap();
                    assert_eq!(e.add(&e.neg()).unwrap(), g.zero());
                    for b in 0..n {
                        assert_eq!(t.add(a, b), t.add(b, a));
                    }
                }
                // associativity on a sparse grid keeps the loop cheap
                for a in (0..n).step_by(3) {
                    for b in 0..n {
                        for c in (0..n).step_by(5) {
                            assert_eq!(t.add(t.add(a, b), c), t.add(a, t.add(b, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_full_small() {
        for g in ["Z2^3", "Z4xZ2", "Z3xZ3", "Z12"] {
            let g: GroupSpec = g.parse().unwrap();
            let n = g.order();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(
                            g.add_index(g.add_index(a, b), c),
                            g.add_index(a, g.add_index(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn order_four_groups_differ_in_even_count() {
        assert_eq!(GroupSpec::cyclic(4).unwrap().even_factor_count(), 1);
        assert_eq!(GroupSpec::new(&[2, 2]).unwrap().even_factor_count(), 2);
    }

    #[test]
    fn encode_decode_round_trip() {
        for spec in ["Z4096", "Z2^12", "Z3xZ5xZ7", "Z8xZ4xZ2"] {
            let g: GroupSpec = spec.parse().unwrap();
            for idx in 0..g.order().min(1 << 12) {
                assert_eq!(g.encode(&g.decode(idx)).unwrap(), idx);
            }
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_group("Z8").unwrap().factors(), &[8]);
        assert_eq!(
            parse_group("Z2^3").unwrap(),
            parse_group("Z2xZ2xZ2").unwrap()
        );
        assert_eq!(parse_group("Z3xZ4").unwrap().factors(), &[3, 4]);
        assert_eq!(parse_group("z4XZ2").unwrap().factors(), &[4, 2]);
        assert_eq!(parse_group("Z2^2xZ3").unwrap().factors(), &[2, 2, 3]);
        match parse_group("Z4xY2") {
            Err(GlowError::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_group("Z").is_err());
        assert!(parse_group("Z2^").is_err());
        assert!(parse_group("Z2^0").is_err());
        assert!(parse_group("").is_err());
        assert_eq!(GroupSpec::new(&[4, 2]).unwrap().to_string(), "Z4xZ2");
    }

    #[test]
    fn isomorphism_classes() {
        let count = |n| abelian_groups_of_order(n).unwrap().len();
        assert_eq!(count(4), 2);
        assert_eq!(count(8), 3);
        assert_eq!(count(12), 2);
        assert_eq!(count(16), 5);
        assert_eq!(count(7), 1);
        let twelve: Vec<Vec<u32>> = abelian_groups_of_order(12)
            .unwrap()
            .iter()
            .map(|g| g.factors().to_vec())
            .collect();
        assert!(twelve.contains(&vec![12]) && twelve.contains(&vec![2, 6]));
    }

    proptest! {
        #[test]
        fn index_arithmetic_matches_coordinates(
            factors in proptest::collection::vec(1u32..7, 1..4),
            a in 0usize..10_000,
            b in 0usize..10_000,
        ) {
            let g = GroupSpec::new(&factors).unwrap();
            let (a, b) = (a % g.order(), b % g.order());
            let ea = g.element(a).unwrap();
            let eb = g.element(b).unwrap();
            prop_assert_eq!(ea.add(&eb).unwrap().index(), g.add_index(a, b));
            prop_assert_eq!(ea.neg().index(), g.neg_index(a));
        }
    }
}
