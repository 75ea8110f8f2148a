//! Complex glow moments through the partition expansion
//! `E|Ω|^{2p} = Σ_π K(π) N^{|π|} I(π)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    binomial, factorial, factorial_big, falling_factorial, next_permutation,
};
use crate::cyclotomic::root_sum_integer;
use crate::error::{GlowError, Result};
use crate::fourier::i_fourier;
use crate::group::GroupSpec;
use crate::matrix::{ComplexMatrix, FourierMatrix};
use crate::partition::{coefficient_k, composition_count, PartitionIter, SetPartition};

pub const MAX_MOMENT_P: usize = 5;
/// Cap on `N^p · p!` for the generic integral.
pub const GENERIC_WORK_LIMIT: f64 = 1e8;
/// Cap on `(N^p · p!)^2` for the direct oracle.
pub const ORACLE_WORK_LIMIT: f64 = 1e9;

/// An exact rational or a floating-point value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn integer(v: BigInt) -> Self {
        Value::Exact(BigRational::from_integer(v))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    fn map2(
        &self,
        other: &Value,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(exact(a, b)),
            _ => Value::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        self.map2(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, other: &Value) -> Value {
        self.map2(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, other: &Value) -> Value {
        self.map2(other, |a, b| a / b, |a, b| a / b)
    }
}

/// Integers print plainly, rationals as `num/den`, floats in shortest form.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// The two matrix flavours the moment engine accepts.
#[derive(Clone, Copy, Debug)]
pub enum MomentInput<'a> {
    Fourier(&'a FourierMatrix),
    Generic(&'a ComplexMatrix),
}

impl<'a> From<&'a FourierMatrix> for MomentInput<'a> {
    fn from(f: &'a FourierMatrix) -> Self {
        MomentInput::Fourier(f)
    }
}

impl<'a> From<&'a ComplexMatrix> for MomentInput<'a> {
    fn from(h: &'a ComplexMatrix) -> Self {
        MomentInput::Generic(h)
    }
}

impl MomentInput<'_> {
    pub fn order(&self) -> usize {
        match self {
            MomentInput::Fourier(f) => f.order(),
            MomentInput::Generic(h) => h.order(),
        }
    }
}

/// Row products `∏_{r} H_{i_r,·}` (generic) or sums `Σ_r i_r` (Fourier), keyed by
/// the sorted index tuple of a block.
pub struct BlockProductCache<'a> {
    source: CacheSource<'a>,
    rows: HashMap<Vec<usize>, Vec<Complex64>>,
    sums: HashMap<Vec<usize>, usize>,
}

enum CacheSource<'a> {
    Matrix(&'a ComplexMatrix),
    Group(&'a GroupSpec),
}

impl<'a> BlockProductCache<'a> {
    pub fn for_matrix(h: &'a ComplexMatrix) -> Self {
        BlockProductCache {
            source: CacheSource::Matrix(h),
            rows: HashMap::new(),
            sums: HashMap::new(),
        }
    }

    pub fn for_group(g: &'a GroupSpec) -> Self {
        BlockProductCache {
            source: CacheSource::Group(g),
            rows: HashMap::new(),
            sums: HashMap::new(),
        }
    }

    fn key(indices: &[usize]) -> Vec<usize> {
        let mut k = indices.to_vec();
        k.sort_unstable();
        k
    }

    /// Entrywise product of the rows `indices`.
    pub fn row_product(&mut self, indices: &[usize]) -> Result<&[Complex64]> {
        let CacheSource::Matrix(h) = self.source else {
            return Err(GlowError::argument(
                "row products need a matrix-backed cache",
            ));
        };
        let key = Self::key(indices);
        Ok(self
            .rows
            .entry(key)
            .or_insert_with_key(|k| row_product_direct(h, k)))
    }

    /// Group sum of the elements `indices`.
    pub fn group_sum(&mut self, indices: &[usize]) -> Result<usize> {
        let CacheSource::Group(g) = self.source else {
            return Err(GlowError::argument("group sums need a group-backed cache"));
        };
        let key = Self::key(indices);
        Ok(*self
            .sums
            .entry(key)
            .or_insert_with_key(|k| k.iter().fold(0, |acc, &x| g.add_index(acc, x))))
    }
}

fn row_product_direct(h: &ComplexMatrix, indices: &[usize]) -> Vec<Complex64> {
    let mut row = vec![Complex64::new(1.0, 0.0); h.order()];
    for &i in indices {
        for (x, e) in row.iter_mut().zip(h.row(i)) {
            *x *= e;
        }
    }
    row
}

/// Real value and imaginary residual of a generic `I(π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenericIntegral {
    pub value: f64,
    pub imaginary_residual: f64,
}

fn for_each_index_tuple(n: usize, p: usize, first: usize, mut f: impl FnMut(&[usize])) {
    let mut i = vec![0usize; p];
    i[0] = first;
    loop {
        f(&i);
        let mut k = p;
        loop {
            if k == 1 {
                return;
            }
            k -= 1;
            i[k] += 1;
            if i[k] < n {
                break;
            }
            i[k] = 0;
        }
    }
}

/// `I(π) = N^{−|π|} Σ_{[i]=[j]} ∏_{β∈π} ⟨H_β(i), H_β(j)⟩` for a generic complex matrix.
pub fn i_generic(h: &ComplexMatrix, pi: &SetPartition) -> Result<GenericIntegral> {
    let n = h.order();
    let p = pi.size();
    let work = (n as f64).powi(p as i32) * factorial(p) as f64;
    if work > GENERIC_WORK_LIMIT {
        return Err(GlowError::size(format!(
            "N^p·p! = {work:e} exceeds {GENERIC_WORK_LIMIT:e}"
        )));
    }
    let blocks = pi.block_indices();
    // One partial per leading index, summed in index order afterwards.
    let partials: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut cache = BlockProductCache::for_matrix(h);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut ib = vec![0usize; p];
            let mut jb = vec![0usize; p];
            for_each_index_tuple(n, p, first, |i| {
                let mut j = i.to_vec();
                j.sort_unstable();
                loop {
                    let mut term = Complex64::new(1.0, 0.0);
                    for block in &blocks {
                        let k = block.len();
                        for (s, &r) in block.iter().enumerate() {
                            ib[s] = i[r];
                            jb[s] = j[r];
                        }
                        let u = cache.row_product(&ib[..k]).expect("matrix cache").to_vec();
                        let v = cache.row_product(&jb[..k]).expect("matrix cache");
                        let inner: Complex64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
                        term *= inner;
                    }
                    acc += term;
                    if !next_permutation(&mut j) {
                        break;
                    }
                }
            });
            acc
        })
        .collect();
    let total: Complex64 = partials.iter().sum();
    let scale = (n as f64).powi(pi.num_blocks() as i32);
    Ok(GenericIntegral {
        value: total.re / scale,
        imaginary_residual: total.im / scale,
    })
}

/// `#{i, j ∈ [N]^p : [i] = [j]} = Σ_{r=1}^{p} C_{pr} N!/(N−r)!`.
pub fn i_oneblock_closed(p: usize, n: u64) -> Result<BigInt> {
    if p == 0 || p > crate::partition::MAX_GROUND_SET {
        return Err(GlowError::range(format!("p = {p} outside 1..=12")));
    }
    let mut total = BigInt::zero();
    for r in 1..=p {
        total += BigInt::from(composition_count(p, r)?) * falling_factorial(n, r);
    }
    Ok(total)
}

/// `#{i, j ∈ [N]^p : [i] = [j]}` by enumerating each `i` and its distinct rearrangements.
pub fn oneblock_count_direct(p: usize, n: usize) -> Result<u64> {
    let work = (n as f64).powi(p as i32) * factorial(p) as f64;
    if p == 0 || work > GENERIC_WORK_LIMIT {
        return Err(GlowError::size(format!(
            "direct count for p = {p}, N = {n} out of range"
        )));
    }
    let mut count = 0u64;
    for first in 0..n {
        for_each_index_tuple(n, p, first, |i| {
            let mut j = i.to_vec();
            j.sort_unstable();
            count += 1;
            while next_permutation(&mut j) {
                count += 1;
            }
        });
    }
    Ok(count)
}

/// A moment computed through the partition expansion.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub p: usize,
    pub n: usize,
    /// `E|Ω|^{2p}`.
    pub total: Value,
    /// `K(π) N^{|π|} I(π)` per partition, in enumeration order.
    pub breakdown: Vec<(SetPartition, Value)>,
    /// `total / (p! N^{2p})`.
    pub normalized: Value,
}

impl MomentReport {
    /// `J(σ)`: normalized contributions summed over all partitions of each block shape.
    pub fn shape_terms(&self) -> BTreeMap<Vec<usize>, Value> {
        let scale = self.scale();
        let mut out: BTreeMap<Vec<usize>, Value> = BTreeMap::new();
        for (pi, v) in &self.breakdown {
            let term = v.div(&scale);
            let slot = out.entry(pi.shape()).or_insert_with(|| match term {
                Value::Exact(_) => Value::Exact(BigRational::zero()),
                Value::Float(_) => Value::Float(0.0),
            });
            *slot = slot.map2(&term, |a, b| a + b, |a, b| a + b);
        }
        out
    }

    fn scale(&self) -> Value {
        Value::integer(factorial_big(self.p) * num_traits::pow(BigInt::from(self.n), 2 * self.p))
    }

    /// The total assembled as an exact integer, when exact.
    pub fn total_integer(&self) -> Option<BigInt> {
        self.total
            .as_exact()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 || p > MAX_MOMENT_P {
        return Err(GlowError::range(format!(
            "moment order p = {p} outside 1..={MAX_MOMENT_P}"
        )));
    }
    Ok(())
}

/// Assembles `Σ_π K(π) N^{|π|} I(π)`; `I` is evaluated once per block shape.
pub fn moment_exact<'a>(h: impl Into<MomentInput<'a>>, p: usize) -> Result<MomentReport> {
    check_p(p)?;
    let h = h.into();
    let n = h.order();
    let mut by_shape: HashMap<Vec<usize>, Value> = HashMap::new();
    let mut breakdown = Vec::new();
    for pi in PartitionIter::new(p) {
        let shape = pi.shape();
        let integral = match by_shape.get(&shape) {
            Some(v) => v.clone(),
            None => {
                let v = match h {
                    MomentInput::Fourier(f) => Value::integer(i_fourier(f.group(), &pi)?.value),
                    MomentInput::Generic(m) => Value::Float(i_generic(m, &pi)?.value),
                };
                by_shape.insert(shape, v.clone());
                v
            }
        };
        let k = coefficient_k(&pi)?.value;
        let weight = Value::integer(k * num_traits::pow(BigInt::from(n), pi.num_blocks()));
        breakdown.push((pi, weight.mul(&integral)));
    }
    let total = match h {
        MomentInput::Fourier(_) => Value::Exact(
            breakdown
                .iter()
                .filter_map(|(_, v)| v.as_exact().cloned())
                .sum(),
        ),
        MomentInput::Generic(_) => Value::Float(breakdown.iter().map(|(_, v)| v.to_f64()).sum()),
    };
    let mut report = MomentReport {
        p,
        n,
        total,
        breakdown,
        normalized: Value::Float(0.0),
    };
    report.normalized = report.total.div(&report.scale());
    Ok(report)
}

/// Index pairs `(i, j)` in `[N]^p` with `[i] = [j]`.
fn multiset_pairs(n: usize, p: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for first in 0..n {
        for_each_index_tuple(n, p, first, |i| {
            let mut j = i.to_vec();
            j.sort_unstable();
            loop {
                out.push((i.to_vec(), j.clone()));
                if !next_permutation(&mut j) {
                    break;
                }
            }
        });
    }
    out
}

/// Direct evaluation of
/// `Σ_{[i]=[j], [x]=[y]} H_{i_1x_1}⋯H_{i_px_p} / (H_{j_1y_1}⋯H_{j_py_p})`.
///
/// Fourier inputs are reduced exactly through the cyclotomic polynomial of
/// the root order; generic inputs return a float.
pub fn moment_oracle<'a>(h: impl Into<MomentInput<'a>>, p: usize) -> Result<Value> {
    check_p(p)?;
    let h = h.into();
    let n = h.order();
    let work = ((n as f64).powi(p as i32) * factorial(p) as f64).powi(2);
    if work > ORACLE_WORK_LIMIT {
        return Err(GlowError::size(format!(
            "oracle work {work:e} exceeds {ORACLE_WORK_LIMIT:e}"
        )));
    }
    let pairs = multiset_pairs(n, p);
    match h {
        MomentInput::Fourier(f) => {
            let l = f.root_order() as usize;
            let mut counts = vec![0i64; l];
            for (i, j) in &pairs {
                for (x, y) in &pairs {
                    let mut e = 0usize;
                    for s in 0..p {
                        e += f.exponent(i[s], x[s]) as usize + l - f.exponent(j[s], y[s]) as usize;
                    }
                    counts[e % l] += 1;
                }
            }
            let v = root_sum_integer(&counts, l as u32)
                .ok_or_else(|| GlowError::precondition("oracle sum is not an integer"))?;
            Ok(Value::integer(BigInt::from(v)))
        }
        MomentInput::Generic(m) => {
            let partials: Vec<f64> = pairs
                .par_iter()
                .map(|(i, j)| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (x, y) in &pairs {
                        let mut t = Complex64::new(1.0, 0.0);
                        for s in 0..p {
                            t *= m.entry(i[s], x[s]) * m.entry(j[s], y[s]).conj();
                        }
                        acc += t;
                    }
                    acc.re
                })
                .collect();
            Ok(Value::Float(partials.iter().sum()))
        }
    }
}

/// `r = normalized − (1 − binom(p,2)/N)` and `N² r`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalityResidual {
    pub residual: Value,
    pub scaled: Value,
}

pub fn universality_residual<'a>(
    h: impl Into<MomentInput<'a>>,
    p: usize,
) -> Result<UniversalityResidual> {
    let h = h.into();
    let report = moment_exact(h, p)?;
    Ok(universality_from_report(&report))
}

pub fn universality_from_report(report: &MomentReport) -> UniversalityResidual {
    let n = report.n as i64;
    let leading = BigRational::one()
        - BigRational::new(BigInt::from(binomial(report.p as u64, 2)), BigInt::from(n));
    let residual = report.normalized.sub(&Value::Exact(leading));
    let scaled = residual.mul(&Value::integer(BigInt::from(n * n)));
    UniversalityResidual { residual, scaled }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::matrix::fourier_matrix;
    use crate::partition::{enumerate_partitions, partition_multinomial};
    use num_traits::Signed;

    fn fm(n: u32) -> FourierMatrix {
        fourier_matrix(&GroupSpec::cyclic(n).unwrap()).unwrap()
    }

    fn int(v: i64) -> Value {
        Value::integer(BigInt::from(v))
    }

    fn count_multiset_pairs(n: usize, p: usize) -> usize {
        multiset_pairs(n, p).len()
    }

    #[test]
    fn oneblock_closed_forms() {
        for n in 1..=12i64 {
            let nn = n as u64;
            assert_eq!(
                i_oneblock_closed(2, nn).unwrap(),
                BigInt::from(n * (2 * n - 1))
            );
            assert_eq!(
                i_oneblock_closed(3, nn).unwrap(),
                BigInt::from(n * (6 * n * n - 9 * n + 4))
            );
            assert_eq!(
                i_oneblock_closed(4, nn).unwrap(),
                BigInt::from(n * (24 * n * n * n - 72 * n * n + 82 * n - 33))
            );
        }
        assert!(i_oneblock_closed(0, 3).is_err());
        assert!(i_oneblock_closed(13, 3).is_err());
    }

    #[test]
    fn oneblock_three_ways() {
        for p in 1..=5 {
            let parts = enumerate_partitions(p).unwrap();
            for n in 1..=10usize {
                if p == 5 && n > 6 {
                    continue;
                }
                let closed = i_oneblock_closed(p, n as u64).unwrap();
                let via_sigma: BigInt = parts
                    .iter()
                    .map(|s| {
                        BigInt::from(partition_multinomial(s))
                            * falling_factorial(n as u64, s.num_blocks())
                    })
                    .sum();
                assert_eq!(closed, via_sigma);
                assert_eq!(closed, BigInt::from(count_multiset_pairs(n, p)));
                assert_eq!(closed, BigInt::from(oneblock_count_direct(p, n).unwrap()));
            }
        }
    }

    #[test]
    fn generic_integral_examples() {
        let f2 = fm(2).realize_complex();
        let pi = SetPartition::one_block(2);
        let v = i_generic(&f2, &pi).unwrap();
        assert!((v.value - 6.0).abs() < 1e-9);
        assert!(v.imaginary_residual.abs() < 1e-9);
        for p in 1..=3 {
            let v = i_generic(&fm(5).realize_complex(), &SetPartition::singletons(p)).unwrap();
            assert!((v.value - 5f64.powi(p as i32)).abs() < 1e-8);
        }
        let big = fm(64).realize_complex();
        assert!(matches!(
            i_generic(&big, &SetPartition::one_block(5)),
            Err(GlowError::Size(_))
        ));
    }

    #[test]
    fn generic_padding_and_bound() {
        let h = fm(4).realize_complex();
        let pi: SetPartition = "1,2|3".parse().unwrap();
        let base = i_generic(&h, &pi).unwrap().value;
        let padded = i_generic(&h, &pi.padded(1)).unwrap().value;
        assert!((padded - 4.0 * base).abs() < 1e-8 * padded.abs());
        for pi in enumerate_partitions(4).unwrap() {
            let v = i_generic(&h, &pi).unwrap();
            let bound = i_oneblock_closed(4, 4).unwrap().to_f64().unwrap();
            assert!(v.value.abs() <= bound * (1.0 + 1e-8));
            assert!(v.imaginary_residual.abs() <= 1e-9 * 4f64.powi(4));
        }
    }

    #[test]
    fn cache_matches_direct() {
        let h = fm(5).realize_complex();
        let mut cache = BlockProductCache::for_matrix(&h);
        let a = cache.row_product(&[3, 1, 1]).unwrap().to_vec();
        assert_eq!(a, row_product_direct(&h, &[1, 1, 3]));
        assert!(cache.group_sum(&[1, 2]).is_err());
        let g = GroupSpec::new(&[2, 4]).unwrap();
        let mut gc = BlockProductCache::for_group(&g);
        assert_eq!(gc.group_sum(&[5, 7]).unwrap(), g.add_index(5, 7));
        assert_eq!(gc.group_sum(&[7, 5]).unwrap(), g.add_index(5, 7));
    }

    #[test]
    fn exact_moment_examples() {
        let r = moment_exact(&fm(2), 2).unwrap();
        assert_eq!(r.total, int(20));
        assert_eq!(r.breakdown.len(), 2);
        assert_eq!(moment_exact(&fm(3), 3).unwrap().total, int(1845));
        for n in 2..=6 {
            assert_eq!(moment_exact(&fm(n), 1).unwrap().total, int((n * n) as i64));
        }
        assert!(moment_exact(&fm(2), 6).is_err());
        assert!(moment_exact(&fm(2), 0).is_err());
    }

    #[test]
    fn exact_moment_matches_oracle() {
        for (n, ps) in [(2u32, 1..=3), (3, 1..=3), (4, 1..=2)] {
            let f = fm(n);
            for p in ps {
                let oracle = moment_oracle(&f, p).unwrap();
                assert_eq!(moment_exact(&f, p).unwrap().total, oracle);
            }
        }
        let f22 = fourier_matrix(&GroupSpec::new(&[2, 2]).unwrap()).unwrap();
        assert_eq!(moment_oracle(&f22, 2).unwrap(), int(400));
        assert_eq!(moment_exact(&f22, 2).unwrap().total, int(400));
        assert_eq!(moment_oracle(&fm(2), 1).unwrap(), int(4));
        assert!(moment_oracle(&fm(32), 3).is_err());
    }

    #[test]
    fn exact_moment_polynomials() {
        for n in 2..=7i64 {
            let f = fm(n as u32);
            assert_eq!(
                moment_exact(&f, 2).unwrap().total,
                int(2 * n.pow(4) - 2 * n.pow(3) + n * n)
            );
            assert_eq!(
                moment_exact(&f, 3).unwrap().total,
                int(6 * n.pow(6) - 18 * n.pow(5) + 33 * n.pow(4) - 36 * n.pow(3) + 16 * n * n)
            );
        }
    }

    #[test]
    fn breakdown_sums_to_total() {
        let r = moment_exact(&fm(5), 4).unwrap();
        let sum: BigRational = r
            .breakdown
            .iter()
            .map(|(_, v)| v.as_exact().unwrap().clone())
            .sum();
        assert_eq!(Value::Exact(sum), r.total);
        let shape_sum: BigRational = r
            .shape_terms()
            .values()
            .map(|v| v.as_exact().unwrap().clone())
            .sum();
        assert_eq!(Value::Exact(shape_sum), r.normalized);
        let scale = BigRational::from_integer(factorial_big(4) * BigInt::from(5).pow(8));
        assert_eq!(
            Value::Exact(r.normalized.as_exact().unwrap() * scale),
            r.total
        );
    }

    #[test]
    fn generic_moment_agrees() {
        for n in [2u32, 3, 4] {
            let f = fm(n);
            let h = f.realize_complex();
            for p in 1..=3 {
                if n == 4 && p == 3 {
                    continue;
                }
                let exact = moment_exact(&f, p).unwrap().total.to_f64();
                let generic = moment_exact(&h, p).unwrap();
                assert!((generic.total.to_f64() - exact).abs() <= 1e-8 * exact);
                let oracle = moment_oracle(&h, p).unwrap().to_f64();
                assert!((oracle - exact).abs() <= 1e-8 * exact);
                let sum: f64 = generic.breakdown.iter().map(|(_, v)| v.to_f64()).sum();
                assert!((sum - generic.total.to_f64()).abs() <= 1e-8 * exact);
            }
        }
    }

    #[test]
    fn moment_is_switching_invariant() {
        let h = fm(4).realize_complex();
        let a: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, 0.3 * k as f64))
            .collect();
        let b: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, -1.1 * k as f64))
            .collect();
        let other = h
            .switched(&a, &b)
            .unwrap()
            .permute_rows(&[2, 0, 3, 1])
            .unwrap()
            .permute_cols(&[1, 3, 0, 2])
            .unwrap();
        for p in 1..=3 {
            let x = moment_exact(&h, p).unwrap().total.to_f64();
            let y = moment_exact(&other, p).unwrap().total.to_f64();
            assert!((x - y).abs() <= 1e-8 * x);
        }
    }

    #[test]
    fn universality_examples() {
        for n in 2..=8u32 {
            let f = fm(n);
            let r1 = universality_residual(&f, 1).unwrap();
            assert_eq!(r1.residual, Value::Exact(BigRational::zero()));
            let r2 = universality_residual(&f, 2).unwrap();
            assert_eq!(
                r2.scaled,
                Value::Exact(BigRational::new(1.into(), 2.into()))
            );
            let r3 = universality_residual(&f, 3).unwrap();
            assert!(r3.scaled.as_exact().unwrap().abs() <= BigRational::from_integer(6.into()));
        }
    }

    #[test]
    fn value_display() {
        assert_eq!(int(-12).to_string(), "-12");
        assert_eq!(
            Value::Exact(BigRational::new(3.into(), 4.into())).to_string(),
            "3/4"
        );
        assert_eq!(Value::Float(0.5).to_string(), "0.5");
    }
}
