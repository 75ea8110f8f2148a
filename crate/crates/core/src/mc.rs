//! Seeded Monte Carlo estimates of glow moments.
//!
//! Samples are drawn in fixed chunks of [`CHUNK_SIZE`]; chunk `c` uses a
//! ChaCha8 stream keyed by `(seed, c)`, and per-chunk partial sums are combined
//! in chunk order. Results therefore depend only on the matrix, `p_max`,
//! `samples` and `seed`, never on the thread count.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{GlowError, Result};
use crate::matrix::{BinaryHadamard, ComplexMatrix};

pub const CHUNK_SIZE: usize = 1 << 14;
pub const MAX_P: usize = 6;
pub const MAX_WORK: f64 = 1e11;
pub const HISTOGRAM_WIDTH: f64 = 0.05;
pub const HISTOGRAM_BINS: usize = 100;
pub const PHASE_BINS: usize = 16;
pub const CHI_SQUARE_LEVEL: f64 = 0.01;
const VECTOR_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            chunk_size: CHUNK_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(GlowError::argument("sample count must be positive"));
        }
        if self.chunk_size != CHUNK_SIZE {
            return Err(GlowError::argument(format!(
                "chunk size is fixed at {CHUNK_SIZE}"
            )));
        }
        Ok(())
    }
}

/// Runs `f(rng, count)` for every chunk, returning the results in chunk order.
pub(crate) fn run_chunks<T, F>(cfg: &McConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    cfg.validate()?;
    let chunk = cfg.chunk_size as u64;
    let chunks = cfg.samples.div_ceil(chunk);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let count = chunk.min(cfg.samples - c * chunk) as usize;
            f(&mut rng, count)
        })
        .collect())
}

pub(crate) fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(1.0, TAU * rng.random::<f64>()))
        .collect()
}

/// Running sums of one scalar statistic.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Standard error of the mean from the sample variance.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let var = ((self.sum_sq - n * self.mean().powi(2)) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub p: usize,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    fn new() -> Self {
        Histogram {
            width: HISTOGRAM_WIDTH,
            counts: vec![0; HISTOGRAM_BINS],
        }
    }

    /// Values past the last edge land in the last bin.
    fn push(&mut self, x: f64) {
        let bin = ((x / self.width) as usize).min(self.counts.len() - 1);
        self.counts[bin] += 1;
    }

    fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// Bin frequencies; they sum to one.
    pub fn mass(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        self.counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }
}

/// Estimates of `E(|Ω|/N)^{2p}` for `p = 1..=p_max`, with histograms.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub samples: u64,
    pub seed: u64,
    pub estimates: Vec<MomentEstimate>,
    /// Histogram of `|Ω|/N` on `[0, 5]`.
    pub histogram: Histogram,
    /// Counts of `arg Ω` in equal sectors of `[0, 2π)`; complex sampling only.
    pub phase_counts: Option<Vec<u64>>,
}

struct ChunkStats {
    moments: Vec<Moments>,
    histogram: Histogram,
    phases: Vec<u64>,
}

impl ChunkStats {
    fn new(p_max: usize) -> Self {
        ChunkStats {
            moments: vec![Moments::default(); p_max],
            histogram: Histogram::new(),
            phases: vec![0; PHASE_BINS],
        }
    }

    fn push(&mut self, t: f64) {
        let t2 = t * t;
        let mut power = 1.0;
        for m in &mut self.moments {
            power *= t2;
            m.push(power);
        }
        self.histogram.push(t);
    }
}

fn combine(parts: Vec<ChunkStats>, p_max: usize, cfg: &McConfig, complex: bool) -> McEstimate {
    let mut total = ChunkStats::new(p_max);
    for part in &parts {
        for (a, b) in total.moments.iter_mut().zip(&part.moments) {
            a.merge(b);
        }
        total.histogram.merge(&part.histogram);
        for (a, b) in total.phases.iter_mut().zip(&part.phases) {
            *a += b;
        }
    }
    McEstimate {
        samples: cfg.samples,
        seed: cfg.seed,
        estimates: total
            .moments
            .iter()
            .enumerate()
            .map(|(k, m)| MomentEstimate {
                p: k + 1,
                value: m.mean(),
                stderr: m.stderr(),
            })
            .collect(),
        histogram: total.histogram,
        phase_counts: complex.then_some(total.phases),
    }
}

fn check_bounds(n: usize, p_max: usize, cfg: &McConfig) -> Result<()> {
    if p_max == 0 || p_max > MAX_P {
        return Err(GlowError::range(format!(
            "p_max = {p_max} outside 1..={MAX_P}"
        )));
    }
    let work = cfg.samples as f64 * (n * n) as f64;
    if work > MAX_WORK {
        return Err(GlowError::size(format!(
            "samples·N² = {work:e} exceeds {MAX_WORK:e}"
        )));
    }
    Ok(())
}

/// `Ω = Σ_{ij} a_i b_j H_{ij} = ⟨a, Hb⟩` without conjugation.
pub fn glow_sample(h: &ComplexMatrix, a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    let n = h.order();
    if a.len() != n || b.len() != n {
        return Err(GlowError::argument("switching vectors must have length N"));
    }
    if a.iter()
        .chain(b)
        .any(|z| (z.norm() - 1.0).abs() > VECTOR_TOL)
    {
        return Err(GlowError::argument(
            "switching vectors must be unit modulus",
        ));
    }
    Ok(sample_unchecked(h, a, b))
}

fn sample_unchecked(h: &ComplexMatrix, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    (0..h.order())
        .map(|i| {
            a[i] * h
                .row(i)
                .iter()
                .zip(b)
                .map(|(x, y)| x * y)
                .sum::<Complex64>()
        })
        .sum()
}

/// Monte Carlo over `a, b` uniform on `T^N × T^N`.
pub fn mc_moments(h: &ComplexMatrix, p_max: usize, cfg: &McConfig) -> Result<McEstimate> {
    let n = h.order();
    check_bounds(n, p_max, cfg)?;
    let parts = run_chunks(cfg, |rng, count| {
        let mut stats = ChunkStats::new(p_max);
        for _ in 0..count {
            let a = random_phases(rng, n);
            let b = random_phases(rng, n);
            let omega = sample_unchecked(h, &a, &b);
            stats.push(omega.norm() / n as f64);
            let angle = omega.arg().rem_euclid(TAU);
            let bin = ((angle / TAU * PHASE_BINS as f64) as usize).min(PHASE_BINS - 1);
            stats.phases[bin] += 1;
        }
        stats
    })?;
    Ok(combine(parts, p_max, cfg, true))
}

/// Monte Carlo over `a, b` uniform on `{±1}^N × {±1}^N`.
pub fn mc_binary_moments(h: &BinaryHadamard, p_max: usize, cfg: &McConfig) -> Result<McEstimate> {
    let n = h.order();
    check_bounds(n, p_max, cfg)?;
    let parts = run_chunks(cfg, |rng, count| {
        let mut stats = ChunkStats::new(p_max);
        let mut a = vec![0i64; n];
        let mut b = vec![0i64; n];
        for _ in 0..count {
            for x in a.iter_mut().chain(b.iter_mut()) {
                *x = if rng.random::<bool>() { 1 } else { -1 };
            }
            let omega: i64 = (0..n)
                .map(|i| {
                    a[i] * h
                        .row(i)
                        .iter()
                        .zip(&b)
                        .map(|(&x, y)| x as i64 * y)
                        .sum::<i64>()
                })
                .sum();
            stats.push(omega.unsigned_abs() as f64 / n as f64);
        }
        stats
    })?;
    Ok(combine(parts, p_max, cfg, false))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub passes: bool,
}

/// Pearson test of equal cell probabilities at the [`CHI_SQUARE_LEVEL`] level.
pub fn uniformity_test(counts: &[u64]) -> Result<ChiSquareTest> {
    if counts.len() < 2 {
        return Err(GlowError::argument("need at least two cells"));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(GlowError::argument("empty sample"));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = counts.len() - 1;
    let critical = ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - CHI_SQUARE_LEVEL);
    Ok(ChiSquareTest {
        statistic,
        dof,
        critical,
        passes: statistic <= critical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::matrix::{fourier_matrix, sylvester_hadamard};

    fn f(n: u32) -> ComplexMatrix {
        fourier_matrix(&GroupSpec::cyclic(n).unwrap())
            .unwrap()
            .realize_complex()
    }

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    #[test]
    fn sample_examples() {
        let omega = glow_sample(&f(2), &ones(2), &ones(2)).unwrap();
        assert!((omega - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        for n in [3u32, 5, 8] {
            let omega = glow_sample(&f(n), &ones(n as usize), &ones(n as usize)).unwrap();
            assert!((omega - Complex64::new(n as f64, 0.0)).norm() < 1e-9);
        }
        let h = f(4);
        let a: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, k as f64))
            .collect();
        let b: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, 2.0 * k as f64))
            .collect();
        let lambda = Complex64::from_polar(1.0, 0.7);
        let rotated: Vec<Complex64> = a.iter().map(|x| x * lambda).collect();
        let w0 = glow_sample(&h, &a, &b).unwrap();
        let w1 = glow_sample(&h, &rotated, &b).unwrap();
        assert!((w1 - w0 * lambda).norm() < 1e-12);
        assert!(glow_sample(&h, &a[..3], &b).is_err());
        assert!(glow_sample(&h, &vec![Complex64::new(2.0, 0.0); 4], &b).is_err());
    }

    #[test]
    fn second_moment_is_one() {
        let est = mc_moments(&f(8), 2, &McConfig::new(20_000, 3)).unwrap();
        let e = &est.estimates[0];
        assert!((e.value - 1.0).abs() <= 5.0 * e.stderr);
        assert_eq!(est.histogram.counts.iter().sum::<u64>(), 20_000);
        assert!((est.histogram.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(
            est.phase_counts.as_ref().unwrap().iter().sum::<u64>(),
            20_000
        );
    }

    #[test]
    fn deterministic_and_chunk_aligned() {
        let cfg = McConfig::new(CHUNK_SIZE as u64 + 17, 11);
        let a = mc_moments(&f(4), 3, &cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| mc_moments(&f(4), 3, &cfg).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.samples, CHUNK_SIZE as u64 + 17);
        let c = mc_moments(&f(4), 3, &McConfig::new(CHUNK_SIZE as u64 + 17, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn binary_estimates() {
        let h4 = sylvester_hadamard(2).unwrap();
        let e = mc_binary_moments(&h4, 1, &McConfig::new(20_000, 5)).unwrap();
        assert!((e.estimates[0].value - 1.0).abs() <= 5.0 * e.estimates[0].stderr);
        assert!(e.phase_counts.is_none());
        let h16 = sylvester_hadamard(4).unwrap();
        let e = mc_binary_moments(&h16, 2, &McConfig::new(50_000, 5)).unwrap();
        assert!((e.estimates[1].value - 2.640625).abs() <= 5.0 * e.estimates[1].stderr);
        let h64 = sylvester_hadamard(6).unwrap();
        let e = mc_binary_moments(&h64, 1, &McConfig::new(20_000, 9)).unwrap();
        assert!((e.estimates[0].value - 1.0).abs() <= 5.0 * e.estimates[0].stderr);
    }

    #[test]
    fn bounds() {
        assert!(mc_moments(&f(2), 7, &McConfig::new(10, 0)).is_err());
        assert!(mc_moments(&f(2), 0, &McConfig::new(10, 0)).is_err());
        assert!(mc_moments(&f(2), 1, &McConfig::new(0, 0)).is_err());
        assert!(matches!(
            mc_moments(&f(64), 1, &McConfig::new(100_000_000, 0)),
            Err(GlowError::Size(_))
        ));
        let mut cfg = McConfig::new(10, 0);
        cfg.chunk_size = 10;
        assert!(mc_moments(&f(2), 1, &cfg).is_err());
    }

    #[test]
    fn chi_square() {
        let t = uniformity_test(&[100; 16]).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!((t.critical - 30.578).abs() < 1e-3);
        assert!(t.passes);
        let mut skew = vec![100u64; 16];
        skew[0] = 400;
        assert!(!uniformity_test(&skew).unwrap().passes);
        assert!(uniformity_test(&[5]).is_err());
    }
}
