//! The built-in verification suite: eleven exact or statistical checks, each
//! with a wall-time budget.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::binary::{
    binary_moment, binary_moment_via_kernels, check_row_sum_parities, even_odd_split, exact_glow,
    normalized_binary_moment,
};
use crate::combinatorics::{binomial, factorial};
use crate::error::Result;
use crate::fourier::{
    fit_expansion, fourier_moment_polynomial_check, i_fourier, i_pair_closed, torus_integral_mc,
    Conjugation, ExpansionCoefficients,
};
use crate::group::{abelian_groups_of_order, GroupSpec};
use crate::matrix::{fourier_matrix, load_binary_matrix, sylvester_hadamard, BinaryHadamard};
use crate::mc::{mc_moments, uniformity_test, McConfig};
use crate::moments::{
    i_oneblock_closed, moment_exact, moment_oracle, oneblock_count_direct,
    universality_from_report, Value,
};
use crate::partition::{
    coefficient_k, coefficient_k_oneblock, composition_count, enumerate_partitions,
    is_coarser_or_equal, k_tilde_oneblock, moebius, moebius_row_recursive, SetPartition,
};
use crate::walsh::{fit_all_ipartitions, fit_all_systems};

/// Order-12 Hadamard matrix used by the binary checks.
pub const PALEY_12: &str = include_str!("../data/paley12.hdm");

/// Statistical tolerance for Monte Carlo comparisons, in standard errors.
pub const MC_SIGMAS: f64 = 5.0;
pub const MC_SAMPLES: u64 = 100_000;
pub const MC_SEED: u64 = 42;
/// Frozen bound on `N⁴ · residual` of the p = 4 expansion.
pub const P4_RESIDUAL_BOUND: i64 = 60;
/// Bound on `N² · |normalized − (1 − binom(p,2)/N)|` for p = 2, 3.
pub const UNIVERSALITY_BOUND: i64 = 10;
/// Highest `n` in `Z_2^n` used by the Walsh fits; `n = 0` is the trivial group.
pub const WALSH_N_MAX: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Area {
    Partition,
    Moments,
    Fourier,
    Binary,
    Mc,
}

impl Area {
    pub fn name(self) -> &'static str {
        match self {
            Area::Partition => "partition",
            Area::Moments => "moments",
            Area::Fourier => "fourier",
            Area::Binary => "binary",
            Area::Mc => "mc",
        }
    }
}

/// What a check saw, before timing is attached.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl Outcome {
    fn new(expected: impl Into<String>) -> Self {
        Outcome {
            expected: expected.into(),
            observed: String::new(),
            passed: true,
        }
    }

    /// Records an observation; a false `ok` fails the outcome.
    fn check(&mut self, ok: bool, observed: impl AsRef<str>) {
        if !self.observed.is_empty() {
            self.observed.push_str("; ");
        }
        if !ok {
            self.observed.push_str("FAIL ");
        }
        self.observed.push_str(observed.as_ref());
        self.passed &= ok;
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub area: Area,
    pub budget: Duration,
    run: fn() -> Result<Outcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub area: Area,
    pub expected: String,
    pub observed: String,
    pub checks_passed: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub results: Vec<CriterionResult>,
    pub passed: bool,
}

impl VerifyReport {
    /// One line per criterion.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let _ = writeln!(
                out,
                "[{}] {:>2} {:<9} {:<34} {:>7.2}s / {:>4.0}s  {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.area.name(),
                r.name,
                r.seconds,
                r.budget_seconds,
                r.observed
            );
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        let _ = writeln!(out, "{passed}/{} criteria passed", self.results.len());
        out
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion {
            id: 1,
            name: "partition machinery",
            area: Area::Partition,
            budget: s(10),
            run: partition_machinery,
        },
        Criterion {
            id: 2,
            name: "composition counts",
            area: Area::Partition,
            budget: s(1),
            run: composition_counts,
        },
        Criterion {
            id: 3,
            name: "one-block counts",
            area: Area::Moments,
            budget: s(30),
            run: oneblock_counts,
        },
        Criterion {
            id: 4,
            name: "moment assembly vs oracle",
            area: Area::Moments,
            budget: s(60),
            run: moment_assembly,
        },
        Criterion {
            id: 5,
            name: "pair-partition closed form",
            area: Area::Fourier,
            budget: s(60),
            run: pair_partition_default,
        },
        Criterion {
            id: 6,
            name: "expansion residuals",
            area: Area::Fourier,
            budget: s(300),
            run: expansion_residuals,
        },
        Criterion {
            id: 7,
            name: "binary glow",
            area: Area::Binary,
            budget: s(60),
            run: binary_glow,
        },
        Criterion {
            id: 8,
            name: "universality",
            area: Area::Moments,
            budget: s(30),
            run: universality,
        },
        Criterion {
            id: 9,
            name: "Monte Carlo consistency",
            area: Area::Mc,
            budget: s(60),
            run: mc_consistency,
        },
        Criterion {
            id: 10,
            name: "torus-integral cross-check",
            area: Area::Fourier,
            budget: s(60),
            run: torus_integral,
        },
        Criterion {
            id: 11,
            name: "Walsh exploration",
            area: Area::Fourier,
            budget: s(180),
            run: walsh_exploration,
        },
    ]
}

/// `filter` selects by area name or criterion number.
pub fn matches_filter(c: &Criterion, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => f.eq_ignore_ascii_case(c.area.name()) || f.parse::<u8>() == Ok(c.id),
    }
}

pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let outcome = (c.run)().unwrap_or_else(|e| Outcome {
        expected: String::new(),
        observed: format!("FAIL error: {e}"),
        passed: false,
    });
    let elapsed = start.elapsed();
    CriterionResult {
        id: c.id,
        name: c.name,
        area: c.area,
        expected: outcome.expected,
        observed: outcome.observed,
        checks_passed: outcome.passed,
        seconds: elapsed.as_secs_f64(),
        budget_seconds: c.budget.as_secs_f64(),
        passed: outcome.passed && elapsed <= c.budget,
    }
}

pub fn run_verification(filter: Option<&str>) -> VerifyReport {
    let results: Vec<CriterionResult> = criteria()
        .iter()
        .filter(|c| matches_filter(c, filter))
        .map(run_criterion)
        .collect();
    let passed = results.iter().all(|r| r.passed);
    VerifyReport { results, passed }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn cyclic(n: u32) -> Result<GroupSpec> {
    GroupSpec::cyclic(n)
}

// 1
fn partition_machinery() -> Result<Outcome> {
    let mut o = Outcome::new(
        "K̃(one block, p=1..4) = 1, −1/2, 2/3, −11/8; K paths agree p≤6; μ closed = recursion p≤6",
    );
    let expected = [rat(1, 1), rat(-1, 2), rat(2, 3), rat(-11, 8)];
    let got: Vec<BigRational> = (1..=4).map(k_tilde_oneblock).collect::<Result<_>>()?;
    o.check(
        got == expected,
        format!(
            "K̃ = {}",
            got.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    let mut k_agree = true;
    for p in 1..=6 {
        k_agree &= coefficient_k(&SetPartition::one_block(p))?.value == coefficient_k_oneblock(p)?;
    }
    o.check(k_agree, "Möbius-sum K = alternating C_pr sum for p ≤ 6");
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    for p in 1..=6 {
        let all = enumerate_partitions(p)?;
        for pi in &all {
            let row = moebius_row_recursive(pi);
            for sigma in &all {
                let recursive = row
                    .iter()
                    .find(|(s, _)| s == sigma)
                    .map(|(_, m)| *m)
                    .unwrap_or(0);
                let closed = if is_coarser_or_equal(pi, sigma)? {
                    moebius(pi, sigma)?
                } else {
                    0
                };
                pairs += 1;
                if closed != recursive {
                    mismatches += 1;
                }
            }
        }
    }
    o.check(
        mismatches == 0,
        format!("μ closed form = recursion on {pairs} pairs"),
    );
    Ok(o)
}

// 2
fn composition_counts() -> Result<Outcome> {
    let mut o = Outcome::new(
        "C_p1 = 1, C_p2 = binom(2p,p)/2 − 1, C_p,p−1 = (p!/2)binom(p,2), C_pp = p!, p ≤ 7",
    );
    let mut ok = true;
    for p in 1..=7usize {
        let pf = factorial(p);
        ok &= composition_count(p, 1)? == 1;
        ok &= composition_count(p, p)? == pf;
        if p >= 2 {
            ok &= composition_count(p, 2)? == binomial(2 * p as u64, p as u64) / 2 - 1;
            ok &= composition_count(p, p - 1)? == pf / 2 * binomial(p as u64, 2);
        }
    }
    o.check(ok, "all four identities hold for p = 1..7");
    Ok(o)
}

// 3
fn oneblock_counts() -> Result<Outcome> {
    let mut o =
        Outcome::new("direct #{[i]=[j]} = closed form for p ≤ 4, N ≤ 10; p=2,3,4 polynomials");
    let mut ok = true;
    for p in 1..=4 {
        for n in 1..=10 {
            ok &= BigInt::from(oneblock_count_direct(p, n)?) == i_oneblock_closed(p, n as u64)?;
        }
    }
    o.check(ok, "direct enumeration = Σ_r C_pr N!/(N−r)!");
    let mut poly = true;
    for n in 1..=10i64 {
        let nn = n as u64;
        poly &= i_oneblock_closed(2, nn)? == BigInt::from(n * (2 * n - 1));
        poly &= i_oneblock_closed(3, nn)? == BigInt::from(n * (6 * n * n - 9 * n + 4));
        poly &= i_oneblock_closed(4, nn)?
            == BigInt::from(n * (24 * n.pow(3) - 72 * n * n + 82 * n - 33));
    }
    o.check(poly, "N(2N−1), N(6N²−9N+4), N(24N³−72N²+82N−33)");
    Ok(o)
}

// 4
fn moment_assembly() -> Result<Outcome> {
    let mut o = Outcome::new("F2 → 4, 20, 112; F3 → 9, 117, 1845; F4, Z2×Z2 at p=2 → 400");
    let cases: [(&[u32], usize, i64); 8] = [
        (&[2], 1, 4),
        (&[2], 2, 20),
        (&[2], 3, 112),
        (&[3], 1, 9),
        (&[3], 2, 117),
        (&[3], 3, 1845),
        (&[4], 2, 400),
        (&[2, 2], 2, 400),
    ];
    let mut seen = Vec::new();
    let mut ok = true;
    for (factors, p, expected) in cases {
        let f = fourier_matrix(&GroupSpec::new(factors)?)?;
        let exact = moment_exact(&f, p)?.total;
        let oracle = moment_oracle(&f, p)?;
        ok &= exact == oracle && exact == Value::Exact(int(expected));
        seen.push(format!("{}:{p}={exact}", f.group()));
    }
    o.check(ok, seen.join(" "));
    Ok(o)
}

fn pair_groups() -> Result<Vec<GroupSpec>> {
    [
        &[2][..],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
    ]
    .iter()
    .map(|f| GroupSpec::new(f))
    .collect()
}

fn pair_partition_default() -> Result<Outcome> {
    pair_partition_with(&i_pair_closed)
}

/// Criterion 5 against an arbitrary closed form (the default is [`i_pair_closed`]).
pub fn pair_partition_with(closed: &dyn Fn(&GroupSpec) -> BigInt) -> Result<Outcome> {
    let mut o = Outcome::new("I(G,{12}{34}) = N(4N³−11N+2^e+7) on 12 groups; Z4/Z2² = 884/892; Z8/Z2×Z4/Z2³ = 15752/15768/15800");
    let pair = SetPartition::from_blocks(4, &[vec![1, 2], vec![3, 4]])?;
    let mut ok = true;
    let mut values = Vec::new();
    for g in pair_groups()? {
        let observed = i_fourier(&g, &pair)?.value;
        ok &= observed == closed(&g);
        values.push((g.to_string(), observed));
    }
    o.check(ok, "enumeration = closed form on all groups");
    let get = |name: &str| {
        values
            .iter()
            .find(|(g, _)| g == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    };
    let split4 = [get("Z4"), get("Z2xZ2")];
    o.check(
        split4 == [BigInt::from(884), BigInt::from(892)],
        format!("order 4: {} / {}", split4[0], split4[1]),
    );
    let split8 = [get("Z8"), get("Z2xZ4"), get("Z2xZ2xZ2")];
    o.check(
        split8
            == [
                BigInt::from(15752),
                BigInt::from(15768),
                BigInt::from(15800),
            ],
        format!("order 8: {} / {} / {}", split8[0], split8[1], split8[2]),
    );
    Ok(o)
}

// 6
fn expansion_residuals() -> Result<Outcome> {
    let mut o = Outcome::new(
        "p=2 residual 0 (N ≤ 16); p=3 N⁴·residual = 8/3 (N ≤ 12); p=4 |N⁴·residual| ≤ 60 and fitted K1..K3 = 6, 22, 57",
    );
    let all_groups = |max: u32| -> Result<Vec<GroupSpec>> {
        let mut v = Vec::new();
        for n in 1..=max {
            v.extend(abelian_groups_of_order(n)?);
        }
        Ok(v)
    };
    let g16 = all_groups(16)?;
    let rows2 = fourier_moment_polynomial_check(&g16, 2)?;
    o.check(
        rows2.iter().all(|r| r.residual_x_n4.is_zero()),
        format!("p=2: residual 0 on {} groups", rows2.len()),
    );
    let rows3 = fourier_moment_polynomial_check(&all_groups(12)?, 3)?;
    o.check(
        rows3.iter().all(|r| r.residual_x_n4 == rat(8, 3)),
        format!("p=3: N⁴·residual = 8/3 on {} groups", rows3.len()),
    );
    let mut family: Vec<GroupSpec> = (4..=12).map(cyclic).collect::<Result<_>>()?;
    family.extend(
        (1..=3)
            .map(GroupSpec::elementary_two)
            .collect::<Result<Vec<_>>>()?,
    );
    let rows4 = fourier_moment_polynomial_check(&family, 4)?;
    let worst = rows4
        .iter()
        .max_by(|a, b| a.residual_x_n4.abs().cmp(&b.residual_x_n4.abs()))
        .expect("nonempty family");
    o.check(
        rows4
            .iter()
            .all(|r| r.residual_x_n4.abs() <= int(P4_RESIDUAL_BOUND)),
        format!(
            "p=4: max |N⁴·residual| = {} ≈ {:.3} at {}",
            worst.residual_x_n4,
            Value::Exact(worst.residual_x_n4.clone()).to_f64(),
            worst.group
        ),
    );
    let target = ExpansionCoefficients::for_order(4);
    for (label, start) in [("odd", 1u32), ("even", 2u32)] {
        let groups: Vec<GroupSpec> = (0..11)
            .map(|k| cyclic(start + 2 * k))
            .collect::<Result<_>>()?;
        let fit = fit_expansion(&groups, 4)?;
        let c = &fit.coefficients;
        o.check(
            fit.fit.all_match() && fit.leading.is_one() && *c == target,
            format!(
                "p=4 {label} cyclic fit: leading {}, K1 {}, K2 {}, K3 {}, {} holdout ok",
                fit.leading,
                c.k1,
                c.k2,
                c.k3,
                fit.fit.holdout.len()
            ),
        );
    }
    Ok(o)
}

fn binary_matrices() -> Result<Vec<(String, BinaryHadamard, bool)>> {
    Ok(vec![
        ("Sylvester 4".into(), sylvester_hadamard(2)?, true),
        ("Sylvester 8".into(), sylvester_hadamard(3)?, true),
        ("Paley 12".into(), load_binary_matrix(PALEY_12)?, false),
        ("Sylvester 16".into(), sylvester_hadamard(4)?, true),
    ])
}

// 7
fn binary_glow() -> Result<Outcome> {
    let mut o = Outcome::new(
        "mass 1, symmetric, support ⊆ 4Z, splits (1/4,3/4) / (3/4,1/4), E(Ω/N)² = 1, Walsh E(Ω/N)⁴ = 3 − 6/N + 4/N²",
    );
    for (name, h, walsh) in binary_matrices()? {
        let n = h.order();
        let g = exact_glow(&h)?;
        let split = even_odd_split(&g)?;
        let expected_split = if n % 8 == 4 {
            (rat(1, 4), rat(3, 4))
        } else {
            (rat(3, 4), rat(1, 4))
        };
        let second = normalized_binary_moment(&g, n, 2)?;
        let mut ok = g.total_mass().is_one()
            && g.is_symmetric()
            && g.supported_in_multiples_of(4)
            && (split.mass_even.clone(), split.mass_odd.clone()) == expected_split
            && second.is_one()
            && check_row_sum_parities(&h)?.holds();
        let mut line = format!("{name}: split ({}, {})", split.mass_even, split.mass_odd);
        if walsh {
            let nn = n as i64;
            let fourth = normalized_binary_moment(&g, n, 4)?;
            ok &= fourth == int(3) - rat(6, nn) + rat(4, nn * nn);
            line.push_str(&format!(", E(Ω/N)⁴ = {fourth}"));
        }
        o.check(ok, line);
    }
    let mut kernel_ok = true;
    for k in 1..=2 {
        let h = sylvester_hadamard(k)?;
        let pmf = exact_glow(&h)?;
        kernel_ok &=
            BigRational::from_integer(binary_moment_via_kernels(&h, 4)?) == binary_moment(&pmf, 4)?;
    }
    o.check(kernel_ok, "kernel oracle = pmf moment at N = 2, 4");
    Ok(o)
}

// 8
fn universality() -> Result<Outcome> {
    let mut o =
        Outcome::new("N²·|normalized − (1 − binom(p,2)/N)| ≤ 10 for F_N, N = 4..16, p = 2, 3");
    let mut worst = BigRational::zero();
    for n in 4..=16 {
        let f = fourier_matrix(&cyclic(n)?)?;
        for p in [2, 3] {
            let r = universality_from_report(&moment_exact(&f, p)?);
            let scaled = r.scaled.as_exact().expect("exact").abs();
            if scaled > worst {
                worst = scaled;
            }
        }
    }
    o.check(
        worst <= int(UNIVERSALITY_BOUND),
        format!("max N²·|r| = {worst}"),
    );
    Ok(o)
}

// 9
fn mc_consistency() -> Result<Outcome> {
    let mut o = Outcome::new(
        "F8, 1e5 samples, seed 42: p ≤ 3 within 5 SE; arg(Ω) uniform at 1%; reruns identical",
    );
    let f = fourier_matrix(&cyclic(8)?)?;
    let h = f.realize_complex();
    let cfg = McConfig::new(MC_SAMPLES, MC_SEED);
    let est = mc_moments(&h, 3, &cfg)?;
    for e in &est.estimates {
        let exact = moment_exact(&f, e.p)?.total.to_f64() / 8f64.powi(2 * e.p as i32);
        let z = (e.value - exact) / e.stderr;
        o.check(
            z.abs() <= MC_SIGMAS,
            format!("p={}: {:.5} vs {:.5} (z = {z:.2})", e.p, e.value, exact),
        );
    }
    let chi = uniformity_test(est.phase_counts.as_deref().unwrap_or(&[]))?;
    o.check(
        chi.passes,
        format!("χ² = {:.2} ≤ {:.2}", chi.statistic, chi.critical),
    );
    let again = mc_moments(&h, 3, &cfg)?;
    o.check(again == est, "rerun bit-identical");
    Ok(o)
}

// 10
fn torus_integral() -> Result<Outcome> {
    let mut o = Outcome::new("torus integral → 6 for (Z2,{12}) and 884 for (Z4,{12}{34}), both conjugations, within 5 SE");
    let cases = [
        (cyclic(2)?, SetPartition::one_block(2)),
        (
            cyclic(4)?,
            SetPartition::from_blocks(4, &[vec![1, 2], vec![3, 4]])?,
        ),
    ];
    for (g, pi) in &cases {
        let exact = i_fourier(g, pi)?.value;
        let exact_f = Value::integer(exact.clone()).to_f64();
        for (label, conj) in [
            ("FAF*", Conjugation::FAFStar),
            ("F*AF", Conjugation::FStarAF),
        ] {
            let r = torus_integral_mc(g, pi, MC_SAMPLES, MC_SEED, conj)?;
            let z = (r.estimate - exact_f) / r.stderr;
            o.check(
                z.abs() <= MC_SIGMAS,
                format!(
                    "{g} {pi:?} {label}: {:.2} vs {exact} (z = {z:.2})",
                    r.estimate
                ),
            );
        }
    }
    Ok(o)
}

// 11
fn walsh_exploration() -> Result<Outcome> {
    let mut o = Outcome::new(
        "constraint-system counts and I(Z_2^n, π), π ∈ P(4), fit polynomials in N with exact holdout (evidence, not proof)",
    );
    for k in 1..=4 {
        let s = fit_all_systems(k, WALSH_N_MAX)?;
        o.check(
            s.all_match() && s.with_holdout == s.systems,
            format!(
                "|I|={k}: {}/{} systems polynomial on n=0..{WALSH_N_MAX}",
                s.systems - s.failures.len(),
                s.systems
            ),
        );
    }
    let fits = fit_all_ipartitions(4, WALSH_N_MAX)?;
    let good = fits
        .iter()
        .filter(|(_, f)| f.all_match() && !f.holdout.is_empty())
        .count();
    o.check(
        good == fits.len(),
        format!(
            "I(Z_2^n, π): {good}/{} partitions match at n = {WALSH_N_MAX}",
            fits.len()
        ),
    );
    Ok(o)
}
