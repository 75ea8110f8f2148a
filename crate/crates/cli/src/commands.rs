use std::fs;

use glow_core::binary::{even_odd_split, exact_glow, normalized_binary_moment};
use glow_core::fourier::{fourier_moment_polynomial_check, i_fourier, second_order_residual};
use glow_core::group::abelian_groups_of_order;
use glow_core::mc::{mc_binary_moments, mc_moments, McConfig, McEstimate};
use glow_core::moments::{moment_exact, moment_oracle, MomentInput};
use glow_core::polyfit::FitReport;
use glow_core::verify::run_verification;
use glow_core::walsh::{fit_all_ipartitions, fit_all_systems, MAX_BATCH_INDICES};
use glow_core::{
    fourier_matrix, load_binary_matrix, parse_group, sylvester_hadamard, BinaryHadamard,
    ComplexMatrix, FourierMatrix, GlowError, GroupSpec, SetPartition,
};
use serde_json::{json, Value};

use crate::output::Report;
use crate::{
    AnySource, AsymptoticsArgs, Family, IpartitionArgs, MatrixSource, McArgs, Method, MomentsArgs,
    VerifyArgs, WalshFitArgs,
};

pub enum Failure {
    Glow(GlowError),
    Io(std::io::Error),
}

impl From<GlowError> for Failure {
    fn from(e: GlowError) -> Self {
        Failure::Glow(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<Report, Failure>;

const LONG_HEADER: [&str; 3] = ["field", "key", "value"];

/// Rows of the long `field,key,value` CSV layout.
#[derive(Default)]
struct Rows(Vec<Vec<String>>);

impl Rows {
    fn push(&mut self, field: &str, key: impl ToString, value: impl ToString) {
        self.0
            .push(vec![field.to_string(), key.to_string(), value.to_string()]);
    }
}

fn long_report(json: Value, rows: Rows) -> Report {
    Report::new(json, LONG_HEADER.to_vec(), rows.0)
}

fn load_binary(path: &std::path::Path) -> Result<BinaryHadamard, Failure> {
    Ok(load_binary_matrix(&fs::read_to_string(path)?)?)
}

fn binary_source(src: &MatrixSource) -> Result<(String, BinaryHadamard), Failure> {
    match (&src.sylvester, &src.matrix) {
        (Some(n), _) => Ok((format!("sylvester {n}"), sylvester_hadamard(*n)?)),
        (_, Some(path)) => Ok((path.display().to_string(), load_binary(path)?)),
        _ => unreachable!("clap enforces one source"),
    }
}

enum Loaded {
    Fourier(FourierMatrix),
    Binary(BinaryHadamard, ComplexMatrix),
}

impl Loaded {
    fn input(&self) -> MomentInput<'_> {
        match self {
            Loaded::Fourier(f) => f.into(),
            Loaded::Binary(_, c) => c.into(),
        }
    }
}

fn any_source(src: &AnySource) -> Result<(String, Loaded), Failure> {
    if let Some(g) = &src.group {
        let group = parse_group(g)?;
        let f = fourier_matrix(&group)?;
        return Ok((group.to_string(), Loaded::Fourier(f)));
    }
    let (label, h) = binary_source(&MatrixSource {
        sylvester: src.sylvester,
        matrix: src.matrix.clone(),
    })?;
    let c = h.to_complex();
    Ok((label, Loaded::Binary(h, c)))
}

pub fn binary(args: &MatrixSource) -> Outcome {
    let (label, h) = binary_source(args)?;
    let n = h.order();
    let pmf = exact_glow(&h)?;
    let mut rows = Rows::default();
    rows.push("matrix", "", &label);
    rows.push("N", "", n);
    let support = pmf.support();
    let weights: Vec<String> = pmf.iter().map(|(_, w)| w.to_string()).collect();
    for (k, w) in support.iter().zip(&weights) {
        rows.push("weight", k, w);
    }
    let (even, odd) = match even_odd_split(&pmf) {
        Ok(s) => (Some(s.mass_even.to_string()), Some(s.mass_odd.to_string())),
        Err(_) => (None, None),
    };
    rows.push("even_mass", "", even.clone().unwrap_or_default());
    rows.push("odd_mass", "", odd.clone().unwrap_or_default());
    let mut moments = serde_json::Map::new();
    for r in [2, 4, 6, 8] {
        let m = normalized_binary_moment(&pmf, n, r)?.to_string();
        rows.push("moment", r, &m);
        moments.insert(r.to_string(), m.into());
    }
    let json = json!({
        "matrix": label,
        "N": n,
        "support": support,
        "weights": weights,
        "even_mass": even,
        "odd_mass": odd,
        "moments": moments,
    });
    Ok(long_report(json, rows))
}

pub fn moments(args: &MomentsArgs) -> Outcome {
    let (label, loaded) = any_source(&args.source)?;
    let input = loaded.input();
    let n = input.order();
    let mut rows = Rows::default();
    rows.push("matrix", "", &label);
    rows.push("N", "", n);
    rows.push("p", "", args.p);
    let json = match args.method {
        Method::Exact => {
            let report = moment_exact(input, args.p)?;
            rows.push("moment", "", &report.total);
            rows.push("normalized", "", &report.normalized);
            let mut breakdown = serde_json::Map::new();
            for (pi, v) in &report.breakdown {
                rows.push("breakdown", pi, v);
                breakdown.insert(pi.to_string(), v.to_string().into());
            }
            let mut shapes = serde_json::Map::new();
            for (shape, v) in report.shape_terms() {
                let key = shape
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                rows.push("shape_term", &key, &v);
                shapes.insert(key, v.to_string().into());
            }
            json!({
                "matrix": label,
                "N": n,
                "p": args.p,
                "method": "exact",
                "moment": report.total.to_string(),
                "normalized": report.normalized.to_string(),
                "breakdown": breakdown,
                "shape_terms": shapes,
            })
        }
        Method::Oracle => {
            let total = moment_oracle(input, args.p)?;
            rows.push("moment", "", &total);
            json!({
                "matrix": label,
                "N": n,
                "p": args.p,
                "method": "oracle",
                "moment": total.to_string(),
            })
        }
    };
    Ok(long_report(json, rows))
}

pub fn ipartition(args: &IpartitionArgs) -> Outcome {
    let group = parse_group(&args.group)?;
    let pi: SetPartition = args.partition.parse()?;
    let count = i_fourier(&group, &pi)?;
    let second = second_order_residual(&group, &pi)?;
    let mut rows = Rows::default();
    rows.push("group", "", &group);
    rows.push("N", "", group.order());
    rows.push("partition", "", &pi);
    rows.push("value", "", &count.value);
    rows.push("nonarithmetic", "", &count.nonarithmetic);
    rows.push("arithmetic", "", &count.arithmetic);
    rows.push("second_order", "c1", &second.c1);
    rows.push("second_order", "ratio", &second.ratio);
    rows.push("second_order", "scaled_residual", &second.scaled_residual);
    let json = json!({
        "group": group.to_string(),
        "N": group.order(),
        "partition": pi.to_string(),
        "value": count.value.to_string(),
        "nonarithmetic": count.nonarithmetic.to_string(),
        "arithmetic": count.arithmetic.to_string(),
        "second_order": {
            "c1": second.c1.to_string(),
            "ratio": second.ratio.to_string(),
            "scaled_residual": second.scaled_residual.to_string(),
        },
    });
    Ok(long_report(json, rows))
}

fn family_groups(family: Family, nmax: usize) -> Result<Vec<GroupSpec>, GlowError> {
    let nmax =
        u32::try_from(nmax).map_err(|_| GlowError::Range(format!("nmax = {nmax} too large")))?;
    match family {
        Family::Cyclic => (2..=nmax).map(GroupSpec::cyclic).collect(),
        Family::Elementary => (1..)
            .take_while(|k| 1u64 << k <= nmax as u64)
            .map(GroupSpec::elementary_two)
            .collect(),
        Family::All => {
            let mut out = Vec::new();
            for n in 2..=nmax {
                out.extend(abelian_groups_of_order(n)?);
            }
            Ok(out)
        }
    }
}

pub fn asymptotics(args: &AsymptoticsArgs) -> Outcome {
    if args.pmax == 0 || args.pmax > 4 {
        return Err(GlowError::Range(format!("pmax = {} outside 1..=4", args.pmax)).into());
    }
    let groups = family_groups(args.family, args.nmax)?;
    let header = vec!["group", "N", "p", "moment", "normalized", "residual_x_N4"];
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for p in 1..=args.pmax {
        for row in fourier_moment_polynomial_check(&groups, p)? {
            let cells = vec![
                row.group.to_string(),
                row.n.to_string(),
                row.p.to_string(),
                row.moment.to_string(),
                row.normalized.to_string(),
                row.residual_x_n4.to_string(),
            ];
            items.push(json!({
                "group": cells[0],
                "N": row.n,
                "p": row.p,
                "moment": cells[3],
                "normalized": cells[4],
                "residual_x_N4": cells[5],
            }));
            rows.push(cells);
        }
    }
    Ok(Report::new(json!({ "rows": items }), header, rows))
}

fn fit_json(fit: &FitReport) -> Value {
    json!({
        "polynomial": fit.polynomial.to_string(),
        "coefficients": fit.polynomial.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "fitted_points": fit.fitted_points,
        "holdout": fit.holdout.iter().map(|h| json!({
            "N": h.n.to_string(),
            "observed": h.observed.to_string(),
            "predicted": h.predicted.to_string(),
            "matches": h.matches,
        })).collect::<Vec<_>>(),
        "all_match": fit.all_match(),
    })
}

pub fn walsh_fit(args: &WalshFitArgs) -> Outcome {
    let fits = fit_all_ipartitions(args.p, args.nmax)?;
    let mut rows = Rows::default();
    let mut partitions = Vec::new();
    let mut note = "";
    for (pi, fit) in &fits {
        note = fit.note;
        rows.push("polynomial", pi, &fit.polynomial);
        rows.push("holdout_points", pi, fit.holdout.len());
        rows.push("all_match", pi, fit.all_match());
        let mut j = fit_json(fit);
        j["partition"] = pi.to_string().into();
        partitions.push(j);
    }
    let systems = if args.p <= MAX_BATCH_INDICES {
        let s = fit_all_systems(args.p, args.nmax)?;
        rows.push("systems", "count", s.systems);
        rows.push("systems", "with_holdout", s.with_holdout);
        rows.push("systems", "failures", s.failures.len());
        json!({
            "index_count": s.index_count,
            "systems": s.systems,
            "n_values": s.n_values,
            "with_holdout": s.with_holdout,
            "failures": s.failures,
        })
    } else {
        Value::Null
    };
    rows.push("note", "", note);
    let json = json!({
        "p": args.p,
        "n_max": args.nmax,
        "partitions": partitions,
        "systems": systems,
        "note": note,
    });
    Ok(long_report(json, rows))
}

pub fn mc(args: &McArgs) -> Outcome {
    let (label, loaded) = any_source(&args.source)?;
    let cfg = McConfig::new(args.samples, args.seed);
    let (n, est): (usize, McEstimate) = match &loaded {
        Loaded::Fourier(f) => (f.order(), mc_moments(&f.realize_complex(), args.p, &cfg)?),
        Loaded::Binary(h, _) => (h.order(), mc_binary_moments(h, args.p, &cfg)?),
    };
    let mut rows = Rows::default();
    rows.push("matrix", "", &label);
    rows.push("N", "", n);
    rows.push("samples", "", est.samples);
    rows.push("seed", "", est.seed);
    for e in &est.estimates {
        rows.push("value", e.p, e.value);
        rows.push("stderr", e.p, e.stderr);
    }
    rows.push("histogram_width", "", est.histogram.width);
    for (i, c) in est.histogram.counts.iter().enumerate() {
        rows.push("histogram", i, c);
    }
    if let Some(phases) = &est.phase_counts {
        for (i, c) in phases.iter().enumerate() {
            rows.push("phase", i, c);
        }
    }
    let json = json!({
        "matrix": label,
        "N": n,
        "samples": est.samples,
        "estimates": est.estimates.iter().map(|e| json!({"p": e.p, "value": e.value, "stderr": e.stderr})).collect::<Vec<_>>(),
        "histogram": {"width": est.histogram.width, "counts": est.histogram.counts},
        "phase_counts": est.phase_counts,
        "seed": est.seed,
    });
    let mut report = long_report(json, rows);
    report.seed = Some(args.seed);
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let report = run_verification(args.filter.as_deref());
    if report.results.is_empty() {
        return Err(GlowError::Argument(format!(
            "filter {:?} matches no criterion",
            args.filter.as_deref().unwrap_or("")
        ))
        .into());
    }
    let header = vec![
        "id",
        "name",
        "area",
        "expected",
        "observed",
        "seconds",
        "budget_seconds",
        "passed",
    ];
    let rows = report
        .results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                r.area.name().to_string(),
                r.expected.clone(),
                r.observed.clone(),
                r.seconds.to_string(),
                r.budget_seconds.to_string(),
                r.passed.to_string(),
            ]
        })
        .collect();
    let json = serde_json::to_value(&report).map_err(std::io::Error::from)?;
    let mut out = Report::new(json, header, rows);
    out.summary = Some(report.to_table());
    out.success = report.passed;
    Ok(out)
}
