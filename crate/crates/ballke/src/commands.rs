use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ballke_core::group::{enumerate_specs, validate_spec, GroupSpec};
use ballke_core::kernel::{ke_residual, residual_series, KernelError, ResidualReport, TruncationOrder};
use ballke_core::lemmas::{lemma_instance_for, run_suite, LemmaCheckResult, Suite, SuiteBounds};
use ballke_core::numeric::{
    fd_gradient_error, fd_hessian_error, residual_grid_scan, slice_check_with, GridCounts, NumericDefectSample,
    FD_STEP, SLICE_ORDER, SLICE_RESOLUTION,
};
use serde_json::{json, Value};

use crate::cli::{parse_t, Format, Which};
use crate::report::{
    csv_string, emit, params_string, q, residual_csv_row, residual_json, residual_text, write_csv, LemmaJson,
    ResidualJson, RunReport, RESIDUAL_CSV_HEADER,
};

/// Errors that map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub const OUT_DIR_ENV: &str = "BALLKE_OUT_DIR";

fn order_json(order: TruncationOrder) -> Value {
    match order {
        TruncationOrder::Auto => json!("auto"),
        TruncationOrder::Fixed(d) => json!(d),
    }
}

fn spec_from_flags(m: u32, t: &str) -> Result<GroupSpec, UsageError> {
    let raw = parse_t(t).map_err(UsageError::Invalid)?;
    validate_spec(m, &raw).map_err(|e| UsageError::Invalid(e.to_string()))
}

/// One residual check together with the tied-degree inequality instance.
fn check_spec(spec: &GroupSpec, order: TruncationOrder) -> Result<(ResidualReport, Option<LemmaCheckResult>), KernelError> {
    let report = ke_residual(spec, order)?;
    let lemma = report
        .prediction
        .as_ref()
        .and_then(|p| lemma_instance_for(spec, p))
        .and_then(Result::ok);
    Ok((report, lemma))
}

pub fn verify(m: u32, t: &str, order: TruncationOrder, format: Format) -> Result<bool, UsageError> {
    let started = Instant::now();
    let spec = spec_from_flags(m, t)?;
    let inputs = json!({ "m": m, "t": t, "order": order_json(order), "format": format!("{format:?}").to_lowercase() });
    let (results, rows, pass) = match check_spec(&spec, order) {
        Ok((report, lemma)) => {
            let r = residual_json(&report, lemma.as_ref());
            let pass = r.passed;
            let text = residual_text(&r);
            let row = residual_csv_row(&r);
            (vec![serde_json::to_value(&r).expect("serializable")], Ok((text, row)), pass)
        }
        Err(e) => (vec![json!({ "spec": spec.to_string(), "error": e.to_string() })], Err(e), false),
    };
    let report = RunReport::new("verify", inputs, results, pass, started);
    emit(
        format,
        &report,
        || match &rows {
            Ok((_, row)) => csv_string(&RESIDUAL_CSV_HEADER, [row.clone()]),
            Err(e) => csv_string(&["spec", "error"], [vec![spec.to_string(), e.to_string()]]),
        },
        || match &rows {
            Ok((text, _)) => format!("{text}\n"),
            Err(e) => format!("{spec}: {e}\n"),
        },
    );
    Ok(pass)
}

enum ScanItem {
    Done(Box<ResidualJson>),
    Failed(String),
}

pub fn scan(max_m: u32, max_n: usize, order: TruncationOrder, jobs: u32, format: Format) -> Result<bool, UsageError> {
    let started = Instant::now();
    if max_m < 1 || max_n < 2 {
        return Err(UsageError::Invalid("scan needs --max-m >= 1 and --max-n >= 2".into()));
    }
    if max_m > 64 || max_n > 12 {
        return Err(UsageError::Invalid("scan bounds are limited to --max-m <= 64, --max-n <= 12".into()));
    }
    let specs = enumerate_specs(max_m, max_n);
    let run = |s: &GroupSpec| match check_spec(s, order) {
        Ok((r, l)) => ScanItem::Done(Box::new(residual_json(&r, l.as_ref()))),
        Err(e) => ScanItem::Failed(format!("{s}: {e}")),
    };

    // Strided partition; results are put back in enumeration order.
    let jobs = (jobs as usize).clamp(1, specs.len().max(1));
    let mut slots: Vec<Option<ScanItem>> = (0..specs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let specs = &specs;
                let run = &run;
                scope.spawn(move || {
                    (w..specs.len())
                        .step_by(jobs)
                        .map(|i| (i, run(&specs[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, item) in h.join().expect("scan worker panicked") {
                slots[i] = Some(item);
            }
        }
    });
    let items: Vec<ScanItem> = slots.into_iter().map(|s| s.expect("every spec visited")).collect();

    let mut failures = Vec::new();
    let mut cases: BTreeMap<&str, usize> = BTreeMap::new();
    let mut results = Vec::new();
    for item in &items {
        match item {
            ScanItem::Done(r) => {
                *cases.entry(r.case).or_default() += 1;
                if !r.passed {
                    failures.push(format!(
                        "(m={}, t=({}))",
                        r.spec.m,
                        r.spec.t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                    ));
                }
                results.push(serde_json::to_value(r).expect("serializable"));
            }
            ScanItem::Failed(msg) => {
                failures.push(msg.clone());
                results.push(json!({ "error": msg }));
            }
        }
    }
    let pass = failures.is_empty();
    let inputs = json!({
        "max_m": max_m,
        "max_n": max_n,
        "order": order_json(order),
        "jobs": jobs,
        "format": format!("{format:?}").to_lowercase(),
    });
    let report = RunReport::new("scan", inputs, results, pass, started);
    emit(
        format,
        &report,
        || {
            csv_string(
                &RESIDUAL_CSV_HEADER,
                items.iter().filter_map(|i| match i {
                    ScanItem::Done(r) => Some(residual_csv_row(r)),
                    ScanItem::Failed(_) => None,
                }),
            )
        },
        || {
            let mut s = String::new();
            for item in &items {
                match item {
                    ScanItem::Done(r) => s.push_str(&residual_text(r)),
                    ScanItem::Failed(msg) => s.push_str(&format!("ERROR {msg}")),
                }
                s.push('\n');
            }
            s.push_str(&format!("{} specs, cases {:?}\n", items.len(), cases));
            s
        },
    );
    if !pass {
        eprintln!("failing specs: {}", failures.join("; "));
    }
    Ok(pass)
}

const LEMMA_CSV_HEADER: [&str; 5] = ["lemma_id", "params", "lhs", "rhs", "holds"];

fn suite_note(suite: Suite) -> &'static str {
    match suite {
        Suite::Elementary => {
            "bounded scan over 3 <= n, k <= max; instances with n <= 2 or k <= 2 lie outside the \
             hypothesis and are excluded (they can fail, e.g. n=3, k=2 gives 5 vs 4)"
        }
        _ => "bounded scan: a finite confidence check, not a proof",
    }
}

fn bounds_json(b: &SuiteBounds, suite: Suite) -> Value {
    match suite {
        Suite::Comb1 => json!({ "max_m": b.comb1_max_m, "max_n": b.comb1_max_n }),
        Suite::Rearrange => json!({ "max_n": b.rearrange_max, "max_k": b.rearrange_max, "min_s": -b.rearrange_max }),
        Suite::Fmono => json!({ "max_n": b.fmono_max_n, "max_k": b.fmono_max_k, "max_sum": b.fmono_max_sum }),
        Suite::Main => json!({ "max_m": b.main_max_m, "max_n": b.main_max_n, "min_lambda": b.main_min_lambda }),
        Suite::Simplified => json!({ "max_n": b.simplified_max_n, "max_k": b.simplified_max_k }),
        Suite::Elementary => json!({ "min": 3, "max": b.elementary_max }),
        Suite::Lmono => json!({ "max_n": b.lmono_max_n, "max_k": b.lmono_max_k }),
    }
}

pub fn lemmas(which: Which, max: Option<i64>, format: Format) -> Result<bool, UsageError> {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut all: Vec<LemmaCheckResult> = Vec::new();
    let mut text = String::new();
    let mut pass = true;
    for suite in which.suites() {
        let bounds = max.map_or_else(SuiteBounds::default, |mx| SuiteBounds::with_max(suite, mx));
        let checks = run_suite(suite, &bounds);
        let counterexamples: Vec<&LemmaCheckResult> = checks.iter().filter(|r| !r.holds).collect();
        pass &= counterexamples.is_empty();
        text.push_str(&format!(
            "{:<11} {:>6} instances, {} counterexamples  [{}]\n",
            suite.as_str(),
            checks.len(),
            counterexamples.len(),
            suite_note(suite)
        ));
        for c in &counterexamples {
            text.push_str(&format!(
                "  COUNTEREXAMPLE {}{}: lhs {} rhs {}\n",
                c.lemma_id,
                params_string(&c.params),
                q(&c.lhs),
                q(&c.rhs)
            ));
        }
        results.push(json!({
            "suite": suite.as_str(),
            "bounds": bounds_json(&bounds, suite),
            "note": suite_note(suite),
            "instances": checks.len(),
            "counterexamples": counterexamples.len(),
            "checks": checks.iter().map(LemmaJson::from).collect::<Vec<_>>(),
        }));
        if !counterexamples.is_empty() {
            eprintln!(
                "counterexamples in {}: {}",
                suite.as_str(),
                counterexamples.iter().map(|c| params_string(&c.params)).collect::<Vec<_>>().join(" ")
            );
        }
        all.extend(checks);
    }
    let which_str = format!("{which:?}").to_lowercase();
    let inputs = json!({ "which": which_str, "max": max, "format": format!("{format:?}").to_lowercase() });
    let report = RunReport::new("lemmas", inputs, results, pass, started);
    emit(
        format,
        &report,
        || {
            csv_string(
                &LEMMA_CSV_HEADER,
                all.iter().map(|r| {
                    vec![
                        r.lemma_id.as_str().to_string(),
                        params_string(&r.params),
                        q(&r.lhs),
                        q(&r.rhs),
                        r.holds.to_string(),
                    ]
                }),
            )
        },
        || text,
    );
    Ok(pass)
}

const FD_TOL: f64 = 1e-6;
const SLICE_TOL: f64 = 1e-8;
/// Slice points beyond this `|x_1|^2` are outside the series comparison range.
const SLICE_MAX_X: f64 = 0.5;
const TRIVIAL_TOL: f64 = 1e-9;

fn sample_header(n: usize) -> Vec<String> {
    let mut h = Vec::new();
    for i in 1..=n {
        h.push(format!("z{i}_re"));
        h.push(format!("z{i}_im"));
    }
    h.extend(["phi_re", "phi_im", "J", "defect", "rel_defect"].map(String::from));
    h
}

fn sample_row(s: &NumericDefectSample) -> Vec<String> {
    let mut row = Vec::new();
    for z in &s.z {
        row.push(z.re.to_string());
        row.push(z.im.to_string());
    }
    row.extend([s.phi.re, s.phi.im, s.j, s.defect, s.rel_defect].map(|v| v.to_string()));
    row
}

fn sample_json(s: &NumericDefectSample) -> Value {
    json!({
        "z": s.z.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        "phi": [s.phi.re, s.phi.im],
        "J": s.j,
        "defect": s.defect,
        "rel_defect": s.rel_defect,
    })
}

fn resolve_out(out: Option<&Path>, spec: &GroupSpec, seed: u64) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => {
            let t = spec.t().iter().map(u32::to_string).collect::<Vec<_>>().join("-");
            Some(d.join(format!("numeric_m{}_t{}_seed{}.csv", spec.m(), t, seed)))
        }
        (None, None) => None,
    }
}

fn write_samples(path: &Path, n: usize, samples: &[NumericDefectSample]) -> Result<(), UsageError> {
    let io = |source| UsageError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    let file = std::fs::File::create(path).map_err(io)?;
    if path.extension().is_some_and(|e| e == "json") {
        let body: Vec<Value> = samples.iter().map(sample_json).collect();
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), &body).map_err(|e| io(e.into()))?;
    } else {
        let header = sample_header(n);
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        write_csv(std::io::BufWriter::new(file), &header, samples.iter().map(sample_row))
            .map_err(|e| io(std::io::Error::other(e)))?;
    }
    Ok(())
}

pub fn numeric(
    m: u32,
    t: &str,
    radius: f64,
    grid: usize,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<bool, UsageError> {
    let started = Instant::now();
    let spec = spec_from_flags(m, t)?;
    if !(radius > 0.0 && radius < 1.0) {
        return Err(UsageError::Invalid(format!("--radius must lie in (0, 1), got {radius}")));
    }
    if grid == 0 || grid > 100_000 {
        return Err(UsageError::Invalid("--grid must lie in 1..=100000".into()));
    }
    let counts = GridCounts {
        slice: grid,
        interior: grid,
    };
    let scan = residual_grid_scan(&spec, radius, counts, seed).map_err(|e| UsageError::Invalid(e.to_string()))?;

    let mut worst_slice: f64 = 0.0;
    let mut slice_points = 0;
    let mut unresolved = 0;
    let series = residual_series(&spec, SLICE_ORDER);
    for s in &scan.samples[..grid] {
        let x = s.z[0].norm_sqr();
        if x > SLICE_MAX_X {
            continue;
        }
        let check = slice_check_with(&spec, &series, x).expect("sampled points are in the ball");
        if !check.resolved {
            unresolved += 1;
            continue;
        }
        slice_points += 1;
        worst_slice = worst_slice.max(check.rel_gap);
    }
    let mut worst_grad: f64 = 0.0;
    let mut worst_hess: f64 = 0.0;
    for s in &scan.samples[grid..] {
        worst_grad = worst_grad.max(fd_gradient_error(&spec, &s.z, FD_STEP).expect("in ball"));
        worst_hess = worst_hess.max(fd_hessian_error(&spec, &s.z, FD_STEP).expect("in ball"));
    }
    let slice_ok = worst_slice <= SLICE_TOL;
    let fd_ok = worst_grad <= FD_TOL && worst_hess <= FD_TOL;
    let trivial_ok = !spec.is_trivial() || scan.max_abs_rel_defect <= TRIVIAL_TOL;
    let pass = slice_ok && fd_ok && trivial_ok;

    let out_path = resolve_out(out, &spec, seed);
    if let Some(p) = &out_path {
        write_samples(p, spec.n(), &scan.samples)?;
    }

    let argmax = scan.argmax.map(|i| &scan.samples[i]);
    let summary = json!({
        "spec": { "m": spec.m(), "n": spec.n(), "t": spec.t() },
        "normalization": "phi omits the n!/pi^n factor of the ball kernel",
        "samples": scan.samples.len(),
        "max_abs_rel_defect": scan.max_abs_rel_defect,
        "argmax": argmax.map(sample_json),
        "visibly_nonzero": scan.max_abs_rel_defect > 1e-6,
        "checks": {
            "slice_consistency": {
                "points": slice_points, "below_resolution": unresolved, "resolution": SLICE_RESOLUTION,
                "max_x": SLICE_MAX_X, "series_order": SLICE_ORDER, "max_rel_gap": worst_slice,
                "tolerance": SLICE_TOL, "pass": slice_ok,
            },
            "finite_differences": {
                "points": grid, "step": FD_STEP, "max_rel_gradient_error": worst_grad,
                "max_rel_hessian_error": worst_hess, "tolerance": FD_TOL, "pass": fd_ok,
            },
            "trivial_group_einstein": {
                "applies": spec.is_trivial(), "tolerance": TRIVIAL_TOL, "pass": trivial_ok,
            },
        },
        "out": out_path.as_ref().map(|p| p.display().to_string()),
    });
    let inputs = json!({
        "m": m, "t": t, "radius": radius, "grid": grid, "seed": seed,
        "out": out.map(|p| p.display().to_string()), "format": format!("{format:?}").to_lowercase(),
    });
    let report = RunReport::new("numeric", inputs, vec![summary], pass, started);
    emit(
        format,
        &report,
        || {
            let header = sample_header(spec.n());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_string(&header, scan.samples.iter().map(sample_row))
        },
        || {
            let mut s = format!(
                "{spec}: {} samples within radius {radius}, max |rel defect| {:.3e}\n",
                scan.samples.len(),
                scan.max_abs_rel_defect
            );
            if let Some(a) = argmax {
                s.push_str(&format!(
                    "  argmax z = [{}], J = {:.6e}, defect = {:.6e}\n",
                    a.z.iter().map(|c| format!("{:.4}{:+.4}i", c.re, c.im)).collect::<Vec<_>>().join(", "),
                    a.j,
                    a.defect
                ));
            }
            s.push_str(&format!(
                "  slice vs -(n+1)^n R(x): {slice_points} points, max rel gap {worst_slice:.2e} ({}); {unresolved} points below double-precision resolution skipped\n",
                if slice_ok { "ok" } else { "FAIL" }
            ));
            s.push_str(&format!(
                "  finite differences: gradient {worst_grad:.2e}, Hessian {worst_hess:.2e} ({})\n",
                if fd_ok { "ok" } else { "FAIL" }
            ));
            if spec.is_trivial() {
                s.push_str(&format!("  trivial group defect within {TRIVIAL_TOL:e}: {}\n", trivial_ok));
            }
            if let Some(p) = &out_path {
                s.push_str(&format!("  samples written to {}\n", p.display()));
            }
            s
        },
    );
    Ok(pass)
}
