//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs with `harness = false` so the lines are printed by `cargo test`
//! without `--nocapture`. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ballke_core::exactnum::{rat, rat_int, Rational};
use ballke_core::group::{enumerate_specs, validate_spec, CaseTag, GroupSpec};
use ballke_core::kernel::{
    det_a_slice, f_series, f_series_oracle, ke_residual, lemma44_check, lemma46_check, residual_series,
    TruncationOrder,
};
use ballke_core::lemmas::{lemma_instance_for, run_suite, LemmaId, Suite, SuiteBounds};
use ballke_core::numeric::{
    det_a_direct, fd_gradient_error, fd_hessian_error, grid_points, monomial_oracle_phi, phi_eval,
    residual_grid_scan, slice_consistency, GridCounts, C64, FD_STEP, SLICE_ORDER,
};
use ballke_core::series::LowestTerm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion(id: u32, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let (pass, detail) = match res {
        Ok(o) => (o.pass && elapsed <= limit, o.detail),
        Err(_) => (false, "panicked".to_string()),
    };
    println!(
        "{} [{id}] {title} ({:.2}s, limit {}s): {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn spec(m: u32, t: &[i64]) -> GroupSpec {
    validate_spec(m, t).expect("valid spec")
}

fn c1() -> Outcome {
    let s = spec(3, &[1, 1]);
    let report = ke_residual(&s, TruncationOrder::Auto).expect("residual");
    let pred = report.prediction.clone().expect("nontrivial");
    let pq = pred.pq_coeff.clone();
    let ratio = &pred.lhs_coeff / &pq;
    let lemma = lemma_instance_for(&s, &pred).expect("tied degrees").expect("admissible");
    let lemma_ratio = &lemma.lhs / &lemma.rhs;
    let degree_ok = report.observed.degree() == Some(4) && pred.lhs_degree == 4 && pred.pq_degree == Some(4);
    let pass = report.passed()
        && degree_ok
        && ratio == rat(108, 60)
        && lemma.lhs == rat_int(108)
        && lemma.rhs == rat_int(60)
        && lemma_ratio == ratio;
    outcome(
        pass,
        format!(
            "lowest degree {:?}, lhs/pq = {} (108/60 = {}), lemma {} vs {}",
            report.observed.degree(),
            ratio,
            rat(108, 60),
            lemma.lhs,
            lemma.rhs
        ),
    )
}

fn c2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 2..=4 {
        let ball = GroupSpec::trivial(n).unwrap();
        let zero = residual_series(&ball, 30).is_zero();
        let scan = residual_grid_scan(&ball, 0.9, GridCounts { slice: 50, interior: 50 }, 1).unwrap();
        pass &= zero && scan.max_abs_rel_defect <= 1e-9;
        parts.push(format!("n={n}: R≡0 to 30 {zero}, max rel defect {:.1e}", scan.max_abs_rel_defect));
    }
    outcome(pass, parts.join("; "))
}

fn c3() -> Outcome {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut ties: BTreeMap<&str, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut total = 0;
    for s in enumerate_specs(8, 4).into_iter().filter(|s| s.m() >= 2) {
        total += 1;
        match ke_residual(&s, TruncationOrder::Auto) {
            Ok(r) if r.passed() && matches!(r.observed, LowestTerm::Term { .. }) => {
                let p = r.prediction.unwrap();
                *counts.entry(p.case_tag.as_str()).or_default() += 1;
                if p.degrees_tie() {
                    *ties.entry(p.case_tag.as_str()).or_default() += 1;
                }
            }
            Ok(_) => failures.push(s.to_string()),
            Err(e) => failures.push(format!("{s}: {e}")),
        }
    }
    let all_cases = [CaseTag::I, CaseTag::II, CaseTag::IIIa, CaseTag::IIIb]
        .iter()
        .all(|c| counts.get(c.as_str()).copied().unwrap_or(0) > 0);
    outcome(
        failures.is_empty() && all_cases,
        format!("{total} specs, cases {counts:?}, tied {ties:?}, failures {failures:?}"),
    )
}

fn c4() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 1..=8u32 {
        let mi = i64::from(m);
        for t in -2 * mi..=2 * mi {
            for p in 0..=8u32 {
                checked += 1;
                let same = f_series_oracle(m, t, p, 20).map(|o| o == f_series(m, t, p, 20));
                let l44 = lemma44_check(m, t, p, 20);
                let l46 = lemma46_check(m, t, p, 20);
                if same != Ok(true) || l44 != Ok(true) || l46 != Ok(true) {
                    bad.push((m, t, p));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (m,t,p) triples at order 20, failures {bad:?}"))
}

fn c5() -> Outcome {
    let bounds = SuiteBounds::default();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut tight_l = false;
    let mut tight_main = false;
    for suite in Suite::ALL {
        let results = run_suite(suite, &bounds);
        let failures = results.iter().filter(|r| !r.holds).count();
        pass &= failures == 0 && !results.is_empty();
        parts.push(format!("{} {}/{}", suite.as_str(), results.len() - failures, results.len()));
        for r in &results {
            if r.lemma_id == LemmaId::L2ClosedForm && r.params == [1] && r.lhs == rat(81, 80) {
                tight_l = true;
            }
            if r.lemma_id == LemmaId::Main && r.lhs == rat_int(81) && r.rhs == rat_int(80) {
                tight_main = true;
            }
        }
    }
    outcome(
        pass && tight_l && tight_main,
        format!("{}; L(2,1)=81/80 seen {tight_l}; main 81>80 seen {tight_main}", parts.join(", ")),
    )
}

fn c6() -> Outcome {
    let cases = [(2, vec![1, 1]), (3, vec![1, 1]), (5, vec![1, 2]), (7, vec![1, 4])];
    let mut worst: f64 = 0.0;
    let mut worst40: f64 = 0.0;
    for (m, t) in &cases {
        let s = spec(*m, t);
        for x in [0.1, 0.25, 0.5] {
            worst = worst.max(slice_consistency(&s, x, SLICE_ORDER).unwrap());
            worst40 = worst40.max(slice_consistency(&s, x, 40).unwrap());
        }
    }
    outcome(
        worst <= 1e-8,
        format!(
            "max rel gap {worst:.1e} with R at order {SLICE_ORDER} (info: {worst40:.1e} at order 40, dominated by series truncation at x=0.5)"
        ),
    )
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_grad: f64 = 0.0;
    let mut worst_hess: f64 = 0.0;
    for s in enumerate_specs(5, 3) {
        let pts = grid_points(s.n(), 0.7, GridCounts { slice: 0, interior: 10 }, rng.gen()).unwrap();
        for z in &pts {
            worst_grad = worst_grad.max(fd_gradient_error(&s, z, FD_STEP).unwrap());
            worst_hess = worst_hess.max(fd_hessian_error(&s, z, FD_STEP).unwrap());
        }
    }
    let mut worst_det: f64 = 0.0;
    let mut tuples = 0;
    for s in enumerate_specs(6, 3).into_iter().filter(|s| s.n() >= 2) {
        for _ in 0..20 {
            let k: Vec<u32> = (0..=s.n()).map(|_| rng.gen_range(0..s.m())).collect();
            tuples += 1;
            for x in [rat_int(0), rat(1, 4), rat(1, 2)] {
                let exact = det_a_slice(&s, &k, &x).unwrap().to_complex();
                let xf = x_to_f64(&x);
                let mut z = vec![C64::new(0.0, 0.0); s.n()];
                z[0] = C64::new(xf.sqrt(), 0.0);
                let direct = det_a_direct(&s, &k, &z).unwrap();
                worst_det = worst_det.max((exact - direct).norm());
            }
        }
    }
    outcome(
        worst_grad <= 1e-6 && worst_hess <= 1e-6 && worst_det <= 1e-10,
        format!(
            "gradient {worst_grad:.1e}, Hessian {worst_hess:.1e} (rel, 10 points per spec m<=5 n<=3); detA {worst_det:.1e} over {tuples} index tuples x 3 slice points"
        ),
    )
}

fn x_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for s in enumerate_specs(5, 3) {
        for _ in 0..20 {
            let z = &grid_points(s.n(), 0.4, GridCounts { slice: 0, interior: 1 }, rng.gen()).unwrap()[0];
            let w = &grid_points(s.n(), 0.4, GridCounts { slice: 0, interior: 1 }, rng.gen()).unwrap()[0];
            let oracle = monomial_oracle_phi(&s, z, w, 60).unwrap();
            let direct = phi_eval(&s, z, w).unwrap();
            worst = worst.max((oracle.value - direct).norm());
            pairs += 1;
        }
    }
    outcome(worst <= 1e-6, format!("max |oracle − φ| {worst:.1e} over {pairs} point pairs, cutoff 60"))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "Case II instance (3,(1,1)): degree 4, ratio 108/60", secs(1), c1),
        criterion(2, "trivial group: R ≡ 0 and numeric defect <= 1e-9", secs(5), c2),
        criterion(3, "all specs 2<=m<=8, 2<=n<=4 match classify_case", secs(60), c3),
        criterion(4, "f_series = oracle; derivative and reflection identities", secs(30), c4),
        criterion(5, "lemma suites without counterexamples", secs(60), c5),
        criterion(6, "numeric defect = -(n+1)^n R on the slice", secs(5), c6),
        criterion(7, "finite differences and detA oracles", secs(10), c7),
        criterion(8, "monomial oracle agrees with φ", secs(10), c8),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
