use std::io::Write;
use std::time::Instant;

use ballke_core::exactnum::{ratio_string, Rational};
use ballke_core::kernel::ResidualReport;
use ballke_core::lemmas::LemmaCheckResult;
use ballke_core::series::LowestTerm;
use ballke_core::GroupSpec;
use serde::Serialize;
use serde_json::Value;

use crate::cli::Format;

/// Top-level JSON document shared by every subcommand.
#[derive(Serialize)]
pub struct RunReport {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Vec<Value>,
    pub overall_pass: bool,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Value, results: Vec<Value>, overall_pass: bool, started: Instant) -> Self {
        RunReport {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            results,
            overall_pass,
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn q(r: &Rational) -> String {
    ratio_string(r)
}

#[derive(Serialize)]
pub struct SpecJson {
    pub m: u32,
    pub n: usize,
    pub t: Vec<u32>,
}

impl From<&GroupSpec> for SpecJson {
    fn from(s: &GroupSpec) -> Self {
        SpecJson {
            m: s.m(),
            n: s.n(),
            t: s.t().to_vec(),
        }
    }
}

#[derive(Serialize)]
pub struct LemmaJson {
    pub lemma_id: &'static str,
    pub params: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl From<&LemmaCheckResult> for LemmaJson {
    fn from(r: &LemmaCheckResult) -> Self {
        LemmaJson {
            lemma_id: r.lemma_id.as_str(),
            params: r.params.clone(),
            lhs: q(&r.lhs),
            rhs: q(&r.rhs),
            holds: r.holds,
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum ObservedJson {
    Term { degree: usize, coeff: String },
    Zero { zero_to: usize },
}

#[derive(Serialize)]
pub struct PredictionJson {
    pub case: &'static str,
    pub k: u32,
    pub a: u32,
    pub lhs_degree: usize,
    pub lhs_coeff: String,
    /// `null` stands for an infinite degree.
    pub pq_degree: Option<usize>,
    pub pq_coeff: String,
    pub residual_degree: usize,
    pub residual_coeff: String,
}

#[derive(Serialize)]
pub struct ResidualJson {
    pub spec: SpecJson,
    pub case: &'static str,
    pub order_used: usize,
    pub observed: ObservedJson,
    pub prediction: Option<PredictionJson>,
    pub degree_match: bool,
    pub coeff_match: bool,
    pub lemma: Option<LemmaJson>,
    pub passed: bool,
}

pub fn residual_json(r: &ResidualReport, lemma: Option<&LemmaCheckResult>) -> ResidualJson {
    let observed = match &r.observed {
        LowestTerm::Term { degree, coeff } => ObservedJson::Term {
            degree: *degree,
            coeff: q(coeff),
        },
        LowestTerm::ZeroTo(d) => ObservedJson::Zero { zero_to: *d },
    };
    let prediction = r.prediction.as_ref().map(|p| PredictionJson {
        case: p.case_tag.as_str(),
        k: p.k,
        a: p.a,
        lhs_degree: p.lhs_degree,
        lhs_coeff: q(&p.lhs_coeff),
        pq_degree: p.pq_degree,
        pq_coeff: q(&p.pq_coeff),
        residual_degree: p.residual_degree,
        residual_coeff: q(&p.residual_coeff),
    });
    ResidualJson {
        spec: (&r.spec).into(),
        case: r.prediction.as_ref().map_or("Trivial", |p| p.case_tag.as_str()),
        order_used: r.order_used,
        observed,
        prediction,
        degree_match: r.degree_match,
        coeff_match: r.coeff_match,
        lemma: lemma.map(Into::into),
        passed: r.passed() && lemma.is_none_or(|l| l.holds),
    }
}

pub const RESIDUAL_CSV_HEADER: [&str; 16] = [
    "m",
    "n",
    "t",
    "case",
    "order_used",
    "observed_degree",
    "observed_coeff",
    "predicted_degree",
    "predicted_coeff",
    "degree_match",
    "coeff_match",
    "lemma_id",
    "lemma_params",
    "lemma_lhs",
    "lemma_rhs",
    "passed",
];

pub fn residual_csv_row(r: &ResidualJson) -> Vec<String> {
    let (od, oc) = match &r.observed {
        ObservedJson::Term { degree, coeff } => (degree.to_string(), coeff.clone()),
        ObservedJson::Zero { zero_to } => (format!("zero to {zero_to}"), "0/1".to_string()),
    };
    let (pd, pc) = r
        .prediction
        .as_ref()
        .map_or((String::new(), String::new()), |p| (p.residual_degree.to_string(), p.residual_coeff.clone()));
    let (lid, lp, ll, lr) = r.lemma.as_ref().map_or_else(Default::default, |l| {
        (l.lemma_id.to_string(), params_string(&l.params), l.lhs.clone(), l.rhs.clone())
    });
    vec![
        r.spec.m.to_string(),
        r.spec.n.to_string(),
        r.spec.t.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        r.case.to_string(),
        r.order_used.to_string(),
        od,
        oc,
        pd,
        pc,
        r.degree_match.to_string(),
        r.coeff_match.to_string(),
        lid,
        lp,
        ll,
        lr,
        r.passed.to_string(),
    ]
}

pub fn params_string(p: &[i64]) -> String {
    format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

pub fn residual_text(r: &ResidualJson) -> String {
    let spec = format!(
        "(m={}, t=({}))",
        r.spec.m,
        r.spec.t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    );
    let observed = match &r.observed {
        ObservedJson::Term { degree, coeff } => format!("R = {coeff}·x^{degree} + …"),
        ObservedJson::Zero { zero_to } => format!("R is zero to D={zero_to}"),
    };
    let predicted = r.prediction.as_ref().map_or(String::from("R ≡ 0"), |p| {
        let pq = p.pq_degree.map_or(String::from("∞"), |d| d.to_string());
        format!(
            "lhs {}·x^{}, pq {}·x^{} → {}·x^{}",
            p.lhs_coeff, p.lhs_degree, p.pq_coeff, pq, p.residual_coeff, p.residual_degree
        )
    });
    let lemma = r.lemma.as_ref().map_or(String::from("-"), |l| {
        let rel = if l.lemma_id == "comb1" || l.lemma_id == "main" { ">" } else { "vs" };
        format!("{}{} {} {} {}", l.lemma_id, params_string(&l.params), l.lhs, rel, l.rhs)
    });
    format!(
        "{spec:<22} case {:<7} {observed:<32} predicted {predicted:<52} lemma {lemma:<40} {}",
        r.case,
        if r.passed { "match" } else { "MISMATCH" }
    )
}

pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Prints `report` in `format`; CSV and text bodies are produced by the caller.
pub fn emit(format: Format, report: &RunReport, csv_body: impl FnOnce() -> String, text_body: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", csv_body()),
        Format::Text => {
            print!("{}", text_body());
            println!(
                "overall: {} ({} ms)",
                if report.overall_pass { "PASS" } else { "FAIL" },
                report.wall_time_ms
            );
        }
    }
}

pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
