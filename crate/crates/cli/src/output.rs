//! CSV and JSON renderings of a trajectory.

use std::fmt::Write as _;

use qcorr_core::{CorrelationSample, Scenario, TransitionResult};
use serde::Serialize;

pub const CSV_HEADER: &str = "t,I,C,D,Icomp,c1,c2,c3";

/// Nine significant digits in scientific notation; negative zero prints as zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

fn format_optional(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), format_number)
}

pub fn to_csv(samples: &[CorrelationSample], transition: &TransitionResult) -> String {
    let mut out = String::with_capacity(samples.len() * 128);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let row = [s.t, s.mutual_information, s.classical_correlation, s.discord, s.complementary, s.c1, s.c2, s.c3];
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "# detected_t: {}, analytic_t: {}",
        format_optional(transition.detected_t),
        format_optional(transition.analytic_t)
    );
    out
}

#[derive(Serialize)]
struct Document<'a> {
    scenario: &'a Scenario,
    samples: &'a [CorrelationSample],
    transition: &'a TransitionResult,
}

pub fn to_json(scenario: &Scenario, samples: &[CorrelationSample], transition: &TransitionResult) -> String {
    let doc = Document { scenario, samples, transition };
    let mut s = serde_json::to_string_pretty(&doc).expect("finite values serialize");
    s.push('\n');
    s
}
