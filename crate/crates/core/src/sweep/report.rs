use super::{VariantResult, VariantStatus};
use crate::ground_truth::format_ratio;

pub const REPORT_COLUMNS: [&str; 10] = [
    "variant_index",
    "flags",
    "status",
    "total_functions",
    "inlined",
    "remaining",
    "eliminated",
    "ratio",
    "compile_seconds",
    "binary_bytes",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    /// When false the compile_seconds column is left blank, which makes
    /// reports of identical builds byte-identical.
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { timings: true }
    }
}

fn status(s: VariantStatus) -> &'static str {
    match s {
        VariantStatus::Ok => "ok",
        VariantStatus::BuildFailed => "build_failed",
        VariantStatus::Timeout => "timeout",
    }
}

/// One CSV row per result in the given order; failed rows keep their
/// flags and status with blank measurements.
pub fn emit_report(results: &[VariantResult], options: ReportOptions) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS).expect("in-memory write");
    for r in results {
        let mut row = vec![
            r.variant_index.to_string(),
            r.flags.join(" "),
            status(r.status).to_string(),
        ];
        match &r.measurement {
            Some(m) => row.extend([
                m.total_functions.to_string(),
                m.inlined.to_string(),
                m.remaining.to_string(),
                m.eliminated.to_string(),
                format_ratio(m.inlining_ratio),
                if options.timings {
                    format!("{:.3}", m.compile_seconds)
                } else {
                    String::new()
                },
                m.binary_bytes.to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 7)),
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
