//! Batch front end: task files describing groups, actions, groupoids,
//! algebras and p-values are parsed, executed, and reported in matching
//! human-readable and structured formats.

pub mod report;
pub mod runner;
pub mod specfile;

pub use report::{NamedInterval, Report, TaskReport, TaskStatus};
pub use runner::{parse_and_run, run, RunConfig};
pub use specfile::{parse_spec, ParseError, SpecFile};

use std::io::Write as _;
use std::path::Path;

/// Output format selector for stdout; `--out` always writes both forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    JsonLike,
}

/// Writes `report.txt` and `report.json` into `out_dir` and returns the
/// stdout rendering in the requested format.
pub fn emit_report(
    report: &Report,
    format: ReportFormat,
    out_dir: Option<&Path>,
) -> std::io::Result<String> {
    let text = report.render_text();
    let json = report.render_json();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let mut tf = std::fs::File::create(dir.join("report.txt"))?;
        tf.write_all(text.as_bytes())?;
        let mut jf = std::fs::File::create(dir.join("report.json"))?;
        jf.write_all(json.as_bytes())?;
    }
    Ok(match format {
        ReportFormat::Text => text,
        ReportFormat::JsonLike => json,
    })
}
