//! The whole pipeline on one instance, as the text report and as JSON.

use subeq_lab::cli::{emit_report, run_pipeline, Format, PipelineConfig};
use subeq_lab::OdeInstance;

fn main() -> subeq_lab::Result<()> {
    let ode: OdeInstance = serde_json::from_str(r#"{"a": "1", "c5": "-16", "c7": "2"}"#).expect("valid instance");
    let report = run_pipeline(&PipelineConfig::new(ode));
    print!("{}", emit_report(&report, Format::Text));
    println!("exit code {}; JSON report is {} bytes", report.exit_code(), emit_report(&report, Format::Json).len());
    Ok(())
}
