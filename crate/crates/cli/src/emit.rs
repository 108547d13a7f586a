//! Output plumbing shared by the subcommands.

use agmon_core::Json;

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Prints a JSON document on stdout, one trailing newline.
pub fn print_json(doc: &Json) {
    println!("{}", doc.render());
}

/// Formats a float the way the JSON emitter does, for table cells that
/// should agree with the machine output.
pub fn float_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "inf".to_string()
    }
}

/// Left-pads `s` to `width` columns.
pub fn pad(s: &str, width: usize) -> String {
    format!("{s:>width$}")
}
