use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::CliResult;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn verdict_name(r: &Report) -> String {
    serde_json::to_value(r.verdict).expect("verdict serializes").as_str().unwrap_or_default().to_owned()
}

/// Serializes outcomes. JSON writes one report, or an array for a batch,
/// with failed scenarios as `{"error": ...}` entries. CSV writes the
/// trajectory of a single trajectory report, otherwise one row per check.
pub fn render(outcomes: &[CliResult<Report>], format: Format) -> String {
    match format {
        Format::Json => {
            let items: Vec<Value> = outcomes
                .iter()
                .map(|o| match o {
                    Ok(r) => serde_json::to_value(r).expect("report serializes"),
                    Err(e) => json!({ "error": e.to_string() }),
                })
                .collect();
            let v = if items.len() == 1 {
                items.into_iter().next().expect("one item")
            } else {
                Value::Array(items)
            };
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            if let [Ok(Report {
                trajectory: Some(tr), ..
            })] = outcomes
            {
                return tr.to_csv();
            }
            let mut s = String::from("scenario,command,check,verdict\n");
            for (i, o) in outcomes.iter().enumerate() {
                match o {
                    Ok(r) => {
                        for c in &r.checks {
                            let v = serde_json::to_value(c.verdict).expect("verdict serializes");
                            s.push_str(&format!(
                                "{i},{},{},{}\n",
                                r.command.name(),
                                csv_field(&c.name),
                                v.as_str().unwrap_or_default()
                            ));
                        }
                        s.push_str(&format!("{i},{},overall,{}\n", r.command.name(), verdict_name(r)));
                    }
                    Err(_) => s.push_str(&format!("{i},,input,error\n")),
                }
            }
            s
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Writes the rendering to `path`, or to stdout when `path` is `None`.
pub fn emit(outcomes: &[CliResult<Report>], format: Format, path: Option<&Path>) -> CliResult<()> {
    let text = render(outcomes, format);
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
