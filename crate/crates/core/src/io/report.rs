use std::io::{self, Write};

use serde::Serialize;

use crate::eval::{EvaluationReport, Outcome, ReportEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Renders `report` to `sink`.
///
/// Text is one line per constraint, `Invariant:<expression>:<verdict>`, where
/// the verdict is `True`, `False` or `Error(Exception Occured! Info: <msg>)`.
/// Line breaks inside the expression become spaces so each constraint stays on
/// one line. Json is a single compact document.
pub fn write_report(report: &EvaluationReport, format: ReportFormat, sink: &mut impl Write) -> io::Result<()> {
    match format {
        ReportFormat::Text => {
            for entry in &report.results {
                writeln!(sink, "{}", text_line(entry))?;
            }
            Ok(())
        }
        ReportFormat::Json => {
            let results = report.results.iter().map(json_entry).collect();
            serde_json::to_writer(&mut *sink, &JsonReport { results })?;
            writeln!(sink)
        }
    }
}

fn text_line(entry: &ReportEntry) -> String {
    let expression = entry.expression.lines().collect::<Vec<_>>().join(" ");
    let verdict = match entry.verdict.overall {
        Outcome::True => "True".to_string(),
        Outcome::False => "False".to_string(),
        Outcome::Error => format!(
            "Error(Exception Occured! Info: {})",
            entry.verdict.error_message.as_deref().unwrap_or("unknown error")
        ),
    };
    format!("Invariant:{expression}:{verdict}")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    results: Vec<JsonEntry<'a>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonEntry<'a> {
    name: &'a str,
    invariant: Option<&'a str>,
    expression: &'a str,
    overall: String,
    per_instance: Vec<JsonInstance<'a>>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonInstance<'a> {
    object: &'a str,
    value: bool,
}

fn json_entry(entry: &ReportEntry) -> JsonEntry<'_> {
    let v = &entry.verdict;
    JsonEntry {
        name: &v.constraint_name,
        invariant: v.invariant_name.as_deref(),
        expression: &entry.expression,
        overall: v.overall.to_string(),
        per_instance: v.per_instance.iter().map(|(object, value)| JsonInstance { object, value: *value }).collect(),
        error: v.error_message.as_deref(),
    }
}
