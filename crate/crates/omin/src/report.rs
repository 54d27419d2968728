//! Schedule reports in machine- and human-readable forms.
//!
//! The JSON document has a fixed shape and key order:
//!
//! ```json
//! {
//!   "network": { "size": 8, "stages": 3 },
//!   "algorithm": "asa",
//!   "mode": "paper",
//!   "passes": [[1, 2, 4, 7], [5, 6, 0, 3]],
//!   "trace": { "kind": "asa", ... },
//!   "metrics": { "pass_count": 2, "switch_occurrences": [1, 0], "link_occurrences": [0, 0] }
//! }
//! ```
//!
//! Pass members and trace message lists are source address values (decimal);
//! `trace.diff` is indexed like the input (one entry per message) and
//! `trace.row_sums` by source address. The text format renders the same
//! fields with binary addresses; the CSV format is a flat (pass, source)
//! table.

use serde::Serialize;

use crate::sched::{AsaTrace, RsaTrace, Schedule, ScheduleTrace};

/// Output encodings of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
    Csv,
}

impl ReportFormat {
    pub fn id(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Text => "text",
            ReportFormat::Csv => "csv",
        }
    }

    pub fn from_id(id: &str) -> Option<ReportFormat> {
        match id {
            "json" => Some(ReportFormat::Json),
            "text" => Some(ReportFormat::Text),
            "csv" => Some(ReportFormat::Csv),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct NetworkDoc {
    size: usize,
    stages: u32,
}

#[derive(Serialize)]
#[serde(untagged)]
enum TraceDoc {
    Greedy {
        kind: &'static str,
        strategy: Option<&'static str>,
        order: Vec<u32>,
    },
    Asa {
        kind: &'static str,
        middle_rows: Vec<Vec<u8>>,
        first_pair_sum: Vec<u8>,
        second_pair_sum: Vec<u8>,
        diff: Vec<i8>,
        initial_pass1: Vec<u32>,
        demoted: Vec<u32>,
        partial_input: bool,
    },
    Rsa {
        kind: &'static str,
        row_sums: Vec<u32>,
        selected_list: Vec<u32>,
        conflicted_list: Vec<u32>,
        demoted: Vec<u32>,
        partial_input: bool,
    },
}

#[derive(Serialize)]
struct MetricsDoc {
    pass_count: usize,
    switch_occurrences: Vec<usize>,
    link_occurrences: Vec<usize>,
}

#[derive(Serialize)]
struct ReportDoc {
    network: NetworkDoc,
    algorithm: &'static str,
    mode: &'static str,
    passes: Vec<Vec<u32>>,
    trace: TraceDoc,
    metrics: MetricsDoc,
}

fn to_sources(schedule: &Schedule, indices: &[usize]) -> Vec<u32> {
    indices.iter().map(|&i| schedule.sources()[i].0).collect()
}

fn trace_doc(schedule: &Schedule) -> TraceDoc {
    let partial = !schedule.full_permutation();
    match schedule.trace() {
        ScheduleTrace::Greedy { strategy, order } => TraceDoc::Greedy {
            kind: "greedy",
            strategy: strategy.map(|s| s.id()),
            order: to_sources(schedule, order),
        },
        ScheduleTrace::Asa(AsaTrace {
            middle_rows,
            first_pair_sum,
            second_pair_sum,
            diff,
            initial_pass1,
            demoted,
        }) => TraceDoc::Asa {
            kind: "asa",
            middle_rows: middle_rows.to_vec(),
            first_pair_sum: first_pair_sum.clone(),
            second_pair_sum: second_pair_sum.clone(),
            diff: diff.clone(),
            initial_pass1: to_sources(schedule, initial_pass1),
            demoted: to_sources(schedule, demoted),
            partial_input: partial,
        },
        ScheduleTrace::Rsa(RsaTrace {
            row_sums,
            selected_list,
            conflicted_list,
            demoted,
        }) => TraceDoc::Rsa {
            kind: "rsa",
            row_sums: row_sums.clone(),
            selected_list: to_sources(schedule, selected_list),
            conflicted_list: to_sources(schedule, conflicted_list),
            demoted: to_sources(schedule, demoted),
            partial_input: partial,
        },
    }
}

fn report_doc(schedule: &Schedule) -> ReportDoc {
    ReportDoc {
        network: NetworkDoc {
            size: schedule.config().size(),
            stages: schedule.config().stages(),
        },
        algorithm: schedule.algorithm().id(),
        mode: schedule.mode().id(),
        passes: (0..schedule.pass_count())
            .map(|p| schedule.pass_sources(p))
            .collect(),
        trace: trace_doc(schedule),
        metrics: MetricsDoc {
            pass_count: schedule.pass_count(),
            switch_occurrences: schedule
                .reports()
                .iter()
                .map(|r| r.switch_occurrence_count())
                .collect(),
            link_occurrences: schedule
                .reports()
                .iter()
                .map(|r| r.link_occurrence_count())
                .collect(),
        },
    }
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_text(schedule: &Schedule) -> String {
    let cfg = schedule.config();
    let bits = |v: u32| format!("{v:0w$b}", w = cfg.stages() as usize);
    let mut out = String::new();
    out.push_str(&format!(
        "network: {} ports, {} stages\n",
        cfg.size(),
        cfg.stages()
    ));
    out.push_str(&format!(
        "algorithm: {} (mode: {})\n",
        schedule.algorithm().id(),
        schedule.mode().id()
    ));
    if !schedule.full_permutation() {
        out.push_str("input: partial (not a full permutation)\n");
    }
    for (p, report) in schedule.reports().iter().enumerate() {
        let sources = schedule.pass_sources(p);
        out.push_str(&format!(
            "pass {}: {}\n",
            p + 1,
            join(sources.iter().map(|&s| bits(s)))
        ));
        out.push_str(&format!(
            "  switch occurrences: {}, link occurrences: {}\n",
            report.switch_occurrence_count(),
            report.link_occurrence_count()
        ));
    }
    match schedule.trace() {
        ScheduleTrace::Greedy { strategy, order } => {
            let name = strategy.map_or("input", |s| s.id());
            out.push_str(&format!(
                "order ({name}): {}\n",
                join(to_sources(schedule, order).iter().map(|&s| bits(s)))
            ));
        }
        ScheduleTrace::Asa(trace) => {
            for (label, row) in ["row 1", "row 2", "row 3", "row 4"]
                .iter()
                .zip(trace.middle_rows.iter())
            {
                out.push_str(&format!("{label}: {}\n", join(row.iter())));
            }
            out.push_str(&format!("diff: {}\n", join(trace.diff.iter())));
            out.push_str(&format!(
                "initial pass 1: {}\n",
                join(
                    to_sources(schedule, &trace.initial_pass1)
                        .iter()
                        .map(|&s| bits(s))
                )
            ));
            out.push_str(&format!(
                "demoted: {}\n",
                join(
                    to_sources(schedule, &trace.demoted)
                        .iter()
                        .map(|&s| bits(s))
                )
            ));
        }
        ScheduleTrace::Rsa(trace) => {
            out.push_str(&format!("row sums: {}\n", join(trace.row_sums.iter())));
            out.push_str(&format!(
                "selected: {}\n",
                join(
                    to_sources(schedule, &trace.selected_list)
                        .iter()
                        .map(|&s| bits(s))
                )
            ));
            out.push_str(&format!(
                "conflicted: {}\n",
                join(
                    to_sources(schedule, &trace.conflicted_list)
                        .iter()
                        .map(|&s| bits(s))
                )
            ));
            out.push_str(&format!(
                "demoted: {}\n",
                join(
                    to_sources(schedule, &trace.demoted)
                        .iter()
                        .map(|&s| bits(s))
                )
            ));
        }
    }
    out
}

fn render_csv(schedule: &Schedule) -> String {
    let mut out = String::from("pass,source\n");
    for p in 0..schedule.pass_count() {
        for source in schedule.pass_sources(p) {
            out.push_str(&format!("{},{}\n", p + 1, source));
        }
    }
    out
}

/// Render a schedule. JSON is pretty-printed with the key order shown in
/// the module comment; text is for terminals; CSV lists (pass, source) rows.
pub fn emit_report(schedule: &Schedule, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report_doc(schedule))
                .expect("report serialization cannot fail");
            text.push('\n');
            text
        }
        ReportFormat::Text => render_text(schedule),
        ReportFormat::Csv => render_csv(schedule),
    }
}
