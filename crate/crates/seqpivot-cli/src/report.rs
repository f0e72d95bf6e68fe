//! Output formatting: text tables, CSV, and JSON.

use seqpivot::engine::PlayTrace;
use seqpivot::rat::Rat;
use seqpivot::verdict::Verdict;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format {other:?} (json|csv|table)")),
        }
    }
}

/// Player labels A, B, C, ... for readability; indices stay 1-based in
/// machine formats.
pub fn player_label(player: usize) -> String {
    if player <= 26 {
        char::from(b'A' + (player - 1) as u8).to_string()
    } else {
        format!("P{player}")
    }
}

fn join_rats(values: &[Rat], sep: &str) -> String {
    values
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Render rows as a padded text table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    out.push_str(&fmt_row(&header_cells, &widths));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}

/// One play trace in the reference-table layout (player, type, submitted
/// type, tax, final utility).
pub fn trace_table(trace: &PlayTrace) -> String {
    let rows: Vec<Vec<String>> = (1..=trace.true_types.values().len())
        .map(|p| {
            vec![
                player_label(p),
                trace.true_types.get(p).to_string(),
                trace.announcements.get(p).to_string(),
                trace.outcome.taxes[p - 1].to_string(),
                trace.outcome.utilities[p - 1].to_string(),
            ]
        })
        .collect();
    let mut out = text_table(&["player", "type", "submitted type", "tax", "u_i"], &rows);
    out.push_str(&format!(
        "order: {}   decision: {}   social welfare: {}\n",
        trace.order,
        if trace.outcome.decision.is_build() {
            "build"
        } else {
            "cancel"
        },
        trace.outcome.social_welfare
    ));
    out
}

pub fn trace_csv(trace: &PlayTrace) -> String {
    let mut out = String::from("player,type,submitted,tax,utility\n");
    for p in 1..=trace.true_types.values().len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p,
            trace.true_types.get(p),
            trace.announcements.get(p),
            trace.outcome.taxes[p - 1],
            trace.outcome.utilities[p - 1],
        ));
    }
    out
}

/// A sweep row: one permutation and its play, flattened for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub order: Vec<usize>,
    pub announcements: Vec<Rat>,
    pub taxes: Vec<Rat>,
    pub utilities: Vec<Rat>,
    pub social_welfare: Rat,
    pub budget_balanced: bool,
}

impl SweepRow {
    pub fn from_trace(trace: &PlayTrace) -> Self {
        SweepRow {
            order: trace.order.players().to_vec(),
            announcements: trace.announcements.values().to_vec(),
            taxes: trace.outcome.taxes.clone(),
            utilities: trace.outcome.utilities.clone(),
            social_welfare: trace.outcome.social_welfare.clone(),
            budget_balanced: trace.outcome.taxes.iter().all(|t| t.is_zero()),
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("order,announcements,taxes,utilities,social_welfare,budget_balanced\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.order
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            join_rats(&row.announcements, ";"),
            join_rats(&row.taxes, ";"),
            join_rats(&row.utilities, ";"),
            row.social_welfare,
            row.budget_balanced,
        ));
    }
    out
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let table_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                row.order
                    .iter()
                    .map(|p| player_label(*p))
                    .collect::<Vec<_>>()
                    .join(","),
                join_rats(&row.announcements, ","),
                join_rats(&row.taxes, ","),
                row.social_welfare.to_string(),
                if row.budget_balanced { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    text_table(
        &["order", "announcements", "taxes", "SW", "budget balanced"],
        &table_rows,
    )
}

pub fn verdict_line(verdict: &Verdict) -> String {
    if verdict.holds {
        format!("PASS  {}", verdict.property)
    } else {
        let w = verdict
            .witness
            .as_ref()
            .expect("failing verdict has witness");
        let mut line = format!(
            "FAIL  {} — at profile ({})",
            verdict.property,
            join_rats(&w.profile, ", ")
        );
        if let Some(p) = w.player {
            line.push_str(&format!(", player {}", player_label(p)));
        }
        if let Some(a) = &w.announced {
            line.push_str(&format!(", announced {a}"));
        }
        if let Some(d) = &w.deviation {
            match d {
                seqpivot::verdict::DeviationRef::Announcement(r) => {
                    line.push_str(&format!(", deviation {r}"))
                }
                seqpivot::verdict::DeviationRef::Strategy(s) => {
                    line.push_str(&format!(", deviation {s}"))
                }
            }
        }
        line.push_str(&format!(": {} vs {} ({})", w.lhs, w.rhs, w.note));
        line
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
