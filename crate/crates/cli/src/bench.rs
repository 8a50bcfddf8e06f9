//! Timing runs of the padded transformation over a batch of formulas.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;
use west_core::{pretty, simp_pad_west_reg_guarded, Formula, Guard, Interrupted, WestError};

pub const CSV_HEADER: [&str; 8] = ["formula", "n", "d", "b", "ms", "outcome", "alts", "len"];

/// A formula to time, with the generator parameters it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchItem {
    pub formula: Formula,
    pub n: usize,
    pub d: usize,
    pub b: usize,
}

impl BenchItem {
    /// Describes a formula by its own shape: propositions used, temporal
    /// nesting and largest bound.
    pub fn measured(formula: Formula) -> Self {
        BenchItem { n: formula.num_vars(), d: formula.temporal_depth(), b: formula.max_bound(), formula }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Timeout,
    /// The alternative cap was hit.
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub formula: String,
    pub n: usize,
    pub d: usize,
    pub b: usize,
    pub ms: f64,
    pub outcome: Outcome,
    pub alts: Option<usize>,
    pub len: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSummary {
    pub ok: usize,
    pub timeout: usize,
    pub limit: usize,
    /// Mean wall time of the `ok` runs; timeouts and limits are left out.
    pub mean_ms: Option<f64>,
}

/// Times `simp_pad_west_reg` on each item in turn. Runs are sequential so
/// that one measurement does not compete with another for cores.
pub fn bench_timing(items: &[BenchItem], timeout: Duration, max_alts: Option<usize>) -> Vec<BenchRecord> {
    items
        .iter()
        .map(|item| {
            let mut guard = Guard::unlimited().with_timeout(timeout);
            if let Some(limit) = max_alts {
                guard = guard.with_max_alternatives(limit);
            }
            let start = Instant::now();
            let result = simp_pad_west_reg_guarded(&item.formula, &guard);
            let ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
            let (outcome, alts, len) = match result {
                Ok(regex) => (Outcome::Ok, Some(regex.len()), Some(item.formula.complen())),
                Err(WestError::Interrupted(Interrupted::TooManyAlternatives { .. })) => (Outcome::Limit, None, None),
                Err(_) => (Outcome::Timeout, None, None),
            };
            BenchRecord { formula: pretty(&item.formula), n: item.n, d: item.d, b: item.b, ms, outcome, alts, len }
        })
        .collect()
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let count = |o| records.iter().filter(|r| r.outcome == o).count();
    let ok: Vec<f64> = records.iter().filter(|r| r.outcome == Outcome::Ok).map(|r| r.ms).collect();
    BenchSummary {
        ok: ok.len(),
        timeout: count(Outcome::Timeout),
        limit: count(Outcome::Limit),
        mean_ms: (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64),
    }
}

/// Writes the records as CSV. The header is written even for an empty batch.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}
