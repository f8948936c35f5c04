//! Per-cell aggregation and the rendered comparison table.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::run::RunRecord;
use super::stats::{t_test, Marker};
use super::Method;

/// Significance level of the comparison markers.
pub const ALPHA: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub rate: f64,
    pub method: Method,
    pub runs: usize,
    pub failed: usize,
    pub mean_initial: Option<f64>,
    pub mean_final: Option<f64>,
    pub mean_iterations: Option<f64>,
    /// Co-Transfer against this method on matched runs; `None` for
    /// Co-Transfer itself or when fewer than two runs pair up.
    pub marker: Option<Marker>,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Means per `(dataset, rate, method)` over successful runs, with paired
/// markers of Co-Transfer against every other method.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(String, u64, Method), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.dataset.clone(), r.rate.to_bits(), r.method))
            .or_default()
            .push(r);
    }
    let mut rows: Vec<SummaryRow> = cells
        .iter()
        .map(|((dataset, rate, method), runs)| {
            let ok: Vec<&&RunRecord> = runs.iter().filter(|r| r.is_ok()).collect();
            let marker = (*method != Method::CoTransfer)
                .then(|| {
                    let reference = cells.get(&(dataset.clone(), *rate, Method::CoTransfer))?;
                    paired_marker(reference, runs)
                })
                .flatten();
            SummaryRow {
                dataset: dataset.clone(),
                rate: f64::from_bits(*rate),
                method: *method,
                runs: runs.len(),
                failed: runs.len() - ok.len(),
                mean_initial: mean(ok.iter().filter_map(|r| r.initial_error)),
                mean_final: mean(ok.iter().filter_map(|r| r.final_error)),
                mean_iterations: mean(ok.iter().filter_map(|r| r.iterations.map(|i| i as f64))),
                marker,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.dataset.as_str(), a.rate, a.method)
            .partial_cmp(&(b.dataset.as_str(), b.rate, b.method))
            .expect("rates are finite")
    });
    rows
}

fn paired_marker(reference: &[&RunRecord], other: &[&RunRecord]) -> Option<Marker> {
    let finals = |rs: &[&RunRecord]| -> BTreeMap<(usize, usize, usize), f64> {
        rs.iter()
            .filter_map(|r| Some((r.key(), r.final_error.filter(|_| r.is_ok())?)))
            .collect()
    };
    let a = finals(reference);
    let b = finals(other);
    let (xs, ys): (Vec<f64>, Vec<f64>) = a
        .iter()
        .filter_map(|(k, x)| Some((*x, *b.get(k)?)))
        .unzip();
    t_test(&xs, &ys, ALPHA).ok()
}

/// Plain-text table, one block per dataset and rate.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let fmt = |x: Option<f64>, digits: usize| x.map_or("-".to_string(), |v| format!("{v:.digits$}"));
    let mut out = String::new();
    let mut current: Option<(&str, u64)> = None;
    for r in rows {
        let key = (r.dataset.as_str(), r.rate.to_bits());
        if current != Some(key) {
            if current.is_some() {
                out.push('\n');
            }
            let _ = writeln!(out, "{} @ label rate {}", r.dataset, r.rate);
            let _ = writeln!(
                out,
                "{:<12} {:>8} {:>8} {:>6} {:>5} {:>6}",
                "method", "initial", "final", "iter", "sig", "runs"
            );
            current = Some(key);
        }
        let runs = if r.failed > 0 {
            format!("{}/{}", r.runs - r.failed, r.runs)
        } else {
            r.runs.to_string()
        };
        let _ = writeln!(
            out,
            "{:<12} {:>8} {:>8} {:>6} {:>5} {:>6}",
            r.method.name(),
            fmt(r.mean_initial, 3),
            fmt(r.mean_final, 3),
            fmt(r.mean_iterations, 2),
            r.marker.map_or("", |m| m.symbol()),
            runs
        );
    }
    out.push_str("\n• Co-Transfer significantly better, ◦ significantly worse, ★ no significant difference (paired t-test, 95%)\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::STATUS_OK;

    fn record(method: Method, fold: usize, err: f64) -> RunRecord {
        RunRecord {
            dataset: "d".into(),
            rate: 0.1,
            method,
            fold,
            source_repeat: 0,
            target_repeat: 0,
            initial_error: method.is_iterative().then_some(err + 0.1),
            final_error: Some(err),
            iterations: method.is_iterative().then_some(2),
            wall_time_ms: 1.0,
            status: STATUS_OK.into(),
        }
    }

    #[test]
    fn means_and_markers() {
        let mut rs = Vec::new();
        for f in 0..6 {
            let noise = 0.01 * (f % 3) as f64;
            rs.push(record(Method::CoTransfer, f, 0.1 + noise));
            rs.push(record(Method::Dt, f, 0.3 + noise * 0.5));
            rs.push(record(Method::TrAdaBoost, f, 0.1 + noise));
        }
        let mut failed = record(Method::Dt, 6, 0.0);
        failed.status = "failed: boom".into();
        failed.final_error = None;
        rs.push(failed);
        let rows = summarize(&rs);
        let get = |m| rows.iter().find(|r| r.method == m).unwrap();
        let co = get(Method::CoTransfer);
        assert!((co.mean_final.unwrap() - 0.11).abs() < 1e-12);
        assert!((co.mean_initial.unwrap() - 0.21).abs() < 1e-12);
        assert_eq!(co.mean_iterations, Some(2.0));
        assert_eq!(co.marker, None);
        let dt = get(Method::Dt);
        assert_eq!((dt.runs, dt.failed), (7, 1));
        assert_eq!(dt.marker, Some(Marker::Better));
        assert_eq!(get(Method::TrAdaBoost).marker, Some(Marker::NotSignificant));
        let text = render_summary(&rows);
        assert!(text.contains("6/7"));
        assert!(text.contains('•'));
    }
}
