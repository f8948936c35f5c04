//! Co-Transfer error over a grid of boosting rounds `N` and tree depths `D`.

use std::path::Path;

use serde::Serialize;

use super::config::{Domains, ExperimentConfig};
use super::run::run_experiment_on;
use super::Method;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub rounds: Vec<usize>,
    pub depths: Vec<usize>,
    /// `mean_final[r][d]`: mean final error over every rate and run.
    pub mean_final: Vec<Vec<f64>>,
    pub failed: usize,
}

impl SweepGrid {
    pub fn get(&self, rounds: usize, depth: usize) -> Option<f64> {
        let r = self.rounds.iter().position(|&x| x == rounds)?;
        let d = self.depths.iter().position(|&x| x == depth)?;
        Some(self.mean_final[r][d])
    }
}

pub fn sweep(
    cfg: &ExperimentConfig,
    domains: &Domains,
    rounds: &[usize],
    depths: &[usize],
) -> Result<SweepGrid> {
    if rounds.is_empty() || depths.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    let mut grid = SweepGrid {
        rounds: rounds.to_vec(),
        depths: depths.to_vec(),
        mean_final: Vec::with_capacity(rounds.len()),
        failed: 0,
    };
    for &n in rounds {
        let mut row = Vec::with_capacity(depths.len());
        for &d in depths {
            let mut cell = cfg.clone();
            cell.methods = vec![Method::CoTransfer];
            cell.model.rounds = n;
            cell.model.max_depth = d;
            cell.validate()?;
            let res = run_experiment_on(&cell, domains)?;
            grid.failed += res.failures().count();
            let finals: Vec<f64> = res.records.iter().filter_map(|r| r.final_error).collect();
            row.push(if finals.is_empty() {
                f64::NAN
            } else {
                finals.iter().sum::<f64>() / finals.len() as f64
            });
        }
        grid.mean_final.push(row);
    }
    Ok(grid)
}

#[derive(Serialize)]
struct GridRow {
    rounds: usize,
    max_depth: usize,
    mean_final_error: f64,
}

/// Long format: one `rounds,max_depth,mean_final_error` row per cell.
pub fn write_grid(path: impl AsRef<Path>, grid: &SweepGrid) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for (r, &rounds) in grid.rounds.iter().enumerate() {
        for (d, &max_depth) in grid.depths.iter().enumerate() {
            w.serialize(GridRow {
                rounds,
                max_depth,
                mean_final_error: grid.mean_final[r][d],
            })?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
