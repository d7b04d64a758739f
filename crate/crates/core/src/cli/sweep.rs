use rayon::prelude::*;
use serde_json::Value;

use super::commands::evaluate;
use super::config::{Format, Grid, RunConfig};
use super::output::{object, result_rows, round_value, to_csv, to_json};
use crate::error::{Error, Result};

pub struct PointResult {
    pub value: f64,
    pub outcome: Result<Value>,
}

/// Evaluates every grid point on `workers` threads; results keep grid order.
pub fn run_grid(cfg: &RunConfig, grid: &Grid, workers: usize) -> Result<Vec<PointResult>> {
    let points = grid.points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameters(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .map(|&value| PointResult {
                value,
                outcome: evaluate(&cfg.at_point(grid.variable, value)).map(round_value),
            })
            .collect()
    }))
}

pub fn render(results: &[PointResult], var: &str, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let items = results
                .iter()
                .map(|r| {
                    let x = round_value(Value::from(r.value));
                    match &r.outcome {
                        Ok(v) => object(vec![(var, x), ("status", "ok".into()), ("result", v.clone())]),
                        Err(e) => object(vec![(var, x), ("status", "error".into()), ("error", e.to_string().into())]),
                    }
                })
                .collect();
            Ok(to_json(&Value::Array(items)))
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for r in results {
                let x = crate::numfmt::fmt_g(r.value);
                match &r.outcome {
                    Ok(v) => {
                        for fields in result_rows(v) {
                            let mut row = vec![(var.to_string(), x.clone())];
                            row.extend(fields.into_iter().filter(|(k, _)| k != var));
                            row.push(("status".into(), "ok".into()));
                            rows.push(row);
                        }
                    }
                    Err(e) => rows.push(vec![(var.to_string(), x), ("status".into(), format!("error: {e}"))]),
                }
            }
            to_csv(&rows, &["status"])
        }
    }
}
