use std::collections::HashMap;
use std::fmt::Write as _;

use crate::dataset::ManifestRecord;
use crate::error::{Error, Result};
use crate::geometry::{geodesic_angle, position_error};

/// Position error in meters, orientation error in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub median_pos_m: f64,
    pub mean_pos_m: f64,
    pub median_ori_deg: f64,
    pub mean_ori_deg: f64,
    pub count: usize,
}

/// Prediction records share the manifest format with ground truth.
pub type Prediction = ManifestRecord;

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn mean(v: &[f64]) -> f64 {
    // sorted input keeps the sum independent of input order
    v.iter().sum::<f64>() / v.len() as f64
}

/// Per-pair position and orientation errors, in prediction order.
pub fn pose_errors(preds: &[Prediction], gt: &[ManifestRecord]) -> Result<Vec<(f64, f64)>> {
    let index: HashMap<&str, &ManifestRecord> = gt.iter().map(|r| (r.image_path.as_str(), r)).collect();
    preds
        .iter()
        .map(|p| {
            let g = index
                .get(p.image_path.as_str())
                .ok_or_else(|| Error::Unmatched(p.image_path.clone()))?;
            Ok((position_error(&p.pose, &g.pose), geodesic_angle(&p.pose.orientation, &g.pose.orientation)?))
        })
        .collect()
}

/// Median and mean of position and orientation error over all predictions.
pub fn evaluate(preds: &[Prediction], gt: &[ManifestRecord]) -> Result<Metrics> {
    if preds.is_empty() {
        return Err(Error::invalid("no predictions to evaluate"));
    }
    let errs = pose_errors(preds, gt)?;
    let mut pos: Vec<f64> = errs.iter().map(|e| e.0).collect();
    let mut ori: Vec<f64> = errs.iter().map(|e| e.1).collect();
    let median_pos_m = median(&mut pos);
    let median_ori_deg = median(&mut ori);
    Ok(Metrics {
        median_pos_m,
        mean_pos_m: mean(&pos),
        median_ori_deg,
        mean_ori_deg: mean(&ori),
        count: preds.len(),
    })
}

/// `"1.54m, 0.92°"`.
pub fn format_cell(pos_m: f64, ori_deg: f64) -> String {
    format!("{pos_m:.2}m, {ori_deg:.2}°")
}

/// Fixed-width table with one line per statistic: median first, then mean.
pub fn format_report(rows: &[(String, Metrics)]) -> String {
    let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0).max("Testset".len());
    let cells: Vec<[String; 2]> = rows
        .iter()
        .map(|(_, m)| {
            [
                format_cell(m.median_pos_m, m.median_ori_deg),
                format_cell(m.mean_pos_m, m.mean_ori_deg),
            ]
        })
        .collect();
    let cell_w = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(0)
        .max("Error".len());

    let mut out = String::new();
    let rule = "-".repeat(label_w + 3 + 9 + 3 + cell_w + 3 + 5);
    writeln!(out, "{:<label_w$} | {:<9} | {:<cell_w$} | {}", "Testset", "Statistic", "Error", "N").unwrap();
    writeln!(out, "{rule}").unwrap();
    for ((label, m), [med, avg]) in rows.iter().zip(&cells) {
        writeln!(out, "{label:<label_w$} | {:<9} | {med:<cell_w$} | {}", "median", m.count).unwrap();
        writeln!(out, "{:<label_w$} | {:<9} | {avg:<cell_w$} |", "", "mean").unwrap();
    }
    out
}
