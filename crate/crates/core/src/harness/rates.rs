//! Log-log rate fits.

use crate::error::{Error, Result};

/// Least-squares fit of log(gap) = intercept + slope·log(T).
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub const MIN_FIT_POINTS: usize = 4;

pub fn fit_rate(points: &[(f64, f64)]) -> Result<SlopeReport> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidInput(format!(
            "a rate fit needs at least {MIN_FIT_POINTS} points, got {}",
            points.len()
        )));
    }
    if let Some(&(t, g)) = points.iter().find(|(t, g)| !(*t > 0.0 && *g > 0.0 && t.is_finite() && g.is_finite())) {
        return Err(Error::InvalidInput(format!("rate fits need positive finite points, got ({t}, {g})")));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("rate fits need at least two distinct T".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(SlopeReport {
        points: points.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}
