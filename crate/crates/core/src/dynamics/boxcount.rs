use super::render::Mask;
use super::DynamicsError;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCountResult {
    /// Box sides as fractions of the window, descending.
    pub epsilons: Vec<f64>,
    pub counts: Vec<u64>,
    pub slope: f64,
    pub slope_stderr: f64,
}

/// Occupied boxes when the window is cut into `2^e x 2^e` boxes, for
/// `e = min_exp..=max_exp`, and the least-squares slope of `log N` against
/// `log 1/ε`. Box `(a, b)` at exponent `e` holds pixel `(i, j)` when
/// `a = ⌊i 2^e / nx⌋`, so boxes nest across exponents.
pub fn box_count(mask: &Mask, min_exp: u32, max_exp: u32) -> Result<BoxCountResult, DynamicsError> {
    if mask.count() == 0 {
        return Err(DynamicsError::EmptySet);
    }
    let scales = if max_exp >= min_exp { (max_exp - min_exp + 1) as usize } else { 0 };
    if scales < 3 {
        return Err(DynamicsError::DegenerateFit(scales));
    }
    if max_exp > 30 {
        return Err(DynamicsError::BadArguments(format!("max_exp {max_exp} above 30")));
    }
    let mut epsilons = Vec::with_capacity(scales);
    let mut counts = Vec::with_capacity(scales);
    for e in min_exp..=max_exp {
        let side = 1u64 << e;
        let mut occupied = vec![false; (side * side) as usize];
        for j in 0..mask.ny {
            let b = (j as u64 * side / mask.ny as u64) as usize;
            for i in 0..mask.nx {
                if mask.get(i, j) {
                    let a = (i as u64 * side / mask.nx as u64) as usize;
                    occupied[b * side as usize + a] = true;
                }
            }
        }
        epsilons.push(1.0 / side as f64);
        counts.push(occupied.iter().filter(|&&o| o).count() as u64);
    }
    let xs: Vec<f64> = (min_exp..=max_exp).map(|e| e as f64 * LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let (slope, slope_stderr) = least_squares(&xs, &ys);
    Ok(BoxCountResult { epsilons, counts, slope, slope_stderr })
}

/// Slope of the least-squares line and its standard error.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, (ssr / (n - 2.0) / sxx).sqrt())
}
