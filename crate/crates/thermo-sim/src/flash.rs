//! Isothermal flash split via the Rachford-Rice equation.

use crate::error::SimError;

/// Result of a flash split: vapor fraction plus phase compositions.
#[derive(Debug, Clone, PartialEq)]
pub struct FlashSplit {
    /// Molar vapor fraction in [0,1].
    pub beta: f64,
    /// Liquid mole fractions.
    pub x: Vec<f64>,
    /// Vapor mole fractions.
    pub y: Vec<f64>,
}

fn rr_f(z: &[f64], k: &[f64], beta: f64) -> f64 {
    z.iter()
        .zip(k)
        .map(|(zi, ki)| zi * (ki - 1.0) / (1.0 + beta * (ki - 1.0)))
        .sum()
}

fn rr_df(z: &[f64], k: &[f64], beta: f64) -> f64 {
    -z.iter()
        .zip(k)
        .map(|(zi, ki)| {
            let d = 1.0 + beta * (ki - 1.0);
            zi * (ki - 1.0) * (ki - 1.0) / (d * d)
        })
        .sum::<f64>()
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.into_iter().map(|e| e / s).collect()
    } else {
        v
    }
}

/// Solve `sum z_i (K_i - 1) / (1 + beta (K_i - 1)) = 0` for the vapor
/// fraction with a bisection-safeguarded Newton iteration (|f| < 1e-12).
///
/// Boundary conventions: `f(0) <= 0` means all liquid (beta 0, x = z),
/// `f(1) >= 0` all vapor (beta 1, y = z); all `K_i = 1` is degenerate and
/// returns beta 0.5 with x = y = z.
pub fn rachford_rice(z: &[f64], k: &[f64]) -> Result<FlashSplit, SimError> {
    if z.len() != k.len() || z.is_empty() {
        return Err(SimError::InvalidKValues(
            "feed and K-value lengths differ or are empty".to_string(),
        ));
    }
    if let Some(bad) = k.iter().find(|ki| **ki <= 0.0 || !ki.is_finite()) {
        return Err(SimError::InvalidKValues(format!(
            "non-positive K-value {bad}"
        )));
    }
    let zsum: f64 = z.iter().sum();
    if (zsum - 1.0).abs() > 1e-6 {
        return Err(SimError::Invalid(format!(
            "feed fractions must sum to 1, got {zsum}"
        )));
    }

    if k.iter().zip(z).all(|(ki, zi)| *zi == 0.0 || (*ki - 1.0).abs() < 1e-14) {
        return Ok(FlashSplit {
            beta: 0.5,
            x: z.to_vec(),
            y: z.to_vec(),
        });
    }

    let f0 = rr_f(z, k, 0.0);
    if f0 <= 0.0 {
        let y = normalized(z.iter().zip(k).map(|(zi, ki)| zi * ki).collect());
        return Ok(FlashSplit {
            beta: 0.0,
            x: z.to_vec(),
            y,
        });
    }
    let f1 = rr_f(z, k, 1.0);
    if f1 >= 0.0 {
        let x = normalized(z.iter().zip(k).map(|(zi, ki)| zi / ki).collect());
        return Ok(FlashSplit {
            beta: 1.0,
            x,
            y: z.to_vec(),
        });
    }

    // f is strictly decreasing on [0,1] with f(0) > 0 > f(1)
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut beta = 0.5_f64;
    let mut f = rr_f(z, k, beta);
    for _ in 0..200 {
        if f.abs() < 1e-12 {
            break;
        }
        if f > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
        let df = rr_df(z, k, beta);
        let newton = beta - f / df;
        beta = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        f = rr_f(z, k, beta);
    }

    let x: Vec<f64> = z
        .iter()
        .zip(k)
        .map(|(zi, ki)| zi / (1.0 + beta * (ki - 1.0)))
        .collect();
    let y: Vec<f64> = x.iter().zip(k).map(|(xi, ki)| xi * ki).collect();
    Ok(FlashSplit { beta, x, y })
}
