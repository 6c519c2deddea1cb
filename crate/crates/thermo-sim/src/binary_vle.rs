//! Binary vapor-liquid equilibrium analysis: Txy grid, azeotrope detection,
//! relative volatility.

use serde::{Deserialize, Serialize};

use flowsheet_core::{ChemComponent, PropertyMethod};

use crate::error::SimError;
use crate::vle::{activity_coefficients, saturation_pressure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VlePoint {
    pub x1: f64,
    pub y1: f64,
    pub t_bubble: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzeotropePoint {
    pub x1: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VleResult {
    pub pressure: f64,
    pub components: (String, String),
    pub points: Vec<VlePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub azeotrope: Option<AzeotropePoint>,
    pub relative_volatility_range: (f64, f64),
}

const GRID_POINTS: usize = 101;

struct BubbleSolve {
    t: f64,
    y1: f64,
    alpha: f64,
}

/// Solve `x1 g1 Psat1(T) + x2 g2 Psat2(T) = P` for T by bisection on the
/// overlap of the two Antoine validity ranges.
fn bubble_point(
    c1: &ChemComponent,
    c2: &ChemComponent,
    pressure: f64,
    method: &PropertyMethod,
    x1: f64,
) -> Result<BubbleSolve, SimError> {
    let lo = c1.antoine.t_min.max(c2.antoine.t_min);
    let hi = c1.antoine.t_max.min(c2.antoine.t_max);
    let not_bracketed = |t: f64| SimError::PropertyRangeExceeded {
        component: format!("{}|{}", c1.id, c2.id),
        temperature: t,
        t_min: lo,
        t_max: hi,
    };
    if lo >= hi {
        return Err(not_bracketed(lo));
    }

    let comps = [c1, c2];
    let x = [x1, 1.0 - x1];
    let gammas = activity_coefficients(&comps, method, &x);
    let f = |t: f64| -> Result<f64, SimError> {
        let p1 = saturation_pressure(c1, t)?;
        let p2 = saturation_pressure(c2, t)?;
        Ok(x[0] * gammas[0] * p1 + x[1] * gammas[1] * p2 - pressure)
    };

    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo > 0.0 {
        return Err(not_bracketed(lo));
    }
    if f_hi < 0.0 {
        return Err(not_bracketed(hi));
    }

    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f(mid)? <= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    let t = 0.5 * (a + b);
    let p1 = saturation_pressure(c1, t)?;
    let p2 = saturation_pressure(c2, t)?;
    let y1 = x[0] * gammas[0] * p1 / pressure;
    let alpha = (gammas[0] * p1) / (gammas[1] * p2);
    Ok(BubbleSolve { t, y1, alpha })
}

fn refine_azeotrope(
    c1: &ChemComponent,
    c2: &ChemComponent,
    pressure: f64,
    method: &PropertyMethod,
    mut lo: f64,
    mut hi: f64,
) -> Result<AzeotropePoint, SimError> {
    let d = |x1: f64| -> Result<(f64, f64), SimError> {
        let s = bubble_point(c1, c2, pressure, method, x1)?;
        Ok((s.y1 - x1, s.t))
    };
    let (mut d_lo, _) = d(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (d_mid, t_mid) = d(mid)?;
        if d_mid.abs() < 1e-9 {
            return Ok(AzeotropePoint {
                x1: mid,
                temperature: t_mid,
            });
        }
        if (d_mid > 0.0) == (d_lo > 0.0) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    let (_, t) = d(0.5 * (lo + hi))?;
    Ok(AzeotropePoint {
        x1: 0.5 * (lo + hi),
        temperature: t,
    })
}

/// Bubble-point Txy sweep over a uniform 101-point x1 grid with azeotrope
/// detection (strict interior sign change of y1 - x1, refined by bisection).
pub fn analyze_binary_vle(
    c1: &ChemComponent,
    c2: &ChemComponent,
    pressure: f64,
    method: &PropertyMethod,
) -> Result<VleResult, SimError> {
    if pressure <= 0.0 {
        return Err(SimError::Invalid(format!(
            "pressure must be positive, got {pressure}"
        )));
    }
    let mut points = Vec::with_capacity(GRID_POINTS);
    let mut alpha_min = f64::INFINITY;
    let mut alpha_max = f64::NEG_INFINITY;
    for i in 0..GRID_POINTS {
        let x1 = i as f64 / (GRID_POINTS - 1) as f64;
        let solve = bubble_point(c1, c2, pressure, method, x1)?;
        // pure-component endpoints are identities by definition
        let y1 = match i {
            0 => 0.0,
            i if i == GRID_POINTS - 1 => 1.0,
            _ => solve.y1,
        };
        alpha_min = alpha_min.min(solve.alpha);
        alpha_max = alpha_max.max(solve.alpha);
        points.push(VlePoint {
            x1,
            y1,
            t_bubble: solve.t,
        });
    }

    let mut azeotrope = None;
    for w in 1..GRID_POINTS - 2 {
        let d_a = points[w].y1 - points[w].x1;
        let d_b = points[w + 1].y1 - points[w + 1].x1;
        if d_a == 0.0 {
            azeotrope = Some(AzeotropePoint {
                x1: points[w].x1,
                temperature: points[w].t_bubble,
            });
            break;
        }
        if d_a * d_b < 0.0 {
            azeotrope = Some(refine_azeotrope(
                c1,
                c2,
                pressure,
                method,
                points[w].x1,
                points[w + 1].x1,
            )?);
            break;
        }
    }

    Ok(VleResult {
        pressure,
        components: (c1.id.clone(), c2.id.clone()),
        points,
        azeotrope,
        relative_volatility_range: (alpha_min, alpha_max),
    })
}
