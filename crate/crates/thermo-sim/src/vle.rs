//! Pure-component saturation pressure and vapor-liquid K-values.

use flowsheet_core::{ChemComponent, PropertyMethod};

use crate::error::SimError;

/// Antoine saturation pressure in Pa. `T` must lie inside the component's
/// validity range.
pub fn saturation_pressure(comp: &ChemComponent, temperature: f64) -> Result<f64, SimError> {
    let a = &comp.antoine;
    if temperature < a.t_min || temperature > a.t_max {
        return Err(SimError::PropertyRangeExceeded {
            component: comp.id.clone(),
            temperature,
            t_min: a.t_min,
            t_max: a.t_max,
        });
    }
    Ok((a.a - a.b / (temperature + a.c)).exp())
}

/// Liquid-phase activity coefficients for the given composition.
///
/// Margules is symmetric two-suffix: for a binary,
/// `ln g1 = A12 * x2^2`, `ln g2 = A12 * x1^2`. For more components each
/// pair contributes `A_ij * x_j^2` to `ln g_i` (pairwise simplification;
/// exact for binaries, ideal when all coefficients are zero).
pub fn activity_coefficients(
    comps: &[&ChemComponent],
    method: &PropertyMethod,
    x: &[f64],
) -> Vec<f64> {
    match method {
        PropertyMethod::IdealRaoult => vec![1.0; comps.len()],
        PropertyMethod::Margules { .. } => comps
            .iter()
            .enumerate()
            .map(|(i, ci)| {
                let ln_gamma: f64 = comps
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, cj)| method.margules_coefficient(&ci.id, &cj.id) * x[j] * x[j])
                    .sum();
                ln_gamma.exp()
            })
            .collect(),
    }
}

/// Equilibrium ratios `K_i = gamma_i * Psat_i(T) / P` for a liquid of
/// composition `x` (mole fractions summing to 1).
pub fn k_values(
    comps: &[&ChemComponent],
    temperature: f64,
    pressure: f64,
    method: &PropertyMethod,
    x: &[f64],
) -> Result<Vec<f64>, SimError> {
    if pressure <= 0.0 {
        return Err(SimError::Invalid(format!(
            "pressure must be positive, got {pressure}"
        )));
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(SimError::Invalid(format!(
            "liquid mole fractions must sum to 1, got {sum}"
        )));
    }
    let gammas = activity_coefficients(comps, method, x);
    comps
        .iter()
        .zip(gammas)
        .map(|(c, g)| saturation_pressure(c, temperature).map(|psat| g * psat / pressure))
        .collect()
}
