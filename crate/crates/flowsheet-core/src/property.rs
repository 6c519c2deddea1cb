use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Thermodynamic model selection for vapor-liquid equilibrium.
///
/// `Margules` carries one symmetric dimensionless coefficient per unordered
/// component pair, keyed by [`pair_key`]; pairs without an entry behave
/// ideally (coefficient 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum PropertyMethod {
    IdealRaoult,
    Margules {
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

impl PropertyMethod {
    pub fn margules(pairs: &[(&str, &str, f64)]) -> Self {
        let params = pairs
            .iter()
            .map(|(a, b, v)| (pair_key(a, b), *v))
            .collect();
        PropertyMethod::Margules { params }
    }

    /// Margules with the database default coefficients for every pair that
    /// has one; other pairs stay ideal.
    pub fn margules_with_defaults(component_ids: &[String]) -> Self {
        let mut params = BTreeMap::new();
        for (i, a) in component_ids.iter().enumerate() {
            for b in component_ids.iter().skip(i + 1) {
                if let Some(a12) = default_margules(a, b) {
                    params.insert(pair_key(a, b), a12);
                }
            }
        }
        PropertyMethod::Margules { params }
    }

    /// Symmetric binary coefficient for a component pair (0 when absent or
    /// when the method is ideal).
    pub fn margules_coefficient(&self, c1: &str, c2: &str) -> f64 {
        match self {
            PropertyMethod::IdealRaoult => 0.0,
            PropertyMethod::Margules { params } => {
                params.get(&pair_key(c1, c2)).copied().unwrap_or(0.0)
            }
        }
    }
}

/// Canonical key for an unordered component pair.
pub fn pair_key(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}|{b}")
    } else {
        format!("{b}|{a}")
    }
}

/// Default symmetric Margules coefficients for pairs known to be strongly
/// non-ideal. Ethanol-water is tuned to place an azeotrope in the
/// ethanol-rich region; hydrocarbon pairs are near-ideal and omitted.
pub fn default_margules(a: &str, b: &str) -> Option<f64> {
    let key = pair_key(a, b);
    match key.as_str() {
        "ethanol|water" => Some(1.10),
        "methanol|water" => Some(0.58),
        "benzene|ethanol" => Some(1.45),
        "benzene|methanol" => Some(1.80),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lookup_is_order_independent() {
        let m = PropertyMethod::margules(&[("water", "ethanol", 1.1)]);
        assert_eq!(m.margules_coefficient("ethanol", "water"), 1.1);
        assert_eq!(m.margules_coefficient("water", "ethanol"), 1.1);
        assert_eq!(m.margules_coefficient("water", "benzene"), 0.0);
    }

    #[test]
    fn ideal_has_no_coefficients() {
        assert_eq!(
            PropertyMethod::IdealRaoult.margules_coefficient("a", "b"),
            0.0
        );
    }
}
