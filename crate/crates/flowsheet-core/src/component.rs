use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Antoine correlation for saturation pressure,
/// `ln(Psat[Pa]) = a - b / (T[K] + c)`, valid on `[t_min, t_max]` Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Antoine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Antoine {
    /// Convert a log10(P[mmHg]) / Celsius Antoine triple (the form most
    /// published tables use) into the natural-log / Pascal / Kelvin form.
    fn from_mmhg(a: f64, b: f64, c: f64, t_min_k: f64, t_max_k: f64) -> Self {
        const LN10: f64 = std::f64::consts::LN_10;
        const MMHG_TO_PA: f64 = 101_325.0 / 760.0;
        Self {
            a: a * LN10 + MMHG_TO_PA.ln(),
            b: b * LN10,
            c: c - 273.15,
            t_min: t_min_k,
            t_max: t_max_k,
        }
    }
}

/// A pure chemical species with the physical properties the simulator needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChemComponent {
    /// Short identifier used in flowsheets ("water", "ethanol", ...).
    pub id: String,
    pub name: String,
    pub formula: String,
    /// kg/kmol
    pub molar_mass: f64,
    pub antoine: Antoine,
    /// Liquid heat capacity, kJ/(kmol K).
    pub cp_liq: f64,
    /// Heat of vaporization, kJ/kmol.
    pub hvap: f64,
    pub flammable: bool,
    /// Normal boiling point, K (published value; used as a self-check).
    pub normal_boiling_point: f64,
}

struct DbEntry {
    component: ChemComponent,
    synonyms: &'static [&'static str],
}

#[allow(clippy::too_many_arguments)]
fn entry(
    id: &str,
    name: &str,
    formula: &str,
    molar_mass: f64,
    antoine: Antoine,
    cp_liq: f64,
    hvap: f64,
    flammable: bool,
    nbp: f64,
    synonyms: &'static [&'static str],
) -> DbEntry {
    DbEntry {
        component: ChemComponent {
            id: id.to_string(),
            name: name.to_string(),
            formula: formula.to_string(),
            molar_mass,
            antoine,
            cp_liq,
            hvap,
            flammable,
            normal_boiling_point: nbp,
        },
        synonyms,
    }
}

/// Embedded component database. Antoine coefficients are standard
/// log10-mmHg table values converted to ln-Pa form; validity ranges are set
/// wide enough to bracket atmospheric bubble points of the bundled pairs.
static DATABASE: Lazy<Vec<DbEntry>> = Lazy::new(|| {
    vec![
        entry(
            "water",
            "Water",
            "H2O",
            18.015,
            Antoine::from_mmhg(8.07131, 1730.63, 233.426, 273.16, 430.0),
            75.3,
            40_650.0,
            false,
            373.15,
            &["h2o", "dihydrogen monoxide"],
        ),
        entry(
            "ethanol",
            "Ethanol",
            "C2H6O",
            46.068,
            Antoine::from_mmhg(8.20417, 1642.89, 230.300, 250.0, 380.0),
            112.3,
            38_560.0,
            true,
            351.44,
            &["ethyl alcohol", "etoh"],
        ),
        entry(
            "methanol",
            "Methanol",
            "CH4O",
            32.042,
            Antoine::from_mmhg(7.89750, 1474.08, 229.13, 250.0, 380.0),
            81.1,
            35_210.0,
            true,
            337.85,
            &["methyl alcohol", "meoh"],
        ),
        entry(
            "benzene",
            "Benzene",
            "C6H6",
            78.114,
            Antoine::from_mmhg(6.90565, 1211.033, 220.790, 278.7, 390.0),
            136.1,
            30_720.0,
            true,
            353.25,
            &["c6h6"],
        ),
        entry(
            "toluene",
            "Toluene",
            "C7H8",
            92.141,
            Antoine::from_mmhg(6.95464, 1344.800, 219.480, 250.0, 420.0),
            157.0,
            33_180.0,
            true,
            383.75,
            &["methylbenzene"],
        ),
        entry(
            "n-hexane",
            "n-Hexane",
            "C6H14",
            86.178,
            Antoine::from_mmhg(6.87601, 1171.17, 224.41, 240.0, 380.0),
            195.0,
            28_850.0,
            true,
            341.88,
            &["hexane"],
        ),
        entry(
            "propane",
            "Propane",
            "C3H8",
            44.097,
            Antoine::from_mmhg(6.80398, 803.810, 246.99, 160.0, 250.0),
            98.3,
            18_770.0,
            true,
            231.05,
            &["c3h8"],
        ),
        entry(
            "ethylene",
            "Ethylene",
            "C2H4",
            28.054,
            Antoine::from_mmhg(6.74756, 585.00, 255.00, 110.0, 185.0),
            67.4,
            13_540.0,
            true,
            169.45,
            &["ethene", "c2h4"],
        ),
    ]
});

/// Ids of all database components, in database order.
pub fn all_component_ids() -> Vec<String> {
    DATABASE.iter().map(|e| e.component.id.clone()).collect()
}

/// Look a component up by id, name or synonym, case-insensitively.
pub fn lookup(name: &str) -> Option<&'static ChemComponent> {
    let query = name.trim().to_ascii_lowercase();
    DATABASE
        .iter()
        .find(|e| {
            e.component.id == query
                || e.component.name.to_ascii_lowercase() == query
                || e.synonyms.iter().any(|s| *s == query)
        })
        .map(|e| &e.component)
}

/// Like [`lookup`], but reports nearest database names on a miss.
pub fn resolve(name: &str) -> Result<&'static ChemComponent, CoreError> {
    lookup(name).ok_or_else(|| CoreError::UnknownComponent {
        name: name.to_string(),
        candidates: nearest_matches(name, 3),
    })
}

pub fn get(id: &str) -> Option<&'static ChemComponent> {
    DATABASE.iter().map(|e| &e.component).find(|c| c.id == id)
}

/// Database ids ranked by edit distance to `query` (closest first).
pub fn nearest_matches(query: &str, limit: usize) -> Vec<String> {
    let q = query.trim().to_ascii_lowercase();
    let mut ranked: Vec<(usize, &str)> = DATABASE
        .iter()
        .map(|e| (levenshtein(&q, &e.component.id), e.component.id.as_str()))
        .collect();
    ranked.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(b.1)));
    ranked
        .into_iter()
        .take(limit)
        .map(|(_, id)| id.to_string())
        .collect()
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            cur[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_is_case_insensitive_and_knows_synonyms() {
        assert_eq!(lookup("Water").unwrap().id, "water");
        assert_eq!(lookup("ETOH").unwrap().id, "ethanol");
        assert_eq!(lookup("methylbenzene").unwrap().id, "toluene");
        assert!(lookup("unobtainium").is_none());
    }

    #[test]
    fn resolve_reports_nearest_matches() {
        let err = resolve("tolune").unwrap_err();
        match err {
            CoreError::UnknownComponent { candidates, .. } => {
                assert_eq!(candidates[0], "toluene");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn database_invariants_hold() {
        for id in all_component_ids() {
            let c = get(&id).unwrap();
            assert!(c.molar_mass > 0.0, "{id}");
            assert!(c.antoine.t_min < c.antoine.t_max, "{id}");
            assert!(
                c.antoine.t_min <= c.normal_boiling_point
                    && c.normal_boiling_point <= c.antoine.t_max,
                "{id}: boiling point outside Antoine validity range"
            );
        }
    }
}
