use serde::{Deserialize, Serialize};

/// Scores of the five evaluation dimensions, each in [0,100]:
/// economic feasibility, environmental sustainability, process safety,
/// technical feasibility and topological rationality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionScores {
    pub ef: f64,
    pub es: f64,
    pub ps: f64,
    pub tf: f64,
    pub tr: f64,
}

impl DimensionScores {
    pub fn new(ef: f64, es: f64, ps: f64, tf: f64, tr: f64) -> Self {
        Self { ef, es, ps, tf, tr }
    }

    pub fn uniform(v: f64) -> Self {
        Self::new(v, v, v, v, v)
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.ef, self.es, self.ps, self.tf, self.tr]
    }

    pub fn max_dimension(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }

    /// (name, value) of the lowest-scoring dimension; ties resolve to the
    /// first in (ef, es, ps, tf, tr) order.
    pub fn min_dimension(&self) -> (&'static str, f64) {
        let named = [
            ("ef", self.ef),
            ("es", self.es),
            ("ps", self.ps),
            ("tf", self.tf),
            ("tr", self.tr),
        ];
        named
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("five dimensions")
    }

    pub fn clamped(self) -> Self {
        let c = |v: f64| v.clamp(0.0, 100.0);
        Self::new(c(self.ef), c(self.es), c(self.ps), c(self.tf), c(self.tr))
    }
}

/// Dimension weights plus the failure penalty factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
    pub lambda: f64,
}

impl Default for EvalWeights {
    fn default() -> Self {
        Self {
            w1: 0.35,
            w2: 0.25,
            w3: 0.15,
            w4: 0.15,
            w5: 0.10,
            lambda: 0.3,
        }
    }
}

impl EvalWeights {
    pub fn validate(&self) -> Result<(), String> {
        let ws = [self.w1, self.w2, self.w3, self.w4, self.w5];
        if ws.iter().any(|w| *w < 0.0) {
            return Err("weights must be non-negative".to_string());
        }
        let sum: f64 = ws.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(format!("weights must sum to 1, got {sum}"));
        }
        if !(0.0..1.0).contains(&self.lambda) || self.lambda == 0.0 {
            return Err(format!("lambda must be in (0,1), got {}", self.lambda));
        }
        Ok(())
    }
}

/// Combined evaluation of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    /// Final score (penalized when the simulation failed).
    pub score: f64,
    /// Weighted sum before any penalty.
    pub raw_score: f64,
    pub penalized: bool,
    pub dims: DimensionScores,
    /// Improvement directions for the next iteration.
    pub directives: Vec<String>,
}

/// Weighted combination of the dimension scores; non-convergence scales the
/// result by the penalty factor.
pub fn combine_scores(dims: &DimensionScores, converged: bool, w: &EvalWeights) -> EvalResult {
    let raw =
        w.w1 * dims.ef + w.w2 * dims.es + w.w3 * dims.ps + w.w4 * dims.tf + w.w5 * dims.tr;
    let (score, penalized) = if converged {
        (raw, false)
    } else {
        (w.lambda * raw, true)
    };
    EvalResult {
        score,
        raw_score: raw,
        penalized,
        dims: *dims,
        directives: Vec::new(),
    }
}
