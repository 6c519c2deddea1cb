use std::path::Path;

/// All schedule and threshold parameters of the search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Dynamic-weight schedule endpoints for the immediate/potential blend.
    pub alpha0: f64,
    pub alpha_max: f64,
    /// Exploration coefficient at t=0; decays as c0/sqrt(1+t).
    pub c0: f64,
    /// Feature-bonus weights: recent improvement, child-score variance,
    /// depth preference.
    pub w_r: f64,
    pub w_v: f64,
    pub w_d: f64,
    /// Depth at which the depth feature saturates.
    pub d_cap: u32,
    /// Failure penalty factor, shared with the evaluator.
    pub lambda: f64,
    /// Evaluator dimension weights (economic, environmental, safety,
    /// technical, topological).
    pub eval_weights: [f64; 5],
    pub children_per_expansion: u32,
    pub initial_nodes: u32,
    pub target_score: f64,
    pub max_iterations: u32,
    /// Window (in iterations) over which a flat best-score trace counts as
    /// stagnation.
    pub stagnation_window: u32,
    /// Visit-concentration threshold of the convergence criterion.
    pub theta_v: f64,
    /// Best-score stability threshold (std over the last 5) of the
    /// convergence criterion.
    pub eps_s: f64,
    /// Final selection weights: quality, visit share, stability.
    pub final_weights: (f64, f64, f64),
    pub seed: u64,
    /// Simulator settings used for every candidate evaluation.
    pub sim_tol: f64,
    pub sim_max_iter: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            alpha0: 0.3,
            alpha_max: 0.8,
            c0: std::f64::consts::SQRT_2,
            w_r: 0.1,
            w_v: 0.05,
            w_d: 0.05,
            d_cap: 5,
            lambda: 0.3,
            eval_weights: [0.35, 0.25, 0.15, 0.15, 0.10],
            children_per_expansion: 3,
            initial_nodes: 3,
            target_score: 85.0,
            max_iterations: 15,
            stagnation_window: 3,
            theta_v: 0.6,
            eps_s: 1.0,
            final_weights: (0.7, 0.2, 0.1),
            seed: 42,
            sim_tol: 1e-6,
            sim_max_iter: 200,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.alpha0) || !(0.0..=1.0).contains(&self.alpha_max) {
            return Err("alpha0 and alpha_max must be in [0,1]".to_string());
        }
        if self.alpha0 > self.alpha_max {
            return Err("alpha0 must not exceed alpha_max".to_string());
        }
        if self.c0 < 0.0 {
            return Err("c0 must be non-negative".to_string());
        }
        let (a, b, c) = self.final_weights;
        if (a + b + c - 1.0).abs() > 1e-9 {
            return Err(format!("final weights must sum to 1, got {}", a + b + c));
        }
        let eval_sum: f64 = self.eval_weights.iter().sum();
        if self.eval_weights.iter().any(|w| *w < 0.0) || (eval_sum - 1.0).abs() > 1e-12 {
            return Err(format!(
                "eval weights must be non-negative and sum to 1, got {eval_sum}"
            ));
        }
        if self.initial_nodes == 0 || self.children_per_expansion == 0 {
            return Err("initial_nodes and children_per_expansion must be positive".to_string());
        }
        Ok(())
    }

    /// Parse a flat `key = value` configuration file. `#` starts a comment;
    /// unknown keys are errors so misspelled knobs fail loudly.
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_str_flat(&text)
    }

    pub fn from_str_flat(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = || -> Result<f64, String> {
                value
                    .parse()
                    .map_err(|_| format!("line {}: bad number '{value}'", lineno + 1))
            };
            let parse_u32 = || -> Result<u32, String> {
                value
                    .parse()
                    .map_err(|_| format!("line {}: bad integer '{value}'", lineno + 1))
            };
            match key {
                "alpha0" => cfg.alpha0 = parse_f64()?,
                "alpha_max" => cfg.alpha_max = parse_f64()?,
                "c0" => cfg.c0 = parse_f64()?,
                "w_r" => cfg.w_r = parse_f64()?,
                "w_v" => cfg.w_v = parse_f64()?,
                "w_d" => cfg.w_d = parse_f64()?,
                "d_cap" => cfg.d_cap = parse_u32()?,
                "lambda" => cfg.lambda = parse_f64()?,
                "eval_w1" => cfg.eval_weights[0] = parse_f64()?,
                "eval_w2" => cfg.eval_weights[1] = parse_f64()?,
                "eval_w3" => cfg.eval_weights[2] = parse_f64()?,
                "eval_w4" => cfg.eval_weights[3] = parse_f64()?,
                "eval_w5" => cfg.eval_weights[4] = parse_f64()?,
                "children_per_expansion" => cfg.children_per_expansion = parse_u32()?,
                "initial_nodes" => cfg.initial_nodes = parse_u32()?,
                "target_score" => cfg.target_score = parse_f64()?,
                "max_iterations" => cfg.max_iterations = parse_u32()?,
                "stagnation_window" => cfg.stagnation_window = parse_u32()?,
                "theta_v" => cfg.theta_v = parse_f64()?,
                "eps_s" => cfg.eps_s = parse_f64()?,
                "final_w_quality" => cfg.final_weights.0 = parse_f64()?,
                "final_w_visits" => cfg.final_weights.1 = parse_f64()?,
                "final_w_stability" => cfg.final_weights.2 = parse_f64()?,
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| format!("line {}: bad integer '{value}'", lineno + 1))?
                }
                "sim_tol" => cfg.sim_tol = parse_f64()?,
                "sim_max_iter" => cfg.sim_max_iter = parse_u32()?,
                unknown => return Err(format!("line {}: unknown key '{unknown}'", lineno + 1)),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_overrides_defaults() {
        let cfg = SearchConfig::from_str_flat(
            "# tuning\nalpha0 = 0.2\nmax_iterations = 7\nseed = 99\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha0, 0.2);
        assert_eq!(cfg.max_iterations, 7);
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.target_score, 85.0);
    }

    #[test]
    fn unknown_keys_fail_loudly() {
        let err = SearchConfig::from_str_flat("alpha_zero = 0.2\n").unwrap_err();
        assert!(err.contains("unknown key"), "{err}");
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(SearchConfig::from_str_flat("alpha0 = 1.5\n").is_err());
        assert!(SearchConfig::from_str_flat("final_w_quality = 0.9\n").is_err());
        assert!(SearchConfig::from_str_flat("eval_w1 = 0.5\n").is_err());
    }

    #[test]
    fn evaluation_weights_are_configurable() {
        let cfg = SearchConfig::from_str_flat(
            "eval_w1 = 0.2\neval_w2 = 0.2\neval_w3 = 0.2\neval_w4 = 0.2\neval_w5 = 0.2\n",
        )
        .unwrap();
        assert_eq!(cfg.eval_weights, [0.2; 5]);
    }
}
