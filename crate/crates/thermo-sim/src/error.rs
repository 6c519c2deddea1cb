use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimError {
    #[error("property range exceeded: {component} at {temperature} K (valid {t_min}..{t_max} K)")]
    PropertyRangeExceeded {
        component: String,
        temperature: f64,
        t_min: f64,
        t_max: f64,
    },

    #[error("invalid K-values: {0}")]
    InvalidKValues(String),

    #[error("infeasible conversion in {unit}: outlet flow of {component} would be {flow} kmol/h")]
    InfeasibleConversion {
        unit: String,
        component: String,
        flow: f64,
    },

    #[error("component '{0}' is not in the database")]
    UnknownComponent(String),

    #[error("bubble point not bracketed for {pair} at {pressure} Pa within Antoine ranges")]
    BubbleNotBracketed { pair: String, pressure: f64 },

    #[error("{0}")]
    Invalid(String),
}
