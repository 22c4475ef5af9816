use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },
    #[error("operation needs a {expected} motion, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("backbone is not inextensible: |r_xi| - 1 = {residual:e} at xi = {xi}, t = {t}")]
    InvalidBackbone { residual: f64, xi: f64, t: f64 },
    #[error("wing shape is not inextensible: ||Z_xi| - 1| = {residual:e} at xi = {xi}, t = {t}")]
    InvalidShape { residual: f64, xi: f64, t: f64 },
    #[error("fin wake not yet shed at x = {x}: retarded time {tau} < 0")]
    NotYetShed { x: f64, tau: f64 },
    #[error("division by zero-valued {0}")]
    DivisionDomain(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("accuracy target missed: achieved {achieved:e}, tolerance {tol:e}")]
    Accuracy { achieved: f64, tol: f64 },
    #[error("iteration did not converge; residual history {history:?}")]
    NonConvergence { history: Vec<f64> },
    #[error("Kelvin ledger violated at step {step}: |sum| = {residual:e}")]
    Ledger { step: usize, residual: f64 },
    #[error("not enough history: {0}")]
    NotReady(String),
    #[error("missing upstream data: {0}")]
    Sequencing(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("power balance violated: DV - (P - E) = {residual:e}")]
    Imbalance { residual: f64 },
    #[error("step too coarse: {0}")]
    Resolution(String),
    #[error("data error: {0}")]
    Data(String),
}

pub(crate) fn check_domain(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            domain: format!("[{lo}, {hi}]"),
        })
    }
}
