use std::io;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid modulus {0}: expected an odd prime below 2^31")]
    InvalidModulus(u64),

    #[error("{function}: argument {value} outside of its domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("modulus mismatch: context is for q = {context}, sequence is for q = {sequence}")]
    Mismatch { context: u64, sequence: u64 },

    #[error("resource limit: cannot allocate {0} elements")]
    ResourceLimit(usize),

    #[error("class number for q = {q} is not integral: residual {residual:e}")]
    Integrality { q: u64, residual: f64 },

    #[error("spectrum for q = {q} does not contain the character exponent {j}")]
    MissingCoefficient { q: u64, j: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid scan configuration: {0}")]
    Config(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("malformed CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error("evaluation failed for q = {q}: {source}")]
    Evaluation {
        q: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("golden verification failed: {}", describe_mismatches(.0))]
    Verification(Vec<crate::golden::GoldenMismatch>),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn describe_mismatches(list: &[crate::golden::GoldenMismatch]) -> String {
    let mut out = format!("{} value(s) out of tolerance", list.len());
    for m in list.iter().take(8) {
        out.push_str(&format!(
            "; q={} {}: got {:.17e}, want {:.17e}",
            m.q, m.column, m.got, m.want
        ));
    }
    out
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
