//! The `polylat` command line: argument handling, the on-disk result
//! cache, JSON/CSV writers and the acceptance table behind `repro`.

pub mod cache;
pub mod commands;
pub mod json;
pub mod repro;

use std::fmt;

use serde_json::{json, Value};

pub use commands::run;

/// Identifier written into every JSON document.
pub const SCHEMA_ID: &str = "polylat/v1";

/// The JSON schema every document validates against.
pub const SCHEMA: &str = include_str!("../schema/polylat-v1.schema.json");

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Budget(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Budget(_) => "budget",
            Failure::Internal(_) => "internal",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_ID,
            "engine": polylat::ENGINE_VERSION,
            "command": "error",
            "error": { "category": self.category(), "code": self.code(), "message": self.message() },
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category(), self.message())
    }
}

impl From<polylat::Error> for Failure {
    fn from(e: polylat::Error) -> Self {
        use polylat::Error as E;
        let m = e.to_string();
        match e {
            E::BudgetExceeded { .. } | E::SizeCap { .. } => Failure::Budget(m),
            E::Overflow(_) | E::NoGenericProjection(_) => Failure::Internal(m),
            _ => Failure::Validation(m),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(format!("i/o: {e}"))
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
