//! Errors surfaced by the driver, each with a machine-readable record.

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical { context: String, source: combcas::Error },
    Io(String),
    Verification(usize),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical { context, source } => write!(f, "numerical failure at {context}: {source}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verification(n) => write!(f, "{n} verification check(s) exceeded their thresholds"),
        }
    }
}

impl CliError {
    pub fn numerical(context: impl Into<String>) -> impl FnOnce(combcas::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numerical { context, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } | CliError::Io(_) => 1,
            CliError::Verification(_) => 3,
        }
    }

    pub fn record(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Numerical { .. } => "numerical",
            CliError::Io(_) => "io",
            CliError::Verification(_) => "verification",
        };
        let mut record = json!({ "kind": kind, "message": self.to_string() });
        if let CliError::Numerical { context, source } = self {
            record["at"] = json!(context);
            record["cause"] = json!(format!("{:?}", source.root()));
        }
        json!({ "error": record })
    }
}
