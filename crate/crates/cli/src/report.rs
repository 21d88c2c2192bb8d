use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// The output of one invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// Hex SHA-256 of the canonical input.
    pub digest: String,
    /// Canonical SSD of the input, or null.
    pub input: Value,
    pub payload: Value,
    #[serde(skip)]
    pub ok: bool,
    #[serde(skip)]
    pub text: String,
}

/// SHA-256 of the compact serialization of `v`.
pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, input: Value, payload: impl Serialize, text: String) -> Self {
        Report {
            command: command.to_string(),
            digest: digest(&input),
            input,
            payload: serde_json::to_value(payload).expect("serializable"),
            ok: true,
            text,
        }
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}
