//! Machine-readable run records.

use serde::{Deserialize, Serialize};

/// One CLI invocation, echoed inputs and all results, as stable JSON.
///
/// Identical inputs produce byte-identical serializations except for the
/// `timestamp_ms` field.  `schema_version` is bumped on any breaking change
/// to the layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    pub input: serde_json::Value,
    pub results: serde_json::Value,
    pub artifact_version: String,
    pub timestamp_ms: u64,
}

impl RunRecord {
    pub fn new(command: &str, input: serde_json::Value, results: serde_json::Value) -> Self {
        RunRecord {
            schema_version: 1,
            command: command.to_string(),
            input,
            results,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_ms: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
        }
    }

    pub fn print(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("run record serializes")
        );
    }
}

/// Significant-digit formatting: plain decimal in a comfortable magnitude
/// window, scientific outside it.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let digits_i = digits as i32;
    if mag < -4 || mag >= digits_i.max(7) {
        format!("{:.*e}", digits - 1, x)
    } else {
        let dec = (digits_i - 1 - mag).max(0) as usize;
        format!("{:.*}", dec, x)
    }
}

/// Probabilities carry six significant digits in human output.
pub fn prob(x: f64) -> String {
    sig(x, 6)
}

/// Log-scale values carry twelve.
pub fn logv(x: f64) -> String {
    sig(x, 12)
}
