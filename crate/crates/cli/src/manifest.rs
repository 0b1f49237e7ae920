use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

const SVG_TAG: &str = "<!-- cutseq-manifest ";

/// Everything needed to re-run a command and get the same bytes back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The full argument list, program name excluded.
    pub args: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], seed: u64, timestamp: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            args: args.to_vec(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }

    /// XML comment carrying the manifest. `-` is escaped so the comment never
    /// contains `--`.
    pub fn svg_comment(&self) -> String {
        let json = serde_json::to_string(self).expect("manifest serializes");
        format!("{SVG_TAG}{} -->\n", json.replace('-', "\\u002d"))
    }

    /// Reads a manifest back from a JSON output or an SVG plot.
    pub fn extract(text: &str) -> Result<RunManifest, String> {
        if let Some(at) = text.find(SVG_TAG) {
            let rest = &text[at + SVG_TAG.len()..];
            let end = rest.find(" -->").ok_or("unterminated manifest comment")?;
            return serde_json::from_str(&rest[..end]).map_err(|e| format!("bad manifest: {e}"));
        }
        let v: Value = serde_json::from_str(text).map_err(|e| format!("not JSON: {e}"))?;
        let m = v.get("manifest").cloned().unwrap_or(v);
        serde_json::from_value(m).map_err(|e| format!("bad manifest: {e}"))
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current time.
pub fn current_timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_comment_round_trip() {
        let m = RunManifest::new("plot", &["plot".into(), "--theta".into(), "0.3".into()], 5, 17);
        let c = m.svg_comment();
        assert!(!c[4..c.len() - 4].contains("--"));
        assert_eq!(RunManifest::extract(&format!("<svg/>\n{c}")).unwrap(), m);
    }

    #[test]
    fn extract_from_output() {
        let m = RunManifest::new("seeds", &["seeds".into()], 0, 1);
        let out = serde_json::json!({ "schema": "x", "manifest": m });
        assert_eq!(RunManifest::extract(&out.to_string()).unwrap(), m);
    }
}
