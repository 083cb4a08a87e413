//! Run metadata embedded in every artifact.

use serde_json::{json, Value};

/// Resolved run configuration plus the content hash of the model it ran on.
///
/// Output locations and the worker count are left out on purpose: neither
/// changes any number, so artifacts from the same run agree byte for byte
/// wherever and however they were produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub config: Value,
    /// `("map_sha256" | "circuit_sha256", hex digest)`.
    pub hash: (&'static str, String),
    pub setting: Option<Value>,
    pub tolerances: Value,
}

impl Provenance {
    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "tool": concat!("flowmap ", env!("CARGO_PKG_VERSION")),
            "config": self.config,
        });
        v[self.hash.0] = Value::String(self.hash.1.clone());
        v["setting"] = self.setting.clone().unwrap_or(Value::Null);
        v["tolerances"] = self.tolerances.clone();
        v
    }

    /// One `#` line for CSV and text artifacts.
    pub fn comment_line(&self) -> String {
        format!("# provenance {}\n", self.to_value())
    }

    /// XML comment for SVG; `--` may not appear inside one.
    pub fn xml_comment(&self) -> String {
        format!(
            "<!-- provenance {} -->\n",
            self.to_value().to_string().replace("--", "-\\u002d")
        )
    }
}

/// Parses the JSON part of a `# provenance` line.
pub fn parse_comment_line(line: &str) -> Option<Value> {
    serde_json::from_str(line.strip_prefix("# provenance ")?.trim_end()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trips() {
        let p = Provenance {
            config: json!({"subcommand": "trip", "seed": 7}),
            hash: ("map_sha256", "ab".into()),
            setting: None,
            tolerances: json!({"rel_width": 1e-6}),
        };
        let line = p.comment_line();
        assert!(line.starts_with("# provenance {") && line.ends_with("}\n"));
        let v = parse_comment_line(&line).unwrap();
        assert_eq!(v["config"]["seed"], 7);
        assert_eq!(v["map_sha256"], "ab");
        assert!(!p.xml_comment()[4..p.xml_comment().len() - 4].contains("--"));
    }
}
