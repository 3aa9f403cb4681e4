use serde::Serialize;
use serde_json::Value;

/// Structured result of one command. Object keys serialize in sorted
/// order, so equal reports print identically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub command: String,
    pub input: Option<String>,
    pub passed: bool,
    pub results: Value,
}

impl AnalysisReport {
    pub fn new(
        command: impl Into<String>,
        input: Option<String>,
        passed: bool,
        results: Value,
    ) -> Self {
        AnalysisReport {
            command: command.into(),
            input,
            passed,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports are plain data");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted() {
        let r = AnalysisReport::new("betti", None, true, json!({"zeta": 1, "alpha": 2}));
        let text = r.to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"passed\"").unwrap());
    }
}
