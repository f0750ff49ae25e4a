//! Command reports and their text and JSON renderings.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
    Exhausted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
            Verdict::Exhausted => "EXHAUSTED",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
            Verdict::Exhausted => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub description: String,
    /// Command line that re-checks only this instance.
    pub replay: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub arity_cutoff: Option<usize>,
    pub energy_cutoff: Option<String>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Command-specific fields, kept in insertion order for text output.
    pub details: Vec<(String, Value)>,
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            arity_cutoff: None,
            energy_cutoff: None,
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            details: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn error(command: &str, message: &str) -> Self {
        let mut r = Report::new(command);
        r.verdict = Verdict::Error;
        r.detail("error", message);
        r
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.push((key.to_string(), value.into()));
    }

    pub fn witness(&mut self, description: String, replay: Option<String>) {
        self.witnesses.push(Witness { description, replay });
    }

    pub fn to_json(&self) -> Value {
        let mut details = Map::new();
        for (k, v) in &self.details {
            details.insert(k.clone(), v.clone());
        }
        let mut out = json!({
            "command": self.command,
            "cutoffs": { "arity": self.arity_cutoff, "energy": self.energy_cutoff },
            "verdict": self.verdict.as_str(),
            "witnesses": self.witnesses.iter().map(|w| json!({ "description": w.description, "replay": w.replay })).collect::<Vec<_>>(),
            "details": details,
        });
        if let Some(t) = self.timing_ms {
            out["timing_ms"] = json!(t);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        if let Some(k) = self.arity_cutoff {
            s += &format!("arity cutoff: {k}\n");
        }
        if let Some(e) = &self.energy_cutoff {
            s += &format!("energy cutoff: {e}\n");
        }
        s += &format!("verdict: {}\n", self.verdict.as_str());
        for (k, v) in &self.details {
            s += &format!("{k}: {}\n", text_value(v));
        }
        if !self.witnesses.is_empty() {
            s += &format!("witnesses ({}):\n", self.witnesses.len());
            for w in &self.witnesses {
                s += &format!("  - {}\n", w.description);
                if let Some(r) = &w.replay {
                    s += &format!("    replay: {r}\n");
                }
            }
        }
        if let Some(t) = self.timing_ms {
            s += &format!("timing: {t} ms\n");
        }
        s
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_are_stable() {
        let mut r = Report::new("validate");
        r.arity_cutoff = Some(3);
        r.energy_cutoff = Some("2".into());
        r.detail("relations_violated", 0);
        let text = r.render(Format::Text);
        assert_eq!(text, "command: validate\narity cutoff: 3\nenergy cutoff: 2\nverdict: PASS\nrelations_violated: 0\n");
        let j: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(j["verdict"], "PASS");
        assert_eq!(j["cutoffs"]["arity"], 3);
        assert!(j.get("timing_ms").is_none());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Verdict::Pass.exit_code(), 0);
        assert_eq!(Verdict::Fail.exit_code(), 1);
        assert_eq!(Verdict::Error.exit_code(), 2);
        assert_eq!(Verdict::Exhausted.exit_code(), 3);
    }
}
