//! Structured run reports.
//!
//! Text form, one record per line:
//!
//! ```text
//! report-version 1
//! command include
//! input p1 sha256:<hex> path/to/p1.txt
//! verdict INCLUDED
//! detail arena-positions 12
//! warning <text>
//! ```
//!
//! Values are escaped (`\\`, `\n`) so every record stays on one line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdict: String,
    /// Ordered key-value pairs; keys contain no whitespace.
    pub details: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

fn unescape(line: usize, s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("bad escape `\\{}`", other.map(String::from).unwrap_or_default()),
                })
            }
        }
    }
    Ok(out)
}

fn bare_token(s: &str) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.split_whitespace().collect::<Vec<_>>().join("_")
    }
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.details.push((bare_token(&key.into()), value.to_string()));
        self
    }

    pub fn warn(&mut self, text: impl Into<String>) -> &mut Self {
        self.warnings.push(text.into());
        self
    }

    pub fn detail_value(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Text form; [`RunReport::parse`] inverts it.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("report-version {REPORT_VERSION}"),
            format!("command {}", escape(&self.command)),
        ];
        for input in &self.inputs {
            lines.push(format!(
                "input {} sha256:{} {}",
                bare_token(&input.name),
                input.sha256,
                escape(&input.path)
            ));
        }
        lines.push(format!("verdict {}", escape(&self.verdict)));
        for (k, v) in &self.details {
            lines.push(format!("detail {k} {}", escape(v)));
        }
        for w in &self.warnings {
            lines.push(format!("warning {}", escape(w)));
        }
        lines.join("\n") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let bad = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        match lines.next() {
            Some((_, l)) if l == format!("report-version {REPORT_VERSION}") => {}
            _ => return Err(bad(1, "expected `report-version 1` header")),
        }
        let mut report = RunReport::default();
        let mut saw_verdict = false;
        for (line, l) in lines {
            if l.is_empty() {
                continue;
            }
            let (tag, rest) = l.split_once(' ').unwrap_or((l, ""));
            match tag {
                "command" => report.command = unescape(line, rest)?,
                "verdict" => {
                    report.verdict = unescape(line, rest)?;
                    saw_verdict = true;
                }
                "warning" => report.warnings.push(unescape(line, rest)?),
                "detail" => {
                    let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                    report.details.push((k.to_string(), unescape(line, v)?));
                }
                "input" => {
                    let mut parts = rest.splitn(3, ' ');
                    let name = parts.next().unwrap_or_default();
                    let digest = parts
                        .next()
                        .and_then(|d| d.strip_prefix("sha256:"))
                        .ok_or_else(|| bad(line, "expected `input name sha256:hex path`"))?;
                    report.inputs.push(InputDigest {
                        name: name.to_string(),
                        sha256: digest.to_string(),
                        path: unescape(line, parts.next().unwrap_or_default())?,
                    });
                }
                _ => return Err(bad(line, "unknown record")),
            }
        }
        if !saw_verdict {
            return Err(bad(text.lines().count(), "missing verdict"));
        }
        Ok(report)
    }
}
