//! Reports: a free-form human block followed by a fenced `machine` block of
//! `key=value` lines in insertion order.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value as Json;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub human: Vec<String>,
    pub machine: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            human: Vec::new(),
            machine: vec![("command".into(), command.to_string())],
        }
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.human.push(s.into());
        self
    }

    /// Adds a machine entry; newlines in `value` are escaped.
    pub fn kv(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        let v = value.to_string().replace('\\', "\\\\").replace('\n', "\\n");
        self.machine.push((key.to_string(), v));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.machine.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.command)?;
        for l in &self.human {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "```machine")?;
        for (k, v) in &self.machine {
            writeln!(f, "{k}={v}")?;
        }
        writeln!(f, "```")
    }
}

/// Named string arguments of one command invocation.
#[derive(Debug, Clone, Default)]
pub struct Args(pub BTreeMap<String, String>);

impl Args {
    pub fn from_json(map: &BTreeMap<String, Json>) -> Self {
        Args(
            map.iter()
                .map(|(k, v)| {
                    let s = match v {
                        Json::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (k.clone(), s)
                })
                .collect(),
        )
    }

    pub fn set(&mut self, key: &str, value: Option<impl ToString>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v.to_string());
        }
    }

    pub fn req(&self, key: &str) -> Result<&str, CliError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::MissingArg(key.to_string()))
    }

    pub fn opt(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.opt(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Resolve(format!("argument `{key}`: cannot parse `{s}`"))),
        }
    }
}

/// `N,D`: p-adic precision and degree cut-off.
pub fn parse_precision(s: &str) -> Result<(i64, u32), String> {
    let (n, d) = s.split_once(',').ok_or_else(|| format!("expected N,D, got `{s}`"))?;
    let n: i64 = n.trim().parse().map_err(|_| format!("bad N in `{s}`"))?;
    let d: u32 = d.trim().parse().map_err(|_| format!("bad D in `{s}`"))?;
    if n <= 0 || d == 0 {
        return Err(format!("precision must be positive, got `{s}`"));
    }
    Ok((n, d))
}
