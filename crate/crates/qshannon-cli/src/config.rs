//! JSON config files hold the same keys as the long command-line options
//! (without the leading dashes). Explicit flags always win; keys the invoked
//! subcommand never looks at are rejected as usage errors so typos don't
//! silently change nothing.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{Map, Value};

use crate::CliError;

pub struct Config {
    values: Map<String, Value>,
    seen: RefCell<BTreeSet<String>>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let values = match path {
            None => Map::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(map)) => map,
                    Ok(_) => {
                        return Err(CliError::Usage(format!(
                            "config {} must be a JSON object",
                            p.display()
                        )))
                    }
                    Err(e) => {
                        return Err(CliError::Usage(format!(
                            "config {} is not valid JSON: {e}",
                            p.display()
                        )))
                    }
                }
            }
        };
        Ok(Config {
            values,
            seen: RefCell::new(BTreeSet::new()),
        })
    }

    /// Flag value if given, else the config value rendered as a string.
    pub fn merge(&self, flag: Option<String>, key: &str) -> Option<String> {
        self.seen.borrow_mut().insert(key.to_string());
        flag.or_else(|| self.values.get(key).map(render))
    }

    pub fn require(&self, flag: Option<String>, key: &str) -> Result<String, CliError> {
        self.merge(flag, key)
            .ok_or_else(|| CliError::Usage(format!("missing required parameter --{key}")))
    }

    /// After all lookups: any config key never consulted is a usage error.
    pub fn reject_unknown(&self) -> Result<(), CliError> {
        let seen = self.seen.borrow();
        let unknown: Vec<&String> = self
            .values
            .keys()
            .filter(|k| !seen.contains(k.as_str()))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "config keys not used by this subcommand: {}",
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
