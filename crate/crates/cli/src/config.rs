//! Flat JSON configuration files, expanded into flags ahead of the command line.

use std::ffi::OsString;
use std::path::PathBuf;

use serde_json::Value;

use crate::CliError;

/// Flags taking a value at the top level, so their values are not mistaken
/// for the subcommand.
const VALUED_GLOBALS: [&str; 2] = ["--config", "--threads"];

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn subcommand_position(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if VALUED_GLOBALS.contains(&s.as_ref()) {
            i += 2;
        } else if s.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

fn scalar(key: &str, v: &Value) -> Result<Option<String>, CliError> {
    match v {
        Value::Number(n) => Ok(Some(n.to_string())),
        Value::String(s) => Ok(Some(s.clone())),
        Value::Null => Ok(None),
        _ => Err(CliError::Config(format!(
            "'{key}' must be a number, string or list of them"
        ))),
    }
}

/// Flags equivalent to a flat JSON object: `{"q_steps": 33}` becomes
/// `--q-steps 33`, `true` becomes a bare switch and lists are comma-joined.
pub fn flags_from_json(text: &str) -> Result<Vec<OsString>, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| CliError::Config("configuration must be a JSON object".into()))?;
    let mut out = Vec::new();
    for (key, v) in object {
        if key == "config" || key == "subcommand" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => out.push(OsString::from(flag)),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|x| scalar(key, x).map(Option::unwrap_or_default))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(OsString::from(format!("{flag}={}", parts.join(","))));
            }
            other => {
                if let Some(s) = scalar(key, other)? {
                    out.push(OsString::from(format!("{flag}={s}")));
                }
            }
        }
    }
    Ok(out)
}

/// Inserts the configuration's flags directly after the subcommand name, so
/// that flags given on the command line, which come later, win.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let flags = flags_from_json(&text)?;
    let Some(pos) = subcommand_position(&argv) else {
        return Ok(argv);
    };
    let mut out = argv[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}
