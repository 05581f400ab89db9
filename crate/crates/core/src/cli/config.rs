//! `key = value` config files expanded into command-line flags.

use std::path::Path;

/// Parses a config file body into flag tokens. `key = true` becomes a bare
/// `--key`, `key = false` is dropped.
pub fn parse_config(text: &str) -> Result<Vec<String>, String> {
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || key.starts_with('-') || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: bad key {key:?}", i + 1));
        }
        if key == "config" {
            return Err(format!("config line {}: nested config files are not supported", i + 1));
        }
        match value {
            "true" => tokens.push(format!("--{key}")),
            "false" => {}
            _ => {
                tokens.push(format!("--{key}"));
                tokens.push(value.to_string());
            }
        }
    }
    Ok(tokens)
}

/// Finds `--config PATH` / `--config=PATH` among the arguments.
fn config_path(args: &[String]) -> Option<Result<&str, String>> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return Some(it.next().map(String::as_str).ok_or_else(|| "--config needs a path".into()));
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(Ok(p));
        }
    }
    None
}

/// Inserts the config file's flags right after the subcommand, so that flags
/// given on the command line (which come later) override them.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = path?;
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    let tokens = parse_config(&text)?;
    let at = if args.len() > 1 && !args[1].starts_with('-') { 2 } else { 1 };
    let mut out = args[..at].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
