//! Optional `key = value` configuration files, merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key '{key}'", n + 1));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn has_flag(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Strip `--config <file>` from `args` and append the file's settings that no flag overrides.
pub fn merge(mut args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let file = match args[pos].split_once('=') {
        Some((_, f)) => {
            let f = f.to_string();
            args.remove(pos);
            f
        }
        None => {
            if pos + 1 >= args.len() {
                return Err("--config needs a file".into());
            }
            args.remove(pos);
            args.remove(pos)
        }
    };
    let text = std::fs::read_to_string(Path::new(&file)).map_err(|e| format!("reading config {file}: {e}"))?;
    for (key, value) in parse(&text)? {
        if !has_flag(&args, &key) {
            args.push(format!("--{key}={value}"));
        }
    }
    Ok(args)
}
