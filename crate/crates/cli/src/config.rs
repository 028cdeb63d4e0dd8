//! Flat `key = value` config files, spliced into the command line.
//!
//! Keys are flag names without the leading dashes. Entries land directly
//! after the subcommand, so anything given explicitly on the command line
//! comes later and wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub const SUBCOMMANDS: [&str; 9] = [
    "photon-dist",
    "mandel",
    "skew",
    "quad-squeeze",
    "as-squeeze",
    "wigner",
    "kerr-sim",
    "reproduce-figures",
    "validate",
];

/// Turns config text into flag tokens. `key = true` becomes a bare flag, `key = false` is dropped.
pub fn config_args(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = key.trim().trim_start_matches('-');
        let value = value.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: invalid key '{key}'", lineno + 1));
        }
        if key == "config" {
            continue;
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            v => out.push(format!("--{key}={v}")),
        }
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Result<Option<OsString>, String> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return it.next().cloned().map(Some).ok_or_else(|| "--config needs a path".to_string());
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some(p.into()));
        }
        if s == "--" {
            break;
        }
    }
    Ok(None)
}

/// Reads `--config FILE` if present and returns the expanded argument list.
pub fn expand_args(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let extra = config_args(&text)?;
    let Some(pos) = argv.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        return Ok(argv);
    };
    let mut out = argv[..=pos].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}
