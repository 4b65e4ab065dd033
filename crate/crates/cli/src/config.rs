//! Flat `key = value` recipe files merged under explicit flags.
//!
//! Keys are long flag names (underscores may stand in for hyphens). Blank
//! lines and lines starting with `#` are ignored. A key that is also given on
//! the command line is dropped, so explicit flags always win.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Arg, ArgAction, Command};

use crate::CliError;

/// Location of `--config` in `argv`, if any (the last occurrence wins).
fn config_path(argv: &[OsString]) -> Result<Option<PathBuf>, CliError> {
    let mut path = None;
    let mut iter = argv.iter().skip(1);
    while let Some(arg) = iter.next() {
        let Some(s) = arg.to_str() else { continue };
        if s == "--" {
            break;
        }
        if s == "--config" {
            let v = iter
                .next()
                .ok_or_else(|| CliError::Usage("--config requires a path".into()))?;
            path = Some(PathBuf::from(v));
        } else if let Some(v) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(v));
        }
    }
    Ok(path)
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected `key = value`", n + 1))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

fn long_names(arg: &Arg) -> Vec<&str> {
    let mut names: Vec<&str> = arg.get_long().into_iter().collect();
    names.extend(arg.get_all_aliases().unwrap_or_default());
    names
}

fn given(argv: &[OsString], names: &[&str]) -> bool {
    argv.iter().filter_map(|a| a.to_str()).any(|a| {
        names.iter().any(|n| {
            a.strip_prefix("--")
                .is_some_and(|rest| rest == *n || rest.starts_with(&format!("{n}=")))
        })
    })
}

/// Returns `argv` with the config file's flags inserted right after the
/// subcommand name.
pub fn merge(argv: Vec<OsString>, cmd: &Command) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let pairs = parse_pairs(&text)?;

    let Some((pos, sub)) = argv.iter().enumerate().skip(1).find_map(|(i, a)| {
        let s = a.to_str()?;
        cmd.find_subcommand(s).map(|sub| (i, sub))
    }) else {
        // let clap report the missing subcommand
        return Ok(argv);
    };

    let mut injected = Vec::new();
    for (key, value) in pairs {
        if key == "config" {
            return Err(CliError::Usage(
                "config files cannot include `config`".into(),
            ));
        }
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| long_names(a).contains(&key.as_str()))
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown config key `{key}` for `{}`",
                    sub.get_name()
                ))
            })?;
        if given(&argv, &long_names(arg)) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => injected.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "config key `{key}` expects true or false, got `{value}`"
                    )))
                }
            }
        } else {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }

    let mut merged = argv;
    merged.splice(pos + 1..pos + 1, injected);
    Ok(merged)
}
