//! `key = value` configuration files. Each key names a long flag of the
//! chosen subcommand or a global flag; flags given on the command line win.

use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, CommandFactory};

use crate::cli::Cli;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_config(text: &str) -> Result<Vec<Entry>, String> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value", i + 1));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_owned();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(format!("config line {}: duplicate key '{key}'", i + 1));
        }
        entries.push(Entry {
            line: i + 1,
            key,
            value,
        });
    }
    Ok(entries)
}

/// Position of the config path in `argv`, if any.
fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_owned());
        }
    }
    None
}

/// Returns `argv` extended with flags for every config entry that the
/// command line does not already set.
pub fn merge(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let entries = parse_config(&text)?;

    let root = Cli::command();
    let matches = root
        .clone()
        .try_get_matches_from(&argv)
        .map_err(|e| e.to_string())?;
    let (mut command, mut leaf): (&clap::Command, &ArgMatches) = (&root, &matches);
    let mut path_names = Vec::new();
    while let Some((name, sub)) = leaf.subcommand() {
        command = command
            .find_subcommand(name)
            .expect("matched subcommand exists");
        leaf = sub;
        path_names.push(name.to_owned());
    }

    let mut extra = Vec::new();
    for e in entries {
        let arg = command
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()) && a.get_id() != "config");
        let Some(arg) = arg else {
            return Err(format!(
                "config line {}: unknown key '{}' for '{}'",
                e.line,
                e.key,
                path_names.join(" ")
            ));
        };
        if leaf.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" => extra.push(format!("--{}", e.key)),
                "false" => {}
                other => {
                    return Err(format!(
                        "config line {}: '{}' expects true or false, got '{other}'",
                        e.line, e.key
                    ))
                }
            },
            _ => extra.push(format!("--{}={}", e.key, e.value)),
        }
    }
    let mut merged = argv;
    if let Some(pos) = merged.iter().position(|a| a == "--") {
        merged.splice(pos..pos, extra);
    } else {
        merged.extend(extra);
    }
    Ok(merged)
}
