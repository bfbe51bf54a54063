//! The flat configuration grammar:
//!
//! ```text
//! # comment
//! [section]
//! key = value   # trailing comment
//! ```
//!
//! Keys are looked up as `section.key`; keys before the first header have no
//! prefix. Values may be wrapped in double quotes.

use crate::error::{CliError, CliResult};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
pub struct KvEntry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A parsed document, in file order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvDoc {
    /// Section names with the line of their header.
    pub sections: Vec<(String, usize)>,
    pub entries: Vec<KvEntry>,
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
}

pub fn parse(text: &str) -> CliResult<KvDoc> {
    let mut doc = KvDoc::default();
    let mut section: Option<String> = None;
    let mut seen: BTreeMap<(Option<String>, String), usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::at_line(line, "section header is missing `]`"))?
                .trim();
            if name.is_empty() || name.contains(['[', ']']) {
                return Err(CliError::at_line(line, format!("bad section header `{body}`")));
            }
            if let Some((_, first)) = doc.sections.iter().find(|(s, _)| s == name) {
                return Err(CliError::at_line(
                    line,
                    format!("duplicate section [{name}] (first on line {first})"),
                ));
            }
            doc.sections.push((name.to_string(), line));
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| CliError::at_line(line, format!("expected `key = value`, found `{body}`")))?;
        let key = key.trim();
        if !valid_name(key) {
            return Err(CliError::at_line(line, format!("bad key `{key}`")));
        }
        let mut value = value.trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        } else if value.contains('"') {
            return Err(CliError::at_line(line, "unbalanced quotes"));
        }
        if let Some(first) = seen.insert((section.clone(), key.to_string()), line) {
            return Err(CliError::at_line(
                line,
                format!("duplicate key `{key}` (first set on line {first})"),
            ));
        }
        doc.entries.push(KvEntry {
            section: section.clone(),
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    Ok(doc)
}

fn full_key(section: Option<&str>, key: &str) -> String {
    match section {
        Some(s) => format!("{s}.{key}"),
        None => key.to_string(),
    }
}

/// Typed lookups over a set of entries that remember which keys were read,
/// so leftovers can be reported as unknown.
#[derive(Debug)]
pub struct Table {
    items: BTreeMap<String, (String, usize)>,
    used: RefCell<BTreeSet<String>>,
}

impl Table {
    /// All entries keyed `section.key`.
    pub fn from_doc(doc: &KvDoc) -> Self {
        Table {
            items: doc
                .entries
                .iter()
                .map(|e| (full_key(e.section.as_deref(), &e.key), (e.value.clone(), e.line)))
                .collect(),
            used: RefCell::new(BTreeSet::new()),
        }
    }

    /// Entries of one section keyed by bare key.
    pub fn from_section(doc: &KvDoc, section: &str) -> Self {
        Table {
            items: doc
                .entries
                .iter()
                .filter(|e| e.section.as_deref() == Some(section))
                .map(|e| (e.key.clone(), (e.value.clone(), e.line)))
                .collect(),
            used: RefCell::new(BTreeSet::new()),
        }
    }

    /// Sets `key` as if it were written on `line` 0 (command-line overrides).
    pub fn set(&mut self, key: &str, value: &str) {
        self.items.insert(key.to_string(), (value.to_string(), 0));
    }

    pub fn contains(&self, key: &str) -> bool {
        self.items.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<(&str, usize)> {
        let (v, l) = self.items.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some((v.as_str(), *l))
    }

    fn bad(key: &str, line: usize, msg: impl std::fmt::Display) -> CliError {
        if line == 0 {
            CliError::Config(format!("override `{key}`: {msg}"))
        } else {
            CliError::at_line(line, format!("`{key}`: {msg}"))
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Self::bad(key, line, format!("cannot parse `{v}`"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> CliResult<T> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("missing required field `{key}`")))
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.raw(key).map(|(v, _)| v.to_string())
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(Self::bad(key, line, format!("expected true or false, found `{v}`"))),
            },
        }
    }

    /// Comma-separated list of numbers; `inf` is accepted.
    pub fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Self::bad(key, line, format!("cannot parse `{}` as a number", s.trim())))
                })
                .collect::<CliResult<Vec<_>>>()
                .map(Some),
        }
    }

    /// A pair `lo, hi`.
    pub fn pair(&self, key: &str) -> CliResult<Option<(f64, f64)>> {
        let line = self.items.get(key).map(|x| x.1).unwrap_or(0);
        match self.list(key)? {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
            Some(_) => Err(Self::bad(key, line, "expected two comma-separated numbers")),
        }
    }

    /// Line where `key` was set, if anywhere.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.items.get(key).map(|x| x.1)
    }

    /// Errors on the first key nobody asked for.
    pub fn finish(&self) -> CliResult<()> {
        let used = self.used.borrow();
        match self.items.iter().find(|(k, _)| !used.contains(*k)) {
            None => Ok(()),
            Some((k, (_, line))) => Err(Self::bad(k, *line, "unknown key")),
        }
    }
}
