//! Flat `key = value` text with optional `[section]` headers.
//!
//! Keys are consumed with the `take*` methods; [`KvSection::finish`] rejects
//! anything left over so that misspelt keys never pass silently.

use std::collections::BTreeMap;

use crate::error::{domain, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvSection {
    name: String,
    entries: BTreeMap<String, String>,
}

impl KvSection {
    pub fn new(name: impl Into<String>) -> Self {
        KvSection {
            name: name.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| domain(format!("[{}] {key}: expected a number, got `{v}`", self.name)))
            })
            .transpose()
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| domain(format!("[{}] {key}: expected a count, got `{v}`", self.name)))
            })
            .transpose()
    }

    pub fn take_bool(&mut self, key: &str) -> Result<Option<bool>> {
        self.take(key)
            .map(|v| match v.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(domain(format!("[{}] {key}: expected true/false, got `{v}`", self.name))),
            })
            .transpose()
    }

    /// Comma separated list of numbers.
    pub fn take_f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(key)
            .map(|v| parse_f64_list(&v).map_err(|e| domain(format!("[{}] {key}: {e}", self.name))))
            .transpose()
    }

    /// Errors if any key was not consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => Err(domain(format!("unknown key `{k}` in section [{}]", self.name))),
        }
    }
}

pub fn parse_f64_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>().map_err(|_| format!("expected a number, got `{s}`"))
        })
        .collect()
}

/// Parsed document; keys before the first header land in the section `""`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KvDocument {
    sections: BTreeMap<String, KvSection>,
}

impl KvDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = KvDocument::default();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| domain(format!("line {}: malformed section header", lineno + 1)))?
                    .trim();
                current = name.to_string();
                doc.sections
                    .entry(current.clone())
                    .or_insert_with(|| KvSection::new(name));
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| domain(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(domain(format!("line {}: empty key", lineno + 1)));
            }
            let section = doc
                .sections
                .entry(current.clone())
                .or_insert_with(|| KvSection::new(current.clone()));
            if section.entries.contains_key(k) {
                return Err(domain(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
            section.insert(k, v);
        }
        Ok(doc)
    }

    /// Removes and returns a section, empty if absent.
    pub fn take_section(&mut self, name: &str) -> KvSection {
        self.sections.remove(name).unwrap_or_else(|| KvSection::new(name))
    }

    /// Errors if any section still holds keys or was never consumed.
    pub fn finish(self) -> Result<()> {
        for (name, section) in self.sections {
            if !section.is_empty() {
                return Err(domain(format!("unknown section [{name}] or key in it")));
            }
            if !name.is_empty() {
                return Err(domain(format!("unknown section [{name}]")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let text = "top = 1\n[model]\nmodel = classical # comment\ndelta=0.25\n\n[ic]\nr0 = 1\n";
        let mut doc = KvDocument::parse(text).unwrap();
        let mut model = doc.take_section("model");
        assert_eq!(model.take("model").as_deref(), Some("classical"));
        assert_eq!(model.take_f64("delta").unwrap(), Some(0.25));
        model.finish().unwrap();
        let mut ic = doc.take_section("ic");
        assert_eq!(ic.take_f64("r0").unwrap(), Some(1.0));
        ic.finish().unwrap();
        let mut top = doc.take_section("");
        assert_eq!(top.take_usize("top").unwrap(), Some(1));
        top.finish().unwrap();
        doc.finish().unwrap();
    }

    #[test]
    fn leftover_keys_are_errors() {
        let mut doc = KvDocument::parse("[ic]\nr0 = 1\nrO = 2\n").unwrap();
        let mut ic = doc.take_section("ic");
        ic.take("r0");
        assert!(ic.finish().is_err());
        assert!(KvDocument::parse("[x]\na = 1\n").unwrap().finish().is_err());
    }

    #[test]
    fn malformed_input() {
        assert!(KvDocument::parse("just words\n").is_err());
        assert!(KvDocument::parse("[open\n").is_err());
        assert!(KvDocument::parse("a = 1\na = 2\n").is_err());
        let mut s = KvDocument::parse("a = x\n").unwrap().take_section("");
        assert!(s.take_f64("a").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_f64_list("1.0, 1.001,1.01").unwrap(), vec![1.0, 1.001, 1.01]);
        assert!(parse_f64_list("1.0,,2").is_err());
    }
}
