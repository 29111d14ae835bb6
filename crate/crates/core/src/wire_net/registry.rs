//! Label → message table for the responder.
//!
//! One entry per line: `label hex`, where `hex` is the message packed as
//! m-bit symbols. Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::message::Message;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Registry {
    entries: Vec<(String, Message)>,
}

impl Registry {
    pub fn parse(text: &str, field: Field, k: usize) -> Result<Self> {
        let mut entries: Vec<(String, Message)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(label), Some(hex), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::InvalidParameter(format!(
                    "registry line {}: expected `label hex`",
                    lineno + 1
                )));
            };
            if entries.iter().any(|(l, _)| l == label) {
                return Err(Error::InvalidParameter(format!(
                    "registry line {}: duplicate label {label}",
                    lineno + 1
                )));
            }
            let u = Message::from_hex(field, k, hex).map_err(|e| {
                Error::InvalidParameter(format!("registry line {}: {e}", lineno + 1))
            })?;
            entries.push((label.to_owned(), u));
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>, field: Field, k: usize) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, field, k)
    }

    pub fn insert(&mut self, label: impl Into<String>, u: Message) {
        let label = label.into();
        match self.entries.iter_mut().find(|(l, _)| *l == label) {
            Some(slot) => slot.1 = u,
            None => self.entries.push((label, u)),
        }
    }

    pub fn get(&self, label: &str) -> Option<&Message> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, u)| u)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Message)> {
        self.entries.iter().map(|(l, u)| (l.as_str(), u))
    }

    /// Text form accepted by [`Registry::parse`].
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(l, u)| format!("{l} {}\n", u.to_hex()))
            .collect()
    }
}
