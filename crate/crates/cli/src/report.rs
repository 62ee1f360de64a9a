//! Two renderings of a command's findings: `key: value` for people and
//! `key=value` for scripts.

use clap::ValueEnum;
use condprob_core::coherence::ExtensionInterval;
use condprob_core::rational::format_fraction;
use condprob_core::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Entry {
    Field(String, String),
    /// Free text, shown only to people.
    Block(String),
    /// A field shown only to scripts.
    Machine(String, String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Field(key.into(), value.into()));
        self
    }

    pub fn machine_field(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Machine(key.into(), value.into()));
        self
    }

    pub fn block(&mut self, text: impl Into<String>) -> &mut Self {
        self.entries.push(Entry::Block(text.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (e, format) {
                (Entry::Field(k, v), Format::Human) => out.push_str(&format!("{k}: {v}\n")),
                (Entry::Field(k, v) | Entry::Machine(k, v), Format::Machine) => {
                    out.push_str(&format!("{}={v}\n", k.replace(' ', "_")));
                }
                (Entry::Block(text), Format::Human) => {
                    out.push_str(text);
                    if !text.ends_with('\n') {
                        out.push('\n');
                    }
                }
                (Entry::Block(_), Format::Machine) | (Entry::Machine(..), Format::Human) => {}
            }
        }
        out
    }
}

pub fn fraction(r: &Rational) -> String {
    format_fraction(r)
}

pub fn interval(i: &ExtensionInterval) -> String {
    format!(
        "{}{}, {}{}",
        if i.lo_closed { '[' } else { '(' },
        fraction(&i.lo),
        fraction(&i.hi),
        if i.hi_closed { ']' } else { ')' }
    )
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
