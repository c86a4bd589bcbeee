//! Deterministic text reports: `key: value` lines in blank-line separated
//! blocks, followed by TSV tables introduced by `#table <name>`.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Block {
    pub entries: Vec<(String, String)>,
}

impl Block {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    /// `(label, sha256 hex)` of every input file.
    pub digests: Vec<(String, String)>,
    pub blocks: Vec<Block>,
    pub tables: Vec<Table>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn add_input(&mut self, label: impl Into<String>, bytes: &[u8]) {
        self.digests.push((label.into(), digest(bytes)));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (label, hash) in &self.digests {
            let _ = writeln!(out, "input {label}: sha256:{hash}");
        }
        for block in &self.blocks {
            out.push('\n');
            for (k, v) in &block.entries {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        for table in &self.tables {
            out.push('\n');
            let _ = writeln!(out, "#table {}", table.name);
            let _ = writeln!(out, "{}", table.header.join("\t"));
            for row in &table.rows {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_blocks_and_tables() {
        let mut r = Report::new("bn number");
        r.add_input("curve", b"component 1 genus 2\n");
        let mut b = Block::new();
        b.push("beta", 26);
        r.blocks.push(b);
        let mut t = Table::new("catalog", &["tuple", "verdict"]);
        t.rows.push(vec!["1,1".into(), "pass".into()]);
        r.tables.push(t);
        let text = r.render();
        assert!(text.starts_with("command: bn number\ninput curve: sha256:"));
        assert!(text.contains("\n\nbeta: 26\n"));
        assert!(text.ends_with("#table catalog\ntuple\tverdict\n1,1\tpass\n"));
        assert_eq!(text, r.render());
    }
}
