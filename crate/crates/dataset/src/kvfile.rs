//! The project's plain-text config/manifest format: UTF-8 `[section]`
//! headers over `key = value` lines. `#` starts a comment; blank lines are
//! ignored. Section and key order is preserved so emitted files are
//! byte-deterministic.

use crate::error::DatasetError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KvSection {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl KvSection {
    pub fn new(name: &str) -> KvSection {
        KvSection { name: name.to_string(), entries: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, DatasetError> {
        self.get(key).ok_or_else(|| DatasetError::MissingKey {
            section: self.name.clone(),
            key: key.to_string(),
        })
    }

    pub fn bad_value(&self, key: &str, value: &str) -> DatasetError {
        DatasetError::BadValue {
            section: self.name.clone(),
            key: key.to_string(),
            value: value.to_string(),
        }
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, DatasetError> {
        let raw = self.require(key)?;
        raw.parse().map_err(|_| self.bad_value(key, raw))
    }

    /// Parse a fixed number of whitespace-separated floats.
    pub fn parse_floats<const N: usize>(&self, key: &str) -> Result<[f64; N], DatasetError> {
        let raw = self.require(key)?;
        let parts: Vec<&str> = raw.split_whitespace().collect();
        if parts.len() != N {
            return Err(self.bad_value(key, raw));
        }
        let mut out = [0.0; N];
        for (slot, part) in out.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| self.bad_value(key, raw))?;
        }
        Ok(out)
    }

    /// Error if any key is not in the allowed list (fail-fast on typos).
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<(), DatasetError> {
        for (k, _) in &self.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(DatasetError::UnknownKey {
                    section: self.name.clone(),
                    key: k.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KvFile {
    pub sections: Vec<KvSection>,
}

impl KvFile {
    pub fn section(&self, name: &str) -> Option<&KvSection> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require_section(&self, name: &str) -> Result<&KvSection, DatasetError> {
        self.section(name).ok_or_else(|| DatasetError::MissingKey {
            section: name.to_string(),
            key: "(whole section)".to_string(),
        })
    }

    pub fn parse(text: &str) -> Result<KvFile, DatasetError> {
        let mut sections: Vec<KvSection> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                sections.push(KvSection::new(name.trim()));
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(DatasetError::Format {
                    file: "(config text)".to_string(),
                    reason: format!("line {}: expected `key = value` or `[section]`", ln + 1),
                });
            };
            let Some(section) = sections.last_mut() else {
                return Err(DatasetError::Format {
                    file: "(config text)".to_string(),
                    reason: format!("line {}: key before any [section]", ln + 1),
                });
            };
            section.push(key.trim(), value.trim());
        }
        Ok(KvFile { sections })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push('[');
            out.push_str(&s.name);
            out.push_str("]\n");
            for (k, v) in &s.entries {
                out.push_str(k);
                out.push_str(" = ");
                out.push_str(v);
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_order_and_values() {
        let text = "[alpha]\na = 1\nb = two words\n\n[beta]\nc = -0.25\n";
        let kv = KvFile::parse(text).unwrap();
        assert_eq!(kv.to_text(), text);
        assert_eq!(kv.section("alpha").unwrap().get("b"), Some("two words"));
        let c: f64 = kv.section("beta").unwrap().parse("c").unwrap();
        assert_eq!(c, -0.25);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let kv = KvFile::parse("# header\n[s]\n# note\nx = 3\n\n").unwrap();
        assert_eq!(kv.section("s").unwrap().get("x"), Some("3"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let kv = KvFile::parse("[s]\nx = 3\ntypo = 4\n").unwrap();
        let err = kv.section("s").unwrap().reject_unknown(&["x"]).unwrap_err();
        assert!(matches!(err, DatasetError::UnknownKey { .. }));
    }

    #[test]
    fn keys_outside_sections_are_errors() {
        assert!(KvFile::parse("x = 3\n").is_err());
        assert!(KvFile::parse("[s]\nbroken line\n").is_err());
    }
}
