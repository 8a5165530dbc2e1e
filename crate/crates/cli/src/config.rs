//! Optional `key = value` settings file. Keys are the long flag names
//! without the leading dashes; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub const KEYS: [&str; 16] = [
    "d",
    "d-min",
    "d-max",
    "steps",
    "p1",
    "p2",
    "n1",
    "n2",
    "grid",
    "tol",
    "seed",
    "out",
    "suite",
    "cutset-literal",
    "draws",
    "refine-iters",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, (usize, String)>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", n + 1));
            }
            if values.insert(key.clone(), (n + 1, value.trim().to_string())).is_some() {
                return Err(format!("line {}: duplicate key '{key}'", n + 1));
            }
        }
        Ok(FileConfig { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        debug_assert!(KEYS.contains(&key));
        match self.values.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| format!("config line {line}: invalid value '{v}' for {key}: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let c = FileConfig::parse("# sweep setup\nd_min = 0.1\nsteps=5 # few\n\ncutset-literal = true\n").unwrap();
        assert_eq!(c.get::<f64>("d-min").unwrap(), Some(0.1));
        assert_eq!(c.get::<usize>("steps").unwrap(), Some(5));
        assert_eq!(c.get::<bool>("cutset-literal").unwrap(), Some(true));
        assert_eq!(c.get::<f64>("p1").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(FileConfig::parse("nonsense").is_err());
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("d = 0.1\nd = 0.2").is_err());
        let c = FileConfig::parse("steps = many").unwrap();
        assert!(c.get::<usize>("steps").unwrap_err().contains("line 1"));
    }
}
