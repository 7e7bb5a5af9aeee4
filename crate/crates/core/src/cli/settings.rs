//! Flag values merged over an optional `key=value` config file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

/// Keys accepted on the command line and in config files.
pub const KEYS: &[&str] = &[
    "order",
    "n",
    "lambda",
    "z",
    "theta",
    "window",
    "taylor-order",
    "strategy",
    "modes",
    "summation",
    "abel-r",
    "tolerance",
    "format",
    "out",
    "rho",
];

/// Raw string values by key, flags taking precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn canonical(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    /// Parse config text: one `key = value` per line, `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", i + 1))
            })?;
            let key = canonical(k);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    i + 1
                )));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse_config(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(canonical(key), value.into());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }

    pub fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|e| CliError::Usage(format!("--{key} {s}: {e}"))),
        }
    }

    pub fn real(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_real(s).map_err(|e| CliError::Usage(format!("--{key}: {e}"))),
        }
    }

    pub fn reals(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => {
                parse_list(s, parse_real).map_err(|e| CliError::Usage(format!("--{key}: {e}")))
            }
        }
    }

    pub fn integers(&self, key: &str, default: &[i64]) -> Result<Vec<i64>, CliError> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => parse_list(s, |t| t.parse::<i64>().map_err(|e| format!("'{t}': {e}")))
                .map_err(|e| CliError::Usage(format!("--{key}: {e}"))),
        }
    }

    /// Optional strictly positive tolerance.
    pub fn tolerance(&self) -> Result<Option<f64>, CliError> {
        match self.raw("tolerance") {
            None => Ok(None),
            Some(_) => {
                let t = self.real("tolerance", 0.0)?;
                if t > 0.0 && t.is_finite() {
                    Ok(Some(t))
                } else {
                    Err(CliError::Usage(format!(
                        "--tolerance must be positive, got {t}"
                    )))
                }
            }
        }
    }
}

/// A real number, `pi`, or a ratio `a/b` of those (e.g. `1/3`, `-pi/2`).
pub fn parse_real(s: &str) -> Result<f64, String> {
    fn atom(a: &str) -> Result<f64, String> {
        let a = a.trim();
        let (sign, body) = match a.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, a),
        };
        let v = match body {
            "pi" => std::f64::consts::PI,
            _ => body.parse::<f64>().map_err(|e| format!("'{a}': {e}"))?,
        };
        Ok(sign * v)
    }
    let v = match s.split_once('/') {
        Some((a, b)) => atom(a)? / atom(b)?,
        None => atom(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// Comma-separated list; empty lists are rejected.
pub fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<&str> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if items.is_empty() {
        return Err("empty list".into());
    }
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_comments_and_keys() {
        let s =
            Settings::parse_config("# grid\nlambda = 0, 0.5 # two\n\ntaylor_order=12\n").unwrap();
        assert_eq!(s.reals("lambda", &[]).unwrap(), vec![0.0, 0.5]);
        assert_eq!(s.raw("taylor-order"), Some("12"));
        assert!(Settings::parse_config("bogus=1").is_err());
        assert!(Settings::parse_config("lambda").is_err());
    }

    #[test]
    fn reals() {
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert_eq!(parse_real("-pi/2").unwrap(), -std::f64::consts::FRAC_PI_2);
        assert!(parse_real("1/0").is_err());
        assert!(parse_list("", parse_real).is_err());
    }

    #[test]
    fn tolerance_must_be_positive() {
        let mut s = Settings::default();
        assert_eq!(s.tolerance().unwrap(), None);
        s.set("tolerance", "0");
        assert!(s.tolerance().is_err());
        s.set("tolerance", "1e-30");
        assert_eq!(s.tolerance().unwrap(), Some(1e-30));
    }
}
