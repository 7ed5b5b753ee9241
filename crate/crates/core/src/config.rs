//! `key = value` run configuration files.
//!
//! One setting per line; `#` starts a comment; blank lines are ignored.
//! Keys are flag names without the leading dashes (`n = 10`, `q = 1/4`,
//! `graph = host.g6`). Underscores in keys are read as dashes.

use std::collections::BTreeMap;

use crate::error::{Error, Location, Result};

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = Location::Line(i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(at, "expected key = value"))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(Error::parse(at, format!("bad key {key:?}")));
        }
        if value.is_empty() {
            return Err(Error::parse(at, format!("missing value for {key}")));
        }
        if out.insert(key.clone(), value.to_string()).is_some() {
            return Err(Error::parse(at, format!("duplicate key {key}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_settings() {
        let c = parse_config("# run\nn = 10\nq=1/4  # threshold\n\nhost_cap = 6\n").unwrap();
        assert_eq!(c["n"], "10");
        assert_eq!(c["q"], "1/4");
        assert_eq!(c["host-cap"], "6");
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_config("n = 10\nbogus\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_config("n = 1\nn = 2").is_err());
        assert!(parse_config("n =").is_err());
        assert!(parse_config("a b = 1").is_err());
    }
}
