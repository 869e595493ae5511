//! Parameter resolution: command-line flag, then config file, then default.
//!
//! Config files are flat `key = value` lines grouped under `[section]`
//! headers. A key `samples` under `[sweepout.bend]` is looked up as
//! `sweepout.bend.samples`, then `sweepout.samples`, then `samples`.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use waist_core::{Error, Result};

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse { line: i + 1, message: "unterminated section header".into() })?;
            section = name.trim().to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, message: "expected `key = value`".into() })?;
        let key = if section.is_empty() { k.trim().to_string() } else { format!("{section}.{}", k.trim()) };
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

/// Comma-separated list; `a..b` expands to an inclusive integer range.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    let bad = || Error::Usage(format!("bad list `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return (a..=b).map(|x| x.to_string().parse().map_err(|_| bad())).collect();
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

pub struct Params {
    file: BTreeMap<String, String>,
    scope: Vec<String>,
    /// Every resolved value, echoed into the report.
    pub echo: BTreeMap<String, String>,
}

impl Params {
    pub fn new(file: BTreeMap<String, String>, scope: &str) -> Self {
        let parts: Vec<&str> = scope.split('.').collect();
        let scope = (1..=parts.len()).rev().map(|i| parts[..i].join(".")).collect();
        Params { file, scope, echo: BTreeMap::new() }
    }

    fn lookup(&self, key: &str) -> Option<&String> {
        self.scope.iter().find_map(|s| self.file.get(&format!("{s}.{key}"))).or_else(|| self.file.get(key))
    }

    fn resolve<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let v = match flag {
            Some(v) => Some(v),
            None => match self.lookup(key) {
                Some(s) => Some(s.parse().map_err(|_| Error::Usage(format!("bad value `{s}` for `{key}`")))?),
                None => None,
            },
        };
        if let Some(v) = &v {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        match self.resolve(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.echo.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        self.resolve(key, flag)
    }

    pub fn req<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T> {
        self.resolve(key, flag)?.ok_or_else(|| Error::Usage(format!("missing required parameter --{key}")))
    }

    /// Seeds are mandatory for stochastic runs.
    pub fn seed(&mut self, flag: Option<u64>) -> Result<u64> {
        self.resolve("seed", flag)?
            .ok_or_else(|| Error::Usage("this run is stochastic: pass --seed or set `seed` in the config".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_precedence() {
        let f = parse_config("seed = 3\n[sweepout]\ntrials = 4\n[sweepout.bend]\ntrials = 5 # inner\n").unwrap();
        let mut p = Params::new(f.clone(), "sweepout.bend");
        assert_eq!(p.get("trials", None, 1usize).unwrap(), 5);
        assert_eq!(p.seed(None).unwrap(), 3);
        assert_eq!(p.get("trials", Some(9usize), 1).unwrap(), 9);
        let mut p = Params::new(f, "sweepout.cup");
        assert_eq!(p.get("trials", None, 1usize).unwrap(), 4);
        assert_eq!(p.get("lines", None, 7usize).unwrap(), 7);
        assert_eq!(p.echo["lines"], "7");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_config("[open\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("a = 1\nnonsense\n"), Err(Error::Parse { line: 2, .. })));
        let mut p = Params::new(BTreeMap::new(), "fill.demo");
        assert!(p.seed(None).is_err());
        assert!(p.req::<usize>("n", None).is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_list::<f64>("0.5, 0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_list::<usize>("a,b").is_err());
    }
}
