//! Flat `namespace.key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Serialization writes the
//! entries sorted by key, so `parse(serialize(c)) == c`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::CliError;

/// Every key understood by some command.
pub const KNOWN_KEYS: &[&str] = &[
    "env.lambda",
    "env.mu",
    "env.eta",
    "env.q",
    "env.delta",
    "env.k_max",
    "env.seed",
    "env.grid_h",
    "env.window",
    "env.plants",
    "env.background",
    "solver.h",
    "solver.cfl",
    "solver.t_final",
    "solver.radius",
    "solver.radius_override",
    "solver.alpha",
    "solver.boundary",
    "solver.probe",
    "solver.grad_threshold",
    "solver.snapshot",
    "solver.refine",
    "verify.k",
    "verify.center",
    "verify.per_case",
    "verify.per_seam",
    "verify.span",
    "verify.seed",
    "verify.derivative_samples",
    "demo.horizontal",
    "demo.vertical",
    "demo.slack",
    "prob.k",
    "prob.delta",
    "prob.lambda",
    "prob.mu",
    "prob.trials",
    "prob.margin",
    "prob.seed",
    "assumptions.samples",
    "assumptions.points",
    "output.dir",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`, got {raw:?}", n + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// Inserts or overrides one entry; the key must be known.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown configuration key {key:?}")));
        }
        if value.contains('#') || value.contains('\n') {
            return Err(CliError::Config(format!("value of {key} may not contain '#' or newlines")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override {assignment:?} is not `key=value`")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Hex SHA-256 of the serialization.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.serialize().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Typed lookups with defaults. Every key read (with its effective value)
/// is recorded, so the resolved configuration can be written and hashed.
pub struct Resolver<'a> {
    config: &'a Config,
    effective: RefCell<Config>,
}

impl<'a> Resolver<'a> {
    pub fn new(config: &'a Config) -> Self {
        Self { config, effective: RefCell::new(Config::default()) }
    }

    fn record(&self, key: &str, value: String) {
        self.effective.borrow_mut().entries.insert(key.to_string(), value);
    }

    pub fn parsed<T: FromStr + ToString>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let value = match self.config.get(key) {
            Some(raw) => raw.parse::<T>().map_err(|e| CliError::Config(format!("{key} = {raw:?}: {e}")))?,
            None => default,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn text(&self, key: &str, default: &str) -> String {
        let value = self.config.get(key).unwrap_or(default).to_string();
        self.record(key, value.clone());
        value
    }

    /// Comma-separated values; an empty string is an empty list.
    pub fn list<T: FromStr>(&self, key: &str, default: &str) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.text(key, default);
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<T>().map_err(|e| CliError::Config(format!("{key}: {s:?}: {e}"))))
            .collect()
    }

    pub fn point(&self, key: &str, default: &str) -> Result<[f64; 2], CliError> {
        let v: Vec<f64> = self.list(key, default)?;
        match v.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(CliError::Config(format!("{key} must be two comma-separated numbers"))),
        }
    }

    /// The keys read so far with their effective values.
    pub fn effective(&self) -> Config {
        self.effective.borrow().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_overrides() {
        let mut c = Config::parse("# header\nenv.lambda = 40 # trailing\n\n  solver.h=0.5\n").unwrap();
        assert_eq!(c.get("env.lambda"), Some("40"));
        assert_eq!(c.get("solver.h"), Some("0.5"));
        c.apply_override("solver.h=0.25").unwrap();
        assert_eq!(c.get("solver.h"), Some("0.25"));
        assert!(Config::parse("env.lambda 40").is_err());
        assert!(Config::parse("env.lamda = 40").is_err());
    }

    #[test]
    fn resolver_records_defaults() {
        let c = Config::parse("env.mu = 41").unwrap();
        let r = Resolver::new(&c);
        assert_eq!(r.parsed("env.mu", 40.0).unwrap(), 41.0);
        assert_eq!(r.parsed("env.lambda", 40.0).unwrap(), 40.0);
        assert_eq!(r.list::<u32>("prob.k", "1, 2,3").unwrap(), vec![1, 2, 3]);
        assert_eq!(r.effective().serialize(), "env.lambda = 40\nenv.mu = 41\nprob.k = 1, 2,3\n");
        assert!(r.parsed::<f64>("env.mu", 0.0).is_ok());
        let bad = Config::parse("env.k_max = six").unwrap();
        assert!(Resolver::new(&bad).parsed("env.k_max", 6u32).is_err());
    }

    #[test]
    fn hash_is_stable_hex() {
        let c = Config::parse("env.seed = 3").unwrap();
        let h = c.hash();
        assert_eq!(h.len(), 64);
        assert_eq!(h, Config::parse("env.seed=3\n").unwrap().hash());
        assert_ne!(h, Config::parse("env.seed = 4").unwrap().hash());
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::btree_map(0usize..KNOWN_KEYS.len(), "[a-z0-9.,:@ -]{0,12}", 0..12)) {
            let mut c = Config::default();
            for (i, v) in &values {
                c.set(KNOWN_KEYS[*i], v.trim()).unwrap();
            }
            let again = Config::parse(&c.serialize()).unwrap();
            prop_assert_eq!(&again, &c);
            prop_assert_eq!(again.serialize(), c.serialize());
        }
    }
}
