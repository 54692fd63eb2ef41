//! Run configuration: command-line flags over `HECKE_*` environment
//! variables over a TOML file over defaults. The resolved values are
//! logged together with where each came from.

use std::fmt;
use std::ops::Range;
use std::path::PathBuf;

use serde::Deserialize;

use crate::arith::primes::is_prime;
use crate::error::{Error, Result};
use crate::hecke::DEFAULT_PRECISION_CAP;

/// Settings that may come from flags, environment or file.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Partial {
    pub store: Option<PathBuf>,
    pub ell: Option<u64>,
    pub precision: Option<u32>,
    pub bound: Option<u64>,
    pub workers: Option<usize>,
    pub primes: Option<String>,
    pub include_all: Option<bool>,
    pub cap: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Flag,
    Env,
    File,
    Default,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Flag => "flag",
            Source::Env => "env",
            Source::File => "file",
            Source::Default => "default",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandConfig {
    pub store: PathBuf,
    pub ell: Option<u64>,
    pub precision: u32,
    /// Overrides the Sturm bound as the comparison cut-off.
    pub bound: Option<u64>,
    pub workers: usize,
    pub primes: Range<u64>,
    pub include_all: bool,
    pub cap: u32,
    /// (name, value, source) per setting, in a fixed order.
    pub origin: Vec<(&'static str, String, Source)>,
}

pub const ENV_VARS: [(&str, &str); 8] = [
    ("store", "HECKE_STORE"),
    ("ell", "HECKE_ELL"),
    ("precision", "HECKE_PRECISION"),
    ("bound", "HECKE_BOUND"),
    ("workers", "HECKE_WORKERS"),
    ("primes", "HECKE_PRIMES"),
    ("include_all", "HECKE_INCLUDE_ALL"),
    ("cap", "HECKE_CAP"),
];

fn parse_env<T: std::str::FromStr>(var: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Invalid(format!("{var}=`{v}` is not a valid value")))
}

fn parse_bool(var: &str, v: &str) -> Result<bool> {
    match v {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(Error::Invalid(format!("{var}=`{v}` is not a boolean"))),
    }
}

/// Read the `HECKE_*` variables through `env`.
pub fn from_env(env: &dyn Fn(&str) -> Option<String>) -> Result<Partial> {
    let get = |name: &str| ENV_VARS.iter().find(|(n, _)| *n == name).and_then(|(_, var)| env(var).map(|v| (*var, v)));
    let mut p = Partial::default();
    if let Some((_, v)) = get("store") {
        p.store = Some(PathBuf::from(v));
    }
    if let Some((var, v)) = get("ell") {
        p.ell = Some(parse_env(var, &v)?);
    }
    if let Some((var, v)) = get("precision") {
        p.precision = Some(parse_env(var, &v)?);
    }
    if let Some((var, v)) = get("bound") {
        p.bound = Some(parse_env(var, &v)?);
    }
    if let Some((var, v)) = get("workers") {
        p.workers = Some(parse_env(var, &v)?);
    }
    if let Some((_, v)) = get("primes") {
        p.primes = Some(v);
    }
    if let Some((var, v)) = get("include_all") {
        p.include_all = Some(parse_bool(var, &v)?);
    }
    if let Some((var, v)) = get("cap") {
        p.cap = Some(parse_env(var, &v)?);
    }
    Ok(p)
}

pub fn from_file(path: &std::path::Path) -> Result<Partial> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// `lo..hi`, half-open.
pub fn parse_range(s: &str) -> Result<Range<u64>> {
    let bad = || Error::Invalid(format!("prime range `{s}` is not of the form lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let (lo, hi): (u64, u64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..hi)
}

fn pick<T: Clone>(
    origin: &mut Vec<(&'static str, String, Source)>,
    name: &'static str,
    layers: [&Option<T>; 3],
    default: Option<T>,
    show: impl Fn(&T) -> String,
) -> Option<T> {
    let sources = [Source::Flag, Source::Env, Source::File];
    let found = layers.iter().zip(sources).find_map(|(v, s)| v.as_ref().map(|v| (v.clone(), s)));
    let (value, source) = match (found, default) {
        (Some(x), _) => (Some(x.0), x.1),
        (None, d) => (d, Source::Default),
    };
    origin.push((name, value.as_ref().map(&show).unwrap_or_else(|| "unset".into()), source));
    value
}

impl CommandConfig {
    /// Merge the layers and validate the result.
    pub fn resolve(flags: &Partial, env: &Partial, file: &Partial) -> Result<CommandConfig> {
        let mut o = Vec::new();
        let default_workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let store = pick(&mut o, "store", [&flags.store, &env.store, &file.store], Some(PathBuf::from("hecke-store")), |p| {
            p.display().to_string()
        })
        .expect("defaulted");
        let ell = pick(&mut o, "ell", [&flags.ell, &env.ell, &file.ell], None, u64::to_string);
        let precision =
            pick(&mut o, "precision", [&flags.precision, &env.precision, &file.precision], Some(4), u32::to_string)
                .expect("defaulted");
        let bound = pick(&mut o, "bound", [&flags.bound, &env.bound, &file.bound], None, u64::to_string);
        let workers =
            pick(&mut o, "workers", [&flags.workers, &env.workers, &file.workers], Some(default_workers), usize::to_string)
                .expect("defaulted");
        let primes = pick(&mut o, "primes", [&flags.primes, &env.primes, &file.primes], Some("2..100".into()), String::clone)
            .expect("defaulted");
        let include_all =
            pick(&mut o, "include_all", [&flags.include_all, &env.include_all, &file.include_all], Some(false), bool::to_string)
                .expect("defaulted");
        let cap = pick(&mut o, "cap", [&flags.cap, &env.cap, &file.cap], Some(DEFAULT_PRECISION_CAP), u32::to_string)
            .expect("defaulted");
        if let Some(l) = ell {
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        if workers == 0 {
            return Err(Error::Invalid("workers must be at least 1".into()));
        }
        if bound == Some(0) {
            return Err(Error::Invalid("bound must be at least 1".into()));
        }
        if cap < precision {
            return Err(Error::Invalid(format!("precision cap {cap} is below the precision {precision}")));
        }
        let primes = parse_range(&primes)?;
        Ok(CommandConfig { store, ell, precision, bound, workers, primes, include_all, cap, origin: o })
    }

    pub fn ell(&self) -> Result<u64> {
        self.ell.ok_or_else(|| Error::Invalid("this command needs l (--ell or HECKE_ELL)".into()))
    }

    /// One line: `name=value (source)` per setting.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.origin.iter().map(|(n, v, s)| format!("{n}={v} ({s})")).collect();
        parts.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flag_env_file_default() {
        let flags = Partial { ell: Some(5), ..Default::default() };
        let env = from_env(&|k| match k {
            "HECKE_ELL" => Some("7".into()),
            "HECKE_PRECISION" => Some("6".into()),
            _ => None,
        })
        .unwrap();
        let file: Partial = toml::from_str("precision = 8\nworkers = 3\nprimes = \"10..20\"\n").unwrap();
        let c = CommandConfig::resolve(&flags, &env, &file).unwrap();
        assert_eq!((c.ell, c.precision, c.workers, c.primes.clone()), (Some(5), 6, 3, 10..20));
        assert!(!c.include_all);
        let d = c.describe();
        assert!(d.contains("ell=5 (flag)") && d.contains("precision=6 (env)") && d.contains("workers=3 (file)"), "{d}");
        assert!(d.contains("cap=64 (default)"));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let none = Partial::default();
        let bad_ell = Partial { ell: Some(6), ..Default::default() };
        assert!(matches!(CommandConfig::resolve(&bad_ell, &none, &none), Err(Error::NotPrime(6))));
        assert!(from_env(&|k| (k == "HECKE_WORKERS").then(|| "many".into())).is_err());
        assert!(toml::from_str::<Partial>("colour = 1").is_err());
        assert!(parse_range("5..2").is_err());
        assert_eq!(parse_range("0..0").unwrap(), 0..0);
    }
}
