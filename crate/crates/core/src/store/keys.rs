//! Canonical keys: `L.W.n` for a Q-orbit, `L.W.n/l/i` for its i-th l-adic
//! orbit and `L.W.n/l/i/j` for the j-th eigenform in it (all 1-based).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QOrbitKey {
    pub level: u64,
    pub weight: u32,
    pub number: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    pub qorbit: QOrbitKey,
    pub ell: u64,
    pub factor: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenformKey {
    pub orbit: OrbitKey,
    pub index: u32,
}

/// One side of a congruence record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Orbit(OrbitKey),
    Eigenform(EigenformKey),
}

impl QOrbitKey {
    pub fn new(level: u64, weight: u32, number: u32) -> Self {
        QOrbitKey { level, weight, number }
    }

    pub fn orbit(self, ell: u64, factor: u32) -> OrbitKey {
        OrbitKey { qorbit: self, ell, factor }
    }
}

impl OrbitKey {
    pub fn eigenform(self, index: u32) -> EigenformKey {
        EigenformKey { orbit: self, index }
    }
}

impl EigenformKey {
    pub fn qorbit(&self) -> QOrbitKey {
        self.orbit.qorbit
    }
}

impl Endpoint {
    pub fn qorbit(&self) -> QOrbitKey {
        match self {
            Endpoint::Orbit(o) => o.qorbit,
            Endpoint::Eigenform(f) => f.orbit.qorbit,
        }
    }

    pub fn ell(&self) -> u64 {
        match self {
            Endpoint::Orbit(o) => o.ell,
            Endpoint::Eigenform(f) => f.orbit.ell,
        }
    }
}

impl fmt::Display for QOrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.level, self.weight, self.number)
    }
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.qorbit, self.ell, self.factor)
    }
}

impl fmt::Display for EigenformKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.orbit, self.index)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Orbit(o) => o.fmt(f),
            Endpoint::Eigenform(e) => e.fmt(f),
        }
    }
}

fn bad(s: &str) -> Error {
    Error::Invalid(format!("malformed key `{s}`"))
}

fn positive<T: FromStr + PartialOrd + Default>(s: &str, whole: &str) -> Result<T> {
    let v: T = s.parse().map_err(|_| bad(whole))?;
    if v > T::default() && !s.starts_with('+') && !s.starts_with('0') {
        Ok(v)
    } else {
        Err(bad(whole))
    }
}

impl FromStr for QOrbitKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('.').collect();
        if parts.len() != 3 {
            return Err(bad(s));
        }
        Ok(QOrbitKey { level: positive(parts[0], s)?, weight: positive(parts[1], s)?, number: positive(parts[2], s)? })
    }
}

impl FromStr for Endpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 3 && parts.len() != 4 {
            return Err(bad(s));
        }
        let orbit = OrbitKey { qorbit: parts[0].parse()?, ell: positive(parts[1], s)?, factor: positive(parts[2], s)? };
        if parts.len() == 3 {
            Ok(Endpoint::Orbit(orbit))
        } else {
            Ok(Endpoint::Eigenform(orbit.eigenform(positive(parts[3], s)?)))
        }
    }
}

impl FromStr for OrbitKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse()? {
            Endpoint::Orbit(o) => Ok(o),
            _ => Err(bad(s)),
        }
    }
}

impl FromStr for EigenformKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.parse()? {
            Endpoint::Eigenform(f) => Ok(f),
            _ => Err(bad(s)),
        }
    }
}
