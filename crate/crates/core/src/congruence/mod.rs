//! Congruence exponents between eigenforms and l-adic orbits, level-raising
//! witnesses and the deduplicated parallel sweep.

pub mod plan;
pub mod sweep;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_integer::Integer;

use crate::arith::local_ring::{RingElement, Valuation};
use crate::error::{Error, Result};
use crate::hecke::{EllAdicOrbit, PadicEigenform};
use crate::store::keys::Endpoint;

pub use plan::{DualTable, StrongPlan, WeakPlan};
pub use sweep::{congruence_sweep, pair_congruence, Pair, SweepOptions, SweepOutcome, SweepStats};
pub use witness::{level_raising_witnesses, Witness, WitnessReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Weak,
    Strong,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Weak => "weak",
            Kind::Strong => "strong",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Kind::Weak),
            "strong" => Ok(Kind::Strong),
            _ => Err(Error::Invalid(format!("unknown congruence kind `{s}`"))),
        }
    }
}

/// Which coefficient indices take part in a comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexPolicy {
    All,
    /// Only n coprime to the modulus.
    CoprimeTo(u64),
}

impl IndexPolicy {
    /// `All` within one space; otherwise indices coprime to l and every
    /// level, unless `include_all` is set.
    pub fn for_levels(ell: u64, left_level: u64, right_level: u64, include_all: bool) -> Self {
        if include_all || left_level == right_level {
            IndexPolicy::All
        } else {
            IndexPolicy::CoprimeTo(ell * left_level.lcm(&right_level))
        }
    }

    pub fn admits(&self, n: u64) -> bool {
        match self {
            IndexPolicy::All => true,
            IndexPolicy::CoprimeTo(m) => n.gcd(m) == 1,
        }
    }

    pub fn indices(&self, bound: u64) -> Vec<u64> {
        (1..=bound).filter(|&n| self.admits(n)).collect()
    }
}

impl fmt::Display for IndexPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexPolicy::All => f.write_str("all"),
            IndexPolicy::CoprimeTo(m) => write!(f, "coprime {m}"),
        }
    }
}

impl FromStr for IndexPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(IndexPolicy::All);
        }
        s.strip_prefix("coprime ")
            .and_then(|m| m.parse().ok())
            .filter(|&m: &u64| m > 0)
            .map(IndexPolicy::CoprimeTo)
            .ok_or_else(|| Error::Invalid(format!("unknown index policy `{s}`")))
    }
}

/// Outcome of comparing two objects coefficient by coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub kind: Kind,
    /// Minimum over compared indices, in lambda-units of the ring in which
    /// the comparison took place. At-least iff every defect vanished.
    pub exponent: Valuation,
    pub bound: u64,
    pub precision: u32,
    pub policy: IndexPolicy,
    /// n -> valuation of the n-th defect.
    pub breakdown: BTreeMap<u64, Valuation>,
}

impl Congruence {
    pub fn exponent_normalised(&self) -> Ratio<u64> {
        self.exponent.normalised()
    }
}

/// A congruence between two stored objects. Weak records compare an
/// eigenform with an l-adic orbit, strong records two eigenforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceRecord {
    pub left: Endpoint,
    pub right: Endpoint,
    pub congruence: Congruence,
}

impl CongruenceRecord {
    pub fn new(left: Endpoint, right: Endpoint, congruence: Congruence) -> Result<Self> {
        let ok = match (congruence.kind, left, right) {
            (Kind::Weak, Endpoint::Eigenform(_), Endpoint::Orbit(_)) => true,
            (Kind::Strong, Endpoint::Eigenform(_), Endpoint::Eigenform(_)) => true,
            _ => false,
        };
        if !ok || left.ell() != right.ell() {
            return Err(Error::Invalid(format!("{} congruence cannot relate {left} and {right}", congruence.kind)));
        }
        Ok(CongruenceRecord { left, right, congruence })
    }
}

/// Combine per-index valuations (one entry per comparison ring) into a
/// congruence: the minimum over indices in each ring, then the best ring.
pub fn assemble(
    kind: Kind,
    bound: u64,
    precision: u32,
    policy: IndexPolicy,
    items: &BTreeMap<u64, Vec<Valuation>>,
) -> Result<Congruence> {
    let width = items.values().next().map(Vec::len).ok_or_else(|| {
        Error::Invalid(format!("no coefficient index up to {bound} is admitted by policy `{policy}`"))
    })?;
    if width == 0 || items.values().any(|v| v.len() != width) {
        return Err(Error::internal("inconsistent number of comparison rings"));
    }
    let mut best: Option<(usize, Valuation)> = None;
    for j in 0..width {
        let v = items.values().map(|row| row[j]).reduce(Valuation::min).expect("nonempty");
        let better = match best {
            None => true,
            Some((_, b)) => ring_preference(&v, &b) == std::cmp::Ordering::Greater,
        };
        if better {
            best = Some((j, v));
        }
    }
    let (j, exponent) = best.expect("width is positive");
    let breakdown = items.iter().map(|(&n, row)| (n, row[j])).collect();
    Ok(Congruence { kind, exponent, bound, precision, policy, breakdown })
}

/// Larger normalised value wins, then at-least over exact, then the smaller
/// ramification index.
fn ring_preference(a: &Valuation, b: &Valuation) -> std::cmp::Ordering {
    a.normalised()
        .cmp(&b.normalised())
        .then((!a.is_exact()).cmp(&!b.is_exact()))
        .then(b.e.cmp(&a.e))
}

/// Weak congruence of the coefficient list `g` against an l-adic orbit.
pub fn congruence_exponent_weak(
    g: &[RingElement],
    orbit: &EllAdicOrbit,
    bound: u64,
    policy: IndexPolicy,
) -> Result<Congruence> {
    WeakPlan::new(g, &orbit.into(), bound, policy)?.run()
}

/// Strong congruence between two eigenforms, maximised over embeddings into
/// a common ring.
pub fn congruence_exponent_strong(
    f: &PadicEigenform,
    g: &PadicEigenform,
    bound: u64,
    policy: IndexPolicy,
) -> Result<Congruence> {
    StrongPlan::new(f, g, bound, policy)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies() {
        assert_eq!(IndexPolicy::for_levels(5, 11, 11, false), IndexPolicy::All);
        let p = IndexPolicy::for_levels(5, 11, 22, false);
        assert_eq!(p, IndexPolicy::CoprimeTo(110));
        assert_eq!(p.indices(10), vec![1, 3, 7, 9]);
        assert_eq!(IndexPolicy::for_levels(5, 11, 22, true), IndexPolicy::All);
        for p in [IndexPolicy::All, IndexPolicy::CoprimeTo(110)] {
            assert_eq!(p.to_string().parse::<IndexPolicy>().unwrap(), p);
        }
    }

    #[test]
    fn assembly_picks_the_best_ring() {
        let mut items = BTreeMap::new();
        items.insert(1, vec![Valuation::at_least(4, 1), Valuation::at_least(8, 2)]);
        items.insert(2, vec![Valuation::exact(1, 1), Valuation::exact(3, 2)]);
        let c = assemble(Kind::Strong, 2, 4, IndexPolicy::All, &items).unwrap();
        assert_eq!(c.exponent, Valuation::exact(3, 2));
        assert_eq!(c.breakdown[&1], Valuation::at_least(8, 2));
        assert!(assemble(Kind::Weak, 2, 4, IndexPolicy::All, &BTreeMap::new()).is_err());
    }
}
