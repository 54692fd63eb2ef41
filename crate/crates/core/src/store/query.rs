//! The three lookups: Q_l-orbits of a Q-orbit, strong weight lowering, and
//! export of prime-indexed Hecke polynomials.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Ratio;

use super::entities::{EigenformRecord, Entity, PolyExport};
use super::keys::{EigenformKey, Endpoint, OrbitKey, QOrbitKey};
use super::{write_atomic, Store};
use crate::arith::primes::primes_in;
use crate::congruence::{Congruence, Kind};
use crate::error::{Error, Result};
use crate::hecke::UnresolvedBlock;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlAnswer {
    pub eigenforms: Vec<EigenformRecord>,
    /// l-adic orbits whose splitting could not be finished below the cap.
    pub unresolved: Vec<(OrbitKey, UnresolvedBlock)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoweringStatus {
    Found,
    /// No stored eigenform, not even the input, is congruent mod l^n.
    NoneAttains,
    /// Strong records missing for these (input, candidate) pairs.
    Incomplete(Vec<(EigenformKey, EigenformKey)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoweringMatch {
    pub source: EigenformKey,
    pub target: EigenformKey,
    pub weight: u32,
    /// Normalised exponent; `at_least` when every compared defect vanished.
    pub exponent: Ratio<u64>,
    pub at_least: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightLowering {
    pub status: LoweringStatus,
    /// Matches of the smallest weight, ordered by (target, source).
    pub matches: Vec<LoweringMatch>,
}

impl Store {
    /// All Q_l-orbits stored under `key` for `l`.
    pub fn query_ql_orbits(&self, key: QOrbitKey, ell: u64) -> Result<QlAnswer> {
        let orbits = self.orbits(key, ell)?;
        let mut eigenforms = Vec::new();
        let mut unresolved = Vec::new();
        for o in orbits {
            for j in 1..=o.eigenforms {
                eigenforms.push(self.eigenform(o.key.eigenform(j))?);
            }
            if let Some(u) = o.unresolved {
                unresolved.push((o.key, u));
            }
        }
        Ok(QlAnswer { eigenforms, unresolved })
    }

    /// Stored eigenforms of the same level that are strongly congruent to
    /// one of the input's Q_l-orbits modulo l^n (normalised), restricted to
    /// the smallest weight that occurs. Each input eigenform counts as
    /// congruent to itself to at least its precision.
    pub fn query_weight_lowering(&self, key: QOrbitKey, ell: u64, n: Ratio<u64>) -> Result<WeightLowering> {
        let sources = self.eigenforms(key, ell)?;
        let strong = self.strong_index()?;
        let mut missing = Vec::new();
        let mut found = Vec::new();
        for src in &sources {
            let own = Ratio::from_integer(src.eigenform.precision() as u64);
            if own >= n {
                found.push(LoweringMatch { source: src.key, target: src.key, weight: key.weight, exponent: own, at_least: true });
            }
        }
        for other in self.qorbits_of_level(key.level)? {
            if other == key || !self.computed_ells(other)?.contains(&ell) {
                continue;
            }
            for tgt in self.eigenforms(other, ell)? {
                for src in &sources {
                    let Some(c) = strong.get(&ordered(src.key, tgt.key)) else {
                        missing.push((src.key, tgt.key));
                        continue;
                    };
                    let exponent = c.exponent_normalised();
                    if exponent >= n {
                        found.push(LoweringMatch {
                            source: src.key,
                            target: tgt.key,
                            weight: other.weight,
                            exponent,
                            at_least: !c.exponent.is_exact(),
                        });
                    }
                }
            }
        }
        if !missing.is_empty() {
            missing.sort();
            return Ok(WeightLowering { status: LoweringStatus::Incomplete(missing), matches: Vec::new() });
        }
        let Some(min) = found.iter().map(|m| m.weight).min() else {
            return Ok(WeightLowering { status: LoweringStatus::NoneAttains, matches: Vec::new() });
        };
        let mut matches: Vec<_> = found.into_iter().filter(|m| m.weight == min).collect();
        matches.sort_by_key(|m| (m.target, m.source));
        Ok(WeightLowering { status: LoweringStatus::Found, matches })
    }

    fn qorbits_of_level(&self, level: u64) -> Result<Vec<QOrbitKey>> {
        Ok(self.all_qorbits()?.into_iter().filter(|k| k.level == level).collect())
    }

    /// Strong records by unordered endpoint pair; of several records for one
    /// pair, the one with the largest bound, then precision.
    fn strong_index(&self) -> Result<BTreeMap<(EigenformKey, EigenformKey), Congruence>> {
        let mut out: BTreeMap<_, Congruence> = BTreeMap::new();
        for (_, rec) in self.congruences()? {
            let (Endpoint::Eigenform(a), Endpoint::Eigenform(b)) = (rec.left, rec.right) else { continue };
            if rec.congruence.kind != Kind::Strong {
                continue;
            }
            let c = rec.congruence;
            let slot = out.entry(ordered(a, b)).or_insert_with(|| c.clone());
            if (c.bound, c.precision) > (slot.bound, slot.precision) {
                *slot = c;
            }
        }
        Ok(out)
    }

    /// Write one POLY file per stored Q_l-orbit into `out`: the
    /// characteristic polynomial of T_p on the orbit for each prime in
    /// `primes` (default: all p up to the bound).
    pub fn export_hecke_polynomials(
        &self,
        key: QOrbitKey,
        ell: u64,
        primes: Option<std::ops::Range<u64>>,
        out: &Path,
    ) -> Result<Vec<PathBuf>> {
        let mut paths = Vec::new();
        for rec in self.eigenforms(key, ell)? {
            let f = &rec.eigenform;
            let range = primes.clone().unwrap_or(2..f.bound() + 1);
            let mut polys = Vec::new();
            for p in primes_in(range.start, range.end) {
                let cp = f.charpoly(p).ok_or(Error::BoundExceeded { requested: p, available: f.bound() })?;
                polys.push((p, cp));
            }
            let export = PolyExport { key: rec.key, precision: f.precision(), primes: polys };
            fs::create_dir_all(out)?;
            let path = out.join(format!("{}.poly", rec.key.to_string().replace('/', "_")));
            write_atomic(&path, &export.to_text())?;
            paths.push(path);
        }
        Ok(paths)
    }
}

fn ordered(a: EigenformKey, b: EigenformKey) -> (EigenformKey, EigenformKey) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
