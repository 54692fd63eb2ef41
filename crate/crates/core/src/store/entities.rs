//! Stored entities and their text records.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::keys::{EigenformKey, Endpoint, OrbitKey, QOrbitKey};
use super::text::{self, Reader, Writer};
use crate::arith::local_ring::{LocalRing, RingElement};
use crate::congruence::{Congruence, CongruenceRecord, DualTable, IndexPolicy, Kind};
use crate::error::{Error, Result};
use crate::hecke::{PadicEigenform, UnresolvedBlock};
use crate::linalg::Mat;

/// A record with a single canonical text form.
pub trait Entity: Sized {
    const KIND: &'static str;
    fn to_text(&self) -> String;
    fn parse(text: &str, path: &str) -> Result<Self>;
}

/// Space-level data. Dimensions are optional ingest metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceRecord {
    pub level: u64,
    pub weight: u32,
    pub qorbits: u32,
    /// Keys `eisenstein`, `old`, `new` when provided.
    pub dims: BTreeMap<String, u64>,
}

pub const DIM_KEYS: [&str; 3] = ["eisenstein", "old", "new"];

impl Entity for SpaceRecord {
    const KIND: &'static str = "SPACE";

    fn to_text(&self) -> String {
        let mut w = Writer::new(Self::KIND);
        w.field("level", self.level).field("weight", self.weight).field("qorbits", self.qorbits);
        for k in DIM_KEYS {
            if let Some(v) = self.dims.get(k) {
                w.field(&format!("dim.{k}"), v);
            }
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let level = r.get("level")?;
        let weight = r.get("weight")?;
        let qorbits = r.get("qorbits")?;
        let mut dims = BTreeMap::new();
        for k in DIM_KEYS {
            if let Some((_, v)) = r.prefixed(&format!("dim.{k}")) {
                let v = r.decode_last(k, v.parse().ok().filter(|x: &u64| x.to_string() == v))?;
                dims.insert(k.to_string(), v);
            }
        }
        r.finish()?;
        Ok(SpaceRecord { level, weight, qorbits, dims })
    }
}

/// One ingested Hecke matrix file, with its rational decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QOrbitRecord {
    pub key: QOrbitKey,
    pub dim: usize,
    pub bound: u64,
    /// Rank of the Hecke algebra as a Z-module.
    pub algebra_rank: usize,
    pub hmat_sha256: String,
    pub provenance: String,
    /// Base change to the stored basis; only the identity is produced.
    pub lattice: String,
    /// Rank and field polynomial of each factor over Q.
    pub rational: Vec<(usize, Vec<BigInt>)>,
}

impl Entity for QOrbitRecord {
    const KIND: &'static str = "QORBIT";

    fn to_text(&self) -> String {
        let mut w = Writer::new(Self::KIND);
        w.field("key", self.key)
            .field("dim", self.dim)
            .field("bound", self.bound)
            .field("algebra.rank", self.algebra_rank)
            .field("hmat.sha256", &self.hmat_sha256)
            .field("provenance", &self.provenance)
            .field("lattice", &self.lattice)
            .field("rational.count", self.rational.len());
        for (i, (rank, poly)) in self.rational.iter().enumerate() {
            w.field(&format!("rational.{}", i + 1), format!("{rank} {}", text::list(poly)));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let key = r.get("key")?;
        let dim = r.get("dim")?;
        let bound = r.get("bound")?;
        let algebra_rank = r.get("algebra.rank")?;
        let hmat_sha256 = r.with("hmat.sha256", |v| is_hex(v, 64).then(|| v.to_string()))?;
        let provenance = r.raw("provenance")?.to_string();
        let lattice = r.with("lattice", |v| (v == "identity").then(|| v.to_string()))?;
        let count: usize = r.get("rational.count")?;
        let mut rational = Vec::with_capacity(count);
        for i in 1..=count {
            rational.push(r.with(&format!("rational.{i}"), |v| {
                let (rank, poly) = v.split_once(' ')?;
                Some((rank.parse().ok()?, text::parse_list(poly)?))
            })?);
        }
        r.finish()?;
        let rec = QOrbitRecord { key, dim, bound, algebra_rank, hmat_sha256, provenance, lattice, rational };
        check_canonical(&rec, text, path)?;
        Ok(rec)
    }
}

/// The idempotents of T (x) Z/l^N for one Q-orbit, in the regular
/// representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentRecord {
    pub key: QOrbitKey,
    pub ell: u64,
    pub precision: u32,
    pub idempotents: Vec<Mat<BigInt>>,
}

impl Entity for IdempotentRecord {
    const KIND: &'static str = "IDEM";

    fn to_text(&self) -> String {
        let mut w = Writer::new(Self::KIND);
        w.field("key", self.key)
            .field("ell", self.ell)
            .field("precision", self.precision)
            .field("count", self.idempotents.len());
        for (i, e) in self.idempotents.iter().enumerate() {
            w.field(&format!("idempotent.{}", i + 1), text::matrix(e));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let key = r.get("key")?;
        let ell = r.get("ell")?;
        let precision = r.get("precision")?;
        let count: usize = r.get("count")?;
        let idempotents =
            (1..=count).map(|i| r.with(&format!("idempotent.{i}"), text::parse_matrix)).collect::<Result<_>>()?;
        r.finish()?;
        Ok(IdempotentRecord { key, ell, precision, idempotents })
    }
}

/// One l-adic orbit: the local factor's integral basis, basis indices,
/// dual table and mod-l fingerprint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub key: OrbitKey,
    pub precision: u32,
    pub rank: usize,
    pub residue_degree: u32,
    pub basis_indices: Vec<u64>,
    /// Columns span the factor inside the regular representation.
    pub basis: Mat<BigInt>,
    pub fingerprint: Vec<Vec<BigInt>>,
    pub table: Vec<Vec<BigInt>>,
    pub eigenforms: u32,
    pub unresolved: Option<UnresolvedBlock>,
}

impl OrbitRecord {
    pub fn bound(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn dual_table(&self) -> DualTable {
        DualTable {
            ell: self.key.ell,
            precision: self.precision,
            basis_indices: self.basis_indices.clone(),
            table: self.table.clone(),
        }
    }
}

impl Entity for OrbitRecord {
    const KIND: &'static str = "ORBIT";

    fn to_text(&self) -> String {
        let mut w = Writer::new(Self::KIND);
        w.field("key", self.key)
            .field("precision", self.precision)
            .field("rank", self.rank)
            .field("residue.degree", self.residue_degree)
            .field("bound", self.bound())
            .field("basis.indices", text::list(&self.basis_indices))
            .field("basis", text::matrix(&self.basis));
        for (n, fp) in self.fingerprint.iter().enumerate() {
            w.field(&format!("fingerprint.{}", n + 1), text::list(fp));
        }
        for (n, row) in self.table.iter().enumerate() {
            w.field(&format!("table.{}", n + 1), text::list(row));
        }
        w.field("eigenforms", self.eigenforms);
        match &self.unresolved {
            None => w.field("unresolved", "none"),
            Some(u) => w.field("unresolved", format!("rank {} attained {} members {}", u.rank, u.attained, u.members)),
        };
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let key = r.get("key")?;
        let precision = r.get("precision")?;
        let rank = r.get("rank")?;
        let residue_degree = r.get("residue.degree")?;
        let bound: u64 = r.get("bound")?;
        let basis_indices = r.with("basis.indices", text::parse_list)?;
        let basis = r.with("basis", text::parse_matrix)?;
        let fingerprint =
            (1..=bound).map(|n| r.with(&format!("fingerprint.{n}"), text::parse_list)).collect::<Result<_>>()?;
        let table = (1..=bound).map(|n| r.with(&format!("table.{n}"), text::parse_list)).collect::<Result<_>>()?;
        let eigenforms = r.get("eigenforms")?;
        let unresolved = r.with("unresolved", |v| {
            if v == "none" {
                return Some(None);
            }
            let p: Vec<&str> = v.split(' ').collect();
            match p.as_slice() {
                ["rank", a, "attained", b, "members", c] => {
                    Some(Some(UnresolvedBlock { rank: a.parse().ok()?, attained: b.parse().ok()?, members: c.parse().ok()? }))
                }
                _ => None,
            }
        })?;
        r.finish()?;
        let basis: Mat<BigInt> = basis;
        let basis_indices: Vec<u64> = basis_indices;
        if basis.cols() != rank || basis_indices.len() != rank {
            return Err(Error::parse(path, 1, format!("rank {rank} disagrees with the basis shape")));
        }
        let rec = OrbitRecord {
            key,
            precision,
            rank,
            residue_degree,
            basis_indices,
            basis,
            fingerprint,
            table,
            eigenforms,
            unresolved,
        };
        check_canonical(&rec, text, path)?;
        Ok(rec)
    }
}

/// One Q_l-orbit of eigenforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformRecord {
    pub key: EigenformKey,
    pub eigenform: PadicEigenform,
}

impl Entity for EigenformRecord {
    const KIND: &'static str = "EIGF";

    fn to_text(&self) -> String {
        let f = &self.eigenform;
        let mut w = Writer::new(Self::KIND);
        w.field("key", self.key)
            .field("precision", f.precision())
            .field("attained", f.attained)
            .field("rank", f.rank)
            .field("e", f.ring.e())
            .field("f", f.ring.f())
            .field("poly", text::list(f.ring.defining_poly()))
            .field("poly.hash", f.ring.poly_hash())
            .field("bound", f.bound());
        for (n, b) in f.coefficients.iter().enumerate() {
            w.field(&format!("coefficient.{}", n + 1), text::padic(b));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let key: EigenformKey = r.get("key")?;
        let precision = r.get("precision")?;
        let attained = r.get("attained")?;
        let rank = r.get("rank")?;
        let e = r.get("e")?;
        let f: u32 = r.get("f")?;
        let poly: Vec<BigInt> = r.with("poly", text::parse_list)?;
        let ring = LocalRing::new(key.orbit.ell, precision, &poly, e).map_err(|err| r.err(err.to_string()))?;
        if ring.f() != f || ring.defining_poly() != poly.as_slice() {
            return Err(r.err("ring data is inconsistent"));
        }
        r.with("poly.hash", |v| (v == ring.poly_hash()).then_some(()))?;
        let bound: u64 = r.get("bound")?;
        let coefficients: Vec<RingElement> = (1..=bound)
            .map(|n| r.with(&format!("coefficient.{n}"), |v| text::parse_padic(v, &ring)))
            .collect::<Result<_>>()?;
        r.finish()?;
        let eigenform = PadicEigenform { ell: key.orbit.ell, ring, coefficients, rank, attained };
        Ok(EigenformRecord { key, eigenform })
    }
}

impl Entity for CongruenceRecord {
    const KIND: &'static str = "CONG";

    fn to_text(&self) -> String {
        let c = &self.congruence;
        let norm = c.exponent_normalised();
        let mut w = Writer::new(Self::KIND);
        w.field("left", self.left)
            .field("right", self.right)
            .field("kind", c.kind)
            .field("exponent.lambda", text::valuation(&c.exponent))
            .field("exponent.normalised", format!("{}{}", if c.exponent.is_exact() { "" } else { ">=" }, norm))
            .field("bound", c.bound)
            .field("precision", c.precision)
            .field("indices", c.policy);
        for (n, v) in &c.breakdown {
            w.field(&format!("defect.{n}"), text::valuation(v));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let left: Endpoint = r.get("left")?;
        let right: Endpoint = r.get("right")?;
        let kind: Kind = r.get("kind")?;
        let exponent = r.with("exponent.lambda", text::parse_valuation)?;
        r.raw("exponent.normalised")?;
        let bound = r.get("bound")?;
        let precision = r.get("precision")?;
        let policy: IndexPolicy = r.get("indices")?;
        let mut breakdown = BTreeMap::new();
        while let Some((n, v)) = r.prefixed("defect.") {
            let n: u64 = r.decode_last("defect index", n.parse().ok().filter(|x: &u64| x.to_string() == n))?;
            let v = r.decode_last("defect", text::parse_valuation(v))?;
            breakdown.insert(n, v);
        }
        r.finish()?;
        let congruence = Congruence { kind, exponent, bound, precision, policy, breakdown };
        let rec = CongruenceRecord::new(left, right, congruence).map_err(|e| Error::parse(path, 1, e.to_string()))?;
        check_canonical(&rec, text, path)?;
        Ok(rec)
    }
}

/// Characteristic polynomials of T_p on one Q_l-orbit, as exported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExport {
    pub key: EigenformKey,
    pub precision: u32,
    pub primes: Vec<(u64, Vec<BigInt>)>,
}

impl Entity for PolyExport {
    const KIND: &'static str = "POLY";

    fn to_text(&self) -> String {
        let mut w = Writer::new(Self::KIND);
        w.field("key", self.key).field("modulus", format!("{}^{}", self.key.orbit.ell, self.precision));
        for (p, cp) in &self.primes {
            w.field(&format!("T.{p}"), text::list(cp));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let key: EigenformKey = r.get("key")?;
        let ell = key.orbit.ell;
        let precision = r.with("modulus", |v| {
            let (l, n) = v.split_once('^')?;
            (l == ell.to_string()).then_some(())?;
            n.parse().ok()
        })?;
        let mut primes = Vec::new();
        while let Some((p, v)) = r.prefixed("T.") {
            let p: u64 = r.decode_last("prime", p.parse().ok())?;
            primes.push((p, r.decode_last("polynomial", text::parse_list(v))?));
        }
        r.finish()?;
        let rec = PolyExport { key, precision, primes };
        check_canonical(&rec, text, path)?;
        Ok(rec)
    }
}

fn is_hex(v: &str, len: usize) -> bool {
    v.len() == len && v.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

/// Reject texts that parse but are not the canonical form of the value.
fn check_canonical<E: Entity>(e: &E, text: &str, path: &str) -> Result<()> {
    if e.to_text() == text {
        Ok(())
    } else {
        Err(Error::parse(path, 1, format!("{} record is not in canonical form", E::KIND)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::local_ring::Valuation;

    fn round_trip<E: Entity + PartialEq + std::fmt::Debug>(e: &E) {
        let t = e.to_text();
        let back = E::parse(&t, "t").unwrap();
        assert_eq!(&back, e);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn entities_round_trip() {
        let q = QOrbitKey::new(11, 2, 1);
        let mut dims = BTreeMap::new();
        dims.insert("new".to_string(), 1);
        round_trip(&SpaceRecord { level: 11, weight: 2, qorbits: 1, dims });
        round_trip(&QOrbitRecord {
            key: q,
            dim: 1,
            bound: 3,
            algebra_rank: 1,
            hmat_sha256: "0".repeat(64),
            provenance: "point counts: y^2 + y = x^3 - x^2".into(),
            lattice: "identity".into(),
            rational: vec![(1, vec![BigInt::from(-1), BigInt::from(1)])],
        });
        round_trip(&IdempotentRecord { key: q, ell: 5, precision: 3, idempotents: vec![Mat::from_vec(1, 1, vec![BigInt::from(1)])] });
        let one = |x: i64| vec![BigInt::from(x)];
        round_trip(&OrbitRecord {
            key: q.orbit(5, 1),
            precision: 3,
            rank: 1,
            residue_degree: 1,
            basis_indices: vec![1],
            basis: Mat::from_vec(1, 1, one(1)),
            fingerprint: vec![vec![BigInt::from(-1), BigInt::from(1)]; 2],
            table: vec![one(1), one(123)],
            eigenforms: 1,
            unresolved: None,
        });
        let ring = LocalRing::new(5, 3, &[BigInt::from(-5), BigInt::from(0), BigInt::from(1)], 2).unwrap();
        let eigenform = PadicEigenform {
            ell: 5,
            ring: ring.clone(),
            coefficients: vec![ring.from_i64(1), ring.generator()],
            rank: 2,
            attained: 3,
        };
        round_trip(&EigenformRecord { key: q.orbit(5, 1).eigenform(1), eigenform });
        let mut breakdown = BTreeMap::new();
        breakdown.insert(1, Valuation::at_least(6, 2));
        breakdown.insert(2, Valuation::exact(5, 2));
        let congruence = Congruence {
            kind: Kind::Strong,
            exponent: Valuation::exact(5, 2),
            bound: 2,
            precision: 3,
            policy: IndexPolicy::All,
            breakdown,
        };
        let f = Endpoint::Eigenform(q.orbit(5, 1).eigenform(1));
        let rec = CongruenceRecord::new(f, f, congruence).unwrap();
        assert!(rec.to_text().contains("exponent.normalised: 5/2\n"));
        round_trip(&rec);
        round_trip(&PolyExport { key: q.orbit(5, 1).eigenform(1), precision: 3, primes: vec![(2, vec![BigInt::from(2), BigInt::from(1)])] });
        round_trip(&PolyExport { key: q.orbit(5, 1).eigenform(1), precision: 3, primes: vec![] });
    }

    #[test]
    fn tampering_is_detected() {
        let ring = LocalRing::base_ring(5, 2).unwrap();
        let eigenform = PadicEigenform { ell: 5, ring: ring.clone(), coefficients: vec![ring.from_i64(1)], rank: 1, attained: 2 };
        let rec = EigenformRecord { key: QOrbitKey::new(11, 2, 1).orbit(5, 1).eigenform(1), eigenform };
        let t = rec.to_text();
        assert!(EigenformRecord::parse(&t.replace("N=2", "N=3"), "t").is_err());
        assert!(EigenformRecord::parse(&t.replace("[1]\n", "[26]\n"), "t").is_err());
        assert!(EigenformRecord::parse(&t.replace("attained: 2", "attained: 02"), "t").is_err());
    }
}
