//! A directory of text records: spaces, Q-orbits, l-adic orbits,
//! eigenforms and congruences, plus the sweep's claim and item files.
//!
//! ```text
//! <root>/store.txt                              HECKESTORE v1
//! <root>/spaces/<L>.<W>/space.txt               SPACE v1
//! <root>/spaces/<L>.<W>/<n>/hmat.txt            HMAT v1, canonical form
//! <root>/spaces/<L>.<W>/<n>/qorbit.txt          QORBIT v1
//! <root>/spaces/<L>.<W>/<n>/l<ell>/idempotents.txt   IDEM v1
//! <root>/spaces/<L>.<W>/<n>/l<ell>/orbit.<i>.txt     ORBIT v1
//! <root>/spaces/<L>.<W>/<n>/l<ell>/eigf.<i>.<j>.txt  EIGF v1
//! <root>/congruences/<hash>.txt                 CONG v1, named by content
//! <root>/sweep/claims/<hash>.claim              CLAIM v1
//! <root>/sweep/items/<hash>.txt                 ITEM v1
//! ```
//!
//! The only synchronisation primitive is create-if-absent, implemented as
//! a hard link from a fully written temporary file.

pub mod entities;
pub mod keys;
pub mod query;
pub mod text;
pub mod validate;

use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::congruence::CongruenceRecord;
use crate::error::{Error, Result};
use crate::hecke::{self, hmat, HeckeSpace, QlContext};
use entities::{EigenformRecord, Entity, IdempotentRecord, OrbitRecord, QOrbitRecord, SpaceRecord, DIM_KEYS};
use keys::{EigenformKey, Endpoint, OrbitKey, QOrbitKey};

pub const MAGIC: &str = "HECKESTORE v1\n";

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct Store {
    root: PathBuf,
}

/// What a decomposition wrote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub orbits: Vec<OrbitRecord>,
    pub eigenforms: Vec<EigenformRecord>,
    /// False when the stored data was already identical.
    pub changed: bool,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn tmp_name(dir: &Path, stem: &str) -> PathBuf {
    let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    dir.join(format!(".{stem}.tmp-{}-{n}", std::process::id()))
}

/// Replace `path` atomically; returns false when it already held `text`.
pub(crate) fn write_atomic(path: &Path, text: &str) -> Result<bool> {
    if fs::read_to_string(path).ok().as_deref() == Some(text) {
        return Ok(false);
    }
    let dir = path.parent().ok_or_else(|| Error::internal("path without parent"))?;
    fs::create_dir_all(dir)?;
    let tmp = tmp_name(dir, "write");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(true)
}

/// Create `path` with `text` unless it exists. Returns true if this call
/// created it; otherwise the existing content is returned through `Err`-free
/// `false` and left untouched.
pub(crate) fn create_if_absent(path: &Path, text: &str) -> Result<bool> {
    let dir = path.parent().ok_or_else(|| Error::internal("path without parent"))?;
    fs::create_dir_all(dir)?;
    let tmp = tmp_name(dir, "create");
    fs::write(&tmp, text)?;
    let res = fs::hard_link(&tmp, path);
    let _ = fs::remove_file(&tmp);
    match res {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == ErrorKind::AlreadyExists => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn read_entity<E: Entity>(path: &Path) -> Result<E> {
    let text = fs::read_to_string(path)?;
    E::parse(&text, &path.display().to_string())
}

fn not_found(e: &Error) -> bool {
    matches!(e, Error::Io(io) if io.kind() == ErrorKind::NotFound)
}

impl Store {
    /// Open the store at `root`, creating it if needed.
    pub fn init(root: impl Into<PathBuf>) -> Result<Store> {
        let root = root.into();
        fs::create_dir_all(root.join("spaces"))?;
        fs::create_dir_all(root.join("congruences"))?;
        fs::create_dir_all(root.join("sweep/claims"))?;
        fs::create_dir_all(root.join("sweep/items"))?;
        let marker = root.join("store.txt");
        create_if_absent(&marker, MAGIC)?;
        Store::open(root)
    }

    pub fn open(root: impl Into<PathBuf>) -> Result<Store> {
        let root = root.into();
        let marker = root.join("store.txt");
        match fs::read_to_string(&marker) {
            Ok(t) if t == MAGIC => Ok(Store { root }),
            Ok(_) => Err(Error::Corrupt { path: marker, msg: "bad store marker".into() }),
            Err(e) if e.kind() == ErrorKind::NotFound => {
                Err(Error::NotComputed(format!("no store at {} (run `hecke init`)", root.display())))
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub(crate) fn space_dir(&self, level: u64, weight: u32) -> PathBuf {
        self.root.join("spaces").join(format!("{level}.{weight}"))
    }

    pub(crate) fn qorbit_dir(&self, key: QOrbitKey) -> PathBuf {
        self.space_dir(key.level, key.weight).join(key.number.to_string())
    }

    pub(crate) fn ell_dir(&self, key: QOrbitKey, ell: u64) -> PathBuf {
        self.qorbit_dir(key).join(format!("l{ell}"))
    }

    pub(crate) fn orbit_path(&self, key: OrbitKey) -> PathBuf {
        self.ell_dir(key.qorbit, key.ell).join(format!("orbit.{}.txt", key.factor))
    }

    pub(crate) fn eigenform_path(&self, key: EigenformKey) -> PathBuf {
        self.ell_dir(key.orbit.qorbit, key.orbit.ell).join(format!("eigf.{}.{}.txt", key.orbit.factor, key.index))
    }

    pub(crate) fn congruence_dir(&self) -> PathBuf {
        self.root.join("congruences")
    }

    pub(crate) fn claims_dir(&self) -> PathBuf {
        self.root.join("sweep/claims")
    }

    pub(crate) fn items_dir(&self) -> PathBuf {
        self.root.join("sweep/items")
    }

    /// Ingest one HMAT file as a Q-orbit. Identical content maps to the
    /// existing key.
    pub fn ingest_path(&self, path: &Path) -> Result<QOrbitKey> {
        let text = fs::read_to_string(path)?;
        self.ingest_text(&text, &path.display().to_string())
    }

    pub fn ingest_text(&self, text: &str, name: &str) -> Result<QOrbitKey> {
        let space = hmat::parse(text, name)?;
        let canonical = hmat::write(&space);
        let hash = sha256_hex(&canonical);
        let dims = space_dims(&space)?;
        let (level, weight) = (space.level, space.weight);
        let sdir = self.space_dir(level, weight);
        let existing = self.qorbits_of(level, weight)?;
        for key in &existing {
            if self.qorbit(*key)?.hmat_sha256 == hash {
                return Ok(*key);
            }
        }
        let mut merged = match read_entity::<SpaceRecord>(&sdir.join("space.txt")) {
            Ok(s) => s.dims,
            Err(e) if not_found(&e) => BTreeMap::new(),
            Err(e) => return Err(e),
        };
        for (k, v) in dims {
            if let Some(old) = merged.insert(k.clone(), v) {
                if old != v {
                    return Err(Error::Invalid(format!("{k} dimension {v} conflicts with stored {old}")));
                }
            }
        }
        let rational = hecke::rational_orbits(&space)?;
        if rational.len() > 1 {
            log::warn!("{name}: the Hecke algebra splits into {} factors over Q", rational.len());
        }
        let algebra_rank = space.regular_algebra()?.dim();
        let mut number = existing.iter().map(|k| k.number).max().unwrap_or(0) + 1;
        let key = loop {
            let key = QOrbitKey::new(level, weight, number);
            fs::create_dir_all(&sdir)?;
            match fs::create_dir(self.qorbit_dir(key)) {
                Ok(()) => break key,
                Err(e) if e.kind() == ErrorKind::AlreadyExists => number += 1,
                Err(e) => return Err(e.into()),
            }
        };
        let dir = self.qorbit_dir(key);
        write_atomic(&dir.join("hmat.txt"), &canonical)?;
        let rec = QOrbitRecord {
            key,
            dim: space.dim(),
            bound: space.bound(),
            algebra_rank,
            hmat_sha256: hash,
            provenance: space.provenance.clone().unwrap_or_default(),
            lattice: "identity".into(),
            rational: rational.iter().map(|o| (o.rank, o.field_poly.clone())).collect(),
        };
        write_atomic(&dir.join("qorbit.txt"), &rec.to_text())?;
        let count = self.qorbits_of(level, weight)?.len() as u32;
        let srec = SpaceRecord { level, weight, qorbits: count, dims: merged };
        write_atomic(&sdir.join("space.txt"), &srec.to_text())?;
        log::info!("ingested {name} as {key}");
        Ok(key)
    }

    /// Complete Q-orbits of one space, in key order.
    pub fn qorbits_of(&self, level: u64, weight: u32) -> Result<Vec<QOrbitKey>> {
        let dir = self.space_dir(level, weight);
        let mut out = Vec::new();
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let name = entry?.file_name();
            let Some(number) = name.to_str().and_then(|s| s.parse::<u32>().ok()) else { continue };
            let key = QOrbitKey::new(level, weight, number);
            if self.qorbit_dir(key).join("qorbit.txt").exists() {
                out.push(key);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Every complete Q-orbit in the store, in key order.
    pub fn all_qorbits(&self) -> Result<Vec<QOrbitKey>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.root.join("spaces"))? {
            let name = entry?.file_name();
            let Some((l, w)) = name.to_str().and_then(|s| s.split_once('.')) else { continue };
            let (Ok(l), Ok(w)) = (l.parse(), w.parse()) else { continue };
            out.extend(self.qorbits_of(l, w)?);
        }
        out.sort();
        Ok(out)
    }

    pub fn space(&self, level: u64, weight: u32) -> Result<SpaceRecord> {
        self.read(&self.space_dir(level, weight).join("space.txt"), &format!("space {level}.{weight}"))
    }

    pub fn qorbit(&self, key: QOrbitKey) -> Result<QOrbitRecord> {
        self.read(&self.qorbit_dir(key).join("qorbit.txt"), &format!("Q-orbit {key}"))
    }

    pub fn hecke_space(&self, key: QOrbitKey) -> Result<HeckeSpace> {
        let path = self.qorbit_dir(key).join("hmat.txt");
        let text = fs::read_to_string(&path).map_err(|e| {
            if e.kind() == ErrorKind::NotFound {
                Error::NotComputed(format!("Q-orbit {key} is not in the store"))
            } else {
                e.into()
            }
        })?;
        hmat::parse(&text, &path.display().to_string())
    }

    fn read<E: Entity>(&self, path: &Path, what: &str) -> Result<E> {
        match read_entity(path) {
            Err(e) if not_found(&e) => Err(Error::NotComputed(format!("{what} is not in the store"))),
            Err(Error::Parse { path, line, msg }) => {
                Err(Error::Corrupt { path: PathBuf::from(path), msg: format!("line {line}: {msg}") })
            }
            other => other,
        }
    }

    /// Compute and store l-adic orbits and their eigenforms at precision N.
    /// Re-running with the same arguments leaves the files untouched.
    pub fn decompose(&self, key: QOrbitKey, ell: u64, precision: u32, cap: u32) -> Result<Decomposition> {
        let space = self.hecke_space(key)?;
        let orbits = hecke::ell_adic_orbits(&space, ell, precision)?;
        let ctx = QlContext::new(&space, ell)?;
        let mut files = BTreeMap::new();
        let idem = IdempotentRecord {
            key,
            ell,
            precision,
            idempotents: orbits.iter().map(|o| o.factor.idempotent.clone()).collect(),
        };
        files.insert("idempotents.txt".to_string(), idem.to_text());
        let mut orecs = Vec::new();
        let mut erecs = Vec::new();
        for (i, o) in orbits.iter().enumerate() {
            let okey = key.orbit(ell, i as u32 + 1);
            let ql = ctx.orbits(o, cap)?;
            for (j, f) in ql.eigenforms.into_iter().enumerate() {
                let rec = EigenformRecord { key: okey.eigenform(j as u32 + 1), eigenform: f };
                files.insert(format!("eigf.{}.{}.txt", i + 1, j + 1), rec.to_text());
                erecs.push(rec);
            }
            let rec = OrbitRecord {
                key: okey,
                precision,
                rank: o.rank(),
                residue_degree: o.factor.residue_degree,
                basis_indices: o.basis_indices.clone(),
                basis: crate::linalg::Mat::from_cols(&o.factor.basis),
                fingerprint: o.fingerprint.clone(),
                table: o.table.clone(),
                eigenforms: erecs.iter().filter(|e| e.key.orbit == okey).count() as u32,
                unresolved: ql.unresolved,
            };
            files.insert(format!("orbit.{}.txt", i + 1), rec.to_text());
            orecs.push(rec);
        }
        let changed = self.replace_dir(&self.ell_dir(key, ell), &files)?;
        Ok(Decomposition { orbits: orecs, eigenforms: erecs, changed })
    }

    /// Make `dir` contain exactly `files`.
    fn replace_dir(&self, dir: &Path, files: &BTreeMap<String, String>) -> Result<bool> {
        let mut current = BTreeMap::new();
        if let Ok(entries) = fs::read_dir(dir) {
            for entry in entries {
                let entry = entry?;
                let name = entry.file_name().to_string_lossy().into_owned();
                current.insert(name, fs::read_to_string(entry.path())?);
            }
        }
        if &current == files {
            return Ok(false);
        }
        let parent = dir.parent().ok_or_else(|| Error::internal("path without parent"))?;
        let tmp = tmp_name(parent, "dir");
        fs::create_dir_all(&tmp)?;
        for (name, text) in files {
            fs::write(tmp.join(name), text)?;
        }
        let old = tmp_name(parent, "old");
        if dir.exists() {
            fs::rename(dir, &old)?;
        }
        fs::rename(&tmp, dir)?;
        if old.exists() {
            fs::remove_dir_all(&old)?;
        }
        Ok(true)
    }

    /// Primes l at which the Q-orbit has been decomposed.
    pub fn computed_ells(&self, key: QOrbitKey) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.qorbit_dir(key))? {
            let name = entry?.file_name();
            if let Some(ell) = name.to_str().and_then(|s| s.strip_prefix('l')).and_then(|s| s.parse().ok()) {
                out.push(ell);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn idempotents(&self, key: QOrbitKey, ell: u64) -> Result<IdempotentRecord> {
        self.read(&self.ell_dir(key, ell).join("idempotents.txt"), &format!("l = {ell} data for {key}"))
    }

    /// The l-adic orbits of a Q-orbit, or NotComputed.
    pub fn orbits(&self, key: QOrbitKey, ell: u64) -> Result<Vec<OrbitRecord>> {
        let count = self.idempotents(key, ell)?.idempotents.len() as u32;
        (1..=count).map(|i| self.orbit(key.orbit(ell, i))).collect()
    }

    pub fn orbit(&self, key: OrbitKey) -> Result<OrbitRecord> {
        self.read(&self.orbit_path(key), &format!("orbit {key}"))
    }

    pub fn eigenform(&self, key: EigenformKey) -> Result<EigenformRecord> {
        self.read(&self.eigenform_path(key), &format!("eigenform {key}"))
    }

    /// Every eigenform stored under the Q-orbit at l, in key order.
    pub fn eigenforms(&self, key: QOrbitKey, ell: u64) -> Result<Vec<EigenformRecord>> {
        let mut out = Vec::new();
        for o in self.orbits(key, ell)? {
            for j in 1..=o.eigenforms {
                out.push(self.eigenform(o.key.eigenform(j))?);
            }
        }
        Ok(out)
    }

    pub fn exists(&self, e: &Endpoint) -> bool {
        match e {
            Endpoint::Orbit(o) => self.orbit_path(*o).is_file(),
            Endpoint::Eigenform(f) => self.eigenform_path(*f).is_file(),
        }
    }

    pub(crate) fn congruence_path(&self, text: &str) -> PathBuf {
        self.congruence_dir().join(format!("{}.txt", &sha256_hex(text)[..32]))
    }

    /// Store a congruence record under its content hash. Returns the hash
    /// name; inserting the same record twice keeps one copy.
    pub fn record_congruence(&self, rec: &CongruenceRecord) -> Result<String> {
        for e in [&rec.left, &rec.right] {
            if !self.exists(e) {
                return Err(Error::Dangling(e.to_string()));
            }
        }
        let text = rec.to_text();
        let path = self.congruence_path(&text);
        if !create_if_absent(&path, &text)? && fs::read_to_string(&path)? != text {
            return Err(Error::Corrupt { path, msg: "content does not match its name".into() });
        }
        Ok(path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
    }

    pub fn congruence(&self, hash: &str) -> Result<CongruenceRecord> {
        self.read(&self.congruence_dir().join(format!("{hash}.txt")), &format!("congruence {hash}"))
    }

    /// All congruence records, ordered by hash.
    pub fn congruences(&self) -> Result<Vec<(String, CongruenceRecord)>> {
        let mut names: Vec<String> = fs::read_dir(self.congruence_dir())?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str().and_then(|s| s.strip_suffix(".txt")).map(str::to_string))
            .collect();
        names.sort();
        names.into_iter().map(|h| self.congruence(&h).map(|r| (h, r))).collect()
    }
}

fn space_dims(space: &HeckeSpace) -> Result<BTreeMap<String, u64>> {
    let mut out = BTreeMap::new();
    for k in DIM_KEYS {
        if let Some(v) = space.meta.get(k) {
            let v: u64 = v.parse().map_err(|_| Error::Invalid(format!("meta {k} must be a dimension, found `{v}`")))?;
            out.insert(k.to_string(), v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::level11;

    #[test]
    fn ingest_is_idempotent_and_decompose_is_stable() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::init(dir.path()).unwrap();
        let text = hmat::write(&level11::space(30).unwrap());
        let key = store.ingest_text(&text, "l11").unwrap();
        assert_eq!(key.to_string(), "11.2.1");
        let snapshot = |root: &Path| -> BTreeMap<PathBuf, Vec<u8>> {
            walk(root).into_iter().map(|p| (p.clone(), fs::read(&p).unwrap())).collect()
        };
        let before = snapshot(dir.path());
        assert_eq!(store.ingest_text(&text, "again").unwrap(), key);
        assert_eq!(snapshot(dir.path()), before);
        let d = store.decompose(key, 5, 4, 64).unwrap();
        assert!(d.changed);
        assert_eq!(d.orbits.len(), 1);
        assert_eq!(d.eigenforms.len(), 1);
        let mid = snapshot(dir.path());
        assert!(!store.decompose(key, 5, 4, 64).unwrap().changed);
        assert_eq!(snapshot(dir.path()), mid);
        assert!(matches!(store.orbits(key, 7), Err(Error::NotComputed(_))));
        assert_eq!(store.computed_ells(key).unwrap(), vec![5]);
    }

    pub(crate) fn walk(root: &Path) -> Vec<PathBuf> {
        let mut out = Vec::new();
        for e in fs::read_dir(root).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                out.extend(walk(&p));
            } else {
                out.push(p);
            }
        }
        out.sort();
        out
    }
}
