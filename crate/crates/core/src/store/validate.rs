//! Full-store consistency check: every record parses and is canonical, keys
//! agree with paths, children exist for every count, congruence files are
//! named by their content and point at existing endpoints.
//!
//! Files whose names start with `.` are in-flight temporaries and skipped,
//! so the check can run while other processes write.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use super::entities::{Entity, IdempotentRecord, OrbitRecord, QOrbitRecord, SpaceRecord};
use super::keys::QOrbitKey;
use super::{sha256_hex, Store, MAGIC};
use crate::congruence::sweep::ItemRecord;
use crate::congruence::CongruenceRecord;
use crate::error::Result;
use crate::hecke::hmat;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub files: usize,
    pub problems: Vec<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }

    fn problem(&mut self, path: &Path, msg: impl std::fmt::Display) {
        self.problems.push(format!("{}: {msg}", path.display()));
    }

    fn parse<E: Entity>(&mut self, path: &Path) -> Option<E> {
        self.files += 1;
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                self.problem(path, e);
                return None;
            }
        };
        match E::parse(&text, &path.display().to_string()) {
            Ok(v) if v.to_text() == text => Some(v),
            Ok(_) => {
                self.problem(path, "not in canonical form");
                None
            }
            Err(e) => {
                self.problem(path, e);
                None
            }
        }
    }
}

fn names(dir: &Path) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for e in fs::read_dir(dir)? {
        let name = e?.file_name().to_string_lossy().into_owned();
        if !name.starts_with('.') {
            out.insert(name);
        }
    }
    Ok(out)
}

impl Store {
    pub fn validate(&self) -> Result<Report> {
        let mut r = Report::default();
        let marker = self.root().join("store.txt");
        r.files += 1;
        if fs::read_to_string(&marker).ok().as_deref() != Some(MAGIC) {
            r.problem(&marker, "bad store marker");
        }
        for name in names(&self.root().join("spaces"))? {
            let dir = self.root().join("spaces").join(&name);
            let lw = name.split_once('.').and_then(|(l, w)| Some((l.parse::<u64>().ok()?, w.parse::<u32>().ok()?)));
            let Some((level, weight)) = lw.filter(|(l, w)| format!("{l}.{w}") == name) else {
                r.problem(&dir, "unexpected directory");
                continue;
            };
            self.validate_space(&mut r, level, weight)?;
        }
        for name in names(&self.congruence_dir())? {
            let path = self.congruence_dir().join(&name);
            let Some(rec) = r.parse::<CongruenceRecord>(&path) else { continue };
            if self.congruence_path(&rec.to_text()) != path {
                r.problem(&path, "file name is not the content hash");
            }
            for e in [rec.left, rec.right] {
                if !self.exists(&e) {
                    r.problem(&path, format!("dangling endpoint {e}"));
                }
            }
        }
        for name in names(&self.items_dir())? {
            let path = self.items_dir().join(&name);
            let Some(item) = r.parse::<ItemRecord>(&path) else { continue };
            if name != format!("{}.txt", item.hash()) {
                r.problem(&path, "file name is not the item hash");
            }
        }
        Ok(r)
    }

    fn validate_space(&self, r: &mut Report, level: u64, weight: u32) -> Result<()> {
        let dir = self.space_dir(level, weight);
        let mut complete = 0;
        let mut has_space = false;
        for name in names(&dir)? {
            let path = dir.join(&name);
            if name == "space.txt" {
                has_space = true;
                continue;
            }
            let Some(number) = name.parse::<u32>().ok().filter(|n| n.to_string() == name && *n > 0) else {
                r.problem(&path, "unexpected entry");
                continue;
            };
            let key = QOrbitKey::new(level, weight, number);
            if path.join("qorbit.txt").exists() {
                complete += 1;
                self.validate_qorbit(r, key)?;
            }
        }
        let path = dir.join("space.txt");
        if !has_space {
            r.problem(&path, "missing");
        } else if let Some(s) = r.parse::<SpaceRecord>(&path) {
            if (s.level, s.weight) != (level, weight) {
                r.problem(&path, "level and weight disagree with the path");
            }
            if s.qorbits < complete {
                r.problem(&path, format!("counts {} Q-orbits, found {complete}", s.qorbits));
            }
        }
        Ok(())
    }

    fn validate_qorbit(&self, r: &mut Report, key: QOrbitKey) -> Result<()> {
        let dir = self.qorbit_dir(key);
        let Some(q) = r.parse::<QOrbitRecord>(&dir.join("qorbit.txt")) else { return Ok(()) };
        if q.key != key {
            r.problem(&dir.join("qorbit.txt"), format!("key {} at the path of {key}", q.key));
        }
        let hpath = dir.join("hmat.txt");
        r.files += 1;
        match fs::read_to_string(&hpath) {
            Err(e) => r.problem(&hpath, e),
            Ok(text) => match hmat::parse(&text, &hpath.display().to_string()) {
                Err(e) => r.problem(&hpath, e),
                Ok(space) => {
                    if hmat::write(&space) != text {
                        r.problem(&hpath, "not in canonical form");
                    }
                    if sha256_hex(&text) != q.hmat_sha256 {
                        r.problem(&hpath, "hash disagrees with qorbit.txt");
                    }
                    if (space.level, space.weight, space.dim(), space.bound()) != (key.level, key.weight, q.dim, q.bound) {
                        r.problem(&hpath, "level, weight, dimension or bound disagree with qorbit.txt");
                    }
                }
            },
        }
        for name in names(&dir)? {
            if name == "qorbit.txt" || name == "hmat.txt" {
                continue;
            }
            match name.strip_prefix('l').and_then(|s| s.parse::<u64>().ok()) {
                Some(ell) if format!("l{ell}") == name => self.validate_ell(r, key, ell, q.bound)?,
                _ => r.problem(&dir.join(&name), "unexpected entry"),
            }
        }
        Ok(())
    }

    fn validate_ell(&self, r: &mut Report, key: QOrbitKey, ell: u64, bound: u64) -> Result<()> {
        let dir = self.ell_dir(key, ell);
        let mut expected = BTreeSet::from(["idempotents.txt".to_string()]);
        let present = names(&dir)?;
        if let Some(idem) = r.parse::<IdempotentRecord>(&dir.join("idempotents.txt")) {
            if (idem.key, idem.ell) != (key, ell) {
                r.problem(&dir.join("idempotents.txt"), "key disagrees with the path");
            }
            for i in 1..=idem.idempotents.len() as u32 {
                let okey = key.orbit(ell, i);
                let name = format!("orbit.{i}.txt");
                expected.insert(name.clone());
                if !present.contains(&name) {
                    r.problem(&dir.join(&name), "missing");
                    continue;
                }
                let Some(o) = r.parse::<OrbitRecord>(&dir.join(&name)) else { continue };
                if o.key != okey || o.precision != idem.precision || o.bound() != bound {
                    r.problem(&dir.join(&name), "key, precision or bound disagree with the parent records");
                }
                for j in 1..=o.eigenforms {
                    let name = format!("eigf.{i}.{j}.txt");
                    expected.insert(name.clone());
                    let path = dir.join(&name);
                    if !present.contains(&name) {
                        r.problem(&path, "missing");
                        continue;
                    }
                    if let Some(f) = r.parse::<super::entities::EigenformRecord>(&path) {
                        if f.key != okey.eigenform(j) || f.eigenform.precision() != idem.precision || f.eigenform.bound() != bound {
                            r.problem(&path, "key, precision or bound disagree with the parent records");
                        }
                    }
                }
            }
        }
        for name in present.difference(&expected) {
            r.problem(&dir.join(name), "unexpected entry");
        }
        Ok(())
    }
}
