//! All-pairs congruence sweep over a store, deduplicated per work item.
//!
//! A work item is one coefficient index of one pair. Before computing it a
//! worker creates `sweep/claims/<hash>.claim` (create-if-absent); the result
//! goes to `sweep/items/<hash>.txt`. Items already present are skipped, so a
//! rerun, or a second process on the same store, repeats no work. Claims
//! older than the lease are taken over by renaming them away first, which
//! only one contender can do.
//!
//! Once every item of a pair exists the pair is assembled into a
//! congruence record. Pairs whose items are still claimed elsewhere are
//! reported as pending.

use std::collections::BTreeMap;
use std::fs;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, SystemTime};

use rayon::prelude::*;

use super::plan::{StrongPlan, WeakPlan};
use super::{assemble, CongruenceRecord, IndexPolicy, Kind};
use crate::arith::local_ring::Valuation;
use crate::error::{Error, Result};
use crate::store::entities::Entity;
use crate::store::keys::Endpoint;
use crate::store::text::{self, Reader, Writer};
use crate::store::{create_if_absent, sha256_hex, Store};

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub ell: u64,
    pub workers: usize,
    /// Compare up to this index instead of the largest common bound.
    pub bound: Option<u64>,
    /// Compare every index across levels, not only those coprime to l and
    /// the levels.
    pub include_all: bool,
    pub kinds: Vec<Kind>,
    /// Restrict to these levels.
    pub levels: Option<Vec<u64>>,
    /// Claims older than this are presumed abandoned.
    pub lease: Duration,
}

impl SweepOptions {
    pub fn new(ell: u64) -> Self {
        SweepOptions {
            ell,
            workers: 1,
            bound: None,
            include_all: false,
            kinds: vec![Kind::Weak, Kind::Strong],
            levels: None,
            lease: Duration::from_secs(3600),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub pairs: usize,
    pub items: usize,
    /// Items computed by this run.
    pub computed: usize,
    /// Items found already computed.
    pub skipped: usize,
    /// Items whose claim was held by someone else.
    pub lost_claims: usize,
    /// Stale claims taken over.
    pub recovered_claims: usize,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub stats: SweepStats,
    /// Content hash and record of every complete pair, in pair order.
    pub records: Vec<(String, CongruenceRecord)>,
    /// Pairs with items still missing.
    pub pending: Vec<(Endpoint, Endpoint)>,
}

/// A pair with everything that determines its items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub left: Endpoint,
    pub right: Endpoint,
    pub kind: Kind,
    pub bound: u64,
    pub precision: u32,
    pub policy: IndexPolicy,
}

enum Plan {
    Weak(WeakPlan),
    Strong(StrongPlan),
}

impl Plan {
    fn item(&self, n: u64) -> Vec<Valuation> {
        match self {
            Plan::Weak(p) => p.item(n),
            Plan::Strong(p) => p.item(n),
        }
    }
}

impl Pair {
    /// Resolve a pair of stored endpoints: an eigenform and an orbit give a
    /// weak comparison, two eigenforms a strong one.
    pub fn resolve(store: &Store, left: Endpoint, right: Endpoint, bound: Option<u64>, include_all: bool) -> Result<Pair> {
        if left.ell() != right.ell() {
            return Err(Error::ResidueCharacteristic(left.ell(), right.ell()));
        }
        let (Endpoint::Eigenform(f), right_key) = (left, right) else {
            return Err(Error::Invalid(format!("the left side of a congruence must be an eigenform, found {left}")));
        };
        let f = store.eigenform(f)?.eigenform;
        let (kind, available, precision) = match right_key {
            Endpoint::Orbit(o) => {
                let o = store.orbit(o)?;
                (Kind::Weak, f.bound().min(o.bound()), f.precision().min(o.precision))
            }
            Endpoint::Eigenform(g) => {
                let g = store.eigenform(g)?.eigenform;
                (Kind::Strong, f.bound().min(g.bound()), f.precision().min(g.precision()))
            }
        };
        let bound = bound.unwrap_or(available);
        if bound == 0 || bound > available {
            return Err(Error::BoundExceeded { requested: bound, available });
        }
        let policy = IndexPolicy::for_levels(left.ell(), left.qorbit().level, right.qorbit().level, include_all);
        Ok(Pair { left, right, kind, bound, precision, policy })
    }

    pub fn indices(&self) -> Vec<u64> {
        self.policy.indices(self.bound)
    }

    pub fn item_hash(&self, n: u64) -> String {
        let key = format!(
            "{}|{}|{}|{n}|{}|{}|{}",
            self.left, self.right, self.kind, self.bound, self.precision, self.policy
        );
        sha256_hex(&key)[..32].to_string()
    }

    fn plan(&self, store: &Store) -> Result<Plan> {
        let Endpoint::Eigenform(f) = self.left else { return Err(Error::internal("weak pair with orbit on the left")) };
        let f = store.eigenform(f)?.eigenform;
        let plan = match self.right {
            Endpoint::Orbit(o) => {
                let table = store.orbit(o)?.dual_table();
                let p = WeakPlan::new(&f.coefficients, &table, self.bound, self.policy)?;
                debug_assert_eq!(p.precision(), self.precision);
                Plan::Weak(p)
            }
            Endpoint::Eigenform(g) => {
                let g = store.eigenform(g)?.eigenform;
                let p = StrongPlan::new(&f, &g, self.bound, self.policy)?;
                debug_assert_eq!(p.precision(), self.precision);
                Plan::Strong(p)
            }
        };
        Ok(plan)
    }

    fn item_record(&self, n: u64, values: Vec<Valuation>) -> ItemRecord {
        ItemRecord { pair: self.clone(), n, values }
    }
}

/// The stored result of one work item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemRecord {
    pub pair: Pair,
    pub n: u64,
    /// Defect valuation in each common ring.
    pub values: Vec<Valuation>,
}

impl ItemRecord {
    pub fn hash(&self) -> String {
        self.pair.item_hash(self.n)
    }
}

impl Entity for ItemRecord {
    const KIND: &'static str = "ITEM";

    fn to_text(&self) -> String {
        let p = &self.pair;
        let mut w = Writer::new(Self::KIND);
        w.field("left", p.left)
            .field("right", p.right)
            .field("kind", p.kind)
            .field("n", self.n)
            .field("bound", p.bound)
            .field("precision", p.precision)
            .field("indices", p.policy)
            .field("values", self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            w.field(&format!("value.{}", i + 1), text::valuation(v));
        }
        w.finish()
    }

    fn parse(text: &str, path: &str) -> Result<Self> {
        let mut r = Reader::new(text, Self::KIND, path)?;
        let left = r.get("left")?;
        let right = r.get("right")?;
        let kind = r.get("kind")?;
        let n = r.get("n")?;
        let bound = r.get("bound")?;
        let precision = r.get("precision")?;
        let policy = r.get("indices")?;
        let count: usize = r.get("values")?;
        let values = (1..=count).map(|i| r.with(&format!("value.{i}"), text::parse_valuation)).collect::<Result<_>>()?;
        r.finish()?;
        let rec = ItemRecord { pair: Pair { left, right, kind, bound, precision, policy }, n, values };
        if rec.to_text() != text {
            return Err(Error::parse(path, 1, "ITEM record is not in canonical form"));
        }
        Ok(rec)
    }
}

/// Pairs considered by a sweep, in a fixed order: strong pairs of distinct
/// eigenforms (smaller key on the left) and weak pairs of an eigenform
/// with every l-adic orbit other than its own.
pub fn sweep_pairs(store: &Store, opts: &SweepOptions) -> Result<Vec<Pair>> {
    let mut eigenforms = Vec::new();
    let mut orbits = Vec::new();
    for q in store.all_qorbits()? {
        if opts.levels.as_ref().is_some_and(|ls| !ls.contains(&q.level)) || !store.computed_ells(q)?.contains(&opts.ell) {
            continue;
        }
        for o in store.orbits(q, opts.ell)? {
            eigenforms.extend((1..=o.eigenforms).map(|j| o.key.eigenform(j)));
            orbits.push(o.key);
        }
    }
    let mut pairs = Vec::new();
    if opts.kinds.contains(&Kind::Strong) {
        for (i, &f) in eigenforms.iter().enumerate() {
            for &g in &eigenforms[i + 1..] {
                pairs.push(Pair::resolve(store, Endpoint::Eigenform(f), Endpoint::Eigenform(g), opts.bound, opts.include_all)?);
            }
        }
    }
    if opts.kinds.contains(&Kind::Weak) {
        for &f in &eigenforms {
            for &o in orbits.iter().filter(|&&o| o != f.orbit) {
                pairs.push(Pair::resolve(store, Endpoint::Eigenform(f), Endpoint::Orbit(o), opts.bound, opts.include_all)?);
            }
        }
    }
    Ok(pairs)
}

fn read_item(store: &Store, hash: &str) -> Result<Option<ItemRecord>> {
    let path = store.items_dir().join(format!("{hash}.txt"));
    match fs::read_to_string(&path) {
        Ok(t) => ItemRecord::parse(&t, &path.display().to_string()).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct Counters {
    computed: AtomicUsize,
    skipped: AtomicUsize,
    lost: AtomicUsize,
    recovered: AtomicUsize,
}

static STALE_COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Claim an item. A claim older than the lease is moved aside (only one
/// contender's rename succeeds) and the claim retried once.
fn claim(store: &Store, hash: &str, lease: Duration, c: &Counters) -> Result<bool> {
    let path = store.claims_dir().join(format!("{hash}.claim"));
    let body = Writer::new("CLAIM").field("item", hash).field("owner", std::process::id()).finish();
    if create_if_absent(&path, &body)? {
        return Ok(true);
    }
    let stale = fs::metadata(&path)
        .and_then(|m| m.modified())
        .map(|t| SystemTime::now().duration_since(t).unwrap_or_default() > lease)
        .unwrap_or(false);
    if stale {
        let n = STALE_COUNTER.fetch_add(1, Ordering::Relaxed);
        let aside = store.claims_dir().join(format!(".{hash}.stale-{}-{n}", std::process::id()));
        if fs::rename(&path, &aside).is_ok() {
            let _ = fs::remove_file(&aside);
            c.recovered.fetch_add(1, Ordering::Relaxed);
            return create_if_absent(&path, &body);
        }
    }
    Ok(false)
}

fn run_item(store: &Store, pair: &Pair, plan: &Plan, n: u64, lease: Duration, c: &Counters) -> Result<()> {
    let hash = pair.item_hash(n);
    let item_path = store.items_dir().join(format!("{hash}.txt"));
    if item_path.exists() {
        c.skipped.fetch_add(1, Ordering::Relaxed);
        return Ok(());
    }
    if !claim(store, &hash, lease, c)? {
        c.lost.fetch_add(1, Ordering::Relaxed);
        return Ok(());
    }
    // The holder of an earlier claim may have finished in between.
    if item_path.exists() {
        c.skipped.fetch_add(1, Ordering::Relaxed);
    } else {
        let rec = pair.item_record(n, plan.item(n));
        create_if_absent(&item_path, &rec.to_text())?;
        c.computed.fetch_add(1, Ordering::Relaxed);
    }
    let _ = fs::remove_file(store.claims_dir().join(format!("{hash}.claim")));
    Ok(())
}

/// Run the sweep with `opts.workers` threads and record every pair whose
/// items are complete.
pub fn congruence_sweep(store: &Store, opts: &SweepOptions) -> Result<SweepOutcome> {
    let pairs = sweep_pairs(store, opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::internal(format!("worker pool: {e}")))?;
    let c = Counters {
        computed: AtomicUsize::new(0),
        skipped: AtomicUsize::new(0),
        lost: AtomicUsize::new(0),
        recovered: AtomicUsize::new(0),
    };
    let items: usize = pairs.iter().map(|p| p.indices().len()).sum();
    pool.install(|| -> Result<()> {
        // Plans are only built for pairs that still have items to compute.
        let plans: Vec<Option<Plan>> = pairs
            .par_iter()
            .map(|p| {
                let missing = p.indices().iter().any(|&n| !store.items_dir().join(format!("{}.txt", p.item_hash(n))).exists());
                if missing {
                    p.plan(store).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        let work: Vec<(usize, u64)> = pairs
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.indices().into_iter().map(move |n| (i, n)))
            .collect();
        work.par_iter().try_for_each(|&(i, n)| match &plans[i] {
            Some(plan) => run_item(store, &pairs[i], plan, n, opts.lease, &c),
            None => {
                c.skipped.fetch_add(1, Ordering::Relaxed);
                Ok(())
            }
        })
    })?;
    let mut records = Vec::new();
    let mut pending = Vec::new();
    for p in &pairs {
        let mut values = BTreeMap::new();
        for n in p.indices() {
            match read_item(store, &p.item_hash(n))? {
                Some(item) if item.pair == *p && item.n == n => {
                    values.insert(n, item.values);
                }
                Some(_) => {
                    return Err(Error::Corrupt {
                        path: store.items_dir().join(format!("{}.txt", p.item_hash(n))),
                        msg: "item does not match its hash".into(),
                    })
                }
                None => break,
            }
        }
        if values.len() < p.indices().len() {
            pending.push((p.left, p.right));
            continue;
        }
        let congruence = assemble(p.kind, p.bound, p.precision, p.policy, &values)?;
        let rec = CongruenceRecord::new(p.left, p.right, congruence)?;
        let hash = store.record_congruence(&rec)?;
        records.push((hash, rec));
    }
    let stats = SweepStats {
        pairs: pairs.len(),
        items,
        computed: c.computed.into_inner(),
        skipped: c.skipped.into_inner(),
        lost_claims: c.lost.into_inner(),
        recovered_claims: c.recovered.into_inner(),
    };
    log::info!("sweep: {stats:?}, {} pending", pending.len());
    Ok(SweepOutcome { stats, records, pending })
}

/// Compute one pair directly, without items, and record it.
pub fn pair_congruence(store: &Store, pair: &Pair) -> Result<(String, CongruenceRecord)> {
    let plan = pair.plan(store)?;
    let values: BTreeMap<u64, Vec<Valuation>> = pair.indices().into_iter().map(|n| (n, plan.item(n))).collect();
    let congruence = assemble(pair.kind, pair.bound, pair.precision, pair.policy, &values)?;
    let rec = CongruenceRecord::new(pair.left, pair.right, congruence)?;
    Ok((store.record_congruence(&rec)?, rec))
}
