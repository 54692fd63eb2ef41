//! The `hecke` command line. Human-readable tables by default; with
//! `--machine`, store records (concatenated, each starting with its
//! `KIND v1` header line).
//!
//! Exit codes: 0 ok, 2 usage or invalid input, 3 not computed,
//! 4 computation failure, 5 store corruption.

pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use crate::congruence::{self, sweep, Kind, SweepOptions, WitnessReport};
use crate::error::{Error, Result};
use crate::hecke::{hmat, level11};
use crate::store::entities::{EigenformRecord, Entity, OrbitRecord};
use crate::store::keys::{Endpoint, QOrbitKey};
use crate::store::query::LoweringStatus;
use crate::store::text::{self as rec_text, Writer};
use crate::store::Store;
use config::{CommandConfig, Partial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_COMPUTED: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;
pub const EXIT_CORRUPT: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "l-adic orbits of Hecke algebras and congruences between eigenforms")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Global {
    /// Store directory.
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// The prime l.
    #[arg(long, global = true)]
    pub ell: Option<u64>,
    /// l-adic precision N.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Coefficient bound replacing the stored (Sturm) bound.
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    /// Worker threads for the sweep.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Prime range `lo..hi` (half-open) for witnesses and exports.
    #[arg(long, global = true)]
    pub primes: Option<String>,
    /// Compare all coefficient indices across levels.
    #[arg(long, global = true)]
    pub include_all: bool,
    /// Cap on the working precision used to separate Q_l-orbits.
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    /// TOML file with defaults (also HECKE_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print store records instead of tables.
    #[arg(long, global = true)]
    pub machine: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Create an empty store.
    Init,
    /// Write the HMAT file of S_2(Gamma_0(11)) from point counts.
    GenLevel11 {
        /// Largest coefficient index.
        #[arg(long = "up-to", default_value_t = 100)]
        up_to: u64,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ingest HMAT files, one Q-orbit each.
    Ingest { paths: Vec<PathBuf> },
    /// Compute l-adic orbits and eigenforms of a Q-orbit.
    Decompose { key: QOrbitKey },
    /// Show stored l-adic orbits of a Q-orbit.
    Orbits { key: QOrbitKey },
    /// Congruence between an eigenform and an orbit (weak) or two eigenforms
    /// (strong).
    Congruence { left: Endpoint, right: Endpoint },
    /// All-pairs congruence sweep at l.
    Sweep {
        #[arg(long, value_enum, default_value_t = KindFilter::Both)]
        kind: KindFilter,
        /// Restrict to these levels (comma separated).
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<u64>>,
    },
    /// Primes p with a_p = +-(p+1) mod lambda^m.
    Witnesses {
        /// A Q-orbit (every eigenform at l) or one eigenform.
        key: String,
        /// Exponent in lambda-units.
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Database queries.
    #[command(subcommand)]
    Query(Query),
    /// Check the whole store.
    Validate,
}

#[derive(Subcommand, Debug)]
pub enum Query {
    /// Q_l-orbits of a Q-orbit.
    Q1 { key: QOrbitKey },
    /// Smallest-weight stored eigenforms congruent mod l^n.
    Q2 {
        key: QOrbitKey,
        /// Normalised exponent, an integer or fraction.
        #[arg(long)]
        n: Ratio<u64>,
    },
    /// Export characteristic polynomials of T_p per Q_l-orbit.
    Q3 {
        key: QOrbitKey,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindFilter {
    Weak,
    Strong,
    Both,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotComputed(_) => EXIT_NOT_COMPUTED,
        Error::Corrupt { .. } => EXIT_CORRUPT,
        Error::Parse { .. }
        | Error::Invalid(_)
        | Error::Dangling(_)
        | Error::NotPrime(_)
        | Error::ZeroPrecision
        | Error::NonCommuting(..)
        | Error::DuplicateLabel(_)
        | Error::Dimension(_)
        | Error::BoundExceeded { .. }
        | Error::ResidueCharacteristic(..) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parse `args`, run, write output to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, env, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn resolve(g: &Global, env: &dyn Fn(&str) -> Option<String>) -> Result<CommandConfig> {
    let flags = Partial {
        store: g.store.clone(),
        ell: g.ell,
        precision: g.precision,
        bound: g.bound,
        workers: g.workers,
        primes: g.primes.clone(),
        include_all: g.include_all.then_some(true),
        cap: g.cap,
    };
    let file = match g.config.clone().or_else(|| env("HECKE_CONFIG").map(PathBuf::from)) {
        Some(p) => config::from_file(&p)?,
        None => Partial::default(),
    };
    CommandConfig::resolve(&flags, &config::from_env(env)?, &file)
}

fn execute(cli: &Cli, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write) -> Result<i32> {
    let cfg = resolve(&cli.global, env)?;
    log::info!("resolved config: {}", cfg.describe());
    let machine = cli.global.machine;
    match &cli.command {
        Command::Init => {
            let store = Store::init(&cfg.store)?;
            writeln!(out, "initialised store at {}", store.root().display())?;
        }
        Command::GenLevel11 { up_to, out: path } => {
            let text = hmat::write(&level11::space(*up_to)?);
            match path {
                Some(p) => {
                    std::fs::write(p, &text)?;
                    writeln!(out, "wrote {}", p.display())?;
                }
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Ingest { paths } => {
            if paths.is_empty() {
                return Err(Error::Invalid("no input files".into()));
            }
            let store = Store::init(&cfg.store)?;
            for p in paths {
                let key = store.ingest_path(p)?;
                if machine {
                    writeln!(out, "{key}")?;
                } else {
                    writeln!(out, "{} -> {key}", p.display())?;
                }
            }
        }
        Command::Decompose { key } => {
            let store = Store::open(&cfg.store)?;
            let d = store.decompose(*key, cfg.ell()?, cfg.precision, cfg.cap)?;
            print_orbits(out, machine, &d.orbits, &d.eigenforms)?;
        }
        Command::Orbits { key } => {
            let store = Store::open(&cfg.store)?;
            let ell = cfg.ell()?;
            let orbits = store.orbits(*key, ell)?;
            let eigenforms = store.eigenforms(*key, ell)?;
            print_orbits(out, machine, &orbits, &eigenforms)?;
        }
        Command::Congruence { left, right } => {
            let store = Store::open(&cfg.store)?;
            let pair = sweep::Pair::resolve(&store, *left, *right, cfg.bound, cfg.include_all)?;
            let (hash, rec) = congruence::pair_congruence(&store, &pair)?;
            if machine {
                out.write_all(rec.to_text().as_bytes())?;
            } else {
                let c = &rec.congruence;
                writeln!(out, "{} congruence {} ~ {}", c.kind, rec.left, rec.right)?;
                writeln!(out, "  exponent    {}", describe_exponent(&c.exponent))?;
                writeln!(out, "  bound {}  precision {}  indices {}", c.bound, c.precision, c.policy)?;
                writeln!(out, "  record      {hash}")?;
            }
        }
        Command::Sweep { kind, levels } => {
            let store = Store::open(&cfg.store)?;
            let mut opts = SweepOptions::new(cfg.ell()?);
            opts.workers = cfg.workers;
            opts.bound = cfg.bound;
            opts.include_all = cfg.include_all;
            opts.levels = levels.clone();
            opts.kinds = match kind {
                KindFilter::Weak => vec![Kind::Weak],
                KindFilter::Strong => vec![Kind::Strong],
                KindFilter::Both => vec![Kind::Weak, Kind::Strong],
            };
            let o = congruence::congruence_sweep(&store, &opts)?;
            if machine {
                for (_, rec) in &o.records {
                    out.write_all(rec.to_text().as_bytes())?;
                }
            } else {
                let s = &o.stats;
                writeln!(
                    out,
                    "{} pairs, {} items: {} computed, {} already done, {} claimed elsewhere, {} stale claims recovered",
                    s.pairs, s.items, s.computed, s.skipped, s.lost_claims, s.recovered_claims
                )?;
                for (hash, rec) in &o.records {
                    let c = &rec.congruence;
                    writeln!(out, "{:<7}{:<22}{:<22}{:<20}{}", c.kind, rec.left, rec.right, describe_exponent(&c.exponent), &hash[..12])?;
                }
                for (l, r) in &o.pending {
                    writeln!(out, "pending {l} ~ {r}")?;
                }
            }
            if !o.pending.is_empty() {
                return Ok(EXIT_NOT_COMPUTED);
            }
        }
        Command::Witnesses { key, m } => {
            let store = Store::open(&cfg.store)?;
            let ell = cfg.ell()?;
            let forms = match key.parse::<Endpoint>() {
                Ok(Endpoint::Eigenform(f)) if f.orbit.ell == ell => vec![store.eigenform(f)?],
                Ok(e) => return Err(Error::Invalid(format!("{e} is not an eigenform at l = {ell}"))),
                Err(_) => store.eigenforms(key.parse()?, ell)?,
            };
            for f in forms {
                let level = f.key.qorbit().level;
                let report = congruence::level_raising_witnesses(&f.eigenform, level, *m, cfg.primes.clone())?;
                print_witnesses(out, machine, &f, &report)?;
            }
        }
        Command::Query(q) => return query(q, &cfg, machine, out),
        Command::Validate => {
            let store = Store::open(&cfg.store)?;
            let report = store.validate()?;
            for p in &report.problems {
                writeln!(out, "{p}")?;
            }
            writeln!(out, "{} files checked, {} problems", report.files, report.problems.len())?;
            if !report.is_ok() {
                return Ok(EXIT_CORRUPT);
            }
        }
    }
    Ok(EXIT_OK)
}

fn query(q: &Query, cfg: &CommandConfig, machine: bool, out: &mut dyn Write) -> Result<i32> {
    let store = Store::open(&cfg.store)?;
    let ell = cfg.ell()?;
    match q {
        Query::Q1 { key } => {
            let a = store.query_ql_orbits(*key, ell)?;
            if machine {
                for f in &a.eigenforms {
                    out.write_all(f.to_text().as_bytes())?;
                }
            } else {
                eigenform_table(out, &a.eigenforms)?;
                for (o, u) in &a.unresolved {
                    writeln!(out, "{o}: unresolved block of rank {} ({} eigenforms) at precision {}", u.rank, u.members, u.attained)?;
                }
            }
            if !a.unresolved.is_empty() {
                return Ok(EXIT_FAILURE);
            }
        }
        Query::Q2 { key, n } => {
            let w = store.query_weight_lowering(*key, ell, *n)?;
            let status = match &w.status {
                LoweringStatus::Found => "found".to_string(),
                LoweringStatus::NoneAttains => format!("no congruence attains {n}"),
                LoweringStatus::Incomplete(m) => format!("incomplete: {} pairs without a strong record", m.len()),
            };
            if machine {
                let mut wr = Writer::new("LOWERING");
                wr.field("key", key).field("ell", ell).field("n", n).field("status", &status);
                for (i, m) in w.matches.iter().enumerate() {
                    let e = if m.at_least { format!(">={}", m.exponent) } else { m.exponent.to_string() };
                    wr.field(&format!("match.{}", i + 1), format!("{} {} {} {e}", m.target, m.source, m.weight));
                }
                if let LoweringStatus::Incomplete(missing) = &w.status {
                    for (i, (a, b)) in missing.iter().enumerate() {
                        wr.field(&format!("missing.{}", i + 1), format!("{a} {b}"));
                    }
                }
                out.write_all(wr.finish().as_bytes())?;
            } else {
                writeln!(out, "{status}")?;
                for m in &w.matches {
                    let e = if m.at_least { format!(">= {}", m.exponent) } else { m.exponent.to_string() };
                    writeln!(out, "  {} (weight {}) ~ {} exponent {e}", m.target, m.weight, m.source)?;
                }
                if let LoweringStatus::Incomplete(missing) = &w.status {
                    for (a, b) in missing {
                        writeln!(out, "  missing {a} ~ {b}")?;
                    }
                }
            }
            if matches!(w.status, LoweringStatus::Incomplete(_)) {
                return Ok(EXIT_NOT_COMPUTED);
            }
        }
        Query::Q3 { key, out: dir } => {
            let primes = cfg_primes(cfg);
            for p in store.export_hecke_polynomials(*key, ell, primes, dir)? {
                if machine {
                    out.write_all(std::fs::read_to_string(&p)?.as_bytes())?;
                } else {
                    writeln!(out, "{}", p.display())?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Exports use every prime up to the bound unless a range was given
/// explicitly.
fn cfg_primes(cfg: &CommandConfig) -> Option<std::ops::Range<u64>> {
    let explicit = cfg.origin.iter().any(|(n, _, s)| *n == "primes" && *s != config::Source::Default);
    explicit.then(|| cfg.primes.clone())
}

fn describe_exponent(v: &crate::arith::local_ring::Valuation) -> String {
    let norm = v.normalised();
    if v.is_exact() {
        format!("{norm}")
    } else {
        format!(">= {norm}")
    }
}

fn print_orbits(out: &mut dyn Write, machine: bool, orbits: &[OrbitRecord], eigenforms: &[EigenformRecord]) -> Result<()> {
    if machine {
        for o in orbits {
            out.write_all(o.to_text().as_bytes())?;
        }
        for f in eigenforms {
            out.write_all(f.to_text().as_bytes())?;
        }
        return Ok(());
    }
    writeln!(out, "{:<18}{:>6}{:>4}  {:<16}{:>11}", "orbit", "rank", "f", "basis indices", "eigenforms")?;
    for o in orbits {
        writeln!(
            out,
            "{:<18}{:>6}{:>4}  {:<16}{:>11}",
            o.key.to_string(),
            o.rank,
            o.residue_degree,
            rec_text::list(&o.basis_indices),
            o.eigenforms
        )?;
        if let Some(u) = &o.unresolved {
            writeln!(out, "  unresolved block: rank {}, {} eigenforms, precision {}", u.rank, u.members, u.attained)?;
        }
    }
    eigenform_table(out, eigenforms)
}

fn eigenform_table(out: &mut dyn Write, eigenforms: &[EigenformRecord]) -> Result<()> {
    writeln!(out, "{:<20}{:>6}{:>4}{:>4}{:>6}{:>10}  a_2..", "eigenform", "rank", "e", "f", "N", "attained")?;
    for f in eigenforms {
        let e = &f.eigenform;
        let shown: Vec<String> = e.coefficients.iter().skip(1).take(4).map(|b| rec_text::list(b.coords())).collect();
        writeln!(
            out,
            "{:<20}{:>6}{:>4}{:>4}{:>6}{:>10}  {}",
            f.key.to_string(),
            e.rank,
            e.ring.e(),
            e.ring.f(),
            e.precision(),
            e.attained,
            shown.join(" ")
        )?;
    }
    Ok(())
}

fn print_witnesses(out: &mut dyn Write, machine: bool, f: &EigenformRecord, r: &WitnessReport) -> Result<()> {
    if machine {
        let mut w = Writer::new("WITNESSES");
        w.field("key", f.key)
            .field("level", r.level)
            .field("m", r.m)
            .field("primes", format!("{}..{}", r.primes.start, r.primes.end))
            .field("scanned", r.scanned);
        for x in &r.witnesses {
            let sign = if x.sign > 0 { "+" } else { "-" };
            w.field(&format!("witness.{}", x.p), format!("{sign} {}", rec_text::valuation(&x.valuation)));
        }
        out.write_all(w.finish().as_bytes())?;
        return Ok(());
    }
    writeln!(
        out,
        "{}: {} of {} primes in {}..{} satisfy a_p = +-(p+1) mod lambda^{}",
        f.key,
        {
            let mut ps: Vec<u64> = r.witnesses.iter().map(|w| w.p).collect();
            ps.dedup();
            ps.len()
        },
        r.scanned,
        r.primes.start,
        r.primes.end,
        r.m
    )?;
    for x in &r.witnesses {
        let sign = if x.sign > 0 { "+" } else { "-" };
        writeln!(out, "  p = {:<6} sign {sign}  valuation {}", x.p, describe_exponent(&x.valuation))?;
    }
    Ok(())
}

/// Entry point for the binary: real arguments and environment, stdout and
/// stderr.
pub fn main_with_env() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).format_timestamp(None).init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &|k| std::env::var(k).ok(), &mut stdout.lock(), &mut stderr.lock())
}
