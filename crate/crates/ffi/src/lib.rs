//! C ABI over hecke-core.
//!
//! Objects are opaque handles created by `*_open`/`*_load` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`HeckeStatus`]; on failure the message is available from
//! [`hecke_last_error`] on the same thread until the next call. Strings
//! returned through out-parameters are owned by the caller and released
//! with [`hecke_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use hecke_core::arith::local_ring::Valuation;
use hecke_core::congruence::{self, sweep::Pair, IndexPolicy};
use hecke_core::hecke::PadicEigenform;
use hecke_core::store::entities::Entity;
use hecke_core::store::keys::{EigenformKey, Endpoint, QOrbitKey};
use hecke_core::store::Store;
use hecke_core::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, malformed key or out-of-range argument.
    InvalidArgument = 1,
    /// The requested data has not been computed or stored.
    NotComputed = 2,
    /// A computation failed, e.g. the precision cap was reached.
    ComputationFailed = 3,
    /// A stored record is damaged.
    StoreCorrupt = 4,
    /// Filesystem error.
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// A store directory.
pub struct HeckeStore {
    store: Store,
}

/// One Q_l-orbit of eigenforms, loaded from a store.
pub struct HeckeEigenform {
    key: EigenformKey,
    form: PadicEigenform,
}

/// Exponent of a congruence in lambda-units of the comparison ring.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HeckeExponent {
    pub lambda: u64,
    /// Ramification index of the comparison ring.
    pub e: u32,
    /// Nonzero when every compared defect vanished at the working precision.
    pub at_least: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HeckeStatus {
    match e {
        Error::NotComputed(_) => HeckeStatus::NotComputed,
        Error::Corrupt { .. } => HeckeStatus::StoreCorrupt,
        Error::Io(_) => HeckeStatus::Io,
        Error::Invalid(_)
        | Error::Parse { .. }
        | Error::Dangling(_)
        | Error::NotPrime(_)
        | Error::ZeroPrecision
        | Error::BoundExceeded { .. }
        | Error::ResidueCharacteristic(..) => HeckeStatus::InvalidArgument,
        _ => HeckeStatus::ComputationFailed,
    }
}

/// Run `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> HeckeStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HeckeStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            HeckeStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::Invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::Invalid(format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Error> {
    p.as_mut().ok_or_else(|| Error::Invalid(format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    p.as_ref().ok_or_else(|| Error::Invalid(format!("{what} handle is null")))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn exponent(v: &Valuation) -> HeckeExponent {
    HeckeExponent { lambda: v.lambda, e: v.e, at_least: u8::from(!v.is_exact()) }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hecke_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hecke_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Open the store at `path`; with `create` nonzero, create it if missing.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_open(path: *const c_char, create: u8, out: *mut *mut HeckeStore) -> HeckeStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let path = PathBuf::from(str_arg(path, "path")?);
        let store = if create != 0 { Store::init(path)? } else { Store::open(path)? };
        *out = Box::into_raw(Box::new(HeckeStore { store }));
        Ok(())
    })
}

/// # Safety
/// `store` must be null or a handle from [`hecke_store_open`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_free(store: *mut HeckeStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// Ingest an HMAT file; the Q-orbit key (`L.W.n`) is returned in `key_out`.
///
/// # Safety
/// Pointers must be valid; `key_out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_ingest(
    store: *const HeckeStore,
    hmat_path: *const c_char,
    key_out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let key_out = out_arg(key_out, "key_out")?;
        *key_out = ptr::null_mut();
        let s = handle(store, "store")?;
        let key = s.store.ingest_path(std::path::Path::new(str_arg(hmat_path, "hmat_path")?))?;
        *key_out = owned(key.to_string());
        Ok(())
    })
}

/// Decompose a Q-orbit at `ell` to precision `precision`, separating
/// Q_l-orbits with working precision at most `cap`. Counts of l-adic orbits
/// and eigenforms are written to the out-parameters.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_decompose(
    store: *const HeckeStore,
    key: *const c_char,
    ell: u64,
    precision: u32,
    cap: u32,
    orbits_out: *mut usize,
    eigenforms_out: *mut usize,
) -> HeckeStatus {
    guard(|| {
        let s = handle(store, "store")?;
        let key: QOrbitKey = str_arg(key, "key")?.parse()?;
        let (o, e) = (out_arg(orbits_out, "orbits_out")?, out_arg(eigenforms_out, "eigenforms_out")?);
        let d = s.store.decompose(key, ell, precision, cap)?;
        *o = d.orbits.len();
        *e = d.eigenforms.len();
        Ok(())
    })
}

/// Keys of the Q_l-orbits stored under a Q-orbit, one per line.
///
/// # Safety
/// Pointers must be valid; `keys_out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_ql_orbits(
    store: *const HeckeStore,
    key: *const c_char,
    ell: u64,
    keys_out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let keys_out = out_arg(keys_out, "keys_out")?;
        *keys_out = ptr::null_mut();
        let s = handle(store, "store")?;
        let key: QOrbitKey = str_arg(key, "key")?.parse()?;
        let a = s.store.query_ql_orbits(key, ell)?;
        let lines: String = a.eigenforms.iter().map(|f| format!("{}\n", f.key)).collect();
        *keys_out = owned(lines);
        Ok(())
    })
}

/// Load one eigenform (`L.W.n/l/i/j`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hecke_eigenform_load(
    store: *const HeckeStore,
    key: *const c_char,
    out: *mut *mut HeckeEigenform,
) -> HeckeStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = handle(store, "store")?;
        let key: EigenformKey = str_arg(key, "key")?.parse()?;
        let rec = s.store.eigenform(key)?;
        *out = Box::into_raw(Box::new(HeckeEigenform { key, form: rec.eigenform }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from [`hecke_eigenform_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hecke_eigenform_free(f: *mut HeckeEigenform) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Rank, precision N, ramification index e and coefficient bound.
///
/// # Safety
/// `f` must be a valid handle; null out-parameters are skipped.
#[no_mangle]
pub unsafe extern "C" fn hecke_eigenform_info(
    f: *const HeckeEigenform,
    rank: *mut usize,
    precision: *mut u32,
    e: *mut u32,
    bound: *mut u64,
) -> HeckeStatus {
    guard(|| {
        let f = &handle(f, "eigenform")?.form;
        if let Some(r) = rank.as_mut() {
            *r = f.rank;
        }
        if let Some(p) = precision.as_mut() {
            *p = f.precision();
        }
        if let Some(x) = e.as_mut() {
            *x = f.ring.e();
        }
        if let Some(b) = bound.as_mut() {
            *b = f.bound();
        }
        Ok(())
    })
}

/// The EIGF record of the eigenform.
///
/// # Safety
/// Pointers must be valid; `text_out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn hecke_eigenform_record(f: *const HeckeEigenform, text_out: *mut *mut c_char) -> HeckeStatus {
    guard(|| {
        let text_out = out_arg(text_out, "text_out")?;
        *text_out = ptr::null_mut();
        let f = handle(f, "eigenform")?;
        let rec = hecke_core::store::entities::EigenformRecord { key: f.key, eigenform: f.form.clone() };
        *text_out = owned(rec.to_text());
        Ok(())
    })
}

/// Power-basis coordinates of `b_n` as decimal residues separated by
/// commas.
///
/// # Safety
/// Pointers must be valid; `coords_out` receives an owned string.
#[no_mangle]
pub unsafe extern "C" fn hecke_eigenform_coefficient(
    f: *const HeckeEigenform,
    n: u64,
    coords_out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let coords_out = out_arg(coords_out, "coords_out")?;
        *coords_out = ptr::null_mut();
        let f = &handle(f, "eigenform")?.form;
        let b = f.coefficient(n).ok_or(Error::BoundExceeded { requested: n, available: f.bound() })?;
        let parts: Vec<String> = b.coords().iter().map(|c| c.to_string()).collect();
        *coords_out = owned(parts.join(","));
        Ok(())
    })
}

/// Strong congruence exponent of two loaded eigenforms over indices
/// `1..=bound` (0: the largest common bound), without touching the store.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hecke_congruence_strong(
    f: *const HeckeEigenform,
    g: *const HeckeEigenform,
    bound: u64,
    out: *mut HeckeExponent,
) -> HeckeStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let (f, g) = (&handle(f, "f")?.form, &handle(g, "g")?.form);
        let bound = if bound == 0 { f.bound().min(g.bound()) } else { bound };
        let c = congruence::congruence_exponent_strong(f, g, bound, IndexPolicy::All)?;
        *out = exponent(&c.exponent);
        Ok(())
    })
}

/// Compute and record the congruence between two stored endpoints (weak
/// when `right` is an orbit key, strong when it is an eigenform key). The
/// CONG record is returned in `record_out` if it is not null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hecke_store_congruence(
    store: *const HeckeStore,
    left: *const c_char,
    right: *const c_char,
    bound: u64,
    out: *mut HeckeExponent,
    record_out: *mut *mut c_char,
) -> HeckeStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let s = handle(store, "store")?;
        let left: Endpoint = str_arg(left, "left")?.parse()?;
        let right: Endpoint = str_arg(right, "right")?.parse()?;
        let pair = Pair::resolve(&s.store, left, right, (bound != 0).then_some(bound), false)?;
        let (_, rec) = congruence::pair_congruence(&s.store, &pair)?;
        *out = exponent(&rec.congruence.exponent);
        if let Some(r) = record_out.as_mut() {
            *r = owned(rec.to_text());
        }
        Ok(())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hecke_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
