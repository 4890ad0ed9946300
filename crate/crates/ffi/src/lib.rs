//! C ABI over `metaeis`.
//!
//! Every entry point returns a [`MetaeisStatus`]; on failure the message is
//! kept per thread and read back with [`metaeis_last_error`]. Strings handed
//! out by the library are owned by the caller and released with
//! [`metaeis_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metaeis::metaplectic::MetaplecticDatum;
use metaeis::sl2::{self, SL2Context};
use metaeis::{report, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetaeisStatus {
    Ok = 0,
    /// Malformed or inadmissible input.
    Input = 1,
    /// An internal consistency check failed.
    Invariant = 2,
    NullPointer = 3,
    Utf8 = 4,
    Panic = 5,
}

/// A metaplectic datum `(G, n)`.
pub struct MetaeisDatum(MetaplecticDatum);

/// The rank-one Hecke module for a fixed `n`.
pub struct MetaeisSl2(SL2Context);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    // interior NULs would truncate the message silently on the C side
    let msg = CString::new(msg.replace('\0', "?")).expect("no NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(MetaeisStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_invariant() { MetaeisStatus::Invariant } else { MetaeisStatus::Input };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MetaeisStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MetaeisStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal abort: {msg}"));
            MetaeisStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MetaeisStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(MetaeisStatus::Utf8, format!("{what} is not UTF-8: {e}")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned(text: String) -> *mut c_char {
    CString::new(text.replace('\0', "?")).expect("no NUL").into_raw()
}

unsafe fn put_json(out: *mut *mut c_char, v: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string(v).expect("json");
    put(out, owned(text), "out")
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn metaeis_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn metaeis_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn metaeis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the datum for a Cartan label such as `"B3"` and `n >= 1`.
///
/// # Safety
/// `label` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_new(label: *const c_char, n: i64, out: *mut *mut MetaeisDatum) -> MetaeisStatus {
    guard(|| {
        let label = str_arg(label, "label")?;
        let d = report::datum(label, n)?;
        put(out, Box::into_raw(Box::new(MetaeisDatum(d))), "out")
    })
}

/// # Safety
/// `d` must come from [`metaeis_datum_new`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_free(d: *mut MetaeisDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_rank(d: *const MetaeisDatum, out: *mut usize) -> MetaeisStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        put(out, d.0.rank(), "out")
    })
}

/// Writes the `rank * rank` row-major basis of the sharp sublattice, in
/// simple-coroot coordinates, into `buf` of length `len`.
///
/// # Safety
/// `d` must be a live handle; `buf` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_lambda_sharp(d: *const MetaeisDatum, buf: *mut i64, len: usize) -> MetaeisStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        let flat: Vec<i64> = d.0.lambda_sharp.iter().flatten().copied().collect();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < flat.len() {
            return Err(Failure(MetaeisStatus::Input, format!("buffer holds {len} values, need {}", flat.len())));
        }
        ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len());
        Ok(())
    })
}

/// Whether `mu` (length `rank`) lies in the sharp sublattice.
///
/// # Safety
/// `d` must be a live handle; `mu` must hold `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_in_sharp(
    d: *const MetaeisDatum,
    mu: *const i64,
    len: usize,
    out: *mut bool,
) -> MetaeisStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        if mu.is_null() {
            return Err(null("mu"));
        }
        if len != d.0.rank() {
            return Err(Failure(MetaeisStatus::Input, format!("expected {} coordinates, got {len}", d.0.rank())));
        }
        let mu = std::slice::from_raw_parts(mu, len);
        put(out, d.0.in_sharp(mu), "out")
    })
}

/// Dual group profile (type, cocenter, xi report) as a JSON object.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_datum_profile_json(d: *const MetaeisDatum, out: *mut *mut c_char) -> MetaeisStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| null("datum"))?;
        let p = d.0.profile()?;
        put_json(out, &serde_json::to_value(p).expect("json"))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_sl2_new(n: i64, out: *mut *mut MetaeisSl2) -> MetaeisStatus {
    guard(|| {
        let ctx = SL2Context::new(n)?;
        put(out, Box::into_raw(Box::new(MetaeisSl2(ctx))), "out")
    })
}

/// # Safety
/// `s` must come from [`metaeis_sl2_new`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn metaeis_sl2_free(s: *mut MetaeisSl2) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Applies the Hecke functor of the `m`-th irreducible to `cells`, given as
/// `"k:shift,k:shift,..."`. The result maps each cell index to a Laurent
/// polynomial `{"shift": multiplicity}`.
///
/// # Safety
/// `s` must be a live handle; `cells` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_sl2_hecke_json(
    s: *const MetaeisSl2,
    m: u32,
    cells: *const c_char,
    out: *mut *mut c_char,
) -> MetaeisStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sl2"))?;
        let x = report::parse_cells(str_arg(cells, "cells")?)?;
        let y = sl2::hecke_of_irreducible(&s.0, m, &x)?;
        put_json(out, &serde_json::to_value(&y).expect("json"))
    })
}

/// Stalk of the IC sheaf of degree `d` on the stratum of degree `r > d`.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_sl2_stalk_json(s: *const MetaeisSl2, d: i64, r: i64, out: *mut *mut c_char) -> MetaeisStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sl2"))?;
        let entry = sl2::stalk_table(&s.0, d, r)?;
        put_json(out, &serde_json::to_value(entry).expect("json"))
    })
}

/// Runs the command line with `argv[0..argc]` (without the program name) and
/// hands back its stdout, stderr and exit code. The returned status reflects
/// only the call itself; command failures show up in `exit_code`.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn metaeis_run(
    argc: usize,
    argv: *const *const c_char,
    exit_code: *mut i32,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> MetaeisStatus {
    guard(|| {
        if argc > 0 && argv.is_null() {
            return Err(null("argv"));
        }
        if exit_code.is_null() || out_stdout.is_null() || out_stderr.is_null() {
            return Err(null("out"));
        }
        let mut args = vec!["metaeis".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argv entry")?.to_string());
        }
        let (code, stdout, stderr) = metaeis::cli::main_with_args(args);
        put(exit_code, code, "exit_code")?;
        put(out_stdout, owned(stdout), "out_stdout")?;
        put(out_stderr, owned(stderr), "out_stderr")
    })
}
