//! C ABI over `origami-kz`. Surfaces are opaque handles; every call
//! returns an `OkzStatus`, results come back through out-pointers, and
//! strings returned by the library are freed with `okz_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use origami_kz::cli::{self, CertifyOptions, CommandError, CommandResult};
use origami_kz::lyapunov::LyapunovConfig;
use origami_kz::{Origami, OrigamiInput};

/// Status codes; the nonzero values below 7 match the exit codes of the
/// `origami` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OkzStatus {
    Ok = 0,
    Failure = 1,
    Parse = 2,
    NotTransitive = 3,
    NotVeechFull = 4,
    Undecided = 5,
    CensusLimit = 6,
    NullPointer = 7,
    InvalidUtf8 = 8,
}

/// Opaque handle to a square-tiled surface.
pub struct OkzOrigami {
    inner: Origami,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(code: i32) -> OkzStatus {
    match code {
        0 => OkzStatus::Ok,
        2 => OkzStatus::Parse,
        3 => OkzStatus::NotTransitive,
        4 => OkzStatus::NotVeechFull,
        5 => OkzStatus::Undecided,
        6 => OkzStatus::CensusLimit,
        _ => OkzStatus::Failure,
    }
}

fn fail(e: CommandError) -> OkzStatus {
    set_error(&e.message);
    status_of(e.code)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, OkzStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(OkzStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        OkzStatus::InvalidUtf8
    })
}

unsafe fn handle<'a>(o: *const OkzOrigami) -> Result<&'a Origami, OkzStatus> {
    if o.is_null() {
        set_error("null surface handle");
        return Err(OkzStatus::NullPointer);
    }
    Ok(&(*o).inner)
}

unsafe fn give_handle(o: Origami, out: *mut *mut OkzOrigami) -> OkzStatus {
    *out = Box::into_raw(Box::new(OkzOrigami { inner: o }));
    OkzStatus::Ok
}

/// Writes the report JSON to `out`; an undecided report is still written.
unsafe fn give_report(r: CommandResult, out: *mut *mut c_char) -> OkzStatus {
    if out.is_null() {
        set_error("null output pointer");
        return OkzStatus::NullPointer;
    }
    *out = ptr::null_mut();
    match r {
        Ok(report) => {
            let text = cli::render(&report);
            *out = CString::new(text).expect("JSON has no NUL").into_raw();
            status_of(report.exit_code())
        }
        Err(e) => fail(e),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Builds a surface from cycle notation; `n = 0` infers the square count.
///
/// # Safety
/// `h` and `v` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_new(
    h: *const c_char,
    v: *const c_char,
    n: usize,
    out: *mut *mut OkzOrigami,
) -> OkzStatus {
    if out.is_null() {
        set_error("null output pointer");
        return OkzStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let h = try_status!(read_str(h));
    let v = try_status!(read_str(v));
    match Origami::from_cycles(h, v, (n > 0).then_some(n), None) {
        Ok(o) => give_handle(o, out),
        Err(e) => fail(e.into()),
    }
}

/// Builds a surface from the JSON input format (`name`, `h`, `v`, `n`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_from_json(json: *const c_char, out: *mut *mut OkzOrigami) -> OkzStatus {
    if out.is_null() {
        set_error("null output pointer");
        return OkzStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let text = try_status!(read_str(json));
    match OrigamiInput::from_json(text).and_then(|i| i.to_origami()) {
        Ok(o) => give_handle(o, out),
        Err(e) => fail(e.into()),
    }
}

/// # Safety
/// `o` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_free(o: *mut OkzOrigami) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_squares(o: *const OkzOrigami, out: *mut usize) -> OkzStatus {
    let o = try_status!(handle(o));
    if out.is_null() {
        return OkzStatus::NullPointer;
    }
    *out = o.n();
    OkzStatus::Ok
}

/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_genus(o: *const OkzOrigami, out: *mut usize) -> OkzStatus {
    let o = try_status!(handle(o));
    if out.is_null() {
        return OkzStatus::NullPointer;
    }
    match o.stratum() {
        Ok(s) => {
            *out = s.genus;
            OkzStatus::Ok
        }
        Err(e) => fail(e.into()),
    }
}

/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_origami_is_veech_full(o: *const OkzOrigami, out: *mut bool) -> OkzStatus {
    let o = try_status!(handle(o));
    if out.is_null() {
        return OkzStatus::NullPointer;
    }
    *out = o.is_veech_full();
    OkzStatus::Ok
}

/// Invariants as JSON, in the default directions.
///
/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_analyze_json(o: *const OkzOrigami, out: *mut *mut c_char) -> OkzStatus {
    let o = try_status!(handle(o));
    give_report(cli::analyze(o, &cli::DEFAULT_DIRECTIONS, 10_000), out)
}

/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_monodromy_json(o: *const OkzOrigami, out: *mut *mut c_char) -> OkzStatus {
    let o = try_status!(handle(o));
    give_report(cli::monodromy(o), out)
}

/// All certificates with default words; `OkzStatus::Undecided` still
/// writes the report.
///
/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_certify_json(o: *const OkzOrigami, out: *mut *mut c_char) -> OkzStatus {
    let o = try_status!(handle(o));
    give_report(cli::certify(o, &CertifyOptions::default()), out)
}

/// # Safety
/// `o` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_lyapunov_json(
    o: *const OkzOrigami,
    iterations: u64,
    trials: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> OkzStatus {
    let o = try_status!(handle(o));
    let cfg = LyapunovConfig { iterations, trials, seed, ..Default::default() };
    give_report(cli::lyapunov(o, &cfg), out)
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn okz_census_json(max_squares: usize, out: *mut *mut c_char) -> OkzStatus {
    give_report(cli::run_census(max_squares), out)
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn okz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; owned by the library
/// and valid until the next call.
#[no_mangle]
pub extern "C" fn okz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
