//! C ABI over the `hallbasis` crate.
//!
//! A session owns one Hall set and its decomposition cache. Every function returns an
//! `HbStatus`; on failure the message is available from `hb_last_error_message` on the
//! same thread. Strings returned through out-parameters must be released with
//! `hb_string_free`, sessions with `hb_session_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use hallbasis::{witt_dimension, Decomposer, HallError, HallOrder, HallSet, OrderSpec};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    Capacity = 5,
    NotMember = 6,
    OutOfRange = 7,
    Internal = 8,
}

/// Opaque handle to a Hall set with its decomposer.
pub struct HbSession {
    dec: Decomposer,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &HallError) -> HbStatus {
    match err {
        HallError::Capacity { .. } => HbStatus::Capacity,
        HallError::Parse { .. } | HallError::LetterOutOfRange { .. } => HbStatus::Parse,
        HallError::NotMember(_) | HallError::NotOrdered { .. } | HallError::Domain { .. } => {
            HbStatus::NotMember
        }
        HallError::Config(_) => HbStatus::Config,
        _ => HbStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (HbStatus, String)>) -> HbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HbStatus::Internal
        }
    }
}

fn hall(err: HallError) -> (HbStatus, String) {
    (status_of(&err), err.to_string())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (HbStatus, String)> {
    if p.is_null() {
        return Err((HbStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HbStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn session<'a>(p: *const HbSession) -> Result<&'a HbSession, (HbStatus, String)> {
    p.as_ref()
        .ok_or((HbStatus::NullPointer, "null session".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (HbStatus, String)> {
    if out.is_null() {
        return Err((HbStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn to_c(s: String) -> Result<*mut c_char, (HbStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (HbStatus::Internal, "string contains NUL".into()))
}

/// Creates a session for `order` (`length`, `lyndon`, `fibo`, `supergeom`, `sharp:<n>`).
/// `alphabet` 0 selects the order's default alphabet size.
///
/// # Safety
/// `order` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hb_session_new(
    order: *const c_char,
    alphabet: u32,
    max_len: u32,
    out: *mut *mut HbSession,
) -> HbStatus {
    guard(|| {
        let name = read_str(order)?;
        let alphabet = (alphabet != 0).then_some(alphabet as usize);
        let spec = OrderSpec::parse(name, alphabet).map_err(hall)?;
        let o = HallOrder::standalone(spec).map_err(hall)?;
        let hs = HallSet::generate(o, max_len as usize).map_err(hall)?;
        let boxed = Box::new(HbSession {
            dec: Decomposer::new(Arc::new(hs)),
        });
        write_out(out, Box::into_raw(boxed))
    })
}

/// Releases a session. Null is ignored.
///
/// # Safety
/// `session` must come from `hb_session_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hb_session_free(session: *mut HbSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of Hall elements of length `len`.
///
/// # Safety
/// `session` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_hall_count(
    session: *const HbSession,
    len: u32,
    out: *mut u64,
) -> HbStatus {
    guard(|| {
        let s = self::session(session)?;
        let level = s
            .dec
            .hall_set()
            .elements_of_length(len as usize)
            .map_err(hall)?;
        write_out(out, level.len() as u64)
    })
}

/// The `index`-th Hall element of length `len`, in increasing order, as bracket text.
///
/// # Safety
/// `session` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hb_hall_element(
    session: *const HbSession,
    len: u32,
    index: u64,
    out: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let s = self::session(session)?;
        let level = s
            .dec
            .hall_set()
            .elements_of_length(len as usize)
            .map_err(hall)?;
        let t = *level
            .get(index as usize)
            .ok_or((HbStatus::OutOfRange, format!("index {index} out of range")))?;
        write_out(out, to_c(s.dec.magma().format(t))?)
    })
}

/// Decomposes `[a, b]` and returns the series as a JSON document.
///
/// # Safety
/// `session`, `a`, `b` and `out` must be valid pointers; `a`, `b` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hb_decompose(
    session: *const HbSession,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let s = self::session(session)?;
        let m = s.dec.magma();
        let ta = m.parse(read_str(a)?).map_err(hall)?;
        let tb = m.parse(read_str(b)?).map_err(hall)?;
        let series = s.dec.decompose(ta, tb).map_err(hall)?;
        let doc = s.dec.series_json(ta, tb, &series, None);
        let text = serde_json::to_string(&doc).map_err(|e| (HbStatus::Internal, e.to_string()))?;
        write_out(out, to_c(text)?)
    })
}

/// The l1 norm of `[a, b]` on the basis, as a decimal string.
///
/// # Safety
/// `session`, `a`, `b` and `out` must be valid pointers; `a`, `b` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hb_decompose_norm(
    session: *const HbSession,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let s = self::session(session)?;
        let m = s.dec.magma();
        let ta = m.parse(read_str(a)?).map_err(hall)?;
        let tb = m.parse(read_str(b)?).map_err(hall)?;
        let series = s.dec.decompose(ta, tb).map_err(hall)?;
        write_out(out, to_c(series.norm().to_string())?)
    })
}

/// Dimension of the degree-`n` component of the free Lie algebra on `k` letters, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hb_witt_dimension(k: u64, n: u64, out: *mut *mut c_char) -> HbStatus {
    guard(|| write_out(out, to_c(witt_dimension(k, n).to_string())?))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn hb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
