use std::ffi::{CStr, CString};
use std::ptr;

use hallbasis_ffi::*;

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { hb_string_free(p) };
    s
}

fn session(order: &str, k: u32, max_len: u32) -> *mut HbSession {
    let name = CString::new(order).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { hb_session_new(name.as_ptr(), k, max_len, &mut s) },
        HbStatus::Ok
    );
    s
}

#[test]
fn counts_and_elements() {
    let s = session("lyndon", 2, 6);
    let mut n = 0u64;
    let counts: Vec<u64> = (1..=6)
        .map(|len| {
            assert_eq!(unsafe { hb_hall_count(s, len, &mut n) }, HbStatus::Ok);
            n
        })
        .collect();
    assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hb_hall_element(s, 2, 0, &mut out) }, HbStatus::Ok);
    assert_eq!(take(out), "[X0,X1]");
    assert_eq!(
        unsafe { hb_hall_element(s, 2, 5, &mut out) },
        HbStatus::OutOfRange
    );
    unsafe { hb_session_free(s) };
}

#[test]
fn decompose_json_and_norm() {
    let s = session("length", 3, 8);
    let (a, b) = (
        CString::new("X0").unwrap(),
        CString::new("[X1,[X1,X2]]").unwrap(),
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hb_decompose_norm(s, a.as_ptr(), b.as_ptr(), &mut out) },
        HbStatus::Ok
    );
    assert_eq!(take(out), "4");
    assert_eq!(
        unsafe { hb_decompose(s, a.as_ptr(), b.as_ptr(), &mut out) },
        HbStatus::Ok
    );
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["norm"], "4");
    unsafe { hb_session_free(s) };
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("supergeom").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { hb_session_new(bad.as_ptr(), 3, 5, &mut s) },
        HbStatus::Config
    );
    assert!(s.is_null());
    let msg = unsafe { CStr::from_ptr(hb_last_error_message()) };
    assert!(!msg.to_bytes().is_empty());

    let s = session("fibo", 0, 4);
    let (a, b) = (
        CString::new("X0").unwrap(),
        CString::new("[X0,[X0,[X0,[X0,X1]]]]").unwrap(),
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hb_decompose(s, a.as_ptr(), b.as_ptr(), &mut out) },
        HbStatus::Capacity
    );
    let junk = CString::new("[X0,").unwrap();
    assert_eq!(
        unsafe { hb_decompose(s, junk.as_ptr(), b.as_ptr(), &mut out) },
        HbStatus::Parse
    );
    assert_eq!(
        unsafe { hb_decompose(s, ptr::null(), b.as_ptr(), &mut out) },
        HbStatus::NullPointer
    );
    assert_eq!(
        unsafe { hb_hall_count(ptr::null(), 1, ptr::null_mut()) },
        HbStatus::NullPointer
    );
    unsafe { hb_session_free(s) };
    unsafe { hb_session_free(ptr::null_mut()) };
}

#[test]
fn witt() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hb_witt_dimension(2, 9, &mut out) }, HbStatus::Ok);
    assert_eq!(take(out), "56");
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hallbasis.h"))
        .unwrap();
    for sym in [
        "hb_session_new",
        "hb_decompose",
        "hb_last_error_message",
        "HB_STATUS_CAPACITY",
        "typedef struct HbSession",
    ] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let src = std::env::temp_dir().join("hallbasis_header_check.c");
    std::fs::write(
        &src,
        "#include \"hallbasis.h\"\nint main(void) { return HB_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler found; skipping"),
    }
}
