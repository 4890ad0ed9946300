use std::ffi::{c_char, CStr, CString};
use std::ptr;

use metaeis_ffi::*;
use serde_json::Value;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = CStr::from_ptr(s).to_str().unwrap().to_string();
    metaeis_string_free(s);
    text
}

fn last_error() -> String {
    let p = metaeis_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn datum(label: &str, n: i64) -> *mut MetaeisDatum {
    let label = CString::new(label).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(metaeis_datum_new(label.as_ptr(), n, &mut d), MetaeisStatus::Ok);
    d
}

#[test]
fn datum_round_trip() {
    unsafe {
        let d = datum("C3", 4);
        let mut rank = 0;
        assert_eq!(metaeis_datum_rank(d, &mut rank), MetaeisStatus::Ok);
        assert_eq!(rank, 3);
        let mut buf = [0i64; 9];
        assert_eq!(metaeis_datum_lambda_sharp(d, buf.as_mut_ptr(), buf.len()), MetaeisStatus::Ok);
        // n even: every node scales by n/2
        assert_eq!(buf, [2, 0, 0, 0, 2, 0, 0, 0, 2]);
        let mut inside = false;
        assert_eq!(metaeis_datum_in_sharp(d, [2, 4, -2].as_ptr(), 3, &mut inside), MetaeisStatus::Ok);
        assert!(inside);
        assert_eq!(metaeis_datum_in_sharp(d, [1, 0, 0].as_ptr(), 3, &mut inside), MetaeisStatus::Ok);
        assert!(!inside);
        let mut out = ptr::null_mut();
        assert_eq!(metaeis_datum_profile_json(d, &mut out), MetaeisStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["dual_cartan_type"], "C3");
        assert_eq!(v["cocenter"], "Z/2");
        assert!(metaeis_last_error().is_null());
        metaeis_datum_free(d);
    }
}

#[test]
fn errors_are_classified() {
    unsafe {
        let mut d = ptr::null_mut();
        let bad = CString::new("Q7").unwrap();
        assert_eq!(metaeis_datum_new(bad.as_ptr(), 2, &mut d), MetaeisStatus::Input);
        assert!(d.is_null());
        assert!(last_error().contains("Q7"));
        let ok = CString::new("A1").unwrap();
        assert_eq!(metaeis_datum_new(ok.as_ptr(), 0, &mut d), MetaeisStatus::Input);
        assert_eq!(metaeis_datum_new(ptr::null(), 2, &mut d), MetaeisStatus::NullPointer);
        assert_eq!(metaeis_datum_new(ok.as_ptr(), 2, ptr::null_mut()), MetaeisStatus::NullPointer);
        let not_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(metaeis_datum_new(not_utf8.as_ptr().cast(), 2, &mut d), MetaeisStatus::Utf8);
        let mut rank = 0;
        assert_eq!(metaeis_datum_rank(ptr::null(), &mut rank), MetaeisStatus::NullPointer);

        let d = datum("A2", 3);
        let mut buf = [0i64; 3];
        assert_eq!(metaeis_datum_lambda_sharp(d, buf.as_mut_ptr(), buf.len()), MetaeisStatus::Input);
        let mut inside = false;
        assert_eq!(metaeis_datum_in_sharp(d, [3].as_ptr(), 1, &mut inside), MetaeisStatus::Input);
        metaeis_datum_free(d);
        metaeis_datum_free(ptr::null_mut());
        metaeis_string_free(ptr::null_mut());
    }
}

#[test]
fn sl2_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(metaeis_sl2_new(4, &mut s), MetaeisStatus::Ok);
        let cells = CString::new("0:0").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(metaeis_sl2_hecke_json(s, 1, cells.as_ptr(), &mut out), MetaeisStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v, serde_json::json!({"1": {"-1": 1, "1": 1}}));

        assert_eq!(metaeis_sl2_stalk_json(s, 2, 6, &mut out), MetaeisStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["vanishes"], false);
        assert_eq!(v["shift"], 2);
        assert_eq!(metaeis_sl2_stalk_json(s, 6, 2, &mut out), MetaeisStatus::Input);
        let junk = CString::new("x:y").unwrap();
        assert_eq!(metaeis_sl2_hecke_json(s, 1, junk.as_ptr(), &mut out), MetaeisStatus::Input);
        metaeis_sl2_free(s);

        assert_eq!(metaeis_sl2_new(0, &mut s), MetaeisStatus::Input);
    }
}

unsafe fn run(args: &[&str]) -> (i32, String, String) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let (mut code, mut out, mut err) = (-1, ptr::null_mut(), ptr::null_mut());
    assert_eq!(metaeis_run(argv.len(), argv.as_ptr(), &mut code, &mut out, &mut err), MetaeisStatus::Ok);
    (code, take(out), take(err))
}

#[test]
fn run_matches_the_command_line() {
    unsafe {
        let (code, out, err) = run(&["dual-group", "--type", "A1", "--n", "4"]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["lambda_sharp"], serde_json::json!([[2]]));
        let (code, out, err) = run(&["dual-group", "--type", "Z1", "--n", "4"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(!err.is_empty());
        let (code, _, _) = run(&[]);
        assert_eq!(code, 1);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(metaeis_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
