use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use unimod_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { unimod_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(unimod_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn ring(literal: &str) -> *mut UnimodRing {
    let lit = CString::new(literal).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { unimod_ring_new(lit.as_ptr(), &mut out) },
        UnimodStatus::Ok,
        "{}",
        last_error()
    );
    out
}

#[test]
fn ring_handle_round_trip() {
    let r = ring("kind=galois p=3 s=2 modulus=[2,1,1]");
    let (mut card, mut m, mut ch) = (0, 0, 0);
    unsafe {
        assert_eq!(unimod_ring_cardinality(r, &mut card), UnimodStatus::Ok);
        assert_eq!(unimod_ring_maximal_ideal_size(r, &mut m), UnimodStatus::Ok);
        assert_eq!(unimod_ring_characteristic(r, &mut ch), UnimodStatus::Ok);
    }
    assert_eq!((card, m, ch), (81, 9, 9));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { unimod_ring_label(r, &mut s) }, UnimodStatus::Ok);
    assert_eq!(take_string(s), "GR(9,2)");
    assert_eq!(unsafe { unimod_ring_spec(r, &mut s) }, UnimodStatus::Ok);
    let spec = take_string(s);
    let again = ring(&spec);
    let mut card2 = 0;
    assert_eq!(unsafe { unimod_ring_cardinality(again, &mut card2) }, UnimodStatus::Ok);
    assert_eq!(card2, 81);
    unsafe {
        unimod_ring_free(again);
        unimod_ring_free(r);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let cases = [
        ("kind=Zps p=2 s=1", UnimodStatus::EvenCharacteristic),
        ("kind=Zps p=9 s=1", UnimodStatus::InvalidSpec),
        ("kind=ext p=3 modulus=[2,0,1]", UnimodStatus::NotLocal),
        ("kind=Zps p=3", UnimodStatus::InvalidSpec),
        ("nonsense", UnimodStatus::Parse),
    ];
    for (lit, want) in cases {
        let c = CString::new(lit).unwrap();
        assert_eq!(unsafe { unimod_ring_new(c.as_ptr(), &mut out) }, want, "{lit}");
        assert!(!last_error().is_empty());
    }
    assert_eq!(
        unsafe { unimod_ring_new(ptr::null(), &mut out) },
        UnimodStatus::NullPointer
    );
    let mut card = 0;
    assert_eq!(
        unsafe { unimod_ring_cardinality(ptr::null(), &mut card) },
        UnimodStatus::NullPointer
    );

    let r = ring("kind=Zps p=3 s=2");
    let mut f = ptr::null_mut();
    let m = CString::new("0,1;2,0").unwrap();
    assert_eq!(unsafe { unimod_form_new(r, m.as_ptr(), &mut f) }, UnimodStatus::Ok);
    assert_eq!(
        unsafe { unimod_form_canonicalize(f, ptr::null_mut(), ptr::null_mut()) },
        UnimodStatus::NotSymmetric
    );
    unsafe { unimod_form_free(f) };
    let m = CString::new("1,0;0").unwrap();
    assert_ne!(unsafe { unimod_form_new(r, m.as_ptr(), &mut f) }, UnimodStatus::Ok);
    let m = CString::new("3,0;0,1").unwrap();
    assert_eq!(unsafe { unimod_form_new(r, m.as_ptr(), &mut f) }, UnimodStatus::Ok);
    assert_eq!(
        unsafe { unimod_form_canonicalize(f, ptr::null_mut(), ptr::null_mut()) },
        UnimodStatus::Degenerate
    );
    unsafe {
        unimod_form_free(f);
        unimod_ring_free(r);
    }
    // success clears the message
    let r = ring("kind=Zps p=5 s=1");
    assert!(last_error().is_empty());
    unsafe { unimod_ring_free(r) };
}

#[test]
fn search_and_canonical_form() {
    let r = ring("kind=Zps p=5 s=2");
    for (kind, want) in [(UnimodPlane::Hyperbolic, 20), (UnimodPlane::Nonsquare, 2)] {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { unimod_form_plane(r, kind, &mut f) }, UnimodStatus::Ok);
        let (mut s, mut size) = (0, 0);
        let mut witness = ptr::null_mut();
        unsafe {
            assert_eq!(unimod_form_theoretical_s(f, &mut s), UnimodStatus::Ok);
            assert_eq!(
                unimod_form_max_orthogonal_set(f, 60_000, &mut size, &mut witness),
                UnimodStatus::Ok
            );
        }
        assert_eq!((s, size), (want, want));
        let w = take_string(witness);
        assert_eq!(w.matches('(').count() as u64, want);
        unsafe { unimod_form_free(f) };
    }
    let mut f = ptr::null_mut();
    let m = CString::new("0,1;1,0").unwrap();
    let (mut u, mut p) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(unimod_form_new(r, m.as_ptr(), &mut f), UnimodStatus::Ok);
        assert_eq!(unimod_form_canonicalize(f, &mut u, &mut p), UnimodStatus::Ok);
    }
    assert_eq!(take_string(u), "1");
    assert!(take_string(p).contains(';'));
    unsafe {
        assert_eq!(unimod_verify_ring(r, 60_000), UnimodStatus::Ok);
        assert_eq!(
            unimod_form_max_orthogonal_set(f, 60_000, ptr::null_mut(), ptr::null_mut()),
            UnimodStatus::NullPointer
        );
        unimod_form_free(f);
        unimod_ring_free(r);
    }
}

#[test]
fn timeout_is_reported() {
    let r = ring("kind=galois p=3 s=2 modulus=[2,1,1]");
    let mut f = ptr::null_mut();
    let mut size = 0;
    unsafe {
        assert_eq!(unimod_form_plane(r, UnimodPlane::Hyperbolic, &mut f), UnimodStatus::Ok);
        assert_eq!(
            unimod_form_max_orthogonal_set(f, 0, &mut size, ptr::null_mut()),
            UnimodStatus::Timeout
        );
        unimod_form_free(f);
        unimod_ring_free(r);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/unimod.h");
    assert!(header.exists(), "header not generated");
    let lib = target_dir().join("libunimod_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let witness = String::from_utf8_lossy(&out.stdout).trim().to_owned();
    assert!(
        [
            "{(1,1),(2,2),(4,4),(5,5),(7,7),(8,8)}",
            "{(1,8),(2,7),(4,5),(5,4),(7,2),(8,1)}"
        ]
        .contains(&witness.as_str()),
        "{witness}"
    );
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unimod-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
