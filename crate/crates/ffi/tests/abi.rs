use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use asmass_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { asmass_string_free(s) };
    out
}

fn last_error() -> String {
    let p = asmass_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn ram(p: u32, spec: &str) -> *mut AsmassRamData {
    let spec = CString::new(spec).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { asmass_ram_new(p, spec.as_ptr(), &mut r) }, AsmassStatus::Ok);
    r
}

#[test]
fn field_arithmetic() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(asmass_field_new(3, 2, &mut f), AsmassStatus::Ok);
        assert_eq!(asmass_field_order(f), 9);
        assert_eq!(asmass_field_characteristic(f), 3);
        let mut x = 0;
        for a in 1..9 {
            assert_eq!(asmass_field_inv(f, a, &mut x), AsmassStatus::Ok);
            let mut one = 0;
            assert_eq!(asmass_field_mul(f, a, x, &mut one), AsmassStatus::Ok);
            assert_eq!(one, 1);
        }
        assert_eq!(asmass_field_add(f, 1, 1, &mut x), AsmassStatus::Ok);
        assert_eq!(asmass_field_add(f, x, 1, &mut x), AsmassStatus::Ok);
        assert_eq!(x, 0);
        assert_eq!(asmass_field_inv(f, 0, &mut x), AsmassStatus::DivisionByZero);
        assert_eq!(asmass_field_mul(f, 9, 1, &mut x), AsmassStatus::InvalidArgument);
        assert_eq!(asmass_field_mul(f, 1, 1, ptr::null_mut()), AsmassStatus::NullPointer);
        asmass_field_free(f);
        asmass_field_free(ptr::null_mut());
    }
}

#[test]
fn error_codes_and_messages() {
    let mut f = ptr::null_mut();
    asmass_clear_error();
    assert!(asmass_last_error_message().is_null());
    assert_eq!(unsafe { asmass_field_new(6, 1, &mut f) }, AsmassStatus::NotPrime);
    assert!(f.is_null());
    assert_eq!(last_error(), "6 is not a prime");

    let mut r = ptr::null_mut();
    let bad = CString::new("2,4").unwrap();
    assert_eq!(unsafe { asmass_ram_new(3, bad.as_ptr(), &mut r) }, AsmassStatus::InvalidRamData);
    assert!(last_error().contains("4 = 1 mod 3"));
    assert_eq!(unsafe { asmass_ram_new(3, ptr::null(), &mut r) }, AsmassStatus::NullPointer);
    let junk = CString::new("2,x").unwrap();
    assert_eq!(unsafe { asmass_ram_new(3, junk.as_ptr(), &mut r) }, AsmassStatus::Parse);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { asmass_mass_g_poly(3, 5, &mut s) }, AsmassStatus::GenusNotMultiple);
    assert_eq!(unsafe { asmass_mass_g_poly(7, 3, &mut s) }, AsmassStatus::Ok);
    unsafe { asmass_string_free(s) };
    let r = ram(3, "2,2,2,2");
    let split = CString::new("(2-2),(2-2)").unwrap();
    assert_eq!(unsafe { asmass_mass_rs(r, split.as_ptr(), 3, &mut s) }, AsmassStatus::UnsupportedShape);
    assert!(last_error().contains("oracle"));
    let wrong = CString::new("2,3").unwrap();
    assert_eq!(unsafe { asmass_mass_rs(r, wrong.as_ptr(), 3, &mut s) }, AsmassStatus::IncompatibleSplit);
    unsafe { asmass_ram_free(r) };
}

#[test]
fn last_error_is_per_thread() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { asmass_field_new(9, 1, &mut f) }, AsmassStatus::NotPrime);
    std::thread::spawn(|| assert!(asmass_last_error_message().is_null()))
        .join()
        .unwrap();
    assert_eq!(last_error(), "9 is not a prime");
}

#[test]
fn masses_agree_across_the_boundary() {
    let r = ram(5, "2,2,3");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(asmass_ram_genus(r), 10);
        assert_eq!(asmass_ram_dimension(r), 4);
        assert_eq!(asmass_mass_rs(r, ptr::null(), 5, &mut s), AsmassStatus::Ok);
        let formula = take(s);
        assert_eq!(formula, "400/1");
        assert_eq!(asmass_global_mass(r, ptr::null(), 5, 100_000_000, &mut s), AsmassStatus::Ok);
        assert_eq!(take(s), formula);
        assert_eq!(asmass_structural_mass(r, ptr::null(), 5, 100_000_000, &mut s), AsmassStatus::Ok);
        assert_eq!(take(s), formula);
        assert_eq!(asmass_global_mass(r, ptr::null(), 5, 10, &mut s), AsmassStatus::SizeLimitExceeded);
        assert_eq!(asmass_mass_g(12, 7, 7, &mut s), AsmassStatus::Ok);
        assert_eq!(take(s), "1225/1");
        asmass_ram_free(r);
        assert_eq!(asmass_ram_genus(ptr::null()), 0);
    }
}

#[test]
fn orbit_counts_and_gamma_t() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(asmass_field_new(7, 1, &mut f), AsmassStatus::Ok);
        let (mut b, mut c) = (0u64, 0i64);
        assert_eq!(asmass_four_set_orbits(f, AsmassBehavior::Quad, &mut b, &mut c), AsmassStatus::Ok);
        assert_eq!((b, c), (3, 3));
        let mut order = 0;
        let mut label = ptr::null_mut();
        // t = 2 has stabilizer D4 for p >= 5
        assert_eq!(asmass_classify_gamma_t(f, 2, &mut order, &mut label), AsmassStatus::Ok);
        assert_eq!((order, take(label).as_str()), (8, "D4"));
        assert_eq!(asmass_classify_gamma_t(f, 1, &mut order, &mut label), AsmassStatus::BadT);
        asmass_field_free(f);
    }
}

#[test]
fn header_is_current_and_compiles_from_c() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(root.join("include/asmass.h")).unwrap();
    for name in ["asmass_field_new", "asmass_mass_rs", "asmass_last_error_message", "ASMASS_STATUS_PANIC"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    // the static library sits next to the deps directory holding this test
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let out = std::env::temp_dir().join(format!("asmass-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(lib_dir.join("libasmass_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
