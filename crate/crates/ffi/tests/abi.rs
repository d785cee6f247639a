use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use contactlab_ffi::*;
use serde_json::Value;

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    cl_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = cl_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn generate(g: ClGenerator, n: usize, k: usize, seed: u64) -> *mut ClFamily {
    let mut f = ptr::null_mut();
    assert_eq!(cl_family_generate(g, n, k, seed, 0.5, &mut f), ClStatus::Ok);
    f
}

#[test]
fn family_round_trip_and_stats() {
    unsafe {
        let f = generate(ClGenerator::FpbExtremal, 100, 10, 0);
        let mut json = ptr::null_mut();
        assert_eq!(cl_family_to_json(f, &mut json), ClStatus::Ok);
        let doc = CString::new(take_string(json)).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(cl_family_from_json(doc.as_ptr(), &mut g), ClStatus::Ok);
        // The distinguished curve c comes on top of the n generated curves.
        assert_eq!(cl_family_curve_count(g), 101);

        let mut stats = ptr::null_mut();
        assert_eq!(cl_family_stats_json(g, &mut stats), ClStatus::Ok);
        let v: Value = serde_json::from_str(&take_string(stats)).unwrap();
        assert_eq!(v["k_effective"], 10);

        let (mut num, mut den) = (0u64, 0u64);
        assert_eq!(cl_family_average_distance(g, &mut num, &mut den), ClStatus::Ok);
        assert_eq!((num, den), (518, 125));

        let (a, o) = (CString::new("a4").unwrap(), CString::new("o1").unwrap());
        let mut d = 0usize;
        assert_eq!(cl_family_distance(g, o.as_ptr(), a.as_ptr(), &mut d), ClStatus::Ok);
        assert_eq!(d, 4);
        let missing = CString::new("nope").unwrap();
        assert_eq!(cl_family_distance(g, o.as_ptr(), missing.as_ptr(), &mut d), ClStatus::InvalidInput);
        assert!(last_error().contains("nope"));

        cl_family_free(f);
        cl_family_free(g);
    }
}

#[test]
fn coloring_and_discharging() {
    unsafe {
        let f = generate(ClGenerator::PointClique, 0, 490, 0);
        let n = cl_family_curve_count(f);
        let mut colors = vec![0usize; n];
        let mut palette = 0;
        assert_eq!(cl_family_color(f, ClColorMode::KPlusOne, 0, colors.as_mut_ptr(), &mut palette), ClStatus::Ok);
        assert_eq!(palette, 491);
        assert!(colors.iter().all(|&c| c < palette));

        let mut json = ptr::null_mut();
        assert_eq!(cl_family_discharge_json(f, 0, &mut json), ClStatus::Ok);
        let v: Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["initial_total"], "-12");
        assert_eq!(v["final_total"], "-12");
        cl_family_free(f);

        let g = generate(ClGenerator::RandomCurves, 30, 5, 7);
        let mut colors = vec![0usize; 30];
        assert_eq!(cl_family_color(g, ClColorMode::Greedy, 0, colors.as_mut_ptr(), &mut palette), ClStatus::Ok);
        assert!(palette >= 1);
        cl_family_free(g);
    }
}

#[test]
fn scalar_bounds() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(cl_beta(0.5, &mut v), ClStatus::Ok);
        assert!((v - 10.22).abs() < 0.01);
        assert_eq!(cl_delta(1.0, &mut v), ClStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(cl_p_good(2, 0, 0.5, &mut v), ClStatus::Ok);
        assert_eq!(v, 0.25);
        assert_eq!(cl_beta(1.5, &mut v), ClStatus::Precondition);
        assert_eq!(cl_beta(0.5, ptr::null_mut()), ClStatus::NullPointer);
    }
}

#[test]
fn cycle_packing() {
    unsafe {
        let doc = CString::new(r#"{"vertices": [0, 1, 2], "arcs": [[0, 1], [1, 0], [1, 2], [2, 1], [2, 0], [0, 2]]}"#).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(cl_digraph_from_json(doc.as_ptr(), &mut g), ClStatus::Ok);
        let (mut nu, mut json) = (0usize, ptr::null_mut());
        assert_eq!(cl_digraph_cyclepack(g, 100, &mut nu, &mut json), ClStatus::Ok);
        assert_eq!(nu, 1);
        let v: Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["certified"], true);
        assert_eq!(cl_digraph_cyclepack(g, 2, &mut nu, &mut json), ClStatus::LimitExceeded);
        cl_digraph_free(g);
    }
}

#[test]
fn errors_and_null_handles() {
    unsafe {
        let bad = CString::new("{ nope").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(cl_family_from_json(bad.as_ptr(), &mut f), ClStatus::Parse);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(cl_family_from_json(ptr::null(), &mut f), ClStatus::NullPointer);
        let mut json = ptr::null_mut();
        assert_eq!(cl_family_to_json(ptr::null(), &mut json), ClStatus::NullPointer);
        assert_eq!(cl_family_curve_count(ptr::null()), 0);
        assert_eq!(
            cl_family_generate(ClGenerator::BadQuad, 0, 10, 0, 0.0, &mut f),
            ClStatus::Precondition
        );
        let mut v = 0.0;
        assert_eq!(cl_beta(0.5, &mut v), ClStatus::Ok);
        assert!(cl_last_error().is_null());
        cl_family_free(ptr::null_mut());
        cl_digraph_free(ptr::null_mut());
        cl_string_free(ptr::null_mut());
        assert_eq!(CStr::from_ptr(cl_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/contactlab.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["cl_family_from_json", "cl_digraph_cyclepack", "CL_STATUS_OK", "typedef struct ClFamily ClFamily"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile_dir();
    let src = dir.join("check.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ ClFamily *f = 0; cl_family_free(f); return 0; }}\n")).unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).output() {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => eprintln!("skipping C syntax check: {e}"),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("contactlab-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
