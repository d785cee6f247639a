//! C ABI over `contactlab`.
//!
//! Families and digraphs are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`ClStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! can be read with [`cl_last_error`]. Strings returned through out-pointers
//! are owned by the caller and must be released with [`cl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use contactlab::coloring::{beta_of_alpha, color_regions, delta_of_alpha, greedy_coloring, p_good};
use contactlab::cyclepack::{pack, PlanarDigraph};
use contactlab::discharging::{verify_discharging, DischargeConstants};
use contactlab::family::{average_distance, distance, family_stats, intersection_graph};
use contactlab::generators::GenSpec;
use contactlab::region_graph::{build_contact_graph, trace_faces};
use contactlab::{ContactFamily, Error};
use num_traits::ToPrimitive;

/// Result codes shared by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Precondition = 5,
    Undefined = 6,
    LimitExceeded = 7,
    Overflow = 8,
    Internal = 9,
}

/// Generator selector for [`cl_family_generate`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClGenerator {
    PointClique = 0,
    FpbExtremal = 1,
    RandomCurves = 2,
    BadQuad = 3,
    RandomRegions = 4,
}

/// Coloring algorithm for [`cl_family_color`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClColorMode {
    KPlusOne = 0,
    Greedy = 1,
}

/// Opaque touching family.
pub struct ClFamily(ContactFamily);

/// Opaque plane digraph.
pub struct ClDigraph(PlanarDigraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ClStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) | Error::Json(_) | Error::Io(_) => ClStatus::Parse,
            Error::InvalidFamily(_) | Error::UnknownCurve(_) | Error::MissingRotation(_) => {
                ClStatus::InvalidInput
            }
            Error::Precondition(_) | Error::Disconnected | Error::SizeGuard(_) => ClStatus::Precondition,
            Error::Undefined(_) => ClStatus::Undefined,
            Error::LimitExceeded(_) => ClStatus::LimitExceeded,
            Error::GuaranteeViolated(_) => ClStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: ClStatus, msg: &str) -> Result<T, Failure> {
    Err(Failure(status, msg.to_string()))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ClStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(ClStatus::Internal, "panic inside contactlab"));
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ClStatus::Ok
        }
        Err(Failure(status, msg)) => {
            let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
            LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
            status
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(|| fail(ClStatus::NullPointer, "null handle"), Ok)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().map_or_else(|| fail(ClStatus::NullPointer, "null output pointer"), Ok)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(ClStatus::NullPointer, "null string");
    }
    CStr::from_ptr(p).to_str().or_else(|_| fail(ClStatus::InvalidUtf8, "string is not UTF-8"))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .or_else(|_| fail(ClStatus::Internal, "output contains a NUL byte"))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::from(Error::from(e)))
}

fn curve(f: &ContactFamily, name: &str) -> Result<usize, Failure> {
    f.curve_by_name(name)
        .ok_or_else(|| Error::UnknownCurve(name.to_string()).into())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a family from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_family` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_from_json(json: *const c_char, out_family: *mut *mut ClFamily) -> ClStatus {
    guard(|| {
        let slot = out(out_family)?;
        let f = ContactFamily::from_json(text(json)?)?;
        *slot = Box::into_raw(Box::new(ClFamily(f)));
        Ok(())
    })
}

/// Runs a generator. Parameters a generator does not use are ignored.
///
/// # Safety
/// `out_family` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_generate(
    generator: ClGenerator,
    n: usize,
    k: usize,
    seed: u64,
    nest_prob: f64,
    out_family: *mut *mut ClFamily,
) -> ClStatus {
    guard(|| {
        let slot = out(out_family)?;
        let spec = match generator {
            ClGenerator::PointClique => GenSpec::PointClique { k },
            ClGenerator::FpbExtremal => GenSpec::FpbExtremal { n, k },
            ClGenerator::RandomCurves => GenSpec::Random { n, k, seed, nest_prob },
            ClGenerator::BadQuad => GenSpec::BadQuad { k },
            ClGenerator::RandomRegions => GenSpec::RandomRegions { n, seed },
        };
        *slot = Box::into_raw(Box::new(ClFamily(spec.generate()?)));
        Ok(())
    })
}

/// Releases a family. Null is ignored.
///
/// # Safety
/// `family` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_family_free(family: *mut ClFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of curves in the family, or 0 for null.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_family_curve_count(family: *const ClFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.curve_count())
}

/// Serializes the family to JSON.
///
/// # Safety
/// `family` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_to_json(family: *const ClFamily, out_json: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let f = borrow(family)?;
        *out(out_json)? = owned_string(f.0.to_json())?;
        Ok(())
    })
}

/// Family statistics (n, m, k_effective, average distance) as JSON.
///
/// # Safety
/// `family` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_stats_json(family: *const ClFamily, out_json: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let f = borrow(family)?;
        *out(out_json)? = owned_string(to_json(&family_stats(&f.0)?)?)?;
        Ok(())
    })
}

/// Number of curves separating the two named curves.
///
/// # Safety
/// `family` must be a live handle, names NUL-terminated, `out_distance` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_distance(
    family: *const ClFamily,
    a: *const c_char,
    b: *const c_char,
    out_distance: *mut usize,
) -> ClStatus {
    guard(|| {
        let f = borrow(family)?;
        let (a, b) = (curve(&f.0, text(a)?)?, curve(&f.0, text(b)?)?);
        *out(out_distance)? = distance(&f.0, a, b)?;
        Ok(())
    })
}

/// Exact mean distance over touching pairs as a reduced fraction, before
/// normalizing by k.
///
/// # Safety
/// `family` must be a live handle and both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_average_distance(
    family: *const ClFamily,
    out_numer: *mut u64,
    out_denom: *mut u64,
) -> ClStatus {
    guard(|| {
        let f = borrow(family)?;
        let (num_slot, den_slot) = (out(out_numer)?, out(out_denom)?);
        let alpha = average_distance(&f.0)?;
        match (alpha.numer().to_u64(), alpha.denom().to_u64()) {
            (Some(n), Some(d)) => {
                *num_slot = n;
                *den_slot = d;
                Ok(())
            }
            _ => fail(ClStatus::Overflow, "average distance does not fit in 64 bits"),
        }
    })
}

/// Colors the curves. `out_colors` receives one color per curve and must
/// hold `cl_family_curve_count` entries. `k` is used by the k+1 mode only;
/// pass 0 to use the family's own bound.
///
/// # Safety
/// `family` must be a live handle, `out_colors` must hold enough entries
/// and `out_palette` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_color(
    family: *const ClFamily,
    mode: ClColorMode,
    k: usize,
    out_colors: *mut usize,
    out_palette: *mut usize,
) -> ClStatus {
    guard(|| {
        let f = &borrow(family)?.0;
        let palette = out(out_palette)?;
        if out_colors.is_null() {
            return fail(ClStatus::NullPointer, "null color buffer");
        }
        let coloring = match mode {
            ClColorMode::KPlusOne => {
                let k = if k == 0 { f.declared_k.max(f.k_effective()) } else { k };
                color_regions(f, k)?
            }
            ClColorMode::Greedy => greedy_coloring(&intersection_graph(f)?, None),
        };
        std::slice::from_raw_parts_mut(out_colors, f.curve_count()).copy_from_slice(&coloring.assignment);
        *palette = coloring.palette_size;
        Ok(())
    })
}

/// Runs the discharging verifier with default constants and returns the
/// report as JSON. `k` of 0 uses the family's own bound.
///
/// # Safety
/// `family` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_family_discharge_json(
    family: *const ClFamily,
    k: usize,
    out_json: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let f = &borrow(family)?.0;
        let slot = out(out_json)?;
        let k = if k == 0 { f.declared_k.max(f.k_effective()) } else { k };
        let g = build_contact_graph(f)?;
        let faces = trace_faces(&g);
        let d = verify_discharging(&g, &faces, k, &DischargeConstants::default())?;
        *slot = owned_string(to_json(&d.report)?)?;
        Ok(())
    })
}

/// Coloring constant for average distance `alpha`.
///
/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_beta(alpha: f64, out_value: *mut f64) -> ClStatus {
    guard(|| {
        *out(out_value)? = beta_of_alpha(alpha)?;
        Ok(())
    })
}

/// Optimal sampling parameter for average distance `alpha`.
///
/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_delta(alpha: f64, out_value: *mut f64) -> ClStatus {
    guard(|| {
        *out(out_value)? = delta_of_alpha(alpha)?;
        Ok(())
    })
}

/// Probability that a pair at distance `d` inside a clique of `ell` curves
/// survives sampling with probability `p` as an isolated edge.
///
/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_p_good(ell: usize, d: usize, p: f64, out_value: *mut f64) -> ClStatus {
    guard(|| {
        *out(out_value)? = p_good(ell, d, p)?;
        Ok(())
    })
}

/// Parses a digraph from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_digraph` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_digraph_from_json(json: *const c_char, out_digraph: *mut *mut ClDigraph) -> ClStatus {
    guard(|| {
        let slot = out(out_digraph)?;
        let g = PlanarDigraph::from_json(text(json)?)?;
        *slot = Box::into_raw(Box::new(ClDigraph(g)));
        Ok(())
    })
}

/// Releases a digraph. Null is ignored.
///
/// # Safety
/// `digraph` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cl_digraph_free(digraph: *mut ClDigraph) {
    if !digraph.is_null() {
        drop(Box::from_raw(digraph));
    }
}

/// Integral and fractional cycle packing. Writes the integral optimum and
/// the full result as JSON.
///
/// # Safety
/// `digraph` must be a live handle and both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cl_digraph_cyclepack(
    digraph: *const ClDigraph,
    limit: usize,
    out_nu: *mut usize,
    out_json: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let g = &borrow(digraph)?.0;
        let (nu_slot, json_slot) = (out(out_nu)?, out(out_json)?);
        let result = pack(g, limit)?;
        *json_slot = owned_string(to_json(&result)?)?;
        *nu_slot = result.nu;
        Ok(())
    })
}
