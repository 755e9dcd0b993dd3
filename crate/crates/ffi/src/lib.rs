//! C ABI over the matchbound library: opaque handles for the projective
//! space and graph, status codes for every fallible call, and JSON strings
//! for the structured reports. The header is generated by cbindgen into
//! include/matchbound.h at build time.
//!
//! Ownership rules: every `*_new` has a matching `*_free`; strings returned
//! through `char**` are released with `mb_string_free`. All functions are
//! panic-safe; a caught panic reports `MB_STATUS_INTERNAL_ERROR`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matchbound::bounds::{assemble_total, evaluate_bounds, BoundContext};
use matchbound::error::Error;
use matchbound::families::{brute_force_max, classify, verify, MatchingFamily};
use matchbound::incidence::IncidenceStructure;
use matchbound::projective::ProjectiveSpace;
use matchbound::report::{bound_report_json, search_report_json, verify_report_json};
use matchbound::ring::{ModVector, Modulus};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    VerificationFailed = 3,
    LimitExceeded = 4,
    BufferTooSmall = 5,
    InternalError = 6,
}

fn status_of(err: &Error) -> MbStatus {
    match err {
        Error::LimitExceeded { .. } => MbStatus::LimitExceeded,
        Error::FamilyViolation { .. }
        | Error::NoPrivateNeighbor { .. }
        | Error::EigenMismatch { .. } => MbStatus::VerificationFailed,
        Error::InvariantViolation(_) => MbStatus::InternalError,
        _ => MbStatus::InvalidArgument,
    }
}

fn guarded(body: impl FnOnce() -> MbStatus) -> MbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => MbStatus::InternalError,
    }
}

/// Opaque handle: the canonically ordered projective space.
pub struct MbSpace(ProjectiveSpace);

/// Opaque handle: the projective graph with its adjacency and Gram data.
pub struct MbGraph(IncidenceStructure);

unsafe fn write_out<T>(out: *mut T, value: T) -> MbStatus {
    if out.is_null() {
        return MbStatus::NullPointer;
    }
    unsafe { out.write(value) };
    MbStatus::Ok
}

fn export_string(text: String, out: *mut *mut c_char) -> MbStatus {
    let Ok(cstring) = CString::new(text) else {
        return MbStatus::InternalError;
    };
    unsafe { write_out(out, cstring.into_raw()) }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned through a `char**`
/// out-parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Number of projective points theta_{n,m}.
///
/// # Safety
/// `out` must be null or a valid writable u64 slot.
#[no_mangle]
pub unsafe extern "C" fn mb_theta(n: u32, m: u64, out: *mut u64) -> MbStatus {
    guarded(|| {
        if n < 1 || m < 1 {
            return MbStatus::InvalidArgument;
        }
        unsafe { write_out(out, matchbound::projective::theta(n, m)) }
    })
}

/// The prime cap kappa = floor(4 r^(n/2) + 2).
///
/// # Safety
/// `out` must be null or a valid writable u64 slot.
#[no_mangle]
pub unsafe extern "C" fn mb_kappa(prime: u64, n: u32, out: *mut u64) -> MbStatus {
    guarded(|| match matchbound::bounds::kappa(prime, n) {
        Ok(value) => unsafe { write_out(out, value) },
        Err(err) => status_of(&err),
    })
}

/// Builds the projective space for n >= 2, m >= 2.
///
/// # Safety
/// `out` must be null or a valid writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mb_space_new(n: u32, m: u64, out: *mut *mut MbSpace) -> MbStatus {
    guarded(|| {
        let space = Modulus::new(m).and_then(|modulus| ProjectiveSpace::build(n, modulus));
        match space {
            Ok(space) => unsafe { write_out(out, Box::into_raw(Box::new(MbSpace(space)))) },
            Err(err) => status_of(&err),
        }
    })
}

/// # Safety
/// `space` must be null or a pointer from `mb_space_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_space_free(space: *mut MbSpace) {
    if !space.is_null() {
        drop(unsafe { Box::from_raw(space) });
    }
}

/// # Safety
/// `space` must be a live pointer from `mb_space_new`.
#[no_mangle]
pub unsafe extern "C" fn mb_space_len(space: *const MbSpace, out: *mut u64) -> MbStatus {
    if space.is_null() {
        return MbStatus::NullPointer;
    }
    let space = unsafe { &*space };
    unsafe { write_out(out, space.0.len() as u64) }
}

/// Copies the entries of point `index` into `out_entries` (capacity slots).
///
/// # Safety
/// `space` must be live; `out_entries` must point to at least `capacity`
/// writable u64 slots.
#[no_mangle]
pub unsafe extern "C" fn mb_space_point(
    space: *const MbSpace,
    index: u64,
    out_entries: *mut u64,
    capacity: u64,
) -> MbStatus {
    guarded(|| {
        if space.is_null() || out_entries.is_null() {
            return MbStatus::NullPointer;
        }
        let space = unsafe { &*space };
        let point = match space.0.point(index as usize) {
            Ok(point) => point,
            Err(err) => return status_of(&err),
        };
        if capacity < point.dim() as u64 {
            return MbStatus::BufferTooSmall;
        }
        let out = unsafe { std::slice::from_raw_parts_mut(out_entries, point.dim()) };
        out.copy_from_slice(point.entries());
        MbStatus::Ok
    })
}

/// Finds the canonical position of the class of `entries`.
///
/// # Safety
/// `space` must be live; `entries` must point to `len` readable u64s.
#[no_mangle]
pub unsafe extern "C" fn mb_space_locate(
    space: *const MbSpace,
    entries: *const u64,
    len: u64,
    out_index: *mut u64,
) -> MbStatus {
    guarded(|| {
        if space.is_null() || entries.is_null() {
            return MbStatus::NullPointer;
        }
        let space = unsafe { &*space };
        let slice = unsafe { std::slice::from_raw_parts(entries, len as usize) };
        let vector = ModVector::new(slice.to_vec(), space.0.modulus().clone());
        match space.0.locate(&vector) {
            Ok(location) => unsafe { write_out(out_index, location.index as u64) },
            Err(err) => status_of(&err),
        }
    })
}

/// Builds the projective graph (adjacency and Gram matrices) for (n, m).
///
/// # Safety
/// `out` must be null or a valid writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_new(n: u32, m: u64, out: *mut *mut MbGraph) -> MbStatus {
    guarded(|| {
        let graph = Modulus::new(m)
            .and_then(|modulus| ProjectiveSpace::build(n, modulus))
            .and_then(IncidenceStructure::build);
        match graph {
            Ok(graph) => unsafe { write_out(out, Box::into_raw(Box::new(MbGraph(graph)))) },
            Err(err) => status_of(&err),
        }
    })
}

/// # Safety
/// `graph` must be null or a pointer from `mb_graph_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_free(graph: *mut MbGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Common degree theta_{n-1,m}.
///
/// # Safety
/// `graph` must be a live pointer from `mb_graph_new`.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_degree(graph: *const MbGraph, out: *mut u64) -> MbStatus {
    if graph.is_null() {
        return MbStatus::NullPointer;
    }
    let graph = unsafe { &*graph };
    unsafe { write_out(out, graph.0.degree()) }
}

/// Whether point u and hyperplane v are adjacent.
///
/// # Safety
/// `graph` must be live.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_adjacent(
    graph: *const MbGraph,
    u: u64,
    v: u64,
    out: *mut bool,
) -> MbStatus {
    guarded(|| {
        if graph.is_null() {
            return MbStatus::NullPointer;
        }
        let graph = unsafe { &*graph };
        let ell = graph.0.len() as u64;
        if u >= ell || v >= ell {
            return MbStatus::InvalidArgument;
        }
        unsafe { write_out(out, graph.0.adjacency()[(u as usize, v as usize)] == 1) }
    })
}

unsafe fn indices_arg(ptr: *const u64, len: u64) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    unsafe { std::slice::from_raw_parts(ptr, len as usize) }
        .iter()
        .map(|&i| i as usize)
        .collect()
}

/// |N(X)| for the point set X given as indices.
///
/// # Safety
/// `graph` must be live; `indices` must point to `len` readable u64s (or
/// be null when `len` is zero).
#[no_mangle]
pub unsafe extern "C" fn mb_graph_neighborhood_size(
    graph: *const MbGraph,
    indices: *const u64,
    len: u64,
    out: *mut u64,
) -> MbStatus {
    guarded(|| {
        if graph.is_null() || (indices.is_null() && len > 0) {
            return MbStatus::NullPointer;
        }
        let graph = unsafe { &*graph };
        let x = unsafe { indices_arg(indices, len) };
        match graph.0.neighborhood_bits(&x) {
            Ok(bits) => unsafe { write_out(out, bits.count() as u64) },
            Err(err) => status_of(&err),
        }
    })
}

/// Whether the point set has the unique neighbor property.
///
/// # Safety
/// Same contract as `mb_graph_neighborhood_size`.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_unp_check(
    graph: *const MbGraph,
    indices: *const u64,
    len: u64,
    out_satisfied: *mut bool,
) -> MbStatus {
    guarded(|| {
        if graph.is_null() || (indices.is_null() && len > 0) {
            return MbStatus::NullPointer;
        }
        let graph = unsafe { &*graph };
        let x = unsafe { indices_arg(indices, len) };
        match graph.0.unp_check(&x) {
            Ok(outcome) => unsafe { write_out(out_satisfied, outcome.satisfied) },
            Err(err) => status_of(&err),
        }
    })
}

/// chi^t B chi for the point set X.
///
/// # Safety
/// Same contract as `mb_graph_neighborhood_size`.
#[no_mangle]
pub unsafe extern "C" fn mb_graph_gram_quadratic(
    graph: *const MbGraph,
    indices: *const u64,
    len: u64,
    out: *mut u64,
) -> MbStatus {
    guarded(|| {
        if graph.is_null() || (indices.is_null() && len > 0) {
            return MbStatus::NullPointer;
        }
        let graph = unsafe { &*graph };
        let x = unsafe { indices_arg(indices, len) };
        match graph.0.gram_quadratic(&x) {
            Ok(value) => unsafe { write_out(out, value) },
            Err(err) => status_of(&err),
        }
    })
}

/// Full bound report as a JSON string (see the CLI schema). `x = 0` picks
/// the theorem default floor(ell^0.625).
///
/// # Safety
/// `out_json` must be null or a valid writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mb_bounds_report_json(
    n: u32,
    p: u64,
    q: u64,
    x: u64,
    out_json: *mut *mut c_char,
) -> MbStatus {
    guarded(|| {
        if out_json.is_null() {
            return MbStatus::NullPointer;
        }
        let report = (|| {
            let probe = BoundContext::new(n, p, q, 0)?;
            let x = if x == 0 {
                matchbound::arith::floor_pow_5_8(probe.ell)
            } else {
                x
            };
            let ctx = BoundContext { x, ..probe };
            let report = evaluate_bounds(&ctx)?;
            let total = assemble_total(&report, &Default::default())?;
            Ok::<_, Error>(bound_report_json(&report, &total))
        })();
        match report {
            Ok(json) => {
                let text = serde_json::to_string(&json).expect("serializable report");
                export_string(text, out_json)
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Predicted spectrum as JSON: [{"lambda": .., "multiplicity": ..}].
///
/// # Safety
/// `out_json` must be null or a valid writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mb_spectrum_json(n: u32, m: u64, out_json: *mut *mut c_char) -> MbStatus {
    guarded(|| {
        if out_json.is_null() {
            return MbStatus::NullPointer;
        }
        if n < 2 {
            return MbStatus::InvalidArgument;
        }
        match Modulus::new(m) {
            Ok(modulus) => {
                let lines = matchbound::spectra::predicted_spectrum(n, &modulus);
                let text = serde_json::to_string(&lines).expect("serializable spectrum");
                export_string(text, out_json)
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Verifies a family JSON document. Returns Ok with `out_ok = false` (and
/// a diagnostic report) when the family is well-formed but not matching;
/// malformed documents return an error status.
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn mb_family_verify_json(
    json: *const c_char,
    out_ok: *mut bool,
    out_report: *mut *mut c_char,
) -> MbStatus {
    guarded(|| {
        if json.is_null() || out_ok.is_null() || out_report.is_null() {
            return MbStatus::NullPointer;
        }
        let Ok(text) = unsafe { CStr::from_ptr(json) }.to_str() else {
            return MbStatus::InvalidArgument;
        };
        let outcome = (|| {
            let value: serde_json::Value = serde_json::from_str(text)?;
            let fam = MatchingFamily::from_json(&value)?;
            let outcome = verify(&fam)?;
            let classes = classify(&fam);
            Ok::<_, Error>((outcome.ok, verify_report_json(&fam, &outcome, &classes)))
        })();
        match outcome {
            Ok((ok, report)) => {
                unsafe { out_ok.write(ok) };
                let text = serde_json::to_string(&report).expect("serializable report");
                export_string(text, out_report)
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Exact maximum matching-family size over Z_m^n with the default cross
/// set; the witness report lands in `out_json`.
///
/// # Safety
/// `out_k` and `out_json` must be null or valid writable slots.
#[no_mangle]
pub unsafe extern "C" fn mb_search_max(
    m: u64,
    n: u32,
    limit: u64,
    out_k: *mut u64,
    out_json: *mut *mut c_char,
) -> MbStatus {
    guarded(|| {
        if out_k.is_null() || out_json.is_null() {
            return MbStatus::NullPointer;
        }
        match brute_force_max(m, n, None, limit) {
            Ok(result) => {
                unsafe { out_k.write(result.k_max as u64) };
                let report = search_report_json(m, n, &result);
                let text = serde_json::to_string(&report).expect("serializable report");
                export_string(text, out_json)
            }
            Err(err) => status_of(&err),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let text = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        mb_string_free(ptr);
        text
    }

    #[test]
    fn theta_and_kappa_through_the_abi() {
        unsafe {
            let mut out = 0u64;
            assert_eq!(mb_theta(3, 6, &mut out), MbStatus::Ok);
            assert_eq!(out, 91);
            assert_eq!(mb_kappa(3, 3, &mut out), MbStatus::Ok);
            assert_eq!(out, 22);
            assert_eq!(mb_kappa(4, 3, &mut out), MbStatus::InvalidArgument);
            assert_eq!(mb_theta(3, 6, std::ptr::null_mut()), MbStatus::NullPointer);
        }
    }

    #[test]
    fn space_lifecycle_and_point_access() {
        let mut space = std::ptr::null_mut();
        assert_eq!(unsafe { mb_space_new(3, 6, &mut space) }, MbStatus::Ok);
        unsafe {
            let mut len = 0u64;
            assert_eq!(mb_space_len(space, &mut len), MbStatus::Ok);
            assert_eq!(len, 91);

            let mut entries = [0u64; 3];
            assert_eq!(
                mb_space_point(space, 1, entries.as_mut_ptr(), 3),
                MbStatus::Ok
            );
            assert_eq!(entries, [0, 4, 3]);
            assert_eq!(
                mb_space_point(space, 1, entries.as_mut_ptr(), 2),
                MbStatus::BufferTooSmall
            );
            assert_eq!(
                mb_space_point(space, 999, entries.as_mut_ptr(), 3),
                MbStatus::InvalidArgument
            );

            // locate is inverse to point, including non-canonical input:
            // 5 * (0,4,3) = (0,2,3) mod 6 is the same class.
            let probe = [0u64, 2, 3];
            let mut index = 0u64;
            assert_eq!(
                mb_space_locate(space, probe.as_ptr(), 3, &mut index),
                MbStatus::Ok
            );
            assert_eq!(index, 1);
            mb_space_free(space);
        }
    }

    #[test]
    fn graph_queries() {
        let mut graph = std::ptr::null_mut();
        assert_eq!(unsafe { mb_graph_new(3, 2, &mut graph) }, MbStatus::Ok);
        unsafe {
            let mut degree = 0u64;
            assert_eq!(mb_graph_degree(graph, &mut degree), MbStatus::Ok);
            assert_eq!(degree, 3);

            let x = [0u64, 1, 2];
            let mut size = 0u64;
            assert_eq!(
                mb_graph_neighborhood_size(graph, x.as_ptr(), 3, &mut size),
                MbStatus::Ok
            );
            assert!(size >= 3);

            let mut quad = 0u64;
            assert_eq!(
                mb_graph_gram_quadratic(graph, x.as_ptr(), 1, &mut quad),
                MbStatus::Ok
            );
            assert_eq!(quad, 3);

            let mut adjacent = false;
            assert_eq!(
                mb_graph_adjacent(graph, 0, 1, &mut adjacent),
                MbStatus::Ok
            );

            let all: Vec<u64> = (0..7).collect();
            let mut whole = true;
            assert_eq!(
                mb_graph_unp_check(graph, all.as_ptr(), 7, &mut whole),
                MbStatus::Ok
            );
            assert!(!whole);
            mb_graph_free(graph);
        }
    }

    #[test]
    fn bounds_report_round_trips_json() {
        unsafe {
            let mut ptr = std::ptr::null_mut();
            assert_eq!(mb_bounds_report_json(3, 2, 3, 1, &mut ptr), MbStatus::Ok);
            let text = take_string(ptr);
            let value: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(value["delta"]["num"], "948");
            assert_eq!(value["family_bound"]["num"], "80");

            let mut ptr = std::ptr::null_mut();
            assert_eq!(
                mb_bounds_report_json(3, 2, 3, 99999, &mut ptr),
                MbStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn family_verification_statuses() {
        let good = CString::new(
            r#"{"m":2,"n":2,"S":[1],"U":[[1,0],[0,1],[1,1]],"V":[[0,1],[1,0],[1,1]]}"#,
        )
        .unwrap();
        let mut ok = false;
        let mut report = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                mb_family_verify_json(good.as_ptr(), &mut ok, &mut report),
                MbStatus::Ok
            );
            assert!(ok);
            let _ = take_string(report);

            let broken = CString::new(
                r#"{"m":2,"n":2,"S":[1],"U":[[1,0],[1,0]],"V":[[0,1],[0,1]]}"#,
            )
            .unwrap();
            assert_eq!(
                mb_family_verify_json(broken.as_ptr(), &mut ok, &mut report),
                MbStatus::Ok
            );
            assert!(!ok);
            let text = take_string(report);
            assert!(text.contains("\"violations\""));

            let malformed = CString::new("not json").unwrap();
            assert_eq!(
                mb_family_verify_json(malformed.as_ptr(), &mut ok, &mut report),
                MbStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn search_through_the_abi() {
        unsafe {
            let mut k = 0u64;
            let mut ptr = std::ptr::null_mut();
            assert_eq!(mb_search_max(2, 2, 64, &mut k, &mut ptr), MbStatus::Ok);
            assert_eq!(k, 3);
            let text = take_string(ptr);
            assert!(text.contains("\"k_max\":3"));
            assert_eq!(
                mb_search_max(6, 3, 4, &mut k, &mut ptr),
                MbStatus::LimitExceeded
            );
        }
    }

    #[test]
    fn spectrum_json_shape() {
        unsafe {
            let mut ptr = std::ptr::null_mut();
            assert_eq!(mb_spectrum_json(3, 12, &mut ptr), MbStatus::Ok);
            let text = take_string(ptr);
            let lines: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
            assert_eq!(lines.len(), 6);
            assert_eq!(lines[0]["lambda"], 576);
            assert_eq!(lines[5]["multiplicity"], 252);
        }
    }

    #[test]
    fn version_is_a_valid_c_string() {
        let v = unsafe { CStr::from_ptr(mb_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }

    #[test]
    fn generated_header_covers_the_surface() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/matchbound.h"
        ))
        .expect("cbindgen header exists after build");
        for symbol in [
            "mb_version",
            "mb_theta",
            "mb_kappa",
            "mb_space_new",
            "mb_space_free",
            "mb_space_point",
            "mb_space_locate",
            "mb_graph_new",
            "mb_graph_unp_check",
            "mb_graph_gram_quadratic",
            "mb_bounds_report_json",
            "mb_family_verify_json",
            "mb_search_max",
            "mb_string_free",
            "MbStatus",
            "MbSpace",
            "MbGraph",
        ] {
            assert!(header.contains(symbol), "header misses {symbol}");
        }
    }
}
