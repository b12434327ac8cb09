//! C ABI for the schottky-lab library.
//!
//! Conventions: every function returns an [`SlStatus`] code; results travel
//! through out-pointers. Strings are NUL-terminated UTF-8 allocated by this
//! library and must be released with [`sl_string_free`]; byte buffers with
//! [`sl_bytes_free`]; markings with [`sl_marking_free`]. On any non-OK
//! status, [`sl_last_error_message`] returns a human-readable description.
//!
//! The header `include/schottky_lab.h` is generated from this file by
//! cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use schottky_lab::certificates::{
    cusp_gap_certificate, non_concyclic_certificate, slope_certificate,
};
use schottky_lab::combinatorics::{
    admissible_genus3_graphs, cube_labeling_search, genus3_impossibility, superstrand_bound_oracle,
};
use schottky_lab::render::{render_limit_set, RenderFormat, RenderOptions};
use schottky_lab::schottky::SchottkyMarking;
use schottky_lab::words::{pinchable_algebraic_check, pinchable_family, Word};
use schottky_lab::ExtendedComplex;

/// Status codes returned by every library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    /// The call succeeded.
    SlOk = 0,
    /// A required pointer argument was NULL.
    SlNullPointer = 1,
    /// A string argument was not valid UTF-8.
    SlInvalidUtf8 = 2,
    /// Input JSON could not be parsed.
    SlParseError = 3,
    /// Arguments were outside the admissible domain.
    SlInvalidArgument = 4,
    /// The computation failed; see sl_last_error_message().
    SlComputationError = 5,
}

/// A point of the extended complex plane for FFI transport.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SlPoint {
    pub re: f64,
    pub im: f64,
    /// Nonzero marks the point at infinity; re and im are then ignored.
    pub is_infinity: u8,
}

/// Selects one of the exhaustive combinatorial proofs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlProveTarget {
    /// Combined genus-3 impossibility trace.
    SlProveGenus3 = 0,
    /// Superstrand counting bound (maximum 10).
    SlProveSuperstrand = 1,
    /// Uniqueness of the 4-regular graph on six vertices.
    SlProveOctahedron = 2,
    /// Emptiness of the cube-labeling search.
    SlProveCube = 3,
}

/// Opaque handle to a parsed circle marking.
pub struct SlMarking {
    inner: SchottkyMarking,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).ok();
    });
}

fn fail(status: SlStatus, message: impl Into<String>) -> SlStatus {
    set_error(message);
    status
}

fn out_string(target: *mut *mut c_char, value: String) -> SlStatus {
    if target.is_null() {
        return fail(SlStatus::SlNullPointer, "output pointer is NULL");
    }
    match CString::new(value) {
        Ok(s) => {
            unsafe { *target = s.into_raw() };
            SlStatus::SlOk
        }
        Err(_) => fail(
            SlStatus::SlComputationError,
            "result contained an interior NUL byte",
        ),
    }
}

fn out_json<T: serde::Serialize>(target: *mut *mut c_char, value: &T) -> SlStatus {
    match serde_json::to_string_pretty(value) {
        Ok(text) => out_string(target, text),
        Err(e) => fail(SlStatus::SlComputationError, e.to_string()),
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SlStatus> {
    if ptr.is_null() {
        return Err(fail(SlStatus::SlNullPointer, "string argument is NULL"));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(SlStatus::SlInvalidUtf8, "string argument is not UTF-8"))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The message for the most recent error on this thread, or NULL. The
/// caller owns the returned string and frees it with sl_string_free().
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string allocated by this library. NULL is ignored.
///
/// # Safety
/// `s` must have been returned by a schottky-lab function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Releases a byte buffer allocated by this library. NULL is ignored.
///
/// # Safety
/// `data` and `len` must come from a schottky-lab function, unmodified.
#[no_mangle]
pub unsafe extern "C" fn sl_bytes_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(unsafe { Vec::from_raw_parts(data, len, len) });
    }
}

/// Parses a marking from its JSON representation.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_parse(
    json: *const c_char,
    out: *mut *mut SlMarking,
) -> SlStatus {
    if out.is_null() {
        return fail(SlStatus::SlNullPointer, "output pointer is NULL");
    }
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    match serde_json::from_str::<SchottkyMarking>(text) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(SlMarking { inner })) };
            SlStatus::SlOk
        }
        Err(e) => fail(SlStatus::SlParseError, e.to_string()),
    }
}

/// Releases a marking handle. NULL is ignored.
///
/// # Safety
/// `marking` must come from sl_marking_parse and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_free(marking: *mut SlMarking) {
    if !marking.is_null() {
        drop(unsafe { Box::from_raw(marking) });
    }
}

/// Reads the genus of a marking.
///
/// # Safety
/// `marking` must be a live handle; `genus` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_genus(marking: *const SlMarking, genus: *mut u32) -> SlStatus {
    if marking.is_null() || genus.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    unsafe { *genus = (*marking).inner.genus() as u32 };
    SlStatus::SlOk
}

/// Runs the classical verification. `pass` receives the verdict and
/// `report_json` the full condition-keyed report.
///
/// # Safety
/// `marking` must be a live handle; `pass` and `report_json` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_verify_classical(
    marking: *const SlMarking,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> SlStatus {
    if marking.is_null() || pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    let report = unsafe { &(*marking).inner }.verify_classical();
    unsafe { *pass = report.pass };
    out_json(report_json, &report)
}

/// Runs the noded verification. Crossing or nested defining circles are
/// reported as SlInvalidArgument.
///
/// # Safety
/// `marking` must be a live handle; `pass` and `report_json` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_verify_noded(
    marking: *const SlMarking,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> SlStatus {
    if marking.is_null() || pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    match unsafe { &(*marking).inner }.verify_noded() {
        Ok(report) => {
            unsafe { *pass = report.pass };
            out_json(report_json, &report)
        }
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// Renders the limit set as an SVG document.
///
/// # Safety
/// `marking` must be a live handle; `svg` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_limit_set_svg(
    marking: *const SlMarking,
    depth: u32,
    svg: *mut *mut c_char,
) -> SlStatus {
    if marking.is_null() {
        return fail(SlStatus::SlNullPointer, "marking is NULL");
    }
    let sample = match unsafe { &(*marking).inner }.limit_set(depth as usize) {
        Ok(s) => s,
        Err(e) => return fail(SlStatus::SlInvalidArgument, e.to_string()),
    };
    match render_limit_set(&sample, RenderFormat::Svg, &RenderOptions::default()) {
        Ok(bytes) => out_string(svg, String::from_utf8_lossy(&bytes).into_owned()),
        Err(e) => fail(SlStatus::SlComputationError, e.to_string()),
    }
}

/// Renders the limit set as a binary PPM image into a fresh buffer.
///
/// # Safety
/// `marking` must be a live handle; `data` and `len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_marking_limit_set_ppm(
    marking: *const SlMarking,
    depth: u32,
    width: u32,
    height: u32,
    data: *mut *mut u8,
    len: *mut usize,
) -> SlStatus {
    if marking.is_null() || data.is_null() || len.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    let sample = match unsafe { &(*marking).inner }.limit_set(depth as usize) {
        Ok(s) => s,
        Err(e) => return fail(SlStatus::SlInvalidArgument, e.to_string()),
    };
    let options = RenderOptions {
        width: width as usize,
        height: height as usize,
        threads: 1,
    };
    match render_limit_set(&sample, RenderFormat::Ppm, &options) {
        Ok(bytes) => {
            let mut bytes = bytes.into_boxed_slice();
            unsafe {
                *len = bytes.len();
                *data = bytes.as_mut_ptr();
            }
            std::mem::forget(bytes);
            SlStatus::SlOk
        }
        Err(e) => fail(SlStatus::SlComputationError, e.to_string()),
    }
}

/// Cusp-gap certificate |y1 - y2| >= alpha / 4.
///
/// # Safety
/// `pass` and `certificate_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_certify_cusp_gap(
    alpha: f64,
    y1: f64,
    y2: f64,
    tolerance: f64,
    pass: *mut bool,
    certificate_json: *mut *mut c_char,
) -> SlStatus {
    if pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    match cusp_gap_certificate(alpha, y1, y2, tolerance) {
        Ok(cert) => {
            unsafe { *pass = cert.verdict };
            out_json(certificate_json, &cert)
        }
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// Slope certificate: disjointness of the ray arg z = theta from its image
/// under the comparison map.
///
/// # Safety
/// `pass` and `certificate_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_certify_slope(
    theta: f64,
    pass: *mut bool,
    certificate_json: *mut *mut c_char,
) -> SlStatus {
    if pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    match slope_certificate(theta) {
        Ok(cert) => {
            unsafe { *pass = cert.verdict };
            out_json(certificate_json, &cert)
        }
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// Non-circularity certificate: |Im| of the cross-ratio of four points
/// against a threshold such as 1/8, 1/16 or 1/32.
///
/// # Safety
/// `points` must point to 4 elements; `pass` and `certificate_json` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_certify_cross_ratio(
    points: *const SlPoint,
    threshold: f64,
    tolerance: f64,
    pass: *mut bool,
    certificate_json: *mut *mut c_char,
) -> SlStatus {
    if points.is_null() || pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    let raw = unsafe { std::slice::from_raw_parts(points, 4) };
    let mut pts = [ExtendedComplex::Infinity; 4];
    for (slot, p) in pts.iter_mut().zip(raw) {
        *slot = if p.is_infinity != 0 {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::new(p.re, p.im)
        };
    }
    match non_concyclic_certificate(pts, threshold, tolerance) {
        Ok(cert) => {
            unsafe { *pass = cert.verdict };
            out_json(certificate_json, &cert)
        }
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// Replays one of the exhaustive combinatorial proofs; `pass` reports
/// whether the trace matches the expected outcome.
///
/// # Safety
/// `pass` and `trace_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_prove(
    target: SlProveTarget,
    pass: *mut bool,
    trace_json: *mut *mut c_char,
) -> SlStatus {
    if pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    let (json, ok) = match target {
        SlProveTarget::SlProveGenus3 => {
            let trace = genus3_impossibility();
            (serde_json::to_value(&trace), trace.impossible)
        }
        SlProveTarget::SlProveSuperstrand => {
            let bound = superstrand_bound_oracle();
            let ok = bound.max_total == 10;
            (serde_json::to_value(&bound), ok)
        }
        SlProveTarget::SlProveOctahedron => {
            let census = admissible_genus3_graphs();
            let ok = census.labeled_count == 15 && census.iso_classes == 1;
            (serde_json::to_value(&census), ok)
        }
        SlProveTarget::SlProveCube => {
            let search = cube_labeling_search();
            let ok = search.valid_count == 0 && search.relaxed_count >= 1;
            (serde_json::to_value(&search), ok)
        }
    };
    unsafe { *pass = ok };
    match json {
        Ok(value) => out_json(trace_json, &value),
        Err(e) => fail(SlStatus::SlComputationError, e.to_string()),
    }
}

/// Pinchability report for words given as {"rank": p, "words": [[...]]}.
///
/// # Safety
/// `json` must be a NUL-terminated string; `pass` and `report_json` valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn sl_words_check(
    json: *const c_char,
    pass: *mut bool,
    report_json: *mut *mut c_char,
) -> SlStatus {
    if pass.is_null() {
        return fail(SlStatus::SlNullPointer, "argument is NULL");
    }
    let text = match unsafe { read_str(json) } {
        Ok(t) => t,
        Err(status) => return status,
    };
    #[derive(serde::Deserialize)]
    struct WordFile {
        rank: usize,
        words: Vec<Vec<i32>>,
    }
    let parsed: WordFile = match serde_json::from_str(text) {
        Ok(p) => p,
        Err(e) => return fail(SlStatus::SlParseError, e.to_string()),
    };
    let words: Result<Vec<Word>, _> = parsed
        .words
        .iter()
        .map(|letters| Word::new(parsed.rank, letters))
        .collect();
    let words = match words {
        Ok(w) => w,
        Err(e) => return fail(SlStatus::SlInvalidArgument, e.to_string()),
    };
    match pinchable_algebraic_check(&words) {
        Ok(report) => {
            unsafe { *pass = report.pass };
            out_json(report_json, &report)
        }
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// The rank-2 family word of index n as a JSON letter list.
///
/// # Safety
/// `word_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_words_family(n: u32, word_json: *mut *mut c_char) -> SlStatus {
    match pinchable_family(n as usize) {
        Ok(word) => out_json(
            word_json,
            &serde_json::json!({
                "rank": word.rank(),
                "word": word.letters(),
                "length": word.len(),
            }),
        ),
        Err(e) => fail(SlStatus::SlInvalidArgument, e.to_string()),
    }
}

/// The explicit genus-3 pinchable triple as JSON.
///
/// # Safety
/// `words_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sl_words_genus3(words_json: *mut *mut c_char) -> SlStatus {
    let [r1, r2, r3] = schottky_lab::words::genus3_pinchable_words();
    out_json(
        words_json,
        &serde_json::json!({
            "rank": 3,
            "words": [r1.letters(), r2.letters(), r3.letters()],
        }),
    )
}
