//! C ABI over `chsh_tradeoff`.
//!
//! Every function returns a [`CtStatus`]; results go through out-pointers.
//! States live behind the opaque [`CtState`] handle and must be released
//! with [`ct_state_free`]. Strings returned by the library are released with
//! [`ct_string_free`]. After a failing call, [`ct_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chsh_tradeoff::chsh::max_chsh;
use chsh_tradeoff::conjecture4::{conjecture_sum_n, search, SearchOptions};
use chsh_tradeoff::qcore::io::{state_from_json, state_to_json};
use chsh_tradeoff::qcore::{haar_random_state, PureState};
use chsh_tradeoff::slocc::{
    classify, make_biseparable, make_ghz, make_product, make_w, BiseparableParams, FreeQubit, GhzParams, SloccTag,
    WParams,
};
use chsh_tradeoff::tolerances::TOL_TANGLE;
use chsh_tradeoff::tradeoff3::{
    closed_form_biseparable, closed_form_ghz, closed_form_w, pairwise_chsh_squares, trace_identity, ClosedForm,
};
use chsh_tradeoff::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    CtOk = 0,
    CtNullPointer = 1,
    /// A parameter lies outside its documented range.
    CtInvalidArgument = 2,
    /// Wrong qubit count, buffer length or qubit label.
    CtDimension = 3,
    /// Zero vector or similar input with no meaningful result.
    CtDegenerate = 4,
    CtNumerical = 5,
    /// Malformed JSON or a non-UTF-8 string.
    CtParse = 6,
    CtPanic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtSloccTag {
    CtProductAbc = 0,
    CtBiseparableA = 1,
    CtBiseparableB = 2,
    CtBiseparableC = 3,
    CtW = 4,
    CtGhz = 5,
    CtAmbiguous = 6,
}

/// Squared maximal CHSH values of the three pair reductions and their sum.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CtTradeoff {
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtClassification {
    pub tag: CtSloccTag,
    pub ranks: [u8; 3],
    pub tangle: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CtSearchResult {
    pub best_total: f64,
    pub sampled_best: f64,
    pub violation_found: bool,
}

/// Opaque pure-state handle.
pub struct CtState {
    inner: PureState,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(CtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Param(_) => CtStatus::CtInvalidArgument,
            Error::Dimension(_) => CtStatus::CtDimension,
            Error::DegenerateInput(_) => CtStatus::CtDegenerate,
            Error::Numerical(_) => CtStatus::CtNumerical,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CtStatus::CtNullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CtStatus::CtOk
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CtStatus::CtPanic
        }
    }
}

unsafe fn state_ref<'a>(s: *const CtState) -> Result<&'a PureState, Failure> {
    s.as_ref().map(|h| &h.inner).ok_or_else(|| null("state"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_state(out: *mut *mut CtState, state: PureState) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(CtState { inner: state })))
}

fn tradeoff_of(c: &ClosedForm) -> CtTradeoff {
    CtTradeoff { s_ab: c.s_ab, s_ac: c.s_ac, s_bc: c.s_bc, total: c.total }
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds an `n`-qubit state from `len = 2 * 2^n` interleaved doubles
/// `re0, im0, re1, im1, ...`. The vector is normalized.
///
/// # Safety
/// `amplitudes` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_new(
    n: usize,
    amplitudes: *const f64,
    len: usize,
    out: *mut *mut CtState,
) -> CtStatus {
    guard(|| {
        if amplitudes.is_null() {
            return Err(null("amplitudes"));
        }
        if n == 0 || n > chsh_tradeoff::qcore::MAX_QUBITS || len != 2usize << n {
            return Err(Failure(CtStatus::CtDimension, format!("expected 2 * 2^n doubles for n = {n}, got {len}")));
        }
        let raw = std::slice::from_raw_parts(amplitudes, len);
        let amps = raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        write_state(out, PureState::new(n, amps)?)
    })
}

/// Haar-random `n`-qubit state, deterministic in `(n, seed)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_haar(n: usize, seed: u64, out: *mut *mut CtState) -> CtStatus {
    guard(|| write_state(out, haar_random_state(n, seed)?))
}

/// Parses a JSON state document `{"n": .., "amplitudes": [[re, im], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_from_json(json: *const c_char, out: *mut *mut CtState) -> CtStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Failure(CtStatus::CtParse, e.to_string()))?;
        let state = state_from_json(text).map_err(|e| Failure(CtStatus::CtParse, e.to_string()))?;
        write_state(out, state)
    })
}

/// Serializes a state as JSON. Free the result with [`ct_string_free`].
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_to_json(state: *const CtState, out: *mut *mut c_char) -> CtStatus {
    guard(|| {
        let s = state_ref(state)?;
        let c = CString::new(state_to_json(s)).map_err(|e| Failure(CtStatus::CtParse, e.to_string()))?;
        write(out, c.into_raw())
    })
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_state_free(state: *mut CtState) {
    if !state.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(state))));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(CString::from_raw(s))));
    }
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_n_qubits(state: *const CtState, out: *mut usize) -> CtStatus {
    guard(|| write(out, state_ref(state)?.n_qubits()))
}

/// Copies the amplitudes as interleaved `re, im` doubles into `buf`, which
/// must hold `len >= 2 * 2^n` entries.
///
/// # Safety
/// `state` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ct_state_amplitudes(state: *const CtState, buf: *mut f64, len: usize) -> CtStatus {
    guard(|| {
        let s = state_ref(state)?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let amps = s.amplitudes();
        if len < 2 * amps.len() {
            return Err(Failure(CtStatus::CtDimension, format!("buffer needs {} doubles, got {len}", 2 * amps.len())));
        }
        let dst = std::slice::from_raw_parts_mut(buf, 2 * amps.len());
        for (d, a) in dst.chunks_exact_mut(2).zip(amps) {
            d[0] = a.re;
            d[1] = a.im;
        }
        Ok(())
    })
}

/// `|000⟩`
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_make_product(out: *mut *mut CtState) -> CtStatus {
    guard(|| write_state(out, make_product()))
}

/// Biseparable state with the unentangled qubit `free_qubit` (0 = A, 1 = B,
/// 2 = C) and `delta` in `(0, π/4]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_make_biseparable(free_qubit: u32, delta: f64, out: *mut *mut CtState) -> CtStatus {
    guard(|| {
        let free_qubit = match free_qubit {
            0 => FreeQubit::A,
            1 => FreeQubit::B,
            2 => FreeQubit::C,
            q => return Err(Failure(CtStatus::CtInvalidArgument, format!("free qubit {q} is not 0, 1 or 2"))),
        };
        write_state(out, make_biseparable(&BiseparableParams { free_qubit, delta })?)
    })
}

/// W-class state with weights `a, b, c > 0`, `a + b + c <= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_make_w(a: f64, b: f64, c: f64, out: *mut *mut CtState) -> CtStatus {
    guard(|| write_state(out, make_w(&WParams { a, b, c })?))
}

/// GHZ-class state; angles in radians.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_make_ghz(
    delta: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    phi: f64,
    out: *mut *mut CtState,
) -> CtStatus {
    guard(|| write_state(out, make_ghz(&GhzParams { delta, alpha, beta, gamma, phi })?))
}

/// Maximal CHSH value of the reduction of `state` to qubits `x` and `y`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_max_chsh_pair(state: *const CtState, x: usize, y: usize, out: *mut f64) -> CtStatus {
    guard(|| {
        let s = state_ref(state)?;
        let n = s.n_qubits();
        if x == y || x >= n || y >= n {
            return Err(Failure(CtStatus::CtDimension, format!("({x}, {y}) is not a pair of distinct qubits of {n}")));
        }
        let rho = s.density().partial_trace(&[x, y])?;
        write(out, max_chsh(&rho)?)
    })
}

/// Squared pair values and their sum for a three-qubit state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_tradeoff_sum(state: *const CtState, out: *mut CtTradeoff) -> CtStatus {
    guard(|| {
        let p = pairwise_chsh_squares(state_ref(state)?)?;
        write(out, CtTradeoff { s_ab: p.s_ab, s_ac: p.s_ac, s_bc: p.s_bc, total: p.total() })
    })
}

/// Sum of `tr(MᵀM)` over the three pairs of a three-qubit state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_trace_identity(state: *const CtState, out: *mut f64) -> CtStatus {
    guard(|| write(out, trace_identity(state_ref(state)?)?))
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_classify(state: *const CtState, out: *mut CtClassification) -> CtStatus {
    guard(|| {
        let c = classify(state_ref(state)?, TOL_TANGLE)?;
        let tag = match c.tag {
            SloccTag::ProductABC => CtSloccTag::CtProductAbc,
            SloccTag::BiseparableA => CtSloccTag::CtBiseparableA,
            SloccTag::BiseparableB => CtSloccTag::CtBiseparableB,
            SloccTag::BiseparableC => CtSloccTag::CtBiseparableC,
            SloccTag::W => CtSloccTag::CtW,
            SloccTag::Ghz => CtSloccTag::CtGhz,
            SloccTag::Ambiguous => CtSloccTag::CtAmbiguous,
        };
        write(out, CtClassification { tag, ranks: c.evidence.ranks, tangle: c.evidence.tangle })
    })
}

/// `Σ_{Y ≠ anchor} tr(T_{anchor,Y} T_{anchor,Y}ᵀ)` for `n >= 3`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_conjecture_sum(state: *const CtState, anchor: usize, out: *mut f64) -> CtStatus {
    guard(|| write(out, conjecture_sum_n(state_ref(state)?, anchor)?.total))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_closed_form_biseparable(delta: f64, out: *mut CtTradeoff) -> CtStatus {
    guard(|| write(out, tradeoff_of(&closed_form_biseparable(delta)?)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_closed_form_w(a: f64, b: f64, c: f64, out: *mut CtTradeoff) -> CtStatus {
    guard(|| write(out, tradeoff_of(&closed_form_w(a, b, c)?.pairs)))
}

/// GHZ-family closed forms and `f(a, b, c)`. `f_out` may be null.
///
/// # Safety
/// `out` must be writable; `f_out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ct_closed_form_ghz(
    delta: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: *mut CtTradeoff,
    f_out: *mut f64,
) -> CtStatus {
    guard(|| {
        let g = closed_form_ghz(delta, alpha, beta, gamma)?;
        write(out, tradeoff_of(&g.pairs))?;
        if !f_out.is_null() {
            f_out.write(g.f);
        }
        Ok(())
    })
}

/// Haar sampling plus ascent for the anchored pair sum. `best_state` may be
/// null; otherwise it receives a new handle for the best state found.
///
/// # Safety
/// `out` must be writable; `best_state` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ct_search(
    n: usize,
    samples: usize,
    restarts: usize,
    seed: u64,
    anchor: usize,
    out: *mut CtSearchResult,
    best_state: *mut *mut CtState,
) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let r = search(&SearchOptions { n, samples, restarts, seed, anchor, warm_starts: Vec::new() })?;
        write(
            out,
            CtSearchResult {
                best_total: r.best_total,
                sampled_best: r.sampled_best,
                violation_found: r.violation_found,
            },
        )?;
        if !best_state.is_null() {
            write_state(best_state, r.best_state)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(ct_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn product_round_trip() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(ct_make_product(&mut s), CtStatus::CtOk);
            let mut t = CtTradeoff::default();
            assert_eq!(ct_tradeoff_sum(s, &mut t), CtStatus::CtOk);
            assert!((t.total - 12.0).abs() < 1e-12);
            let mut buf = [9.0; 16];
            assert_eq!(ct_state_amplitudes(s, buf.as_mut_ptr(), 16), CtStatus::CtOk);
            assert_eq!(buf[0], 1.0);
            assert!(buf[1..].iter().all(|&x| x == 0.0));
            ct_state_free(s);
        }
    }

    #[test]
    fn errors_are_reported() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(ct_make_w(0.6, 0.6, 0.1, &mut s), CtStatus::CtInvalidArgument);
            assert!(s.is_null());
            assert!(!last_error().is_empty());
            assert_eq!(ct_tradeoff_sum(ptr::null(), ptr::null_mut()), CtStatus::CtNullPointer);
            let amps = [0.0; 8];
            assert_eq!(ct_state_new(2, amps.as_ptr(), 8, &mut s), CtStatus::CtDegenerate);
            assert_eq!(ct_state_new(2, amps.as_ptr(), 6, &mut s), CtStatus::CtDimension);
            let bad = CString::new("{\"n\": 1").unwrap();
            assert_eq!(ct_state_from_json(bad.as_ptr(), &mut s), CtStatus::CtParse);
            let mut h = ptr::null_mut();
            assert_eq!(ct_state_haar(2, 1, &mut h), CtStatus::CtOk);
            assert!(last_error().is_empty());
            let mut t = CtTradeoff::default();
            assert_eq!(ct_tradeoff_sum(h, &mut t), CtStatus::CtDimension);
            ct_state_free(h);
        }
    }

    #[test]
    fn json_and_classification() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(ct_make_ghz(0.5, 1.0, 1.1, 1.2, 0.3, &mut s), CtStatus::CtOk);
            let mut json = ptr::null_mut();
            assert_eq!(ct_state_to_json(s, &mut json), CtStatus::CtOk);
            let mut back = ptr::null_mut();
            assert_eq!(ct_state_from_json(json, &mut back), CtStatus::CtOk);
            let mut c = CtClassification { tag: CtSloccTag::CtAmbiguous, ranks: [0; 3], tangle: 0.0 };
            assert_eq!(ct_classify(back, &mut c), CtStatus::CtOk);
            assert_eq!(c.tag, CtSloccTag::CtGhz);
            assert_eq!(c.ranks, [2, 2, 2]);
            let mut tr = 0.0;
            assert_eq!(ct_trace_identity(back, &mut tr), CtStatus::CtOk);
            assert!((tr - 3.0).abs() < 1e-10);
            ct_string_free(json);
            ct_state_free(s);
            ct_state_free(back);
        }
    }

    #[test]
    fn closed_forms_match_numeric() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(ct_make_w(0.2, 0.3, 0.4, &mut s), CtStatus::CtOk);
            let (mut numeric, mut closed) = (CtTradeoff::default(), CtTradeoff::default());
            ct_tradeoff_sum(s, &mut numeric);
            assert_eq!(ct_closed_form_w(0.2, 0.3, 0.4, &mut closed), CtStatus::CtOk);
            assert!((numeric.total - closed.total).abs() < 1e-10);
            assert!((numeric.s_ab - closed.s_ab).abs() < 1e-10);
            ct_state_free(s);

            assert_eq!(ct_closed_form_biseparable(0.3, &mut closed), CtStatus::CtOk);
            assert!((closed.total - (4.0 * 0.6f64.cos().powi(2) + 8.0)).abs() < 1e-12);
            let mut f = 1.0;
            assert_eq!(ct_closed_form_ghz(0.4, 1.0, 1.0, 1.0, &mut closed, &mut f), CtStatus::CtOk);
            assert!((-1.0..=0.0).contains(&f));
        }
    }

    #[test]
    fn pair_chsh_and_search() {
        unsafe {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let bell = [h, 0.0, 0.0, 0.0, 0.0, 0.0, h, 0.0];
            let mut s = ptr::null_mut();
            assert_eq!(ct_state_new(2, bell.as_ptr(), 8, &mut s), CtStatus::CtOk);
            let mut v = 0.0;
            assert_eq!(ct_max_chsh_pair(s, 0, 1, &mut v), CtStatus::CtOk);
            assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-12);
            assert_eq!(ct_max_chsh_pair(s, 1, 1, &mut v), CtStatus::CtDimension);
            ct_state_free(s);

            let mut r = CtSearchResult::default();
            let mut best = ptr::null_mut();
            assert_eq!(ct_search(4, 200, 1, 3, 0, &mut r, &mut best), CtStatus::CtOk);
            assert!(r.best_total <= 3.0 + 1e-9 && !r.violation_found);
            let mut total = 0.0;
            assert_eq!(ct_conjecture_sum(best, 0, &mut total), CtStatus::CtOk);
            assert!((total - r.best_total).abs() < 1e-9);
            ct_state_free(best);
        }
    }
}
