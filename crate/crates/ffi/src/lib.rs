//! C ABI over `voalab`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`-style
//! constructors and released with the matching `*_free`. Every fallible
//! call returns a [`VoalabStatus`]; on failure the message is kept in a
//! thread-local buffer readable through [`voalab_last_error`].
//! Strings handed out by the library must be released with
//! [`voalab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use voalab::affine::{is_singular, vectors, ModeCalculus, State};
use voalab::liesuper::{check_structure, LieSuperalgebra};
use voalab::rational::{fmt_q, Q};
use voalab::suite::{run_suite, SuiteConfig};
use voalab::{lattice, parse, zhu, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VoalabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidRank = 3,
    UnsupportedRank = 4,
    Index = 5,
    Precondition = 6,
    Parse = 7,
    UnknownGenerator = 8,
    SingularLattice = 9,
    Internal = 10,
    Panic = 11,
}

/// A Lie (super)algebra with its structure tables.
pub struct VoalabAlgebra {
    alg: LieSuperalgebra,
}

/// A state of the vacuum module together with the algebra it lives over.
pub struct VoalabState {
    alg: LieSuperalgebra,
    state: State,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes stripped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> VoalabStatus {
    match e {
        Error::InvalidRank(_) => VoalabStatus::InvalidRank,
        Error::UnsupportedRank { .. } => VoalabStatus::UnsupportedRank,
        Error::Index(_) => VoalabStatus::Index,
        Error::Precondition(_) => VoalabStatus::Precondition,
        Error::Parse { .. } => VoalabStatus::Parse,
        Error::UnknownGenerator(_) => VoalabStatus::UnknownGenerator,
        Error::SingularLattice => VoalabStatus::SingularLattice,
        Error::Internal(_) | Error::Io(_) => VoalabStatus::Internal,
    }
}

enum Fail {
    Status(VoalabStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> VoalabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VoalabStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside voalab".into());
            VoalabStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(VoalabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(VoalabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes stripped")
        .into_raw()
}

fn level(num: i64, den: i64) -> Result<Q, Fail> {
    if den == 0 {
        return Err(Fail::Status(
            VoalabStatus::Precondition,
            "level denominator is zero".into(),
        ));
    }
    Ok(Q::new(num.into(), den.into()))
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn voalab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn voalab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `psl(n|n)` for `n >= 2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_algebra_psl(n: usize, out: *mut *mut VoalabAlgebra) -> VoalabStatus {
    guard(|| {
        let alg = LieSuperalgebra::psl(n)?;
        put(out, Box::into_raw(Box::new(VoalabAlgebra { alg })), "out")
    })
}

/// `sl(n)` for `n >= 2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_algebra_sl(n: usize, out: *mut *mut VoalabAlgebra) -> VoalabStatus {
    guard(|| {
        let alg = LieSuperalgebra::sl(n)?;
        put(out, Box::into_raw(Box::new(VoalabAlgebra { alg })), "out")
    })
}

/// # Safety
/// `alg` must come from a constructor above and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn voalab_algebra_free(alg: *mut VoalabAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `alg` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_algebra_dim(alg: *const VoalabAlgebra, out: *mut usize) -> VoalabStatus {
    guard(|| {
        let a = borrow(alg, "alg")?;
        put(out, a.alg.dim(), "out")
    })
}

/// Exhaustive antisymmetry, Jacobi and invariance check.
///
/// # Safety
/// `alg` must be a live handle, `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_structure_check(alg: *const VoalabAlgebra, passed: *mut bool) -> VoalabStatus {
    guard(|| {
        let a = borrow(alg, "alg")?;
        put(passed, check_structure(&a.alg).passed, "passed")
    })
}

/// Parse a state such as `"E[1,3](-1) E[1,4](-1)"` at level `num/den`.
///
/// # Safety
/// `alg` must be a live handle, `src` a nul-terminated string, `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_parse(
    alg: *const VoalabAlgebra,
    level_num: i64,
    level_den: i64,
    src: *const c_char,
    out: *mut *mut VoalabState,
) -> VoalabStatus {
    guard(|| {
        let a = borrow(alg, "alg")?;
        let k = level(level_num, level_den)?;
        let state = parse::parse_state(&a.alg, &k, text(src, "src")?)?;
        let h = VoalabState {
            alg: a.alg.clone(),
            state,
        };
        put(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// One of the named level-one vectors `"chi"`, `"chi+"`, `"chi-"`.
///
/// # Safety
/// `alg` must be a live handle, `name` a nul-terminated string, `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_named(
    alg: *const VoalabAlgebra,
    name: *const c_char,
    out: *mut *mut VoalabState,
) -> VoalabStatus {
    guard(|| {
        let a = borrow(alg, "alg")?;
        let calc = ModeCalculus::new(&a.alg, a.alg.default_level());
        let state = match text(name, "name")? {
            "chi" => vectors::chi(&calc)?,
            "chi+" => vectors::chi_plus(&calc)?,
            "chi-" => vectors::chi_minus(&calc)?,
            other => {
                return Err(Fail::Status(
                    VoalabStatus::UnknownGenerator,
                    format!("unknown vector {other}"),
                ));
            }
        };
        let h = VoalabState {
            alg: a.alg.clone(),
            state,
        };
        put(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_free(s: *mut VoalabState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Apply an operator word (rightmost token first) and return a new state.
///
/// # Safety
/// `s` must be a live handle, `word` a nul-terminated string, `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_apply_word(
    s: *const VoalabState,
    word: *const c_char,
    out: *mut *mut VoalabState,
) -> VoalabStatus {
    guard(|| {
        let st = borrow(s, "state")?;
        let w = parse::parse_word(&st.alg, text(word, "word")?)?;
        let calc = ModeCalculus::new(&st.alg, st.state.level().clone());
        let state = calc.apply_word(&w, &st.state);
        let h = VoalabState {
            alg: st.alg.clone(),
            state,
        };
        put(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// `true` iff `s` is killed by the positive affine part. Errors on
/// inhomogeneous states.
///
/// # Safety
/// `s` must be a live handle, `singular` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_is_singular(s: *const VoalabState, singular: *mut bool) -> VoalabStatus {
    guard(|| {
        let st = borrow(s, "state")?;
        let r = is_singular(&st.alg, &st.state)?;
        put(singular, r.singular, "singular")
    })
}

/// # Safety
/// `s` must be a live handle, `is_zero` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_is_zero(s: *const VoalabState, is_zero: *mut bool) -> VoalabStatus {
    guard(|| {
        let st = borrow(s, "state")?;
        put(is_zero, st.state.is_zero(), "is_zero")
    })
}

/// Canonical text of the state; release with [`voalab_string_free`].
///
/// # Safety
/// `s` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_to_string(s: *const VoalabState, out: *mut *mut c_char) -> VoalabStatus {
    guard(|| {
        let st = borrow(s, "state")?;
        let calc = ModeCalculus::new(&st.alg, st.state.level().clone());
        put(out, owned_string(calc.format(&st.state)), "out")
    })
}

/// Reduced C2 image of the state with the top block set to zero, as text.
///
/// # Safety
/// `s` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_state_c2_bottom(s: *const VoalabState, out: *mut *mut c_char) -> VoalabStatus {
    guard(|| {
        let st = borrow(s, "state")?;
        let img = zhu::restrict_to_bottom(&st.alg, &zhu::psi_reduced(&st.alg, &st.state));
        put(out, owned_string(zhu::format_even(&img)), "out")
    })
}

/// Whether the u-vectors of `psl(n|n)` cover every 2x2 minor.
///
/// # Safety
/// `covered` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_minor_cover(n: usize, covered: *mut bool) -> VoalabStatus {
    guard(|| {
        let rep = zhu::minor_cover_check(n)?;
        put(covered, rep.covered, "covered")
    })
}

/// Split an integer weight of length `len` into `lambda0` and its class
/// `j`. `lambda0` is written as a reduced fraction.
///
/// # Safety
/// `lambda` must point to `len` readable values; the outputs must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_decompose_weight(
    lambda: *const i64,
    len: usize,
    lambda0_num: *mut i64,
    lambda0_den: *mut i64,
    j: *mut u64,
) -> VoalabStatus {
    guard(|| {
        if lambda.is_null() {
            return Err(null("lambda"));
        }
        let w = std::slice::from_raw_parts(lambda, len);
        let d = lattice::decompose_weight(w)?;
        let num = i64::try_from(d.lambda0.numer()).map_err(|_| Error::Internal(fmt_q(&d.lambda0)))?;
        let den = i64::try_from(d.lambda0.denom()).map_err(|_| Error::Internal(fmt_q(&d.lambda0)))?;
        put(lambda0_num, num, "lambda0_num")?;
        put(lambda0_den, den, "lambda0_den")?;
        put(j, d.j, "j")
    })
}

/// Run the certification suite. `config_json` may be null for defaults.
/// The JSON report goes to `report` (release with [`voalab_string_free`]).
///
/// # Safety
/// `config_json` must be null or a nul-terminated string; the outputs must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn voalab_run_suite(
    config_json: *const c_char,
    all_passed: *mut bool,
    report: *mut *mut c_char,
) -> VoalabStatus {
    guard(|| {
        let cfg = if config_json.is_null() {
            SuiteConfig::default()
        } else {
            SuiteConfig::from_json(text(config_json, "config_json")?)?
        };
        let rep = run_suite(&cfg);
        let body = serde_json::to_string(&rep).map_err(|e| Error::Internal(e.to_string()))?;
        put(all_passed, rep.all_passed(), "all_passed")?;
        put(report, owned_string(body), "report")
    })
}
