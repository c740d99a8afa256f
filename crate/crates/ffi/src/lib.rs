//! C ABI for oscitime.
//!
//! Matrices and functions cross the boundary as opaque handles that the caller
//! releases with the matching `_free` function. Every fallible call returns an
//! [`OscitimeStatus`]; on failure a message is available from
//! [`oscitime_last_error_message`] on the same thread. Panics never unwind
//! into C, they are reported as `OSCITIME_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use oscitime::matrices::periodic_defect_matrix;
use oscitime::{
    commutator_matrix_correct, commutator_matrix_naive, fock_eigenfunction, hermiticity_defect,
    hermiticity_defect_matrix, inner_product, paradox_gap, phase_matrix, residual_report,
    time_matrix, Error, FockWindow, OperatorMatrix, PhasePolyFourier, PhaseRepOperator,
    PhysicalConstants, Target,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscitimeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BoundOverflow = 3,
    WindowTooLarge = 4,
    Inconsistency = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscitimeMatrixKind {
    Phase = 0,
    Time = 1,
    CommutatorCorrect = 2,
    CommutatorNaive = 3,
    ParadoxGap = 4,
    HermiticityDefect = 5,
    PeriodicDefect = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscitimeOperator {
    Hamiltonian = 0,
    Phase = 1,
    Time = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscitimeTarget {
    IhbarIdentity = 0,
    Zero = 1,
}

/// Inclusive range of quantum numbers. Negative n requires `allow_negative`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OscitimeWindow {
    pub n_min: i64,
    pub n_max: i64,
    pub allow_negative: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OscitimeConstants {
    pub hbar: f64,
    pub omega: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OscitimeResidual {
    pub max_abs: f64,
    pub frobenius: f64,
    pub worst_m: i64,
    pub worst_n: i64,
}

/// Opaque matrix handle.
pub struct OscitimeMatrix(OperatorMatrix);

/// Opaque phase-representation function handle.
pub struct OscitimeFunction(PhasePolyFourier);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OscitimeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::HarmonicOverflow { .. } | Error::SupportOverflow { .. } | Error::DegreeOverflow { .. } => {
                OscitimeStatus::BoundOverflow
            }
            Error::WindowTooLarge { .. } => OscitimeStatus::WindowTooLarge,
            Error::Inconsistency { .. } => OscitimeStatus::Inconsistency,
            _ => OscitimeStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OscitimeStatus::NullPointer, format!("{what} is NULL"))
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OscitimeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OscitimeStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside oscitime".into());
            OscitimeStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes a live handle or NULL.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_complex(re: *mut f64, im: *mut f64, z: Complex64) -> Result<(), Failure> {
    if re.is_null() || im.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: both non-null and valid for writes per the caller contract.
    unsafe {
        re.write(z.re);
        im.write(z.im);
    }
    Ok(())
}

fn window(w: &OscitimeWindow) -> Result<FockWindow, Failure> {
    let w = if w.allow_negative {
        FockWindow::with_negative(w.n_min, w.n_max)
    } else {
        FockWindow::new(w.n_min, w.n_max)
    };
    Ok(w?)
}

fn constants(c: &OscitimeConstants) -> Result<PhysicalConstants, Failure> {
    Ok(PhysicalConstants::new(c.hbar, c.omega)?)
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(OscitimeStatus::InvalidArgument, e.to_string()))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oscitime_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn oscitime_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds one of the Fock-window matrices. The phase matrix does not depend
/// on the constants, but they are still validated.
///
/// # Safety
/// `window` and `constants` must point to valid structs; `out` must be valid
/// for a pointer write. The returned handle is freed with [`oscitime_matrix_free`].
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_build(
    kind: OscitimeMatrixKind,
    window_spec: *const OscitimeWindow,
    constants_spec: *const OscitimeConstants,
    out: *mut *mut OscitimeMatrix,
) -> OscitimeStatus {
    guard(|| {
        let w = window(unsafe { deref(window_spec, "window") }?)?;
        let c = constants(unsafe { deref(constants_spec, "constants") }?)?;
        let m = match kind {
            OscitimeMatrixKind::Phase => phase_matrix(w),
            OscitimeMatrixKind::Time => time_matrix(w, c),
            OscitimeMatrixKind::CommutatorCorrect => commutator_matrix_correct(w, c),
            OscitimeMatrixKind::CommutatorNaive => commutator_matrix_naive(w, c),
            OscitimeMatrixKind::ParadoxGap => paradox_gap(w, c),
            OscitimeMatrixKind::HermiticityDefect => hermiticity_defect_matrix(w, c),
            OscitimeMatrixKind::PeriodicDefect => periodic_defect_matrix(w, c),
        }?;
        let handle = Box::into_raw(Box::new(OscitimeMatrix(m)));
        unsafe { write_out(out, handle, "out") }.inspect_err(|_| {
            // SAFETY: `handle` was created just above and never shared.
            drop(unsafe { Box::from_raw(handle) });
        })
    })
}

/// Number of rows (= columns); 0 for NULL.
///
/// # Safety
/// `matrix` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_dim(matrix: *const OscitimeMatrix) -> usize {
    unsafe { matrix.as_ref() }.map_or(0, |m| m.0.dim())
}

/// Writes the matrix window.
///
/// # Safety
/// `matrix` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_window(
    matrix: *const OscitimeMatrix,
    out: *mut OscitimeWindow,
) -> OscitimeStatus {
    guard(|| {
        let m = unsafe { deref(matrix, "matrix") }?;
        let w = m.0.window();
        let spec = OscitimeWindow {
            n_min: w.n_min(),
            n_max: w.n_max(),
            allow_negative: w.n_min() < 0,
        };
        unsafe { write_out(out, spec, "out") }
    })
}

/// ⟨m|A|n⟩ by quantum numbers.
///
/// # Safety
/// `matrix` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_get(
    matrix: *const OscitimeMatrix,
    m: i64,
    n: i64,
    re: *mut f64,
    im: *mut f64,
) -> OscitimeStatus {
    guard(|| {
        let mat = unsafe { deref(matrix, "matrix") }?;
        let v = mat.0.get(m, n).ok_or_else(|| {
            Failure(
                OscitimeStatus::InvalidArgument,
                format!("({m},{n}) lies outside the matrix window"),
            )
        })?;
        unsafe { write_complex(re, im, v) }
    })
}

/// Copies all entries row-major as interleaved (re, im) pairs. `len` is the
/// number of doubles available at `buffer` and must be at least 2·dim².
///
/// # Safety
/// `matrix` must be a live handle and `buffer` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_copy_entries(
    matrix: *const OscitimeMatrix,
    buffer: *mut f64,
    len: usize,
) -> OscitimeStatus {
    guard(|| {
        let m = unsafe { deref(matrix, "matrix") }?;
        let needed = 2 * m.0.entries().len();
        if buffer.is_null() {
            return Err(null("buffer"));
        }
        if len < needed {
            return Err(Failure(
                OscitimeStatus::InvalidArgument,
                format!("buffer holds {len} doubles, {needed} needed"),
            ));
        }
        // SAFETY: non-null and at least `needed` doubles long per the checks above.
        let out = unsafe { std::slice::from_raw_parts_mut(buffer, needed) };
        for (pair, v) in out.chunks_exact_mut(2).zip(m.0.entries()) {
            pair[0] = v.re;
            pair[1] = v.im;
        }
        Ok(())
    })
}

/// Deviation of `matrix` from iħ·I or from zero.
///
/// # Safety
/// `matrix` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_residual(
    matrix: *const OscitimeMatrix,
    target: OscitimeTarget,
    out: *mut OscitimeResidual,
) -> OscitimeStatus {
    guard(|| {
        let m = unsafe { deref(matrix, "matrix") }?;
        let t = match target {
            OscitimeTarget::IhbarIdentity => Target::IhbarIdentity,
            OscitimeTarget::Zero => Target::Zero,
        };
        let r = residual_report(&m.0, t);
        let report = OscitimeResidual {
            max_abs: r.max_abs,
            frobenius: r.frobenius,
            worst_m: r.worst.0,
            worst_n: r.worst.1,
        };
        unsafe { write_out(out, report, "out") }
    })
}

/// Serializes the matrix to JSON. Free the string with [`oscitime_string_free`].
///
/// # Safety
/// `matrix` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_to_json(
    matrix: *const OscitimeMatrix,
    out: *mut *mut c_char,
) -> OscitimeStatus {
    guard(|| {
        let m = unsafe { deref(matrix, "matrix") }?;
        let json = serde_json_string(&m.0)?;
        let s = into_c_string(json)?;
        unsafe { write_out(out, s, "out") }
    })
}

/// # Safety
/// `matrix` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn oscitime_matrix_free(matrix: *mut OscitimeMatrix) {
    if !matrix.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(matrix) });
    }
}

fn box_function(f: PhasePolyFourier, out: *mut *mut OscitimeFunction) -> Result<(), Failure> {
    let handle = Box::into_raw(Box::new(OscitimeFunction(f)));
    unsafe { write_out(out, handle, "out") }.inspect_err(|_| {
        // SAFETY: `handle` was created just above and never shared.
        drop(unsafe { Box::from_raw(handle) });
    })
}

/// The Fock state e^{−inφ}/√(2π).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn oscitime_fock(n: i64, out: *mut *mut OscitimeFunction) -> OscitimeStatus {
    guard(|| box_function(fock_eigenfunction(n), out))
}

/// Parses a function from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn oscitime_function_from_json(
    json: *const c_char,
    out: *mut *mut OscitimeFunction,
) -> OscitimeStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        // SAFETY: non-null, NUL-terminated per the caller contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(OscitimeStatus::InvalidArgument, e.to_string()))?;
        let f: PhasePolyFourier = serde_json::from_str(text)
            .map_err(|e| Failure(OscitimeStatus::InvalidArgument, e.to_string()))?;
        box_function(f, out)
    })
}

/// Applies H, φ or χ and returns a new handle.
///
/// # Safety
/// `function` must be a live handle, `constants_spec` valid, `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn oscitime_function_apply(
    op: OscitimeOperator,
    function: *const OscitimeFunction,
    constants_spec: *const OscitimeConstants,
    out: *mut *mut OscitimeFunction,
) -> OscitimeStatus {
    guard(|| {
        let f = unsafe { deref(function, "function") }?;
        let c = constants(unsafe { deref(constants_spec, "constants") }?)?;
        let op = match op {
            OscitimeOperator::Hamiltonian => PhaseRepOperator::hamiltonian(c),
            OscitimeOperator::Phase => PhaseRepOperator::Phase,
            OscitimeOperator::Time => PhaseRepOperator::time(c),
        };
        box_function(op.apply(&f.0)?, out)
    })
}

/// Pointwise value f(φ).
///
/// # Safety
/// `function` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_function_evaluate(
    function: *const OscitimeFunction,
    phi: f64,
    re: *mut f64,
    im: *mut f64,
) -> OscitimeStatus {
    guard(|| {
        let f = unsafe { deref(function, "function") }?;
        if !phi.is_finite() {
            return Err(Failure(OscitimeStatus::InvalidArgument, "phi must be finite".into()));
        }
        unsafe { write_complex(re, im, f.0.evaluate(phi)) }
    })
}

/// ⟨f|g⟩ over [0, 2π].
///
/// # Safety
/// `f` and `g` must be live handles; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_inner_product(
    f: *const OscitimeFunction,
    g: *const OscitimeFunction,
    re: *mut f64,
    im: *mut f64,
) -> OscitimeStatus {
    guard(|| {
        let f = unsafe { deref(f, "f") }?;
        let g = unsafe { deref(g, "g") }?;
        unsafe { write_complex(re, im, inner_product(&f.0, &g.0)?) }
    })
}

/// ⟨f|Hg⟩ − ⟨Hf|g⟩.
///
/// # Safety
/// `f`, `g` must be live handles, `constants_spec` valid, `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn oscitime_hermiticity_defect(
    f: *const OscitimeFunction,
    g: *const OscitimeFunction,
    constants_spec: *const OscitimeConstants,
    re: *mut f64,
    im: *mut f64,
) -> OscitimeStatus {
    guard(|| {
        let f = unsafe { deref(f, "f") }?;
        let g = unsafe { deref(g, "g") }?;
        let c = constants(unsafe { deref(constants_spec, "constants") }?)?;
        unsafe { write_complex(re, im, hermiticity_defect(&f.0, &g.0, &c)?) }
    })
}

/// Serializes the function to JSON. Free the string with [`oscitime_string_free`].
///
/// # Safety
/// `function` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn oscitime_function_to_json(
    function: *const OscitimeFunction,
    out: *mut *mut c_char,
) -> OscitimeStatus {
    guard(|| {
        let f = unsafe { deref(function, "function") }?;
        let s = into_c_string(serde_json_string(&f.0)?)?;
        unsafe { write_out(out, s, "out") }
    })
}

/// # Safety
/// `function` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn oscitime_function_free(function: *mut OscitimeFunction) {
    if !function.is_null() {
        // SAFETY: handle came from Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(function) });
    }
}

/// # Safety
/// `s` must be NULL or a string returned by one of the `_to_json` functions.
#[no_mangle]
pub unsafe extern "C" fn oscitime_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: string came from CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

fn serde_json_string<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(OscitimeStatus::InvalidArgument, e.to_string()))
}
