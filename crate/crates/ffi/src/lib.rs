//! C ABI over `lsd_core`.
//!
//! Every entry point returns an [`LsdStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`lsd_last_error_message`]. Panics never cross the boundary.
//!
//! Matrices are passed as two row-major `double[16]` arrays (real and
//! imaginary parts); vectors as two `double[4]` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lsd_core::coset::{coset_generate, CosetParams};
use lsd_core::io::{parse_state, state_to_json, LoadError};
use lsd_core::lsd::{
    self, ppt_check, verify_optimality_with, LSDecomposition, RankClass, Tolerances,
};
use lsd_core::qstate::{lambda_spectrum, DensityMatrix};
use lsd_core::wootters::{self, EntropyBase};
use lsd_core::{CMat4, CVec4, Error, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsdStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input is not a valid density matrix (Hermitian, unit trace, PSD, finite).
    InvalidState = 2,
    /// Malformed JSON or bad UTF-8.
    ParseError = 3,
    /// Out-of-range arguments or parameters.
    InvalidArgument = 4,
    /// The state has no entangled part.
    NoPurePart = 5,
    /// A numerical kernel failed (rank mismatch, degenerate input, ...).
    Numerical = 6,
    /// A Rust panic was caught.
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsdEntropyBase {
    Bits = 0,
    Nats = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsdRankClass {
    Full = 0,
    Rank3 = 1,
    Rank2 = 2,
    Separable = 3,
    Pure = 4,
}

/// Opaque validated two-qubit density matrix.
pub struct LsdDensityMatrix {
    inner: DensityMatrix,
}

/// Opaque Lewenstein–Sanpera decomposition.
pub struct LsdDecomposition {
    inner: LSDecomposition,
}

struct Failure {
    status: LsdStatus,
    message: String,
}

impl Failure {
    fn new(status: LsdStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Failure::new(LsdStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotHermitian { .. }
            | Error::NotUnitTrace { .. }
            | Error::NotPSD { .. }
            | Error::NonFinite => LsdStatus::InvalidState,
            Error::InvalidParams(_)
            | Error::NotSpecialUnitary { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidRank(_)
            | Error::NotNormalized { .. } => LsdStatus::InvalidArgument,
            Error::NoPurePart => LsdStatus::NoPurePart,
            _ => LsdStatus::Numerical,
        };
        Failure::new(status, format!("{e:?}: {e}"))
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid(inner) => inner.into(),
            other => Failure::new(LsdStatus::ParseError, other.to_string()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LsdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsdStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            LsdStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn dest<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::null(what))
}

unsafe fn read_array<const N: usize>(p: *const f64, what: &str) -> Result<[f64; N], Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

unsafe fn write_array(p: *mut f64, values: &[f64], what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    for (i, v) in values.iter().enumerate() {
        *p.add(i) = *v;
    }
    Ok(())
}

unsafe fn write_matrix(m: &CMat4, re: *mut f64, im: *mut f64) -> Result<(), Failure> {
    let flat: Vec<C64> = m.0.iter().flatten().copied().collect();
    write_array(re, &flat.iter().map(|c| c.re).collect::<Vec<_>>(), "re")?;
    write_array(im, &flat.iter().map(|c| c.im).collect::<Vec<_>>(), "im")
}

unsafe fn write_vector(v: &CVec4, re: *mut f64, im: *mut f64) -> Result<(), Failure> {
    write_array(re, &v.0.map(|c| c.re), "re")?;
    write_array(im, &v.0.map(|c| c.im), "im")
}

unsafe fn write_string(s: String, dst: *mut *mut c_char) -> Result<(), Failure> {
    let dst = dest(dst, "out")?;
    let c = CString::new(s).map_err(|e| Failure::new(LsdStatus::Numerical, e.to_string()))?;
    *dst = c.into_raw();
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lsd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lsd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validate a 4×4 matrix given as row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to 16 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_density_matrix_new(
    re: *const f64,
    im: *const f64,
    out: *mut *mut LsdDensityMatrix,
) -> LsdStatus {
    guard(|| {
        let re = read_array::<16>(re, "re")?;
        let im = read_array::<16>(im, "im")?;
        let dst = dest(out, "out")?;
        let m = CMat4::from_fn(|i, j| C64::new(re[4 * i + j], im[4 * i + j]));
        *dst = boxed(LsdDensityMatrix {
            inner: DensityMatrix::validate(m)?,
        });
        Ok(())
    })
}

/// Parse a state from the toolkit's JSON format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_density_matrix_from_json(
    json: *const c_char,
    out: *mut *mut LsdDensityMatrix,
) -> LsdStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure::new(LsdStatus::ParseError, e.to_string()))?;
        let dst = dest(out, "out")?;
        *dst = boxed(LsdDensityMatrix {
            inner: parse_state(text)?,
        });
        Ok(())
    })
}

/// # Safety
/// `rho` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lsd_density_matrix_free(rho: *mut LsdDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Copy the matrix out as row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to 16 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsd_density_matrix_get(
    rho: *const LsdDensityMatrix,
    re: *mut f64,
    im: *mut f64,
) -> LsdStatus {
    guard(|| write_matrix(get(rho, "rho")?.inner.matrix(), re, im))
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_concurrence(rho: *const LsdDensityMatrix, out: *mut f64) -> LsdStatus {
    guard(|| {
        *dest(out, "out")? = wootters::concurrence(&get(rho, "rho")?.inner)?;
        Ok(())
    })
}

/// Descending λ-spectrum into `out[4]`.
///
/// # Safety
/// `rho` must be a live handle; `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsd_lambda_spectrum(
    rho: *const LsdDensityMatrix,
    out: *mut f64,
) -> LsdStatus {
    guard(|| write_array(out, &lambda_spectrum(&get(rho, "rho")?.inner)?.0, "out"))
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_entanglement_of_formation(
    rho: *const LsdDensityMatrix,
    base: LsdEntropyBase,
    out: *mut f64,
) -> LsdStatus {
    guard(|| {
        let base = match base {
            LsdEntropyBase::Bits => EntropyBase::Bits,
            LsdEntropyBase::Nats => EntropyBase::Nats,
        };
        *dest(out, "out")? = wootters::entanglement_of_formation(&get(rho, "rho")?.inner, base)?;
        Ok(())
    })
}

/// Peres–Horodecki test. `min_eigenvalue` may be null.
///
/// # Safety
/// `rho` must be a live handle; `separable` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_ppt_check(
    rho: *const LsdDensityMatrix,
    separable: *mut bool,
    min_eigenvalue: *mut f64,
) -> LsdStatus {
    guard(|| {
        let r = ppt_check(&get(rho, "rho")?.inner);
        *dest(separable, "separable")? = r.separable;
        if let Some(m) = min_eigenvalue.as_mut() {
            *m = r.min_pt_eigenvalue;
        }
        Ok(())
    })
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_decompose(
    rho: *const LsdDensityMatrix,
    out: *mut *mut LsdDecomposition,
) -> LsdStatus {
    guard(|| {
        let d = lsd::ls_decompose(&get(rho, "rho")?.inner)?;
        *dest(out, "out")? = boxed(LsdDecomposition { inner: d });
        Ok(())
    })
}

/// # Safety
/// `d` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_free(d: *mut LsdDecomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Separable weight λ.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_weight(
    d: *const LsdDecomposition,
    out: *mut f64,
) -> LsdStatus {
    guard(|| {
        *dest(out, "out")? = get(d, "decomposition")?.inner.weight;
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_rank_class(
    d: *const LsdDecomposition,
    out: *mut LsdRankClass,
) -> LsdStatus {
    guard(|| {
        *dest(out, "out")? = match get(d, "decomposition")?.inner.rank_class {
            RankClass::Full => LsdRankClass::Full,
            RankClass::Rank3 => LsdRankClass::Rank3,
            RankClass::Rank2 => LsdRankClass::Rank2,
            RankClass::Separable => LsdRankClass::Separable,
            RankClass::Pure => LsdRankClass::Pure,
        };
        Ok(())
    })
}

/// The separable part as a new handle, owned by the caller.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_separable(
    d: *const LsdDecomposition,
    out: *mut *mut LsdDensityMatrix,
) -> LsdStatus {
    guard(|| {
        let sep = get(d, "decomposition")?.inner.sep;
        *dest(out, "out")? = boxed(LsdDensityMatrix { inner: sep });
        Ok(())
    })
}

/// The entangled pure part. Returns `LSD_STATUS_NO_PURE_PART` for separable
/// input.
///
/// # Safety
/// `d` must be a live handle; `re` and `im` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_pure(
    d: *const LsdDecomposition,
    re: *mut f64,
    im: *mut f64,
) -> LsdStatus {
    guard(|| {
        let psi = get(d, "decomposition")?
            .inner
            .pure
            .ok_or(Error::NoPurePart)?;
        write_vector(&psi, re, im)
    })
}

/// Product vector |z_index⟩ of the separable part (index 0..3).
///
/// # Safety
/// `d` must be a live handle; `re` and `im` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_product_vector(
    d: *const LsdDecomposition,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> LsdStatus {
    guard(|| {
        let zs = &get(d, "decomposition")?.inner.zs;
        let z = zs.get(index).ok_or_else(|| {
            Failure::new(
                LsdStatus::InvalidArgument,
                format!("index {index} out of range"),
            )
        })?;
        write_vector(z, re, im)
    })
}

/// Check the optimality certificate of `d` for `rho`. `tol <= 0` uses the
/// default tolerance ladder, otherwise `tol` applies to every check.
/// `max_residual` may be null.
///
/// # Safety
/// Handles must be live; `verdict` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_verify_optimality(
    rho: *const LsdDensityMatrix,
    d: *const LsdDecomposition,
    tol: f64,
    verdict: *mut bool,
    max_residual: *mut f64,
) -> LsdStatus {
    guard(|| {
        let tolerances = if tol > 0.0 {
            Tolerances::uniform(tol)
        } else {
            Tolerances::default()
        };
        let r = verify_optimality_with(
            &get(rho, "rho")?.inner,
            &get(d, "decomposition")?.inner,
            tolerances,
        )?;
        *dest(verdict, "verdict")? = r.verdict;
        if let Some(m) = max_residual.as_mut() {
            *m = r.max_residual;
        }
        Ok(())
    })
}

/// Generate a state from coset parameters. `trace_factor` may be null.
///
/// # Safety
/// `lambdas` must point to 4 doubles; `theta`, `xi`, `phi` to 2 each.
#[no_mangle]
pub unsafe extern "C" fn lsd_coset_generate(
    lambdas: *const f64,
    theta: *const f64,
    xi: *const f64,
    phi: *const f64,
    out: *mut *mut LsdDensityMatrix,
    trace_factor: *mut f64,
) -> LsdStatus {
    guard(|| {
        let params = CosetParams {
            lambdas: read_array(lambdas, "lambdas")?,
            theta: read_array(theta, "theta")?,
            xi: read_array(xi, "xi")?,
            phi: read_array(phi, "phi")?,
        };
        let dst = dest(out, "out")?;
        let g = coset_generate(&params)?;
        if let Some(t) = trace_factor.as_mut() {
            *t = g.trace_factor;
        }
        *dst = boxed(LsdDensityMatrix { inner: g.rho });
        Ok(())
    })
}

/// Serialize a state to JSON. Free the string with [`lsd_string_free`].
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_density_matrix_to_json(
    rho: *const LsdDensityMatrix,
    out: *mut *mut c_char,
) -> LsdStatus {
    guard(|| write_string(state_to_json(&get(rho, "rho")?.inner), out))
}

/// Serialize a decomposition to JSON. Free the string with [`lsd_string_free`].
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsd_decomposition_to_json(
    d: *const LsdDecomposition,
    out: *mut *mut c_char,
) -> LsdStatus {
    guard(|| {
        let text = serde_json::to_string(&get(d, "decomposition")?.inner)
            .map_err(|e| Failure::new(LsdStatus::Numerical, e.to_string()))?;
        write_string(text, out)
    })
}

/// # Safety
/// `s` must come from this library's `*_to_json` functions. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn lsd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
