//! C interface to `krein-core`.
//!
//! Matrices cross the boundary as row-major arrays of interleaved
//! `(re, im)` doubles, so an `n × m` matrix occupies `2 n m` doubles.
//! Every entry point returns a [`KreinStatus`]; on anything but
//! `KREIN_STATUS_OK` or `KREIN_STATUS_CHECK_FAILED` a message is available
//! from [`krein_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use krein_core::krein::{canonical_decomposition, krein_adjoint, FundamentalDecomposition, KreinSpaceSpec};
use krein_core::{ComplexMatrix, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KreinStatus {
    Ok = 0,
    /// A verification ran and did not pass.
    CheckFailed = 1,
    /// Malformed document, bad arguments or a degenerate form.
    InvalidInput = 2,
    NullPointer = 3,
    /// Output buffer shorter than required.
    BufferTooSmall = 4,
    Panic = 5,
}

/// A nondegenerate Hermitian form on `ℂⁿ` with its canonical fundamental
/// decomposition.
pub struct KreinSpace {
    space: KreinSpaceSpec,
    decomposition: FundamentalDecomposition,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("no interior nul")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: KreinStatus, msg: impl Into<String>) -> KreinStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> KreinStatus) -> KreinStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(KreinStatus::Panic, msg)
        }
    }
}

unsafe fn read_matrix(data: *const f64, rows: usize, cols: usize) -> ComplexMatrix {
    let raw = std::slice::from_raw_parts(data, 2 * rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(raw[k], raw[k + 1])
    })
}

unsafe fn write_matrix(m: &ComplexMatrix, out: *mut f64, len: usize) -> KreinStatus {
    let need = 2 * m.rows() * m.cols();
    if len < need {
        return fail(KreinStatus::BufferTooSmall, format!("output needs {need} doubles, got {len}"));
    }
    let dst = std::slice::from_raw_parts_mut(out, need);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m.get(i, j);
            let k = 2 * (i * m.cols() + j);
            dst[k] = z.re;
            dst[k + 1] = z.im;
        }
    }
    KreinStatus::Ok
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn krein_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a Kreĭn space from an `n × n` Hermitian Gram matrix.
///
/// # Safety
/// `gram` must point to `2 n²` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn krein_space_new(gram: *const f64, n: usize, tol: f64, out: *mut *mut KreinSpace) -> KreinStatus {
    guard(|| {
        if gram.is_null() || out.is_null() {
            return fail(KreinStatus::NullPointer, "gram and out must be non-null");
        }
        *out = ptr::null_mut();
        let g = read_matrix(gram, n, n);
        let built = KreinSpaceSpec::new(g, tol).and_then(|space| {
            let decomposition = canonical_decomposition(&space, tol)?;
            Ok(KreinSpace { space, decomposition })
        });
        match built {
            Ok(k) => {
                *out = Box::into_raw(Box::new(k));
                KreinStatus::Ok
            }
            Err(e) => fail(KreinStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `space` must come from [`krein_space_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn krein_space_free(space: *mut KreinSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn krein_space_dim(space: *const KreinSpace) -> usize {
    space.as_ref().map_or(0, |k| k.space.dim())
}

/// `(dim K₊, dim K₋)`.
///
/// # Safety
/// `space` must be a live handle; `plus` and `minus` must be writable.
#[no_mangle]
pub unsafe extern "C" fn krein_space_signature(
    space: *const KreinSpace,
    plus: *mut usize,
    minus: *mut usize,
) -> KreinStatus {
    guard(|| {
        let Some(k) = space.as_ref() else { return fail(KreinStatus::NullPointer, "space is null") };
        if plus.is_null() || minus.is_null() {
            return fail(KreinStatus::NullPointer, "plus and minus must be non-null");
        }
        (*plus, *minus) = k.decomposition.signature;
        KreinStatus::Ok
    })
}

/// Writes the canonical fundamental symmetry `J` (`2 n²` doubles).
///
/// # Safety
/// `space` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn krein_space_fundamental_symmetry(
    space: *const KreinSpace,
    out: *mut f64,
    len: usize,
) -> KreinStatus {
    guard(|| {
        let Some(k) = space.as_ref() else { return fail(KreinStatus::NullPointer, "space is null") };
        if out.is_null() {
            return fail(KreinStatus::NullPointer, "out is null");
        }
        write_matrix(&k.decomposition.j, out, len)
    })
}

/// Kreĭn adjoint `T^# = G_dom⁻¹ T† G_cod` of `T: domain → codomain`, given
/// as a `dim(codomain) × dim(domain)` matrix; writes the
/// `dim(domain) × dim(codomain)` result.
///
/// # Safety
/// Handles must be live, `t` must hold `2 dim(codomain) dim(domain)`
/// doubles and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn krein_space_adjoint(
    domain: *const KreinSpace,
    codomain: *const KreinSpace,
    t: *const f64,
    out: *mut f64,
    len: usize,
) -> KreinStatus {
    guard(|| {
        let (Some(dom), Some(cod)) = (domain.as_ref(), codomain.as_ref()) else {
            return fail(KreinStatus::NullPointer, "space is null");
        };
        if t.is_null() || out.is_null() {
            return fail(KreinStatus::NullPointer, "t and out must be non-null");
        }
        let op = read_matrix(t, cod.space.dim(), dom.space.dim());
        match krein_adjoint(&op, &dom.space, &cod.space) {
            Ok(a) => write_matrix(&a, out, len),
            Err(e) => fail(KreinStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Runs one `kreinlab` command. `argv` excludes the program name. On
/// return `*report` holds the JSON report (free it with
/// [`krein_string_free`]) or null, and `*exit_code` holds the command line
/// exit status. The status is `OK`, `CHECK_FAILED` or `INVALID_INPUT`
/// accordingly.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `report` and
/// `exit_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn krein_run_json(
    argv: *const *const c_char,
    argc: usize,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> KreinStatus {
    guard(|| {
        if report.is_null() || exit_code.is_null() || (argc > 0 && argv.is_null()) {
            return fail(KreinStatus::NullPointer, "argv, report and exit_code must be non-null");
        }
        *report = ptr::null_mut();
        let mut args = vec!["kreinlab".to_string()];
        for i in 0..argc {
            let a = *argv.add(i);
            if a.is_null() {
                return fail(KreinStatus::NullPointer, format!("argv[{i}] is null"));
            }
            match CStr::from_ptr(a).to_str() {
                Ok(s) => args.push(s.to_string()),
                Err(e) => return fail(KreinStatus::InvalidInput, format!("argv[{i}]: {e}")),
            }
        }
        let inv = krein_core::cli::invoke(args);
        *exit_code = inv.status;
        if let Some(text) = inv.report {
            *report = CString::new(text).expect("JSON has no nul bytes").into_raw();
        }
        match inv.status {
            0 => KreinStatus::Ok,
            1 => KreinStatus::CheckFailed,
            _ => fail(KreinStatus::InvalidInput, inv.message.unwrap_or_default().trim_end().to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn krein_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
