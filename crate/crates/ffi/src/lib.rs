//! C ABI for `zps-parity`.
//!
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free` function. Every entry point returns a [`ZpsStatus`];
//! on failure, [`zps_last_error_message`] describes the error for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zps_parity::textfmt::{format_matrix, parse_matrix};
use zps_parity::{
    parity_check_bruteforce, parity_check_iterative, parity_check_minors, standard_form,
    verify_parity, Error, Matrix, RingSpec, StandardForm,
};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    ShapeMismatch = 4,
    RingMismatch = 5,
    BudgetExceeded = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Parity-check construction.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZpsMethod {
    Minors = 0,
    Iterative = 1,
    Bruteforce = 2,
}

/// A matrix over `Z_{p^s}`.
pub struct ZpsMatrix(Matrix);

/// A standard-form generator matrix with its type and column permutation.
pub struct ZpsStandardForm(StandardForm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> ZpsStatus {
    match e {
        Error::Parse { .. } => ZpsStatus::Parse,
        Error::ShapeMismatch { .. } => ZpsStatus::ShapeMismatch,
        Error::RingMismatch { .. } => ZpsStatus::RingMismatch,
        Error::BudgetExceeded { .. } => ZpsStatus::BudgetExceeded,
        _ => ZpsStatus::InvalidArgument,
    }
}

/// Runs `f`, recording its error or panic.
fn guard(f: impl FnOnce() -> Result<(), (ZpsStatus, String)>) -> ZpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ZpsStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            ZpsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ZpsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ZpsStatus, String) {
    (ZpsStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or valid for reads of `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ZpsStatus, String)> {
    // SAFETY: upheld by the caller.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or valid for writes of a pointer.
unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), (ZpsStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and writable per the caller's contract.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn zps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a matrix from `nrows * ncols` row-major residues.
///
/// # Safety
/// `data` must be valid for `nrows * ncols` reads (it may be null when that
/// product is zero); `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_new(
    p: u64,
    s: u32,
    nrows: usize,
    ncols: usize,
    data: *const u64,
    out: *mut *mut ZpsMatrix,
) -> ZpsStatus {
    guard(|| {
        let ring = RingSpec::new(p, s).map_err(lib_err)?;
        let len = nrows
            .checked_mul(ncols)
            .ok_or((ZpsStatus::InvalidArgument, "matrix is too large".to_owned()))?;
        let values = if len == 0 {
            Vec::new()
        } else if data.is_null() {
            return Err(null("data"));
        } else {
            // SAFETY: the caller guarantees `len` readable elements.
            unsafe { std::slice::from_raw_parts(data, len) }.to_vec()
        };
        let m = Matrix::from_vec(ring, nrows, ncols, values).map_err(lib_err)?;
        // SAFETY: per the caller's contract.
        unsafe { store(out, ZpsMatrix(m)) }
    })
}

/// Parses the text matrix format (`p s nrows ncols` header, then rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_parse(
    text: *const c_char,
    out: *mut *mut ZpsMatrix,
) -> ZpsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        // SAFETY: non-null and NUL-terminated per the caller's contract.
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|e| (ZpsStatus::InvalidUtf8, e.to_string()))?;
        let m = parse_matrix(text).map_err(lib_err)?;
        // SAFETY: per the caller's contract.
        unsafe { store(out, ZpsMatrix(m)) }
    })
}

/// # Safety
/// `m` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_free(m: *mut ZpsMatrix) {
    if !m.is_null() {
        // SAFETY: the handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_nrows(m: *const ZpsMatrix) -> usize {
    // SAFETY: per the caller's contract.
    unsafe { m.as_ref() }.map_or(0, |m| m.0.nrows())
}

/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_ncols(m: *const ZpsMatrix) -> usize {
    // SAFETY: per the caller's contract.
    unsafe { m.as_ref() }.map_or(0, |m| m.0.ncols())
}

/// Copies the entries, row-major, into `buf` of length `len`, which must be
/// at least `nrows * ncols`.
///
/// # Safety
/// `m` is a live handle; `buf` is valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_copy_data(
    m: *const ZpsMatrix,
    buf: *mut u64,
    len: usize,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let m = unsafe { borrow(m, "matrix") }?;
        let data = m.0.as_slice();
        if data.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < data.len() {
            return Err((
                ZpsStatus::InvalidArgument,
                format!("buffer holds {len} entries, need {}", data.len()),
            ));
        }
        // SAFETY: `buf` has room for `data.len()` values.
        unsafe { ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len()) };
        Ok(())
    })
}

/// Renders the matrix in the text format. Release with [`zps_string_free`].
///
/// # Safety
/// `m` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_matrix_to_text(
    m: *const ZpsMatrix,
    out: *mut *mut c_char,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let m = unsafe { borrow(m, "matrix") }?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let text = CString::new(format_matrix(&m.0)).expect("formatted matrices contain no NUL");
        // SAFETY: `out` is writable.
        unsafe { *out = text.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn zps_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Reduces the generators `g` to standard form.
///
/// # Safety
/// `g` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_standard_form(
    g: *const ZpsMatrix,
    out: *mut *mut ZpsStandardForm,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let g = unsafe { borrow(g, "matrix") }?;
        // SAFETY: per the caller's contract.
        unsafe { store(out, ZpsStandardForm(standard_form(&g.0))) }
    })
}

/// # Safety
/// `sf` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zps_standard_form_free(sf: *mut ZpsStandardForm) {
    if !sf.is_null() {
        // SAFETY: the handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(sf) });
    }
}

/// A copy of the standard-form matrix.
///
/// # Safety
/// `sf` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_standard_form_matrix(
    sf: *const ZpsStandardForm,
    out: *mut *mut ZpsMatrix,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let sf = unsafe { borrow(sf, "standard form") }?;
        // SAFETY: per the caller's contract.
        unsafe { store(out, ZpsMatrix(sf.0.matrix().clone())) }
    })
}

/// Writes `t_1, ..., t_s` into `types`, which must hold `s` values.
///
/// # Safety
/// `sf` is a live handle; `types` is valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn zps_standard_form_type(
    sf: *const ZpsStandardForm,
    types: *mut usize,
    len: usize,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let sf = unsafe { borrow(sf, "standard form") }?;
        let t = sf.0.layout().types();
        if types.is_null() {
            return Err(null("types"));
        }
        if len < t.len() {
            return Err((
                ZpsStatus::InvalidArgument,
                format!("buffer holds {len} entries, need {}", t.len()),
            ));
        }
        // SAFETY: `types` has room for `t.len()` values.
        unsafe { ptr::copy_nonoverlapping(t.as_ptr(), types, t.len()) };
        Ok(())
    })
}

/// Computes a parity-check matrix of the code. With `original_coords` the
/// result checks the matrix the standard form was computed from; otherwise
/// it checks the standard form itself. The brute-force method returns every
/// dual codeword.
///
/// # Safety
/// `sf` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_parity_check(
    sf: *const ZpsStandardForm,
    method: ZpsMethod,
    original_coords: bool,
    out: *mut *mut ZpsMatrix,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let sf = &unsafe { borrow(sf, "standard form") }?.0;
        let (h, h_original) = match method {
            ZpsMethod::Minors => {
                let r = parity_check_minors(sf);
                (r.h, r.h_original)
            }
            ZpsMethod::Iterative => {
                let r = parity_check_iterative(sf);
                (r.h, r.h_original)
            }
            ZpsMethod::Bruteforce => {
                let h = parity_check_bruteforce(sf.matrix()).map_err(lib_err)?;
                let back = h
                    .apply_col_permutation(&sf.permutation().inverse())
                    .map_err(lib_err)?;
                (h, back)
            }
        };
        let chosen = if original_coords { h_original } else { h };
        // SAFETY: per the caller's contract.
        unsafe { store(out, ZpsMatrix(chosen)) }
    })
}

/// Checks `G H^T = 0`. On a nonzero product `*holds` is false and
/// `*row`, `*col` give the 1-based position of its first nonzero entry;
/// otherwise they are 0. `row` and `col` may be null.
///
/// # Safety
/// `g` and `h` are live handles; `holds` is valid for one write; `row` and
/// `col` are null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn zps_verify(
    g: *const ZpsMatrix,
    h: *const ZpsMatrix,
    holds: *mut bool,
    row: *mut usize,
    col: *mut usize,
) -> ZpsStatus {
    guard(|| {
        // SAFETY: per the caller's contract.
        let g = unsafe { borrow(g, "generator matrix") }?;
        // SAFETY: per the caller's contract.
        let h = unsafe { borrow(h, "parity-check matrix") }?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        let verdict = verify_parity(&g.0, &h.0).map_err(lib_err)?;
        let (r, c) = verdict.certificate.map_or((0, 0), |c| (c.row, c.col));
        // SAFETY: `holds` is writable; `row` and `col` are checked for null.
        unsafe {
            *holds = verdict.holds;
            if !row.is_null() {
                *row = r;
            }
            if !col.is_null() {
                *col = c;
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        // SAFETY: the thread-local string is NUL-terminated and alive.
        unsafe { CStr::from_ptr(zps_last_error_message()) }
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn panics_become_status_codes() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, ZpsStatus::Panic);
        assert_eq!(message(), "internal panic");
        assert_eq!(guard(|| Ok(())), ZpsStatus::Ok);
        assert_eq!(message(), "");
    }

    #[test]
    fn error_mapping() {
        assert_eq!(status_of(&Error::EmptyVector), ZpsStatus::InvalidArgument);
        assert_eq!(
            status_of(&Error::BudgetExceeded {
                what: "x",
                budget_log2: 1
            }),
            ZpsStatus::BudgetExceeded
        );
        set_last_error("a\0b");
        assert_eq!(message(), "a b");
    }
}
