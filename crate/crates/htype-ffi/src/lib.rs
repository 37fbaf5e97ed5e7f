//! C ABI for the laboratory core.
//!
//! Conventions:
//! - Every constructor writes an opaque handle through an out-pointer and
//!   returns a status code; every handle has a matching `_free`.
//! - Status codes: 0 success, 1 null pointer, 2 analysis/validation failure,
//!   3 invalid configuration, 4 I/O failure (mirroring the CLI exit codes).
//! - On failure the message is stored thread-locally and can be copied out
//!   with `ht_last_error`.
//!
//! The committed header `include/htype.h` declares this surface; keep the
//! two in sync when extending it.

use htype_core::calculus::{propagator, rescale_dyadic, LPProfile};
use htype_core::dispersive::kernel_scaling_check;
use htype_core::field::SphericalSpectrum;
use htype_core::grid::SpectralGrid;
use htype_core::group::HTypeGroup;
use htype_core::strichartz::{classify_pair, parse_ratio_str, s_star, Exponent};
use htype_core::Error;
use libc::{c_char, c_double, c_int, size_t};
use std::cell::RefCell;
use std::ffi::CStr;
use std::sync::Arc;

pub const HT_OK: c_int = 0;
pub const HT_NULL: c_int = 1;
pub const HT_FAIL: c_int = 2;
pub const HT_CONFIG: c_int = 3;
pub const HT_IO: c_int = 4;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn code_for(err: &Error) -> c_int {
    match err {
        Error::Io(_) => HT_IO,
        Error::ConfigInvalid(_)
        | Error::InvalidAlpha(_)
        | Error::DimensionConstraint { .. }
        | Error::NoCliffordModule { .. }
        | Error::DimensionMismatch { .. }
        | Error::NonpositiveScale(_)
        | Error::GridTooCoarse(_)
        | Error::NegativeArgument(_)
        | Error::CutoffTooLarge { .. }
        | Error::GridMismatch(_)
        | Error::IncompatibleGrids(_)
        | Error::NegativeTime(_)
        | Error::ZeroTime
        | Error::OutOfRange(_)
        | Error::BothInfinite => HT_CONFIG,
        _ => HT_FAIL,
    }
}

fn fail(err: Error) -> c_int {
    let code = code_for(&err);
    set_error(err.to_string());
    code
}

/// Opaque group handle.
pub struct HtGroup(HTypeGroup);
/// Opaque discretization handle.
pub struct HtGrid(Arc<SpectralGrid>);
/// Opaque spectrum handle.
pub struct HtSpectrum(SphericalSpectrum);

/// Copy the last error message (NUL-terminated, truncated to `len`).
/// Returns the number of bytes written excluding the terminator.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ht_last_error(buf: *mut c_char, len: size_t) -> size_t {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        let n = bytes.len().min(len - 1);
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
        *buf.add(n) = 0;
        n
    })
}

/// Build the H-type group with center dimension p on ℝ^{2d} × ℝ^p.
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// [`ht_group_free`].
#[no_mangle]
pub unsafe extern "C" fn ht_group_new(d: size_t, p: size_t, out: *mut *mut HtGroup) -> c_int {
    if out.is_null() {
        return HT_NULL;
    }
    match HTypeGroup::build(d, p) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(HtGroup(g)));
            HT_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `g` must come from [`ht_group_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ht_group_free(g: *mut HtGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Homogeneous dimension N = 2d + 2p of the group, or 0 on null input.
///
/// # Safety
/// `g` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ht_group_hom_dim(g: *const HtGroup) -> size_t {
    if g.is_null() {
        return 0;
    }
    (*g).0.n_hom
}

/// Design a discretization; see the core crate for parameter semantics.
///
/// # Safety
/// `g` and `out` must be valid pointers; release with [`ht_grid_free`].
#[no_mangle]
pub unsafe extern "C" fn ht_grid_new(
    g: *const HtGroup,
    m_max: size_t,
    box_len: c_double,
    n_s: size_t,
    out: *mut *mut HtGrid,
) -> c_int {
    if g.is_null() || out.is_null() {
        return HT_NULL;
    }
    match SpectralGrid::design(&(*g).0, m_max, box_len, n_s) {
        Ok(grid) => {
            *out = Box::into_raw(Box::new(HtGrid(grid)));
            HT_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `g` must come from [`ht_grid_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ht_grid_free(g: *mut HtGrid) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Seeded random band-limited spectrum (reproducible across platforms).
///
/// # Safety
/// `grid` and `out` must be valid; release with [`ht_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_random(
    grid: *const HtGrid,
    m_band: size_t,
    k_band: u32,
    seed: u64,
    out: *mut *mut HtSpectrum,
) -> c_int {
    if grid.is_null() || out.is_null() {
        return HT_NULL;
    }
    let s = SphericalSpectrum::random_band_limited(&(*grid).0, m_band, k_band, seed);
    *out = Box::into_raw(Box::new(HtSpectrum(s)));
    HT_OK
}

/// # Safety
/// `s` must come from a spectrum constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_free(s: *mut HtSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// L² (Plancherel) norm of a spectrum.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_l2(s: *const HtSpectrum, out: *mut c_double) -> c_int {
    if s.is_null() || out.is_null() {
        return HT_NULL;
    }
    *out = (*s).0.plancherel_norm();
    HT_OK
}

/// Free Schrödinger evolution: returns a new handle for e^{itL} u.
///
/// # Safety
/// `s` and `out` must be valid; release the result with
/// [`ht_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_propagate(
    s: *const HtSpectrum,
    t: c_double,
    out: *mut *mut HtSpectrum,
) -> c_int {
    if s.is_null() || out.is_null() {
        return HT_NULL;
    }
    let evolved = propagator(&(*s).0, t);
    *out = Box::into_raw(Box::new(HtSpectrum(evolved)));
    HT_OK
}

/// Exact dyadic relabeling u ↦ u(δ_{2^j} ·) as a new handle.
///
/// # Safety
/// `s` and `out` must be valid; release the result with
/// [`ht_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_rescale(
    s: *const HtSpectrum,
    j: c_int,
    out: *mut *mut HtSpectrum,
) -> c_int {
    if s.is_null() || out.is_null() {
        return HT_NULL;
    }
    let r = rescale_dyadic(&(*s).0, j);
    *out = Box::into_raw(Box::new(HtSpectrum(r)));
    HT_OK
}

/// Relative L² distance between two spectra on the same grid.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_rel_distance(
    a: *const HtSpectrum,
    b: *const HtSpectrum,
    out: *mut c_double,
) -> c_int {
    if a.is_null() || b.is_null() || out.is_null() {
        return HT_NULL;
    }
    match (*a).0.l2_distance(&(*b).0) {
        Ok(d) => {
            *out = d / (*b).0.plancherel_norm().max(1e-300);
            HT_OK
        }
        Err(e) => fail(e),
    }
}

/// Relative error of the synthesis → analysis round trip on a spectrum.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_roundtrip_error(
    s: *const HtSpectrum,
    out: *mut c_double,
) -> c_int {
    if s.is_null() || out.is_null() {
        return HT_NULL;
    }
    let spec = &(*s).0;
    let field = spec.inverse_transform();
    match field.forward_transform() {
        Ok(back) => match back.l2_distance(spec) {
            Ok(d) => {
                *out = d / spec.plancherel_norm().max(1e-300);
                HT_OK
            }
            Err(e) => fail(e),
        },
        Err(e) => fail(e),
    }
}

/// Relative sup residual of the propagator's dyadic scaling identity on the
/// widened band-j kernel.
///
/// # Safety
/// `grid` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ht_kernel_scaling_residual(
    grid: *const HtGrid,
    j: c_int,
    t: c_double,
    out: *mut c_double,
) -> c_int {
    if grid.is_null() || out.is_null() {
        return HT_NULL;
    }
    match kernel_scaling_check(&(*grid).0, j, t, &LPProfile) {
        Ok(r) => {
            *out = r;
            HT_OK
        }
        Err(e) => fail(e),
    }
}

unsafe fn cstr<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

/// Classify an exponent pair; `q`/`r` are rationals like "4", "8/3", "inf".
/// Writes 1/0 admissibility and endpoint flags.
///
/// # Safety
/// String pointers must be NUL-terminated; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ht_classify_pair(
    q: *const c_char,
    r: *const c_char,
    p: size_t,
    admissible: *mut c_int,
    endpoint: *mut c_int,
) -> c_int {
    let (Some(qs), Some(rs)) = (cstr(q), cstr(r)) else {
        return HT_NULL;
    };
    if admissible.is_null() || endpoint.is_null() {
        return HT_NULL;
    }
    let parse = |s: &str| -> Result<Exponent, Error> { s.parse() };
    match (parse(qs), parse(rs)) {
        (Ok(qe), Ok(re)) => match classify_pair(qe, re, p) {
            Ok(pair) => {
                *admissible = pair.admissible as c_int;
                *endpoint = pair.endpoint as c_int;
                HT_OK
            }
            Err(e) => fail(e),
        },
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

/// Minimal contraction regularity s_* for (d, p, α) as a double;
/// `alpha` is a rational string.
///
/// # Safety
/// `alpha` must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ht_s_star(
    d: size_t,
    p: size_t,
    alpha: *const c_char,
    out: *mut c_double,
) -> c_int {
    let Some(a) = cstr(alpha) else {
        return HT_NULL;
    };
    if out.is_null() {
        return HT_NULL;
    }
    match parse_ratio_str(a).and_then(|ar| s_star(d, p, ar)) {
        Ok(v) => {
            *out = *v.numer() as f64 / *v.denom() as f64;
            HT_OK
        }
        Err(e) => fail(e),
    }
}
