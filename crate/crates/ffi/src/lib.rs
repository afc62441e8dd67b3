//! C ABI over `cosetopo`.
//!
//! Groups are opaque handles created by [`cosetopo_group_new`] and released with
//! [`cosetopo_group_free`]. Every fallible call returns a [`CosetopoStatus`]; the message of
//! the most recent failure on the calling thread is available through [`cosetopo_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cosetopo::group::{catalog_group, FiniteGroup};
use cosetopo::harness::{cmd_compute, Cache, JobSpec, Targets};
use cosetopo::pi1::{propagate_triviality, replay, standard_presentation};
use cosetopo::topo::{mobius_table, prob_zeta, GroupTopology};
use cosetopo::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetopoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    CapExceeded = 4,
    /// A caller buffer is too small; the required length is still written.
    BufferTooSmall = 5,
    Precondition = 6,
    Internal = 7,
}

/// Opaque group handle.
pub struct CosetopoGroup {
    group: FiniteGroup,
}

/// Report sections for [`cosetopo_report_json`].
pub const COSETOPO_REPORT_COSET_HOMOLOGY: u32 = 1;
pub const COSETOPO_REPORT_SUBGROUP_HOMOLOGY: u32 = 1 << 1;
pub const COSETOPO_REPORT_PREDICT_VERIFY: u32 = 1 << 2;
pub const COSETOPO_REPORT_ZETA: u32 = 1 << 3;
pub const COSETOPO_REPORT_CLASSIFY: u32 = 1 << 4;
pub const COSETOPO_REPORT_BOUNDS: u32 = 1 << 5;
pub const COSETOPO_REPORT_CERTIFICATE: u32 = 1 << 6;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> CosetopoStatus {
    match e {
        Error::InvalidSpec { .. } | Error::MalformedFile { .. } | Error::Parse(_) | Error::InvalidPermutation(_) => {
            CosetopoStatus::InvalidSpec
        }
        Error::CapExceeded { .. } => CosetopoStatus::CapExceeded,
        Error::Io(_) => CosetopoStatus::Internal,
        _ => CosetopoStatus::Precondition,
    }
}

/// Runs `f`, mapping errors and panics to status codes and recording the message.
fn guard(f: impl FnOnce() -> Result<(), (CosetopoStatus, String)>) -> CosetopoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CosetopoStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CosetopoStatus::Internal
        }
    }
}

fn lib(e: Error) -> (CosetopoStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CosetopoStatus, String) {
    (CosetopoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (CosetopoStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (CosetopoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn group_ref<'a>(g: *const CosetopoGroup) -> Result<&'a CosetopoGroup, (CosetopoStatus, String)> {
    g.as_ref().ok_or_else(|| null("group"))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), (CosetopoStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

/// Copies the last error message on this thread into `buf` (NUL-terminated, truncated to `len`).
///
/// Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a group from a catalog spec such as `alt:5`, refusing orders above `cap`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_group_new(
    spec: *const c_char,
    cap: usize,
    out: *mut *mut CosetopoGroup,
) -> CosetopoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let spec = read_str(spec, "spec")?;
        let group = FiniteGroup::with_cap(catalog_group(spec).map_err(lib)?, cap).map_err(lib)?;
        out.write(Box::into_raw(Box::new(CosetopoGroup { group })));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` must come from [`cosetopo_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_group_free(g: *mut CosetopoGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_group_order(g: *const CosetopoGroup, out: *mut usize) -> CosetopoStatus {
    guard(|| write(out, group_ref(g)?.group.order(), "out"))
}

/// Number of subgroups, including the trivial group and the whole group.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_group_subgroup_count(g: *const CosetopoGroup, out: *mut usize) -> CosetopoStatus {
    guard(|| write(out, group_ref(g)?.group.lattice().len(), "out"))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_group_is_solvable(g: *const CosetopoGroup, out: *mut bool) -> CosetopoStatus {
    guard(|| write(out, group_ref(g)?.group.is_solvable(), "out"))
}

unsafe fn betti_into(
    ranks: Vec<u64>,
    buf: *mut u64,
    len: usize,
    out_len: *mut usize,
) -> Result<(), (CosetopoStatus, String)> {
    write(out_len, ranks.len(), "out_len")?;
    if ranks.len() > len {
        return Err((CosetopoStatus::BufferTooSmall, format!("need {} entries, got {len}", ranks.len())));
    }
    if buf.is_null() && !ranks.is_empty() {
        return Err(null("buf"));
    }
    ptr::copy_nonoverlapping(ranks.as_ptr(), buf, ranks.len());
    Ok(())
}

fn exact_ranks(h: &cosetopo::homology::HomologySummary) -> Result<Vec<u64>, (CosetopoStatus, String)> {
    if h.valid_through < h.dimension {
        return Err((CosetopoStatus::Precondition, "complex exceeds the face budget; homology is truncated".into()));
    }
    let mut v = vec![h.betti_minus_one];
    v.extend(&h.betti);
    Ok(v)
}

/// Reduced Betti numbers of the coset poset, starting at dimension -1.
///
/// `*out_len` always receives the number of entries; a short `buf` yields `BufferTooSmall`.
///
/// # Safety
/// `g` must be a live handle, `buf` must hold `len` entries, `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_coset_betti(
    g: *const CosetopoGroup,
    buf: *mut u64,
    len: usize,
    out_len: *mut usize,
) -> CosetopoStatus {
    guard(|| {
        let t = GroupTopology::new(&group_ref(g)?.group);
        betti_into(exact_ranks(t.coset_homology().map_err(lib)?)?, buf, len, out_len)
    })
}

/// Reduced Betti numbers of the subgroup poset, starting at dimension -1.
///
/// # Safety
/// As for [`cosetopo_coset_betti`].
#[no_mangle]
pub unsafe extern "C" fn cosetopo_subgroup_betti(
    g: *const CosetopoGroup,
    buf: *mut u64,
    len: usize,
    out_len: *mut usize,
) -> CosetopoStatus {
    guard(|| {
        let t = GroupTopology::new(&group_ref(g)?.group);
        betti_into(exact_ranks(t.subgroup_homology().map_err(lib)?)?, buf, len, out_len)
    })
}

/// `P(G, -1)` from the Möbius table.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_prob_zeta_minus_one(g: *const CosetopoGroup, out: *mut i64) -> CosetopoStatus {
    guard(|| {
        let g = &group_ref(g)?.group;
        let v = prob_zeta(g, &mobius_table(g), -1);
        let v = v.to_integer().try_into().map_err(|_| (CosetopoStatus::Internal, "P(G,-1) overflows i64".into()))?;
        write(out, v, "out")
    })
}

/// Whether propagation on the minimal cover issues a certificate that replays.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_pi1_certified(g: *const CosetopoGroup, out: *mut bool) -> CosetopoStatus {
    guard(|| {
        let p = standard_presentation(&group_ref(g)?.group).map_err(lib)?;
        let prop = propagate_triviality(&p);
        let ok = prop.certificate.as_ref().is_some_and(|c| replay(&p, c).is_ok());
        write(out, ok, "out")
    })
}

/// JSON report for `spec` with the sections selected by `flags`, uncached.
///
/// The string must be released with [`cosetopo_string_free`].
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_report_json(
    spec: *const c_char,
    cap: usize,
    flags: u32,
    out: *mut *mut c_char,
) -> CosetopoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let spec = read_str(spec, "spec")?;
        let on = |bit: u32| flags & bit != 0;
        let mut job = JobSpec::new(spec);
        job.cap = cap;
        job.homology =
            Targets { coset: on(COSETOPO_REPORT_COSET_HOMOLOGY), subgroup: on(COSETOPO_REPORT_SUBGROUP_HOMOLOGY) };
        if on(COSETOPO_REPORT_PREDICT_VERIFY) {
            job.predict = Targets::ALL;
            job.verify = true;
        }
        job.zeta = on(COSETOPO_REPORT_ZETA);
        job.classify = on(COSETOPO_REPORT_CLASSIFY);
        job.bounds = on(COSETOPO_REPORT_BOUNDS);
        job.certificate = on(COSETOPO_REPORT_CERTIFICATE);
        let (report, _) = cmd_compute(&job, &Cache::disabled()).map_err(lib)?;
        let text = CString::new(report.to_string()).map_err(|_| (CosetopoStatus::Internal, "NUL in report".into()))?;
        out.write(text.into_raw());
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cosetopo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
