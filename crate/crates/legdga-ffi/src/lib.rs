//! C ABI over `legdga`. Objects are opaque handles freed with the matching
//! `_free` function; strings returned to the caller are freed with
//! `legdga_string_free`. Every function returns a `LegdgaStatus`, and the
//! message for the last failure on the calling thread is available from
//! `legdga_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use legdga::cedga::{self, Augmentation};
use legdga::chordpath::{self, DgaElement};
use legdga::diagram::{parse_front, statements, DiagramError, FrontDiagram};
use legdga::mcs::{aform_from_set, parse_mcs, Mcs, McsError};
use legdga::moves::{apply, parse_move};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegdgaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidMcs = 4,
    NotAugmentation = 5,
    MoveRejected = 6,
    Panic = 99,
}

/// A validated front diagram.
pub struct LegdgaFront(FrontDiagram);

/// A validated Morse complex sequence.
pub struct LegdgaMcs(Mcs);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (LegdgaStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LegdgaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LegdgaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_owned());
            LegdgaStatus::Panic
        }
    }
}

fn diagram_err(e: DiagramError) -> Failure {
    (LegdgaStatus::ParseError, e.to_string())
}

fn mcs_err(e: McsError) -> Failure {
    match e {
        McsError::Diagram(d) => diagram_err(d),
        e => (LegdgaStatus::InvalidMcs, e.to_string()),
    }
}

fn cedga_err(e: cedga::CedgaError) -> Failure {
    (LegdgaStatus::NotAugmentation, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((LegdgaStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (LegdgaStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| (LegdgaStatus::NullPointer, "null handle".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| (LegdgaStatus::NullPointer, "null output pointer".into()))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn render_table(front: &FrontDiagram, d: &[DgaElement]) -> String {
    let labels = front.labels();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by_key(|&i| (front.generators()[i].degree, i));
    order
        .into_iter()
        .map(|i| format!("{} = {}\n", labels[i], d[i].render(&labels)))
        .collect()
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn legdga_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn legdga_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a front from the text or JSON format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_front_parse(text: *const c_char, out: *mut *mut LegdgaFront) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let fd = parse_front(str_arg(text)?).map_err(diagram_err)?;
        *out = Box::into_raw(Box::new(LegdgaFront(fd)));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from `legdga_front_parse`.
#[no_mangle]
pub unsafe extern "C" fn legdga_front_free(f: *mut LegdgaFront) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a valid front handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_front_generator_count(f: *const LegdgaFront, out: *mut usize) -> LegdgaStatus {
    guard(|| {
        *out_arg(out)? = ref_arg(f)?.0.generators().len();
        Ok(())
    })
}

/// The CE differential as text, one `label = element` line per generator.
///
/// # Safety
/// `f` must be a valid front handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_front_ce_differential(f: *const LegdgaFront, out: *mut *mut c_char) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let fd = &ref_arg(f)?.0;
        *out = c_string(render_table(fd, &cedga::differential(fd)));
        Ok(())
    })
}

/// # Safety
/// `f` must be a valid front handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_front_augmentation_count(f: *const LegdgaFront, out: *mut usize) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let fd = &ref_arg(f)?.0;
        *out = cedga::augmentations(fd, &cedga::differential(fd)).len();
        Ok(())
    })
}

/// Parse a front with `h` / `ic` lines into an MCS.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_parse(text: *const c_char, out: *mut *mut LegdgaMcs) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = parse_mcs(str_arg(text)?).map_err(mcs_err)?;
        *out = Box::into_raw(Box::new(LegdgaMcs(m)));
        Ok(())
    })
}

/// The A-form MCS whose marks are the crossings set in `bits`.
///
/// # Safety
/// `f` must be a valid front handle, `bits` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_from_augmentation(
    f: *const LegdgaFront,
    bits: *const c_char,
    out: *mut *mut LegdgaMcs,
) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let fd = &ref_arg(f)?.0;
        let a = Augmentation::from_bits(fd, str_arg(bits)?).map_err(cedga_err)?;
        if !cedga::is_augmentation(&cedga::differential(fd), a.values()) {
            return Err((LegdgaStatus::NotAugmentation, "not an augmentation".into()));
        }
        let af = aform_from_set(fd, &a.support()).map_err(mcs_err)?;
        *out = Box::into_raw(Box::new(LegdgaMcs(af.into_mcs())));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or an MCS handle from this library.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_free(m: *mut LegdgaMcs) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// The chord-path differential as text.
///
/// # Safety
/// `m` must be a valid MCS handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_differential(m: *const LegdgaMcs, out: *mut *mut c_char) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = &ref_arg(m)?.0;
        *out = c_string(render_table(m.front(), &chordpath::differential(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be a valid MCS handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_d_squared_vanishes(m: *const LegdgaMcs, out: *mut bool) -> LegdgaStatus {
    guard(|| {
        *out_arg(out)? = chordpath::verify_d_squared(&ref_arg(m)?.0);
        Ok(())
    })
}

/// # Safety
/// `m` must be a valid MCS handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_to_text(m: *const LegdgaMcs, out: *mut *mut c_char) -> LegdgaStatus {
    guard(|| {
        *out_arg(out)? = c_string(ref_arg(m)?.0.to_text());
        Ok(())
    })
}

/// Apply one `move ...` statement, producing a new MCS; `m` is unchanged.
///
/// # Safety
/// `m` must be a valid MCS handle, `stmt` a nul-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn legdga_mcs_apply_move(
    m: *const LegdgaMcs,
    stmt: *const c_char,
    out: *mut *mut LegdgaMcs,
) -> LegdgaStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = &ref_arg(m)?.0;
        let sts = statements(str_arg(stmt)?);
        let [st] = sts.as_slice() else {
            return Err((LegdgaStatus::ParseError, "expected exactly one statement".into()));
        };
        if st.tokens[0] != "move" {
            return Err((LegdgaStatus::ParseError, "expected a `move` statement".into()));
        }
        let d = parse_move(st).map_err(diagram_err)?;
        let cert = apply(m, &d).map_err(|e| (LegdgaStatus::MoveRejected, e.to_string()))?;
        *out = Box::into_raw(Box::new(LegdgaMcs(cert.after)));
        Ok(())
    })
}
