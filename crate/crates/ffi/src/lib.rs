//! C ABI over `asmass`.
//!
//! Conventions: every fallible function returns an [`AsmassStatus`] and
//! writes its result through an out pointer. On failure the message is kept
//! per thread and read back with [`asmass_last_error_message`]. Strings
//! returned through out pointers are owned by the caller and released with
//! [`asmass_string_free`]. Handles are released with their `_free`
//! function; passing null to any `_free` is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use asmass::gf::{FieldElem, Tower};
use asmass::mass::{self, MassValue, RamData, SplitBehavior};
use asmass::oracle::{self, Limits};
use asmass::projgeom::fourset::{self, Behavior};
use asmass::projgeom::classify_gamma_t;
use asmass::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsmassStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    InvalidArgument,
    NotPrime,
    SizeLimitExceeded,
    FieldMismatch,
    EvenCharacteristic,
    DivisionByZero,
    ZeroFunction,
    PDividesE,
    BadT,
    InvalidRamData,
    GenusNotMultiple,
    IncompatibleSplit,
    UnsupportedShape,
    UnsupportedGenus,
    ReducibleCover,
    Parse,
    Panic,
}

impl From<&Error> for AsmassStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPrime(_) => AsmassStatus::NotPrime,
            Error::SizeLimitExceeded { .. } => AsmassStatus::SizeLimitExceeded,
            Error::FieldMismatch => AsmassStatus::FieldMismatch,
            Error::EvenCharacteristic => AsmassStatus::EvenCharacteristic,
            Error::DivisionByZero => AsmassStatus::DivisionByZero,
            Error::ZeroFunction => AsmassStatus::ZeroFunction,
            Error::PDividesE { .. } => AsmassStatus::PDividesE,
            Error::BadT => AsmassStatus::BadT,
            Error::InvalidRamData(_) => AsmassStatus::InvalidRamData,
            Error::GenusNotMultiple { .. } => AsmassStatus::GenusNotMultiple,
            Error::IncompatibleSplit { .. } => AsmassStatus::IncompatibleSplit,
            Error::UnsupportedShape(_) => AsmassStatus::UnsupportedShape,
            Error::UnsupportedGenus { .. } => AsmassStatus::UnsupportedGenus,
            Error::ReducibleCover => AsmassStatus::ReducibleCover,
            Error::Parse(_) => AsmassStatus::Parse,
        }
    }
}

/// Splitting behavior of a Frobenius-stable 4-set.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsmassBehavior {
    Split = 0,
    SplitQuad,
    Quad,
    Cubic,
    Quartic,
    /// All behaviors together.
    Total,
}

/// A finite field `F_q` together with its extension tower.
pub struct AsmassField {
    tower: Arc<Tower>,
}

/// Validated ramification data `{eps_1, ..., eps_r}` in characteristic p.
pub struct AsmassRamData {
    ram: RamData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AsmassStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure and turns panics into `Panic`.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> AsmassStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AsmassStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            AsmassStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(AsmassStatus::NullPointer, "null pointer argument".into())
}

unsafe fn cstr<'a>(s: *const c_char) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(AsmassStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write<T>(out: *mut T, v: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| Failure(AsmassStatus::InvalidArgument, "interior NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(null)
}

fn rational(v: &MassValue) -> String {
    mass::render_rational(v)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn asmass_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn asmass_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn asmass_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates `F_{p^n}`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_new(p: u32, n: u32, out: *mut *mut AsmassField) -> AsmassStatus {
    guard(|| {
        let tower = Tower::new(p, n)?;
        write(out, Box::into_raw(Box::new(AsmassField { tower })))
    })
}

/// # Safety
/// `f` must be null or a handle from [`asmass_field_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_free(f: *mut AsmassField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Field order `q`, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_order(f: *const AsmassField) -> u64 {
    f.as_ref().map_or(0, |f| f.tower.q())
}

/// # Safety
/// `f` must be null or a live field handle.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_characteristic(f: *const AsmassField) -> u32 {
    f.as_ref().map_or(0, |f| f.tower.p())
}

fn element(f: &AsmassField, a: u32) -> FfiResult<FieldElem> {
    let x = FieldElem::from_index(a);
    f.tower.base().check(x).map_err(|_| {
        Failure(
            AsmassStatus::InvalidArgument,
            format!("{a} is not an element index of F_{}", f.tower.q()),
        )
    })
}

/// Elements are passed by index in `0..q`; 0 is zero and 1 is one.
///
/// # Safety
/// `f` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_add(f: *const AsmassField, a: u32, b: u32, out: *mut u32) -> AsmassStatus {
    guard(|| {
        let f = deref(f)?;
        let k = f.tower.base();
        write(out, k.add(element(f, a)?, element(f, b)?).index())
    })
}

/// # Safety
/// `f` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_mul(f: *const AsmassField, a: u32, b: u32, out: *mut u32) -> AsmassStatus {
    guard(|| {
        let f = deref(f)?;
        let k = f.tower.base();
        write(out, k.mul(element(f, a)?, element(f, b)?).index())
    })
}

/// # Safety
/// `f` must be a live field handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_field_inv(f: *const AsmassField, a: u32, out: *mut u32) -> AsmassStatus {
    guard(|| {
        let f = deref(f)?;
        let k = f.tower.base();
        write(out, k.inv(element(f, a)?)?.index())
    })
}

/// Parses ramification data such as `"2,2,3"` in characteristic `p`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_ram_new(p: u32, spec: *const c_char, out: *mut *mut AsmassRamData) -> AsmassStatus {
    guard(|| {
        let ram = RamData::parse(p, cstr(spec)?)?;
        write(out, Box::into_raw(Box::new(AsmassRamData { ram })))
    })
}

/// # Safety
/// `r` must be null or a handle from [`asmass_ram_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn asmass_ram_free(r: *mut AsmassRamData) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Genus of covers with this ramification, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asmass_ram_genus(r: *const AsmassRamData) -> u64 {
    r.as_ref().map_or(0, |r| r.ram.genus())
}

/// Dimension of the moduli component, or -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asmass_ram_dimension(r: *const AsmassRamData) -> i64 {
    r.as_ref().map_or(-1, |r| r.ram.dimension())
}

/// Closed-form mass polynomial for genus `g` in characteristic `p`,
/// rendered like `"2q^3 - q^2"`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn asmass_mass_g_poly(g: u64, p: u32, out: *mut *mut c_char) -> AsmassStatus {
    guard(|| write_string(out, mass::mass_g_poly(g, p)?.to_string()))
}

/// Closed-form mass for genus `g` over `F_q`, as `"num/den"`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn asmass_mass_g(g: u64, p: u32, q: u64, out: *mut *mut c_char) -> AsmassStatus {
    guard(|| write_string(out, rational(&mass::mass_g(g, p, q)?)))
}

unsafe fn split_of(r: &RamData, split: *const c_char) -> FfiResult<Option<SplitBehavior>> {
    if split.is_null() {
        return Ok(None);
    }
    let s: SplitBehavior = cstr(split)?.parse()?;
    if !s.compatible_with(r) {
        return Err(Error::IncompatibleSplit {
            ram: r.to_string(),
            split: s.to_string(),
        }
        .into());
    }
    Ok(Some(s))
}

/// Closed-form mass of `(R, S)` over `F_q` as `"num/den"`. A null `split`
/// sums over every compatible splitting behavior.
///
/// # Safety
/// `r` must be a live handle, `split` null or a NUL-terminated string, and
/// `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_mass_rs(
    r: *const AsmassRamData,
    split: *const c_char,
    q: u64,
    out: *mut *mut c_char,
) -> AsmassStatus {
    guard(|| {
        let r = &deref(r)?.ram;
        let v = match split_of(r, split)? {
            Some(s) => mass::mass_rs(r, &s, q)?,
            None => mass::mass_r(r, q)?,
        };
        write_string(out, rational(&v))
    })
}

unsafe fn run_oracle(
    r: *const AsmassRamData,
    split: *const c_char,
    q: u64,
    max_population: u64,
    out: *mut *mut c_char,
    f: fn(&RamData, &SplitBehavior, u64, &Limits) -> asmass::Result<MassValue>,
) -> AsmassStatus {
    guard(|| {
        let r = &deref(r)?.ram;
        let limits = Limits {
            max_population: max_population as u128,
            ..Limits::default()
        };
        let splits = match split_of(r, split)? {
            Some(s) => vec![s],
            None => mass::compatible_splits(r),
        };
        let mut total = MassValue::default();
        for s in &splits {
            total += f(r, s, q, &limits)?;
        }
        write_string(out, rational(&total))
    })
}

/// Mass by counting every cover (population over `|PGL_2|`), as `"num/den"`.
/// A null `split` sums over every compatible splitting behavior.
///
/// # Safety
/// As for [`asmass_mass_rs`].
#[no_mangle]
pub unsafe extern "C" fn asmass_global_mass(
    r: *const AsmassRamData,
    split: *const c_char,
    q: u64,
    max_population: u64,
    out: *mut *mut c_char,
) -> AsmassStatus {
    run_oracle(r, split, q, max_population, out, oracle::global_mass_with)
}

/// Mass by orbit representatives and their stabilizers, as `"num/den"`.
///
/// # Safety
/// As for [`asmass_mass_rs`].
#[no_mangle]
pub unsafe extern "C" fn asmass_structural_mass(
    r: *const AsmassRamData,
    split: *const c_char,
    q: u64,
    max_population: u64,
    out: *mut *mut c_char,
) -> AsmassStatus {
    run_oracle(r, split, q, max_population, out, oracle::structural_mass_with)
}

/// Number of `PGL_2(F_q)`-orbits of 4-sets with the given behavior, by
/// Burnside's lemma and by closed form.
///
/// # Safety
/// `f` must be a live field handle; both out pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_four_set_orbits(
    f: *const AsmassField,
    behavior: AsmassBehavior,
    out_burnside: *mut u64,
    out_closed_form: *mut i64,
) -> AsmassStatus {
    guard(|| {
        let t = &deref(f)?.tower;
        if out_burnside.is_null() || out_closed_form.is_null() {
            return Err(null());
        }
        let only = match behavior {
            AsmassBehavior::Split => Some(Behavior::Split),
            AsmassBehavior::SplitQuad => Some(Behavior::SplitQuad),
            AsmassBehavior::Quad => Some(Behavior::Quad),
            AsmassBehavior::Cubic => Some(Behavior::Cubic),
            AsmassBehavior::Quartic => Some(Behavior::Quartic),
            AsmassBehavior::Total => None,
        };
        let burnside = match only {
            Some(b) => fourset::burnside_count(t, b)?,
            None => Behavior::ALL
                .iter()
                .map(|&b| fourset::burnside_count(t, b))
                .sum::<asmass::Result<u64>>()?,
        };
        write(out_burnside, burnside)?;
        write(out_closed_form, fourset::closed_form_count(t.p(), t.q(), only))
    })
}

/// Stabilizer of `{0, 1, inf, t}`: its order and a label such as `"D4"`.
///
/// # Safety
/// `f` must be a live field handle; both out pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn asmass_classify_gamma_t(
    f: *const AsmassField,
    t: u32,
    out_order: *mut u32,
    out_label: *mut *mut c_char,
) -> AsmassStatus {
    guard(|| {
        let f = deref(f)?;
        if out_order.is_null() || out_label.is_null() {
            return Err(null());
        }
        let tag = classify_gamma_t(&f.tower, element(f, t)?)?;
        write(out_order, tag.order() as u32)?;
        write_string(out_label, tag.label)
    })
}
