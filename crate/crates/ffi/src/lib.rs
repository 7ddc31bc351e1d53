//! C interface to `nbasis`.
//!
//! Worlds and names are opaque handles created and released here. Every
//! fallible call returns an [`NbStatus`]; after a failure [`nb_last_error`]
//! describes it on the calling thread. Codes grow past 64 bits quickly, so name
//! cells cross the boundary as text in the usual line format.
//!
//! Name handles evaluate lazily and memoize what they read. Use each one from
//! a single thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;

use nbasis::basis::{check_axioms, extend_strong_inclusion, InducedBasis};
use nbasis::kernel::{format_prefix, pair, parse_prefix, unpair, Fuel, Meter, Name, Nat, Stall};
use nbasis::repr::member_monitor;
use nbasis::worlds::{
    generate_name, make_world, relation, sample_ball_codes, sample_induced_codes, sample_points,
    si_representation, translation, NameKind, PipelineError, RelationKind, World, WorldError,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    BadWorld = 3,
    BadPoint = 4,
    BadName = 5,
    NoTranslation = 6,
    /// The fuel ran out; partial results are still returned.
    OutOfFuel = 7,
    /// A finite name ended; partial results are still returned.
    EndOfInput = 8,
    /// The monitor has not accepted within the fuel.
    NotYet = 9,
    Overflow = 10,
    Unsupported = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbKind {
    Cauchy = 0,
    Min = 1,
    Max = 2,
    Si = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbRelation {
    Strict = 0,
    NonStrict = 1,
    Equality = 2,
    Singleton = 3,
}

impl From<NbKind> for NameKind {
    fn from(k: NbKind) -> NameKind {
        match k {
            NbKind::Cauchy => NameKind::Cauchy,
            NbKind::Min => NameKind::Min,
            NbKind::Max => NameKind::Max,
            NbKind::Si => NameKind::Si,
        }
    }
}

impl From<NbRelation> for RelationKind {
    fn from(r: NbRelation) -> RelationKind {
        match r {
            NbRelation::Strict => RelationKind::Strict,
            NbRelation::NonStrict => RelationKind::NonStrict,
            NbRelation::Equality => RelationKind::Equality,
            NbRelation::Singleton => RelationKind::Singleton,
        }
    }
}

/// A world built from a spec string.
pub struct NbWorld {
    world: World,
}

/// A lazily evaluated name.
pub struct NbName {
    name: Name,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(NbStatus, String);

fn fail<T>(status: NbStatus, msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, msg.into()))
}

impl From<PipelineError> for Fail {
    fn from(e: PipelineError) -> Fail {
        let status = match &e {
            PipelineError::World(WorldError::BadPoint(..)) => NbStatus::BadPoint,
            PipelineError::World(WorldError::BadBall(..)) => NbStatus::BadPoint,
            PipelineError::World(_) => NbStatus::BadWorld,
            PipelineError::NoTranslation(..) => NbStatus::NoTranslation,
            _ => NbStatus::Unsupported,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `body`, records its error message and turns panics into
/// [`NbStatus::Panic`].
fn guard(body: impl FnOnce() -> Result<NbStatus, Fail>) -> NbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => {
            set_error(None);
            status
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            NbStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return fail(NbStatus::NullArgument, "null string argument");
    }
    CStr::from_ptr(s)
        .to_str()
        .or_else(|_| fail(NbStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(NbStatus::NullArgument, format!("null {what}")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return fail(NbStatus::NullArgument, "null output pointer");
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Builds a world from a spec such as `"K-space --fuel 1000"`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nb_world_new(spec: *const c_char, out: *mut *mut NbWorld) -> NbStatus {
    guard(|| {
        let world = make_world(text(spec)?).map_err(|e| Fail(NbStatus::BadWorld, e.to_string()))?;
        put(out, Box::into_raw(Box::new(NbWorld { world })))?;
        Ok(NbStatus::Ok)
    })
}

/// # Safety
/// `world` must come from [`nb_world_new`] and not be used afterwards. Null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn nb_world_free(world: *mut NbWorld) {
    if !world.is_null() {
        drop(Box::from_raw(world));
    }
}

/// The world's identifier, to be released with [`nb_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nb_world_id(world: *const NbWorld, out: *mut *mut c_char) -> NbStatus {
    guard(|| {
        let w = get(world, "world")?;
        put(out, c_string(w.world.id()))?;
        Ok(NbStatus::Ok)
    })
}

/// A generated name of the point literal `point`.
///
/// # Safety
/// Pointers must be valid and `point` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nb_name_generate(
    world: *const NbWorld,
    point: *const c_char,
    kind: NbKind,
    out: *mut *mut NbName,
) -> NbStatus {
    guard(|| {
        let w = &get(world, "world")?.world;
        let p = w
            .parse_point(text(point)?)
            .map_err(|e| Fail(NbStatus::BadPoint, e.to_string()))?;
        let name = generate_name(w, &p, kind.into())?;
        put(out, Box::into_raw(Box::new(NbName { name })))?;
        Ok(NbStatus::Ok)
    })
}

/// A finite name from text with one decimal natural per line. Reading past
/// its last cell reports [`NbStatus::EndOfInput`].
///
/// # Safety
/// Pointers must be valid and `cells` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn nb_name_parse(cells: *const c_char, out: *mut *mut NbName) -> NbStatus {
    guard(|| {
        let cells =
            parse_prefix(text(cells)?).map_err(|e| Fail(NbStatus::BadName, e.to_string()))?;
        put(
            out,
            Box::into_raw(Box::new(NbName {
                name: Name::from_prefix(cells),
            })),
        )?;
        Ok(NbStatus::Ok)
    })
}

/// Applies the realizer from `src` names to `dst` names. The input handle
/// stays valid and is shared with the output.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nb_name_translate(
    world: *const NbWorld,
    name: *const NbName,
    src: NbKind,
    dst: NbKind,
    out: *mut *mut NbName,
) -> NbStatus {
    guard(|| {
        let w = &get(world, "world")?.world;
        let input = &get(name, "name")?.name;
        let (t, _) = translation(w, src.into(), dst.into())?;
        put(
            out,
            Box::into_raw(Box::new(NbName {
                name: t.transform(input),
            })),
        )?;
        Ok(NbStatus::Ok)
    })
}

/// Evaluates up to `len` cells under `fuel` steps (0 for no limit) and
/// returns them as text, one per line, to be released with
/// [`nb_string_free`]. On [`NbStatus::OutOfFuel`] and
/// [`NbStatus::EndOfInput`] the cells obtained so far are still returned.
///
/// # Safety
/// Pointers must be valid; `out_cells` may be null.
#[no_mangle]
pub unsafe extern "C" fn nb_name_prefix(
    name: *const NbName,
    len: usize,
    fuel: u64,
    out_text: *mut *mut c_char,
    out_cells: *mut usize,
) -> NbStatus {
    guard(|| {
        let n = &get(name, "name")?.name;
        if out_text.is_null() {
            return fail(NbStatus::NullArgument, "null output pointer");
        }
        let mut meter = if fuel == 0 {
            Meter::unbounded()
        } else {
            Meter::new(Fuel(fuel))
        };
        let (cells, stall) = n.partial_prefix(len, &mut meter);
        put(out_text, c_string(format_prefix(&cells)))?;
        if !out_cells.is_null() {
            out_cells.write(cells.len());
        }
        match stall {
            None => Ok(NbStatus::Ok),
            Some(Stall::OutOfFuel) => fail(
                NbStatus::OutOfFuel,
                format!("fuel exhausted after {} cells", cells.len()),
            ),
            Some(Stall::EndOfInput) => Err(Fail(NbStatus::EndOfInput, "name ended".into())),
            Some(Stall::BadInput(m)) => Err(Fail(NbStatus::BadName, m)),
        }
    })
}

/// # Safety
/// `name` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn nb_name_free(name: *mut NbName) {
    if !name.is_null() {
        drop(Box::from_raw(name));
    }
}

/// Semi-decides whether the point named by the strong-inclusion name lies
/// in the ball literal `target`. Returns [`NbStatus::Ok`] on acceptance and
/// [`NbStatus::NotYet`] otherwise; `out_used` receives the steps spent.
///
/// # Safety
/// Pointers must be valid; `out_used` may be null.
#[no_mangle]
pub unsafe extern "C" fn nb_member(
    world: *const NbWorld,
    name: *const NbName,
    target: *const c_char,
    fuel: u64,
    out_used: *mut u64,
) -> NbStatus {
    guard(|| {
        let w = &get(world, "world")?.world;
        let n = &get(name, "name")?.name;
        let target = w
            .parse_ball(text(target)?)
            .map_err(|e| Fail(NbStatus::BadPoint, e.to_string()))?;
        let rep = si_representation(w, RelationKind::Strict)?;
        let monitor = member_monitor(&rep, &target)
            .map_err(|e| Fail(NbStatus::Unsupported, e.to_string()))?;
        let poll = monitor.run(n, Fuel(fuel));
        if !out_used.is_null() {
            out_used.write(poll.used);
        }
        if let Some(Stall::BadInput(m)) = poll.error {
            return fail(NbStatus::BadName, m);
        }
        Ok(if poll.result.is_accept() {
            NbStatus::Ok
        } else {
            NbStatus::NotYet
        })
    })
}

/// Checks the strong-inclusion axioms on `samples` sampled codes and
/// `points` sampled points; `out_violations` receives the violation count.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nb_check_axioms(
    world: *const NbWorld,
    rel: NbRelation,
    induced: bool,
    samples: usize,
    points: usize,
    seed: u64,
    out_violations: *mut usize,
) -> NbStatus {
    guard(|| {
        let w = &get(world, "world")?.world;
        let si = relation(w, rel.into())?;
        let codes = match (w, induced) {
            (World::Singleton(_), _) => {
                return fail(NbStatus::Unsupported, "sampling needs a metric world")
            }
            (_, false) => sample_ball_codes(w, samples, seed),
            (_, true) => sample_induced_codes(w, samples, seed),
        };
        let pts = sample_points(w, points, seed.wrapping_add(1));
        let sb = w.subbasis();
        let report = if induced {
            check_axioms(
                &extend_strong_inclusion(si),
                &InducedBasis::new(sb),
                &codes,
                &pts,
            )
        } else {
            check_axioms(si.as_ref(), sb.as_ref(), &codes, &pts)
        };
        put(out_violations, report.violations.len())?;
        Ok(NbStatus::Ok)
    })
}

/// The Cantor pairing of `n` and `m`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nb_pair(n: u64, m: u64, out: *mut u64) -> NbStatus {
    guard(|| {
        let c = pair(&Nat::from(n), &Nat::from(m));
        let c = c.to_u64().ok_or_else(|| {
            Fail(
                NbStatus::Overflow,
                format!("pair({n}, {m}) exceeds 64 bits"),
            )
        })?;
        put(out, c)?;
        Ok(NbStatus::Ok)
    })
}

/// Inverse of [`nb_pair`].
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nb_unpair(c: u64, out_n: *mut u64, out_m: *mut u64) -> NbStatus {
    guard(|| {
        let (n, m) = unpair(&Nat::from(c));
        // Both components are at most c.
        put(out_n, n.to_u64().expect("component below c"))?;
        put(out_m, m.to_u64().expect("component below c"))?;
        Ok(NbStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn nb_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(s: *mut c_char) -> String {
        let out = CStr::from_ptr(s).to_str().unwrap().to_string();
        nb_string_free(s);
        out
    }

    unsafe fn last_error() -> String {
        CStr::from_ptr(nb_last_error())
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn pairing_round_trips_and_overflows() {
        unsafe {
            let mut code = 0;
            assert_eq!(nb_pair(3, 4, &mut code), NbStatus::Ok);
            assert_eq!(code, 32);
            let (mut n, mut m) = (0, 0);
            assert_eq!(nb_unpair(code, &mut n, &mut m), NbStatus::Ok);
            assert_eq!((n, m), (3, 4));
            assert_eq!(nb_pair(u64::MAX, 1, &mut code), NbStatus::Overflow);
            assert!(last_error().contains("64 bits"));
            assert_eq!(nb_pair(1, 1, ptr::null_mut()), NbStatus::NullArgument);
        }
    }

    #[test]
    fn world_errors_are_reported() {
        unsafe {
            let mut w = ptr::null_mut();
            assert_eq!(
                nb_world_new(c("Q-space").as_ptr(), &mut w),
                NbStatus::BadWorld
            );
            assert!(w.is_null());
            assert!(last_error().contains("Q-space"));
            assert_eq!(nb_world_new(ptr::null(), &mut w), NbStatus::NullArgument);
            let bad = [0xffu8, 0];
            assert_eq!(
                nb_world_new(bad.as_ptr().cast(), &mut w),
                NbStatus::InvalidUtf8
            );
        }
    }

    #[test]
    fn generate_translate_and_read() {
        unsafe {
            let mut w = ptr::null_mut();
            assert_eq!(nb_world_new(c("R-rational").as_ptr(), &mut w), NbStatus::Ok);
            let mut id = ptr::null_mut();
            assert_eq!(nb_world_id(w, &mut id), NbStatus::Ok);
            assert_eq!(take(id), "R-rational");

            let mut cauchy = ptr::null_mut();
            assert_eq!(
                nb_name_generate(w, c("1/3").as_ptr(), NbKind::Cauchy, &mut cauchy),
                NbStatus::Ok
            );
            let mut si = ptr::null_mut();
            assert_eq!(
                nb_name_translate(w, cauchy, NbKind::Cauchy, NbKind::Si, &mut si),
                NbStatus::Ok
            );
            let mut back = ptr::null_mut();
            assert_eq!(
                nb_name_translate(w, si, NbKind::Si, NbKind::Cauchy, &mut back),
                NbStatus::Ok
            );

            let (mut s, mut cells) = (ptr::null_mut(), 0usize);
            assert_eq!(
                nb_name_prefix(cauchy, 4, 0, &mut s, &mut cells),
                NbStatus::Ok
            );
            assert_eq!(cells, 4);
            assert_eq!(take(s), "0\n104\n25650\n6604794\n");
            assert_eq!(nb_name_prefix(back, 8, 0, &mut s, &mut cells), NbStatus::Ok);
            assert_eq!(cells, 8);
            nb_string_free(s);

            let mut used = 0;
            assert_eq!(
                nb_member(w, si, c("B(0,1)").as_ptr(), 100_000, &mut used),
                NbStatus::Ok
            );
            assert!(used > 0);
            assert_eq!(
                nb_member(w, si, c("B(2,1)").as_ptr(), 2_000, &mut used),
                NbStatus::NotYet
            );
            assert_eq!(used, 2_000);

            let mut none = ptr::null_mut();
            assert_eq!(
                nb_name_translate(w, cauchy, NbKind::Cauchy, NbKind::Max, &mut none),
                NbStatus::NoTranslation
            );
            for n in [cauchy, si, back] {
                nb_name_free(n);
            }
            nb_world_free(w);
        }
    }

    #[test]
    fn finite_names_and_fuel() {
        unsafe {
            let mut w = ptr::null_mut();
            assert_eq!(
                nb_world_new(c("K-space --fuel 1000").as_ptr(), &mut w),
                NbStatus::Ok
            );
            let mut min = ptr::null_mut();
            assert_eq!(
                nb_name_generate(w, c("7").as_ptr(), NbKind::Min, &mut min),
                NbStatus::Ok
            );
            let mut p = ptr::null_mut();
            assert_eq!(
                nb_name_translate(w, min, NbKind::Min, NbKind::Cauchy, &mut p),
                NbStatus::Ok
            );
            let (mut s, mut cells) = (ptr::null_mut(), 0usize);
            assert_eq!(
                nb_name_prefix(p, 16, 10_000, &mut s, &mut cells),
                NbStatus::OutOfFuel
            );
            assert_eq!(cells, 2);
            nb_string_free(s);

            let mut finite = ptr::null_mut();
            assert_eq!(
                nb_name_parse(c("5\n6\n").as_ptr(), &mut finite),
                NbStatus::Ok
            );
            assert_eq!(
                nb_name_prefix(finite, 3, 0, &mut s, &mut cells),
                NbStatus::EndOfInput
            );
            assert_eq!((take(s), cells), ("5\n6\n".to_string(), 2));
            assert_eq!(
                nb_name_parse(c("5\nx\n").as_ptr(), &mut finite),
                NbStatus::BadName
            );

            let mut v = 1;
            assert_eq!(
                nb_check_axioms(w, NbRelation::Strict, false, 20, 20, 3, &mut v),
                NbStatus::Ok
            );
            assert_eq!(v, 0);
            for n in [min, p] {
                nb_name_free(n);
            }
            nb_world_free(w);
        }
    }
}
