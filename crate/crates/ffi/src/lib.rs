//! C interface to the `biassoc` library.
//!
//! Every fallible function returns a [`BiassocStatus`] and writes its result
//! through an out pointer. On failure the message is available from
//! [`biassoc_last_error_message`] on the same thread. Strings handed out by
//! this library must be released with [`biassoc_string_free`]; handles with
//! their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use biassoc::cli::SIZE_BOUND;
use biassoc::leveled::{
    bipermutahedron_poset, gamma_decode, gamma_encode, opet_iso_check, ComplementaryPair,
    OrderedBipartition,
};
use biassoc::multiplihedron::{multiplihedron_poset, prop_d_check};
use biassoc::poset::FinitePoset;
use biassoc::prop::{is_special, term_eq, theorem_c_check, varpi, PropTerm, TermExpr};
use biassoc::tree::face_poset_associahedron;
use biassoc::zone::biassociahedron_poset;
use biassoc::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiassocStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Text could not be parsed.
    Parse = 3,
    /// A size or index argument is out of range.
    Domain = 4,
    /// The input parsed but violates a structural condition.
    Invalid = 5,
    /// An unexpected internal failure; the library state is still usable.
    Internal = 6,
}

/// Face poset families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiassocFamily {
    /// Permutahedron of dimension m - 1 (n is ignored).
    Permutahedron = 0,
    Bipermutahedron = 1,
    /// Associahedron on m leaves (n is ignored).
    Associahedron = 2,
    Biassociahedron = 3,
    /// Multiplihedron on m leaves (n is ignored).
    Multiplihedron = 4,
}

/// A complementary pair of leveled trees.
pub struct BiassocPair(ComplementaryPair);

/// A term of the free prop on one generator per biarity.
pub struct BiassocTerm(PropTerm);

/// A finite poset with string keys.
pub struct BiassocPoset(FinitePoset);

type Failure = (BiassocStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> BiassocStatus {
    match e {
        Error::Parse { .. } => BiassocStatus::Parse,
        Error::Domain(_) | Error::ArityMismatch(_) | Error::Shape { .. } => BiassocStatus::Domain,
        Error::NotInternalEdge(_)
        | Error::InvalidTree(_)
        | Error::InvalidLevels(_)
        | Error::InvalidZones(_)
        | Error::InvalidDiaphragm(_)
        | Error::InvalidPainted(_)
        | Error::InvalidBipartition(_)
        | Error::NotSubtree(_)
        | Error::InvalidTerm(_)
        | Error::InvalidPoset(_)
        | Error::NotGraded => BiassocStatus::Invalid,
    }
}

fn lib(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BiassocStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| Err((BiassocStatus::Internal, "internal panic".into())));
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BiassocStatus::Ok
        }
        Err((status, message)) => {
            set_last_error(&message);
            status
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err((BiassocStatus::NullArgument, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (BiassocStatus::InvalidUtf8, format!("{name}: {e}")))
}

/// # Safety
/// `p` is null or points to a live value of type `T`.
unsafe fn read_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    non_null(p, name)?;
    Ok(&*p)
}

/// # Safety
/// `out` is null or valid for one write.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    non_null(out, "out")?;
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| (BiassocStatus::Internal, e.to_string()))
}

/// Hands ownership of `value` to the caller; nothing is allocated when `out` is null.
///
/// # Safety
/// `out` is null or valid for one write.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    non_null(out, "out")?;
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn check_size(m: usize, n: usize) -> Result<(), Failure> {
    if m + n > SIZE_BOUND {
        return Err((
            BiassocStatus::Domain,
            format!(
                "m + n = {} exceeds the tractability bound {SIZE_BOUND}",
                m + n
            ),
        ));
    }
    Ok(())
}

/// Returns the library version as a static string. Do not free it.
#[no_mangle]
pub extern "C" fn biassoc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Returns a copy of the last error message on this thread, or null if the
/// last call succeeded. Release it with `biassoc_string_free`.
#[no_mangle]
pub extern "C" fn biassoc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(text) => text.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biassoc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a pair such as `((* *)3 *)1 ~ (* *)2`.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_parse(
    text: *const c_char,
    out: *mut *mut BiassocPair,
) -> BiassocStatus {
    guard(|| {
        let pair = ComplementaryPair::parse(read_str(text, "text")?).map_err(lib)?;
        write_handle(out, BiassocPair(pair))
    })
}

/// Decodes an ordered bipartition such as `(4|57|12|36)` of biarity (m, n).
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_from_gamma(
    text: *const c_char,
    m: usize,
    n: usize,
    out: *mut *mut BiassocPair,
) -> BiassocStatus {
    guard(|| {
        let b = OrderedBipartition::parse(read_str(text, "text")?, m, n).map_err(lib)?;
        let pair = gamma_decode(&b).map_err(lib)?;
        write_handle(out, BiassocPair(pair))
    })
}

/// Releases a pair. Null is ignored.
///
/// # Safety
/// `pair` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_free(pair: *mut BiassocPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Writes the biarity (m, n) of a pair.
///
/// # Safety
/// `pair` is a live handle and both out pointers are valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_biarity(
    pair: *const BiassocPair,
    m: *mut usize,
    n: *mut usize,
) -> BiassocStatus {
    guard(|| {
        let (a, b) = read_ref(pair, "pair")?.0.arity();
        non_null(n, "n")?;
        write_out(m, a)?;
        write_out(n, b)
    })
}

/// Formats a pair in its text form.
///
/// # Safety
/// `pair` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_to_string(
    pair: *const BiassocPair,
    out: *mut *mut c_char,
) -> BiassocStatus {
    guard(|| {
        let text = read_ref(pair, "pair")?.0.to_string();
        non_null(out, "out")?;
        write_out(out, into_c_string(text)?)
    })
}

/// Encodes a pair as an ordered bipartition, e.g. `(4|57|12|36)`.
///
/// # Safety
/// `pair` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_gamma(
    pair: *const BiassocPair,
    out: *mut *mut c_char,
) -> BiassocStatus {
    guard(|| {
        let text = gamma_encode(&read_ref(pair, "pair")?.0).to_string();
        non_null(out, "out")?;
        write_out(out, into_c_string(text)?)
    })
}

/// Builds the prop term assigned to a pair.
///
/// # Safety
/// `pair` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_pair_varpi(
    pair: *const BiassocPair,
    out: *mut *mut BiassocTerm,
) -> BiassocStatus {
    guard(|| {
        let term = varpi(&read_ref(pair, "pair")?.0);
        write_handle(out, BiassocTerm(term))
    })
}

/// Parses and evaluates a term expression such as `V(x[1,2], H(x[2,1], 1))`.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_parse(
    text: *const c_char,
    out: *mut *mut BiassocTerm,
) -> BiassocStatus {
    guard(|| {
        let term = TermExpr::parse(read_str(text, "text")?)
            .and_then(|e| e.eval())
            .map_err(lib)?;
        write_handle(out, BiassocTerm(term))
    })
}

/// Releases a term. Null is ignored.
///
/// # Safety
/// `term` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_free(term: *mut BiassocTerm) {
    if !term.is_null() {
        drop(Box::from_raw(term));
    }
}

/// Writes the numbers of outputs and inputs of a term.
///
/// # Safety
/// `term` is a live handle and both out pointers are valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_biarity(
    term: *const BiassocTerm,
    outputs: *mut usize,
    inputs: *mut usize,
) -> BiassocStatus {
    guard(|| {
        let (b, a) = read_ref(term, "term")?.0.biarity();
        non_null(inputs, "inputs")?;
        write_out(outputs, b)?;
        write_out(inputs, a)
    })
}

/// Sets `out` to whether two terms are isomorphic graphs.
///
/// # Safety
/// `a` and `b` are live handles and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_equal(
    a: *const BiassocTerm,
    b: *const BiassocTerm,
    out: *mut bool,
) -> BiassocStatus {
    guard(|| {
        let same = term_eq(&read_ref(a, "a")?.0, &read_ref(b, "b")?.0);
        write_out(out, same)
    })
}

/// Sets `out` to whether a term is special.
///
/// # Safety
/// `term` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_is_special(
    term: *const BiassocTerm,
    out: *mut bool,
) -> BiassocStatus {
    guard(|| {
        let special = is_special(&read_ref(term, "term")?.0);
        write_out(out, special)
    })
}

/// Serializes a term as JSON.
///
/// # Safety
/// `term` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_term_to_json(
    term: *const BiassocTerm,
    out: *mut *mut c_char,
) -> BiassocStatus {
    guard(|| {
        let text = read_ref(term, "term")?.0.to_json().to_string();
        non_null(out, "out")?;
        write_out(out, into_c_string(text)?)
    })
}

/// Builds the face poset of a family. Sizes with m + n above the
/// tractability bound are rejected.
///
/// # Safety
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_new(
    family: BiassocFamily,
    m: usize,
    n: usize,
    out: *mut *mut BiassocPoset,
) -> BiassocStatus {
    guard(|| {
        let poset = match family {
            BiassocFamily::Permutahedron => {
                check_size(m, 1).and_then(|_| bipermutahedron_poset(m, 1).map_err(lib))
            }
            BiassocFamily::Bipermutahedron => {
                check_size(m, n).and_then(|_| bipermutahedron_poset(m, n).map_err(lib))
            }
            BiassocFamily::Associahedron => {
                check_size(m, 1).and_then(|_| face_poset_associahedron(m).map_err(lib))
            }
            BiassocFamily::Biassociahedron => {
                check_size(m, n).and_then(|_| biassociahedron_poset(m, n).map_err(lib))
            }
            BiassocFamily::Multiplihedron => {
                check_size(m, 2).and_then(|_| multiplihedron_poset(m).map_err(lib))
            }
        }?;
        write_handle(out, BiassocPoset(poset))
    })
}

/// Releases a poset. Null is ignored.
///
/// # Safety
/// `poset` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_free(poset: *mut BiassocPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Returns the number of elements, or 0 for a null handle.
///
/// # Safety
/// `poset` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_len(poset: *const BiassocPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.0.len())
}

fn index_in(p: &FinitePoset, i: usize) -> Result<(), Failure> {
    if i < p.len() {
        Ok(())
    } else {
        Err((
            BiassocStatus::Domain,
            format!("index {i} out of range for {} elements", p.len()),
        ))
    }
}

/// Writes the text key of element `i`.
///
/// # Safety
/// `poset` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_key(
    poset: *const BiassocPoset,
    i: usize,
    out: *mut *mut c_char,
) -> BiassocStatus {
    guard(|| {
        let p = &read_ref(poset, "poset")?.0;
        index_in(p, i)?;
        non_null(out, "out")?;
        write_out(out, into_c_string(p.key(i).to_string())?)
    })
}

/// Sets `out` to whether element `i` is below or equal to element `j`.
///
/// # Safety
/// `poset` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_leq(
    poset: *const BiassocPoset,
    i: usize,
    j: usize,
    out: *mut bool,
) -> BiassocStatus {
    guard(|| {
        let p = &read_ref(poset, "poset")?.0;
        index_in(p, i)?;
        index_in(p, j)?;
        write_out(out, p.leq(i, j))
    })
}

/// Copies up to `capacity` entries of the f-vector into `buffer` and writes
/// its full length to `len`. `buffer` may be null when `capacity` is 0.
///
/// # Safety
/// `poset` is a live handle, `buffer` is valid for `capacity` writes and
/// `len` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_fvector(
    poset: *const BiassocPoset,
    buffer: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> BiassocStatus {
    guard(|| {
        let f = read_ref(poset, "poset")?.0.fvector();
        non_null(len, "len")?;
        if capacity > 0 {
            non_null(buffer, "buffer")?;
            let count = capacity.min(f.len());
            ptr::copy_nonoverlapping(f.as_ptr(), buffer, count);
        }
        write_out(len, f.len())
    })
}

/// Writes the Euler characteristic of a graded poset.
///
/// # Safety
/// `poset` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_euler(
    poset: *const BiassocPoset,
    out: *mut i64,
) -> BiassocStatus {
    guard(|| {
        let chi = read_ref(poset, "poset")?.0.euler().map_err(lib)?;
        write_out(out, chi)
    })
}

/// Sets `out` to whether two posets are isomorphic.
///
/// # Safety
/// `a` and `b` are live handles and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_isomorphic(
    a: *const BiassocPoset,
    b: *const BiassocPoset,
    out: *mut bool,
) -> BiassocStatus {
    guard(|| {
        let found = read_ref(a, "a")?
            .0
            .isomorphism(&read_ref(b, "b")?.0)
            .is_some();
        write_out(out, found)
    })
}

/// Serializes a poset as JSON with its elements and cover relations.
///
/// # Safety
/// `poset` is a live handle and `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_poset_to_json(
    poset: *const BiassocPoset,
    out: *mut *mut c_char,
) -> BiassocStatus {
    guard(|| {
        let json = read_ref(poset, "poset")?.0.to_json();
        let text =
            serde_json::to_string(&json).map_err(|e| (BiassocStatus::Internal, e.to_string()))?;
        non_null(out, "out")?;
        write_out(out, into_c_string(text)?)
    })
}

/// Checks that the opet map induces an isomorphism for biarity (m, n).
///
/// # Safety
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_check_opet(m: usize, n: usize, out: *mut bool) -> BiassocStatus {
    guard(|| {
        check_size(m, n)?;
        write_out(out, opet_iso_check(m, n).map_err(lib)?)
    })
}

/// Checks that the term map and the zone projection have the same kernel
/// on pairs of biarity (m, n).
///
/// # Safety
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_check_kernels(
    m: usize,
    n: usize,
    out: *mut bool,
) -> BiassocStatus {
    guard(|| {
        check_size(m, n)?;
        write_out(out, theorem_c_check(m, n).map_err(lib)?)
    })
}

/// Checks that zone pairs of biarity (m, 2) form the multiplihedron.
///
/// # Safety
/// `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn biassoc_check_multiplihedron(m: usize, out: *mut bool) -> BiassocStatus {
    guard(|| {
        check_size(m, 2)?;
        write_out(out, prop_d_check(m).map_err(lib)?)
    })
}
