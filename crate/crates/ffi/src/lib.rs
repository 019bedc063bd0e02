//! C ABI over `nfl-core`.
//!
//! Objects cross the boundary as opaque handles created by `nfl_*_new`
//! style functions and released by the matching `nfl_*_free`. Every fallible
//! call returns an [`NflStatus`]; on failure a message is kept per thread and
//! can be read with [`nfl_last_error`]. Strings returned to the caller are
//! released with [`nfl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nfl_core::cost::{aggregate_cost, compile_permutation, AggregatorKind, CostModelKind, GateList, MinimizationMode};
use nfl_core::equivalence::{count_classes, distribution_class_partition, ClassPartitionReport, ScanMode};
use nfl_core::haar::{is_distinct, FastVerdict, HaarMethod, HaarSampler, StrongDistinctness};
use nfl_core::model::{build_input_state, output_distribution, Permutation, RegisterShape, ResourceState};
use nfl_core::{combinatorics, NflError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NflStatus {
    Ok = 0,
    NullPointer = 1,
    Shape = 2,
    Index = 3,
    Validation = 4,
    ResourceLimit = 5,
    Internal = 6,
    Panic = 7,
    BufferTooSmall = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NflCostModel {
    Transpositions = 0,
    Gates = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NflAggregator {
    Average = 0,
    Max = 1,
    Budget = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NflHaarMethod {
    Qr = 0,
    Rayleigh = 1,
}

/// Register widths.
pub struct NflShape(RegisterShape);

/// Resource state (squared magnitudes).
pub struct NflState(ResourceState);

/// Permutations grouped by prepared distribution.
pub struct NflPartition(ClassPartitionReport);

/// Compiled `{X, Toffoli}` circuit.
pub struct NflGateList(GateList);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &NflError) -> NflStatus {
    match err {
        NflError::Shape(_) => NflStatus::Shape,
        NflError::Index { .. } => NflStatus::Index,
        NflError::Validation(_) => NflStatus::Validation,
        NflError::ResourceLimit(_) => NflStatus::ResourceLimit,
        NflError::Internal(_) => NflStatus::Internal,
    }
}

struct Fail(NflStatus, String);

impl From<NflError> for Fail {
    fn from(e: NflError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NflStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NflStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NflStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside nfl".into());
            NflStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: caller passes a handle from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: caller passes a writable location or null.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees `len` readable elements at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nfl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nfl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nfl_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---- shapes ----

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_shape_new(n0: u32, nplus: u32, nq: u32, ny: u32, out: *mut *mut NflShape) -> NflStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = Box::into_raw(Box::new(NflShape(RegisterShape::new(n0, nplus, nq, ny)?)));
        Ok(())
    })
}

/// # Safety
/// `shape` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nfl_shape_free(shape: *mut NflShape) {
    if !shape.is_null() {
        drop(unsafe { Box::from_raw(shape) });
    }
}

/// `N = 2^n`.
///
/// # Safety
/// `shape` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_shape_size(shape: *const NflShape, out: *mut usize) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = unsafe { deref(shape, "shape") }?.0.size();
        Ok(())
    })
}

/// Generic number of distribution classes `M*` for the shape.
///
/// # Safety
/// `shape` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_count_classes(shape: *const NflShape, out: *mut usize) -> NflStatus {
    guard(|| {
        let shape = unsafe { deref(shape, "shape") }?;
        *unsafe { out_ref(out, "out") }? = count_classes(&shape.0)?;
        Ok(())
    })
}

/// `C(2Ñ - 1, Ñ - 1)` with `Ñ = 2^n_tilde`, as a decimal string to be freed
/// with [`nfl_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_stars_and_bars_count(n_tilde: u32, out: *mut *mut c_char) -> NflStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = into_c_string(combinatorics::stars_and_bars_count(n_tilde)?.to_string());
        Ok(())
    })
}

// ---- states ----

/// State from `len` squared magnitudes (float backend).
///
/// # Safety
/// `masses` must point to `len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_from_f64(masses: *const f64, len: usize, out: *mut *mut NflState) -> NflStatus {
    guard(|| {
        let values = unsafe { slice(masses, len, "masses") }?.to_vec();
        let out = unsafe { out_ref(out, "out") }?;
        *out = Box::into_raw(Box::new(NflState(ResourceState::from_f64(values)?)));
        Ok(())
    })
}

/// Exact state from `len` fractions `num[i] / den[i]`.
///
/// # Safety
/// `num` and `den` must each point to `len` integers and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_from_ratios(
    num: *const i64,
    den: *const i64,
    len: usize,
    out: *mut *mut NflState,
) -> NflStatus {
    guard(|| {
        let num = unsafe { slice(num, len, "num") }?;
        let den = unsafe { slice(den, len, "den") }?;
        let pairs: Vec<(i64, i64)> = num.iter().copied().zip(den.iter().copied()).collect();
        let out = unsafe { out_ref(out, "out") }?;
        *out = Box::into_raw(Box::new(NflState(ResourceState::from_ratios(&pairs)?)));
        Ok(())
    })
}

/// Haar-random `nq`-qubit state; `method` is an [`NflHaarMethod`] value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_haar(nq: u32, seed: u64, method: u32, out: *mut *mut NflState) -> NflStatus {
    guard(|| {
        let method = match method {
            m if m == NflHaarMethod::Qr as u32 => HaarMethod::Qr,
            m if m == NflHaarMethod::Rayleigh as u32 => HaarMethod::Rayleigh,
            m => return Err(Fail(NflStatus::Validation, format!("unknown Haar method {m}"))),
        };
        let out = unsafe { out_ref(out, "out") }?;
        *out = Box::into_raw(Box::new(NflState(HaarSampler::new(method, seed).sample(nq)?)));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_free(state: *mut NflState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_len(state: *const NflState, out: *mut usize) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = unsafe { deref(state, "state") }?.0.len();
        Ok(())
    })
}

/// Copies the squared magnitudes (as doubles) into `buf`.
///
/// # Safety
/// `state` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_masses(state: *const NflState, buf: *mut f64, len: usize) -> NflStatus {
    guard(|| {
        let masses = unsafe { deref(state, "state") }?.0.masses().to_f64();
        copy_out(&masses, buf, len)
    })
}

fn copy_out(values: &[f64], buf: *mut f64, len: usize) -> Result<(), Fail> {
    if len < values.len() {
        return Err(Fail(NflStatus::BufferTooSmall, format!("buffer holds {len} values, need {}", values.len())));
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    // SAFETY: caller guarantees `len >= values.len()` writable doubles.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    Ok(())
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_is_distinct(state: *const NflState, tolerance: f64, out: *mut bool) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = is_distinct(&unsafe { deref(state, "state") }?.0, tolerance);
        Ok(())
    })
}

/// Strong distinctness at `shape`: fast path first, then the exhaustive check.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_state_is_strongly_distinct(
    state: *const NflState,
    shape: *const NflShape,
    tolerance: f64,
    out: *mut bool,
) -> NflStatus {
    guard(|| {
        let state = &unsafe { deref(state, "state") }?.0;
        let shape = &unsafe { deref(shape, "shape") }?.0;
        let checker = StrongDistinctness { tolerance, ..StrongDistinctness::default() };
        let verdict = match checker.fast(state, shape)? {
            FastVerdict::Yes => true,
            FastVerdict::Inconclusive => checker.oracle(state, shape)?,
        };
        *unsafe { out_ref(out, "out") }? = verdict;
        Ok(())
    })
}

/// Output distribution of the permutation `image` (where index `k` goes to
/// `image[k]`) applied to the input built from `state`. Writes `2^ny`
/// doubles to `buf`.
///
/// # Safety
/// Handles must be live, `image` hold `len` entries and `buf` `buf_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nfl_output_distribution(
    shape: *const NflShape,
    state: *const NflState,
    image: *const usize,
    len: usize,
    buf: *mut f64,
    buf_len: usize,
) -> NflStatus {
    guard(|| {
        let shape = &unsafe { deref(shape, "shape") }?.0;
        let state = &unsafe { deref(state, "state") }?.0;
        let p = Permutation::new(unsafe { slice(image, len, "image") }?.to_vec())?;
        let input = build_input_state(shape, state)?;
        copy_out(&output_distribution(&input, &p)?.masses().to_f64(), buf, buf_len)
    })
}

// ---- partitions and costs ----

/// Groups permutations by prepared distribution. `samples == 0` scans all
/// `N!` permutations; otherwise `samples` seeded random ones.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_partition_new(
    state: *const NflState,
    shape: *const NflShape,
    samples: usize,
    seed: u64,
    tolerance: f64,
    out: *mut *mut NflPartition,
) -> NflStatus {
    guard(|| {
        let state = &unsafe { deref(state, "state") }?.0;
        let shape = &unsafe { deref(shape, "shape") }?.0;
        let mode = if samples == 0 { ScanMode::Exhaustive } else { ScanMode::Sampled { samples, seed } };
        let report = distribution_class_partition(state, shape, mode, tolerance)?;
        *unsafe { out_ref(out, "out") }? = Box::into_raw(Box::new(NflPartition(report)));
        Ok(())
    })
}

/// # Safety
/// `partition` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nfl_partition_free(partition: *mut NflPartition) {
    if !partition.is_null() {
        drop(unsafe { Box::from_raw(partition) });
    }
}

/// Number of distinct distributions `M`.
///
/// # Safety
/// `partition` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_partition_class_count(partition: *const NflPartition, out: *mut usize) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = unsafe { deref(partition, "partition") }?.0.m();
        Ok(())
    })
}

/// Whether two partitions group the same permutations identically.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_partition_same(a: *const NflPartition, b: *const NflPartition, out: *mut bool) -> NflStatus {
    guard(|| {
        let a = &unsafe { deref(a, "a") }?.0;
        let b = &unsafe { deref(b, "b") }?.0;
        *unsafe { out_ref(out, "out") }? = a.same_partition(b);
        Ok(())
    })
}

/// Primary entry of the aggregate cost (cheapest member per class, then the
/// aggregator). `model` is an [`NflCostModel`] and `aggregator` an
/// [`NflAggregator`] value; `budget` is only read by the budget aggregator.
///
/// # Safety
/// `partition` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_partition_aggregate_cost(
    partition: *const NflPartition,
    model: u32,
    aggregator: u32,
    budget: f64,
    out: *mut f64,
) -> NflStatus {
    guard(|| {
        let part = &unsafe { deref(partition, "partition") }?.0;
        let model = match model {
            m if m == NflCostModel::Transpositions as u32 => CostModelKind::Transpositions,
            m if m == NflCostModel::Gates as u32 => CostModelKind::Gates,
            m => return Err(Fail(NflStatus::Validation, format!("unknown cost model {m}"))),
        };
        let kind = match aggregator {
            a if a == NflAggregator::Average as u32 => AggregatorKind::Average,
            a if a == NflAggregator::Max as u32 => AggregatorKind::Max,
            a if a == NflAggregator::Budget as u32 => AggregatorKind::Budget,
            a => return Err(Fail(NflStatus::Validation, format!("unknown aggregator {a}"))),
        };
        let report = aggregate_cost(part, model, &kind.resolve(model, budget), MinimizationMode::Exhaustive)?;
        *unsafe { out_ref(out, "out") }? = report.value.primary();
        Ok(())
    })
}

// ---- circuits ----

/// Compiles the permutation `image` of size `2^n` into `{X, Toffoli}` gates
/// over `n` register lines plus one ancilla (line `n`).
///
/// # Safety
/// `image` must hold `len` entries and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_compile_permutation(image: *const usize, len: usize, out: *mut *mut NflGateList) -> NflStatus {
    guard(|| {
        let p = Permutation::new(unsafe { slice(image, len, "image") }?.to_vec())?;
        if !len.is_power_of_two() || len < 2 {
            return Err(Fail(NflStatus::Shape, format!("permutation size {len} is not a power of two >= 2")));
        }
        let gl = compile_permutation(&p, len.trailing_zeros() as usize)?;
        *unsafe { out_ref(out, "out") }? = Box::into_raw(Box::new(NflGateList(gl)));
        Ok(())
    })
}

/// # Safety
/// `gates` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nfl_gate_list_free(gates: *mut NflGateList) {
    if !gates.is_null() {
        drop(unsafe { Box::from_raw(gates) });
    }
}

/// # Safety
/// `gates` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_gate_list_len(gates: *const NflGateList, out: *mut usize) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = unsafe { deref(gates, "gates") }?.0.len();
        Ok(())
    })
}

/// One gate per line (`X t` or `CCX c1 c2 t`); free with [`nfl_string_free`].
///
/// # Safety
/// `gates` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_gate_list_to_text(gates: *const NflGateList, out: *mut *mut c_char) -> NflStatus {
    guard(|| {
        let text = unsafe { deref(gates, "gates") }?.0.to_string();
        *unsafe { out_ref(out, "out") }? = into_c_string(text);
        Ok(())
    })
}

/// Runs the circuit on basis state `input` (register bits plus ancilla bit
/// `n`) and writes the resulting basis state.
///
/// # Safety
/// `gates` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nfl_gate_list_simulate(gates: *const NflGateList, input: u64, out: *mut u64) -> NflStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = unsafe { deref(gates, "gates") }?.0.simulate(input);
        Ok(())
    })
}

/// Reads a message pointer from [`nfl_last_error`] into an owned string.
pub fn last_error_string() -> Option<String> {
    let p = nfl_last_error();
    // SAFETY: pointer comes from the thread-local CString.
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}
