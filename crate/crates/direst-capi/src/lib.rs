//! C ABI for the `direst` estimators.
//!
//! Conventions: every function returns an `int32_t` status code
//! (`DIREST_OK` on success) and writes results through out-pointers. Handles
//! are opaque; free them with the matching `_free` function. All pointers
//! must be non-null unless documented otherwise, and counts/configs created
//! here must not be shared across threads without external synchronization.

use std::os::raw::c_char;
use std::slice;

use direst::{
    entropy_mean_fixed, entropy_moments_full, entropy_variance_fixed, mi_mean_fixed,
    tsallis_mean_fixed, ConcentrationPrior, CountVector, Error, EstimatorConfig, JointCountTable,
    SizePrior,
};

/// Success.
pub const DIREST_OK: i32 = 0;
/// A pointer argument was null.
pub const DIREST_ERR_NULL_POINTER: i32 = 1;
/// An argument was structurally or numerically invalid.
pub const DIREST_ERR_INVALID_ARGUMENT: i32 = 2;
/// The requested model places no mass on any feasible event-space size.
pub const DIREST_ERR_INFEASIBLE: i32 = 3;
/// The estimator declined the dataset (e.g. no coincidences).
pub const DIREST_ERR_UNSUPPORTED_DATA: i32 = 4;

fn status_of(err: &Error) -> i32 {
    match err {
        Error::SupportExhausted(_) => DIREST_ERR_INFEASIBLE,
        Error::NoCoincidences => DIREST_ERR_UNSUPPORTED_DATA,
        _ => DIREST_ERR_INVALID_ARGUMENT,
    }
}

/// Opaque count vector.
pub struct DirestCounts {
    inner: CountVector,
}

/// Opaque two-axis contingency table.
pub struct DirestTable {
    inner: JointCountTable,
}

/// Opaque estimator configuration (hyperprior + quadrature settings).
pub struct DirestConfig {
    inner: EstimatorConfig,
}

/// Create a count vector from `len` unsigned 64-bit counts. Zeros are
/// allowed and contribute to nothing but bookkeeping.
///
/// # Safety
///
/// `counts` must point to `len` readable `u64` values (or be null when
/// `len` is 0) and `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_counts_new(
    counts: *const u64,
    len: usize,
    out: *mut *mut DirestCounts,
) -> i32 {
    if out.is_null() || (counts.is_null() && len > 0) {
        return DIREST_ERR_NULL_POINTER;
    }
    let data = if len == 0 { &[][..] } else { slice::from_raw_parts(counts, len) };
    let handle = Box::new(DirestCounts { inner: CountVector::new(data.to_vec()) });
    *out = Box::into_raw(handle);
    DIREST_OK
}

/// Release a count vector. Accepts null.
///
/// # Safety
///
/// The pointer must be null or one previously returned by
/// [`direst_counts_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn direst_counts_free(counts: *mut DirestCounts) {
    if !counts.is_null() {
        drop(Box::from_raw(counts));
    }
}

/// Create a two-axis table from row-major counts of shape `rows` x `cols`.
///
/// # Safety
///
/// `counts` must point to `rows * cols` readable `u64` values and `out`
/// must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_table_new(
    counts: *const u64,
    rows: usize,
    cols: usize,
    out: *mut *mut DirestTable,
) -> i32 {
    if out.is_null() || counts.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    let data = slice::from_raw_parts(counts, rows.saturating_mul(cols));
    match JointCountTable::new(vec![rows, cols], data.to_vec()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DirestTable { inner }));
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Release a table. Accepts null.
///
/// # Safety
///
/// The pointer must be null or one previously returned by
/// [`direst_table_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn direst_table_free(table: *mut DirestTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Create a configuration with a log-uniform concentration prior on
/// [c_min, c_max] and a uniform size prior on [M, m_max].
///
/// # Safety
///
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_config_new_log_uniform(
    c_min: f64,
    c_max: f64,
    m_max: usize,
    out: *mut *mut DirestConfig,
) -> i32 {
    if out.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    let c_prior = match ConcentrationPrior::log_uniform(c_min, c_max) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let size_prior = match SizePrior::uniform_cutoff(m_max) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    *out = Box::into_raw(Box::new(DirestConfig {
        inner: EstimatorConfig::new(c_prior, size_prior),
    }));
    DIREST_OK
}

/// Create a configuration with both hyperparameters fixed: a point-mass
/// concentration `c` and a point-mass event-space size `m`.
///
/// # Safety
///
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_config_new_fixed(
    c: f64,
    m: usize,
    out: *mut *mut DirestConfig,
) -> i32 {
    if out.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    let c_prior = match ConcentrationPrior::point(c) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let size_prior = match SizePrior::point(m) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    *out = Box::into_raw(Box::new(DirestConfig {
        inner: EstimatorConfig::new(c_prior, size_prior),
    }));
    DIREST_OK
}

/// Override the number of quadrature nodes used for the concentration
/// integral (default 200).
///
/// # Safety
///
/// `config` must be a live pointer from one of the config constructors.
#[no_mangle]
pub unsafe extern "C" fn direst_config_set_nodes(config: *mut DirestConfig, nodes: usize) -> i32 {
    if config.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    if nodes == 0 {
        return DIREST_ERR_INVALID_ARGUMENT;
    }
    (*config).inner.quad_nodes = nodes;
    DIREST_OK
}

/// Release a configuration. Accepts null.
///
/// # Safety
///
/// The pointer must be null or one previously returned by a config
/// constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn direst_config_free(config: *mut DirestConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Posterior mean entropy (nats) for fixed concentration `c` and event-space
/// size `m`.
///
/// # Safety
///
/// `counts` must be a live pointer from [`direst_counts_new`] and `out`
/// a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_entropy_mean_fixed(
    counts: *const DirestCounts,
    c: f64,
    m: usize,
    out_mean: *mut f64,
) -> i32 {
    if counts.is_null() || out_mean.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    match entropy_mean_fixed(&(*counts).inner, c, m) {
        Ok(v) => {
            *out_mean = v;
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Posterior mean and variance of the entropy for fixed (c, m).
///
/// # Safety
///
/// `counts` must be a live pointer from [`direst_counts_new`];
/// `out_mean` and `out_variance` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn direst_entropy_variance_fixed(
    counts: *const DirestCounts,
    c: f64,
    m: usize,
    out_mean: *mut f64,
    out_variance: *mut f64,
) -> i32 {
    if counts.is_null() || out_mean.is_null() || out_variance.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    match entropy_variance_fixed(&(*counts).inner, c, m) {
        Ok((mean, var)) => {
            *out_mean = mean;
            *out_variance = var;
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Posterior mean Tsallis entropy of index `q` for fixed (c, m).
///
/// # Safety
///
/// `counts` must be a live pointer from [`direst_counts_new`] and `out`
/// a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_tsallis_mean_fixed(
    counts: *const DirestCounts,
    c: f64,
    m: usize,
    q: f64,
    out_mean: *mut f64,
) -> i32 {
    if counts.is_null() || out_mean.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    match tsallis_mean_fixed(&(*counts).inner, c, m, q) {
        Ok(v) => {
            *out_mean = v;
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Fully marginalized posterior mean and variance of the entropy under the
/// hyperprior described by `config`.
///
/// # Safety
///
/// `counts` and `config` must be live pointers from their constructors;
/// `out_mean` and `out_variance` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn direst_entropy_moments(
    counts: *const DirestCounts,
    config: *const DirestConfig,
    out_mean: *mut f64,
    out_variance: *mut f64,
) -> i32 {
    if counts.is_null() || config.is_null() || out_mean.is_null() || out_variance.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    match entropy_moments_full(&(*counts).inner, &(*config).inner) {
        Ok(est) => {
            *out_mean = est.mean;
            *out_variance = est.variance.unwrap_or(f64::NAN);
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Posterior mean mutual information (nats) of a two-axis table at fixed
/// concentration `c`, with the axis sizes taken from the table shape.
///
/// # Safety
///
/// `table` must be a live pointer from [`direst_table_new`] and `out` a
/// valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn direst_mi_mean_fixed(
    table: *const DirestTable,
    c: f64,
    out_mean: *mut f64,
) -> i32 {
    if table.is_null() || out_mean.is_null() {
        return DIREST_ERR_NULL_POINTER;
    }
    match mi_mean_fixed(&(*table).inner, c) {
        Ok(v) => {
            *out_mean = v;
            DIREST_OK
        }
        Err(e) => status_of(&e),
    }
}

/// Human-readable name for a status code. Returns a static NUL-terminated
/// string; never null.
#[no_mangle]
pub extern "C" fn direst_status_name(status: i32) -> *const c_char {
    let name: &'static [u8] = match status {
        DIREST_OK => b"ok\0",
        DIREST_ERR_NULL_POINTER => b"null pointer\0",
        DIREST_ERR_INVALID_ARGUMENT => b"invalid argument\0",
        DIREST_ERR_INFEASIBLE => b"infeasible\0",
        DIREST_ERR_UNSUPPORTED_DATA => b"unsupported data\0",
        _ => b"unknown status\0",
    };
    name.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn roundtrip_entropy_through_the_c_abi() {
        unsafe {
            let counts = [3u64, 1, 0];
            let mut handle: *mut DirestCounts = ptr::null_mut();
            assert_eq!(direst_counts_new(counts.as_ptr(), counts.len(), &mut handle), DIREST_OK);

            let mut mean = f64::NAN;
            assert_eq!(direst_entropy_mean_fixed(handle, 1.0, 3, &mut mean), DIREST_OK);
            let direct = entropy_mean_fixed(&CountVector::new(counts.to_vec()), 1.0, 3).unwrap();
            assert_eq!(mean, direct);

            let mut var = f64::NAN;
            assert_eq!(
                direst_entropy_variance_fixed(handle, 1.0, 3, &mut mean, &mut var),
                DIREST_OK
            );
            assert!(var >= 0.0);

            // m below the observed support is an invalid argument
            assert_eq!(
                direst_entropy_mean_fixed(handle, 1.0, 1, &mut mean),
                DIREST_ERR_INVALID_ARGUMENT
            );
            direst_counts_free(handle);
        }
    }

    #[test]
    fn full_moments_and_config_lifecycle() {
        unsafe {
            let counts = [5u64, 2, 1];
            let mut ch: *mut DirestCounts = ptr::null_mut();
            assert_eq!(direst_counts_new(counts.as_ptr(), counts.len(), &mut ch), DIREST_OK);

            let mut cfg: *mut DirestConfig = ptr::null_mut();
            assert_eq!(direst_config_new_log_uniform(1e-3, 1e3, 50, &mut cfg), DIREST_OK);
            assert_eq!(direst_config_set_nodes(cfg, 60), DIREST_OK);
            assert_eq!(direst_config_set_nodes(cfg, 0), DIREST_ERR_INVALID_ARGUMENT);

            let (mut mean, mut var) = (f64::NAN, f64::NAN);
            assert_eq!(direst_entropy_moments(ch, cfg, &mut mean, &mut var), DIREST_OK);
            assert!(mean > 0.0 && mean < 50f64.ln());
            assert!(var >= 0.0);

            // fixed config reproduces the fixed-parameter function exactly
            let mut fixed_cfg: *mut DirestConfig = ptr::null_mut();
            assert_eq!(direst_config_new_fixed(2.0, 5, &mut fixed_cfg), DIREST_OK);
            let (mut m2, mut v2) = (f64::NAN, f64::NAN);
            assert_eq!(direst_entropy_moments(ch, fixed_cfg, &mut m2, &mut v2), DIREST_OK);
            let (em, ev) =
                entropy_variance_fixed(&CountVector::new(counts.to_vec()), 2.0, 5).unwrap();
            assert_eq!(m2, em);
            assert_eq!(v2, ev);

            direst_config_free(cfg);
            direst_config_free(fixed_cfg);
            direst_counts_free(ch);
        }
    }

    #[test]
    fn infeasible_size_prior_maps_to_infeasible_status() {
        unsafe {
            let counts = [1u64, 1, 1];
            let mut ch: *mut DirestCounts = ptr::null_mut();
            assert_eq!(direst_counts_new(counts.as_ptr(), counts.len(), &mut ch), DIREST_OK);
            let mut cfg: *mut DirestConfig = ptr::null_mut();
            // size cutoff below the observed support
            assert_eq!(direst_config_new_log_uniform(1e-2, 1e2, 2, &mut cfg), DIREST_OK);
            let (mut mean, mut var) = (f64::NAN, f64::NAN);
            assert_eq!(
                direst_entropy_moments(ch, cfg, &mut mean, &mut var),
                DIREST_ERR_INFEASIBLE
            );
            direst_config_free(cfg);
            direst_counts_free(ch);
        }
    }

    #[test]
    fn mi_tsallis_and_status_names() {
        unsafe {
            let table = [3u64, 0, 0, 3];
            let mut th: *mut DirestTable = ptr::null_mut();
            assert_eq!(direst_table_new(table.as_ptr(), 2, 2, &mut th), DIREST_OK);
            let mut mi = f64::NAN;
            assert_eq!(direst_mi_mean_fixed(th, 1.0, &mut mi), DIREST_OK);
            assert!(mi > 0.0);
            direst_table_free(th);

            let counts = [4u64, 4];
            let mut ch: *mut DirestCounts = ptr::null_mut();
            assert_eq!(direst_counts_new(counts.as_ptr(), 2, &mut ch), DIREST_OK);
            let mut t = f64::NAN;
            assert_eq!(direst_tsallis_mean_fixed(ch, 1.0, 2, 2.0, &mut t), DIREST_OK);
            assert!(t > 0.0 && t < 1.0);
            assert_eq!(
                direst_tsallis_mean_fixed(ch, 1.0, 2, 1.0, &mut t),
                DIREST_ERR_INVALID_ARGUMENT
            );
            direst_counts_free(ch);

            assert_eq!(CStr::from_ptr(direst_status_name(DIREST_OK)).to_str().unwrap(), "ok");
            assert_eq!(
                CStr::from_ptr(direst_status_name(DIREST_ERR_INFEASIBLE)).to_str().unwrap(),
                "infeasible"
            );
            // null-pointer paths
            assert_eq!(
                direst_entropy_mean_fixed(ptr::null(), 1.0, 2, &mut t),
                DIREST_ERR_NULL_POINTER
            );
            let mut out: *mut DirestCounts = ptr::null_mut();
            assert_eq!(direst_counts_new(ptr::null(), 3, &mut out), DIREST_ERR_NULL_POINTER);
            assert_eq!(direst_counts_new(ptr::null(), 0, &mut out), DIREST_OK);
            direst_counts_free(out);
        }
    }
}
