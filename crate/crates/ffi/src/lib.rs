//! C ABI for `waveguide-echo`.
//!
//! Lattices and unitaries are opaque heap handles. Every function returns a
//! [`WeStatus`]; on failure [`we_last_error_message`] describes the error for
//! the calling thread. Complex numbers cross the boundary as separate real and
//! imaginary `double` arrays. Matrices are written row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use nalgebra::DVector;
use num_complex::Complex64;
use waveguide_echo::lattice::band_energies;
use waveguide_echo::propagator::{echo_unitary, evolve_unitary};
use waveguide_echo::states::{fidelity_fock, fidelity_noon, fidelity_single, fidelity_w};
use waveguide_echo::{EchoProtocol, Error, LatticeSpec, SecondSegment, Unitary};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numeric = 3,
    Capacity = 4,
    Io = 5,
    Panic = 6,
}

/// Opaque lattice handle.
pub struct WeLattice {
    spec: LatticeSpec,
}

/// Opaque unitary handle.
pub struct WeUnitary {
    unitary: Unitary,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> WeStatus {
    match err {
        Error::Spec(_) | Error::Config { .. } => WeStatus::InvalidArgument,
        Error::Numeric(_) => WeStatus::Numeric,
        Error::Capacity(_) => WeStatus::Capacity,
        Error::Io(_) => WeStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WeStatus::Ok
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(&format!("null pointer: {name}"));
            WeStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(&msg);
            WeStatus::InvalidArgument
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            WeStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn input_slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output_slice<'a, T>(
    p: *mut T,
    len: usize,
    name: &'static str,
) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

fn new_lattice(spec: LatticeSpec, out_ptr: *mut *mut WeLattice) -> Result<(), Fail> {
    let slot = unsafe { out(out_ptr, "out")? };
    *slot = Box::into_raw(Box::new(WeLattice { spec }));
    Ok(())
}

fn new_unitary(unitary: Unitary, out_ptr: *mut *mut WeUnitary) -> Result<(), Fail> {
    let slot = unsafe { out(out_ptr, "out")? };
    *slot = Box::into_raw(Box::new(WeUnitary { unitary }));
    Ok(())
}

/// Message for the last failed call on this thread. Empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn we_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn we_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Chain of `num_couplings + 1` sites with detuning `delta`.
///
/// # Safety
/// `couplings` must point to `num_couplings` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_lattice_chain_new(
    couplings: *const f64,
    num_couplings: usize,
    delta: f64,
    out: *mut *mut WeLattice,
) -> WeStatus {
    guard(|| {
        let k = input_slice(couplings, num_couplings, "couplings")?;
        new_lattice(LatticeSpec::chain(k.to_vec(), delta)?, out)
    })
}

/// `rows × cols` grid. Couplings list horizontal bonds row by row, then
/// vertical bonds row by row.
///
/// # Safety
/// `couplings` must point to `num_couplings` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_lattice_grid_new(
    rows: usize,
    cols: usize,
    couplings: *const f64,
    num_couplings: usize,
    delta: f64,
    out: *mut *mut WeLattice,
) -> WeStatus {
    guard(|| {
        let k = input_slice(couplings, num_couplings, "couplings")?;
        new_lattice(LatticeSpec::grid(rows, cols, k.to_vec(), delta)?, out)
    })
}

/// # Safety
/// `lattice` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn we_lattice_free(lattice: *mut WeLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_lattice_dim(lattice: *const WeLattice, out: *mut usize) -> WeStatus {
    guard(|| {
        let l = deref(lattice, "lattice")?;
        *self::out(out, "out")? = l.spec.num_sites();
        Ok(())
    })
}

/// New lattice with the detuning sign reversed.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_lattice_flip_detuning(
    lattice: *const WeLattice,
    out: *mut *mut WeLattice,
) -> WeStatus {
    guard(|| {
        let l = deref(lattice, "lattice")?;
        new_lattice(l.spec.flip_detuning(), out)
    })
}

/// Writes the real symmetric Hamiltonian, row-major, into `buf` of length
/// `len` (must be at least dim²).
///
/// # Safety
/// `lattice` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn we_hamiltonian(
    lattice: *const WeLattice,
    buf: *mut f64,
    len: usize,
) -> WeStatus {
    guard(|| {
        let l = deref(lattice, "lattice")?;
        let h = l.spec.hamiltonian()?;
        let n = h.dim();
        if len < n * n {
            return Err(Fail::Arg(format!(
                "buffer holds {len} values, need {}",
                n * n
            )));
        }
        let buf = output_slice(buf, len, "buf")?;
        for r in 0..n {
            for c in 0..n {
                buf[r * n + c] = h.matrix()[(r, c)];
            }
        }
        Ok(())
    })
}

/// Propagator `exp(-i H z)` of the lattice.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_evolve_unitary(
    lattice: *const WeLattice,
    z: f64,
    out: *mut *mut WeUnitary,
) -> WeStatus {
    guard(|| {
        let l = deref(lattice, "lattice")?;
        new_unitary(evolve_unitary(&l.spec.hamiltonian()?, z)?, out)
    })
}

/// Two-segment echo of length `segment_length` each. The second segment uses
/// the detuning-flipped lattice, or `-H` when `full_reversal` is true.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_echo_unitary(
    lattice: *const WeLattice,
    segment_length: f64,
    full_reversal: bool,
    out: *mut *mut WeUnitary,
) -> WeStatus {
    guard(|| {
        let l = deref(lattice, "lattice")?;
        let second = if full_reversal {
            SecondSegment::FullReversal
        } else {
            SecondSegment::SublatticeExchange
        };
        let protocol =
            EchoProtocol::new(l.spec.clone(), segment_length)?.with_second_segment(second);
        new_unitary(echo_unitary(&protocol)?, out)
    })
}

/// # Safety
/// `unitary` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn we_unitary_free(unitary: *mut WeUnitary) {
    if !unitary.is_null() {
        drop(Box::from_raw(unitary));
    }
}

/// # Safety
/// `unitary` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_unitary_dim(unitary: *const WeUnitary, out: *mut usize) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        *self::out(out, "out")? = u.unitary.dim();
        Ok(())
    })
}

/// Amplitude at `row` for unit input at `col`.
///
/// # Safety
/// `unitary` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_unitary_entry(
    unitary: *const WeUnitary,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let n = u.unitary.dim();
        if row >= n || col >= n {
            return Err(Fail::Arg(format!(
                "entry ({row}, {col}) outside {n}x{n} unitary"
            )));
        }
        let z = u.unitary.entry(row, col);
        *out(re, "re")? = z.re;
        *out(im, "im")? = z.im;
        Ok(())
    })
}

/// Copies the unitary, row-major, into `re` and `im` (each at least dim²).
///
/// # Safety
/// `unitary` must be a live handle; `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn we_unitary_copy(
    unitary: *const WeUnitary,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let n = u.unitary.dim();
        if len < n * n {
            return Err(Fail::Arg(format!(
                "buffers hold {len} values, need {}",
                n * n
            )));
        }
        let re = output_slice(re, len, "re")?;
        let im = output_slice(im, len, "im")?;
        for r in 0..n {
            for c in 0..n {
                let z = u.unitary.entry(r, c);
                re[r * n + c] = z.re;
                im[r * n + c] = z.im;
            }
        }
        Ok(())
    })
}

/// Single-photon fidelity for the input amplitudes `re + i im` (length `len`
/// equal to the unitary dimension; need not be normalized).
///
/// # Safety
/// `unitary` must be a live handle; `re`, `im` must hold `len` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_fidelity_single(
    unitary: *const WeUnitary,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut f64,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let re = input_slice(re, len, "re")?;
        let im = input_slice(im, len, "im")?;
        let alpha =
            DVector::from_iterator(len, re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)));
        *self::out(out, "out")? = fidelity_single(&u.unitary, &alpha)?;
        Ok(())
    })
}

/// Fidelity of `photons` photons launched into `site`.
///
/// # Safety
/// `unitary` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_fidelity_fock(
    unitary: *const WeUnitary,
    site: usize,
    photons: u32,
    out: *mut f64,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        *self::out(out, "out")? = fidelity_fock(&u.unitary, site, photons)?;
        Ok(())
    })
}

/// Fidelity of the NOON state on `site1`, `site2` with relative phase `phase`.
///
/// # Safety
/// `unitary` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_fidelity_noon(
    unitary: *const WeUnitary,
    site1: usize,
    site2: usize,
    photons: u32,
    phase: f64,
    out: *mut f64,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        *self::out(out, "out")? = fidelity_noon(&u.unitary, site1, site2, photons, phase)?;
        Ok(())
    })
}

/// Fidelity of the single-photon W state over `num_sites` sites.
///
/// # Safety
/// `unitary` must be a live handle; `sites` must hold `num_sites` values;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_fidelity_w(
    unitary: *const WeUnitary,
    sites: *const usize,
    num_sites: usize,
    out: *mut f64,
) -> WeStatus {
    guard(|| {
        let u = deref(unitary, "unitary")?;
        let sites = input_slice(sites, num_sites, "sites")?;
        *self::out(out, "out")? = fidelity_w(&u.unitary, sites)?;
        Ok(())
    })
}

/// Upper and lower band energies of the uniform binary chain at Bloch
/// momentum `q`.
///
/// # Safety
/// `upper` and `lower` must be writable.
#[no_mangle]
pub unsafe extern "C" fn we_band_energies(
    kappa: f64,
    delta: f64,
    q: f64,
    upper: *mut f64,
    lower: *mut f64,
) -> WeStatus {
    guard(|| {
        let (p, m) = band_energies(kappa, delta, q);
        *out(upper, "upper")? = p;
        *out(lower, "lower")? = m;
        Ok(())
    })
}
