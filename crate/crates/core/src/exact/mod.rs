//! Numeric kernel: configurable-precision reals and complexes, tolerance
//! rounding, nullspaces with rational reconstruction, integer lattices,
//! and permutation-sum decomposition.

pub mod precision;
pub mod complex;
pub mod intmat;
pub mod nullspace;
pub mod lattice;
pub mod birkhoff;

pub use precision::{PrecisionConfig, Real};
pub use complex::{CMatrix, Complex, UnitRoots};
pub use intmat::IntMatrix;

use crate::error::{Error, Result};

/// Round to the nearest integer, failing loudly if the distance exceeds
/// the configured tolerance. Exact half-integers always fail.
pub fn nearest_integer(x: &Real, cfg: &PrecisionConfig) -> Result<i64> {
    let rounded = x.clone().round();
    let nearest = rounded
        .to_integer()
        .and_then(|n| n.to_i64())
        .ok_or_else(|| Error::BadInput(format!("{} out of i64 range", x)))?;
    let distance = Real::with_val(x.prec(), x - nearest).abs();
    if distance <= cfg.int_tol {
        Ok(nearest)
    } else {
        Err(Error::NotAnInteger {
            value: x.to_f64(),
            nearest,
            distance: distance.to_f64(),
            tolerance: cfg.int_tol,
        })
    }
}

/// Round a complex value expected to be a real integer.
pub fn nearest_integer_complex(z: &Complex, cfg: &PrecisionConfig) -> Result<i64> {
    let im = z.im.clone().abs();
    if im.clone().to_f64() > cfg.int_tol {
        return Err(Error::NotAnInteger {
            value: z.re.to_f64(),
            nearest: 0,
            distance: im.to_f64(),
            tolerance: cfg.int_tol,
        });
    }
    nearest_integer(&z.re, cfg)
}
