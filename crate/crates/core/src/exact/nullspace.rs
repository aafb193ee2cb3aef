use super::complex::CMatrix;
use super::precision::{PrecisionConfig, Real};
use crate::error::{Error, Result};
use num_rational::Rational64;

/// Cap on denominators produced by continued-fraction reconstruction.
pub const DEFAULT_MAX_DENOMINATOR: i64 = 1_000_000;

/// Rational basis of the (real) nullspace of a complex matrix.
///
/// The complex system M v = 0 over real unknowns v becomes the stacked
/// real system [Re M; Im M] v = 0. Gauss-Jordan elimination with
/// magnitude pivoting yields the canonical echelon basis; when the
/// nullspace is spanned by rational vectors (the situation this crate
/// cares about: commutants spanned by integer matrices) the echelon
/// basis is itself rational, and continued fractions recover it exactly.
/// Every reconstructed vector is re-verified against M before being
/// returned.
pub fn nullspace_basis(m: &CMatrix, cfg: &PrecisionConfig) -> Result<Vec<Vec<Rational64>>> {
    let cols = m.cols();
    let mut a: Vec<Vec<Real>> = Vec::with_capacity(2 * m.rows());
    for i in 0..m.rows() {
        a.push(m.row(i).iter().map(|c| c.re.clone()).collect());
        a.push(m.row(i).iter().map(|c| c.im.clone()).collect());
    }
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.clone().abs().to_f64())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        // zero map: the whole space, as unit vectors
        return Ok((0..cols)
            .map(|j| {
                let mut v = vec![Rational64::new(0, 1); cols];
                v[j] = Rational64::new(1, 1);
                v
            })
            .collect());
    }

    let pivot_tol = cfg.null_tol * scale;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut free_cols: Vec<usize> = Vec::new();
    let mut prow = 0usize;
    for col in 0..cols {
        // best remaining row for this column
        let mut best: Option<(usize, f64)> = None;
        for r in prow..a.len() {
            let mag = a[r][col].clone().abs().to_f64();
            if best.map(|(_, b)| mag > b).unwrap_or(true) {
                best = Some((r, mag));
            }
        }
        match best {
            Some((r, mag)) if mag > pivot_tol => {
                a.swap(prow, r);
                let p = a[prow][col].clone();
                for x in a[prow].iter_mut() {
                    *x /= &p;
                }
                for r2 in 0..a.len() {
                    if r2 == prow {
                        continue;
                    }
                    let f = a[r2][col].clone();
                    if f.clone().abs().to_f64() == 0.0 {
                        continue;
                    }
                    for c2 in 0..cols {
                        let delta = Real::with_val(f.prec(), &f * &a[prow][c2]);
                        a[r2][c2] -= delta;
                    }
                }
                pivots.push((prow, col));
                prow += 1;
            }
            _ => free_cols.push(col),
        }
    }

    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut v = vec![Rational64::new(0, 1); cols];
        v[f] = Rational64::new(1, 1);
        for &(r, pc) in &pivots {
            let x = Real::with_val(a[r][f].prec(), -&a[r][f]);
            let q = reconstruct_rational(&x, DEFAULT_MAX_DENOMINATOR, cfg.null_tol)
                .ok_or_else(|| {
                    Error::ReconstructionFailed(format!(
                        "entry {} has no rational approximation with denominator <= {}",
                        x.to_f64(),
                        DEFAULT_MAX_DENOMINATOR
                    ))
                })?;
            v[pc] = q;
        }
        verify_in_nullspace(m, &v, cfg)?;
        basis.push(v);
    }
    Ok(basis)
}

/// || M v || <= null_tol * || v || for a candidate rational vector.
pub fn verify_in_nullspace(
    m: &CMatrix,
    v: &[Rational64],
    cfg: &PrecisionConfig,
) -> Result<()> {
    let vr: Vec<Real> = v.iter().map(|q| cfg.ratio(*q)).collect();
    let vnorm: Real = vr
        .iter()
        .fold(cfg.zero(), |acc, x| acc + Real::with_val(x.prec(), x * x))
        .sqrt();
    let mut res = cfg.zero();
    for i in 0..m.rows() {
        let mut re = cfg.zero();
        let mut im = cfg.zero();
        for (j, x) in vr.iter().enumerate() {
            let c = m.get(i, j);
            re += Real::with_val(x.prec(), &c.re * x);
            im += Real::with_val(x.prec(), &c.im * x);
        }
        res += re.clone() * &re + im.clone() * &im;
    }
    let res = res.sqrt();
    let bound = cfg.real_f64(cfg.null_tol) * &vnorm;
    if res <= bound {
        Ok(())
    } else {
        Err(Error::ReconstructionFailed(format!(
            "reconstructed vector has residual {:e} > {:e}",
            res.to_f64(),
            bound.to_f64()
        )))
    }
}

/// Best rational p/q with q <= max_den and |x - p/q| <= tol, by the
/// continued fraction of x. None when no convergent is close enough.
pub fn reconstruct_rational(x: &Real, max_den: i64, tol: f64) -> Option<Rational64> {
    let mut rem = x.clone();
    // convergents p_k / q_k
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (1, 0, 0, 1);
    for _ in 0..64 {
        let fl = rem.clone().floor();
        let a = fl.to_integer()?.to_i128()?;
        let p = a.checked_mul(p0)?.checked_add(p1)?;
        let q = a.checked_mul(q0)?.checked_add(q1)?;
        if q > max_den as i128 {
            return None;
        }
        let approx = Real::with_val(x.prec(), p) / Real::with_val(x.prec(), q);
        let err = Real::with_val(x.prec(), x - &approx).abs();
        if err <= tol {
            return Some(Rational64::new(i64::try_from(p).ok()?, i64::try_from(q).ok()?));
        }
        p1 = p0;
        q1 = q0;
        p0 = p;
        q0 = q;
        let frac = rem - Real::with_val(x.prec(), a);
        if frac.clone().abs().to_f64() == 0.0 {
            return None;
        }
        rem = frac.recip();
    }
    None
}
