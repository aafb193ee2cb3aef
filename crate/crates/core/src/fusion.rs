//! The Verlinde fusion ring: integer sector vectors (possibly signed),
//! fusion products with per-row caching, dimensions, and the hom-count
//! formula for products of alpha-induced sectors.

use crate::error::{Error, Result};
use crate::exact::{nearest_integer_complex, Complex, IntMatrix, Real};
use crate::invariants::ModularInvariant;
use crate::modular::ModularData;
use num_rational::Rational64;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Integer combination of sectors. Negative coefficients are allowed and
/// mark virtual (formal difference) combinations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorVector {
    coeffs: Vec<i64>,
}

impl SectorVector {
    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![0; n],
        }
    }

    pub fn label(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coeffs[i] = 1;
        v
    }

    /// Sum of the given labels, each with coefficient +1 per occurrence.
    pub fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut v = Self::zero(n);
        for &i in idx {
            v.coeffs[i] += 1;
        }
        v
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when every coefficient is non-negative (an actual sector).
    pub fn is_physical(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.len(), rhs.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Plain bilinear form sum_nu u_nu v_nu. For physical irreducible
    /// arguments this is the hom-count.
    pub fn pairing(&self, rhs: &Self) -> i64 {
        assert_eq!(self.len(), rhs.len());
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Fusion coefficients over one modular datum, computed from S by the
/// Verlinde formula and cached one (lambda, mu) row at a time.
pub struct FusionRing {
    md: Arc<ModularData>,
    cache: RwLock<HashMap<(usize, usize), Arc<Vec<i64>>>>,
}

impl FusionRing {
    pub fn new(md: Arc<ModularData>) -> Self {
        Self {
            md,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn md(&self) -> &ModularData {
        &self.md
    }

    pub fn md_arc(&self) -> Arc<ModularData> {
        Arc::clone(&self.md)
    }

    pub fn n(&self) -> usize {
        self.md.n()
    }

    fn fusion_row(&self, la: usize, mu: usize) -> Result<Arc<Vec<i64>>> {
        let key = (la.min(mu), la.max(mu));
        if let Some(r) = self.cache.read().unwrap().get(&key) {
            return Ok(Arc::clone(r));
        }
        let row = Arc::new(self.compute_row(key.0, key.1)?);
        self.cache
            .write()
            .unwrap()
            .insert(key, Arc::clone(&row));
        Ok(row)
    }

    /// N_{la,mu}^nu = sum_rho S_{la,rho} S_{mu,rho} conj(S_{nu,rho}) / S_{0,rho}.
    fn compute_row(&self, la: usize, mu: usize) -> Result<Vec<i64>> {
        let md = &self.md;
        let cfg = md.cfg();
        let n = md.n();
        let row_l = md.s_row(la);
        let row_m = md.s_row(mu);
        let row_0 = md.s_row(0);
        let w: Vec<Complex> = (0..n)
            .map(|r| (&row_l[r] * &row_m[r]).div_real(&row_0[r].re))
            .collect();
        drop(row_l);
        drop(row_m);
        drop(row_0);
        let mut acc = vec![Complex::zero(cfg); n];
        for rho in 0..n {
            let row_r = md.s_row(rho);
            // S_{nu,rho} = S_{rho,nu}, so row rho supplies column rho of
            // the final contraction.
            for (nu, a) in acc.iter_mut().enumerate() {
                *a += &(&w[rho] * &row_r[nu].conj());
            }
        }
        let mut out = Vec::with_capacity(n);
        for (nu, a) in acc.iter().enumerate() {
            let v = nearest_integer_complex(a, cfg)?;
            if v < 0 {
                return Err(Error::BadInput(format!(
                    "negative fusion coefficient N_{{{la},{mu}}}^{nu} = {v}"
                )));
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn verlinde(&self, la: usize, mu: usize) -> Result<SectorVector> {
        Ok(SectorVector {
            coeffs: self.fusion_row(la, mu)?.as_ref().clone(),
        })
    }

    /// Bilinear extension of the fusion product to signed vectors.
    pub fn fuse(&self, u: &SectorVector, v: &SectorVector) -> Result<SectorVector> {
        let n = self.n();
        assert_eq!(u.len(), n);
        assert_eq!(v.len(), n);
        let mut out = vec![0i64; n];
        for (i, a) in u.support() {
            for (j, b) in v.support() {
                let row = self.fusion_row(i, j)?;
                let f = a * b;
                for (nu, &m) in row.iter().enumerate() {
                    if m != 0 {
                        out[nu] += f * m;
                    }
                }
            }
        }
        Ok(SectorVector { coeffs: out })
    }

    pub fn conjugate(&self, u: &SectorVector) -> SectorVector {
        let n = self.n();
        assert_eq!(u.len(), n);
        let mut out = vec![0i64; n];
        for (i, a) in u.support() {
            out[self.md.conj(i)] = a;
        }
        SectorVector { coeffs: out }
    }

    /// sum_nu u_nu d_nu.
    pub fn dim(&self, u: &SectorVector) -> Real {
        let cfg = self.md.cfg();
        let mut acc = cfg.zero();
        for (i, a) in u.support() {
            acc += Real::with_val(cfg.bits(), self.md.dim(i) * a);
        }
        acc
    }

    /// The matrix (G_nu)_{la,mu} = N_{nu,la}^mu acting on sector vectors.
    pub fn fusion_matrix(&self, nu: usize) -> Result<IntMatrix> {
        let n = self.n();
        let mut rows = Vec::with_capacity(n);
        for la in 0..n {
            rows.push(self.fusion_row(nu, la)?.as_ref().clone());
        }
        Ok(IntMatrix::from_rows(rows))
    }
}

/// Recompute the global invariants (sum d^2, z, c) from dimensions and
/// statistics phases and check c against the stored central charge mod 8.
pub fn global_data(ring: &FusionRing) -> Result<(Real, Complex, Rational64)> {
    let md = ring.md();
    let cfg = md.cfg();
    let total = md.global_dimension();
    let mut z = Complex::zero(cfg);
    for i in 0..md.n() {
        let omega = Complex::from_phase_turns(cfg, md.omega_turn(i));
        let d2 = Real::with_val(cfg.bits(), md.dim(i) * md.dim(i));
        z += &omega.scale(&d2);
    }
    let p = cfg.bits();
    let c_val = Real::with_val(p, 4 * &z.arg()) / cfg.pi();
    let diff = (cfg.ratio(md.central_charge()) - c_val) / 8u32;
    let frac = Real::with_val(p, &diff - &diff.clone().round());
    if Real::with_val(p, 8 * &frac).abs().to_f64() > cfg.residual_bound() {
        return Err(Error::ValidationFailed(
            "central charge disagrees with arg(z) mod 8".into(),
        ));
    }
    Ok((total, z, md.central_charge()))
}

/// Hom-count between products of alpha-induced sectors,
///   < alpha^+_la alpha^-_rho , alpha^+_mu alpha^-_sigma >
///     = sum_{nu,tau} N_{conj(mu) la}^nu N_{sigma conj(rho)}^tau Z_{nu,tau},
/// extended multilinearly to signed sector vectors.
pub fn alpha_hom(
    z: &ModularInvariant,
    ring: &FusionRing,
    left: (&SectorVector, &SectorVector),
    right: (&SectorVector, &SectorVector),
) -> Result<i64> {
    let u = ring.fuse(&ring.conjugate(right.0), left.0)?;
    let v = ring.fuse(right.1, &ring.conjugate(left.1))?;
    let mut acc = 0i64;
    for (nu, a) in u.support() {
        for (tau, b) in v.support() {
            let m = z.matrix().get(nu, tau);
            if m != 0 {
                acc += a * b * m;
            }
        }
    }
    Ok(acc)
}

/// Exact associativity spot-check on deterministically sampled triples.
pub fn associativity_check(ring: &FusionRing, samples: usize) -> Result<()> {
    let n = ring.n();
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as usize) % n
    };
    for _ in 0..samples {
        let (a, b, c) = (next(), next(), next());
        let ab = ring.verlinde(a, b)?;
        let bc = ring.verlinde(b, c)?;
        let lhs = ring.fuse(&ab, &SectorVector::label(n, c))?;
        let rhs = ring.fuse(&SectorVector::label(n, a), &bc)?;
        if lhs != rhs {
            return Err(Error::ValidationFailed(format!(
                "associativity fails on triple ({a},{b},{c})"
            )));
        }
    }
    Ok(())
}
