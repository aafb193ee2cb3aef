use super::precision::{PrecisionConfig, Real};
use num_rational::Rational64;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Complex number over the configurable-precision reals.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(cfg: &PrecisionConfig) -> Self {
        Self::new(cfg.zero(), cfg.zero())
    }

    pub fn one(cfg: &PrecisionConfig) -> Self {
        Self::new(cfg.real_i64(1), cfg.zero())
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::new(re.prec());
        Self { re, im }
    }

    /// e^{2 pi i t} for an exact rational number of turns t.
    pub fn from_phase_turns(cfg: &PrecisionConfig, t: Rational64) -> Self {
        let theta = cfg.pi() * 2u32 * cfg.ratio(t);
        let (sin, cos) = theta.sin_cos(Real::new(cfg.bits()));
        Self { re: cos, im: sin }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Real::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        Real::with_val(p, &self.re * &self.re) + Real::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// Argument in (-pi, pi], via atan2.
    pub fn arg(&self) -> Real {
        self.im.clone().atan2(&self.re)
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec().max(s.prec());
        Self {
            re: Real::with_val(p, &self.re * s),
            im: Real::with_val(p, &self.im * s),
        }
    }

    pub fn div_real(&self, s: &Real) -> Self {
        let p = self.prec().max(s.prec());
        Self {
            re: Real::with_val(p, &self.re / s),
            im: Real::with_val(p, &self.im / s),
        }
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        num.div_real(&d)
    }

    pub fn approx_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.approx_f64();
        write!(f, "{:.6}{:+.6}i", re, im)
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        Complex {
            re: Real::with_val(p, &self.re + &rhs.re),
            im: Real::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        Complex {
            re: Real::with_val(p, &self.re - &rhs.re),
            im: Real::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        let re = Real::with_val(p, &self.re * &rhs.re) - Real::with_val(p, &self.im * &rhs.im);
        let im = Real::with_val(p, &self.re * &rhs.im) + Real::with_val(p, &self.im * &rhs.re);
        Complex { re, im }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: Real::with_val(self.re.prec(), -&self.re),
            im: Real::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// Lookup table of e^{2 pi i m / n}, the workhorse for S-matrix entries
/// whose phases are integers modulo a fixed root order.
pub struct UnitRoots {
    n: i64,
    roots: Vec<Complex>,
}

impl UnitRoots {
    pub fn new(cfg: &PrecisionConfig, n: i64) -> Self {
        assert!(n > 0);
        let roots = (0..n)
            .map(|m| Complex::from_phase_turns(cfg, Rational64::new(m, n)))
            .collect();
        Self { n, roots }
    }

    pub fn order(&self) -> i64 {
        self.n
    }

    /// e^{2 pi i k / n}, any integer k.
    pub fn phase(&self, k: i64) -> &Complex {
        &self.roots[k.rem_euclid(self.n) as usize]
    }
}

/// Dense complex matrix, row major. Sizes stay small (label counts), so
/// the operations here are straightforward loops.
#[derive(Clone)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zero(cfg: &PrecisionConfig, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(cfg); rows * cols],
        }
    }

    pub fn identity(cfg: &PrecisionConfig, n: usize) -> Self {
        let mut m = Self::zero(cfg, n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Complex::one(cfg);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let cfg_bits = self.data.first().map(|c| c.prec()).unwrap_or(64);
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex::new(Real::new(cfg_bits), Real::new(cfg_bits));
                for k in 0..self.cols {
                    acc += &(self.get(i, k) * rhs.get(k, j));
                }
                out.push(acc);
            }
        }
        Self {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    /// Largest |entry|, as f64 (used against f64 tolerance bounds).
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|c| c.abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs().to_f64())
            .fold(0.0, f64::max)
    }
}
