use super::precision::{PrecisionConfig, Real};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// Dense integer matrix with exact i64 entries. Multiplication skips
/// zero entries, which keeps products of the big sparse invariant
/// matrices (1716 x 1716 with a few thousand nonzeros) cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Permutation matrix with entry 1 at (i, perm[i]).
    pub fn from_permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        let e = &mut self.data[i * self.cols + j];
        *e = e.checked_add(v).expect("integer matrix entry overflow");
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data.iter().enumerate().filter_map(move |(k, &v)| {
            (v != 0).then(|| (k / self.cols, k % self.cols, v))
        })
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.iter_nonzero() {
            out.set(j, i, v);
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.checked_add(*b).expect("overflow in add"))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.checked_sub(*b).expect("overflow in sub"))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: i64) -> Self {
        let data = self
            .data
            .iter()
            .map(|a| a.checked_mul(s).expect("overflow in scale"))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (j, &b) in rhs.row(k).iter().enumerate() {
                    if b != 0 {
                        out.add_at(i, j, a.checked_mul(b).expect("overflow in mul"));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> i64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Sum of squared entries, i.e. tr(M^T M).
    pub fn sq_sum(&self) -> i64 {
        self.iter_nonzero()
            .map(|(_, _, v)| v.checked_mul(v).expect("overflow"))
            .fold(0i64, |acc, x| acc.checked_add(x).expect("overflow"))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0)
    }

    /// Returns the permutation i -> j when the matrix is exactly a
    /// permutation matrix.
    pub fn as_permutation(&self) -> Result<Vec<usize>> {
        if self.rows != self.cols {
            return Err(Error::NotAPermutation);
        }
        let mut perm = vec![usize::MAX; self.rows];
        let mut seen = vec![false; self.cols];
        for i in 0..self.rows {
            let mut hit = None;
            for j in 0..self.cols {
                match self.get(i, j) {
                    0 => {}
                    1 if hit.is_none() => hit = Some(j),
                    _ => return Err(Error::NotAPermutation),
                }
            }
            let j = hit.ok_or(Error::NotAPermutation)?;
            if seen[j] {
                return Err(Error::NotAPermutation);
            }
            seen[j] = true;
            perm[i] = j;
        }
        Ok(perm)
    }

    /// Characteristic polynomial coefficients c_0..c_n of det(xI - M),
    /// monic, computed exactly (Faddeev-LeVerrier over BigInt; every
    /// division in the recurrence is exact).
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let a: Vec<BigInt> = self.data.iter().map(|&v| BigInt::from(v)).collect();
        let idx = |i: usize, j: usize| i * n + j;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::from(1);
        // m = A, c_{n-1} = -tr(A); iterate m <- A (m + c I)
        let mut m = a.clone();
        let mut c_prev = -(0..n).map(|i| m[idx(i, i)].clone()).sum::<BigInt>();
        if n > 0 {
            coeffs[n - 1] = c_prev.clone();
        }
        for k in 2..=n {
            // m <- A * (m + c_prev * I)
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[idx(i, i)] += &c_prev;
            }
            let mut next = vec![BigInt::zero(); n * n];
            for i in 0..n {
                for l in 0..n {
                    if a[idx(i, l)].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !shifted[idx(l, j)].is_zero() {
                            let prod = &a[idx(i, l)] * &shifted[idx(l, j)];
                            next[idx(i, j)] += prod;
                        }
                    }
                }
            }
            m = next;
            let tr: BigInt = (0..n).map(|i| m[idx(i, i)].clone()).sum();
            let ck = -tr / BigInt::from(k as i64);
            coeffs[n - k] = ck.clone();
            c_prev = ck;
        }
        coeffs
    }

    /// Multiplicity of `x` as an eigenvalue, read off from how many
    /// derivatives of the exact characteristic polynomial vanish at x.
    pub fn eigen_multiplicity(&self, x: &Real, cfg: &PrecisionConfig) -> usize {
        let coeffs = self.charpoly();
        let n = self.rows;
        let mut mult = 0;
        let mut current: Vec<BigInt> = coeffs;
        for _ in 0..=n {
            let (value, scale) = eval_poly(&current, x, cfg);
            let thresh = cfg.real_f64(cfg.null_tol) * &scale;
            if value.clone().abs() > thresh {
                return mult;
            }
            mult += 1;
            current = derive_poly(&current);
            if current.is_empty() {
                return mult;
            }
        }
        mult
    }
}

fn eval_poly(coeffs: &[BigInt], x: &Real, cfg: &PrecisionConfig) -> (Real, Real) {
    // Horner, plus a same-shape magnitude accumulator for thresholding.
    let mut v = cfg.zero();
    let mut scale = cfg.real_f64(1.0);
    for c in coeffs.iter().rev() {
        let cr = big_to_real(c, cfg);
        v = v * x + &cr;
        scale = scale * Real::with_val(cfg.bits(), x.clone().abs()).max(&cfg.real_f64(1.0))
            + cr.abs();
    }
    (v, scale)
}

fn derive_poly(coeffs: &[BigInt]) -> Vec<BigInt> {
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k as i64))
        .collect()
}

pub(crate) fn big_to_real(b: &BigInt, cfg: &PrecisionConfig) -> Real {
    // Exact for magnitudes below the mantissa width, which holds for all
    // characteristic polynomials this crate meets; fall back to string
    // parsing beyond i64.
    match i64::try_from(b.clone()) {
        Ok(v) => cfg.real_i64(v),
        Err(_) => Real::with_val(
            cfg.bits(),
            Real::parse(b.to_string()).expect("bigint parses as float"),
        ),
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        if self.rows <= 40 && self.cols <= 40 {
            for i in 0..self.rows {
                writeln!(f, "  {:?}", self.row(i))?;
            }
        }
        Ok(())
    }
}
