//! SU(n) level-k modular data via the Weyl-determinant form of the
//! S-matrix. Entries are n x n determinants of root-of-unity matrices,
//! so a single row of S costs (labels) small determinants and the full
//! matrix is only materialized for moderate sizes.

use super::{Label, ModularData, SStore, SIZE_CAP};
use crate::error::{Error, Result};
use crate::exact::{CMatrix, Complex, PrecisionConfig, Real, UnitRoots};
use num_rational::Rational64;
use std::collections::HashMap;
use std::sync::RwLock;

/// Dense S storage above this label count would be slow to build and
/// heavy to hold; switch to row-on-demand.
const DENSE_MAX: usize = 300;

/// Precomputed ingredients for S-matrix entries.
///
/// With l_a(w) = sum_{j>=a} w_j + (n - a) and sigma = sum_a l_a, the
/// entry is
///   S_wv = i^{n(n-1)/2} / (sqrt(n) q^{(n-1)/2})
///          * e^{2 pi i sigma(w) sigma(v) / (n q)}
///          * det_{a,b}[ e^{-2 pi i l_a(w) l_b(v) / q} ],   q = k + n.
pub(crate) struct SunTables {
    n: usize,
    q: i64,
    ells: Vec<Vec<i64>>,
    sigma: Vec<i64>,
    roots_q: UnitRoots,
    roots_pref: UnitRoots,
    inv_mag: Real,
}

impl SunTables {
    fn new(cfg: &PrecisionConfig, n: usize, k: i64, weights: &[Vec<i64>]) -> Self {
        let q = k + n as i64;
        let ells: Vec<Vec<i64>> = weights
            .iter()
            .map(|w| {
                (1..=n)
                    .map(|a| {
                        let tail: i64 = w[(a - 1).min(w.len())..].iter().sum();
                        tail + (n - a) as i64
                    })
                    .collect()
            })
            .collect();
        let sigma = ells.iter().map(|l| l.iter().sum()).collect();
        let mut inv_mag = cfg.sqrt_u64(n as u64);
        let sq = cfg.sqrt_u64(q as u64);
        for _ in 0..(n - 1) {
            inv_mag *= &sq;
        }
        inv_mag = Real::with_val(cfg.bits(), 1u32) / inv_mag;
        Self {
            n,
            q,
            ells,
            sigma,
            roots_q: UnitRoots::new(cfg, q),
            roots_pref: UnitRoots::new(cfg, 8 * n as i64 * q),
            inv_mag,
        }
    }

    fn entry(&self, cfg: &PrecisionConfig, i: usize, j: usize) -> Complex {
        let n = self.n;
        let mut mat: Vec<Vec<Complex>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| self.roots_q.phase(-self.ells[i][a] * self.ells[j][b]).clone())
                    .collect()
            })
            .collect();
        let det = det_in_place(cfg, &mut mat);
        let pref_idx =
            (n * (n - 1)) as i64 * n as i64 * self.q + 8 * self.sigma[i] * self.sigma[j];
        let pref = self.roots_pref.phase(pref_idx);
        (pref * &det).scale(&self.inv_mag)
    }

    pub(crate) fn row(&self, cfg: &PrecisionConfig, i: usize) -> Vec<Complex> {
        (0..self.ells.len()).map(|j| self.entry(cfg, i, j)).collect()
    }
}

/// LU determinant with partial pivoting. Sizes here are at most the rank
/// plus one, so cubic cost is irrelevant; pivoting keeps the evaluation
/// stable when entries nearly cancel.
fn det_in_place(cfg: &PrecisionConfig, m: &mut [Vec<Complex>]) -> Complex {
    let n = m.len();
    let mut det = Complex::one(cfg);
    let mut negate = false;
    for col in 0..n {
        let mut p = col;
        let mut best = m[col][col].norm_sqr();
        for r in (col + 1)..n {
            let v = m[r][col].norm_sqr();
            if v > best {
                best = v;
                p = r;
            }
        }
        if p != col {
            m.swap(col, p);
            negate = !negate;
        }
        let piv = m[col][col].clone();
        if piv.abs().to_f64() == 0.0 {
            return Complex::zero(cfg);
        }
        det = &det * &piv;
        for r in (col + 1)..n {
            let f = m[r][col].div(&piv);
            for c2 in (col + 1)..n {
                let t = &f * &m[col][c2];
                m[r][c2] -= &t;
            }
        }
    }
    if negate {
        -&det
    } else {
        det
    }
}

/// All Dynkin-label tuples of the given rank with sum at most k, in
/// ascending lexicographic order (vacuum first).
fn weights_lex(rank: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    loop {
        out.push(cur.clone());
        let mut advanced = false;
        for i in (0..rank).rev() {
            cur[i] += 1;
            for v in cur[i + 1..].iter_mut() {
                *v = 0;
            }
            if cur.iter().sum::<i64>() <= k {
                advanced = true;
                break;
            }
            cur[i] = 0;
        }
        if !advanced {
            return out;
        }
    }
}

/// C(k + rank, rank) without materializing anything.
fn label_count(rank: u32, k: u32) -> Option<usize> {
    let mut num: u128 = 1;
    for i in 1..=rank as u128 {
        num = num.checked_mul(k as u128 + i)? / i;
    }
    usize::try_from(num).ok()
}

/// h_w = (w, w + 2 rho) / (2 (k + n)) expanded in Dynkin labels through
/// the inverse A_{n-1} Cartan matrix.
fn conformal_weight(n: i64, k: i64, w: &[i64]) -> Rational64 {
    let mut num = 0i64;
    for i in 1..n {
        for j in 1..n {
            num += (n * i.min(j) - i * j) * w[(i - 1) as usize] * (w[(j - 1) as usize] + 2);
        }
    }
    Rational64::new(num, 2 * n * (k + n))
}

fn weight_name(w: &[i64]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Modular data of SU(n) at level k. Labels are the level-k dominant
/// weights in lexicographic Dynkin order; conjugation reverses each
/// weight; c = k(n^2 - 1)/(k + n).
pub fn su_n_k(n: u32, k: u32, cfg: &PrecisionConfig) -> Result<ModularData> {
    if n < 2 || k < 1 {
        return Err(Error::BadInput(format!(
            "need n >= 2 and k >= 1, got n = {n}, k = {k}"
        )));
    }
    let count = label_count(n - 1, k).unwrap_or(usize::MAX);
    if count > SIZE_CAP {
        return Err(Error::SizeCap {
            count,
            cap: SIZE_CAP,
        });
    }
    let rank = (n - 1) as usize;
    let weights = weights_lex(rank, k as i64);
    debug_assert_eq!(weights.len(), count);

    let labels: Vec<Label> = weights
        .iter()
        .enumerate()
        .map(|(index, w)| Label {
            index,
            name: weight_name(w),
            weight: w.clone(),
            h: conformal_weight(n as i64, k as i64, w),
        })
        .collect();

    let mut pos: HashMap<&[i64], usize> = HashMap::new();
    for (i, w) in weights.iter().enumerate() {
        pos.insert(w.as_slice(), i);
    }
    let conj: Vec<usize> = weights
        .iter()
        .map(|w| {
            let rev: Vec<i64> = w.iter().rev().copied().collect();
            pos[rev.as_slice()]
        })
        .collect();

    let c = Rational64::new(k as i64 * (n as i64 * n as i64 - 1), k as i64 + n as i64);
    let tables = SunTables::new(cfg, n as usize, k as i64, &weights);

    let store = if count <= DENSE_MAX {
        // Entries are symmetric in (i, j) by construction, so only the
        // lower triangle is computed.
        let mut tri: Vec<Vec<Complex>> = Vec::with_capacity(count);
        for i in 0..count {
            tri.push((0..=i).map(|j| tables.entry(cfg, i, j)).collect());
        }
        SStore::Dense(CMatrix::from_fn(count, count, |i, j| {
            if j <= i {
                tri[i][j].clone()
            } else {
                tri[j][i].clone()
            }
        }))
    } else {
        SStore::Lazy {
            tables,
            cache: RwLock::new(HashMap::new()),
        }
    };

    ModularData::assemble(
        format!("SU({})_{}", n, k),
        labels,
        c,
        conj,
        cfg.clone(),
        store,
    )
}
