//! Modular data: sector labels with exact conformal weights, the S-matrix,
//! T as rational phases, quantum dimensions and the central charge.
//!
//! S-matrices are stored dense for small systems and row-on-demand for
//! large ones, so consumers should work row-wise where possible.

pub mod level_one;
pub mod sun;
pub mod zn;

pub use level_one::{level_one, LevelOneFamily};
pub use sun::su_n_k;
pub use zn::zn_anyon;

use crate::error::{Error, Result};
use crate::exact::{CMatrix, Complex, PrecisionConfig, Real};
use num_rational::Rational64;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

/// Hard ceiling on label counts, guarding against runaway inputs.
pub const SIZE_CAP: usize = 5000;

/// Above this many labels, validation samples rows instead of forming
/// full matrix products.
const FULL_VERIFY_MAX: usize = 120;

/// Reduce a rational to the half-open interval [0, 1).
pub fn mod1(r: Rational64) -> Rational64 {
    r - r.floor()
}

/// One sector of a rational theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub index: usize,
    pub name: String,
    /// Family-specific coordinates (Dynkin labels, group element, ...).
    pub weight: Vec<i64>,
    /// Conformal weight, exact.
    pub h: Rational64,
}

pub(crate) enum SStore {
    Dense(CMatrix),
    Lazy {
        tables: sun::SunTables,
        cache: RwLock<HashMap<usize, Arc<Vec<Complex>>>>,
    },
}

/// A row of S, either borrowed from a dense store or shared from the
/// on-demand cache.
pub enum SRow<'a> {
    Borrowed(&'a [Complex]),
    Shared(Arc<Vec<Complex>>),
}

impl std::ops::Deref for SRow<'_> {
    type Target = [Complex];
    fn deref(&self) -> &[Complex] {
        match self {
            SRow::Borrowed(r) => r,
            SRow::Shared(r) => r,
        }
    }
}

pub struct ModularData {
    name: String,
    labels: Vec<Label>,
    /// True central charge (not reduced mod 8).
    c: Rational64,
    conj: Vec<usize>,
    cfg: PrecisionConfig,
    store: SStore,
    dims: Vec<Real>,
    z: Complex,
    name_index: HashMap<String, usize>,
    weight_index: HashMap<Vec<i64>, usize>,
}

impl ModularData {
    /// Glue the pieces together, derive dimensions and z from the vacuum
    /// row, and refuse to return anything that fails validation.
    pub(crate) fn assemble(
        name: String,
        labels: Vec<Label>,
        c: Rational64,
        conj: Vec<usize>,
        cfg: PrecisionConfig,
        store: SStore,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::BadInput("no labels".into()));
        }
        if n > SIZE_CAP {
            return Err(Error::SizeCap {
                count: n,
                cap: SIZE_CAP,
            });
        }
        if conj.len() != n || conj[0] != 0 || (0..n).any(|i| conj[i] >= n || conj[conj[i]] != i) {
            return Err(Error::BadInput(
                "conjugation is not an involution fixing the vacuum".into(),
            ));
        }
        let mut name_index = HashMap::new();
        let mut weight_index = HashMap::new();
        for l in &labels {
            if name_index.insert(l.name.clone(), l.index).is_some() {
                return Err(Error::BadInput(format!("duplicate label name {}", l.name)));
            }
            weight_index.insert(l.weight.clone(), l.index);
        }
        let mut md = Self {
            name,
            labels,
            c,
            conj,
            z: Complex::zero(&cfg),
            dims: Vec::new(),
            cfg,
            store,
            name_index,
            weight_index,
        };
        let row0: Vec<Complex> = md.s_row(0).to_vec();
        let s00 = row0[0].re.clone();
        if !(s00.clone().to_f64() > 0.0) {
            return Err(Error::ValidationFailed(format!(
                "S_00 = {} is not positive",
                s00.to_f64()
            )));
        }
        md.dims = row0
            .iter()
            .map(|s| Real::with_val(s00.prec(), &s.re / &s00))
            .collect();
        let mut z = Complex::zero(&md.cfg);
        for i in 0..n {
            let omega = Complex::from_phase_turns(&md.cfg, md.omega_turn(i));
            let d2 = Real::with_val(md.dims[i].prec(), &md.dims[i] * &md.dims[i]);
            z += &omega.scale(&d2);
        }
        md.z = z;
        let report = verify_modular(&md, &md.cfg.clone());
        if !report.pass() {
            return Err(report.to_error());
        }
        Ok(md)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn index_of_weight(&self, w: &[i64]) -> Option<usize> {
        self.weight_index.get(w).copied()
    }

    pub fn cfg(&self) -> &PrecisionConfig {
        &self.cfg
    }

    pub fn h(&self, i: usize) -> Rational64 {
        self.labels[i].h
    }

    /// Statistics phase exponent: h mod 1, so omega = e^{2 pi i omega_turn}.
    pub fn omega_turn(&self, i: usize) -> Rational64 {
        mod1(self.labels[i].h)
    }

    /// True central charge. Only its value mod 8 is observable.
    pub fn central_charge(&self) -> Rational64 {
        self.c
    }

    /// T_lambda = e^{2 pi i t_turn} with t_turn = h - c/24 mod 1.
    pub fn t_turn(&self, i: usize) -> Rational64 {
        mod1(self.labels[i].h - self.c / 24)
    }

    pub fn t_entry(&self, i: usize) -> Complex {
        Complex::from_phase_turns(&self.cfg, self.t_turn(i))
    }

    pub fn dim(&self, i: usize) -> &Real {
        &self.dims[i]
    }

    pub fn dims(&self) -> &[Real] {
        &self.dims
    }

    /// Global dimension sum_lambda d_lambda^2 = 1/S_00^2.
    pub fn global_dimension(&self) -> Real {
        let mut acc = self.cfg.zero();
        for d in &self.dims {
            acc += Real::with_val(d.prec(), d * d);
        }
        acc
    }

    pub fn conj(&self, i: usize) -> usize {
        self.conj[i]
    }

    /// z = sum d_lambda^2 omega_lambda; arg(z) fixes c mod 8.
    pub fn z_value(&self) -> &Complex {
        &self.z
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.store, SStore::Lazy { .. })
    }

    pub fn s_row(&self, i: usize) -> SRow<'_> {
        match &self.store {
            SStore::Dense(m) => SRow::Borrowed(m.row(i)),
            SStore::Lazy { tables, cache } => {
                if let Some(r) = cache.read().unwrap().get(&i) {
                    return SRow::Shared(Arc::clone(r));
                }
                let row = Arc::new(tables.row(&self.cfg, i));
                cache.write().unwrap().insert(i, Arc::clone(&row));
                SRow::Shared(row)
            }
        }
    }

    pub fn s_entry(&self, i: usize, j: usize) -> Complex {
        self.s_row(i)[j].clone()
    }
}

/// The conjugation permutation C = S^2, as label indices.
pub fn charge_conjugation(md: &ModularData) -> Vec<usize> {
    md.conj.clone()
}

#[derive(Clone, Debug)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    /// True when only sampled rows were checked (large systems).
    pub sampled: bool,
}

impl ValidationReport {
    pub(crate) fn new(sampled: bool) -> Self {
        Self {
            checks: Vec::new(),
            sampled,
        }
    }

    pub(crate) fn push(&mut self, name: &'static str, residual: f64, bound: f64) {
        self.checks.push(ValidationCheck {
            name,
            residual,
            bound,
            pass: residual <= bound,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn to_error(&self) -> Error {
        let lines: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: residual {:e} exceeds {:e}", c.name, c.residual, c.bound))
            .collect();
        Error::ValidationFailed(lines.join("\n"))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<24} residual {:9.2e}  bound {:7.1e}  {}",
                c.name,
                c.residual,
                c.bound,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
        if self.sampled {
            writeln!(f, "(quadratic checks sampled on row subset)")?;
        }
        Ok(())
    }
}

/// Check the defining properties of modular data: S symmetric and unitary
/// with positive vacuum row, S^2 the stored conjugation, the S-T relation,
/// T consistent with h and c, c consistent with arg(z), and dimensions
/// at least one. Residual bounds come from `cfg`.
pub fn verify_modular(md: &ModularData, cfg: &PrecisionConfig) -> ValidationReport {
    let full = md.n() <= FULL_VERIFY_MAX && !md.is_lazy();
    let mut report = ValidationReport {
        checks: Vec::new(),
        sampled: !full,
    };
    let bound = cfg.residual_bound();
    let n = md.n();

    let t: Vec<Complex> = (0..n).map(|i| md.t_entry(i)).collect();

    if full {
        let s = match &md.store {
            SStore::Dense(m) => m,
            SStore::Lazy { .. } => unreachable!(),
        };
        let mut r_sym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                r_sym = r_sym.max((s.get(i, j) - s.get(j, i)).abs().to_f64());
            }
        }
        report.push("s_symmetric", r_sym, bound);

        let prod = s.mul(&s.conj_transpose());
        let mut r_uni = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut v = prod.get(i, j).clone();
                if i == j {
                    v.re -= 1u32;
                }
                r_uni = r_uni.max(v.abs().to_f64());
            }
        }
        report.push("s_unitary", r_uni, bound);

        let s2 = s.mul(s);
        let mut r_conj = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut v = s2.get(i, j).clone();
                if j == md.conj(i) {
                    v.re -= 1u32;
                }
                r_conj = r_conj.max(v.abs().to_f64());
            }
        }
        report.push("conjugation_permutation", r_conj, bound);

        // TSTST = S rewritten as STS = conj(T) S conj(T), entrywise.
        let ts = CMatrix::from_fn(n, n, |i, j| &t[i] * s.get(i, j));
        let sts = s.mul(&ts);
        let mut r_mod = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let rhs = &(&t[i].conj() * s.get(i, j)) * &t[j].conj();
                r_mod = r_mod.max((sts.get(i, j) - &rhs).abs().to_f64());
            }
        }
        report.push("modular_relation", r_mod, bound);
    } else {
        let idx = sample_indices(n);
        let rows: Vec<Arc<Vec<Complex>>> = idx
            .iter()
            .map(|&i| match md.s_row(i) {
                SRow::Shared(r) => r,
                SRow::Borrowed(r) => Arc::new(r.to_vec()),
            })
            .collect();
        let mut r_sym = 0.0f64;
        let mut r_uni = 0.0f64;
        let mut r_conj = 0.0f64;
        let mut r_mod = 0.0f64;
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                r_sym = r_sym.max((&rows[a][j] - &rows[b][i]).abs().to_f64());
                let mut dot_c = Complex::zero(&md.cfg);
                let mut dot_p = Complex::zero(&md.cfg);
                let mut dot_t = Complex::zero(&md.cfg);
                for k in 0..n {
                    dot_c += &(&rows[a][k] * &rows[b][k].conj());
                    dot_p += &(&rows[a][k] * &rows[b][k]);
                    dot_t += &(&(&rows[a][k] * &t[k]) * &rows[b][k]);
                }
                if i == j {
                    dot_c.re -= 1u32;
                }
                r_uni = r_uni.max(dot_c.abs().to_f64());
                if j == md.conj(i) {
                    dot_p.re -= 1u32;
                }
                r_conj = r_conj.max(dot_p.abs().to_f64());
                let rhs = &(&t[i].conj() * &rows[a][j]) * &t[j].conj();
                r_mod = r_mod.max((&dot_t - &rhs).abs().to_f64());
            }
        }
        report.push("s_symmetric", r_sym, bound);
        report.push("s_unitary", r_uni, bound);
        report.push("conjugation_permutation", r_conj, bound);
        report.push("modular_relation", r_mod, bound);
    }

    let row0 = md.s_row(0);
    let mut r_vac = 0.0f64;
    for v in row0.iter() {
        if v.re.clone().to_f64() > 0.0 {
            r_vac = r_vac.max(v.im.clone().abs().to_f64());
        } else {
            r_vac = r_vac.max(v.re.clone().abs().to_f64().max(1.0));
        }
    }
    report.push("vacuum_row_positive", r_vac, bound);

    let invol_ok = md.conj[0] == 0 && (0..n).all(|i| md.conj[md.conj[i]] == i);
    report.push(
        "conjugation_involution",
        if invol_ok { 0.0 } else { 1.0 },
        bound,
    );

    // T_lambda = e^{-i pi c / 12} omega_lambda, compared against the
    // stored rational turns.
    let front = Complex::from_phase_turns(&md.cfg, -md.c / 24);
    let mut r_t = 0.0f64;
    for i in 0..n {
        let omega = Complex::from_phase_turns(&md.cfg, md.omega_turn(i));
        let expect = &front * &omega;
        r_t = r_t.max((&t[i] - &expect).abs().to_f64());
    }
    report.push("t_from_h_and_c", r_t, bound);

    // c = 4 arg(z) / pi mod 8.
    let p = md.cfg.bits();
    let c_val = Real::with_val(p, 4 * &md.z.arg()) / md.cfg.pi();
    let diff = (md.cfg.ratio(md.c) - c_val) / 8u32;
    let frac = Real::with_val(p, &diff - &diff.clone().round());
    report.push(
        "central_charge_mod8",
        Real::with_val(p, 8 * &frac).abs().to_f64(),
        bound,
    );

    let min_d = md.dims.iter().map(|d| d.to_f64()).fold(f64::INFINITY, f64::min);
    report.push("dims_at_least_one", (1.0 - min_d).max(0.0), bound);

    // sum d^2 = 1/S_00^2, relative residual. With the vacuum row real
    // and positive this is the unitarity of row 0.
    let total = md.global_dimension();
    let s00 = &row0[0].re;
    let inv = Real::with_val(p, 1u32) / Real::with_val(p, s00 * s00);
    let r_glob = (Real::with_val(p, &total - &inv) / &total).abs().to_f64();
    report.push("global_dimension", r_glob, bound);

    report
}

fn sample_indices(n: usize) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for i in [0, 1, 2, n / 3, n / 2, 2 * n / 3, n.saturating_sub(2), n - 1] {
        set.insert(i.min(n - 1));
    }
    set.into_iter().collect()
}
