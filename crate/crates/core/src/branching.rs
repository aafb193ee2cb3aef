//! Branching matrices between an extended theory and its base. Rows are
//! extended sectors, columns base labels, entries restriction
//! multiplicities. Two sources: simple-current orbit data computed from
//! fusion, and shipped conformal-embedding tables. Consumers sandwich
//! B B^T, decompose the sandwich into permutations, and pull extended
//! invariants down to the base.

use crate::error::{Error, Result};
use crate::exact::birkhoff::permutation_sum_decomposition;
use crate::exact::{IntMatrix, Real};
use crate::fusion::FusionRing;
use crate::invariants::{
    ade_invariant, su3_invariant, su7_invariants, Diagram, ModularInvariant, Su3Series,
};
use crate::modular::{level_one, mod1, LevelOneFamily, ModularData};
use num_rational::Rational64;
use std::fmt;
use std::sync::Arc;

/// Restriction table of an extension. `ext_h` carries a conformal
/// weight per extended sector: the exact extended weight when extended
/// modular data is attached, otherwise the orbit representative's
/// weight mod 1. Fixed points resolved into several sectors repeat
/// their row.
pub struct BranchingMatrix {
    base: Arc<ModularData>,
    ext_labels: Vec<String>,
    ext_h: Vec<Rational64>,
    ext_md: Option<Arc<ModularData>>,
    b: IntMatrix,
    local: bool,
}

impl BranchingMatrix {
    pub fn base(&self) -> &ModularData {
        &self.base
    }

    pub fn base_arc(&self) -> Arc<ModularData> {
        Arc::clone(&self.base)
    }

    pub fn ext_labels(&self) -> &[String] {
        &self.ext_labels
    }

    pub fn ext_count(&self) -> usize {
        self.ext_labels.len()
    }

    pub fn ext_md(&self) -> Option<&Arc<ModularData>> {
        self.ext_md.as_ref()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    /// False when the generating current has non-integer weight; the
    /// matrix is still produced but B^T B will not commute with S.
    pub fn is_local(&self) -> bool {
        self.local
    }

    pub fn warning(&self) -> Option<String> {
        if self.local {
            None
        } else {
            Some("nonlocal extension: the current's conformal weight is not an integer".into())
        }
    }

    /// Vacuum row, nonzero exactly on the base sectors of the dual
    /// canonical endomorphism.
    pub fn theta_row(&self) -> &[i64] {
        self.b.row(0)
    }

    fn validate(&self) -> Result<()> {
        if self.b.get(0, 0) != 1 {
            return Err(Error::BranchingTableCorrupt(
                "extension vacuum must restrict to the base vacuum once".into(),
            ));
        }
        let Some(ext) = &self.ext_md else {
            return Ok(());
        };
        // each row's dimension sum is d_tau times the embedding index
        let cfg = self.base.cfg();
        let row_sum = |t: usize| -> Real {
            let mut acc = cfg.zero();
            for (l, &m) in self.b.row(t).iter().enumerate() {
                if m != 0 {
                    acc += Real::with_val(cfg.bits(), self.base.dim(l) * m as i32);
                }
            }
            acc
        };
        let index = row_sum(0);
        for t in 0..self.ext_count() {
            let want = Real::with_val(cfg.bits(), ext.dim(t) * &index);
            let got = row_sum(t);
            let err = Real::with_val(cfg.bits(), &want - &got).abs();
            let tol = Real::with_val(cfg.bits(), &index * cfg.residual_bound());
            if err > tol {
                return Err(Error::BranchingTableCorrupt(format!(
                    "row {} breaks the embedding index: dimension sum {} vs {}",
                    self.ext_labels[t],
                    got.to_f64(),
                    want.to_f64()
                )));
            }
        }
        Ok(())
    }

    /// Row-permuted copy: new row t is old row perm[t]. Sector names
    /// keep their slots; the weights move with the rows.
    pub fn permuted_rows(&self, perm: &[usize]) -> BranchingMatrix {
        assert_eq!(perm.len(), self.ext_count());
        let rows: Vec<Vec<i64>> = perm.iter().map(|&p| self.b.row(p).to_vec()).collect();
        BranchingMatrix {
            base: Arc::clone(&self.base),
            ext_labels: self.ext_labels.clone(),
            ext_h: perm.iter().map(|&p| self.ext_h[p]).collect(),
            ext_md: self.ext_md.clone(),
            b: IntMatrix::from_rows(rows),
            local: self.local,
        }
    }

    /// B B^T over the extended sectors. With extended modular data
    /// attached the result must commute with the extended S and T.
    pub fn sandwich(&self) -> Result<IntMatrix> {
        let s = self.b.mul(&self.b.transpose());
        if let Some(ext) = &self.ext_md {
            let report = crate::invariants::verify_invariant(ext, &s, self.base.cfg());
            if !report.pass() {
                return Err(Error::ExtendedInvarianceFailed(report.to_string()));
            }
        }
        Ok(s)
    }

    /// Permutation-sum decomposition of the sandwich. Every permutation
    /// must fix the extended conformal weights; with extended data
    /// attached it must also be an S-matrix automorphism.
    pub fn sandwich_decomposition(&self) -> Result<Vec<(Vec<usize>, i64)>> {
        let s = self.sandwich()?;
        let parts = permutation_sum_decomposition(&s)?;
        let bound = self.base.cfg().residual_bound();
        for (perm, _) in &parts {
            for a in 0..perm.len() {
                if self.ext_h[perm[a]] != self.ext_h[a] {
                    return Err(Error::ValidationFailed(format!(
                        "sandwich permutation moves sector {} (h = {}) onto {} (h = {})",
                        a, self.ext_h[a], perm[a], self.ext_h[perm[a]]
                    )));
                }
            }
            if let Some(ext) = &self.ext_md {
                let mut worst = 0.0f64;
                for a in 0..perm.len() {
                    let ra = ext.s_row(a);
                    let rp = ext.s_row(perm[a]);
                    for b in 0..perm.len() {
                        let d = (&ra[b] - &rp[perm[b]]).abs().to_f64();
                        worst = worst.max(d);
                    }
                }
                if worst > bound {
                    return Err(Error::ValidationFailed(format!(
                        "sandwich permutation is not an S automorphism (residual {:e})",
                        worst
                    )));
                }
            }
        }
        Ok(parts)
    }
}

impl fmt::Debug for BranchingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BranchingMatrix {} sectors over {}{}",
            self.ext_count(),
            self.base.name(),
            if self.local { "" } else { " (nonlocal)" }
        )
    }
}

/// Orbit data of a simple current J of the stated order: extended
/// sectors are the zero-monodromy-charge J-orbits, with an orbit of
/// size order/s contributing s copies of its indicator row. The
/// current must fuse as a free Z_order generator; nonlocal currents
/// (non-integer h_J) still produce a matrix, flagged via `is_local`.
pub fn simple_current_extension(
    md: &Arc<ModularData>,
    j: usize,
    order: usize,
) -> Result<BranchingMatrix> {
    let n = md.n();
    let bad = || Error::NotSimpleCurrent { index: j, order };
    if order < 2 || j >= n {
        return Err(bad());
    }
    let ring = FusionRing::new(Arc::clone(md));
    let act = |x: usize| -> Result<usize> {
        let prod = ring.verlinde(j, x)?;
        let mut hits = prod.support();
        match (hits.next(), hits.next()) {
            (Some((y, 1)), None) => Ok(y),
            _ => Err(bad()),
        }
    };
    // J must generate a free cyclic group on the vacuum
    let mut p = 0usize;
    for step in 1..=order {
        p = act(p)?;
        if (p == 0) != (step == order) {
            return Err(bad());
        }
    }
    let jmap: Vec<usize> = (0..n).map(act).collect::<Result<_>>()?;
    let h_j = md.h(j);
    let local = mod1(h_j) == Rational64::new(0, 1);

    let mut seen = vec![false; n];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut hs: Vec<Rational64> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        let mut x = jmap[start];
        while x != start {
            orbit.push(x);
            x = jmap[x];
        }
        for &m in &orbit {
            seen[m] = true;
        }
        let charge = mod1(md.h(jmap[start]) - md.h(start) - h_j);
        if charge != Rational64::new(0, 1) {
            continue;
        }
        assert_eq!(order % orbit.len(), 0, "orbit size must divide the order");
        let copies = order / orbit.len();
        let mut row = vec![0i64; n];
        for &m in &orbit {
            row[m] = 1;
        }
        for c in 0..copies {
            rows.push(row.clone());
            names.push(if copies == 1 {
                md.label(start).name.clone()
            } else {
                format!("{}#{}", md.label(start).name, c + 1)
            });
            hs.push(mod1(md.h(start)));
        }
    }

    let b = BranchingMatrix {
        base: Arc::clone(md),
        ext_labels: names,
        ext_h: hs,
        ext_md: None,
        b: IntMatrix::from_rows(rows),
        local,
    };
    b.validate()?;
    Ok(b)
}

/// The conformal embeddings with shipped restriction tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    Su2_10InSo5,
    Su2_28InG2,
    Su3_5InSu6,
    Su3_9InE6,
    Su3_21InE7,
    Su7_7InSo48,
}

impl Embedding {
    pub const ALL: [Embedding; 6] = [
        Embedding::Su2_10InSo5,
        Embedding::Su2_28InG2,
        Embedding::Su3_5InSu6,
        Embedding::Su3_9InE6,
        Embedding::Su3_21InE7,
        Embedding::Su7_7InSo48,
    ];

    pub fn base_name(self) -> &'static str {
        match self {
            Embedding::Su2_10InSo5 => "SU(2)_10",
            Embedding::Su2_28InG2 => "SU(2)_28",
            Embedding::Su3_5InSu6 => "SU(3)_5",
            Embedding::Su3_9InE6 => "SU(3)_9",
            Embedding::Su3_21InE7 => "SU(3)_21",
            Embedding::Su7_7InSo48 => "SU(7)_7",
        }
    }

    pub fn ext_family(self) -> LevelOneFamily {
        match self {
            Embedding::Su2_10InSo5 => LevelOneFamily::So(5),
            Embedding::Su2_28InG2 => LevelOneFamily::G2,
            Embedding::Su3_5InSu6 => LevelOneFamily::Su(6),
            Embedding::Su3_9InE6 => LevelOneFamily::E6,
            Embedding::Su3_21InE7 => LevelOneFamily::E7,
            Embedding::Su7_7InSo48 => LevelOneFamily::So(48),
        }
    }

    fn table(self) -> &'static str {
        match self {
            Embedding::Su2_10InSo5 => include_str!("../data/su2_10_so5_1.txt"),
            Embedding::Su2_28InG2 => include_str!("../data/su2_28_g2_1.txt"),
            Embedding::Su3_5InSu6 => include_str!("../data/su3_5_su6_1.txt"),
            Embedding::Su3_9InE6 => include_str!("../data/su3_9_e6_1.txt"),
            Embedding::Su3_21InE7 => include_str!("../data/su3_21_e7_1.txt"),
            Embedding::Su7_7InSo48 => include_str!("../data/su7_7_so48_1.txt"),
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ext = match self {
            Embedding::Su2_10InSo5 => "SO(5)_1",
            Embedding::Su2_28InG2 => "(G2)_1",
            Embedding::Su3_5InSu6 => "SU(6)_1",
            Embedding::Su3_9InE6 => "(E6)_1",
            Embedding::Su3_21InE7 => "(E7)_1",
            Embedding::Su7_7InSo48 => "SO(48)_1",
        };
        write!(f, "{} < {}", self.base_name(), ext)
    }
}

/// Parse "name: mult x (weights), ..." lines against the base labels,
/// with the row order fixed by the extended data's label order.
fn parse_table(base: &ModularData, ext: &ModularData, text: &str) -> Result<IntMatrix> {
    let corrupt = |msg: String| Error::BranchingTableCorrupt(msg);
    let mut b = IntMatrix::zeros(ext.n(), base.n());
    let mut row = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if row >= ext.n() {
            return Err(corrupt(format!("more rows than extended sectors: {line}")));
        }
        let (name, rest) = line
            .split_once(':')
            .ok_or_else(|| corrupt(format!("missing ':' in {line}")))?;
        let expect = &ext.label(row).name;
        if name.trim() != expect {
            return Err(corrupt(format!(
                "row {} named {} but the extended sector is {}",
                row,
                name.trim(),
                expect
            )));
        }
        for chunk in rest.split(')') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let (mult_s, weight_s) = chunk
                .split_once('x')
                .ok_or_else(|| corrupt(format!("missing 'x' in item {chunk}")))?;
            let mult: i64 = mult_s
                .trim()
                .parse()
                .map_err(|_| corrupt(format!("bad multiplicity in {chunk}")))?;
            if mult <= 0 {
                return Err(corrupt(format!("multiplicity must be positive in {chunk}")));
            }
            let weight: Vec<i64> = weight_s
                .trim()
                .trim_start_matches('(')
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| corrupt(format!("bad weight in {chunk}")))?;
            let idx = base
                .index_of_weight(&weight)
                .ok_or_else(|| corrupt(format!("{weight:?} is not a label of {}", base.name())))?;
            if b.get(row, idx) != 0 {
                return Err(corrupt(format!(
                    "label {} listed twice in row {}",
                    base.label(idx).name,
                    expect
                )));
            }
            b.set(row, idx, mult);
        }
        row += 1;
    }
    if row != ext.n() {
        return Err(corrupt(format!(
            "table has {} rows, extended theory has {} sectors",
            row,
            ext.n()
        )));
    }
    Ok(b)
}

/// Load a shipped conformal-embedding table over matching base data.
/// The restriction B^T B is compared entrywise against the named
/// invariant built independently, so a corrupted table cannot pass.
pub fn embedding_branching(md: &Arc<ModularData>, which: Embedding) -> Result<BranchingMatrix> {
    if md.name() != which.base_name() {
        return Err(Error::BadInput(format!(
            "{} needs base data {}, got {}",
            which,
            which.base_name(),
            md.name()
        )));
    }
    let ext = Arc::new(level_one(which.ext_family(), md.cfg())?);
    let b = parse_table(md, &ext, which.table())?;
    let bm = BranchingMatrix {
        base: Arc::clone(md),
        ext_labels: (0..ext.n()).map(|t| ext.label(t).name.clone()).collect(),
        ext_h: (0..ext.n()).map(|t| ext.h(t)).collect(),
        ext_md: Some(ext),
        b,
        local: true,
    };
    bm.validate()?;

    let expected = match which {
        Embedding::Su2_10InSo5 => ade_invariant(md, Diagram::E6)?,
        Embedding::Su2_28InG2 => ade_invariant(md, Diagram::E8)?,
        Embedding::Su3_5InSu6 => su3_invariant(md, Su3Series::E8)?,
        Embedding::Su3_9InE6 => su3_invariant(md, Su3Series::E12)?,
        Embedding::Su3_21InE7 => su3_invariant(md, Su3Series::E24)?,
        Embedding::Su7_7InSo48 => su7_invariants(md)?.0,
    };
    let z = bm.b.transpose().mul(&bm.b);
    if z != *expected.matrix() {
        return Err(Error::DataMismatch(format!(
            "B^T B of {} differs from {}",
            which,
            expected.name()
        )));
    }
    Ok(bm)
}

/// Z = (B+)^T B-, fully verified against the base S and T. With equal
/// arguments this is the type I invariant of the extension.
pub fn restrict_invariant(
    b_plus: &BranchingMatrix,
    b_minus: &BranchingMatrix,
) -> Result<ModularInvariant> {
    if b_plus.base.name() != b_minus.base.name() {
        return Err(Error::BadInput(format!(
            "branching matrices over different bases: {} vs {}",
            b_plus.base.name(),
            b_minus.base.name()
        )));
    }
    let z = b_plus.b.transpose().mul(&b_minus.b);
    ModularInvariant::new(b_plus.base_arc(), "B+^T.B-", z)
}

/// Pull an invariant of the extended theory down to the base:
/// B^T Z_ext B, verified.
pub fn pull_back(b: &BranchingMatrix, z_ext: &IntMatrix) -> Result<ModularInvariant> {
    assert_eq!(z_ext.rows(), b.ext_count(), "extended invariant shape");
    assert_eq!(z_ext.cols(), b.ext_count(), "extended invariant shape");
    let z = b.b.transpose().mul(&z_ext.mul(&b.b));
    ModularInvariant::new(b.base_arc(), "pullback", z)
}

/// The non-symmetric invariant (e_0 + e_s)(e_0 + e_c)^T of SO(16 l)_1.
/// Its transpose is the other one of the pair.
pub fn heterotic_invariant(md: &Arc<ModularData>) -> Result<ModularInvariant> {
    let ok = md
        .name()
        .strip_prefix("SO(")
        .and_then(|rest| rest.strip_suffix(")_1"))
        .and_then(|m| m.parse::<u32>().ok())
        .map(|m| m % 16 == 0)
        .unwrap_or(false);
    if !ok || md.n() != 4 {
        return Err(Error::BadInput(format!(
            "heterotic invariants live on SO(16 l)_1 data, got {}",
            md.name()
        )));
    }
    let mut z = IntMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (2, 0), (2, 3)] {
        z.set(i, j, 1);
    }
    ModularInvariant::new(Arc::clone(md), "Q", z)
}
