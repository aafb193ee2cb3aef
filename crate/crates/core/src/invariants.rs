//! Modular invariant matrices: nonnegative integer matrices commuting
//! with S and T. Verification, the named A-D-E and SU(3) series, the two
//! SU(7) level 7 invariants, commutant-based enumeration, products,
//! decomposition into normalized invariants, and the count formulas.

use crate::error::{Error, Result};
use crate::exact::lattice::integral_lattice;
use crate::exact::nullspace::nullspace_basis;
use crate::exact::{CMatrix, Complex, IntMatrix, PrecisionConfig, Real};
use crate::modular::{mod1, ModularData, ValidationReport};
use num_rational::Rational64;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// Enumeration refuses label counts beyond this.
const ENUM_LABEL_CAP: usize = 300;

/// Node budget for the bounded lattice walk.
const ENUM_NODE_BUDGET: u64 = 20_000_000;

/// A verified modular invariant: a nonnegative integer matrix over the
/// labels of `md` commuting with S and T. Entries are exact; integrality
/// and nonnegativity are part of construction, commutation is checked
/// numerically against the stored S and exactly against T.
#[derive(Clone)]
pub struct ModularInvariant {
    md: Arc<ModularData>,
    name: String,
    m: IntMatrix,
}

impl ModularInvariant {
    pub fn new(md: Arc<ModularData>, name: &str, m: IntMatrix) -> Result<Self> {
        let report = verify_invariant(&md, &m, md.cfg());
        if !report.pass() {
            return Err(report.to_error());
        }
        Ok(Self::unchecked(md, name, m))
    }

    /// For matrices already known to commute (transposes, permutation
    /// images of verified invariants, branching products checked by the
    /// caller).
    pub(crate) fn unchecked(md: Arc<ModularData>, name: &str, m: IntMatrix) -> Self {
        Self {
            md,
            name: name.into(),
            m,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn md(&self) -> &ModularData {
        &self.md
    }

    pub fn md_arc(&self) -> Arc<ModularData> {
        Arc::clone(&self.md)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m.get(i, j)
    }

    pub fn trace(&self) -> i64 {
        self.m.trace()
    }

    pub fn is_normalized(&self) -> bool {
        self.m.get(0, 0) == 1
    }

    /// Exact matrix product Z1 Z2, generally not normalized.
    pub fn product(&self, rhs: &ModularInvariant) -> IntMatrix {
        assert_eq!(self.md.name(), rhs.md.name(), "different modular data");
        self.m.mul(&rhs.m)
    }

    /// Z* is the transpose (entries are real integers). Transposing
    /// preserves commutation because S is symmetric and T diagonal.
    pub fn adjoint(&self) -> ModularInvariant {
        Self::unchecked(
            Arc::clone(&self.md),
            &format!("{}*", self.name),
            self.m.transpose(),
        )
    }
}

impl fmt::Debug for ModularInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModularInvariant {} over {} ({} labels, trace {})",
            self.name,
            self.md.name(),
            self.n(),
            self.trace()
        )
    }
}

/// Left-multiply by the conjugation permutation: (CZ)_{l,m} = Z_{lbar,m}.
/// The result is re-verified.
pub fn conjugate(z: &ModularInvariant) -> Result<ModularInvariant> {
    let md = z.md_arc();
    let perm: Vec<usize> = (0..md.n()).map(|i| md.conj(i)).collect();
    let c = IntMatrix::from_permutation(&perm);
    let m = c.mul(z.matrix());
    ModularInvariant::new(md, &format!("C.{}", z.name()), m)
}

fn scale_i64(c: &Complex, v: i64) -> Complex {
    let p = c.re.prec();
    Complex::new(
        Real::with_val(p, &c.re * v),
        Real::with_val(p, &c.im * v),
    )
}

/// Check that M is a modular invariant for `md`: entries nonnegative
/// (integrality is carried by the matrix type), exact T-commutation via
/// the rational T turns, and the S-commutator residual. The commutator
/// is evaluated only on rows and columns meeting the support of M; all
/// other entries of MS - SM vanish identically. The final check records
/// the vacuum entry and never fails: non-normalized invariants (such as
/// Z Z*) are still invariants.
pub fn verify_invariant(
    md: &ModularData,
    m: &IntMatrix,
    cfg: &PrecisionConfig,
) -> ValidationReport {
    let n = md.n();
    assert_eq!(m.rows(), n, "matrix rows must match label count");
    assert_eq!(m.cols(), n, "matrix must be square");
    let mut report = ValidationReport::new(false);
    let bound = cfg.residual_bound();

    let most_negative = m
        .iter_nonzero()
        .map(|(_, _, v)| (-v).max(0))
        .max()
        .unwrap_or(0);
    report.push("entries_nonnegative", most_negative as f64, 0.0);

    // T is diagonal, so [M, T] = 0 iff every nonzero entry of M couples
    // labels with the same T phase. The turns are exact rationals; the
    // residual reported for a violation is |M_ij| |T_i - T_j|.
    let mut r_t = 0.0f64;
    for (i, j, v) in m.iter_nonzero() {
        if md.t_turn(i) != md.t_turn(j) {
            let gap = (&md.t_entry(i) - &md.t_entry(j)).abs().to_f64();
            r_t = r_t.max(v.abs() as f64 * gap);
        }
    }
    report.push("commutes_with_t", r_t, bound);

    let mut row_supp: BTreeSet<usize> = BTreeSet::new();
    let mut col_supp: BTreeSet<usize> = BTreeSet::new();
    let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    let mut by_col: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (i, j, v) in m.iter_nonzero() {
        row_supp.insert(i);
        col_supp.insert(j);
        by_row[i].push((j, v));
        by_col[j].push((i, v));
    }
    // Rows of S indexed by either support side cover every term below,
    // using the symmetry S_{l,mu} = S_{mu,l}.
    let mut srow: HashMap<usize, Vec<Complex>> = HashMap::new();
    for &i in row_supp.union(&col_supp) {
        srow.insert(i, md.s_row(i).to_vec());
    }
    let ms_entry = |la: usize, nu: usize| -> Complex {
        let mut acc = Complex::zero(cfg);
        for &(mu, v) in &by_row[la] {
            acc += &scale_i64(&srow[&mu][nu], v);
        }
        acc
    };
    let sm_entry = |la: usize, nu: usize| -> Complex {
        let mut acc = Complex::zero(cfg);
        for &(mu, v) in &by_col[nu] {
            acc += &scale_i64(&srow[&mu][la], v);
        }
        acc
    };
    let mut r_s = 0.0f64;
    for &la in &row_supp {
        for nu in 0..n {
            let mut diff = ms_entry(la, nu);
            diff -= &sm_entry(la, nu);
            r_s = r_s.max(diff.abs().to_f64());
        }
    }
    for la in (0..n).filter(|l| !row_supp.contains(l)) {
        for &nu in &col_supp {
            r_s = r_s.max(sm_entry(la, nu).abs().to_f64());
        }
    }
    report.push("commutes_with_s", r_s, bound);

    report.push(
        "vacuum_entry_one",
        (m.get(0, 0) - 1).abs() as f64,
        f64::INFINITY,
    );
    report
}

fn block_add(z: &mut IntMatrix, members: &[usize], mult: i64) {
    for &a in members {
        for &b in members {
            z.add_at(a, b, mult);
        }
    }
}

/// The simply laced Dynkin diagrams naming SU(2) invariants. The
/// parameter is the node count; the matching level is the Coxeter
/// number minus two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagram {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl Diagram {
    /// SU(2) level at which the diagram labels an invariant.
    pub fn level(self) -> u32 {
        match self {
            Diagram::A(l) => l - 1,
            Diagram::D(l) => 2 * l - 4,
            Diagram::E6 => 10,
            Diagram::E7 => 16,
            Diagram::E8 => 28,
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::A(l) => write!(f, "A{}", l),
            Diagram::D(l) => write!(f, "D{}", l),
            Diagram::E6 => write!(f, "E6"),
            Diagram::E7 => write!(f, "E7"),
            Diagram::E8 => write!(f, "E8"),
        }
    }
}

/// The named SU(2) invariant of the given diagram, over modular data
/// that must be SU(2) at the diagram's level. A is the identity, D comes
/// in the even block form and the odd permutation form, E6/E7/E8 are
/// their standard block matrices.
pub fn ade_invariant(md: &Arc<ModularData>, diagram: Diagram) -> Result<ModularInvariant> {
    let shape_ok = match diagram {
        Diagram::A(l) => l >= 2,
        Diagram::D(l) => l >= 4,
        _ => true,
    };
    let md_level = md.n().saturating_sub(1) as u32;
    if !shape_ok || md.name() != format!("SU(2)_{}", diagram.level()) {
        return Err(Error::IncompatibleLevel {
            name: diagram.to_string(),
            level: md_level,
        });
    }
    let k = diagram.level() as usize;
    let n = md.n();
    let mut z = IntMatrix::zeros(n, n);
    match diagram {
        Diagram::A(_) => z = IntMatrix::identity(n),
        Diagram::D(_) if k % 4 == 0 => {
            // spin and its reflection pair up on even spins below k/2;
            // the self-paired middle spin appears with coefficient 2
            for j in (0..k / 2).step_by(2) {
                block_add(&mut z, &[j, k - j], 1);
            }
            z.add_at(k / 2, k / 2, 2);
        }
        Diagram::D(_) => {
            // k = 2 mod 4: even spins stay put, odd spins reflect
            for m_ in 0..n {
                if m_ % 2 == 0 {
                    z.set(m_, m_, 1);
                } else {
                    z.set(m_, k - m_, 1);
                }
            }
        }
        Diagram::E6 => {
            for b in [[0usize, 6], [3, 7], [4, 10]] {
                block_add(&mut z, &b, 1);
            }
        }
        Diagram::E7 => {
            for b in [[0usize, 16], [4, 12], [6, 10]] {
                block_add(&mut z, &b, 1);
            }
            z.add_at(8, 8, 1);
            for m_ in [2usize, 14] {
                z.add_at(m_, 8, 1);
                z.add_at(8, m_, 1);
            }
        }
        Diagram::E8 => {
            block_add(&mut z, &[0, 10, 18, 28], 1);
            block_add(&mut z, &[6, 12, 16, 22], 1);
        }
    }
    ModularInvariant::new(Arc::clone(md), &diagram.to_string(), z)
}

/// The exceptional and orbifold SU(3) invariants, tagged by altitude
/// (level + 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su3Series {
    D12,
    E8,
    E12,
    E24,
}

impl Su3Series {
    pub fn level(self) -> u32 {
        match self {
            Su3Series::E8 => 5,
            Su3Series::D12 | Su3Series::E12 => 9,
            Su3Series::E24 => 21,
        }
    }
}

impl fmt::Display for Su3Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Su3Series::D12 => write!(f, "D^(12)"),
            Su3Series::E8 => write!(f, "E^(8)"),
            Su3Series::E12 => write!(f, "E^(12)"),
            Su3Series::E24 => write!(f, "E^(24)"),
        }
    }
}

fn weight_block(md: &ModularData, weights: &[[i64; 2]]) -> Result<Vec<usize>> {
    weights
        .iter()
        .map(|w| {
            md.index_of_weight(w)
                .ok_or_else(|| Error::BadInput(format!("({},{}) is not a label", w[0], w[1])))
        })
        .collect()
}

/// Extension invariant of the order-3 simple current J = (k, 0), for
/// 3 | k: rotation orbits with zero monodromy charge become all-ones
/// blocks, the fixed point contributes a diagonal 3.
fn su3_simple_current_block(md: &ModularData) -> Result<IntMatrix> {
    let n = md.n();
    let k = md.label(n - 1).weight[0];
    let j_idx = md
        .index_of_weight(&[k, 0])
        .expect("top weight (k, 0) exists");
    let h_j = md.h(j_idx);
    if mod1(h_j) != Rational64::new(0, 1) {
        return Err(Error::NotSimpleCurrent {
            index: j_idx,
            order: 3,
        });
    }
    let sigma = |w: &[i64]| vec![k - w[0] - w[1], w[0]];
    let mut z = IntMatrix::zeros(n, n);
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut orbit = vec![i];
        let mut w = sigma(&md.label(i).weight);
        loop {
            let idx = md.index_of_weight(&w).expect("rotation maps labels to labels");
            if idx == i {
                break;
            }
            orbit.push(idx);
            w = sigma(&w);
        }
        for &x in &orbit {
            seen[x] = true;
        }
        // monodromy charge from conformal weights; constant on the orbit
        let next = orbit[1 % orbit.len()];
        if mod1(md.h(next) - md.h(i) - h_j) != Rational64::new(0, 1) {
            continue;
        }
        if orbit.len() == 1 {
            z.add_at(i, i, 3);
        } else {
            block_add(&mut z, &orbit, 1);
        }
    }
    Ok(z)
}

/// One of the named SU(3) invariants, over SU(3) data at its level
/// (5 for E^(8), 9 for D^(12) and E^(12), 21 for E^(24)).
pub fn su3_invariant(md: &Arc<ModularData>, series: Su3Series) -> Result<ModularInvariant> {
    let k = series.level();
    if md.name() != format!("SU(3)_{}", k) {
        return Err(Error::IncompatibleLevel {
            name: series.to_string(),
            level: k,
        });
    }
    let n = md.n();
    let z = match series {
        Su3Series::D12 => su3_simple_current_block(md)?,
        Su3Series::E8 => {
            let blocks: [[[i64; 2]; 2]; 6] = [
                [[0, 0], [2, 2]],
                [[2, 0], [2, 3]],
                [[0, 2], [3, 2]],
                [[3, 0], [0, 3]],
                [[2, 1], [0, 5]],
                [[1, 2], [5, 0]],
            ];
            let mut z = IntMatrix::zeros(n, n);
            for b in &blocks {
                block_add(&mut z, &weight_block(md, b)?, 1);
            }
            z
        }
        Su3Series::E12 => {
            let b1: [[i64; 2]; 6] = [[0, 0], [9, 0], [0, 9], [4, 1], [1, 4], [4, 4]];
            let b2: [[i64; 2]; 3] = [[2, 2], [5, 2], [2, 5]];
            let mut z = IntMatrix::zeros(n, n);
            block_add(&mut z, &weight_block(md, &b1)?, 1);
            block_add(&mut z, &weight_block(md, &b2)?, 2);
            z
        }
        Su3Series::E24 => {
            let b1: [[i64; 2]; 12] = [
                [0, 0],
                [21, 0],
                [0, 21],
                [4, 4],
                [13, 4],
                [4, 13],
                [10, 1],
                [1, 10],
                [10, 10],
                [6, 6],
                [9, 6],
                [6, 9],
            ];
            let b2: [[i64; 2]; 12] = [
                [6, 0],
                [15, 6],
                [0, 15],
                [15, 0],
                [6, 15],
                [0, 6],
                [7, 4],
                [10, 7],
                [4, 10],
                [4, 7],
                [10, 4],
                [7, 10],
            ];
            let mut z = IntMatrix::zeros(n, n);
            block_add(&mut z, &weight_block(md, &b1)?, 1);
            block_add(&mut z, &weight_block(md, &b2)?, 1);
            z
        }
    };
    ModularInvariant::new(Arc::clone(md), &series.to_string(), z)
}

/// Seed weights for the SU(7) level 7 restriction table. Each free seed
/// expands to a 7-element orbit under the affine rotation
/// (l1..l6) -> (7 - sum, l1..l5); (1,1,1,1,1,1) is the unique fixed
/// point.
const SU7_VACUUM_SEEDS: [[i64; 6]; 5] = [
    [0, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 2],
    [0, 2, 0, 0, 2, 0],
    [2, 1, 0, 1, 0, 1],
];

const SU7_VECTOR_SEEDS: [[i64; 6]; 4] = [
    [1, 0, 0, 0, 0, 1],
    [3, 0, 0, 1, 0, 0],
    [1, 2, 0, 1, 1, 0],
    [1, 1, 0, 0, 1, 1],
];

const SU7_FIXED_POINT: [i64; 6] = [1, 1, 1, 1, 1, 1];

fn rotate7(w: &[i64]) -> Vec<i64> {
    let total: i64 = w.iter().sum();
    let mut out = Vec::with_capacity(6);
    out.push(7 - total);
    out.extend_from_slice(&w[..5]);
    out
}

fn z7_orbit_indicator(md: &ModularData, seeds: &[[i64; 6]]) -> Result<Vec<i64>> {
    let mut v = vec![0i64; md.n()];
    for seed in seeds {
        let mut w: Vec<i64> = seed.to_vec();
        for _ in 0..7 {
            let idx = md.index_of_weight(&w).ok_or_else(|| {
                Error::BranchingTableCorrupt(format!("{:?} is not a level 7 weight", w))
            })?;
            if v[idx] != 0 {
                return Err(Error::BranchingTableCorrupt(format!(
                    "label {} appears twice in the orbit expansion",
                    md.label(idx).name
                )));
            }
            v[idx] = 1;
            w = rotate7(&w);
        }
        if w != *seed {
            return Err(Error::BranchingTableCorrupt(format!(
                "orbit of {:?} does not close after 7 steps",
                seed
            )));
        }
    }
    Ok(v)
}

fn rank_one_add(z: &mut IntMatrix, left: &[i64], right: &[i64]) {
    for (i, &a) in left.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in right.iter().enumerate() {
            if b != 0 {
                z.add_at(i, j, a * b);
            }
        }
    }
}

/// The two SU(7) level 7 invariants assembled from the restriction
/// table: Z1 from all four extended sectors b_0 b_0^T + ... and Zs from
/// (b_0 + b_s)(b_0 + b_s)^T, where b_0 covers 36 labels (five rotation
/// orbits plus the fixed point), b_v covers 28, and b_s = b_c is four
/// times the fixed point.
pub fn su7_invariants(md: &Arc<ModularData>) -> Result<(ModularInvariant, ModularInvariant)> {
    if md.name() != "SU(7)_7" {
        return Err(Error::BadInput(format!(
            "expected SU(7)_7 data, got {}",
            md.name()
        )));
    }
    let n = md.n();
    let fp = md
        .index_of_weight(&SU7_FIXED_POINT)
        .expect("fixed point is a label");
    let mut b0 = z7_orbit_indicator(md, &SU7_VACUUM_SEEDS)?;
    if b0[fp] != 0 {
        return Err(Error::BranchingTableCorrupt(
            "fixed point collides with a free vacuum orbit".into(),
        ));
    }
    b0[fp] = 1;
    let bv = z7_orbit_indicator(md, &SU7_VECTOR_SEEDS)?;
    if (0..n).any(|i| b0[i] != 0 && bv[i] != 0) {
        return Err(Error::BranchingTableCorrupt(
            "vacuum and vector restrictions overlap".into(),
        ));
    }
    let n0: i64 = b0.iter().sum();
    let nv: i64 = bv.iter().sum();
    if n0 != 36 || nv != 28 {
        return Err(Error::BranchingTableCorrupt(format!(
            "restriction sizes {} and {} are not 36 and 28",
            n0, nv
        )));
    }

    let mut z1 = IntMatrix::zeros(n, n);
    rank_one_add(&mut z1, &b0, &b0);
    rank_one_add(&mut z1, &bv, &bv);
    // b_s and b_c each contribute (4 e_fp)(4 e_fp)^T
    z1.add_at(fp, fp, 32);

    let mut b0s = b0.clone();
    b0s[fp] += 4;
    let mut zs = IntMatrix::zeros(n, n);
    rank_one_add(&mut zs, &b0s, &b0s);

    let z1 = ModularInvariant::new(Arc::clone(md), "Z1", z1)?;
    let zs = ModularInvariant::new(Arc::clone(md), "Zs", zs)?;
    Ok((z1, zs))
}

/// Result of the commutant enumeration.
pub struct Enumeration {
    pub invariants: Vec<ModularInvariant>,
    /// True when some returned matrix has an entry equal to its search
    /// bound floor(d_l d_m) with the bound at least 2; completeness is
    /// then relative to that bound. Bounds of 0 or 1 are exact, not
    /// heuristic, so they are not flagged.
    pub bound_saturated: bool,
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    -(-a).div_euclid(b)
}

struct LatticeWalk<'a> {
    rows: &'a [Vec<i128>],
    pivots: &'a [usize],
    finalized: &'a [Vec<usize>],
    bounds: &'a [i64],
    vac: usize,
    nodes: u64,
    solutions: Vec<Vec<i64>>,
}

impl LatticeWalk<'_> {
    fn go(&mut self, level: usize, y: &mut [i128]) -> Result<()> {
        if level == self.rows.len() {
            self.solutions
                .push(y.iter().map(|&x| x as i64).collect());
            return Ok(());
        }
        let p = self.pivots[level];
        let h = self.rows[level][p]; // positive pivot in HNF
        let (target_lo, target_hi) = if p == self.vac {
            (1 - y[p], 1 - y[p])
        } else {
            (-y[p], self.bounds[p] as i128 - y[p])
        };
        let lo = div_ceil_i128(target_lo, h);
        let hi = div_floor_i128(target_hi, h);
        for c in lo..=hi {
            self.nodes += 1;
            if self.nodes > ENUM_NODE_BUDGET {
                return Err(Error::SearchSpaceTooLarge(format!(
                    "lattice walk exceeded {} nodes",
                    ENUM_NODE_BUDGET
                )));
            }
            if c != 0 {
                for (j, &v) in self.rows[level].iter().enumerate() {
                    if v != 0 {
                        y[j] += c * v;
                    }
                }
            }
            let feasible = self.finalized[level].iter().all(|&j| {
                if j == self.vac {
                    y[j] == 1
                } else {
                    y[j] >= 0 && y[j] <= self.bounds[j] as i128
                }
            });
            if feasible {
                self.go(level + 1, y)?;
            }
            if c != 0 {
                for (j, &v) in self.rows[level].iter().enumerate() {
                    if v != 0 {
                        y[j] -= c * v;
                    }
                }
            }
        }
        Ok(())
    }
}

/// All normalized modular invariants of `md`, by direct search:
/// unknowns live on T-degenerate label pairs, the rational nullspace of
/// the S-commutator on that support is saturated to an integer lattice,
/// and lattice points are walked in Hermite pivot order under the entry
/// bounds 0 <= Z_{l,m} <= floor(d_l d_m) with Z_00 = 1. Every candidate
/// is re-verified before being returned. Results are sorted by trace
/// (descending, so the identity comes first) and then lexicographically.
pub fn enumerate_physical(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
) -> Result<Enumeration> {
    let n = md.n();
    if n > ENUM_LABEL_CAP {
        return Err(Error::SizeCap {
            count: n,
            cap: ENUM_LABEL_CAP,
        });
    }

    let mut classes: BTreeMap<Rational64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        classes.entry(md.t_turn(i)).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for members in classes.values() {
        for &a in members {
            for &b in members {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_unstable();
    let m = pairs.len();
    let vac = pairs
        .binary_search(&(0, 0))
        .expect("the vacuum pair is T-degenerate with itself");

    let rows = n * n;
    if rows * m > 4_000_000 {
        return Err(Error::SearchSpaceTooLarge(format!(
            "commutant system of {} x {} entries",
            rows, m
        )));
    }

    // d/dx_(a,b) of (XS - SX)_{l,nu} is delta_{l,a} S_{b,nu} - S_{l,a} delta_{b,nu}
    let mut sys = CMatrix::zero(cfg, rows, m);
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let sa = md.s_row(a);
        let sb = md.s_row(b);
        for nu in 0..n {
            *sys.get_mut(a * n + nu, p) += &sb[nu];
        }
        for l in 0..n {
            *sys.get_mut(l * n + b, p) -= &sa[l];
        }
    }

    let basis = nullspace_basis(&sys, cfg)?;
    let lattice = integral_lattice(&basis);
    let lattice: Vec<Vec<i128>> = lattice
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    i128::try_from(x).map_err(|_| {
                        Error::SearchSpaceTooLarge(
                            "lattice basis entries exceed i128".into(),
                        )
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let bounds: Vec<i64> = pairs
        .iter()
        .map(|&(a, b)| {
            let prod = Real::with_val(cfg.bits(), md.dim(a) * md.dim(b));
            (prod.to_f64() + cfg.int_tol).floor() as i64
        })
        .collect();

    let d = lattice.len();
    let pivots: Vec<usize> = lattice
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("no zero rows in HNF"))
        .collect();
    let mut finalized: Vec<Vec<usize>> = vec![Vec::new(); d.max(1)];
    for j in 0..m {
        match (0..d).rev().find(|&i| lattice[i][j] != 0) {
            Some(i) => finalized[i].push(j),
            None => {
                // identically zero coordinate: stuck at 0, so no
                // normalized invariant exists if this is the vacuum
                if j == vac {
                    return Ok(Enumeration {
                        invariants: Vec::new(),
                        bound_saturated: false,
                    });
                }
            }
        }
    }

    let mut walk = LatticeWalk {
        rows: &lattice,
        pivots: &pivots,
        finalized: &finalized,
        bounds: &bounds,
        vac,
        nodes: 0,
        solutions: Vec::new(),
    };
    if d == 0 {
        return Ok(Enumeration {
            invariants: Vec::new(),
            bound_saturated: false,
        });
    }
    let mut y = vec![0i128; m];
    walk.go(0, &mut y)?;

    let mut bound_saturated = false;
    let mut found: Vec<IntMatrix> = Vec::new();
    for sol in &walk.solutions {
        let mut z = IntMatrix::zeros(n, n);
        for (p, &(a, b)) in pairs.iter().enumerate() {
            if sol[p] != 0 {
                z.set(a, b, sol[p]);
            }
            if bounds[p] >= 2 && sol[p] == bounds[p] {
                bound_saturated = true;
            }
        }
        found.push(z);
    }
    found.sort_by(|a, b| {
        b.trace().cmp(&a.trace()).then_with(|| {
            (0..n)
                .map(|i| a.row(i).cmp(b.row(i)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });

    let mut invariants = Vec::with_capacity(found.len());
    for (i, z) in found.into_iter().enumerate() {
        invariants.push(ModularInvariant::new(
            Arc::clone(md),
            &format!("inv{}", i),
            z,
        )?);
    }
    Ok(Enumeration {
        invariants,
        bound_saturated,
    })
}

fn divisors(x: i64) -> Vec<i64> {
    (1..=x).filter(|d| x % d == 0).collect()
}

/// Enumerate the invariants of a cyclic anyon model and match each to a
/// divisor delta of n (n odd) or n/2 (n even) through the diagonal rule:
/// Z_{l, lbar} = 1 exactly on multiples of delta. Returns (delta, Z)
/// sorted by delta; errors if the counts or the matching disagree with
/// the divisor classification.
pub fn zn_invariants(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
) -> Result<Vec<(i64, ModularInvariant)>> {
    let n = md.n() as i64;
    let n_tilde = if n % 2 == 0 { n / 2 } else { n };
    let divs = divisors(n_tilde);
    let found = enumerate_physical(md, cfg)?.invariants;
    if found.len() != divs.len() {
        return Err(Error::ClassificationMismatch {
            found: found.len(),
            expected: divs.len(),
        });
    }
    let mut out: Vec<(i64, ModularInvariant)> = Vec::with_capacity(divs.len());
    for z in found {
        let diag: Vec<bool> = (0..n as usize)
            .map(|l| z.entry(l, z.md().conj(l)) == 1)
            .collect();
        let delta = divs.iter().copied().find(|&d| {
            (0..n).all(|l| diag[l as usize] == (l % d == 0))
        });
        match delta {
            Some(d) if !out.iter().any(|(e, _)| *e == d) => {
                let renamed =
                    ModularInvariant::unchecked(z.md_arc(), &format!("Z(delta={})", d), z.m);
                out.push((d, renamed));
            }
            _ => {
                return Err(Error::ClassificationMismatch {
                    found: out.len(),
                    expected: divs.len(),
                })
            }
        }
    }
    out.sort_by_key(|(d, _)| *d);
    Ok(out)
}

/// All ways to write M as a nonnegative integer combination of the given
/// normalized invariants. Since each basis element has vacuum entry 1,
/// the coefficients sum to M_00, which makes the search finite; the walk
/// is depth-first with entrywise feasibility pruning. An empty result
/// means no decomposition exists over this basis.
pub fn decompose(m: &IntMatrix, basis: &[&ModularInvariant]) -> Vec<Vec<i64>> {
    assert!(
        basis.iter().all(|z| z.is_normalized()),
        "basis must be normalized"
    );
    for z in basis {
        assert_eq!(z.n(), m.rows(), "basis shape mismatch");
    }
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; basis.len()];
    walk_decompositions(m.clone(), 0, basis, &mut coeffs, &mut out);
    out.sort();
    out
}

fn walk_decompositions(
    resid: IntMatrix,
    i: usize,
    basis: &[&ModularInvariant],
    coeffs: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if !resid.is_nonnegative() {
        return;
    }
    if i == basis.len() {
        if resid.nnz() == 0 {
            out.push(coeffs.clone());
        }
        return;
    }
    let z = basis[i].matrix();
    let mut cmax = resid.get(0, 0);
    for (r, c, v) in z.iter_nonzero() {
        cmax = cmax.min(resid.get(r, c) / v);
    }
    for c in 0..=cmax.max(0) {
        coeffs[i] = c;
        let next = if c == 0 {
            resid.clone()
        } else {
            resid.sub(&z.scale(c))
        };
        walk_decompositions(next, i + 1, basis, coeffs, out);
    }
    coeffs[i] = 0;
}

/// The five counting numbers attached to an invariant, each an exact
/// integer. tr Z^T Z is computed as the sum of squared entries and
/// (Z Z^T)_00 by an actual matrix product, so the redundancy with
/// sum_l Z_0l^2 is a genuine cross-check.
pub struct Counts {
    pub trace: i64,
    pub full_pairs: i64,
    pub row0_sq: i64,
    pub col0_sq: i64,
    pub zzstar_00: i64,
}

pub fn counts(z: &ModularInvariant) -> Counts {
    let m = z.matrix();
    let n = m.rows();
    let row0_sq = (0..n).map(|j| m.get(0, j).pow(2)).sum();
    let col0_sq = (0..n).map(|i| m.get(i, 0).pow(2)).sum();
    Counts {
        trace: m.trace(),
        full_pairs: m.sq_sum(),
        row0_sq,
        col0_sq,
        zzstar_00: m.mul(&m.transpose()).get(0, 0),
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tr Z           = {:<8} boundary sectors", self.trace)?;
        writeln!(
            f,
            "tr Z^T Z       = {:<8} full-system sectors",
            self.full_pairs
        )?;
        writeln!(
            f,
            "sum_l Z[0,l]^2 = {:<8} negative-chiral orbits",
            self.row0_sq
        )?;
        writeln!(
            f,
            "sum_l Z[l,0]^2 = {:<8} positive-chiral orbits",
            self.col0_sq
        )?;
        write!(
            f,
            "(Z Z*)[0,0]    = {:<8} vacuum pairing of the dual theta",
            self.zzstar_00
        )
    }
}

/// Entrywise check Z Z* >= B+^T B+ for a branching matrix B+ (rows are
/// extended sectors over the same labels), returning the difference.
/// When Z is a pure permutation, both sides must equal the identity.
pub fn parent_inequality_check(
    z: &ModularInvariant,
    b_plus: &IntMatrix,
) -> Result<IntMatrix> {
    assert_eq!(
        b_plus.cols(),
        z.n(),
        "branching columns must match label count"
    );
    let z_plus = b_plus.transpose().mul(b_plus);
    let zz = z.matrix().mul(&z.matrix().transpose());
    let diff = zz.sub(&z_plus);
    for i in 0..diff.rows() {
        for j in 0..diff.cols() {
            let v = diff.get(i, j);
            if v < 0 {
                return Err(Error::InequalityViolated {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    if z.matrix().as_permutation().is_ok() {
        let id = IntMatrix::identity(z.n());
        if zz != id || z_plus != id {
            return Err(Error::ValidationFailed(
                "permutation invariant must satisfy ZZ* = B+^T B+ = 1".into(),
            ));
        }
    }
    Ok(diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{level_one, su_n_k, zn_anyon, LevelOneFamily};

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn su2(k: u32) -> Arc<ModularData> {
        Arc::new(su_n_k(2, k, &cfg()).unwrap())
    }

    fn su3(k: u32) -> Arc<ModularData> {
        Arc::new(su_n_k(3, k, &cfg()).unwrap())
    }

    #[test]
    fn a_series_is_the_identity() {
        let md = su2(16);
        let a = ade_invariant(&md, Diagram::A(17)).unwrap();
        assert_eq!(*a.matrix(), IntMatrix::identity(17));
        assert!(a.is_normalized());
        let c = counts(&a);
        assert_eq!(c.trace, 17);
        assert_eq!(c.full_pairs, 17);
        assert_eq!(c.row0_sq, 1);
        assert_eq!(c.col0_sq, 1);
        assert_eq!(c.zzstar_00, 1);
    }

    #[test]
    fn wrong_level_is_rejected() {
        let md = su2(16);
        assert!(matches!(
            ade_invariant(&md, Diagram::E6),
            Err(Error::IncompatibleLevel { .. })
        ));
        assert!(matches!(
            ade_invariant(&md, Diagram::D(9)),
            Err(Error::IncompatibleLevel { .. })
        ));
        assert!(matches!(
            ade_invariant(&md, Diagram::D(3)),
            Err(Error::IncompatibleLevel { .. })
        ));
    }

    #[test]
    fn d_even_blocks_and_d_odd_permutation() {
        let d10 = ade_invariant(&su2(16), Diagram::D(10)).unwrap();
        assert_eq!(d10.trace(), 10);
        assert_eq!(d10.entry(8, 8), 2);
        assert_eq!(d10.entry(0, 16), 1);
        assert_eq!(d10.entry(2, 14), 1);
        assert!(d10.is_normalized());

        let d5 = ade_invariant(&su2(6), Diagram::D(5)).unwrap();
        assert_eq!(d5.trace(), 5);
        assert!(d5.matrix().as_permutation().is_ok());
        // order two permutation: D5 squared is the diagonal invariant
        assert_eq!(d5.product(&d5), IntMatrix::identity(7));
    }

    #[test]
    fn d4_matches_its_block_form() {
        let md = su2(4);
        let d4 = ade_invariant(&md, Diagram::D(4)).unwrap();
        let mut want = IntMatrix::zeros(5, 5);
        for (i, j) in [(0, 0), (0, 4), (4, 0), (4, 4)] {
            want.set(i, j, 1);
        }
        want.set(2, 2, 2);
        assert_eq!(*d4.matrix(), want);
    }

    #[test]
    fn exceptional_product_rules() {
        let md = su2(16);
        let d10 = ade_invariant(&md, Diagram::D(10)).unwrap();
        let e7 = ade_invariant(&md, Diagram::E7).unwrap();
        assert_eq!(e7.product(&e7), d10.matrix().add(e7.matrix()));
        assert_eq!(d10.product(&d10), d10.matrix().scale(2));

        let md10 = su2(10);
        let e6 = ade_invariant(&md10, Diagram::E6).unwrap();
        assert_eq!(e6.trace(), 6);
        assert_eq!(e6.product(&e6), e6.matrix().scale(2));

        let md28 = su2(28);
        let e8 = ade_invariant(&md28, Diagram::E8).unwrap();
        assert_eq!(e8.product(&e8), e8.matrix().scale(4));
    }

    #[test]
    fn squared_invariant_verifies_but_is_not_normalized() {
        let md = su2(16);
        let e7 = ade_invariant(&md, Diagram::E7).unwrap();
        let sq = e7.product(&e7);
        let report = verify_invariant(&md, &sq, md.cfg());
        assert!(report.pass(), "{}", report);
        assert_eq!(sq.get(0, 0), 2);
    }

    #[test]
    fn decompose_recovers_the_product_rules() {
        let md = su2(16);
        let a17 = ade_invariant(&md, Diagram::A(17)).unwrap();
        let d10 = ade_invariant(&md, Diagram::D(10)).unwrap();
        let e7 = ade_invariant(&md, Diagram::E7).unwrap();
        let basis = [&a17, &d10, &e7];
        assert_eq!(decompose(&d10.product(&d10), &basis), vec![vec![0, 2, 0]]);
        assert_eq!(decompose(&e7.product(&e7), &basis), vec![vec![0, 1, 1]]);
        assert_eq!(decompose(d10.matrix(), &basis), vec![vec![0, 1, 0]]);
    }

    #[test]
    fn enumeration_at_level_16_is_exactly_a_d_e() {
        let md = su2(16);
        let found = enumerate_physical(&md, md.cfg()).unwrap();
        assert_eq!(found.invariants.len(), 3);
        assert!(!found.bound_saturated);
        let a17 = ade_invariant(&md, Diagram::A(17)).unwrap();
        let d10 = ade_invariant(&md, Diagram::D(10)).unwrap();
        let e7 = ade_invariant(&md, Diagram::E7).unwrap();
        for want in [&a17, &d10, &e7] {
            assert!(
                found
                    .invariants
                    .iter()
                    .any(|z| z.matrix() == want.matrix()),
                "{} missing from enumeration",
                want.name()
            );
        }
        // sorted by descending trace: identity first
        assert_eq!(*found.invariants[0].matrix(), IntMatrix::identity(17));
    }

    #[test]
    fn enumeration_at_level_4_contains_d4() {
        let md = su2(4);
        let found = enumerate_physical(&md, md.cfg()).unwrap();
        assert_eq!(found.invariants.len(), 2);
        let d4 = ade_invariant(&md, Diagram::D(4)).unwrap();
        assert!(found
            .invariants
            .iter()
            .any(|z| z.matrix() == d4.matrix()));
        assert!(found
            .invariants
            .iter()
            .any(|z| *z.matrix() == IntMatrix::identity(5)));
    }

    #[test]
    fn so48_enumeration_contains_the_heterotic_pair() {
        let md = Arc::new(level_one(LevelOneFamily::So(48), &cfg()).unwrap());
        let found = enumerate_physical(&md, md.cfg()).unwrap();
        assert_eq!(found.invariants.len(), 6);
        // labels 0, v, s, c at indices 0..4
        let mut q = IntMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (2, 0), (0, 3), (2, 3)] {
            q.set(i, j, 1);
        }
        assert!(found.invariants.iter().any(|z| *z.matrix() == q));
        assert!(found
            .invariants
            .iter()
            .any(|z| *z.matrix() == q.transpose()));
        assert!(!q.is_symmetric());
    }

    #[test]
    fn su3_altitude_8_verifies() {
        let e8 = su3_invariant(&su3(5), Su3Series::E8).unwrap();
        assert_eq!(e8.trace(), 12);
        assert!(e8.is_normalized());
    }

    #[test]
    fn su3_altitude_12_block_structure() {
        let md = su3(9);
        let e12 = su3_invariant(&md, Su3Series::E12).unwrap();
        assert_eq!(e12.trace(), 12);
        let vac_ones: i64 = (0..md.n()).map(|j| e12.entry(0, j)).sum();
        assert_eq!(vac_ones, 6);
        let i22 = md.index_of_weight(&[2, 2]).unwrap();
        assert_eq!(e12.entry(i22, i22), 2);
    }

    #[test]
    fn su3_orbifold_from_the_simple_current() {
        let md = su3(9);
        let d12 = su3_invariant(&md, Su3Series::D12).unwrap();
        assert_eq!(d12.trace(), 21);
        let fp = md.index_of_weight(&[3, 3]).unwrap();
        assert_eq!(d12.entry(fp, fp), 3);
        // vacuum row covers exactly the current orbit of the identity
        for j in 0..md.n() {
            let w = &md.label(j).weight;
            let expected = [&[0, 0][..], &[9, 0], &[0, 9]]
                .iter()
                .any(|t| w.as_slice() == *t);
            assert_eq!(d12.entry(0, j) == 1, expected, "vacuum row at {:?}", w);
        }
    }

    #[test]
    fn su3_altitude_24_has_two_twelve_blocks() {
        let md = su3(21);
        let e24 = su3_invariant(&md, Su3Series::E24).unwrap();
        assert_eq!(e24.trace(), 24);
        assert_eq!(e24.matrix().sq_sum(), 2 * 12 * 12);
        let vac_ones: i64 = (0..md.n()).map(|j| e24.entry(0, j)).sum();
        assert_eq!(vac_ones, 12);
    }

    #[test]
    fn su7_structure_and_multiplication() {
        let md = Arc::new(su_n_k(7, 7, &cfg()).unwrap());
        let (z1, zs) = su7_invariants(&md).unwrap();
        assert_eq!(z1.trace(), 96);
        assert_eq!(zs.trace(), 60);
        let fp = md.index_of_weight(&[1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(z1.entry(fp, fp), 33);
        assert_eq!(zs.entry(fp, fp), 25);
        assert_eq!(zs.entry(0, fp), 5);
        assert_eq!(z1.matrix().sq_sum(), 3168);
        assert_eq!(zs.matrix().sq_sum(), 3600);

        let want = z1.matrix().scale(28).add(&zs.matrix().scale(8));
        assert_eq!(z1.product(&z1), want);
        assert_eq!(zs.product(&zs), zs.matrix().scale(60));
        assert_eq!(
            decompose(&z1.product(&z1), &[&z1, &zs]),
            vec![vec![28, 8]]
        );
    }

    #[test]
    fn cyclic_models_classify_by_divisors() {
        let z5 = Arc::new(zn_anyon(5, 2, &cfg()).unwrap());
        let inv5 = zn_invariants(&z5, z5.cfg()).unwrap();
        assert_eq!(inv5.iter().map(|(d, _)| *d).collect::<Vec<_>>(), [1, 5]);

        let z9 = Arc::new(zn_anyon(9, 2, &cfg()).unwrap());
        let inv9 = zn_invariants(&z9, z9.cfg()).unwrap();
        assert_eq!(
            inv9.iter().map(|(d, _)| *d).collect::<Vec<_>>(),
            [1, 3, 9]
        );
        // Z^(d) on the conjugate diagonal equals Z^(n/d) on the diagonal
        for (d, z) in &inv9 {
            let dual = inv9.iter().find(|(e, _)| *e == 9 / d).unwrap();
            for l in 0..9 {
                assert_eq!(z.entry(l, z9.conj(l)), dual.1.entry(l, l));
            }
        }

        let z15 = Arc::new(zn_anyon(15, 2, &cfg()).unwrap());
        let inv15 = zn_invariants(&z15, z15.cfg()).unwrap();
        assert_eq!(
            inv15.iter().map(|(d, _)| *d).collect::<Vec<_>>(),
            [1, 3, 5, 15]
        );
    }

    #[test]
    fn conjugation_acts_and_squares_to_one() {
        let z5 = Arc::new(zn_anyon(5, 2, &cfg()).unwrap());
        let found = enumerate_physical(&z5, z5.cfg()).unwrap().invariants;
        let id = found
            .iter()
            .find(|z| *z.matrix() == IntMatrix::identity(5))
            .unwrap();
        let c = conjugate(id).unwrap();
        assert!(c.matrix().as_permutation().is_ok());
        assert_ne!(c.matrix(), id.matrix());
        let c2 = conjugate(&c).unwrap();
        assert_eq!(c2.matrix(), id.matrix());

        // a conjugation-closed block invariant is fixed by C
        let md = su3(9);
        let e12 = su3_invariant(&md, Su3Series::E12).unwrap();
        assert_eq!(conjugate(&e12).unwrap().matrix(), e12.matrix());
    }

    #[test]
    fn parent_inequality_holds_with_equality_cases() {
        let md10 = su2(10);
        let e6 = ade_invariant(&md10, Diagram::E6).unwrap();
        // vacuum block branching: one row per block
        let mut b = IntMatrix::zeros(3, 11);
        for (row, pair) in [[0usize, 6], [3, 7], [4, 10]].iter().enumerate() {
            for &l in pair {
                b.set(row, l, 1);
            }
        }
        let diff = parent_inequality_check(&e6, &b).unwrap();
        // ZZ* = 2Z and B^T B = Z leave exactly Z
        assert_eq!(diff, *e6.matrix());

        let md = su2(4);
        let a5 = ade_invariant(&md, Diagram::A(5)).unwrap();
        let id5 = IntMatrix::identity(5);
        let diff = parent_inequality_check(&a5, &id5).unwrap();
        assert_eq!(diff, IntMatrix::zeros(5, 5));

        let bad = id5.scale(2);
        assert!(matches!(
            parent_inequality_check(&a5, &bad),
            Err(Error::InequalityViolated { .. }) | Err(Error::ValidationFailed(_))
        ));
    }

    #[test]
    fn su7_blocks_match_the_fixed_point_s_row() {
        // The spinor sectors of the ambient theory restrict to four
        // copies of the fixed point, which forces S_{fp, mu} to equal
        // (u - w)(mu) / 8. The stored seeds must reproduce that sign
        // pattern exactly.
        let md = Arc::new(su_n_k(7, 7, &cfg()).unwrap());
        let fp = md.index_of_weight(&SU7_FIXED_POINT).unwrap();
        let mut u = z7_orbit_indicator(&md, &SU7_VACUUM_SEEDS).unwrap();
        u[fp] = 1;
        let w = z7_orbit_indicator(&md, &SU7_VECTOR_SEEDS).unwrap();
        let row = md.s_row(fp);
        for mu in 0..md.n() {
            let eight = (row[mu].approx_f64().0 * 8.0).round() as i64;
            assert!((row[mu].approx_f64().0 * 8.0 - eight as f64).abs() < 1e-9);
            assert_eq!(eight, u[mu] - w[mu], "at label {}", md.label(mu).name);
        }
    }

    #[test]
    fn non_invariant_is_rejected() {
        let md = su2(4);
        let mut m = IntMatrix::identity(5);
        m.set(0, 1, 1);
        let report = verify_invariant(&md, &m, md.cfg());
        assert!(!report.pass());
        assert!(ModularInvariant::new(Arc::clone(&md), "bad", m).is_err());
    }
}
