//! Modular data for the level-one theories used as extension targets:
//! SU(m)_1, SO(m)_1, and the exceptional series at level one.

use super::zn::{abelian_modular, AbelianSpec};
use super::{Label, ModularData, SStore};
use crate::error::{Error, Result};
use crate::exact::{CMatrix, Complex, PrecisionConfig, Real};
use num_rational::Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelOneFamily {
    Su(u32),
    So(u32),
    E6,
    E7,
    G2,
    E8,
}

pub fn level_one(family: LevelOneFamily, cfg: &PrecisionConfig) -> Result<ModularData> {
    match family {
        LevelOneFamily::Su(m) => su_m_1(m, cfg),
        LevelOneFamily::So(m) => {
            if m < 3 {
                return Err(Error::BadInput(format!("SO({m})_1 needs m >= 3")));
            }
            if m % 2 == 0 {
                so_even(m / 2, cfg)
            } else {
                so_odd((m - 1) / 2, cfg)
            }
        }
        LevelOneFamily::E6 => abelian_modular(
            AbelianSpec {
                name: "(E6)_1".into(),
                names: vec!["0".into(), "1".into(), "2".into()],
                weights: vec![vec![0], vec![1], vec![2]],
                h: vec![
                    Rational64::new(0, 1),
                    Rational64::new(2, 3),
                    Rational64::new(2, 3),
                ],
                add: cyclic_table(3),
                c: Some(Rational64::from_integer(6)),
            },
            cfg,
        ),
        LevelOneFamily::E7 => abelian_modular(
            AbelianSpec {
                name: "(E7)_1".into(),
                names: vec!["0".into(), "1".into()],
                weights: vec![vec![0], vec![1]],
                h: vec![Rational64::new(0, 1), Rational64::new(3, 4)],
                add: cyclic_table(2),
                c: Some(Rational64::from_integer(7)),
            },
            cfg,
        ),
        LevelOneFamily::G2 => fibonacci(cfg),
        LevelOneFamily::E8 => abelian_modular(
            AbelianSpec {
                name: "(E8)_1".into(),
                names: vec!["0".into()],
                weights: vec![vec![0]],
                h: vec![Rational64::new(0, 1)],
                add: vec![vec![0]],
                c: Some(Rational64::from_integer(8)),
            },
            cfg,
        ),
    }
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

fn su_m_1(m: u32, cfg: &PrecisionConfig) -> Result<ModularData> {
    if m < 2 {
        return Err(Error::BadInput(format!("SU({m})_1 needs m >= 2")));
    }
    let n = m as i64;
    abelian_modular(
        AbelianSpec {
            name: format!("SU({})_1", m),
            names: (0..n).map(|j| j.to_string()).collect(),
            weights: (0..n).map(|j| vec![j]).collect(),
            // h of the j-th fundamental: j(m-j)/2m.
            h: (0..n).map(|j| Rational64::new(j * (n - j), 2 * n)).collect(),
            add: cyclic_table(m as usize),
            c: Some(Rational64::from_integer(n - 1)),
        },
        cfg,
    )
}

/// SO(2r)_1: sectors 0, v, s, c with h_v = 1/2, h_s = h_c = r/8.
/// The fusion group is Z_4 (generated by s) for odd r and Z_2 x Z_2 for
/// even r; c = r.
fn so_even(r: u32, cfg: &PrecisionConfig) -> Result<ModularData> {
    let add = if r % 2 == 0 {
        // Klein group: v s = c, s s = 0.
        vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ]
    } else {
        // Z_4: s s = v, s c = 0.
        vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 1, 0],
            vec![3, 2, 0, 1],
        ]
    };
    let rr = r as i64;
    abelian_modular(
        AbelianSpec {
            name: format!("SO({})_1", 2 * r),
            names: vec!["0".into(), "v".into(), "s".into(), "c".into()],
            weights: vec![vec![0], vec![1], vec![2], vec![3]],
            h: vec![
                Rational64::new(0, 1),
                Rational64::new(1, 2),
                Rational64::new(rr, 8),
                Rational64::new(rr, 8),
            ],
            add,
            c: Some(Rational64::from_integer(rr)),
        },
        cfg,
    )
}

/// SO(2r+1)_1: Ising-type data with sigma of dimension sqrt(2),
/// h_sigma = (2r+1)/16, c = (2r+1)/2.
fn so_odd(r: u32, cfg: &PrecisionConfig) -> Result<ModularData> {
    let m = 2 * r as i64 + 1;
    let half = cfg.ratio(Rational64::new(1, 2));
    let b = Real::with_val(cfg.bits(), cfg.sqrt_u64(2) / 2u32);
    let zero = cfg.zero();
    let vals: [[Real; 3]; 3] = [
        [half.clone(), half.clone(), b.clone()],
        [half.clone(), half.clone(), Real::with_val(cfg.bits(), -&b)],
        [b.clone(), Real::with_val(cfg.bits(), -&b), zero],
    ];
    let s = CMatrix::from_fn(3, 3, |i, j| Complex::from_real(vals[i][j].clone()));
    let labels = vec![
        Label {
            index: 0,
            name: "0".into(),
            weight: vec![0],
            h: Rational64::new(0, 1),
        },
        Label {
            index: 1,
            name: "psi".into(),
            weight: vec![1],
            h: Rational64::new(1, 2),
        },
        Label {
            index: 2,
            name: "sigma".into(),
            weight: vec![2],
            h: Rational64::new(m, 16),
        },
    ];
    ModularData::assemble(
        format!("SO({})_1", m),
        labels,
        Rational64::new(m, 2),
        vec![0, 1, 2],
        cfg.clone(),
        SStore::Dense(s),
    )
}

/// (G2)_1: two sectors with Fibonacci fusion, h_tau = 2/5, c = 14/5.
fn fibonacci(cfg: &PrecisionConfig) -> Result<ModularData> {
    let p = cfg.bits();
    let s1 = Complex::from_phase_turns(cfg, Rational64::new(1, 10)).im; // sin(pi/5)
    let s2 = Complex::from_phase_turns(cfg, Rational64::new(1, 5)).im; // sin(2 pi/5)
    let f = Real::with_val(p, 2u32) / cfg.sqrt_u64(5);
    let a = Real::with_val(p, &f * &s1);
    let b = Real::with_val(p, &f * &s2);
    let s = CMatrix::from_fn(2, 2, |i, j| {
        let v = match (i, j) {
            (1, 1) => Real::with_val(p, -&a),
            (0, 0) => a.clone(),
            _ => b.clone(),
        };
        Complex::from_real(v)
    });
    let labels = vec![
        Label {
            index: 0,
            name: "0".into(),
            weight: vec![0],
            h: Rational64::new(0, 1),
        },
        Label {
            index: 1,
            name: "tau".into(),
            weight: vec![1],
            h: Rational64::new(2, 5),
        },
    ];
    ModularData::assemble(
        "(G2)_1".into(),
        labels,
        Rational64::new(14, 5),
        vec![0, 1],
        cfg.clone(),
        SStore::Dense(s),
    )
}
