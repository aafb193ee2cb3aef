//! Abelian anyon models: every sector has unit dimension and fusion is a
//! finite group. S comes from the statistics phases,
//! S_xy = |z|^{-1} omega_x omega_y / omega_{xy}, which is unitary exactly
//! when |z|^2 equals the group order.

use super::{mod1, Label, ModularData, SStore};
use crate::error::{Error, Result};
use crate::exact::{nearest_integer, CMatrix, Complex, PrecisionConfig, Real};
use num_rational::Rational64;

pub(crate) struct AbelianSpec {
    pub name: String,
    pub names: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub h: Vec<Rational64>,
    /// Cayley table of the fusion group; index 0 is the identity.
    pub add: Vec<Vec<usize>>,
    /// True central charge when known; otherwise snapped from arg(z).
    pub c: Option<Rational64>,
}

pub(crate) fn abelian_modular(spec: AbelianSpec, cfg: &PrecisionConfig) -> Result<ModularData> {
    let n = spec.h.len();
    if spec.add.len() != n || spec.add.iter().any(|r| r.len() != n) {
        return Err(Error::BadInput("fusion table shape mismatch".into()));
    }
    for j in 0..n {
        if spec.add[0][j] != j {
            return Err(Error::BadInput("index 0 must be the group identity".into()));
        }
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        for j in 0..n {
            let v = spec.add[i][j];
            if v >= n || seen[v] || spec.add[j][i] != v {
                return Err(Error::BadInput("fusion table is not an abelian group".into()));
            }
            seen[v] = true;
        }
    }

    let mut z = Complex::zero(cfg);
    for &h in &spec.h {
        z += &Complex::from_phase_turns(cfg, mod1(h));
    }
    let z_abs = z.abs().to_f64();
    if (z_abs * z_abs - n as f64).abs() > 1e-6 {
        return Err(Error::DegenerateBraiding { z_abs });
    }

    let inv_root = Real::with_val(cfg.bits(), 1u32) / cfg.sqrt_u64(n as u64);
    let s = CMatrix::from_fn(n, n, |i, j| {
        let turn = mod1(spec.h[i] + spec.h[j] - spec.h[spec.add[i][j]]);
        Complex::from_phase_turns(cfg, turn).scale(&inv_root)
    });

    let conj: Vec<usize> = (0..n)
        .map(|i| (0..n).find(|&j| spec.add[i][j] == 0).expect("group has inverses"))
        .collect();

    let c = match spec.c {
        Some(c) => c,
        None => {
            // Milgram: z/|z| is e^{2 pi i sigma/8} with sigma an integer,
            // so 4 arg(z)/pi snaps to an integer mod 8.
            let p = cfg.bits();
            let c_val = Real::with_val(p, 4 * &z.arg()) / cfg.pi();
            let c_int = nearest_integer(&c_val, cfg)?;
            Rational64::from_integer(c_int.rem_euclid(8))
        }
    };

    let labels: Vec<Label> = (0..n)
        .map(|index| Label {
            index,
            name: spec.names[index].clone(),
            weight: spec.weights[index].clone(),
            h: spec.h[index],
        })
        .collect();

    ModularData::assemble(spec.name, labels, c, conj, cfg.clone(), SStore::Dense(s))
}

/// The Z_n anyon model with statistics omega_x = e^{2 pi i a x^2 / 2n}.
/// Needs gcd(a, n) = 1, and a even when n is odd; otherwise the braiding
/// is degenerate and construction fails.
pub fn zn_anyon(n: u32, a: i64, cfg: &PrecisionConfig) -> Result<ModularData> {
    if n == 0 {
        return Err(Error::BadInput("modulus must be positive".into()));
    }
    let m = n as i64;
    let h: Vec<Rational64> = (0..m)
        .map(|x| mod1(Rational64::new(a * x * x, 2 * m)))
        .collect();
    let add: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).map(|j| ((i + j) % m) as usize).collect())
        .collect();
    abelian_modular(
        AbelianSpec {
            name: format!("Z_{}(a={})", n, a),
            names: (0..m).map(|x| x.to_string()).collect(),
            weights: (0..m).map(|x| vec![x]).collect(),
            h,
            add,
            c: None,
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::UnitRoots;
    use crate::modular::{charge_conjugation, verify_modular};

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn z5_h_values() {
        let md = zn_anyon(5, 2, &cfg()).unwrap();
        let h: Vec<Rational64> = (0..5).map(|i| md.h(i)).collect();
        assert_eq!(
            h,
            vec![
                Rational64::new(0, 1),
                Rational64::new(1, 5),
                Rational64::new(4, 5),
                Rational64::new(4, 5),
                Rational64::new(1, 5),
            ]
        );
    }

    #[test]
    fn s_matrix_is_discrete_fourier_kernel() {
        // Independent form: S_xy = n^{-1/2} e^{-2 pi i a x y / n}.
        for (n, a) in [(5i64, 2i64), (9, 2), (8, 1), (15, 2)] {
            let md = zn_anyon(n as u32, a, &cfg()).unwrap();
            let roots = UnitRoots::new(&cfg(), n);
            let scale = Real::with_val(cfg().bits(), 1u32) / cfg().sqrt_u64(n as u64);
            for x in 0..n as usize {
                let row = md.s_row(x);
                for y in 0..n as usize {
                    let expect = roots.phase(-a * x as i64 * y as i64).scale(&scale);
                    assert!(
                        (&row[y] - &expect).abs().to_f64() < 1e-40,
                        "mismatch at ({x},{y}) for n={n}, a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn conjugation_is_negation() {
        let md = zn_anyon(5, 2, &cfg()).unwrap();
        let c = charge_conjugation(&md);
        assert_eq!(c, vec![0, 4, 3, 2, 1]);
    }

    #[test]
    fn z9_validates_with_integer_charge() {
        let md = zn_anyon(9, 2, &cfg()).unwrap();
        assert!(md.central_charge().is_integer());
        let report = verify_modular(&md, md.cfg());
        assert!(report.pass(), "{}", report);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        // gcd(a, n) > 1 makes the form degenerate.
        assert!(matches!(
            zn_anyon(4, 2, &cfg()),
            Err(Error::DegenerateBraiding { .. })
        ));
        // n odd with a odd is not a well-defined quadratic form on Z_n.
        assert!(matches!(
            zn_anyon(3, 1, &cfg()),
            Err(Error::DegenerateBraiding { .. })
        ));
    }

    #[test]
    fn semion_like_even_n_odd_a_is_fine() {
        let md = zn_anyon(2, 1, &cfg()).unwrap();
        assert_eq!(md.h(1), Rational64::new(1, 4));
        assert_eq!(md.central_charge(), Rational64::from_integer(1));
    }
}
