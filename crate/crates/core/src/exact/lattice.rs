use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

type Row = Vec<BigInt>;

/// Basis (HNF rows) of the lattice of *integer* vectors inside the
/// rational span of the given generators.
///
/// Denominator clearing plus HNF alone produces a finite-index sublattice;
/// the saturation step (double integer kernel) is what makes the result
/// exactly rational-span intersect Z^N. Example: span{(1/2, 1/2)} must
/// yield (1, 1).
pub fn integral_lattice(gens: &[Vec<Rational64>]) -> Vec<Row> {
    let mut rows: Vec<Row> = gens
        .iter()
        .map(|g| clear_denominators(g))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    for r in &mut rows {
        divide_by_content(r);
    }
    let kernel = int_kernel(&rows);
    let saturated = if kernel.is_empty() {
        // full rational span: the integer lattice is all of Z^n
        (0..n)
            .map(|j| {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::from(1);
                e
            })
            .collect()
    } else {
        int_kernel(&kernel)
    };
    let (h, _) = row_hnf_with_transform(saturated);
    h.into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

fn clear_denominators(g: &[Rational64]) -> Row {
    let mut l = BigInt::from(1);
    for q in g {
        l = l.lcm(&BigInt::from(*q.denom()));
    }
    g.iter()
        .map(|q| BigInt::from(*q.numer()) * &l / BigInt::from(*q.denom()))
        .collect()
}

fn divide_by_content(r: &mut Row) {
    let mut g = BigInt::zero();
    for x in r.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::from(1) {
        for x in r.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Basis of { v in Z^n : M v = 0 } for the matrix with the given rows.
pub fn int_kernel(m: &[Row]) -> Vec<Row> {
    let rows = m.len();
    assert!(rows > 0);
    let cols = m[0].len();
    // left-kernel of M^T: row-reduce M^T with a unimodular transform; the
    // transform rows matching zero rows of the HNF span the kernel.
    let mt: Vec<Row> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect();
    let (h, u) = row_hnf_with_transform(mt);
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

/// Row-style Hermite normal form together with the unimodular transform
/// U such that U * input = H. Pivots are positive, entries above a pivot
/// are reduced into [0, pivot).
pub fn row_hnf_with_transform(mut h: Vec<Row>) -> (Vec<Row>, Vec<Row>) {
    let rows = h.len();
    let cols = if rows > 0 { h[0].len() } else { 0 };
    let mut u: Vec<Row> = (0..rows)
        .map(|i| {
            let mut e = vec![BigInt::zero(); rows];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut prow = 0usize;
    for col in 0..cols {
        if prow >= rows {
            break;
        }
        // Euclid the column below prow down to one nonzero entry
        loop {
            let mut best: Option<usize> = None;
            for r in prow..rows {
                if !h[r][col].is_zero()
                    && best
                        .map(|b| h[r][col].abs() < h[b][col].abs())
                        .unwrap_or(true)
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(prow, b);
            u.swap(prow, b);
            let mut any = false;
            for r in (prow + 1)..rows {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = div_floor_big(&h[r][col], &h[prow][col]);
                row_sub(&mut h, r, prow, &q);
                row_sub(&mut u, r, prow, &q);
                if !h[r][col].is_zero() {
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        if h[prow][col].is_zero() {
            continue;
        }
        if h[prow][col].is_negative() {
            for x in h[prow].iter_mut() {
                *x = -&*x;
            }
            for x in u[prow].iter_mut() {
                *x = -&*x;
            }
        }
        for r in 0..prow {
            if h[r][col].is_zero() {
                continue;
            }
            let q = div_floor_big(&h[r][col], &h[prow][col]);
            row_sub(&mut h, r, prow, &q);
            row_sub(&mut u, r, prow, &q);
        }
        prow += 1;
    }
    (h, u)
}

fn row_sub(m: &mut [Row], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row.iter()) {
        *d -= q * s;
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}
