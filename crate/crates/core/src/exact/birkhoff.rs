use super::intmat::IntMatrix;
use crate::error::{Error, Result};

/// Decompose a nonnegative integer matrix with equal row and column sums
/// r into exactly r permutation matrices (Birkhoff-von Neumann, integer
/// form). Extraction order is deterministic: the lexicographically
/// smallest permutation supported by the remaining matrix comes first,
/// and is pulled out with its full multiplicity.
pub fn permutation_sum_decomposition(m: &IntMatrix) -> Result<Vec<(Vec<usize>, i64)>> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::NotDecomposable(format!(
            "matrix is {}x{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_nonnegative() {
        return Err(Error::NotDecomposable("negative entry".into()));
    }
    let target: i64 = m.row(0).iter().sum();
    for i in 0..n {
        let rs: i64 = m.row(i).iter().sum();
        let cs: i64 = (0..n).map(|r| m.get(r, i)).sum();
        if rs != target || cs != target {
            return Err(Error::NotDecomposable(format!(
                "row/column sums differ (row {} sums {}, column {} sums {}, expected {})",
                i, rs, i, cs, target
            )));
        }
    }

    let mut rem = m.clone();
    let mut out: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut extracted = 0i64;
    while extracted < target {
        let perm = lex_smallest_permutation(&rem).ok_or_else(|| {
            Error::NotDecomposable("support admits no perfect matching".into())
        })?;
        let mult = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| rem.get(i, j))
            .min()
            .expect("nonempty permutation");
        for (i, &j) in perm.iter().enumerate() {
            rem.set(i, j, rem.get(i, j) - mult);
        }
        extracted += mult;
        out.push((perm, mult));
    }
    debug_assert!(rem.iter_nonzero().next().is_none());
    Ok(out)
}

/// Lexicographically smallest permutation pi with m[i][pi(i)] > 0 for
/// all i, or None when the support has no perfect matching.
fn lex_smallest_permutation(m: &IntMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut used = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let mut chosen = None;
        for j in 0..n {
            if used[j] || m.get(i, j) == 0 {
                continue;
            }
            used[j] = true;
            if rest_has_matching(m, i + 1, &used) {
                chosen = Some(j);
                break;
            }
            used[j] = false;
        }
        perm.push(chosen?);
    }
    Some(perm)
}

/// Can rows from..n be perfectly matched into unused columns?
fn rest_has_matching(m: &IntMatrix, from: usize, used_cols: &[bool]) -> bool {
    let n = m.rows();
    let mut match_col: Vec<Option<usize>> = vec![None; n]; // col -> row
    for row in from..n {
        let mut seen = vec![false; n];
        if !augment(m, row, from, used_cols, &mut seen, &mut match_col) {
            return false;
        }
    }
    true
}

fn augment(
    m: &IntMatrix,
    row: usize,
    from: usize,
    used_cols: &[bool],
    seen: &mut [bool],
    match_col: &mut [Option<usize>],
) -> bool {
    let n = m.rows();
    for col in 0..n {
        if used_cols[col] || seen[col] || m.get(row, col) == 0 {
            continue;
        }
        seen[col] = true;
        let free = match match_col[col] {
            None => true,
            Some(other) => augment(m, other, from, used_cols, seen, match_col),
        };
        if free {
            match_col[col] = Some(row);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_block_plus_swap_block() {
        // 2*I_4 (+) [[1,1],[1,1]]: identity first, then the swap of the
        // last two coordinates.
        let mut m = IntMatrix::zeros(6, 6);
        for i in 0..4 {
            m.set(i, i, 2);
        }
        for i in 4..6 {
            for j in 4..6 {
                m.set(i, j, 1);
            }
        }
        let d = permutation_sum_decomposition(&m).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], (vec![0, 1, 2, 3, 4, 5], 1));
        assert_eq!(d[1], (vec![0, 1, 2, 3, 5, 4], 1));
    }

    #[test]
    fn six_three_three_block() {
        let m = IntMatrix::from_rows(vec![vec![6, 0, 0], vec![0, 3, 3], vec![0, 3, 3]]);
        let d = permutation_sum_decomposition(&m).unwrap();
        assert_eq!(d, vec![(vec![0, 1, 2], 3), (vec![0, 2, 1], 3)]);
    }

    #[test]
    fn rejects_unbalanced() {
        let m = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]);
        assert!(matches!(
            permutation_sum_decomposition(&m),
            Err(Error::NotDecomposable(_))
        ));
    }

    #[test]
    fn multiplicities_sum_to_row_sum() {
        let m = IntMatrix::from_rows(vec![
            vec![2, 1, 0],
            vec![0, 2, 1],
            vec![1, 0, 2],
        ]);
        let d = permutation_sum_decomposition(&m).unwrap();
        let total: i64 = d.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 3);
        // recompose
        let mut sum = IntMatrix::zeros(3, 3);
        for (p, c) in &d {
            sum = sum.add(&IntMatrix::from_permutation(p).scale(*c));
        }
        assert_eq!(sum, m);
    }
}
