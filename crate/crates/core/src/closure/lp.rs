//! Exact feasibility for small rational linear systems.

use num_traits::{One, Signed, Zero};

use crate::poly::Coeff;

/// Whether `A x = b, x ≥ 0` has a solution, with `b ≥ 0`.
///
/// Phase one of the simplex method over the rationals: one artificial
/// variable per row, minimize their sum, Bland's rule for pivoting so the
/// method terminates.
pub(crate) fn feasible(a: &[Vec<Coeff>], b: &[Coeff]) -> bool {
    let rows = a.len();
    if rows == 0 {
        return true;
    }
    let cols = a[0].len();
    debug_assert!(b.iter().all(|x| !x.is_negative()));
    let width = cols + rows;
    // Tableau rows: [A | I | b]; objective row holds reduced costs of the
    // phase-one objective, last entry is minus its current value.
    let mut t: Vec<Vec<Coeff>> = (0..rows)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend((0..rows).map(|k| if k == i { Coeff::one() } else { Coeff::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj = vec![Coeff::zero(); width + 1];
    for r in &t {
        for (k, v) in r.iter().enumerate() {
            if k < cols || k == width {
                obj[k] -= v;
            }
        }
    }
    let mut basis: Vec<usize> = (cols..width).collect();
    while let Some(enter) = (0..width).find(|&k| obj[k].is_negative()) {
        let mut leave: Option<(usize, Coeff)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            // Unbounded below cannot happen for a sum of nonnegative
            // artificials; treat defensively as infeasible.
            return false;
        };
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (k, v) in row.iter_mut().enumerate() {
                    *v -= &f * &prow[k];
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (k, v) in obj.iter_mut().enumerate() {
                *v -= &f * &prow[k];
            }
        }
        basis[p] = enter;
    }
    obj[width].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Coeff>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    fn v(xs: &[i64]) -> Vec<Coeff> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn simple_systems() {
        // x + y = 1, x - y = 0  →  x = y = 1/2
        assert!(feasible(&m(&[&[1, 1], &[1, -1]]), &v(&[1, 0])));
        // x + y = 1, x + y = 2
        assert!(!feasible(&m(&[&[1, 1], &[1, 1]]), &v(&[1, 2])));
        // -x = 1 has no nonnegative solution
        assert!(!feasible(&m(&[&[-1]]), &v(&[1])));
        assert!(feasible(&m(&[&[0]]), &v(&[0])));
    }
}
