//! Exact convex hull membership via a phase-1 simplex over the rationals.
//!
//! Membership of y in conv{v_1, ..., v_m} is the feasibility of
//!   sum c_i v_i = y,  sum c_i = 1,  c_i >= 0,
//! decided by minimizing the sum of artificial variables with Bland's rule
//! (which guarantees termination). No floating point, no tolerance.

use super::{Rational, Scalar};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HullError {
    #[error("point has dimension {point} but generators have dimension {generators}")]
    DimensionMismatch { point: usize, generators: usize },
}

/// Exact feasibility of A x = b with x >= 0 (phase-1 simplex, Bland's rule).
pub fn lp_feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let nx = a.first().map_or(0, |r| r.len());
    // Tableau columns: x variables, artificial variables, rhs.
    let cols = nx + rows + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(cols);
        for j in 0..nx {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..rows {
            row.push(if i == j { Rational::one() } else { Rational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    // Phase-1 objective: minimize the artificial sum. With the artificial
    // basis, the reduced cost row is minus the column sums of the x block,
    // and the objective cell holds minus the rhs sum.
    let mut obj: Vec<Rational> = vec![Rational::zero(); cols];
    for j in 0..nx {
        let mut s = Rational::zero();
        for row in t.iter() {
            s += row[j].clone();
        }
        obj[j] = -s;
    }
    {
        let mut s = Rational::zero();
        for row in t.iter() {
            s += row[cols - 1].clone();
        }
        obj[cols - 1] = -s;
    }
    let mut basis: Vec<usize> = (nx..nx + rows).collect();

    loop {
        // Bland: lowest-index column with negative reduced cost.
        let Some(enter) = (0..cols - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; Bland tie-break by lowest basis variable index.
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols - 1] / &row[enter];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < *br || (ratio == *br && basis[i] < basis[*bi]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Unbounded phase-1 objective cannot happen (bounded below by 0),
            // but guard against a malformed tableau.
            return false;
        };
        // Pivot.
        let pd = t[pivot_row][enter].clone();
        for j in 0..cols {
            t[pivot_row][j] = &t[pivot_row][j] / &pd;
        }
        for i in 0..rows {
            if i != pivot_row && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..cols {
                    let d = &f * &t[pivot_row][j];
                    t[i][j] = &t[i][j] - &d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..cols {
                let d = &f * &t[pivot_row][j];
                obj[j] = &obj[j] - &d;
            }
        }
        basis[pivot_row] = enter;
    }
    // Feasible iff the artificial objective reached zero.
    obj[cols - 1].is_zero()
}

/// Exact membership of `point` in the convex hull of `generators`.
pub fn in_convex_hull(point: &[Rational], generators: &[Vec<Rational>]) -> Result<bool, HullError> {
    if generators.is_empty() {
        return Ok(false);
    }
    let d = point.len();
    for g in generators {
        if g.len() != d {
            return Err(HullError::DimensionMismatch {
                point: d,
                generators: g.len(),
            });
        }
    }
    // Equality rows: one per coordinate, plus the affine row of ones.
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        a.push(generators.iter().map(|g| g[i].clone()).collect());
    }
    a.push(vec![Rational::one(); generators.len()]);
    let mut b: Vec<Rational> = point.to_vec();
    b.push(Rational::one());
    // Integralize rows for tidier pivots (feasibility is unchanged).
    for i in 0..a.len() {
        let mut row = a[i].clone();
        row.push(b[i].clone());
        let row = Rational::integralize_row(&row);
        b[i] = row[row.len() - 1].clone();
        a[i] = row[..row.len() - 1].to_vec();
    }
    Ok(lp_feasible(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn pt(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn segment_membership() {
        let gens = vec![pt(&[2, 0]), pt(&[0, 2])];
        assert!(in_convex_hull(&pt(&[1, 1]), &gens).unwrap());
        assert!(!in_convex_hull(&pt(&[3, 0]), &gens).unwrap());
        // Endpoints are inside.
        assert!(in_convex_hull(&pt(&[2, 0]), &gens).unwrap());
    }

    #[test]
    fn interior_and_boundary_of_triangle() {
        let gens = vec![pt(&[0, 0]), pt(&[4, 0]), pt(&[0, 4])];
        assert!(in_convex_hull(&pt(&[1, 1]), &gens).unwrap());
        assert!(in_convex_hull(&pt(&[2, 2]), &gens).unwrap()); // on the edge
        assert!(!in_convex_hull(&pt(&[3, 3]), &gens).unwrap());
        assert!(in_convex_hull(&[rat(1, 3), rat(1, 7)], &gens).unwrap());
    }

    #[test]
    fn degenerate_generators() {
        // A single point: hull is that point.
        let gens = vec![pt(&[1, 2])];
        assert!(in_convex_hull(&pt(&[1, 2]), &gens).unwrap());
        assert!(!in_convex_hull(&pt(&[1, 3]), &gens).unwrap());
        // No generators: empty hull.
        assert!(!in_convex_hull(&pt(&[0, 0]), &[]).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let gens = vec![pt(&[1, 2, 3])];
        assert_eq!(
            in_convex_hull(&pt(&[1, 2]), &gens),
            Err(HullError::DimensionMismatch {
                point: 2,
                generators: 3
            })
        );
    }

    #[test]
    fn zero_in_hull_of_opposite_points() {
        let gens = vec![pt(&[1, 1]), pt(&[-1, -1])];
        assert!(in_convex_hull(&pt(&[0, 0]), &gens).unwrap());
        assert!(!in_convex_hull(&pt(&[1, -1]), &gens).unwrap());
    }
}
