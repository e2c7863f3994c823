//! Exact eigenspace extraction for rational matrices with rational spectra.
//!
//! The matrices this library diagonalizes (adjoint actions of semisimple or
//! toral elements) have rational eigenvalues by construction. After clearing
//! denominators the matrix is integral, its characteristic polynomial is
//! monic with integer coefficients, and any rational eigenvalue is therefore
//! an integer bounded by the Gershgorin radius. That turns eigenvalue search
//! into a finite scan with an exact kernel test per candidate, no floating
//! point and no polynomial factorization.

use super::mat::QMat;
use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("matrix is not square ({0} x {1})")]
    NotSquare(usize, usize),
    #[error("eigenspaces span only {found} of {need} dimensions; matrix does not split rationally")]
    NotRationallySplit { found: usize, need: usize },
    #[error("Gershgorin scan range {0} is too large")]
    ScanTooLarge(BigInt),
}

/// Common denominator of all entries.
fn entry_denominator_lcm(m: &QMat) -> BigInt {
    let mut d = BigInt::one();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            d = d.lcm(m[(i, j)].denom());
        }
    }
    d
}

/// Full eigenspace decomposition of a rationally split, diagonalizable
/// matrix. Returns (eigenvalue, eigenspace basis) pairs sorted by eigenvalue;
/// errors if the geometric multiplicities do not exhaust the dimension.
pub fn eigen_split(m: &QMat) -> Result<Vec<(Rational, Vec<Vec<Rational>>)>, EigenError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(EigenError::NotSquare(m.nrows(), m.ncols()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = entry_denominator_lcm(m);
    let dr = Rational::from(d.clone());
    let scaled = m.scale(&dr);
    // Gershgorin bound on the integral matrix: eigenvalues lie in [-b, b].
    let mut bound = BigInt::zero();
    for i in 0..n {
        let mut row = BigInt::zero();
        for j in 0..n {
            row += scaled[(i, j)].numer().abs();
        }
        if row > bound {
            bound = row;
        }
    }
    if bound > BigInt::from(20_000u32) {
        return Err(EigenError::ScanTooLarge(bound));
    }
    let b = bound.to_i64().expect("bound fits i64");
    let mut found = 0usize;
    let mut out: Vec<(Rational, Vec<Vec<Rational>>)> = Vec::new();
    // Scan outward from zero; small eigenvalues dominate in practice, so the
    // early exit usually fires quickly.
    let candidates = std::iter::once(0i64).chain((1..=b).flat_map(|t| [t, -t]));
    for t in candidates {
        if found == n {
            break;
        }
        let mut shifted = scaled.clone();
        let tr = Rational::from(BigInt::from(t));
        for i in 0..n {
            shifted[(i, i)] = &shifted[(i, i)] - &tr;
        }
        let ker = shifted.kernel();
        if !ker.is_empty() {
            found += ker.len();
            let lambda = Rational::new(BigInt::from(t), d.clone());
            out.push((lambda, ker));
        }
    }
    if found != n {
        return Err(EigenError::NotRationallySplit { found, need: n });
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mat::qmat;
    use crate::exact::{rat, rint};

    #[test]
    fn diagonal_matrix_splits() {
        let m = qmat(&[&[3, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let parts = eigen_split(&m).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, rint(-1));
        assert_eq!(parts[0].1.len(), 2);
        assert_eq!(parts[1].0, rint(3));
        assert_eq!(parts[1].1.len(), 1);
    }

    #[test]
    fn sl2_adjoint_eigenvalues() {
        // ad(h) on (h, e, f) is diag(0, 2, -2).
        let m = qmat(&[&[0, 0, 0], &[0, 2, 0], &[0, 0, -2]]);
        let parts = eigen_split(&m).unwrap();
        let vals: Vec<_> = parts.iter().map(|(v, _)| v.clone()).collect();
        assert_eq!(vals, vec![rint(-2), rint(0), rint(2)]);
    }

    #[test]
    fn fractional_eigenvalues_are_found() {
        // Eigenvalues 1/2 and -3/2.
        let mut m = QMat::zeros(2, 2);
        m[(0, 0)] = rat(1, 2);
        m[(1, 1)] = rat(-3, 2);
        let parts = eigen_split(&m).unwrap();
        assert_eq!(parts[0].0, rat(-3, 2));
        assert_eq!(parts[1].0, rat(1, 2));
    }

    #[test]
    fn non_diagonal_with_mixed_eigenvectors() {
        // [[0, 1], [1, 0]] has eigenvalues +-1 with eigenvectors (1, +-1).
        let m = qmat(&[&[0, 1], &[1, 0]]);
        let parts = eigen_split(&m).unwrap();
        assert_eq!(parts.len(), 2);
        for (val, basis) in &parts {
            assert_eq!(basis.len(), 1);
            let v = &basis[0];
            let mv = m.mul_vec(v);
            for i in 0..2 {
                assert_eq!(mv[i], val * &v[i]);
            }
        }
    }

    #[test]
    fn irrational_spectrum_is_rejected() {
        // [[0, 1], [2, 0]] has eigenvalues +-sqrt(2).
        let m = qmat(&[&[0, 1], &[2, 0]]);
        assert!(matches!(
            eigen_split(&m),
            Err(EigenError::NotRationallySplit { found: 0, need: 2 })
        ));
    }

    #[test]
    fn defective_matrix_is_rejected() {
        // Jordan block: eigenvalue 0 with one-dimensional eigenspace.
        let m = qmat(&[&[0, 1], &[0, 0]]);
        assert!(matches!(
            eigen_split(&m),
            Err(EigenError::NotRationallySplit { found: 1, need: 2 })
        ));
    }
}
