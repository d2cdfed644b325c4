//! Dense exact linear algebra: fraction-free determinants and kernels.

use super::scalar::{Field, Scalar};

pub type Matrix<F> = Vec<Vec<F>>;

pub fn transpose<F: Clone>(m: &[Vec<F>]) -> Matrix<F> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec<F: Scalar>(m: &[Vec<F>], v: &[F]) -> Vec<F> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
        })
        .collect()
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Determinant by Bareiss fraction-free elimination.
///
/// Every division is exact in the coefficient ring, so this works over
/// integral domains such as `Q[x]` as well as over fields.
pub fn determinant<F: Scalar>(m: &[Vec<F>]) -> F {
    let n = m.len();
    if n == 0 {
        return F::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a: Matrix<F> = m.to_vec();
    let mut negate = false;
    let mut prev = F::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return F::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly by the previous pivot");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate { -d } else { d }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(a: &mut Matrix<F>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for j in c..cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    a[i][j] = a[i][j].clone() - f.clone() * a[r][j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    rref(&mut m.to_vec()).len()
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            v
        })
        .collect()
}

/// Basis of `{y : yᵀ m = 0}`.
pub fn left_nullspace<F: Field>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    nullspace(&transpose(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{Rational, UniPoly};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = q(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(determinant(&m), Rational::from(4));
        let m = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), Rational::from(-1));
        let m = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&m), Rational::from(0));
    }

    #[test]
    fn bareiss_over_polynomials() {
        // det [[x, 1], [1, x]] = x^2 - 1
        let x = UniPoly::<Rational>::x();
        let one = UniPoly::constant(Rational::from(1));
        let m = vec![vec![x.clone(), one.clone()], vec![one, x]];
        let d = determinant(&m);
        assert_eq!(
            d,
            UniPoly::new(vec![Rational::from(-1), Rational::from(0), Rational::from(1)])
        );
    }

    #[test]
    fn kernels_of_a_rank_one_matrix() {
        let m = q(&[&[1, 1], &[1, 1], &[1, 1]]);
        assert_eq!(rank(&m), 1);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(|v| v.is_zero()));
        let lk = left_nullspace(&m);
        assert_eq!(lk.len(), 2);
        for y in &lk {
            assert!(mat_vec(&transpose(&m), y).iter().all(|v| v.is_zero()));
        }
    }
}
