//! Dense linear algebra: fraction-free exact elimination over the integers
//! and partial-pivoting / Vandermonde solvers over multi-precision complex
//! numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::qstate::ExactRational;
use crate::real::{Complex, Real};

/// Clears denominators of a rational matrix by one common factor `L`.
/// Returns the integer matrix `L·A` and `L`.
pub fn to_integer_matrix(a: &[Vec<ExactRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let l = a.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let m = a
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&l / x.denom())).collect())
        .collect();
    (m, l)
}

/// Fraction-free (Bareiss) forward elimination of the first `steps` columns
/// of `m`, choosing pivots only among rows `< pivot_rows`. Every division is
/// exact. Returns the permutation sign, or `None` if a pivot column is zero.
fn bareiss_eliminate(m: &mut [Vec<BigInt>], steps: usize, pivot_rows: usize) -> Option<i32> {
    let n = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..steps {
        let piv = (k..pivot_rows).find(|&i| !m[i][k].is_zero())?;
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    match bareiss_eliminate(&mut m, n, n) {
        Some(sign) => {
            let d = m[n - 1][n - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        }
        None => BigInt::zero(),
    }
}

pub fn rational_det(a: &[Vec<ExactRational>]) -> ExactRational {
    let n = a.len();
    let (m, l) = to_integer_matrix(a);
    ExactRational::new(bareiss_det(m), num_traits::pow(l, n))
}

/// Solves `A x = b` exactly; `None` if `A` is singular.
pub fn solve_exact(a: &[Vec<ExactRational>], b: &[ExactRational]) -> Option<Vec<ExactRational>> {
    let n = a.len();
    let aug: Vec<Vec<ExactRational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let (mut m, _) = to_integer_matrix(&aug);
    bareiss_eliminate(&mut m, n, n)?;
    let mut x = vec![ExactRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = ExactRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= ExactRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / ExactRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Schur complement `c - vᵗ·A⁻¹·v` of the bordered symmetric matrix
/// `[[A, v], [vᵗ, c]]`, computed as `det(bordered)/det(A)` from a single
/// fraction-free elimination. `None` if `A` is singular.
pub fn bordered_schur_complement(
    a: &[Vec<ExactRational>],
    v: &[ExactRational],
    c: &ExactRational,
) -> Option<ExactRational> {
    let n = a.len();
    if n == 0 {
        return Some(c.clone());
    }
    let mut full: Vec<Vec<ExactRational>> =
        a.iter().zip(v).map(|(row, vi)| row.iter().cloned().chain(std::iter::once(vi.clone())).collect()).collect();
    full.push(v.iter().cloned().chain(std::iter::once(c.clone())).collect());
    let (mut m, l) = to_integer_matrix(&full);
    bareiss_eliminate(&mut m, n, n)?;
    // Bareiss invariant: m[n][n] = ±det(L·full) and m[n-1][n-1] = ±det(L·A),
    // with the same row-permutation sign.
    let top = &m[n][n];
    let bottom = &m[n - 1][n - 1];
    Some(ExactRational::new(top.clone(), bottom.clone()) / ExactRational::from_integer(l))
}

/// Hankel matrix `(values[offset + i + j])_{i,j<n}`.
pub fn hankel<T: Clone>(values: &[T], offset: usize, n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| values[offset + i + j].clone()).collect()).collect()
}

/// Gaussian elimination with partial pivoting over [`Complex`].
pub fn solve_complex(a: &[Vec<Complex>], b: &[Complex]) -> Option<Vec<Complex>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| {
            m[i][k].norm_sqr().partial_cmp(&m[j][k].norm_sqr()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv][k].is_zero() {
            return None;
        }
        m.swap(piv, k);
        let inv = m[k][k].inv();
        for i in k + 1..n {
            let f = &m[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k..=n {
                let t = &f * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    let prec = b.first().map_or(64, |x| x.precision());
    let mut x = vec![Complex::zero(prec); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = &acc - &(&m[i][j] * &x[j]);
        }
        x[i] = &acc / &m[i][i];
    }
    Some(x)
}

/// Solves the Vandermonde system `Σ_n z_n·x_n^k = f_k`, `k = 0..m-1`
/// (Björck–Pereyra, O(m²)). Nodes must be distinct.
pub fn vandermonde_solve(nodes: &[Complex], rhs: &[Complex]) -> Vec<Complex> {
    let m = nodes.len();
    assert_eq!(m, rhs.len());
    let mut f: Vec<Complex> = rhs.to_vec();
    if m == 0 {
        return f;
    }
    let n = m - 1;
    for k in 0..n {
        for i in (k + 1..=n).rev() {
            let t = &nodes[k] * &f[i - 1];
            f[i] = &f[i] - &t;
        }
    }
    for k in (0..n).rev() {
        for i in k + 1..=n {
            let d = &nodes[i] - &nodes[i - k - 1];
            f[i] = &f[i] / &d;
        }
        for i in k..n {
            let t = f[i + 1].clone();
            f[i] = &f[i] - &t;
        }
    }
    f
}

/// log10 of the ∞-norm condition number of the Vandermonde matrix
/// `V_{kn} = x_n^k`, using Lagrange-basis rows for `V⁻¹`.
pub fn vandermonde_log10_condition(nodes: &[Complex]) -> f64 {
    let m = nodes.len();
    if m <= 1 {
        return 0.0;
    }
    let prec = nodes[0].precision();
    // ||V||_inf = max_k Σ_n |x_n|^k
    let abs: Vec<Real> = nodes.iter().map(|x| x.abs()).collect();
    let mut norm_v = Real::zero(prec);
    let mut powers: Vec<Real> = vec![Real::one(prec); m];
    for _k in 0..m {
        let s = powers.iter().fold(Real::zero(prec), |acc, p| acc + p.clone());
        norm_v = norm_v.max(s);
        for (p, a) in powers.iter_mut().zip(&abs) {
            *p = &*p * a;
        }
    }
    let mut norm_inv = Real::zero(prec);
    for n in 0..m {
        // coefficients of Π_{j≠n}(x - x_j), low order first
        let mut poly = vec![Complex::one(prec)];
        let mut denom = Complex::one(prec);
        for (j, xj) in nodes.iter().enumerate() {
            if j == n {
                continue;
            }
            let mut next = vec![Complex::zero(prec); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                let t = c * xj;
                next[i] = &next[i] - &t;
            }
            poly = next;
            denom = &denom * &(&nodes[n] - xj);
        }
        let dabs = denom.abs();
        let s = poly.iter().fold(Real::zero(prec), |acc, c| acc + c.abs()) / dabs;
        norm_inv = norm_inv.max(s);
    }
    (norm_v * norm_inv).log10_abs()
}

/// Leading principal minors `det(A[..k, ..k])`, `k = 1..=n`, of a rational matrix.
pub fn leading_minors(a: &[Vec<ExactRational>]) -> Vec<ExactRational> {
    (1..=a.len())
        .map(|k| {
            let sub: Vec<Vec<ExactRational>> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
            rational_det(&sub)
        })
        .collect()
}

pub fn is_positive_definite(a: &[Vec<ExactRational>]) -> bool {
    leading_minors(a).iter().all(|d| d.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::rat;
    use crate::real::bits_for_digits;

    fn ri(rows: &[&[i64]]) -> Vec<Vec<ExactRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(rational_det(&ri(&[&[2, 0], &[0, 3]])), rat(6, 1));
        assert_eq!(rational_det(&ri(&[&[0, 1], &[1, 0]])), rat(-1, 1));
        assert_eq!(rational_det(&ri(&[&[1, 2], &[2, 4]])), rat(0, 1));
        let a = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 3), rat(1, 4)]];
        assert_eq!(rational_det(&a), rat(1, 72));
        // 4x4 Hilbert determinant = 1/6048000
        let h: Vec<Vec<ExactRational>> =
            (0..4).map(|i| (0..4).map(|j| rat(1, i + j + 1)).collect()).collect();
        assert_eq!(rational_det(&h), rat(1, 6_048_000));
    }

    #[test]
    fn exact_solve() {
        let a = ri(&[&[0, 2, 1], &[1, 1, 1], &[2, 1, 0]]);
        let b = vec![rat(3, 1), rat(3, 1), rat(3, 1)];
        assert_eq!(solve_exact(&a, &b).unwrap(), vec![rat(1, 1), rat(1, 1), rat(1, 1)]);
        assert!(solve_exact(&ri(&[&[1, 1], &[1, 1]]), &[rat(1, 1), rat(2, 1)]).is_none());
    }

    #[test]
    fn schur_complement_matches_direct_formula() {
        let a = ri(&[&[2, 1], &[1, 3]]);
        let v = vec![rat(1, 1), rat(2, 1)];
        let c = rat(5, 1);
        let x = solve_exact(&a, &v).unwrap();
        let direct = &c - (&v[0] * &x[0] + &v[1] * &x[1]);
        assert_eq!(bordered_schur_complement(&a, &v, &c).unwrap(), direct);
        // pivoting inside A
        let a = ri(&[&[0, 1], &[1, 0]]);
        let x = solve_exact(&a, &v).unwrap();
        let direct = &c - (&v[0] * &x[0] + &v[1] * &x[1]);
        assert_eq!(bordered_schur_complement(&a, &v, &c).unwrap(), direct);
        assert!(bordered_schur_complement(&ri(&[&[0]]), &[rat(1, 1)], &c).is_none());
    }

    #[test]
    fn vandermonde_matches_lu() {
        let p = bits_for_digits(50);
        let nodes: Vec<Complex> =
            [(1.0, 0.0), (4.0, 0.0), (2.5, 1.0), (2.5, -1.0)].iter().map(|&(a, b)| Complex::from_f64(a, b, p)).collect();
        let rhs: Vec<Complex> = [3.0, -1.0, 2.0, 0.5].iter().map(|&a| Complex::from_f64(a, 0.0, p)).collect();
        let v: Vec<Vec<Complex>> = (0..4).map(|k| nodes.iter().map(|x| x.powi(k)).collect()).collect();
        let lu = solve_complex(&v, &rhs).unwrap();
        let bp = vandermonde_solve(&nodes, &rhs);
        for (a, b) in lu.iter().zip(&bp) {
            assert!(a.dist(b).to_f64() < 1e-45);
        }
    }

    #[test]
    fn vandermonde_condition_grows_with_clustering() {
        let p = bits_for_digits(40);
        let wide: Vec<Complex> = [1.0, 2.0, 3.0].iter().map(|&a| Complex::from_f64(a, 0.0, p)).collect();
        let tight: Vec<Complex> = [1.0, 1.001, 3.0].iter().map(|&a| Complex::from_f64(a, 0.0, p)).collect();
        let cw = vandermonde_log10_condition(&wide);
        let ct = vandermonde_log10_condition(&tight);
        assert!(cw > 0.0 && cw < 3.0);
        assert!(ct > cw + 2.0);
    }

    #[test]
    fn positive_definite_hankel() {
        // moments of the uniform measure on [0,1]
        let h: Vec<Vec<ExactRational>> = (0..5).map(|i| (0..5).map(|j| rat(1, i + j + 1)).collect()).collect();
        assert!(is_positive_definite(&h));
        assert!(!is_positive_definite(&ri(&[&[1, 1], &[1, 1]])));
    }
}
