//! Small dense linear algebra on 5×5 (and at most 5-row) real matrices.
//!
//! Everything here is sized for the five-dimensional algebras the crate works
//! with, so matrices are plain row-major arrays rather than a general matrix
//! type.

/// Row-major 5×5 matrix, `m[row][col]`.
pub type Mat5 = [[f64; 5]; 5];

/// A 5-vector.
pub type Vec5 = [f64; 5];

pub const ZERO: Mat5 = [[0.0; 5]; 5];

pub fn identity() -> Mat5 {
    let mut m = ZERO;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn matmul(a: &Mat5, b: &Mat5) -> Mat5 {
    let mut out = ZERO;
    for i in 0..5 {
        for k in 0..5 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..5 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Mat5) -> Mat5 {
    let mut out = ZERO;
    for i in 0..5 {
        for j in 0..5 {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn mat_vec(a: &Mat5, v: &Vec5) -> Vec5 {
    let mut out = [0.0; 5];
    for i in 0..5 {
        out[i] = (0..5).map(|j| a[i][j] * v[j]).sum();
    }
    out
}

/// `aᵀ v` without forming the transpose.
pub fn mat_t_vec(a: &Mat5, v: &Vec5) -> Vec5 {
    let mut out = [0.0; 5];
    for (j, o) in out.iter_mut().enumerate() {
        *o = (0..5).map(|i| a[i][j] * v[i]).sum();
    }
    out
}

pub fn scale(a: &Mat5, s: f64) -> Mat5 {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|x| *x *= s);
    out
}

pub fn add(a: &Mat5, b: &Mat5) -> Mat5 {
    let mut out = *a;
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// Largest absolute entry.
pub fn max_abs(a: &Mat5) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn max_abs_diff(a: &Mat5, b: &Mat5) -> f64 {
    let mut m = 0.0_f64;
    for i in 0..5 {
        for j in 0..5 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Maximum absolute row sum.
pub fn norm_inf(a: &Mat5) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn trace(a: &Mat5) -> f64 {
    (0..5).map(|i| a[i][i]).sum()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &Mat5) -> f64 {
    let mut m = *a;
    let mut d = 1.0;
    for col in 0..5 {
        let pivot = (col..5)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -d;
        }
        d *= m[col][col];
        for r in (col + 1)..5 {
            let f = m[r][col] / m[col][col];
            for c in col..5 {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    d
}

/// Singular values of a matrix with at most five rows and exactly five
/// columns, in descending order.
///
/// One-sided Jacobi on the transpose: the rows are orthogonalised by plane
/// rotations until every pair is orthogonal to machine precision, after which
/// the row norms are the singular values.
pub fn singular_values(rows: &[Vec5]) -> Vec<f64> {
    let mut a: Vec<Vec5> = rows.to_vec();
    let m = a.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let alpha: f64 = a[p].iter().map(|x| x * x).sum();
                let beta: f64 = a[q].iter().map(|x| x * x).sum();
                let gamma: f64 = (0..5).map(|k| a[p][k] * a[q][k]).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..5 {
                    let ap = a[p][k];
                    let aq = a[q][k];
                    a[p][k] = c * ap - s * aq;
                    a[q][k] = s * ap + c * aq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = a
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn rank_of_rows(rows: &[Vec5], tol: f64) -> usize {
    let sv = singular_values(rows);
    let cutoff = tol * sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Determinant of a 3×3 matrix.
pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal() {
        let mut m = ZERO;
        m[0][0] = 3.0;
        m[1][1] = -5.0;
        m[3][3] = 0.5;
        let sv = singular_values(&m);
        assert_eq!(sv.len(), 5);
        assert!((sv[0] - 5.0).abs() < 1e-15);
        assert!((sv[1] - 3.0).abs() < 1e-15);
        assert!((sv[2] - 0.5).abs() < 1e-15);
        assert_eq!(sv[3], 0.0);
    }

    #[test]
    fn singular_values_match_gram_eigenvalues_for_rank_one() {
        // u vᵀ has a single singular value |u||v|.
        let u = [1.0, 2.0, -1.0, 0.5, 3.0];
        let v = [0.3, -0.7, 1.1, 2.0, -0.2];
        let mut m = ZERO;
        for i in 0..5 {
            for j in 0..5 {
                m[i][j] = u[i] * v[j];
            }
        }
        let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sv = singular_values(&m);
        assert!((sv[0] - nu * nv).abs() < 1e-12);
        assert!(sv[1] < 1e-12);
        assert_eq!(rank_of_rows(&m, 1e-9), 1);
    }

    #[test]
    fn determinant_of_permutation() {
        let mut m = ZERO;
        m[0][1] = 1.0;
        m[1][0] = 1.0;
        m[2][2] = 2.0;
        m[3][3] = 1.0;
        m[4][4] = 1.0;
        assert!((det(&m) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn transpose_and_products() {
        let mut a = ZERO;
        a[0][4] = 2.0;
        a[2][1] = -1.0;
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(mat_t_vec(&a, &v), mat_vec(&transpose(&a), &v));
        assert_eq!(matmul(&identity(), &a), a);
    }
}
