//! Small dense helpers: a cyclic Jacobi solver for real symmetric 3×3
//! matrices and a PSD test for small Hermitian matrices.

use num_complex::Complex64;

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

/// Sweeps stop once the off-diagonal Frobenius norm falls below this.
pub const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a symmetric 3×3 matrix.
///
/// Returns eigenvalues sorted descending together with the matching
/// orthonormal eigenvectors (as columns, `vectors[k]` is the k-th vector).
pub fn symmetric_eigen3(m: &Mat3) -> (Vec3, [Vec3; 3]) {
    let mut a = symmetrize(m);
    let mut v = identity3();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_TOL {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            rotate(&mut a, &mut v, p, q, c, s);
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let vectors = order.map(|k| [v[0][k], v[1][k], v[2][k]]);
    (values, vectors)
}

/// Eigenvalues only, sorted descending.
pub fn symmetric_eigenvalues3(m: &Mat3) -> Vec3 {
    symmetric_eigen3(m).0
}

fn symmetrize(m: &Mat3) -> Mat3 {
    let mut a = *m;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    a
}

fn identity3() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

fn off_diagonal_norm(a: &Mat3) -> f64 {
    (2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2])).sqrt()
}

// A <- Jᵀ A J and V <- V J for the Givens rotation J in the (p, q) plane.
fn rotate(a: &mut Mat3, v: &mut Mat3, p: usize, q: usize, c: f64, s: f64) {
    for row in a.iter_mut() {
        let (akp, akq) = (row[p], row[q]);
        row[p] = c * akp - s * akq;
        row[q] = s * akp + c * akq;
    }
    let (rp, rq) = (a[p], a[q]);
    for k in 0..3 {
        a[p][k] = c * rp[k] - s * rq[k];
        a[q][k] = s * rp[k] + c * rq[k];
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for row in v.iter_mut() {
        let vp = row[p];
        let vq = row[q];
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose3(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat3_vec(a: &Mat3, x: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2])
}

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `a / |a|`, or `None` when the norm is too small to define a direction.
pub fn normalize3(a: &Vec3) -> Option<Vec3> {
    let n = norm3(a);
    (n > 1e-300 && n.is_finite()).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

/// True when the Hermitian `dim × dim` matrix (row-major) has no eigenvalue
/// below `-tol`. Tested by a Cholesky factorization of `m + tol·I`.
pub fn is_psd_within(m: &[Complex64], dim: usize, tol: f64) -> bool {
    debug_assert_eq!(m.len(), dim * dim);
    let mut l = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let mut diag = m[j * dim + j].re + tol;
        for k in 0..j {
            diag -= l[j * dim + k].norm_sqr();
        }
        // A zero pivot is allowed: the shifted matrix may be singular only
        // when the smallest eigenvalue sits exactly at -tol.
        if diag < 0.0 {
            return false;
        }
        let ljj = diag.sqrt();
        l[j * dim + j] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..dim {
            let mut acc = m[i * dim + j];
            for k in 0..j {
                acc -= l[i * dim + k] * l[j * dim + k].conj();
            }
            l[i * dim + j] = if ljj > 0.0 { acc / ljj } else { Complex64::new(0.0, 0.0) };
        }
    }
    true
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
pub fn hermitian2_eigenvalues(m: &[Complex64; 4]) -> [f64; 2] {
    let a = m[0].re;
    let d = m[3].re;
    let b = m[1];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(values: &Vec3, vectors: &[Vec3; 3]) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] += values[k] * vectors[k][i] * vectors[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(symmetric_eigenvalues3(&m), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn known_spectrum() {
        // [[2,1,0],[1,2,0],[0,0,5]] has eigenvalues 5, 3, 1.
        let m = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let (vals, vecs) = symmetric_eigen3(&m);
        for (got, want) in vals.iter().zip([5.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let back = reconstruct(&vals, &vecs);
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[i][j] - m[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn near_degenerate_pair() {
        let eps = 1e-13;
        let m = [[1.0, eps, 0.0], [eps, 1.0, 0.0], [0.0, 0.0, 0.5]];
        let vals = symmetric_eigenvalues3(&m);
        assert!((vals[0] - (1.0 + eps)).abs() < 1e-15);
        assert!((vals[1] - (1.0 - eps)).abs() < 1e-15);
        assert!((vals[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn psd_check() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let psd = [c(0.5), c(0.5), c(0.5), c(0.5)];
        assert!(is_psd_within(&psd, 2, 1e-10));
        let indefinite = [c(0.5), c(0.0), c(0.0), c(-1e-6)];
        assert!(!is_psd_within(&indefinite, 2, 1e-10));
        let y = [c(0.5), Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5), c(0.5)];
        assert!(is_psd_within(&y, 2, 1e-10));
    }

    #[test]
    fn hermitian2() {
        let m = [
            Complex64::new(0.75, 0.0),
            Complex64::new(0.0, 0.25),
            Complex64::new(0.0, -0.25),
            Complex64::new(0.25, 0.0),
        ];
        let [lo, hi] = hermitian2_eigenvalues(&m);
        let disc = (0.0625f64 + 0.0625).sqrt();
        assert!((lo - (0.5 - disc)).abs() < 1e-15);
        assert!((hi - (0.5 + disc)).abs() < 1e-15);
    }
}
