//! Small helpers over `ndarray` + LAPACK for dense complex linear algebra.

use ndarray::prelude::*;
pub use ndarray_linalg::c64;
use ndarray_linalg::{Eig, Eigh, Inverse, SVD, UPLO};
use rand::Rng;

pub fn zeros(r: usize, c: usize) -> Array2<c64> {
    Array2::zeros((r, c))
}

pub fn eye(n: usize) -> Array2<c64> {
    Array2::eye(n)
}

pub fn dagger(a: &Array2<c64>) -> Array2<c64> {
    a.t().mapv(|z| z.conj())
}

pub fn norm_max(a: &Array2<c64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_norm_max(a: &Array1<c64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn kron(a: &Array2<c64>, b: &Array2<c64>) -> Array2<c64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let v = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = v * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Orthonormal basis (as columns) of the right null space of `a`.
pub fn nullspace(a: &Array2<c64>, tol: f64) -> Array2<c64> {
    let (rows, cols) = a.dim();
    if rows == 0 {
        return eye(cols);
    }
    if cols == 0 {
        return zeros(0, 0);
    }
    let (_, s, vt) = a.svd(false, true).expect("svd failed");
    let vt = vt.expect("svd right vectors");
    let scale = s.iter().cloned().fold(1.0_f64, f64::max);
    let rank = s.iter().filter(|&&x| x > tol * scale).count();
    let v = dagger(&vt);
    v.slice(s![.., rank..]).to_owned()
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn column_space(a: &Array2<c64>, tol: f64) -> Array2<c64> {
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return zeros(rows, 0);
    }
    let (u, s, _) = a.svd(true, false).expect("svd failed");
    let u = u.expect("svd left vectors");
    let scale = s.iter().cloned().fold(1.0_f64, f64::max);
    let rank = s.iter().filter(|&&x| x > tol * scale).count();
    u.slice(s![.., ..rank]).to_owned()
}

pub fn rank(a: &Array2<c64>, tol: f64) -> usize {
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let (_, s, _) = a.svd(false, false).expect("svd failed");
    let scale = s.iter().cloned().fold(1.0_f64, f64::max);
    s.iter().filter(|&&x| x > tol * scale).count()
}

/// Moore-Penrose pseudo-inverse.
pub fn pinv(a: &Array2<c64>, tol: f64) -> Array2<c64> {
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return zeros(cols, rows);
    }
    let (u, s, vt) = a.svd(true, true).expect("svd failed");
    let u = u.unwrap();
    let vt = vt.unwrap();
    let scale = s.iter().cloned().fold(1.0_f64, f64::max).max(1e-300);
    let k = s.len();
    let mut sinv = zeros(k, k);
    for i in 0..k {
        if s[i] > tol * scale {
            sinv[[i, i]] = c64::new(1.0 / s[i], 0.0);
        }
    }
    dagger(&vt)
        .slice(s![.., ..k])
        .dot(&sinv)
        .dot(&dagger(&u.slice(s![.., ..k]).to_owned()))
}

pub fn inv(a: &Array2<c64>) -> Array2<c64> {
    a.inv().expect("matrix not invertible")
}

/// Eigenvalues and vectors of a Hermitian matrix. The columns of the returned
/// matrix are the eigenvectors (the backend hands back their conjugates).
pub fn herm_eig(a: &Array2<c64>) -> (Array1<f64>, Array2<c64>) {
    let (vals, vecs) = a.eigh(UPLO::Lower).expect("eigh failed");
    (vals, vecs.mapv(|z| z.conj()))
}

/// Eigenvalues of a general complex matrix.
pub fn general_eigvals(a: &Array2<c64>) -> Array1<c64> {
    let (vals, _) = a.eig().expect("eig failed");
    vals
}

/// Square root of a positive definite Hermitian matrix.
pub fn herm_sqrt(a: &Array2<c64>) -> Array2<c64> {
    let (vals, vecs) = herm_eig(a);
    let mut d = zeros(vals.len(), vals.len());
    for (i, &v) in vals.iter().enumerate() {
        assert!(v > 0.0, "herm_sqrt: matrix not positive definite");
        d[[i, i]] = c64::new(v.sqrt(), 0.0);
    }
    vecs.dot(&d).dot(&dagger(&vecs))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Array2<c64> {
    Array2::from_shape_fn((rows, cols), |_| {
        c64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Array1<c64> {
    Array1::from_shape_fn(n, |_| c64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
}

/// Random unitary via QR of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> Array2<c64> {
    use ndarray_linalg::QR;
    let a = random_matrix(rng, n, n);
    let (q, r) = a.qr().expect("qr failed");
    // fix phases so the factorization is unique-ish
    let mut q = q;
    for j in 0..n {
        let d = r[[j, j]];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[[i, j]] *= phase;
            }
        }
    }
    q
}

/// Cluster a list of complex scalars into groups within `tol` of each other.
/// Returns the list of cluster member indices.
pub fn cluster_scalars(vals: &[c64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<(c64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match clusters.iter_mut().find(|(c, _)| (*c - v).norm() < tol) {
            Some((_, members)) => members.push(i),
            None => clusters.push((v, vec![i])),
        }
    }
    clusters.into_iter().map(|(_, m)| m).collect()
}

pub fn probe() -> f64 {
    let a: Array2<c64> = array![
        [c64::new(2.0, 0.0), c64::new(0.0, 1.0)],
        [c64::new(0.0, -1.0), c64::new(3.0, 0.0)]
    ];
    let (vals, _vecs) = herm_eig(&a);
    let ge = general_eigvals(&a);
    vals[0] + ge[0].re
}
