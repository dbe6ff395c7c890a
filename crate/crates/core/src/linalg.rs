//! Small dense helpers shared by the classifier and the slicer.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type CMat2 = Matrix2<C64>;
pub type RMat2 = Matrix2<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Frobenius norm of a complex matrix.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn fro2(m: &CMat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn max_abs2(m: &CMat2) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Eigen-decomposition of a hermitian matrix, eigenvalues sorted descending.
pub fn herm_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let sym = (h + h.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::from_fn(n, n, |row, col| eig.eigenvectors[(row, idx[col])]);
    // fix the phase: largest component real positive
    for j in 0..n {
        let mut best = ZERO;
        for i in 0..n {
            if vecs[(i, j)].norm() > best.norm() + 1e-12 {
                best = vecs[(i, j)];
            }
        }
        if best.norm() > 0.0 {
            let ph = best.conj() / best.norm();
            for i in 0..n {
                vecs[(i, j)] *= ph;
            }
        }
    }
    (vals, vecs)
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues sorted descending.
pub fn sym_eigen(g: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = g.nrows();
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |row, col| eig.eigenvectors[(row, idx[col])]);
    (vals, vecs)
}

/// Counts eigenvalues above `tol` and below `-tol`.
pub fn inertia(vals: &[f64], tol: f64) -> (usize, usize) {
    let pos = vals.iter().filter(|&&v| v > tol).count();
    let neg = vals.iter().filter(|&&v| v < -tol).count();
    (pos, neg)
}

/// Largest absolute eigenvalue.
pub fn spectral_radius(vals: &[f64]) -> f64 {
    vals.iter().fold(0.0, |a, v| a.max(v.abs()))
}

pub fn to_dmat(m: &CMat2) -> CMat {
    CMat::from_fn(2, 2, |i, j| m[(i, j)])
}

pub fn to_mat2(m: &CMat) -> CMat2 {
    CMat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

pub fn real_to_c2(m: &RMat2) -> CMat2 {
    m.map(r)
}

/// Complex matrix with iid standard normal real and imaginary parts.
pub fn random_cmat<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_cvec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn vnorm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear (not sesquilinear) product `aᵀ b`.
pub fn bdot(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian product `a* b`.
pub fn hdot(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal basis of the null space of `m` from its SVD.
///
/// Singular values below `rel * σ_max` count as zero.
pub fn null_space(m: &CMat, rel: f64) -> CMat {
    let ncols = m.ncols();
    if m.nrows() == 0 || max_abs(m) == 0.0 {
        return CMat::identity(ncols, ncols);
    }
    // Pad so the SVD returns a full V.
    let rows = m.nrows().max(ncols);
    let mut padded = CMat::zeros(rows, ncols);
    padded.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let kernel: Vec<usize> = (0..ncols)
        .filter(|&i| svd.singular_values[i] <= rel * smax)
        .collect();
    let mut out = CMat::zeros(ncols, kernel.len());
    for (k, &i) in kernel.iter().enumerate() {
        for j in 0..ncols {
            out[(j, k)] = vt[(i, j)].conj();
        }
    }
    out
}

/// Orthonormal completion: columns of `basis` followed by an orthonormal basis
/// of their orthogonal complement.
pub fn complete_basis(basis: &CMat) -> CMat {
    let n = basis.nrows();
    let k = basis.ncols();
    let comp = if k == 0 {
        CMat::identity(n, n)
    } else {
        null_space(&basis.adjoint(), 1e-12)
    };
    let mut out = CMat::zeros(n, k + comp.ncols());
    out.view_mut((0, 0), (n, k)).copy_from(basis);
    out.view_mut((0, k), (n, comp.ncols())).copy_from(&comp);
    out
}

/// Gram–Schmidt on columns, dropping columns that collapse below `tol`.
pub fn orthonormalize(m: &CMat, tol: f64) -> CMat {
    let mut cols: Vec<CVec> = Vec::new();
    for j in 0..m.ncols() {
        let mut v: CVec = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &cols {
                let p = hdot(q, &v);
                v -= q * p;
            }
        }
        let nv = vnorm(&v);
        if nv > tol {
            cols.push(v / r(nv));
        }
    }
    let n = m.nrows();
    let mut out = CMat::zeros(n, cols.len());
    for (j, v) in cols.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Real symmetric 2×2 eigen-decomposition: `P = R diag(l1, l2) Rᵀ`, `l1 >= l2`,
/// with `R` a rotation.
pub fn sym2_eigen(p: &RMat2) -> (f64, f64, RMat2) {
    let a = p[(0, 0)];
    let b = 0.5 * (p[(0, 1)] + p[(1, 0)]);
    let d = p[(1, 1)];
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = half.hypot(b);
    let l1 = mean + rad;
    let l2 = mean - rad;
    // angle of the top eigenvector
    let phi = 0.5 * b.atan2(half);
    let (s, c) = phi.sin_cos();
    (l1, l2, RMat2::new(c, -s, s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sym2_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let d: f64 = rng.sample(StandardNormal);
            let p = RMat2::new(a, b, b, d);
            let (l1, l2, rot) = sym2_eigen(&p);
            assert!(l1 >= l2);
            assert!((rot.determinant() - 1.0).abs() < 1e-14);
            let back = rot * RMat2::new(l1, 0.0, 0.0, l2) * rot.transpose();
            assert!((back - p).norm() < 1e-12 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = null_space(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-12);
    }

    #[test]
    fn herm_eigen_sorted() {
        let h = CMat::from_row_slice(2, 2, &[ZERO, c(0.0, 0.5), c(0.0, -0.5), ZERO]);
        let (vals, _) = herm_eigen(&h);
        assert!((vals[0] - 0.5).abs() < 1e-14);
        assert!((vals[1] + 0.5).abs() < 1e-14);
    }
}
