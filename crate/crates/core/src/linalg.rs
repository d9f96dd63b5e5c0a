//! Small dense linear-algebra helpers shared by the curvature and flow code.
//!
//! Everything works on `nalgebra::DMatrix<f64>` with the Frobenius inner
//! product `<X, Y> = tr(X Y^t)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// `[X, Y] = XY - YX`.
pub fn commutator(x: &Mat, y: &Mat) -> Mat {
    x * y - y * x
}

/// Symmetric part `(X + X^t) / 2`.
pub fn sym(x: &Mat) -> Mat {
    (x + x.transpose()) * 0.5
}

/// Skew-symmetric part `(X - X^t) / 2`.
pub fn skew(x: &Mat) -> Mat {
    (x - x.transpose()) * 0.5
}

pub fn inner(x: &Mat, y: &Mat) -> f64 {
    x.dot(y)
}

pub fn norm_sq(x: &Mat) -> f64 {
    x.norm_squared()
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// `E_ij` with a single one in row `i`, column `j`.
pub fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut e = Mat::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

pub fn block_diag(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

/// Matrix exponential (scaling and squaring with a Pade approximant).
pub fn expm(x: &Mat) -> Mat {
    x.clone().exp()
}

pub fn is_finite(x: &Mat) -> bool {
    x.iter().all(|v| v.is_finite())
}

/// Orthonormal basis of the null space of `m`, using the relative cutoff
/// `rel_tol * sigma_max`. The flag is set when some singular value sits
/// within a factor of 100 of the cutoff, i.e. the rank decision is fragile.
pub fn null_space(m: &Mat, rel_tol: f64) -> (Vec<Vector>, bool) {
    let cols = m.ncols();
    if cols == 0 {
        return (Vec::new(), false);
    }
    // SVD only yields a full V when rows >= cols.
    let padded;
    let m = if m.nrows() < cols {
        padded = m.clone().resize_vertically(cols, 0.0);
        &padded
    } else {
        m
    };
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return ((0..cols).map(|i| Vector::from_fn(cols, |r, _| f64::from(r == i))).collect(), false);
    }
    let cut = rel_tol * smax;
    let mut basis = Vec::new();
    let mut ambiguous = false;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut / 100.0 && s < cut * 100.0 {
            ambiguous = true;
        }
        if s <= cut {
            basis.push(v_t.row(i).transpose());
        }
    }
    (basis, ambiguous)
}

/// Orthonormal basis of the span of `vectors` (all of length `dim`).
/// Singular values at or below `max(rel_tol * sigma_max, abs_floor)` are
/// treated as zero.
pub fn orthonormal_span(vectors: &[Vector], dim: usize, rel_tol: f64, abs_floor: f64) -> (Vec<Vector>, bool) {
    if vectors.is_empty() {
        return (Vec::new(), false);
    }
    let m = Mat::from_fn(dim, vectors.len(), |r, c| vectors[c][r]);
    let svd = m.svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    if smax <= abs_floor {
        return (Vec::new(), smax > abs_floor / 100.0);
    }
    let cut = (rel_tol * smax).max(abs_floor);
    let mut basis = Vec::new();
    let mut ambiguous = false;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut / 100.0 && s < cut * 100.0 {
            ambiguous = true;
        }
        if s > cut {
            basis.push(u.column(i).into_owned());
        }
    }
    (basis, ambiguous)
}

/// Minimum-norm least-squares solution of `l x = b` via the pseudo-inverse,
/// dropping singular values below `rel_cutoff * sigma_max`.
pub fn lstsq(l: &Mat, b: &Vector, rel_cutoff: f64) -> Vector {
    let svd = l.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Vector::zeros(l.ncols());
    }
    let eps = rel_cutoff * smax;
    svd.solve(b, eps).unwrap_or_else(|_| Vector::zeros(l.ncols()))
}

/// 2-norm condition number.
pub fn condition_number(g: &Mat) -> f64 {
    let s = g.clone().singular_values();
    let (lo, hi) = (s.min(), s.max());
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Coefficients `[1, p_1, ..., p_n]` of `det(tI - A) = t^n + p_1 t^{n-1} + ... + p_n`,
/// by Faddeev-LeVerrier.
pub fn char_poly(a: &Mat) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = Mat::zeros(n, n);
    let id = identity(n);
    for k in 1..=n {
        m = a * &m + &id * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// Largest coefficient change relative to the largest coefficient of `p0`.
pub fn char_poly_drift(p0: &[f64], p1: &[f64]) -> f64 {
    let scale = p0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = p0.iter().zip(p1).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    diff / scale
}

/// Eigenvalues as `(re, im)` pairs, sorted by real then imaginary part.
pub fn eigenvalues(a: &Mat) -> Vec<(f64, f64)> {
    let mut ev: Vec<(f64, f64)> = a.clone().complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    ev.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    ev
}

/// Best rational approximation `p/q` with `q <= max_den` (continued fractions).
pub fn rationalize(x: f64, max_den: i64) -> (i64, i64) {
    if !x.is_finite() {
        return (0, 1);
    }
    let (mut h0, mut h1) = (0_i64, 1_i64);
    let (mut k0, mut k1) = (1_i64, 0_i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.saturating_mul(h1).saturating_add(h0);
        let k2 = ai.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        (x.round() as i64, 1)
    } else {
        (h1, k1)
    }
}

pub fn format_rational(x: f64, max_den: i64) -> String {
    let (p, q) = rationalize(x, max_den);
    if q == 1 {
        format!("{p}")
    } else {
        format!("{p}/{q}")
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| rng.sample(StandardNormal));
        let nv = v.norm();
        if nv > 1e-8 {
            return v / nv;
        }
    }
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let qr = gaussian_matrix(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

/// Random invertible matrix `k1 * diag(exp(s)) * k2` with condition number
/// at most `max_cond`.
pub fn random_conjugator<R: Rng + ?Sized>(n: usize, max_cond: f64, rng: &mut R) -> Mat {
    let k1 = random_orthogonal(n, rng);
    let k2 = random_orthogonal(n, rng);
    let spread = max_cond.max(1.0).ln();
    let s = Vector::from_fn(n, |_, _| rng.random_range(0.0..=1.0) * spread);
    let d = Mat::from_diagonal(&s.map(f64::exp));
    k1 * d * k2
}
