//! Metric Lie algebras given by structure constants in an orthonormal basis.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Bracket `mu` on R^n with `c[i][j][k] = <mu(e_i, e_j), e_k>`, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    dim: usize,
    c: Vec<f64>,
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketDiagnostics {
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub pass: bool,
}

/// Outcome of a rank-based decision; `ambiguous` is set when some singular
/// value sat close to the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub value: bool,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraType {
    Nilpotent,
    Real,
    Imaginary,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeVerdict {
    pub kind: AlgebraType,
    /// Set when the verdict comes from sampling rather than an exact test.
    pub heuristic: bool,
}

#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub ric: Mat,
    pub scal: f64,
    pub ric_norm_sq: f64,
    /// `None` when the metric is flat.
    pub f: Option<f64>,
}

impl CurvatureData {
    pub(crate) fn from_ric(ric: Mat, flat: bool) -> Self {
        let scal = ric.trace();
        let ric_norm_sq = linalg::norm_sq(&ric);
        let f = if flat { None } else { Some(scal * scal / ric_norm_sq) };
        CurvatureData { ric, scal, ric_norm_sq, f }
    }

    pub fn is_flat(&self) -> bool {
        self.f.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub basis: Vec<Mat>,
    pub dim: usize,
    pub ambiguous: bool,
}

impl DerivationSpace {
    /// Orthogonal projection onto the span, in the Frobenius inner product.
    /// The basis is orthonormal by construction.
    pub fn project(&self, x: &Mat) -> Mat {
        let mut out = Mat::zeros(x.nrows(), x.ncols());
        for q in &self.basis {
            out += q * linalg::inner(x, q);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SolitonResidual {
    pub c: f64,
    pub d: Mat,
    pub residual: f64,
    /// `residual / |Ric|`, the scale-free version.
    pub relative: f64,
}

impl SolitonResidual {
    pub fn is_soliton(&self, tol: f64) -> bool {
        self.relative <= tol
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BracketJson {
    dim: usize,
    entries: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

fn idx(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

fn check_shape(dim: usize, c: &[f64]) -> Result<()> {
    if c.len() != dim * dim * dim {
        return Err(Error::Malformed(format!(
            "expected {} structure constants for dim {dim}, got {}",
            dim * dim * dim,
            c.len()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Malformed("non-finite structure constant".into()));
    }
    Ok(())
}

/// Antisymmetry and Jacobi residuals of a flat `n x n x n` array.
pub fn validate_bracket(dim: usize, c: &[f64], tol: f64) -> Result<BracketDiagnostics> {
    check_shape(dim, c)?;
    let n = dim;
    let mut anti = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                anti = anti.max((c[idx(n, i, j, k)] + c[idx(n, j, i, k)]).abs());
            }
        }
    }
    // J(x,y,z)_m = sum_l c[x][y][l] c[l][z][m] + c[y][z][l] c[l][x][m] + c[z][x][l] c[l][y][m]
    let mut jac = 0.0_f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for m in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += c[idx(n, x, y, l)] * c[idx(n, l, z, m)]
                            + c[idx(n, y, z, l)] * c[idx(n, l, x, m)]
                            + c[idx(n, z, x, l)] * c[idx(n, l, y, m)];
                    }
                    jac = jac.max(s.abs());
                }
            }
        }
    }
    Ok(BracketDiagnostics { antisymmetry: anti, jacobi: jac, pass: anti <= tol && jac <= tol })
}

/// Same as [`validate_bracket`] for a nested `c[i][j][k]` array.
pub fn validate_nested(c: &[Vec<Vec<f64>>], tol: f64) -> Result<BracketDiagnostics> {
    let n = c.len();
    let mut flat = Vec::with_capacity(n * n * n);
    for plane in c {
        if plane.len() != n {
            return Err(Error::Malformed("structure constants are not n x n x n".into()));
        }
        for row in plane {
            if row.len() != n {
                return Err(Error::Malformed("structure constants are not n x n x n".into()));
            }
            flat.extend_from_slice(row);
        }
    }
    validate_bracket(n, &flat, tol)
}

impl MetricLieAlgebra {
    /// Checked constructor: rejects arrays that fail antisymmetry or Jacobi.
    pub fn new(dim: usize, c: Vec<f64>, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Malformed(format!("tolerance must be positive, got {tol}")));
        }
        let diag = validate_bracket(dim, &c, tol)?;
        if !diag.pass {
            return Err(Error::Malformed(format!(
                "not a Lie bracket (antisymmetry residual {:e}, Jacobi residual {:e})",
                diag.antisymmetry, diag.jacobi
            )));
        }
        Ok(MetricLieAlgebra { dim, c, tol })
    }

    /// For brackets produced internally from valid ones (group actions,
    /// almost-abelian constructions).
    pub(crate) fn from_raw(dim: usize, c: Vec<f64>, tol: f64) -> Self {
        debug_assert_eq!(c.len(), dim * dim * dim);
        MetricLieAlgebra { dim, c, tol }
    }

    /// Builds from `(i, j, k, v)` entries (0-based), completing `c[j][i][k] = -v`.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)], tol: f64) -> Result<Self> {
        let n = dim;
        let mut c = vec![0.0; n * n * n];
        let mut set = vec![false; n * n * n];
        for &(i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::Malformed(format!("index ({i},{j},{k}) out of range for dim {n}")));
            }
            if i == j && v != 0.0 {
                return Err(Error::Malformed(format!("diagonal bracket entry ({i},{i},{k}) must vanish")));
            }
            for (a, b, val) in [(i, j, v), (j, i, -v)] {
                let p = idx(n, a, b, k);
                if set[p] && c[p] != val {
                    return Err(Error::Malformed(format!("conflicting entries for ({a},{b},{k})")));
                }
                c[p] = val;
                set[p] = true;
            }
        }
        Self::new(dim, c, tol)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_raw(dim, vec![0.0; dim * dim * dim], DEFAULT_TOL)
    }

    /// heis_3: mu(e1, e2) = e3.
    pub fn heisenberg() -> Self {
        Self::from_entries(3, &[(0, 1, 2, 1.0)], DEFAULT_TOL).expect("heis_3 is a Lie bracket")
    }

    /// Real hyperbolic space: mu(e_n, e_i) = e_i for i < n.
    pub fn hyperbolic(dim: usize) -> Self {
        let entries: Vec<_> = (0..dim.saturating_sub(1)).map(|i| (dim - 1, i, i, 1.0)).collect();
        Self::from_entries(dim, &entries, DEFAULT_TOL).expect("mu_hyp is a Lie bracket")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[idx(self.dim, i, j, k)]
    }

    pub fn constants(&self) -> &[f64] {
        &self.c
    }

    /// Nonzero entries with `i < j`, 0-based.
    pub fn entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn diagnostics(&self) -> BracketDiagnostics {
        validate_bracket(self.dim, &self.c, self.tol).expect("shape checked at construction")
    }

    /// `|mu|^2`, summed over all ordered pairs.
    pub fn norm_sq(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::from_raw(self.dim, self.c.iter().map(|v| v * t).collect(), self.tol)
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.get(i, j, k);
                }
            }
        }
        out
    }

    /// `ad x`, with `(ad x) e_j = mu(x, e_j)` as column `j`.
    pub fn adjoint(&self, x: &Vector) -> Result<Mat> {
        if x.len() != self.dim {
            return Err(Error::Malformed(format!("vector of length {} for dim {}", x.len(), self.dim)));
        }
        Ok(self.adjoint_unchecked(x))
    }

    fn adjoint_unchecked(&self, x: &Vector) -> Mat {
        let n = self.dim;
        Mat::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.get(i, j, k)).sum())
    }

    pub fn ad_basis(&self, i: usize) -> Mat {
        let n = self.dim;
        Mat::from_fn(n, n, |k, j| self.get(i, j, k))
    }

    /// `(h . mu)(x, y) = h mu(h^-1 x, h^-1 y)`.
    pub fn act(&self, h: &Mat) -> Result<Self> {
        let n = self.dim;
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::Malformed("acting matrix has wrong shape".into()));
        }
        let hinv = h.clone().try_inverse().ok_or_else(|| Error::Degenerate("acting matrix is singular".into()))?;
        let mut t1 = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    t1[idx(n, a, b, k)] = (0..n).map(|c| h[(k, c)] * self.get(a, b, c)).sum();
                }
            }
        }
        let mut t2 = vec![0.0; n * n * n];
        for i in 0..n {
            for b in 0..n {
                for k in 0..n {
                    t2[idx(n, i, b, k)] = (0..n).map(|a| hinv[(a, i)] * t1[idx(n, a, b, k)]).sum();
                }
            }
        }
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[idx(n, i, j, k)] = (0..n).map(|b| hinv[(b, j)] * t2[idx(n, i, b, k)]).sum();
                }
            }
        }
        Ok(Self::from_raw(n, out, self.tol))
    }

    /// Bracket restricted to the coordinates in `keep` (assumed to span an ideal).
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let m = keep.len();
        if keep.iter().any(|&i| i >= self.dim) {
            return Err(Error::Malformed("restriction index out of range".into()));
        }
        let mut c = vec![0.0; m * m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                for (d, &k) in keep.iter().enumerate() {
                    c[idx(m, a, b, d)] = self.get(i, j, k);
                }
            }
        }
        Ok(Self::from_raw(m, c, self.tol))
    }

    fn scale(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    fn span_floor(&self) -> f64 {
        self.tol * self.scale().max(f64::MIN_POSITIVE)
    }

    /// Lower central series reaches zero.
    pub fn nilpotency(&self) -> Decision {
        let n = self.dim;
        let mut current: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
        let mut ambiguous = false;
        for _ in 0..=n {
            if current.is_empty() {
                return Decision { value: true, ambiguous };
            }
            let mut gens = Vec::new();
            for i in 0..n {
                let e = unit_vec(n, i);
                for v in &current {
                    gens.push(self.bracket(&e, v));
                }
            }
            let prev = current.len();
            let (next, amb) = linalg::orthonormal_span(&gens, n, self.tol, self.span_floor());
            ambiguous |= amb;
            if next.len() == prev {
                return Decision { value: false, ambiguous };
            }
            current = next;
        }
        Decision { value: current.is_empty(), ambiguous }
    }

    /// Derived series reaches zero.
    pub fn solvability(&self) -> Decision {
        let n = self.dim;
        let mut current: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
        let mut ambiguous = false;
        for _ in 0..=n {
            if current.is_empty() {
                return Decision { value: true, ambiguous };
            }
            let mut gens = Vec::new();
            for (a, u) in current.iter().enumerate() {
                for v in &current[a + 1..] {
                    gens.push(self.bracket(u, v));
                }
            }
            let prev = current.len();
            let (next, amb) = linalg::orthonormal_span(&gens, n, self.tol, self.span_floor());
            ambiguous |= amb;
            if next.len() == prev {
                return Decision { value: false, ambiguous };
            }
            current = next;
        }
        Decision { value: current.is_empty(), ambiguous }
    }

    /// `tr ad e_i = 0` for every basis vector.
    pub fn unimodularity(&self) -> Decision {
        let cut = self.span_floor();
        let mut value = true;
        let mut ambiguous = false;
        for i in 0..self.dim {
            let t = self.mean_curvature_component(i).abs();
            if t > cut {
                value = false;
            }
            if t > cut / 100.0 && t < cut * 100.0 {
                ambiguous = true;
            }
        }
        Decision { value, ambiguous }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency().value
    }

    pub fn is_solvable(&self) -> bool {
        self.solvability().value
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodularity().value
    }

    fn mean_curvature_component(&self, i: usize) -> f64 {
        (0..self.dim).map(|j| self.get(i, j, j)).sum()
    }

    /// Coordinate index `p` such that the other basis vectors span an abelian
    /// ideal, together with `A = ad e_p` restricted to that ideal.
    pub fn almost_abelian_split(&self) -> Option<(usize, Mat)> {
        let n = self.dim;
        if n < 2 {
            return None;
        }
        let cut = self.span_floor();
        'p: for p in (0..n).rev() {
            for i in (0..n).filter(|&i| i != p) {
                if self.get(p, i, p).abs() > cut {
                    continue 'p;
                }
                for j in (0..n).filter(|&j| j != p) {
                    for k in 0..n {
                        if self.get(i, j, k).abs() > cut {
                            continue 'p;
                        }
                    }
                }
            }
            let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            let a = Mat::from_fn(n - 1, n - 1, |r, s| self.get(p, others[s], others[r]));
            return Some((p, a));
        }
        None
    }

    /// Real / imaginary type. Exact for nilpotent and almost-abelian
    /// brackets; otherwise decided from `samples` random directions plus the
    /// basis and marked heuristic.
    pub fn classify_type(&self, samples: usize, seed: u64) -> TypeVerdict {
        if self.is_nilpotent() {
            return TypeVerdict { kind: AlgebraType::Nilpotent, heuristic: false };
        }
        if let Some((_, a)) = self.almost_abelian_split() {
            let kind = if spectrum_is_imaginary(&a) { AlgebraType::Imaginary } else { AlgebraType::Real };
            return TypeVerdict { kind, heuristic: false };
        }
        let n = self.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dirs: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
        dirs.extend((0..samples).map(|_| linalg::random_unit_vector(n, &mut rng)));
        let mut any_non_imaginary = false;
        let mut imaginary_not_nilpotent = false;
        for x in &dirs {
            let ad = self.adjoint_unchecked(x);
            if spectrum_is_imaginary(&ad) {
                if !matrix_is_nilpotent(&ad, 1e-9) {
                    imaginary_not_nilpotent = true;
                }
            } else {
                any_non_imaginary = true;
            }
        }
        let kind = match (any_non_imaginary, imaginary_not_nilpotent) {
            (false, _) => AlgebraType::Imaginary,
            (true, false) => AlgebraType::Real,
            (true, true) => AlgebraType::Mixed,
        };
        TypeVerdict { kind, heuristic: true }
    }

    /// Ricci operator `Ric = M - B/2 - S(ad H)`.
    pub fn ricci(&self) -> CurvatureData {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s1 += self.get(a, i, j) * self.get(b, i, j);
                        s2 += self.get(i, j, a) * self.get(i, j, b);
                    }
                }
                let v = -0.5 * s1 + 0.25 * s2;
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        let ads: Vec<Mat> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut killing = Mat::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let v = (&ads[a] * &ads[b]).trace();
                killing[(a, b)] = v;
                killing[(b, a)] = v;
            }
        }
        let h = Vector::from_fn(n, |i, _| self.mean_curvature_component(i));
        let ad_h = self.adjoint_unchecked(&h);
        let ric = m - killing * 0.5 - linalg::sym(&ad_h);
        let ric = linalg::sym(&ric);
        let flat = ric.norm() <= self.tol * self.norm_sq();
        CurvatureData::from_ric(ric, flat)
    }

    pub fn pinching_f(&self) -> Result<f64> {
        self.ricci().f.ok_or(Error::Flat)
    }

    /// `min|r_i| / max|r_i|` when Ric is definite, `None` otherwise.
    pub fn pinching_alpha(&self) -> Result<Option<f64>> {
        let cd = self.ricci();
        if cd.is_flat() {
            return Err(Error::Flat);
        }
        Ok(alpha_of(&cd.ric, self.tol))
    }

    pub fn flatness_test(&self) -> bool {
        self.ricci().is_flat()
    }

    /// Nullspace of `D -> D mu(.,.) - mu(D.,.) - mu(.,D.)`.
    pub fn derivation_space(&self) -> DerivationSpace {
        let n = self.dim;
        let mut sys = Mat::zeros(n * n * n, n * n);
        let col = |p: usize, q: usize| p * n + q;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let row = idx(n, i, j, k);
                    for l in 0..n {
                        sys[(row, col(k, l))] += self.get(i, j, l);
                        sys[(row, col(l, i))] -= self.get(l, j, k);
                        sys[(row, col(l, j))] -= self.get(i, l, k);
                    }
                }
            }
        }
        let (null, ambiguous) = linalg::null_space(&sys, self.tol);
        let basis: Vec<Mat> = null.iter().map(|v| Mat::from_fn(n, n, |p, q| v[col(p, q)])).collect();
        DerivationSpace { dim: basis.len(), basis, ambiguous }
    }

    /// Max-abs entry of `D mu(e_i,e_j) - mu(D e_i, e_j) - mu(e_i, D e_j)`.
    pub fn derivation_defect(&self, d: &Mat) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let ei = unit_vec(n, i);
                let ej = unit_vec(n, j);
                let lhs = d * self.bracket(&ei, &ej);
                let r1 = self.bracket(&d.column(i).into_owned(), &ej);
                let r2 = self.bracket(&ei, &d.column(j).into_owned());
                worst = worst.max((lhs - r1 - r2).amax());
            }
        }
        worst
    }

    /// Best fit `Ric = cI + D` with `D` a derivation.
    pub fn solvsoliton_residual(&self) -> Result<SolitonResidual> {
        let cd = self.ricci();
        if cd.is_flat() {
            return Err(Error::Flat);
        }
        let der = self.derivation_space();
        Ok(soliton_fit(&cd.ric, &der))
    }
}

pub(crate) fn soliton_fit(ric: &Mat, der: &DerivationSpace) -> SolitonResidual {
    let n = ric.nrows();
    let id = linalg::identity(n);
    let ric_perp = ric - der.project(ric);
    let id_perp = &id - der.project(&id);
    let den = linalg::norm_sq(&id_perp);
    let c = if den > 1e-24 { linalg::inner(&ric_perp, &id_perp) / den } else { 0.0 };
    let shifted = ric - &id * c;
    let d = der.project(&shifted);
    let residual = (shifted - &d).norm();
    let rn = ric.norm();
    let relative = if rn > 0.0 { residual / rn } else { residual };
    SolitonResidual { c, d, residual, relative }
}

/// Pinching constant of a symmetric matrix, if it is definite.
pub fn alpha_of(ric: &Mat, tol: f64) -> Option<f64> {
    let ev = ric.clone().symmetric_eigenvalues();
    let scale = ev.amax();
    if scale == 0.0 {
        return None;
    }
    let cut = tol * scale;
    let all_neg = ev.iter().all(|&r| r < -cut);
    let all_pos = ev.iter().all(|&r| r > cut);
    if !(all_neg || all_pos) {
        return None;
    }
    let lo = ev.iter().fold(f64::INFINITY, |m, r| m.min(r.abs()));
    Some(lo / scale)
}

fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

/// Power test `|X^n| <= tol |X|^n`.
pub fn matrix_is_nilpotent(x: &Mat, tol: f64) -> bool {
    let n = x.nrows();
    let s = x.norm();
    if s == 0.0 {
        return true;
    }
    let y = x / s;
    let mut p = linalg::identity(n);
    for _ in 0..n {
        p = &p * &y;
    }
    p.norm() <= tol.max(1e-12) * 10.0
}

/// All eigenvalues have negligible real part relative to the matrix scale.
/// Nilpotent blocks perturb eigenvalues like `eps^(1/k)`, hence the loose cutoff.
fn spectrum_is_imaginary(x: &Mat) -> bool {
    let s = x.norm();
    if s == 0.0 {
        return true;
    }
    if matrix_is_nilpotent(x, 1e-9) {
        return true;
    }
    linalg::eigenvalues(x).iter().all(|&(re, _)| re.abs() <= 1e-6 * s)
}

/// Reads `{"dim": n, "entries": [[i,j,k,v], ...], "tol": ...}` with 1-based indices.
pub fn from_json(text: &str) -> Result<MetricLieAlgebra> {
    let raw: BracketJson = serde_json::from_str(text)?;
    let mut entries = Vec::with_capacity(raw.entries.len());
    for (i, j, k, v) in raw.entries {
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::Malformed("bracket indices are 1-based".into()));
        }
        entries.push((i - 1, j - 1, k - 1, v));
    }
    MetricLieAlgebra::from_entries(raw.dim, &entries, raw.tol.unwrap_or(DEFAULT_TOL))
}

pub fn to_json(mu: &MetricLieAlgebra) -> String {
    let raw = BracketJson {
        dim: mu.dim,
        entries: mu.entries().into_iter().map(|(i, j, k, v)| (i + 1, j + 1, k + 1, v)).collect(),
        tol: (mu.tol != DEFAULT_TOL).then_some(mu.tol),
    };
    serde_json::to_string(&raw).expect("bracket serializes")
}
