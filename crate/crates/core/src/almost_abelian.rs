//! Almost-abelian metric Lie algebras `mu_A`: `e_n` acts on the abelian
//! ideal `R^{n-1}` by `A`. Everything here is closed form in `A`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lie::{self, CurvatureData, MetricLieAlgebra, DEFAULT_TOL};
use crate::linalg::{self, commutator, expm, inner, norm_sq, sym, Mat, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct AAData {
    a: Mat,
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

#[derive(Debug, Clone)]
pub struct OrbitGradient {
    /// Projection of the gradient onto `{[B, A]}`.
    pub tangent: Mat,
    /// Minimum-norm `B` with `[B, A] = tangent`.
    pub generator: Mat,
    /// `|grad - tangent|`.
    pub residual: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GlobalCritical {
    /// `S(A) = cI`, `c != 0`; F = n.
    Einstein,
    /// `[A, A^t] = 0` and `tr A = 0`; F = 1.
    UnimodularNormal,
    NotCritical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AASoliton {
    Normal,
    /// `[A, [A, A^t]] = c A` with `A` nilpotent.
    Nilsoliton {
        c: f64,
    },
    NotSolvsoliton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMax {
    MaxCandidate,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct SolitonSplit {
    pub n: Mat,
    pub c_skew: Mat,
    pub c: f64,
}

/// Below this size, second variations are treated as zero.
const SECOND_VARIATION_EPS: f64 = 1e-8;

impl AAData {
    pub fn new(a: Mat) -> Result<Self> {
        Self::with_tol(a, DEFAULT_TOL)
    }

    pub fn with_tol(a: Mat, tol: f64) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::Malformed(format!("A must be square and nonempty, got {}x{}", a.nrows(), a.ncols())));
        }
        if !linalg::is_finite(&a) {
            return Err(Error::Malformed("A has non-finite entries".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Malformed(format!("tolerance must be positive, got {tol}")));
        }
        Ok(AAData { a, tol })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Malformed("A must be square".into()));
        }
        Self::new(Mat::from_fn(m, m, |i, j| rows[i][j]))
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Ambient dimension `n` (A is `(n-1) x (n-1)`).
    pub fn n(&self) -> usize {
        self.a.nrows() + 1
    }

    pub fn s(&self) -> Mat {
        sym(&self.a)
    }

    pub fn sk(&self) -> Mat {
        linalg::skew(&self.a)
    }

    pub fn tr(&self) -> f64 {
        self.a.trace()
    }

    pub fn tr_s2(&self) -> f64 {
        norm_sq(&self.s())
    }

    /// `[A, A^t]`.
    pub fn comm(&self) -> Mat {
        commutator(&self.a, &self.a.transpose())
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.a)
    }

    pub fn is_flat(&self) -> bool {
        self.tr_s2() <= self.tol * self.norm_sq()
    }

    fn require_nonflat(&self) -> Result<()> {
        if self.is_flat() {
            Err(Error::Flat)
        } else {
            Ok(())
        }
    }

    fn moved(&self, a: Mat) -> Self {
        AAData { a, tol: self.tol }
    }

    /// The bracket `mu_A` with `ad e_n = A` on the ideal spanned by `e_1..e_{n-1}`.
    pub fn bracket_of(&self) -> MetricLieAlgebra {
        let n = self.n();
        let p = n - 1;
        let mut c = vec![0.0; n * n * n];
        for j in 0..p {
            for k in 0..p {
                let v = self.a[(k, j)];
                c[(p * n + j) * n + k] = v;
                c[(j * n + p) * n + k] = -v;
            }
        }
        MetricLieAlgebra::from_raw(n, c, self.tol)
    }

    /// Block form `diag(1/2 [A,A^t] - tr(A) S(A), -tr S(A)^2)`.
    pub fn ricci_aa(&self) -> CurvatureData {
        let m = self.a.nrows();
        let upper = self.comm() * 0.5 - self.s() * self.tr();
        let mut ric = Mat::zeros(m + 1, m + 1);
        ric.view_mut((0, 0), (m, m)).copy_from(&upper);
        ric[(m, m)] = -self.tr_s2();
        CurvatureData::from_ric(ric, self.is_flat())
    }

    pub fn f_aa(&self) -> Result<f64> {
        self.require_nonflat()?;
        let ts2 = self.tr_s2();
        let t = self.tr();
        let p = ts2 + t * t;
        Ok(p * p / (ts2 * p + 0.25 * norm_sq(&self.comm())))
    }

    pub fn grad_coefficients(&self) -> Result<GradCoefficients> {
        self.require_nonflat()?;
        let ts2 = self.tr_s2();
        let t = self.tr();
        let p = ts2 + t * t;
        let x2 = norm_sq(&self.comm());
        Ok(GradCoefficients {
            c1: t * p * (2.0 * ts2 * p + x2),
            c2: p * (-2.0 * t * t * p + x2),
            c3: p * p,
            c4: ts2 * p + 0.25 * x2,
        })
    }

    /// Euclidean gradient of F at A.
    pub fn grad_f(&self) -> Result<Mat> {
        let k = self.grad_coefficients()?;
        let m = self.a.nrows();
        let aax = commutator(&self.a, &self.comm());
        Ok((linalg::identity(m) * k.c1 + self.s() * k.c2 + aax * k.c3) / (k.c4 * k.c4))
    }

    /// Matrix of `B -> [B, A]` acting on column-major `vec(B)`.
    fn bracket_operator(&self) -> Mat {
        let m = self.a.nrows();
        let mut l = Mat::zeros(m * m, m * m);
        for q in 0..m {
            for p in 0..m {
                let e = linalg::unit(m, p, q);
                let col = commutator(&e, &self.a);
                l.column_mut(q * m + p).copy_from_slice(col.as_slice());
            }
        }
        l
    }

    pub fn grad_f_orbit(&self) -> Result<OrbitGradient> {
        let g = self.grad_f()?;
        let m = self.a.nrows();
        let l = self.bracket_operator();
        let rhs = Vector::from_column_slice(g.as_slice());
        let b = linalg::lstsq(&l, &rhs, 1e-12);
        let t = &l * &b;
        let tangent = Mat::from_column_slice(m, m, t.as_slice());
        let generator = Mat::from_column_slice(m, m, b.as_slice());
        let residual = (&g - &tangent).norm();
        Ok(OrbitGradient { tangent, generator, residual, grad_norm: g.norm() })
    }

    /// `|c2 [A,A^t] - 2 c3 [A^t, [A, [A,A^t]]]|`.
    pub fn critical_residual(&self) -> Result<f64> {
        let k = self.grad_coefficients()?;
        let x = self.comm();
        let rhs = commutator(&self.a.transpose(), &commutator(&self.a, &x));
        Ok((x * k.c2 - rhs * (2.0 * k.c3)).norm())
    }

    /// [`Self::critical_residual`] divided by `|A|^8`, its homogeneity degree.
    pub fn critical_residual_relative(&self) -> Result<f64> {
        Ok(self.critical_residual()? / self.norm_sq().powi(4))
    }

    pub fn is_orbit_critical(&self) -> Result<bool> {
        Ok(self.critical_residual_relative()? <= self.tol)
    }

    pub fn global_critical_test(&self) -> Result<GlobalCritical> {
        self.require_nonflat()?;
        let m = self.a.nrows() as f64;
        let an = self.norm_sq().sqrt();
        let c = self.tr() / m;
        let s = self.s();
        if (&s - linalg::identity(self.a.nrows()) * c).norm() <= self.tol * an && c.abs() > self.tol * an {
            return Ok(GlobalCritical::Einstein);
        }
        if self.comm().norm() <= self.tol * an * an && self.tr().abs() <= self.tol * an {
            return Ok(GlobalCritical::UnimodularNormal);
        }
        Ok(GlobalCritical::NotCritical)
    }

    pub fn is_normal(&self) -> bool {
        self.comm().norm() <= self.tol * self.norm_sq()
    }

    pub fn is_nilpotent(&self) -> bool {
        lie::matrix_is_nilpotent(&self.a, self.tol)
    }

    pub fn solvsoliton_test_aa(&self) -> AASoliton {
        if self.is_normal() {
            return AASoliton::Normal;
        }
        if !self.is_nilpotent() {
            return AASoliton::NotSolvsoliton;
        }
        let lhs = commutator(&self.a, &self.comm());
        let c = inner(&lhs, &self.a) / self.norm_sq();
        let res = (&lhs - &self.a * c).norm();
        if res <= self.tol * self.norm_sq().powf(1.5) {
            AASoliton::Nilsoliton { c }
        } else {
            AASoliton::NotSolvsoliton
        }
    }

    fn require_orbit_critical(&self) -> Result<()> {
        let r = self.critical_residual_relative()?;
        if r > self.tol {
            return Err(Error::Precondition(format!("A is not orbit-critical (relative residual {r:e})")));
        }
        Ok(())
    }

    /// Closed-form `d^2/dt^2 F(e^{tB} A e^{-tB})` at `t = 0`, valid at
    /// orbit-critical `A`.
    pub fn second_variation(&self, b: &Mat) -> Result<f64> {
        self.require_orbit_critical()?;
        self.check_direction(b)?;
        Ok(self.second_variation_unchecked(b))
    }

    fn second_variation_unchecked(&self, b: &Mat) -> f64 {
        let a = &self.a;
        let k = self.grad_coefficients().expect("checked non-flat");
        let t = self.tr();
        let p = self.tr_s2() + t * t;
        let x = self.comm();
        let ba = commutator(b, a);
        let bta = commutator(&b.transpose(), a);
        let first = (0.5 * norm_sq(&x) - 2.0 * t * t * p) * inner(&x, b).powi(2);
        let second = k.c2 * (0.5 * norm_sq(&ba) + 0.5 * inner(&bta, &ba));
        let third = k.c3
            * (inner(&commutator(&ba, &x), &ba) - 2.0 * norm_sq(&sym(&commutator(&a.transpose(), &ba)))
                + inner(&commutator(a, &x), &commutator(b, &ba)));
        (first + second + third) / (k.c4 * k.c4)
    }

    fn check_direction(&self, b: &Mat) -> Result<()> {
        if b.shape() != self.a.shape() {
            return Err(Error::Malformed("direction B has the wrong shape".into()));
        }
        Ok(())
    }

    /// Central second difference of F along the conjugation curve.
    pub fn second_variation_fd(&self, b: &Mat, h: f64) -> Result<f64> {
        self.require_nonflat()?;
        self.check_direction(b)?;
        if !(h > 0.0) {
            return Err(Error::Domain(format!("step h must be positive, got {h}")));
        }
        let f0 = self.f_aa()?;
        let fp = self.conjugate_by_exp(b, h).f_aa()?;
        let fm = self.conjugate_by_exp(b, -h).f_aa()?;
        Ok((fp - 2.0 * f0 + fm) / (h * h))
    }

    /// `e^{hB} A e^{-hB}`.
    pub fn conjugate_by_exp(&self, b: &Mat, h: f64) -> Self {
        let g = expm(&(b * h));
        let ginv = expm(&(b * -h));
        self.moved(g * &self.a * ginv)
    }

    pub fn conjugate(&self, g: &Mat) -> Result<Self> {
        let ginv = g.clone().try_inverse().ok_or_else(|| Error::Degenerate("conjugator is singular".into()))?;
        Ok(self.moved(g * &self.a * ginv))
    }

    /// Second-variation signature: first along `[A, A^t]`, then along
    /// `trials` random symmetric directions, skipping those whose orbit
    /// tangent lies in the isometry directions `{[K, A] : K skew}`.
    pub fn local_max_classify(&self, trials: usize, seed: u64) -> Result<LocalMax> {
        self.require_orbit_critical()?;
        let m = self.a.nrows();
        let x = self.comm();
        if x.norm() > 0.0 {
            let bx = &x / x.norm();
            if self.second_variation_unchecked(&bx) > SECOND_VARIATION_EPS {
                return Ok(LocalMax::Saddle);
            }
        }
        let iso = self.isometry_tangents();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut evaluated = 0;
        let mut all_negative = true;
        let an = self.norm_sq().sqrt();
        for _ in 0..trials {
            let g = linalg::gaussian_matrix(m, m, &mut rng);
            let b = sym(&g);
            let b = &b / b.norm();
            let tangent = commutator(&b, &self.a);
            let mut off = tangent.clone();
            for q in &iso {
                off -= q * inner(&tangent, q);
            }
            if off.norm() <= 1e-6 * an {
                continue;
            }
            evaluated += 1;
            let q = self.second_variation_unchecked(&b);
            if q > SECOND_VARIATION_EPS {
                return Ok(LocalMax::Saddle);
            }
            if q >= -SECOND_VARIATION_EPS {
                all_negative = false;
            }
        }
        Ok(if evaluated > 0 && all_negative { LocalMax::MaxCandidate } else { LocalMax::Degenerate })
    }

    /// Orthonormal basis of `{[K, A] : K skew}`.
    fn isometry_tangents(&self) -> Vec<Mat> {
        let m = self.a.nrows();
        let mut gens = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let k = linalg::unit(m, i, j) - linalg::unit(m, j, i);
                let t = commutator(&k, &self.a);
                gens.push(Vector::from_column_slice(t.as_slice()));
            }
        }
        let floor = self.tol * self.norm_sq().sqrt();
        let (basis, _) = linalg::orthonormal_span(&gens, m * m, self.tol, floor);
        basis.iter().map(|v| Mat::from_column_slice(m, m, v.as_slice())).collect()
    }

    /// Splits a traceless orbit-critical `A` as `N + C` with `N` a
    /// nilsoliton, `C` skew and `[N, C] = 0`. `None` when the construction
    /// does not apply (e.g. normal `A`).
    pub fn ricci_soliton_decompose(&self) -> Result<Option<SolitonSplit>> {
        self.require_orbit_critical()?;
        let an = self.norm_sq().sqrt();
        if self.tr().abs() > self.tol * an {
            return Err(Error::Precondition(format!("tr A = {} is not zero", self.tr())));
        }
        let a = &self.a;
        let y = commutator(a, &self.comm());
        let tol4 = self.tol * an.powi(4);
        if commutator(a, &y).norm() > tol4 {
            return Ok(None);
        }
        let sy = sym(&y);
        let sy2 = norm_sq(&sy);
        if sy2 <= (self.tol * an.powi(3)).powi(2) {
            return Ok(None);
        }
        let sa = self.s();
        let c = inner(&sa, &sy) / sy2;
        // <A, [A,[A,A^t]]> = -|[A,A^t]|^2 forces c < 0
        if c >= 0.0 || (&sa - &sy * c).norm() > self.tol * an {
            return Ok(None);
        }
        let n = &y * c;
        let c_skew = a - &n;
        let nd = AAData { a: n.clone(), tol: self.tol };
        let nil_ok = matches!(nd.solvsoliton_test_aa(), AASoliton::Nilsoliton { .. });
        let skew_ok = (&c_skew + c_skew.transpose()).norm() <= self.tol * an;
        let comm_ok = commutator(&n, &c_skew).norm() <= self.tol * an * an;
        if nil_ok && skew_ok && comm_ok {
            Ok(Some(SolitonSplit { n, c_skew, c }))
        } else {
            Ok(None)
        }
    }

    /// `m = [A,A^t] / |A|^2` and `|[A,A^t]| / |A|^2`.
    pub fn moment_map(&self) -> Result<(Mat, f64)> {
        let a2 = self.norm_sq();
        if a2 == 0.0 {
            return Err(Error::Degenerate("moment map undefined at A = 0".into()));
        }
        let mm = self.comm() / a2;
        let ratio = mm.norm();
        Ok((mm, ratio))
    }

    /// F for traceless `A`.
    pub fn unimodular_f(&self) -> Result<f64> {
        let an = self.norm_sq().sqrt();
        if self.tr().abs() > self.tol * an.max(1.0) {
            return Err(Error::Precondition(format!("tr A = {} is not zero", self.tr())));
        }
        self.require_nonflat()?;
        let ts2 = self.tr_s2();
        Ok(ts2 * ts2 / (ts2 * ts2 + 0.25 * norm_sq(&self.comm())))
    }

    /// F on the orbit of `self` via the invariants `c0 = tr(A^2)/2 + tr(A)^2`
    /// and `d0 = tr(A^2)/2`: only `|B|^2` and `|[B,B^t]|^2` vary.
    pub fn orbit_f(&self, b: &Mat) -> f64 {
        let t = self.tr();
        let ta2 = (&self.a * &self.a).trace();
        let c0 = 0.5 * ta2 + t * t;
        let d0 = 0.5 * ta2;
        let u = 0.5 * norm_sq(b);
        let w = 0.25 * norm_sq(&commutator(b, &b.transpose()));
        let num = u + c0;
        num * num / ((u + d0) * num + w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    Jordan,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a_t" => Family::A,
            "b_t" => Family::B,
            "c_t" => Family::C,
            "d_t" => Family::D,
            "e_t" => Family::E,
            "jordan_t" | "jordan" => Family::Jordan,
            _ => return Err(Error::Malformed(format!("unknown family '{s}'"))),
        })
    }
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::Jordan];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "a_t",
            Family::B => "b_t",
            Family::C => "c_t",
            Family::D => "d_t",
            Family::E => "e_t",
            Family::Jordan => "jordan_t",
        }
    }

    pub fn check_domain(self, t: f64) -> Result<()> {
        let ok = t.is_finite()
            && match self {
                Family::A => t.abs() <= 1.0,
                Family::B | Family::Jordan => true,
                Family::C | Family::D | Family::E => t > 0.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("t = {t} outside the domain of {}", self.name())))
        }
    }

    pub fn matrix(self, t: f64) -> Mat {
        match self {
            Family::A => Mat::from_row_slice(2, 2, &[t, -1.0, 1.0, -t]),
            Family::B => Mat::from_row_slice(2, 2, &[t, -1.0, 1.0, t]),
            Family::C => Mat::from_row_slice(3, 3, &[t, -1.0, 0.0, 1.0, -t, 0.0, 0.0, 0.0, t]),
            Family::D => {
                let mut m = Mat::zeros(4, 4);
                m[(0, 1)] = -1.0;
                m[(1, 0)] = 1.0;
                m[(2, 3)] = t;
                m
            }
            Family::E => {
                let r = (1.0 + t * t).sqrt();
                let mut m = Mat::zeros(4, 4);
                m[(0, 0)] = t;
                m[(0, 1)] = -r;
                m[(1, 0)] = r;
                m[(1, 1)] = -t;
                m[(2, 3)] = t;
                m
            }
            Family::Jordan => Mat::from_row_slice(2, 2, &[1.0, t, 0.0, 1.0]),
        }
    }

    /// Closed form of F along the family; `None` where the member is flat.
    pub fn f_closed(self, t: f64) -> Option<f64> {
        let t2 = t * t;
        let t4 = t2 * t2;
        match self {
            Family::A if t == 0.0 => None,
            Family::A => Some(t4 / (t4 + 2.0 * t2)),
            Family::B if t == 0.0 => None,
            Family::B => Some(3.0),
            Family::C => Some(4.0 * t4 / (3.0 * t4 + 2.0 * t2)),
            Family::D => Some(1.0 / 3.0),
            // F of the matrix E_t itself (see the README note on E_t)
            Family::E => Some(25.0 * t4 / (59.0 * t4 + 32.0 * t2)),
            Family::Jordan => {
                let p = 6.0 + 0.5 * t2;
                Some(p * p / ((2.0 + 0.5 * t2) * p + 0.5 * t4))
            }
        }
    }

    /// Member at `t`, zero-padded to ambient dimension `n` if given.
    pub fn member(self, t: f64, n: Option<usize>) -> Result<(AAData, Option<f64>)> {
        self.check_domain(t)?;
        let mut a = self.matrix(t);
        if let Some(n) = n {
            let m = a.nrows();
            if n < m + 1 {
                return Err(Error::Domain(format!("{} needs n >= {}", self.name(), m + 1)));
            }
            a = a.resize(n - 1, n - 1, 0.0);
        }
        Ok((AAData::new(a)?, self.f_closed(t)))
    }
}

/// `(aa, F_closed)` for a named family.
pub fn family(name: &str, t: f64, n: Option<usize>) -> Result<(AAData, Option<f64>)> {
    name.parse::<Family>()?.member(t, n)
}

/// Block bracket used to collapse `F` to zero: `e_1` acts on the nilradical
/// by `diag(B(a_j, eps))`, `e_2..e_r` are central, and
/// `F = C1 eps^4 / (C1 eps^4 + 2 C2 eps^2)`.
pub fn collapse_family(a: &[f64], eps: f64, r: usize) -> Result<(MetricLieAlgebra, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, 1)")));
    }
    if a.is_empty() {
        return Err(Error::Domain("collapse family needs at least one block".into()));
    }
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let k = a.len();
    let n = r + 2 * k;
    let mut entries = Vec::new();
    for (j, &aj) in a.iter().enumerate() {
        let (p, q) = (r + 2 * j, r + 2 * j + 1);
        // columns of B(a_j, eps) give ad e_1 on e_p, e_q
        let block = [(p, p, eps * aj), (q, p, aj), (p, q, -aj), (q, q, -eps * aj)];
        for (row, col, v) in block {
            if v != 0.0 {
                entries.push((0, col, row, v));
            }
        }
    }
    let mu = MetricLieAlgebra::from_entries(n, &entries, DEFAULT_TOL)?;
    let c1 = a.iter().map(|x| x * x).sum::<f64>().powi(2);
    let c2: f64 = a.iter().map(|x| x.powi(4)).sum();
    let e2 = eps * eps;
    let f = c1 * e2 * e2 / (c1 * e2 * e2 + 2.0 * c2 * e2);
    Ok((mu, f))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixJson {
    Wrapped {
        #[serde(default)]
        n: Option<usize>,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
    },
    Bare(Vec<Vec<f64>>),
}

/// Parses `{"n": n, "A": [[...]]}` or a bare array of rows.
pub fn matrix_from_json(text: &str) -> Result<Mat> {
    let (n, rows) = match serde_json::from_str::<MatrixJson>(text)? {
        MatrixJson::Wrapped { n, a } => (n, a),
        MatrixJson::Bare(a) => (None, a),
    };
    let m = rows.len();
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Malformed("A must be a nonempty square array".into()));
    }
    if let Some(n) = n {
        if n != m + 1 {
            return Err(Error::Malformed(format!("n = {n} but A is {m}x{m}")));
        }
    }
    Ok(Mat::from_fn(m, m, |i, j| rows[i][j]))
}

pub fn matrix_to_json(a: &Mat) -> String {
    let rows: Vec<Vec<f64>> = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
    serde_json::json!({ "n": a.nrows() + 1, "A": rows }).to_string()
}

#[derive(Debug, Deserialize)]
pub struct FamilyRequest {
    pub family: String,
    pub t: f64,
    #[serde(default)]
    pub n: Option<usize>,
}

impl FamilyRequest {
    pub fn resolve(&self) -> Result<(AAData, Option<f64>)> {
        family(&self.family, self.t, self.n)
    }
}
