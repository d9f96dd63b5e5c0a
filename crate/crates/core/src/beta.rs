//! Beta operators of nilsolitons and the pinching bounds they give for
//! unimodular solvable groups.

use crate::error::{Error, Result};
use crate::lie::MetricLieAlgebra;
use crate::linalg::{self, commutator, inner, Mat, Vector};

#[derive(Debug, Clone)]
pub struct BetaType {
    /// Eigenvalues, ascending, with sum -1.
    pub b: Vec<f64>,
    pub m: usize,
    pub norm_sq: f64,
    pub q: f64,
    /// The operator itself in nilradical coordinates, when known.
    pub operator: Option<Mat>,
}

impl BetaType {
    pub fn from_eigenvalues(mut b: Vec<f64>) -> Result<Self> {
        if b.is_empty() || b.iter().any(|x| !x.is_finite()) {
            return Err(Error::Malformed("a type needs finitely many finite eigenvalues".into()));
        }
        b.sort_by(f64::total_cmp);
        let norm_sq: f64 = b.iter().map(|x| x * x).sum();
        if norm_sq == 0.0 {
            return Err(Error::Degenerate("zero type".into()));
        }
        Ok(BetaType { m: b.len(), q: 1.0 / norm_sq, norm_sq, b, operator: None })
    }

    fn from_operator(op: Mat) -> Result<Self> {
        let ev = op.clone().symmetric_eigenvalues();
        let mut bt = Self::from_eigenvalues(ev.iter().copied().collect())?;
        bt.operator = Some(op);
        Ok(bt)
    }

    /// Operator to use on the nilradical: the stored one, else `diag(b)`.
    pub fn operator_or_diag(&self) -> Mat {
        self.operator.clone().unwrap_or_else(|| Mat::from_diagonal(&Vector::from_row_slice(&self.b)))
    }

    pub fn rational(&self) -> Vec<String> {
        self.b.iter().map(|&x| linalg::format_rational(x, 120)).collect()
    }
}

/// `beta = s (D - tr(D^2)/tr(D) I)` normalized to `tr beta = -1`, where
/// `Ric = cI + D` is the soliton decomposition of `lambda`.
pub fn beta_from_nilsoliton(lambda: &MetricLieAlgebra, tol: f64) -> Result<BetaType> {
    if !lambda.is_nilpotent() {
        return Err(Error::Precondition("beta operator needs a nilpotent bracket".into()));
    }
    let sr = lambda.solvsoliton_residual()?;
    if sr.relative > tol {
        return Err(Error::Precondition(format!("not a nilsoliton (relative residual {:e})", sr.relative)));
    }
    let d = linalg::sym(&sr.d);
    let n = d.nrows();
    let tr = d.trace();
    if tr.abs() <= tol * d.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Degenerate("tr D = 0".into()));
    }
    let beta0 = &d - linalg::identity(n) * (linalg::norm_sq(&d) / tr);
    let t0 = beta0.trace();
    if t0 == 0.0 {
        return Err(Error::Degenerate("tr beta vanishes before normalization".into()));
    }
    BetaType::from_operator(beta0 * (-1.0 / t0))
}

#[derive(Debug, Clone)]
pub struct TypeReport {
    pub sum: f64,
    pub sum_ok: bool,
    /// `min_j (b_j + sum b_i^2)`, must be positive.
    pub min_margin: f64,
    pub margin_ok: bool,
    /// `sum 1/b_i^2` over nonzero `b_i`; informational only.
    pub inverse_sq_sum: f64,
    pub pass: bool,
}

pub fn type_invariants_check(bt: &BetaType, tol: f64) -> TypeReport {
    let sum: f64 = bt.b.iter().sum();
    let sum_ok = (sum + 1.0).abs() <= tol;
    let min_margin = bt.b.iter().map(|b| b + bt.norm_sq).fold(f64::INFINITY, f64::min);
    let margin_ok = min_margin > tol;
    let inverse_sq_sum = bt.b.iter().filter(|b| b.abs() > tol).map(|b| 1.0 / (b * b)).sum();
    TypeReport { sum, sum_ok, min_margin, margin_ok, inverse_sq_sum, pass: sum_ok && margin_ok }
}

/// Upper bound for F on a unimodular group with nilradical of dimension `m`:
/// `n - m + q`, or `n - m` for an abelian nilradical.
pub fn pinching_bound(n: usize, m: usize, bt: Option<&BetaType>) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::Malformed(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let base = (n - m) as f64;
    match bt {
        None => Ok(base),
        Some(bt) => {
            if bt.m != m {
                return Err(Error::Malformed(format!("type has {} entries but m = {m}", bt.m)));
            }
            let v = base + bt.q;
            if v >= n as f64 - 1.0 {
                return Err(Error::Precondition(format!("bound {v} is not below n - 1")));
            }
            Ok(v)
        }
    }
}

/// `diag(-|beta|^2 I_{n-m}, b)`.
pub fn beta_sigma(bt: &BetaType, n: usize) -> Result<Mat> {
    if n < bt.m {
        return Err(Error::Malformed(format!("n = {n} is smaller than m = {}", bt.m)));
    }
    let mut diag = vec![-bt.norm_sq; n - bt.m];
    diag.extend_from_slice(&bt.b);
    Ok(Mat::from_diagonal(&Vector::from_vec(diag)))
}

/// Partition of the coordinates into a complement `a` and the nilradical `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub a: Vec<usize>,
    pub n: Vec<usize>,
}

impl Split {
    pub fn new(dim: usize, a: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for &i in &a {
            if i >= dim || seen[i] {
                return Err(Error::Malformed(format!("bad split index {i} for dim {dim}")));
            }
            seen[i] = true;
        }
        let n = (0..dim).filter(|&i| !seen[i]).collect::<Vec<_>>();
        if n.is_empty() {
            return Err(Error::Malformed("nilradical part of the split is empty".into()));
        }
        Ok(Split { a, n })
    }

    /// Whole algebra is the nilradical.
    pub fn nilpotent(dim: usize) -> Self {
        Split { a: Vec::new(), n: (0..dim).collect() }
    }

    fn order(&self) -> Vec<usize> {
        self.a.iter().chain(&self.n).copied().collect()
    }

    fn check(&self, dim: usize) -> Result<()> {
        let mut o = self.order();
        o.sort_unstable();
        if o != (0..dim).collect::<Vec<_>>() {
            return Err(Error::Malformed("split is not a partition of the coordinates".into()));
        }
        Ok(())
    }
}

fn permuted(x: &Mat, order: &[usize]) -> Mat {
    Mat::from_fn(order.len(), order.len(), |i, j| x[(order[i], order[j])])
}

fn require_unimodular(mu: &MetricLieAlgebra) -> Result<()> {
    if !mu.is_unimodular() {
        return Err(Error::Precondition("bracket is not unimodular".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct UnimodularSolitonReport {
    /// Flat input: nothing to compare.
    pub skipped: bool,
    pub scal_n: f64,
    /// `|Ric - (-scal_N) beta_sigma| / |Ric|`.
    pub residual: f64,
    pub cosine: f64,
    pub magnitude_ratio: f64,
    pub pass: bool,
}

/// Checks `Ric = -scal_N beta_sigma`, or for an abelian nilradical
/// `Ric = scal/(n-m) diag(I_a, 0)`.
pub fn solvsoliton_verify_unimodular(
    mu: &MetricLieAlgebra,
    split: &Split,
    bt: Option<&BetaType>,
    tol: f64,
) -> Result<UnimodularSolitonReport> {
    split.check(mu.dim())?;
    require_unimodular(mu)?;
    let cd = mu.ricci();
    let scal_n = mu.restrict(&split.n)?.ricci().scal;
    if cd.is_flat() {
        return Ok(UnimodularSolitonReport {
            skipped: true,
            scal_n,
            residual: 0.0,
            cosine: 1.0,
            magnitude_ratio: 1.0,
            pass: true,
        });
    }
    let ric = permuted(&cd.ric, &split.order());
    let (k, m) = (split.a.len(), split.n.len());
    let target = match bt {
        Some(bt) => {
            if bt.m != m {
                return Err(Error::Malformed(format!("type has {} entries, nilradical has {m}", bt.m)));
            }
            let sigma = linalg::block_diag(&[linalg::identity(k) * -bt.norm_sq, bt.operator_or_diag()]);
            sigma * -scal_n
        }
        None => {
            if k == 0 {
                return Err(Error::Malformed("abelian nilradical needs a nonempty complement".into()));
            }
            linalg::block_diag(&[linalg::identity(k), Mat::zeros(m, m)]) * (cd.scal / k as f64)
        }
    };
    let rn = ric.norm();
    let tn = target.norm();
    let cosine = if tn > 0.0 { inner(&ric, &target) / (rn * tn) } else { 0.0 };
    let magnitude_ratio = if tn > 0.0 { rn / tn } else { f64::INFINITY };
    let residual = (&ric - &target).norm() / rn;
    Ok(UnimodularSolitonReport { skipped: false, scal_n, residual, cosine, magnitude_ratio, pass: residual <= tol })
}

#[derive(Debug, Clone, Copy)]
pub struct Structural {
    /// `[a, a] = 0`.
    pub a_abelian: bool,
    /// `[beta, ad X|_n] = 0` for `X` in `a`.
    pub beta_commutes: bool,
    /// `beta_+` is a derivation of `n`.
    pub beta_plus_derivation: bool,
}

#[derive(Debug, Clone)]
pub struct EbetaReport {
    pub pairing: f64,
    pub nonnegative: bool,
    /// Checked only in the equality case.
    pub structural: Option<Structural>,
}

/// `<Ric, E_beta>` with `E_beta = diag(0, beta + |beta|^2 I)`; `beta_+ = I`
/// when the nilradical is abelian (`bt = None`).
pub fn ebeta_pairing(mu: &MetricLieAlgebra, split: &Split, bt: Option<&BetaType>, tol: f64) -> Result<EbetaReport> {
    split.check(mu.dim())?;
    require_unimodular(mu)?;
    let (k, m) = (split.a.len(), split.n.len());
    let beta_plus = match bt {
        Some(bt) => {
            if bt.m != m {
                return Err(Error::Malformed(format!("type has {} entries, nilradical has {m}", bt.m)));
            }
            bt.operator_or_diag() + linalg::identity(m) * bt.norm_sq
        }
        None => linalg::identity(m),
    };
    let e = linalg::block_diag(&[Mat::zeros(k, k), beta_plus.clone()]);
    let cd = mu.ricci();
    let ric = permuted(&cd.ric, &split.order());
    let pairing = inner(&ric, &e);
    let scale = tol * (ric.norm() * e.norm()).max(f64::MIN_POSITIVE);
    let structural = (pairing <= scale).then(|| {
        let cut = tol * mu.norm_sq().sqrt().max(1.0);
        let mut a_abelian = true;
        for &i in &split.a {
            for &j in &split.a {
                for l in 0..mu.dim() {
                    if mu.get(i, j, l).abs() > cut {
                        a_abelian = false;
                    }
                }
            }
        }
        let beta = beta_plus.clone() - linalg::identity(m) * bt.map_or(0.0, |b| b.norm_sq);
        let beta_commutes = bt.is_none()
            || split.a.iter().all(|&i| {
                let ad = Mat::from_fn(m, m, |r, c| mu.get(i, split.n[c], split.n[r]));
                commutator(&beta, &ad).norm() <= cut
            });
        let nil = mu.restrict(&split.n).expect("split checked");
        let beta_plus_derivation = nil.derivation_defect(&beta_plus) <= cut;
        Structural { a_abelian, beta_commutes, beta_plus_derivation }
    });
    Ok(EbetaReport { pairing, nonnegative: pairing >= -scale, structural })
}

#[derive(Debug, Clone)]
pub struct NormEstimateReport {
    pub ric_norm: f64,
    /// `-scal (n - m + q)^(-1/2)`.
    pub lower_bound: f64,
    pub holds: bool,
    /// `|Ric|` attains the bound.
    pub equality: bool,
    /// Solvsoliton by the residual test.
    pub soliton: bool,
    pub f: f64,
    pub bound: f64,
    pub f_below_bound: bool,
}

impl NormEstimateReport {
    /// Equality happens exactly at solvsolitons.
    pub fn consistent(&self) -> bool {
        self.holds && self.f_below_bound && self.equality == self.soliton
    }
}

pub fn norm_estimate_check(
    mu: &MetricLieAlgebra,
    n: usize,
    m: usize,
    bt: Option<&BetaType>,
    tol: f64,
) -> Result<NormEstimateReport> {
    if n != mu.dim() {
        return Err(Error::Malformed(format!("n = {n} but the bracket has dimension {}", mu.dim())));
    }
    require_unimodular(mu)?;
    let cd = mu.ricci();
    let f = cd.f.ok_or(Error::Flat)?;
    let bound = pinching_bound(n, m, bt)?;
    let ric_norm = cd.ric_norm_sq.sqrt();
    let lower_bound = -cd.scal / bound.sqrt();
    let slack = tol * ric_norm;
    let soliton = mu.solvsoliton_residual()?.relative <= tol.sqrt();
    Ok(NormEstimateReport {
        ric_norm,
        lower_bound,
        holds: ric_norm >= lower_bound - slack,
        equality: (ric_norm - lower_bound).abs() <= tol.sqrt() * ric_norm,
        soliton,
        f,
        bound,
        f_below_bound: f <= bound * (1.0 + tol),
    })
}

/// `(sum r_i)^2 / sum r_i^2` for a Ricci spectrum.
pub fn f_from_spectrum(spectrum: &[f64]) -> Result<f64> {
    let s2: f64 = spectrum.iter().map(|r| r * r).sum();
    if s2 == 0.0 {
        return Err(Error::Flat);
    }
    let s: f64 = spectrum.iter().sum();
    Ok(s * s / s2)
}

/// Spectrum `{c + 1, ..., c + n}` with `c = -(2n + 1)/3`, the unique shift
/// with `tr(Ric (Ric - cI)) = 0`.
pub fn shifted_spectrum(n: usize) -> Vec<f64> {
    let c = -(2.0 * n as f64 + 1.0) / 3.0;
    (1..=n).map(|i| c + i as f64).collect()
}
