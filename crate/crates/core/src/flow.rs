//! Orbit flows: F-ascent and double-bracket on matrices, and the
//! nilsoliton search on nilpotent brackets.
//!
//! Every step is a conjugation (or a group action), so iterates stay on the
//! orbit up to rounding.

use serde::{Deserialize, Serialize};

use crate::almost_abelian::AAData;
use crate::error::{Error, Result};
use crate::lie::MetricLieAlgebra;
use crate::linalg::{self, commutator, expm, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    UnitNorm,
    #[default]
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    /// Initial step, adapted by doubling and halving.
    pub step: f64,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub seed: u64,
    pub normalization: Normalization,
    /// Ascent stops (not converged) once the accumulated conjugator is this
    /// badly conditioned: the iterate is running off to the orbit boundary.
    pub max_condition: f64,
    /// Nilsoliton search: optimize over diagonal group elements first.
    pub diagonal_warm_start: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            step: 0.1,
            max_iter: 20_000,
            grad_tol: 1e-10,
            seed: 0,
            normalization: Normalization::None,
            max_condition: 1e8,
            diagonal_warm_start: true,
        }
    }
}

impl FlowConfig {
    /// Defaults for [`nilsoliton_find`]: the residual there is limited by
    /// finite-difference resolution of F, around 1e-9.
    pub fn nilsoliton() -> Self {
        FlowConfig { step: 1.0, max_iter: 2_000, grad_tol: 1e-7, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Malformed(format!("step must be positive, got {}", self.step)));
        }
        if self.max_iter == 0 {
            return Err(Error::Malformed("max_iter must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::Malformed(format!("grad_tol must be positive, got {}", self.grad_tol)));
        }
        if !(self.max_condition > 1.0) {
            return Err(Error::Malformed("max_condition must exceed 1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: FlowConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub struct FlowResult<P> {
    pub point: P,
    /// F at the start and after every accepted step.
    pub f_trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    pub left_orbit: bool,
}

impl<P> FlowResult<P> {
    pub fn final_f(&self) -> f64 {
        *self.f_trace.last().expect("trace holds the starting value")
    }

    fn json_common(&self, point: serde_json::Value) -> String {
        serde_json::json!({
            "point": point,
            "f_trace": self.f_trace,
            "converged": self.converged,
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "left_orbit": self.left_orbit,
        })
        .to_string()
    }
}

impl FlowResult<Mat> {
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<f64>> =
            (0..self.point.nrows()).map(|i| self.point.row(i).iter().copied().collect()).collect();
        self.json_common(serde_json::json!(rows))
    }
}

impl FlowResult<MetricLieAlgebra> {
    pub fn to_json(&self) -> String {
        let v: serde_json::Value = serde_json::from_str(&crate::lie::to_json(&self.point)).expect("valid json");
        self.json_common(v)
    }
}

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Scale-free stationarity on the orbit: `|proj grad| / |grad|`, or
/// `|grad| |A|` when that is smaller (global critical points).
fn stationarity(aa: &AAData) -> Result<(f64, crate::almost_abelian::OrbitGradient)> {
    let og = aa.grad_f_orbit()?;
    let an = aa.norm_sq().sqrt();
    let ratio = if og.grad_norm > 0.0 { og.tangent.norm() / og.grad_norm } else { 0.0 };
    Ok((ratio.min(og.grad_norm * an), og))
}

/// Gradient ascent of F along the conjugation orbit.
pub fn ascent_flow(start: &AAData, cfg: &FlowConfig) -> Result<FlowResult<Mat>> {
    cfg.validate()?;
    let m = start.a().nrows();
    let tol = start.tol();
    let mut a = start.a().clone();
    if cfg.normalization == Normalization::UnitNorm {
        a /= a.norm();
    }
    let mut cur = AAData::with_tol(a, tol)?;
    let mut f = cur.f_aa()?;
    let mut trace = vec![f];
    let mut g = linalg::identity(m);
    let mut h = cfg.step;
    let mut iterations = 0;
    let (mut residual, mut og) = stationarity(&cur)?;
    let mut left_orbit = false;
    while residual > cfg.grad_tol && iterations < cfg.max_iter {
        let b = &og.generator;
        let slope = og.tangent.norm_squared();
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let e = expm(&(b * h));
            let cand = AAData::with_tol(&e * cur.a() * expm(&(b * -h)), tol)?;
            if cand.is_flat() {
                return Err(Error::Flat);
            }
            let fc = cand.f_aa()?;
            if fc > f && fc >= f + ARMIJO * h * slope {
                accepted = Some((cand, fc, e));
                break;
            }
            // Close to a maximum F stops resolving the Armijo gain; still
            // accept steps that keep F and reduce the stationarity measure.
            if fc >= f && stationarity(&cand)?.0 < residual {
                accepted = Some((cand, fc, e));
                break;
            }
            h *= 0.5;
        }
        let Some((cand, fc, e)) = accepted else { break };
        iterations += 1;
        g = e * g;
        let mut next = cand.a().clone();
        if cfg.normalization == Normalization::UnitNorm {
            next /= next.norm();
        }
        cur = AAData::with_tol(next, tol)?;
        f = fc;
        trace.push(f);
        h *= 2.0;
        (residual, og) = stationarity(&cur)?;
        if linalg::condition_number(&g) > cfg.max_condition {
            left_orbit = true;
            break;
        }
    }
    Ok(FlowResult {
        point: cur.a().clone(),
        f_trace: trace,
        converged: residual <= cfg.grad_tol && !left_orbit,
        iterations,
        final_residual: residual,
        left_orbit,
    })
}

/// Double-bracket flow `A' = -[[A, A^t], A]` by conjugation steps.
pub fn double_bracket_flow(start: &AAData, cfg: &FlowConfig) -> Result<FlowResult<Mat>> {
    cfg.validate()?;
    if start.norm_sq() == 0.0 {
        return Err(Error::Degenerate("double-bracket flow needs A != 0".into()));
    }
    let tol = start.tol();
    let mut a = start.a().clone();
    let f_of = |a: &Mat| AAData::with_tol(a.clone(), tol).and_then(|x| x.f_aa()).unwrap_or(f64::NAN);
    let mut trace = vec![f_of(&a)];
    let mut x = commutator(&a, &a.transpose());
    let mut x2 = x.norm_squared();
    let mut a2 = a.norm_squared();
    let mut h = cfg.step / a2;
    let mut iterations = 0;
    let done = |x2: f64, a2: f64| x2.sqrt() <= cfg.grad_tol * a2.min(1.0);
    while !done(x2, a2) && iterations < cfg.max_iter {
        let b = -&x;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = expm(&(&b * h)) * &a * expm(&(&b * -h));
            let ca2 = cand.norm_squared();
            let cx = commutator(&cand, &cand.transpose());
            let cx2 = cx.norm_squared();
            let armijo = ca2 <= a2 - ARMIJO * h * 2.0 * x2;
            // near the limit the decrease of |A|^2 drops below its rounding;
            // then progress in |[A, A^t]| alone decides
            let flat = ca2 <= a2 * (1.0 + 4.0 * f64::EPSILON) && cx2 < x2;
            if (armijo || flat) && cx2 <= x2 {
                accepted = Some((cand, ca2, cx, cx2));
                break;
            }
            h *= 0.5;
        }
        let Some((cand, ca2, cx, cx2)) = accepted else { break };
        iterations += 1;
        a = cand;
        a2 = ca2;
        x = cx;
        x2 = cx2;
        trace.push(f_of(&a));
        h *= 2.0;
        // collapsed onto 0 (e.g. rank-one nilpotent start)
        if !(a2 > f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(FlowResult {
        converged: a2 > 0.0 && done(x2, a2),
        point: a,
        f_trace: trace,
        iterations,
        final_residual: x2.sqrt(),
        left_orbit: false,
    })
}

fn soliton_residual(mu: &MetricLieAlgebra) -> Result<f64> {
    Ok(mu.solvsoliton_residual()?.relative)
}

fn normalized(mu: &MetricLieAlgebra) -> MetricLieAlgebra {
    mu.scaled(1.0 / mu.norm_sq().sqrt())
}

/// `exp(s E_ij)` for a single parameter.
fn elementary(n: usize, i: usize, j: usize, s: f64) -> Mat {
    let mut e = linalg::identity(n);
    if i == j {
        e[(i, i)] = s.exp();
    } else {
        e[(i, j)] = s;
    }
    e
}

fn fd_gradient(mu: &MetricLieAlgebra, diagonal_only: bool) -> Result<Mat> {
    const H: f64 = 1e-6;
    let n = mu.dim();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if diagonal_only && i != j {
                continue;
            }
            let fp = mu.act(&elementary(n, i, j, H))?.pinching_f()?;
            let fm = mu.act(&elementary(n, i, j, -H))?.pinching_f()?;
            g[(i, j)] = (fp - fm) / (2.0 * H);
        }
    }
    Ok(g)
}

/// Maximizes F over the `GL_n` orbit of a nilpotent bracket; the maximum is
/// the nilsoliton. Works in a moving frame: each step applies
/// `exp(s G)` with `G` the finite-difference gradient at the identity.
pub fn nilsoliton_find(mu: &MetricLieAlgebra, cfg: &FlowConfig) -> Result<FlowResult<MetricLieAlgebra>> {
    cfg.validate()?;
    if !mu.is_nilpotent() {
        return Err(Error::Precondition("nilsoliton search needs a nilpotent bracket".into()));
    }
    if mu.flatness_test() {
        return Err(Error::Flat);
    }
    let mut cur = normalized(mu);
    let mut f = cur.pinching_f()?;
    let mut trace = vec![f];
    let mut residual = soliton_residual(&cur)?;
    let mut iterations = 0;
    let phases: &[bool] = if cfg.diagonal_warm_start { &[true, false] } else { &[false] };
    for &diagonal_only in phases {
        let mut s = cfg.step;
        while residual > cfg.grad_tol && iterations < cfg.max_iter {
            let g = fd_gradient(&cur, diagonal_only)?;
            let slope = g.norm_squared();
            if slope == 0.0 {
                break;
            }
            let mut accepted = None;
            for _ in 0..MAX_HALVINGS {
                let cand = normalized(&cur.act(&expm(&(&g * s)))?);
                let fc = cand.pinching_f()?;
                if fc >= f + ARMIJO * s * slope && fc > f {
                    accepted = Some((cand, fc));
                    break;
                }
                s *= 0.5;
            }
            let Some((cand, fc)) = accepted else { break };
            iterations += 1;
            cur = cand;
            f = fc;
            trace.push(f);
            residual = soliton_residual(&cur)?;
            s *= 2.0;
        }
    }
    Ok(FlowResult {
        converged: residual <= cfg.grad_tol,
        point: cur,
        f_trace: trace,
        iterations,
        final_residual: residual,
        left_orbit: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::MetricLieAlgebra;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn aa(rows: &[&[f64]]) -> AAData {
        AAData::from_rows(rows).unwrap()
    }

    #[test]
    fn ascent_runs_toward_the_einstein_boundary_on_jordan() {
        let r = ascent_flow(&aa(&[&[1.0, 1.0], &[0.0, 1.0]]), &FlowConfig::default()).unwrap();
        assert!(!r.converged);
        assert!(r.final_f() > 3.0 - 1e-3, "F = {}", r.final_f());
        assert!(r.f_trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn ascent_fixed_at_nilsoliton() {
        let r = ascent_flow(&aa(&[&[0.0, 1.0], &[0.0, 0.0]]), &FlowConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn ascent_recovers_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = aa(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let target = d.f_aa().unwrap();
        for _ in 0..5 {
            let g = linalg::random_conjugator(2, 10.0, &mut rng);
            let start = d.conjugate(&g).unwrap();
            let r = ascent_flow(&start, &FlowConfig::default()).unwrap();
            assert!(r.converged);
            assert!((r.final_f() - target).abs() < 1e-6);
            let p0 = linalg::char_poly(start.a());
            assert!(linalg::char_poly_drift(&p0, &linalg::char_poly(&r.point)) < 1e-6);
        }
    }

    #[test]
    fn double_bracket_semisimple() {
        let r = double_bracket_flow(&aa(&[&[1.0, 1.0], &[0.0, 2.0]]), &FlowConfig::default()).unwrap();
        assert!(r.converged);
        let ev = linalg::eigenvalues(&r.point);
        assert_abs_diff_eq!(ev[0].0, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(ev[1].0, 2.0, epsilon = 1e-8);
        assert!(r.final_residual < 1e-8);
    }

    #[test]
    fn double_bracket_converges_on_conjugated_spectra() {
        // once |A|^2 stops moving at rounding level the flow must keep going
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..20 {
            let m = 3 + k % 2;
            let d = Mat::from_fn(m, m, |i, j| if i == j { i as f64 - 1.0 + rng.random_range(-0.4..0.4) } else { 0.0 });
            let g = linalg::random_conjugator(m, 20.0, &mut rng);
            let a = &g * d * g.try_inverse().unwrap();
            let r = double_bracket_flow(&AAData::new(a).unwrap(), &FlowConfig::default()).unwrap();
            assert!(r.converged, "sample {k}: residual {:e}", r.final_residual);
        }
    }

    #[test]
    fn double_bracket_fixed_and_collapsing() {
        let normal = aa(&[&[1.0, -2.0], &[2.0, 1.0]]);
        let r = double_bracket_flow(&normal, &FlowConfig::default()).unwrap();
        assert!(r.converged && r.iterations == 0);
        let cfg = FlowConfig { max_iter: 40, ..Default::default() };
        let start = aa(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = double_bracket_flow(&start, &cfg).unwrap();
        assert!(!r.converged);
        let a2 = r.point.norm_squared();
        assert!(a2 < 1e-3);
        if a2 > 0.0 {
            let ratio = commutator(&r.point, &r.point.transpose()).norm() / a2;
            assert_abs_diff_eq!(ratio, 2.0_f64.sqrt(), epsilon = 1e-9);
        }
    }

    #[test]
    fn double_bracket_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let a = linalg::gaussian_matrix(3, 3, &mut rng);
            let start = AAData::new(a).unwrap();
            let cfg = FlowConfig { max_iter: 200, ..Default::default() };
            let r = double_bracket_flow(&start, &cfg).unwrap();
            let p0 = linalg::char_poly(start.a());
            assert!(linalg::char_poly_drift(&p0, &linalg::char_poly(&r.point)) < 1e-6);
        }
    }

    #[test]
    fn nilsoliton_examples() {
        let r = nilsoliton_find(&MetricLieAlgebra::heisenberg(), &FlowConfig::nilsoliton()).unwrap();
        assert!(r.converged && r.iterations == 0);
        assert!(matches!(nilsoliton_find(&MetricLieAlgebra::abelian(3), &FlowConfig::nilsoliton()), Err(Error::Flat)));
        assert!(matches!(
            nilsoliton_find(&MetricLieAlgebra::hyperbolic(3), &FlowConfig::nilsoliton()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn nilsoliton_from_a_skewed_heisenberg() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = Mat::from_fn(
            3,
            3,
            |i, j| if i == j { 1.0 + rng.random_range(0.0..1.0) } else { rng.random_range(-0.5..0.5) },
        );
        let mu = MetricLieAlgebra::heisenberg().act(&g).unwrap();
        let r = nilsoliton_find(&mu, &FlowConfig::nilsoliton()).unwrap();
        assert!(r.converged, "residual {}", r.final_residual);
        assert_abs_diff_eq!(r.final_f(), 1.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn config_json() {
        let cfg = FlowConfig::from_json(r#"{"step":0.5,"max_iter":10}"#).unwrap();
        assert_eq!(cfg.step, 0.5);
        assert_eq!(cfg.grad_tol, FlowConfig::default().grad_tol);
        assert!(FlowConfig::from_json(r#"{"step":-1}"#).is_err());
        assert!(FlowConfig::from_json(r#"{"stepp":1}"#).is_err());
        let r = ascent_flow(&aa(&[&[0.0, 1.0], &[0.0, 0.0]]), &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["converged"], true);
    }
}
