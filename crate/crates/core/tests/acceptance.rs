//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! Reference values are recomputed here from closed forms and finite
//! differences, not taken from the library. The process fails if any
//! criterion fails, except the one known failure listed in `KNOWN`, which
//! must keep failing for the recorded reason.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use solvpinch::almost_abelian::{AAData, LocalMax};
use solvpinch::batch::{self, Execution};
use solvpinch::beta::{self, BetaType, Split};
use solvpinch::flow::{self, FlowConfig};
use solvpinch::lie::MetricLieAlgebra;
use solvpinch::linalg::{self, commutator, Mat, Vector};
use solvpinch::table1::{self, RowStatus};

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Criterion 1 fails only in its e_t sub-check: the printed E_t matrix has
/// F = 25t^4/(59t^4+32t^2), not the printed 4t^4/(3t^4+2t^2).
const KNOWN: &[usize] = &[1];

fn mat(n: usize, rows: &[f64]) -> Mat {
    Mat::from_row_slice(n, n, rows)
}

fn f_of(a: &Mat) -> f64 {
    AAData::new(a.clone()).unwrap().f_aa().unwrap()
}

fn seq(lo: usize, hi: usize) -> impl Iterator<Item = f64> {
    (lo..=hi).map(|k| k as f64 / 10.0)
}

fn criterion_1(e_t_explained: &mut bool) -> (bool, String) {
    type Case = (&'static str, fn(f64) -> Mat, fn(f64) -> f64);
    let cases: [Case; 5] = [
        ("a_t", |t| mat(2, &[t, -1.0, 1.0, -t]), |t| t.powi(4) / (t.powi(4) + 2.0 * t * t)),
        ("b_t", |t| mat(2, &[t, -1.0, 1.0, t]), |_| 3.0),
        (
            "c_t",
            |t| mat(3, &[t, -1.0, 0.0, 1.0, -t, 0.0, 0.0, 0.0, t]),
            |t| 4.0 * t.powi(4) / (3.0 * t.powi(4) + 2.0 * t * t),
        ),
        (
            "d_t",
            |t| {
                let mut m = Mat::zeros(4, 4);
                m[(0, 1)] = -1.0;
                m[(1, 0)] = 1.0;
                m[(2, 3)] = t;
                m
            },
            |_| 1.0 / 3.0,
        ),
        (
            "e_t",
            |t| {
                let r = (1.0 + t * t).sqrt();
                let mut m = Mat::zeros(4, 4);
                m[(0, 0)] = t;
                m[(0, 1)] = -r;
                m[(1, 0)] = r;
                m[(1, 1)] = -t;
                m[(2, 3)] = t;
                m
            },
            |t| 4.0 * t.powi(4) / (3.0 * t.powi(4) + 2.0 * t * t),
        ),
    ];
    let mut parts = Vec::new();
    let mut all = true;
    let mut failed = Vec::new();
    let mut e_t_dev = f64::INFINITY;
    for (name, m, closed) in cases {
        let worst = seq(1, 10).map(|t| (f_of(&m(t)) - closed(t)).abs()).fold(0.0, f64::max);
        let ok = worst < 1e-9;
        all &= ok;
        if !ok {
            failed.push(name);
        }
        parts.push(format!("{name} {} ({worst:.1e})", if ok { "ok" } else { "FAIL" }));
        if name == "e_t" && !ok {
            // the matrix itself follows a different closed form
            let own = |t: f64| 25.0 * t.powi(4) / (59.0 * t.powi(4) + 32.0 * t * t);
            e_t_dev = seq(1, 10).map(|t| (f_of(&m(t)) - own(t)).abs()).fold(0.0, f64::max);
            parts.push(format!("[E_t gives 25t^4/(59t^4+32t^2) to {e_t_dev:.1e}]"));
        }
    }
    let j = f_of(&mat(2, &[1.0, 1e-3, 0.0, 1.0]));
    let jok = (j - 3.0).abs() < 1e-4;
    all &= jok;
    *e_t_explained = jok && failed == ["e_t"] && e_t_dev < 1e-12;
    parts.push(format!("jordan(1e-3) {} (|F-3| = {:.1e})", if jok { "ok" } else { "FAIL" }, (j - 3.0).abs()));
    (all, parts.join(", "))
}

fn criterion_2() -> (bool, String) {
    let heis = MetricLieAlgebra::heisenberg().pinching_f().unwrap();
    let mut ok = (heis - 1.0 / 3.0).abs() < 1e-12;
    let mut worst_hyp: f64 = 0.0;
    for n in 3..=8 {
        let f = MetricLieAlgebra::hyperbolic(n).pinching_f().unwrap();
        worst_hyp = worst_hyp.max((f - n as f64).abs());
    }
    ok &= worst_hyp < 1e-10;
    let sol = f_of(&mat(2, &[1.0, 0.0, 0.0, -1.0]));
    ok &= (sol - 1.0).abs() < 1e-12;
    let mut rs = Mat::zeros(4, 4);
    rs[(0, 1)] = 1.0;
    rs[(2, 3)] = 1.0;
    rs[(3, 2)] = -1.0;
    let frs = f_of(&rs);
    ok &= (frs - 1.0 / 3.0).abs() < 1e-12;
    (ok, format!("heis {heis:.15}, hyp max err {worst_hyp:.1e}, diag(1,-1) {sol:.15}, E12+E34-E43 {frs:.15}"))
}

/// Central-difference gradient in the Frobenius sense.
fn fd_grad(a: &Mat, h: f64) -> Mat {
    let m = a.nrows();
    Mat::from_fn(m, m, |i, j| {
        let mut p = a.clone();
        let mut q = a.clone();
        p[(i, j)] += h;
        q[(i, j)] -= h;
        (f_of(&p) - f_of(&q)) / (2.0 * h)
    })
}

fn orbit_critical_fixtures() -> Vec<(&'static str, Mat)> {
    let h = 5.0_f64.sqrt() / 2.0;
    let mut rs = Mat::zeros(4, 4);
    rs[(0, 1)] = 1.0;
    rs[(2, 3)] = 1.0;
    rs[(3, 2)] = -1.0;
    let mut au = rs.clone();
    au[(0, 1)] = 10.0;
    vec![
        ("saddle", mat(2, &[1.0, h, -h, -0.5])),
        ("E12", mat(2, &[0.0, 1.0, 0.0, 0.0])),
        ("shift3", mat(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])),
        ("diag(1,2)", mat(2, &[1.0, 0.0, 0.0, 2.0])),
        ("diag(1,-1)", mat(2, &[1.0, 0.0, 0.0, -1.0])),
        ("E12+E34-E43", rs),
        ("A_10", au),
    ]
}

fn criterion_3() -> (bool, String) {
    let errs = batch::map_seeded(100, 3, Execution::best(), |i, rng| {
        let m = 2 + i % 5;
        let a = linalg::gaussian_matrix(m, m, rng);
        let a = &a / a.norm();
        let g = AAData::new(a.clone()).unwrap().grad_f().unwrap();
        let fd = fd_grad(&a, 1e-6);
        (g - &fd).norm() / fd.norm()
    });
    let worst_grad = errs.iter().copied().fold(0.0, f64::max);
    let mut worst_hess: f64 = 0.0;
    let mut rng = batch::rng_for(33, 0);
    for (_, a) in orbit_critical_fixtures() {
        let aa = AAData::new(a.clone()).unwrap();
        let m = a.nrows();
        let x = aa.comm();
        let mut dirs: Vec<Mat> = (0..6).map(|_| linalg::gaussian_matrix(m, m, &mut rng)).collect();
        if x.norm() > 0.0 {
            dirs.push(x);
        }
        for b in dirs {
            let b = &b / b.norm();
            let exact = aa.second_variation(&b).unwrap();
            // second difference of F along e^{sB} A e^{-sB}, built here
            let h = 1e-4;
            let along = |s: f64| f_of(&(linalg::expm(&(&b * s)) * &a * linalg::expm(&(&b * -s))));
            let fd = (along(h) - 2.0 * along(0.0) + along(-h)) / (h * h);
            worst_hess = worst_hess.max((exact - fd).abs());
        }
    }
    let ok = worst_grad < 1e-6 && worst_hess < 1e-5;
    (ok, format!("grad max rel err {worst_grad:.1e} (100 samples), second variation max abs err {worst_hess:.1e} (7 fixtures)"))
}

fn criterion_4() -> (bool, String) {
    let res = batch::map_seeded(100, 4, Execution::best(), |i, rng| {
        let m = 2 + i % 5;
        // F is scale-invariant and the identity homogeneous, so unit norm loses nothing
        let a = linalg::gaussian_matrix(m, m, rng);
        let a = &a / a.norm();
        let aa = AAData::new(a.clone()).unwrap();
        let general = aa.bracket_of().ricci().ric;
        let block = aa.ricci_aa().ric;
        let ricci_diff = (general - block).amax();
        let k = aa.grad_coefficients().unwrap();
        let g = aa.grad_f().unwrap();
        let lhs = k.c4 * k.c4 * linalg::inner(&g, &(&a - a.transpose()));
        let rhs = -k.c3 * linalg::norm_sq(&commutator(&a, &a.transpose()));
        (ricci_diff, (lhs - rhs).abs())
    });
    let worst_ric = res.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_id = res.iter().map(|r| r.1).fold(0.0, f64::max);
    let ok = worst_ric < 1e-10 && worst_id < 1e-8;
    (ok, format!("ricci max entry diff {worst_ric:.1e}, gradient identity max abs err {worst_id:.1e} (|A| = 1)"))
}

fn criterion_5() -> (bool, String) {
    let rep = table1::reproduce(&FlowConfig::nilsoliton(), None, Execution::best());
    let fixtures = table1::fixtures();
    let mut ok = true;
    let mut notes = Vec::new();
    for (row, fx) in rep.rows.iter().zip(&fixtures) {
        let Some(bt) = &row.computed else {
            ok = false;
            notes.push(format!("{} no type", row.label));
            continue;
        };
        if ["mu3", "mu4", "mu5", "mu7", "mu8"].contains(&row.label) {
            // rational rounding of the computed type, then compare
            let rounded: Vec<f64> =
                bt.b.iter()
                    .map(|&x| {
                        let (p, q) = linalg::rationalize(x, 120);
                        p as f64 / q as f64
                    })
                    .collect();
            let type_ok = rounded.iter().zip(fx.printed_values()).all(|(a, b)| (a - b).abs() < 1e-6);
            let q_ok = (bt.q - fx.printed_q_value()).abs() < 1e-6;
            ok &= type_ok && q_ok && row.status == RowStatus::Match;
        } else {
            ok &= row.converged;
            notes.push(format!("{} reported as {} [{}]", row.label, row.status.as_str(), bt.rational().join(" ")));
        }
    }
    let flagged: Vec<_> = rep.rows.iter().filter(|r| r.printed_inconsistent).map(|r| r.label).collect();
    ok &= flagged == ["mu1"];
    let s: f64 = fixtures[0].printed_values().iter().map(|b| b * b).sum();
    ok &= (s - 559.0 / 450.0).abs() < 1e-12;
    (ok, format!("{} rows match; {}; mu1 flagged (sum b^2 = 559/450)", rep.count(RowStatus::Match), notes.join("; ")))
}

fn sorted_eigs(a: &Mat) -> Vec<f64> {
    let mut e: Vec<f64> = linalg::eigenvalues(a).into_iter().map(|(re, _)| re).collect();
    e.sort_by(f64::total_cmp);
    e
}

fn criterion_6() -> (bool, String) {
    let runs = batch::map_seeded(100, 6, Execution::best(), |i, rng| {
        let m = 3 + i % 2;
        // distinct real spectrum, conjugated: semisimple
        let mut lam: Vec<f64> = (0..m).map(|k| k as f64 + rng.random_range(-0.4..0.4)).collect();
        lam.iter_mut().for_each(|x| *x -= 1.0);
        let g = linalg::random_conjugator(m, 20.0, rng);
        let a = &g * Mat::from_diagonal(&Vector::from_vec(lam.clone())) * g.try_inverse().unwrap();
        let r = flow::double_bracket_flow(&AAData::new(a.clone()).unwrap(), &FlowConfig::default()).unwrap();
        let comm = commutator(&r.point, &r.point.transpose()).norm();
        let mut l = lam.clone();
        l.sort_by(f64::total_cmp);
        let drift = sorted_eigs(&r.point).iter().zip(&l).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let rises = r.final_f() >= r.f_trace[0] - 1e-12;
        (comm, drift, rises)
    });
    let worst_comm = runs.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_drift = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let rises = runs.iter().all(|r| r.2);
    let target = f_of(&mat(2, &[1.0, 0.0, 0.0, 2.0]));
    let ascents = batch::map_seeded(20, 60, Execution::best(), |_, rng| {
        let g = linalg::random_conjugator(2, 10.0, rng);
        let a = &g * mat(2, &[1.0, 0.0, 0.0, 2.0]) * g.try_inverse().unwrap();
        let r = flow::ascent_flow(&AAData::new(a).unwrap(), &FlowConfig::default()).unwrap();
        (r.final_f() - target).abs()
    });
    let worst_ascent = ascents.iter().copied().fold(0.0, f64::max);
    let ok = worst_comm < 1e-8 && worst_drift < 1e-6 && rises && worst_ascent < 1e-6 && (target - 2.8).abs() < 1e-12;
    (
        ok,
        format!(
            "double bracket (100 runs): |[A,A^t]| <= {worst_comm:.1e}, eigen drift <= {worst_drift:.1e}, F rises: {rises}; \
             ascent to F(diag(1,2)) = 2.8 within {worst_ascent:.1e} (20 runs)"
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let fixtures = [mat(2, &[0.0, 1.0, 0.0, 0.0]), mat(2, &[1.0, 0.0, 0.0, 2.0]), mat(2, &[1.0, 0.0, 0.0, -1.0])];
    let mut worst_excess = f64::NEG_INFINITY;
    for (k, a) in fixtures.iter().enumerate() {
        let f0 = f_of(a);
        let ex = batch::map_seeded(1000, 70 + k as u64, Execution::best(), |_, rng| {
            let g = linalg::random_conjugator(2, 1e3, rng);
            f_of(&(&g * a * g.try_inverse().unwrap())) - f0
        });
        worst_excess = worst_excess.max(ex.into_iter().fold(f64::NEG_INFINITY, f64::max));
    }
    let h = 5.0_f64.sqrt() / 2.0;
    let saddle = AAData::new(mat(2, &[1.0, h, -h, -0.5])).unwrap();
    let x = saddle.comm();
    let along_x = saddle.second_variation(&(&x / x.norm())).unwrap();
    let class = saddle.local_max_classify(64, 7).unwrap();
    let saddle_ok = saddle.tr() != 0.0 && !saddle.is_normal() && along_x > 0.0 && class == LocalMax::Saddle;

    let mut au = Mat::zeros(4, 4);
    au[(0, 1)] = 10.0;
    au[(2, 3)] = 1.0;
    au[(3, 2)] = -1.0;
    let n = linalg::unit(4, 0, 1) * 10.0;
    let c = &au - &n;
    let b = Mat::from_diagonal(&Vector::from_vec(vec![0.0, 0.0, 1.0, -1.0]));
    let hyp = commutator(&b, &n).norm() == 0.0 && commutator(&b, &c).norm() > 0.0;
    let q = AAData::new(au).unwrap().second_variation(&b).unwrap();
    let ok = worst_excess <= 1e-9 && saddle_ok && hyp && q > 0.0;
    (
        ok,
        format!(
            "max F excess over 3000 conjugates {worst_excess:.1e}; saddle via [A,A^t]: {along_x:.4} > 0 ({class:?}); \
             A_10 second variation {q:.4} > 0"
        ),
    )
}

fn heis_extension(t: f64, x: f64) -> MetricLieAlgebra {
    // complement e1, nilradical heis_3 = (e2, e3, e4) with [e2,e3] = e4
    MetricLieAlgebra::from_entries(4, &[(1, 2, 3, 1.0), (0, 1, 1, t), (0, 2, 2, -t), (0, 1, 3, x)], 1e-9).unwrap()
}

fn criterion_8() -> (bool, String) {
    let res = batch::map_seeded(200, 8, Execution::best(), |i, rng| {
        let m = 2 + i % 4;
        let a = if i % 4 == 0 {
            // traceless normal: D (+ a rotation block when m >= 3), orthogonally conjugated
            let mut v: Vec<f64> = (0..m - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            let rot = m >= 3;
            v.insert(0, if rot { v[0] } else { -v.iter().sum::<f64>() });
            let mean = v.iter().sum::<f64>() / m as f64;
            let mut d = Mat::from_diagonal(&Vector::from_iterator(m, v.iter().map(|x| x - mean)));
            if rot {
                let w = rng.random_range(0.1..1.0);
                d[(0, 1)] = -w;
                d[(1, 0)] = w;
            }
            let q = linalg::random_orthogonal(m, rng);
            &q * d * q.transpose()
        } else {
            let a = linalg::gaussian_matrix(m, m, rng);
            let t = a.trace() / m as f64;
            a - linalg::identity(m) * t
        };
        let aa = AAData::new(a).unwrap();
        let f = aa.f_aa().unwrap();
        (f, aa.is_normal())
    });
    let below = res.iter().all(|&(f, _)| f <= 1.0 + 1e-12);
    let equality_exact = res.iter().all(|&(f, normal)| ((f - 1.0).abs() <= 1e-9) == normal);
    let normals = res.iter().filter(|r| r.1).count();

    // <Ric, E_beta> and the norm estimate on unimodular fixtures
    let heis_type = BetaType::from_eigenvalues(vec![-1.0, -1.0, 1.0]).unwrap();
    let s = 3.0_f64.sqrt() / 2.0;
    let aa_bracket = |a: Mat| AAData::new(a).unwrap().bracket_of();
    let mut rs = Mat::zeros(4, 4);
    rs[(0, 1)] = 1.0;
    rs[(2, 3)] = 1.0;
    rs[(3, 2)] = -1.0;
    // (name, bracket, complement indices, type, is a solvsoliton)
    type Fixture = (&'static str, MetricLieAlgebra, Vec<usize>, Option<BetaType>, bool);
    let fixtures: Vec<Fixture> = vec![
        ("heis", MetricLieAlgebra::heisenberg(), vec![], Some(heis_type.clone()), true),
        ("heis x| diag(s,-s,0)", heis_extension(s, 0.0), vec![0], Some(heis_type.clone()), true),
        ("heis x| diag(1,-1,0)", heis_extension(1.0, 0.0), vec![0], Some(heis_type.clone()), false),
        ("heis x| diag(1,-1,0)+0.7E", heis_extension(1.0, 0.7), vec![0], Some(heis_type), false),
        ("diag(1,-1)", aa_bracket(mat(2, &[1.0, 0.0, 0.0, -1.0])), vec![2], None, true),
        ("[[1,2],[0,-1]]", aa_bracket(mat(2, &[1.0, 2.0, 0.0, -1.0])), vec![2], None, false),
        ("E12+E34-E43", aa_bracket(rs), vec![4], None, false),
    ];
    let mut pair_ok = true;
    let mut est_ok = true;
    let mut min_pair = f64::INFINITY;
    for (name, mu, a, bt, soliton) in &fixtures {
        let n = mu.dim();
        let split = if a.is_empty() { Split::nilpotent(n) } else { Split::new(n, a.clone()).unwrap() };
        let m = n - a.len();
        let eb = beta::ebeta_pairing(mu, &split, bt.as_ref(), 1e-9).unwrap();
        min_pair = min_pair.min(eb.pairing);
        pair_ok &= eb.pairing >= -1e-10;
        let est = beta::norm_estimate_check(mu, n, m, bt.as_ref(), 1e-9).unwrap();
        let good = est.holds && est.equality == *soliton && est.soliton == *soliton;
        if !good {
            eprintln!("  criterion 8: {name}: holds {} equality {} soliton {}", est.holds, est.equality, est.soliton);
        }
        est_ok &= good;
    }
    let ok = below && equality_exact && normals > 0 && pair_ok && est_ok;
    (
        ok,
        format!(
            "200 samples ({normals} normal): F <= 1: {below}, equality exactly at normal: {equality_exact}; \
             min <Ric,E_beta> {min_pair:.1e}; estimate equality exactly at solitons: {est_ok} ({} fixtures)",
            fixtures.len()
        ),
    )
}

fn criterion_9() -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut at7 = 0.0;
    for n in 3..=12 {
        let c = -(2.0 * n as f64 + 1.0) / 3.0;
        let spec: Vec<f64> = (1..=n).map(|i| c + i as f64).collect();
        // c is the shift that makes tr(Ric (Ric - cI)) vanish
        let tr: f64 = spec.iter().zip(1..=n).map(|(r, i)| r * i as f64).sum();
        assert!(tr.abs() < 1e-9);
        let f = beta::f_from_spectrum(&spec).unwrap();
        let lib = beta::f_from_spectrum(&beta::shifted_spectrum(n)).unwrap();
        let closed = (n * (n - 1)) as f64 / (2.0 * (2 * n + 1) as f64);
        worst = worst.max((f - closed).abs()).max((lib - closed).abs());
        if n == 7 {
            at7 = lib;
        }
    }
    let ok = worst < 1e-12 && (at7 - 1.4).abs() < 1e-12 && at7 >= 7.0 / 5.0 - 1e-12;
    (ok, format!("max err {worst:.1e} for n = 3..12; n = 7 gives {at7} >= 7/5"))
}

fn timed(f: impl FnOnce() -> (bool, String), budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let (pass, mut detail) = f();
    let elapsed = start.elapsed();
    let mut pass = pass;
    if let Some(b) = budget {
        if elapsed > b {
            pass = false;
            detail.push_str(&format!("; over time budget {b:?}"));
        }
    }
    Outcome { pass, detail, elapsed }
}

fn main() -> ExitCode {
    let mut e_t_explained = false;
    let results = [
        timed(|| criterion_1(&mut e_t_explained), Some(Duration::from_secs(1))),
        timed(criterion_2, Some(Duration::from_secs(1))),
        timed(criterion_3, None),
        timed(criterion_4, None),
        timed(criterion_5, Some(Duration::from_secs(60))),
        timed(criterion_6, None),
        timed(criterion_7, None),
        timed(criterion_8, None),
        timed(criterion_9, None),
    ];
    let mut unexpected = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let id = i + 1;
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let known = if !r.pass && KNOWN.contains(&id) { " [known, see README]" } else { "" };
        println!("criterion {id}: {verdict}{known} ({:.2?}) {}", r.elapsed, r.detail);
        if r.pass == KNOWN.contains(&id) {
            unexpected.push(id);
        }
    }
    // the known failure must fail for the recorded reason and nothing else
    if !e_t_explained {
        unexpected.push(1);
    }
    if unexpected.is_empty() {
        println!(
            "acceptance: {} of 9 pass; criterion 1 fails only in its e_t sub-check",
            results.iter().filter(|r| r.pass).count()
        );
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
