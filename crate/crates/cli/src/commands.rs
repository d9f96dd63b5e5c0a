use std::fmt::Write as _;
use std::fs;

use solvpinch::almost_abelian::{AASoliton, Family, GlobalCritical, LocalMax};
use solvpinch::batch::{self, Execution};
use solvpinch::beta::{self, BetaType, Split};
use solvpinch::flow::{self, FlowConfig};
use solvpinch::table1::{self, RowStatus};
use solvpinch::{lie, Error};

use crate::fmt::{csv, kv, matrix_csv, matrix_json, sig6};
use crate::input::{self, Loaded};
use crate::{FlowArgs, Format, Method, Output, Subject, Verb};

/// Absolute agreement required between a family's closed form and F.
const SWEEP_TOL: f64 = 1e-9;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_FLAT: u8 = 3;
pub const EXIT_STRICT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VALIDATION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Flat) { EXIT_FLAT } else { EXIT_VALIDATION };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

/// Writes to `--out` if given, else stdout.
fn emit(text: &str, out: Option<&Output>) -> Result<(), Failure> {
    match out.and_then(|o| o.out.as_ref()) {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn format_of(out: &Output, default: Format) -> Format {
    out.format.unwrap_or(default)
}

fn strict_exit(strict: bool, ok: bool, what: &str) -> u8 {
    if strict && !ok {
        eprintln!("strict: {what}");
        EXIT_STRICT
    } else {
        0
    }
}

fn flow_config(args: &FlowArgs, base: FlowConfig) -> Result<FlowConfig, Failure> {
    let mut cfg = match &args.config {
        Some(c) => FlowConfig::from_json(&input::text(c)?)?,
        None => base,
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.steps {
        cfg.max_iter = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn need_matrix(loaded: Loaded, verb: &str) -> Result<solvpinch::AAData, Failure> {
    match loaded {
        Loaded::Matrix(aa) => Ok(aa),
        Loaded::Bracket(_) => Err(Failure::validation(format!("{verb} needs --matrix or --family"))),
    }
}

fn yes(b: bool) -> String {
    b.to_string()
}

pub fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::Check(s) => check(&s),
        Verb::Ricci { subject, out } => ricci(&subject, &out),
        Verb::Pinch(s) => pinch(&s),
        Verb::Grad { subject, out } => grad(&subject, &out),
        Verb::Critical(s) => critical(&s),
        Verb::Hessian { subject, direction, seed, trials } => hessian(&subject, direction.as_deref(), seed, trials),
        Verb::Flow { subject, method, flow, out } => run_flow(&subject, method, &flow, &out),
        Verb::Soliton(s) => soliton(&s),
        Verb::Beta { subject, beta_type, flow } => beta_cmd(&subject, beta_type.as_deref(), &flow),
        Verb::Bound { bracket, n, m, beta_type } => bound(bracket.as_deref(), n, m, beta_type.as_deref()),
        Verb::Table1 { rows, flow, out } => table1_cmd(rows.as_deref(), &flow, &out),
        Verb::Family { family, t, t_range, steps, n, strict, out } => {
            family_sweep(&family, t, t_range.as_deref(), steps, n, strict, &out)
        }
    }
}

fn check(s: &Subject) -> Outcome {
    let text = match input::subject(s)? {
        Loaded::Matrix(aa) => {
            let flat = aa.is_flat();
            kv(&[
                ("kind", "almost-abelian".into()),
                ("dim", aa.n().to_string()),
                ("trace", sig6(aa.tr())),
                ("unimodular", yes(aa.tr().abs() <= aa.tol() * aa.norm_sq().sqrt())),
                ("normal", yes(aa.is_normal())),
                ("nilpotent", yes(aa.is_nilpotent())),
                ("flat", yes(flat)),
            ])
        }
        Loaded::Bracket(mu) => {
            let d = mu.diagnostics();
            let nil = mu.nilpotency();
            let sol = mu.solvability();
            let uni = mu.unimodularity();
            let flag = |v: bool, amb: bool| if amb { format!("{v} (near cutoff)") } else { v.to_string() };
            let kind = mu.classify_type(64, 0);
            let mut pairs = vec![
                ("kind", "bracket".to_string()),
                ("dim", mu.dim().to_string()),
                ("antisymmetry", sig6(d.antisymmetry)),
                ("jacobi", sig6(d.jacobi)),
                ("nilpotent", flag(nil.value, nil.ambiguous)),
                ("solvable", flag(sol.value, sol.ambiguous)),
                ("unimodular", flag(uni.value, uni.ambiguous)),
                ("type", format!("{:?}{}", kind.kind, if kind.heuristic { " (sampled)" } else { "" }).to_lowercase()),
                ("flat", yes(mu.flatness_test())),
            ];
            if let Some((i, _)) = mu.almost_abelian_split() {
                pairs.push(("almost_abelian_axis", (i + 1).to_string()));
            }
            kv(&pairs)
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn ricci(s: &Subject, out: &Output) -> Outcome {
    let cd = match input::subject(s)? {
        Loaded::Matrix(aa) => aa.ricci_aa(),
        Loaded::Bracket(mu) => mu.ricci(),
    };
    let text = match format_of(out, Format::Table) {
        Format::Csv => matrix_csv(&cd.ric),
        Format::Table => kv(&[
            ("scal", sig6(cd.scal)),
            ("ric_norm_sq", sig6(cd.ric_norm_sq)),
            ("F", cd.f.map_or("undefined (flat)".into(), sig6)),
            ("ric", matrix_json(&cd.ric)),
        ]),
    };
    emit(&text, Some(out))?;
    Ok(0)
}

fn pinch(s: &Subject) -> Outcome {
    let f = match input::subject(s)? {
        Loaded::Matrix(aa) => aa.f_aa()?,
        Loaded::Bracket(mu) => mu.pinching_f()?,
    };
    emit(&format!("{f}\n"), None)?;
    Ok(0)
}

fn grad(s: &Subject, out: &Output) -> Outcome {
    let aa = need_matrix(input::subject(s)?, "grad")?;
    let g = aa.grad_f()?;
    let text = match format_of(out, Format::Table) {
        Format::Csv => matrix_csv(&g),
        Format::Table => {
            let k = aa.grad_coefficients()?;
            kv(&[
                ("F", sig6(aa.f_aa()?)),
                ("grad_norm", sig6(g.norm())),
                ("c1 c2 c3 c4", [k.c1, k.c2, k.c3, k.c4].map(sig6).join(" ")),
                ("grad", matrix_json(&g)),
            ])
        }
    };
    emit(&text, Some(out))?;
    Ok(0)
}

fn critical(s: &Subject) -> Outcome {
    let text = match input::subject(s)? {
        Loaded::Matrix(aa) => {
            let global = match aa.global_critical_test()? {
                GlobalCritical::Einstein => "einstein",
                GlobalCritical::UnimodularNormal => "unimodular_normal",
                GlobalCritical::NotCritical => "none",
            };
            kv(&[
                ("F", sig6(aa.f_aa()?)),
                ("orbit_residual", sig6(aa.critical_residual_relative()?)),
                ("orbit_critical", yes(aa.is_orbit_critical()?)),
                ("global_critical", global.into()),
            ])
        }
        Loaded::Bracket(mu) => {
            // on a fixed group the critical points of F are the solvsolitons
            let r = mu.solvsoliton_residual()?;
            kv(&[
                ("F", sig6(mu.pinching_f()?)),
                ("soliton_residual", sig6(r.relative)),
                ("critical", yes(r.is_soliton(mu.tol().sqrt()))),
            ])
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn hessian(s: &Subject, direction: Option<&str>, seed: u64, trials: usize) -> Outcome {
    let aa = need_matrix(input::subject(s)?, "hessian")?;
    let class = match aa.local_max_classify(trials, seed)? {
        LocalMax::MaxCandidate => "max_candidate",
        LocalMax::Saddle => "saddle",
        LocalMax::Degenerate => "degenerate",
    };
    let b = match direction {
        Some(d) => Some(solvpinch::almost_abelian::matrix_from_json(&input::text(d)?)?),
        None => {
            let x = aa.comm();
            (x.norm() > 0.0).then(|| &x / x.norm())
        }
    };
    let mut pairs = vec![("classification", class.to_string())];
    if let Some(b) = b {
        pairs.push(("direction", matrix_json(&b)));
        pairs.push(("second_variation", sig6(aa.second_variation(&b)?)));
        pairs.push(("finite_difference", sig6(aa.second_variation_fd(&b, 1e-4)?)));
    }
    emit(&kv(&pairs), None)?;
    Ok(0)
}

fn trace_csv(trace: &[f64]) -> String {
    let mut out = String::from("iteration,F\n");
    for (i, f) in trace.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", csv(*f));
    }
    out
}

fn run_flow(s: &Subject, method: Option<Method>, args: &FlowArgs, out: &Output) -> Outcome {
    let loaded = input::subject(s)?;
    let (summary, point, trace, converged) = match loaded {
        Loaded::Matrix(aa) => {
            let cfg = flow_config(args, FlowConfig::default())?;
            let r = match method.unwrap_or(Method::Ascent) {
                Method::Ascent => flow::ascent_flow(&aa, &cfg)?,
                Method::DoubleBracket => flow::double_bracket_flow(&aa, &cfg)?,
            };
            let summary = vec![
                ("converged", yes(r.converged)),
                ("iterations", r.iterations.to_string()),
                ("residual", sig6(r.final_residual)),
                ("left_orbit", yes(r.left_orbit)),
                ("F_start", sig6(r.f_trace[0])),
                ("F_final", sig6(r.final_f())),
            ];
            (summary, matrix_json(&r.point), r.f_trace, r.converged)
        }
        Loaded::Bracket(mu) => {
            if method.is_some() {
                return Err(Failure::validation("--method applies to matrices; brackets use the nilsoliton search"));
            }
            let cfg = flow_config(args, FlowConfig::nilsoliton())?;
            let r = flow::nilsoliton_find(&mu, &cfg)?;
            let summary = vec![
                ("converged", yes(r.converged)),
                ("iterations", r.iterations.to_string()),
                ("residual", sig6(r.final_residual)),
                ("F_start", sig6(r.f_trace[0])),
                ("F_final", sig6(r.final_f())),
            ];
            (summary, lie::to_json(&r.point), r.f_trace, r.converged)
        }
    };
    let text = match format_of(out, Format::Table) {
        Format::Csv => trace_csv(&trace),
        Format::Table => {
            let mut pairs = summary;
            pairs.push(("point", point));
            kv(&pairs)
        }
    };
    emit(&text, Some(out))?;
    Ok(strict_exit(args.strict, converged, "flow did not converge"))
}

fn soliton(s: &Subject) -> Outcome {
    let text = match input::subject(s)? {
        Loaded::Matrix(aa) => {
            let verdict = match aa.solvsoliton_test_aa() {
                AASoliton::Normal => "normal".to_string(),
                AASoliton::Nilsoliton { c } => format!("nilsoliton (c = {})", sig6(c)),
                AASoliton::NotSolvsoliton => "none".to_string(),
            };
            let mut pairs = vec![("solvsoliton", verdict)];
            let traceless = aa.tr().abs() <= aa.tol() * aa.norm_sq().sqrt();
            if traceless && aa.is_orbit_critical()? {
                if let Some(split) = aa.ricci_soliton_decompose()? {
                    pairs.push(("c", sig6(split.c)));
                    pairs.push(("N", matrix_json(&split.n)));
                    pairs.push(("C", matrix_json(&split.c_skew)));
                }
            }
            kv(&pairs)
        }
        Loaded::Bracket(mu) => {
            let r = mu.solvsoliton_residual()?;
            kv(&[
                ("solvsoliton", yes(r.is_soliton(mu.tol().sqrt()))),
                ("residual", sig6(r.relative)),
                ("c", sig6(r.c)),
                ("D", matrix_json(&r.d)),
            ])
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn type_lines(bt: &BetaType, tol: f64) -> Vec<(&'static str, String)> {
    let rep = beta::type_invariants_check(bt, tol);
    vec![
        ("type", bt.b.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(" ")),
        ("type_rational", bt.rational().join(" ")),
        ("q", sig6(bt.q)),
        ("trace", sig6(rep.sum)),
        ("min_margin", sig6(rep.min_margin)),
        ("inverse_sq_sum", sig6(rep.inverse_sq_sum)),
        ("invariants_ok", yes(rep.pass)),
    ]
}

fn beta_cmd(s: &Subject, type_arg: Option<&str>, args: &FlowArgs) -> Outcome {
    let tol = input::tolerance()?;
    if let Some(t) = type_arg {
        if s.matrix.is_some() || s.bracket.is_some() || s.family.is_some() {
            return Err(Failure::validation("give either --type or a bracket, not both"));
        }
        let bt = BetaType::from_eigenvalues(input::type_list(t)?)?;
        emit(&kv(&type_lines(&bt, tol)), None)?;
        return Ok(0);
    }
    let mu = match input::subject(s)? {
        Loaded::Bracket(mu) => mu,
        Loaded::Matrix(aa) => aa.bracket_of(),
    };
    let cfg = flow_config(args, FlowConfig::nilsoliton())?;
    let r = flow::nilsoliton_find(&mu, &cfg)?;
    let mut pairs = vec![
        ("converged", yes(r.converged)),
        ("iterations", r.iterations.to_string()),
        ("residual", sig6(r.final_residual)),
    ];
    if r.converged {
        let bt = beta::beta_from_nilsoliton(&r.point, cfg.grad_tol)?;
        pairs.extend(type_lines(&bt, 1e-6));
        pairs.push(("nilsoliton", lie::to_json(&r.point)));
    }
    emit(&kv(&pairs), None)?;
    Ok(strict_exit(args.strict, r.converged, "nilsoliton search did not converge"))
}

fn bound(bracket: Option<&str>, n: Option<usize>, m: usize, type_arg: Option<&str>) -> Outcome {
    let tol = input::tolerance()?;
    let bt = type_arg.map(|t| input::type_list(t).and_then(|v| Ok(BetaType::from_eigenvalues(v)?))).transpose()?;
    let mu = bracket.map(|b| input::bracket(b, tol)).transpose()?;
    let n = match (n, &mu) {
        (Some(n), Some(mu)) if n != mu.dim() => {
            return Err(Failure::validation(format!("--n {n} but the bracket has dimension {}", mu.dim())))
        }
        (Some(n), _) => n,
        (None, Some(mu)) => mu.dim(),
        (None, None) => return Err(Failure::validation("bound needs --n or --bracket")),
    };
    let b = beta::pinching_bound(n, m, bt.as_ref())?;
    let mut pairs = vec![("bound", sig6(b))];
    if let Some(mu) = mu {
        let split = Split::new(n, (0..n - m).collect())?;
        let est = beta::norm_estimate_check(&mu, n, m, bt.as_ref(), tol)?;
        let eb = beta::ebeta_pairing(&mu, &split, bt.as_ref(), tol)?;
        pairs.push(("F", sig6(est.f)));
        pairs.push(("F_below_bound", yes(est.f_below_bound)));
        pairs.push(("ric_norm", sig6(est.ric_norm)));
        pairs.push(("ric_norm_lower_bound", sig6(est.lower_bound)));
        pairs.push(("equality", yes(est.equality)));
        pairs.push(("solvsoliton", yes(est.soliton)));
        pairs.push(("ebeta_pairing", sig6(eb.pairing)));
    }
    emit(&kv(&pairs), None)?;
    Ok(0)
}

fn table1_cmd(rows: Option<&[usize]>, args: &FlowArgs, out: &Output) -> Outcome {
    if let Some(r) = rows {
        if let Some(bad) = r.iter().find(|&&i| !(1..=8).contains(&i)) {
            return Err(Failure::validation(format!("row {bad} is not in 1..=8")));
        }
    }
    let cfg = flow_config(args, FlowConfig::nilsoliton())?;
    let rep = table1::reproduce(&cfg, rows, Execution::best());
    let text = match format_of(out, Format::Csv) {
        Format::Csv => rep.to_csv(),
        Format::Table => {
            let mut t = format!(
                "{:<4} {:<12} {:<44} {:<9} {:<9} {}\n",
                "row", "status", "computed type", "q", "printed q", "note"
            );
            for r in &rep.rows {
                let (ty, q) = match &r.computed {
                    Some(bt) => (bt.b.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(" "), sig6(bt.q)),
                    None => (String::from("-"), String::from("-")),
                };
                let note = if r.printed_inconsistent { "printed q inconsistent with printed type" } else { "" };
                let _ = writeln!(
                    t,
                    "{:<4} {:<12} {:<44} {:<9} {:<9} {}",
                    r.label,
                    r.status.as_str(),
                    ty,
                    q,
                    sig6(r.printed_q),
                    note
                );
            }
            t
        }
    };
    emit(&text, Some(out))?;
    let all = rep.rows.iter().all(|r| r.status == RowStatus::Match);
    Ok(strict_exit(args.strict, all, "some rows do not match"))
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = s.split([',', ':']).map(str::trim).collect();
    let bad = || Failure::validation(format!("--t-range expects 't_min,t_max', got '{s}'"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    if !(lo <= hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

struct SweepRow {
    t: f64,
    closed: Option<f64>,
    computed: Option<f64>,
}

impl SweepRow {
    fn diff(&self) -> Option<f64> {
        Some((self.closed? - self.computed?).abs())
    }

    fn flag(&self) -> &'static str {
        match (self.closed, self.computed, self.diff()) {
            (_, None, _) => "flat",
            (None, _, _) => "no_closed_form",
            (_, _, Some(d)) if d < SWEEP_TOL => "",
            _ => "mismatch",
        }
    }
}

fn family_sweep(
    name: &str,
    t: Option<f64>,
    range: Option<&str>,
    steps: usize,
    n: Option<usize>,
    strict: bool,
    out: &Output,
) -> Outcome {
    let fam: Family = name.parse()?;
    let ts: Vec<f64> = match (t, range) {
        (Some(t), _) => vec![t],
        (None, Some(r)) => {
            let (lo, hi) = parse_range(r)?;
            match steps {
                0 => return Err(Failure::validation("--steps must be at least 1")),
                1 => vec![lo],
                k => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
            }
        }
        (None, None) => return Err(Failure::validation("family needs --t or --t-range")),
    };
    // check the whole range before computing anything
    for &t in &ts {
        fam.member(t, n)?;
    }
    let tol = input::tolerance()?;
    let rows: Vec<Result<SweepRow, Error>> = batch::map(&ts, Execution::best(), |&t| {
        let (aa, closed) = fam.member(t, n)?;
        let aa = solvpinch::AAData::with_tol(aa.a().clone(), tol)?;
        let computed = match aa.f_aa() {
            Ok(f) => Some(f),
            Err(Error::Flat) => None,
            Err(e) => return Err(e),
        };
        Ok(SweepRow { t, closed, computed })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let opt = |x: Option<f64>, f: fn(f64) -> String| x.map_or(String::new(), f);
    let text = match format_of(out, Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,F_closed,F_computed,abs_diff,flag\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv(r.t),
                    opt(r.closed, csv),
                    opt(r.computed, csv),
                    opt(r.diff(), csv),
                    r.flag()
                );
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:<12} {:<12} {:<12} {:<12} {}\n", "t", "F_closed", "F_computed", "abs_diff", "flag");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<12} {:<12} {:<12} {:<12} {}",
                    sig6(r.t),
                    opt(r.closed, sig6),
                    opt(r.computed, sig6),
                    opt(r.diff(), sig6),
                    r.flag()
                );
            }
            s
        }
    };
    emit(&text, Some(out))?;
    let ok = rows.iter().all(|r| r.flag().is_empty());
    Ok(strict_exit(strict, ok, "some rows are flagged"))
}
