use std::fs;

use solvpinch::almost_abelian::{self, AAData};
use solvpinch::lie::{self, MetricLieAlgebra, DEFAULT_TOL};

use crate::commands::Failure;
use crate::Subject;

pub enum Loaded {
    Matrix(AAData),
    Bracket(MetricLieAlgebra),
}

/// Inline JSON if it starts with '[' or '{', otherwise a file path.
pub fn text(arg: &str) -> Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| Failure::validation(format!("cannot read {arg}: {e}")))
}

pub fn tolerance() -> Result<f64, Failure> {
    match std::env::var("SOLVPINCH_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Failure::validation(format!("SOLVPINCH_TOL must be a positive number, got '{s}'"))),
        },
    }
}

pub fn matrix(arg: &str, tol: f64) -> Result<AAData, Failure> {
    let a = almost_abelian::matrix_from_json(&text(arg)?)?;
    Ok(AAData::with_tol(a, tol)?)
}

/// A tolerance stored in the JSON wins over the environment.
pub fn bracket(arg: &str, tol: f64) -> Result<MetricLieAlgebra, Failure> {
    let mut v: serde_json::Value =
        serde_json::from_str(&text(arg)?).map_err(|e| Failure::validation(format!("bracket JSON: {e}")))?;
    if let Some(obj) = v.as_object_mut() {
        obj.entry("tol").or_insert(serde_json::json!(tol));
    }
    Ok(lie::from_json(&v.to_string())?)
}

pub fn type_list(arg: &str) -> Result<Vec<f64>, Failure> {
    serde_json::from_str(&text(arg)?)
        .map_err(|e| Failure::validation(format!("type must be a JSON list of numbers: {e}")))
}

pub fn subject(s: &Subject) -> Result<Loaded, Failure> {
    let tol = tolerance()?;
    if let Some(m) = &s.matrix {
        return Ok(Loaded::Matrix(matrix(m, tol)?));
    }
    if let Some(b) = &s.bracket {
        return Ok(Loaded::Bracket(bracket(b, tol)?));
    }
    let Some(name) = s.family.as_deref() else {
        return Err(Failure { code: 1, message: "one of --matrix, --bracket, --family is required".into() });
    };
    let t = s.t.expect("clap enforces --t with --family");
    let (aa, _) = almost_abelian::family(name, t, s.n)?;
    Ok(Loaded::Matrix(AAData::with_tol(aa.a().clone(), tol)?))
}
