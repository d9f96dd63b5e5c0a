//! The eight 5-dimensional nilpotent brackets of the types table, with their
//! printed types, and a harness that recomputes each type.

use std::fmt::Write as _;

use crate::batch::{self, Execution};
use crate::beta::{beta_from_nilsoliton, BetaType};
use crate::flow::{nilsoliton_find, FlowConfig};
use crate::lie::{MetricLieAlgebra, DEFAULT_TOL};

/// Agreement required between computed and printed values.
pub const MATCH_TOL: f64 = 1e-6;

pub struct Fixture {
    pub label: &'static str,
    /// 1-based `(i, j, k, v)`: `mu(e_i, e_j) = v e_k`.
    pub entries: Vec<(usize, usize, usize, f64)>,
    /// Printed type as `(numerator, denominator)` pairs.
    pub printed_type: [(i64, i64); 5],
    pub printed_q: (i64, i64),
}

impl Fixture {
    pub fn bracket(&self) -> MetricLieAlgebra {
        let e: Vec<_> = self.entries.iter().map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, v)).collect();
        MetricLieAlgebra::from_entries(5, &e, DEFAULT_TOL).expect("fixtures are Lie brackets")
    }

    pub fn printed_values(&self) -> Vec<f64> {
        self.printed_type.iter().map(|&(p, q)| p as f64 / q as f64).collect()
    }

    pub fn printed_q_value(&self) -> f64 {
        self.printed_q.0 as f64 / self.printed_q.1 as f64
    }

    /// The printed q disagrees with `1 / sum b_i^2` of the printed type.
    pub fn printed_inconsistent(&self) -> bool {
        let s: f64 = self.printed_values().iter().map(|b| b * b).sum();
        (1.0 / s - self.printed_q_value()).abs() > MATCH_TOL
    }

    fn printed_string(&self) -> String {
        let parts: Vec<String> =
            self.printed_type.iter().map(|&(p, q)| if q == 1 { p.to_string() } else { format!("{p}/{q}") }).collect();
        parts.join(" ")
    }
}

pub fn fixtures() -> Vec<Fixture> {
    let r2 = 2.0_f64.sqrt();
    let r3 = 3.0_f64.sqrt();
    let mu2 = vec![(1, 2, 3, r3), (1, 3, 4, r3), (1, 4, 5, r2), (2, 3, 5, r2)];
    vec![
        Fixture {
            label: "mu1",
            entries: vec![(1, 2, 3, 3.0), (1, 3, 4, 4.0), (1, 4, 5, 3.0)],
            printed_type: [(-1, 1), (-1, 3), (-1, 10), (1, 10), (1, 3)],
            printed_q: (5, 6),
        },
        Fixture {
            label: "mu2",
            entries: mu2.clone(),
            printed_type: [(-4, 5), (-1, 2), (-1, 5), (1, 10), (2, 5)],
            printed_q: (10, 11),
        },
        Fixture {
            label: "mu3",
            entries: vec![(1, 2, 4, 1.0), (1, 4, 5, r2), (2, 3, 5, r2)],
            printed_type: [(-4, 5), (-3, 5), (-1, 5), (0, 1), (3, 5)],
            printed_q: (5, 7),
        },
        Fixture {
            label: "mu4",
            entries: vec![(1, 2, 5, 1.0), (3, 4, 5, 1.0)],
            printed_type: [(-1, 2), (-1, 2), (-1, 2), (-1, 2), (1, 1)],
            printed_q: (1, 2),
        },
        Fixture {
            label: "mu5",
            entries: vec![(1, 2, 3, 2.0), (1, 3, 4, r3), (2, 3, 5, r3)],
            printed_type: [(-7, 10), (-7, 10), (-1, 5), (3, 10), (3, 10)],
            printed_q: (5, 6),
        },
        // printed with the same bracket as mu2
        Fixture {
            label: "mu6",
            entries: mu2,
            printed_type: [(-1, 1), (-1, 2), (-1, 2), (1, 2), (1, 2)],
            printed_q: (1, 2),
        },
        Fixture {
            label: "mu7",
            entries: vec![(1, 2, 3, 1.0)],
            printed_type: [(-1, 1), (-1, 1), (0, 1), (0, 1), (1, 1)],
            printed_q: (1, 3),
        },
        Fixture {
            label: "mu8",
            entries: vec![(1, 2, 3, 1.0), (1, 3, 4, 1.0)],
            printed_type: [(-1, 1), (-1, 2), (0, 1), (0, 1), (1, 2)],
            printed_q: (2, 3),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Match,
    Mismatch,
    /// The flow did not converge; nothing is claimed.
    Inconclusive,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Match => "match",
            RowStatus::Mismatch => "mismatch",
            RowStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table1Row {
    /// 1-based row number.
    pub row: usize,
    pub label: &'static str,
    pub printed_type: Vec<f64>,
    pub printed_type_text: String,
    pub printed_q: f64,
    pub printed_inconsistent: bool,
    pub computed: Option<BetaType>,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

impl Table1Report {
    pub fn row(&self, label: &str) -> Option<&Table1Row> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.status == RowStatus::Match)
    }

    /// Columns: row, printed_type, computed_type, printed_q, computed_q,
    /// status, note. Types are space-separated; floats use 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,printed_type,computed_type,printed_q,computed_q,status,note\n");
        for r in &self.rows {
            let (ct, cq) = match &r.computed {
                Some(bt) => {
                    (bt.b.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" "), format!("{:.16e}", bt.q))
                }
                None => (String::new(), String::new()),
            };
            let note = if r.printed_inconsistent { "printed_q_inconsistent_with_printed_type" } else { "" };
            let _ = writeln!(
                out,
                "{},{},{},{:.16e},{},{},{}",
                r.label,
                r.printed_type_text,
                ct,
                r.printed_q,
                cq,
                r.status.as_str(),
                note
            );
        }
        out
    }
}

fn run_row(index: usize, fx: &Fixture, cfg: &FlowConfig) -> Table1Row {
    let printed = fx.printed_values();
    let flow = nilsoliton_find(&fx.bracket(), cfg);
    let (computed, converged, iterations, residual) = match flow {
        Ok(r) => {
            let bt = if r.converged { beta_from_nilsoliton(&r.point, cfg.grad_tol).ok() } else { None };
            (bt, r.converged, r.iterations, r.final_residual)
        }
        Err(_) => (None, false, 0, f64::NAN),
    };
    let status = match &computed {
        None => RowStatus::Inconclusive,
        Some(bt) => {
            let types_ok = bt.b.iter().zip(&printed).all(|(a, b)| (a - b).abs() <= MATCH_TOL);
            if types_ok && (bt.q - fx.printed_q_value()).abs() <= MATCH_TOL {
                RowStatus::Match
            } else {
                RowStatus::Mismatch
            }
        }
    };
    Table1Row {
        row: index + 1,
        label: fx.label,
        printed_type: printed,
        printed_type_text: fx.printed_string(),
        printed_q: fx.printed_q_value(),
        printed_inconsistent: fx.printed_inconsistent(),
        computed,
        converged,
        iterations,
        residual,
        status,
    }
}

/// Recomputes the selected rows (1-based; all when `rows` is `None`).
/// Rows are independent and may run in parallel; output keeps row order.
pub fn reproduce(cfg: &FlowConfig, rows: Option<&[usize]>, exec: Execution) -> Table1Report {
    let all = fixtures();
    let picked: Vec<usize> = match rows {
        Some(r) => r.iter().filter(|&&i| i >= 1 && i <= all.len()).map(|i| i - 1).collect(),
        None => (0..all.len()).collect(),
    };
    let rows = batch::map(&picked, exec, |&i| run_row(i, &all[i], cfg));
    Table1Report { rows }
}
