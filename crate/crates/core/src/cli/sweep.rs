//! Parameter sweeps. Points are evaluated in parallel and emitted in
//! lexicographic grid order.

use std::str::FromStr;

use rayon::prelude::*;

use super::report::{Cell, Report};
use super::settings::Settings;
use super::CliError;
use crate::circle::spectrum;
use crate::deform::{deform_phi, DeformationPlan, Strategy};
use crate::genfun::{d_lambda_probe, GenFunWindow, DEFAULT_TRUNCATION};
use crate::series::{phi_direct, RealOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Deform,
    Spectrum,
    DLambda,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deform" => Ok(Target::Deform),
            "spectrum" => Ok(Target::Spectrum),
            "d-lambda" => Ok(Target::DLambda),
            other => Err(format!(
                "unknown sweep target '{other}' (deform, spectrum, d-lambda)"
            )),
        }
    }
}

fn sorted<T: Copy + PartialOrd>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite grid values"));
    v.dedup();
    v
}

pub fn plan_from(settings: &Settings, lambda: f64) -> Result<DeformationPlan, CliError> {
    let strategy: Strategy = settings.parsed("strategy", Strategy::FourierWeights)?;
    let plan = DeformationPlan::new(lambda)
        .with_window(settings.parsed("window", crate::deform::DEFAULT_WINDOW)?)
        .with_strategy(strategy)
        .with_taylor_order(settings.parsed("taylor-order", crate::deform::DEFAULT_TAYLOR_ORDER)?);
    plan.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(plan)
}

/// Rows (lambda, n, z, deformed, direct, residual, status).
pub fn deform_rows(
    settings: &Settings,
    default_lambda: &[f64],
) -> Result<(Report, bool), CliError> {
    let ls = sorted(settings.reals("lambda", default_lambda)?);
    let ns = sorted(settings.integers("n", &[0])?);
    let zs = sorted(settings.reals("z", &[1.0])?);
    let plans = ls
        .iter()
        .map(|&l| plan_from(settings, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut grid = Vec::new();
    for (plan, &l) in plans.iter().zip(&ls) {
        for &n in &ns {
            for &z in &zs {
                grid.push((plan, l, n, z));
            }
        }
    }
    let rows: Vec<(Vec<Cell>, bool)> = grid
        .par_iter()
        .map(|&(plan, l, n, z)| {
            let direct = RealOrder::new(n as f64 + l).and_then(|o| phi_direct(o, z));
            match (deform_phi(n, z, plan), direct) {
                (Ok(d), Ok(e)) => (
                    vec![
                        l.into(),
                        n.into(),
                        z.into(),
                        d.into(),
                        e.into(),
                        ((d - e).abs()).into(),
                        "ok".into(),
                    ],
                    true,
                ),
                (d, e) => {
                    let msg = match (&d, &e) {
                        (Err(x), _) => x.to_string(),
                        (_, Err(x)) => x.to_string(),
                        _ => unreachable!(),
                    };
                    (
                        vec![
                            l.into(),
                            n.into(),
                            z.into(),
                            d.ok().into(),
                            e.ok().into(),
                            Cell::Empty,
                            msg.into(),
                        ],
                        false,
                    )
                }
            }
        })
        .collect();
    let mut rep = Report::new(&[
        "lambda", "n", "z", "deformed", "direct", "abs_diff", "status",
    ]);
    let ok = rows.iter().all(|(_, ok)| *ok);
    for (r, _) in rows {
        rep.push(r);
    }
    Ok((rep, ok))
}

pub fn spectrum_wide(settings: &Settings) -> Result<Report, CliError> {
    let ls = sorted(settings.reals("lambda", &[0.0])?);
    let ms = sorted(settings.integers("modes", &[4])?);
    if ms.iter().any(|&m| m < 0) {
        return Err(CliError::Usage("--modes must be non-negative".into()));
    }
    let rho = super::prepotential_kind(settings)?;
    let grid: Vec<(f64, usize)> = ls
        .iter()
        .flat_map(|&l| ms.iter().map(move |&m| (l, m as usize)))
        .collect();
    let spectra = grid
        .par_iter()
        .map(|&(l, m)| spectrum(&rho(m), l, m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let width = ms.iter().map(|&m| 2 * m as usize + 1).max().unwrap_or(0);
    let mut columns = vec!["lambda".to_string(), "modes".to_string()];
    columns.extend((0..width).map(|i| format!("eig_{i}")));
    let mut rep = Report {
        columns,
        ..Report::default()
    };
    for ((l, m), eig) in grid.into_iter().zip(spectra) {
        let mut row = vec![Cell::Num(l), m.into()];
        row.extend(eig.into_iter().map(Cell::Num));
        row.resize(width + 2, Cell::Empty);
        rep.push(row);
    }
    Ok(rep)
}

pub fn d_lambda_rows(settings: &Settings) -> Result<Report, CliError> {
    let ls = sorted(settings.reals("lambda", &[0.25, 0.5])?);
    let zs = sorted(settings.reals("z", &[0.25, 0.5])?);
    let ts = sorted(settings.reals("theta", &[0.3, 1.0])?);
    let p: usize = settings.parsed("taylor-order", 20)?;
    let cut: i64 = settings.parsed("window", crate::deform::DEFAULT_WINDOW)?;
    let mut grid = Vec::new();
    for &l in &ls {
        for &z in &zs {
            for &t in &ts {
                grid.push((l, z, t));
            }
        }
    }
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&(l, z, th)| {
            let probe = GenFunWindow::adaptive(z, 1.0, DEFAULT_TRUNCATION)
                .and_then(|w| d_lambda_probe(z, l, th, &w, p, cut));
            let head = vec![Cell::Num(l), Cell::Num(z), Cell::Num(th)];
            let tail = match probe {
                Err(e) => {
                    let mut t = vec![Cell::Empty; 7];
                    t.push(e.to_string().into());
                    t
                }
                Ok(pr) => {
                    let (rre, rim, gap, status) = match &pr.rhs {
                        Ok(r) => (
                            Cell::Num(r.re),
                            Cell::Num(r.im),
                            Cell::Num((pr.lhs - r).norm()),
                            "ok".to_string(),
                        ),
                        Err(e) => (Cell::Empty, Cell::Empty, Cell::Empty, e.to_string()),
                    };
                    vec![
                        Cell::Num(pr.lhs.re),
                        Cell::Num(pr.lhs.im),
                        rre,
                        rim,
                        gap,
                        Cell::Num(pr.f_est.re),
                        Cell::Num(pr.f_est.im),
                        status.into(),
                    ]
                }
            };
            head.into_iter().chain(tail).collect()
        })
        .collect();
    let mut rep = Report::new(&[
        "lambda", "z", "theta", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap", "f_re", "f_im",
        "status",
    ]);
    for r in rows {
        rep.push(r);
    }
    Ok(rep)
}
