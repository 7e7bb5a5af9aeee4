//! Verification suites: each case is a residual against a tolerance, or an
//! ungated informational row.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Display;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::report::{exact, Cell, Report};
use super::settings::Settings;
use super::CliError;
use crate::circle::{
    alternating_sine_sum, build_w_lambda, deformed_state, eigen_residual, spectrum, Prepotential,
    SummationMethod,
};
use crate::deform::{unify_residual, weights, DeformationPlan, DEFAULT_INTEGER_SNAP};
use crate::genfun::{
    d_eigen_check, d_lambda_probe, gen_deform_check, gen_eigen_check, phi_closed, phi_gen,
    GenFunWindow, DEFAULT_TRUNCATION,
};
use crate::ladder::{ladder_check, ladder_check_exact, PrimitiveRule};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Single ladder steps in z-space against the shifted order.
    Ladder,
    /// Deformed integer orders against real orders.
    Unify,
    /// Generating function: closed form, ladder eigenrelation, d/dz.
    GenEigen,
    /// Regularized alternating sine sum against −θ/2.
    AlternatingSum,
    /// Deformed generating function against t^(−λ) Φ.
    GenDeform,
    /// Two routes to d/dz of the deformed generating function.
    DLambda,
    /// Laurent weights against quadrature.
    Weights,
    /// Winding operator, deformed states and spectra.
    Circle,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Ladder,
        Suite::Unify,
        Suite::GenEigen,
        Suite::AlternatingSum,
        Suite::GenDeform,
        Suite::DLambda,
        Suite::Weights,
        Suite::Circle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ladder => "ladder",
            Suite::Unify => "unify",
            Suite::GenEigen => "gen-eigen",
            Suite::AlternatingSum => "alternating-sum",
            Suite::GenDeform => "gen-deform",
            Suite::DLambda => "d-lambda",
            Suite::Weights => "weights",
            Suite::Circle => "circle",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ladder" => Suite::Ladder,
            "unify" => Suite::Unify,
            "gen-eigen" => Suite::GenEigen,
            "alternating-sum" => Suite::AlternatingSum,
            "gen-deform" => Suite::GenDeform,
            "d-lambda" => Suite::DLambda,
            "weights" => Suite::Weights,
            "circle" => Suite::Circle,
            "all" => Suite::All,
            other => return Err(format!("unknown suite '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub suite: &'static str,
    pub case: String,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub note: String,
}

struct Ctx {
    tolerance: Option<f64>,
}

impl Ctx {
    fn gated<E: Display>(
        &self,
        suite: &'static str,
        case: String,
        result: Result<f64, E>,
        default_tol: f64,
    ) -> Case {
        let tol = self.tolerance.unwrap_or(default_tol);
        match result {
            Ok(r) => Case {
                suite,
                case,
                residual: r,
                tolerance: Some(tol),
                status: if r <= tol { Status::Pass } else { Status::Fail },
                note: String::new(),
            },
            Err(e) => Case {
                suite,
                case,
                residual: f64::NAN,
                tolerance: Some(tol),
                status: Status::Fail,
                note: e.to_string(),
            },
        }
    }

    fn info(&self, suite: &'static str, case: String, value: f64, note: String) -> Case {
        Case {
            suite,
            case,
            residual: value,
            tolerance: None,
            status: Status::Info,
            note,
        }
    }
}

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Run one suite (or all of them) with grids taken from `settings`.
pub fn run_suite(suite: Suite, settings: &Settings) -> Result<Vec<Case>, CliError> {
    let ctx = Ctx {
        tolerance: settings.tolerance()?,
    };
    if suite == Suite::All {
        let mut all = Vec::new();
        for s in Suite::EACH {
            all.extend(run_suite(s, settings)?);
        }
        return Ok(all);
    }
    Ok(match suite {
        Suite::Ladder => ladder(&ctx, settings)?,
        Suite::Unify => unify(&ctx, settings)?,
        Suite::GenEigen => gen_eigen(&ctx, settings)?,
        Suite::AlternatingSum => alternating(&ctx, settings)?,
        Suite::GenDeform => gen_deform(&ctx, settings)?,
        Suite::DLambda => d_lambda(&ctx, settings)?,
        Suite::Weights => weight_oracle(&ctx, settings)?,
        Suite::Circle => circle(&ctx, settings)?,
        Suite::All => unreachable!(),
    })
}

fn product3<A: Copy, B: Copy, C: Copy>(a: &[A], b: &[B], c: &[C]) -> Vec<(A, B, C)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &w in c {
                out.push((x, y, w));
            }
        }
    }
    out
}

fn ladder(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "ladder";
    let ns = s.integers("n", &(-5..=5).collect::<Vec<_>>())?;
    let zs = s.reals("z", &[0.5, 1.0, 2.0])?;
    let ms: Vec<i64> = (-5..=5).filter(|&m| m != 0).collect();
    let grid = product3(&ns, &ms, &[()]);
    let mut cases: Vec<Case> = grid
        .par_iter()
        .map(|&(n, m, ())| {
            let exact_ok = ladder_check_exact(n, m, 30).map(|ok| if ok { 0.0 } else { 1.0 });
            ctx.gated(SUITE, format!("exact n={n} m={m} K=30"), exact_ok, 0.5)
        })
        .collect();
    let grid = product3(&ns, &ms, &zs);
    cases.extend(
        grid.par_iter()
            .map(|&(n, m, z)| {
                ctx.gated(
                    SUITE,
                    format!("n={n} m={m} z={z}"),
                    ladder_check(n, m, z),
                    1e-12,
                )
            })
            .collect::<Vec<_>>(),
    );
    Ok(cases)
}

fn lambda_label(l: f64) -> String {
    if (l - 1.0 / 3.0).abs() < 1e-15 {
        "1/3".into()
    } else {
        l.to_string()
    }
}

fn unify(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    let ns = s.integers("n", &[-2, -1, 0, 1, 3])?;
    let ls = s.reals("lambda", &[0.25, 1.0 / 3.0, 0.5, 0.9])?;
    let zs = s.reals("z", &[0.1, 0.5, 1.0, 2.0, 5.0])?;
    let window = s.parsed("window", crate::deform::DEFAULT_WINDOW)?;
    let grid = product3(&ns, &ls, &zs);
    Ok(grid
        .par_iter()
        .map(|&(n, l, z)| {
            let plan = DeformationPlan::new(l).with_window(window);
            ctx.gated(
                "unify",
                format!("n={n} lambda={} z={z}", lambda_label(l)),
                unify_residual(n, z, &plan),
                1e-8,
            )
        })
        .collect())
}

fn gen_eigen(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "gen-eigen";
    let zs = s.reals("z", &[0.0, 0.5, 1.0, 2.0, 3.0])?;
    let ts = s.reals("theta", &[-2.5, -1.0, 0.0, 1.0, 2.5])?;
    let grid = product3(&zs, &ts, &[()]);
    let per_point: Vec<Vec<Case>> = grid
        .par_iter()
        .map(|&(z, th, ())| {
            let t = unit(th);
            let mut out = Vec::new();
            let w = match GenFunWindow::adaptive(z, 1.0, DEFAULT_TRUNCATION) {
                Ok(w) => w,
                Err(e) => {
                    out.push(ctx.gated::<_>(SUITE, format!("window z={z}"), Err::<f64, _>(e), 0.0));
                    return out;
                }
            };
            out.push(ctx.gated(
                SUITE,
                format!("closed-form z={z} theta={th}"),
                phi_gen(z, t, &w).map(|v| (v - phi_closed(z, t)).norm()),
                1e-10,
            ));
            for m in [1, -1, 2, -2, 3] {
                out.push(ctx.gated(
                    SUITE,
                    format!("eigen m={m} z={z} theta={th}"),
                    gen_eigen_check(m, z, t, &w, PrimitiveRule::BasisClosure),
                    1e-10,
                ));
            }
            if z > 0.0 {
                out.push(ctx.gated(
                    SUITE,
                    format!("d-eigen z={z} theta={th}"),
                    d_eigen_check(z, t, &w),
                    1e-10,
                ));
            }
            out
        })
        .collect();
    Ok(per_point.into_iter().flatten().collect())
}

fn summation(s: &Settings) -> Result<SummationMethod, CliError> {
    let r = s.real("abel-r", 0.999)?;
    let abel = SummationMethod::abel(r).map_err(|e| CliError::Usage(e.to_string()))?;
    match s.raw("summation") {
        None | Some("abel") => Ok(abel),
        Some("cesaro") => Ok(SummationMethod::Cesaro),
        Some("partial") => Ok(SummationMethod::Partial),
        Some(other) => Err(CliError::Usage(format!(
            "unknown summation '{other}' (partial, abel, cesaro)"
        ))),
    }
}

fn alternating(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "alternating-sum";
    const TERMS: usize = 100_000;
    let ts = s.reals("theta", &[0.5, -0.5, 1.5, -1.5, 2.5, -2.5, FRAC_PI_2])?;
    let r = s.real("abel-r", 0.999)?;
    let abel = SummationMethod::abel(r).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut cases = Vec::new();
    for th in ts {
        let a = alternating_sine_sum(th, TERMS, abel);
        let c = alternating_sine_sum(th, TERMS, SummationMethod::Cesaro);
        cases.push(ctx.gated(
            SUITE,
            format!("abel({r}) theta={th}"),
            a.clone().map(|(sum, target)| (sum - target).abs()),
            5e-3,
        ));
        let agree = match (a, c) {
            (Ok((x, _)), Ok((y, _))) => Ok((x - y).abs()),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        cases.push(ctx.gated(SUITE, format!("cesaro-vs-abel theta={th}"), agree, 1e-3));
    }
    Ok(cases)
}

fn gen_deform(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "gen-deform";
    let ls = s.reals("lambda", &[0.25, 1.0 / 3.0, 0.5, 0.9])?;
    let zs = s.reals("z", &[0.1, 0.5, 1.0, 2.0, 5.0])?;
    let ts = s.reals("theta", &[-2.5, 0.5, 2.0])?;
    let window = s.parsed("window", crate::deform::DEFAULT_WINDOW)?;
    let check = |l: f64, z: f64, th: f64| {
        let w = GenFunWindow::adaptive(z, 1.0, DEFAULT_TRUNCATION)?;
        gen_deform_check(z, th, &w, &DeformationPlan::new(l).with_window(window))
    };
    let mut cases = vec![
        ctx.gated(
            SUITE,
            "lambda=0 z=1 theta=0.5".into(),
            check(0.0, 1.0, 0.5),
            1e-12,
        ),
        ctx.gated(
            SUITE,
            "lambda=1 z=1 theta=1".into(),
            check(1.0, 1.0, 1.0),
            1e-10,
        ),
    ];
    let grid = product3(&ls, &zs, &ts);
    cases.extend(
        grid.par_iter()
            .map(|&(l, z, th)| {
                ctx.gated(
                    SUITE,
                    format!("lambda={} z={z} theta={th}", lambda_label(l)),
                    check(l, z, th),
                    1e-7,
                )
            })
            .collect::<Vec<_>>(),
    );
    Ok(cases)
}

fn d_lambda(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "d-lambda";
    let ls = s.reals("lambda", &[0.25, 0.5])?;
    let zs = s.reals("z", &[0.25, 0.5])?;
    let ts = s.reals("theta", &[0.3, 1.0])?;
    let p: usize = s.parsed("taylor-order", 20)?;
    let cut: i64 = s.parsed("window", crate::deform::DEFAULT_WINDOW)?;
    let grid = product3(&ls, &zs, &ts);
    let per_point: Vec<Vec<Case>> = grid
        .par_iter()
        .map(|&(l, z, th)| {
            let label = format!("lambda={l} z={z} theta={th}");
            let probe = GenFunWindow::adaptive(z, 1.0, DEFAULT_TRUNCATION)
                .and_then(|w| d_lambda_probe(z, l, th, &w, p, cut));
            match probe {
                Err(e) => vec![ctx.gated(SUITE, format!("routes {label}"), Err::<f64, _>(e), 1e-5)],
                Ok(pr) => {
                    let gap = pr
                        .rhs
                        .as_ref()
                        .map(|r| (pr.lhs - r).norm())
                        .map_err(|e| e.clone());
                    let f = pr.f_est;
                    let ok = f.re.is_finite() && f.im.is_finite() && f.norm() > 0.0;
                    vec![
                        ctx.gated(SUITE, format!("routes {label}"), gap, 1e-5),
                        Case {
                            suite: SUITE,
                            case: format!("ratio {label}"),
                            residual: f.norm(),
                            tolerance: None,
                            status: if ok { Status::Pass } else { Status::Fail },
                            note: format!("F_est = {} {:+}i", exact(f.re), f.im),
                        },
                    ]
                }
            }
        })
        .collect();
    Ok(per_point.into_iter().flatten().collect())
}

/// w_k by Gauss–Legendre quadrature of (1/2π) ∫ e^(−i(λ+k)θ) dθ over (−π, π).
pub fn weight_by_quadrature(lambda: f64, k: i64) -> f64 {
    let g = GaussLegendre::new(32);
    let a = lambda + k as f64;
    // the imaginary part is odd in θ and integrates to zero
    g.integrate_composite(-PI, PI, 16, |th| (a * th).cos()) / (2.0 * PI)
}

fn weight_oracle(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    let ls = s.reals("lambda", &[0.25, 0.5, 0.9])?;
    let mut cases = Vec::new();
    for l in ls {
        let w = weights(l, 20, DEFAULT_INTEGER_SNAP);
        for k in -20..=20 {
            let r = (w.get(k) - weight_by_quadrature(l, k)).abs();
            cases.push(ctx.gated(
                "weights",
                format!("lambda={l} k={k}"),
                Ok::<_, String>(r),
                1e-10,
            ));
        }
    }
    Ok(cases)
}

/// sup over a uniform grid of θ in (−π+0.1, π−0.1) of |v(θ) − e^(i(n+λ)θ)|.
pub fn pointwise_error(
    v: &crate::circle::FourierSeries,
    n: i64,
    lambda: f64,
    points: usize,
) -> f64 {
    let a = PI - 0.1;
    (0..points)
        .map(|j| {
            let th = -a + 2.0 * a * (j as f64 + 0.5) / points as f64;
            (v.eval(th) - unit((n as f64 + lambda) * th)).norm()
        })
        .fold(0.0, f64::max)
}

/// Prepotential cutoff and state cutoff of the pointwise check.
pub const POINTWISE_RHO_MODES: usize = 32_768;
pub const POINTWISE_MODES: usize = 2_048;

fn circle(ctx: &Ctx, s: &Settings) -> Result<Vec<Case>, CliError> {
    const SUITE: &str = "circle";
    let ls = s.reals("lambda", &[0.25, 0.5])?;
    let ns = s.integers("n", &[0, 1, -1])?;
    let mut cases = Vec::new();

    let w = build_w_lambda(&Prepotential::smooth(64), 0.5, 64)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let asym = (&w - w.transpose()).abs().max();
    cases.push(ctx.gated(
        SUITE,
        "hermitian smooth M=64".into(),
        Ok::<_, String>(asym),
        0.0,
    ));

    let grid = product3(&ls, &ns, &[()]);
    cases.extend(
        grid.par_iter()
            .map(|&(l, n, ())| {
                let r = |m: usize| {
                    eigen_residual(&Prepotential::smooth(m), l, n, m, SummationMethod::Partial)
                };
                let ratio = r(64).and_then(|a| r(128).map(|b| b / a));
                ctx.gated(
                    SUITE,
                    format!("residual-ratio smooth lambda={l} n={n} M=128/64"),
                    ratio,
                    0.5,
                )
            })
            .collect::<Vec<_>>(),
    );

    cases.extend(
        grid.par_iter()
            .map(|&(l, n, ())| {
                let v = deformed_state(
                    n,
                    l,
                    &Prepotential::bessel(POINTWISE_RHO_MODES),
                    POINTWISE_MODES,
                    SummationMethod::Cesaro,
                );
                ctx.gated(
                    SUITE,
                    format!("pointwise bessel cesaro lambda={l} n={n}"),
                    v.map(|v| pointwise_error(&v, n, l, 201)),
                    5e-3,
                )
            })
            .collect::<Vec<_>>(),
    );

    let method = summation(s)?;
    for m in [64usize, 128, 256] {
        let r = eigen_residual(&Prepotential::bessel(m), 0.5, 0, m, method);
        cases.push(match r {
            Ok(r) => ctx.info(
                SUITE,
                format!("residual bessel {method} lambda=0.5 n=0 M={m}"),
                r,
                String::new(),
            ),
            Err(e) => ctx.gated(
                SUITE,
                format!("residual bessel M={m}"),
                Err::<f64, _>(e),
                0.0,
            ),
        });
    }

    for (name, p) in [
        ("cosine", Prepotential::cosine(8)),
        ("bessel", Prepotential::bessel(8)),
    ] {
        let sym = spectrum(&p, 0.3, 8).and_then(|a| {
            spectrum(&p, -0.3, 8).map(|b| {
                a.iter()
                    .zip(b.iter().rev())
                    .map(|(x, y)| (x + y).abs())
                    .fold(0.0, f64::max)
            })
        });
        cases.push(ctx.gated(
            SUITE,
            format!("spectrum-symmetry {name} lambda=0.3 M=8"),
            sym,
            1e-8,
        ));
    }
    Ok(cases)
}

/// Cases as a report with a trailing summary.
pub fn report(suite: Suite, cases: &[Case]) -> Report {
    let mut rep = Report::new(&["suite", "case", "residual", "tolerance", "status", "note"]);
    rep.meta.push(("command".into(), "verify".into()));
    rep.meta.push(("suite".into(), suite.name().into()));
    for c in cases {
        rep.push(vec![
            c.suite.into(),
            c.case.clone().into(),
            Cell::Num(c.residual),
            c.tolerance.into(),
            c.status.as_str().into(),
            c.note.clone().into(),
        ]);
    }
    let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
    let (pass, fail, info) = (
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Info),
    );
    let overall = if fail == 0 { "pass" } else { "fail" };
    rep.summary = vec![
        ("cases".into(), cases.len().into()),
        ("passed".into(), pass.into()),
        ("failed".into(), fail.into()),
        ("info".into(), info.into()),
        ("status".into(), overall.into()),
    ];
    rep.summary_row = Some(vec![
        "summary".into(),
        format!("passed={pass} failed={fail} info={info}").into(),
        Cell::Empty,
        Cell::Empty,
        overall.into(),
        Cell::Empty,
    ]);
    rep
}

pub fn all_passed(cases: &[Case]) -> bool {
    cases.iter().all(|c| c.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::EACH {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }

    #[test]
    fn quadrature_weights() {
        let w = weights(0.5, 3, DEFAULT_INTEGER_SNAP);
        for k in -3..=3 {
            assert!((w.get(k) - weight_by_quadrature(0.5, k)).abs() < 1e-12);
        }
    }
}
