//! Numeric verification of closed forms against the ODE and a subequation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::closed_form::ClosedForm;
use crate::laurent::OdeInstance;
use crate::subeq::Subequation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Annulus `inner <= |z - z0| <= outer` the points are drawn from.
    pub inner: f64,
    pub outer: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { points: 20, seed: 1, tolerance: 1e-9, inner: 0.05, outer: 0.4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub points: Vec<[f64; 2]>,
    pub ode_residuals: Vec<f64>,
    pub subeq_residuals: Vec<f64>,
    /// `None` when no point could be evaluated.
    pub max_rel_ode_residual: Option<f64>,
    pub max_rel_subeq_residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// ODE residual at a point divided by its largest term.
pub fn relative_ode_residual(ode: &OdeInstance, d: &[Complex64; 4]) -> f64 {
    let [u, du, d2u, d3u] = *d;
    let c = |x: &crate::cyclofield::CycloNumber| x.embed_complex();
    let terms = [
        c(&ode.c0()) * d3u,
        6.0 * u.powu(4),
        c(&ode.c1) * d2u,
        c(&ode.c2) * u * du,
        c(&ode.c4) * du,
        c(&ode.c5) * u * u,
        c(&ode.c6) * u,
        c(&ode.c7),
    ];
    relative(&terms)
}

fn relative(terms: &[Complex64]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let sum: Complex64 = terms.iter().sum();
    if scale == 0.0 {
        0.0
    } else {
        sum.norm() / scale
    }
}

/// Pseudo-random points in the annulus about `z0`, shrunk to stay inside
/// the form's evaluation radius.
pub fn sample_points(cf: &ClosedForm, cfg: &VerifyConfig, count: usize) -> Vec<Complex64> {
    let outer = cfg.outer.min(0.9 * cf.radius());
    let inner = cfg.inner.min(outer / 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let z0 = cf.z0();
    (0..count)
        .map(|_| {
            let rho = rng.gen_range(inner..=outer);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            z0 + Complex64::from_polar(rho, theta)
        })
        .collect()
}

/// Evaluate the ODE (and `s`, when given) along `cf` at `cfg.points` seeded
/// points. Points where the form cannot be evaluated are replaced by fresh
/// draws; failures are reported, never raised.
pub fn verify_numeric(cf: &ClosedForm, ode: &OdeInstance, s: Option<&Subequation>, cfg: &VerifyConfig) -> VerificationReport {
    let mut report = VerificationReport {
        points: Vec::new(),
        ode_residuals: Vec::new(),
        subeq_residuals: Vec::new(),
        max_rel_ode_residual: None,
        max_rel_subeq_residual: None,
        tolerance: cfg.tolerance,
        passed: false,
        notes: Vec::new(),
    };
    let mut skipped = 0;
    for z in sample_points(cf, cfg, cfg.points * 4) {
        if report.points.len() == cfg.points {
            break;
        }
        let d = match cf.eval(z) {
            Ok(d) if d.iter().all(|x| x.re.is_finite() && x.im.is_finite()) => d,
            _ => {
                skipped += 1;
                continue;
            }
        };
        report.points.push([z.re, z.im]);
        report.ode_residuals.push(relative_ode_residual(ode, &d));
        if let Some(s) = s {
            let (v, scale) = s.eval_complex(d[0], d[1]);
            report.subeq_residuals.push(if scale == 0.0 { 0.0 } else { v.norm() / scale });
        }
    }
    let max = |v: &[f64]| v.iter().copied().fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    report.max_rel_ode_residual = max(&report.ode_residuals);
    report.max_rel_subeq_residual = max(&report.subeq_residuals);
    if skipped > 0 {
        report.notes.push(format!("{skipped} points skipped near singularities"));
    }
    if report.points.len() < cfg.points {
        report.notes.push(format!("only {} of {} points could be evaluated", report.points.len(), cfg.points));
    }
    let ok = |m: Option<f64>| m.is_some_and(|m| m <= cfg.tolerance);
    report.passed = report.points.len() == cfg.points
        && ok(report.max_rel_ode_residual)
        && (s.is_none() || ok(report.max_rel_subeq_residual));
    if !report.passed {
        report.notes.push("FAILED".into());
    }
    report
}
