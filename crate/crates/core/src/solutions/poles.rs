//! Poles of elliptic closed forms inside the series disk and their residues
//! by contour integration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::closed_form::ClosedForm;
use crate::error::{Error, Result};

/// Nodes of the trapezoidal rule on each contour.
const CONTOUR_NODES: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleResidue {
    pub location: [f64; 2],
    pub residue: [f64; 2],
}

/// Newton's method on `1/u`, i.e. `z <- z + u/u'`. Landing exactly on
/// the pole, where `u` cannot be evaluated, counts as convergence.
fn polish(cf: &ClosedForm, mut z: Complex64, limit: f64) -> Option<Complex64> {
    let z0 = cf.z0();
    let mut last = f64::INFINITY;
    for _ in 0..60 {
        let [u, du, ..] = match cf.eval(z) {
            Ok(d) => d,
            Err(_) if last < 1e-8 => return Some(z),
            Err(_) => return None,
        };
        let step = u / du;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z += step;
        last = step.norm();
        if (z - z0).norm() > limit {
            return None;
        }
        if last < 1e-14 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// `u` grows like `1/|z - p|` next to a simple pole.
fn is_pole(cf: &ClosedForm, p: Complex64) -> bool {
    let probe = |d: f64| cf.eval(p + Complex64::new(d, 0.0)).map(|v| v[0].norm());
    matches!((probe(1e-4), probe(1e-3)), (Ok(near), Ok(far)) if near > 5.0 * far)
}

/// Simple poles of `cf` within `0.8 r_conv` of `z0` (radius 1 when the
/// form has no series limit), nearest first, found by Newton from a polar grid.
pub fn find_poles(cf: &ClosedForm) -> Vec<Complex64> {
    let r = cf.radius();
    let radius = 0.8 * if r.is_finite() { r } else { 1.25 };
    let z0 = cf.z0();
    let mut poles: Vec<Complex64> = Vec::new();
    for i in 1..=12 {
        let rho = radius * i as f64 / 12.0;
        for j in 0..36 {
            let seed = z0 + Complex64::from_polar(rho, (j as f64 + 0.5 * (i % 2) as f64) * std::f64::consts::TAU / 36.0);
            if let Some(p) = polish(cf, seed, radius) {
                if is_pole(cf, p) && !poles.iter().any(|q| (q - p).norm() < 1e-7) {
                    poles.push(p);
                }
            }
        }
    }
    poles.sort_by(|a, b| (a - z0).norm().total_cmp(&(b - z0).norm()));
    poles
}

/// Residue by the trapezoidal rule on a circle of radius `rho` about `p`.
pub fn contour_residue(cf: &ClosedForm, p: Complex64, rho: f64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..CONTOUR_NODES {
        let e = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / CONTOUR_NODES as f64);
        sum += cf.eval(p + rho * e)?[0] * e;
    }
    Ok(sum * rho / CONTOUR_NODES as f64)
}

/// The `count` poles nearest `z0` with their residues.
pub fn nearest_residues(cf: &ClosedForm, count: usize) -> Result<Vec<PoleResidue>> {
    let poles = find_poles(cf);
    if poles.len() < count {
        return Err(Error::InvalidArgument(format!("found {} poles within the series disk, need {count}", poles.len())));
    }
    let z0 = cf.z0();
    let limit = cf.radius();
    let mut out = Vec::new();
    for (i, &p) in poles.iter().take(count).enumerate() {
        // keep the contour away from other poles, from z0 and from the disk edge
        let gap = poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| (q - p).norm())
            .chain([(p - z0).norm()])
            .fold(f64::INFINITY, f64::min);
        let rho = (0.3 * gap).min(0.5 * (limit - (p - z0).norm()));
        let r = contour_residue(cf, p, rho)?;
        out.push(PoleResidue { location: [p.re, p.im], residue: [r.re, r.im] });
    }
    Ok(out)
}
