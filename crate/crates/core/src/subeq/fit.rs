use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::branches::{distinct_series_count, riccati_factor};
use super::linsolve::{solve, LinearSolution};
use super::polynomial::Subequation;
use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::{expand_laurent, LaurentSeries, OdeInstance};

pub const DEFAULT_EXTRA_ORDERS: u32 = 4;

/// An unknown coefficient slot `label * u^u * u'^du`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unknown {
    pub label: String,
    pub u: u32,
    pub du: u32,
}

/// Fixed leading part plus the unknown lower-order slots of a degree-`m`
/// subequation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub m: u32,
    pub branches: Vec<usize>,
    pub leading: BTreeMap<(u32, u32), CycloNumber>,
    pub unknowns: Vec<Unknown>,
}

const LABELS_3: [(&str, u32, u32); 12] = [
    ("b1", 1, 2),
    ("b2", 3, 1),
    ("b3", 5, 0),
    ("b4", 0, 2),
    ("b5", 2, 1),
    ("b6", 4, 0),
    ("b7", 1, 1),
    ("b8", 3, 0),
    ("b9", 0, 1),
    ("bb", 2, 0),
    ("ba", 1, 0),
    ("b0", 0, 0),
];
const LABELS_2: [(&str, u32, u32); 6] =
    [("b4", 1, 1), ("b3", 3, 0), ("b5", 0, 1), ("b2", 2, 0), ("b1", 1, 0), ("b0", 0, 0)];
const LABELS_1: [(&str, u32, u32); 2] = [("b1", 1, 0), ("b0", 0, 0)];

pub fn default_branches(m: u32) -> Result<Vec<usize>> {
    match m {
        1 => Ok(vec![0]),
        2 => Ok(vec![1, 2]),
        3 => Ok(vec![0, 1, 2]),
        _ => Err(Error::UnsupportedDegree(m as usize)),
    }
}

/// Template with the default branches for degree `m`.
pub fn candidate_template(m: u32, ode: &OdeInstance) -> Result<Template> {
    template_for(m, ode, &default_branches(m)?)
}

/// Leading part `prod_{r in branches} (r u' + u^2)`, negated for `m = 3`:
/// its simple-pole balances are exactly the chosen residues. The unknowns
/// are all monomials of singularity degree below `2m`.
pub fn template_for(m: u32, ode: &OdeInstance, branches: &[usize]) -> Result<Template> {
    let labels: &[(&str, u32, u32)] = match m {
        1 => &LABELS_1,
        2 => &LABELS_2,
        3 => &LABELS_3,
        _ => return Err(Error::UnsupportedDegree(m as usize)),
    };
    check_branches(m, branches)?;
    let residues = ode.residues();
    // polynomial in (u^2, u') as a map (j, k)
    let mut lead: BTreeMap<(u32, u32), CycloNumber> = [((0, 0), CycloNumber::one())].into_iter().collect();
    for &b in branches {
        let mut next = BTreeMap::new();
        for ((j, k), c) in &lead {
            *next.entry((j + 2, *k)).or_insert_with(CycloNumber::zero) += c;
            *next.entry((*j, k + 1)).or_insert_with(CycloNumber::zero) += &(c * &residues[b]);
        }
        lead = next;
    }
    if m == 3 {
        lead = lead.into_iter().map(|(k, c)| (k, -c)).collect();
    }
    lead.retain(|_, c| !c.is_zero());
    let unknowns = labels.iter().map(|&(l, u, du)| Unknown { label: l.to_string(), u, du }).collect();
    Ok(Template { m, branches: branches.to_vec(), leading: lead, unknowns })
}

fn check_branches(m: u32, branches: &[usize]) -> Result<()> {
    if branches.len() != m as usize {
        return Err(Error::InvalidArgument(format!(
            "a degree-{m} subequation needs {m} distinct branches, got {}",
            branches.len()
        )));
    }
    let mut seen = [false; 3];
    for &b in branches {
        if b > 2 || seen[b] {
            return Err(Error::InvalidArgument(format!("invalid branch list {branches:?}")));
        }
        seen[b] = true;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitStatus {
    Fitted,
    Infeasible,
    Underdetermined,
    /// Solvable, but the result fails the irreducibility proxy.
    Reducible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub degree: u32,
    pub branches: Vec<usize>,
    pub status: FitStatus,
    pub subequation: Option<Subequation>,
    /// Fitted values of the template unknowns by label.
    pub coefficients: BTreeMap<String, CycloNumber>,
    /// Number of orders `F_j`, `j = 0, 1, ...`, required to vanish.
    pub orders_checked: u32,
    /// First order at which the stacked system becomes inconsistent.
    pub violated_order: Option<u32>,
    pub free_unknowns: Vec<String>,
    pub distinct_series: Option<usize>,
    pub notes: Vec<String>,
}

/// Laurent depth needed to read `F_0 ... F_{2m + extra_orders}` exactly.
pub fn fit_depth(m: u32, extra_orders: u32) -> usize {
    (2 * m + extra_orders + 4) as usize
}

/// Coefficients `F_0 ... F_jmax` (`F_j` at `z^(j - 2m)`) of each unknown's
/// monomial and of the leading part along `u`.
fn order_rows(t: &Template, u: &LaurentSeries, jmax: u32) -> Result<(Vec<Vec<CycloNumber>>, Vec<CycloNumber>)> {
    let m = t.m as i64;
    let du = u.diff();
    let max_order = jmax as i64 - 2 * m + 1;
    let max_j = 2 * t.m as usize;
    let one = LaurentSeries::monomial(CycloNumber::one(), 0, max_order + 2 * m + 2);
    let mut u_pows = vec![one.clone()];
    for _ in 0..max_j {
        u_pows.push(u_pows.last().unwrap().mul_to(u, max_order + 2 * m)?);
    }
    let mut du_pows = vec![one];
    for _ in 0..t.m {
        du_pows.push(du_pows.last().unwrap().mul_to(&du, max_order + 2 * m)?);
    }
    let monomial = |j: u32, k: u32| u_pows[j as usize].mul_to(&du_pows[k as usize], max_order);
    let column = |s: &LaurentSeries| -> Result<Vec<CycloNumber>> {
        (0..=jmax as i64).map(|j| s.coeff(j - 2 * m)).collect()
    };
    let mut lead = vec![CycloNumber::zero(); jmax as usize + 1];
    for (&(j, k), c) in &t.leading {
        for (acc, v) in lead.iter_mut().zip(column(&monomial(j, k)?)?) {
            *acc += &(c * &v);
        }
    }
    let cols: Vec<Vec<CycloNumber>> =
        t.unknowns.iter().map(|x| column(&monomial(x.u, x.du)?)).collect::<Result<_>>()?;
    let rows = (0..=jmax as usize).map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect();
    Ok((rows, lead.into_iter().map(|c| -c).collect()))
}

/// Fit a degree-`m` subequation to the Laurent branches `branches` (indices
/// into `[a, w a, w^2 a]`; `None` for the default subset), requiring
/// `F_j = 0` for `j = 0 ... 2m + extra_orders` on every branch.
pub fn fit_subequation(
    ode: &OdeInstance,
    m: u32,
    branches: Option<&[usize]>,
    extra_orders: u32,
) -> Result<FitReport> {
    let branches = match branches {
        Some(b) => b.to_vec(),
        None => default_branches(m)?,
    };
    let t = template_for(m, ode, &branches)?;
    let residues = ode.residues();
    let depth = fit_depth(m, extra_orders);
    let jmax = 2 * m + extra_orders;
    let series: Vec<LaurentSeries> =
        branches.iter().map(|&b| expand_laurent(ode, &residues[b], depth)).collect::<Result<_>>()?;
    // per branch, per order
    let mut blocks = Vec::new();
    for u in &series {
        blocks.push(order_rows(&t, u, jmax)?);
    }
    let stacked = |upto: u32| {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (rows, rhs) in &blocks {
            a.extend(rows[..=upto as usize].iter().cloned());
            b.extend(rhs[..=upto as usize].iter().cloned());
        }
        (a, b)
    };
    let (a, b) = stacked(jmax);
    let mut report = FitReport {
        degree: m,
        branches: branches.clone(),
        status: FitStatus::Infeasible,
        subequation: None,
        coefficients: BTreeMap::new(),
        orders_checked: jmax + 1,
        violated_order: None,
        free_unknowns: Vec::new(),
        distinct_series: None,
        notes: Vec::new(),
    };
    let (x, free) = match solve(&a, &b) {
        LinearSolution::Inconsistent => {
            report.violated_order = (0..=jmax).find(|&j| {
                let (a, b) = stacked(j);
                solve(&a, &b) == LinearSolution::Inconsistent
            });
            return Ok(report);
        }
        LinearSolution::Unique(x) => (x, Vec::new()),
        LinearSolution::Underdetermined { particular, free } => (particular, free),
    };
    let mut coeffs = t.leading.clone();
    for (unk, v) in t.unknowns.iter().zip(&x) {
        *coeffs.entry((unk.u, unk.du)).or_insert_with(CycloNumber::zero) += v;
        report.coefficients.insert(unk.label.clone(), v.clone());
    }
    let s = Subequation::new(m, coeffs)?;
    if !free.is_empty() {
        report.status = FitStatus::Underdetermined;
        report.free_unknowns = free.iter().map(|&i| t.unknowns[i].label.clone()).collect();
        report.notes.push("particular solution shown with free unknowns set to 0".into());
        report.subequation = Some(s);
        return Ok(report);
    }
    for u in &series {
        let r = s.residual(u)?;
        debug_assert!(r.is_zero(), "fitted subequation leaves residual {r}");
    }
    let count = distinct_series_count(&s)?;
    report.distinct_series = Some(count);
    report.status = FitStatus::Fitted;
    if count != m as usize {
        report.status = FitStatus::Reducible;
        report.notes.push(format!("only {count} distinct Laurent series, expected {m}"));
    } else if m > 1 {
        for u in &series {
            if let Some(q) = riccati_factor(&s, u)? {
                report.status = FitStatus::Reducible;
                report.notes.push(format!("divisible by a degree-one factor with u^1 coefficient {}", q[1]));
                break;
            }
        }
    }
    report.subequation = Some(s);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> CycloNumber {
        CycloNumber::from_int(n)
    }

    #[test]
    fn templates_match_the_normalizations() {
        let ode = OdeInstance::from_ints(2, [0; 6]).unwrap();
        let t1 = candidate_template(1, &ode).unwrap();
        assert_eq!(t1.leading, [((0, 1), int(2)), ((2, 0), int(1))].into_iter().collect());
        assert_eq!(t1.unknowns.iter().map(|u| u.label.as_str()).collect::<Vec<_>>(), ["b1", "b0"]);
        let t2 = candidate_template(2, &ode).unwrap();
        assert_eq!(t2.leading, [((0, 2), int(4)), ((2, 1), int(-2)), ((4, 0), int(1))].into_iter().collect());
        assert_eq!(t2.unknowns.len(), 6);
        let t3 = candidate_template(3, &ode).unwrap();
        assert_eq!(t3.leading, [((0, 3), int(-8)), ((6, 0), int(-1))].into_iter().collect());
        assert_eq!(t3.unknowns.len(), 12);
        assert!(matches!(candidate_template(4, &ode), Err(Error::UnsupportedDegree(4))));
    }

    #[test]
    fn riccati_fit_on_pure_equation() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        let r = fit_subequation(&ode, 1, None, DEFAULT_EXTRA_ORDERS).unwrap();
        assert_eq!(r.status, FitStatus::Fitted);
        assert_eq!(r.subequation.unwrap().to_string(), "u' + u^2 = 0");
        assert_eq!(r.distinct_series, Some(1));
    }

    #[test]
    fn binomial_fit() {
        let ode = OdeInstance::from_ints(1, [0, 0, 0, -16, 0, 2]).unwrap();
        let r = fit_subequation(&ode, 3, None, DEFAULT_EXTRA_ORDERS).unwrap();
        assert_eq!(r.status, FitStatus::Fitted, "{:?}", r.notes);
        let s = r.subequation.unwrap().normalized();
        let expect: BTreeMap<_, _> =
            [((0, 3), int(1)), ((6, 0), int(1)), ((4, 0), int(-6)), ((2, 0), int(9))].into_iter().collect();
        assert_eq!(s.coeffs(), &expect);
    }

    #[test]
    fn generic_instance_is_infeasible() {
        let ode = OdeInstance::from_ints(1, [1; 6]).unwrap();
        for m in 1..=3 {
            let r = fit_subequation(&ode, m, None, DEFAULT_EXTRA_ORDERS).unwrap();
            assert_eq!(r.status, FitStatus::Infeasible, "degree {m}");
            assert!(r.violated_order.is_some());
        }
    }

    #[test]
    fn branch_order_does_not_matter() {
        let ode = OdeInstance::from_ints(1, [0, 0, 0, -16, 0, 2]).unwrap();
        let a = fit_subequation(&ode, 3, Some(&[0, 1, 2]), 4).unwrap();
        let b = fit_subequation(&ode, 3, Some(&[2, 0, 1]), 4).unwrap();
        assert_eq!(a.subequation, b.subequation);
    }

    #[test]
    fn wrong_branch_count_is_rejected() {
        let ode = OdeInstance::from_ints(1, [0; 6]).unwrap();
        assert!(fit_subequation(&ode, 2, Some(&[0]), 4).is_err());
        assert!(fit_subequation(&ode, 2, Some(&[1, 1]), 4).is_err());
    }
}
