use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;

/// First-order polynomial relation `F(u, u') = sum a_{j,k} u^j u'^k = 0` of
/// degree `m` in `u'`, every term of singularity degree `j + 2k <= 2m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSubequation", into = "RawSubequation")]
pub struct Subequation {
    m: u32,
    coeffs: BTreeMap<(u32, u32), CycloNumber>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub u: u32,
    pub du: u32,
    pub coeff: CycloNumber,
}

#[derive(Serialize, Deserialize)]
struct RawSubequation {
    m: u32,
    terms: Vec<Term>,
}

impl From<Subequation> for RawSubequation {
    fn from(s: Subequation) -> Self {
        RawSubequation { m: s.m, terms: s.terms() }
    }
}

impl TryFrom<RawSubequation> for Subequation {
    type Error = Error;
    fn try_from(r: RawSubequation) -> Result<Self> {
        Subequation::new(r.m, r.terms.into_iter().map(|t| ((t.u, t.du), t.coeff)).collect())
    }
}

impl Subequation {
    /// Keys are `(j, k)` for `u^j u'^k`; zero coefficients are dropped.
    pub fn new(m: u32, coeffs: BTreeMap<(u32, u32), CycloNumber>) -> Result<Self> {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let Some(&(j, k)) = coeffs.keys().find(|&&(j, k)| j + 2 * k > 2 * m) {
            return Err(Error::InvalidArgument(format!("term u^{j} u'^{k} exceeds singularity degree {}", 2 * m)));
        }
        if !coeffs.contains_key(&(0, m)) {
            return Err(Error::InvalidArgument(format!("coefficient of u'^{m} must be nonzero")));
        }
        Ok(Subequation { m, coeffs })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn coeff(&self, j: u32, k: u32) -> CycloNumber {
        self.coeffs.get(&(j, k)).cloned().unwrap_or_else(CycloNumber::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), CycloNumber> {
        &self.coeffs
    }

    /// Terms ordered by decreasing `u'` power, then decreasing `u` power.
    pub fn terms(&self) -> Vec<Term> {
        let mut t: Vec<Term> =
            self.coeffs.iter().map(|(&(u, du), c)| Term { u, du, coeff: c.clone() }).collect();
        t.sort_by(|x, y| (y.du, y.u).cmp(&(x.du, x.u)));
        t
    }

    /// Divided through by the coefficient of `u'^m`.
    pub fn normalized(&self) -> Self {
        let lc = self.coeff(0, self.m).inverse().expect("nonzero by construction");
        Subequation { m: self.m, coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * &lc)).collect() }
    }

    /// `F(v + s, v')` as a relation in `(v, v')`.
    pub fn shift(&self, s: &CycloNumber) -> Self {
        let mut out: BTreeMap<(u32, u32), CycloNumber> = BTreeMap::new();
        for (&(j, k), c) in &self.coeffs {
            // (v + s)^j = sum binom(j, i) s^(j-i) v^i
            let mut binom = CycloNumber::one();
            for i in 0..=j {
                let term = &(c * &binom) * &s.pow(j - i);
                *out.entry((i, k)).or_insert_with(CycloNumber::zero) += &term;
                binom = &binom * &CycloNumber::from_frac((j - i) as i64, (i + 1) as i64);
            }
        }
        Subequation::new(self.m, out).expect("shift keeps the leading term")
    }

    /// `F(u, u')` for a truncated Laurent series `u`.
    pub fn residual(&self, u: &LaurentSeries) -> Result<LaurentSeries> {
        let du = u.diff();
        let max_j = self.coeffs.keys().map(|&(j, _)| j).max().unwrap_or(0);
        let mut u_pows = vec![LaurentSeries::monomial(CycloNumber::one(), 0, u.order().max(du.order()) + 64)];
        for _ in 0..max_j {
            u_pows.push(u_pows.last().unwrap().mul(u)?);
        }
        let mut du_pows = vec![u_pows[0].clone()];
        for _ in 0..self.m {
            du_pows.push(du_pows.last().unwrap().mul(&du)?);
        }
        let mut acc: Option<LaurentSeries> = None;
        for (&(j, k), c) in &self.coeffs {
            let term = u_pows[j as usize].mul(&du_pows[k as usize])?.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(acc.expect("at least the leading term"))
    }

    /// `F(u, u')` in floating point, with the largest term magnitude.
    pub fn eval_complex(&self, u: Complex64, du: Complex64) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale: f64 = 0.0;
        for (&(j, k), c) in &self.coeffs {
            let t = c.embed_complex() * u.powu(j) * du.powu(k);
            scale = scale.max(t.norm());
            sum += t;
        }
        (sum, scale)
    }

    /// Substitute `u' = -q(u)/r` and report whether `F` vanishes identically,
    /// i.e. whether `r u' + q(u)` divides `F`. `q` is given by ascending
    /// coefficients.
    pub fn vanishes_on(&self, r: &CycloNumber, q: &[CycloNumber]) -> bool {
        let neg_inv_r = -&r.inverse().expect("nonzero r");
        let du: Vec<CycloNumber> = q.iter().map(|c| c * &neg_inv_r).collect();
        let mul = |a: &[CycloNumber], b: &[CycloNumber]| {
            let mut out = vec![CycloNumber::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += &(x * y);
                }
            }
            out
        };
        let mut total: Vec<CycloNumber> = vec![CycloNumber::zero()];
        for (&(j, k), c) in &self.coeffs {
            let mut p = vec![CycloNumber::zero(); j as usize];
            p.push(c.clone());
            for _ in 0..k {
                p = mul(&p, &du);
            }
            if total.len() < p.len() {
                total.resize(p.len(), CycloNumber::zero());
            }
            for (t, x) in total.iter_mut().zip(p) {
                *t += &x;
            }
        }
        total.iter().all(|c| c.is_zero())
    }
}

fn monomial_name(j: u32, k: u32) -> String {
    let mut parts = Vec::new();
    match k {
        0 => {}
        1 => parts.push("u'".to_string()),
        _ => parts.push(format!("u'^{k}")),
    }
    match j {
        0 => {}
        1 => parts.push("u".to_string()),
        _ => parts.push(format!("u^{j}")),
    }
    parts.join(" ")
}

impl fmt::Display for Subequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let name = monomial_name(t.u, t.du);
            if name.is_empty() {
                write!(f, "({})", t.coeff)?;
            } else if t.coeff.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "({}) {name}", t.coeff)?;
            }
        }
        write!(f, " = 0")
    }
}
