//! Closed-form solutions of the five families and their evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::families::{s1_riccati, Family, FamilyParams};
use super::jet::Jet;
use super::verify::{verify_numeric, VerificationReport, VerifyConfig};
use super::weierstrass::Weierstrass;
use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::OdeInstance;
use crate::poly::{snap_to_field, Poly};
use crate::subeq::{FitReport, FitStatus, Subequation};

/// A parameter value, tagged by whether it is exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Exact(CycloNumber),
    Float([f64; 2]),
}

impl Param {
    pub fn float(z: Complex64) -> Self {
        Param::Float([z.re, z.im])
    }

    pub fn complex(&self) -> Complex64 {
        match self {
            Param::Exact(c) => c.embed_complex(),
            Param::Float([re, im]) => Complex64::new(*re, *im),
        }
    }

    pub fn exact(&self) -> Option<&CycloNumber> {
        match self {
            Param::Exact(c) => Some(c),
            Param::Float(_) => None,
        }
    }
}

impl From<CycloNumber> for Param {
    fn from(c: CycloNumber) -> Self {
        Param::Exact(c)
    }
}

impl From<Complex64> for Param {
    fn from(z: Complex64) -> Self {
        Param::float(z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub residue: Param,
    pub location: Param,
}

/// Explicit solution `u(z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `1/(u - e0) = (p'(z - z0) - A)/N1` with `g2 = 0`.
    EllipticBinomial {
        e0: Param,
        k5_squared: Param,
        g2: Param,
        g3: Param,
        n1: Param,
        big_a: Param,
        z0: [f64; 2],
    },
    /// `w = 2 k1/e0 + A/(p(z - z0) - B)` and
    /// `u = (-3 a w w' - e0 w^3 + 6 k1 w^2 + 2 e0) / (2 (w^3 + 1))`.
    EllipticBb {
        a: Param,
        k1: Param,
        e0: Param,
        g2: Param,
        g3: Param,
        big_a: Param,
        big_b: Param,
        z0: [f64; 2],
    },
    /// `sum r_i / (exp(k (z - z0)) - Z_i) + C`.
    ExpRational { k: Param, poles: Vec<Pole>, constant: Param, z0: [f64; 2] },
    /// `sum r_i / (z - z_i) + C`.
    Rational { poles: Vec<Pole>, constant: Param },
}

/// Number of Taylor coefficients needed for `u ... u'''`.
const JET_LEN: usize = 4;

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::EllipticBinomial { .. } => "elliptic_binomial",
            ClosedForm::EllipticBb { .. } => "elliptic_bb",
            ClosedForm::ExpRational { .. } => "exp_rational",
            ClosedForm::Rational { .. } => "rational",
        }
    }

    /// Expansion point of the form (the origin of the `p` series).
    pub fn z0(&self) -> Complex64 {
        match self {
            ClosedForm::EllipticBinomial { z0, .. } | ClosedForm::EllipticBb { z0, .. } | ClosedForm::ExpRational { z0, .. } => cx(*z0),
            ClosedForm::Rational { poles, .. } => poles.first().map_or(Complex64::zero(), |p| p.location.complex()),
        }
    }

    fn weierstrass(&self) -> Option<Weierstrass> {
        match self {
            ClosedForm::EllipticBinomial { g2, g3, .. } | ClosedForm::EllipticBb { g2, g3, .. } => {
                Some(Weierstrass::new(g2.complex(), g3.complex()))
            }
            _ => None,
        }
    }

    /// Radius about `z0` within which the form can be evaluated.
    pub fn radius(&self) -> f64 {
        self.weierstrass().map_or(f64::INFINITY, |w| w.r_conv())
    }

    pub fn is_elliptic(&self) -> bool {
        self.weierstrass().is_some()
    }

    /// Taylor jet of `u` at `z` with `len` coefficients.
    pub fn jet(&self, z: Complex64, len: usize) -> Result<Jet> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            ClosedForm::Rational { poles, constant } => {
                let x = Jet::variable(z, len);
                let mut u = Jet::constant(constant.complex(), len);
                for p in poles {
                    u = &u + &x.add_constant(-p.location.complex()).recip()?.scale(p.residue.complex());
                }
                Ok(u)
            }
            ClosedForm::ExpRational { k, poles, constant, z0 } => {
                let e = Jet::variable(z - cx(*z0), len).scale(k.complex()).exp();
                let mut u = Jet::constant(constant.complex(), len);
                for p in poles {
                    u = &u + &e.add_constant(-p.location.complex()).recip()?.scale(p.residue.complex());
                }
                Ok(u)
            }
            ClosedForm::EllipticBinomial { e0, n1, big_a, z0, .. } => {
                let wp = self.weierstrass().expect("elliptic");
                let p = wp.jet(z - cx(*z0), len + 1)?;
                let den = p.diff().add_constant(-big_a.complex());
                Ok(den.recip()?.scale(n1.complex()).add_constant(e0.complex()))
            }
            ClosedForm::EllipticBb { a, k1, e0, big_a, big_b, z0, .. } => {
                let wp = self.weierstrass().expect("elliptic");
                let (a, k1, e0) = (a.complex(), k1.complex(), e0.complex());
                let p = wp.jet(z - cx(*z0), len + 1)?;
                let w_long = p.add_constant(-big_b.complex()).recip()?.scale(big_a.complex()).add_constant(2.0 * k1 / e0);
                let dw = w_long.diff();
                let w = Jet(w_long.0[..len].to_vec());
                let w2 = &w * &w;
                let w3 = &w2 * &w;
                let num = &(&(&w * &dw).scale(-3.0 * a) - &w3.scale(e0)) + &w2.scale(6.0 * k1);
                let num = num.add_constant(2.0 * e0);
                let den = w3.add_constant(one).scale(Complex64::new(2.0, 0.0));
                num.div(&den)
            }
        }
    }

    /// `[u, u', u'', u''']` at `z`.
    pub fn eval(&self, z: Complex64) -> Result<[Complex64; 4]> {
        let j = self.jet(z, JET_LEN)?;
        Ok([j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3)])
    }
}

/// `[u, u', u'', u''']` of a closed form at `z`.
pub fn eval_closed_form(cf: &ClosedForm, z: Complex64) -> Result<[Complex64; 4]> {
    cf.eval(z)
}

/// Field operations shared by exact and floating-point parameter formulas.
trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn int(n: i64) -> Self;
    fn negligible(&self) -> bool;
    fn param(self) -> Param;
    fn pw(&self, n: u32) -> Self {
        (0..n).fold(Self::int(1), |acc, _| acc * self.clone())
    }
}

impl Scalar for CycloNumber {
    fn int(n: i64) -> Self {
        CycloNumber::from_int(n)
    }
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    fn param(self) -> Param {
        Param::Exact(self)
    }
}

impl Scalar for Complex64 {
    fn int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn negligible(&self) -> bool {
        self.norm() < 1e-12
    }
    fn param(self) -> Param {
        Param::float(self)
    }
}

/// Options for [`build_closed_form`].
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Exact root of the family's cubic in `e0`, if the caller has one.
    pub e0: Option<CycloNumber>,
    pub z0: Complex64,
    /// Fall back to floating-point roots when the cubic has none in Q(w).
    pub numeric_fallback: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { e0: None, z0: Complex64::zero(), numeric_fallback: true }
    }
}

/// One concrete choice of branches and formula readings.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub form: ClosedForm,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub description: String,
    pub max_rel_ode_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltSolution {
    pub family: Family,
    pub form: ClosedForm,
    /// Branch and formula choices of the accepted candidate.
    pub choice: String,
    pub verification: VerificationReport,
    pub rejected: Vec<RejectedCandidate>,
    pub notes: Vec<String>,
}

/// Roots of a cubic in `e0`: the caller's exact root, the roots in Q(w), and
/// otherwise floating-point roots.
fn e0_roots(cubic: &Poly, opts: &BuildOptions) -> Result<Vec<Param>> {
    if let Some(e0) = &opts.e0 {
        if !cubic.eval(e0).is_zero() {
            return Err(Error::InvalidArgument(format!("e0 = {e0} is not a root of {cubic}")));
        }
        return Ok(vec![Param::Exact(e0.clone())]);
    }
    let exact = cubic.exact_roots();
    let mut out: Vec<Param> = exact.iter().cloned().map(Param::Exact).collect();
    let mut numeric: Vec<Complex64> = Vec::new();
    for z in cubic.complex_roots() {
        let known = exact.iter().any(|r| (r.embed_complex() - z).norm() < 1e-8)
            || numeric.iter().any(|w| (w - z).norm() < 1e-8);
        if !known {
            numeric.push(z);
        }
    }
    if !numeric.is_empty() {
        if opts.numeric_fallback {
            out.extend(numeric.into_iter().map(Param::float));
        } else if out.is_empty() {
            return Err(Error::NoRoot(cubic.to_string()));
        }
    }
    Ok(out)
}

fn s3b_form<T: Scalar>(a: T, k5sq: T, e0: T, g3_den: i64, z0: Complex64) -> Option<ClosedForm> {
    let d = e0.pw(2) - k5sq.clone();
    if d.negligible() {
        return None;
    }
    let g3 = d.pw(2) * (e0.pw(2) - T::int(4) * k5sq.clone()) / (T::int(g3_den) * a.pw(6));
    let n1 = T::int(2) * d.pw(2) / (T::int(3) * a.pw(3));
    let big_a = e0.clone() * d / (T::int(3) * a.pw(3));
    Some(ClosedForm::EllipticBinomial {
        e0: e0.param(),
        k5_squared: k5sq.param(),
        g2: T::int(0).param(),
        g3: g3.param(),
        n1: n1.param(),
        big_a: big_a.param(),
        z0: [z0.re, z0.im],
    })
}

fn s3a_form<T: Scalar>(a: T, k1: T, e0: T, g3_den: i64, z0: Complex64) -> Option<ClosedForm> {
    if e0.negligible() {
        return None;
    }
    let e3 = e0.pw(3);
    let k3 = k1.pw(3);
    let big_a = -(e3.clone() + T::int(8) * k3.clone()) / (T::int(3) * a.pw(2) * e0.clone());
    if big_a.negligible() {
        return None;
    }
    let big_b = -k1.pw(2) / a.pw(2);
    let g2 = T::int(4) * k1.clone() * (k3.clone() - e3.clone()) / (T::int(3) * a.pw(4));
    let g3 = (e3.pw(2) - T::int(20) * e3 * k3.clone() - T::int(8) * k3.pw(2)) / (T::int(g3_den) * a.pw(6));
    Some(ClosedForm::EllipticBb {
        a: a.param(),
        k1: k1.param(),
        e0: e0.param(),
        g2: g2.param(),
        g3: g3.param(),
        big_a: big_a.param(),
        big_b: big_b.param(),
        z0: [z0.re, z0.im],
    })
}

/// The cubic whose roots are the admissible `e0` of an elliptic family:
/// `e0^3 - 3 k5^2 e0 + k6` (S3b) and `e0^3 + 20 k1^3 + k6` (S3a).
pub fn e0_cubic(params: &FamilyParams) -> Option<Poly> {
    let (one, zero) = (CycloNumber::from_int(1), CycloNumber::zero());
    match params {
        FamilyParams::S3b { k5_squared, k6 } => {
            Some(Poly::new(vec![k6.clone(), CycloNumber::from_int(-3) * k5_squared.clone(), zero, one]))
        }
        FamilyParams::S3a { k1, k6 } => {
            Some(Poly::new(vec![CycloNumber::from_int(20) * k1.pow(3) + k6.clone(), zero.clone(), zero, one]))
        }
        _ => None,
    }
}

/// Candidates for S3b, `(a u')^3 + (u^3 - 3 k5^2 u + k6)^2 = 0`.
fn s3b_candidates(ode: &OdeInstance, k5sq: &CycloNumber, k6: &CycloNumber, opts: &BuildOptions) -> Result<Vec<Candidate>> {
    let cubic = e0_cubic(&FamilyParams::S3b { k5_squared: k5sq.clone(), k6: k6.clone() }).expect("elliptic family");
    let mut out = Vec::new();
    for e0 in e0_roots(&cubic, opts)? {
        for den in [243, 27] {
            let form = match &e0 {
                Param::Exact(e) => s3b_form(ode.a.clone(), k5sq.clone(), e.clone(), den, opts.z0),
                Param::Float(_) => s3b_form(ode.a.embed_complex(), k5sq.embed_complex(), e0.complex(), den, opts.z0),
            };
            if let Some(form) = form {
                let description = format!("e0 = {}, g3 denominator {den} a^6", show(&e0));
                out.push(Candidate { form, description });
            }
        }
    }
    Ok(out)
}

/// Candidates for S3a via the Briot-Bouquet map.
fn s3a_candidates(ode: &OdeInstance, k1: &CycloNumber, k6: &CycloNumber, opts: &BuildOptions) -> Result<Vec<Candidate>> {
    let cubic = e0_cubic(&FamilyParams::S3a { k1: k1.clone(), k6: k6.clone() }).expect("elliptic family");
    let mut out = Vec::new();
    for e0 in e0_roots(&cubic, opts)? {
        for den in [17, 27] {
            let form = match &e0 {
                Param::Exact(e) => s3a_form(ode.a.clone(), k1.clone(), e.clone(), den, opts.z0),
                Param::Float(_) => s3a_form(ode.a.embed_complex(), k1.embed_complex(), e0.complex(), den, opts.z0),
            };
            if let Some(form) = form {
                let description = format!("e0 = {}, g3 denominator {den} a^6", show(&e0));
                out.push(Candidate { form, description });
            }
        }
    }
    Ok(out)
}

fn show(p: &Param) -> String {
    match p {
        Param::Exact(c) => c.to_string(),
        Param::Float([re, im]) => format!("{re:.12}{im:+.12}i"),
    }
}

/// The S2A chain `u = v - k1/2`, `v = k1 + 2/w`, `w = alpha + N (lambda - 1/lambda)`,
/// `a N lambda' = M lambda + c (lambda^2 + 1)`.
#[derive(Clone, Debug)]
pub struct S2aChain {
    pub a: Complex64,
    pub k1: Complex64,
    pub alpha: Complex64,
    pub n: Complex64,
    pub m: Complex64,
    pub c: Complex64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub kappa: Complex64,
    pub z0: Complex64,
}

impl S2aChain {
    /// Signs select the branches of `N = +-i b/(k1^2 - b^2)` and
    /// `M = +-sqrt(3 b^2 / (4 (k1^2 - b^2)))`.
    pub fn new(a: &CycloNumber, k1: &CycloNumber, b_squared: &CycloNumber, n_sign: f64, m_sign: f64, z0: Complex64) -> Result<Self> {
        let d = k1.pow(2) - b_squared.clone();
        if d.is_zero() {
            return Err(Error::DegenerateParameter("k1^2 = b^2".into()));
        }
        if b_squared.is_zero() {
            return Err(Error::DegenerateParameter("b = 0".into()));
        }
        let (a, k1, b2, d) = (a.embed_complex(), k1.embed_complex(), b_squared.embed_complex(), d.embed_complex());
        let b = b2.sqrt();
        let alpha = -2.0 * k1 / d;
        let n = n_sign * Complex64::i() * b / d;
        let m = m_sign * (3.0 * b2 / (4.0 * d)).sqrt();
        let c = b2 / (4.0 * d);
        let disc = (m * m - 4.0 * c * c).sqrt();
        let lambda_plus = (-m + disc) / (2.0 * c);
        let lambda_minus = (-m - disc) / (2.0 * c);
        if (lambda_plus - lambda_minus).norm() < 1e-12 {
            return Err(Error::DegenerateParameter("double fixed point of the Riccati equation".into()));
        }
        let kappa = c * (lambda_plus - lambda_minus) / (a * n);
        Ok(S2aChain { a, k1, alpha, n, m, c, lambda_plus, lambda_minus, kappa, z0 })
    }

    /// Jet of `u` evaluated through the chain itself.
    pub fn jet(&self, z: Complex64, len: usize) -> Result<Jet> {
        let one = Complex64::new(1.0, 0.0);
        let e = Jet::variable(z - self.z0, len).scale(self.kappa).exp();
        let num = e.scale(-self.lambda_minus).add_constant(self.lambda_plus);
        let lambda = num.div(&e.scale(-one).add_constant(one))?;
        let w = (&lambda - &lambda.recip()?).scale(self.n).add_constant(self.alpha);
        Ok(w.recip()?.scale(Complex64::new(2.0, 0.0)).add_constant(self.k1 / 2.0))
    }

    /// The same function as a sum of simple fractions in `exp(kappa (z - z0))`.
    pub fn to_form(&self) -> Result<ClosedForm> {
        let (n, alpha) = (self.n, self.alpha);
        let disc = (alpha * alpha + 4.0 * n * n).sqrt();
        let roots = [(-alpha + disc) / (2.0 * n), (-alpha - disc) / (2.0 * n)];
        let (lp, lm) = (self.lambda_plus, self.lambda_minus);
        let mut poles = Vec::new();
        for (i, &li) in roots.iter().enumerate() {
            let lj = roots[1 - i];
            if (lm - li).norm() < 1e-12 || (li - lj).norm() < 1e-12 {
                return Err(Error::DegenerateParameter("coincident poles".into()));
            }
            let ei = (lp - li) / (lm - li);
            let r = 2.0 * li * (1.0 - ei).powu(2) / (n * (li - lj) * (lp - lm));
            poles.push(Pole { residue: r.into(), location: ei.into() });
        }
        let q = n * lm * lm + alpha * lm - n;
        if q.norm() < 1e-12 {
            return Err(Error::DegenerateParameter("pole at infinity".into()));
        }
        let constant = self.k1 / 2.0 + 2.0 * lm / q;
        Ok(ClosedForm::ExpRational { k: self.kappa.into(), poles, constant: constant.into(), z0: [self.z0.re, self.z0.im] })
    }
}

/// `u = v + b/4 + c1/(12 a^2)`, `v = -b + 2b/w`, `w = 1 + 3 (1 + E)^2`,
/// `E = exp(s b (z - z0)/(2a))`.
fn s2b_form(a: &CycloNumber, c1: &CycloNumber, b: &CycloNumber, sign: i64, z0: Complex64) -> ClosedForm {
    let (ac, bc) = (a.embed_complex(), b.embed_complex());
    let ep = Complex64::new(-1.0, 1.0 / 3f64.sqrt());
    let em = ep.conj();
    let r = 2.0 * bc / (3.0 * (ep - em));
    let constant = CycloNumber::from_frac(-3, 4) * b.clone()
        + c1.checked_div(&(CycloNumber::from_int(12) * a.pow(2))).expect("a nonzero");
    ClosedForm::ExpRational {
        k: Param::float(sign as f64 * bc / (2.0 * ac)),
        poles: vec![Pole { residue: r.into(), location: ep.into() }, Pole { residue: (-r).into(), location: em.into() }],
        constant: Param::Exact(constant),
        z0: [z0.re, z0.im],
    }
}

fn s2b_candidates(ode: &OdeInstance, b: &CycloNumber, z0: Complex64, origin: &str) -> Vec<Candidate> {
    [1, -1]
        .into_iter()
        .map(|s| Candidate {
            form: s2b_form(&ode.a, &ode.c1, b, s, z0),
            description: format!("{origin}exponent {} b/(2a)", if s > 0 { "+" } else { "-" }),
        })
        .collect()
}

fn s2a_candidates(ode: &OdeInstance, k1: &CycloNumber, b_squared: &CycloNumber, z0: Complex64) -> Result<Vec<Candidate>> {
    if (k1.pow(2) - b_squared.clone()).is_zero() {
        // (v + b)^3 (v - b) with b = -k1: the S2B degeneration
        return Ok(s2b_candidates(ode, &-k1.clone(), z0, "k1^2 = b^2, S2B degeneration, "));
    }
    let mut out = Vec::new();
    for (ns, ms) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let chain = S2aChain::new(&ode.a, k1, b_squared, ns, ms, z0)?;
        if let Ok(form) = chain.to_form() {
            let sign = |s: f64| if s > 0.0 { "+" } else { "-" };
            out.push(Candidate { form, description: format!("N sign {}, M sign {}", sign(ns), sign(ms)) });
        }
    }
    Ok(out)
}

fn s1_candidates(ode: &OdeInstance, z0: Complex64) -> Vec<Candidate> {
    let (b1, b0) = s1_riccati(ode);
    let half_b1 = b1.clone() * CycloNumber::from_frac(-1, 2);
    let disc = b1.pow(2) - CycloNumber::from_int(4) * b0;
    if disc.is_zero() {
        return vec![Candidate {
            form: ClosedForm::Rational {
                poles: vec![Pole { residue: Param::Exact(ode.a.clone()), location: z0.into() }],
                constant: Param::Exact(half_b1),
            },
            description: "b1^2 - 4 b0 = 0, rational".into(),
        }];
    }
    let a = ode.a.embed_complex();
    let mut out = Vec::new();
    for (label, scale) in [("k^2 = (b1^2 - 4 b0)/(2 a^2)", 2), ("k^2 = (b1^2 - 4 b0)/a^2", 1)] {
        let k2 = disc.checked_div(&(CycloNumber::from_int(scale) * ode.a.pow(2))).expect("a nonzero");
        let k = match snap_to_field(k2.embed_complex().sqrt()) {
            Some(k) if k.pow(2) == k2 => Param::Exact(k),
            _ => Param::float(k2.embed_complex().sqrt()),
        };
        let kc = k.complex();
        // -b1/2 + (a k/2) coth(k (z - z0)/2) = C + a k / (exp(k (z - z0)) - 1)
        let (residue, constant) = match &k {
            Param::Exact(k) => {
                let ak = ode.a.clone() * k.clone();
                (Param::Exact(ak.clone()), Param::Exact(half_b1.clone() + ak * CycloNumber::from_frac(1, 2)))
            }
            Param::Float(_) => (Param::float(a * kc), Param::float(half_b1.embed_complex() + a * kc / 2.0)),
        };
        out.push(Candidate {
            form: ClosedForm::ExpRational {
                k,
                poles: vec![Pole { residue, location: Param::Exact(CycloNumber::from_int(1)) }],
                constant,
                z0: [z0.re, z0.im],
            },
            description: label.into(),
        });
    }
    out
}

/// All candidate closed forms for a family match, before verification.
pub fn closed_form_candidates(ode: &OdeInstance, params: &FamilyParams, opts: &BuildOptions) -> Result<Vec<Candidate>> {
    match params {
        FamilyParams::S3b { k5_squared, k6 } => s3b_candidates(ode, k5_squared, k6, opts),
        FamilyParams::S3a { k1, k6 } => s3a_candidates(ode, k1, k6, opts),
        FamilyParams::S2A { k1, b_squared } => s2a_candidates(ode, k1, b_squared, opts.z0),
        FamilyParams::S2B { b } => Ok(s2b_candidates(ode, b, opts.z0, "")),
        FamilyParams::S1 { .. } => Ok(s1_candidates(ode, opts.z0)),
    }
}

/// Build the closed form for a family match. Where formulas admit several
/// branches or readings, the first candidate passing [`verify_numeric`] is
/// kept; if none passes, the one with the smallest residual is returned with
/// its failed report.
pub fn build_closed_form(
    ode: &OdeInstance,
    params: &FamilyParams,
    fit: Option<&FitReport>,
    opts: &BuildOptions,
    cfg: &VerifyConfig,
) -> Result<BuiltSolution> {
    let family = params.family();
    let subeq: Option<&Subequation> = fit
        .filter(|f| f.status == FitStatus::Fitted && f.degree == family.degree())
        .and_then(|f| f.subequation.as_ref());
    let candidates = closed_form_candidates(ode, params, opts)?;
    if candidates.is_empty() {
        return Err(Error::DegenerateParameter(format!("every {family} parameter choice is degenerate")));
    }
    let mut rejected = Vec::new();
    let mut best: Option<(Candidate, VerificationReport)> = None;
    for cand in candidates {
        let report = verify_numeric(&cand.form, ode, subeq, cfg);
        if report.passed {
            let mut notes = Vec::new();
            if subeq.is_none() {
                notes.push(format!("no fitted degree-{} subequation; ODE residual only", family.degree()));
            }
            log::info!("{family}: accepted {}", cand.description);
            return Ok(BuiltSolution {
                family,
                form: cand.form,
                choice: cand.description,
                verification: report,
                rejected,
                notes,
            });
        }
        log::debug!("{family}: rejected {} ({:?})", cand.description, report.max_rel_ode_residual);
        rejected.push(RejectedCandidate {
            description: cand.description.clone(),
            max_rel_ode_residual: report.max_rel_ode_residual,
        });
        let better = match &best {
            None => true,
            Some((_, r)) => report.max_rel_ode_residual.unwrap_or(f64::INFINITY) < r.max_rel_ode_residual.unwrap_or(f64::INFINITY),
        };
        if better {
            best = Some((cand, report));
        }
    }
    let (cand, report) = best.expect("at least one candidate");
    rejected.retain(|r| r.description != cand.description);
    Ok(BuiltSolution {
        family,
        form: cand.form,
        choice: cand.description,
        verification: report,
        rejected,
        notes: vec!["no candidate passed verification".into()],
    })
}
