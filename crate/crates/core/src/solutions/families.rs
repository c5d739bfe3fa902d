//! The five coefficient families admitting meromorphic solutions, instance
//! builders from free parameters, and exact classification.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclofield::CycloNumber;
use crate::error::{Error, Result};
use crate::laurent::OdeInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    S3a,
    S3b,
    S2A,
    S2B,
    S1,
}

impl Family {
    /// Precedence when several families match: S3b > S3a > S2A > S2B > S1.
    pub const PRECEDENCE: [Family; 5] = [Family::S3b, Family::S3a, Family::S2A, Family::S2B, Family::S1];

    /// Degree of the subequation the family's solutions obey.
    pub fn degree(self) -> u32 {
        match self {
            Family::S3a | Family::S3b => 3,
            Family::S2A | Family::S2B => 2,
            Family::S1 => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::S3a => "S3a",
            Family::S3b => "S3b",
            Family::S2A => "S2A",
            Family::S2B => "S2B",
            Family::S1 => "S1",
        };
        f.write_str(s)
    }
}

/// Parameters recovered from the coefficients of a matching instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    S3a { k1: CycloNumber, k6: CycloNumber },
    S3b { k5_squared: CycloNumber, k6: CycloNumber },
    S2A { k1: CycloNumber, b_squared: CycloNumber },
    S2B { b: CycloNumber },
    S1 { b1: CycloNumber, b0: CycloNumber },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::S3a { .. } => Family::S3a,
            FamilyParams::S3b { .. } => Family::S3b,
            FamilyParams::S2A { .. } => Family::S2A,
            FamilyParams::S2B { .. } => Family::S2B,
            FamilyParams::S1 { .. } => Family::S1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// Most specific match by the fixed precedence.
    pub family: Option<Family>,
    /// Every matching family, in precedence order.
    pub matches: Vec<FamilyParams>,
    pub notes: Vec<String>,
}

fn int(n: i64) -> CycloNumber {
    CycloNumber::from_int(n)
}

fn frac(n: i64, d: i64) -> CycloNumber {
    CycloNumber::from_frac(n, d)
}

fn div(x: CycloNumber, y: CycloNumber) -> CycloNumber {
    x.checked_div(&y).expect("a is nonzero")
}

fn make(a: &CycloNumber, c: [CycloNumber; 6]) -> OdeInstance {
    OdeInstance::new(a.clone(), c).expect("a is nonzero")
}

fn check_a(a: &CycloNumber) -> Result<()> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    Ok(())
}

/// S3a: `c1 = 12 a^2 k1`, `c4 = c1^2/(12 c0)`, `c6 = 4 k6`, `c2 = c5 = c7 = 0`.
pub fn s3a_instance(a: &CycloNumber, k1: &CycloNumber, k6: &CycloNumber) -> Result<OdeInstance> {
    check_a(a)?;
    let c1 = int(12) * a.pow(2) * k1.clone();
    let c4 = div(c1.pow(2), int(12) * a.pow(3));
    Ok(make(a, [c1, int(0), c4, int(0), int(4) * k6.clone(), int(0)]))
}

/// S3b: `c5 = -16 k5^2`, `c6 = 4 k6`, `c7 = c5^2/128`, `c1 = c2 = c4 = 0`.
pub fn s3b_instance(a: &CycloNumber, k5_squared: &CycloNumber, k6: &CycloNumber) -> Result<OdeInstance> {
    check_a(a)?;
    let c5 = int(-16) * k5_squared.clone();
    let c7 = c5.pow(2) * frac(1, 128);
    Ok(make(a, [int(0), int(0), int(0), c5, int(4) * k6.clone(), c7]))
}

/// S2A from `k1` and `b^2`: `c1 = -3 a^2 k1`, `c4 = 2 a b^2 + 3 a k1^2 / 4`.
pub fn s2a_instance(a: &CycloNumber, k1: &CycloNumber, b_squared: &CycloNumber) -> Result<OdeInstance> {
    check_a(a)?;
    let c1 = int(-3) * a.pow(2) * k1.clone();
    let c4 = int(2) * a.clone() * b_squared.clone() + frac(3, 4) * a.clone() * k1.pow(2);
    Ok(s2a_from_c1_c4(a, c1, c4))
}

fn s2a_from_c1_c4(a: &CycloNumber, c1: CycloNumber, c4: CycloNumber) -> OdeInstance {
    let a3c4 = a.pow(3) * c4.clone();
    let c5 = div(c1.pow(2) - int(12) * a3c4.clone(), int(4) * a.pow(4));
    let c6 = -div(c1.clone() * (c1.pow(2) + int(36) * a3c4.clone()), int(144) * a.pow(6));
    let c7 = div(
        (int(12) * a3c4.clone() - c1.pow(2)) * (int(36) * a3c4 - int(11) * c1.pow(2)),
        int(1536) * a.pow(8),
    );
    make(a, [c1, int(0), c4, c5, c6, c7])
}

/// S2B from free `c1, c2`.
pub fn s2b_instance(a: &CycloNumber, c1: &CycloNumber, c2: &CycloNumber) -> Result<OdeInstance> {
    check_a(a)?;
    let (c1, c2, a) = (c1.clone(), c2.clone(), a.clone());
    let ac2 = a.clone() * c2.clone();
    let c4 = div(
        int(44) * c1.pow(2) + int(8) * c1.clone() * ac2.clone() - ac2.pow(2),
        int(144) * a.pow(3),
    );
    let c5 = div(
        int(-32) * c1.pow(2) - int(24) * c1.clone() * ac2.clone() - int(7) * ac2.pow(2),
        int(48) * a.pow(4),
    );
    let c6 = -div(
        (c1.clone() + ac2.clone()) * (int(12) * c1.pow(2) + int(6) * c1.clone() * ac2.clone() + ac2.pow(2)),
        int(144) * a.pow(6),
    );
    let c7 = -div(
        c2.clone()
            * (int(4) * c1.clone() + int(3) * ac2.clone())
            * (int(48) * c1.pow(2) + int(20) * c1.clone() * ac2.clone() + ac2.pow(2)),
        int(55296) * a.pow(7),
    );
    Ok(make(&a, [c1, c2, c4, c5, c6, c7]))
}

/// `(c6, c7)` forced by S1 for given `c1, c2, c4, c5`.
fn s1_tail(a: &CycloNumber, c1: &CycloNumber, c2: &CycloNumber, c4: &CycloNumber, c5: &CycloNumber) -> (CycloNumber, CycloNumber) {
    let (a, c1, c2, c4, c5) = (a.clone(), c1.clone(), c2.clone(), c4.clone(), c5.clone());
    let ap = |n: u32| a.pow(n);
    let c6_num = int(-56) * c1.pow(3) + int(60) * ap(1) * c1.pow(2) * c2.clone()
        - int(18) * ap(2) * c1.clone() * c2.pow(2)
        + ap(3) * c2.pow(3)
        + int(288) * ap(3) * c1.clone() * c4.clone()
        - int(144) * ap(4) * c2.clone() * c4.clone()
        - int(96) * ap(4) * c1.clone() * c5.clone()
        + int(48) * ap(5) * c2.clone() * c5.clone();
    let c7_num = int(-176) * c1.pow(4) + int(128) * ap(1) * c1.pow(3) * c2.clone()
        + int(24) * ap(2) * c1.pow(2) * c2.pow(2)
        - int(32) * ap(3) * c1.clone() * c2.pow(3)
        + int(5) * ap(4) * c2.pow(4)
        + int(2688) * ap(3) * c1.pow(2) * c4.clone()
        - int(1536) * ap(4) * c1.clone() * c2.clone() * c4.clone()
        + int(96) * ap(5) * c2.pow(2) * c4.clone()
        - int(6912) * ap(6) * c4.pow(2)
        + int(128) * ap(4) * c1.pow(2) * c5.clone()
        - int(512) * ap(5) * c1.clone() * c2.clone() * c5.clone()
        + int(224) * ap(6) * c2.pow(2) * c5.clone()
        + int(4608) * ap(7) * c4.clone() * c5.clone()
        + int(2304) * ap(8) * c5.pow(2);
    (div(c6_num, int(1152) * ap(6)), div(c7_num, int(8192 * 9) * ap(8)))
}

/// S1 from free `c1, c2, c4, c5`.
pub fn s1_instance(
    a: &CycloNumber,
    c1: &CycloNumber,
    c2: &CycloNumber,
    c4: &CycloNumber,
    c5: &CycloNumber,
) -> Result<OdeInstance> {
    check_a(a)?;
    let (c6, c7) = s1_tail(a, c1, c2, c4, c5);
    Ok(make(a, [c1.clone(), c2.clone(), c4.clone(), c5.clone(), c6, c7]))
}

/// Riccati coefficients `a u' + u^2 + b1 u + b0 = 0` of an S1 instance.
pub fn s1_riccati(ode: &OdeInstance) -> (CycloNumber, CycloNumber) {
    let a = ode.a.clone();
    let (c1, c2, c4, c5) = (ode.c1.clone(), ode.c2.clone(), ode.c4.clone(), ode.c5.clone());
    let b1 = div(int(2) * c1.clone() - a.clone() * c2.clone(), int(12) * a.pow(2));
    let b0 = div(
        int(44) * c1.pow(2) - int(32) * a.clone() * c1 * c2.clone() + int(5) * a.pow(2) * c2.pow(2)
            - int(144) * a.pow(3) * c4
            + int(144) * a.pow(4) * c5,
        int(1152) * a.pow(4),
    );
    (b1, b0)
}

fn match_family(ode: &OdeInstance, family: Family) -> Option<FamilyParams> {
    let a = &ode.a;
    let same = |x: &OdeInstance| x == ode;
    match family {
        Family::S3a => {
            let k1 = div(ode.c1.clone(), int(12) * a.pow(2));
            let k6 = ode.c6.clone() * frac(1, 4);
            same(&s3a_instance(a, &k1, &k6).ok()?).then_some(FamilyParams::S3a { k1, k6 })
        }
        Family::S3b => {
            let k5_squared = ode.c5.clone() * frac(-1, 16);
            let k6 = ode.c6.clone() * frac(1, 4);
            same(&s3b_instance(a, &k5_squared, &k6).ok()?).then_some(FamilyParams::S3b { k5_squared, k6 })
        }
        Family::S2A => {
            let k1 = div(-ode.c1.clone(), int(3) * a.pow(2));
            let b_squared = div(ode.c4.clone() - frac(3, 4) * a.clone() * k1.pow(2), int(2) * a.clone());
            (!b_squared.is_zero() && same(&s2a_instance(a, &k1, &b_squared).ok()?))
                .then_some(FamilyParams::S2A { k1, b_squared })
        }
        Family::S2B => {
            let b = div(ode.c2.clone() + div(int(2) * ode.c1.clone(), a.clone()), int(6) * a.clone());
            (!b.is_zero() && same(&s2b_instance(a, &ode.c1, &ode.c2).ok()?)).then_some(FamilyParams::S2B { b })
        }
        Family::S1 => {
            let (c6, c7) = s1_tail(a, &ode.c1, &ode.c2, &ode.c4, &ode.c5);
            (c6 == ode.c6 && c7 == ode.c7).then(|| {
                let (b1, b0) = s1_riccati(ode);
                FamilyParams::S1 { b1, b0 }
            })
        }
    }
}

/// Exact membership test against every family.
pub fn classify_family(ode: &OdeInstance) -> Classification {
    let matches: Vec<FamilyParams> = Family::PRECEDENCE.iter().filter_map(|&f| match_family(ode, f)).collect();
    let family = matches.first().map(FamilyParams::family);
    let mut notes = Vec::new();
    if matches.len() > 1 {
        let names: Vec<String> = matches.iter().map(|m| m.family().to_string()).collect();
        notes.push(format!("overlapping families {}; reporting {} by precedence", names.join(", "), names[0]));
    }
    for f in [Family::S2A, Family::S2B] {
        if !matches.iter().any(|m| m.family() == f) && b_vanishes(ode, f) {
            notes.push(format!("{f} excluded: b = 0"));
        }
    }
    if family.is_none() {
        notes.push("no meromorphic solution family matched".into());
    }
    Classification { family, matches, notes }
}

fn b_vanishes(ode: &OdeInstance, f: Family) -> bool {
    let a = &ode.a;
    match f {
        Family::S2A => {
            let k1 = div(-ode.c1.clone(), int(3) * a.pow(2));
            let c4 = frac(3, 4) * a.clone() * k1.pow(2);
            c4 == ode.c4 && s2a_from_c1_c4(a, ode.c1.clone(), c4) == *ode
        }
        Family::S2B => (ode.c2.clone() * a.clone() + int(2) * ode.c1.clone()).is_zero() && s2b_instance(a, &ode.c1, &ode.c2).is_ok_and(|x| x == *ode),
        _ => false,
    }
}
