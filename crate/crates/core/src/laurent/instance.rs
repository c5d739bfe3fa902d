use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclofield::{cube_roots_of, CycloNumber};
use crate::error::{Error, Result};

/// Coefficients of
/// `c0 u''' + 6 u^4 + c1 u'' + c2 u u' + c4 u' + c5 u^2 + c6 u + c7 = 0`
/// with `c0 = a^3`. There is no `u^3` term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawInstance", into = "RawInstance")]
pub struct OdeInstance {
    pub a: CycloNumber,
    pub c1: CycloNumber,
    pub c2: CycloNumber,
    pub c4: CycloNumber,
    pub c5: CycloNumber,
    pub c6: CycloNumber,
    pub c7: CycloNumber,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    a: CycloNumber,
    #[serde(default)]
    c1: CycloNumber,
    #[serde(default)]
    c2: CycloNumber,
    #[serde(default)]
    c4: CycloNumber,
    #[serde(default)]
    c5: CycloNumber,
    #[serde(default)]
    c6: CycloNumber,
    #[serde(default)]
    c7: CycloNumber,
}

impl TryFrom<RawInstance> for OdeInstance {
    type Error = Error;
    fn try_from(r: RawInstance) -> Result<Self> {
        OdeInstance::new(r.a, [r.c1, r.c2, r.c4, r.c5, r.c6, r.c7])
    }
}

impl From<OdeInstance> for RawInstance {
    fn from(o: OdeInstance) -> Self {
        RawInstance { a: o.a, c1: o.c1, c2: o.c2, c4: o.c4, c5: o.c5, c6: o.c6, c7: o.c7 }
    }
}

impl OdeInstance {
    /// `coeffs` is `[c1, c2, c4, c5, c6, c7]`.
    pub fn new(a: CycloNumber, coeffs: [CycloNumber; 6]) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("a must be nonzero".into()));
        }
        let [c1, c2, c4, c5, c6, c7] = coeffs;
        Ok(OdeInstance { a, c1, c2, c4, c5, c6, c7 })
    }

    pub fn from_ints(a: i64, coeffs: [i64; 6]) -> Result<Self> {
        Self::new(CycloNumber::from_int(a), coeffs.map(CycloNumber::from_int))
    }

    /// Instance with every `c_i` zero.
    pub fn pure(a: CycloNumber) -> Result<Self> {
        Self::new(a, std::array::from_fn(|_| CycloNumber::zero()))
    }

    pub fn c0(&self) -> CycloNumber {
        self.a.pow(3)
    }

    /// Leading coefficients `a, w a, w^2 a` of the three Laurent branches.
    pub fn residues(&self) -> [CycloNumber; 3] {
        cube_roots_of(&self.a)
    }

    pub fn coefficients(&self) -> [(&'static str, &CycloNumber); 6] {
        [("c1", &self.c1), ("c2", &self.c2), ("c4", &self.c4), ("c5", &self.c5), ("c6", &self.c6), ("c7", &self.c7)]
    }

    pub fn coefficient_mut(&mut self, name: &str) -> Option<&mut CycloNumber> {
        match name {
            "c1" => Some(&mut self.c1),
            "c2" => Some(&mut self.c2),
            "c4" => Some(&mut self.c4),
            "c5" => Some(&mut self.c5),
            "c6" => Some(&mut self.c6),
            "c7" => Some(&mut self.c7),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_defaults_missing_coefficients() {
        let o: OdeInstance = serde_json::from_str(r#"{"a":"1","c5":"-16","c7":"2"}"#).unwrap();
        assert_eq!(o.c5, CycloNumber::from_int(-16));
        assert!(o.c1.is_zero());
        assert_eq!(o.c0(), CycloNumber::from_int(1));
    }

    #[test]
    fn rejects_zero_a() {
        assert!(OdeInstance::from_ints(0, [0; 6]).is_err());
        assert!(serde_json::from_str::<OdeInstance>(r#"{"a":"0"}"#).is_err());
        assert!(serde_json::from_str::<OdeInstance>(r#"{"a":"1","c3":"1"}"#).is_err());
    }
}
