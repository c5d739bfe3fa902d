//! Property tests across modules: fits, classification and closed forms.

use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;
use subeq_lab::laurent::expand_laurent;
use subeq_lab::solutions::{
    build_closed_form, classify_family, s1_instance, s2a_instance, s2b_instance, s3a_instance, s3b_instance,
    BuildOptions, Family, VerifyConfig,
};
use subeq_lab::subeq::{fit_subequation, FitStatus, Subequation, DEFAULT_EXTRA_ORDERS};
use subeq_lab::{CycloNumber, OdeInstance};

fn rational(max: i64) -> impl Strategy<Value = CycloNumber> {
    (-max..=max, 1i64..=4).prop_map(|(n, d)| CycloNumber::from_frac(n, d))
}

fn nonzero(max: i64) -> impl Strategy<Value = CycloNumber> {
    rational(max).prop_filter("nonzero", |c| *c != CycloNumber::from_int(0))
}

fn residue() -> impl Strategy<Value = CycloNumber> {
    prop_oneof![Just("1"), Just("2"), Just("1/2"), Just("-1"), Just("1+w")].prop_map(|s| s.parse().unwrap())
}

fn nonzero_terms(s: &Subequation) -> BTreeMap<(u32, u32), CycloNumber> {
    s.coeffs().iter().filter(|(_, c)| **c != CycloNumber::from_int(0)).map(|(k, c)| (*k, c.clone())).collect()
}

fn fitted(ode: &OdeInstance, m: u32, branches: Option<&[usize]>) -> Subequation {
    let fit = fit_subequation(ode, m, branches, DEFAULT_EXTRA_ORDERS).unwrap();
    assert_eq!(fit.status, FitStatus::Fitted, "{fit:?}");
    fit.subequation.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_ignores_branch_order(a in residue(), k5sq in rational(3), k6 in rational(3)) {
        // k5 = k6 = 0 is the cube of a Riccati equation
        prop_assume!(!(k5sq.is_zero() && k6.is_zero()));
        let ode = s3b_instance(&a, &k5sq, &k6).unwrap();
        let one = fitted(&ode, 3, Some(&[0, 1, 2]));
        let other = fitted(&ode, 3, Some(&[2, 0, 1]));
        prop_assert_eq!(one, other);
    }

    #[test]
    fn fitted_subequation_holds_beyond_fitted_orders(a in residue(), k1 in rational(3), k6 in rational(3)) {
        // on k6 = -12 k1^3 the cubic has a Riccati factor
        prop_assume!(k6 != CycloNumber::from_int(-12) * k1.pow(3));
        let ode = s3a_instance(&a, &k1, &k6).unwrap();
        let s = fitted(&ode, 3, None);
        for r in ode.residues() {
            let u = expand_laurent(&ode, &r, 30).unwrap();
            prop_assert!(s.residual(&u).unwrap().is_zero());
        }
    }

    #[test]
    fn s2a_fit_has_canonical_form(a in residue(), k1 in rational(3), b2 in nonzero(4)) {
        let ode = s2a_instance(&a, &k1, &b2).unwrap();
        prop_assume!(k1.pow(2) != b2);
        let s = fitted(&ode, 2, None);
        // u = v - k1/2
        let shifted = s.shift(&(k1.clone() * CycloNumber::from_frac(-1, 2))).normalized();
        // (a v' - (v^2 - b^2)/2)^2 + 3/4 (v^2 - b^2)(v - k1)^2
        let half = CycloNumber::from_frac(1, 2);
        let q = |x: &CycloNumber| x.clone() * CycloNumber::from_frac(3, 4);
        let mut canon: BTreeMap<(u32, u32), CycloNumber> = BTreeMap::new();
        let mut add = |k: (u32, u32), c: CycloNumber| {
            let e = canon.entry(k).or_insert_with(|| CycloNumber::from_int(0));
            *e += &c;
        };
        add((0, 2), a.pow(2));
        add((2, 1), -a.clone());
        add((0, 1), a.clone() * b2.clone());
        add((4, 0), half.pow(2));
        add((2, 0), -(half.clone() * b2.clone()));
        add((0, 0), half.pow(2) * b2.pow(2));
        // 3/4 (v^2 - b^2)(v^2 - 2 k1 v + k1^2)
        add((4, 0), q(&CycloNumber::from_int(1)));
        add((3, 0), q(&(CycloNumber::from_int(-2) * k1.clone())));
        add((2, 0), q(&(k1.pow(2) - b2.clone())));
        add((1, 0), q(&(CycloNumber::from_int(2) * k1.clone() * b2.clone())));
        add((0, 0), q(&-(k1.pow(2) * b2.clone())));
        let canon = Subequation::new(2, canon).unwrap().normalized();
        prop_assert_eq!(nonzero_terms(&shifted), nonzero_terms(&canon));
    }

    #[test]
    fn classification_survives_rotating_the_residue(a in residue(), c1 in rational(3), c2 in rational(3)) {
        let w = CycloNumber::omega();
        for r in [a.clone(), w.clone() * a.clone(), w.pow(2) * a.clone()] {
            let ode = s2b_instance(&r, &c1, &c2).unwrap();
            let b = (c2.clone() * r.clone() + CycloNumber::from_int(2) * c1.clone()).is_zero();
            if !b {
                let cl = classify_family(&ode);
                prop_assert!(cl.matches.iter().any(|m| m.family() == Family::S2B));
            }
        }
    }

    #[test]
    fn built_closed_forms_verify(a in residue(), c1 in rational(3), c2 in rational(3), c4 in rational(3), c5 in rational(3)) {
        let ode = s1_instance(&a, &c1, &c2, &c4, &c5).unwrap();
        let params = classify_family(&ode).matches.into_iter().find(|m| m.family() == Family::S1).unwrap();
        let fit = fit_subequation(&ode, 1, None, DEFAULT_EXTRA_ORDERS).unwrap();
        let built = build_closed_form(&ode, &params, Some(&fit), &BuildOptions::default(), &VerifyConfig::default()).unwrap();
        prop_assert!(built.verification.passed, "{:?}", built.verification);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn perturbing_one_coefficient_breaks_the_degree_three_fit(
        k1 in nonzero(3), k6 in rational(3), which in 0usize..6, delta in nonzero(2),
    ) {
        let mut ode = s3a_instance(&CycloNumber::from_int(1), &k1, &k6).unwrap();
        let name = ["c1", "c2", "c4", "c5", "c6", "c7"][which];
        *ode.coefficient_mut(name).unwrap() += &delta;
        // moving c6 alone stays inside the family
        prop_assume!(name != "c6");
        let fit = fit_subequation(&ode, 3, None, DEFAULT_EXTRA_ORDERS).unwrap();
        prop_assert_ne!(fit.status, FitStatus::Fitted);
    }
}
