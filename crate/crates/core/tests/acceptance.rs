//! Acceptance criteria 1-8. Runs without the test harness so every criterion
//! prints exactly one line; the process fails if any criterion does.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subeq_lab::laurent::{check_fuchs_indices, expand_laurent, indicial_polynomial, ode_residual};
use subeq_lab::poly::Poly;
use subeq_lab::residues::enumerate_conditions;
use subeq_lab::solutions::{
    build_closed_form, classify_family, nearest_residues, s1_instance, s2a_instance, s2b_instance, s3a_instance,
    s3b_instance, verify_numeric, BuildOptions, BuiltSolution, ClosedForm, Family, Param, VerifyConfig, Weierstrass,
};
use subeq_lab::subeq::{fit_subequation, FitStatus, Subequation, DEFAULT_EXTRA_ORDERS};
use subeq_lab::{CycloNumber, OdeInstance};

type Outcome = Result<String, String>;

fn c(s: &str) -> CycloNumber {
    s.parse().unwrap()
}

fn int(n: i64) -> CycloNumber {
    CycloNumber::from_int(n)
}

fn rational(rng: &mut ChaCha8Rng, max: i64) -> CycloNumber {
    CycloNumber::from_frac(rng.gen_range(-max..=max), rng.gen_range(1..=5))
}

fn nonzero(rng: &mut ChaCha8Rng, max: i64) -> CycloNumber {
    loop {
        let x = rational(rng, max);
        if !x.is_zero() {
            return x;
        }
    }
}

fn pick_a(rng: &mut ChaCha8Rng) -> CycloNumber {
    ["1", "2", "1/2", "-1"].map(c)[rng.gen_range(0..4)].clone()
}

fn random_instances(seed: u64, count: usize) -> Vec<OdeInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = pick_a(&mut rng);
            let coeffs = std::array::from_fn(|_| rational(&mut rng, 9));
            OdeInstance::new(a, coeffs).unwrap()
        })
        .collect()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:.2?}, limit {limit:?}");
    Ok(t)
}

fn indicial() -> Outcome {
    let start = Instant::now();
    // (r + 1)(r^2 - 7 r + 18)
    let expect = Poly::from_ints(&[18, 11, -6, 1]);
    for ode in random_instances(11, 50) {
        for r in ode.residues() {
            let p = indicial_polynomial(&ode, &r).map_err(|e| e.to_string())?;
            ensure!(p == expect, "{p} for {ode:?}");
            ensure!(check_fuchs_indices(&p).integer_roots == vec![-1], "integer roots of {p}");
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("50 instances x 3 branches in {t:.2?}"))
}

fn laurent_recurrence() -> Outcome {
    let start = Instant::now();
    for ode in random_instances(11, 50) {
        for r in ode.residues() {
            let u = expand_laurent(&ode, &r, 30).map_err(|e| e.to_string())?;
            ensure!(ode_residual(&u, &ode).map_err(|e| e.to_string())?.is_zero(), "residual for {ode:?}, r = {r}");
            ensure!(u.coeff(-1).unwrap() == r, "u_-1 for {ode:?}");
            // u0 = (-2 c1 r + c2 r^2) / (24 c0)
            let u0 = (-(int(2) * ode.c1.clone() * r.clone()) + ode.c2.clone() * r.pow(2)) / (int(24) * ode.c0());
            ensure!(u.coeff(0).unwrap() == u0, "u_0 for {ode:?}, r = {r}");
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("150 depth-30 series, residual identically zero, in {t:.2?}"))
}

fn residue_conditions() -> Outcome {
    let start = Instant::now();
    let inst = |c: [i64; 6]| OdeInstance::from_ints(1, c).unwrap();
    // c1, c2, c4, c5, c6, c7
    let families: [(&str, OdeInstance, Vec<(&str, OdeInstance)>); 3] = [
        ("A", inst([0, 0, 0, -16, 4, 2]), vec![
            ("c1", inst([1, 0, 0, -16, 4, 2])),
            ("c2", inst([0, 1, 0, -16, 4, 2])),
            ("c4", inst([0, 0, 1, -16, 4, 2])),
            ("c7", inst([0, 0, 0, -16, 4, 3])),
        ]),
        ("B", inst([0, 0, 0, 0, 0, 3]), vec![
            ("c1", inst([1, 0, 0, 0, 0, 3])),
            ("c2", inst([0, 1, 0, 0, 0, 3])),
            ("c4", inst([0, 0, 1, 0, 0, 3])),
            ("c6", inst([0, 0, 0, 0, 1, 3])),
        ]),
        ("C", inst([12, 0, 12, 0, 5, 0]), vec![
            ("c2", inst([12, 1, 12, 0, 5, 0])),
            ("c4", inst([12, 0, 13, 0, 5, 0])),
            ("c5", inst([12, 0, 12, 1, 5, 0])),
            ("c7", inst([12, 0, 12, 0, 5, 1])),
        ]),
    ];
    let mut flips = 0;
    for (name, ode, flipped) in &families {
        let v = enumerate_conditions(ode, 4, 10).map_err(|e| e.to_string())?;
        ensure!(v.is_empty(), "family {name}: {} violated, first ({}, {})", v.len(), v[0].k, v[0].n);
        for (what, bad) in flipped {
            let v = enumerate_conditions(bad, 4, 10).map_err(|e| e.to_string())?;
            ensure!(!v.is_empty(), "family {name} with {what} flipped has no violation");
            if !bad.c2.is_zero() {
                ensure!((v[0].k, v[0].n) == (0, 2), "family {name}, {what}: first ({}, {})", v[0].k, v[0].n);
            }
            flips += 1;
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("3 families clean for k <= 4, n <= 10; {flips} flips all violate; {t:.2?}"))
}

fn fitted(ode: &OdeInstance, m: u32) -> Result<Subequation, String> {
    let fit = fit_subequation(ode, m, None, DEFAULT_EXTRA_ORDERS).map_err(|e| e.to_string())?;
    ensure!(fit.status == FitStatus::Fitted, "degree {m} fit of {ode:?}: {:?}", fit.status);
    let s = fit.subequation.unwrap();
    // every consistency order, on each fitted branch
    for r in fit.branches.iter().map(|&i| ode.residues()[i].clone()) {
        let u = expand_laurent(ode, &r, 2 * m as usize + 14).map_err(|e| e.to_string())?;
        ensure!(s.residual(&u).map_err(|e| e.to_string())?.is_zero(), "degree {m} residual on r = {r} for {ode:?}");
    }
    Ok(s)
}

fn family_instances(rng: &mut ChaCha8Rng) -> Vec<(u32, OdeInstance)> {
    let mut out = Vec::new();
    for _ in 0..5 {
        let a = pick_a(rng);
        let (k1, k6) = loop {
            let (k1, k6) = (nonzero(rng, 4), rational(rng, 4));
            // k6 = -12 k1^3 makes the subequation reducible
            if k6 != int(-12) * k1.pow(3) {
                break (k1, k6);
            }
        };
        out.push((3, s3a_instance(&a, &k1, &k6).unwrap()));
        out.push((3, s3b_instance(&a, &nonzero(rng, 4), &rational(rng, 4)).unwrap()));
        let (k1, b2) = loop {
            let (k1, b2) = (rational(rng, 4), nonzero(rng, 4));
            if k1.pow(2) != b2 {
                break (k1, b2);
            }
        };
        out.push((2, s2a_instance(&a, &k1, &b2).unwrap()));
        let (c1, c2) = loop {
            let (c1, c2) = (rational(rng, 4), rational(rng, 4));
            if !(int(2) * c1.clone() + a.clone() * c2.clone()).is_zero() {
                break (c1, c2);
            }
        };
        out.push((2, s2b_instance(&a, &c1, &c2).unwrap()));
        let [c1, c2, c4, c5] = std::array::from_fn(|_| rational(rng, 4));
        out.push((1, s1_instance(&a, &c1, &c2, &c4, &c5).unwrap()));
    }
    out
}

fn fit_direction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let instances = family_instances(&mut rng);
    for (m, ode) in &instances {
        fitted(ode, *m)?;
    }
    let generic = random_instances(44, 100);
    for ode in &generic {
        for m in 1..=3 {
            let fit = fit_subequation(ode, m, None, DEFAULT_EXTRA_ORDERS).map_err(|e| e.to_string())?;
            ensure!(fit.status == FitStatus::Infeasible, "generic {ode:?} at degree {m}: {:?}", fit.status);
        }
    }
    let t = within(start, Duration::from_secs(300))?;
    Ok(format!("{} family instances fitted, {} generic instances infeasible at degrees 1-3, {t:.2?}", instances.len(), generic.len()))
}

fn fitted_forms() -> Outcome {
    // (u')^3 + (u^3 - 3 u)^2 = u'^3 + u^6 - 6 u^4 + 9 u^2
    let ode = s3b_instance(&int(1), &int(1), &int(0)).map_err(|e| e.to_string())?;
    let s = fitted(&ode, 3)?.normalized();
    let expect: BTreeMap<(u32, u32), CycloNumber> =
        [((0, 3), int(1)), ((6, 0), int(1)), ((4, 0), int(-6)), ((2, 0), int(9))].into_iter().collect();
    ensure!(s.coeffs() == &expect, "binomial fit {:?}", s.coeffs());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let a = pick_a(&mut rng);
        let [c1, c2, c4, c5] = std::array::from_fn(|_| rational(&mut rng, 6));
        let ode = s1_instance(&a, &c1, &c2, &c4, &c5).map_err(|e| e.to_string())?;
        let s = fitted(&ode, 1)?;
        let lead = s.coeff(2, 0);
        let (b1, b0) = (s.coeff(1, 0) / lead.clone(), s.coeff(0, 0) / lead.clone());
        ensure!(s.coeff(0, 1) / lead == a, "u' coefficient for {ode:?}");
        let b1_ref = (int(2) * c1.clone() - a.clone() * c2.clone()) / (int(12) * a.pow(2));
        let b0_ref = (int(44) * c1.pow(2) - int(32) * a.clone() * c1.clone() * c2.clone()
            + int(5) * a.pow(2) * c2.pow(2)
            - int(144) * a.pow(3) * c4.clone()
            + int(144) * a.pow(4) * c5.clone())
            / (int(1152) * a.pow(4));
        ensure!(b1 == b1_ref && b0 == b0_ref, "riccati coefficients ({b1}, {b0}) for {ode:?}");
    }
    Ok("binomial fit is u'^3 + (u^3 - 3u)^2; 5 Riccati fits match b1, b0".into())
}

fn weierstrass() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let mut cx = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (g2, g3) = (cx(), cx());
        let w = Weierstrass::new(g2, g3);
        let radius = w.r_conv().min(10.0);
        for _ in 0..100 {
            let z = Complex64::from_polar(radius * rng.gen_range(0.01..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let (p, dp) = w.eval(z).map_err(|e| e.to_string())?;
            let d2 = w.second_derivative(z).map_err(|e| e.to_string())?;
            let rhs = 4.0 * p * p * p - g2 * p - g3;
            let scale = (dp * dp).norm() + (4.0 * p * p * p).norm() + (g2 * p).norm() + g3.norm();
            worst1 = worst1.max((dp * dp - rhs).norm() / scale);
            let rhs2 = 6.0 * p * p - g2 / 2.0;
            let scale2 = d2.norm() + (6.0 * p * p).norm() + (g2 / 2.0).norm();
            worst2 = worst2.max((d2 - rhs2).norm() / scale2);
        }
    }
    ensure!(worst1 <= 1e-10 && worst2 <= 1e-9, "max relative errors {worst1:.2e}, {worst2:.2e}");
    Ok(format!("1000 points, max relative errors {worst1:.1e} (p'^2) and {worst2:.1e} (p'')"))
}

fn build(ode: &OdeInstance, family: Family, e0: Option<CycloNumber>) -> Result<BuiltSolution, String> {
    let cl = classify_family(ode);
    let params = cl.matches.iter().find(|m| m.family() == family).ok_or(format!("{family} does not match {ode:?}"))?;
    let fit = fit_subequation(ode, family.degree(), None, DEFAULT_EXTRA_ORDERS).map_err(|e| e.to_string())?;
    let opts = BuildOptions { e0, z0: Complex64::new(0.1, -0.05), ..Default::default() };
    build_closed_form(ode, params, Some(&fit), &opts, &VerifyConfig::default()).map_err(|e| e.to_string())
}

fn corrupt(form: &ClosedForm) -> ClosedForm {
    let nudge = |p: &Param| Param::float(p.complex() + 1e-3);
    let mut bad = form.clone();
    match &mut bad {
        ClosedForm::EllipticBinomial { e0, .. } | ClosedForm::EllipticBb { e0, .. } => *e0 = nudge(e0),
        ClosedForm::ExpRational { constant, .. } | ClosedForm::Rational { constant, .. } => *constant = nudge(constant),
    }
    bad
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases: Vec<(&str, Family, OdeInstance, Option<CycloNumber>)> = Vec::new();
    for a in ["1", "2", "-1/2"].map(c) {
        let (k1, e0) = (nonzero(&mut rng, 3), nonzero(&mut rng, 3));
        let k6 = -(e0.pow(3) + int(20) * k1.pow(3));
        cases.push(("S3a", Family::S3a, s3a_instance(&a, &k1, &k6).unwrap(), Some(e0)));
        let (k5sq, e0) = (nonzero(&mut rng, 3), nonzero(&mut rng, 3));
        let k6 = int(3) * k5sq.clone() * e0.clone() - e0.pow(3);
        cases.push(("S3b", Family::S3b, s3b_instance(&a, &k5sq, &k6).unwrap(), Some(e0)));
        let (k1, b2) = (rational(&mut rng, 3), c("5/2"));
        cases.push(("S2A", Family::S2A, s2a_instance(&a, &k1, &b2).unwrap(), None));
        // the two degenerate branches k1 = b and k1 = -b
        let b = c("3/2");
        for k1 in [b.clone(), -b.clone()] {
            let ode = s2a_instance(&a, &k1, &b.pow(2)).unwrap();
            cases.push(("S2B via S2A", Family::S2A, ode.clone(), None));
            cases.push(("S2B", Family::S2B, ode, None));
        }
        cases.push(("S2B", Family::S2B, s2b_instance(&a, &int(1), &int(2)).unwrap(), None));
        let [c1, c2, c4, c5] = std::array::from_fn(|_| rational(&mut rng, 4));
        cases.push(("S1", Family::S1, s1_instance(&a, &c1, &c2, &c4, &c5).unwrap(), None));
    }
    // numeric roots of the cubic in e0
    cases.push(("S3b", Family::S3b, s3b_instance(&int(1), &int(1), &int(1)).unwrap(), None));
    let mut normalizations = Vec::new();
    let mut worst = 0.0f64;
    for (label, family, ode, e0) in &cases {
        let built = build(ode, *family, e0.clone())?;
        ensure!(built.verification.passed, "{label} for {ode:?}: {:?}", built.verification.max_rel_ode_residual);
        worst = worst.max(built.verification.max_rel_ode_residual.unwrap());
        let bad = verify_numeric(&corrupt(&built.form), ode, None, &VerifyConfig::default());
        ensure!(!bad.passed, "corrupted {label} passed for {ode:?}");
        if built.family == Family::S1 && matches!(built.form, ClosedForm::ExpRational { .. }) {
            normalizations.push(built.choice.clone());
        }
    }
    normalizations.dedup();
    ensure!(normalizations.len() == 1, "S1 normalizations {normalizations:?}, expected exactly one");
    Ok(format!("{} forms verified (max residual {worst:.1e}), corrupted controls fail, S1 uses {}", cases.len(), normalizations[0]))
}

fn elliptic_residues() -> Outcome {
    let cases = [
        s3b_instance(&c("1"), &c("1"), &c("-18")).map(|o| (o, c("3"))),
        s3b_instance(&c("2"), &c("1"), &c("-18")).map(|o| (o, c("3"))),
        s3a_instance(&c("1"), &c("1"), &c("-47")).map(|o| (o, c("3"))),
        s3a_instance(&c("1/2"), &c("1"), &c("-47")).map(|o| (o, c("3"))),
    ];
    let (mut worst_sum, mut worst_each) = (0.0f64, 0.0f64);
    for case in cases {
        let (ode, e0) = case.map_err(|e| e.to_string())?;
        let family = classify_family(&ode).family.ok_or("unclassified")?;
        let built = build(&ode, family, Some(e0))?;
        ensure!(built.form.is_elliptic(), "{ode:?} is not elliptic");
        let found = nearest_residues(&built.form, 3).map_err(|e| e.to_string())?;
        ensure!(found.len() == 3, "{} poles near z0 for {ode:?}", found.len());
        let res: Vec<Complex64> = found.iter().map(|p| Complex64::new(p.residue[0], p.residue[1])).collect();
        worst_sum = worst_sum.max(res.iter().sum::<Complex64>().norm());
        let a = ode.a.embed_complex();
        let w = CycloNumber::omega().embed_complex();
        let targets = [a, w * a, w * w * a];
        let mut hit = [false; 3];
        for r in &res {
            let (i, d) = targets.iter().enumerate().map(|(i, t)| (i, (r - t).norm())).min_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
            worst_each = worst_each.max(d);
            hit[i] = true;
        }
        ensure!(hit == [true; 3], "residues {res:?} for {ode:?} miss a cube root");
    }
    ensure!(worst_sum < 1e-8 && worst_each < 1e-6, "sum {worst_sum:.1e}, individual {worst_each:.1e}");
    Ok(format!("4 solutions: residue sums <= {worst_sum:.1e}, distance to a w^j <= {worst_each:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("indicial polynomial", indicial),
        ("Laurent recurrence", laurent_recurrence),
        ("residue conditions", residue_conditions),
        ("fit direction", fit_direction),
        ("fitted-form identity", fitted_forms),
        ("Weierstrass p", weierstrass),
        ("closed-form verification", closed_forms),
        ("elliptic residues", elliptic_residues),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
