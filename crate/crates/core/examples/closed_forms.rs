//! Build the closed-form solution of each family and verify it numerically.

use subeq_lab::solutions::{
    build_closed_form, classify_family, s1_instance, s2a_instance, s2b_instance, s3a_instance, s3b_instance,
    BuildOptions, VerifyConfig,
};
use subeq_lab::subeq::{fit_subequation, DEFAULT_EXTRA_ORDERS};
use subeq_lab::CycloNumber;

fn main() -> subeq_lab::Result<()> {
    let c = |s: &str| s.parse::<CycloNumber>().unwrap();
    let a = c("1");
    let instances = [
        (s3b_instance(&a, &c("1"), &c("-18"))?, Some(c("3"))),
        (s3a_instance(&a, &c("1"), &c("-47"))?, Some(c("3"))),
        (s2a_instance(&a, &c("1/2"), &c("3"))?, None),
        (s2b_instance(&a, &c("2"), &c("1"))?, None),
        (s1_instance(&a, &c("1"), &c("0"), &c("0"), &c("1"))?, None),
    ];
    for (ode, e0) in instances {
        let params = &classify_family(&ode).matches[0];
        let fit = fit_subequation(&ode, params.family().degree(), None, DEFAULT_EXTRA_ORDERS)?;
        let opts = BuildOptions { e0, ..Default::default() };
        let built = build_closed_form(&ode, params, Some(&fit), &opts, &VerifyConfig::default())?;
        let v = &built.verification;
        println!(
            "{}: {} [{}] passed={} ode={:.1e} subeq={:.1e}",
            built.family,
            built.form.name(),
            built.choice,
            v.passed,
            v.max_rel_ode_residual.unwrap_or(f64::NAN),
            v.max_rel_subeq_residual.unwrap_or(f64::NAN)
        );
        for r in &built.rejected {
            println!("    rejected {} (residual {:.1e})", r.description, r.max_rel_ode_residual.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
