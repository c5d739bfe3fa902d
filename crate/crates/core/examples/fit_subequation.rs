//! Fit first-order subequations of degree 1, 2 and 3 to the Laurent branches.

use subeq_lab::solutions::{s2b_instance, s3b_instance};
use subeq_lab::subeq::{distinct_series_count, fit_subequation, DEFAULT_EXTRA_ORDERS};
use subeq_lab::{CycloNumber, OdeInstance};

fn main() -> subeq_lab::Result<()> {
    let c = |s: &str| s.parse::<CycloNumber>().unwrap();
    let cases = [
        ("binomial elliptic", s3b_instance(&c("1"), &c("1"), &c("0"))?, 3),
        ("degree two", s2b_instance(&c("1"), &c("2"), &c("-1"))?, 2),
        ("generic", OdeInstance::from_ints(1, [1; 6])?, 3),
    ];
    for (name, ode, m) in cases {
        let fit = fit_subequation(&ode, m, None, DEFAULT_EXTRA_ORDERS)?;
        print!("{name}, degree {m}: {:?}", fit.status);
        if let Some(s) = &fit.subequation {
            print!(": {} ({} branches)", s.normalized(), distinct_series_count(s)?);
        }
        if let Some(j) = fit.violated_order {
            print!(" (first inconsistent order F_{j})");
        }
        println!();
    }
    Ok(())
}
