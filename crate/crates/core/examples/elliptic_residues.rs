//! Poles of an elliptic solution near its centre and their residues, which
//! are a, w a, w^2 a and sum to zero.

use num_complex::Complex64;
use subeq_lab::solutions::{build_closed_form, classify_family, nearest_residues, s3b_instance, BuildOptions, VerifyConfig};
use subeq_lab::CycloNumber;

fn main() -> subeq_lab::Result<()> {
    let c = |s: &str| s.parse::<CycloNumber>().unwrap();
    let ode = s3b_instance(&c("2"), &c("1"), &c("-18"))?;
    let opts = BuildOptions { e0: Some(c("3")), ..Default::default() };
    let built = build_closed_form(&ode, &classify_family(&ode).matches[0], None, &opts, &VerifyConfig::default())?;
    let mut total = Complex64::new(0.0, 0.0);
    for p in nearest_residues(&built.form, 3)? {
        let r = Complex64::new(p.residue[0], p.residue[1]);
        total += r;
        println!("pole {:.6}{:+.6}i residue {r:.10}", p.location[0], p.location[1]);
    }
    println!("sum of residues {total:.2e}");
    Ok(())
}
