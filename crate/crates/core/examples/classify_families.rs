//! Exact classification of coefficient tuples into the solution families.

use subeq_lab::solutions::{classify_family, s1_instance, s2a_instance};
use subeq_lab::{CycloNumber, OdeInstance};

fn main() -> subeq_lab::Result<()> {
    let c = |s: &str| s.parse::<CycloNumber>().unwrap();
    let instances = [
        OdeInstance::from_ints(1, [0, 0, 0, -16, 0, 2])?,
        OdeInstance::from_ints(1, [12, 0, 12, 0, 7, 0])?,
        s2a_instance(&c("2"), &c("1/3"), &c("5/2"))?,
        s1_instance(&c("1"), &c("1"), &c("2"), &c("0"), &c("-1"))?,
        OdeInstance::from_ints(1, [0; 6])?,
        OdeInstance::from_ints(1, [1; 6])?,
    ];
    for ode in &instances {
        let cl = classify_family(ode);
        println!("{}", serde_json::to_string(&cl).unwrap());
    }
    Ok(())
}
