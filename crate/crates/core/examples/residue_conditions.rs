//! Residue-sum conditions: they all vanish on the elliptic families and
//! break as soon as a defining equality is perturbed.

use subeq_lab::residues::{enumerate_conditions, match_elliptic_families};
use subeq_lab::OdeInstance;

fn main() -> subeq_lab::Result<()> {
    let binomial = OdeInstance::from_ints(1, [0, 0, 0, -16, 3, 2])?;
    let violated = enumerate_conditions(&binomial, 4, 10)?;
    println!("family {:?}: {} conditions violated", match_elliptic_families(&binomial), violated.len());
    let perturbed = OdeInstance::from_ints(1, [0, 1, 0, -16, 3, 2])?;
    let violated = enumerate_conditions(&perturbed, 4, 10)?;
    if let Some(first) = violated.first() {
        println!("c2 = 1: {} conditions violated, first (k={}, n={}) = {}", violated.len(), first.k, first.n, first.value);
    }
    Ok(())
}
