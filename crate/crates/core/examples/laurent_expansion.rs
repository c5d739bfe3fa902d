//! Laurent series at a movable pole, the indicial polynomial and the exact
//! check that the series solves the ODE.

use subeq_lab::laurent::{check_fuchs_indices, expand_branches, indicial_polynomial, ode_residual};
use subeq_lab::OdeInstance;

fn main() -> subeq_lab::Result<()> {
    let ode = OdeInstance::from_ints(2, [1, -3, 0, 5, 2, -1])?;
    let p = indicial_polynomial(&ode, &ode.a)?;
    println!("indicial polynomial: {p}");
    println!("Fuchs indices: {:?}", check_fuchs_indices(&p));
    for (i, u) in expand_branches(&ode, 12)?.iter().enumerate() {
        println!("branch {i}: {u}");
        println!("  ODE residual vanishes to the guaranteed order: {}", ode_residual(u, &ode)?.is_zero());
    }
    Ok(())
}
