//! Exact arithmetic in Q(w), w^2 + w + 1 = 0.

use subeq_lab::cyclofield::cube_roots_of;
use subeq_lab::CycloNumber;

fn main() -> subeq_lab::Result<()> {
    let w = CycloNumber::omega();
    let x: CycloNumber = "3/2 - 2w".parse()?;
    println!("w^2 = {}", w.pow(2));
    println!("w^3 = {}", w.pow(3));
    println!("x = {x}, norm {}, inverse {}", x.norm(), x.inverse()?);
    println!("x * conj(x) = {}", &x * &x.conj());
    let c0 = CycloNumber::from_int(8);
    let roots = cube_roots_of(&CycloNumber::from_int(2));
    println!("residues for c0 = {c0}: {}", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "));
    Ok(())
}
