//! Finite atom number: a Dicke spin in the symmetric subspace approaches the
//! bosonized result as the atom number grows.

use spinwave_entangler::oracle::check::dicke_convergence;

fn main() -> spinwave_entangler::Result<()> {
    for (n_atoms, a) in dicke_convergence()? {
        println!(
            "N_a = {n_atoms:>3}  V_oracle = {:.6}  V_gaussian = {:.6}  |ΔV| = {:.3e}",
            a.oracle.point.duan,
            a.gaussian.duan,
            a.max_discrepancy()
        );
    }
    Ok(())
}
