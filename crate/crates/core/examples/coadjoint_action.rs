//! Moves a covector with `exp(ad U)` and compares the generic matrix
//! exponential with the per-family closed form.

use korbit::exp_action::exp_ad_closed_for;
use korbit::linalg::max_abs_diff;
use korbit::{build_algebra, coadjoint_move, exp_ad, orbit_dimension, AlgebraElement, CoVector, FamilyId, FamilyParams};

fn main() -> korbit::Result<()> {
    let alg = build_algebra(FamilyId::F1, FamilyParams::Pair { lambda1: 2.0, lambda2: 3.0 })?;
    let f = CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0);
    let u = AlgebraElement::new(0.0, std::f64::consts::LN_2, 0.0, 0.0, 0.0);

    let moved = coadjoint_move(&alg, &f, &u);
    println!("F     = {f}");
    println!("F_U   = {moved}");
    println!("dim   = {} -> {}", orbit_dimension(&alg, &f), orbit_dimension(&alg, &moved));

    let u = AlgebraElement::new(0.7, -1.2, 0.3, 1.9, -0.4);
    let generic = exp_ad(&alg, &u);
    let closed = exp_ad_closed_for(&alg, &u);
    println!("|exp_ad - closed form|_max = {:.3e}", max_abs_diff(&generic.m, &closed.m));
    Ok(())
}
