//! Orbit descriptions for a few covectors, with membership of moved points.

use korbit::orbit::jacobian_rank_check;
use korbit::{build_algebra, classify_orbit, coadjoint_move, default_params, AlgebraElement, CoVector, FamilyId};

fn main() -> korbit::Result<()> {
    let examples = [
        (FamilyId::F1, CoVector::new(1.0, 2.0, 0.0, 0.0, 0.0)),
        (FamilyId::F1, CoVector::new(0.0, 0.0, 0.0, 1.0, 1.0)),
        (FamilyId::F4, CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0)),
        (FamilyId::F6, CoVector::new(0.5, 0.0, -2.0, 1.0, 3.0)),
        (FamilyId::F7, CoVector::new(0.0, 1.0, 1.0, 0.0, 0.0)),
        (FamilyId::F8, CoVector::new(0.0, 0.0, 1.0, -1.0, 0.0)),
    ];
    let u = AlgebraElement::new(0.4, 0.9, -0.3, 1.1, 0.2);
    for (family, f) in examples {
        let params = default_params(family);
        let alg = build_algebra(family, params)?;
        let desc = classify_orbit(family, params, &f)?;
        println!("{desc}");
        let p = coadjoint_move(&alg, &f, &u);
        print!("moved point {p} member: {}", desc.is_member(&p, 1e-8));
        if desc.dim == 2 {
            print!(", jacobian rank {}", jacobian_rank_check(&desc, &p)?);
        }
        println!("\n");
    }
    Ok(())
}
