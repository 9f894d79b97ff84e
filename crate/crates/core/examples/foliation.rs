//! Leaf-partition check for each family, then plaque charts along one orbit.

use korbit::foliation::{plaque_chart, triviality_scan};
use korbit::orbit::classify_for;
use korbit::{build_algebra, default_params, partition_check, CoVector, FamilyId};

fn main() -> korbit::Result<()> {
    for family in FamilyId::ALL {
        let r = partition_check(family, default_params(family), 100, 3)?;
        println!(
            "{:<7} generic {:>5}/{}  equal {:>3}  disjoint {:>3}  min separation {:.2e}  failures {}",
            family.tag(),
            r.generic,
            r.n,
            r.pairs_equal,
            r.pairs_disjoint,
            r.min_separation,
            r.failures.len()
        );
    }

    let alg = build_algebra(FamilyId::F1, default_params(FamilyId::F1))?;
    let base = CoVector::new(0.0, 0.0, 1.0, 1.0, 1.0);
    let desc = classify_for(&alg, &base, 0.0);
    let names = ["x", "y", "z", "t", "s"];
    if let Some([i, j]) = plaque_chart(&desc, &base)? {
        println!("chart at base: free coordinates ({}, {})", names[i], names[j]);
    }
    let scan = triviality_scan(&alg, &base, 100, 5)?;
    println!("charts missing at {} of {} sampled points", scan.failures.len(), scan.n);
    Ok(())
}
