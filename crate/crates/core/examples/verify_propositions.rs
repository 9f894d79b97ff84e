//! Checks every case of every family against sampled orbit points and lists
//! the displayed equations that had to be adjudicated.

use korbit::orbit::{case_count, verify_proposition, Adoption};
use korbit::{default_params, FamilyId};

fn main() -> korbit::Result<()> {
    let mut failed = 0;
    for family in FamilyId::ALL {
        for case in 1..=case_count(family) {
            let r = verify_proposition(family, default_params(family), case, 500, 7)?;
            if !r.passed {
                failed += 1;
            }
            println!(
                "{:<7} case {}  {:<10} residual {:.1e}  tangency {:.1e}  {}",
                family.tag(),
                case,
                r.shape.to_string(),
                r.max_residual,
                r.tangency_max,
                if r.passed { "pass" } else { "FAIL" }
            );
            for note in &r.provenance {
                let verdict = match note.adopted {
                    Adoption::Literal => "kept",
                    Adoption::Corrected => "replaced",
                };
                println!("    {verdict}: {}", note.equation);
                if note.adopted == Adoption::Corrected {
                    println!("        by: {}", note.adopted_equation);
                }
            }
        }
    }
    println!("{failed} failing case(s)");
    Ok(())
}
