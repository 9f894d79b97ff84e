//! Rank histogram of the Kirillov form over random covectors, per family.

use korbit::{default_params, md_scan, FamilyId};

fn main() -> korbit::Result<()> {
    let n = 20_000;
    for family in FamilyId::ALL {
        let report = md_scan(family, default_params(family), n, 42)?;
        let hist: Vec<String> = report.histogram.iter().map(|(r, c)| format!("rank {r}: {c}")).collect();
        println!(
            "{:<7} {}  {}",
            family.tag(),
            hist.join(", "),
            if report.passed() { "ok" } else { "VIOLATIONS" }
        );
    }
    Ok(())
}
