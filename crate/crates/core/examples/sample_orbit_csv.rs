//! Writes a seeded orbit point cloud as CSV to standard output.
//!
//! Usage: `cargo run --example sample_orbit_csv -- [n] [seed]`

use korbit::{build_algebra, sample_orbit, CoVector, FamilyId, FamilyParams};

fn main() -> korbit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let alg = build_algebra(
        FamilyId::F8,
        FamilyParams::Rotation {
            lambda: 0.5,
            phi: 2.0 * std::f64::consts::FRAC_PI_3,
        },
    )?;
    let sample = sample_orbit(&alg, &CoVector::new(0.0, 0.0, 1.0, 0.5, 1.0), n, 2.0, seed)?;
    print!("{}", sample.to_csv());
    Ok(())
}
