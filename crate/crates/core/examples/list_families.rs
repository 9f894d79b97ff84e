//! Prints the eight families with their parameter domains and `ad X₂`.

use korbit::catalog;

fn main() {
    for entry in catalog() {
        println!("{}  params [{}]", entry.tag, entry.parameters.join(", "));
        if !entry.constraints.is_empty() {
            println!("  domain: {}", entry.constraints.join(", "));
        }
        for row in entry.ad_x2 {
            println!("  | {:>8} {:>8} {:>8} |", row[0], row[1], row[2]);
        }
    }
}
