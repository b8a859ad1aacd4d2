// Print the pixel-array and two-photon design tables for the three standard
// conditions: ideal, loaded, loaded with finite R_N.

use shuntmux::cli::tables::{pixel_table, summary_text, two_photon_table, Scenario};

fn main() {
    print!("{}", pixel_table(&Scenario::ALL).to_text());
    println!();
    print!("{}", two_photon_table(&Scenario::ALL).to_text());
    println!();
    print!("{}", summary_text());
}
