// Full detection: a binary-weighted ladder where every switching pattern
// lands on its own multiple of dV.

use shuntmux::designer::design_full;
use shuntmux::{verify, ApplicationMode, ArraySpec, CircuitParams, DesignRequest, ExtReal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 5;
    let d = design_full(&DesignRequest::ideal(ApplicationMode::Full, n, 1.0))?;
    println!("shunts: {:?}", d.shunts);

    let array = ArraySpec::from_shunts(&d.shunts, ExtReal::Infinite)?;
    let params = CircuitParams::ideal(1.0, 1.0)?;
    let report = verify(&array, &params, ApplicationMode::Full)?;
    for band in report.bands.iter().take(8) {
        println!("{:>4.1} V  {}", band.min, band.label);
    }
    println!("... {} patterns in total, pass = {}", report.bands.len(), report.pass);
    Ok(())
}
