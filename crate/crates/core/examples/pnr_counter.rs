// Photon-number resolving array: identical shunts, and why loading makes
// the count levels crowd together.

use shuntmux::designer::design_pnr;
use shuntmux::{verify, ApplicationMode, ArraySpec, CircuitParams, DesignRequest, ExtReal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ideal = design_pnr(&DesignRequest::ideal(ApplicationMode::Pnr, 24, 2.0))?;
    println!("ideal: every shunt {:.2} Ohm", ideal.shunts[0]);

    let req = DesignRequest::new(ApplicationMode::Pnr, 16, 2.0, 1.0 / 50.0, ExtReal::Finite(1600.0));
    let loaded = design_pnr(&req)?;
    println!("loaded (Y = 20 mS, R_N = 1600 Ohm): every shunt {:.4} Ohm", loaded.shunts[0]);

    let array = ArraySpec::from_shunts(&loaded.shunts, req.r_n)?;
    let params = CircuitParams::from_resolution(req.delta_r, req.y)?;
    let report = verify(&array, &params, ApplicationMode::Pnr)?;
    println!(
        "smallest count-to-count gap: {:.3} dV (pass = {})",
        report.min_gap_ratio(),
        report.pass
    );
    for pair in report.bands.windows(2).take(3) {
        println!("  {} -> {}: {:.4} V", pair[0].label, pair[1].label, pair[1].min - pair[0].max);
    }
    Ok(())
}
