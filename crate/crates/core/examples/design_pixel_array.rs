// Design a 6-detector pixel array under bias loading and a finite normal
// resistance, then check it exhaustively.

use shuntmux::{design, verify, ApplicationMode, ArraySpec, CircuitParams, DesignRequest, ExtReal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (delta_r, y, r_n) = (2.0, 1.0 / 50.0, ExtReal::Finite(1000.0));
    let req = DesignRequest::new(ApplicationMode::PixelArray, 6, delta_r, y, r_n);
    let d = design(&req)?;
    println!("feasibility limit m_L = {}", d.feasible_limit);
    for (k, (r, rp)) in d.shunts.iter().zip(&d.parallels).enumerate() {
        println!("r_{} = {r:8.3} Ohm   (parallel with R_N: {rp:.3} Ohm)", k + 1);
    }

    let array = ArraySpec::from_shunts(&d.shunts, r_n)?;
    let params = CircuitParams::from_resolution(delta_r, y)?;
    let report = verify(&array, &params, req.mode)?;
    println!(
        "{} classes, min gap {:.6} V, pass = {}",
        report.bands.len(),
        report.min_inter_class_gap,
        report.pass
    );
    assert!(report.pass);
    Ok(())
}
