// Verify a design, then decode noisy readouts back to the detectors that fired.

use shuntmux::verifier::simulate_seeded;
use shuntmux::{design, ApplicationMode, ArraySpec, CircuitParams, Decoder, DesignRequest, ExtReal, SwitchingState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mode = ApplicationMode::Coincidence(2);
    let n = 6;
    let d = design(&DesignRequest::ideal(mode, n, 1.0))?;
    let array = ArraySpec::from_shunts(&d.shunts, ExtReal::Infinite)?;
    let params = CircuitParams::ideal(1.0, 1.0)?;
    let decoder = Decoder::new(&array, &params, mode)?;
    println!("shunts {:?}, min gap {} V", d.shunts, decoder.report().min_inter_class_gap);

    for (seed, fired) in [&[2usize][..], &[1, 4], &[3, 6], &[]].iter().enumerate() {
        let state = SwitchingState::from_detectors(n, fired)?;
        let v = simulate_seeded(&array, &params, &state, 0.45, seed as u64)?;
        let got = decoder.decode(v)?;
        println!("fired {fired:?}: read {v:.3} V -> {} (margin {:.3} V)", got.label, got.margin);
    }
    Ok(())
}
