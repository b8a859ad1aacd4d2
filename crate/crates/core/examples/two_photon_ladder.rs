// Two-photon coincidence shunts: the exact integer ladder, its
// Fibonacci/Lucas closed form, and what loading does to it.

use shuntmux::designer::{design_up_to, two_photon_units};
use shuntmux::{ApplicationMode, DesignRequest, ExtReal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("k   units  ratio");
    let mut prev = None;
    for k in 1..=16 {
        let u = two_photon_units(k)?;
        let ratio = prev.map(|p: u128| u as f64 / p as f64);
        println!("{k:<3} {u:>6}  {}", ratio.map_or("-".into(), |r| format!("{r:.4}")));
        prev = Some(u);
    }

    let req = DesignRequest::new(ApplicationMode::Coincidence(2), 16, 2.0, 1.0 / 50.0, ExtReal::Infinite);
    let (prefix, stop) = design_up_to(&req);
    if let Some(d) = prefix {
        println!("loaded (Y = 20 mS): {} elements, last r = {:.2} Ohm", d.n(), d.shunts[d.n() - 1]);
    }
    if let Some(e) = stop {
        println!("stopped: {e}");
    }
    Ok(())
}
