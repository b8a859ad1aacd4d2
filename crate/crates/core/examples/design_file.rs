// Write a design to TOML, read it back and verify it from the file alone.

use shuntmux::cli::file::{DesignFile, ParamSpec};
use shuntmux::{design, verify, ApplicationMode, DesignRequest, ExtReal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let req = DesignRequest::new(ApplicationMode::PixelArray, 4, 2.0, 0.02, ExtReal::Finite(1000.0));
    let d = design(&req)?;
    let params = ParamSpec {
        delta_r_ohm: Some(req.delta_r),
        y_siemens: Some(req.y),
        ..ParamSpec::default()
    };
    let text = DesignFile::new(req.mode, &params, req.r_n, d.shunts).render();
    print!("{text}");

    let file = DesignFile::parse(&text)?;
    let report = verify(&file.array()?, &file.params().resolve()?, file.mode()?)?;
    println!("reloaded: pass = {}", report.pass);
    Ok(())
}
