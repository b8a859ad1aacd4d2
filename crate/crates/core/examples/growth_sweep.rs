// How fast shunts grow with array size, as CSV.

use shuntmux::cli::tables::{sweep_csv, Series, SweepSpec};

fn main() {
    let spec = SweepSpec {
        series: vec![Series::Pixel, Series::Coincidence(2), Series::Coincidence(3), Series::Full],
        k_max: 16,
        ..SweepSpec::default()
    };
    print!("{}", sweep_csv(&spec));
}
