//! Dataset specs as JSON and the generated points as CSV.
//!
//! Usage: `cargo run --example dataset -- [ellipses|cubic] [samples] [seed]`

use avi::analysis::dataset::{cubic_system_spec, ellipses_spec, generate_dataset};
use avi::io::write_points;

fn main() -> avi::Result<()> {
    let mut args = std::env::args().skip(1);
    let which = args.next().unwrap_or_else(|| "ellipses".into());
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let spec = match which.as_str() {
        "cubic" => cubic_system_spec(samples, 0.05, seed),
        _ => ellipses_spec(samples, 0.05, seed),
    };
    eprintln!("{}", serde_json::to_string_pretty(&spec)?);
    let x = generate_dataset(&spec)?;
    write_points(std::io::stdout(), &x)
}
