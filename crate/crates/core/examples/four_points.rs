//! The four points (±1, 0), (0, ±1): fit with the identity (VCA) and the
//! gradient normalization at ε = 0, reduce both bases and print what is left.

use avi::reduction::{reduce_basis, DEFAULT_THRESHOLD};
use avi::{fit, FitConfig, NormalizationKind, PointSet};

fn main() -> avi::Result<()> {
    let x = PointSet::from_rows(&[
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![-1.0, 0.0],
        vec![0.0, -1.0],
    ])?;
    for kind in [NormalizationKind::Identity, NormalizationKind::Gradient] {
        let model = fit(&x, &FitConfig::new(0.0, kind.clone()))?;
        println!("{} normalization", kind.name());
        for (t, (g, f)) in model.counts().iter().enumerate() {
            println!("  degree {}: |G| = {g}, |F| = {f}", t + 1);
        }
        println!("  vanishing polynomials: {}", model.g_handles().len());
        let report = reduce_basis(&model, &x, DEFAULT_THRESHOLD)?;
        println!("  after reduction: {}", report.kept.len());
        for h in report.kept_handles() {
            let p = model.expand(h)?.pruned(1e-12);
            println!("    {p}");
        }
    }
    Ok(())
}
