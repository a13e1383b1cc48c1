//! The same point set under every normalization: per-degree counts and the
//! spread of vanishing-polynomial norms measured under each normalization.

use avi::analysis::dataset::{generate_dataset, DatasetSpec, Variety};
use avi::analysis::ratio::n_ratio;
use avi::{fit, FitConfig, NormalizationKind};

fn main() -> avi::Result<()> {
    let spec = DatasetSpec {
        variety: Variety::ConcentricEllipses {
            radii: vec![(1.5, 0.5), (3.0, 1.0)],
            rotation: 0.4,
        },
        samples: 40,
        extra_linear_vars: vec![vec![0.5, 0.5]],
        noise_std_fraction: 0.0,
        seed: 7,
    };
    let x = generate_dataset(&spec)?;
    let kinds = [
        NormalizationKind::Identity,
        NormalizationKind::Coefficient,
        NormalizationKind::Gradient,
        NormalizationKind::SubsampledGradient {
            variables: vec![0, 1, 2],
            points: (0..40).step_by(2).collect(),
        },
    ];
    for kind in &kinds {
        let model = fit(
            &x,
            &FitConfig {
                max_degree: Some(4),
                ..FitConfig::new(1e-6, kind.clone())
            },
        )?;
        println!("{:<8} counts (G, F) {:?}", kind.name(), model.counts());
        for probe in &kinds[..3] {
            println!(
                "         n-ratio under {:<6} {:.4e}",
                probe.name(),
                n_ratio(&model, &x, probe)?
            );
        }
    }
    Ok(())
}
