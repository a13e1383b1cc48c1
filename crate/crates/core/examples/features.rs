//! Two-class classification with per-class vanishing polynomials: a point is
//! assigned to the class whose polynomials are smallest on it.

use avi::analysis::dataset::{generate_dataset, DatasetSpec, Variety};
use avi::analysis::features::extract_features;
use avi::{fit, FitConfig, NormalizationKind};

fn class(radii: (f64, f64), seed: u64, samples: usize) -> avi::Result<avi::PointSet> {
    generate_dataset(&DatasetSpec {
        variety: Variety::ConcentricEllipses {
            radii: vec![radii],
            rotation: 0.0,
        },
        samples,
        extra_linear_vars: vec![],
        noise_std_fraction: 0.01,
        seed,
    })
}

fn main() -> avi::Result<()> {
    let shapes = [(1.0, 1.0), (2.0, 0.5)];
    let mut models = Vec::new();
    for (c, s) in shapes.iter().enumerate() {
        let x = class(*s, c as u64, 60)?;
        models.push(fit(
            &x,
            &FitConfig {
                max_degree: Some(3),
                ..FitConfig::new(0.05, NormalizationKind::Gradient)
            },
        )?);
    }
    let sizes: Vec<usize> = models.iter().map(|m| m.g_handles().len()).collect();
    println!("vanishing polynomials per class: {sizes:?}");
    let mut correct = 0;
    let mut total = 0;
    for (c, s) in shapes.iter().enumerate() {
        for p in class(*s, 100 + c as u64, 50)?.rows() {
            let f = extract_features(&models, &p)?;
            let score: Vec<f64> = {
                let (a, b) = f.split_at(sizes[0]);
                [a, b]
                    .iter()
                    .map(|v| v.iter().sum::<f64>() / v.len() as f64)
                    .collect()
            };
            let guess = if score[0] <= score[1] { 0 } else { 1 };
            correct += usize::from(guess == c);
            total += 1;
        }
    }
    println!("held-out accuracy: {correct}/{total}");
    Ok(())
}
