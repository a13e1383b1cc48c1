//! ε selection on noisy concentric-ellipse data with five mixed variables.
//!
//! The scan looks for the widest run of grid values whose basis has exactly
//! five linear vanishing polynomials and, beyond those, starts at degree
//! `d_min` with at least `num_at_dmin` polynomials there.

use avi::analysis::dataset::{ellipses_spec, generate_dataset};
use avi::analysis::epsilon::{default_grid, epsilon_search, EpsilonSearch, EpsilonTarget};
use avi::analysis::ratio::n_ratio;
use avi::{fit, FitConfig, NormalizationKind};

fn main() -> avi::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let d_min = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let num_at_dmin = std::env::args()
        .nth(3)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let x = generate_dataset(&ellipses_spec(75, 0.05, seed))?;
    let target = EpsilonTarget {
        num_linear: 5,
        d_min,
        num_at_dmin,
    };
    let cfg = FitConfig::new(0.0, NormalizationKind::Gradient);
    let grid = default_grid(&x, &cfg)?;
    let search = epsilon_search(&x, &target, &cfg, &grid)?;
    for e in search.trace() {
        let counts: Vec<String> = e.counts.iter().map(|(g, f)| format!("{g}/{f}")).collect();
        println!(
            "eps {:10.4e}  G/F per degree {:<30} {}",
            e.epsilon,
            counts.join(" "),
            if e.accepted { "ok" } else { "" }
        );
    }
    match search {
        EpsilonSearch::Found { epsilon, range, .. } => {
            println!(
                "range [{:.4e}, {:.4e}], epsilon {:.4e}",
                range.0, range.1, epsilon
            );
            let model = fit(&x, &FitConfig::new(epsilon, NormalizationKind::Gradient))?;
            println!("full fit counts (G, F): {:?}", model.counts());
            println!("vanishing polynomials: {}", model.g_handles().len());
            println!(
                "gradient n-ratio:    {:.6}",
                n_ratio(&model, &x, &NormalizationKind::Gradient)?
            );
            println!(
                "coefficient n-ratio: {:.6e}",
                n_ratio(&model, &x, &NormalizationKind::Coefficient)?
            );
        }
        EpsilonSearch::NotFound { .. } => println!("no epsilon in the grid meets the target"),
    }
    Ok(())
}
