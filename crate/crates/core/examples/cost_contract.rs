//! Operation counts of one gradient propagation against `n·|C_t|`.
//!
//! For each `|X|` the costliest propagation (over degrees ≥ 2) is paired
//! with its `n·|C_t|` and a line through the origin is fitted to the three
//! pairs. The per-degree table is printed too; at the last degree `F_{t-1}`
//! is nearly exhausted while `F^{t-1}` is close to `|X|`, so those rows sit
//! above the line.
//!
//! Usage: `cargo run --example cost_contract -- [n ...]`

use avi::model::gradient_at_point_counted;
use avi::{fit, FitConfig, NormalizationKind, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn worst_deviation(samples: &[(f64, f64)]) -> (f64, f64) {
    let slope = samples.iter().map(|(s, o)| s * o).sum::<f64>()
        / samples.iter().map(|(s, _)| s * s).sum::<f64>();
    let worst = samples
        .iter()
        .map(|(s, o)| {
            let q = o / (slope * s);
            q.max(1.0 / q)
        })
        .fold(1.0, f64::max);
    (slope, worst)
}

fn main() -> avi::Result<()> {
    let dims: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let dims = if dims.is_empty() { vec![2, 3, 4] } else { dims };
    for n in dims {
        let mut all = Vec::new();
        let mut peak = Vec::new();
        for (i, m) in [10usize, 20, 40].into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let x = PointSet::from_rows(&rows)?;
            let model = fit(&x, &FitConfig::new(0.0, NormalizationKind::Gradient))?;
            let mut best = (0.0, 0.0);
            for r in model.degrees.iter().filter(|r| r.degree >= 2) {
                let h = model
                    .all_handles()
                    .into_iter()
                    .find(|h| h.degree == r.degree)
                    .expect("nonempty degree");
                let (_, ops) = gradient_at_point_counted(&model, h, &x.row(0))?;
                let size = (n * r.parents.len()) as f64;
                let ops = ops.total() as f64;
                println!(
                    "n={n} |X|={m:<3} t={:<2} n|C_t|={size:<5} ops={ops}",
                    r.degree
                );
                all.push((size, ops));
                if ops > best.1 {
                    best = (size, ops);
                }
            }
            peak.push(best);
        }
        let (slope, worst) = worst_deviation(&peak);
        println!("n={n}: costliest propagation per |X|: ops ~ {slope:.3}·n|C_t|, deviation factor {worst:.3}");
        let (slope, worst) = worst_deviation(&all);
        println!("n={n}: every degree:                   ops ~ {slope:.3}·n|C_t|, deviation factor {worst:.3}\n");
    }
    Ok(())
}
