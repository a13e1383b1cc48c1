//! Gradients from the stored recursion against the expanded polynomial and
//! central differences.

use avi::oracle::finite_diff_gradient;
use avi::{fit, FitConfig, NormalizationKind, PointSet};

fn main() -> avi::Result<()> {
    let rows: Vec<Vec<f64>> = (0..9)
        .map(|i| {
            let t = i as f64 * 0.7;
            vec![t.cos(), (2.0 * t).sin(), 0.5 * t.cos() * t.sin()]
        })
        .collect();
    let x = PointSet::from_rows(&rows)?;
    let model = fit(&x, &FitConfig::new(0.0, NormalizationKind::Gradient))?;
    let probe = PointSet::from_rows(&[vec![0.3, -0.8, 0.45]])?;
    let handles = model.all_handles();
    let grads = model.gradient(&handles, &probe)?;
    let mut worst_oracle: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for (h, g) in handles.iter().zip(&grads) {
        let p = model.expand(*h)?;
        let exact: Vec<f64> = p
            .gradient()
            .iter()
            .map(|d| d.eval(&probe.row(0)))
            .collect::<avi::Result<_>>()?;
        let value = |y: &[f64]| {
            let p = PointSet::from_rows(&[y.to_vec()]).expect("finite point");
            model.evaluate(&[*h], &p).expect("valid handle")[(0, 0)]
        };
        let fd = finite_diff_gradient(value, &probe.row(0), 1e-5)?;
        for k in 0..model.num_vars {
            worst_oracle = worst_oracle.max((g[(0, k)] - exact[k]).abs());
            worst_fd = worst_fd.max((g[(0, k)] - fd[k]).abs() / g.norm().max(1.0));
        }
        println!(
            "{:<7} deg {}  grad {:?}",
            model.label(*h),
            h.degree,
            g.row(0)
                .iter()
                .map(|v| format!("{v:+.5}"))
                .collect::<Vec<_>>()
        );
    }
    println!("worst abs error vs expanded polynomial: {worst_oracle:.2e}");
    println!("worst rel error vs central differences: {worst_fd:.2e}");
    Ok(())
}
