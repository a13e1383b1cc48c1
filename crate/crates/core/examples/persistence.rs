//! Save a fitted and reduced model, load it back, and compare evaluations.

use avi::analysis::invariance::probe_points;
use avi::{fit, reduce_basis, FitConfig, ModelFile, NormalizationKind, PointSet};

fn main() -> avi::Result<()> {
    let rows: Vec<Vec<f64>> = (0..12)
        .map(|i| {
            let t = i as f64 * 0.52;
            vec![2.0 * t.cos(), t.sin(), t.cos() - t.sin()]
        })
        .collect();
    let x = PointSet::from_rows(&rows)?;
    let cfg = FitConfig {
        center: true,
        unit_mean_norm: true,
        ..FitConfig::new(1e-9, NormalizationKind::Gradient)
    };
    let model = fit(&x, &cfg)?;
    let mut file = ModelFile::new(model);
    file.reduction = Some(reduce_basis(&file.model, &x, 1e-9)?);

    let dir = std::env::temp_dir().join("avi-persistence-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("model.json");
    file.save(&path)?;
    let loaded = ModelFile::load(&path)?;
    println!(
        "wrote {} ({} bytes)",
        path.display(),
        std::fs::metadata(&path)?.len()
    );
    println!(
        "byte-identical re-serialization: {}",
        loaded.to_json()? == file.to_json()?
    );

    let probes = probe_points(&x, 1000, 1)?;
    let handles = file.model.all_handles();
    let a = file
        .model
        .evaluate(&handles, &file.model.prepare(&probes)?)?;
    let b = loaded
        .model
        .evaluate(&handles, &loaded.model.prepare(&probes)?)?;
    println!(
        "handles {}, max |difference| over 1000 probes: {:e}",
        handles.len(),
        (a - b).amax()
    );
    println!(
        "kept after reduction: {:?}",
        loaded.reduction.map(|r| r.kept_handles().len())
    );
    Ok(())
}
