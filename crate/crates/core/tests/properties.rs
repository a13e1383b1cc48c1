mod common;

use avi::analysis::dataset::{ellipses_spec, generate_dataset};
use avi::linalg::{gen_sym_eig, lstsq, DEFAULT_RANK_TOL};
use avi::oracle::DensePolynomial;
use avi::reduction::{reduce_candidates, GradientCandidate, Verdict};
use avi::{fit, FitConfig, Matrix, NormalizationKind, PointSet, PolyKind};
use common::{random_polynomial, rng, uniform_points};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, rows * cols)
        .prop_map(move |v| Matrix::from_vec(rows, cols, v))
}

fn point_set() -> impl Strategy<Value = PointSet> {
    (1usize..=3, 2usize..=10, any::<u64>())
        .prop_map(|(n, m, seed)| uniform_points(&mut rng(seed), m, n))
}

fn kind() -> impl Strategy<Value = NormalizationKind> {
    prop_oneof![
        Just(NormalizationKind::Gradient),
        Just(NormalizationKind::Identity),
        Just(NormalizationKind::Coefficient),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gen_eig_diagonalizes(a in matrix(5, 5), b in matrix(5, 5)) {
        let a = a.transpose() * &a;
        let b = b.transpose() * &b + Matrix::identity(5, 5) * 0.1;
        let e = gen_sym_eig(&a, &b, DEFAULT_RANK_TOL).unwrap();
        let v = &e.eigenvectors;
        let vbv = v.transpose() * &b * v;
        let vav = v.transpose() * &a * v;
        let scale = a.amax().max(1.0);
        for i in 0..e.eigenvalues.len() {
            for j in 0..e.eigenvalues.len() {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((vbv[(i, j)] - id).abs() <= 1e-8);
                let lam = if i == j { e.eigenvalues[i] } else { 0.0 };
                prop_assert!((vav[(i, j)] - lam).abs() <= 1e-8 * scale);
            }
        }
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn lstsq_residual_is_orthogonal(m in matrix(8, 3), y in matrix(8, 2)) {
        let (w, res) = lstsq(&m, &y, DEFAULT_RANK_TOL).unwrap();
        let r = &m * &w - &y;
        prop_assert!((r.norm() - res).abs() <= 1e-10);
        prop_assert!((m.transpose() * r).amax() <= 1e-9);
    }

    #[test]
    fn oracle_product_rule_and_homomorphism(seed in any::<u64>(), x in prop::collection::vec(-1.5f64..1.5, 3)) {
        let mut r = rng(seed);
        let p = random_polynomial(&mut r, 3, 2);
        let q = random_polynomial(&mut r, 3, 3);
        let pq = p.mul(&q).unwrap();
        let (pv, qv) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        let scale = pv.abs().max(1.0) * qv.abs().max(1.0);
        prop_assert!((pq.eval(&x).unwrap() - pv * qv).abs() <= 1e-12 * scale * 10.0);
        for k in 0..3 {
            let lhs = pq.diff(k).unwrap();
            let rhs = p.diff(k).unwrap().mul(&q).unwrap().add(&p.mul(&q.diff(k).unwrap()).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().terms().values().all(|c| c.abs() <= 1e-12));
        }
    }

    #[test]
    fn replay_matches_rowwise_and_expansion(x in point_set(), kind in kind(), seed in any::<u64>()) {
        let model = fit(&x, &FitConfig::new(0.0, kind)).unwrap();
        let probes = uniform_points(&mut rng(seed), 6, x.dim());
        let hs = model.all_handles();
        let batch = model.evaluate(&hs, &probes).unwrap();
        prop_assert_eq!(&batch, &model.evaluate(&hs, &probes).unwrap());
        for (i, pt) in probes.rows().into_iter().enumerate() {
            let single = model.evaluate(&hs, &PointSet::from_rows(std::slice::from_ref(&pt)).unwrap()).unwrap();
            for j in 0..hs.len() {
                prop_assert!((single[(0, j)] - batch[(i, j)]).abs() <= 1e-12 * batch[(i, j)].abs().max(1.0));
            }
            for (j, h) in hs.iter().enumerate().filter(|(_, h)| h.degree <= 4) {
                let p = model.expand(*h).unwrap();
                prop_assert!((p.eval(&pt).unwrap() - batch[(i, j)]).abs() <= 1e-8 * batch[(i, j)].abs().max(1.0));
            }
        }
    }

    #[test]
    fn evaluations_are_orthogonal_across_degrees(x in point_set(), kind in kind()) {
        let model = fit(&x, &FitConfig::new(0.0, kind)).unwrap();
        let hs = model.all_handles();
        let v = model.evaluate(&hs, &x).unwrap();
        for (i, a) in hs.iter().enumerate() {
            for (j, b) in hs.iter().enumerate().skip(i + 1) {
                let lower_f = (a.degree < b.degree && a.kind == PolyKind::F) || (b.degree < a.degree && b.kind == PolyKind::F);
                if lower_f || a.degree == b.degree {
                    let dot = v.column(i).dot(&v.column(j));
                    prop_assert!(dot.abs() <= 1e-9, "{a:?} {b:?} {dot}");
                }
            }
        }
    }

    #[test]
    fn reduction_ignores_order_within_degree(x in point_set(), kind in kind()) {
        let model = fit(&x, &FitConfig::new(0.0, kind.clone())).unwrap();
        let hs = model.g_handles();
        let grads = model.gradient(&hs, &x).unwrap();
        let cands: Vec<GradientCandidate> = hs.iter().zip(grads).map(|(h, g)| GradientCandidate {
            degree: h.degree,
            extent: model.extent(*h).unwrap(),
            grads: g,
        }).collect();
        let deflate = kind != NormalizationKind::Gradient;
        let (base, _) = reduce_candidates(&cands, 1e-9, DEFAULT_RANK_TOL, deflate).unwrap();
        // Reverse within each degree; extents are distinct so deflation order is fixed.
        let mut perm: Vec<usize> = (0..cands.len()).collect();
        perm.sort_by_key(|&i| (cands[i].degree, std::cmp::Reverse(i)));
        let shuffled: Vec<GradientCandidate> = perm.iter().map(|&i| cands[i].clone()).collect();
        let (other, _) = reduce_candidates(&shuffled, 1e-9, DEFAULT_RANK_TOL, deflate).unwrap();
        let distinct = {
            let mut e: Vec<f64> = cands.iter().map(|c| c.extent).collect();
            e.sort_by(f64::total_cmp);
            e.windows(2).all(|w| w[0] != w[1])
        };
        prop_assume!(distinct || !deflate);
        let kept = |v: &Verdict| matches!(v, Verdict::Kept { .. });
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(kept(&base[i]), kept(&other[k]));
        }
    }

    #[test]
    fn datasets_are_deterministic(seed in 0u64..1000, samples in 5usize..40) {
        let a = generate_dataset(&ellipses_spec(samples, 0.05, seed)).unwrap();
        let b = generate_dataset(&ellipses_spec(samples, 0.05, seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn polynomial_json_round_trip(seed in any::<u64>()) {
        let p = random_polynomial(&mut rng(seed), 2, 3);
        let back: DensePolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p, back);
    }
}
