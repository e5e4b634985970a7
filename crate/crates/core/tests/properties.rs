use interplay_core::audit::{
    audit_block, audit_dot, collision_report, orthogonality_threshold, Direction,
};
use interplay_core::{
    block_scale, compose, gaussian_vec, lp_norm, quantize_block, select_mask, sparsify, step_bound,
    NormKind, Order, QuantFormat, SeedSpec, SparsityKind, SparsityPattern, Tensor, PRESET_NAMES,
};
use proptest::prelude::*;

fn fmt(name: &str) -> QuantFormat {
    QuantFormat::preset(name).unwrap()
}

const PATTERNS: &[&str] = &["2:4", "1:4", "1:2", "3:8", "50%", "25%", "0%", "100%"];

fn block(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<f64>> {
    (
        prop::collection::vec(prop_oneof![4 => -1.0f64..1.0, 1 => Just(0.0)], len),
        -4i32..4,
    )
        .prop_map(|(v, e)| {
            let s = 10f64.powi(e);
            v.into_iter().map(|x| x * s).collect()
        })
}

fn preset() -> impl Strategy<Value = QuantFormat> {
    (0..PRESET_NAMES.len()).prop_map(|i| fmt(PRESET_NAMES[i]))
}

fn pattern() -> impl Strategy<Value = SparsityPattern> {
    (0..PATTERNS.len()).prop_map(|i| PATTERNS[i].parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn quantization_is_idempotent(b in block(1..80), f in preset()) {
        let q = quantize_block(&b, &f).unwrap();
        prop_assert_eq!(quantize_block(&q, &f).unwrap(), q);
    }

    #[test]
    fn quantization_error_within_step(b in block(1..80), f in preset()) {
        let q = quantize_block(&b, &f).unwrap();
        let step = step_bound(&f, block_scale(&b));
        for (x, y) in b.iter().zip(&q) {
            prop_assert!((x - y).abs() <= step * (1.0 + 1e-12), "{} -> {} step {}", x, y, step);
        }
    }

    #[test]
    fn quantization_keeps_sign_zero_and_order(b in block(1..80), f in preset()) {
        let q = quantize_block(&b, &f).unwrap();
        for (x, y) in b.iter().zip(&q) {
            prop_assert!(*y == 0.0 || y.signum() == x.signum());
            if *x == 0.0 {
                prop_assert_eq!(y.to_bits(), 0.0f64.to_bits());
            }
        }
        for i in 0..b.len() {
            for j in 0..b.len() {
                if b[i] <= b[j] {
                    prop_assert!(q[i] <= q[j]);
                }
            }
        }
    }

    #[test]
    fn sparsity_is_exact_and_idempotent(b in block(8..=64), pat in pattern()) {
        let len = b.len() / 8 * 8;
        let b = &b[..len];
        let (s, mask) = sparsify(b, &pat).unwrap();
        match pat.kind {
            SparsityKind::Nm { n, m } => {
                for g in mask.keep.chunks(m) {
                    prop_assert_eq!(g.iter().filter(|&&k| k).count(), n);
                }
                if n >= 1 {
                    for (g, vals) in mask.keep.chunks(m).zip(b.chunks(m)) {
                        let top = vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
                        prop_assert!(g.iter().zip(vals).any(|(&k, x)| k && x.abs() == top));
                    }
                }
            }
            SparsityKind::Unstructured { percent } => {
                prop_assert_eq!(mask.pruned(), ((len as f64) * percent / 100.0).round() as usize);
            }
        }
        for ((x, y), k) in b.iter().zip(&s).zip(&mask.keep) {
            prop_assert_eq!(*y, if *k { *x } else { 0.0 });
        }
        prop_assert_eq!(sparsify(&s, &pat).unwrap().0, s.clone());
        for p in [NormKind::L1, NormKind::L2, NormKind::new(3.5).unwrap()] {
            prop_assert!(lp_norm(&s, p).unwrap() <= lp_norm(b, p).unwrap());
        }
    }

    #[test]
    fn all_equal_blocks_have_exact_cardinality(v in -5.0f64..5.0, groups in 1usize..6, pat in pattern()) {
        let b = vec![v; 8 * groups];
        let mask = select_mask(&b, &pat).unwrap();
        prop_assert_eq!(mask.pruned(), pat.prune_count(b.len()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn composition_identity_and_theorems(b in block(8..=64), f in preset(), pat in pattern()) {
        let len = b.len() / 8 * 8;
        let b = &b[..len];
        let scale = block_scale(b).max(1.0);
        for order in Order::BOTH {
            let r = compose(b, &f, &pat, order).unwrap();
            prop_assert!(r.identity_residual() <= 1e-12 * scale);
        }
        for p in [NormKind::L1, NormKind::L2, NormKind::new(4.0).unwrap()] {
            let a = audit_block(b, &f, &pat, p).unwrap();
            prop_assert!(a.thm35_holds, "{:?}", a);
            prop_assert_eq!(a.thm37_holds, Some(true), "{:?}", a);
            prop_assert_eq!(a.l1_order_holds, Some(true), "{:?}", a);
        }
    }

    #[test]
    fn dot_decomposition(x in block(16), w in block(16), f in preset(), pat in pattern()) {
        for order in Order::BOTH {
            let a = audit_dot(&x, &w, &f, &pat, order).unwrap();
            prop_assert!(a.identity_residual() <= 1e-9 * a.dot.abs().max(1.0));
            if let Some(d) = a.deviation {
                prop_assert!(d >= 1.0 - 1e-9, "{:?}", a);
            }
        }
    }

    #[test]
    fn collisions_never_add_values(b in block(64..=64), f in preset()) {
        let t = Tensor::new(vec![64], b, 32).unwrap();
        let r = collision_report(&t, &f);
        prop_assert!(r.tensor_unique_after <= r.tensor_unique_before);
    }

    #[test]
    fn threshold_of_equal_metrics(x in -1e3f64..1e3) {
        let r = orthogonality_threshold(x, x, x, Direction::HigherIsBetter).unwrap();
        prop_assert_eq!(r.threshold, x);
    }
}

#[test]
fn streams_are_distinct_and_repeatable() {
    let base = SeedSpec::new(1, 0);
    let a = gaussian_vec(64, base);
    assert_eq!(a, gaussian_vec(64, base));
    for s in 1..50 {
        let b = gaussian_vec(64, base.stream(s));
        assert!(a.iter().zip(&b).all(|(x, y)| x != y));
    }
    assert_ne!(a, gaussian_vec(64, SeedSpec::new(2, 0)));
}

#[test]
fn configs_round_trip_through_json() {
    for name in PRESET_NAMES {
        let f = fmt(name);
        let back: QuantFormat = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
    for s in PATTERNS {
        let p: SparsityPattern = s.parse().unwrap();
        let back: SparsityPattern =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.to_string().parse::<SparsityPattern>().unwrap(), p);
    }
}
