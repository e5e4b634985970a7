//! Checks against independent reference implementations: explicit grid
//! enumeration, brute-force subset search, and exhaustive input sweeps.

use interplay_core::{
    block_scale, lp_norm, quantize_block, select_mask, step_bound, ExponentMode, Family, NormKind,
    QuantFormat, SparsityPattern, TieMode, PRESET_NAMES,
};
use proptest::prelude::*;

fn fmt(name: &str) -> QuantFormat {
    QuantFormat::preset(name).unwrap()
}

/// Every representable value of the format for a block with this scale.
fn enumerate_grid(f: &QuantFormat, scale: f64) -> Vec<f64> {
    match f.family {
        Family::Int => {
            let levels = (2_i64.pow(f.m - 1) - 1) as f64;
            (f.mantissa_clamp.lo..=f.mantissa_clamp.hi)
                .map(|k| k as f64 * scale / levels)
                .collect()
        }
        Family::Hbfp | Family::Mxint => {
            let e = match f.exponent_mode {
                ExponentMode::Floor => scale.log2().floor(),
                ExponentMode::Ceil => scale.log2().ceil(),
            } as i32;
            let spacing = 2f64.powi(e - (f.m as i32 - 1));
            (f.mantissa_clamp.lo..=f.mantissa_clamp.hi)
                .map(|k| k as f64 * spacing)
                .collect()
        }
        Family::Mxfp => {
            let cfg = f.mxfp.unwrap();
            let frac = 2f64.powi(cfg.mantissa_bits as i32);
            let mut elements = Vec::new();
            for field in 0..(1 << cfg.exponent_bits) {
                for mant in 0..(1 << cfg.mantissa_bits) {
                    let v = if field == 0 {
                        2f64.powi(1 - cfg.bias) * (mant as f64 / frac)
                    } else {
                        2f64.powi(field - cfg.bias) * (1.0 + mant as f64 / frac)
                    };
                    if v <= cfg.max_finite {
                        elements.push(v);
                    }
                }
            }
            let emax = cfg.max_finite.log2().floor() as i32;
            let shared = 2f64.powi(scale.log2().floor() as i32 - emax);
            elements
                .iter()
                .flat_map(|&v| [v * shared, -v * shared])
                .collect()
        }
    }
}

/// Distance from `x` to its nearest grid point, and whether `q` is one of
/// the grid points at that distance (ties round away from zero).
fn check_nearest(grid: &[f64], x: f64, q: f64, tol: f64) -> Result<(), String> {
    let best = grid
        .iter()
        .map(|g| (x - g).abs())
        .fold(f64::INFINITY, f64::min);
    if !grid.iter().any(|g| (g - q).abs() <= tol) {
        return Err(format!("{q} is not on the grid (x = {x})"));
    }
    if (x - q).abs() > best + tol {
        return Err(format!("{q} is not nearest to {x}: best distance {best}"));
    }
    Ok(())
}

fn block_strategy() -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-1.0f64..1.0, 1..48), -6i32..6).prop_map(|(v, e)| {
        let s = 10f64.powi(e);
        v.into_iter().map(|x| x * s).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn outputs_are_nearest_grid_points(block in block_strategy(), which in 0..PRESET_NAMES.len()) {
        let f = fmt(PRESET_NAMES[which]);
        let scale = block_scale(&block);
        prop_assume!(scale > 0.0);
        let grid = enumerate_grid(&f, scale);
        let q = quantize_block(&block, &f).unwrap();
        for (&x, &y) in block.iter().zip(&q) {
            if let Err(e) = check_nearest(&grid, x, y, 1e-12 * scale) {
                return Err(TestCaseError::fail(format!("{}: {e}", PRESET_NAMES[which])));
            }
        }
    }

    #[test]
    fn nm_kept_set_is_optimal(
        (m, groups) in (1usize..=8, 1usize..4),
        n_frac in 0.0f64..=1.0,
        seed_vals in prop::collection::vec(-3i32..=3, 32),
        later in any::<bool>(),
    ) {
        let n = ((m as f64) * n_frac).round() as usize;
        let v: Vec<f64> = seed_vals.iter().cycle().skip(m).take(m * groups).map(|&k| k as f64 * 0.5).collect();
        let tie = if later { TieMode::KeepLater } else { TieMode::KeepEarlier };
        let pat = SparsityPattern::nm(n, m).unwrap().with_tie_mode(tie);
        let mask = select_mask(&v, &pat).unwrap();
        for g in 0..groups {
            let group = &v[g * m..(g + 1) * m];
            let got: Vec<usize> = (0..m).filter(|&i| mask.keep[g * m + i]).collect();
            prop_assert_eq!(got, brute_force_keep(group, n, tie));
        }
    }

    #[test]
    fn unstructured_matches_threshold_oracle(
        vals in prop::collection::vec(-4i32..=4, 1..40),
        percent in 0.0f64..=100.0,
        later in any::<bool>(),
    ) {
        let v: Vec<f64> = vals.iter().map(|&k| k as f64 * 0.25).collect();
        let tie = if later { TieMode::KeepLater } else { TieMode::KeepEarlier };
        let pat = SparsityPattern::unstructured(percent).unwrap().with_tie_mode(tie);
        let mask = select_mask(&v, &pat).unwrap();
        let pruned = ((v.len() as f64) * percent / 100.0).round() as usize;
        prop_assert_eq!(mask.pruned(), pruned);
        let keep = v.len() - pruned;
        if keep > 0 && pruned > 0 {
            let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            mags.sort_by(|a, b| b.total_cmp(a));
            let xi = mags[keep - 1];
            let tied: Vec<usize> = (0..v.len()).filter(|&i| v[i].abs() == xi).collect();
            let strictly_above = v.iter().filter(|x| x.abs() > xi).count();
            let tied_kept = keep - strictly_above;
            for i in 0..v.len() {
                let expected = if v[i].abs() > xi {
                    true
                } else if v[i].abs() < xi {
                    false
                } else {
                    let pos = tied.iter().position(|&j| j == i).unwrap();
                    match tie {
                        TieMode::KeepEarlier => pos < tied_kept,
                        TieMode::KeepLater => pos >= tied.len() - tied_kept,
                    }
                };
                prop_assert_eq!(mask.keep[i], expected, "index {}", i);
            }
        }
    }
}

/// All size-`n` subsets; the heaviest wins, ties go to the subset whose
/// sorted indices are lexicographically smallest (earliest) or largest.
fn brute_force_keep(group: &[f64], n: usize, tie: TieMode) -> Vec<usize> {
    let m = group.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for bits in 0u32..(1 << m) {
        if bits.count_ones() as usize != n {
            continue;
        }
        let set: Vec<usize> = (0..m).filter(|&i| bits & (1 << i) != 0).collect();
        let mass: f64 = set.iter().map(|&i| group[i].abs()).sum();
        let better = match &best {
            None => true,
            Some((b, s)) => {
                mass > *b
                    || (mass == *b
                        && match tie {
                            TieMode::KeepEarlier => set < *s,
                            TieMode::KeepLater => set.iter().rev().gt(s.iter().rev()),
                        })
            }
        };
        if better {
            best = Some((mass, set));
        }
    }
    best.unwrap().1
}

#[test]
fn brute_force_oracle_sanity() {
    assert_eq!(
        brute_force_keep(&[1.0, 1.0, 1.0, 0.5], 2, TieMode::KeepEarlier),
        vec![0, 1]
    );
    assert_eq!(
        brute_force_keep(&[1.0, 1.0, 1.0, 0.5], 2, TieMode::KeepLater),
        vec![1, 2]
    );
    assert_eq!(
        brute_force_keep(&[0.1, -3.0, 2.0, 0.0], 1, TieMode::KeepEarlier),
        vec![1]
    );
}

/// Sweeps `x` over `[-scale, scale]` in a block pinned to `scale`.
fn max_sweep_error(f: &QuantFormat, scale: f64, points: usize) -> f64 {
    (0..=points)
        .map(|i| -scale + 2.0 * scale * i as f64 / points as f64)
        .map(|x| {
            let q = quantize_block(&[scale, x], f).unwrap();
            (x - q[1]).abs().max((scale - q[0]).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn step_bounds_the_sweep() {
    let scales = [1.3, 4.0, 0.011, 1.99, 2.0, 7.9, 300.0, 0.75];
    for name in PRESET_NAMES {
        let f = fmt(name);
        for &scale in &scales {
            let step = step_bound(&f, scale);
            let worst = max_sweep_error(&f, scale, 20_000);
            assert!(
                worst <= step * (1.0 + 1e-12),
                "{name} at {scale}: {worst} > {step}"
            );
            if f.family != Family::Mxfp {
                assert!(
                    worst >= 0.95 * step,
                    "{name} at {scale}: {worst} far below {step}"
                );
            }
        }
    }
}

#[test]
fn step_is_tight_for_hbfp4_example() {
    let f = fmt("HBFP4-paper");
    let worst = max_sweep_error(&f, 1.3, 26_000);
    assert!((worst - 0.0625).abs() < 1e-4, "{worst}");
    assert_eq!(step_bound(&f, 1.3), 0.0625);
}

#[test]
fn int_max_element_is_exact() {
    for name in ["INT8", "INT4"] {
        let f = fmt(name);
        for scale in [0.3, 1.0, 3.7, 1234.5] {
            let q = quantize_block(&[0.1 * scale, -scale, 0.5 * scale], &f).unwrap();
            assert_eq!(q[1], -scale, "{name}");
        }
    }
}

fn naive_norm(v: &[f64], p: f64) -> f64 {
    v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn norm_triangle_inequality(
        pair in (1usize..64).prop_flat_map(|n| (prop::collection::vec(-10.0f64..10.0, n), prop::collection::vec(-10.0f64..10.0, n))),
        p in 1.0f64..6.0,
    ) {
        let (a, b) = pair;
        let p = NormKind::new(p).unwrap();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = lp_norm(&sum, p).unwrap();
        let rhs = lp_norm(&a, p).unwrap() + lp_norm(&b, p).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        let naive = naive_norm(&a, p.p());
        prop_assert!((lp_norm(&a, p).unwrap() - naive).abs() <= 1e-9 * naive.max(1.0));
        let mut rev = a.clone();
        rev.reverse();
        prop_assert!((lp_norm(&rev, p).unwrap() - lp_norm(&a, p).unwrap()).abs() <= 1e-12 * naive.max(1.0));
    }
}
