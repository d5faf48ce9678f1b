use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdof_core::mac_sim::{
    aligned_eavesdropper_signal, aligned_receiver_signal, build_inputs, dof_target,
    eavesdropper_group_levels, eavesdropper_groups, estimate_dof, leakage_bound_bits, receive,
    run_grid, simulate, Constellation, Decoder, MacChannel, MacSchemeConfig, Symbols,
};

fn draw(rng: &mut ChaCha8Rng, cfg: &MacSchemeConfig) -> Symbols {
    let q = cfg.q as i64;
    Symbols {
        v: (0..cfg.m * (cfg.k - 1))
            .map(|_| rng.random_range(-q..=q))
            .collect(),
        u: (0..cfg.k).map(|_| rng.random_range(-q..=q)).collect(),
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn alignment_identities_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (k, m) in [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)] {
        let ch = MacChannel::random(k, &mut rng);
        let cfg = MacSchemeConfig::new(k, m, 1e6, 0.05, &ch).unwrap();
        let levels = eavesdropper_group_levels(&cfg);
        let cap = 2 * k * cfg.q as usize + 1;
        assert!(levels.iter().all(|&l| l <= cap), "{levels:?} > {cap}");
        for _ in 0..200 {
            let sym = draw(&mut rng, &cfg);
            let x = build_inputs(&cfg, &ch, &sym).unwrap();
            let (y1, y2) = receive(&ch, &x);
            assert!(close(y1, aligned_receiver_signal(&cfg, &ch, &sym)));
            assert!(close(y2, aligned_eavesdropper_signal(&cfg, &ch, &sym)));
            let groups = eavesdropper_groups(&cfg, &sym);
            for (g, l) in groups.iter().zip(&levels) {
                // Groups are sums of symbols in -Q..=Q, so they stay within
                // their level count around zero.
                assert!(g.unsigned_abs() as usize <= l / 2);
            }
        }
    }
}

#[test]
fn peak_and_mean_power_within_budget() {
    for (k, m) in [(2, 2), (3, 2), (3, 3)] {
        let ch = MacChannel::from_seed(k, 3);
        for p in [1e2, 1e4, 1e6] {
            let cfg = MacSchemeConfig::new(k, m, p, 0.05, &ch).unwrap();
            // Worst case: every symbol at +Q on the transmitter with the largest
            // coefficient sum.
            let q = cfg.q as i64;
            let sym = Symbols {
                v: vec![q; m * (k - 1)],
                u: vec![q; k],
            };
            let x = build_inputs(&cfg, &ch, &sym).unwrap();
            assert!(x.iter().all(|xi| xi * xi <= p * (1.0 + 1e-12)));
            let res = simulate(&cfg, &ch, 500, 1, Decoder::Table).unwrap();
            assert!(res.max_mean_power <= p);
        }
    }
}

#[test]
fn noiseless_decoding_is_exact() {
    for (k, m) in [(2, 2), (3, 2), (3, 1)] {
        let ch = MacChannel::from_seed(k, 11);
        let cfg = MacSchemeConfig::new(k, m, 1e4, 0.05, &ch)
            .unwrap()
            .with_noise_var(0.0);
        let res = simulate(&cfg, &ch, 2000, 5, Decoder::Table).unwrap();
        assert_eq!(res.errors, 0, "K={k} m={m}");
    }
}

#[test]
fn decoders_agree() {
    let ch = MacChannel::from_seed(2, 4);
    for p in [1e2, 1e4] {
        let cfg = MacSchemeConfig::new(2, 2, p, 0.05, &ch).unwrap();
        let a = simulate(&cfg, &ch, 3000, 9, Decoder::Table).unwrap();
        let b = simulate(&cfg, &ch, 3000, 9, Decoder::Exhaustive).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn constellation_index_round_trip() {
    let ch = MacChannel::from_seed(3, 2);
    let cfg = MacSchemeConfig::new(3, 2, 1e4, 0.05, &ch).unwrap();
    let c = Constellation::new(&cfg, &ch, Decoder::Exhaustive).unwrap();
    for idx in (0..c.len()).step_by(97) {
        let (v, s) = c.decode_index(idx);
        assert_eq!(c.index_of(&v, s), idx);
    }
}

#[test]
fn runs_are_reproducible() {
    let grid = [1e2, 1e3, 1e4];
    let a = run_grid(2, 2, 0.05, &grid, 10_000, 123).unwrap();
    let b = run_grid(2, 2, 0.05, &grid, 10_000, 123).unwrap();
    assert_eq!(a, b);
    let c = run_grid(2, 2, 0.05, &grid, 10_000, 124).unwrap();
    assert_ne!(
        a.iter().map(|r| r.errors).collect::<Vec<_>>(),
        c.iter().map(|r| r.errors).collect::<Vec<_>>()
    );
}

#[test]
fn leakage_constant() {
    for k in 2..=8 {
        let want = k as f64 * (k as f64).log2();
        assert_eq!(leakage_bound_bits(k), want);
    }
    assert_eq!(leakage_bound_bits(2), 2.0);
    assert_eq!(leakage_bound_bits(4), 8.0);
}

#[test]
fn slope_of_synthetic_rates() {
    for c in [0.25, 2.0 / 3.0, 1.0] {
        let pts: Vec<(f64, f64)> = (2..=8)
            .map(|e| 10f64.powi(e))
            .map(|p| (p, c * 0.5 * p.log2() - 1.0))
            .collect();
        assert!((estimate_dof(&pts).unwrap() - c).abs() < 1e-12);
    }
    assert!(estimate_dof(&[(1e2, 1.0), (1e3, 2.0)]).is_err());
}

#[test]
fn targets() {
    assert!((dof_target(2, 2, 0.0) - 2.0 / 3.0).abs() < 1e-15);
    // One message user with K-1 helpers: (K-1)/K at delta -> 0.
    assert!((dof_target(3, 1, 0.0) - 2.0 / 3.0).abs() < 1e-15);
    assert!((dof_target(2, 2, 0.05) - 2.0 * 0.95 / 3.05).abs() < 1e-15);
}

#[test]
fn bad_configs_rejected() {
    let ch = MacChannel::unit(3);
    assert!(MacSchemeConfig::new(3, 0, 1e4, 0.05, &ch).is_err());
    assert!(MacSchemeConfig::new(3, 4, 1e4, 0.05, &ch).is_err());
    assert!(MacSchemeConfig::new(3, 2, 1e4, 1.0, &ch).is_err());
    assert!(MacSchemeConfig::new(2, 2, 1e4, 0.05, &ch).is_err());
    assert!(MacChannel::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
}
