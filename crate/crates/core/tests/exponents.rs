use epd_core::exponents::*;
use proptest::prelude::*;

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn strauss_mod_matches_bisection() {
    let p = strauss_mod(2.5, 0.5).unwrap();
    let oracle = bisect(|p| strauss_defect(2.5, 0.5, p), 1.0, 100.0);
    assert!((p - oracle).abs() < 1e-12, "{p} vs {oracle}");
}

#[test]
fn strauss_mod_classical_roots() {
    for k in [2.0, 3.0, 4.0, 5.0] {
        let p = strauss_mod(k, 0.0).unwrap();
        let a: f64 = k - 1.0;
        let classical = ((k + 1.0) + ((k + 1.0) * (k + 1.0) + 8.0 * a).sqrt()) / (2.0 * a);
        assert!((p - classical).abs() < 1e-12);
        assert!((a * p * p - (k + 1.0) * p - 2.0).abs() < 1e-11);
    }
}

#[test]
fn shifted_agrees_with_root() {
    for mu in [0.1, 0.5, 1.0, 2.0, 3.7, 10.0, 40.0] {
        let a = strauss_shifted(mu).unwrap();
        let b = strauss_mod(1.0 + mu, 0.0).unwrap();
        assert!((a - b).abs() < 1e-12, "mu = {mu}: {a} vs {b}");
    }
}

#[test]
fn p_crit_is_continuous_at_mu_bar() {
    let mb = mu_bar(1, 0.0).unwrap();
    assert!((mb - 4.0 / 3.0).abs() < 1e-15);
    assert!((strauss_shifted(mb).unwrap() - 3.0).abs() < 1e-9);
    // for n = 1 the Strauss branch is only reached when alpha ≤ 1
    for (n, alpha) in [(1u32, 0.0), (1, 0.5), (1, 1.0), (2, 0.0), (2, 0.5), (2, 1.0), (2, 1.5)] {
        let mb = mu_bar(n, alpha).unwrap();
        let r = p_crit(&DissipationParams::new(n, mb).with_alpha(alpha)).unwrap();
        assert!((r.p_fujita_mod - r.p_strauss_mod).abs() < 1e-9, "n = {n}, alpha = {alpha}");
    }
}

#[test]
fn strauss_shifted_decreasing() {
    let mut prev = f64::INFINITY;
    for i in 1..=500 {
        let mu = 50.0 * i as f64 / 500.0;
        let p = strauss_shifted(mu).unwrap();
        assert!(p < prev, "not decreasing at mu = {mu}");
        prev = p;
    }
}

#[test]
fn regime_flips_at_mu_bar() {
    let below = p_crit(&DissipationParams::new(1, 1.3)).unwrap();
    let above = p_crit(&DissipationParams::new(1, 1.4)).unwrap();
    assert_eq!(below.regime, Regime::WaveLike);
    assert_eq!(above.regime, Regime::HeatLike);
}

fn admissible_triple() -> impl Strategy<Value = (u32, f64, f64)> {
    (1u32..8, 1.0f64..20.0, 0.0f64..1.0).prop_map(|(n, q, frac)| (n, q, 1.0 + frac * (q - 1.0)))
}

proptest! {
    #[test]
    fn d_rq_identity((n, q, r) in admissible_triple()) {
        let nf = n as f64;
        let q_dual = q / (q - 1.0);
        let lhs = -nf * (1.0 / r - 1.0 / q) + d_rq(n, r, q).unwrap();
        let rhs = (nf - 1.0) * (0.5 - 1.0 / r.max(q_dual));
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn tricomi_pure_case(ell in 0.01f64..50.0) {
        let p = tricomi_map(ell, 0.0).unwrap();
        prop_assert!((p.alpha - 2.0 * p.mu).abs() < 1e-14);
        prop_assert!(p.mu > 0.0 && p.mu < 1.0);
    }

    #[test]
    fn reflection_bookkeeping(mu in 0.05f64..0.95, q in 1.1f64..10.0, frac in 0.0f64..1.0, two in any::<bool>()) {
        let r = 1.0 + frac * (q - 1.0);
        let (r1, r2) = if two { (1.0, r.max(1.0 + 1e-3)) } else { (r, r) };
        let a = linear_rate(1, mu, r1, r2, q);
        let b = linear_rate(1, 2.0 - mu, r1, r2, q);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a.t_exp - b.t_exp - (1.0 - mu)).abs() < 1e-12);
                prop_assert!((a.s_exp - b.s_exp + (1.0 - mu)).abs() < 1e-12);
                prop_assert_eq!(a.branch_ref, b.branch_ref);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "admissibility differs: {:?} / {:?}", a, b),
        }
    }

    #[test]
    fn shifted_small_mu_asymptotics(mu in 1e-6f64..1e-3) {
        let p = strauss_shifted(mu).unwrap();
        prop_assert!(((p - 1.0) * mu / 2.0 - 1.0).abs() < 5.0 * mu);
    }
}
