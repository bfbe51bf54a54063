use epd_core::kernel::*;
use epd_core::special_functions::{bessel_j, gamma};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Classical RK4 on y'' + (mu/t) y' + xi² y = 0 from (y, y') at s to t.
fn rk4(mu: f64, xi: f64, s: f64, t: f64, y0: [f64; 2], steps: usize) -> [f64; 2] {
    let f = |t: f64, y: [f64; 2]| [y[1], -xi * xi * y[0] - mu / t * y[1]];
    let h = (t - s) / steps as f64;
    let mut y = y0;
    let mut tc = s;
    for _ in 0..steps {
        let k1 = f(tc, y);
        let k2 = f(tc + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(tc + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(tc + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        tc += h;
    }
    y
}

fn kv(mu: f64, s: f64, t: f64, xi: f64) -> KernelValue {
    k_hat(KernelQuery::new(mu, s, t, xi)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn matches_ode_integration() {
    for (mu, s, t, xi) in [(3.0, 1.0, 5.0, 2.7), (1.0, 1.0, 3.0, 1.1), (0.3, 0.5, 4.0, 3.3), (4.7, 2.0, 6.0, 0.8)] {
        let v = kv(mu, s, t, xi);
        let y = rk4(mu, xi, s, t, [0.0, 1.0], 40_000);
        assert!(rel(v.k, y[0]) < 1e-8, "mu {mu}: {} vs {}", v.k, y[0]);
        assert!(rel(v.k_t, y[1]) < 1e-8, "mu {mu}: {} vs {}", v.k_t, y[1]);
        let p = propagator(mu, s, t, xi).unwrap();
        let y = rk4(mu, xi, s, t, [1.0, 0.0], 40_000);
        assert!(rel(p.m[0][0], y[0]) < 1e-8 && rel(p.m[1][0], y[1]) < 1e-8);
    }
}

#[test]
fn residual_on_random_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mus = [0.3, 1.0, 2.0, 3.0, 4.7];
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let mu = mus[i % mus.len()];
        let s = rng.gen_range(0.2..3.0);
        let t = s + rng.gen_range(0.1..10.0);
        let xi = rng.gen_range(0.0..8.0);
        let r = kernel_ode_residual(KernelQuery::new(mu, s, t, xi), 1e-3).unwrap();
        worst = worst.max(r);
    }
    assert!(worst < 1e-5, "worst residual {worst}");
}

#[test]
fn continuity_across_integer_orders() {
    for m in [0.0, 1.0, 2.0] {
        let mu = 2.0 * m + 1.0;
        for (s, t, xi) in [(1.0, 3.0, 1.1), (0.5, 7.0, 0.3), (2.0, 2.5, 6.0)] {
            let base = kv(mu, s, t, xi);
            for d in [-1e-7, 1e-7] {
                let near = kv(mu + 2.0 * d, s, t, xi);
                assert!(rel(near.k, base.k) < 1e-5, "m {m} d {d}: {} vs {}", near.k, base.k);
                assert!(rel(near.k_t, base.k_t) < 1e-5);
            }
        }
    }
}

#[test]
fn reflected_kernel_example() {
    let q = KernelQuery::new(0.5, 1.0, 4.0, 2.0);
    let direct = k_hat(q).unwrap();
    let via = k_hat_reflected(q).unwrap();
    assert!(rel(direct.k, via.k) < 1e-10 && rel(direct.k_t, via.k_t) < 1e-10);
}

#[test]
fn undamped_high_frequency() {
    for xi in [100.0, 300.0, 1000.0] {
        let v = kv(0.0, 1.0, 2.0, xi);
        let wave = (xi * 1.0f64).sin() / xi;
        assert!((v.k - wave).abs() < 1.0 / (xi * xi), "xi {xi}");
    }
}

#[test]
fn singular_multiplier_matches_ode() {
    // v(0) = 1, v_t(0) = 0; start from the series at t = 1e-3
    let (mu, xi) = (3.0, 1.5);
    let t0 = 1e-3;
    let m0 = singular_value(mu, t0, xi).unwrap();
    let y = rk4(mu, xi, t0, 2.0, [m0.k, m0.k_t], 200_000);
    let m = singular_value(mu, 2.0, xi).unwrap();
    assert!(rel(m.k, y[0]) < 1e-8 && rel(m.k_t, y[1]) < 1e-7);
    let z: f64 = 3.0;
    let closed = 2.0 / z * gamma(2.0) * bessel_j(1.0, z).unwrap();
    assert!((m.k - closed).abs() < 1e-14);
}

#[test]
fn singular_sinc_closed_form() {
    for z in [0.01, 0.5, 1.0, 3.0, 17.0, 80.0] {
        let m = singular_multiplier(2.0, z, 1.0).unwrap();
        assert!((m - z.sin() / z).abs() < 1e-10, "z {z}");
    }
}

#[test]
fn batch_matches_pointwise() {
    let xi: Vec<f64> = (0..64).map(|i| i as f64 * 0.25).collect();
    for mu in [0.3, 1.0, 2.0] {
        let batch = KernelBatch::new(mu, 1.0, &xi).unwrap();
        let vals = batch.k_values(3.5).unwrap();
        for (x, v) in xi.iter().zip(&vals) {
            assert_eq!(*v, kv(mu, 1.0, 3.5, *x));
        }
    }
}

proptest! {
    #[test]
    fn scaling_law(mu in prop::sample::select(vec![0.3, 1.0, 2.0, 3.0, 4.7]),
                   s in 0.2f64..3.0, dt in 0.1f64..6.0, xi in 0.0f64..5.0, lambda in 0.5f64..4.0) {
        let t = s + dt;
        let a = kv(mu, s, t, xi);
        let b = kv(mu, lambda * s, lambda * t, xi / lambda);
        prop_assert!((b.k / lambda - a.k).abs() <= 1e-12 * (a.k.abs() + s));
        prop_assert!((b.k_t - a.k_t).abs() <= 1e-12 * (a.k_t.abs() + 1.0));
    }

    #[test]
    fn two_point_composition(mu in 0.1f64..5.0, s in 0.3f64..2.0, d1 in 0.1f64..4.0, d2 in 0.1f64..4.0, xi in 0.0f64..6.0) {
        let (m, t) = (s + d1, s + d1 + d2);
        let direct = propagator(mu, s, t, xi).unwrap();
        let via = propagator(mu, m, t, xi).unwrap().compose(&propagator(mu, s, m, xi).unwrap());
        let scale = direct.m.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((direct.m[i][j] - via.m[i][j]).abs() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn singular_multiplier_bounded(mu in 1.0f64..8.0, z in 0.0f64..100.0) {
        let m = singular_multiplier(mu, 1.0, z).unwrap();
        prop_assert!(m.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn reflection_identity(mu in 0.05f64..0.95, s in 0.3f64..2.0, dt in 0.1f64..5.0, xi in 0.0f64..6.0) {
        let q = KernelQuery::new(mu, s, s + dt, xi);
        let a = k_hat(q).unwrap();
        let b = k_hat_reflected(q).unwrap();
        prop_assert!((a.k - b.k).abs() < 1e-10 * (a.k.abs() + s));
        prop_assert!((a.k_t - b.k_t).abs() < 1e-10 * (a.k_t.abs() + 1.0));
    }
}
