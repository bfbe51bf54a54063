use epd_core::exponents::DissipationParams;
use epd_core::solver::*;

fn config(params: DissipationParams, n: usize, l: f64, t_final: f64, outputs: usize) -> RunConfig {
    let mut c = RunConfig::new(params);
    c.grid = GridSpec::new(n, l);
    c.t_final = t_final;
    c.output_times = c.default_output_times(outputs);
    c.data_profile = DataProfile::Gaussian {
        amplitude: 0.1,
        width: 1.0,
    };
    c
}

fn rel_l2(a: &FieldState, b: &FieldState) -> f64 {
    let num: f64 = a.u_hat.iter().zip(&b.u_hat).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.u_hat.iter().map(|z| z.norm_sqr()).sum();
    (num / den).sqrt()
}

#[test]
fn method_of_lines_matches_exact_propagation() {
    for mu in [0.5, 1.0, 2.0, 4.0] {
        let mut c = config(DissipationParams::new(1, mu), 512, 32.0, 10.0, 8);
        let exact = solve_linear_exact(&c).unwrap();
        c.integrator = Integrator::MethodOfLines;
        let mol = solve(&c).unwrap();
        assert_eq!(mol.status, RunStatus::Completed);
        let d = rel_l2(mol.final_state.as_ref().unwrap(), exact.final_state.as_ref().unwrap());
        assert!(d < 1e-7, "mu = {mu}: {d}");
        for (a, b) in mol.norm_series.energy.iter().zip(&exact.norm_series.energy) {
            assert!((a - b).abs() < 1e-7 * b, "mu = {mu}: energy {a} vs {b}");
        }
    }
}

#[test]
fn singular_method_of_lines_matches_exact() {
    for mu in [0.5, 2.0] {
        let mut c = config(DissipationParams::new(1, mu).with_t0(0.0), 512, 32.0, 8.0, 6);
        let exact = solve_linear_exact(&c).unwrap();
        c.integrator = Integrator::MethodOfLines;
        let mol = solve(&c).unwrap();
        let d = rel_l2(mol.final_state.as_ref().unwrap(), exact.final_state.as_ref().unwrap());
        assert!(d < 1e-7, "mu = {mu}: {d}");
    }
}

#[test]
fn singular_mu_two_is_the_spherical_mean() {
    // for μ = 2 the multiplier is sin(tξ)/(tξ): u(t, x) is the average of u₀ over [x − t, x + t]
    let c = config(DissipationParams::new(1, 2.0).with_t0(0.0), 1024, 40.0, 3.0, 4);
    let out = solve_linear_exact(&c).unwrap();
    let st = out.final_state.unwrap();
    let u = st.u();
    let g = st.grid;
    let t = st.time;
    let erf_avg = |x: f64| {
        // (1/2t)∫ 0.1·exp(−y²) dy over [x − t, x + t]
        0.1 * std::f64::consts::PI.sqrt() / (4.0 * t) * (erf(x + t) - erf(x - t))
    };
    for j in (0..g.n_modes).step_by(7) {
        let x = g.x(j);
        assert!((u[j] - erf_avg(x)).abs() < 1e-9, "x = {x}: {} vs {}", u[j], erf_avg(x));
    }
}

// Abramowitz–Stegun 7.1.26 is too coarse here; use the series / continued fraction pair.
fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        let mut term = x;
        let mut sum = x;
        let mut k = 0.0;
        while term.abs() > 1e-17 * sum.abs() {
            k += 1.0;
            term *= -x * x / k;
            sum += term / (2.0 * k + 1.0);
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        // erfc continued fraction, Lentz
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for n in 1..200 {
            let a = n as f64 / 2.0;
            d = 1.0 / (x + a * d);
            c = x + a / c;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
    }
}

#[test]
fn reflected_problem_agrees() {
    // u for μ equals t^(1−μ)·u♯ for 2 − μ with velocity scaled by t₀^(μ−1)
    let t0 = 2.0;
    let mu = 0.5;
    let a = config(DissipationParams::new(1, mu).with_t0(t0), 512, 32.0, 10.0, 5);
    let mut b = config(DissipationParams::new(1, 2.0 - mu).with_t0(t0), 512, 32.0, 10.0, 5);
    b.data_profile = DataProfile::Gaussian {
        amplitude: 0.1 * t0.powf(mu - 1.0),
        width: 1.0,
    };
    let ua = solve_linear_exact(&a).unwrap().final_state.unwrap();
    let mut ub = solve_linear_exact(&b).unwrap().final_state.unwrap();
    let s = 10f64.powf(1.0 - mu);
    ub.u_hat.iter_mut().for_each(|z| *z *= s);
    assert!(rel_l2(&ub, &ua) < 1e-10);
}

#[test]
fn solutions_stay_real() {
    let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), 256, 32.0, 5.0, 4);
    c.data_profile = DataProfile::Gaussian {
        amplitude: 0.5,
        width: 1.5,
    };
    let out = solve(&c).unwrap();
    let st = out.final_state.unwrap();
    assert!(st.hermitian_defect() < 1e-12);
    assert!(st.reality_defect() < 1e-12);
}

#[test]
fn finite_propagation_speed() {
    let mut c = config(DissipationParams::new(1, 1.5).with_p(3.0), 1024, 32.0, 6.0, 4);
    c.data_profile = DataProfile::Plateau {
        amplitude: 0.5,
        radius: 1.0,
        edge: 2.0,
    };
    let out = solve(&c).unwrap();
    let st = out.final_state.unwrap();
    let u = st.u();
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let reach = 3.0 + (6.0 - 1.0);
    for (x, v) in st.grid.points().iter().zip(&u) {
        if x.abs() > reach + 1.0 {
            assert!(v.abs() < 1e-6 * peak, "x = {x}: {v}");
        }
    }
}

#[test]
fn duhamel_reconstruction() {
    let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), 256, 32.0, 20.0, 64);
    c.data_profile = DataProfile::Gaussian {
        amplitude: 0.5,
        width: 1.0,
    };
    c.integrator = Integrator::DuhamelCheck;
    c.output_times = log_spaced(1.0, 20.0, 65);
    let out = solve(&c).unwrap();
    let rep = out.duhamel.unwrap();
    assert!(rep.residual < 1e-3, "{rep:?}");
    assert!(rep.nonlinear_residual < 1e-2, "{rep:?}");
    let refl = duhamel_check_with(&c, &out, true).unwrap();
    assert!(refl.residual < 1e-3, "{refl:?}");
    assert!((refl.residual - rep.residual).abs() < 1e-6);
}

#[test]
fn duhamel_needs_enough_slices() {
    let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), 64, 16.0, 4.0, 4);
    c.store_slices = true;
    c.integrator = Integrator::MethodOfLines;
    let out = solve(&c).unwrap();
    assert!(matches!(duhamel_check(&c, &out), Err(epd_core::Error::Insufficient(_))));
}

#[test]
fn tricomi_paths_agree_linear() {
    let mut c = config(DissipationParams::new(1, 0.0), 512, 32.0, 5.0, 10);
    c.data_profile = DataProfile::Gaussian {
        amplitude: 0.1,
        width: 1.0,
    };
    let out = solve_tricomi(1.0, 0.0, &c).unwrap();
    assert!(out.mismatch_final < 1e-6, "{}", out.mismatch_final);
    assert!(out.mismatch_max < 1e-6, "{}", out.mismatch_max);
    assert_eq!(out.epd_params.mu, 0.5);
    assert_eq!(out.epd_params.alpha, 1.0);
}

#[test]
fn tricomi_paths_agree_semilinear() {
    let c = {
        let mut c = config(DissipationParams::new(1, 0.0).with_p(3.0), 256, 32.0, 4.0, 6);
        c.data_profile = DataProfile::Gaussian {
            amplitude: 0.5,
            width: 1.0,
        };
        c
    };
    let out = solve_tricomi(1.0, 0.5, &c).unwrap();
    assert!(out.mismatch_max < 1e-6, "{}", out.mismatch_max);
    assert_eq!(out.mapped.norm_series.len(), out.direct.norm_series.len());
}

#[test]
fn blowup_is_detected() {
    let mut c = config(DissipationParams::new(1, 0.5).with_p(2.0), 256, 64.0, 50.0, 20);
    c.data_profile = DataProfile::Gaussian {
        amplitude: 2.0,
        width: 2.0,
    };
    c.tolerances = Tolerances { rel: 1e-7, abs: 1e-10 };
    let out = solve(&c).unwrap();
    match out.status {
        RunStatus::BlowupDetected { time } => {
            assert!(time < 50.0);
            assert_eq!(*out.norm_series.times.last().unwrap(), time);
        }
        s => panic!("{s:?}"),
    }
    assert!(out.final_state.is_none());
}

#[test]
fn norm_series_round_trip_through_csv() {
    let c = config(DissipationParams::new(1, 2.0), 128, 16.0, 5.0, 6);
    let out = solve(&c).unwrap();
    let mut buf = Vec::new();
    out.norm_series.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("t,E,L2,L3,Linf\n"));
    let back = epd_core::analysis::NormSeries::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, out.norm_series);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), 128, 16.0, 5.0, 6);
    c.integrator = Integrator::ExactLinear;
    assert!(solve(&c).is_err());
    let mut c = config(DissipationParams::new(1, 2.0), 100, 16.0, 5.0, 6);
    c.integrator = Integrator::MethodOfLines;
    assert!(solve(&c).is_err());
    let mut c = config(DissipationParams::new(1, 2.0), 128, 16.0, 5.0, 6);
    c.data_slot = DataSlot::InitialDisplacement;
    assert!(solve(&c).is_err());
}

#[test]
fn duhamel_of_a_linear_run_is_exact() {
    let mut c = config(DissipationParams::new(1, 2.0), 256, 32.0, 10.0, 16);
    c.integrator = Integrator::DuhamelCheck;
    let out = solve(&c).unwrap();
    assert!(out.duhamel.unwrap().residual < 1e-8, "{:?}", out.duhamel);
}

#[test]
fn duhamel_through_the_reflected_problem() {
    let mut c = config(DissipationParams::new(1, 0.5).with_p(3.0), 256, 32.0, 10.0, 64);
    c.integrator = Integrator::DuhamelCheck;
    let out = solve(&c).unwrap();
    let direct = out.duhamel.unwrap();
    let refl = duhamel_check_with(&c, &out, true).unwrap();
    assert!(direct.residual < 1e-5 && refl.residual < 1e-5, "{direct:?} {refl:?}");
    assert!((direct.residual - refl.residual).abs() < 1e-6);
}

#[test]
fn resolution_convergence() {
    let sup = |n: usize, rel: f64| {
        let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), n, 32.0, 10.0, 4);
        c.data_profile = DataProfile::Gaussian {
            amplitude: 0.5,
            width: 1.0,
        };
        c.tolerances = Tolerances { rel, abs: 1e-14 };
        let st = solve(&c).unwrap().final_state.unwrap();
        st.u().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    };
    let a = sup(512, 1e-9);
    let b = sup(1024, 5e-10);
    assert!((a - b).abs() < 1e-5 * b, "{a} vs {b}");
}

#[test]
fn mass_outside_the_light_cone() {
    let mut c = config(DissipationParams::new(1, 2.0).with_p(3.0), 1024, 32.0, 8.0, 6);
    c.data_profile = DataProfile::Plateau {
        amplitude: 0.5,
        radius: 1.0,
        edge: 2.0,
    };
    c.store_slices = true;
    let out = solve(&c).unwrap();
    for st in &out.slices {
        let reach = 3.0 + (st.time - 1.0);
        let u = st.u();
        let total: f64 = u.iter().map(|v| v.abs()).sum();
        let outside: f64 = st
            .grid
            .points()
            .iter()
            .zip(&u)
            .filter(|(x, _)| x.abs() > reach + 0.5)
            .map(|(_, v)| v.abs())
            .sum();
        assert!(outside <= 1e-8 * total, "t = {}: {}", st.time, outside / total);
        assert!(st.reality_defect() < 1e-10);
    }
}

#[test]
fn exact_run_at_the_start_time_is_the_datum() {
    let mut c = config(DissipationParams::new(1, 3.0), 64, 16.0, 2.0, 4);
    c.output_times.insert(0, 1.0);
    c.store_slices = true;
    let out = solve_linear_exact(&c).unwrap();
    let first = &out.slices[0];
    let datum = to_spectral(&c.data_profile.sample(&c.grid).unwrap());
    assert_eq!(first.v_hat, datum);
    assert!(first.u_hat.iter().all(|z| z.norm() == 0.0));
    assert_eq!(out.norm_series.times[0], 1.0);
}

