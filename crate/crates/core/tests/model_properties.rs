//! Statistical agreement between the samplers, the densities, and the
//! deterministic integrals, plus shape properties of the capacity objective.

mod common;

use common::{has_interior_peak, is_quasiconcave, linspace, random_scenario, seeded};
use rand::Rng;
use rasec::avg_secrecy::{avg_cs_mc, avg_cs_quad, optimize_alpha};
use rasec::channel::{large_scale, pdf_channel_power, LinkFading};
use rasec::geometry::{
    alpha_max, boresight_from_alpha, cos_epsilon, phi_inv, DeflectionAngles, End, Scenario,
};
use rasec::los_solver::solve_near_optimal;
use rasec::outage::sop_mc;
use rasec::specfun::{integrate, QuadratureSpec};

/// Draw a (scenario, alpha) pair with a healthy user-side cosine.
fn scenario_and_alpha(rng: &mut rand_chacha::ChaCha8Rng) -> (Scenario, f64) {
    loop {
        let s = random_scenario(rng);
        let hi = alpha_max(&s).unwrap();
        if hi < 1.0 + 1e-3 {
            continue;
        }
        let alpha = rng.gen_range(1.0..hi);
        if phi_inv(&s, alpha, End::User).unwrap() > 1e-3 {
            return (s, alpha);
        }
    }
}

/// Kolmogorov-Smirnov agreement between sampled user powers and the CDF
/// obtained by integrating the density, below the 1% critical value.
#[test]
fn sampling_matches_density_ks() {
    let n = 100_000usize;
    // Large-sample 1% critical value of the one-sample KS statistic.
    let critical = 1.62762 / (n as f64).sqrt();
    let mut rng = seeded(2101);
    for case in 0..5 {
        let (s, alpha) = scenario_and_alpha(&mut rng);
        let link = LinkFading::new(&s, alpha, End::User).unwrap();
        let mut draws: Vec<f64> = (0..n).map(|_| link.sample(&mut rng)).collect();
        draws.sort_by(f64::total_cmp);
        let spec = QuadratureSpec::default().with_tols(1e-11, 1e-11);
        let pdf = |x: f64| pdf_channel_power(x, &s, alpha, End::User).unwrap();
        let mut ks = 0.0f64;
        let mut cdf = integrate(&pdf, 0.0, draws[0], &spec).unwrap();
        for i in 0..n {
            if i > 0 {
                cdf += integrate(&pdf, draws[i - 1], draws[i], &spec).unwrap();
            }
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((cdf - lo).abs()).max((cdf - hi).abs());
        }
        assert!(
            ks < critical,
            "case {case}: KS {ks} >= {critical} at alpha {alpha} for {s:?}"
        );
    }
}

/// The distribution of the channel power does not depend on the carrier
/// phase of the direct path.
#[test]
fn los_phase_is_irrelevant_to_power() {
    let s1 = Scenario::default();
    // A different wavelength only rotates the deterministic phase.
    let s2 = Scenario {
        lambda: 0.0712,
        ..Scenario::default()
    };
    let n = 200_000u64;
    for (alpha, end) in [(1.3, End::User), (2.2, End::Eavesdropper)] {
        let stats = |s: &Scenario, seed: u64| {
            let link = LinkFading::new(s, alpha, end).unwrap();
            let mut rng = seeded(seed);
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for _ in 0..n {
                let p = link.sample(&mut rng);
                sum += p;
                sumsq += p * p;
            }
            let mean = sum / n as f64;
            let var = (sumsq - sum * sum / n as f64) / (n as f64 - 1.0);
            (mean, (var / n as f64).sqrt())
        };
        let (m1, se1) = stats(&s1, 31);
        let (m2, se2) = stats(&s2, 32);
        let combined = (se1 * se1 + se2 * se2).sqrt();
        assert!(
            (m1 - m2).abs() <= 3.0 * combined,
            "phase changed the mean power: {m1} vs {m2} (3 se = {})",
            3.0 * combined
        );
    }
}

/// The Monte Carlo capacity estimator is unbiased against quadrature.
#[test]
fn mc_estimator_unbiased() {
    let s = Scenario::default();
    let alpha = 1.7;
    let quad = avg_cs_quad(&s, alpha, &QuadratureSpec::default())
        .unwrap()
        .value;
    let n_seeds = 50;
    let means: Vec<f64> = (0..n_seeds)
        .map(|seed| avg_cs_mc(&s, alpha, 10_000, 4200 + seed).unwrap().value)
        .collect();
    let grand = means.iter().sum::<f64>() / n_seeds as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (n_seeds as f64 - 1.0);
    let se_grand = (var / n_seeds as f64).sqrt();
    assert!(
        (grand - quad).abs() <= 3.0 * se_grand,
        "grand mean {grand} vs quadrature {quad} (3 se = {})",
        3.0 * se_grand
    );
}

/// Monte Carlo and quadrature agree on random instances.
#[test]
fn mc_and_quadrature_agree_on_random_instances() {
    let mut rng = seeded(2301);
    for case in 0..10 {
        let (s, alpha) = scenario_and_alpha(&mut rng);
        let quad = avg_cs_quad(&s, alpha, &QuadratureSpec::default())
            .unwrap()
            .value;
        let mc = avg_cs_mc(&s, alpha, 200_000, 77 + case).unwrap();
        assert!(
            (quad - mc.value).abs() <= 3.0 * mc.std_error + 1e-6,
            "case {case}: quad {quad} vs mc {} (se {}) for {s:?}",
            mc.value,
            mc.std_error
        );
    }
}

/// At the reference scenario's capacity optimum, a million-sample Monte
/// Carlo run agrees with quadrature within its own standard error.
#[test]
fn mc_agrees_with_quadrature_at_the_capacity_optimum() {
    let s = Scenario::default();
    let spec = QuadratureSpec::default();
    let opt = optimize_alpha(&s, 1e-4, &spec).unwrap();
    let mc = avg_cs_mc(&s, opt.alpha_opt, 1_000_000, 2718).unwrap();
    assert!(
        (opt.value.value - mc.value).abs() <= 3.0 * mc.std_error,
        "quad {} vs mc {} (3 se = {})",
        opt.value.value,
        mc.value,
        3.0 * mc.std_error
    );
}

/// Full-sphere scan of the line-of-sight capacity never beats the optimum
/// restricted to the eavesdropper-to-user extension line: steering off the
/// line either loses user gain or leaks toward the eavesdropper.
#[test]
fn extension_line_contains_the_global_optimum() {
    let mut rng = seeded(2401);
    let mut scenarios = vec![Scenario::default()];
    for _ in 0..2 {
        scenarios.push(random_scenario(&mut rng));
    }
    for s in &scenarios {
        let sol = solve_near_optimal(s).unwrap();
        let gamma = s.snr();
        let (lb, le) = (large_scale(s, End::User), large_scale(s, End::Eavesdropper));
        let mut grid_best = f64::NEG_INFINITY;
        for iz in 0..60 {
            let theta_z = std::f64::consts::PI * (iz as f64 + 0.5) / 60.0;
            for ia in 0..120 {
                let theta_a =
                    -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (ia as f64 + 0.5) / 120.0;
                let dir = DeflectionAngles { theta_z, theta_a }.direction();
                let gb = gamma * lb * s.g_0 * cos_epsilon(dir, s.q_b).unwrap().max(0.0);
                let ge = gamma * le * s.g_0 * cos_epsilon(dir, s.q_e).unwrap().max(0.0);
                let c = (((1.0 + gb) / (1.0 + ge)).log2()).max(0.0);
                grid_best = grid_best.max(c);
            }
        }
        assert!(
            grid_best <= sol.capacity + 1e-9,
            "off-line boresight beat the line optimum: {grid_best} vs {} for {s:?}",
            sol.capacity
        );
    }
}

/// The quadrature objective is quasi-concave in the adjustment factor, with
/// a genuine interior peak at the reference scenario.
#[test]
fn capacity_objective_is_quasiconcave() {
    // Integration noise must sit well below the 1e-9 plateau tolerance.
    let spec = QuadratureSpec::default().with_tols(1e-10, 1e-10);
    let reference = Scenario::default();
    let hi = alpha_max(&reference).unwrap();
    let values: Vec<f64> = linspace(1.0, hi, 64)
        .iter()
        .map(|&a| avg_cs_quad(&reference, a, &spec).unwrap().value)
        .collect();
    assert!(
        has_interior_peak(&values, 1e-9),
        "reference curve not single-peaked"
    );

    let mut rng = seeded(2501);
    for case in 0..10 {
        let s = random_scenario(&mut rng);
        let hi = alpha_max(&s).unwrap().max(1.0);
        if hi < 1.0 + 1e-6 {
            continue;
        }
        let values: Vec<f64> = linspace(1.0, hi, 64)
            .iter()
            .map(|&a| avg_cs_quad(&s, a, &spec).unwrap().value)
            .collect();
        assert!(
            is_quasiconcave(&values, 1e-9),
            "case {case}: objective not quasi-concave for {s:?}"
        );
    }
}

/// The optimized average secrecy capacity never decreases with transmit power.
#[test]
fn optimal_capacity_monotone_in_power() {
    let spec = QuadratureSpec::default();
    let mut last = f64::NEG_INFINITY;
    for p in [10.0, 13.0, 16.0, 19.0, 22.0, 25.0] {
        let s = Scenario {
            p_dbm: p,
            ..Scenario::default()
        };
        let v = optimize_alpha(&s, 1e-4, &spec).unwrap().value.value;
        assert!(
            v >= last - 1e-9,
            "capacity decreased with power: {v} < {last} at {p} dBm"
        );
        last = v;
    }
}

/// At the orthogonal boresight the outage simulation reduces to the user
/// link alone and matches the noncentral chi-square tail.
#[test]
fn outage_mc_matches_chi_square_tail_at_orthogonal_boresight() {
    let s = Scenario {
        p_dbm: 25.0,
        ..Scenario::default()
    };
    let am = alpha_max(&s).unwrap();
    // The eavesdropper gain clamps to zero there (up to one ulp of cosine).
    let b = boresight_from_alpha(&s, am).unwrap();
    assert!(cos_epsilon(b.direction, s.q_e).unwrap().abs() < 1e-12);
    for rs in [0.5, 1.5, 2.5] {
        let point = sop_mc(&s, am, rs, 2_000_000, 2600).unwrap();
        let theory = point.sop_theory.unwrap();
        assert!(
            (point.sop_mc - theory).abs() <= point.ci95_halfwidth,
            "rs {rs}: mc {} vs chi-square tail {theory} (ci {})",
            point.sop_mc,
            point.ci95_halfwidth
        );
    }
}
