use minlen::algebra::DeformationParams;
use minlen::eigen::{p_space_energies, q_space_energies, richardson_levels, SpuriousFilter};
use minlen::models::{DisplacedOscillatorParams, Model, SwansonParams};
use minlen::par::Execution;
use minlen::pct::{build_q_map, build_q_map_numeric, secant_squared_levels, QMapHint};
use minlen::algebra::MomentumGrid;
use proptest::prelude::*;

fn displaced(beta: f64, gamma: f64, lambda: f64) -> Model {
    let d = DeformationParams::new(1.0, beta, gamma).unwrap();
    Model::Displaced(DisplacedOscillatorParams::new(d, 1.0, 1.0, lambda).unwrap())
}

fn swanson(beta: f64, lambda: f64, delta: f64) -> Model {
    let d = DeformationParams::new(1.0, beta, 0.0).unwrap();
    Model::Swanson(SwansonParams::new(d, 1.0, 1.0, lambda, delta).unwrap())
}

#[test]
fn numeric_q_map_matches_arctan() {
    for m in [displaced(0.25, 0.0, 0.3), swanson(0.5, 0.3, 0.1)] {
        let c = m.coefficients().unwrap();
        let beta = m.deformation().beta();
        let exact = build_q_map(&c, Some(QMapHint::DeformedSquare { beta })).unwrap();
        let numeric = build_q_map_numeric(&c).unwrap();
        for i in 0..100 {
            let p = -30.0 + 0.6 * i as f64 + 0.1234;
            let (a, b) = (exact.q(p), numeric.q(p));
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-3), "p={p}: {a} vs {b}");
        }
        assert!((exact.q(2.0) - (2.0 * beta.sqrt()).atan() / beta.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn q_space_matches_closed_form_across_models() {
    let models = [
        displaced(0.1, 0.0, 0.5),
        displaced(0.3, 0.15, -1.0),
        displaced(0.05, 0.05, 2.0),
        swanson(0.5, 0.3, 0.1),
        swanson(0.2, -0.1, 0.4),
        swanson(1.0, 0.2, 0.2),
    ];
    for m in models {
        let s = q_space_energies(&m, 2000, 8, Execution::default()).unwrap();
        for (n, e) in s.eigenvalues.iter().enumerate() {
            let want = m.energy(n).re;
            assert!((e.re - want).abs() < 1e-6 * want.abs(), "{} n={n}: {} vs {want}", m.name(), e.re);
        }
    }
}

#[test]
fn displaced_p_space_is_real_across_beta() {
    for beta in [0.05, 0.1, 0.2, 0.4] {
        let m = displaced(beta, 0.0, 0.5);
        let grid = MomentumGrid::symmetric(20.0, 600).unwrap();
        let s = p_space_energies(&m, &grid, 4, SpuriousFilter::default()).unwrap();
        assert!(s.is_real(), "beta={beta}: {:?}", s.eigenvalues);
    }
}

#[test]
fn swanson_p_space_tracks_closed_form() {
    let m = swanson(0.5, 0.3, 0.1);
    let grid = MomentumGrid::symmetric(40.0, 1000).unwrap();
    let s = p_space_energies(&m, &grid, 4, SpuriousFilter::disabled()).unwrap();
    assert!(s.is_real());
    for (n, e) in s.eigenvalues.iter().enumerate() {
        let want = m.energy(n).re;
        assert!((e.re - want).abs() < 1e-4 * want, "n={n}: {e} vs {want}");
    }
}

#[test]
fn weak_well_converges_more_slowly() {
    let (beta, nu) = (0.3, 0.03);
    let levels = secant_squared_levels(nu, beta).unwrap();
    let sb = beta.sqrt();
    let half = std::f64::consts::FRAC_PI_2 / sb;
    let v = move |q: f64| Ok(nu / (sb * q).cos().powi(2));
    let coarse = richardson_levels(&v, -half, half, 1000, 4, Execution::default()).unwrap();
    let fine = richardson_levels(&v, -half, half, 4000, 4, Execution::default()).unwrap();
    for n in 0..4 {
        let (ec, ef) = ((coarse[n] - levels(n)).abs(), (fine[n] - levels(n)).abs());
        assert!(ef < 2e-5 * levels(n) && ef < ec, "n={n}: {ec:e} -> {ef:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // below nu/beta ~ 0.5 the states leave the walls almost linearly and the
    // h^2 extrapolation loses digits; see weak_well_converges_more_slowly
    #[test]
    fn sec2_levels_match_numeric(beta in 0.05f64..1.0, ratio in 0.5f64..20.0) {
        let nu = ratio * beta;
        let levels = secant_squared_levels(nu, beta).unwrap();
        let sb = beta.sqrt();
        let half = std::f64::consts::FRAC_PI_2 / sb;
        let v = move |q: f64| Ok(nu / (sb * q).cos().powi(2));
        let numeric = richardson_levels(&v, -half, half, 2000, 8, Execution::default()).unwrap();
        for (n, e) in numeric.iter().enumerate() {
            let want = levels(n);
            prop_assert!((e - want).abs() < 1e-6 * want, "n={} {} vs {}", n, e, want);
        }
    }

    #[test]
    fn spacing_is_quadratic(beta in 0.01f64..2.0, ratio in 0.0f64..10.0, n in 0usize..20) {
        let well = minlen::pct::SecantSquaredWell::new(ratio * beta, beta).unwrap();
        let gap = well.level(n + 1) - well.level(n);
        let want = beta * (2 * n + 1) as f64 + 2.0 * well.a() * beta.sqrt();
        prop_assert!((gap - want).abs() < 1e-11 * want.max(1.0));
    }
}
