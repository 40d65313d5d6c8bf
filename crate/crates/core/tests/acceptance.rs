//! Acceptance criteria. Prints one PASS/FAIL line per criterion. With
//! `ACCEPTANCE_STRICT=1` the process exits non-zero if any criterion fails;
//! otherwise it only reports, so the rest of the suite still runs.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use minlen::algebra::{commutator_residual, uncertainty_check, DeformationParams, GridFunction, MomentumGrid};
use minlen::eigen::{
    build_p_space_matrix, complex_onset, p_space_energies, q_space_energies, HamiltonianMatrix, SpuriousFilter,
};
use minlen::inner::QuadratureSpec;
use minlen::models::{swanson_beta_c, CriticalBeta, DisplacedOscillatorParams, MetricFunction, Model, SwansonParams};
use minlen::par::Execution;
use minlen::verify::{
    gamma_independence, gram_matrix, hermiticity_defect, ode_residual, pseudo_hermiticity_residual,
    NON_HERMITIAN_FLOOR,
};
use minlen::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn deformation(beta: f64, gamma: f64) -> DeformationParams {
    DeformationParams::new(1.0, beta, gamma).unwrap()
}

fn displaced(beta: f64, gamma: f64, lambda: f64) -> Model {
    Model::Displaced(DisplacedOscillatorParams::new(deformation(beta, gamma), 1.0, 1.0, lambda).unwrap())
}

fn swanson(beta: f64, lambda: f64, delta: f64) -> Model {
    Model::Swanson(SwansonParams::new(deformation(beta, 0.0), 1.0, 1.0, lambda, delta).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn q_space_agreement(model: &Model) -> Result<f64> {
    let numeric = q_space_energies(model, 2000, 8, Execution::default())?;
    Ok(numeric.eigenvalues.iter().enumerate().map(|(n, e)| rel(e.re, model.energy(n).re)).fold(0.0, f64::max))
}

fn criterion_1() -> Result<Outcome> {
    let m = displaced(0.1, 0.0, 0.5);
    let e0 = m.energy(0).re;
    let worst = q_space_agreement(&m)?;
    outcome(
        worst < 1e-6 && (e0 - 0.65062461).abs() < 5e-9,
        format!("E_0 = {e0:.10}, max rel err n<=7 = {worst:.2e} (tol 1e-6)"),
    )
}

fn criterion_2() -> Result<Outcome> {
    let m = swanson(0.5, 0.2, 0.2);
    let e0 = m.energy(0);
    let worst = q_space_agreement(&m)?;
    outcome(
        worst < 1e-6 && (e0.re - 0.45).abs() < 1e-15 && e0.im == 0.0,
        format!("E_0 = {:.17}, max rel err n<=7 = {worst:.2e} (tol 1e-6)", e0.re),
    )
}

fn swanson_pair(beta: f64) -> Result<bool> {
    let m = swanson(beta, 0.2, 0.2);
    let grid = MomentumGrid::symmetric(m.default_p_box(), 1000)?;
    Ok(p_space_energies(&m, &grid, 8, SpuriousFilter::disabled())?.has_conjugate_pair())
}

fn criterion_3() -> Result<Outcome> {
    let params = SwansonParams::new(deformation(0.5, 0.0), 1.0, 1.0, 0.2, 0.2)?;
    let bc = match swanson_beta_c(&params)? {
        CriticalBeta::Value(v) => v,
        CriticalBeta::NoTransition => f64::NAN,
    };
    let below = swanson_pair(1.9)?;
    let above = swanson_pair(2.1)?;
    let onset = complex_onset(1.9, 2.1, 8, swanson_pair)?;
    let onset_ok = onset.is_some_and(|b| rel(b, 2.0) < 0.01);
    outcome(
        (bc - 2.0).abs() < 1e-12 && !below && above && onset_ok,
        format!("beta_c = {bc}, pair at 1.9: {below}, pair at 2.1: {above}, numeric onset: {onset:?}"),
    )
}

fn energy_matrix(m: &Model, grid: &MomentumGrid) -> Result<HamiltonianMatrix> {
    let c = m.coefficients()?;
    Ok(HamiltonianMatrix::Real(build_p_space_matrix(&c, grid)?).to_energy_units(&c.energy_map()))
}

fn criterion_4() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [displaced(0.1, 0.0, 0.5), swanson(0.5, 0.2, 0.2)] {
        let grid = MomentumGrid::symmetric(m.default_p_box(), 2000)?;
        let h = energy_matrix(&m, &grid)?;
        let r = pseudo_hermiticity_residual(&h, &m.metric()?, &m.deformation(), &grid)?;
        let defect = hermiticity_defect(&h, &m.deformation(), &grid)?;
        pass &= r.value < 1e-6 && defect > NON_HERMITIAN_FLOOR;
        parts.push(format!("{}: residual {:.2e}, defect {:.2e}", m.name(), r.value, defect));
    }
    outcome(pass, parts.join("; ") + " (need residual < 1e-6, defect > 1e-2)")
}

fn criterion_5() -> Result<Outcome> {
    let quad = QuadratureSpec::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [displaced(0.1, 0.0, 0.5), swanson(0.5, 0.2, 0.2)] {
        let states = m.eigenstates(6, Execution::default())?;
        let fns: Vec<_> = states.iter().map(|s| move |p: f64| s.value(p)).collect();
        let (_, r) = gram_matrix(&fns, &m.metric()?, &m.deformation(), &quad, Execution::default())?;
        pass &= r.value < 1e-7;
        parts.push(format!("{}: |G-I|max {:.2e}", m.name(), r.value));
        if let Model::Displaced(_) = m {
            let (g, _) = gram_matrix(&fns, &MetricFunction::identity(), &m.deformation(), &quad, Execution::default())?;
            let off = (0..6)
                .flat_map(|i| (0..6).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| g[i][j].norm())
                .fold(0.0, f64::max);
            pass &= off > 1e-3;
            parts.push(format!("plain product max off-diagonal {off:.2e}"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Result<Outcome> {
    let m = displaced(0.1, 0.0, 0.5);
    let grid = MomentumGrid::symmetric(m.default_p_box(), 1000)?;
    let r = gamma_independence(&m, &[0.0, 0.05, 0.1], 6, &grid, Execution::default())?;
    outcome(r.value < 1e-6, format!("max relative spread {:.2e} (tol 1e-6)", r.value))
}

fn criterion_7() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for m in [displaced(0.1, 0.0, 0.5), swanson(0.5, 0.2, 0.2)] {
        for s in m.eigenstates(6, Execution::default())? {
            worst = worst.max(ode_residual(&|p| s.derivatives(p), s.problem(), s.epsilon()).value);
        }
    }
    let s = displaced(0.1, 0.0, 0.5).eigenstate(0)?;
    let injected = ode_residual(&|p| s.derivatives(p), s.problem(), s.epsilon() + 0.1).value;
    outcome(
        worst < 1e-8 && injected > 1e-3,
        format!("max residual n<=5 {worst:.2e} (tol 1e-8), with eps_0+0.1: {injected:.2e}"),
    )
}

fn criterion_8() -> Result<Outcome> {
    // (a) textbook undeformed spectra
    let mut cont: f64 = 0.0;
    let (lam, lam_s, del_s) = (0.5, 0.3, 0.1);
    let d = displaced(1e-8, 0.0, lam);
    let s = swanson(1e-8, lam_s, del_s);
    for n in 0..=10 {
        let k = n as f64 + 0.5;
        cont = cont.max((d.energy(n).re - (k + 0.5 * lam * lam)).abs());
        cont = cont.max((s.energy(n) - k * (1.0f64 - 4.0 * lam_s * del_s).sqrt()).norm());
    }
    // (b) fourth-order commutator convergence
    let h = displaced(0.1, 0.0, 0.5);
    let st = h.eigenstate(0)?;
    let mut grid = MomentumGrid::symmetric(10.0, 201)?;
    let mut res = Vec::new();
    for _ in 0..3 {
        res.push(commutator_residual(&h.deformation(), &GridFunction::from_fn(grid, |p| st.value(p))?)?);
        grid = grid.refined();
    }
    let ratios: Vec<f64> = res.windows(2).map(|w| w[0] / w[1]).collect();
    let order_ok = ratios.iter().all(|r| (r - 16.0).abs() <= 3.0);
    // (c) generalized uncertainty for the Hermitian ground state
    let herm = displaced(0.1, 0.0, 0.0);
    let g0 = herm.eigenstate(0)?;
    let grid = MomentumGrid::symmetric(40.0, 8001)?;
    let u = uncertainty_check(&herm.deformation(), &GridFunction::from_fn(grid, |p| g0.value(p))?, &herm.deformation())?;
    // this state saturates the bound, so equality holds up to discretization
    let gap = (u.lhs - u.rhs) / u.rhs;
    let gup = u.satisfied(1e-8) && u.delta_x >= u.min_length;
    outcome(
        cont < 1e-6 && order_ok && gup,
        format!(
            "beta->0 max gap {cont:.2e}; commutator ratios {ratios:.2?}; dx dp / bound - 1 = {gap:.1e}; dx = {:.6} >= {:.6}",
            u.delta_x, u.min_length
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>, Duration); 8] = [
        ("1 displaced spectrum", criterion_1, Duration::from_secs(5)),
        ("2 swanson spectrum", criterion_2, Duration::from_secs(5)),
        ("3 reality transition", criterion_3, Duration::from_secs(60)),
        ("4 pseudo-hermiticity", criterion_4, Duration::from_secs(30)),
        ("5 eta-orthonormality", criterion_5, Duration::from_secs(10)),
        ("6 gamma-independence", criterion_6, Duration::from_secs(30)),
        ("7 ode residual", criterion_7, Duration::from_secs(5)),
        ("8 limits and algebra", criterion_8, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let result = run();
        let elapsed = t.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = if elapsed <= budget { "" } else { " OVER BUDGET" };
        let pass = pass && elapsed <= budget;
        println!(
            "{} criterion {name}: {detail} [{:.2}s / {}s{timing}]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        failed += usize::from(!pass);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
