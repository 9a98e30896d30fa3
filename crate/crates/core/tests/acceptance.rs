//! One test per acceptance criterion. Each prints a single
//! `[PASS]`/`[FAIL] criterion N: ...` line to stderr, uncaptured, before
//! asserting.

use std::io::Write;
use std::sync::Arc;

use gbflts::gb::{evolve, evolve_trajectory, flts_step, nonlinear_flow, to_u, FltsStepper, GBState, SolverConfig, UField};
use gbflts::harness::{
    csv_string, error_metric, fit_order, run_convergence, smooth_data, InitialData, ReferenceKind, StudySpec,
};
use gbflts::oracles::{linear_exact, rk4_reference, OracleConfig};
use gbflts::roughdata::{generate, normalize, smoothed_noise, PsiMode, RoughDataSpec};
use gbflts::spectral::{Complex64, Cutoff, Field, SpectralGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUGH_S: [f64; 4] = [0.2, 1.0 / 3.0, 0.5, 0.8];

fn verdict(n: u32, pass: bool, detail: &str) {
    let line = format!("[{}] criterion {n}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rough_band(s: f64) -> (f64, f64) {
    (s / 2.0, if s > 0.7 { 0.10 } else { 0.08 })
}

fn random_field(g: &Arc<SpectralGrid>, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<Complex64> =
        (0..g.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Field::from_values(g.clone(), vals).unwrap()
}

fn max_coeff_diff(a: &Field, b: &Field) -> f64 {
    a.coeffs().iter().zip(b.coeffs().iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn criterion_1_rough_data_rates() {
    let report = run_convergence(&StudySpec::desk_scale(ROUGH_S.to_vec(), 1)).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for s in ROUGH_S {
        let (target, tol) = rough_band(s);
        let order = report.order_for(s);
        let ok = order.is_some_and(|p| (p - target).abs() <= tol);
        pass &= ok;
        parts.push(format!(
            "s={s:.3} order={} target={target:.3}±{tol:.2}",
            order.map_or("none".into(), |p| format!("{p:.4}"))
        ));
    }
    verdict(1, pass, &format!("desk-scale rough-data rates, seed 1: {}", parts.join("; ")));
}

/// Same pipeline with the smoothing exponent raised to `s + 1/2` (still
/// normalized in `H^s`). Reported only; the generator is not changed.
#[test]
#[ignore = "diagnostic, several minutes"]
fn diagnostic_regularity_corrected_rates() {
    let m = 1 << 12;
    let g = SpectralGrid::new(m).unwrap();
    let spec = StudySpec::desk_scale(vec![0.5], 1);
    let tref = spec.reference_tau();
    let mut parts = Vec::new();
    for s in ROUGH_S {
        let (z1, c) = smoothed_noise(&g, s + 0.5, 1, 0);
        let st = GBState::new(normalize(&z1, c, s).unwrap(), Field::zeros(g.clone())).unwrap();
        let r = evolve(&st, &SolverConfig::new(tref, 0.5, m)).unwrap();
        let pts: Vec<(f64, f64)> = spec
            .tau_list
            .iter()
            .map(|&t| (t, error_metric(&evolve(&st, &SolverConfig::new(t, 0.5, m)).unwrap(), &r).unwrap().total))
            .collect();
        parts.push(format!("s={s:.3} order={:.4}", fit_order(&pts).unwrap()));
    }
    let line = format!("[INFO] regularity-corrected data: {}\n", parts.join("; "));
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

#[test]
fn criterion_2_smooth_data_first_order() {
    let spec = StudySpec {
        grid_size: 64,
        data: InitialData::Smooth,
        reference: ReferenceKind::Rk4 { tau_ref: None },
        ..StudySpec::desk_scale(vec![2.0], 1)
    };
    let report = run_convergence(&spec).unwrap();
    let order = report.order_for(2.0);
    let errs: Vec<f64> = report.rows.iter().filter_map(|r| r.error.map(|e| e.total)).collect();
    let inversions = errs.windows(2).filter(|w| w[1] > w[0]).count();
    let pass = order.is_some_and(|p| (p - 1.0).abs() <= 0.1) && inversions <= 1;
    verdict(
        2,
        pass,
        &format!(
            "smooth data M=64 rk4 reference: order={} (1.0±0.1), error inversions={inversions}",
            order.map_or("none".into(), |p| format!("{p:.4}"))
        ),
    );
}

#[test]
fn criterion_3_zero_data_drift() {
    let g = SpectralGrid::new(64).unwrap();
    let zero = GBState::zero(g.clone());
    let drift = |tau: f64| {
        evolve_trajectory(&zero, &SolverConfig::new(tau, 0.5, 64), Some(1))
            .unwrap()
            .snapshots
            .iter()
            .map(|s| s.state.z().l2_norm())
            .fold(0.0, f64::max)
    };
    let (d1, d2) = (drift(1e-3), drift(5e-4));
    let ratio = d1 / d2;
    let rk = rk4_reference(&zero, &OracleConfig::rk4(1e-3, 64), 0.5).unwrap();
    let rk_z = rk.z().l2_norm();
    let pass = (1.8..=2.2).contains(&ratio) && rk_z <= 1e-14;
    verdict(
        3,
        pass,
        &format!("zero data: FLTS drift {d1:.4e}/{d2:.4e} ratio={ratio:.4} in [1.8,2.2], rk4 ‖z‖={rk_z:.1e} ≤ 1e-14"),
    );
}

#[test]
fn criterion_4_oracle_equivalence() {
    let g = SpectralGrid::new(32).unwrap();
    let st = smooth_data(g.clone());
    let flts = evolve(&st, &SolverConfig::new(1e-5, 0.1, 32)).unwrap();
    let rk = rk4_reference(&st, &OracleConfig::rk4(1e-4, 32), 0.1).unwrap();
    let e = error_metric(&flts, &rk).unwrap().total;

    let rk_lin = rk4_reference(&st, &OracleConfig::rk4(1e-4, 32).with_nonlinearity(false), 0.1).unwrap();
    let exact = linear_exact(&st, 0.1);
    let d = (rk_lin.z() - exact.z()).l2_norm();

    let pass = e <= 1e-6 && d <= 1e-9;
    verdict(4, pass, &format!("FLTS vs rk4 combined error={e:.3e} ≤ 1e-6, linear rk4 vs exact L²={d:.3e} ≤ 1e-9"));
}

#[test]
fn criterion_5_structural_invariants() {
    let g = SpectralGrid::new(128).unwrap();
    let mut failures = Vec::new();

    let mut worst_idem = 0.0f64;
    let mut nonexpansive = true;
    let mut worst_bracket = 0.0f64;
    let mut worst_re = 0.0f64;
    for seed in 0..16 {
        let f = random_field(&g, seed);
        let cut = Cutoff::from_tau(1.0 / (1.0 + seed as f64 * 150.0)).unwrap();
        let p = f.project(cut);
        worst_idem = worst_idem.max(max_coeff_diff(&p.project(cut), &p));
        nonexpansive &= p.l2_norm() <= f.l2_norm();
        let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        worst_bracket = worst_bracket
            .max(max_coeff_diff(&f.bracket_op(1.0).bracket_op(-1.0), &f) / scale)
            .max(max_coeff_diff(&f.bracket_op(-1.0).bracket_op(1.0), &f) / scale);

        let w = UField(f.scale(Complex64::new(0.3, 0.0)));
        let out = nonlinear_flow(&w, 1e-2, Some(Cutoff::from_tau(1e-3).unwrap()), true);
        worst_re = worst_re.max(max_coeff_diff(&out.0.real_part(), &w.0.real_part()));
    }
    if worst_idem != 0.0 || !nonexpansive {
        failures.push("projection");
    }
    if worst_bracket > 1e-13 {
        failures.push("bracket");
    }
    if worst_re > 1e-13 {
        failures.push("real part");
    }

    let st = generate(&RoughDataSpec::new(0.5, 128, 3).with_psi(PsiMode::Rough)).unwrap();
    let traj = evolve_trajectory(&st, &SolverConfig::new(1e-3, 0.2, 128), Some(20)).unwrap();
    let mut worst_imag = 0.0f64;
    for snap in &traj.snapshots {
        for f in [snap.state.z(), snap.state.zt()] {
            let vals = Field::from_coeffs(g.clone(), f.coeffs().into_owned()).unwrap().values().into_owned();
            let amp = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            worst_imag = worst_imag.max(vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / amp);
        }
    }
    if worst_imag > 1e-10 {
        failures.push("reality");
    }

    let mut leaks = 0usize;
    for tau in [0.25, 1e-2, 1e-3] {
        let cfg = SolverConfig::new(tau, tau, 128);
        let u = to_u(&st, None);
        let out = flts_step(&u, &cfg).unwrap();
        let kmax = (1.0 / tau).sqrt();
        leaks += (0..g.len())
            .filter(|&i| (g.wavenumber(i) as f64) > kmax || (g.wavenumber(i) as f64) < -kmax)
            .filter(|&i| out.coeffs()[i] != Complex64::new(0.0, 0.0))
            .count();
        let mut stepper = FltsStepper::new(g.clone(), &cfg).unwrap();
        let mut c = u.coeffs().into_owned();
        stepper.step(&mut c).unwrap();
        leaks += (0..g.len())
            .filter(|&i| (g.wavenumber(i) * g.wavenumber(i)) as f64 > 1.0 / tau)
            .filter(|&i| c[i] != Complex64::new(0.0, 0.0))
            .count();
    }
    if leaks != 0 {
        failures.push("band support");
    }

    verdict(
        5,
        failures.is_empty(),
        &format!(
            "invariants: idempotence={worst_idem:.1e} nonexpansive={nonexpansive} bracket={worst_bracket:.1e} \
             reality={worst_imag:.1e} band leaks={leaks} Re-drift={worst_re:.1e}{}",
            if failures.is_empty() { String::new() } else { format!(" (failed: {})", failures.join(", ")) }
        ),
    );
}

#[test]
fn criterion_6_generator_contract() {
    let m = 1 << 12;
    let g = SpectralGrid::new(m).unwrap();
    let mut worst_norm = 0.0f64;
    let mut identical = true;
    let mut worst_mean = 0.0f64;
    for s in ROUGH_S {
        let spec = RoughDataSpec::new(s, m, 7);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        worst_norm = worst_norm.max((a.z().sobolev_norm(s) - 1.0).abs());
        identical &= a.z().coeffs() == b.z().coeffs() && a.zt().coeffs() == b.zt().coeffs();
        let (z1, _) = smoothed_noise(&g, s, 7, 0);
        worst_mean = worst_mean.max(z1.coeff(0).norm());
    }
    let pass = worst_norm <= 1e-12 && identical && worst_mean == 0.0;
    verdict(
        6,
        pass,
        &format!("generator: |‖φ₀‖_Hs − 1|={worst_norm:.1e} ≤ 1e-12, bit-identical={identical}, |Z₁(0)|={worst_mean:.1e}"),
    );
}

fn numeric_columns(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|line| {
            let mut cols: Vec<&str> = line.split(',').collect();
            cols.remove(5);
            cols.join(",")
        })
        .collect()
}

#[test]
fn criterion_7_harness_determinism() {
    let spec = |workers| StudySpec {
        s_list: vec![0.5, 0.8],
        tau_list: vec![1e-2, 5e-3, 2.5e-3],
        grid_size: 256,
        reference: ReferenceKind::FltsFine { divisor: 8 },
        workers: Some(workers),
        ..StudySpec::desk_scale(vec![], 11)
    };
    let one = csv_string(&run_convergence(&spec(1)).unwrap());
    let eight = csv_string(&run_convergence(&spec(8)).unwrap());
    let same = numeric_columns(&one) == numeric_columns(&eight);

    let pts: Vec<(f64, f64)> = (0..7).map(|j| 1e-2 / f64::from(1u32 << j)).map(|t| (t, 3.0 * t.powf(0.25))).collect();
    let p = fit_order(&pts).unwrap();
    let pass = same && (p - 0.25).abs() <= 1e-10;
    verdict(7, pass, &format!("workers 1 vs 8 identical numeric CSV={same}, synthetic exponent error={:.1e}", (p - 0.25).abs()));
}
