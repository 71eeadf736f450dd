//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestRunner};

use tqgate::dipole::{
    dipolar_coupling, ed_frequency_shift, md_times, offresonant_infidelity, DipoleConfig, EdConfig,
};
use tqgate::interference::{
    ib_efficiency, ib_fidelity, ibf_efficiency, ibf_fidelity, InterferenceConfig,
};
use tqgate::oracle::{check_scattering, simulate_ib, simulate_ibf, Grid, OracleOptions};
use tqgate::params::{
    derive_cavity_from_c, eta_prime, CavitySet, EmitterParams, PhysConsts, ScenarioPreset, DETECTION_DEFAULT,
    GAMMA_STAR_BULK_HZ, GAMMA_STAR_DEVICE_HZ, SCENARIO1, SCENARIO2,
};
use tqgate::scattering::{
    sb_fidelity, sb_infidelity_terms, sb_sigma_opt_closed, sb_sigma_opt_numeric, ScatteringConfig,
};
use tqgate::sweep::{map_points, run_sweep_with, Axis, ExecutionMode, Range, Scale, SweepSpec};
use tqgate::table::Table;
use tqgate::{ConfigTree, Scheme};

const PAR: ExecutionMode = ExecutionMode::Parallel { threads: None };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn preset(name: &str) -> ScenarioPreset {
    ScenarioPreset::by_name(name).unwrap()
}

const DETECTION_TIMES: [f64; 4] = [10e-9, 50e-9, 200e-9, 500e-9];

/// Scenario × γ*_s ∈ {0, 1/2.1 ms} × T_d grid.
fn oracle_grid() -> Vec<(String, ScenarioPreset, InterferenceConfig)> {
    let mut out = Vec::new();
    for name in ["scenario1", "scenario2"] {
        let p = preset(name);
        let quiet = EmitterParams { t1_spin: f64::INFINITY, t2_spin: f64::INFINITY, ..p.emitter };
        for (tag, emitter) in [("gs=0", quiet), ("gs=1/2.1ms", p.emitter)] {
            for td in DETECTION_TIMES {
                let q = ScenarioPreset { emitter, ..p.clone() };
                out.push((format!("{name} {tag} Td={td:e}"), q, InterferenceConfig::new(td, p.delta_t)));
            }
        }
    }
    out
}

/// Largest (efficiency, fidelity) relative deviations of an oracle over the grid.
fn oracle_deviation(feedback: bool) -> Result<(f64, f64, String), String> {
    let grid = oracle_grid();
    let devs = map_points(&grid, PAR, |(label, p, cfg)| -> Result<(f64, f64), String> {
        let opts = OracleOptions::default();
        let (o, eff, fid) = if feedback {
            let o = simulate_ibf(&p.emitter, &p.cavity, &p.detection, cfg, &opts).map_err(|e| e.to_string())?;
            (o, ibf_efficiency(cfg, &p.cavity, &p.detection), ibf_fidelity(cfg, &p.cavity, &p.emitter))
        } else {
            let o = simulate_ib(&p.emitter, &p.cavity, &p.detection, cfg, &opts).map_err(|e| e.to_string())?;
            (o, ib_efficiency(cfg, &p.cavity, &p.detection), ib_fidelity(cfg, &p.cavity, &p.emitter))
        };
        let of = o.fidelity.ok_or_else(|| format!("{label}: no heralded state"))?;
        Ok((rel(o.efficiency, eff), rel(of, fid)))
    })
    .map_err(|e| e.to_string())?;
    let mut worst = (0.0f64, 0.0f64);
    for d in devs {
        let (e, f) = d?;
        worst = (worst.0.max(e), worst.1.max(f));
    }
    Ok((worst.0, worst.1, format!("{} points", grid.len())))
}

fn ac1() -> Outcome {
    match oracle_deviation(true) {
        Ok((e, f, n)) => outcome(
            e <= 1e-6 && f <= 1e-6,
            format!("IBF oracle vs closed forms, {n}: max rel dev efficiency {e:.2e}, fidelity {f:.2e} (tol 1e-6)"),
        ),
        Err(m) => outcome(false, m),
    }
}

fn ac2() -> Outcome {
    match oracle_deviation(false) {
        Ok((e, f, n)) => outcome(
            e <= 1e-6 && f <= 1e-4,
            format!(
                "IB oracle vs closed forms, {n}: max rel dev efficiency {e:.2e} (tol 1e-6), fidelity {f:.2e} (tol 1e-4)"
            ),
        ),
        Err(m) => outcome(false, m),
    }
}

fn ac3() -> Outcome {
    // Scenario 1 with η_em = 0.93, i.e. C = 0.93/0.07, at the quoted γ′.
    let e1 = preset("scenario1").emitter;
    let cav1 = CavitySet {
        gamma_prime: SCENARIO1.gamma_prime(),
        ..derive_cavity_from_c(0.93 / 0.07, &e1).unwrap()
    };
    let ib = ib_efficiency(&InterferenceConfig::new(f64::INFINITY, SCENARIO1.delta_t), &cav1, &DETECTION_DEFAULT);
    // Scenario 2 at C = 74 and the quoted γ′, long-window limit.
    let e2 = preset("scenario2").emitter;
    let cav2 = CavitySet {
        gamma_prime: SCENARIO2.gamma_prime(),
        ..derive_cavity_from_c(74.0, &e2).unwrap()
    };
    let ibf = ibf_efficiency(&InterferenceConfig::new(f64::INFINITY, SCENARIO2.delta_t), &cav2, &DETECTION_DEFAULT);
    // Independent arithmetic: ½η′² and η′²e^{−γ′δt}.
    let ep1 = 0.95 * 0.9 * 0.93;
    let ep2 = 0.95 * 0.9 * 74.0 / 75.0;
    let ib_hand = 0.5 * ep1 * ep1;
    let ibf_hand = ep2 * ep2 * (-TAU * 12.7e6 * 1.4e-9f64).exp();
    let pass = (ib - 0.3161).abs() <= 5e-4
        && (ibf - 0.636).abs() <= 1e-3
        && ibf > 0.5
        && rel(ib, ib_hand) < 1e-12
        && rel(ibf, ibf_hand) < 1e-12;
    outcome(
        pass,
        format!(
            "eta_IB(inf) scenario1 = {ib:.5} (0.3161 +/- 5e-4), eta_IBF(inf) scenario2 = {ibf:.5} (0.636 +/- 1e-3, > 0.5)"
        ),
    )
}

fn ac4() -> Outcome {
    let p = preset("scenario2");
    let cfg = InterferenceConfig::new(10e-9, p.delta_t);
    let fid = |gs_hz: f64| {
        let mut e = p.emitter;
        e.gamma_star = TAU * gs_hz;
        ib_fidelity(&cfg, &p.cavity, &e)
    };
    let (mut lo, mut hi) = (GAMMA_STAR_BULK_HZ, GAMMA_STAR_DEVICE_HZ);
    if !(fid(lo) > 0.9 && fid(hi) < 0.9) {
        return outcome(false, "IB fidelity does not cross 0.9 between bulk and device dephasing");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fid(mid) > 0.9 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cross = 0.5 * (lo + hi);
    outcome(
        (cross / 2.1e6 - 1.0).abs() <= 0.25,
        format!(
            "scenario2 IB fidelity at T_d = 10 ns crosses 0.9 at gamma* = 2pi x {:.3} MHz (2.1 MHz +/- 25%)",
            cross / 1e6
        ),
    )
}

fn dephasing_grid() -> Vec<f64> {
    Range::new(GAMMA_STAR_BULK_HZ, GAMMA_STAR_DEVICE_HZ, 25, Scale::Log).unwrap().values()
}

const COOPERATIVITIES: [f64; 4] = [14.0, 74.0, 250.0, 1000.0];

fn sb_raw(c: f64, gs_hz: f64) -> f64 {
    let e = EmitterParams { gamma_star: TAU * gs_hz, ..preset("scenario2").emitter };
    let sc = ScatteringConfig::new(0.008);
    let (sigma, _) = sb_sigma_opt_closed(c, &e, sc.g_over_kappa).unwrap();
    sb_fidelity(&sc.with_sigma(sigma), c, &e).unwrap().raw
}

fn ac5() -> Outcome {
    let gs = dephasing_grid();
    let table: Vec<Vec<f64>> = COOPERATIVITIES.iter().map(|c| gs.iter().map(|g| sb_raw(*c, *g)).collect()).collect();
    let falls_in_gs = table.iter().all(|row| row.windows(2).all(|w| w[1] < w[0]));
    let rises_in_c = table.windows(2).all(|p| p[0].iter().zip(&p[1]).all(|(lo, hi)| hi > lo));
    let bulk_1000 = table[3][0];
    outcome(
        falls_in_gs && rises_in_c && bulk_1000 > 0.99,
        format!(
            "F_SB decreasing in gamma*: {falls_in_gs}, increasing in C: {rises_in_c}, F_SB(C=1000, bulk) = {bulk_1000:.5} (> 0.99)"
        ),
    )
}

fn ac6() -> Outcome {
    let target = 2f64.powf(-1.0 / 3.0);
    let sc = ScatteringConfig::new(0.008);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_dense: f64 = 0.0;
    let mut never_worse = true;
    for c in COOPERATIVITIES {
        for gs in [GAMMA_STAR_BULK_HZ, 1e6, GAMMA_STAR_DEVICE_HZ] {
            let e = EmitterParams { gamma_star: TAU * gs, ..preset("scenario2").emitter };
            let eps = |s: f64| -> f64 {
                sb_infidelity_terms(&ScatteringConfig { sigma_p: s, ..sc }, c, &e).unwrap().iter().sum()
            };
            let (closed, _) = sb_sigma_opt_closed(c, &e, sc.g_over_kappa).unwrap();
            let numeric = sb_sigma_opt_numeric(c, &e, &sc).unwrap().sigma_p;
            // Dense log grid, a decade either side of the closed form.
            let n = 100_000;
            let dense = (0..n)
                .map(|i| closed * 10f64.powf(-1.0 + 2.0 * i as f64 / (n - 1) as f64))
                .map(|s| (eps(s), s))
                .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
                .1;
            never_worse &= eps(numeric) <= eps(closed);
            worst_ratio = worst_ratio.max(rel(numeric / closed, target));
            worst_dense = worst_dense.max(rel(dense / closed, target));
        }
    }
    let cfg = ConfigTree::preset("scenario2").unwrap().resolve().unwrap();
    let surfaced = check_scattering(&cfg, Grid::Coarse, PAR).map(|r| r.render().contains("2^(-1/3)")).unwrap_or(false);
    outcome(
        never_worse && worst_ratio <= 1e-3 && worst_dense <= 1e-3 && surfaced,
        format!(
            "numeric sigma_p never loses fidelity: {never_worse}; max |ratio/2^(-1/3) - 1|: golden {worst_ratio:.2e}, dense grid {worst_dense:.2e} (tol 1e-3); in oracle-check report: {surfaced}"
        ),
    )
}

fn ac7() -> Outcome {
    // (π/2)² exp(−(π/2)(Δ/Ω)²), written out independently.
    let by_hand = |x: f64| FRAC_PI_2 * FRAC_PI_2 * (-FRAC_PI_2 * x * x).exp();
    let e3 = offresonant_infidelity(1.0, 3.0);
    let e4 = offresonant_infidelity(1.0, 4.0);
    let pass = rel(e3, 1.8e-6) <= 0.05
        && rel(e4, 3e-11) <= 0.05
        && rel(e3, by_hand(3.0)) < 1e-12
        && rel(e4, by_hand(4.0)) < 1e-12;
    outcome(pass, format!("Delta/Omega = 3: {e3:.3e} (1.8e-6 +/- 5%), Delta/Omega = 4: {e4:.3e} (3e-11 +/- 5%)"))
}

fn ac8() -> Outcome {
    let k = PhysConsts::CODATA2018;
    let cfg = DipoleConfig::mdg_default();
    let j = dipolar_coupling(&cfg, &k).unwrap();
    let t = md_times(&cfg, j.jz, &k).unwrap();
    let base = ConfigTree::preset("scenario1").unwrap();
    let spec = SweepSpec::new(Scheme::Mdg, Axis::new("distance", Range::new(5e-9, 50e-9, 200, Scale::Linear).unwrap()));
    let rows = run_sweep_with(&spec, &base, PAR).unwrap().rows;
    let monotone = rows.windows(2).all(|w| w[1].evaluation.metrics.fidelity <= w[0].evaluation.metrics.fidelity);
    outcome(
        rel(t.total, 13.7e-6) <= 0.02 && t.total < 2.1e-3 && monotone,
        format!(
            "T_MD(10 nm, 0.7 MHz) = {:.3} us (13.7 us +/- 2%, < 2.1 ms); F_MDG nonincreasing on [5, 50] nm: {monotone}",
            t.total * 1e6
        ),
    )
}

fn ac9() -> Outcome {
    let k = PhysConsts::CODATA2018;
    let cfg = EdConfig::default();
    let rs = Range::new(1e-9, 1e-6, 61, Scale::Log).unwrap().values();
    let products: Vec<f64> = rs.iter().map(|r| ed_frequency_shift(&cfg, *r, &k).unwrap().abs() * r.powi(3)).collect();
    let spread = products.iter().map(|p| rel(*p, products[0])).fold(0.0, f64::max);
    let dnu = ed_frequency_shift(&cfg, 5e-9, &k).unwrap().abs();
    // Δμ²/(4π n² ε0 h r³) with CODATA 2018 ε0 and h.
    let (eps0, h) = (8.8541878128e-12, 6.62607015e-34);
    let by_hand = (49e-31f64).powi(2) / (4.0 * PI * 3.45 * 3.45 * eps0 * h * (5e-9f64).powi(3));
    outcome(
        spread <= 1e-12 && rel(dnu, 219e6) <= 0.01 && rel(dnu, by_hand) < 1e-12,
        format!(
            "|dnu| r^3 spread {spread:.1e} (tol 1e-12); |dnu|(5 nm) = {:.2} MHz (219 MHz +/- 1%, arithmetic {:.2} MHz)",
            dnu / 1e6,
            by_hand / 1e6
        ),
    )
}

/// Run a property with proptest's runner; returns the failure message if any.
fn property<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Option<String> {
    let mut runner = TestRunner::new(RunnerConfig { cases, failure_persistence: None, ..RunnerConfig::default() });
    runner.run(&strategy, test).err().map(|e| e.to_string())
}

fn ac10() -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut record = |name: &str, r: Option<String>| {
        checks += 1;
        if let Some(m) = r {
            failures.push(format!("{name}: {m}"));
        }
    };

    record(
        "conditional states PSD, traces in [0, 1]",
        property(8, (1.0f64..300.0, 0.0f64..5e6, 1e-9f64..600e-9, 0.0f64..25e-9, any::<bool>()), |(c, gs, td, dt, fb)| {
            let base = preset("scenario1").emitter;
            let e = EmitterParams { gamma_star: TAU * gs, ..base };
            let cav = derive_cavity_from_c(c, &e).unwrap();
            let cfg = InterferenceConfig::new(td, dt);
            let o = if fb {
                simulate_ibf(&e, &cav, &DETECTION_DEFAULT, &cfg, &OracleOptions::default())
            } else {
                simulate_ib(&e, &cav, &DETECTION_DEFAULT, &cfg, &OracleOptions::default())
            }
            .unwrap();
            prop_assert!(o.states.iter().all(|s| s.is_physical()));
            prop_assert!(o.efficiency <= 1.0 + 1e-12);
            Ok(())
        }),
    );

    record(
        "closed forms in [0, 1] and monotone in T_d",
        property(200, (1.0f64..2000.0, 0.0f64..1e7, 1e-10f64..1e-5, 0.0f64..3e-8), |(c, gs, td, dt)| {
            let e = EmitterParams { gamma_star: TAU * gs, ..preset("scenario2").emitter };
            let cav = derive_cavity_from_c(c, &e).unwrap();
            let a = InterferenceConfig::new(td, dt);
            let b = InterferenceConfig::new(td * 1.5, dt);
            for v in [
                ib_efficiency(&a, &cav, &DETECTION_DEFAULT),
                ibf_efficiency(&a, &cav, &DETECTION_DEFAULT),
                ib_fidelity(&a, &cav, &e),
                ibf_fidelity(&a, &cav, &e),
            ] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(ib_efficiency(&b, &cav, &DETECTION_DEFAULT) >= ib_efficiency(&a, &cav, &DETECTION_DEFAULT));
            prop_assert!(ib_fidelity(&b, &cav, &e) <= ib_fidelity(&a, &cav, &e) + 1e-15);
            Ok(())
        }),
    );

    record(
        "eta_prime bounded by detection efficiencies",
        property(200, (0.0f64..1e4, 0.0f64..=1.0, 0.0f64..=1.0), |(c, d, col)| {
            let e = preset("scenario1").emitter;
            let cav = derive_cavity_from_c(c, &e).unwrap();
            let det = tqgate::params::DetectionChain { eta_d: d, eta_c: col };
            let ep = eta_prime(&cav, &det);
            prop_assert!(ep >= 0.0 && ep <= d * col + 1e-15);
            Ok(())
        }),
    );

    record(
        "MDG fidelity nonincreasing in distance",
        property(100, (2e-9f64..100e-9, 1.01f64..3.0), |(r, k)| {
            let mut t = ConfigTree::preset("scenario1").unwrap();
            t.set_f64("distance", r).unwrap();
            let near = Scheme::Mdg.evaluate(&t.resolve().unwrap()).unwrap().metrics.fidelity;
            t.set_f64("distance", r * k).unwrap();
            let far = Scheme::Mdg.evaluate(&t.resolve().unwrap()).unwrap().metrics.fidelity;
            prop_assert!(far <= near);
            Ok(())
        }),
    );

    record(
        "CSV and JSON round-trip",
        property(200, prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..30), |vals| {
            let spec_rows: Vec<Vec<tqgate::table::Cell>> = vals
                .iter()
                .map(|v| vec![tqgate::table::Cell::Num(*v), tqgate::table::Cell::Text("strong_coupling".into())])
                .collect();
            let t = Table { columns: vec!["param".into(), "flags".into()], rows: spec_rows, notes: Vec::new() };
            let back = Table::from_json(&Table::from_csv(&t.to_csv()).unwrap().to_json()).unwrap();
            prop_assert_eq!(back.rows, t.rows);
            Ok(())
        }),
    );

    record(
        "sweeps deterministic, parallel equals sequential",
        property(10, (1.0f64..50.0, 2usize..40), |(from, n)| {
            let spec = SweepSpec::new(Scheme::Sb, Axis::new("cooperativity", Range::new(from, from * 100.0, n, Scale::Log).unwrap()));
            let base = ConfigTree::preset("scenario2").unwrap();
            let a = run_sweep_with(&spec, &base, PAR).unwrap();
            let b = run_sweep_with(&spec, &base, ExecutionMode::Sequential).unwrap();
            prop_assert_eq!(a, b);
            Ok(())
        }),
    );

    let pass = failures.is_empty();
    let detail = if pass {
        format!("{checks} property suites passed (full suites also run under cargo test)")
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence (IBF)", ac1),
        ("oracle equivalence (IB)", ac2),
        ("saturation efficiencies", ac3),
        ("IB fidelity 0.9 crossing", ac4),
        ("SB fidelity ordering", ac5),
        ("sigma_p optimizer", ac6),
        ("off-resonant pi-pulse errors", ac7),
        ("MDG feasibility", ac8),
        ("ED scaling", ac9),
        ("invariant suites", ac10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked"));
        failed += usize::from(!o.pass);
        println!(
            "AC{:<2} {} {:<30} {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
