//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use nalgebra::{DMatrix, DVector, QR};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use waveguide_echo::effective::{
    build_effective, effective_echo_unitary, effective_vs_exact_deviation,
};
use waveguide_echo::lattice::{sample_disordered_couplings, DisorderSpec, LatticeSpec};
use waveguide_echo::propagator::{
    echo_unitary, evolve_rk4, trace_evolution, EchoProtocol, SecondSegment, SpectralPropagator,
    Unitary, DEFAULT_RK4_STEP,
};
use waveguide_echo::scenario::{
    default_config, run_scenario, run_scenario_with, write_outputs, Execution, Outcome,
    OutputFormat, ScenarioId, E_GLYPH,
};
use waveguide_echo::states::{
    fidelity, fidelity_fock, fidelity_noon, fidelity_single, fock_space_fidelity_oracle, InputState,
};

const REVERSAL_TOL: f64 = 1e-10;
const UNITARITY_TOL: f64 = 1e-10;
const PHOTON_DRIFT_TOL: f64 = 1e-9;
const RK4_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-9;
const ORACLE_TRIALS: usize = 50;
const FIG2B_SPREAD_MAX: f64 = 0.1;
const FIG2B_MEAN_TOL: f64 = 0.05;
const FIG4_TARGET: f64 = 0.94;
const FIG4_TOL: f64 = 0.05;
const GOLDEN_TOL: f64 = 1e-10;

/// Reference run, master seed 2024, δ/κ = 10, 100 realizations.
const FIG2B_GOLDEN_MIN: f64 = 0.9601377324766741;
const FIG2B_GOLDEN_MAX: f64 = 0.9962471154302601;
const FIG2B_GOLDEN_MEAN: f64 = 0.9862303673059466;
const FIG2B_BAND_TOL: f64 = 1e-9;
/// Default E glyph, 7×10 grid, δ/κ = 10, L = 10/κ.
const FIG4_GOLDEN: f64 = 0.9404841049082237;

type Outcomes = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcomes);

fn check(ok: bool, detail: String) -> Outcomes {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Every lattice a built-in scenario touches, with its segment length.
fn scenario_lattices() -> Vec<(&'static str, LatticeSpec, f64)> {
    let mut out = vec![(
        "fig1/fig3",
        LatticeSpec::uniform_chain(10, 1.0, 5.0).unwrap(),
        25.0,
    )];
    for d in [2.0, 4.0, 6.0, 8.0, 10.0] {
        out.push((
            "fig2a",
            LatticeSpec::uniform_chain(10, 1.0, d).unwrap(),
            25.0,
        ));
    }
    let disorder = DisorderSpec::new(0.2, 2024, 0).unwrap();
    let couplings = sample_disordered_couplings(1.0, 9, &disorder).unwrap();
    for d in [5.0, 10.0] {
        out.push((
            "fig2b",
            LatticeSpec::chain(couplings.clone(), d).unwrap(),
            25.0,
        ));
    }
    out.push((
        "fig4",
        LatticeSpec::uniform_grid(7, 10, 1.0, 10.0).unwrap(),
        10.0,
    ));
    out
}

fn glyph_sites() -> Vec<usize> {
    E_GLYPH.iter().map(|[n, m]| n * 10 + m).collect()
}

fn inputs_for(dim: usize) -> Vec<InputState> {
    let mut inputs = vec![InputState::single_site(dim, 3).unwrap()];
    for photons in 1..=3 {
        inputs.push(InputState::Fock { site: 3, photons });
        inputs.push(InputState::Noon {
            sites: (1, 2),
            photons,
            phase: 0.6,
        });
    }
    if dim == 70 {
        inputs.push(InputState::W {
            sites: glyph_sites(),
        });
    } else {
        inputs.push(InputState::W {
            sites: vec![0, 3, 4, 9],
        });
    }
    inputs
}

fn criterion_1() -> Outcomes {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (_, spec, length) in scenario_lattices() {
        let protocol = EchoProtocol::new(spec.clone(), length)
            .unwrap()
            .with_second_segment(SecondSegment::FullReversal);
        let u = echo_unitary(&protocol).unwrap();
        for input in inputs_for(spec.num_sites()) {
            worst = worst.max((fidelity(&u, &input).unwrap() - 1.0).abs());
            count += 1;
        }
    }
    check(
        worst <= REVERSAL_TOL,
        format!("{count} lattice/state pairs, max |F - 1| = {worst:.2e}"),
    )
}

fn criterion_2() -> Outcomes {
    let mut worst_u = 0.0_f64;
    for (_, spec, length) in scenario_lattices() {
        for second in [
            SecondSegment::SublatticeExchange,
            SecondSegment::FullReversal,
        ] {
            let protocol = EchoProtocol::new(spec.clone(), length)
                .unwrap()
                .with_second_segment(second);
            let (h1, h2) = protocol.hamiltonians().unwrap();
            for u in [
                SpectralPropagator::new(&h1).unwrap().at(length),
                SpectralPropagator::new(&h2).unwrap().at(length),
                echo_unitary(&protocol).unwrap(),
            ] {
                worst_u = worst_u
                    .max(u.unitarity_defect())
                    .max(u.column_norm_defect());
            }
        }
    }
    let mut worst_drift = 0.0_f64;
    for (_, spec, length) in scenario_lattices() {
        let protocol = EchoProtocol::new(spec.clone(), length).unwrap();
        for input in inputs_for(spec.num_sites()) {
            let trace = trace_evolution(&protocol, &input, 101).unwrap();
            worst_drift = worst_drift.max(trace.photon_number_drift());
        }
    }
    check(
        worst_u <= UNITARITY_TOL && worst_drift <= PHOTON_DRIFT_TOL,
        format!("max ||U^dag U - I|| = {worst_u:.2e}, max photon drift = {worst_drift:.2e}"),
    )
}

fn rk4_echo_defect(spec: &LatticeSpec, length: f64) -> f64 {
    let protocol = EchoProtocol::new(spec.clone(), length).unwrap();
    let (h1, h2) = protocol.hamiltonians().unwrap();
    let first = SpectralPropagator::new(&h1).unwrap().at(length);
    let echo = echo_unitary(&protocol).unwrap();
    let dim = spec.num_sites();
    let mut worst = 0.0_f64;
    for n in 0..dim {
        let mut e = DVector::zeros(dim);
        e[n] = Complex64::new(1.0, 0.0);
        let mid = evolve_rk4(&h1, &e, length, DEFAULT_RK4_STEP).unwrap();
        let end = evolve_rk4(&h2, &mid, length, DEFAULT_RK4_STEP).unwrap();
        for m in 0..dim {
            worst = worst
                .max((mid[m] - first.entry(m, n)).norm())
                .max((end[m] - echo.entry(m, n)).norm());
        }
    }
    worst
}

fn criterion_3() -> Outcomes {
    let fig1 = rk4_echo_defect(&LatticeSpec::uniform_chain(10, 1.0, 5.0).unwrap(), 25.0);
    let fig4 = rk4_echo_defect(&LatticeSpec::uniform_grid(7, 10, 1.0, 10.0).unwrap(), 10.0);
    check(
        fig1 <= RK4_TOL && fig4 <= RK4_TOL,
        format!("step {DEFAULT_RK4_STEP}: fig1 max diff {fig1:.2e}, fig4 max diff {fig4:.2e}"),
    )
}

fn random_unitary(dim: usize, rng: &mut impl Rng) -> Unitary {
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    Unitary::from_matrix(QR::new(m).q()).unwrap()
}

fn criterion_4() -> Outcomes {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    let mut comparisons = 0;
    for _ in 0..ORACLE_TRIALS {
        let dim = rng.gen_range(2..=6);
        let u = random_unitary(dim, &mut rng);
        let site = rng.gen_range(0..dim);
        let n1 = rng.gen_range(0..dim);
        let n2 = (n1 + rng.gen_range(1..dim)) % dim;
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        for photons in 1..=3 {
            let fock = InputState::Fock { site, photons };
            let closed = fidelity_fock(&u, site, photons).unwrap();
            worst = worst.max((closed - fock_space_fidelity_oracle(&u, &fock).unwrap()).abs());

            let noon = InputState::Noon {
                sites: (n1, n2),
                photons,
                phase,
            };
            let closed = fidelity_noon(&u, n1, n2, photons, phase).unwrap();
            worst = worst.max((closed - fock_space_fidelity_oracle(&u, &noon).unwrap()).abs());
            comparisons += 2;
        }
    }
    check(
        worst <= ORACLE_TOL,
        format!("{ORACLE_TRIALS} unitaries, {comparisons} comparisons, max diff {worst:.2e}"),
    )
}

fn criterion_5() -> Outcomes {
    let protocol =
        EchoProtocol::new(LatticeSpec::uniform_chain(10, 1.0, 5.0).unwrap(), 25.0).unwrap();
    let u = echo_unitary(&protocol).unwrap();
    let single = InputState::single_site(10, 3).unwrap();
    let InputState::SingleParticle { amplitudes } = &single else {
        unreachable!()
    };
    let f1 = fidelity_single(&u, amplitudes).unwrap();
    let fock: Vec<f64> = (1..=6).map(|n| fidelity_fock(&u, 3, n).unwrap()).collect();
    let exact = fock.iter().zip(1..).all(|(f, n)| *f == f1.powi(n));
    let fock_decays = fock.windows(2).all(|w| w[1] < w[0]);

    let Outcome::PhotonSweep { points } = run_scenario(&default_config(ScenarioId::Fig3b).unwrap())
        .unwrap()
        .outcome
    else {
        unreachable!()
    };
    let noon_decays = points.windows(2).all(|w| w[1].1 <= w[0].1);
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|f| format!("{f:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let noon: Vec<f64> = points.iter().map(|p| p.1).collect();
    check(
        exact && fock_decays && noon_decays,
        format!(
            "F1 = {f1:.6}; Fock N0=1..6: [{}]; NOON N0=1..6: [{}]",
            fmt(&fock),
            fmt(&noon)
        ),
    )
}

fn criterion_6() -> Outcomes {
    let Outcome::DetuningSweep { points } =
        run_scenario(&default_config(ScenarioId::Fig2a).unwrap())
            .unwrap()
            .outcome
    else {
        unreachable!()
    };
    let grid: Vec<f64> = points.iter().map(|p| p.0).collect();
    let increasing = points.windows(2).all(|w| w[1].1 > w[0].1);
    check(
        grid == [2.0, 4.0, 6.0, 8.0, 10.0] && increasing,
        format!(
            "L = 25/kappa, site 3: {}",
            points
                .iter()
                .map(|(d, f)| format!("F({d}) = {f:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn criterion_7() -> Outcomes {
    let mut config = default_config(ScenarioId::Fig2b).unwrap();
    config.lattice.disorder.as_mut().unwrap().seed = 2024;
    let Outcome::Ensemble { stats } = run_scenario(&config).unwrap().outcome else {
        unreachable!()
    };
    let s = stats
        .iter()
        .find(|s| s.delta_over_kappa == 10.0)
        .expect("delta/kappa = 10 in fig2b grid");
    let lo = FIG2B_GOLDEN_MIN - FIG2B_BAND_TOL;
    let hi = FIG2B_GOLDEN_MAX + FIG2B_BAND_TOL;
    let in_band = s.fidelities.iter().all(|f| (lo..=hi).contains(f));
    let golden = (s.min - FIG2B_GOLDEN_MIN).abs() <= FIG2B_BAND_TOL
        && (s.max - FIG2B_GOLDEN_MAX).abs() <= FIG2B_BAND_TOL
        && (s.mean - FIG2B_GOLDEN_MEAN).abs() <= FIG2B_BAND_TOL;
    let spread_ok = s.spread() <= FIG2B_SPREAD_MAX;
    let mean_ok = (s.mean - s.ordered_fidelity).abs() <= FIG2B_MEAN_TOL;
    check(
        s.fidelities.len() == 100 && in_band && golden && spread_ok && mean_ok,
        format!(
            "{} realizations in [{:.6}, {:.6}], spread {:.4}, mean {:.6} vs ordered {:.6}",
            s.fidelities.len(),
            s.min,
            s.max,
            s.spread(),
            s.mean,
            s.ordered_fidelity
        ),
    )
}

fn criterion_8() -> Outcomes {
    let Outcome::Curve { final_fidelity, .. } =
        run_scenario(&default_config(ScenarioId::Fig4).unwrap())
            .unwrap()
            .outcome
    else {
        unreachable!()
    };
    check(
        (final_fidelity - FIG4_TARGET).abs() <= FIG4_TOL
            && (final_fidelity - FIG4_GOLDEN).abs() <= GOLDEN_TOL,
        format!("F(2L) = {final_fidelity:.10} (target {FIG4_TARGET} +/- {FIG4_TOL}, golden {FIG4_GOLDEN})"),
    )
}

fn criterion_9() -> Outcomes {
    let disorder = DisorderSpec::new(0.2, 7, 0).unwrap();
    let lattices = [
        LatticeSpec::uniform_chain(10, 1.0, 5.0).unwrap(),
        LatticeSpec::chain(
            sample_disordered_couplings(1.0, 9, &disorder).unwrap(),
            10.0,
        )
        .unwrap(),
    ];
    let mut sign_flip = true;
    let mut worst_echo = 0.0_f64;
    for spec in &lattices {
        let plus = build_effective(spec).unwrap();
        let minus = build_effective(&spec.flip_detuning()).unwrap();
        sign_flip &= minus.matrix() == &-plus.matrix();
        let echo = effective_echo_unitary(spec, 25.0).unwrap();
        worst_echo = worst_echo.max(echo.max_abs_diff(&Unitary::identity(spec.num_sites())));
    }
    let deviations: Vec<(f64, f64)> = [5.0, 10.0, 20.0, 40.0]
        .into_iter()
        .map(|d| {
            let spec = LatticeSpec::uniform_chain(10, 1.0, d).unwrap();
            (d, effective_vs_exact_deviation(&spec, 5.0).unwrap())
        })
        .collect();
    let decreasing = deviations.windows(2).all(|w| w[1].1 < w[0].1);
    check(
        sign_flip && worst_echo <= REVERSAL_TOL && decreasing,
        format!(
            "sign flip exact: {sign_flip}; effective echo max |U - I| = {worst_echo:.2e}; \
             deviation at z = 5: {}",
            deviations
                .iter()
                .map(|(d, v)| format!("{d} -> {v:.3e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn criterion_10() -> Outcomes {
    let tmp = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_waveguide-echo");
    let mut runs = Vec::new();
    let dir = tmp.path().join("cli");
    for _ in 0..2 {
        if dir.exists() {
            fs::remove_dir_all(&dir).unwrap();
        }
        let status = Command::new(bin)
            .args(["run", "fig2b", "--seed", "77", "--out"])
            .arg(&dir)
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        if !status.success() {
            return Err(format!("CLI run exited with {status}"));
        }
        runs.push(read_dir_bytes(&dir));
    }

    let config = default_config(ScenarioId::Fig2b).unwrap();
    for (name, execution) in [
        ("serial", Execution::Serial),
        ("parallel", Execution::Parallel),
    ] {
        let dir = tmp.path().join(name);
        let result = run_scenario_with(&config, execution).unwrap();
        write_outputs(&result, &dir, OutputFormat::Csv, false).unwrap();
        runs.push(read_dir_bytes(&dir));
    }
    let cli_same = runs[0] == runs[1];
    let exec_same = runs[2] == runs[3];
    check(
        cli_same && exec_same && runs[0].len() == 3,
        format!(
            "{} files per run; CLI re-run identical: {cli_same}; serial == parallel: {exec_same}",
            runs[0].len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("perfect-reversal baseline", criterion_1),
        ("unitarity and photon-number conservation", criterion_2),
        ("spectral vs RK4 oracle", criterion_3),
        ("closed forms vs Fock-space oracle", criterion_4),
        ("Fock power law and decay in N0", criterion_5),
        ("fig2a fidelity increases with delta/kappa", criterion_6),
        ("fig2b robustness to coupling disorder", criterion_7),
        ("fig4 W-state echo fidelity", criterion_8),
        ("effective-model identities and convergence", criterion_9),
        ("deterministic fig2b output", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}: {name} ({detail})", i + 1);
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
