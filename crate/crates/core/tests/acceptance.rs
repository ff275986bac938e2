//! Acceptance run: one PASS/FAIL line per criterion, with the measured
//! error or witness. Criteria listed in `KNOWN_FAILURES` are reported as
//! FAIL but do not fail the run; everything else must pass.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hlobachevsky::calculus;
use hlobachevsky::cli::{self, Format, RunConfig, Suite};
use hlobachevsky::crossprod::{self, CrossAlgebra};
use hlobachevsky::hopf::{self, rmatrix};
use hlobachevsky::report::Report;
use hlobachevsky::series;
use hlobachevsky::special::{bessel_k_imag, bessel_k_real};
use hlobachevsky::spectral::{self, Controls, Packet};
use hlobachevsky::state;

const SEED: u64 = 42;

/// Criterion 3 with the standard cross-product table: the `h^2/4` constant
/// in the `J-` rule is incompatible with the `[J3, J-]` relation, so
/// cross-product words do not reduce confluently. The run checks that the
/// consistent table does.
const KNOWN_FAILURES: &[u32] = &[3];

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_report(rep: &Report, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    // lower bounds (sector-0 non-invariance) are not errors
    let worst = rep.results().iter().filter(|r| !r.check.contains("exceeds")).map(|r| r.max_error).fold(0.0, f64::max);
    let mut detail = format!("{} checks, max_error {worst:e}, {:.2}s", rep.len(), elapsed.as_secs_f64());
    let mut passed = rep.all_passed();
    if let Some(first) = rep.failures().next() {
        let w: String = first.witness.as_deref().unwrap_or("").chars().take(160).collect();
        detail += &format!("; first failure {}: {w}...", first.check);
    }
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail += &format!("; over the {}s limit", l.as_secs());
        }
    }
    Outcome { passed, detail }
}

fn timed(f: impl FnOnce() -> Report) -> (Report, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn criterion_1() -> Outcome {
    let (rep, dt) = timed(rmatrix::rmatrix_checks);
    from_report(&rep, dt, Some(Duration::from_secs(1)))
}

fn criterion_2() -> Outcome {
    let (rep, dt) = timed(hopf::hopf_suite);
    from_report(&rep, dt, Some(Duration::from_secs(10)))
}

fn criterion_3() -> Outcome {
    let (rep, dt) = timed(|| crossprod::with_standard(|alg| crossprod::verify_confluence(alg, 1000, 6, SEED)));
    let mut out = from_report(&rep, dt, Some(Duration::from_secs(60)));
    let consistent = CrossAlgebra::consistent().expect("consistent rules");
    let alt = crossprod::verify_confluence(&consistent, 1000, 6, SEED);
    assert!(alt.all_passed(), "consistent table is not confluent:\n{alt}");
    out.detail += "; consistent table: all confluent";
    out
}

fn criterion_4() -> Outcome {
    let (rep, dt) = timed(|| {
        crossprod::with_standard(|alg| {
            let mut rep = crossprod::verify_recombination(alg);
            rep.extend(crossprod::verify_relations_preserved(alg, 3));
            let fs = calculus::monomials(2);
            let samples: Vec<_> = fs.iter().cloned().zip(fs.iter().rev().cloned()).collect();
            rep.extend(crossprod::verify_module_algebra(alg, &samples));
            rep
        })
    });
    from_report(&rep, dt, None)
}

fn criterion_5() -> Outcome {
    let (rep, dt) = timed(|| crossprod::with_standard(|alg| crossprod::invariance_suite(alg, 6)));
    from_report(&rep, dt, None)
}

fn criterion_6() -> Outcome {
    let (rep, dt) = timed(|| series::series_suite(8));
    from_report(&rep, dt, Some(Duration::from_secs(120)))
}

fn criterion_7() -> Outcome {
    let (rep, dt) = timed(|| calculus::calculus_suite(5));
    from_report(&rep, dt, None)
}

fn criterion_8() -> Outcome {
    let (rep, dt) = timed(|| state::state_suite(&[0.05, 0.1, 0.5], 20, SEED).expect("state suite runs"));
    from_report(&rep, dt, None)
}

/// `K_0(1)` from the ascending series
/// `K_0(x) = -(ln(x/2) + γ) I_0(x) + Σ_k (x²/4)^k / (k!)² H_k`.
fn k0_series(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let z = 0.25 * x * x;
    let (mut term, mut i0, mut tail, mut harmonic) = (1.0, 1.0, 0.0, 0.0);
    for k in 1..60 {
        let kf = k as f64;
        term *= z / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// Large-argument expansion `sqrt(π/2x) e^-x Σ a_k(ν) / x^k`, truncated at
/// its smallest term.
fn k_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 1..40 {
        let kf = k as f64;
        let next = term * (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut rep = Report::new();
    let oracle = k0_series(1.0);
    let k0 = bessel_k_imag(0.0, 1.0).expect("K_0(1)");
    let k0r = bessel_k_real(0.0, 1.0).expect("K_0(1)");
    let err = ((k0 - oracle).abs()).max((k0r - oracle).abs()) / oracle;
    rep.numeric("spectral", "K_0(1) against the ascending series", err, 1e-12, Some(format!("{k0} vs {oracle}")));
    let big = bessel_k_real(0.0, 40.0).expect("K_0(40)");
    let asym = k_asymptotic(0.0, 40.0);
    rep.numeric("spectral", "K_0(40) against the asymptotic series", (big / asym - 1.0).abs(), 1e-12, None);
    let packets = [Packet::new(3.0, 0.5), Packet::new(7.0, 0.5)];
    rep.extend(spectral::orthonormality_check(&packets, 1e-4).expect("orthonormality"));
    rep.extend(spectral::propagator_suite(&Controls::default(), &spectral::SuiteTolerances::default()).expect("propagators"));
    from_report(&rep, t.elapsed(), Some(Duration::from_secs(600)))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let cfg = RunConfig { seed: SEED, format: Format::Json, ..RunConfig::default() };
    let run = || {
        let rep = cli::verify(Suite::All, &cfg, false).expect("verify all");
        let mut buf = Vec::new();
        cli::write_report(&rep, Format::Json, &mut buf).expect("json");
        buf
    };
    let (a, b) = (run(), run());
    let same = a == b && !a.is_empty();
    Outcome {
        passed: same,
        detail: format!("{} bytes per report, identical: {same}, {:.2}s", a.len(), t.elapsed().as_secs_f64()),
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "braiding matrix: R^2 = 1 and braid equation", criterion_1),
        (2, "Hopf suite", criterion_2),
        (3, "rewriting confluence on 1000 random words", criterion_3),
        (4, "cross-product consistency", criterion_4),
        (5, "invariance of the two-point function and the Laplacian", criterion_5),
        (6, "exponential identities to order 8", criterion_6),
        (7, "calculus: Hodge Laplacian, spectrum on y^m, d^2 = 0", criterion_7),
        (8, "invariant state", criterion_8),
        (9, "spectral numerics and propagators", criterion_9),
        (10, "determinism of verify all", criterion_10),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let out = f();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        let note = if !out.passed && KNOWN_FAILURES.contains(&n) { " (known failure)" } else { "" };
        println!("{tag} criterion {n}: {name}{note} [{}]", out.detail);
        if !out.passed && !KNOWN_FAILURES.contains(&n) {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
