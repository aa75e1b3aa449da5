//! Acceptance suite: one PASS/FAIL line per criterion, with its measured figure of merit,
//! pinned tolerance and runtime budget. Runs without the libtest harness so the lines are
//! always printed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use linentropy::bloch::{
    adapted_basis, check_operator_bound, gellmann_basis, OperatorBoundVerdict,
};
use linentropy::bounds::{inverted_closed_form, inverted_lower_f, purity_f, renyi_f};
use linentropy::verify::structural::{
    bloch_round_trip_defect, linear_entropy_decomposition_defect,
};
use linentropy::verify::{
    run_campaign, sample_state, substream, Ensemble, SamplerConfig, SAMPLES_FILE, SUMMARY_FILE,
};
use linentropy::{
    boundary_state_for, dssa_family, isa_family, DensityMatrix, DimPair, EntropyPoint, Result,
};

const PAIRS: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 3), (2, 4)];

/// Name, check and runtime budget.
type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pair(da: usize, db: usize) -> DimPair {
    DimPair::new(da, db).unwrap()
}

fn point(rho: &DensityMatrix) -> EntropyPoint {
    EntropyPoint::of_state(rho).unwrap()
}

fn bell() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [s, 0.0, 0.0, s].map(|v| linentropy::C64::new(v, 0.0));
    DensityMatrix::from_pure(&psi, &[2, 2]).unwrap()
}

/// ISA family saturates the ISA plane.
fn ac1() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for (da, db) in [(2, 2), (2, 3)] {
        for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let p = point(&isa_family(alpha, pair(da, db))?);
            worst = worst.max((p.z - common::isa(p.x, p.y, da, db)).abs());
        }
    }
    let p = point(&isa_family(0.5, pair(2, 2))?);
    let anchor = p.max_abs_diff(&EntropyPoint::new(0.375, 0.375, 0.625));
    Ok(Outcome {
        passed: worst <= 1e-10 && anchor <= 1e-12,
        detail: format!("max |z - h| {worst:.2e} (tol 1e-10), alpha=0.5 2x2 off (0.375,0.375,0.625) by {anchor:.1e}"),
    })
}

/// DSSA family saturates the DSSA surface on the whole parameter simplex.
fn ac2() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for (da, db) in [(2, 2), (3, 3)] {
        for i in 0..=20 {
            for j in 0..=20 - i {
                let (alpha, beta) = (i as f64 / 20.0, j as f64 / 20.0);
                let p = point(&dssa_family(alpha, beta, pair(da, db))?);
                worst = worst.max((p.z - common::dssa(p.x, p.y, da, db)).abs());
                n += 1;
            }
        }
    }
    let p = point(&dssa_family(0.4, 0.4, pair(2, 2))?);
    let anchor = p.max_abs_diff(&EntropyPoint::new(0.32, 0.32, 0.56));
    Ok(Outcome {
        passed: worst <= 1e-10 && anchor <= 1e-12,
        detail: format!("{n} states, max |z - g| {worst:.2e} (tol 1e-10), (0.4,0.4) 2x2 off (0.32,0.32,0.56) by {anchor:.1e}"),
    })
}

/// Every point of the sharp surface is attained by a constructed state.
fn ac3() -> Result<Outcome> {
    let (mut coord, mut psd) = (0.0_f64, 0.0_f64);
    for (k, &(da, db)) in PAIRS.iter().enumerate() {
        let dims = pair(da, db);
        let mut rng = substream(3003, k as u64);
        for _ in 0..100 {
            let x = rng.random::<f64>() * dims.max_a();
            let y = rng.random::<f64>() * dims.max_b();
            let rho = boundary_state_for(x, y, dims)?;
            let target = EntropyPoint::new(x, y, common::sharp(x, y, da, db));
            coord = coord.max(point(&rho).max_abs_diff(&target));
            psd = psd.max(-rho.eigenvalues()?[0]);
        }
    }
    Ok(Outcome {
        passed: coord <= 1e-8 && psd <= 1e-10,
        detail: format!("400 targets, max coordinate error {coord:.2e} (tol 1e-8), PSD defect {:.1e} (tol 1e-10)", psd.max(0.0)),
    })
}

/// No violations over large Hilbert–Schmidt campaigns, with an independent re-check of the
/// sharp and inverted bounds on a subset of the states.
fn ac4() -> Result<Outcome> {
    const ALWAYS: [&str; 8] = [
        "subadditivity",
        "araki_lieb",
        "appel",
        "isa",
        "sharp",
        "inverted",
        "renyi",
        "purity",
    ];
    // defined only on part of the (x, y) rectangle
    const WHERE_APPLICABLE: [&str; 2] = ["audenaert", "dssa"];
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let mut missing = Vec::new();
    let mut partial = Vec::new();
    let mut total = 0;
    let mut oracle_slack = f64::INFINITY;
    for (k, &(da, db)) in PAIRS.iter().enumerate() {
        let report = run_campaign(
            &SamplerConfig::new(&[da, db], Ensemble::HilbertSchmidt, 100_000, 4),
            None,
        )?;
        violations += report.violation_count;
        for name in ALWAYS.iter().chain(&WHERE_APPLICABLE) {
            match report.bounds.get(*name) {
                Some(s) if s.evaluated > 0 => {
                    min_slack = min_slack.min(s.min_slack.unwrap());
                    if WHERE_APPLICABLE.contains(name) {
                        partial.push(format!("{name}@{da}x{db}:{}", s.evaluated));
                    }
                }
                _ if WHERE_APPLICABLE.contains(name) => partial.push(format!("{name}@{da}x{db}:0")),
                _ => missing.push(format!("{name}@{da}x{db}")),
            }
        }
        total += report.samples;
        for s in 0..2_000 {
            let rho = sample_state(
                Ensemble::HilbertSchmidt,
                &[da, db],
                &mut substream(4004 + k as u64, s),
            )?;
            let p = point(&rho);
            oracle_slack = oracle_slack
                .min(common::sharp(p.x, p.y, da, db) - p.z)
                .min(p.z - common::inverted(p.x, p.y, da, db));
        }
    }
    let report = run_campaign(
        &SamplerConfig::new(&[2, 2, 2], Ensemble::HilbertSchmidt, 10_000, 4),
        None,
    )?;
    violations += report.violation_count;
    let sisa = report.bounds.get("sisa").and_then(|s| s.min_slack);
    if sisa.is_none() {
        missing.push("sisa@2x2x2".into());
    }
    Ok(Outcome {
        passed: violations == 0
            && missing.is_empty()
            && min_slack >= -1e-9
            && oracle_slack >= -1e-9
            && sisa.is_some_and(|s| s >= -1e-9),
        detail: format!(
            "{total} + {} samples, {violations} violations, min slack {min_slack:.2e} (tol -1e-9), \
             independent re-check {oracle_slack:.2e}, sisa min slack {:.2e}, evaluated where applicable [{}]{}",
            report.samples,
            sisa.unwrap_or(f64::NAN),
            partial.join(" "),
            if missing.is_empty() { String::new() } else { format!(", missing {missing:?}") }
        ),
    })
}

/// Appel-gap identity, branch coincidence and gradient on the gluing curve, Bloch decomposition.
fn ac5() -> Result<Outcome> {
    let (mut gap, mut coincide, mut grad, mut decomp) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    const H: f64 = 1e-7;
    for (k, &(da, db)) in PAIRS.iter().enumerate() {
        let (a, b) = (common::big_d(da), common::big_d(db));
        for x in common::axis(a, 100) {
            for y in common::axis(b, 100) {
                let lhs = common::appel(x, y, da, db) - common::isa(x, y, da, db);
                let rhs = (((1.0 - x) / db as f64).sqrt() - ((1.0 - y) / da as f64).sqrt()).powi(2);
                gap = gap.max((lhs - rhs).abs());
            }
        }
        for i in 0..100 {
            let y = b * i as f64 / 99.0;
            let x = common::restriction(y, da, db);
            coincide = coincide.max((common::dssa(x, y, da, db) - common::isa(x, y, da, db)).abs());
            if (5..95).contains(&i) {
                let gx =
                    (common::dssa(x + H, y, da, db) - common::dssa(x - H, y, da, db)) / (2.0 * H);
                let gy =
                    (common::dssa(x, y + H, da, db) - common::dssa(x, y - H, da, db)) / (2.0 * H);
                grad = grad.max(
                    (gx - 1.0 / db as f64)
                        .abs()
                        .max((gy - 1.0 / da as f64).abs()),
                );
            }
        }
        let (ga, gb) = (gellmann_basis(da)?, gellmann_basis(db)?);
        for s in 0..50 {
            let rho = sample_state(
                Ensemble::HilbertSchmidt,
                &[da, db],
                &mut substream(5005 + k as u64, s),
            )?;
            decomp = decomp.max(linear_entropy_decomposition_defect(&rho, &ga, &gb)?);
        }
    }
    let lib = linentropy::verify::identity_suite(&PAIRS.map(|(a, b)| pair(a, b)))?;
    Ok(Outcome {
        passed: gap <= 1e-12 && coincide <= 1e-11 && grad <= 1e-6 && decomp <= 1e-10 && lib.passed(),
        detail: format!(
            "gap {gap:.1e} (1e-12), |g-h| on curve {coincide:.1e} (1e-11), gradient {grad:.1e} (1e-6), decomposition {decomp:.1e} (1e-10), library suite {}/{} checks",
            lib.checks.iter().filter(|c| c.passed).count(),
            lib.checks.len()
        ),
    })
}

/// Rényi and purity forms are the sharp bound under substitution.
fn ac6() -> Result<Outcome> {
    let (mut renyi, mut purity) = (0.0_f64, 0.0_f64);
    for (da, db) in PAIRS {
        let dims = pair(da, db);
        let (lx, ly) = ((da as f64).log2(), (db as f64).log2());
        for x in common::axis(lx, (lx / 0.01).round() as usize) {
            for y in common::axis(ly, (ly / 0.01).round() as usize) {
                let f = common::sharp(1.0 - (-x).exp2(), 1.0 - (-y).exp2(), da, db);
                renyi = renyi.max((renyi_f(x, y, dims)?.0 + (1.0 - f).log2()).abs());
            }
        }
        let (a, b) = (common::big_d(da), common::big_d(db));
        for x in common::axis(a, (a / 0.01).round() as usize) {
            for y in common::axis(b, (b / 0.01).round() as usize) {
                let f = common::sharp(x, y, da, db);
                purity = purity.max((purity_f(1.0 - x, 1.0 - y, dims)?.0 - (1.0 - f)).abs());
            }
        }
    }
    let corner = (renyi_f(1.0, 1.0, pair(2, 2))?.0 - 2.0).abs();
    Ok(Outcome {
        passed: renyi <= 1e-10 && purity <= 1e-12 && corner <= 1e-12,
        detail: format!("renyi {renyi:.1e} (1e-10), purity {purity:.1e} (1e-12), renyi (1,1) 2x2 off 2 by {corner:.1e}"),
    })
}

/// Inverted lower bound: closed forms, the Bell point and dominance over Araki–Lieb.
fn ac7() -> Result<Outcome> {
    let (mut closed, mut oracle, mut al) = (0.0_f64, 0.0_f64, f64::INFINITY);
    for (da, db) in PAIRS {
        let dims = pair(da, db);
        let (a, b) = (common::big_d(da), common::big_d(db));
        for x in common::axis(a, 50) {
            for y in common::axis(b, 50) {
                let v = inverted_lower_f(x, y, dims)?.value;
                closed = closed.max((v - inverted_closed_form(x, y, dims)?.0).abs());
                oracle = oracle.max((v - common::inverted(x, y, da, db)).abs());
                al = al.min(v - (x - y).abs());
            }
        }
    }
    let rho = bell();
    let p = point(&rho);
    let at_bell = inverted_lower_f(p.x, p.y, pair(2, 2))?.value;
    let bell_ok = (p.x - 0.5).abs() < 1e-12 && at_bell.abs() <= 1e-12 && p.z.abs() <= 1e-12;
    Ok(Outcome {
        passed: closed <= 1e-8 && oracle <= 1e-9 && al >= -1e-12 && bell_ok,
        detail: format!(
            "closed form vs bisection {closed:.1e} (1e-8), vs test bisection {oracle:.1e}, min(f~ - |x-y|) {al:.1e}, Bell bound {at_bell:.1e} at z = {:.1e}",
            p.z
        ),
    })
}

/// DSSA approaches the dimension-free bound as both dimensions grow.
fn ac8() -> Result<Outcome> {
    let d = 1_000_000;
    let dims = pair(d, d);
    let big = common::big_d(d);
    let (mut worst, mut n) = (0.0_f64, 0);
    for x in common::axis(big, 100) {
        for y in common::axis(big, 100) {
            if x > common::restriction(y, d, d) {
                continue;
            }
            if let Some(a) = common::audenaert(x, y) {
                worst = worst.max((linentropy::bounds::dssa_g(x, y, dims)? - a).abs());
                n += 1;
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-5 && n > 0,
        detail: format!("d = 10^6, {n} grid points, max |g - audenaert| {worst:.2e} (tol 1e-5)"),
    })
}

/// Operator bound on the generated bases, Schatten and correlation-tensor inequalities and
/// Bloch round trips on random states.
fn ac9() -> Result<Outcome> {
    let mut bases = 0;
    let mut failures = Vec::new();
    let mut check = |name: String, basis: &linentropy::OperatorBasis| -> Result<()> {
        bases += 1;
        if let OperatorBoundVerdict::Fail { .. } = check_operator_bound(basis)? {
            failures.push(name);
        }
        Ok(())
    };
    for d in 2..=4 {
        check(format!("gellmann-{d}"), &gellmann_basis(d)?)?;
    }
    let mut round_trip = 0.0_f64;
    let mut structural_min = f64::INFINITY;
    let mut structural_violations = 0;
    let mut states = 0;
    for (k, &(da, db)) in PAIRS.iter().enumerate() {
        let mut config = SamplerConfig::new(&[da, db], Ensemble::HilbertSchmidt, 1000, 9009);
        config.structural = true;
        let report = run_campaign(&config, None)?;
        for (name, s) in &report.bounds {
            if name.starts_with("schatten")
                || name.starts_with("tensor_norm")
                || name == "correlation_elementwise"
            {
                structural_violations += s.violations;
                structural_min = structural_min.min(s.min_slack.unwrap_or(f64::INFINITY));
            }
        }
        let (ga, gb) = (gellmann_basis(da)?, gellmann_basis(db)?);
        for s in 0..1000 {
            let rho = sample_state(
                Ensemble::HilbertSchmidt,
                &[da, db],
                &mut substream(9100 + k as u64, s),
            )?;
            let (a, b) = (rho.partial_trace(&[0])?, rho.partial_trace(&[1])?);
            let (aa, ab) = (adapted_basis(&a)?, adapted_basis(&b)?);
            check(format!("adapted-{da}x{db}-{s}-A"), &aa)?;
            check(format!("adapted-{da}x{db}-{s}-B"), &ab)?;
            round_trip = round_trip
                .max(bloch_round_trip_defect(&a, &ga)?)
                .max(bloch_round_trip_defect(&b, &gb)?)
                .max(bloch_round_trip_defect(&a, &aa)?)
                .max(bloch_round_trip_defect(&b, &ab)?);
            states += 1;
        }
    }
    Ok(Outcome {
        passed: failures.is_empty() && structural_violations == 0 && structural_min >= -1e-9 && round_trip <= 1e-10,
        detail: format!(
            "{bases} bases, {} operator-bound failures; {states} states, structural min slack {structural_min:.2e} (tol -1e-9); round trip {round_trip:.1e} (1e-10)",
            failures.len()
        ),
    })
}

/// Byte-identical campaign files for different worker counts.
fn ac10() -> Result<Outcome> {
    let mut identical = true;
    let mut files = 0;
    for (dims, inject) in [(vec![2, 2], 50), (vec![2, 3], 0), (vec![2, 2, 2], 0)] {
        let mut outputs = Vec::new();
        for workers in [1, 4, 1] {
            let dir = tempfile::tempdir()?;
            let mut config = SamplerConfig::new(&dims, Ensemble::HilbertSchmidt, 1000, 7);
            config.workers = workers;
            config.extremal_injections = inject;
            run_campaign(&config, Some(dir.path()))?;
            let read = |f: &str| std::fs::read(dir.path().join(f));
            outputs.push((read(SAMPLES_FILE)?, read(SUMMARY_FILE)?));
        }
        identical &= outputs.windows(2).all(|w| w[0] == w[1]);
        files += 2 * outputs.len();
    }
    Ok(Outcome {
        passed: identical,
        detail: format!(
            "{files} files from runs with 1, 4 and 1 workers, byte-identical: {identical}"
        ),
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 ISA saturation", ac1, Duration::from_secs(1)),
        ("AC2 DSSA saturation", ac2, Duration::from_secs(5)),
        ("AC3 boundary coverage", ac3, Duration::from_secs(30)),
        ("AC4 no violations", ac4, Duration::from_secs(300)),
        ("AC5 identities", ac5, Duration::from_secs(30)),
        ("AC6 form consistency", ac6, Duration::from_secs(10)),
        ("AC7 inversion", ac7, Duration::from_secs(30)),
        ("AC8 large-dimension limit", ac8, Duration::from_secs(1)),
        ("AC9 structural checks", ac9, Duration::from_secs(60)),
        ("AC10 determinism", ac10, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(o) => (o.passed && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} {name}: {detail}; {:.2}s (budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        failed += usize::from(!ok);
    }
    println!("acceptance: {}/10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
