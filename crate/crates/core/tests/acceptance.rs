//! Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
//! budget. Exits nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use caustic_core::dynamics::reflection_residual;
use caustic_core::fourier::{FourierSeries, ModeSet};
use caustic_core::geometry::{constant_width_check, Deformation, SupportFunction};
use caustic_core::obstruction::{
    bare_sum, poly_p, quadratic_obstruction, residues, split_constants,
};
use caustic_core::random::{admissible_p1, real_series, seeded, uniform, SeededRng};
use caustic_core::variational::{
    e11_projection, error_functional, expansion_reports, expansion_term_e10, expansion_term_e11,
    newton_solve_caustic, recurrence_order_slope, solve_first_order, CausticCandidate, FirstOrder,
};
use caustic_core::Complex64;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_err(e: caustic_core::Error) -> String {
    e.to_string()
}

fn c1_disc_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0] {
        let p = SupportFunction::disc(lambda).map_err(fmt_err)?;
        for m in 2..=7 {
            let u = CausticCandidate::identity(m).map_err(fmt_err)?;
            worst = worst.max(error_functional(&p, &u).map_err(fmt_err)?.sup_norm);
        }
    }
    ensure(worst < 1e-12, || format!("sup |E| = {worst:e}"))?;
    Ok(format!("max sup |E^m(λ, id)| = {worst:.1e}"))
}

fn random_pair(rng: &mut SeededRng, order: usize) -> (FourierSeries, FourierSeries) {
    (
        real_series(rng, order, 0.3, |_| true),
        real_series(rng, order, 0.3, |_| true),
    )
}

fn c2_expansion_oracle() -> Outcome {
    let mut rng = seeded(2);
    let (mut w10, mut w11): (f64, f64) = (0.0, 0.0);
    for i in 0..20u32 {
        let m = 2 + i % 6;
        let (p1, u1) = random_pair(&mut rng, 8);
        let [e10, e11] = expansion_reports(m, &p1, &u1).map_err(fmt_err)?;
        w10 = w10.max(e10.discrepancy);
        w11 = w11.max(e11.discrepancy);
    }
    ensure(w10 < 1e-6 && w11 < 1e-5, || format!("E10 {w10:e}, E11 {w11:e}"))?;
    Ok(format!("max discrepancy E10 {w10:.1e}, E11 {w11:.1e}"))
}

fn c3_first_order() -> Outcome {
    let mut solved = 0;
    let mut obstructed = 0;
    let mut worst: f64 = 0.0;
    for m in 2..=7u32 {
        for k in 1..=12usize {
            for p1 in [FourierSeries::cos_mode(k, 1.0), FourierSeries::sin_mode(k, 1.0)] {
                let resonant = k % m as usize == 0;
                match solve_first_order(m, &p1).map_err(fmt_err)? {
                    FirstOrder::Solved { u1 } => {
                        ensure(!resonant, || format!("m={m} k={k} solved but resonant"))?;
                        solved += 1;
                        worst = worst.max(expansion_term_e10(m, &p1, &u1).max_abs_coeff());
                    }
                    FirstOrder::Obstructed { projection } => {
                        ensure(resonant, || format!("m={m} k={k} obstructed but admissible"))?;
                        ensure(projection.max_abs_coeff() > 0.0, || "empty projection".into())?;
                        obstructed += 1;
                    }
                }
            }
        }
        let mut rng = seeded(300 + m as u64);
        let p1 = real_series(&mut rng, 12, 1.0, |k| k % m as i64 != 0);
        let u1 = solve_first_order(m, &p1)
            .map_err(fmt_err)?
            .solved()
            .ok_or("admissible multi-mode p1 obstructed")?;
        worst = worst.max(expansion_term_e10(m, &p1, &u1).max_abs_coeff());
    }
    ensure(worst < 1e-10, || format!("‖E10‖ = {worst:e}"))?;
    Ok(format!(
        "{solved} solved, {obstructed} obstructed single modes; max ‖E10‖ = {worst:.1e}"
    ))
}

fn c4_splitting() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in 1..=4u32 {
        for r in residues(l) {
            let (cs, css) = split_constants(l, r).map_err(fmt_err)?;
            for n in -8i64..=8 {
                for k in -8i64..=8 {
                    let v = poly_p(l, r, n, k).map_err(fmt_err)?;
                    let w = Complex64::new(0.0, -16.0)
                        * (cs * cs * (k as f64 - css) * (n as f64 - k as f64 + css));
                    worst = worst.max((v - w).norm() / v.norm().max(1.0));
                }
            }
        }
    }
    ensure(worst < 1e-8, || format!("relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn c5_projection() -> Outcome {
    let mut rng = seeded(5);
    let mut worst: f64 = 0.0;
    for i in 0..10u32 {
        let l = 1 + i % 2;
        let odd = 2 * l as i64 + 1;
        let p1 = real_series(&mut rng, 6 * odd as usize, 0.4, |k| k % odd != 0);
        let u1 = solve_first_order(odd as u32, &p1)
            .map_err(fmt_err)?
            .solved()
            .ok_or("admissible p1 obstructed")?;
        let e11 = expansion_term_e11(odd as u32, &p1, &u1);
        let want = e11.project(&ModeSet::NonzeroMultiples(2 * odd));
        let got = e11_projection(l, &p1).map_err(fmt_err)?;
        worst = worst.max((&want - &got).max_abs_coeff());
    }
    ensure(worst < 1e-8, || format!("max mode error {worst:e}"))?;
    Ok(format!("max mode error {worst:.1e}"))
}

fn c6_hand_value() -> Outcome {
    let p1 = FourierSeries::from_cos_sin(0.0, &[(5, 1.0), (7, 1.0)], &[]);
    let mut brute = 0.0;
    for k in -20i64..=20 {
        brute += (k * (k - 2)) as f64 * p1.coeff(6 * k + 1).re * p1.coeff(6 * (2 - k) - 1).re;
    }
    ensure((brute + 0.25).abs() < 1e-14, || format!("brute force gave {brute}"))?;
    let lib = bare_sum(1, &p1, 2);
    ensure((lib - Complex64::new(-0.25, 0.0)).norm() < 1e-14, || {
        format!("library gave {lib}")
    })?;
    let rep = quadratic_obstruction(1, &p1, None).map_err(fmt_err)?;
    let reported = rep.bare_values[&2];
    ensure((reported.re + 0.25).abs() < 1e-14, || format!("report gave {reported}"))?;
    Ok(format!("bare sum at n = 2: brute {brute}, library {}", lib.re))
}

fn c7_recurrence() -> Outcome {
    let mut rng = seeded(7);
    let eps: Vec<f64> = (0..7).map(|j| 10f64.powf(-2.0 - j as f64 / 3.0)).collect();
    let mut lines = Vec::new();
    for n in 1..=2usize {
        for m in 2..=3u32 {
            let mut ps = Vec::new();
            let mut us = Vec::new();
            for _ in 0..=n {
                let (p, u) = random_pair(&mut rng, 4);
                ps.push(p);
                us.push(u);
            }
            let def = Deformation::new(ps, us).map_err(fmt_err)?;
            let slope = recurrence_order_slope(m, &def, &eps).map_err(fmt_err)?;
            ensure(slope > n as f64 + 1.8, || format!("N={n} m={m}: slope {slope:.3}"))?;
            lines.push(format!("N={n},m={m}:{slope:.2}"));
        }
    }
    Ok(format!("slopes {}", lines.join(" ")))
}

fn c8_end_to_end() -> Outcome {
    let p = SupportFunction::ellipse_fixture();
    let u = CausticCandidate::identity(3).map_err(fmt_err)?;
    let rep = newton_solve_caustic(&p, 3, &u, 1e-10).map_err(fmt_err)?;
    ensure(rep.residual < 1e-10, || format!("variational residual {:e}", rep.residual))?;
    let mut worst: f64 = 0.0;
    for j in 0..64 {
        let orbit = rep.candidate.orbit(TAU * j as f64 / 64.0);
        worst = worst.max(reflection_residual(&p, &orbit).map_err(fmt_err)?);
    }
    ensure(worst < 1e-8, || format!("reflection residual {worst:e}"))?;
    Ok(format!(
        "{} iterations, variational {:.1e}, reflection {worst:.1e}",
        rep.iterations, rep.residual
    ))
}

fn relevant_mode_max(p1: &FourierSeries) -> f64 {
    // modes 6k ± 1 with k ≠ 0, the only ones entering the l = 1 system
    p1.modes()
        .filter(|(k, _)| k.rem_euclid(6) == 1 || k.rem_euclid(6) == 5)
        .filter(|(k, _)| k.abs() != 1)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

fn c9_rigidity() -> Outcome {
    let mut rng = seeded(9);
    let mut violations = Vec::new();
    let mut weakest = f64::INFINITY;
    for i in 0..1000 {
        let p1 = admissible_p1(&mut rng, 1, 40);
        let rep = quadratic_obstruction(1, &p1, None).map_err(fmt_err)?;
        weakest = weakest.min(rep.max_abs);
        let passes = rep.trivial_verdict || rep.max_abs <= 1e-6;
        if passes && relevant_mode_max(&p1) >= 1e-10 {
            violations.push(serde_json::json!({
                "index": i,
                "p1": p1,
                "max_abs": rep.max_abs,
            }));
        }
    }
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("rigidity_counterexamples.json");
    let archive = serde_json::json!({ "seed": 9, "samples": 1000, "counterexamples": violations });
    std::fs::write(&path, serde_json::to_string_pretty(&archive).unwrap())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    ensure(violations.is_empty(), || {
        format!("{} counterexamples archived at {}", violations.len(), path.display())
    })?;
    Ok(format!("1000/1000 obstructed, smallest max |value| = {weakest:.3e}"))
}

fn c10_constant_width() -> Outcome {
    let mut rng = seeded(10);
    let mut accepted = 0;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let odd_only = i % 2 == 0;
        let p = loop {
            let bump = if odd_only {
                real_series(&mut rng, 7, 0.01, |k| k % 2 != 0)
            } else {
                real_series(&mut rng, 7, 0.01, |_| true)
            };
            let c = uniform(&mut rng, 0.8, 1.2);
            if let Ok(p) = SupportFunction::new(&FourierSeries::constant(c) + &bump) {
                break p;
            }
        };
        let report = constant_width_check(&p, 1e-10);
        ensure(report.is_constant_width == odd_only, || {
            format!("sample {i}: verdict {} for odd_only = {odd_only}", report.is_constant_width)
        })?;
        if report.is_constant_width {
            accepted += 1;
            let u = CausticCandidate::identity(2).map_err(fmt_err)?;
            let rep = newton_solve_caustic(&p, 2, &u, 1e-10).map_err(fmt_err)?;
            worst = worst.max(rep.residual);
        }
    }
    ensure(worst < 1e-10, || format!("m = 2 residual {worst:e}"))?;
    Ok(format!("{accepted}/100 accepted, max m = 2 residual {worst:.1e}"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "disc identity", budget: Duration::from_secs(1), run: c1_disc_identity },
        Criterion { id: 2, name: "expansion oracle", budget: Duration::from_secs(30), run: c2_expansion_oracle },
        Criterion { id: 3, name: "first-order cohomology", budget: Duration::from_secs(30), run: c3_first_order },
        Criterion { id: 4, name: "splitting identity", budget: Duration::from_secs(1), run: c4_splitting },
        Criterion { id: 5, name: "projection formula", budget: Duration::from_secs(10), run: c5_projection },
        Criterion { id: 6, name: "hand value", budget: Duration::from_secs(1), run: c6_hand_value },
        Criterion { id: 7, name: "recurrence order", budget: Duration::from_secs(10), run: c7_recurrence },
        Criterion { id: 8, name: "end-to-end caustic", budget: Duration::from_secs(30), run: c8_end_to_end },
        Criterion { id: 9, name: "rigidity sweep", budget: Duration::from_secs(60), run: c9_rigidity },
        Criterion { id: 10, name: "constant width", budget: Duration::from_secs(30), run: c10_constant_width },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.budget => Err(format!("{msg}; over budget {:?}", c.budget)),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!(
            "{tag} criterion {:>2} {:<24} {:>8.3}s  {msg}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
