use caustic_core::fourier::{FourierSeries, ModeSet};
use caustic_core::geometry::Deformation;
use caustic_core::random::{real_series, seeded, SeededRng};
use caustic_core::variational::{
    a_coeff, e11_projection, expansion_reports, expansion_term_e10, expansion_term_e11,
    recurrence_order_slope, solve_first_order, FirstOrder,
};

fn small(rng: &mut SeededRng, order: usize) -> FourierSeries {
    real_series(rng, order, 0.3, |_| true)
}

#[test]
fn analytic_terms_match_numerical_derivatives() {
    let mut rng = seeded(11);
    for m in 2..=7 {
        let p1 = small(&mut rng, 5);
        let u1 = small(&mut rng, 5);
        let [e10, e11] = expansion_reports(m, &p1, &u1).unwrap();
        assert!(e10.discrepancy < 1e-6, "m={m} E10 {:e}", e10.discrepancy);
        assert!(e11.discrepancy < 1e-5, "m={m} E11 {:e}", e11.discrepancy);
    }
}

#[test]
fn e10_vanishes_iff_first_order_solvable() {
    for m in 2..=7u32 {
        for k in -12..=12i64 {
            if k == 0 {
                continue;
            }
            let p1 = if k > 0 {
                FourierSeries::cos_mode(k as usize, 1.0)
            } else {
                FourierSeries::sin_mode((-k) as usize, 1.0)
            };
            match solve_first_order(m, &p1).unwrap() {
                FirstOrder::Solved { u1 } => {
                    assert!(k % m as i64 != 0);
                    assert!(expansion_term_e10(m, &p1, &u1).max_abs_coeff() < 1e-10);
                }
                FirstOrder::Obstructed { projection } => {
                    assert_eq!(k % m as i64, 0);
                    assert!(projection.max_abs_coeff() > 0.4);
                }
            }
        }
    }
}

#[test]
fn constant_width_link_at_m2() {
    let odd = FourierSeries::from_cos_sin(0.0, &[(3, 0.1), (5, -0.02)], &[(1, 0.3)]);
    let zero = FourierSeries::zeros(0, true);
    assert!(expansion_term_e10(2, &odd, &zero).max_abs_coeff() < 1e-14);
    let even = FourierSeries::cos_mode(2, 0.1);
    assert!(expansion_term_e10(2, &even, &zero).max_abs_coeff() > 1e-3);
}

#[test]
fn a_coeff_is_imaginary() {
    for l in 1..=4u32 {
        let m = 2 * l + 1;
        for k in -20..=20 {
            if k % m as i64 != 0 {
                assert_eq!(a_coeff(m, k).unwrap().re, 0.0);
            }
        }
    }
}

fn admissible_for_projection(rng: &mut SeededRng, l: u32, order: usize) -> FourierSeries {
    let odd = 2 * l as i64 + 1;
    real_series(rng, order, 0.4, |k| k % odd != 0)
}

#[test]
fn projection_matches_e11_modes() {
    let mut rng = seeded(5);
    for l in 1..=2u32 {
        let m = 2 * l + 1;
        for _ in 0..3 {
            let p1 = admissible_for_projection(&mut rng, l, 3 * 2 * m as usize);
            let u1 = solve_first_order(m, &p1).unwrap().solved().unwrap();
            let e11 = expansion_term_e11(m, &p1, &u1);
            let want = e11.project(&ModeSet::NonzeroMultiples(2 * m as i64));
            let got = e11_projection(l, &p1).unwrap();
            let diff = (&want - &got).max_abs_coeff();
            assert!(diff < 1e-8, "l={l}: {diff:e}");
            assert!(got.max_abs_coeff() > 1e-3);
        }
    }
}

#[test]
fn projection_hand_example() {
    let p1 = FourierSeries::from_cos_sin(0.0, &[(5, 1.0), (7, 1.0)], &[]);
    let proj = e11_projection(1, &p1).unwrap();
    let rep = caustic_core::obstruction::quadratic_obstruction(1, &p1, None).unwrap();
    // 𝓕_{12}(E_{1,1}) = 8i · 2 · value(2)
    let want = rep.values[&2] * caustic_core::Complex64::new(0.0, 16.0);
    assert!((proj.coeff(12) - want).norm() < 1e-10);
}

#[test]
fn recurrence_slope() {
    let mut rng = seeded(3);
    let eps: Vec<f64> = (0..7).map(|j| 10f64.powf(-2.0 - j as f64 / 3.0)).collect();
    for n in 1..=2usize {
        for m in 2..=3u32 {
            let mut ps = Vec::new();
            let mut us = Vec::new();
            for _ in 0..=n {
                ps.push(small(&mut rng, 4));
                us.push(small(&mut rng, 4));
            }
            let def = Deformation::new(ps, us).unwrap();
            let slope = recurrence_order_slope(m, &def, &eps).unwrap();
            assert!(slope > n as f64 + 1.8, "N={n} m={m} slope {slope}");
        }
    }
}

#[test]
fn e11_commutes_with_rotation() {
    let mut rng = seeded(9);
    let p1 = small(&mut rng, 4);
    let u1 = small(&mut rng, 4);
    let s = 0.731;
    for m in 2..=5 {
        let a = expansion_term_e11(m, &p1.shift(s), &u1.shift(s));
        let b = expansion_term_e11(m, &p1, &u1).shift(s);
        assert!((&a - &b).max_abs_coeff() < 1e-13);
    }
}
