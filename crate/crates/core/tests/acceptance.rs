//! Acceptance suite: every criterion prints one pass/fail line
//! (`cargo test --test acceptance -- --nocapture` to see them all).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minrespoly::bounds::{
    bw_check, bw_refined_bound, classify_from_result, lower_bound_classic, lower_bound_sharp,
    EqualityClass,
};
use minrespoly::green::{green_value, kappa, GapPolynomial};
use minrespoly::invimage::{
    check_admissible, chebyshev_generator, compose_generator, green_closed_form, inverse_image,
    AdmissiblePolynomial,
};
use minrespoly::minres::{minres_exchange, minres_grid_oracle, verify_alternation};
use minrespoly::{IntervalUnion, RealPolynomial};

const QUAD_TOL: f64 = 1e-12;
const SOLVER_TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;

fn report(criterion: usize, desc: &str, failures: &[String]) {
    let ok = failures.is_empty();
    println!(
        "criterion {criterion}: [{}] {desc}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed:\n{}", failures.join("\n"));
}

fn mirror_set() -> IntervalUnion {
    let r3 = 3f64.sqrt();
    let r7 = 7f64.sqrt();
    IntervalUnion::from_endpoints(&[-r7, -r3, r3, r7]).unwrap()
}

/// Random 1-3 interval set keeping 0 strictly outside (and clear of all
/// endpoints); half the draws put 0 inside the hull, half outside.
fn random_set(rng: &mut ChaCha8Rng, zero_in_hull: bool) -> IntervalUnion {
    loop {
        let s = if zero_in_hull {
            // one interval left of 0, one or two right
            let mut eps = Vec::new();
            let mut x = -rng.random_range(2.0..5.0);
            for _ in 0..2 {
                eps.push(x);
                x += rng.random_range(0.4..1.5);
            }
            let right = rng.random_range(1..=2);
            let mut x = rng.random_range(0.3..1.5);
            for _ in 0..2 * right {
                eps.push(x);
                x += rng.random_range(0.4..1.5);
            }
            if eps[1] > -0.2 {
                continue;
            }
            IntervalUnion::from_endpoints(&eps).unwrap()
        } else {
            let ell = rng.random_range(1..=3);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let mut eps = Vec::new();
            let mut x = rng.random_range(0.3..2.0);
            for _ in 0..2 * ell {
                eps.push(sign * x);
                x += rng.random_range(0.4..1.5);
            }
            eps.sort_by(f64::total_cmp);
            IntervalUnion::from_endpoints(&eps).unwrap()
        };
        if !s.contains(0.0) && s.endpoints().iter().all(|e| e.abs() > 0.2) {
            return s;
        }
    }
}

fn scaled_chebyshev(n: usize, lo: f64, hi: f64, alpha: f64) -> AdmissiblePolynomial {
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = alpha;
    let p = RealPolynomial::chebyshev(lo, hi, coeffs).unwrap();
    check_admissible(&p, 1e-10).unwrap().admissible().unwrap()
}

/// Ten admissible polynomials, degrees 2-6, up to three intervals.
fn generators() -> Vec<AdmissiblePolynomial> {
    let p2 = RealPolynomial::monomial(vec![-2.5, 0.0, 0.5]).unwrap(); // (x^2-5)/2
    let t2 = chebyshev_generator(2, -1.0, 1.0).unwrap();
    let t3 = chebyshev_generator(3, -1.0, 1.0).unwrap();
    vec![
        chebyshev_generator(2, 1.0, 2.0).unwrap(),
        chebyshev_generator(3, -2.0, -0.5).unwrap(),
        chebyshev_generator(4, 0.3, 2.2).unwrap(),
        chebyshev_generator(6, -1.5, 1.0).unwrap(),
        scaled_chebyshev(2, -1.0, 1.0, 1.3),
        scaled_chebyshev(3, 0.5, 2.0, 1.15),
        check_admissible(&p2, 1e-10).unwrap().admissible().unwrap(),
        compose_generator(&t2, &scaled_chebyshev(2, -1.2, 0.8, 1.2))
            .unwrap()
            .admissible()
            .unwrap(),
        compose_generator(&t2, &scaled_chebyshev(3, -1.0, 2.0, 1.05))
            .unwrap()
            .admissible()
            .unwrap(),
        compose_generator(&t3, &scaled_chebyshev(2, 1.0, 3.0, 1.4))
            .unwrap()
            .admissible()
            .unwrap(),
    ]
}

#[test]
fn criterion_1_single_interval_chebyshev_exactness() {
    let mut failures = Vec::new();
    let s = IntervalUnion::from_endpoints(&[1.0, 2.0]).unwrap();
    let k = kappa(&s, QUAD_TOL).unwrap();
    for n in 1..=10 {
        let res = minres_exchange(&s, n, SOLVER_TOL, MAX_ITER).unwrap();
        // |T_n(-3)| = cosh(n arccosh 3)
        let exact = 1.0 / (n as f64 * 3f64.acosh()).cosh();
        let rel = (res.deviation - exact).abs() / exact;
        if rel > 1e-9 {
            failures.push(format!("n={n}: L relative error {rel:e}"));
        }
        let sharp = lower_bound_sharp(k, n).unwrap();
        let rel = (sharp - res.deviation).abs() / res.deviation;
        if rel > 1e-9 {
            failures.push(format!("n={n}: sharp bound off by {rel:e} relative"));
        }
    }
    report(1, "single-interval Chebyshev exactness, n = 1..10", &failures);
}

#[test]
fn criterion_2_kappa_closed_forms() {
    let mut failures = Vec::new();
    let s = IntervalUnion::from_endpoints(&[1.0, 2.0]).unwrap();
    let k = kappa(&s, QUAD_TOL).unwrap();
    let exact = 3.0 - 8f64.sqrt();
    if (k - exact).abs() > 1e-10 {
        failures.push(format!("kappa([1,2]) = {k}, expected {exact}"));
    }
    let k2 = kappa(&mirror_set(), QUAD_TOL).unwrap();
    let exact2 = (2.0 / (5.0 + 21f64.sqrt())).sqrt();
    if (k2 - exact2).abs() > 1e-9 {
        failures.push(format!("two-interval kappa = {k2}, expected {exact2}"));
    }
    report(2, "kappa closed forms (conformal map and inverse image)", &failures);
}

#[test]
fn criterion_3_two_interval_equality_case() {
    let mut failures = Vec::new();
    let s = mirror_set();
    let k = kappa(&s, QUAD_TOL).unwrap();

    let res2 = minres_exchange(&s, 2, SOLVER_TOL, MAX_ITER).unwrap();
    if (res2.deviation - 0.4).abs() > 1e-9 * 0.4 {
        failures.push(format!("L_2 = {}, expected 0.4", res2.deviation));
    }
    let sharp2 = lower_bound_sharp(k, 2).unwrap();
    if (sharp2 - 0.4).abs() > 1e-8 {
        failures.push(format!("sharp bound at n=2 is {sharp2}, expected 0.4"));
    }
    match classify_from_result(&s, 2, &res2, 1e-7).unwrap() {
        EqualityClass::Equality => {}
        other => failures.push(format!("classification at n=2: {other:?}")),
    }

    let res3 = minres_exchange(&s, 3, SOLVER_TOL, MAX_ITER).unwrap();
    if (res3.deviation - res2.deviation).abs() > 1e-9 * res2.deviation {
        failures.push(format!(
            "L_3 = {} differs from L_2 = {}",
            res3.deviation, res2.deviation
        ));
    }
    match classify_from_result(&s, 3, &res3, 1e-7).unwrap() {
        EqualityClass::Strict => {}
        other => failures.push(format!("classification at n=3: {other:?}")),
    }
    if res3.effective_degree != 2 {
        failures.push(format!("effective degree {} at n=3, expected 2", res3.effective_degree));
    }
    report(3, "two-interval equality case (L_2 = L_3 = 0.4)", &failures);
}

#[test]
fn criterion_4_green_oracle_agreement() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let gens = generators();
    assert_eq!(gens.len(), 10);
    for (i, g) in gens.iter().enumerate() {
        let image = inverse_image(g).unwrap();
        let gap = GapPolynomial::solve(&image, QUAD_TOL).unwrap();
        let (hlo, hhi) = image.hull();
        let mut tested = 0;
        while tested < 100 {
            let x = rng.random_range(hlo - 3.0..hhi + 3.0);
            if image.contains(x) {
                continue;
            }
            tested += 1;
            let quad = gap.evaluate(x).unwrap().value;
            let closed = green_closed_form(g, x);
            let diff = (quad - closed).abs();
            if diff > 1e-9 {
                failures.push(format!(
                    "generator {i} (deg {}, ell {}), x = {x}: |quad - closed| = {diff:e}",
                    g.degree(),
                    g.ell()
                ));
            }
        }
    }
    report(4, "Green's function quadrature vs closed form on 10 inverse images", &failures);
}

#[test]
fn criterion_5_green_monotonicity() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for case in 0..50 {
        // outer set, then shrink every interval (dropping one sometimes)
        let outer = random_set(&mut rng, case % 2 == 0);
        let mut inner_eps = Vec::new();
        let drop_idx = if outer.ell() > 1 && rng.random_bool(0.3) {
            Some(rng.random_range(0..outer.ell()))
        } else {
            None
        };
        for (i, (a, b)) in outer.intervals().enumerate() {
            if Some(i) == drop_idx {
                continue;
            }
            let w = b - a;
            let a2 = a + rng.random_range(0.05..0.25) * w;
            let b2 = b - rng.random_range(0.05..0.25) * w;
            inner_eps.push(a2);
            inner_eps.push(b2);
        }
        let inner = IntervalUnion::from_endpoints(&inner_eps).unwrap();

        let (hlo, hhi) = outer.hull();
        let mut tested = 0;
        while tested < 4 {
            let x = rng.random_range(hlo - 2.0..hhi + 2.0);
            if outer.contains(x) {
                continue;
            }
            tested += 1;
            let gi = green_value(&inner, x, QUAD_TOL).unwrap().value;
            let go = green_value(&outer, x, QUAD_TOL).unwrap().value;
            if gi < go - 1e-10 {
                failures.push(format!("case {case}, x = {x}: g_inner {gi} < g_outer {go}"));
            }
        }
    }
    report(5, "Green's function monotonicity on 50 nested pairs", &failures);
}

#[test]
fn criterion_6_oracle_sandwich_and_certificates() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for case in 0..50 {
        let s = random_set(&mut rng, case % 2 == 0);
        for n in 0..=6 {
            let res = match minres_exchange(&s, n, SOLVER_TOL, MAX_ITER) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("case {case}, n={n}: solver error {e}"));
                    continue;
                }
            };
            let grid = 64.max(16 * (n + 1));
            let bracket = match minres_grid_oracle(&s, n, grid, None) {
                Ok(b) => b,
                Err(e) => {
                    failures.push(format!("case {case}, n={n}: oracle error {e}"));
                    continue;
                }
            };
            if res.deviation < bracket.lower - 1e-8 || res.deviation > bracket.upper + 1e-8 {
                failures.push(format!(
                    "case {case}, n={n}: L = {} outside bracket [{}, {}]",
                    res.deviation, bracket.lower, bracket.upper
                ));
            }
            if res.certified && !verify_alternation(&res, &s, 1e-8).pass {
                failures.push(format!("case {case}, n={n}: certified run fails alternation"));
            }
            if res.certified && n > 0 && res.effective_degree + 1 < n {
                failures.push(format!(
                    "case {case}, n={n}: effective degree {} outside {{n-1, n}}",
                    res.effective_degree
                ));
            }
        }
    }
    report(6, "oracle sandwich and alternation certificates on 50 random sets", &failures);
}

#[test]
fn criterion_7_bound_chain() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(60); // same 50 sets as criterion 6
    for case in 0..50 {
        let s = random_set(&mut rng, case % 2 == 0);
        let k = kappa(&s, QUAD_TOL).unwrap();
        for n in 0..=6 {
            let res = minres_exchange(&s, n, SOLVER_TOL, MAX_ITER).unwrap();
            let sharp = lower_bound_sharp(k, n).unwrap();
            let classic = lower_bound_classic(k, n);
            if classic > sharp {
                failures.push(format!("case {case}, n={n}: classic {classic} > sharp {sharp}"));
            }
            if sharp > res.deviation + 1e-8 {
                failures.push(format!(
                    "case {case}, n={n}: sharp {sharp} above L = {}",
                    res.deviation
                ));
            }
            match classify_from_result(&s, n, &res, 1e-7).unwrap() {
                EqualityClass::Strict => {
                    if res.deviation - sharp <= 1e-9 {
                        failures.push(format!(
                            "case {case}, n={n}: classified strict but L - sharp = {:e}",
                            res.deviation - sharp
                        ));
                    }
                }
                EqualityClass::Equality => {
                    if (res.deviation - sharp).abs() > 1e-8 * res.deviation {
                        failures.push(format!(
                            "case {case}, n={n}: classified equality but L = {} vs sharp = {sharp}",
                            res.deviation
                        ));
                    }
                }
                EqualityClass::Undetermined { .. } => {}
            }
        }
    }
    report(7, "bound chain and strictness on the same 50 sets", &failures);
}

#[test]
fn criterion_8_refined_bernstein_walsh() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    let mut tested = 0;
    while tested < 200 {
        let ell = rng.random_range(1..=3);
        let mut eps = Vec::new();
        let mut x = rng.random_range(-5.0..0.0);
        for _ in 0..2 * ell {
            eps.push(x);
            x += rng.random_range(0.4..1.6);
        }
        let k_set = IntervalUnion::from_endpoints(&eps).unwrap();

        let deg = rng.random_range(1..=8);
        let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
        if coeffs[deg].abs() < 0.1 {
            coeffs[deg] = 0.5;
        }
        let q = RealPolynomial::monomial(coeffs).unwrap();

        let (hlo, hhi) = k_set.hull();
        let xq = rng.random_range(hlo - 3.0..hhi + 3.0);
        if k_set.contains(xq) || k_set.endpoints().iter().any(|e| (e - xq).abs() < 0.01) {
            continue;
        }
        tested += 1;
        let c = bw_check(&k_set, &q, xq, QUAD_TOL, 1e-9).unwrap();
        if !c.pass {
            failures.push(format!(
                "case {tested}: lhs {} exceeds cosh bound {}",
                c.lhs, c.rhs
            ));
        }
        if !c.refinement_strict {
            failures.push(format!(
                "case {tested}: cosh {} not below exp {}",
                c.rhs, c.classic_rhs
            ));
        }
    }
    // exact equality case: |T_2(2)| = 7 = cosh(2 g(2))
    let k_set = IntervalUnion::from_endpoints(&[-1.0, 1.0]).unwrap();
    let rhs = bw_refined_bound(&k_set, 2.0, 2, QUAD_TOL).unwrap();
    if (rhs - 7.0).abs() > 1e-10 {
        failures.push(format!("equality case: cosh(2 g(2)) = {rhs}, expected 7"));
    }
    report(8, "refined Bernstein-Walsh on 200 random triples plus the equality case", &failures);
}
