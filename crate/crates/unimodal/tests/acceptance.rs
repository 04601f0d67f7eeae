//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Every tolerance is pinned in code.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use unimodal::analysis::{
    derivative_scan, flattening_fraction, graph_length_formula, graph_length_polyline,
    hn_derivative_bits, htilde_extremum,
};
use unimodal::conjugacy::{build_a, build_b, h_explicit, ulam_gap_report, ConjSystem};
use unimodal::exactnum::{rat, rat_i, rat_to_f64, Dyadic, Rat};
use unimodal::itergroup::{
    classify_finite_group, conjugate_finite_group, iterate_equals, minimal_group_exponent,
    ConjugacyKind, GroupClass,
};
use unimodal::plconj::{
    check_conjugacy, construct_type, extend_left, linearity_type, perturb_non_conjugate, HalfMap,
    LinearityType, Side,
};
use unimodal::plmap::{skew_tent, tent, FixedSet, PLMap};
use unimodal::semiconj::{enumerate_admissible, enumerate_continuable, zigzag, GridSemiconj};

fn report(criterion: u32, name: &str, started: Instant, ok: bool) {
    println!(
        "criterion {criterion:2}: {} — {name} ({} ms)",
        if ok { "pass" } else { "FAIL" },
        started.elapsed().as_millis()
    );
    assert!(ok, "criterion {criterion} failed: {name}");
}

#[test]
fn criterion_01_dyadic_conjugacy_values() {
    let t = Instant::now();
    let sys = ConjSystem::new(rat(3, 4)).unwrap();
    let expect = [
        rat_i(0),
        rat(27, 64),
        rat(9, 16),
        rat(39, 64),
        rat(3, 4),
        rat(51, 64),
        rat(13, 16),
        rat(55, 64),
        rat_i(1),
    ];
    let ok = (0..=8u64)
        .all(|k| sys.h_on_dyadic(&Dyadic::from_index(k, 3).unwrap()) == expect[k as usize]);
    report(1, "h on A_4 at v = 3/4, exact", t, ok);
}

#[test]
fn criterion_02_explicit_series_cross_oracle() {
    let t = Instant::now();
    let mut ok = true;
    for (p, q) in [(1i64, 4i64), (1, 3), (3, 4)] {
        let v = rat(p, q);
        let sys = ConjSystem::new(v.clone()).unwrap();
        for m in 1..=8u32 {
            let e = m - 1;
            for k in 0..=(1u64 << e) {
                let x = Dyadic::from_index(k, e).unwrap();
                ok &= h_explicit(&v, &x.to_rat(), m).unwrap() == sys.h_on_dyadic(&x);
            }
        }
    }
    report(
        2,
        "branch-slope series equals the recurrence on A_m, m <= 8",
        t,
        ok,
    );
}

#[test]
fn criterion_03_grid_conjugacy_identity() {
    let t = Instant::now();
    let sys = ConjSystem::new(rat(2, 5)).unwrap();
    let f = tent();
    let fv = skew_tent(sys.v()).unwrap();
    let mut ok = true;
    for n in 1..=10u32 {
        let hn = sys.h_n_approx(n).unwrap();
        for d in build_a(n).unwrap().points {
            let x = d.to_rat();
            ok &= hn.eval(&f.eval(&x).unwrap()).unwrap() == fv.eval(&hn.eval(&x).unwrap()).unwrap();
        }
    }
    report(3, "h_n(f(a)) = f_v(h_n(a)) exactly on A_n, n <= 10", t, ok);
}

#[test]
fn criterion_04_power_law() {
    let t = Instant::now();
    let sys = ConjSystem::new(rat(3, 4)).unwrap();
    let mut power = Rat::one();
    let mut ok = true;
    for n in 1..=32u32 {
        power *= sys.v();
        ok &= sys.h_on_dyadic(&Dyadic::from_index(1, n).unwrap()) == power;
    }
    report(4, "h(1/2^n) = v^n exactly, n <= 32", t, ok);
}

#[test]
fn criterion_05_length_formula_vs_polyline() {
    let t = Instant::now();
    let mut ok = true;
    for (vr, vf) in [(rat(3, 10), 0.3), (rat(13, 25), 0.52), (rat(3, 4), 0.75)] {
        for n in 1..=12u32 {
            let poly = graph_length_polyline(&vr, n + 1).unwrap();
            let form = graph_length_formula(vf, u64::from(n)).unwrap();
            ok &= (form - poly).abs() <= 1e-10 * poly;
        }
    }
    report(
        5,
        "closed form matches exact polyline to 1e-10 relative, n <= 12",
        t,
        ok,
    );
}

#[test]
fn criterion_06_length_paper_values() {
    let t = Instant::now();
    let a = graph_length_formula(0.52, 20_000).unwrap();
    let b = graph_length_formula(0.51, 50_000).unwrap();
    let mut ok = (a - 1.99611).abs() < 5e-4 && (b - 1.97903).abs() < 5e-4;
    for n in [10u64, 200, 1000] {
        let c = graph_length_formula(0.5, n).unwrap();
        ok &= (c - std::f64::consts::SQRT_2).abs() < 1e-12;
    }
    report(
        6,
        "l_20001(0.52), l_50001(0.51) within 5e-4; l_n(1/2) = sqrt(2) within 1e-12",
        t,
        ok,
    );
}

#[test]
fn criterion_07_length_limit_trend() {
    let t = Instant::now();
    let mut prev = 0.0;
    let mut ok = true;
    for n in 1..=200u64 {
        let l = graph_length_formula(0.8, n).unwrap();
        ok &= l > prev;
        prev = l;
    }
    ok &= prev > 1.98; // prev is l_201(0.8)
    report(7, "l_n(0.8) increasing and l_201(0.8) > 1.98", t, ok);
}

#[test]
fn criterion_08_derivative_products() {
    let t = Instant::now();
    let mut ok = true;
    for (p, q) in [(1i64, 4i64), (2, 3), (3, 4)] {
        let v = rat(p, q);
        let sys = ConjSystem::new(v.clone()).unwrap();
        for n in 2..=10u32 {
            let b = sys.level_b(n).unwrap();
            let e = n - 1;
            for (k, w) in b.windows(2).enumerate() {
                let mid = Dyadic::from_index(2 * k as u64 + 1, e + 1).unwrap();
                let digits = mid.binary_digits(n as usize - 1).unwrap();
                let slope = hn_derivative_bits(&v, &digits, n).unwrap();
                let expect = (&w[1] - &w[0]) * Rat::from_integer(BigInt::one() << e);
                ok &= slope == expect;
            }
        }
    }
    // Alternating digits 1010… give h'_{2k+1} = (2(1-v))^{2k}.
    let v = rat(3, 4);
    for k in 1..=10u32 {
        let n = 2 * k + 1;
        let digits: Vec<u8> = (0..n - 1).map(|i| (1 - i % 2) as u8).collect();
        let slope = hn_derivative_bits(&v, &digits, n).unwrap();
        let expect = Rat::new(BigInt::one(), BigInt::one() << (2 * k));
        ok &= slope == expect;
    }
    report(
        8,
        "slope products equal interpolant slopes (n <= 10) and the alternating closed form",
        t,
        ok,
    );
}

#[test]
fn criterion_09_almost_everywhere_flattening() {
    let t = Instant::now();
    let frac = flattening_fraction(&rat(3, 4), 200, 10_000, 1e-3, 7);
    report(
        9,
        "fixed seed: >= 99% of 200-bit slope products below 1e-3",
        t,
        frac >= 0.99,
    );
}

#[test]
fn criterion_10_non_convex_fixture_round_trip() {
    let t = Instant::now();
    let gl = HalfMap::left(vec![
        (rat_i(0), rat_i(0)),
        (rat(1, 4), rat(1, 2)),
        (rat(1, 2), rat(5, 8)),
        (rat(5, 8), rat_i(1)),
    ])
    .unwrap();
    let (g, h) = extend_left(&gl).unwrap();
    let right = HalfMap::from_unimodal(&g, Side::Right).unwrap();
    let ok = right.points()
        == [
            (rat(5, 8), rat_i(1)),
            (rat(13, 16), rat(5, 8)),
            (rat(29, 32), rat(1, 2)),
            (rat_i(1), rat_i(0)),
        ]
        && h.breakpoints()
            == [
                (rat_i(0), rat_i(0)),
                (rat(1, 4), rat(1, 2)),
                (rat(1, 2), rat(5, 8)),
                (rat_i(1), rat_i(1)),
            ]
        && check_conjugacy(&g, &h).unwrap();
    report(
        10,
        "non-convex fixture: exact g_r and h breakpoints, exact conjugacy",
        t,
        ok,
    );
}

#[test]
fn criterion_11_linearity_types() {
    let t = Instant::now();
    let mut ok = true;
    for p in 2..=5u32 {
        for q in 2..=5u32 {
            let (g, h) = construct_type(p, q).unwrap();
            ok &= linearity_type(&g).unwrap() == LinearityType { p, q };
            ok &= check_conjugacy(&g, &h).unwrap();
        }
    }
    report(11, "construct_type verifies for all p, q in {2..5}", t, ok);
}

#[test]
fn criterion_12_perturbation_counterexample() {
    let t = Instant::now();
    let (g, cert) = perturb_non_conjugate(&rat(2, 3), &rat(1, 10)).unwrap();
    let (x_star, n, _) = cert.periodic.unwrap();
    let g2 = g.iterate(2 * n);
    let has_diag = g2
        .fixed_points()
        .iter()
        .any(|fs| matches!(fs, FixedSet::Interval(a, b) if a <= &x_star && &x_star <= b));
    let f_clean = tent()
        .iterate(2)
        .fixed_points()
        .iter()
        .all(|fs| matches!(fs, FixedSet::Point(_)));
    report(
        12,
        "g^2 has a diagonal segment near 2/3, f^2 has none",
        t,
        has_diag && f_clean,
    );
}

#[test]
fn criterion_13_zigzag_semiconjugacy() {
    let t = Instant::now();
    let f = tent();
    let ok = (1..=16u32).all(|k| {
        let xi = zigzag(k).unwrap();
        xi.compose(&f) == f.compose(&xi)
    });
    report(
        13,
        "zigzag(k) commutes with the tent map exactly, k <= 16",
        t,
        ok,
    );
}

/// Independent brute-force enumerator for the level-2 census: try every
/// value tuple over the closed candidate set (preimages of the fixed
/// points up to depth 2) against the commuting equation directly.
fn independent_level_two_count() -> usize {
    let f = tent();
    let mut candidates = vec![rat_i(0), rat(2, 3)];
    for _ in 0..2 {
        let mut next = candidates.clone();
        for y in &candidates {
            next.extend(f.preimages(y).unwrap().points);
        }
        next.sort();
        next.dedup();
        candidates = next;
    }
    let grid = [rat_i(0), rat(1, 2), rat_i(1)];
    let mut count = 0usize;
    for a in &candidates {
        for b in &candidates {
            for c in &candidates {
                let table = [a.clone(), b.clone(), c.clone()];
                // xi(f(0)) = f(xi(0)), xi(f(1/2)) = f(xi(1/2)), xi(f(1)) = f(xi(1)).
                let ok = (0..3).all(|i| {
                    let fx = f.eval(&grid[i]).unwrap();
                    let idx = grid.iter().position(|g| g == &fx).unwrap();
                    table[idx] == f.eval(&table[i]).unwrap()
                });
                if ok {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn criterion_14_semiconjugation_census() {
    let t = Instant::now();
    let mut ok = true;
    let c1 = enumerate_admissible(1).unwrap();
    ok &= c1.tables.len() == 4;
    ok &= c1.formula_count == BigInt::from(6) && !c1.matches_formula;
    let c2 = enumerate_admissible(2).unwrap();
    ok &= c2.tables.len() == independent_level_two_count();
    ok &= c2.formula_count == BigInt::from(18) && !c2.matches_formula;
    for n in 1..=4u32 {
        let cont = enumerate_continuable(n).unwrap();
        ok &= cont.entries.iter().all(|e| e.table.is_admissible());
        ok &= cont.claimed_count == 1u64 << (n - 1);
        // The mismatch flag itself is data; just require it computed
        // consistently.
        ok &= cont.matches_claimed == (cont.entries.len() as u64 == cont.claimed_count);
    }
    report(
        14,
        "census counts: 4 at level 1, independent match at level 2, formula flags set",
        t,
        ok,
    );
}

#[test]
fn criterion_15_finite_groups() {
    let t = Instant::now();
    let idem = PLMap::new(vec![
        (rat_i(0), rat(1, 4)),
        (rat(1, 4), rat(1, 4)),
        (rat(3, 4), rat(3, 4)),
        (rat_i(1), rat(1, 2)),
    ])
    .unwrap();
    let ord3 = PLMap::new(vec![
        (rat_i(0), rat(3, 4)),
        (rat(1, 4), rat(3, 4)),
        (rat(3, 4), rat(1, 4)),
        (rat_i(1), rat(1, 2)),
    ])
    .unwrap();
    let mut ok = iterate_equals(&idem, 2);
    ok &= iterate_equals(&ord3, 3) && !iterate_equals(&ord3, 2);
    ok &= classify_finite_group(&idem)
        == GroupClass::Idempotent {
            a: rat(1, 4),
            b: rat(3, 4),
        };
    ok &= classify_finite_group(&ord3)
        == GroupClass::Order3 {
            a: rat(1, 4),
            b: rat(3, 4),
        };
    ok &= minimal_group_exponent(&idem, 7) == Some(2);
    ok &= minimal_group_exponent(&ord3, 7) == Some(3);
    ok &= conjugate_finite_group(&idem, &idem.mirror()).unwrap() == ConjugacyKind::Decreasing;
    ok &= conjugate_finite_group(&ord3, &ord3.mirror()).unwrap() == ConjugacyKind::Decreasing;
    report(
        15,
        "idempotent and order-3 fixtures classify, bound exponents, mirror decreasing",
        t,
        ok,
    );
}

#[test]
fn criterion_16_ulam_gap_contraction() {
    let t = Instant::now();
    let mut ok = true;
    for (p, q) in [(1i64, 4i64), (3, 4)] {
        let v = rat(p, q);
        let bound = rat(3, 4); // max(v, 1-v) for both parameters
        let report = ulam_gap_report(&skew_tent(&v).unwrap(), 13).unwrap();
        for w in report.gaps.windows(2) {
            ok &= w[1] <= &bound * &w[0];
        }
        ok &= report.gaps.len() == 13;
    }
    report(16, "d_{k+1} <= max(v, 1-v) d_k exactly for k <= 12", t, ok);
}

#[test]
fn criterion_17_htilde_monotonicity_threshold() {
    let t = Instant::now();
    // Sanity legs from the worked example.
    let mut ok = htilde_extremum(&rat(1, 10), 3, 3).unwrap().1;
    ok &= !htilde_extremum(&rat(2, 5), 3, 3).unwrap().1;
    // Bisection to the stated width.
    let mut lo = rat(1, 10);
    let mut hi = rat(3, 10);
    let width = rat(1, 100_000);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / rat(2, 1);
        if htilde_extremum(&mid, 3, 3).unwrap().1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (lof, hif) = (rat_to_f64(&lo), rat_to_f64(&hi));
    let in_bracket = lof >= 0.18866 && hif <= 0.18868;
    println!(
        "criterion 17: {} — bisection bracket for the monotonicity threshold is \
         [{lof:.7}, {hif:.7}]; the stated bracket is [0.18866, 0.18868] ({} ms)",
        if ok && in_bracket { "pass" } else { "FAIL" },
        t.elapsed().as_millis()
    );
    assert!(
        ok && in_bracket,
        "the threshold root of the extremum formula is 0.188683049…, outside the stated \
         bracket [0.18866, 0.18868]; computed bracket [{lof:.7}, {hif:.7}] — see the \
         decisions ledger for the analysis (the published decimal is mis-rounded)"
    );
}

#[test]
fn acceptance_support_build_b_matches_grid() {
    // Supporting sanity shared by several criteria: B_n for the tent map
    // is A_n itself.
    let a = build_a(6).unwrap();
    let b = build_b(&tent(), 6).unwrap();
    let a_as_rat: Vec<Rat> = a.points.iter().map(Dyadic::to_rat).collect();
    assert_eq!(a_as_rat, b.points);
    // And the skew grids stay inside (0,1) strictly between the ends.
    let b = build_b(&skew_tent(&rat(2, 7)).unwrap(), 8).unwrap();
    assert!(b.points.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(b.points.first(), Some(&Rat::zero()));
    assert_eq!(b.points.last(), Some(&Rat::one()));
    assert!(b
        .points
        .iter()
        .all(|p| !p.is_negative() && p <= &Rat::one()));
    let _ = GridSemiconj {
        n: 1,
        values: vec![rat_i(0), rat_i(0)],
    };
    assert!(derivative_scan(&rat(3, 4), 5, true).unwrap().confirmed == Some(true));
    assert!(ConjSystem::new(rat(3, 4)).unwrap().v().to_f64().unwrap() > 0.0);
    assert!(!BigInt::zero().is_one());
}
