//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use gridcover::codes::{end_to_end, theorem_table, Family, FamilySpec, Variant};
use gridcover::cycles::{
    build_cycle, cross_check, predicted_rows, rotation_instance, ConcreteWeights, CycleFamily,
    CycleSpec, RowKind,
};
use gridcover::label::{
    classify_labelling, complement_coloring, complete_graph_admits_nontrivial,
    enumerate_labellings, Automorphism, Coloring, LabellingInstance, VerdictKind, VertexWeighting,
};
use gridcover::lattice::{
    build_diagonal_coloring, closed_form_profile, fold_profile, manhattan_ball_size, project_ball,
    verify_code, LinePattern, Orientation,
};
use gridcover::weight::{RelationSet, WeightExpr};
use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    use CycleFamily::*;
    let grid: &[(CycleFamily, &[usize])] = &[
        (Type1, &[2, 3, 4, 5, 6, 7, 8, 9, 10]),
        (Type2, &[4, 6, 8, 10]),
        (Type3, &[3, 5, 7, 9]),
        (Type4, &[4, 6, 8, 10]),
        (Type5, &[5, 9, 13]),
        (Type6, &[7, 11]),
        (Type7, &[6, 10, 14]),
        (Type8, &[8, 12]),
    ];
    let mut specs = Vec::new();
    for &(family, ps) in grid {
        for &p in ps {
            specs.push(CycleSpec::symbolic(family, p));
            if family == Type8 {
                specs.push(CycleSpec::symbolic(family, p).with_special_t());
            }
        }
    }
    let mut failures = Vec::new();
    let mut labellings = 0;
    for spec in &specs {
        match cross_check(spec) {
            Ok(rep) if rep.passed() => labellings += rep.labellings.len(),
            Ok(rep) => failures.push(format!(
                "{} p={}{}: {:?}",
                spec.family,
                spec.p,
                if spec.special_t { " special-t" } else { "" },
                rep.discrepancies
            )),
            Err(e) => failures.push(format!("{} p={}: {e}", spec.family, spec.p)),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} instances, {labellings} non-trivial labellings; (a,b) pairs and realizing counts equal, structure holds{}",
            specs.len(),
            if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
        ),
    )
}

fn criterion_2() -> Outcome {
    let h = project_ball(3, 2);
    let expected = [1u64, 1, 2, 3, 2, 2, 3, 2, 2, 3, 2, 1, 1];
    let window: Vec<u64> = (-6..=6).map(|i| h.get(i)).collect();
    let outside_zero = h.iter().all(|(i, v)| i.abs() <= 6 || v == 0);
    let folded = fold_profile(&h, 5).unwrap().weights;
    let five = VertexWeighting::from_integers(&[5; 5]).unwrap();
    let pass = window == expected && outside_zero && folded == five;
    let shown: Vec<String> = folded.weights().iter().map(ToString::to_string).collect();
    outcome(
        pass,
        format!(
            "h on [-6,6] = {window:?}, zero beyond; fold onto C_5 = [{}]",
            shown.join(", ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for r in 2..=10u32 {
        let mass = manhattan_ball_size(r);
        for s in 0..=r {
            let h = project_ball(r, s);
            if h.total() != mass {
                bad.push(format!("project r={r} s={s}: {} != {mass}", h.total()));
            }
            for p in 1..=25 {
                let c = fold_profile(&h, p).unwrap();
                if c.weights.total().as_count() != Some(mass) {
                    bad.push(format!("fold r={r} s={s} p={p}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("r in 2..=10, s in 0..=r, p in 1..=25; violations: {bad:?}"),
    )
}

fn criterion_4() -> Outcome {
    let bad: Vec<u32> = (2..=10)
        .filter(|&r| project_ball(r, 1) != closed_form_profile(r))
        .collect();
    outcome(
        bad.is_empty(),
        format!("r in 2..=10; disagreeing radii: {bad:?}"),
    )
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut codes = 0;
    let mut bad = Vec::new();
    for r in [2u32, 3, 4] {
        let profile = project_ball(r, 1);
        for p in 2..=8usize {
            let cycle = fold_profile(&profile, p).unwrap();
            let instance = rotation_instance(&cycle);
            for index in 0..1u64 << p {
                let coloring = Coloring::from_index(p, index);
                let verdict = classify_labelling(&instance, &coloring).unwrap();
                let cycle_side = verdict.kind.is_labelling().then(|| {
                    (
                        verdict.a.as_ref().and_then(WeightExpr::as_count),
                        verdict.b.as_ref().and_then(WeightExpr::as_count),
                    )
                });
                let lattice = build_diagonal_coloring(
                    LinePattern::new(coloring.clone()).unwrap(),
                    Orientation::Parallel,
                );
                let report = verify_code(&lattice, r).unwrap();
                let lattice_side = report.is_verified().then_some((report.a, report.b));
                checked += 1;
                if cycle_side.is_some() {
                    codes += 1;
                }
                if cycle_side != lattice_side {
                    bad.push(format!(
                        "r={r} pattern {coloring}: {cycle_side:?} vs {lattice_side:?}"
                    ));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} patterns (r in 2..=4, p in 2..=8), {codes} codes; verdict and (a,b) agree; mismatches: {}", bad.len()),
    )
}

fn criterion_6() -> Outcome {
    let mut rows = 0;
    let mut in_scope = 0;
    let mut bad = Vec::new();
    for r in 2..=6 {
        match end_to_end(r) {
            Ok(rep) => {
                rows += rep.rows.len();
                in_scope += rep.rows.iter().filter(|row| row.in_scope).count();
                for row in rep.rows.iter().filter(|row| !row.verified) {
                    bad.push(format!(
                        "r={r} {} {:?} α={:?} ({},{}): lattice {:?} cycle ({:?},{:?}) {:?}",
                        row.family,
                        row.variant,
                        row.alpha,
                        row.a,
                        row.b,
                        row.lattice.as_ref().map(|l| (l.a, l.b)),
                        row.cycle_a,
                        row.cycle_b,
                        row.error
                    ));
                }
                if !rep.in_scope_realized() {
                    bad.push(format!("r={r}: an in-scope row is unrealized"));
                }
            }
            Err(e) => bad.push(format!("r={r}: {e}")),
        }
    }

    // Documented departures from the published tables, pinned to enumerated values.
    let mut deviations = Vec::new();
    // Coloring 5, r = 3k: the constant term is +2k+1 (published: +2k-1).
    for k in 1..=2u32 {
        let r = 3 * k;
        let m = u64::from(2 * r * r + 2 * r) / 3;
        let k64 = u64::from(k);
        let rows: Vec<(u64, u64)> = theorem_table(r)
            .unwrap()
            .into_iter()
            .filter(|row| {
                row.family == Family::Coloring5 && row.variant == Some(Variant::ThreePeriodic)
            })
            .map(|row| (row.a, row.b))
            .collect();
        let (z, x) = (m + 2 * k64 + 1, m - k64);
        let want = vec![(z, x), (z + x, 2 * x)];
        let cycle =
            gridcover::codes::family_cycle(&FamilySpec::coloring5(r, Variant::ThreePeriodic))
                .unwrap();
        let enumerated: Vec<(u64, u64)> = enumerate_labellings(&rotation_instance(&cycle))
            .unwrap()
            .into_iter()
            .filter_map(|(_, v)| {
                v.pair()
                    .map(|(a, b)| (a.as_count().unwrap(), b.as_count().unwrap()))
            })
            .unique()
            .sorted()
            .collect();
        let printed_a0 = m + 2 * k64 - 1;
        if rows != want
            || !want.iter().all(|w| enumerated.contains(w))
            || enumerated.iter().any(|&(a, _)| a == printed_a0)
        {
            deviations.push(format!(
                "Coloring5 r={r}: table {rows:?}, expected {want:?}, enumerated {enumerated:?}"
            ));
        }
    }
    // Type 7 and Type 8 periodic rows stop one α short of the published range.
    for (family, p, alpha_top) in [
        (CycleFamily::Type7, 10usize, 4i64),
        (CycleFamily::Type7, 14, 6),
        (CycleFamily::Type8, 8, 1),
        (CycleFamily::Type8, 12, 2),
    ] {
        let spec = CycleSpec::symbolic(family, p);
        let rep = cross_check(&spec).unwrap();
        let a_top = if family == CycleFamily::Type7 {
            WeightExpr::from_coeffs(1, alpha_top, alpha_top, 1)
        } else {
            WeightExpr::from_coeffs(1, 2 * alpha_top + 2, 2 * alpha_top, 1)
        };
        let b_top = if family == CycleFamily::Type7 {
            WeightExpr::from_coeffs(0, alpha_top + 1, alpha_top + 1, 0)
        } else {
            WeightExpr::from_coeffs(0, 2 * alpha_top + 2, 2 * alpha_top + 2, 0)
        };
        let realized = rep.found.iter().any(|pc| pc.a == a_top && pc.b == b_top);
        let periodic_kind = if family == CycleFamily::Type7 {
            RowKind::Type7Periodic
        } else {
            RowKind::Type8Periodic
        };
        let top_predicted = predicted_rows(&spec)
            .unwrap()
            .iter()
            .filter(|r| r.kind == periodic_kind)
            .filter_map(|r| r.alpha)
            .max();
        if realized || top_predicted != Some(alpha_top as u32 - 1) || !rep.passed() {
            deviations.push(format!(
                "{family} p={p}: top α row realized={realized}, predicted max α={top_predicted:?}"
            ));
        }
    }

    let pass = bad.is_empty() && deviations.is_empty();
    outcome(
        pass,
        format!(
            "r in 2..=6: {rows} rows verified on the lattice and the cycle ({in_scope} in scope); deviation checks (Coloring 5 r=3k, Type 7/8 α range) hold; failures: {bad:?} {deviations:?}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let families: Vec<(CycleFamily, usize)> = CycleFamily::ALL
        .iter()
        .flat_map(|&f| f.valid_lengths(14).map(move |p| (f, p)))
        .collect();
    let mut constant = 0;
    let mut bad = Vec::new();
    let mut cache: HashMap<String, Vec<Coloring>> = HashMap::new();
    for trial in 0..1000 {
        let (family, p) = families[rng.random_range(0..families.len())];
        let mut spec = if rng.random_bool(0.5) {
            CycleSpec::symbolic(family, p)
        } else {
            let w = ConcreteWeights::new(
                rng.random_range(1..50),
                rng.random_range(1..50),
                rng.random_range(50..100),
                rng.random_range(100..150),
            );
            CycleSpec::concrete(family, p, w)
        };
        if family == CycleFamily::Type8 && rng.random_bool(0.3) {
            spec = spec.with_special_t();
        }
        let Ok(cycle) = build_cycle(&spec) else {
            continue;
        };
        let instance = rotation_instance(&cycle);
        let coloring = if trial % 2 == 0 {
            Coloring::from_index(p, rng.random_range(0..1u64 << p))
        } else {
            // draw from the constant labellings so that constants are exercised
            let all = cache.entry(format!("{spec:?}")).or_insert_with(|| {
                enumerate_labellings(&instance)
                    .unwrap()
                    .into_iter()
                    .map(|(c, _)| c)
                    .collect()
            });
            all[rng.random_range(0..all.len())].clone()
        };
        let omega = instance.total_weight();
        let v = classify_labelling(&instance, &coloring).unwrap();
        let c = classify_labelling(&instance, &complement_coloring(&coloring)).unwrap();
        if v.kind.is_labelling() {
            constant += 1;
        }
        let want = (
            v.b.as_ref().map(|b| omega.clone() - b.clone()),
            v.a.as_ref().map(|a| omega.clone() - a.clone()),
        );
        let ok = v.kind.is_labelling() == c.kind.is_labelling()
            && (!v.kind.is_labelling() || (c.a.clone(), c.b.clone()) == want);
        if !ok {
            bad.push(format!("{} p={p} {coloring}", spec.family));
        }
    }
    outcome(
        bad.is_empty(),
        format!("1000 colorings ({constant} constant); complement constants equal (ω-b, ω-a); failures: {bad:?}"),
    )
}

fn criterion_8() -> Outcome {
    let mut instances = 0;
    let mut bad = Vec::new();
    for n in 2..=5usize {
        let perms: Vec<Automorphism> = (0..n)
            .permutations(n)
            .map(|p| Automorphism::new(p).unwrap())
            .collect();
        for weights in std::iter::repeat_n(1..=3i64, n).multi_cartesian_product() {
            let weighting = VertexWeighting::from_integers(&weights).unwrap();
            let instance =
                LabellingInstance::new(weighting.clone(), perms.clone(), 0, RelationSet::new())
                    .unwrap();
            let exhaustive = (1..(1u64 << n) - 1).any(|i| {
                classify_labelling(&instance, &Coloring::from_index(n, i))
                    .unwrap()
                    .kind
                    == VerdictKind::Constant
            });
            let claimed = complete_graph_admits_nontrivial(&weighting, 0).unwrap();
            instances += 1;
            if exhaustive != claimed {
                bad.push(format!("n={n} weights {weights:?}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("n in 2..=5, weights in {{1,2,3}}^n ({instances} instances), all n! permutations; disagreements: {bad:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "cycle classification matches exhaustive enumeration",
            criterion_1,
        ),
        (
            "projection of B_3 with shift 2 and its fold onto C_5",
            criterion_2,
        ),
        ("mass conservation of projection and fold", criterion_3),
        ("closed-form shift-1 profile", criterion_4),
        ("cycle/lattice bridge on all line patterns", criterion_5),
        ("(r,a,b) table end to end", criterion_6),
        ("complementary labellings", criterion_7),
        ("complete graph proposition", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{status}] {name} (tolerance: exact, {:.2?}): {}",
            k + 1,
            start.elapsed(),
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
