//! End-to-end acceptance checks, run without the test harness so each criterion's
//! PASS/FAIL line is always printed. Exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use poset_cde::cde::{bottom_top_balance, cde_report, certify_tcde_with, find_witness};
use poset_cde::distributions::{
    chain_dist, convert_chain_to_mchain, convert_chain_to_mmchain, edge_density, expectation,
    is_toggle_symmetric, maxchain_dist, mchain_dist, mmchain_dist, rank_dist,
};
use poset_cde::dynamics::{
    all_rank_orders, antichain_cardinality, asymmetric_orbits, homomesy_report,
    orbit_decomposition, orientation_representatives, rank_permuted_rowmotion, ranks,
    rowmotion_map, word_map,
};
use poset_cde::minuscule::{verify_exceptional, verify_minuscule_theorems, MinusculeCase};
use poset_cde::rational::{parse_q, q, qi};
use poset_cde::tableaux::{
    count_barely_formula, count_linear_extensions, count_shifted_barely_formula,
    diagonal_removability, enumerate_barely, enumerate_shifted_barely, f_aitken, f_hook, g_thrall,
    skew_shapes_of_size, ORDINARY_BUDGET, SHIFTED_BUDGET,
};
use poset_cde::{
    build_lattice, certify_tcde, classify_shifted_balanced, Distribution, IdealLattice, Partition,
    Poset, ShiftedClass, ShiftedShape, SkewShape, Statistic, Q,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load(name: &str) -> Poset {
    Poset::from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn lattice_of(poset: &Poset) -> IdealLattice {
    build_lattice(poset).unwrap()
}

fn ddeg_under(poset: &Poset, mu: &Distribution) -> Q {
    expectation(mu, &poset_cde::distributions::ddeg_statistic(poset)).unwrap()
}

fn fixture_values() -> Check {
    let a = load("fix-a.json");
    let e = ddeg_under(&a, &chain_dist(&a, 1).unwrap());
    ensure!(e == q(13, 14), "FIX-A chain(1) gave {e}");

    let b = load("fix-b.json");
    let e = ddeg_under(&b, &maxchain_dist(&b).unwrap());
    ensure!(e == q(17, 16), "FIX-B maxchain gave {e}");

    let jc = lattice_of(&load("fix-c.json"));
    let jc = jc.as_poset();
    let e = ddeg_under(jc, &chain_dist(jc, 1).unwrap());
    ensure!(e == q(83, 52), "J(FIX-C) chain(1) gave {e}");
    let u = edge_density(jc);
    let e6 = ddeg_under(jc, &chain_dist(jc, 6).unwrap());
    ensure!(
        u == q(8, 5) && e6 == q(8, 5),
        "J(FIX-C) uniform {u}, chain(6) {e6}"
    );

    let d = load("fix-d.json").dual();
    let e = ddeg_under(&d, &chain_dist(&d, 2).unwrap());
    ensure!(e == q(7, 6), "dual(FIX-D) chain(2) gave {e}");
    ensure!(
        edge_density(&d) == qi(1),
        "dual(FIX-D) uniform {}",
        edge_density(&d)
    );
    Ok(())
}

fn square_example() -> Check {
    let square = Poset::chain(2).direct_product(&Poset::chain(2));
    let l = lattice_of(&square);
    let j = l.as_poset();
    ensure!(edge_density(j) == qi(1), "edge density {}", edge_density(j));
    let mu = maxchain_dist(j).unwrap();
    ensure!(
        ddeg_under(j, &mu) == qi(1),
        "maxchain expectation {}",
        ddeg_under(j, &mu)
    );
    let want: Vec<Q> = [2, 2, 1, 1, 2, 2].iter().map(|&w| q(w, 10)).collect();
    ensure!(mu.weights == want, "path weights {:?}", mu.weights);
    Ok(())
}

/// Connected balanced skew shapes with at most `max` boxes, plus the named examples.
fn balanced_shapes(max: usize) -> Vec<SkewShape> {
    let mut out: Vec<SkewShape> = (1..=max)
        .flat_map(skew_shapes_of_size)
        .filter(|s| s.is_connected() && s.is_balanced().unwrap())
        .collect();
    out.push(SkewShape::new(&p(&[4, 3, 3, 3]), &p(&[2, 2])).unwrap());
    out.push(SkewShape::straight(&Partition::staircase(2)).stretch(2, 2));
    out
}

fn balanced_constant(s: &SkewShape) -> Q {
    Q::new(
        (s.height() * s.width()).into(),
        (s.height() + s.width()).into(),
    )
}

fn balanced_theorem() -> Check {
    let shapes = balanced_shapes(10);
    ensure!(
        shapes.len() > 20,
        "only {} balanced shapes found",
        shapes.len()
    );
    for required in [
        SkewShape::straight(&Partition::rectangle(3, 3)),
        SkewShape::straight(&Partition::staircase(4)),
    ] {
        ensure!(shapes.contains(&required), "missing {:?}", required.outer());
    }
    for s in &shapes {
        let l = lattice_of(&s.poset());
        let cert = certify_tcde(&l)
            .ok_or_else(|| format!("{:?}/{:?} did not certify", s.outer(), s.inner()))?;
        ensure!(
            cert.c == balanced_constant(s),
            "{:?}/{:?}: c = {}",
            s.outer(),
            s.inner(),
            cert.c
        );
    }
    for (shape, uniform, maxchain) in [
        (p(&[3, 1]), q(8, 7), q(17, 15)),
        (p(&[3, 2]), q(11, 9), q(37, 30)),
    ] {
        let l = lattice_of(&SkewShape::straight(&shape).poset());
        ensure!(certify_tcde(&l).is_none(), "({shape}) certified");
        let r = cde_report(l.as_poset()).unwrap();
        ensure!(
            r.edge_density == uniform && r.maxchain_expectation == maxchain,
            "({shape}): {} vs {}",
            r.edge_density,
            r.maxchain_expectation
        );
    }
    Ok(())
}

fn shifted_balanced(max: usize) -> Vec<(Partition, ShiftedClass)> {
    (1..=max)
        .flat_map(Partition::all_strict_of)
        .map(|l| {
            let c = classify_shifted_balanced(&l);
            (l, c)
        })
        .filter(|(_, c)| matches!(c, ShiftedClass::Type1 { .. } | ShiftedClass::Type2 { .. }))
        .collect()
}

fn shifted_theorem() -> Check {
    let cases = shifted_balanced(10);
    for required in [p(&[1]), p(&[3, 2, 1]), p(&[5, 3, 1]), p(&[3, 2])] {
        ensure!(
            cases.iter().any(|(l, _)| *l == required),
            "({required}) not classified"
        );
    }
    for (lambda, class) in &cases {
        let shape = ShiftedShape::new(lambda).unwrap();
        let l = lattice_of(&shape.poset());
        let want = class.predicted_density(lambda).unwrap();
        let cert = certify_tcde(&l).ok_or_else(|| format!("({lambda}) did not certify"))?;
        ensure!(cert.c == want, "({lambda}): c = {} expected {want}", cert.c);
        let r = shape
            .rook_placement()
            .map_err(|e| format!("({lambda}): {e}"))?;
        let bad = shape.placement_violations(&r);
        ensure!(bad.is_empty(), "({lambda}) placement: {bad:?}");
        let total: Q = r.iter().sum();
        ensure!(
            total == qi(lambda.part(1) as i64 + 1),
            "({lambda}) rook total {total}"
        );
        let rc = shape.rook_certificate(&r).unwrap();
        ensure!(rc.verify(&l) && rc.c == want, "({lambda}) rook certificate");
    }
    for lambda in [p(&[3, 2, 1]), p(&[4, 3, 1]), p(&[3, 2])] {
        let shape = ShiftedShape::new(&lambda).unwrap();
        let l = lattice_of(&shape.poset());
        for &(i, j) in shape.boxes() {
            let rook = shape.rook(&l, i, j).unwrap();
            let around = shape.corners_around(i, j);
            for k in 0..l.len() {
                let members = l.ideal(k).members();
                let hit = around
                    .iter()
                    .filter(|&&c| shape.ideal_contains_corner(&members, c))
                    .count();
                ensure!(
                    rook.values[k].clone() - qi(hit as i64) == qi(1),
                    "({lambda}) box [{i},{j}] ideal {members:?}"
                );
            }
        }
    }
    Ok(())
}

fn trapezoids() -> Check {
    for n in 3..=6 {
        let lambda = p(&[n, n - 2]);
        let l = lattice_of(&ShiftedShape::new(&lambda).unwrap().poset());
        let r = cde_report(l.as_poset()).unwrap();
        let want = Q::new((2 * (n - 1)).into(), (n + 1).into());
        ensure!(r.is_mcde, "({lambda}) not mCDE");
        ensure!(
            r.edge_density == want,
            "({lambda}) density {}",
            r.edge_density
        );
        let extra = [bottom_top_balance(&l)];
        let cert =
            certify_tcde_with(&l, &extra).ok_or_else(|| format!("({lambda}) no certificate"))?;
        ensure!(
            cert.c == want,
            "({lambda}) balanced certificate c = {}",
            cert.c
        );
    }

    let shape = ShiftedShape::new(&p(&[4, 2])).unwrap();
    let l = lattice_of(&shape.poset());
    ensure!(certify_tcde(&l).is_none(), "(4,2) certified");
    let w = find_witness(&l).ok_or("no witness for (4,2)")?;
    ensure!(w.validate(&l), "generated witness fails validation");

    let table: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture("shifted-4-2-witness.json")).unwrap(),
    )
    .unwrap();
    let mut weights = vec![qi(0); l.len()];
    for row in table["weights"].as_array().unwrap() {
        let lambda: Partition = row["ideal"].as_str().unwrap().parse().unwrap();
        let k = (0..l.len())
            .find(|&k| shape.ideal_partition(&l.ideal(k).members()) == lambda)
            .ok_or_else(|| format!("({lambda}) is not an ideal"))?;
        weights[k] = parse_q(row["weight"].as_str().unwrap()).unwrap();
    }
    let mu = Distribution::new(weights).map_err(|e| e.to_string())?;
    ensure!(
        is_toggle_symmetric(&l, &mu),
        "table is not toggle-symmetric"
    );
    let e = expectation(&mu, &l.ddeg_statistic()).unwrap();
    ensure!(e == q(13, 11), "table expectation {e}");
    ensure!(
        edge_density(l.as_poset()) == q(6, 5),
        "edge density {}",
        edge_density(l.as_poset())
    );
    Ok(())
}

fn minuscule() -> Check {
    for (case, c) in [(MinusculeCase::E6, q(4, 3)), (MinusculeCase::E7, q(3, 2))] {
        let check = verify_exceptional(case).unwrap();
        ensure!(
            check.holds(),
            "{case} identity fails at {:?}",
            check.first_failure
        );
        ensure!(check.c == c, "{case} constant {}", check.c);
    }
    for rec in verify_minuscule_theorems(4, 1 << 20) {
        let rec = rec.map_err(|e| e.to_string())?;
        ensure!(rec.ok(), "{} did not certify: {rec:?}", rec.case);
    }
    let e6 = MinusculeCase::E6.build().unwrap();
    let e7 = MinusculeCase::E7.build().unwrap();
    ensure!(
        lattice_of(&e6).as_poset().is_isomorphic(&e7),
        "J(E6) is not E7"
    );
    // The interval below 3^2 has the 10 elements of the shifted staircase; 4^2 has 15.
    let staircase = ShiftedShape::new(&Partition::staircase(4)).unwrap().poset();
    let below = |b: usize| MinusculeCase::TwoRowInterval { b }.build().unwrap();
    ensure!(
        below(3).is_isomorphic(&staircase),
        "[0, 3^2] is not the shifted staircase"
    );
    ensure!(
        lattice_of(&staircase).as_poset().is_isomorphic(&e6),
        "J(shifted staircase) is not E6"
    );
    ensure!(
        below(4).len() == 15 && !below(4).is_isomorphic(&staircase),
        "[0, 4^2] size"
    );
    Ok(())
}

fn random_poset() -> impl Strategy<Value = Poset> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let rels: Vec<(usize, usize)> = pairs
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(r, _)| r)
                .collect();
            Poset::new(n, &rels).unwrap()
        })
    })
}

fn chain_distributions_are_toggle_symmetric() -> Check {
    let config = Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner
        .run(&random_poset(), |base| {
            let l = build_lattice(&base).unwrap();
            let j = l.as_poset();
            let height = j.height();
            for k in 0..=height {
                prop_assert!(
                    is_toggle_symmetric(&l, &chain_dist(j, k).unwrap()),
                    "chain({})",
                    k
                );
            }
            for m in 0..=height + 1 {
                let mc = mchain_dist(j, m).unwrap();
                let mm = mmchain_dist(j, m).unwrap();
                prop_assert!(is_toggle_symmetric(&l, &mc), "mchain({})", m);
                prop_assert!(is_toggle_symmetric(&l, &mm), "mmchain({})", m);
                prop_assert_eq!(&convert_chain_to_mchain(j, m).unwrap(), &mc);
                prop_assert_eq!(&convert_chain_to_mmchain(j, m).unwrap(), &mm);
            }
            let info = base.rank_info();
            if info.is_graded {
                let mu = rank_dist(&l).unwrap();
                prop_assert!(is_toggle_symmetric(&l, &mu));
                let r = info.top_rank.unwrap();
                let want = Q::new(base.len().into(), (r + 2).into());
                prop_assert_eq!(expectation(&mu, &l.ddeg_statistic()).unwrap(), want);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Every rank-permuted rowmotion has only toggle-symmetric orbits and makes the
/// antichain cardinality `c`-mesic when `c` is given.
fn check_rank_orders(name: &str, l: &IdealLattice, sigmas: &[Vec<usize>], c: Option<&Q>) -> Check {
    let stat = antichain_cardinality(l);
    for sigma in sigmas {
        let orbits = orbit_decomposition(&rank_permuted_rowmotion(l, sigma).unwrap());
        ensure!(
            asymmetric_orbits(l, &orbits).is_empty(),
            "{name}: asymmetric orbit under {sigma:?}"
        );
        if let Some(c) = c {
            let r = homomesy_report(&orbits, &stat);
            ensure!(
                r.constant.as_ref() == Some(c),
                "{name}: not {c}-mesic under {sigma:?}"
            );
        }
    }
    Ok(())
}

fn certified_lattices() -> Vec<(String, IdealLattice)> {
    let mut out = Vec::new();
    for s in balanced_shapes(10) {
        out.push((
            format!("{:?}/{:?}", s.outer(), s.inner()),
            lattice_of(&s.poset()),
        ));
    }
    for (lambda, _) in shifted_balanced(10) {
        out.push((
            format!("shifted ({lambda})"),
            lattice_of(&ShiftedShape::new(&lambda).unwrap().poset()),
        ));
    }
    for case in MinusculeCase::all_up_to(4) {
        out.push((case.to_string(), lattice_of(&case.build().unwrap())));
    }
    out
}

fn dynamics() -> Check {
    let full: Vec<(String, Poset)> = vec![
        (
            "shifted (3,2,1)".into(),
            ShiftedShape::new(&Partition::staircase(3)).unwrap().poset(),
        ),
        (
            "shifted (4,2)".into(),
            ShiftedShape::new(&p(&[4, 2])).unwrap().poset(),
        ),
        ("(4,2)".into(), SkewShape::straight(&p(&[4, 2])).poset()),
        (
            "2x2".into(),
            Poset::chain(2).direct_product(&Poset::chain(2)),
        ),
    ];
    for (name, poset) in &full {
        let l = lattice_of(poset);
        let (_, top) = ranks(&l).unwrap();
        check_rank_orders(name, &l, &all_rank_orders(top), None)?;
    }
    for a in 1..=4 {
        for b in 1..=4 {
            let l = lattice_of(&Poset::chain(a).direct_product(&Poset::chain(b)));
            let order = orbit_decomposition(&rowmotion_map(&l)).order();
            ensure!(order == a + b, "rowmotion on J({a}x{b}) has order {order}");
        }
    }
    for (name, l) in certified_lattices() {
        let c = certify_tcde(&l)
            .ok_or_else(|| format!("{name} did not certify"))?
            .c;
        let (_, top) = ranks(&l).map_err(|e| format!("{name}: {e}"))?;
        check_rank_orders(&name, &l, &orientation_representatives(top), Some(&c))?;
    }
    // a = 0, b = 1 below c = 2; toggling b, then c, then a.
    let v = lattice_of(&Poset::new(3, &[(0, 2), (1, 2)]).unwrap());
    let orbits = orbit_decomposition(&word_map(&v, &[1, 2, 0]).unwrap());
    let pair = orbits
        .orbits
        .iter()
        .find(|o| o.contains(&v.bottom()))
        .unwrap();
    let mut members: Vec<Vec<usize>> = pair.iter().map(|&i| v.ideal(i).members()).collect();
    members.sort();
    ensure!(
        members == vec![vec![], vec![0, 1]],
        "orbit of the empty ideal is {members:?}"
    );
    ensure!(
        !asymmetric_orbits(&v, &orbits).is_empty(),
        "control orbit is toggle-symmetric"
    );
    ensure!(
        !homomesy_report(&orbits, &v.signed_toggleability(2)).homomesic,
        "control is mesic"
    );
    Ok(())
}

fn tableaux() -> Check {
    for n in 0..=8 {
        for lambda in Partition::all_of(n) {
            let s = SkewShape::straight(&lambda);
            let a = f_aitken(&lambda, &Partition::empty()).unwrap();
            let e = count_linear_extensions(&s.poset()).unwrap();
            ensure!(
                a == f_hook(&lambda) && a == e,
                "f({lambda}): {a} {} {e}",
                f_hook(&lambda)
            );
        }
        for lambda in Partition::all_strict_of(n) {
            let g = g_thrall(&lambda).unwrap();
            let e = count_linear_extensions(&ShiftedShape::new(&lambda).unwrap().poset()).unwrap();
            ensure!(g == e, "g({lambda}) = {g}, linear extensions {e}");
        }
    }
    ensure!(
        g_thrall(&Partition::staircase(3)).unwrap() == 2u32.into(),
        "g(3,2,1)"
    );
    for n in 1..=8 {
        for s in skew_shapes_of_size(n) {
            let outer = Partition::new(s.outer().to_vec()).unwrap();
            let inner = Partition::new(s.inner().to_vec()).unwrap();
            let a = f_aitken(&outer, &inner).unwrap();
            let e = count_linear_extensions(&s.poset()).unwrap();
            ensure!(a == e, "f({outer}/{inner}) = {a}, linear extensions {e}");
            if n <= 7 {
                let brute = enumerate_barely(&s, ORDINARY_BUDGET).unwrap();
                let formula = count_barely_formula(&s).unwrap();
                ensure!(
                    brute == formula,
                    "barely ({outer}/{inner}): {brute} vs {formula}"
                );
            }
        }
    }
    let square = SkewShape::straight(&Partition::rectangle(2, 2));
    ensure!(
        enumerate_barely(&square, ORDINARY_BUDGET).unwrap() == 10u32.into(),
        "2x2 barely"
    );
    for n in 1..=6 {
        for lambda in Partition::all_strict_of(n) {
            for diag in [false, true] {
                let brute = enumerate_shifted_barely(&lambda, diag, SHIFTED_BUDGET).unwrap();
                let formula = count_shifted_barely_formula(&lambda, diag).unwrap();
                ensure!(
                    brute == formula,
                    "shifted ({lambda}) unprimed={diag}: {brute} vs {formula}"
                );
            }
        }
    }
    for (lambda, want) in [(p(&[2, 1]), [48u32, 8]), (p(&[3, 2, 1]), [1792, 168])] {
        for (diag, w) in [(false, want[0]), (true, want[1])] {
            let got = enumerate_shifted_barely(&lambda, diag, SHIFTED_BUDGET).unwrap();
            ensure!(got == w.into(), "shifted ({lambda}) unprimed={diag}: {got}");
        }
    }
    for (lambda, class) in shifted_balanced(10) {
        if !matches!(class, ShiftedClass::Type1 { .. }) {
            continue;
        }
        let shape = ShiftedShape::new(&lambda).unwrap();
        let l = lattice_of(&shape.poset());
        let stat: Statistic = diagonal_removability(&shape, &l);
        let e = expectation(&maxchain_dist(l.as_poset()).unwrap(), &stat).unwrap();
        ensure!(e == q(1, 2), "({lambda}) diagonal removability {e}");
    }
    Ok(())
}

fn scans() -> Check {
    for n in 1..=12 {
        for lambda in Partition::all_of(n) {
            let s = SkewShape::straight(&lambda);
            let r = cde_report(lattice_of(&s.poset()).as_poset()).unwrap();
            let balanced = s.is_balanced().unwrap();
            ensure!(
                r.is_cde == balanced,
                "straight ({lambda}): CDE {} balanced {balanced}",
                r.is_cde
            );
        }
        for lambda in Partition::all_strict_of(n) {
            let r = cde_report(lattice_of(&ShiftedShape::new(&lambda).unwrap().poset()).as_poset())
                .unwrap();
            let class = classify_shifted_balanced(&lambda);
            let known = class != ShiftedClass::None;
            ensure!(
                r.is_cde == known,
                "shifted ({lambda}): CDE {} class {class:?}",
                r.is_cde
            );
            if known {
                let want = class.predicted_density(&lambda).unwrap();
                ensure!(
                    r.edge_density == want,
                    "shifted ({lambda}): density {}",
                    r.edge_density
                );
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fixture regressions", fixture_values),
        ("2x2 example", square_example),
        ("balanced skew shapes", balanced_theorem),
        ("shifted-balanced shapes", shifted_theorem),
        ("trapezoids", trapezoids),
        ("minuscule posets", minuscule),
        (
            "toggle-symmetric distributions",
            chain_distributions_are_toggle_symmetric,
        ),
        ("rowmotion dynamics", dynamics),
        ("tableau counts", tableaux),
        ("shape scans", scans),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS ({name}, {secs:.1}s)", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL ({name}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
