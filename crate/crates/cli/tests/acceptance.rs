//! One line per acceptance criterion. Hard criteria fail the run; the soft
//! success-rate band only warns.

use std::process::Command;
use std::time::{Duration, Instant};

use derange_cli::{execute, Cli};
use derange_core::experiments::{
    equitable_split_ratio, exhaustive_profile_deviation, inverse_e, lemma_audit, ratio_f64,
};
use derange_core::graph::{
    attach_matching, extract_avoidance_function, verify_p5_decomposition, BipartiteGraph, Defect, DirectedPath,
    Matching, PathDecomposition, Side, Vertex,
};
use derange_core::trial::{monte_carlo, Strategy};
use derange_core::{
    classical_derangement_count, count_brute_force, count_by_inclusion_exclusion, count_recursion1, count_recursion2,
    factorial, multiplicity_profile, Exec, MultiplicityProfile, PartialFunctionSpec, Profile,
};
use rand::Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Soft criterion outside its band.
    Warn(String),
}

type Check = fn() -> Verdict;

fn cli(args: &[&str]) -> String {
    let cli = <Cli as clap::Parser>::try_parse_from(std::iter::once("derange").chain(args.iter().copied()))
        .expect("valid arguments");
    let report = execute(&cli).expect("command runs");
    assert_eq!(report.exit_code(), 0, "{args:?}: {:?}", report.failures);
    report.body
}

fn csv_cells(body: &str) -> Vec<Vec<String>> {
    body.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn table_reproduction() -> Verdict {
    // rows B = 0.., columns A = 0, 2, ...
    let expected: [(usize, &[&[u64]]); 3] = [
        (4, &[&[24, 12, 8], &[18, 10], &[14, 8], &[11], &[9]]),
        (5, &[&[120, 72, 48], &[96, 60, 40], &[78, 50], &[64, 42], &[53], &[44]]),
        (
            6,
            &[
                &[720, 480, 336, 240],
                &[600, 408, 288],
                &[504, 348, 248],
                &[426, 298],
                &[362, 256],
                &[309],
                &[265],
            ],
        ),
    ];
    let mut checked = 0;
    for (n, rows) in expected {
        let body = cli(&["table", "--n", &n.to_string(), "--format", "csv"]);
        let cells = csv_cells(&body);
        for (b, row) in rows.iter().enumerate() {
            if cells[b][0] != b.to_string() {
                return Verdict::Fail(format!("n = {n}: row {b} labelled {}", cells[b][0]));
            }
            for (j, want) in row.iter().enumerate() {
                let got = &cells[b][j + 1];
                if *got != want.to_string() {
                    return Verdict::Fail(format!(
                        "n = {n}: D[{},{b},{}] = {got}, expected {want}",
                        2 * j,
                        n - 2 * j - b
                    ));
                }
                checked += 1;
            }
            // cells outside the triangle stay empty
            if cells[b][row.len() + 1..].iter().any(|c| !c.is_empty()) {
                return Verdict::Fail(format!("n = {n}: row {b} has extra cells"));
            }
        }
    }
    Verdict::Pass(format!("{checked} cells equal"))
}

fn worked_example() -> Verdict {
    let d = |a, b, c| count_recursion1(Profile { a, b, c });
    let first = 2u32 * d(2, 2, 1) + 2u32 * d(2, 1, 2) + d(0, 2, 3);
    let second = count_recursion2(Profile { a: 4, b: 1, c: 1 }) + count_recursion2(Profile { a: 2, b: 1, c: 1 });
    let terms = (d(2, 2, 1), d(2, 1, 2), d(0, 2, 3), d(4, 1, 1), d(2, 1, 1));
    let expected_terms = (50u32.into(), 60u32.into(), 78u32.into(), 288u32.into(), 10u32.into());
    let direct = count_recursion1(Profile { a: 2, b: 3, c: 1 });
    let body = cli(&["count", "--profile", "2,3,1"]);
    if terms == expected_terms
        && first == 298u32.into()
        && second == 298u32.into()
        && direct == 298u32.into()
        && body.contains("\"count\": \"298\"")
        && body.contains("\"agree\": true")
    {
        Verdict::Pass("2*50 + 2*60 + 78 = 288 + 10 = 298".into())
    } else {
        Verdict::Fail(format!("terms {terms:?}, sums {first} and {second}"))
    }
}

fn oracle_vs_brute_force() -> Verdict {
    let mut profiles = 0;
    for n in 1..=7 {
        for mp in MultiplicityProfile::enumerate(n) {
            let f = mp.representative().unwrap();
            if count_brute_force(&f).unwrap() != count_by_inclusion_exclusion(&mp) {
                return Verdict::Fail(format!("profile {mp}"));
            }
            profiles += 1;
        }
    }
    let mut rng = derange_core::seed::rng_from_seed(2024);
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let images = (0..n)
            .map(|_| rng.gen_bool(0.85).then(|| rng.gen_range(0..n)))
            .collect();
        let f = PartialFunctionSpec::from_zero_based(images).unwrap();
        if count_brute_force(&f).unwrap() != count_by_inclusion_exclusion(&multiplicity_profile(&f)) {
            return Verdict::Fail(format!("random map {f}"));
        }
    }
    Verdict::Pass(format!("{profiles} profiles and 500 random maps agree"))
}

fn degenerate_closed_forms() -> Verdict {
    for n in 1..=8 {
        let constant = PartialFunctionSpec::total(&vec![1; n]).unwrap();
        let d = count_by_inclusion_exclusion(&multiplicity_profile(&constant));
        if d != 0u32.into() || count_brute_force(&constant).unwrap() != d {
            return Verdict::Fail(format!("constant map on {n} items gives {d}"));
        }
    }
    for n in 2..=8 {
        let mut images = vec![1; n];
        images[0] = 2;
        let f = PartialFunctionSpec::total(&images).unwrap();
        let d = count_brute_force(&f).unwrap();
        if d != factorial(n - 1) || count_by_inclusion_exclusion(&multiplicity_profile(&f)) != d {
            return Verdict::Fail(format!("n = {n}: {d} != (n-1)!"));
        }
    }
    for n in [4, 6, 8] {
        let e = equitable_split_ratio(n, 2).unwrap();
        if e.closed_form_matches() != Some(true) {
            return Verdict::Fail(format!("equitable split n = {n}: {}", e.count));
        }
    }
    Verdict::Pass("constant 0, one-off (n-1)!, equitable (n/2)^2 (n-2)!".into())
}

fn convergence() -> Verdict {
    let dev = |n| exhaustive_profile_deviation(n).unwrap();
    let (d4, d6) = (dev(4), dev(6));
    if (d4.max_deviation - 0.0346).abs() > 1e-4 || (d6.max_deviation - 0.0345).abs() > 1e-4 {
        return Verdict::Fail(format!("n=4 {:.6}, n=6 {:.6}", d4.max_deviation, d6.max_deviation));
    }
    let mut prev = f64::INFINITY;
    for n in (6..=20).step_by(2) {
        let row = dev(n);
        let all_pairs = Profile { a: n, b: 0, c: 0 }.multiplicities();
        if row.max_deviation >= prev || row.worst_profile != all_pairs {
            return Verdict::Fail(format!(
                "n = {n}: deviation {} after {prev}, at {}",
                row.max_deviation, row.worst_profile
            ));
        }
        prev = row.max_deviation;
    }
    if prev > 0.012 {
        return Verdict::Fail(format!("n = 20 deviation {prev}"));
    }
    Verdict::Pass(format!(
        "n=4 {:.6}, n=6 {:.6}, decreasing to {prev:.6} at n=20",
        d4.max_deviation, d6.max_deviation
    ))
}

fn classical_limit() -> Verdict {
    let d10 = classical_derangement_count(10);
    let dev = (ratio_f64(&d10, 10) - inverse_e()).abs();
    let bound = 1.0 / 39_916_800.0;
    if d10 == 1_334_961u32.into() && dev < bound {
        Verdict::Pass(format!("D(10) = {d10}, deviation {dev:.3e} < {bound:.3e}"))
    } else {
        Verdict::Fail(format!("D(10) = {d10}, deviation {dev:e}"))
    }
}

fn lemma() -> Verdict {
    let audit = lemma_audit(6).unwrap();
    let star = audit.star_violations().count();
    let r2 = audit.bound_violations().filter(|r| r.r == 2).count();
    let known = audit
        .records
        .iter()
        .find(|r| r.n == 3 && r.r == 3 && !r.holds_bound && &r.d_f_star - &r.d_f == 2u32.into());
    if star == 0 && r2 == 0 && known.is_some() {
        Verdict::Pass(format!(
            "{} records, (n=3, r=3) difference 2 > 1 catalogued, {} bound violations with r > 2",
            audit.records.len(),
            audit.bound_violations().count()
        ))
    } else {
        Verdict::Fail(format!("star {star}, r=2 bound {r2}, catalogued {}", known.is_some()))
    }
}

fn listing(rows: &[&str]) -> Vec<DirectedPath> {
    rows.iter()
        .map(|s| {
            let t: Vec<&str> = s.split(',').collect();
            let x = |v: &str| v.parse::<usize>().unwrap() - 1;
            let y = |v: &str| (v.as_bytes()[0] - b'A') as usize;
            DirectedPath::new(x(t[0]), y(t[1]), x(t[2]), y(t[3]), x(t[4]))
        })
        .collect()
}

fn letter(v: Vertex) -> String {
    match v {
        Vertex::X(i) => (i + 1).to_string(),
        Vertex::Y(j) => ((b'A' + j as u8) as char).to_string(),
    }
}

fn k55_fixtures() -> Verdict {
    let k = BipartiteGraph::complete(5);
    let m = Matching::from_pairs((0..5).collect()).unwrap();
    let g4 = k.without_matching(&m).unwrap();
    let good = PathDecomposition::new(
        &g4,
        listing(&["1,B,3,D,5", "5,C,1,D,2", "2,A,4,E,3", "3,A,5,B,4", "4,C,2,E,1"]),
    );
    let bad = PathDecomposition::new(
        &g4,
        listing(&["1,B,5,A,2", "2,D,3,A,4", "4,E,2,C,1", "3,E,1,D,5", "5,C,4,B,3"]),
    );
    let (Ok(good), Ok(bad)) = (good, bad) else {
        return Verdict::Fail("a listing is not a valid P4 decomposition".into());
    };
    let good_ok = verify_p5_decomposition(&k, &attach_matching(&good, &m, Side::Start).unwrap()).is_valid();
    let bad_v = verify_p5_decomposition(&k, &attach_matching(&bad, &m, Side::Start).unwrap());
    let offender = match bad_v.defect {
        Some(Defect::RepeatedVertex { vertex, .. }) => format!("vertex {} repeated", letter(vertex)),
        other => format!("{other:?}"),
    };
    let f_bad = extract_avoidance_function(&bad).one_based();
    let expected = [1, 1, 4, 3, 2].map(Some).to_vec();
    let shown: Vec<String> = f_bad.iter().map(|t| letter(Vertex::Y(t.unwrap() - 1))).collect();
    if good_ok && offender == "vertex A repeated" && f_bad == expected {
        Verdict::Pass(format!(
            "good verifies, bad fails with \"{offender}\", f = {}",
            shown.join("")
        ))
    } else {
        Verdict::Fail(format!("good {good_ok}, offender {offender}, f {f_bad:?}"))
    }
}

fn equivalence() -> Verdict {
    let mut total = 0;
    let mut worst_completion: f64 = 1.0;
    for (n, trials) in [(5, 500), (6, 500), (7, 500), (8, 500), (9, 500), (10, 2000)] {
        let s = monte_carlo(n, trials, Strategy::SingleShot, 9, Exec::Parallel).unwrap();
        if s.equivalence_violations > 0 {
            return Verdict::Fail(format!("n = {n}: {} violations", s.equivalence_violations));
        }
        worst_completion = worst_completion.min(s.solver_completion_rate());
        total += s.completed;
    }
    if worst_completion < 0.99 {
        return Verdict::Fail(format!("solver completion {worst_completion}"));
    }
    Verdict::Pass(format!(
        "{total} completed trials, no violations, solver completion >= {worst_completion}"
    ))
}

fn success_rate() -> Verdict {
    let single = monte_carlo(10, 2000, Strategy::SingleShot, 7, Exec::Parallel).unwrap();
    let ten = monte_carlo(10, 500, Strategy::AllTenOptions, 7, Exec::Parallel).unwrap();
    let independence = 1.0 - (1.0 - inverse_e()).powi(10);
    let msg = format!(
        "single {:.4} [{:.4}, {:.4}] vs band [0.28, 0.46]; all10 {:.4} vs floor 0.90 (independence {independence:.4})",
        single.fraction, single.wilson_low, single.wilson_high, ten.fraction
    );
    if (0.28..=0.46).contains(&single.fraction) && ten.fraction >= 0.90 {
        Verdict::Pass(msg)
    } else {
        Verdict::Warn(msg)
    }
}

fn determinism() -> Verdict {
    let runs: [&[&str]; 6] = [
        &["count", "--images", "2,1,1,_,5"],
        &["table", "--n", "7", "--format", "csv"],
        &[
            "experiment",
            "limit-sweep",
            "--k",
            "3",
            "--n",
            "6,9",
            "--samples",
            "300",
            "--seed",
            "5",
        ],
        &["experiment", "lemma-audit", "--n-max", "7", "--seed", "2"],
        &["decompose", "demo", "--k55", "--seed", "4"],
        &[
            "decompose",
            "montecarlo",
            "--n",
            "12",
            "--trials",
            "300",
            "--strategy",
            "all10",
            "--seed",
            "7",
        ],
    ];
    for args in runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_derange"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let (a, b) = (go(), go());
        if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            return Verdict::Fail(format!("{args:?} differs between runs"));
        }
    }
    Verdict::Pass(format!("{} commands byte-identical across two runs", runs.len()))
}

fn main() {
    let criteria: [(&str, Check, Duration); 11] = [
        ("table reproduction", table_reproduction, Duration::from_secs(1)),
        ("worked example", worked_example, Duration::from_secs(1)),
        ("oracle = brute force", oracle_vs_brute_force, Duration::from_secs(60)),
        (
            "degenerate closed forms",
            degenerate_closed_forms,
            Duration::from_secs(5),
        ),
        ("convergence", convergence, Duration::from_secs(30)),
        ("classical limit", classical_limit, Duration::from_secs(1)),
        ("lemma audit", lemma, Duration::from_secs(60)),
        ("K5,5 fixtures", k55_fixtures, Duration::from_secs(1)),
        ("success equivalence", equivalence, Duration::from_secs(120)),
        ("heuristic success rate (soft)", success_rate, Duration::MAX),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let took = start.elapsed();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) if took <= budget => ("PASS", d),
            Verdict::Pass(d) => ("FAIL", format!("{d}; took {took:?}, budget {budget:?}")),
            Verdict::Fail(d) => ("FAIL", d),
            Verdict::Warn(d) => ("FAIL (soft, warning only)", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {tag} ({took:.2?}) {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} hard criteria failed");
        std::process::exit(1);
    }
}
