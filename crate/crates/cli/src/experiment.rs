use derange_core::experiments::{
    equitable_split_ratio, lemma_audit_with, limit_sweep, property_suite, DeviationRow, LemmaAuditConfig,
};
use derange_core::{classical_derangement_count, factorial, Exec, Profile};
use serde_json::json;

use crate::args::{EquitableArgs, ExperimentCmd, Format, LemmaAuditArgs, LimitSweepArgs, PropertySuiteArgs};
use crate::report::{Builder, CliError, Report, Table};

/// Sizes up to which the all-pairs profile must be the worst case.
const ALL_PAIRS_ASSERTED_MAX: usize = 12;

pub fn run(cmd: &ExperimentCmd, seed: u64, format: Format) -> Result<Report, CliError> {
    match cmd {
        ExperimentCmd::LimitSweep(a) => sweep(a, seed, format),
        ExperimentCmd::Equitable(a) => equitable(a, seed, format),
        ExperimentCmd::LemmaAudit(a) => lemma(a, seed, format),
        ExperimentCmd::PropertySuite(a) => properties(a, seed, format),
    }
}

fn sweep(args: &LimitSweepArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let rows = limit_sweep(args.k, &args.n, args.samples, seed, Exec::default()).map_err(CliError::usage)?;
    let mut b = Builder::new("experiment limit-sweep", seed, args);
    for row in &rows {
        match args.k {
            1 => {
                let bound = 1.0 / (1..=row.n + 1).map(|i| i as f64).product::<f64>();
                b.require(row.worst_count == classical_derangement_count(row.n), || {
                    format!("n = {}: count {} is not D({})", row.n, row.worst_count, row.n)
                });
                b.require(row.max_deviation <= bound, || {
                    format!(
                        "n = {}: deviation {:e} exceeds 1/(n+1)! = {bound:e}",
                        row.n, row.max_deviation
                    )
                });
            }
            2 if row.n <= ALL_PAIRS_ASSERTED_MAX => {
                let all_pairs = Profile {
                    a: 2 * (row.n / 2),
                    b: row.n % 2,
                    c: 0,
                };
                b.require(row.worst_profile == all_pairs.multiplicities(), || {
                    format!("n = {}: worst profile {} is not {all_pairs}", row.n, row.worst_profile)
                });
            }
            _ => {}
        }
    }
    if args.k == 2 {
        for w in rows.windows(2) {
            if w[1].max_deviation >= w[0].max_deviation {
                b.warn(format!(
                    "deviation does not decrease from n = {} to n = {}",
                    w[0].n, w[1].n
                ));
            }
        }
    }
    let result = json!({ "rows": rows.iter().map(row_json).collect::<Vec<_>>() });
    Ok(b.finish(format, result, || {
        let mut t = Table::new([
            "n",
            "k",
            "worst_multiplicities",
            "worst_count",
            "worst_ratio",
            "max_deviation",
            "profiles_examined",
        ]);
        for r in &rows {
            t.push([
                r.n.to_string(),
                r.k.to_string(),
                join(r.worst_profile.multiplicities()),
                r.worst_count.to_string(),
                r.worst_ratio.to_string(),
                r.max_deviation.to_string(),
                r.profiles_examined.to_string(),
            ]);
        }
        t
    }))
}

fn row_json(r: &DeviationRow) -> serde_json::Value {
    json!({
        "n": r.n,
        "k": r.k,
        "worst_multiplicities": r.worst_profile.multiplicities(),
        "worst_count": r.worst_count.to_string(),
        "worst_ratio": r.worst_ratio,
        "max_deviation": r.max_deviation,
        "profiles_examined": r.profiles_examined,
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn equitable(args: &EquitableArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let e = equitable_split_ratio(args.n, args.s).map_err(CliError::usage)?;
    let mut b = Builder::new("experiment equitable", seed, args);
    if let Some(false) = e.closed_form_matches() {
        b.fail(format!(
            "count {} differs from (n/2)^2 (n-2)! = {}",
            e.count,
            e.closed_form.as_ref().expect("checked above")
        ));
    }
    let result = json!({
        "n": e.n,
        "s": e.s,
        "count": e.count.to_string(),
        "ratio": e.ratio.to_string(),
        "ratio_f64": e.ratio_f64,
        "closed_form": e.closed_form.as_ref().map(|c| c.to_string()),
        "limit": e.limit,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new(["n", "s", "count", "ratio", "ratio_f64", "closed_form", "limit"]);
        t.push([
            e.n.to_string(),
            e.s.to_string(),
            e.count.to_string(),
            e.ratio.to_string(),
            e.ratio_f64.to_string(),
            e.closed_form.as_ref().map(|c| c.to_string()).unwrap_or_default(),
            e.limit.to_string(),
        ]);
        t
    }))
}

fn lemma(args: &LemmaAuditArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let config = LemmaAuditConfig {
        n_max: args.n_max,
        seed,
        ..LemmaAuditConfig::default()
    };
    let audit = lemma_audit_with(config, Exec::default()).map_err(CliError::usage)?;
    let mut b = Builder::new("experiment lemma-audit", seed, args);
    for r in audit.star_violations() {
        b.fail(format!(
            "n = {} r = {}: D[{}] = {} > D[{}] = {}",
            r.n, r.r, r.f, r.d_f, r.f_star, r.d_f_star
        ));
    }
    for r in audit.bound_violations().filter(|r| r.r == 2) {
        b.fail(format!(
            "n = {} r = 2: D[f*] - D[f] exceeds (n-2)! for f = {}",
            r.n, r.f
        ));
    }
    let reported: Vec<_> = audit.bound_violations().filter(|r| r.r > 2).collect();
    if let Some(first) = reported.first() {
        b.warn(format!(
            "{} records with r > 2 exceed the (n-2)! bound, first n = {} r = {} f = {} (difference {} > {})",
            reported.len(),
            first.n,
            first.r,
            first.f,
            &first.d_f_star - &first.d_f,
            factorial(first.n - 2)
        ));
    }
    let records: Vec<_> = audit
        .records
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "r": r.r,
                "f": r.f.to_string(),
                "f_star": r.f_star.to_string(),
                "d_f": r.d_f.to_string(),
                "d_f_star": r.d_f_star.to_string(),
                "holds_star": r.holds_star,
                "holds_bound": r.holds_bound,
            })
        })
        .collect();
    let result = json!({
        "exhaustive_up_to": audit.config.exhaustive_up_to,
        "samples_per_r": audit.config.samples_per_r,
        "records_audited": audit.records.len(),
        "star_violations": audit.star_violations().count(),
        "bound_violations": audit.bound_violations().count(),
        "records": records,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new(["n", "r", "f", "f_star", "d_f", "d_f_star", "holds_star", "holds_bound"]);
        for r in &audit.records {
            t.push([
                r.n.to_string(),
                r.r.to_string(),
                r.f.to_string(),
                r.f_star.to_string(),
                r.d_f.to_string(),
                r.d_f_star.to_string(),
                r.holds_star.to_string(),
                r.holds_bound.to_string(),
            ]);
        }
        t
    }))
}

fn properties(args: &PropertySuiteArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let report = property_suite(args.n_max).map_err(CliError::usage)?;
    let mut b = Builder::new("experiment property-suite", seed, args);
    for c in &report.checks {
        if c.failures == 0 {
            continue;
        }
        let msg = format!(
            "{}: {} of {} cases fail, first {}",
            c.name,
            c.failures,
            c.cases,
            c.first_failure.as_deref().unwrap_or("?")
        );
        if c.asserted {
            b.fail(msg);
        } else {
            b.warn(format!("{msg} (report only)"));
        }
    }
    let checks: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "asserted": c.asserted,
                "cases": c.cases,
                "failures": c.failures,
                "first_failure": c.first_failure,
            })
        })
        .collect();
    let equalities: Vec<_> = report
        .monotonicity_equalities
        .iter()
        .map(|(p, q)| json!([p.to_string(), q.to_string()]))
        .collect();
    let result = json!({
        "passed": report.passed(),
        "checks": checks,
        "monotonicity_equalities": equalities,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new(["check", "asserted", "cases", "failures", "first_failure"]);
        for c in &report.checks {
            t.push([
                c.name.to_string(),
                c.asserted.to_string(),
                c.cases.to_string(),
                c.failures.to_string(),
                c.first_failure.clone().unwrap_or_default(),
            ]);
        }
        t
    }))
}
