use derange_core::experiments::exact_ratio;
use derange_core::{
    build_partial_function, count_brute_force, count_by_inclusion_exclusion, count_recursion1, count_recursion2,
    multiplicity_profile, Count, PartialFunctionSpec, Profile, BRUTE_FORCE_CAP,
};
use serde_json::{json, Map, Value};

use crate::args::{CountArgs, Format};
use crate::report::{Builder, CliError, Report, Table};

/// Largest domain the `count` command accepts; the recursions memoize
/// cubically many cells.
pub const COUNT_MAX_N: usize = 100;

pub fn run(args: &CountArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let f = match (&args.profile, &args.images) {
        (Some([a, b, c]), None) => Profile::new(*a, *b, *c)
            .and_then(|p| p.representative())
            .map_err(CliError::usage)?,
        (None, Some(images)) => build_partial_function(images.0.len(), &images.0).map_err(CliError::usage)?,
        _ => return Err(CliError::usage("give exactly one of --profile or --images")),
    };
    if f.n() > COUNT_MAX_N {
        return Err(CliError::usage(format!("n = {} exceeds {COUNT_MAX_N}", f.n())));
    }
    let mut b = Builder::new("count", seed, args);
    let (methods, profile) = all_methods(&f);
    let count = methods[0].1.clone();
    let agree = methods.iter().all(|(_, c)| *c == count);
    b.require(agree, || {
        let listed: Vec<String> = methods.iter().map(|(m, c)| format!("{m}={c}")).collect();
        format!("methods disagree: {}", listed.join(", "))
    });

    let mp = multiplicity_profile(&f);
    let by_method: Map<String, Value> = methods
        .iter()
        .map(|(m, c)| (m.to_string(), json!(c.to_string())))
        .collect();
    let result = json!({
        "n": f.n(),
        "function": f.to_string(),
        "multiplicities": mp.multiplicities(),
        "profile": profile.map(|p| [p.a, p.b, p.c]),
        "count": count.to_string(),
        "ratio": exact_ratio(&count, f.n()).to_string(),
        "methods": by_method,
        "agree": agree,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new(["method", "count"]);
        for (m, c) in &methods {
            t.push([m.to_string(), c.to_string()]);
        }
        t
    }))
}

/// Inclusion-exclusion first, then brute force when small enough and both
/// recursions for 2-max maps.
fn all_methods(f: &PartialFunctionSpec) -> (Vec<(&'static str, Count)>, Option<Profile>) {
    let mp = multiplicity_profile(f);
    let mut out = vec![("inclusion_exclusion", count_by_inclusion_exclusion(&mp))];
    if f.n() <= BRUTE_FORCE_CAP {
        out.push(("brute_force", count_brute_force(f).expect("n within the cap")));
    }
    let profile = mp.to_profile().ok();
    if let Some(p) = profile {
        out.push(("recursion1", count_recursion1(p)));
        out.push(("recursion2", count_recursion2(p)));
    }
    (out, profile)
}
