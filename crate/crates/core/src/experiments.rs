//! Experiments around the `1/e` limit: exhaustive and sampled deviation sweeps,
//! equitable splits, an audit of the preimage-moving inequality, and the
//! property suite over the `D[A,B,C]` tables.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng as _;

use crate::count::{
    classical_derangement_count, count_brute_force, count_brute_force_with, count_by_inclusion_exclusion, factorial,
    Count, RecursionMemo,
};
use crate::error::CountError;
use crate::function::{multiplicity_profile, MultiplicityProfile, PartialFunctionSpec, Profile};
use crate::par::Exec;
use crate::sampling::sample_kmax_function;
use crate::seed::{derive_seed, rng_from_seed};

/// `1/e` in double precision.
pub fn inverse_e() -> f64 {
    1.0 / std::f64::consts::E
}

/// `count / n!` as an exact fraction.
pub fn exact_ratio(count: &Count, n: usize) -> BigRational {
    BigRational::new(BigInt::from(count.clone()), BigInt::from(factorial(n)))
}

pub fn ratio_f64(count: &Count, n: usize) -> f64 {
    exact_ratio(count, n).to_f64().unwrap_or(f64::NAN)
}

/// Worst distance from `1/e` found at one `(n, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationRow {
    pub n: usize,
    pub k: usize,
    pub worst_profile: MultiplicityProfile,
    pub worst_count: Count,
    pub worst_ratio: f64,
    pub max_deviation: f64,
    pub profiles_examined: usize,
}

/// Ties go to the profile listed last.
fn worst_of(n: usize, k: usize, profiles: impl IntoIterator<Item = MultiplicityProfile>) -> DeviationRow {
    let target = inverse_e();
    let mut best: Option<DeviationRow> = None;
    let mut examined = 0;
    for mp in profiles {
        examined += 1;
        let count = count_by_inclusion_exclusion(&mp);
        let ratio = ratio_f64(&count, n);
        let deviation = (ratio - target).abs();
        if best.as_ref().is_none_or(|b| deviation >= b.max_deviation) {
            best = Some(DeviationRow {
                n,
                k,
                worst_profile: mp,
                worst_count: count,
                worst_ratio: ratio,
                max_deviation: deviation,
                profiles_examined: 0,
            });
        }
    }
    let mut row = best.expect("at least one profile");
    row.profiles_examined = examined;
    row
}

/// Total 2-max profiles on `n` items, i.e. `A + B = n`.
pub fn total_two_max_profiles(n: usize) -> Vec<Profile> {
    (0..=n).step_by(2).map(|a| Profile { a, b: n - a, c: 0 }).collect()
}

/// Maximum of `|D[A,B,0]/n! - 1/e|` over all total 2-max profiles.
pub fn exhaustive_profile_deviation(n: usize) -> Result<DeviationRow, CountError> {
    if n < 2 {
        return Err(CountError::OutOfRange(format!("n = {n}, need n >= 2")));
    }
    Ok(worst_of(
        n,
        2,
        total_two_max_profiles(n).into_iter().map(|p| p.multiplicities()),
    ))
}

/// Worst deviation per `n` for total k-max maps. `k <= 2` is exhaustive over
/// profiles; larger `k` samples `samples_per_n` maps per size. Rows come back
/// sorted by `n`.
pub fn limit_sweep(
    k: usize,
    n_list: &[usize],
    samples_per_n: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<DeviationRow>, CountError> {
    if k == 0 {
        return Err(CountError::InvalidK { n: 0, k });
    }
    let sizes: Vec<usize> = n_list.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(&n) = sizes.iter().find(|&&n| n < k) {
        return Err(CountError::InvalidK { n, k });
    }
    let rows = exec.map(sizes, |n| -> Result<DeviationRow, CountError> {
        match k {
            1 => Ok(worst_of(n, 1, [MultiplicityProfile::new(vec![1; n], n)?])),
            2 if n >= 2 => exhaustive_profile_deviation(n),
            2 => Ok(worst_of(n, 2, [MultiplicityProfile::new(vec![1; n], n)?])),
            _ => {
                if samples_per_n == 0 {
                    return Err(CountError::OutOfRange("samples_per_n must be positive".into()));
                }
                let per_n = derive_seed(seed, n as u64);
                let mut profiles = BTreeSet::new();
                for s in 0..samples_per_n {
                    let f = sample_kmax_function(n, k, derive_seed(per_n, s as u64))?;
                    profiles.insert(multiplicity_profile(&f));
                }
                Ok(worst_of(n, k, profiles))
            }
        }
    });
    rows.into_iter().collect()
}

/// `D(f)/n!` for a map splitting `{1..n}` evenly over `s` targets.
#[derive(Debug, Clone, PartialEq)]
pub struct EquitableSplit {
    pub n: usize,
    pub s: usize,
    pub count: Count,
    pub ratio: BigRational,
    pub ratio_f64: f64,
    /// `(n/2)^2 (n-2)!`, only for `s = 2`.
    pub closed_form: Option<Count>,
    /// `((s-1)/s)^s`.
    pub limit: f64,
}

impl EquitableSplit {
    pub fn closed_form_matches(&self) -> Option<bool> {
        self.closed_form.as_ref().map(|c| *c == self.count)
    }
}

pub fn equitable_split_ratio(n: usize, s: usize) -> Result<EquitableSplit, CountError> {
    if n == 0 {
        return Err(CountError::ZeroSize);
    }
    if s == 0 || s > n || !n.is_multiple_of(s) {
        return Err(CountError::NotDivisible { n, s });
    }
    let mp = MultiplicityProfile::new(vec![n / s; s], n)?;
    let count = count_by_inclusion_exclusion(&mp);
    let closed_form = (s == 2).then(|| {
        let half = BigUint::from(n / 2);
        &half * &half * factorial(n - 2)
    });
    let sf = s as f64;
    Ok(EquitableSplit {
        n,
        s,
        ratio: exact_ratio(&count, n),
        ratio_f64: ratio_f64(&count, n),
        count,
        closed_form,
        limit: ((sf - 1.0) / sf).powi(s as i32),
    })
}

/// One configuration of the preimage-moving inequality: `f` sends items
/// `1..=r` to target 1 and nothing to target 2; `f*` equals `f` except
/// `f*(r) = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaAuditRecord {
    pub n: usize,
    pub r: usize,
    pub f: PartialFunctionSpec,
    pub f_star: PartialFunctionSpec,
    pub d_f: Count,
    pub d_f_star: Count,
    /// `D[f] <= D[f*]`
    pub holds_star: bool,
    /// `D[f*] - D[f] <= (n-2)!`
    pub holds_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaAuditConfig {
    pub n_max: usize,
    /// Sizes up to this one enumerate every completion.
    pub exhaustive_up_to: usize,
    /// Completions drawn per `(n, r)` above `exhaustive_up_to`.
    pub samples_per_r: usize,
    pub seed: u64,
}

impl Default for LemmaAuditConfig {
    fn default() -> Self {
        Self {
            n_max: 8,
            exhaustive_up_to: 6,
            samples_per_r: 30,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaAudit {
    pub config: LemmaAuditConfig,
    pub records: Vec<LemmaAuditRecord>,
}

impl LemmaAudit {
    pub fn star_violations(&self) -> impl Iterator<Item = &LemmaAuditRecord> {
        self.records.iter().filter(|r| !r.holds_star)
    }

    pub fn bound_violations(&self) -> impl Iterator<Item = &LemmaAuditRecord> {
        self.records.iter().filter(|r| !r.holds_bound)
    }

    /// Violations that count as failures: any `D[f] > D[f*]`, or a bound
    /// violation with `r = 2`.
    pub fn asserted_failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| !r.holds_star || (r.r == 2 && !r.holds_bound))
            .count()
    }
}

pub fn lemma_audit(n_max: usize) -> Result<LemmaAudit, CountError> {
    lemma_audit_with(
        LemmaAuditConfig {
            n_max,
            ..LemmaAuditConfig::default()
        },
        Exec::default(),
    )
}

pub fn lemma_audit_with(config: LemmaAuditConfig, exec: Exec) -> Result<LemmaAudit, CountError> {
    if config.n_max > 8 {
        return Err(CountError::OutOfRange(format!(
            "lemma audit supports n_max <= 8, got {}",
            config.n_max
        )));
    }
    let mut jobs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for n in 2..=config.n_max {
        // 0-based targets: exactly r items hit 0, nothing hits 1
        let allowed: Vec<usize> = (2..n).collect();
        for r in 2..=n {
            let free = n - r;
            let total = (allowed.len() as u128).checked_pow(free as u32);
            let exhaustive = n <= config.exhaustive_up_to || total.is_some_and(|t| t <= config.samples_per_r as u128);
            let tails: Vec<Vec<usize>> = if exhaustive {
                all_tuples(&allowed, free)
            } else {
                let mut rng = rng_from_seed(derive_seed(config.seed, (n * 16 + r) as u64));
                let mut set = BTreeSet::new();
                for _ in 0..config.samples_per_r {
                    let tail: Vec<usize> = (0..free).map(|_| allowed[rng.gen_range(0..allowed.len())]).collect();
                    set.insert(tail);
                }
                set.into_iter().collect()
            };
            jobs.extend(tails.into_iter().map(|t| (n, r, t)));
        }
    }
    let records = exec.map(jobs, |(n, r, tail)| -> Result<LemmaAuditRecord, CountError> {
        let mut images: Vec<Option<usize>> = vec![Some(0); r];
        images.extend(tail.into_iter().map(Some));
        let f = PartialFunctionSpec::from_zero_based(images.clone())?;
        images[r - 1] = Some(1);
        let f_star = PartialFunctionSpec::from_zero_based(images)?;
        let d_f = count_brute_force_with(&f, 8, Exec::Serial)?;
        let d_f_star = count_brute_force_with(&f_star, 8, Exec::Serial)?;
        let holds_star = d_f <= d_f_star;
        let holds_bound = !holds_star || &d_f_star - &d_f <= factorial(n - 2);
        Ok(LemmaAuditRecord {
            n,
            r,
            f,
            f_star,
            d_f,
            d_f_star,
            holds_star,
            holds_bound,
        })
    });
    Ok(LemmaAudit {
        config,
        records: records.into_iter().collect::<Result<_, _>>()?,
    })
}

fn all_tuples(alphabet: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&a| {
                    let mut next = prefix.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
    }
    out
}

/// Outcome of one family of checks in [`property_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Report-only checks never fail the suite.
    pub asserted: bool,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, asserted: bool) -> Self {
        Self {
            name,
            asserted,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub n_max: usize,
    pub checks: Vec<CheckOutcome>,
    /// Pairs with `D[A,B,C] = D[A+2,B-2,C]`.
    pub monotonicity_equalities: Vec<(Profile, Profile)>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.asserted || c.failures == 0)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Brute-force checks are limited to this size.
const SUITE_BRUTE_FORCE_MAX: usize = 7;

/// Runs the table identities and properties over every profile with
/// `n <= n_max`.
pub fn property_suite(n_max: usize) -> Result<PropertyReport, CountError> {
    if n_max > 12 {
        return Err(CountError::OutOfRange(format!(
            "property suite supports n_max <= 12, got {n_max}"
        )));
    }
    let oracle = |a: usize, b: usize, c: usize| count_by_inclusion_exclusion(&Profile { a, b, c }.multiplicities());
    let mut rec1 = CheckOutcome::new("recursion1_identity", true);
    let mut rec2 = CheckOutcome::new("recursion2_identity", true);
    let mut engines = CheckOutcome::new("recursion_engines_match_oracle", true);
    let mut parity = CheckOutcome::new("parity_when_collisions", true);
    let mut weak = CheckOutcome::new("weak_monotonicity", true);
    let mut strict_iff = CheckOutcome::new("strict_iff_smaller_term_positive", true);
    let mut strict = CheckOutcome::new("strict_monotonicity", false);
    let mut telescoping = CheckOutcome::new("telescoping_bound", true);
    let mut corners = CheckOutcome::new("table_corners", true);
    let mut worst_all_pairs = CheckOutcome::new("worst_deviation_at_all_pairs", true);
    let mut soundness = CheckOutcome::new("oracle_matches_brute_force", true);
    let mut label = CheckOutcome::new("label_invariance", true);
    let mut equalities = Vec::new();
    let mut memo = RecursionMemo::new();

    for n in 0..=n_max {
        for p in Profile::all_with_size(n) {
            let (a, b, c) = (p.a, p.b, p.c);
            let d = oracle(a, b, c);
            if a > 0 && b > 0 {
                let mut rhs = (c + a / 2) * oracle(a, b - 1, c) + (a / 2) * oracle(a - 2, b - 1, c + 2);
                if b >= 2 {
                    rhs += (b - 1) * oracle(a, b - 2, c + 1);
                }
                rec1.record(rhs == d, || format!("D{p} = {d}, recursion gives {rhs}"));
            }
            if b >= 2 {
                let merged = oracle(a + 2, b - 2, c);
                let rhs = &merged + oracle(a, b - 2, c);
                rec2.record(rhs == d, || format!("D{p} = {d}, recursion gives {rhs}"));
                weak.record(d >= merged, || {
                    format!("D{p} = {d} < D[{},{},{c}] = {merged}", a + 2, b - 2)
                });
                let smaller_positive = !oracle(a, b - 2, c).is_zero();
                strict_iff.record((d > merged) == smaller_positive, || {
                    format!("D{p} vs D[{},{},{c}]", a + 2, b - 2)
                });
                strict.record(d > merged, || format!("D{p} = D[{},{},{c}] = {d}", a + 2, b - 2));
                if d == merged {
                    equalities.push((p, Profile { a: a + 2, b: b - 2, c }));
                }
            }
            let r1 = memo.recursion1(p);
            let r2 = memo.recursion2(p);
            engines.record(r1 == d && r2 == d, || format!("D{p}: oracle {d}, rec1 {r1}, rec2 {r2}"));
            if a > 0 {
                parity.record(!d.bit(0), || format!("D{p} = {d} is odd"));
            }
            if c == 0 {
                let classical = classical_derangement_count(n);
                let bound = BigUint::from(a / 2) * factorial(n.saturating_sub(2));
                let ok = d <= classical && &classical - &d <= bound;
                telescoping.record(ok, || format!("D{p} = {d}, D({n}) = {classical}"));
            }
        }
        corners.record(
            oracle(0, n, 0) == classical_derangement_count(n) && oracle(0, 0, n) == factorial(n),
            || format!("corner cells at n = {n}"),
        );
        if n >= 2 {
            let row = exhaustive_profile_deviation(n)?;
            let all_pairs = Profile {
                a: 2 * (n / 2),
                b: n % 2,
                c: 0,
            };
            worst_all_pairs.record(row.worst_profile == all_pairs.multiplicities(), || {
                format!("n = {n}: worst profile {}", row.worst_profile)
            });
        }
        if (1..=SUITE_BRUTE_FORCE_MAX).contains(&n) {
            for mp in MultiplicityProfile::enumerate(n) {
                let f = mp.representative()?;
                let brute = count_brute_force(&f)?;
                let ie = count_by_inclusion_exclusion(&mp);
                soundness.record(brute == ie, || format!("{mp}: brute {brute}, oracle {ie}"));
                // reversed item order and rotated targets
                let relabeled: Vec<Option<usize>> = f.images().iter().rev().map(|t| t.map(|t| (t + 1) % n)).collect();
                let g = PartialFunctionSpec::from_zero_based(relabeled)?;
                let brute_g = count_brute_force(&g)?;
                label.record(brute_g == brute, || {
                    format!("{mp}: {f} gives {brute}, {g} gives {brute_g}")
                });
            }
        }
    }

    Ok(PropertyReport {
        n_max,
        checks: vec![
            rec1,
            rec2,
            engines,
            parity,
            weak,
            strict_iff,
            strict,
            telescoping,
            corners,
            worst_all_pairs,
            soundness,
            label,
        ],
        monotonicity_equalities: equalities,
    })
}
