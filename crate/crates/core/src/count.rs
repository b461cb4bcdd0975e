//! Exact f-derangement counts.
//!
//! Four routes that must agree:
//! * [`count_brute_force`] enumerates permutations directly;
//! * [`count_by_inclusion_exclusion`] sums `(-1)^j e_j(m) (n-j)!` over the
//!   elementary symmetric polynomials of the multiplicity profile;
//! * [`count_recursion1`] peels off one singleton item;
//! * [`count_recursion2`] merges two singletons into a collision pair.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::CountError;
use crate::function::{MultiplicityProfile, PartialFunctionSpec, Profile};
use crate::par::Exec;

/// Exact nonnegative count.
pub type Count = BigUint;

/// Largest `n` that [`count_brute_force`] will enumerate.
pub const BRUTE_FORCE_CAP: usize = 10;

pub fn factorial(n: usize) -> Count {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn factorials(n: usize) -> Vec<Count> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for k in 1..=n {
        let next = &out[k - 1] * k;
        out.push(next);
    }
    out
}

/// Counts permutations `g` with `g(i) != f(i)` by enumeration, up to
/// [`BRUTE_FORCE_CAP`].
pub fn count_brute_force(f: &PartialFunctionSpec) -> Result<Count, CountError> {
    count_brute_force_with(f, BRUTE_FORCE_CAP, Exec::default())
}

pub fn count_brute_force_with(f: &PartialFunctionSpec, cap: usize, exec: Exec) -> Result<Count, CountError> {
    let n = f.n();
    if n > cap {
        return Err(CountError::TooLarge { n, cap });
    }
    let forbidden: Vec<Option<usize>> = f.images().to_vec();
    // Split on g(0) so each branch enumerates (n-1)! completions.
    let per_first = exec.map_range(n, |first| {
        if forbidden[0] == Some(first) {
            return 0u64;
        }
        let mut used = vec![false; n];
        used[first] = true;
        extend(1, &forbidden, &mut used)
    });
    Ok(BigUint::from(per_first.into_iter().sum::<u64>()))
}

fn extend(pos: usize, forbidden: &[Option<usize>], used: &mut [bool]) -> u64 {
    let n = forbidden.len();
    if pos == n {
        return 1;
    }
    let mut total = 0;
    for v in 0..n {
        if used[v] || forbidden[pos] == Some(v) {
            continue;
        }
        used[v] = true;
        total += extend(pos + 1, forbidden, used);
        used[v] = false;
    }
    total
}

/// Inclusion-exclusion over the positions forced onto their forbidden value:
/// choosing `j` distinct targets and one preimage of each contributes
/// `e_j(m_1..m_t)` ways, each completed in `(n-j)!` ways.
pub fn count_by_inclusion_exclusion(mp: &MultiplicityProfile) -> Count {
    let n = mp.n();
    // coefficients of prod (1 + m_c x)
    let mut elementary = vec![BigUint::one()];
    for &m in mp.multiplicities() {
        elementary.push(BigUint::zero());
        for j in (1..elementary.len()).rev() {
            let add = &elementary[j - 1] * m;
            elementary[j] += add;
        }
    }
    let facts = factorials(n);
    let mut positive = BigUint::zero();
    let mut negative = BigUint::zero();
    for (j, e) in elementary.iter().enumerate() {
        let term = e * &facts[n - j];
        if j % 2 == 0 {
            positive += term;
        } else {
            negative += term;
        }
    }
    positive - negative
}

/// Classical derangement number via `D(n) = (n-1)(D(n-1) + D(n-2))`.
pub fn classical_derangement_count(n: usize) -> Count {
    let mut prev = BigUint::one(); // D(0)
    if n == 0 {
        return prev;
    }
    let mut cur = BigUint::zero(); // D(1)
    for k in 2..=n {
        let next = (k - 1) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    cur
}

fn oracle(p: Profile) -> Count {
    count_by_inclusion_exclusion(&p.multiplicities())
}

/// Memo tables for the two `D[A,B,C]` recursions, keyed by profile.
///
/// Entries are pure functions of their key, so a memo may be reused across
/// calls and sizes.
#[derive(Debug, Default, Clone)]
pub struct RecursionMemo {
    first: HashMap<Profile, Count>,
    second: HashMap<Profile, Count>,
}

impl RecursionMemo {
    pub fn new() -> Self {
        Self::default()
    }

    /// `D[A,B,C] = (C + A/2) D[A,B-1,C] + (B-1) D[A,B-2,C+1] + (A/2) D[A-2,B-1,C+2]`
    /// for `A, B > 0`; rows with `A = 0` or `B = 0` come from the oracle.
    pub fn recursion1(&mut self, p: Profile) -> Count {
        if let Some(v) = self.first.get(&p) {
            return v.clone();
        }
        let value = if p.a == 0 || p.b == 0 {
            oracle(p)
        } else {
            let half = p.a / 2;
            let mut total = (p.c + half)
                * self.recursion1(Profile {
                    a: p.a,
                    b: p.b - 1,
                    c: p.c,
                });
            if p.b >= 2 {
                total += (p.b - 1)
                    * self.recursion1(Profile {
                        a: p.a,
                        b: p.b - 2,
                        c: p.c + 1,
                    });
            }
            total += half
                * self.recursion1(Profile {
                    a: p.a - 2,
                    b: p.b - 1,
                    c: p.c + 2,
                });
            total
        };
        self.first.insert(p, value.clone());
        value
    }

    /// `D[A,B,C] = D[A+2,B-2,C] + D[A,B-2,C]` for `B >= 2`; otherwise the
    /// oracle. The second term lives at size `n - 2`.
    pub fn recursion2(&mut self, p: Profile) -> Count {
        if let Some(v) = self.second.get(&p) {
            return v.clone();
        }
        let value = if p.b >= 2 {
            self.recursion2(Profile {
                a: p.a + 2,
                b: p.b - 2,
                c: p.c,
            }) + self.recursion2(Profile {
                a: p.a,
                b: p.b - 2,
                c: p.c,
            })
        } else {
            oracle(p)
        };
        self.second.insert(p, value.clone());
        value
    }
}

pub fn count_recursion1(p: Profile) -> Count {
    RecursionMemo::new().recursion1(p)
}

pub fn count_recursion2(p: Profile) -> Count {
    RecursionMemo::new().recursion2(p)
}
