//! Partial self-maps of `{1..n}`, permutations, and the profiles that determine
//! how many f-derangements a map has.
//!
//! Public constructors take 1-based targets (`1..=n`) to match the usual
//! notation; everything is stored 0-based.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::CountError;

/// A map from `{1..n}` to `{1..n}` that may be undefined at some points and
/// need not be injective.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialFunctionSpec {
    images: Vec<Option<usize>>,
}

impl PartialFunctionSpec {
    /// Builds from 0-based images.
    pub fn from_zero_based(images: Vec<Option<usize>>) -> Result<Self, CountError> {
        let n = images.len();
        if n == 0 {
            return Err(CountError::ZeroSize);
        }
        for (item, image) in images.iter().enumerate() {
            if let Some(t) = *image {
                if t >= n {
                    return Err(CountError::TargetOutOfRange {
                        item: item + 1,
                        target: t + 1,
                        n,
                    });
                }
            }
        }
        Ok(Self { images })
    }

    /// Builds a total map from 1-based images.
    pub fn total(images: &[usize]) -> Result<Self, CountError> {
        let assignments: Vec<Option<usize>> = images.iter().map(|&t| Some(t)).collect();
        build_partial_function(images.len(), &assignments)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based `item`.
    pub fn image(&self, item: usize) -> Option<usize> {
        self.images[item]
    }

    pub fn images(&self) -> &[Option<usize>] {
        &self.images
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    /// Preimage size of every 0-based target.
    pub fn preimage_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n()];
        for t in self.images.iter().flatten() {
            sizes[*t] += 1;
        }
        sizes
    }

    /// Largest preimage size; a map with order `k` is a k-max function.
    pub fn kmax_order(&self) -> usize {
        self.preimage_sizes().into_iter().max().unwrap_or(0)
    }

    /// 1-based rendering, `None` for undefined points.
    pub fn one_based(&self) -> Vec<Option<usize>> {
        self.images.iter().map(|t| t.map(|t| t + 1)).collect()
    }
}

impl fmt::Display for PartialFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .map(|t| match t {
                Some(t) => (t + 1).to_string(),
                None => "_".to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Validates `assignments` (1-based targets, `None` = undefined) into a spec.
pub fn build_partial_function(n: usize, assignments: &[Option<usize>]) -> Result<PartialFunctionSpec, CountError> {
    if n == 0 {
        return Err(CountError::ZeroSize);
    }
    if assignments.len() != n {
        return Err(CountError::LengthMismatch {
            expected: n,
            actual: assignments.len(),
        });
    }
    let mut images = Vec::with_capacity(n);
    for (i, a) in assignments.iter().enumerate() {
        match *a {
            Some(t) if t == 0 || t > n => {
                return Err(CountError::TargetOutOfRange {
                    item: i + 1,
                    target: t,
                    n,
                })
            }
            Some(t) => images.push(Some(t - 1)),
            None => images.push(None),
        }
    }
    Ok(PartialFunctionSpec { images })
}

/// The `[A, B, C]` summary of a 2-max map: `A` items share their image with
/// one other item, `B` items have a private image, `C` items are unmapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Profile {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self, CountError> {
        if !a.is_multiple_of(2) {
            return Err(CountError::OddCollisionCount(a));
        }
        Ok(Self { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a + self.b + self.c
    }

    pub fn pairs(&self) -> usize {
        self.a / 2
    }

    pub fn multiplicities(&self) -> MultiplicityProfile {
        let mut m = vec![2; self.pairs()];
        m.extend(std::iter::repeat_n(1, self.b));
        MultiplicityProfile {
            multiplicities: m,
            n: self.n(),
        }
    }

    /// A concrete map with this profile: pairs first, then singletons, then
    /// undefined points.
    pub fn representative(&self) -> Result<PartialFunctionSpec, CountError> {
        self.multiplicities().representative()
    }

    /// Every profile with `A + B + C = n`.
    pub fn all_with_size(n: usize) -> Vec<Profile> {
        let mut out = Vec::new();
        for a in (0..=n).step_by(2) {
            for b in 0..=(n - a) {
                out.push(Profile { a, b, c: n - a - b });
            }
        }
        out
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// Multiset of preimage sizes of the targets a map actually hits, stored in
/// non-increasing order. Determines the f-derangement count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityProfile {
    multiplicities: Vec<usize>,
    n: usize,
}

impl MultiplicityProfile {
    pub fn new(mut multiplicities: Vec<usize>, n: usize) -> Result<Self, CountError> {
        if multiplicities.contains(&0) {
            return Err(CountError::InvalidMultiplicities(
                "multiplicities must be positive".into(),
            ));
        }
        let total: usize = multiplicities.iter().sum();
        if total > n {
            return Err(CountError::InvalidMultiplicities(format!(
                "multiplicities sum to {total} > n = {n}"
            )));
        }
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { multiplicities, n })
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of unmapped items.
    pub fn slack(&self) -> usize {
        self.n - self.multiplicities.iter().sum::<usize>()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.multiplicities.first().copied().unwrap_or(0)
    }

    pub fn is_two_max(&self) -> bool {
        self.max_multiplicity() <= 2
    }

    pub fn to_profile(&self) -> Result<Profile, CountError> {
        if let Some(&m) = self.multiplicities.iter().find(|&&m| m > 2) {
            return Err(CountError::NotTwoMax {
                target: 1,
                preimages: m,
            });
        }
        let pairs = self.multiplicities.iter().filter(|&&m| m == 2).count();
        let singles = self.multiplicities.len() - pairs;
        Ok(Profile {
            a: 2 * pairs,
            b: singles,
            c: self.slack(),
        })
    }

    /// A concrete map realising this profile: target 1 takes the first
    /// `m_1` items, target 2 the next `m_2`, and so on; leftovers are unmapped.
    pub fn representative(&self) -> Result<PartialFunctionSpec, CountError> {
        let mut images = Vec::with_capacity(self.n);
        for (target, &m) in self.multiplicities.iter().enumerate() {
            images.extend(std::iter::repeat_n(Some(target), m));
        }
        images.resize(self.n, None);
        PartialFunctionSpec::from_zero_based(images)
    }

    /// Every multiplicity profile on `n` items (all partitions of every
    /// `s <= n`).
    pub fn enumerate(n: usize) -> Vec<MultiplicityProfile> {
        fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            for part in (1..=max_part.min(remaining)).rev() {
                cur.push(part);
                rec(remaining - part, part, cur, out);
                cur.pop();
            }
        }
        let mut parts = Vec::new();
        rec(n, n, &mut Vec::new(), &mut parts);
        parts
            .into_iter()
            .map(|multiplicities| MultiplicityProfile { multiplicities, n })
            .collect()
    }
}

impl fmt::Display for MultiplicityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        write!(f, "({}; n={})", parts.join(","), self.n)
    }
}

/// Preimage sizes of the targets hit by `f`.
pub fn multiplicity_profile(f: &PartialFunctionSpec) -> MultiplicityProfile {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for t in f.images().iter().flatten() {
        *counts.entry(*t).or_default() += 1;
    }
    let mut multiplicities: Vec<usize> = counts.into_values().collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    MultiplicityProfile {
        multiplicities,
        n: f.n(),
    }
}

/// `[A, B, C]` of a 2-max map.
pub fn two_max_profile(f: &PartialFunctionSpec) -> Result<Profile, CountError> {
    let sizes = f.preimage_sizes();
    if let Some((target, &preimages)) = sizes.iter().enumerate().find(|(_, &s)| s > 2) {
        return Err(CountError::NotTwoMax {
            target: target + 1,
            preimages,
        });
    }
    let a = 2 * sizes.iter().filter(|&&s| s == 2).count();
    let b = sizes.iter().filter(|&&s| s == 1).count();
    Ok(Profile { a, b, c: f.n() - a - b })
}

/// A bijection on `{1..n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self, CountError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(CountError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self, CountError> {
        if images.contains(&0) {
            return Err(CountError::NotAPermutation(images.len()));
        }
        Self::from_zero_based(images.iter().map(|v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }
}

/// Whether `g(i) != f(i)` at every point where `f` is defined.
pub fn is_f_derangement(g: &Permutation, f: &PartialFunctionSpec) -> Result<bool, CountError> {
    if g.n() != f.n() {
        return Err(CountError::SizeMismatch {
            permutation: g.n(),
            function: f.n(),
        });
    }
    Ok(f.images().iter().zip(g.images()).all(|(fi, gi)| *fi != Some(*gi)))
}
