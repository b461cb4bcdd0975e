//! Seeded sampling of total k-max functions.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::CountError;
use crate::function::PartialFunctionSpec;
use crate::seed::rng_from_seed;

/// Attempts before [`sample_kmax_function`] gives up.
pub const KMAX_REJECTION_BUDGET: usize = 10_000;

/// Uniform sample from the total functions `{1..n} -> {1..n}` in which every
/// target has at most `k` preimages. Uses rejection from uniform functions
/// (a shuffle when `k = 1`).
pub fn sample_kmax_function(n: usize, k: usize, seed: u64) -> Result<PartialFunctionSpec, CountError> {
    if n == 0 {
        return Err(CountError::ZeroSize);
    }
    if k == 0 || k > n {
        return Err(CountError::InvalidK { n, k });
    }
    let mut rng = rng_from_seed(seed);
    if k == 1 {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        return PartialFunctionSpec::from_zero_based(images.into_iter().map(Some).collect());
    }
    let mut loads = vec![0usize; n];
    let mut images = vec![0usize; n];
    for _ in 0..KMAX_REJECTION_BUDGET {
        loads.iter_mut().for_each(|l| *l = 0);
        let mut ok = true;
        for slot in images.iter_mut() {
            let t = rng.gen_range(0..n);
            *slot = t;
            loads[t] += 1;
            if loads[t] > k {
                ok = false;
            }
        }
        if ok {
            return PartialFunctionSpec::from_zero_based(images.into_iter().map(Some).collect());
        }
    }
    Err(CountError::RejectionBudgetExceeded {
        attempts: KMAX_REJECTION_BUDGET,
    })
}
