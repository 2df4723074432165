//! Multi-threaded verification of cyclic colorings.
//!
//! Differences are scanned in parallel for each color in turn and the
//! lowest hit is kept, so the witness is the same canonical
//! `(color, d, x)` the sequential verifier reports, for any thread count.

use rayon::prelude::*;
use vdwforge_core::progressions::{find_mono_ap, make_ap, FastKernel};
use vdwforge_core::{ApWitness, Coloring, Element, VerifyMode};

/// Parallel counterpart of [`find_mono_ap`] in fast mode.
pub fn find_mono_ap_par(coloring: &Coloring, k: usize) -> Option<ApWitness> {
    if k < 2 {
        return None;
    }
    let Some(kernel) = FastKernel::new(coloring) else {
        return find_mono_ap(coloring, k, VerifyMode::Fast);
    };
    let (color, d, x) = (1..=kernel.palette()).find_map(|color| {
        (1..=kernel.max_difference())
            .into_par_iter()
            .map_init(|| kernel.scratch(), |acc, d| kernel.first_start(color, d, k, acc).map(|x| (color, d, x)))
            .find_map_first(|hit| hit)
    })?;
    let (start, diff) = (Element::cyclic(x as u64), Element::cyclic(d as u64));
    let elements = make_ap(coloring.group(), &start, &diff, k).ok()?.distinct;
    Some(ApWitness { start, diff, k, color: Some(color), elements })
}

/// Runs `f` on a pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, rayon::ThreadPoolBuildError> {
    match threads {
        None => Ok(f()),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use vdwforge_core::Group;

    #[test]
    fn agrees_with_sequential_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..=300u64);
            let r = rng.gen_range(1..=6);
            let k = rng.gen_range(2..=6);
            let c = Coloring::from_fn(Group::cyclic(n).unwrap(), r, |_| rng.gen_range(1..=r)).unwrap();
            let seq = find_mono_ap(&c, k, VerifyMode::Fast);
            for threads in [1, 3] {
                assert_eq!(with_threads(Some(threads), || find_mono_ap_par(&c, k)).unwrap(), seq);
            }
        }
    }

    #[test]
    fn product_groups_fall_back() {
        let g = Group::from_factors(vec![3, 4]).unwrap();
        let c = Coloring::from_fn(g, 2, |i| 1 + (i % 2) as u32).unwrap();
        assert_eq!(find_mono_ap_par(&c, 3), find_mono_ap(&c, 3, VerifyMode::Fast));
        assert!(find_mono_ap_par(&c, 3).is_some());
    }
}
