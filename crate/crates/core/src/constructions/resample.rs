use alloc::boxed::Box;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::Group;
use crate::progressions::{find_mono_ap, Coloring, VerifyMode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResampleOutcome {
    pub coloring: Coloring,
    pub resamples: u64,
}

/// Uniform random `r`-coloring of `group`, repaired by resampling until no
/// color class contains a non-trivial `k`-AP.
pub fn mt_coloring(group: &Group, r: u32, k: usize, seed: u64, resample_cap: u64) -> Result<ResampleOutcome> {
    if r == 0 {
        return Err(Error::InvalidParameter("palette must have at least one color"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = Coloring::from_fn(group.clone(), r, |_| rng.gen_range(1..=r))?;
    resample_loop(initial, k, &mut rng, resample_cap)
}

/// Resampling repair starting from a given coloring.
pub fn mt_coloring_from(initial: Coloring, k: usize, seed: u64, resample_cap: u64) -> Result<ResampleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    resample_loop(initial, k, &mut rng, resample_cap)
}

/// Each round takes the canonical first monochromatic AP and recolors all
/// of its distinct elements independently and uniformly.
fn resample_loop(mut coloring: Coloring, k: usize, rng: &mut ChaCha8Rng, cap: u64) -> Result<ResampleOutcome> {
    let r = coloring.palette();
    let group = coloring.group().clone();
    let mut resamples = 0u64;
    loop {
        let Some(witness) = find_mono_ap(&coloring, k, VerifyMode::Fast) else {
            return Ok(ResampleOutcome { coloring, resamples });
        };
        if resamples >= cap {
            return Err(Error::ResampleCapExhausted { resamples, witness: Box::new(witness) });
        }
        let mut colors = coloring.colors().to_vec();
        for e in &witness.elements {
            colors[group.index_of(e)] = rng.gen_range(1..=r);
        }
        coloring = Coloring::new(group.clone(), r, colors)?;
        resamples += 1;
    }
}
