use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::progressions::{find_mono_ap, ApWitness, Coloring, VerifyMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupParams {
    pub r1: u32,
    pub r2: u32,
    pub r3: u32,
    pub seed: u64,
    pub retry_cap: u64,
    /// Claimed lower bound on the minimum element order of `H1`.
    pub q: u64,
}

impl BlowupParams {
    pub fn palette(&self) -> u32 {
        self.r1 * self.r2 + self.r3
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupOutcome {
    pub coloring: Coloring,
    pub attempts: u64,
    /// The shift `y_x` (as an `H2` index) of every `x` in `H1`.
    pub shifts: Vec<usize>,
}

/// Maps `(i, j)` in `[r1] x [r2]` to `(i-1) r2 + j`, and overflow color `i`
/// in `[r3]` to `r1 r2 + i`.
pub fn identify_color(r1: u32, r2: u32, c1: u32, c2: u32) -> u32 {
    if c2 <= r2 {
        (c1 - 1) * r2 + c2
    } else {
        r1 * r2 + (c2 - r2)
    }
}

/// One uniform shift in `0..h2_order` per element of `H1`.
pub fn draw_shifts<R: Rng>(rng: &mut R, h1_order: usize, h2_order: usize) -> Vec<usize> {
    (0..h1_order).map(|_| rng.gen_range(0..h2_order)).collect()
}

/// The coloring of `H1 x H2` determined by a fixed choice of shifts:
/// `(x, y)` gets `(C1(x), C2(y - y_x))` when `C2(y - y_x) <= r2`, else the
/// overflow color `C2(y - y_x) - r2`, both passed through [`identify_color`].
/// Nothing is verified here.
pub fn assign_blowup_colors(c1: &Coloring, c2: &Coloring, r2: u32, shifts: &[usize]) -> Result<Coloring> {
    let (h1, h2) = (c1.group(), c2.group());
    let n1 = h1.enumerable_order()?;
    let n2 = h2.enumerable_order()?;
    if shifts.len() != n1 {
        return Err(Error::InvalidParameter("need exactly one shift per element of H1"));
    }
    if r2 == 0 || r2 > c2.palette() {
        return Err(Error::InvalidParameter("r2 must lie in 1..=palette(C2)"));
    }
    let r1 = c1.palette();
    let r3 = c2.palette() - r2;
    let ix2 = h2.indexer();
    let negated: Vec<usize> = shifts
        .iter()
        .map(|&s| {
            let e = h2.element_at(s);
            h2.index_of(&h2.neg(&e).expect("in range"))
        })
        .collect();
    let mut colors = Vec::with_capacity(n1 * n2);
    for (x, &neg_shift) in negated.iter().enumerate() {
        let cx = c1.color_at(x);
        for y in 0..n2 {
            let cy = c2.color_at(ix2.add(y, neg_shift));
            colors.push(identify_color(r1, r2, cx, cy));
        }
    }
    Coloring::new(h1.product(h2), r1 * r2 + r3, colors)
}

fn require_verified(c: &Coloring, k: usize) -> Result<()> {
    match find_mono_ap(c, k, VerifyMode::Fast) {
        Some(w) => Err(Error::NotApFree { k, witness: Box::new(w) }),
        None => Ok(()),
    }
}

/// Las Vegas blow-up: draw fresh shifts, color, verify, and repeat up to
/// `retry_cap` times. Only a verifier-passed coloring is returned.
pub fn blowup(c1: &Coloring, c2: &Coloring, params: &BlowupParams, k: usize) -> Result<BlowupOutcome> {
    if params.r2 == 0 {
        return Err(Error::InvalidParameter("r2 must be at least 1"));
    }
    if params.retry_cap == 0 {
        return Err(Error::InvalidParameter("retry cap must be at least 1"));
    }
    if c1.palette() != params.r1 || c2.palette() != params.r2 + params.r3 {
        return Err(Error::InvalidParameter("palettes do not match r1 and r2 + r3"));
    }
    if !c1.group().min_order_at_least(params.q) {
        return Err(Error::InvalidParameter("H1 has an element of order below Q"));
    }
    require_verified(c1, k)?;
    require_verified(c2, k)?;

    let n1 = c1.group().enumerable_order()?;
    let n2 = c2.group().enumerable_order()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut last: Option<ApWitness> = None;
    for attempt in 1..=params.retry_cap {
        let shifts = draw_shifts(&mut rng, n1, n2);
        let coloring = assign_blowup_colors(c1, c2, params.r2, &shifts)?;
        match find_mono_ap(&coloring, k, VerifyMode::Fast) {
            None => return Ok(BlowupOutcome { coloring, attempts: attempt, shifts }),
            Some(w) => last = Some(w),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: params.retry_cap,
        witness: Box::new(last.expect("at least one attempt")),
    })
}
