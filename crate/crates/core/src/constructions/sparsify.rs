use alloc::boxed::Box;

use num_bigint::BigUint;
use num_rational::Ratio;

use super::erdos_turan_set;
use crate::group::is_prime;
use crate::planner::delta_exact;
use crate::progressions::{find_mono_ap, Coloring, VerifyMode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sparsified {
    /// Color 1 is the digit set, color `1 + c` is old color `c` elsewhere.
    pub coloring: Coloring,
    /// Exact fraction of `H2` outside color 1: `1 - (1 - 1/p)^t`.
    pub delta: Ratio<BigUint>,
    pub t: u32,
}

/// Turns a k-AP-free `r'`-coloring of `Z/p^t` into an `(r'+1)`-coloring whose
/// first class is the Erdős–Turán digit set, leaving only a `delta`
/// fraction of the group in the other classes.
pub fn sparsify_coloring(c2: &Coloring, p: u64, k: usize) -> Result<Sparsified> {
    let h2 = c2.group();
    if !h2.is_cyclic() {
        return Err(Error::InvalidParameter("sparsification needs a cyclic group Z/p^t"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p as usize > k {
        return Err(Error::InvalidParameter("sparsification needs p <= k"));
    }
    let n = h2.factors()[0];
    let mut t = 0u32;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        t += 1;
    }
    if m != 1 || t == 0 {
        return Err(Error::InvalidParameter("group order is not a positive power of p"));
    }
    if let Some(w) = find_mono_ap(c2, k, VerifyMode::Fast) {
        return Err(Error::NotApFree { k, witness: Box::new(w) });
    }

    let mut colors: alloc::vec::Vec<u32> = c2.colors().iter().map(|&c| c + 1).collect();
    for s in erdos_turan_set(p, t)? {
        colors[s as usize] = 1;
    }
    let coloring = Coloring::new(h2.clone(), c2.palette() + 1, colors)?;
    if let Some(w) = find_mono_ap(&coloring, k, VerifyMode::Fast) {
        return Err(Error::VerificationFailed { witness: Box::new(w) });
    }
    Ok(Sparsified { coloring, delta: delta_exact(p, t)?, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::mt_coloring;
    use crate::group::{Element, Group};
    use alloc::vec;

    #[test]
    fn z9_three_colors() {
        let g = Group::cyclic(9).unwrap();
        // no 2-coloring of Z/9 avoids 4-APs, so use k = 5
        let c2 = mt_coloring(&g, 2, 5, 1, 10_000).unwrap().coloring;
        let out = sparsify_coloring(&c2, 3, 5).unwrap();
        assert_eq!(out.coloring.palette(), 3);
        let ones: vec::Vec<Element> = out.coloring.class_elements(1);
        assert_eq!(ones, [4, 5, 7, 8].map(Element::cyclic));
        assert_eq!(out.delta, Ratio::new(BigUint::from(5u32), BigUint::from(9u32)));
        assert_eq!(find_mono_ap(&out.coloring, 5, VerifyMode::Naive), None);
    }

    #[test]
    fn t_one_gives_one_over_p() {
        let g = Group::cyclic(5).unwrap();
        let c2 = Coloring::new(g, 2, vec![1, 1, 2, 2, 2]).unwrap();
        let out = sparsify_coloring(&c2, 5, 5).unwrap();
        assert_eq!(out.delta, Ratio::new(BigUint::from(1u32), BigUint::from(5u32)));
        assert_eq!(out.coloring.class_sizes()[0], 4);
    }

    #[test]
    fn class_one_has_digit_set_size() {
        let g = Group::cyclic(27).unwrap();
        let c2 = mt_coloring(&g, 3, 5, 3, 10_000).unwrap().coloring;
        let out = sparsify_coloring(&c2, 3, 5).unwrap();
        assert_eq!(out.coloring.class_sizes()[0], 8);
    }

    #[test]
    fn preconditions() {
        let g = Group::cyclic(9).unwrap();
        let constant = Coloring::from_fn(g.clone(), 1, |_| 1).unwrap();
        assert!(matches!(sparsify_coloring(&constant, 3, 3), Err(Error::NotApFree { .. })));
        let rainbow = Coloring::from_fn(g, 9, |i| i as u32 + 1).unwrap();
        assert!(sparsify_coloring(&rainbow, 5, 5).is_err());
        assert!(sparsify_coloring(&rainbow, 3, 2).is_err());
        let not_prime_power = Coloring::from_fn(Group::cyclic(12).unwrap(), 12, |i| i as u32 + 1).unwrap();
        assert!(sparsify_coloring(&not_prime_power, 3, 3).is_err());
    }
}
