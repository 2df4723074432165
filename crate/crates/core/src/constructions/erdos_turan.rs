use alloc::vec::Vec;

use crate::group::{is_prime, Element};
use crate::{Error, Result};

/// Residues mod `p^t` whose `t` base-`p` digits all lie in `1..p`, built as
/// `A_1 = {1, .., p-1}`, `A_{t+1} = A_1 + p A_t`. Sorted ascending; has
/// `(p-1)^t` members and contains no non-trivial `p`-AP.
pub fn erdos_turan_set(p: u64, t: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1"));
    }
    match p.checked_pow(t) {
        Some(n) if n <= crate::ENUMERATION_LIMIT => {}
        _ => return Err(Error::TooLarge { what: "p^t" }),
    }
    let digits: Vec<u64> = (1..p).collect();
    let mut set = digits.clone();
    for _ in 1..t {
        set = digits
            .iter()
            .flat_map(|&low| set.iter().map(move |&rest| low + p * rest))
            .collect();
    }
    set.sort_unstable();
    Ok(set)
}

pub fn erdos_turan_elements(p: u64, t: u32) -> Result<Vec<Element>> {
    Ok(erdos_turan_set(p, t)?.into_iter().map(Element::cyclic).collect())
}
