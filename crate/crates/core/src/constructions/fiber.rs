use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::EAGER_CHECK_LIMIT;
use crate::group::{Element, Group};
use crate::progressions::find_ap_in_set;
use crate::{Error, Result};

fn small(g: &Group) -> bool {
    g.order_u64().is_some_and(|n| n <= EAGER_CHECK_LIMIT)
}

fn require_free(g: &Group, set: &[Element], k: usize) -> Result<()> {
    if let Some(w) = find_ap_in_set(g, set, k)? {
        return Err(Error::NotApFree { k, witness: Box::new(w) });
    }
    Ok(())
}

/// `A = {(x, y) : x in base, y in Y_x}` inside `H1 x H2`, in canonical order.
///
/// When `base` is k-AP-free in `H1` and every fiber is k-AP-free in `H2`,
/// so is `A`. Members of `base` without a fiber entry get the empty fiber.
/// On small groups the hypotheses are checked before building.
pub fn fiber_union(
    h1: &Group,
    h2: &Group,
    base: &[Element],
    fibers: &BTreeMap<Element, Vec<Element>>,
    k: usize,
) -> Result<Vec<Element>> {
    for key in fibers.keys() {
        if !base.contains(key) {
            return Err(Error::FiberKeyNotInSet);
        }
    }
    if small(h1) {
        require_free(h1, base, k)?;
    }
    let check_fibers = small(h2);
    let product = h1.product(h2);
    let mut out = Vec::new();
    for (x, ys) in fibers {
        if check_fibers {
            require_free(h2, ys, k)?;
        }
        for y in ys {
            if !h2.contains(y) {
                return Err(Error::DimensionMismatch { expected: h2.factors().len(), found: y.coords().len() });
            }
            let mut coords = x.coords().to_vec();
            coords.extend_from_slice(y.coords());
            out.push(product.element(coords)?);
        }
    }
    out.sort_by_key(|e| product.index_of(e));
    out.dedup();
    Ok(out)
}
