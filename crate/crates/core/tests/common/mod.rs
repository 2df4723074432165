//! Brute-force references that share no code with the crate.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every non-trivial k-AP of `Z/n1 x .. x Z/nm` as a set of coordinate tuples.
pub fn all_aps(factors: &[u64], k: usize) -> BTreeSet<BTreeSet<Vec<u64>>> {
    let elems = tuples(factors);
    let mut out = BTreeSet::new();
    for d in &elems {
        if d.iter().all(|&c| c == 0) {
            continue;
        }
        for x in &elems {
            let set: BTreeSet<Vec<u64>> = (0..k as u64)
                .map(|i| x.iter().zip(d).zip(factors).map(|((&a, &b), &n)| (a + i * b) % n).collect())
                .collect();
            out.insert(set);
        }
    }
    out
}

/// All coordinate tuples, last coordinate varying fastest.
pub fn tuples(factors: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &n in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Does the cyclic coloring (by residue) contain a monochromatic non-trivial k-AP?
pub fn cyclic_has_mono_ap(colors: &[u32], k: usize) -> bool {
    let n = colors.len();
    (1..n).any(|d| (0..n).any(|x| (1..k).all(|i| colors[(x + i * d) % n] == colors[x])))
}

/// Same question for a set of residues in `Z/n`.
pub fn cyclic_set_has_ap(n: u64, set: &BTreeSet<u64>, k: usize) -> bool {
    (1..n).any(|d| set.iter().any(|&x| (1..k as u64).all(|i| set.contains(&((x + i * d) % n)))))
}

/// Same question for a set in a product group.
pub fn product_set_has_ap(factors: &[u64], set: &BTreeSet<Vec<u64>>, k: usize) -> bool {
    all_aps(factors, k).iter().any(|ap| ap.is_subset(set))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pair-driven AP search in `Z/n`: every k-AP with `k >= 2` is determined
/// by two distinct members, so this is complete and costs `|S|^2 k`.
pub fn cyclic_set_has_ap_sparse(n: u64, set: &BTreeSet<u64>, k: usize) -> bool {
    let mut member = vec![false; n as usize];
    for &x in set {
        member[x as usize] = true;
    }
    set.iter().any(|&x| {
        set.iter().any(|&y| {
            let d = (y + n - x) % n;
            d != 0 && (2..k as u64).all(|i| member[((x + i * d) % n) as usize])
        })
    })
}

/// Drops members until no k-AP is left, consuming `aps` from a precomputed list.
pub fn thin_to_free(aps: &BTreeSet<BTreeSet<Vec<u64>>>, mut set: BTreeSet<Vec<u64>>) -> BTreeSet<Vec<u64>> {
    for ap in aps {
        if ap.is_subset(&set) {
            let first = ap.iter().next().unwrap().clone();
            set.remove(&first);
        }
    }
    set
}

/// Small factor lists with order at most `max`.
pub fn small_groups(max: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = (1..=max).map(|n| vec![n]).collect();
    for a in 2..=max {
        for b in 2..=max / a {
            out.push(vec![a, b]);
        }
    }
    out
}

pub type FiberInstance = (Vec<u64>, Vec<u64>, usize, BTreeSet<Vec<u64>>, BTreeMap<Vec<u64>, BTreeSet<Vec<u64>>>);

/// Random fiber-union instance over groups of order at most 12 each:
/// factors of H1 and H2, k, a k-AP-free base and k-AP-free fibers.
pub fn fiber_instance(seed: u64) -> FiberInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = small_groups(12);
    let f1 = groups[rng.gen_range(0..groups.len())].clone();
    let f2 = groups[rng.gen_range(0..groups.len())].clone();
    let k = rng.gen_range(2..=5);
    let density: f64 = rng.gen_range(0.2..0.9);
    let aps1 = all_aps(&f1, k);
    let aps2 = all_aps(&f2, k);
    let base: BTreeSet<Vec<u64>> = tuples(&f1).into_iter().filter(|_| rng.gen_bool(density)).collect();
    let base = thin_to_free(&aps1, base);
    let mut fibers = BTreeMap::new();
    for x in &base {
        if rng.gen_bool(0.8) {
            let ys: BTreeSet<Vec<u64>> = tuples(&f2).into_iter().filter(|_| rng.gen_bool(density)).collect();
            fibers.insert(x.clone(), thin_to_free(&aps2, ys));
        }
    }
    (f1, f2, k, base, fibers)
}

/// Counts breaches of the two guarantees a blow-up keeps whatever its shifts:
/// classes `1..=main_colors` are k-AP-free, and no class holds a k-AP whose
/// difference lies in the second factor. `classes[c - 1]` holds color `c`.
pub fn structural_violations(classes: &[BTreeSet<Vec<u64>>], f1: &[u64], f2: &[u64], main_colors: u32, k: usize) -> usize {
    let factors = [f1, f2].concat();
    let mut bad = 0;
    for class in &classes[..main_colors as usize] {
        if product_set_has_ap(&factors, class, k) {
            bad += 1;
        }
    }
    let kernel_diffs: Vec<Vec<u64>> = tuples(f2).into_iter().filter(|d| d.iter().any(|&v| v != 0)).collect();
    for class in classes {
        for x in class {
            for d in &kernel_diffs {
                let inside = (1..k as u64).all(|i| {
                    let mut y = x.clone();
                    for (j, dj) in d.iter().enumerate() {
                        let pos = f1.len() + j;
                        y[pos] = (y[pos] + i * dj) % factors[pos];
                    }
                    class.contains(&y)
                });
                if inside {
                    bad += 1;
                }
            }
        }
    }
    bad
}
