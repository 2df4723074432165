//! Arithmetic progressions in finite abelian groups and the monochromatic
//! progression verifier.
//!
//! A k-AP is the *set* `{x + i*d : 0 <= i < k}`; it is non-trivial when it
//! admits a difference `d != 0`. Sets with `ord(d) < k` collapse to fewer
//! than `k` distinct elements and still count.
//!
//! Two verifiers are provided. [`VerifyMode::Naive`] loops over
//! `(color, d, x)` with `d` over every non-zero element and serves as the
//! reference. [`VerifyMode::Fast`] packs each color class of a cyclic group
//! into a bit mask and, for each `d <= N/2`, intersects the rotations of the
//! mask by `0, d, 2d, .., (k-1)d`, stopping as soon as the intersection is
//! empty. Both report the lowest `(color, d, x)` witness in canonical order,
//! so on cyclic groups they agree exactly. Restricting to `d <= N/2` is
//! sound because the set with difference `d` starting at `x` equals the
//! set with difference `-d` starting at `x + (k-1)d`.

use alloc::vec::Vec;
use core::fmt;

use sha2::{Digest, Sha256};

use crate::group::{Element, Group, Indexer};
use crate::{Error, Result};

/// Total assignment of colors `1..=palette` to the elements of a group,
/// stored in canonical element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    group: Group,
    palette: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(group: Group, palette: u32, colors: Vec<u32>) -> Result<Self> {
        if palette == 0 {
            return Err(Error::InvalidParameter("palette must have at least one color"));
        }
        let n = group.enumerable_order()?;
        if colors.len() != n {
            return Err(Error::ColorCountMismatch { expected: n, found: colors.len() });
        }
        if let Some(&color) = colors.iter().find(|&&c| c == 0 || c > palette) {
            return Err(Error::ColorOutOfRange { color, palette });
        }
        Ok(Coloring { group, palette, colors })
    }

    /// Colors element `i` (canonical index) with `f(i)`.
    pub fn from_fn(group: Group, palette: u32, f: impl FnMut(usize) -> u32) -> Result<Self> {
        let n = group.enumerable_order()?;
        let colors = (0..n).map(f).collect();
        Coloring::new(group, palette, colors)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color_at(&self, index: usize) -> u32 {
        self.colors[index]
    }

    pub fn color_of(&self, g: &Element) -> Result<u32> {
        if !self.group.contains(g) {
            return Err(Error::DimensionMismatch {
                expected: self.group.factors().len(),
                found: g.coords().len(),
            });
        }
        Ok(self.colors[self.group.index_of(g)])
    }

    pub fn class_indices(&self, color: u32) -> Vec<usize> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == color)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn class_elements(&self, color: u32) -> Vec<Element> {
        self.class_indices(color).into_iter().map(|i| self.group.element_at(i)).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0usize; self.palette as usize];
        for &c in &self.colors {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    /// Transports the coloring along the CRT isomorphism onto `Z/N`.
    /// Requires pairwise coprime factors; cyclic colorings come back unchanged.
    pub fn flatten_crt(&self) -> Result<Coloring> {
        if self.group.is_cyclic() {
            return Ok(self.clone());
        }
        let crt = self.group.crt()?;
        let n = self.group.enumerable_order()?;
        let colors = (0..n as u64)
            .map(|r| self.colors[self.group.index_of(&crt.from_cyclic_u64(r))])
            .collect();
        Coloring::new(Group::cyclic(n as u64)?, self.palette, colors)
    }

    /// SHA-256 over the factor sequence, palette and color array.
    pub fn content_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for &n in self.group.factors() {
            h.update(n.to_le_bytes());
        }
        h.update(self.palette.to_le_bytes());
        for &c in &self.colors {
            h.update(c.to_le_bytes());
        }
        h.finalize().into()
    }
}

/// A concrete non-trivial k-AP contained in a set or color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApWitness {
    pub start: Element,
    pub diff: Element,
    pub k: usize,
    /// Absent when the witness is for a plain set.
    pub color: Option<u32>,
    /// Distinct members in canonical order.
    pub elements: Vec<Element>,
}

impl fmt::Display for ApWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-AP start={} diff={}", self.k, self.start, self.diff)?;
        if let Some(c) = self.color {
            write!(f, " color={c}")?;
        }
        f.write_str(" elements={")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// The terms of `x, x+d, .., x+(k-1)d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progression {
    pub sequence: Vec<Element>,
    /// Distinct values in canonical order.
    pub distinct: Vec<Element>,
}

pub fn make_ap(group: &Group, x: &Element, d: &Element, k: usize) -> Result<Progression> {
    if k == 0 {
        return Err(Error::InvalidParameter("progression length must be at least 1"));
    }
    let mut sequence = Vec::with_capacity(k);
    let mut cur = group.add(x, &group.zero())?;
    for _ in 0..k {
        let next = group.add(&cur, d)?;
        sequence.push(cur);
        cur = next;
    }
    let mut distinct = sequence.clone();
    distinct.sort_by_key(|e| group.index_of(e));
    distinct.dedup();
    Ok(Progression { sequence, distinct })
}

fn witness_from_indices(group: &Group, x: usize, d: usize, k: usize, color: Option<u32>) -> ApWitness {
    let start = group.element_at(x);
    let diff = group.element_at(d);
    let elements = make_ap(group, &start, &diff, k)
        .map(|p| p.distinct)
        .unwrap_or_default();
    ApWitness { start, diff, k, color, elements }
}

/// Lowest `(d, x)` with `x + i*d` in the mask for all `i < k`, `d != 0`.
fn first_ap_in_mask(ix: &Indexer, mask: &[bool], k: usize) -> Option<(usize, usize)> {
    let n = ix.order();
    for d in 1..n {
        'start: for x in 0..n {
            if !mask[x] {
                continue;
            }
            let mut cur = x;
            for _ in 1..k {
                cur = ix.add(cur, d);
                if !mask[cur] {
                    continue 'start;
                }
            }
            return Some((d, x));
        }
    }
    None
}

fn membership(group: &Group, set: &[Element]) -> Result<Vec<bool>> {
    let n = group.enumerable_order()?;
    let mut mask = alloc::vec![false; n];
    for e in set {
        if !group.contains(e) {
            return Err(Error::DimensionMismatch {
                expected: group.factors().len(),
                found: e.coords().len(),
            });
        }
        mask[group.index_of(e)] = true;
    }
    Ok(mask)
}

/// Reference search for a non-trivial k-AP inside `set`: a plain double loop
/// over `(d, x)`. Returns the lowest witness, or `None` when the set is
/// k-AP-free. Lengths `k < 2` never produce a non-trivial AP.
pub fn find_ap_in_set(group: &Group, set: &[Element], k: usize) -> Result<Option<ApWitness>> {
    let mask = membership(group, set)?;
    if k < 2 {
        return Ok(None);
    }
    Ok(first_ap_in_mask(&group.indexer(), &mask, k)
        .map(|(d, x)| witness_from_indices(group, x, d, k, None)))
}

pub fn is_k_ap_free(group: &Group, set: &[Element], k: usize) -> Result<bool> {
    Ok(find_ap_in_set(group, set, k)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyMode {
    Naive,
    /// Packed-mask kernel. Non-cyclic groups with pairwise coprime factors
    /// are verified through the CRT flattening; any other group falls back
    /// to the naive loop.
    #[default]
    Fast,
}

/// Searches every color class for a non-trivial k-AP.
pub fn find_mono_ap(coloring: &Coloring, k: usize, mode: VerifyMode) -> Option<ApWitness> {
    if k < 2 {
        return None;
    }
    let group = coloring.group();
    match mode {
        VerifyMode::Naive => naive_mono_ap(coloring, k),
        VerifyMode::Fast if group.is_cyclic() => {
            let kernel = FastKernel::new(coloring).expect("cyclic");
            kernel.first_witness(k).map(|(color, d, x)| witness_from_indices(group, x, d, k, Some(color)))
        }
        VerifyMode::Fast => {
            let (Ok(crt), Ok(flat)) = (group.crt(), coloring.flatten_crt()) else {
                return naive_mono_ap(coloring, k);
            };
            let kernel = FastKernel::new(&flat).expect("cyclic");
            kernel.first_witness(k).map(|(color, d, x)| {
                let start = crt.from_cyclic_u64(x as u64);
                let diff = crt.from_cyclic_u64(d as u64);
                let elements = make_ap(group, &start, &diff, k).map(|p| p.distinct).unwrap_or_default();
                ApWitness { start, diff, k, color: Some(color), elements }
            })
        }
    }
}

fn naive_mono_ap(coloring: &Coloring, k: usize) -> Option<ApWitness> {
    let ix = coloring.group().indexer();
    let mut mask = alloc::vec![false; coloring.colors.len()];
    for color in 1..=coloring.palette {
        for (m, &c) in mask.iter_mut().zip(&coloring.colors) {
            *m = c == color;
        }
        if let Some((d, x)) = first_ap_in_mask(&ix, &mask, k) {
            return Some(witness_from_indices(coloring.group(), x, d, k, Some(color)));
        }
    }
    None
}

/// Word-packed color classes of a coloring of `Z/N`.
///
/// Each class is stored twice over (`2N` bits) so that any cyclic rotation
/// can be read off as a shifted window without wraparound handling.
#[derive(Debug, Clone)]
pub struct FastKernel {
    n: usize,
    words: usize,
    doubled: Vec<Vec<u64>>,
    sizes: Vec<usize>,
}

impl FastKernel {
    /// `None` unless the coloring is of a cyclic group.
    pub fn new(coloring: &Coloring) -> Option<Self> {
        if !coloring.group().is_cyclic() {
            return None;
        }
        let n = coloring.colors.len();
        let words = n.div_ceil(64);
        let doubled_words = (2 * n).div_ceil(64) + 2;
        let mut doubled = alloc::vec![alloc::vec![0u64; doubled_words]; coloring.palette as usize];
        for (i, &c) in coloring.colors.iter().enumerate() {
            let class = &mut doubled[c as usize - 1];
            class[i / 64] |= 1 << (i % 64);
            let j = i + n;
            class[j / 64] |= 1 << (j % 64);
        }
        Some(FastKernel { n, words, doubled, sizes: coloring.class_sizes() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn palette(&self) -> u32 {
        self.doubled.len() as u32
    }

    /// Largest difference that has to be examined.
    pub fn max_difference(&self) -> usize {
        self.n / 2
    }

    pub fn scratch(&self) -> Vec<u64> {
        alloc::vec![0u64; self.words]
    }

    #[inline]
    fn window(class: &[u64], shift: usize, w: usize) -> u64 {
        let q = shift / 64 + w;
        let b = shift % 64;
        if b == 0 {
            class[q]
        } else {
            (class[q] >> b) | (class[q + 1] << (64 - b))
        }
    }

    /// Lowest `x` such that `x + i*d` has `color` for every `i < k`.
    pub fn first_start(&self, color: u32, d: usize, k: usize, acc: &mut [u64]) -> Option<usize> {
        let class = &self.doubled[color as usize - 1];
        if self.sizes[color as usize - 1] < 2 {
            return None;
        }
        acc.copy_from_slice(&class[..self.words]);
        let tail = self.n % 64;
        if tail != 0 {
            acc[self.words - 1] &= (1u64 << tail) - 1;
        }
        let step = d % self.n;
        let mut shift = 0usize;
        for _ in 1..k {
            shift += step;
            if shift >= self.n {
                shift -= self.n;
            }
            let mut any = 0u64;
            for (w, a) in acc.iter_mut().enumerate() {
                *a &= Self::window(class, shift, w);
                any |= *a;
            }
            if any == 0 {
                return None;
            }
        }
        acc.iter()
            .enumerate()
            .find(|(_, &a)| a != 0)
            .map(|(w, &a)| w * 64 + a.trailing_zeros() as usize)
    }

    /// Lowest `(color, d, x)` witness, or `None` if every class is free.
    pub fn first_witness(&self, k: usize) -> Option<(u32, usize, usize)> {
        if k < 2 {
            return None;
        }
        let mut acc = self.scratch();
        for color in 1..=self.palette() {
            for d in 1..=self.max_difference() {
                if let Some(x) = self.first_start(color, d, k, &mut acc) {
                    return Some((color, d, x));
                }
            }
        }
        None
    }
}
