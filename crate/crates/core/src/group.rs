//! Finite abelian groups presented as products of cyclic factors.
//!
//! Elements are dense residue tuples. The canonical enumeration is the
//! mixed-radix order with the first factor most significant, so the element
//! with coordinates `(c_0, .., c_{m-1})` has index
//! `((c_0 * N_1 + c_1) * N_2 + c_2) ...`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// A product `Z/N_1 x ... x Z/N_m`. Groups compare by factor sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    factors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    /// Shorthand for a residue of a cyclic group; not validated.
    pub fn cyclic(residue: u64) -> Self {
        Element(alloc::vec![residue])
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [single] = self.0.as_slice() {
            return write!(f, "{single}");
        }
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Smallest prime factor of `n`, `None` for `n <= 1`.
pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n <= 1 {
        return None;
    }
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return Some(p);
        }
        p += 2;
    }
    Some(n)
}

pub fn is_prime(n: u64) -> bool {
    smallest_prime_factor(n) == Some(n)
}

impl Group {
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Group { factors: alloc::vec![n] })
    }

    /// The one-element group `Z/1`.
    pub fn trivial() -> Self {
        Group { factors: alloc::vec![1] }
    }

    pub fn from_factors(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("a group needs at least one factor"));
        }
        if factors.contains(&0) {
            return Err(Error::ZeroModulus);
        }
        Ok(Group { factors })
    }

    /// Direct product; the factor sequences are concatenated.
    pub fn product(&self, other: &Group) -> Group {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Group { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().map(|&n| BigUint::from(n)).product()
    }

    /// The order as a machine word, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n))
    }

    /// Order checked against [`crate::ENUMERATION_LIMIT`].
    pub fn enumerable_order(&self) -> Result<usize> {
        match self.order_u64() {
            Some(n) if n <= crate::ENUMERATION_LIMIT => Ok(n as usize),
            _ => Err(Error::TooLarge { what: "group order" }),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|&n| n == 1)
    }

    /// Smallest order of a non-identity element; `None` stands for the
    /// infinite sentinel of the trivial group.
    pub fn min_order(&self) -> Option<u64> {
        self.factors.iter().filter_map(|&n| smallest_prime_factor(n)).min()
    }

    /// `min_order >= q`, treating the trivial group's sentinel as infinity.
    pub fn min_order_at_least(&self, q: u64) -> bool {
        self.min_order().is_none_or(|m| m >= q)
    }

    pub fn zero(&self) -> Element {
        Element(alloc::vec![0; self.factors.len()])
    }

    /// Validated element constructor.
    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        self.check_len(coords.len())?;
        for (index, (&value, &modulus)) in coords.iter().zip(&self.factors).enumerate() {
            if value >= modulus {
                return Err(Error::CoordinateOutOfRange { index, value, modulus });
            }
        }
        Ok(Element(coords))
    }

    /// Reduces arbitrary integers into the group.
    pub fn element_reduced(&self, coords: &[u64]) -> Result<Element> {
        self.check_len(coords.len())?;
        Ok(Element(coords.iter().zip(&self.factors).map(|(&c, &n)| c % n).collect()))
    }

    pub fn contains(&self, g: &Element) -> bool {
        g.0.len() == self.factors.len() && g.0.iter().zip(&self.factors).all(|(&c, &n)| c < n)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.factors.len() {
            return Err(Error::DimensionMismatch { expected: self.factors.len(), found });
        }
        Ok(())
    }

    fn check(&self, g: &Element) -> Result<()> {
        self.check_len(g.0.len())?;
        for (index, (&value, &modulus)) in g.0.iter().zip(&self.factors).enumerate() {
            if value >= modulus {
                return Err(Error::CoordinateOutOfRange { index, value, modulus });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| add_mod(x, y, n))
                .collect(),
        ))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element(a.0.iter().zip(&self.factors).map(|(&x, &n)| (n - x) % n).collect()))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `i * d`.
    pub fn scalar_mul(&self, i: u64, d: &Element) -> Result<Element> {
        self.check(d)?;
        Ok(Element(d.0.iter().zip(&self.factors).map(|(&x, &n)| mul_mod(i, x, n)).collect()))
    }

    /// Order of a single element: lcm over coordinates of `N_i / gcd(c_i, N_i)`.
    pub fn element_order(&self, g: &Element) -> Result<u64> {
        self.check(g)?;
        Ok(g.0
            .iter()
            .zip(&self.factors)
            .map(|(&c, &n)| n / c.gcd(&n))
            .fold(1u64, |acc, o| acc.lcm(&o)))
    }

    /// Sub-product over a contiguous block of factors.
    pub fn subgroup(&self, block: Range<usize>) -> Result<Group> {
        self.check_block(&block)?;
        Ok(Group { factors: self.factors[block].to_vec() })
    }

    /// Coordinate projection onto a contiguous block of factors.
    pub fn project(&self, g: &Element, block: Range<usize>) -> Result<Element> {
        self.check(g)?;
        self.check_block(&block)?;
        Ok(Element(g.0[block].to_vec()))
    }

    fn check_block(&self, block: &Range<usize>) -> Result<()> {
        if block.start >= block.end || block.end > self.factors.len() {
            return Err(Error::BlockOutOfRange {
                start: block.start,
                end: block.end,
                factors: self.factors.len(),
            });
        }
        Ok(())
    }

    /// Position of `g` in the canonical enumeration.
    pub fn index_of(&self, g: &Element) -> usize {
        debug_assert!(self.contains(g));
        g.0.iter().zip(&self.factors).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = alloc::vec![0u64; self.factors.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        Element(coords)
    }

    /// All elements in canonical order. Callers are expected to have checked
    /// [`Group::enumerable_order`].
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let n = self.order_u64().unwrap_or(0) as usize;
        (0..n).map(move |i| self.element_at(i))
    }

    pub fn crt(&self) -> Result<CrtMap> {
        CrtMap::new(self)
    }

    pub(crate) fn indexer(&self) -> Indexer {
        Indexer::new(&self.factors)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z/{n}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn add_mod(x: u64, y: u64, n: u64) -> u64 {
    ((x as u128 + y as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn mul_mod(x: u64, y: u64, n: u64) -> u64 {
    ((x as u128 * y as u128) % n as u128) as u64
}

/// Index-space arithmetic for enumerable groups.
#[derive(Debug, Clone)]
pub(crate) struct Indexer {
    radices: Vec<usize>,
    order: usize,
}

impl Indexer {
    fn new(factors: &[u64]) -> Self {
        let radices: Vec<usize> = factors.iter().map(|&n| n as usize).collect();
        let order = radices.iter().product();
        Indexer { radices, order }
    }

    pub(crate) fn order(&self) -> usize {
        self.order
    }

    pub(crate) fn add(&self, mut a: usize, mut b: usize) -> usize {
        if let [n] = self.radices.as_slice() {
            let s = a + b;
            return if s >= *n { s - n } else { s };
        }
        let mut out = 0usize;
        let mut scale = 1usize;
        for &n in self.radices.iter().rev() {
            let s = a % n + b % n;
            out += (if s >= n { s - n } else { s }) * scale;
            scale *= n;
            a /= n;
            b /= n;
        }
        out
    }
}

/// The CRT isomorphism between a product of pairwise coprime cyclic groups
/// and the cyclic group of the same order.
///
/// `to_cyclic(g) = sum_i c_i * e_i mod N` where `e_i` is 1 mod `N_i` and 0
/// mod every other factor. The idempotents are produced by folding the
/// two-factor isomorphism left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtMap {
    moduli: Vec<u64>,
    modulus: BigUint,
    idempotents: Vec<BigUint>,
    /// The same data when the modulus fits a `u64`.
    small: Option<(u64, Vec<u64>)>,
}

impl CrtMap {
    pub fn new(group: &Group) -> Result<Self> {
        let f = &group.factors;
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                if f[i].gcd(&f[j]) != 1 {
                    return Err(Error::NotCoprime { first: f[i], second: f[j] });
                }
            }
        }

        let mut modulus = BigUint::one();
        let mut idempotents: Vec<BigUint> = Vec::with_capacity(f.len());
        for &n in f {
            // u*M + v*n = 1; (a mod M, b mod n) -> a*v*n + b*u*M mod M*n
            let m_int = BigInt::from(modulus.clone());
            let n_int = BigInt::from(n);
            let eg = m_int.extended_gcd(&n_int);
            debug_assert!(eg.gcd.is_one());
            let next = &modulus * n;
            let next_int = BigInt::from(next.clone());
            let lift_old = reduce(&(eg.y * &n_int), &next_int);
            let lift_new = reduce(&(eg.x * &m_int), &next_int);
            for e in idempotents.iter_mut() {
                *e = (&*e * &lift_old) % &next;
            }
            idempotents.push(lift_new);
            modulus = next;
        }
        let small = modulus.to_u64().map(|m| (m, idempotents.iter().map(|e| e.to_u64().unwrap_or(0)).collect()));
        Ok(CrtMap { moduli: f.clone(), modulus, idempotents, small })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn to_cyclic(&self, g: &Element) -> Result<BigUint> {
        if g.0.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch { expected: self.moduli.len(), found: g.0.len() });
        }
        let sum: BigUint = g.0.iter().zip(&self.idempotents).map(|(&c, e)| e * c).sum();
        Ok(sum % &self.modulus)
    }

    pub fn to_cyclic_u64(&self, g: &Element) -> Result<u64> {
        let Some((m, idem)) = &self.small else {
            return Err(Error::TooLarge { what: "CRT residue" });
        };
        if g.0.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch { expected: self.moduli.len(), found: g.0.len() });
        }
        Ok(g.0.iter().zip(idem).fold(0, |acc, (&c, &e)| add_mod(acc, mul_mod(c % m, e, *m), *m)))
    }

    pub fn from_cyclic(&self, residue: &BigUint) -> Element {
        Element(
            self.moduli
                .iter()
                .map(|&n| (residue % n).to_u64().unwrap_or(0))
                .collect(),
        )
    }

    pub fn from_cyclic_u64(&self, residue: u64) -> Element {
        Element(self.moduli.iter().map(|&n| residue % n).collect())
    }
}

fn reduce(x: &BigInt, m: &BigInt) -> BigUint {
    let r = x.mod_floor(m);
    debug_assert!(!r.is_zero() || m.is_one() || x.is_zero());
    r.to_biguint().unwrap_or_default()
}
