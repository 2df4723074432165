//! Exact feasibility arithmetic for the blow-up construction.
//!
//! Every inequality is decided with big integers. The only floating point
//! is the first guess for the exponent `t = floor(k (1 - 2 eps) ln r / ln k)`,
//! which is then corrected by comparing `k^(t m)` against `r^n` where
//! `k (1 - 2 eps) = n / m`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Half-open prime window `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub lo: u64,
    pub hi: u64,
}

/// Largest exponent bit-size for which the exact exponent check is run.
const EXACT_BITS_LIMIT: f64 = 4.0e6;

fn check_epsilon(eps: Ratio<u64>) -> Result<()> {
    if eps.is_zero() || eps >= Ratio::new(1, 10) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1/10)"));
    }
    Ok(())
}

/// Sieve of Eratosthenes over `0..=limit`.
pub fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = alloc::vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Primes `p` with `(1 - eps) k < p <= k`, or in the override window.
/// Returned in ascending order.
pub fn primes_in_window(k: u64, eps: Ratio<u64>, window: Option<Window>) -> Result<Vec<u64>> {
    if k < 3 {
        return Err(Error::InvalidParameter("k must be at least 3"));
    }
    if let Some(w) = window {
        return Ok(sieve(w.hi).into_iter().filter(|&p| p > w.lo).collect());
    }
    check_epsilon(eps)?;
    let (num, den) = (*eps.numer() as u128, *eps.denom() as u128);
    // p > (1 - num/den) k  <=>  p * den > (den - num) * k
    Ok(sieve(k)
        .into_iter()
        .filter(|&p| p as u128 * den > (den - num) * k as u128)
        .collect())
}

/// Splits `r = a + 3b` with `a` in `{2, 3, 4}`.
pub fn decompose(r: u32) -> Result<(u32, u32)> {
    if r < 2 {
        return Err(Error::InvalidParameter("palette must have at least 2 colors"));
    }
    let a = 2 + (r - 2) % 3;
    Ok((a, (r - a) / 3))
}

/// `floor(k (1 - 2 eps) ln base / ln k)`.
pub fn exponent_t(k: u64, base: u64, eps: Ratio<u64>) -> Result<u32> {
    if k < 3 {
        return Err(Error::InvalidParameter("k must be at least 3"));
    }
    if base < 2 {
        return Err(Error::InvalidParameter("base must be at least 2"));
    }
    check_epsilon(eps)?;
    let scale = Ratio::new(*eps.denom() - 2 * *eps.numer(), *eps.denom()) * Ratio::from_integer(k);
    let (n, m) = (*scale.numer(), *scale.denom());
    let estimate = (n as f64 / m as f64) * libm::log(base as f64) / libm::log(k as f64);
    let mut t = libm::floor(estimate).max(0.0) as u64;

    let kb = libm::log2(k as f64);
    let bb = libm::log2(base as f64);
    if n as f64 * bb > EXACT_BITS_LIMIT || (t + 1) as f64 * m as f64 * kb > EXACT_BITS_LIMIT {
        return Ok(t as u32);
    }
    // t <= n/m * ln b / ln k  <=>  k^(t m) <= b^n
    let rhs = BigUint::from(base).pow(n as u32);
    let fits = |t: u64| BigUint::from(k).pow((t * m) as u32) <= rhs;
    while fits(t + 1) {
        t += 1;
    }
    while t > 0 && !fits(t) {
        t -= 1;
    }
    Ok(t as u32)
}

/// `1 - (1 - 1/p)^t = (p^t - (p-1)^t) / p^t`, in lowest terms.
pub fn delta_exact(p: u64, t: u32) -> Result<Ratio<BigUint>> {
    if p < 2 {
        return Err(Error::InvalidParameter("p must be at least 2"));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1"));
    }
    let pt = BigUint::from(p).pow(t);
    let qt = BigUint::from(p - 1).pow(t);
    Ok(Ratio::new(&pt - qt, pt))
}

/// Content hashes of the two factor colorings whose verification backs
/// condition (1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaEvidence {
    pub h1: [u8; 32],
    pub h2: [u8; 32],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthInputs {
    pub p: u64,
    pub t: u32,
    pub q: u64,
    pub k: u64,
    /// `|G| = |H1| * p^t`.
    pub group_order: BigUint,
    /// Actual minimum order of `H1`; `None` is the trivial group's infinity.
    pub h1_min_order: Option<u64>,
    /// Palette of the coloring of `H2`; enables the Gcol check on `H2`.
    pub h2_palette: Option<u32>,
    pub evidence: Option<KappaEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub k: u64,
    pub r: Option<u32>,
    pub epsilon: Option<Ratio<u64>>,
    pub p: u64,
    pub t: u32,
    pub q: u64,
    pub group_order: BigUint,
    pub delta: Ratio<BigUint>,
    /// Both factor colorings were verifier-passed.
    pub cond1: bool,
    /// `min_order(H1) >= Q`.
    pub cond2: bool,
    /// `delta^-min(Q,k) >= |G|^2`.
    pub cond3: bool,
    pub gcol_ok: Option<bool>,
    /// `(p^t)^m - |G|^2 (p^t - (p-1)^t)^m`.
    pub cond3_margin: BigInt,
    pub gcol_margin: Option<BigInt>,
    pub evidence: Option<KappaEvidence>,
}

impl FeasibilityReport {
    pub fn passes(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = alloc::vec![("k", format!("{}", self.k))];
        if let Some(r) = self.r {
            out.push(("r", format!("{r}")));
        }
        if let Some(e) = self.epsilon {
            out.push(("eps", format!("{e}")));
        }
        out.extend([
            ("p", format!("{}", self.p)),
            ("t", format!("{}", self.t)),
            ("Q", format!("{}", self.q)),
            ("order", format!("{}", self.group_order)),
            ("delta", format!("{}", self.delta)),
            ("cond1", format!("{}", self.cond1)),
            ("cond2", format!("{}", self.cond2)),
            ("cond3", format!("{}", self.cond3)),
            ("cond3_margin", format!("{}", self.cond3_margin)),
        ]);
        if let Some(g) = self.gcol_ok {
            out.push(("gcol", format!("{g}")));
        }
        if let Some(m) = &self.gcol_margin {
            out.push(("gcol_margin", format!("{m}")));
        }
        if let Some(ev) = &self.evidence {
            out.push(("h1_sha256", hex(&ev.h1)));
            out.push(("h2_sha256", hex(&ev.h2)));
        }
        out
    }

    /// One `key: value` per line.
    pub fn to_kv_block(&self) -> String {
        let mut s = String::new();
        for (key, value) in self.pairs() {
            let _ = writeln!(s, "{key}: {value}");
        }
        s
    }

    /// Space-separated `key=value` pairs on a single line.
    pub fn to_kv_line(&self) -> String {
        let parts: Vec<String> = self.pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.join(" ")
    }
}

pub fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Evaluates the three hypotheses for combining `H1` with `H2 = Z/p^t`.
///
/// Condition (3) is decided as `(p^t)^m >= |G|^2 (p^t - (p-1)^t)^m`,
/// `m = min(Q, k)`, which is `delta^-m >= |G|^2` cleared of denominators.
pub fn check_synth(inputs: &SynthInputs) -> Result<FeasibilityReport> {
    let SynthInputs { p, t, q, k, .. } = *inputs;
    if q == 0 || k == 0 {
        return Err(Error::InvalidParameter("Q and k must be positive"));
    }
    let delta = delta_exact(p, t)?;
    let m = q.min(k);
    let m32 = u32::try_from(m).map_err(|_| Error::TooLarge { what: "exponent min(Q, k)" })?;
    let pt = BigUint::from(p).pow(t);
    let heavy = &pt - BigUint::from(p - 1).pow(t);
    let lhs = BigInt::from(Pow::pow(&pt, m32));
    let rhs = BigInt::from(&inputs.group_order * &inputs.group_order * Pow::pow(&heavy, m32));
    let cond3_margin = lhs - rhs;

    let (gcol_ok, gcol_margin) = match inputs.h2_palette {
        Some(r) if r >= 1 => {
            let v = check_gcol(&pt, r, k, Some(p));
            (Some(v.ok), Some(v.margin))
        }
        _ => (None, None),
    };

    Ok(FeasibilityReport {
        k,
        r: None,
        epsilon: None,
        p,
        t,
        q,
        group_order: inputs.group_order.clone(),
        delta,
        cond1: inputs.evidence.is_some(),
        cond2: inputs.h1_min_order.is_none_or(|o| o >= q),
        cond3: !cond3_margin.is_negative(),
        gcol_ok,
        cond3_margin,
        gcol_margin,
        evidence: inputs.evidence.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcolVerdict {
    pub ok: bool,
    /// `min_order >= k`.
    pub order_ok: bool,
    /// `4 k^2 |G| <= r^(k-1)`.
    pub size_ok: bool,
    /// `r^(k-1) - 4 k^2 |G|`.
    pub margin: BigInt,
}

/// Hypothesis of the hypergraph-coloring corollary:
/// `min_order >= k` and `|G| <= r^(k-1) / 4k^2`.
/// The trivial group always passes: it has no non-trivial progressions.
pub fn check_gcol(order: &BigUint, r: u32, k: u64, min_order: Option<u64>) -> GcolVerdict {
    let k_big = BigUint::from(k);
    let bound = Pow::pow(BigUint::from(r), BigUint::from(k.saturating_sub(1)));
    let need = BigUint::from(4u32) * &k_big * &k_big * order;
    let size_ok = need <= bound;
    let order_ok = min_order.is_none_or(|o| o >= k);
    GcolVerdict {
        ok: order.is_one() || (size_ok && order_ok),
        order_ok,
        size_ok,
        margin: BigInt::from(bound) - BigInt::from(need),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub k: u64,
    /// `r^(k-1) / 4k`.
    pub erdos_lovasz: Ratio<BigUint>,
    /// `(a 3^b)^k`.
    pub blowup: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    pub r: u32,
    pub a: u32,
    pub b: u32,
    /// `a 3^b`.
    pub base: BigUint,
    /// `a 3^b > r`.
    pub improves: bool,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn summary(&self) -> String {
        let verdict = if self.improves {
            format!("beats {}", self.r)
        } else {
            format!("no gain over {}", self.r)
        };
        format!("a={} b={} base={} ({verdict})", self.a, self.b, self.base)
    }
}

pub fn bound_table(r: u32, ks: RangeInclusive<u64>) -> Result<BoundTable> {
    let (a, b) = decompose(r)?;
    let base = BigUint::from(a) * Pow::pow(BigUint::from(3u32), b);
    let improves = base > BigUint::from(r);
    let rows = ks
        .filter(|&k| k >= 1)
        .map(|k| BoundRow {
            k,
            erdos_lovasz: Ratio::new(
                Pow::pow(BigUint::from(r), BigUint::from(k - 1)),
                BigUint::from(4 * k),
            ),
            blowup: Pow::pow(&base, BigUint::from(k)),
        })
        .collect();
    Ok(BoundTable { r, a, b, base, improves, rows })
}

/// `ln` of a positive big integer, accurate to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Guard band below which float and exact verdicts are not compared.
pub const FLOAT_GUARD: f64 = 1e-9;

/// Float evaluation of condition (3): `m * -ln(delta) - 2 ln|G|`.
pub fn cond3_float_slack(p: u64, t: u32, m: u64, group_order: &BigUint) -> f64 {
    let delta = -libm::expm1(t as f64 * libm::log1p(-1.0 / p as f64));
    m as f64 * -libm::log(delta) - 2.0 * ln_big(group_order)
}
