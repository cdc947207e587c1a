//! Residues of `C(2p - 1, p - 1)` and of the harmonic sum `H_{p-1}` modulo
//! powers of `p`, and the classification of primes built on them.

mod modarith;
mod primes;
pub mod scan;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

pub use primes::{is_prime, primes_between};
pub use scan::{scan_range, ScanConfig, ScanOutcome};

use crate::partitions::binomial_big;
use crate::{Error, Result};
use modarith::{Mod64, ModRing, Mont128};

/// Largest exponent handled by the fixed-width paths.
pub const MAX_EXPONENT: u32 = 4;

fn modulus(p: u64, e: u32) -> Result<u128> {
    if e == 0 || e > MAX_EXPONENT {
        return Err(Error::InvalidArgument(format!("exponent {e} outside 1..=4")));
    }
    (p as u128)
        .checked_pow(e)
        .filter(|&m| m < 1 << 127)
        .ok_or(Error::ModulusTooLarge { p, e })
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `prod_{i=1}^{p-1} (p + i) / i` in `ring`.
fn central_binom_in<R: ModRing>(ring: &R, p: u64) -> u128 {
    let mut num = ring.one();
    let mut den = ring.one();
    for i in 1..p {
        num = ring.mul(num, ring.lift_u64(p + i));
        den = ring.mul(den, ring.lift_u64(i));
    }
    let inv = ring.inv(den).expect("(p-1)! is a unit modulo p^e");
    ring.to_u128(ring.mul(num, inv))
}

/// `sum_{i=1}^{p-1} i^-1` in `ring`, with a single inversion.
fn harmonic_in<R: ModRing>(ring: &R, p: u64) -> u128 {
    let n = (p - 1) as usize;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(ring.one());
    for i in 1..=n {
        prefix.push(ring.mul(prefix[i - 1], ring.lift_u64(i as u64)));
    }
    // inv_prefix = (i!)^-1, walked downwards
    let mut inv_prefix = ring.inv(prefix[n]).expect("(p-1)! is a unit modulo p^e");
    let mut sum = ring.zero();
    for i in (1..=n).rev() {
        sum = ring.add(sum, ring.mul(inv_prefix, prefix[i - 1]));
        inv_prefix = ring.mul(inv_prefix, ring.lift_u64(i as u64));
    }
    ring.to_u128(sum)
}

fn with_ring<T>(m: u128, small: impl FnOnce(&Mod64) -> T, wide: impl FnOnce(&Mont128) -> T) -> T {
    if m < 1 << 63 {
        small(&Mod64::new(m as u64))
    } else {
        wide(&Mont128::new(m))
    }
}

/// `C(2p - 1, p - 1) mod p^e`.
pub fn central_binom_mod(p: u64, e: u32) -> Result<u128> {
    require_prime(p)?;
    let m = modulus(p, e)?;
    Ok(with_ring(m, |r| central_binom_in(r, p), |r| central_binom_in(r, p)))
}

/// `H_{p-1} mod p^e`, the residue of the numerator times a unit.
pub fn harmonic_mod(p: u64, e: u32) -> Result<u128> {
    require_prime(p)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    let m = modulus(p, e)?;
    Ok(with_ring(m, |r| harmonic_in(r, p), |r| harmonic_in(r, p)))
}

/// `(p - 1 + C(2p - 1, p - 1)) / p`, exactly.
pub fn n_theta_via_identity(p: u64) -> Result<BigInt> {
    require_prime(p)?;
    let sum = BigInt::from(p - 1) + binomial_big(2 * p - 1, p - 1);
    let (q, r) = sum.div_rem(&BigInt::from(p));
    if !r.is_zero() {
        return Err(Error::Internal(format!("identity for p={p} is not integral")));
    }
    Ok(q)
}

fn decimal<S: Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn decimal_opt<S: Serializer>(v: &Option<u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    #[serde(serialize_with = "decimal")]
    pub residue_p2: u128,
    #[serde(serialize_with = "decimal")]
    pub residue_p3: u128,
    #[serde(serialize_with = "decimal")]
    pub residue_p4: u128,
    /// `(p - 1 + C(2p - 1, p - 1)) / p mod p^3`.
    #[serde(serialize_with = "decimal")]
    pub n_theta_residue_p3: u128,
    /// `H_{p-1} mod p^3`; only for `p >= 5`, and during scans only for
    /// candidates and sampled primes.
    #[serde(serialize_with = "decimal_opt")]
    pub harmonic_residue_p3: Option<u128>,
    pub is_wolstenholme_prime: bool,
    pub satisfies_wolstenholme_theorem: bool,
    pub note: Option<String>,
}

impl PrimeReport {
    /// Whether the binomial and harmonic criteria agree, when both are known.
    pub fn criteria_agree(&self) -> Option<bool> {
        self.harmonic_residue_p3.map(|h| (h == 0) == self.is_wolstenholme_prime)
    }
}

pub fn classify_prime(p: u64) -> Result<PrimeReport> {
    classify_prime_with(p, true)
}

pub(crate) fn classify_prime_with(p: u64, harmonic: bool) -> Result<PrimeReport> {
    let r4 = central_binom_mod(p, 4)?;
    let pp = p as u128;
    let p3 = pp * pp * pp;
    let n_theta = r4.div_ceil(pp) % p3;
    debug_assert_eq!((pp - 1 + r4) % pp, 0);
    let note = match p {
        2 | 3 => Some(format!(
            "N(Theta(C_{p})) = {n_theta}; the congruences are stated for p >= 5 only"
        )),
        _ => None,
    };
    let harmonic_residue_p3 = if harmonic && p >= 5 {
        Some(harmonic_mod(p, 3)?)
    } else {
        None
    };
    Ok(PrimeReport {
        p,
        residue_p2: r4 % (pp * pp),
        residue_p3: r4 % p3,
        residue_p4: r4,
        n_theta_residue_p3: n_theta,
        harmonic_residue_p3,
        is_wolstenholme_prime: r4 == 1,
        satisfies_wolstenholme_theorem: r4 % p3 == 1,
        note,
    })
}
