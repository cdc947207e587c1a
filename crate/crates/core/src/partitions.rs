//! Restricted partitions: nondecreasing sequences `1 <= l_1 <= ... <= l_{kn} <= n`
//! whose sum is divisible by `n`.
//!
//! [`card_lambda`] uses the divisor sum
//! `(1/n) sum_{d | n} C(dk + d - 1, d - 1) phi(n / d)`;
//! [`enumerate_lambda`] counts sequences directly and serves as its oracle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `k * n` accepted by [`enumerate_lambda`].
pub const ENUMERATION_LIMIT: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Formula,
    Enumeration,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Formula => "formula",
            CountMethod::Enumeration => "enumeration",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCount {
    pub n: u64,
    pub k: u64,
    #[serde(with = "decimal")]
    pub value: BigInt,
    pub method: CountMethod,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("totient of 0".into()));
    }
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

/// `C(a, b)`, zero when `b > a`.
pub fn binomial_big(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "n and k must be positive (n={n}, k={k})"
        )));
    }
    Ok(())
}

/// `sum_{d | n} C(dk + d - 1, d - 1) phi(n / d)`, before division by `n`.
pub fn divisor_sum(n: u64, k: u64) -> Result<BigInt> {
    check_nk(n, k)?;
    let mut total = BigInt::zero();
    for d in divisors(n) {
        total += binomial_big(d * k + d - 1, d - 1) * euler_phi(n / d)?;
    }
    Ok(total)
}

pub fn card_lambda(n: u64, k: u64) -> Result<PartitionCount> {
    let sum = divisor_sum(n, k)?;
    let (value, rem) = sum.div_rem(&BigInt::from(n));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "divisor sum for n={n}, k={k} is not divisible by n"
        )));
    }
    Ok(PartitionCount {
        n,
        k,
        value,
        method: CountMethod::Formula,
    })
}

/// Counts the sequences one by one. Requires `k * n <= 30`.
pub fn enumerate_lambda(n: u64, k: u64) -> Result<PartitionCount> {
    check_nk(n, k)?;
    if k * n > ENUMERATION_LIMIT {
        return Err(Error::Guardrail(k * n));
    }
    fn walk(remaining: u64, last: u64, residue: u64, n: u64) -> u64 {
        if remaining == 0 {
            return u64::from(residue == 0);
        }
        if remaining == 1 {
            // the final entry is forced modulo n
            let need = (n - residue) % n;
            let v = if need == 0 { n } else { need };
            return u64::from(v >= last);
        }
        (last..=n).map(|v| walk(remaining - 1, v, (residue + v) % n, n)).sum()
    }
    Ok(PartitionCount {
        n,
        k,
        value: BigInt::from(walk(k * n, 1, 0, n)),
        method: CountMethod::Enumeration,
    })
}

/// Checks of the congruence `|Lambda_{p^l}^k| = 1 (mod p^2)` and of the
/// telescoping decomposition behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePowerReport {
    pub p: u64,
    pub l: u32,
    pub k: u64,
    #[serde(with = "decimal")]
    pub value: BigInt,
    #[serde(with = "decimal")]
    pub residue_p2: BigInt,
    #[serde(with = "decimal")]
    pub residue_p3: BigInt,
    /// `p^l |Lambda| - p^l` equals the weighted sum of binomial differences.
    pub telescoping_holds: bool,
    /// Whether the `i`-th difference is divisible by `p^(3i)`, for `i = 1..=l`.
    pub differences_divisible: Vec<bool>,
}

impl PrimePowerReport {
    pub fn congruence_holds(&self) -> bool {
        self.residue_p2.is_one()
    }

    pub fn all_hold(&self) -> bool {
        self.congruence_holds() && self.telescoping_holds && self.differences_divisible.iter().all(|&b| b)
    }
}

/// `C(k'm - 1, m - 1)` with `k' = k + 1`; equal to `C(mk + m - 1, m - 1)`.
pub fn shifted_binomial(k: u64, m: u64) -> BigInt {
    binomial_big((k + 1) * m - 1, m - 1)
}

pub fn prime_power_congruence_report(p: u64, l: u32, k: u64) -> Result<PrimePowerReport> {
    if !crate::wolstenholme::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if l == 0 || k == 0 {
        return Err(Error::InvalidArgument("l and k must be positive".into()));
    }
    let n = p
        .checked_pow(l)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{l} overflows")))?;
    let value = card_lambda(n, k)?.value;
    let pb = BigInt::from(p);
    let p2 = &pb * &pb;
    let p3 = &p2 * &pb;
    let pl = num_traits::pow(pb.clone(), l as usize);

    let mut rhs = BigInt::zero();
    let mut differences_divisible = Vec::with_capacity(l as usize);
    for i in 1..=l {
        let hi = p.pow(i);
        let lo = p.pow(i - 1);
        let diff = shifted_binomial(k, hi) - shifted_binomial(k, lo);
        let p3i = num_traits::pow(pb.clone(), 3 * i as usize);
        differences_divisible.push(diff.is_multiple_of(&p3i));
        rhs += diff * num_traits::pow(pb.clone(), (l - i) as usize);
    }
    let lhs = &pl * &value - &pl;
    Ok(PrimePowerReport {
        p,
        l,
        k,
        residue_p2: value.mod_floor(&p2),
        residue_p3: value.mod_floor(&p3),
        value,
        telescoping_holds: lhs == rhs,
        differences_divisible,
    })
}
