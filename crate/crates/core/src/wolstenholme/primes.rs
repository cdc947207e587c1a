/// Witnesses that make Miller-Rabin deterministic for every `u64`.
const WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in `lo..=hi`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(n: usize) -> Vec<bool> {
        let mut s = vec![true; n + 1];
        s[0] = false;
        s[1] = false;
        for i in 2..=n {
            if i * i > n {
                break;
            }
            if s[i] {
                (i * i..=n).step_by(i).for_each(|j| s[j] = false);
            }
        }
        s
    }

    #[test]
    fn agrees_with_sieve() {
        let s = sieve(100_000);
        for (n, &p) in s.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "n={n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(2124679));
        assert!(is_prime(18446744073709551557));
        // strong pseudoprime to every prime base up to 23
        assert!(!is_prime(3825123056546413051));
        assert!(!is_prime(341550071728321));
        assert!(!is_prime(16843 * 2124679));
    }

    #[test]
    fn range() {
        assert_eq!(primes_between(10, 30), vec![11, 13, 17, 19, 23, 29]);
        assert!(primes_between(24, 28).is_empty());
    }
}
