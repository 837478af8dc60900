//! Prime factorization and divisor enumeration by trial division.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Set of primes, ordered. `Z[1/m]` is determined by the primes of `m`.
pub type PrimeSet = BTreeSet<BigInt>;

/// Prime factors of `|m|` with multiplicity. `0` and `±1` have none.
pub fn factorize(m: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = m.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn prime_set(m: &BigInt) -> PrimeSet {
    factorize(m).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors of `|m|`, ascending. Empty for zero.
pub fn divisors(m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    if m.is_zero() {
        return Vec::new();
    }
    for (p, e) in factorize(m) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut q = d.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Part of `m` coprime to every prime in `primes`.
pub fn strip_primes(m: &BigInt, primes: &PrimeSet) -> BigInt {
    let mut n = m.abs();
    for p in primes {
        while !n.is_zero() && n.is_multiple_of(p) {
            n /= p;
        }
    }
    n
}

pub fn render_prime_set(primes: &PrimeSet) -> String {
    primes.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
