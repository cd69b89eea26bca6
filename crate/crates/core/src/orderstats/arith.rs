//! Totient, divisors, factorization and multiplicative order.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        push(&mut n, p);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of a big integer. Small primes are stripped while
/// the value is big; the remainder must fit in a `u64`.
pub fn factorize_big(n: &BigUint) -> Vec<(u64, u32)> {
    let mut rest = n.clone();
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while rest.to_u64().is_none() {
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem(&BigUint::from(p));
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
        assert!(p < 1 << 32, "factorize_big: cofactor exceeds 64 bits");
    }
    let small = rest.to_u64().expect("fits");
    for (q, e) in factorize(small) {
        match out.iter_mut().find(|(r, _)| *r == q) {
            Some(entry) => entry.1 += e,
            None => out.push((q, e)),
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi(0) is undefined");
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors(0) is undefined");
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// All divisors of a big integer, ascending.
pub fn divisors_big(n: &BigUint) -> Vec<BigUint> {
    assert!(!n.is_zero(), "divisors(0) is undefined");
    let mut out = vec![BigUint::one()];
    for (p, e) in factorize_big(n) {
        let len = out.len();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                let d = &out[i] * &pk;
                out.push(d);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The largest divisor of `n` coprime to `t`.
pub fn coprime_part(n: &BigUint, t: &BigUint) -> BigUint {
    let mut n = n.clone();
    loop {
        let g = n.gcd(t);
        if g.is_one() || n.is_zero() {
            return n;
        }
        n /= g;
    }
}

/// Largest odd divisor.
pub fn odd_part(n: &BigUint) -> BigUint {
    match n.trailing_zeros() {
        Some(z) => n >> z,
        None => BigUint::zero(),
    }
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Least d ≥ 1 with base^d ≡ 1 (mod modulus), or `None` when
/// gcd(base, modulus) ≠ 1.
pub fn multiplicative_order(base: u64, modulus: u64) -> Option<u64> {
    if modulus == 0 || base.gcd(&modulus) != 1 {
        return None;
    }
    if modulus == 1 {
        return Some(1);
    }
    let mut ord = euler_phi(modulus);
    for (p, _) in factorize(ord) {
        while ord.is_multiple_of(p) && pow_mod(base, ord / p, modulus) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}
