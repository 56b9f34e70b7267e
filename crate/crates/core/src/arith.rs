//! Integer primitives: Kronecker symbol, deterministic primality,
//! factorization, fundamental discriminant tests.
//!
//! Everything operates on machine integers. The discriminants this crate
//! handles stay below 2.4e6 and their prime factors below that, so u64 with
//! u128 intermediates has headroom of many orders of magnitude. Exact big
//! rationals appear only in the curves module where j-invariant numerators
//! genuinely outgrow 64 bits.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::Serialize;

/// Kronecker symbol (a/n), full extension to all integer n.
///
/// Conventions: (a/0) = 1 iff a = +-1, else 0; (a/-1) = -1 iff a < 0;
/// (a/2) = 0, 1, -1 for a even, a = +-1 mod 8, a = +-3 mod 8.
/// Zero exactly when gcd(|a|, |n|) > 1.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let (a, n) = (a as i128, n as i128);
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut sign = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos % 2 == 1 {
        // a is odd here, the even-even case already returned
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => sign = -sign,
            _ => unreachable!("a even with n even was handled above"),
        }
    }
    // Jacobi core: n odd positive, a reduced into [0, n)
    let mut a = a.rem_euclid(n);
    let mut m = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    if m == 1 {
        sign
    } else {
        0
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Strong pseudoprime witnesses covering every u64 (Sorenson and Webster).
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &w in &MR_WITNESSES {
        let mut x = powmod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    pub value: u64,
    /// (prime, exponent) pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Reassemble the product; used by tests to confirm exactness.
    pub fn reassemble(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }

    pub fn check_invariants(&self) {
        assert_eq!(self.reassemble(), self.value, "factors do not multiply back");
        for w in self.factors.windows(2) {
            assert!(w[0].0 < w[1].0, "primes not strictly increasing");
        }
        for &(p, e) in &self.factors {
            assert!(is_prime(p), "listed factor {p} is not prime");
            assert!(e > 0);
        }
    }
}

// Brent's cycle variant of Pollard rho. Returns a nontrivial factor of n,
// which must be odd, composite, and not a prime power ruled out by callers.
fn rho_brent(n: u64, seed: u64) -> Option<u64> {
    let c = seed % (n - 1) + 1;
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let (mut x, mut y, mut q, mut g) = (2u64, 2u64, 1u64, 1u64);
    let (mut r, mut ys) = (1u64, 2u64);
    let m = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        // backtrack one step at a time
        g = 1;
        while g == 1 {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut seed = 1;
    let d = loop {
        if let Some(d) = rho_brent(n, seed) {
            break d;
        }
        seed += 1;
    };
    split(d, out);
    split(n / d, out);
}

/// Complete factorization of n >= 1. factorize(1) has an empty factor list.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut rest = n;
    let mut primes = Vec::new();
    for p in 2u64.. {
        if p * p > rest || p > 10_000 {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    split(rest, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some(last) if last.0 == p => last.1 += 1,
            _ => factors.push((p, 1)),
        }
    }
    FactoredInteger { value: n, factors }
}

/// Largest prime dividing n. Rejects n < 2.
pub fn largest_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("largest_prime_factor needs n >= 2, got {n}")));
    }
    Ok(factorize(n).factors.last().expect("n >= 2 has a prime factor").0)
}

/// Greatest prime p <= x. Rejects x < 2.
pub fn largest_prime_at_most(x: u64) -> Result<u64> {
    if x < 2 {
        return Err(Error::domain(format!("largest_prime_at_most needs x >= 2, got {x}")));
    }
    let mut p = x;
    loop {
        if is_prime(p) {
            return Ok(p);
        }
        p -= 1;
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    // float estimate, then fix up in both directions; checked_mul guards
    // the x^2 overflow near u64::MAX
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1);
    factorize(n).factors.iter().all(|&(_, e)| e == 1)
}

/// True iff d is the discriminant of the maximal order of an imaginary
/// quadratic field: d = 1 mod 4 squarefree, or d = 4m with m = 2 or 3 mod 4
/// squarefree. Rejects d >= 0.
pub fn is_fundamental_discriminant(d: i64) -> Result<bool> {
    if d >= 0 {
        return Err(Error::domain(format!("fundamental discriminant must be negative, got {d}")));
    }
    let ad = d.unsigned_abs();
    Ok(match d.rem_euclid(4) {
        1 => is_squarefree(ad),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    })
}
