//! The modular j-function as a q-expansion: exact integer coefficients and
//! a fixed-point evaluator precise enough to round singular values to the
//! nearest integer with provable margin.
//!
//! Coefficients come from j = E4^3 / Delta with E4 = 1 + 240 sum sigma3(n)
//! q^n and Delta/q = prod (1 - q^n)^24, all as truncated integer power
//! series. Evaluation represents reals as BigInt multiples of 2^-SCALE;
//! at SCALE = 448 the accumulated rounding error stays below 2^-380 while
//! the largest intermediate (e^{pi sqrt 163} = 2^58) needs accuracy 2^-2
//! only, so the margin is enormous.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fixed-point fractional bits used by the evaluator.
pub const SCALE: u32 = 448;

// extra bits carried inside the constant computations so their own
// truncation never reaches the published scale
const GUARD: u32 = 64;

/// Coefficients of q*j(q) = 1 + 744 q + 196884 q^2 + ..., `terms` of them.
pub fn jq_series(terms: usize) -> Vec<BigInt> {
    assert!(terms >= 1);
    let n = terms;
    // E4
    let mut e4 = vec![BigInt::one()];
    e4.extend((1..n).map(|k| BigInt::from(240u64 * sigma(3, k as u64))));
    // eta-style product prod (1 - q^k), truncated
    let mut p = vec![BigInt::zero(); n];
    p[0] = BigInt::one();
    for k in 1..n {
        for i in (k..n).rev() {
            let sub = p[i - k].clone();
            p[i] -= sub;
        }
    }
    // Delta/q = p^24 = (((p^2)^2)^2)^2 * ((p^2)^2)^2 ... assembled as
    // p8 * p16
    let p2 = trunc_mul(&p, &p);
    let p4 = trunc_mul(&p2, &p2);
    let p8 = trunc_mul(&p4, &p4);
    let p16 = trunc_mul(&p8, &p8);
    let delta_over_q = trunc_mul(&p16, &p8);
    debug_assert!(delta_over_q[0].is_one());
    // integer series inverse of Delta/q
    let mut inv = vec![BigInt::zero(); n];
    inv[0] = BigInt::one();
    for k in 1..n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc += &delta_over_q[i] * &inv[k - i];
        }
        inv[k] = -acc;
    }
    let e4_sq = trunc_mul(&e4, &e4);
    let e4_cube = trunc_mul(&e4_sq, &e4);
    trunc_mul(&e4_cube, &inv)
}

pub(crate) fn sigma(power: u32, n: u64) -> u64 {
    let mut s = 0u64;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d.pow(power);
            if d != n / d {
                s += (n / d).pow(power);
            }
        }
        d += 1;
    }
    s
}

fn trunc_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn fx_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> SCALE
}

/// floor(sqrt(n) * 2^SCALE).
pub fn fx_sqrt(n: u64) -> BigInt {
    (BigInt::from(n) << (2 * SCALE)).sqrt()
}

/// pi at the working scale, by Machin's formula
/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn fx_pi() -> BigInt {
    let s = SCALE + GUARD;
    let pi_guarded = fx_atan_inv(5, s) * 16 - fx_atan_inv(239, s) * 4;
    pi_guarded >> GUARD
}

// atan(1/k) = sum (-1)^i / ((2i+1) k^(2i+1)) at scale s
fn fx_atan_inv(k: u64, s: u32) -> BigInt {
    let kk = BigInt::from(k) * k;
    let mut power = (BigInt::one() << s) / k;
    let mut acc = BigInt::zero();
    let mut i = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * i + 1);
        if i.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &kk;
        i += 1;
    }
    acc
}

/// e^x for fixed-point x >= 0, by e^x = e^frac * e^int with the integer
/// part handled by binary powering of e itself.
pub fn fx_exp(x: &BigInt) -> BigInt {
    assert!(!x.is_negative());
    let m = (x >> SCALE).to_u64().expect("exponent out of range");
    let r = x - (BigInt::from(m) << SCALE);
    let base = fx_taylor_exp(&(BigInt::one() << SCALE));
    let mut result = fx_taylor_exp(&r);
    let mut m = m;
    let mut pow = base;
    while m > 0 {
        if m & 1 == 1 {
            result = fx_mul(&result, &pow);
        }
        pow = fx_mul(&pow, &pow);
        m >>= 1;
    }
    result
}

// Taylor series at 0 <= r <= 1 (fixed point)
fn fx_taylor_exp(r: &BigInt) -> BigInt {
    let mut term = BigInt::one() << SCALE;
    let mut acc = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = fx_mul(&term, r) / k;
        acc += &term;
        k += 1;
    }
    acc
}

/// j evaluated at the CM point of the unique reduced form (1, b0, c) of a
/// class-number-one discriminant: there q = (-1)^b0 * e^{-pi sqrt|d|} is
/// real, so the whole sum is a single real fixed-point accumulation.
/// Returns the value at scale SCALE.
pub fn eval_j_fixed(abs_d: u64, b0_odd: bool, terms: usize) -> BigInt {
    let arg = fx_mul(&fx_pi(), &fx_sqrt(abs_d));
    let inv_q_mag = fx_exp(&arg);
    let q_mag = (BigInt::one() << (2 * SCALE)) / &inv_q_mag;
    let (inv_q, q) = if b0_odd {
        (-inv_q_mag, -q_mag)
    } else {
        (inv_q_mag, q_mag)
    };
    let coeffs = jq_series(terms);
    let mut acc = inv_q;
    let mut q_pow = BigInt::one() << SCALE;
    for c in &coeffs[1..] {
        // coeffs[0] belongs to the 1/q term already accumulated
        acc += c * &q_pow;
        q_pow = fx_mul(&q_pow, &q);
    }
    acc
}

/// Round a SCALE fixed-point value to the nearest integer, also returning
/// the distance to it as an f64 (0 on exact ties toward even is not needed;
/// ties cannot occur for irrational inputs).
pub fn round_fixed(v: &BigInt) -> (BigInt, f64) {
    let one = BigInt::one() << SCALE;
    let half = BigInt::one() << (SCALE - 1);
    let nearest = (v + &half).div_floor(&one);
    let dist = v - &nearest * &one;
    let dist_f = num_rational::BigRational::new(dist.abs(), one)
        .to_f64()
        .unwrap_or(0.0);
    (nearest, dist_f)
}
