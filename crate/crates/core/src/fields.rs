//! Invariants of imaginary quadratic fields and their orders: unit counts,
//! the conductor formula for class numbers of non-maximal orders, and the
//! decomposition of an arbitrary discriminant as f^2 * d_K.

use crate::arith::{self, is_fundamental_discriminant, kronecker};
use crate::error::{Error, Result};
use crate::forms;
use serde::Serialize;

/// An imaginary quadratic field keyed by its fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadField {
    #[serde(rename = "d_K")]
    pub d_k: i64,
    #[serde(rename = "h_K")]
    pub h_k: u64,
    #[serde(rename = "w_K")]
    pub w_k: u32,
}

/// The order Z + f*O_K of conductor f inside the maximal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadOrder {
    pub field: QuadField,
    pub f: u64,
    pub disc: i64,
    pub h: u64,
    pub w: u32,
}

/// Build a QuadField, computing h_K by form enumeration and w_K by counting
/// norm-form units. Rejects non-fundamental discriminants.
pub fn make_field(d_k: i64) -> Result<QuadField> {
    if !is_fundamental_discriminant(d_k)? {
        return Err(Error::domain(format!("{d_k} is not a fundamental discriminant")));
    }
    let h_k = forms::class_number(d_k)?;
    let w_k = count_units(d_k)?;
    debug_assert_eq!(w_k, match d_k { -3 => 6, -4 => 4, _ => 2 });
    Ok(QuadField { d_k, h_k, w_k })
}

impl QuadField {
    pub fn order(&self, f: u64) -> Result<QuadOrder> {
        if f == 0 {
            return Err(Error::domain("conductor must be positive"));
        }
        let disc = (f * f) as i64 * self.d_k;
        let h = order_class_number(self.d_k, f)?;
        let w = if f == 1 { self.w_k } else { 2 };
        Ok(QuadOrder { field: *self, f, disc, h, w })
    }
}

/// Number of units of the order of discriminant d, counted as integer
/// solutions of the norm form: x^2 + xy + (1+|d|)/4 y^2 = 1 when d is odd,
/// x^2 + (|d|/4) y^2 = 1 when d is even. Any solution has |x|, |y| <= 1,
/// the box below is slack.
pub fn count_units(d: i64) -> Result<u32> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!("not a negative quadratic discriminant: {d}")));
    }
    let d = d as i128;
    let mut count = 0;
    for x in -2i128..=2 {
        for y in -2i128..=2 {
            let norm = if d.rem_euclid(4) == 1 {
                x * x + x * y + (1 - d) / 4 * y * y
            } else {
                x * x + (-d / 4) * y * y
            };
            if norm == 1 {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Class number of the order of conductor f in the field of discriminant
/// d_K, by the formula
///
///   h(O_f) = h_K * prod over p^a || f of p^(a-1) * (p - (d_K/p))
///            / [O_K^* : O_f^*]
///
/// with unit index w_K/2 when f > 1 and d_K is -3 or -4, else 1. The
/// division is exact; a remainder is an implementation bug, not an input
/// error, so it panics.
pub fn order_class_number(d_k: i64, f: u64) -> Result<u64> {
    let field = make_field(d_k)?;
    if f == 0 {
        return Err(Error::domain("conductor must be positive"));
    }
    let mut numerator = field.h_k as u128;
    for (p, a) in arith::factorize(f).factors {
        let chi = kronecker(d_k, p as i64);
        let local = (p as i128 - chi as i128) as u128;
        numerator = numerator
            .checked_mul((p as u128).pow(a - 1))
            .and_then(|v| v.checked_mul(local))
            .expect("order class number overflow");
    }
    let unit_index = if f > 1 && (d_k == -3 || d_k == -4) {
        (field.w_k / 2) as u128
    } else {
        1
    };
    assert_eq!(
        numerator % unit_index,
        0,
        "class number formula came out non-integral at (d_K, f) = ({d_k}, {f})"
    );
    Ok(u64::try_from(numerator / unit_index).expect("order class number overflow"))
}

/// Largest prime that can divide the conductor of a CM order whose ring
/// class field admits a degree-n point: floor((w_K/2) n + 1).
pub fn max_conductor_prime_bound(n: u64, w_k: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("degree must be positive"));
    }
    if !matches!(w_k, 2 | 4 | 6) {
        return Err(Error::domain(format!("w_K must be 2, 4, or 6, got {w_k}")));
    }
    Ok((w_k as u64 / 2) * n + 1)
}

/// Split d < 0 with d = 0 or 1 mod 4 as f^2 * d_K with d_K fundamental.
pub fn fundamental_decomposition(d: i64) -> Result<(i64, u64)> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!("not a negative quadratic discriminant: {d}")));
    }
    let mut g = 1u64;
    for (p, e) in arith::factorize(d.unsigned_abs()).factors {
        g *= p.pow(e / 2);
    }
    let m = d / (g * g) as i64; // squarefree by construction
    if m.rem_euclid(4) == 1 {
        Ok((m, g))
    } else {
        // m = 2 or 3 mod 4, so d_K = 4m; then 4 | d/m = g^2 forces g even
        Ok((4 * m, g / 2))
    }
}
