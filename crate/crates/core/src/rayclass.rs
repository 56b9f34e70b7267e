//! Ray class group orders for the modulus ell * O_K, ell an odd prime.
//!
//! Two independent routes to the same number: a closed-form case split on
//! how ell factors in O_K, and the general order formula
//!
//!   h_m = h_K * N(m) * prod over p | m of (1 - 1/N(p)) / [U : U_m]
//!
//! evaluated as exact rationals. A third route, pure counting in the finite
//! ring O_K / ell O_K, serves as the oracle both are tested against.
//!
//! ell = 2 is rejected everywhere: the unit index [U : U_m] needs its own
//! case analysis there and nothing downstream uses it.

use crate::arith::{is_fundamental_discriminant, is_prime, kronecker};
use crate::error::{Error, Result};
use crate::fields::QuadField;
use num_rational::Ratio;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for SplitType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RayClassReport {
    pub field: QuadField,
    pub ell: u64,
    pub split_type: SplitType,
    /// [U : U_m], the unit image in the residue ring.
    pub unit_index: u64,
    /// |(O_K / ell O_K)^*|.
    pub residue_unit_order: u64,
    pub h_m: u64,
}

pub(crate) fn check_odd_prime(ell: u64) -> Result<()> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::domain("ell must be an odd prime"));
    }
    Ok(())
}

fn check_fundamental(d_k: i64) -> Result<()> {
    if !is_fundamental_discriminant(d_k)? {
        return Err(Error::domain(format!("{d_k} is not a fundamental discriminant")));
    }
    Ok(())
}

/// How ell factors in O_K, read off the Kronecker symbol (d_K/ell).
pub fn split_type(d_k: i64, ell: u64) -> Result<SplitType> {
    check_odd_prime(ell)?;
    check_fundamental(d_k)?;
    Ok(match kronecker(d_k, ell as i64) {
        1 => SplitType::Split,
        -1 => SplitType::Inert,
        _ => SplitType::Ramified,
    })
}

/// [U : U_m] for m = ell O_K. For odd ell no root of unity other than 1 is
/// congruent to 1 mod ell O_K, so the index is all of w_K.
pub fn unit_index(field: &QuadField, ell: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    Ok(field.w_k as u64)
}

// Basis coordinates of the roots of unity as x + y*omega, omega the
// standard generator: (1+sqrt(d_K))/2 for odd d_K, sqrt(d_K/4) for even.
fn roots_of_unity_coords(d_k: i64) -> Vec<(i64, i64)> {
    match d_k {
        // sixth roots: powers of omega = (1+sqrt(-3))/2
        -3 => vec![(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
        // fourth roots: powers of omega = i
        -4 => vec![(1, 0), (0, 1), (-1, 0), (0, -1)],
        _ => vec![(1, 0), (-1, 0)],
    }
}

/// Brute-force unit index: count roots of unity congruent to 1 mod ell O_K
/// (that is, x = 1 and y = 0 mod ell in basis coordinates) and divide into
/// w_K.
pub fn unit_index_oracle(field: &QuadField, ell: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    let ell = ell as i64;
    let congruent_to_one = roots_of_unity_coords(field.d_k)
        .iter()
        .filter(|&&(x, y)| (x - 1).rem_euclid(ell) == 0 && y.rem_euclid(ell) == 0)
        .count() as u64;
    assert!(congruent_to_one >= 1, "the unit 1 is always congruent to 1");
    Ok(field.w_k as u64 / congruent_to_one)
}

/// |(O_K / ell O_K)^*| by walking all ell^2 residues x + y*omega and
/// counting those whose norm is a unit mod ell.
pub fn residue_unit_order_oracle(d_k: i64, ell: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    check_fundamental(d_k)?;
    if ell > 100_000 {
        return Err(Error::domain(
            "residue oracle enumerates ell^2 elements; ell must be at most 100000",
        ));
    }
    let ell = ell as i64;
    let mut count = 0u64;
    for x in 0..ell {
        for y in 0..ell {
            // norm of x + y*omega as an integer polynomial in (x, y)
            let n = if d_k.rem_euclid(4) == 1 {
                x * x + x * y + (1 - d_k) / 4 % ell * y * y
            } else {
                x * x + (-d_k / 4) % ell * y * y
            };
            if n.rem_euclid(ell) != 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn residue_unit_order_formula(split: SplitType, ell: u64) -> u64 {
    match split {
        SplitType::Split => (ell - 1) * (ell - 1),
        SplitType::Inert => ell * ell - 1,
        SplitType::Ramified => ell * ell - ell,
    }
}

/// Ray class group order for m = ell O_K by the case formula
/// h_m = h_K * r / w_K with r = (ell-1)^2, ell^2-1, ell^2-ell as ell
/// splits, stays inert, or ramifies. Exactness of the division is a
/// theorem; a remainder panics.
pub fn ray_class_number(field: &QuadField, ell: u64) -> Result<RayClassReport> {
    let split = split_type(field.d_k, ell)?;
    let unit_index = unit_index(field, ell)?;
    let residue_unit_order = residue_unit_order_formula(split, ell);
    let numerator = (field.h_k as u128) * residue_unit_order as u128;
    assert_eq!(
        numerator % unit_index as u128,
        0,
        "ray class order not integral at (d_K, ell) = ({}, {ell})",
        field.d_k
    );
    let h_m = u64::try_from(numerator / unit_index as u128).expect("ray class order overflow");
    Ok(RayClassReport {
        field: *field,
        ell,
        split_type: split,
        unit_index,
        residue_unit_order,
        h_m,
    })
}

/// The general order formula, specialized only in that the prime norms
/// above ell are read off the splitting type: h_K * [U:U_m]^{-1} * N(m) *
/// prod (1 - 1/N(p)), assembled in exact rational arithmetic.
pub fn prop1_general(field: &QuadField, ell: u64) -> Result<u64> {
    let split = split_type(field.d_k, ell)?;
    let prime_norms: Vec<u64> = match split {
        SplitType::Split => vec![ell, ell],
        SplitType::Inert => vec![ell * ell],
        SplitType::Ramified => vec![ell],
    };
    let modulus_norm = ell as u128 * ell as u128;
    let mut h = Ratio::new(field.h_k as u128 * modulus_norm, field.w_k as u128);
    for np in prime_norms {
        h *= Ratio::new(np as u128 - 1, np as u128);
    }
    assert!(h.is_integer(), "general ray class formula not integral");
    Ok(u64::try_from(h.to_integer()).expect("ray class order overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    #[test]
    fn split_types() {
        assert_eq!(split_type(-7, 7).unwrap(), SplitType::Ramified);
        assert_eq!(split_type(-4, 5).unwrap(), SplitType::Split);
        assert_eq!(split_type(-3, 5).unwrap(), SplitType::Inert);
        assert!(split_type(-4, 2).is_err());
        assert!(split_type(-4, 9).is_err());
        assert!(split_type(-5, 3).is_err());
    }

    #[test]
    fn unit_indices() {
        let k3 = make_field(-3).unwrap();
        let k4 = make_field(-4).unwrap();
        let k7 = make_field(-7).unwrap();
        let k8 = make_field(-8).unwrap();
        assert_eq!(unit_index(&k7, 5).unwrap(), 2);
        assert_eq!(unit_index(&k4, 5).unwrap(), 4);
        assert_eq!(unit_index(&k3, 7).unwrap(), 6);
        assert_eq!(unit_index_oracle(&k3, 7).unwrap(), 6);
        assert_eq!(unit_index_oracle(&k8, 3).unwrap(), 2);
        assert_eq!(unit_index_oracle(&k4, 3).unwrap(), 4);
        assert!(unit_index(&k3, 2).is_err());
    }

    #[test]
    fn residue_ring_counts() {
        assert_eq!(residue_unit_order_oracle(-4, 5).unwrap(), 16);
        assert_eq!(residue_unit_order_oracle(-3, 5).unwrap(), 24);
        assert_eq!(residue_unit_order_oracle(-7, 7).unwrap(), 42);
    }

    #[test]
    fn ray_class_orders() {
        let k = make_field(-163).unwrap();
        let r = ray_class_number(&k, 163).unwrap();
        assert_eq!(r.h_m, 13203);
        assert_eq!(r.split_type, SplitType::Ramified);
        let k = make_field(-4).unwrap();
        assert_eq!(ray_class_number(&k, 5).unwrap().h_m, 4);
        let k = make_field(-3).unwrap();
        assert_eq!(ray_class_number(&k, 5).unwrap().h_m, 4);
    }

    #[test]
    fn general_formula_agrees() {
        for (dk, ell, expect) in [(-163i64, 163u64, 13203u64), (-4, 5, 4), (-3, 5, 4)] {
            let k = make_field(dk).unwrap();
            assert_eq!(prop1_general(&k, ell).unwrap(), expect);
            assert_eq!(ray_class_number(&k, ell).unwrap().h_m, expect);
        }
    }

    #[test]
    fn exact_sequence_identity_smoke() {
        for dk in [-3i64, -4, -7, -8, -11, -15, -20, -23] {
            let k = make_field(dk).unwrap();
            for ell in [3u64, 5, 7, 11, 13] {
                let r = ray_class_number(&k, ell).unwrap();
                let oracle = residue_unit_order_oracle(dk, ell).unwrap();
                assert_eq!(r.residue_unit_order, oracle, "d_K={dk} ell={ell}");
                assert_eq!(r.h_m * r.unit_index, k.h_k * oracle, "d_K={dk} ell={ell}");
            }
        }
    }
}
