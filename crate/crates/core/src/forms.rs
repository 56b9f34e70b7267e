//! Class numbers of negative discriminants by exhaustive enumeration of
//! reduced primitive binary quadratic forms. This is the crate's ground
//! truth for h: every formula elsewhere is checked against these counts.
//!
//! A form ax^2 + bxy + cy^2 of discriminant d = b^2 - 4ac < 0 is reduced
//! when |b| <= a <= c and b >= 0 whenever |b| = a or a = c; each class of
//! primitive forms contains exactly one reduced representative, and any
//! reduced form has a <= sqrt(|d|/3).

use crate::arith::isqrt;
use crate::error::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let ok_shape = self.a > 0
            && self.c > 0
            && self.b.abs() <= self.a
            && self.a <= self.c;
        let ok_boundary = self.b >= 0 || (self.b.abs() != self.a && self.a != self.c);
        ok_shape && ok_boundary && self.discriminant() < 0
    }
}

fn check_discriminant(d: i64) -> Result<u64> {
    if d >= 0 {
        return Err(Error::domain(format!("discriminant must be negative, got {d}")));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!("discriminant must be 0 or 1 mod 4, got {d}")));
    }
    Ok(d.unsigned_abs())
}

/// All reduced primitive forms of discriminant d, sorted by (a, b, c).
pub fn enumerate_reduced_forms(d: i64) -> Result<Vec<ReducedForm>> {
    let ad = check_discriminant(d)? as i64;
    let mut out = Vec::new();
    let a_max = isqrt(ad as u64 / 3) as i64;
    for a in 1..=a_max {
        // b = d mod 2 is forced by b^2 = d mod 4
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && a == c {
                continue;
            }
            let form = ReducedForm { a, b, c };
            if !form.is_primitive() {
                continue;
            }
            debug_assert!(form.is_reduced() && form.discriminant() == d);
            out.push(form);
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// h(d) = number of reduced primitive forms. Same loop as the enumeration,
/// counting without allocating.
pub fn class_number(d: i64) -> Result<u64> {
    let ad = check_discriminant(d)?;
    Ok(count_forms(ad))
}

fn count_forms(ad: u64) -> u64 {
    let ad = ad as i64;
    let d = -ad;
    let mut count = 0u64;
    let a_max = isqrt(ad as u64 / 3) as i64;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Class numbers for every discriminant -1 >= d >= -limit in one sweep.
///
/// Returns v with v[k] = h(-k) for k = 0 or 3 mod 4, and 0 at other
/// indices. Instead of reducing per discriminant, this walks all reduced
/// triples (a, b, c) with 4ac - b^2 <= limit and tallies them, which is
/// O(limit^{3/2}) overall versus O(limit^2) for per-d enumeration.
pub fn class_number_census(limit: u64) -> Vec<u32> {
    let a_max = isqrt(limit / 3);
    let tallies = (1..=a_max as i64)
        .into_par_iter()
        .fold(
            || vec![0u32; limit as usize + 1],
            |mut acc, a| {
                for b in -a + 1..=a {
                    let g = a.gcd(&b);
                    // c >= a always; c > a when b < 0 (else |b|=a or a=c
                    // would need b >= 0)
                    let c_min = if b < 0 { a + 1 } else { a };
                    let bb = b * b;
                    let mut c = c_min;
                    loop {
                        let ad = 4 * a * c - bb;
                        if ad > limit as i64 {
                            break;
                        }
                        if ad > 0 && (g == 1 || g.gcd(&c) == 1) {
                            acc[ad as usize] += 1;
                        }
                        c += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; limit as usize + 1],
            |mut x, y| {
                for (xi, yi) in x.iter_mut().zip(y) {
                    *xi += yi;
                }
                x
            },
        );
    tallies
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_discriminants() {
        assert_eq!(
            enumerate_reduced_forms(-3).unwrap(),
            vec![ReducedForm { a: 1, b: 1, c: 1 }]
        );
        assert_eq!(
            enumerate_reduced_forms(-4).unwrap(),
            vec![ReducedForm { a: 1, b: 0, c: 1 }]
        );
        assert_eq!(
            enumerate_reduced_forms(-23).unwrap(),
            vec![
                ReducedForm { a: 1, b: 1, c: 6 },
                ReducedForm { a: 2, b: -1, c: 3 },
                ReducedForm { a: 2, b: 1, c: 3 },
            ]
        );
    }

    #[test]
    fn known_class_numbers() {
        assert_eq!(class_number(-163).unwrap(), 1);
        assert_eq!(class_number(-5923).unwrap(), 7);
        assert_eq!(class_number(-28).unwrap(), 1);
        assert_eq!(class_number(-12).unwrap(), 1);
        assert_eq!(class_number(-427).unwrap(), 2);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-2383747).unwrap(), 98);
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(class_number(0).is_err());
        assert!(class_number(5).is_err());
        assert!(class_number(-5).is_err());
        assert!(class_number(-2).is_err());
        assert!(enumerate_reduced_forms(-1).is_err());
    }

    #[test]
    fn census_matches_per_discriminant() {
        let census = class_number_census(2000);
        for k in 1..=2000u64 {
            let expect = match k % 4 {
                0 | 3 => class_number(-(k as i64)).unwrap() as u32,
                _ => 0,
            };
            assert_eq!(census[k as usize], expect, "mismatch at |d| = {k}");
        }
    }

    #[test]
    fn census_class_number_one_count() {
        let census = class_number_census(10_000);
        let h1: Vec<u64> = (1..=10_000u64)
            .filter(|&k| census[k as usize] == 1)
            .collect();
        assert_eq!(h1, vec![3, 4, 7, 8, 11, 12, 16, 19, 27, 28, 43, 67, 163]);
    }

    #[test]
    fn every_enumerated_form_is_valid() {
        for k in 3..500i64 {
            if !matches!(k % 4, 0 | 3) {
                continue;
            }
            let d = -k;
            for f in enumerate_reduced_forms(d).unwrap() {
                assert!(f.is_reduced(), "{f:?} not reduced for d = {d}");
                assert!(f.is_primitive(), "{f:?} not primitive for d = {d}");
                assert_eq!(f.discriminant(), d);
            }
        }
    }
}
