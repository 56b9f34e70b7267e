//! Singular j-values: the q-expansion evaluator against the frozen table,
//! round-trips through identify_cm, and rejection of non-CM inputs.

use cmrt_core::curves::{
    class_number_one_discs, cm_j_value, cm_j_value_with_distance, identify_cm, j_invariant,
    Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[test]
fn thirteen_discriminants_round_trip() {
    let discs = class_number_one_discs();
    assert_eq!(
        discs,
        &[-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163]
    );
    for &d in discs {
        let j = cm_j_value(d).unwrap();
        let id = identify_cm(&Rational::from(j.clone()))
            .unwrap_or_else(|| panic!("identify_cm missed d={d}"));
        assert_eq!(id.order_disc, d, "wrong order for d={d}, j={j}");
        assert_eq!(id.d_k * (id.f * id.f) as i64, d);
    }
}

#[test]
fn evaluation_is_sharp() {
    // every singular value must come out essentially exact, far inside
    // the 0.25 rounding tolerance
    for &d in class_number_one_discs() {
        let (_, dist) = cm_j_value_with_distance(d).unwrap();
        assert!(dist < 1e-9, "d={d} dist={dist}");
    }
    let (j, dist) = cm_j_value_with_distance(-163).unwrap();
    assert_eq!(j, BigInt::from(-262537412640768000i64));
    assert!(dist < 1e-11, "dist={dist}");
}

#[test]
fn matches_j_invariant_of_known_curves() {
    // y^2 = x^3 - 595x + 5586 has CM by the order of discriminant -28
    let j = j_invariant(&Rational::from(BigInt::from(-595)), &Rational::from(BigInt::from(5586)))
        .unwrap();
    assert_eq!(j, Rational::from(cm_j_value(-28).unwrap()));
    // y^2 = x^3 + x and y^2 = x^3 + 1 give the -4 and -3 values
    assert_eq!(
        j_invariant(&Rational::one(), &Rational::from(BigInt::from(0))).unwrap(),
        Rational::from(cm_j_value(-4).unwrap())
    );
    assert_eq!(
        j_invariant(&Rational::from(BigInt::from(0)), &Rational::one()).unwrap(),
        Rational::from(cm_j_value(-3).unwrap())
    );
}

#[test]
fn higher_class_number_is_rejected() {
    for d in [-23i64, -15, -20, -24, -31, -5923] {
        let err = cm_j_value(d).unwrap_err();
        assert!(err.to_string().contains("class number one"), "{err}");
    }
}

#[test]
fn random_non_cm_values_identify_as_none() {
    let mut rng = ChaCha20Rng::seed_from_u64(0x1357_9bdf);
    let mut checked = 0;
    while checked < 100 {
        let num: i64 = rng.gen_range(-1_000_000_000_000..1_000_000_000_000);
        let den: i64 = rng.gen_range(2..100_000);
        // force a non-integer: numerator = num*den + 1 is coprime to den
        let j = Rational::new(BigInt::from(num) * den + 1, BigInt::from(den));
        assert!(!j.is_integer());
        assert!(identify_cm(&j).is_none(), "false positive at {j}");
        checked += 1;
    }
    // integers adjacent to genuine singular values must also miss
    for &d in class_number_one_discs() {
        let j = cm_j_value(d).unwrap();
        for off in [-1, 1, 720] {
            let shifted = Rational::from(&j + BigInt::from(off));
            assert!(identify_cm(&shifted).is_none(), "false positive near d={d}");
        }
    }
}

#[test]
fn table_values_satisfy_known_congruences() {
    // j(d) is divisible by high powers of small primes for the larger
    // discriminants; spot-check cube structure: every value with 3 not
    // dividing d is a perfect cube
    for &d in class_number_one_discs() {
        let j = cm_j_value(d).unwrap();
        if d % 3 != 0 && !j.is_zero() {
            let r = j.cbrt();
            assert_eq!(&r * &r * &r, j, "not a cube at d={d}");
        }
    }
}
