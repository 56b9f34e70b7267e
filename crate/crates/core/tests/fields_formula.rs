//! The order class number formula against direct form enumeration, over
//! every fundamental discriminant |d_K| <= 200 and every conductor f <= 20.

use cmrt_core::arith::is_fundamental_discriminant;
use cmrt_core::fields::{fundamental_decomposition, make_field};
use cmrt_core::forms::class_number;

fn fundamental_up_to(limit: i64) -> Vec<i64> {
    (-limit..0)
        .filter(|&d| matches!(is_fundamental_discriminant(d), Ok(true)))
        .collect()
}

#[test]
fn order_formula_matches_enumeration() {
    let mut checked = 0u32;
    for d_k in fundamental_up_to(200) {
        let field = make_field(d_k).unwrap();
        for f in 1..=20u64 {
            let order = field.order(f).unwrap();
            assert_eq!(order.disc, d_k * (f * f) as i64);
            assert_eq!(
                order.h,
                class_number(order.disc).unwrap(),
                "formula disagrees with enumeration at d_K={d_k}, f={f}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 1000, "sweep too small: {checked}");
}

#[test]
fn order_class_number_multiplicative_in_coprime_conductors() {
    // write h(f) for the class number of the order of conductor f; the
    // Euler product gives h(fg) * h_K = h(f) * h(g) * u for coprime f, g > 1,
    // where u is the unit index correction (w_K/2 when d_K is -3 or -4)
    let pairs = [(2u64, 3u64), (2, 5), (3, 4), (3, 5), (4, 5), (2, 7), (5, 6), (4, 9)];
    for d_k in fundamental_up_to(150) {
        let field = make_field(d_k).unwrap();
        let u = if field.d_k == -3 || field.d_k == -4 {
            (field.w_k / 2) as u64
        } else {
            1
        };
        for (f, g) in pairs {
            let hf = field.order(f).unwrap().h;
            let hg = field.order(g).unwrap().h;
            let hfg = field.order(f * g).unwrap().h;
            assert_eq!(
                hfg * field.h_k,
                hf * hg * u,
                "coprime conductor relation fails at d_K={d_k}, f={f}, g={g}"
            );
        }
    }
}

#[test]
fn decomposition_inverts_scaling() {
    for d_k in fundamental_up_to(100) {
        for f in 1..=15i64 {
            let d = d_k * f * f;
            let (dk2, f2) = fundamental_decomposition(d).unwrap();
            assert_eq!((dk2, f2), (d_k, f as u64), "d={d}");
        }
    }
}

#[test]
fn unit_counts() {
    assert_eq!(make_field(-3).unwrap().w_k, 6);
    assert_eq!(make_field(-4).unwrap().w_k, 4);
    for d_k in fundamental_up_to(200) {
        if d_k < -4 {
            assert_eq!(make_field(d_k).unwrap().w_k, 2);
        }
    }
}
