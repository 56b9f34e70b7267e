//! Exact elliptic curve invariants over Q: j-invariants, the Weber
//! function with its three-case definition, identification of CM curves by
//! matching rational j against singular values, and the torsion criteria
//! that hang off the CM data.
//!
//! All curve arithmetic is exact: rationals throughout, with one optional
//! quadratic layer (values p + q*sqrt(m)) for point coordinates so the
//! Weber function stays meaningful on curves whose 2-torsion is not
//! rational.

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::fields::{self, make_field, QuadField};
use crate::forms;
use crate::qexp;
use crate::rayclass::check_odd_prime;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::sync::OnceLock;

pub type Rational = BigRational;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Serialize a BigRational as "p" or "p/q"; parsing it back is the CLI's
/// input grammar, so output and input stay one language.
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// y^2 = x^3 + ax + b with exact rational coefficients. Classical
/// covariants: g2 = -4a, g3 = -4b, delta = g2^3 - 27 g3^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a: Rational,
    pub b: Rational,
}

impl WeierstrassCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let curve = WeierstrassCurve { a, b };
        if curve.delta().is_zero() {
            return Err(Error::domain("singular curve: 4a^3 + 27b^2 = 0"));
        }
        Ok(curve)
    }

    pub fn g2(&self) -> Rational {
        -rat(4) * &self.a
    }

    pub fn g3(&self) -> Rational {
        -rat(4) * &self.b
    }

    pub fn delta(&self) -> Rational {
        let g2 = self.g2();
        let g3 = self.g3();
        &g2 * &g2 * &g2 - rat(27) * &g3 * &g3
    }

    pub fn j(&self) -> Rational {
        let g2 = self.g2();
        rat(1728) * &g2 * &g2 * &g2 / self.delta()
    }

    /// Quartic twist by u: (u^4 a, u^6 b). Same j, and points map by
    /// (x, y) -> (u^2 x, u^3 y).
    pub fn twist(&self, u: &Rational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::domain("twist scalar must be nonzero"));
        }
        let u2 = u * u;
        let u4 = &u2 * &u2;
        let u6 = &u4 * &u2;
        WeierstrassCurve::new(u4 * &self.a, u6 * &self.b)
    }
}

/// j of y^2 = x^3 + ax + b; rejects singular input.
pub fn j_invariant(a: &Rational, b: &Rational) -> Result<Rational> {
    Ok(WeierstrassCurve::new(a.clone(), b.clone())?.j())
}

/// One quadratic layer over Q: the value p + q*sqrt(m). Canonical form:
/// m squarefree and not 0 or 1; purely rational values carry q = 0, m = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: i64,
}

impl QuadExt {
    pub fn from_rational(p: Rational) -> Self {
        QuadExt { rational: p, coeff: Rational::zero(), radicand: 1 }
    }

    pub fn new(p: Rational, q: Rational, m: i64) -> Self {
        if q.is_zero() || m == 0 {
            return Self::from_rational(p);
        }
        // pull the square part of the radicand into the coefficient
        let mut square_part = 1u64;
        let mut core = 1u64;
        for (pr, e) in factorize(m.unsigned_abs()).factors {
            square_part *= pr.pow(e / 2);
            if e % 2 == 1 {
                core *= pr;
            }
        }
        let q = q * Rational::from_integer(BigInt::from(square_part));
        if core == 1 && m > 0 {
            return Self::from_rational(p + q);
        }
        let radicand = if m < 0 { -(core as i64) } else { core as i64 };
        QuadExt { rational: p, coeff: q, radicand }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let coeff = &self.coeff * r;
        let radicand = if coeff.is_zero() { 1 } else { self.radicand };
        QuadExt { rational: &self.rational * r, coeff, radicand }
    }

    pub fn mul(&self, other: &QuadExt) -> Self {
        if self.is_rational() {
            return other.scale(&self.rational);
        }
        if other.is_rational() {
            return self.scale(&other.rational);
        }
        assert_eq!(
            self.radicand, other.radicand,
            "product would leave the quadratic extension"
        );
        let m = rat(self.radicand);
        let p = &self.rational * &other.rational + &self.coeff * &other.coeff * &m;
        let q = &self.rational * &other.coeff + &self.coeff * &other.rational;
        QuadExt::new(p, q, self.radicand)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn cube(&self) -> Self {
        self.mul(&self.square())
    }
}

impl std::fmt::Display for QuadExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            return f.write_str(&rational_to_string(&self.rational));
        }
        let tail = format!(
            "{}*sqrt({})",
            rational_to_string(&self.coeff.abs()),
            self.radicand
        );
        let sign = if self.coeff.is_negative() { "-" } else { "+" };
        if self.rational.is_zero() {
            if self.coeff.is_negative() {
                write!(f, "-{tail}")
            } else {
                f.write_str(&tail)
            }
        } else {
            write!(f, "{} {sign} {tail}", rational_to_string(&self.rational))
        }
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A point given by exact coordinates, each allowed one quadratic layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub x: QuadExt,
    pub y: QuadExt,
}

impl CurvePoint {
    pub fn rational(x: Rational, y: Rational) -> Self {
        CurvePoint { x: QuadExt::from_rational(x), y: QuadExt::from_rational(y) }
    }
}

/// Whether the point satisfies y^2 = x^3 + ax + b; None when a coordinate
/// is irrational (carried symbolically, not validated).
pub fn on_curve(curve: &WeierstrassCurve, point: &CurvePoint) -> Option<bool> {
    if !point.x.is_rational() || !point.y.is_rational() {
        return None;
    }
    let x = &point.x.rational;
    let y = &point.y.rational;
    Some(y * y == x * x * x + &curve.a * x + &curve.b)
}

/// The Weber function: (g2 g3 / delta) x for generic j, (g2^2 / delta) x^2
/// when j = 1728, (g3 / delta) x^3 when j = 0. Rational points are checked
/// to lie on the curve first.
pub fn weber(curve: &WeierstrassCurve, point: &CurvePoint) -> Result<QuadExt> {
    if on_curve(curve, point) == Some(false) {
        return Err(Error::domain("point is not on the curve"));
    }
    let g2 = curve.g2();
    let g3 = curve.g3();
    let delta = curve.delta();
    let value = if g2.is_zero() {
        // j = 0
        point.x.cube().scale(&(g3 / delta))
    } else if g3.is_zero() {
        // j = 1728
        point.x.square().scale(&(&g2 * &g2 / delta))
    } else {
        point.x.scale(&(g2 * g3 / delta))
    };
    Ok(value)
}

/// Weber values are unchanged by the twist (a, b, x, y) ->
/// (u^4 a, u^6 b, u^2 x, u^3 y); this evaluates both sides exactly.
pub fn weber_model_independence_check(
    curve: &WeierstrassCurve,
    u: &Rational,
    point: &CurvePoint,
) -> Result<bool> {
    let twisted = curve.twist(u)?;
    let u2 = u * u;
    let u3 = &u2 * u;
    let moved = CurvePoint { x: point.x.scale(&u2), y: point.y.scale(&u3) };
    Ok(weber(curve, point)? == weber(&twisted, &moved)?)
}

/// x-coordinates of the rational 2-torsion: rational roots of
/// x^3 + ax + b, found by clearing denominators to a monic integer cubic
/// whose rational roots are integer divisors of the constant term.
pub fn rational_two_torsion_x(curve: &WeierstrassCurve) -> Result<Vec<Rational>> {
    let l = curve.a.denom().lcm(curve.b.denom());
    let big_a = (&curve.a * Rational::from_integer(&l * &l)).to_integer();
    let big_b = (&curve.b * Rational::from_integer(&l * &l * &l)).to_integer();
    let mut roots: Vec<BigInt> = Vec::new();
    let eval = |y: &BigInt| y * y * y + &big_a * y + &big_b;
    if big_b.is_zero() {
        roots.push(BigInt::zero());
        let neg_a = -&big_a;
        if !neg_a.is_negative() {
            let s = neg_a.sqrt();
            if &s * &s == neg_a && !s.is_zero() {
                roots.push(s.clone());
                roots.push(-s);
            }
        }
    } else {
        let abs_b = u64::try_from(big_b.abs()).map_err(|_| {
            Error::domain("2-torsion root search supports constant terms up to 64 bits")
        })?;
        let mut divisors = vec![1u64];
        for (p, e) in factorize(abs_b).factors {
            let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
            for d in &divisors {
                let mut pe = 1u64;
                for _ in 0..=e {
                    next.push(d * pe);
                    pe = pe.saturating_mul(p);
                }
            }
            divisors = next;
        }
        for d in divisors {
            for y in [BigInt::from(d), -BigInt::from(d)] {
                if eval(&y).is_zero() {
                    roots.push(y);
                }
            }
        }
    }
    let mut xs: Vec<Rational> = roots
        .into_iter()
        .map(|y| Rational::new(y, l.clone()))
        .collect();
    xs.sort();
    xs.dedup();
    Ok(xs)
}

/// The thirteen negative discriminants of class number one, rediscovered
/// by form enumeration over |d| <= 200 rather than hardcoded.
pub fn class_number_one_discs() -> &'static [i64] {
    static DISCS: OnceLock<Vec<i64>> = OnceLock::new();
    DISCS.get_or_init(|| {
        let mut v = Vec::new();
        for k in 3..=200i64 {
            if !matches!(k % 4, 0 | 3) {
                continue;
            }
            if forms::class_number(-k).expect("valid discriminant") == 1 {
                v.push(-k);
            }
        }
        v
    })
}

fn cm_j_table() -> &'static [(i64, BigInt)] {
    static TABLE: OnceLock<Vec<(i64, BigInt)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        class_number_one_discs()
            .iter()
            .map(|&d| {
                let (value, dist) = eval_cm_j(d);
                assert!(dist < 0.25, "insufficient precision at disc {d}");
                (d, value)
            })
            .collect()
    })
}

const SERIES_TERMS: usize = 32;

fn eval_cm_j(order_disc: i64) -> (BigInt, f64) {
    // unique reduced form is (1, b0, c) with b0 = disc mod 2, so
    // q = (-1)^b0 e^{-pi sqrt|d|} is real
    let b0_odd = order_disc.rem_euclid(2) == 1;
    let fixed = qexp::eval_j_fixed(order_disc.unsigned_abs(), b0_odd, SERIES_TERMS);
    qexp::round_fixed(&fixed)
}

/// j at the CM point of a class-number-one discriminant, rounded from the
/// q-expansion. Errors on h != 1; panics if the rounding margin of 0.25 is
/// ever violated, which would be an implementation bug.
pub fn cm_j_value(order_disc: i64) -> Result<BigInt> {
    Ok(cm_j_value_with_distance(order_disc)?.0)
}

/// Same, also reporting the distance from the evaluated series to the
/// returned integer.
pub fn cm_j_value_with_distance(order_disc: i64) -> Result<(BigInt, f64)> {
    let h = forms::class_number(order_disc)?;
    if h != 1 {
        return Err(Error::domain(format!(
            "cm_j_value needs class number one, but h({order_disc}) = {h}"
        )));
    }
    let (value, dist) = eval_cm_j(order_disc);
    assert!(dist < 0.25, "insufficient precision at disc {order_disc}");
    Ok((value, dist))
}

/// A CM order identified from a rational j-invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CmIdentification {
    #[serde(rename = "d_K")]
    pub d_k: i64,
    pub f: u64,
    pub order_disc: i64,
}

/// Scan the class-number-one discriminants for one whose singular j equals
/// the given rational. None when no order matches (in particular for every
/// non-integral j).
pub fn identify_cm(j: &Rational) -> Option<CmIdentification> {
    for (d, value) in cm_j_table() {
        if j.is_integer() && &j.to_integer() == value {
            let (d_k, f) = fields::fundamental_decomposition(*d).expect("table disc is valid");
            return Some(CmIdentification { d_k, f, order_disc: *d });
        }
    }
    None
}

/// The generic divisor of [F(E[ell]) : F] for a curve with CM by the
/// maximal order: twice the unit group order of O_K / ell O_K, the case
/// picked by (d_K/ell).
pub fn prop2_divisor(d_k: i64, ell: u64) -> Result<u64> {
    let split = crate::rayclass::split_type(d_k, ell)?;
    Ok(2 * match split {
        crate::rayclass::SplitType::Split => (ell - 1) * (ell - 1),
        crate::rayclass::SplitType::Inert => ell * ell - 1,
        crate::rayclass::SplitType::Ramified => ell * ell - ell,
    })
}

/// A yes/no answer that names the clause it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub possible: bool,
    pub reason: String,
}

/// Whether a prime ell survives the degree-n screen: possible only if
/// ell <= (w_K/2) n + 1 or ell | d_K.
pub fn rt_necessary_condition(n: u64, field: &QuadField, ell: u64) -> Result<Verdict> {
    check_odd_prime(ell)?;
    let bound = fields::max_conductor_prime_bound(n, field.w_k)?;
    let divides = field.d_k.unsigned_abs().is_multiple_of(ell);
    Ok(if divides {
        Verdict { possible: true, reason: "ℓ | d_K".into() }
    } else if ell <= bound {
        Verdict {
            possible: true,
            reason: format!("ℓ ≤ (w_K/2)·n + 1 = {bound}"),
        }
    } else {
        Verdict {
            possible: false,
            reason: format!("ℓ ∤ d_K and ℓ > (w_K/2)·n + 1 = {bound}"),
        }
    })
}

/// The sharper screen for odd degree n: the size clause drops entirely and
/// only ell | d_K remains.
pub fn rt_odd_degree_condition(n: u64, field: &QuadField, ell: u64) -> Result<Verdict> {
    check_odd_prime(ell)?;
    if n.is_multiple_of(2) {
        return Err(Error::domain(format!("degree must be odd, got {n}")));
    }
    let divides = field.d_k.unsigned_abs().is_multiple_of(ell);
    Ok(Verdict {
        possible: divides,
        reason: if divides { "ℓ | d_K".into() } else { "ℓ ∤ d_K".into() },
    })
}

/// Everything this crate can say about one curve in one pass.
#[derive(Debug, Clone)]
pub struct CurveReport {
    pub a: Rational,
    pub b: Rational,
    pub j: Rational,
    pub cm: Option<CmIdentification>,
    pub w_k: Option<u32>,
    pub prop2_divisor: Option<u64>,
    pub necessary_condition: Option<Verdict>,
    pub note: String,
}

impl Serialize for CurveReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CurveReport", 8)?;
        st.serialize_field("a", &rational_to_string(&self.a))?;
        st.serialize_field("b", &rational_to_string(&self.b))?;
        st.serialize_field("j", &rational_to_string(&self.j))?;
        st.serialize_field("cm", &self.cm)?;
        st.serialize_field("w_K", &self.w_k)?;
        st.serialize_field("prop2_divisor", &self.prop2_divisor)?;
        st.serialize_field("necessary_condition", &self.necessary_condition)?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

/// Inspect one curve: j, CM identification, and, when a degree and prime
/// are supplied and the curve has CM, the divisor and screening verdict.
pub fn inspect_curve(
    a: &Rational,
    b: &Rational,
    degree: Option<u64>,
    ell: Option<u64>,
) -> Result<CurveReport> {
    let curve = WeierstrassCurve::new(a.clone(), b.clone())?;
    if let Some(l) = ell {
        check_odd_prime(l)?;
    }
    let j = curve.j();
    let cm = identify_cm(&j);
    let mut report = CurveReport {
        a: a.clone(),
        b: b.clone(),
        j,
        cm,
        w_k: None,
        prop2_divisor: None,
        necessary_condition: None,
        note: String::new(),
    };
    match cm {
        None => {
            report.note =
                "no class-number-one CM order matches j; torsion criteria inapplicable".into();
        }
        Some(id) => {
            let field = make_field(id.d_k)?;
            report.w_k = Some(field.w_k);
            if let Some(l) = ell {
                report.prop2_divisor = Some(prop2_divisor(id.d_k, l)?);
                if let Some(n) = degree {
                    report.necessary_condition = Some(rt_necessary_condition(n, &field, l)?);
                }
            }
            report.note = "whether F(E[ℓ^∞])/F(μ_ℓ) is ℓ-powered is not decided here; \
                           the verdict above is a necessary condition only"
                .into();
        }
    }
    Ok(report)
}
