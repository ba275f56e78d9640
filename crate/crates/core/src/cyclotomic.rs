//! Exact arithmetic in `Z[ζ]` (ζ a primitive 12th root of unity), its real
//! subring `Z[√3]`, and the residue field `F₉ = Z[ζ]/rZ[ζ]` where `r = ζ + ζ⁻¹`.
//!
//! Elements of `Z[ζ]` are stored in the power basis `1, ζ, ζ², ζ³` and reduced
//! with `ζ⁴ = ζ² − 1`. The numeric embedding used throughout the crate is
//! `ζ = e^{iπ/6}`, so that `r = +√3` and `ζ³ = i`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// An element `c0 + c1ζ + c2ζ² + c3ζ³` of `Z[ζ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycInt {
    pub c: [BigInt; 4],
}

impl CycInt {
    pub fn new<T: Into<BigInt>>(c0: T, c1: T, c2: T, c3: T) -> Self {
        CycInt {
            c: [c0.into(), c1.into(), c2.into(), c3.into()],
        }
    }

    pub fn from_i64s(c: [i64; 4]) -> Self {
        CycInt::new(c[0], c[1], c[2], c[3])
    }

    pub fn zero() -> Self {
        CycInt::default()
    }

    pub fn one() -> Self {
        CycInt::from_i64s([1, 0, 0, 0])
    }

    pub fn zeta() -> Self {
        CycInt::from_i64s([0, 1, 0, 0])
    }

    /// `r = ζ + ζ¹¹ = 2ζ − ζ³`, the positive square root of 3.
    pub fn r() -> Self {
        CycInt::from_i64s([0, 2, 0, -1])
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let mut x = CycInt::one();
        for _ in 0..k.rem_euclid(12) {
            x = x.mul_zeta();
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Multiplication by ζ, a coefficient shuffle:
    /// `ζ(c0 + c1ζ + c2ζ² + c3ζ³) = −c3 + c0ζ + (c1 + c3)ζ² + c2ζ³`.
    pub fn mul_zeta(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        CycInt {
            c: [-c3, c0.clone(), c1 + c3, c2.clone()],
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    ///
    /// With `ζ⁻¹ = ζ − ζ³`, `ζ⁻² = 1 − ζ²` and `ζ⁻³ = −ζ³` this is
    /// `(c0 + c2) + c1ζ − c2ζ² − (c1 + c3)ζ³`.
    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        CycInt {
            c: [c0 + c2, c1.clone(), -c2, -(c1 + c3)],
        }
    }

    /// `|x|² = P(x) + √3·Q(x)` with
    /// `P = a0² + a0a2 + a2² + a1² + a1a3 + a3²` and `Q = a0a1 + a1a2 + a2a3`.
    pub fn abs2(&self) -> QuadInt {
        let [a0, a1, a2, a3] = &self.c;
        let p = a0 * a0 + a0 * a2 + a2 * a2 + a1 * a1 + a1 * a3 + a3 * a3;
        let q = a0 * a1 + a1 * a2 + a2 * a3;
        QuadInt { a: p, b: q }
    }

    /// Value under the embedding `ζ = e^{iπ/6}`.
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, ck) in self.c.iter().enumerate() {
            let angle = std::f64::consts::PI * k as f64 / 6.0;
            acc += Complex64::from_polar(1.0, angle) * big_to_f64(ck);
        }
        acc
    }

    /// If `self = ζ^k` for some `k` in `0..12`, return it.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        let mut z = CycInt::one();
        for k in 0..12 {
            if &z == self {
                return Some(k);
            }
            z = z.mul_zeta();
        }
        None
    }

    /// The natural map `ρ: Z[ζ] → F₉` with `ρ(ζ) = i`.
    pub fn reduce_mod_r(&self) -> F9Elem {
        let [c0, c1, c2, c3] = &self.c;
        // ρ(ζ²) = −1, ρ(ζ³) = −i.
        F9Elem::new(mod3(&(c0 - c2)), mod3(&(c1 - c3)))
    }

    /// Largest coefficient magnitude, used to watch coefficient growth.
    pub fn height(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

fn mod3(x: &BigInt) -> u8 {
    x.rem_euclid(&BigInt::from(3))
        .to_u8()
        .expect("residue mod 3")
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]),
        }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        for k in 0..4 {
            self.c[k] += &rhs.c[k];
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]),
        }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: std::array::from_fn(|k| -&self.c[k]),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        if self.is_zero() || rhs.is_zero() {
            return CycInt::zero();
        }
        let mut d: [BigInt; 7] = Default::default();
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.c.iter().enumerate() {
                if !y.is_zero() {
                    d[i + j] += x * y;
                }
            }
        }
        // ζ⁴ = ζ² − 1, ζ⁵ = ζ³ − ζ, ζ⁶ = −1
        let [d0, d1, d2, d3, d4, d5, d6] = d;
        CycInt {
            c: [d0 - &d4 - d6, d1 - &d5, d2 + d4, d3 + d5],
        }
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.c;
        write!(f, "{c0} + {c1}*z + {c2}*z^2 + {c3}*z^3")
    }
}

/// An element `a + b√3` of `Z[√3]`, totally ordered through the real
/// embedding `√3 ≈ 1.732`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new<T: Into<BigInt>>(a: T, b: T) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int<T: Into<BigInt>>(a: T) -> Self {
        QuadInt {
            a: a.into(),
            b: BigInt::zero(),
        }
    }

    /// Exact sign of `a + b√3`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
            (Minus | NoSign, Minus | NoSign) => Ordering::Less,
            _ => {
                // Mixed signs: a² vs 3b² decides which term dominates.
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * 3;
                match a2.cmp(&b2) {
                    Ordering::Greater => {
                        if sa == Plus {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    }
                    Ordering::Less => {
                        if sb == Plus {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        }
                    }
                    // a² = 3b² with b ≠ 0 is impossible since √3 is irrational.
                    Ordering::Equal => unreachable!("a^2 = 3 b^2 with b != 0"),
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.a) + 3f64.sqrt() * big_to_f64(&self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn one() -> Self {
        QuadInt::from_int(1)
    }
}

/// Serialized as `{"a": .., "b": .., "decimal": ..}`; coefficients that do not
/// fit in an `i64` are written as decimal strings.
impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadInt", 3)?;
        match (self.a.to_i64(), self.b.to_i64()) {
            (Some(a), Some(b)) => {
                st.serialize_field("a", &a)?;
                st.serialize_field("b", &b)?;
            }
            _ => {
                st.serialize_field("a", &self.a.to_string())?;
                st.serialize_field("b", &self.b.to_string())?;
            }
        }
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

/// Exact comparison of `x` and `y` as real numbers.
pub fn quad_cmp(x: &QuadInt, y: &QuadInt) -> Ordering {
    (x - y).signum()
}

impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        quad_cmp(self, other)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        &self + &rhs
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        &self - &rhs
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a * &rhs.a + &self.b * &rhs.b * 3,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        &self * &rhs
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt3", self.a, self.b)
    }
}

/// An element `x + iy` of `F₉ = F₃(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F9Elem {
    pub x: u8,
    pub y: u8,
}

impl F9Elem {
    pub const ZERO: F9Elem = F9Elem { x: 0, y: 0 };
    pub const ONE: F9Elem = F9Elem { x: 1, y: 0 };
    pub const I: F9Elem = F9Elem { x: 0, y: 1 };

    pub fn new(x: u8, y: u8) -> Self {
        F9Elem { x: x % 3, y: y % 3 }
    }

    /// Parse from small signed integers, e.g. `(-1, 1)` for `i − 1`.
    pub fn from_ints(x: i64, y: i64) -> Self {
        F9Elem::new(x.rem_euclid(3) as u8, y.rem_euclid(3) as u8)
    }

    /// Frobenius `z ↦ z³`, which is `x + iy ↦ x − iy`.
    pub fn conj(self) -> Self {
        F9Elem::new(self.x, (3 - self.y) % 3)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // z⁻¹ = z⁷ since the unit group has order 8.
        let mut p = F9Elem::ONE;
        for _ in 0..7 {
            p = p * self;
        }
        Some(p)
    }
}

impl Add for F9Elem {
    type Output = F9Elem;
    fn add(self, rhs: F9Elem) -> F9Elem {
        F9Elem::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for F9Elem {
    type Output = F9Elem;
    fn sub(self, rhs: F9Elem) -> F9Elem {
        self + (-rhs)
    }
}

impl Neg for F9Elem {
    type Output = F9Elem;
    fn neg(self) -> F9Elem {
        F9Elem::new((3 - self.x) % 3, (3 - self.y) % 3)
    }
}

impl Mul for F9Elem {
    type Output = F9Elem;
    fn mul(self, rhs: F9Elem) -> F9Elem {
        // (x + iy)(x' + iy') = xx' − yy' + i(xy' + yx')
        let re = self.x * rhs.x + 2 * (self.y * rhs.y);
        let im = self.x * rhs.y + self.y * rhs.x;
        F9Elem::new(re, im)
    }
}

impl fmt::Display for F9Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |v: u8| match v {
            0 => "0",
            1 => "1",
            _ => "-1",
        };
        match (self.x, self.y) {
            (x, 0) => write!(f, "{}", sym(x)),
            (0, 1) => write!(f, "i"),
            (0, _) => write!(f, "-i"),
            (x, 1) => write!(f, "i{}", if x == 1 { "+1" } else { "-1" }),
            (x, _) => write!(f, "-i{}", if x == 1 { "+1" } else { "-1" }),
        }
    }
}

impl One for F9Elem {
    fn one() -> Self {
        F9Elem::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta_c() -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI / 6.0)
    }

    #[test]
    fn zeta_times_zeta_cubed_is_defining_relation() {
        let z3 = CycInt::zeta_pow(3);
        assert_eq!(&CycInt::zeta() * &z3, CycInt::from_i64s([-1, 0, 1, 0]));
    }

    #[test]
    fn one_is_identity() {
        let x = CycInt::from_i64s([3, -7, 2, 11]);
        assert_eq!(&CycInt::one() * &x, x);
    }

    #[test]
    fn r_squared_is_three() {
        // r = ζ + ζ¹¹; ζ¹¹ reduced independently by repeated multiplication.
        let r = &CycInt::zeta() + &CycInt::zeta_pow(11);
        assert_eq!(r, CycInt::r());
        assert_eq!(&r * &r, CycInt::from_i64s([3, 0, 0, 0]));
        assert!((r.to_complex() - Complex64::new(3f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn conj_of_zeta() {
        let c = CycInt::zeta().conj();
        assert_eq!(c, CycInt::from_i64s([0, 1, 0, -1]));
        assert_eq!(c, CycInt::zeta_pow(11));
        assert!((c.to_complex() - zeta_c().conj()).norm() < 1e-12);
        assert_eq!(CycInt::r().conj(), CycInt::r());
    }

    #[test]
    fn abs2_examples() {
        assert_eq!(CycInt::one().abs2(), QuadInt::new(1, 0));
        // b₃₃ = −ζ³ + ζ + 1
        assert_eq!(CycInt::from_i64s([1, 1, 0, -1]).abs2(), QuadInt::new(2, 1));
        let x = CycInt::from_i64s([1, 1, 0, 0]);
        assert_eq!(x.abs2(), QuadInt::new(2, 1));
        assert!((x.to_complex().norm_sqr() - 3.732_050_807_568_877).abs() < 1e-12);
    }

    #[test]
    fn quad_cmp_examples() {
        assert_eq!(
            quad_cmp(&QuadInt::new(2, 1), &QuadInt::new(4, 2)),
            Ordering::Less
        );
        assert_eq!(
            quad_cmp(&QuadInt::new(7, -4), &QuadInt::from_int(0)),
            Ordering::Greater
        );
        let x = QuadInt::new(-5, 3);
        assert_eq!(quad_cmp(&x, &x), Ordering::Equal);
        assert_eq!(QuadInt::new(-7, 4).signum(), Ordering::Less);
        assert_eq!(QuadInt::new(-6, 4).signum(), Ordering::Greater);
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(CycInt::zeta().reduce_mod_r(), F9Elem::I);
        assert_eq!(CycInt::r().reduce_mod_r(), F9Elem::ZERO);
        assert_eq!(CycInt::from_i64s([3, 0, 0, 0]).reduce_mod_r(), F9Elem::ZERO);
    }

    #[test]
    fn f9_field_axioms() {
        let all: Vec<F9Elem> = (0..3)
            .flat_map(|x| (0..3).map(move |y| F9Elem::new(x, y)))
            .collect();
        assert_eq!(F9Elem::I * F9Elem::I, -F9Elem::ONE);
        for &a in &all {
            if !a.is_zero() {
                assert_eq!(a * a.inv().unwrap(), F9Elem::ONE);
            }
            assert_eq!(a.conj().conj(), a);
            for &b in &all {
                assert_eq!((a * b).conj(), a.conj() * b.conj());
                for &c in &all {
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn display_formats() {
        assert_eq!(
            CycInt::from_i64s([1, -2, 0, 3]).to_string(),
            "1 + -2*z + 0*z^2 + 3*z^3"
        );
        assert_eq!(QuadInt::new(4, 2).to_string(), "4 + 2*sqrt3");
    }
}
