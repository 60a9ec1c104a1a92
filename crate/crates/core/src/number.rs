//! Scalar number types: arbitrary-precision integers and rationals, plus a
//! small machine-word rational used for series exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision signed integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always stored in lowest terms by `num-rational`.
pub type Rat = BigRational;

/// Build an `Int` from a machine integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Build a `Rat` from a numerator/denominator pair.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational with zero denominator");
    Rat::new(Int::from(num), Int::from(den))
}

/// Exact check that a `Rat` is an integer.
pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Exponent rational: a small exact fraction over `i64`, kept reduced with a
/// positive denominator. Series exponents never need big integers, but they
/// do need exact fractional values like 1/24 or -13/12.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    pub fn new(num: i64, den: i64) -> Frac {
        assert!(den != 0, "Frac with zero denominator");
        let g = gcd_i64(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Frac {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn from_int(n: i64) -> Frac {
        Frac { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Floor to an integer.
    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// Ceiling to an integer.
    pub fn ceil(&self) -> i64 {
        -((-self.num).div_euclid(self.den))
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac_part(&self) -> Frac {
        Frac::new(self.num.rem_euclid(self.den), self.den)
    }

    /// Numerator after rescaling onto a grid of denominator `den`.
    ///
    /// Panics if the value is not representable on that grid.
    pub fn on_grid(&self, den: i64) -> i64 {
        debug_assert!(den > 0);
        let q = den / self.den;
        assert!(
            q * self.den == den,
            "exponent {} not on 1/{} grid",
            self,
            den
        );
        self.num * q
    }

    pub fn scale_int(&self, k: i64) -> Frac {
        Frac::new(self.num * k, self.den)
    }

    pub fn to_rat(&self) -> Rat {
        rat(self.num, self.den)
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, other: Frac) -> Frac {
        Frac::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }
}

impl Sub for Frac {
    type Output = Frac;
    fn sub(self, other: Frac) -> Frac {
        Frac::new(self.num * other.den - other.num * self.den, self.den * other.den)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, other: Frac) -> Frac {
        Frac::new(self.num * other.num, self.den * other.den)
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> std::cmp::Ordering {
        // denominators are positive, so cross-multiplication preserves order
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn gcd_i64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    debug_assert!(a > 0 && b > 0);
    a / gcd_i64(a as u64, b as u64) as i64 * b
}

/// Render a `Rat` compactly (`3`, `-2/5`).
pub fn rat_to_string(r: &Rat) -> String {
    if rat_is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse an integer-or-fraction literal like `-2/3` or `7`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((a, b)) => {
            let num: Int = a.parse().ok()?;
            let den: Int = b.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rat::new(num, den))
        }
        None => {
            let num: Int = s.parse().ok()?;
            Some(Rat::from_integer(num))
        }
    }
}

/// `r^k` for integer `k` (negative allowed when `r != 0`).
pub fn rat_pow(r: &Rat, k: i64) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let base = if k < 0 {
        assert!(!r.is_zero(), "zero to a negative power");
        r.recip()
    } else {
        r.clone()
    };
    let mut acc = Rat::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Euclidean residue of an `Int` modulo a small positive integer.
pub fn int_mod(n: &Int, m: i64) -> i64 {
    use num_integer::Integer;
    let md = Int::from(m);
    let r = n.mod_floor(&md);
    // r is in [0, m)
    let digits = r.to_u64_digits();
    debug_assert!(!num_traits::Signed::is_negative(&r));
    if digits.1.is_empty() {
        0
    } else {
        digits.1[0] as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_reduction_and_order() {
        assert_eq!(Frac::new(2, 4), Frac::new(1, 2));
        assert_eq!(Frac::new(3, -6), Frac::new(-1, 2));
        assert!(Frac::new(-1, 2) < Frac::ZERO);
        assert!(Frac::new(5, 3) > Frac::new(3, 2));
        assert_eq!(Frac::new(7, 3).floor(), 2);
        assert_eq!(Frac::new(-7, 3).floor(), -3);
        assert_eq!(Frac::new(7, 3).ceil(), 3);
        assert_eq!(Frac::new(-7, 3).ceil(), -2);
        assert_eq!(Frac::new(-7, 3).frac_part(), Frac::new(2, 3));
    }

    #[test]
    fn frac_arithmetic() {
        let a = Frac::new(1, 6);
        let b = Frac::new(1, 4);
        assert_eq!(a + b, Frac::new(5, 12));
        assert_eq!(a - b, Frac::new(-1, 12));
        assert_eq!(a * b, Frac::new(1, 24));
        assert_eq!(Frac::new(5, 12).on_grid(24), 10);
    }

    #[test]
    fn rat_parsing() {
        assert_eq!(parse_rat("-2/3"), Some(rat(-2, 3)));
        assert_eq!(parse_rat("7"), Some(rat(7, 1)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn int_mod_euclidean() {
        assert_eq!(int_mod(&int(-1), 5), 4);
        assert_eq!(int_mod(&int(12), 5), 2);
        assert_eq!(int_mod(&int(0), 3), 0);
    }
}
