//! Coefficient rings for series arithmetic.
//!
//! A `Ring` value is a lightweight descriptor (the cyclotomic ring carries its
//! order ℓ); elements are plain values. Series code is generic over the ring,
//! mirroring how the three coefficient domains of the engine are used:
//! integers for combinatorial generating functions, rationals for the
//! eta-quotient identities, and Q(ζ_ℓ) for root-of-unity dissections.

use crate::cyclotomic::{CycloError, Cyclotomic};
use crate::number::{rat_is_integer, Int, Rat};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    /// Element has no inverse in this ring.
    NotInvertible(String),
    /// A rational constant cannot be represented (integer ring, non-integer value).
    NotRepresentable(String),
    /// ζ used outside a cyclotomic ring.
    NoRootOfUnity,
    Cyclo(CycloError),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NotInvertible(s) => write!(f, "not invertible: {}", s),
            RingError::NotRepresentable(s) => write!(f, "not representable: {}", s),
            RingError::NoRootOfUnity => write!(f, "root of unity in a non-cyclotomic ring"),
            RingError::Cyclo(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for RingError {}

impl From<CycloError> for RingError {
    fn from(e: CycloError) -> Self {
        RingError::Cyclo(e)
    }
}

#[allow(clippy::should_implement_trait, clippy::wrong_self_convention)]
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Fused multiply-add: `acc += a * b`.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let p = self.mul(a, b);
        self.add_assign(acc, &p);
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, RingError>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rat(&self, r: &Rat) -> Result<Self::Elem, RingError>;
    /// ζ_ℓ^k where applicable.
    fn zeta_power(&self, _k: i64) -> Result<Self::Elem, RingError> {
        Err(RingError::NoRootOfUnity)
    }
    fn describe(&self) -> String;
    fn format_elem(&self, a: &Self::Elem) -> String;
}

/// Z with arbitrary-precision elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = Int;

    fn zero(&self) -> Int {
        Int::zero()
    }
    fn one(&self) -> Int {
        Int::one()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        a + b
    }
    fn add_assign(&self, a: &mut Int, b: &Int) {
        *a += b;
    }
    fn neg(&self, a: &Int) -> Int {
        -a
    }
    fn sub(&self, a: &Int, b: &Int) -> Int {
        a - b
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        a * b
    }
    fn mul_add_assign(&self, acc: &mut Int, a: &Int, b: &Int) {
        *acc += a * b;
    }
    fn inv(&self, a: &Int) -> Result<Int, RingError> {
        if a.is_one() {
            Ok(Int::one())
        } else if (-a).is_one() {
            Ok(-Int::one())
        } else {
            Err(RingError::NotInvertible(format!("{} in Z", a)))
        }
    }
    fn from_i64(&self, n: i64) -> Int {
        Int::from(n)
    }
    fn from_rat(&self, r: &Rat) -> Result<Int, RingError> {
        if rat_is_integer(r) {
            Ok(r.numer().clone())
        } else {
            Err(RingError::NotRepresentable(format!("{} in Z", r)))
        }
    }
    fn describe(&self) -> String {
        "Z".into()
    }
    fn format_elem(&self, a: &Int) -> String {
        a.to_string()
    }
}

/// Q with arbitrary-precision elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRing;

impl Ring for RationalRing {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn add_assign(&self, a: &mut Rat, b: &Rat) {
        *a += b;
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn mul_add_assign(&self, acc: &mut Rat, a: &Rat, b: &Rat) {
        *acc += a * b;
    }
    fn inv(&self, a: &Rat) -> Result<Rat, RingError> {
        if a.is_zero() {
            Err(RingError::NotInvertible("0 in Q".into()))
        } else {
            Ok(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from_integer(Int::from(n))
    }
    fn from_rat(&self, r: &Rat) -> Result<Rat, RingError> {
        Ok(r.clone())
    }
    fn describe(&self) -> String {
        "Q".into()
    }
    fn format_elem(&self, a: &Rat) -> String {
        crate::number::rat_to_string(a)
    }
}

/// Q(ζ_ℓ) for a fixed prime ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    order: i64,
}

impl CyclotomicRing {
    pub fn new(order: i64) -> Result<CyclotomicRing, CycloError> {
        // delegate the primality check
        Cyclotomic::root_power(order, 1)?;
        Ok(CyclotomicRing { order })
    }

    pub fn order(&self) -> i64 {
        self.order
    }
}

impl Ring for CyclotomicRing {
    type Elem = Cyclotomic;

    fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(self.order)
    }
    fn one(&self) -> Cyclotomic {
        Cyclotomic::one(self.order)
    }
    fn is_zero(&self, a: &Cyclotomic) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.add(b).expect("ring-constructed elements share an order")
    }
    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        a.neg()
    }
    fn sub(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.sub(b).expect("ring-constructed elements share an order")
    }
    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a.mul(b).expect("ring-constructed elements share an order")
    }
    fn inv(&self, a: &Cyclotomic) -> Result<Cyclotomic, RingError> {
        Ok(a.inverse()?)
    }
    fn from_i64(&self, n: i64) -> Cyclotomic {
        Cyclotomic::from_rat(self.order, RationalRing.from_i64(n))
    }
    fn from_rat(&self, r: &Rat) -> Result<Cyclotomic, RingError> {
        Ok(Cyclotomic::from_rat(self.order, r.clone()))
    }
    fn zeta_power(&self, k: i64) -> Result<Cyclotomic, RingError> {
        Ok(Cyclotomic::root_power(self.order, k)?)
    }
    fn describe(&self) -> String {
        format!("Q(zeta_{})", self.order)
    }
    fn format_elem(&self, a: &Cyclotomic) -> String {
        a.to_string()
    }
}

/// Runtime ring tag used by the theorem registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingTag {
    Integer,
    Rational,
    Cyclotomic(i64),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integer => write!(f, "integer"),
            RingTag::Rational => write!(f, "rational"),
            RingTag::Cyclotomic(l) => write!(f, "cyclotomic({})", l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    #[test]
    fn integer_ring_inverses() {
        let r = IntegerRing;
        assert_eq!(r.inv(&r.from_i64(1)).unwrap(), r.from_i64(1));
        assert_eq!(r.inv(&r.from_i64(-1)).unwrap(), r.from_i64(-1));
        assert!(r.inv(&r.from_i64(2)).is_err());
        assert!(r.from_rat(&rat(1, 2)).is_err());
        assert_eq!(r.from_rat(&rat(6, 3)).unwrap(), r.from_i64(2));
    }

    #[test]
    fn cyclotomic_ring_basics() {
        let r = CyclotomicRing::new(5).unwrap();
        let z = r.zeta_power(1).unwrap();
        let z4 = r.zeta_power(4).unwrap();
        assert_eq!(r.mul(&z, &z4), r.one());
        assert!(CyclotomicRing::new(6).is_err());
        assert!(RationalRing.zeta_power(1).is_err());
    }
}
