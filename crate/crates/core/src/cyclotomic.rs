//! Exact arithmetic in the cyclotomic field Q(ζ_ℓ) for prime ℓ.
//!
//! Elements are stored in the power basis {1, ζ, ..., ζ^{ℓ-2}} with ζ^{ℓ-1}
//! eliminated through the minimal polynomial 1 + ζ + ... + ζ^{ℓ-1} = 0. The
//! representation is canonical, so equality is coordinate-wise equality.

use crate::number::{rat_is_integer, Rat};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycloError {
    /// The requested order is not a prime ≥ 3.
    NonPrimeOrder(i64),
    /// Two operands live in fields of different order.
    OrderMismatch(i64, i64),
    /// Inversion of zero.
    DivisionByZero,
}

impl fmt::Display for CycloError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycloError::NonPrimeOrder(l) => write!(f, "order {} is not a prime >= 3", l),
            CycloError::OrderMismatch(a, b) => {
                write!(f, "cyclotomic order mismatch: {} vs {}", a, b)
            }
            CycloError::DivisionByZero => write!(f, "division by zero in Q(zeta)"),
        }
    }
}

impl std::error::Error for CycloError {}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of Q(ζ_ℓ) in the power basis, ℓ prime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: i64,
    /// Coordinates a_0 + a_1 ζ + ... + a_{ℓ-2} ζ^{ℓ-2}; length is order - 1.
    coords: Vec<Rat>,
}

impl Cyclotomic {
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    fn check_order(order: i64) -> Result<(), CycloError> {
        if order < 3 || !is_prime(order) {
            return Err(CycloError::NonPrimeOrder(order));
        }
        Ok(())
    }

    pub fn zero(order: i64) -> Cyclotomic {
        Cyclotomic {
            order,
            coords: vec![Rat::zero(); (order - 1) as usize],
        }
    }

    pub fn one(order: i64) -> Cyclotomic {
        Cyclotomic::from_rat(order, Rat::one())
    }

    pub fn from_rat(order: i64, r: Rat) -> Cyclotomic {
        let mut z = Cyclotomic::zero(order);
        z.coords[0] = r;
        z
    }

    /// ζ^k in canonical form, k reduced mod ℓ.
    pub fn root_power(order: i64, k: i64) -> Result<Cyclotomic, CycloError> {
        Self::check_order(order)?;
        let k = k.rem_euclid(order) as usize;
        let mut z = Cyclotomic::zero(order);
        if k as i64 == order - 1 {
            // zeta^{l-1} = -1 - zeta - ... - zeta^{l-2}
            for c in z.coords.iter_mut() {
                *c = -Rat::one();
            }
        } else {
            z.coords[k] = Rat::one();
        }
        Ok(z)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True if the element is a rational number (all ζ-coordinates vanish).
    pub fn rational_part(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// True if every coordinate is an integer, i.e. the element lies in `Z[zeta]`.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(rat_is_integer)
    }

    fn same_order(&self, other: &Cyclotomic) -> Result<(), CycloError> {
        if self.order != other.order {
            return Err(CycloError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.same_order(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyclotomic {
            order: self.order,
            coords,
        })
    }

    pub fn sub(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.same_order(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Cyclotomic {
            order: self.order,
            coords,
        })
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coords: self.coords.iter().map(|a| a * r).collect(),
        }
    }

    /// Exact product, reduced to the canonical basis.
    pub fn mul(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        self.same_order(other)?;
        let l = self.order as usize;
        // raw polynomial product, degrees 0 .. 2l-4
        let mut raw = vec![Rat::zero(); 2 * l - 3];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        // fold zeta^m for m >= l down by zeta^l = 1
        for m in (l..raw.len()).rev() {
            if !raw[m].is_zero() {
                let c = std::mem::replace(&mut raw[m], Rat::zero());
                raw[m - l] += c;
            }
        }
        // eliminate zeta^{l-1} via 1 + zeta + ... + zeta^{l-1} = 0
        let top = raw[l - 1].clone();
        let mut coords: Vec<Rat> = raw[..l - 1].to_vec();
        if !top.is_zero() {
            for c in coords.iter_mut() {
                *c -= &top;
            }
        }
        Ok(Cyclotomic {
            order: self.order,
            coords,
        })
    }

    /// Multiplicative inverse, solving the (ℓ-1)×(ℓ-1) linear system given by
    /// the multiplication-by-self matrix.
    pub fn inverse(&self) -> Result<Cyclotomic, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let n = (self.order - 1) as usize;
        // columns: self * zeta^j in the canonical basis
        let mut m = vec![vec![Rat::zero(); n + 1]; n];
        for j in 0..n {
            let col = self
                .mul(&Cyclotomic::root_power(self.order, j as i64).expect("valid order"))
                .expect("same order");
            for (row, value) in m.iter_mut().zip(&col.coords) {
                row[j] = value.clone();
            }
        }
        // right-hand side e_0 (the element 1)
        m[0][n] = Rat::one();
        // Gaussian elimination with exact pivoting
        let mut row = 0;
        let mut pivot_cols = Vec::with_capacity(n);
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row][col..].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = m[row].clone();
            for (r, mrow) in m.iter_mut().enumerate() {
                if r != row && !mrow[col].is_zero() {
                    let factor = mrow[col].clone();
                    for c in col..=n {
                        let sub = &pivot_row[c] * &factor;
                        mrow[c] -= sub;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        // the system is solvable since self != 0 in a field
        let mut coords = vec![Rat::zero(); n];
        for (r, &col) in pivot_cols.iter().enumerate() {
            coords[col] = m[r][n].clone();
        }
        let candidate = Cyclotomic {
            order: self.order,
            coords,
        };
        debug_assert!(self.mul(&candidate).unwrap() == Cyclotomic::one(self.order));
        Ok(candidate)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", c)?;
            } else if k == 1 {
                write!(f, "{}*z", c)?;
            } else {
                write!(f, "{}*z^{}", c, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// ζ_ℓ^k as a canonical element (spec-level entry point).
pub fn cyclo_from_root_power(order: i64, k: i64) -> Result<Cyclotomic, CycloError> {
    Cyclotomic::root_power(order, k)
}

/// Exact product of two elements of the same field.
pub fn cyclo_mul(a: &Cyclotomic, b: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
    a.mul(b)
}

/// Multiplicative inverse.
pub fn cyclo_inverse(a: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn zeta(l: i64, k: i64) -> Cyclotomic {
        Cyclotomic::root_power(l, k).unwrap()
    }

    #[test]
    fn root_power_reduction() {
        // zeta_3^2 = -1 - zeta
        let z2 = zeta(3, 2);
        assert_eq!(z2.coords(), &[rat(-1, 1), rat(-1, 1)]);
        // identity case
        assert_eq!(zeta(5, 0), Cyclotomic::one(5));
        // exponents reduce mod l
        assert_eq!(zeta(5, 7), zeta(5, 2));
        assert_eq!(zeta(5, -1), zeta(5, 4));
    }

    #[test]
    fn root_power_sum_reduces_by_phi() {
        // zeta_5 + zeta_5^4 = -1 - zeta^2 - zeta^3
        let s = zeta(5, 4).add(&zeta(5, 1)).unwrap();
        assert_eq!(
            s.coords(),
            &[rat(-1, 1), rat(0, 1), rat(-1, 1), rat(-1, 1)]
        );
    }

    #[test]
    fn non_prime_order_rejected() {
        assert_eq!(
            Cyclotomic::root_power(4, 1),
            Err(CycloError::NonPrimeOrder(4))
        );
        assert_eq!(
            Cyclotomic::root_power(1, 0),
            Err(CycloError::NonPrimeOrder(1))
        );
    }

    #[test]
    fn mul_examples() {
        // (1 + zeta)^2 = zeta in Q(zeta_3)
        let x = Cyclotomic::one(3).add(&zeta(3, 1)).unwrap();
        assert_eq!(x.mul(&x).unwrap(), zeta(3, 1));
        // x * 1 = x
        let y = zeta(5, 3).scale(&rat(7, 2));
        assert_eq!(y.mul(&Cyclotomic::one(5)).unwrap(), y);
        // order mismatch is an error
        assert_eq!(
            zeta(3, 1).mul(&zeta(5, 1)),
            Err(CycloError::OrderMismatch(3, 5))
        );
    }

    /// Oracle: naive polynomial multiplication mod x^l - 1 followed by a
    /// separate Phi_l reduction, independent of `Cyclotomic::mul`.
    fn oracle_product(l: usize, polys: &[Vec<i64>]) -> Vec<Rat> {
        let mut acc = vec![0i64; l];
        acc[0] = 1;
        for p in polys {
            let mut next = vec![0i64; l];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in p.iter().enumerate() {
                    next[(i + j) % l] += a * b;
                }
            }
            acc = next;
        }
        // Phi_l reduction: subtract acc[l-1] from every coordinate
        let top = acc[l - 1];
        (0..l - 1).map(|i| rat(acc[i] - top, 1)).collect()
    }

    #[test]
    fn norm_of_one_minus_zeta_is_five() {
        // (1-zeta)(1-zeta^2)(1-zeta^3)(1-zeta^4) = 5 for l = 5
        let mut prod = Cyclotomic::one(5);
        for k in 1..5 {
            let f = Cyclotomic::one(5).sub(&zeta(5, k)).unwrap();
            prod = prod.mul(&f).unwrap();
        }
        assert_eq!(prod, Cyclotomic::from_rat(5, rat(5, 1)));

        // cross-check against the independent polynomial oracle
        let polys: Vec<Vec<i64>> = (1..5)
            .map(|k| {
                let mut p = vec![0i64; 5];
                p[0] = 1;
                p[k] -= 1;
                p
            })
            .collect();
        assert_eq!(prod.coords(), &oracle_product(5, &polys)[..]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            Cyclotomic::one(7).inverse().unwrap(),
            Cyclotomic::one(7)
        );
        // (1 - zeta_3)(1 - zeta_3^{-1}) = 3, so its inverse is 1/3
        let a = Cyclotomic::one(3).sub(&zeta(3, 1)).unwrap();
        let b = Cyclotomic::one(3).sub(&zeta(3, -1)).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, Cyclotomic::from_rat(3, rat(3, 1)));
        assert_eq!(
            prod.inverse().unwrap(),
            Cyclotomic::from_rat(3, rat(1, 3))
        );
        assert_eq!(
            Cyclotomic::zero(5).inverse(),
            Err(CycloError::DivisionByZero)
        );
    }

    #[test]
    fn phi_sum_vanishes() {
        for l in [3i64, 5, 7] {
            let mut s = Cyclotomic::zero(l);
            for k in 0..l {
                s = s.add(&zeta(l, k)).unwrap();
            }
            assert!(s.is_zero(), "sum of all zeta_{}^k must vanish", l);
        }
    }

    #[test]
    fn conjugate_roots_multiply_to_one() {
        for l in [3i64, 5, 7] {
            for k in 1..l {
                let p = zeta(l, k).mul(&zeta(l, l - k)).unwrap();
                assert_eq!(p, Cyclotomic::one(l));
            }
        }
    }

    #[test]
    fn randomized_inverse_roundtrip() {
        // small deterministic pseudo-random elements
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 11) as i64 - 5
        };
        for l in [3i64, 5, 7] {
            for _ in 0..20 {
                let mut a = Cyclotomic::zero(l);
                for k in 0..(l - 1) {
                    let c = rat(next(), 1 + next().abs());
                    a = a
                        .add(&zeta(l, k).scale(&c))
                        .unwrap();
                }
                if a.is_zero() {
                    continue;
                }
                let inv = a.inverse().unwrap();
                assert_eq!(a.mul(&inv).unwrap(), Cyclotomic::one(l));
            }
        }
    }
}
